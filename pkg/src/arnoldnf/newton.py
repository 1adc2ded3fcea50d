"""Newton polygon analysis for plane curve germs.

The polygon of a two variable polynomial is the lower left convex chain
of its exponent support.  Each face carries a primitive integer weight
vector under which the face monomials are the terms of lowest weighted
degree.  Restricting to one face and factoring out the axis powers
leaves a univariate polynomial; its squarefree structure decides whether
the face is degenerate and, if so, which repeated factor to straighten.

Univariate polynomials over a radical tower are handled here as
ascending coefficient lists.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import PipelineError
from .poly import SparsePoly
from .scalars import adjoin_root, from_rational

# -- univariate polynomials over a tower -----------------------------


def uni_make(coeffs):
    out = [c if hasattr(c, "is_zero") else from_rational(c) for c in coeffs]
    while out and out[-1].is_zero():
        out.pop()
    return out


def uni_degree(f):
    return len(f) - 1


def uni_is_zero(f):
    return not f


def uni_diff(f):
    return uni_make([c * k for k, c in enumerate(f)][1:])


def uni_eval(f, value):
    acc = from_rational(0)
    for c in reversed(f):
        acc = acc * value + c
    return acc


def uni_scale(f, s):
    return uni_make([c * s for c in f])


def uni_sub(f, g):
    n = max(len(f), len(g))
    out = []
    for k in range(n):
        a = f[k] if k < len(f) else from_rational(0)
        b = g[k] if k < len(g) else from_rational(0)
        out.append(a - b)
    return uni_make(out)


def uni_mul(f, g):
    if not f or not g:
        return []
    out = [from_rational(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return uni_make(out)


def uni_monic(f):
    if not f:
        return f
    lead = f[-1]
    if lead == 1:
        return f
    return [c / lead for c in f]


def uni_divmod(f, g):
    if not g:
        raise ZeroDivisionError("univariate division by zero")
    rem = list(f)
    quot = [from_rational(0)] * max(len(f) - len(g) + 1, 0)
    while len(rem) >= len(g) and rem:
        if rem[-1].is_zero():
            rem.pop()
            continue
        shift = len(rem) - len(g)
        factor = rem[-1] / g[-1]
        quot[shift] = factor
        for k in range(len(g)):
            rem[shift + k] = rem[shift + k] - factor * g[k]
        rem.pop()
    return uni_make(quot), uni_make(rem)


def uni_gcd(f, g):
    a, b = uni_make(f), uni_make(g)
    while b:
        _, r = uni_divmod(a, b)
        a, b = b, r
    return uni_monic(a)


def uni_squarefree(f):
    return uni_degree(uni_gcd(f, uni_diff(f))) <= 0


def uni_yun(f):
    """Squarefree decomposition: list of (monic block, multiplicity),
    multiplicities increasing, product of block**mult recovering f up to
    a constant."""
    f = uni_monic(uni_make(f))
    if uni_degree(f) <= 0:
        return []
    fp = uni_diff(f)
    a = uni_gcd(f, fp)
    b, _ = uni_divmod(f, a)
    c, _ = uni_divmod(fp, a)
    d = uni_sub(c, uni_diff(b))
    out = []
    i = 1
    while uni_degree(b) > 0:
        p = uni_gcd(b, d)
        if uni_degree(p) > 0:
            out.append((p, i))
        b, _ = uni_divmod(b, p)
        c, _ = uni_divmod(d, p)
        d = uni_sub(c, uni_diff(b))
        i += 1
    return out


# -- rational root search --------------------------------------------


def _divisors(n):
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(coeffs):
    """All rational roots of a polynomial with rational coefficients."""
    coeffs = uni_make(coeffs)
    if not all(c.is_rational() for c in coeffs):
        raise ValueError("rational root search needs rational coefficients")
    fracs = [c.as_fraction() for c in coeffs]
    roots = []
    while fracs and fracs[0] == 0:
        if 0 not in roots:
            roots.append(Fraction(0))
        fracs = fracs[1:]
    if len(fracs) <= 1:
        return sorted(roots)
    den = math.lcm(*[f.denominator for f in fracs])
    ints = [int(f * den) for f in fracs]
    lead, const = ints[-1], ints[0]
    seen = set(roots)
    for a in _divisors(const):
        for b in _divisors(lead):
            for cand in (Fraction(a, b), Fraction(-a, b)):
                if cand in seen:
                    continue
                value = Fraction(0)
                for c in reversed(ints):
                    value = value * cand + c
                if value == 0:
                    seen.add(cand)
                    roots.append(cand)
    return sorted(set(roots))


# -- radical roots of low degree polynomials -------------------------


def quadratic_roots(tower, a, b, c):
    """Both roots of a*z**2 + b*z + c over a radical extension.

    Returns (tower2, [root1, root2]); the tower grows only when the
    discriminant is not a square in it.
    """
    disc = b * b - 4 * a * c
    if disc.is_zero():
        r = -b / (2 * a)
        return tower, [r, r]
    tower2, s = adjoin_root(tower, 2, disc)
    r1 = (-b + s) / (2 * a)
    r2 = (-b - s) / (2 * a)
    return tower2, [r1, r2]


def cubic_root(tower, coeffs):
    """One exact root of a cubic, preferring rational roots.

    `coeffs` lists the coefficients of c0 + c1 z + c2 z**2 + c3 z**3 with
    c3 nonzero.  Returns (tower2, root).
    """
    coeffs = uni_make(coeffs)
    if uni_degree(coeffs) != 3:
        raise ValueError("cubic_root expects degree exactly 3")
    monic = uni_monic(coeffs)
    if all(c.is_rational() for c in monic):
        rats = rational_roots(monic)
        if rats:
            return tower, from_rational(rats[0])
    c0, c1, c2, _ = monic
    shift = c2 / 3
    p = c1 - c2 * c2 / 3
    q = c0 - c1 * c2 / 3 + 2 * (c2 ** 3) / 27
    if p.is_zero() and q.is_zero():
        return tower, -shift
    radicand = q * q / 4 + (p ** 3) / 27
    if radicand.is_zero():
        s = from_rational(0)
    else:
        tower, s = adjoin_root(tower, 2, radicand)
    ucube = q / (-2) + s
    if ucube.is_zero():
        ucube = q / (-2) - s
    tower, u = adjoin_root(tower, 3, ucube)
    root = u - p / (3 * u) - shift
    check = uni_eval(monic, root)
    if not check.is_zero():
        raise PipelineError("cubic root construction failed its own check")
    return tower, root


# -- polygon ---------------------------------------------------------


def pareto_minimal(points):
    pts = sorted(set(points))
    out = []
    for p in pts:
        if not any(
            q != p and q[0] <= p[0] and q[1] <= p[1] for q in pts
        ):
            out.append(p)
    return out


def _chain(points):
    """Lower left convex chain through the Pareto minimal points,
    ordered by increasing first coordinate."""
    pts = sorted(pareto_minimal(points))
    chain = []
    for p in pts:
        while len(chain) >= 2:
            a, b = chain[-2], chain[-1]
            cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            if cross <= 0:
                chain.pop()
            else:
                break
        chain.append(p)
    return chain


class Face:
    """One compact face of a Newton polygon.

    `a` is the endpoint nearer the y axis (smaller first coordinate),
    `b` the one nearer the x axis.  `weight` is the primitive integer
    normal and `degree` the common weighted degree of the face points.
    """

    __slots__ = ("a", "b", "weight", "degree")

    def __init__(self, a, b):
        self.a = a
        self.b = b
        di = b[0] - a[0]
        dj = a[1] - b[1]
        g = math.gcd(di, dj)
        self.weight = (dj // g, di // g)
        self.degree = self.weight[0] * a[0] + self.weight[1] * a[1]

    def on_line(self, exps):
        return self.weight[0] * exps[0] + self.weight[1] * exps[1] == self.degree

    def __repr__(self):
        return f"Face({self.a}-{self.b}, w={self.weight})"


class Polygon:
    __slots__ = ("vertices", "faces")

    def __init__(self, vertices):
        self.vertices = vertices
        self.faces = [
            Face(vertices[k], vertices[k + 1]) for k in range(len(vertices) - 1)
        ]

    def __repr__(self):
        return f"Polygon({self.vertices})"


def newton_polygon(f):
    """Polygon of a nonzero two variable polynomial; vertices run from
    the y axis side to the x axis side."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no Newton polygon")
    chain = _chain(list(f.terms))
    return Polygon(chain)


def face_jet(f, face):
    wx, wy = face.weight
    d = face.degree
    return SparsePoly(
        f.vars,
        {e: c for e, c in f.terms.items() if wx * e[0] + wy * e[1] == d},
    )


def face_span_points(face):
    """All lattice points with nonnegative coordinates on the face line."""
    wx, wy = face.weight
    d = face.degree
    pts = []
    for i in range(d // wx + 1):
        rest = d - wx * i
        if rest % wy == 0:
            pts.append((i, rest // wy))
    return pts


def span_key(face):
    """(x side end, y side end) of the full lattice segment of the face
    line; the pair identifies the line among the catalog gradings."""
    pts = face_span_points(face)
    return pts[-1], pts[0]


def two_face_grading(face1, face2):
    """Common grading for two adjacent faces.

    Scales both weight vectors to share a degree and returns
    (weights, degree, span points), where the span points are the
    lattice points of weighted degree exactly `degree` under the
    piecewise minimum.
    """
    d1, d2 = face1.degree, face2.degree
    common = math.lcm(d1, d2)
    w1 = tuple(v * (common // d1) for v in face1.weight)
    w2 = tuple(v * (common // d2) for v in face2.weight)
    weights = (w1, w2)
    pts = set()
    for w_on, w_other in ((w1, w2), (w2, w1)):
        for i in range(common // w_on[0] + 1):
            rest = common - w_on[0] * i
            if rest % w_on[1]:
                continue
            j = rest // w_on[1]
            if w_other[0] * i + w_other[1] * j >= common:
                pts.add((i, j))
    return weights, common, sorted(pts)


# -- face structure --------------------------------------------------


def face_decompose(g, face):
    """Write a face jet as x**a * y**b * H and dehomogenize H.

    Returns (a, b, h) where h is the univariate coefficient list of H
    along the face direction: H = sum h[k] x**(k*wy) y**((n-k)*wx).
    """
    if g.is_zero():
        raise ValueError("cannot decompose the zero polynomial")
    wx, wy = face.weight
    a = min(e[0] for e in g.terms)
    b = min(e[1] for e in g.terms)
    top = max(e[0] for e in g.terms)
    nu, rem = divmod(top - a, wy)
    if rem:
        raise PipelineError("face jet support is not aligned with the face")
    coeffs = [from_rational(0)] * (nu + 1)
    for (i, j), c in g.terms.items():
        k, rem = divmod(i - a, wy)
        if rem or j != b + (nu - k) * wx:
            raise PipelineError("face jet support is not aligned with the face")
        coeffs[k] = c
    return a, b, uni_make(coeffs)


def face_compose(vars, a, b, h, face):
    """Inverse of `face_decompose` for a coefficient list of length n+1."""
    wx, wy = face.weight
    nu = len(h) - 1
    terms = {}
    for k, c in enumerate(h):
        if not c.is_zero():
            terms[(a + k * wy, b + (nu - k) * wx)] = c
    return SparsePoly(tuple(vars), terms)


def face_nondegenerate(g, face):
    """True when the face jet has no repeated factor besides axis powers."""
    _, _, h = face_decompose(g, face)
    return uni_squarefree(h)


def jet_squarefree(g, face):
    """True when the face jet is squarefree as a polynomial."""
    a, b, h = face_decompose(g, face)
    return a <= 1 and b <= 1 and uni_squarefree(h)


def repeated_factor(g, face):
    """The product of all factors of maximal multiplicity in a face jet.

    Returns (factor, multiplicity); multiplicity 1 means the jet is
    squarefree and the factor is not meaningful.
    """
    a, b, h = face_decompose(g, face)
    vars = g.vars
    candidates = []
    if a:
        candidates.append((SparsePoly.variable(vars, vars[0]), a))
    if b:
        candidates.append((SparsePoly.variable(vars, vars[1]), b))
    for block, mult in uni_yun(h):
        piece = face_compose(vars, 0, 0, block, face)
        candidates.append((piece, mult))
    if not candidates:
        return SparsePoly.constant(vars, 1), 1
    best = max(m for _, m in candidates)
    product = SparsePoly.constant(vars, 1)
    for p, m in candidates:
        if m == best:
            product = product * p
    return product, best
