"""Exact arithmetic in radical extension towers of the rationals.

A tower is a chain Q = K_0 < K_1 < ... < K_h where each step adjoins a
single radical: K_{i+1} = K_i(g_i) with g_i**n_i equal to a chosen
nonzero radicand in K_i.  Elements are dense coordinate vectors over the
product basis g_0**e_0 * ... * g_{h-1}**e_{h-1}, 0 <= e_i < n_i, so the
zero test and equality are exact coordinate checks.

`adjoin_root` reuses radicals already present in the tower whenever it
can spot them, so the common rescaling steps do not grow the tower
needlessly.  It does not prove irreducibility of what it adjoins; a
defective step would surface later as a non-invertible nonzero element,
reported as `PipelineError`.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .errors import PipelineError

_ZERO = Fraction(0)
_ONE = Fraction(1)


def integer_nth_root(a, n):
    """Exact n-th root of a nonnegative integer, or None."""
    if a < 0:
        return None
    if a in (0, 1):
        return a
    x = 1 << -(-a.bit_length() // n)
    while True:
        y = ((n - 1) * x + a // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    return x if x ** n == a else None


def rational_nth_root(q, n):
    """Exact n-th root of a Fraction, or None if there is none in Q."""
    q = Fraction(q)
    if q == 0:
        return _ZERO
    if q < 0:
        if n % 2 == 0:
            return None
        r = rational_nth_root(-q, n)
        return None if r is None else -r
    num = integer_nth_root(q.numerator, n)
    den = integer_nth_root(q.denominator, n)
    if num is None or den is None:
        return None
    return Fraction(num, den)


class FieldTower:
    """A radical extension tower of Q, described by its adjunction steps.

    `levels` is a tuple of (n, radicand) pairs; the radicand of step i is
    an AlgebraicScalar over the tower formed by the steps before it.
    Towers compare structurally, so two towers built by the same steps
    are interchangeable.
    """

    __slots__ = ("levels", "degree", "strides", "_key", "_hash")

    def __init__(self, levels=()):
        levels = tuple(levels)
        strides = []
        deg = 1
        for n, _ in levels:
            strides.append(deg)
            deg *= n
        self.levels = levels
        self.degree = deg
        self.strides = tuple(strides)
        self._key = tuple((n, rad.tower._key, rad.coords) for n, rad in levels)
        self._hash = hash(self._key)

    @property
    def height(self):
        return len(self.levels)

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.levels:
            return "FieldTower(Q)"
        return f"FieldTower(Q, {self.height} radicals, degree {self.degree})"

    def is_prefix_of(self, other):
        h = self.height
        return other.height >= h and other._key[:h] == self._key

    def prefix(self, k):
        if k == self.height:
            return self
        return FieldTower(self.levels[:k])

    def extended(self, n, radicand):
        """Tower with one more level; `radicand` must live in this tower."""
        return FieldTower(self.levels + ((n, radicand),))

    def generator(self, i):
        """The adjoined radical of level i, as a scalar."""
        sub = self.prefix(i + 1)
        coords = [_ZERO] * sub.degree
        coords[sub.strides[i]] = _ONE
        return AlgebraicScalar(sub, tuple(coords))

    def embed(self, value):
        """Coerce an int, Fraction, or compatible scalar for use alongside
        elements of this tower."""
        if isinstance(value, AlgebraicScalar):
            if value.tower.is_prefix_of(self):
                return value
            raise ValueError("scalar does not live in this tower")
        if isinstance(value, (int, Fraction)):
            return from_rational(value)
        raise TypeError(f"cannot embed {type(value).__name__} into a field tower")

    def exps_of(self, index):
        return tuple(
            (index // self.strides[i]) % self.levels[i][0] for i in range(self.height)
        )


QQ = FieldTower()


class AlgebraicScalar:
    """An element of a radical tower, kept over the shortest prefix tower
    that can express it.  Arithmetic between scalars over different
    prefixes of a common tower promotes to the deeper one on the fly."""

    __slots__ = ("tower", "coords")

    def __init__(self, tower, coords):
        self.tower = tower
        self.coords = coords

    @classmethod
    def make(cls, tower, coords):
        """Normalize: fractionize coordinates and drop unused top levels."""
        coords = [Fraction(c) for c in coords]
        levels = list(tower.levels)
        while levels:
            width = len(coords) // levels[-1][0]
            if any(coords[width:]):
                break
            del coords[width:]
            levels.pop()
        if len(levels) != tower.height:
            tower = FieldTower(levels)
        return cls(tower, tuple(coords))

    # -- structure ---------------------------------------------------

    def is_zero(self):
        return not any(self.coords)

    def is_rational(self):
        return self.tower.height == 0

    def as_fraction(self):
        if self.tower.height != 0:
            raise ValueError("scalar is not rational")
        return self.coords[0]

    def iter_terms(self):
        """Yield (exponent tuple, Fraction) for each nonzero coordinate."""
        for idx, c in enumerate(self.coords):
            if c:
                yield self.tower.exps_of(idx), c

    def promoted(self, tower):
        """The same value written over a deeper compatible tower."""
        if self.tower.height == tower.height:
            return self
        pad = tower.degree - len(self.coords)
        return AlgebraicScalar(tower, self.coords + (_ZERO,) * pad)

    def __bool__(self):
        return any(self.coords)

    def __hash__(self):
        return hash((self.tower, self.coords))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.tower.height == 0 and self.coords[0] == other
        if not isinstance(other, AlgebraicScalar):
            return NotImplemented
        return self.tower == other.tower and self.coords == other.coords

    def __repr__(self):
        return f"AlgebraicScalar({format_scalar(self)})"

    # -- arithmetic --------------------------------------------------

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = from_rational(other)
        elif not isinstance(other, AlgebraicScalar):
            return None
        if self.tower.is_prefix_of(other.tower):
            t = other.tower
        elif other.tower.is_prefix_of(self.tower):
            t = self.tower
        else:
            raise ValueError("scalars live in incompatible extension towers")
        return self.promoted(t), other.promoted(t)

    def __add__(self, other):
        if (
            type(other) is AlgebraicScalar
            and not self.tower.levels
            and not other.tower.levels
        ):
            return AlgebraicScalar(self.tower, (self.coords[0] + other.coords[0],))
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return AlgebraicScalar.make(
            a.tower, [x + y for x, y in zip(a.coords, b.coords)]
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicScalar(self.tower, tuple(-c for c in self.coords))

    def __sub__(self, other):
        if (
            type(other) is AlgebraicScalar
            and not self.tower.levels
            and not other.tower.levels
        ):
            return AlgebraicScalar(self.tower, (self.coords[0] - other.coords[0],))
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return AlgebraicScalar.make(
            a.tower, [x - y for x, y in zip(a.coords, b.coords)]
        )

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if (
            type(other) is AlgebraicScalar
            and not self.tower.levels
            and not other.tower.levels
        ):
            return AlgebraicScalar(self.tower, (self.coords[0] * other.coords[0],))
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if a.tower.height == 0:
            c = a.coords[0]
            if not c:
                return from_rational(0)
            return AlgebraicScalar.make(b.tower, [c * y for y in b.coords])
        if all(not c for c in b.coords[1:]):
            c = b.coords[0]
            if not c:
                return from_rational(0)
            return AlgebraicScalar.make(a.tower, [x * c for x in a.coords])
        tower = a.tower
        raw = {}
        for ea, ca in a.iter_terms():
            for eb, cb in b.iter_terms():
                e = tuple(x + y for x, y in zip(ea, eb))
                raw[e] = raw.get(e, _ZERO) + ca * cb
        reduced = _reduce_terms(tower, raw)
        coords = [_ZERO] * tower.degree
        for exps, c in reduced.items():
            if c:
                coords[_index_of(tower, exps)] += c
        return AlgebraicScalar.make(tower, coords)

    __rmul__ = __mul__

    def inverted(self):
        if self.tower.height == 0:
            if not self.coords[0]:
                raise ZeroDivisionError("division by zero scalar")
            return from_rational(1 / self.coords[0])
        tower = self.tower
        d = tower.degree
        cols = []
        for j in range(d):
            basis = AlgebraicScalar(
                tower, tuple(_ONE if i == j else _ZERO for i in range(d))
            )
            cols.append((self * basis).promoted(tower).coords)
        rows = [[cols[j][i] for j in range(d)] for i in range(d)]
        rhs = [_ONE] + [_ZERO] * (d - 1)
        sol = _solve_square(rows, rhs)
        if sol is None:
            if self.is_zero():
                raise ZeroDivisionError("division by zero scalar")
            raise PipelineError(
                "defective tower: nonzero scalar has no inverse"
            )
        return AlgebraicScalar.make(tower, sol)

    def __truediv__(self, other):
        if (
            type(other) is AlgebraicScalar
            and not self.tower.levels
            and not other.tower.levels
        ):
            if not other.coords[0]:
                raise ZeroDivisionError("division by zero scalar")
            return AlgebraicScalar(self.tower, (self.coords[0] / other.coords[0],))
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if all(not c for c in b.coords[1:]):
            c = b.coords[0]
            if not c:
                raise ZeroDivisionError("division by zero scalar")
            return AlgebraicScalar.make(a.tower, [x / c for x in a.coords])
        return a * b.inverted()

    def __rtruediv__(self, other):
        return from_rational(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverted() ** (-k)
        if self.tower.height == 0:
            return from_rational(self.coords[0] ** k)
        result = from_rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result


def from_rational(q):
    return AlgebraicScalar(QQ, (Fraction(q),))


def _index_of(tower, exps):
    return sum(e * s for e, s in zip(exps, tower.strides))


def _reduce_terms(tower, terms):
    """Fold exponent overflow level by level, top level first.

    Replacing g_i**n_i by its radicand only touches levels below i, so a
    single downward sweep leaves every exponent in range.
    """
    for lev in range(tower.height - 1, -1, -1):
        n, rad = tower.levels[lev]
        folded = {}
        for exps, c in terms.items():
            e = exps[lev]
            if e < n:
                folded[exps] = folded.get(exps, _ZERO) + c
                continue
            k, rem = divmod(e, n)
            base = list(exps)
            base[lev] = rem
            for pexps, pc in (rad ** k).iter_terms():
                ne = list(base)
                for j, pe in enumerate(pexps):
                    ne[j] += pe
                key = tuple(ne)
                folded[key] = folded.get(key, _ZERO) + c * pc
        terms = folded
    return terms


def _solve_square(rows, rhs):
    """Gaussian elimination over Fraction; None if the matrix is singular."""
    d = len(rows)
    m = [list(rows[i]) + [rhs[i]] for i in range(d)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if m[r][col]), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(d):
            if r != col and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [m[i][d] for i in range(d)]


# -- adjunction ------------------------------------------------------


def _root_in_tower(tower, n, r):
    """An n-th root of r among rational multiples of basis monomials, or
    None.  Never extends the tower."""
    if r.is_rational():
        root = rational_nth_root(r.as_fraction(), n)
        if root is not None:
            return from_rational(root)
    for idx in range(1, tower.degree):
        exps = tower.exps_of(idx)
        coords = [_ZERO] * tower.degree
        coords[idx] = _ONE
        mono = AlgebraicScalar.make(tower, coords)
        power = (mono ** n).promoted(tower)
        try:
            ratio = r.promoted(tower) / power
        except (ZeroDivisionError, PipelineError):
            continue
        if not ratio.is_rational():
            continue
        c = rational_nth_root(ratio.as_fraction(), n)
        if c is not None:
            return mono * c
    return None


def _proper_divisors_desc(n):
    divs = [d for d in range(2, n) if n % d == 0]
    divs.sort(reverse=True)
    return divs


def adjoin_root(tower, n, radicand):
    """Return (tower2, root) with root**n == radicand and tower a prefix
    of tower2.  The tower is reused untouched whenever a root already
    exists among rational multiples of its basis monomials, and composite
    exponents are split so that only genuinely new radicals are adjoined.
    """
    r = tower.embed(radicand)
    if r.is_zero():
        raise ValueError("cannot adjoin a root of zero")
    if n == 1:
        return tower, r
    found = _root_in_tower(tower, n, r)
    if found is not None:
        return tower, found
    for m in _proper_divisors_desc(n):
        rho = _root_in_tower(tower, m, r)
        if rho is not None:
            return adjoin_root(tower, n // m, rho)
    if n % 4 == 0:
        # x**n - r factors rationally when r == -4*c**4; the root c*(1+i)
        # keeps the degree down once i is adjoined.
        quarter = _root_in_tower(tower, 4, from_rational(-1) * r / 4)
        if quarter is not None and not quarter.is_zero():
            tower2, i_unit = adjoin_root(tower, 2, -1)
            rho = quarter.promoted(tower2) * (i_unit + 1)
            if n == 4:
                return tower2, rho
            return adjoin_root(tower2, n // 4, rho)
    new_tower = tower.extended(n, r)
    return new_tower, new_tower.generator(new_tower.height - 1)


# -- numeric embedding ----------------------------------------------


def _principal_root(v, n):
    if isinstance(v, mpmath.mpc):
        if v.imag == 0:
            v = v.real
        else:
            return mpmath.root(v, n)
    if v >= 0:
        return mpmath.root(v, n)
    if n % 2 == 1:
        return -mpmath.root(-v, n)
    return mpmath.root(mpmath.mpc(v), n)


def _numeric(scalar, gens):
    total = mpmath.mpf(0)
    for exps, c in scalar.iter_terms():
        term = mpmath.mpf(c.numerator) / c.denominator
        for g, e in zip(gens, exps):
            if e:
                term = term * g ** e
        total = total + term
    return total


def _numeric_generators(tower):
    gens = []
    for n, rad in tower.levels:
        gens.append(_principal_root(_numeric(rad, gens), n))
    return gens


def _truncate_decimal(value, digits):
    """Decimal string of `value` cut toward zero after `digits` places."""
    negative = value < 0
    scaled = int(mpmath.floor(abs(value) * mpmath.mpf(10) ** digits))
    sign = "-" if negative and scaled else ""
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _truncate_fraction(q, digits):
    negative = q < 0
    scaled = (abs(q.numerator) * 10 ** digits) // q.denominator
    sign = "-" if negative and scaled else ""
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def approximate(scalar, digits):
    """Decimal approximation with `digits` places, truncated toward zero.

    Rational values are cut exactly; irrational ones go through interval
    refinement until two working precisions agree on the printed string.
    A complex value prints as "<re>+<im>*i" (or with "-"), dropping the
    imaginary half when it truncates to zero.
    """
    if isinstance(scalar, (int, Fraction)):
        return _truncate_fraction(Fraction(scalar), digits)
    if scalar.is_rational():
        return _truncate_fraction(scalar.as_fraction(), digits)
    prev = None
    prec = 120
    while prec <= 1 << 18:
        with mpmath.workprec(prec):
            gens = _numeric_generators(scalar.tower)
            v = _numeric(scalar, gens)
            if isinstance(v, mpmath.mpc):
                re_s = _truncate_decimal(v.real, digits)
                im_s = _truncate_decimal(abs(v.imag), digits)
                if set(im_s) <= {"0", "."}:
                    text = re_s
                else:
                    op = "+" if v.imag > 0 else "-"
                    text = f"{re_s}{op}{im_s}*i"
            else:
                text = _truncate_decimal(v, digits)
        if text == prev:
            return text
        prev = text
        prec *= 2
    raise PipelineError("decimal truncation did not stabilize")


# -- display ---------------------------------------------------------


def _gen_name(level):
    return f"g{level + 1}"


def format_tower(tower):
    """Legend lines naming each adjoined radical, innermost first."""
    lines = []
    for i, (n, rad) in enumerate(tower.levels):
        lines.append(f"{_gen_name(i)} = ({format_scalar(rad)})^(1/{n})")
    return lines


def format_scalar(scalar):
    if isinstance(scalar, (int, Fraction)):
        return str(Fraction(scalar))
    parts = []
    for exps, c in scalar.iter_terms():
        factors = []
        if c == -1 and any(exps):
            factors.append("-")
        elif c != 1 or not any(exps):
            factors.append(str(c))
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(_gen_name(i))
            elif e > 1:
                factors.append(f"{_gen_name(i)}^{e}")
        if factors == ["-"]:
            parts.append("-" + "1")
            continue
        joined = "*".join(f for f in factors if f != "-")
        if "-" in factors:
            joined = "-" + joined
        parts.append(joined)
    if not parts:
        return "0"
    text = parts[0]
    for p in parts[1:]:
        text += p if p.startswith("-") else "+" + p
    return text


def scalar_payload(scalar, digits=8):
    """JSON-ready description: tower steps, coordinates, decimal string.

    Each tower step serializes its radicand recursively, as a payload
    over the tower below it."""
    return {
        "tower": [
            {
                "index": n,
                "radicand": scalar_payload(
                    rad.promoted(scalar.tower.prefix(i)), digits
                ),
            }
            for i, (n, rad) in enumerate(scalar.tower.levels)
        ],
        "coeffs": [str(c) for c in scalar.coords],
        "approx": approximate(scalar, digits),
    }
