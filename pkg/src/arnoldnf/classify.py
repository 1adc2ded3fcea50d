"""Driver turning an input germ into its place in the catalog.

The pipeline: certify the Milnor number and split off the quadratic
part; straighten the lowest jet of the corank two residual onto a fixed
support; then walk the Newton boundary.  Each pass either recognizes a
catalog shape or performs one exact move toward it: a shear breaking a
repeated face factor, a shift exposing a missing axis end, a round of
corner clearing, or a square completion trading a mixed end vertex for
a pure power.  A matched shape is finished by the graded reduction,
whose leftover coefficients at the marked positions are the moduli.

The lowest jet is preserved by every move, so the vertex it pins down
(the anchor) identifies the working face on every pass.  Classification
either returns a Result, raises Rejection for germs outside the covered
range, or raises PipelineError when an internal invariant breaks.
"""

from .catalog import (
    corner_plan,
    display_name,
    double_core_family,
    moduli_positions,
    normal_form_parts,
    single_face_plan,
    x9_plan,
)
from .errors import PipelineError, Rejection
from .newton import (
    face_jet,
    face_nondegenerate,
    newton_polygon,
    repeated_factor,
    two_face_grading,
)
from .poly import SparsePoly, poly_order, substitute, weight_value, wlayer
from .scalars import format_scalar, from_rational
from .transform import (
    absorb_above,
    apply_linear,
    clear_level,
    even_quartic_form,
    graded_ladder,
    kill_face_middle,
    normalize_double_core,
    rescale_to_unit,
    split_germ,
    straighten_jet,
)

# vertex pinned down by the straightened lowest jet, per factor pattern
_ANCHORS = {
    "cube": (3, 0),
    "square-line": (2, 1),
    "three-lines": (2, 1),
    "fourth-power": (4, 0),
    "cube-line": (3, 1),
    "double-plus-two": (4, 0),
    "two-double-lines": (2, 2),
}


class Result:
    """Outcome of a successful classification.

    `parameters` is an ordered list of (name, scalar) pairs giving the
    exact moduli; `parts` describes the normal form as (label, exponent)
    pairs, label 1 meaning a unit monomial; `trace` records the
    reduction steps in order.
    """

    __slots__ = (
        "key",
        "indices",
        "name",
        "modality",
        "mu",
        "corank",
        "parameters",
        "parts",
        "trace",
    )

    def __init__(
        self, key, indices, name, modality, mu, corank, parameters, parts, trace
    ):
        self.key = key
        self.indices = indices
        self.name = name
        self.modality = modality
        self.mu = mu
        self.corank = corank
        self.parameters = parameters
        self.parts = parts
        self.trace = trace

    def __repr__(self):
        return f"Result({self.name}, mu={self.mu})"


def classify(f):
    """Classify an isolated plane curve germ over the rationals.

    Returns a Result, or raises Rejection when the germ is outside the
    covered range (non-isolated, corank above two, or modality above
    two).  Raises ValueError for input that is not a germ with a
    critical point at the origin.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no singularity type")
    for exps in f.terms:
        if sum(exps) < 2:
            raise ValueError("germ must have no constant or linear part")
    split = split_germ(f)
    if split.corank > 2:
        raise Rejection("corank>2", f"corank is {split.corank}")
    if split.mu is None:
        raise Rejection("non-isolated", "no Milnor number certificate")
    trace = [
        f"quadratic part has rank {split.rank}, corank {split.corank}",
        f"Milnor number {split.mu}",
    ]
    if split.corank == 0:
        return _plain("A_k", (1,), 0, 1, 0, trace)
    if split.corank == 1:
        k = split.mu
        return _plain("A_k", (k,), 0, k, 1, trace)
    return _corank_two(split, trace)


def _plain(key, indices, modality, mu, corank, trace):
    name = display_name(key, indices)
    trace.append(f"matched {name}")
    parts = normal_form_parts(key, indices, [])
    return Result(key, indices, name, modality, mu, corank, [], parts, trace)


def _corank_two(split, trace):
    g = split.residual
    mu = split.mu
    bound = mu + 2
    d = poly_order(g, (1, 1))
    if d is None or d >= 5:
        raise Rejection("modality>2", "both low order jets vanish")
    g, kind = straighten_jet(g, d, bound)
    trace.append(f"order {d} jet straightened: {kind}")
    if kind == "four-distinct":
        g = even_quartic_form(g, bound)
        trace.append("quartic jet brought to even form")
        return _finish(g, x9_plan(), split, bound, trace)
    anchor = _ANCHORS[kind]

    for _ in range(3 * mu + 20):
        pg = newton_polygon(g)
        if not pg.faces:
            raise PipelineError("Newton boundary lost both of its ends")
        wface = _working_face(pg, anchor)
        xend, vend = wface.b, wface.a
        jet = face_jet(g, wface)

        if not face_nondegenerate(jet, wface):
            fac, _ = repeated_factor(jet, wface)
            raw = sorted(fac.terms)
            # axis powers tied for maximal multiplicity ride along in the
            # product; the shear targets the repeated block alone
            di = min(e[0] for e in raw)
            dj = min(e[1] for e in raw)
            support = [(e[0] - di, e[1] - dj) for e in raw]
            pure = (
                len(support) == 2
                and support[0][0] == 0
                and support[1][1] == 0
            )
            if pure and support[1] == (1, 0):
                s = support[0][1]
                if s < 2:
                    raise PipelineError("repeated face factor inside the jet")
                c = fac.coeff(raw[0]) / fac.coeff(raw[1])
                g = _shear(g, "x", (0, s), -c, bound)
                trace.append(f"sheared x by -({format_scalar(c)})*y^{s}")
                continue
            if pure and support[0] == (0, 1):
                k = support[1][0]
                if k < 2:
                    raise PipelineError("repeated face factor inside the jet")
                c = fac.coeff(raw[1]) / fac.coeff(raw[0])
                g = _shear(g, "y", (k, 0), -c, bound)
                trace.append(f"sheared y by -({format_scalar(c)})*x^{k}")
                continue
            if support == [(0, 3), (2, 0)]:
                return _double_core(g, split, trace)
            raise Rejection(
                "modality>2", "repeated face factor outside the catalog"
            )

        if vend[0] == 1 and wface.weight[1] == 1:
            g = _expose_axis_end(g, wface, "y", bound, trace)
            continue

        if anchor == (2, 2) and xend[1] == 1:
            g = _expose_axis_end(g, wface, "x", bound, trace)
            continue

        if vend in ((2, 2), (2, 3)):
            idx = pg.faces.index(wface)
            if idx == 0:
                raise PipelineError("corner vertex without a second face")
            yface = pg.faces[idx - 1]
            weights, level, span = two_face_grading(yface, wface)
            allowed = {xend, vend} | {pt for pt in span if pt[0] == 0}
            layer = wlayer(g, weights, level)
            if any(e not in allowed for e in layer.terms):
                cleared = clear_level(g, weights, level, sorted(allowed), bound)
                if cleared is None:
                    raise Rejection(
                        "modality>2",
                        "corner level will not reduce onto the catalog support",
                    )
                g = cleared
                trace.append(f"pushed level {level} onto the corner support")
                continue
            yvert = yface.a
            if yvert[0] != 0:
                raise PipelineError("corner chain ended off the y axis")
            m = yvert[1]
            if vend == (2, 2):
                r = xend[0]
                if (m == 4 and r >= 5) or (5 <= r < m):
                    g = apply_linear(g, ((0, 1), (1, 0)), bound)
                    trace.append("swapped the variables")
                    continue
            plan = corner_plan(xend, vend, m, weights, level)
            if plan is None:
                raise Rejection(
                    "modality>2",
                    f"corner {vend} between {xend} and {yvert} is not tabulated",
                )
            return _finish(g, plan, split, bound, trace)

        if anchor == (2, 2) and vend[1] == 1:
            g = _complete_square_tail(g, vend, bound, trace)
            continue

        plan = single_face_plan(xend, vend)
        if plan is None:
            raise Rejection(
                "modality>2", f"boundary face {vend} to {xend} is not tabulated"
            )
        return _finish(g, plan, split, bound, trace)

    raise PipelineError("boundary walk did not settle")


def _working_face(pg, anchor):
    """Face the current pass works on: the x side face for axis anchors
    and the double line anchor, else the face ending at the anchor."""
    if anchor[1] == 0 or anchor == (2, 2):
        face = pg.faces[-1]
        if anchor[1] == 0 and face.b != anchor:
            raise PipelineError(f"jet anchor {anchor} fell off the boundary")
        return face
    for face in pg.faces:
        if face.b == anchor:
            return face
    raise PipelineError(f"jet anchor {anchor} fell off the boundary")


def _shear(g, var, exps, coeff, bound):
    image = SparsePoly.variable(g.vars, var) + SparsePoly.monomial(
        g.vars, exps, coeff
    )
    return substitute(g, {var: image}, truncation=((1, 1), bound))


def _expose_axis_end(g, face, axis, bound, trace):
    """Shear along the working face until its lattice line reaches the
    pure power of `axis`.

    Only the face jet contributes at the exposed end, and its value
    there is a nonzero polynomial in the shear parameter, so scanning
    small integers is guaranteed to find a working one.
    """
    wx, wy = face.weight
    jet = face_jet(g, face)
    if axis == "y":
        if wy != 1 or wx < 2:
            raise PipelineError("no lattice shift exposes the y end")
        var, exps = "x", (0, wx)
        powers = {e: e[0] for e in jet.terms}
    else:
        if wx != 1 or wy < 2:
            raise PipelineError("no lattice shift exposes the x end")
        var, exps = "y", (wy, 0)
        powers = {e: e[1] for e in jet.terms}
    top = max(powers.values())
    for k in range(1, top + 3):
        for lam in (k, -k):
            value = sum(
                (c * lam ** powers[e] for e, c in jet.terms.items()),
                from_rational(0),
            )
            if not value.is_zero():
                g = _shear(g, var, exps, from_rational(lam), bound)
                trace.append(f"shifted {var} by {lam} along the face")
                return g
    raise PipelineError("face end refused to appear")


def _complete_square_tail(g, vend, bound, trace):
    """Trade an (a, 1) end vertex for a pure power of x by completing
    the square against the double line term."""
    pivot = g.coeff((2, 2))
    if pivot.is_zero():
        raise PipelineError("square completion lost its pivot")
    k = vend[0] - 2
    if k < 2:
        raise PipelineError("square completion would disturb the jet")
    c = g.coeff(vend) / (2 * pivot)
    g = _shear(g, "y", (k, 0), -c, bound)
    trace.append(f"completed the square: y by -({format_scalar(c)})*x^{k}")
    return g


def _double_core(g, split, trace):
    key, indices = double_core_family(split.mu)
    core = normalize_double_core(g, split.mu)
    if core.mu != split.mu:
        raise PipelineError("double core walk disagrees on the Milnor number")
    positions = moduli_positions(key, indices)
    if [core.monomial0, core.monomial1] != [e for _, e in positions]:
        raise PipelineError("double core moduli landed off their positions")
    name = display_name(key, indices)
    trace.append(f"principal part is a perfect square; matched {name}")
    parameters = [(positions[0][0], core.a0), (positions[1][0], core.a1)]
    parts = normal_form_parts(key, indices, positions)
    return Result(
        key, indices, name, 2, split.mu, 2, parameters, parts, trace
    )


def _finish(g, plan, split, bound, trace):
    """Graded reduction onto a matched shape, then read off the moduli."""
    if plan.mu != split.mu:
        raise PipelineError(
            f"shape {plan.key} expects Milnor number {plan.mu}, "
            f"the germ has {split.mu}"
        )
    if plan.middle is not None:
        e3, e2, e1, power = plan.middle
        g = kill_face_middle(g, e3, e2, e1, power, bound)
        trace.append(f"shifted x to clear the face point {e1}")
    above = [
        e for _, e in plan.moduli if weight_value(plan.weights, e) > plan.level
    ]
    if len(plan.weights) > 1:
        g = absorb_above(g, plan.weights, plan.level, above, bound)
        trace.append("absorbed the tail above the corner level exactly")
    else:
        g = graded_ladder(g, plan.weights, plan.level, plan.dprime, above)
        trace.append(f"reduced layers up to degree {plan.dprime}")
    g = rescale_to_unit(g, plan.units)
    trace.append("units at " + ", ".join(str(e) for e in plan.units))
    parameters = []
    values = {}
    for pname, exps in plan.moduli:
        c = g.coeff(exps)
        parameters.append((pname, c))
        values[pname] = c
    if plan.restriction is not None and not plan.restriction(values):
        raise PipelineError("normal form landed on a forbidden stratum")
    name = display_name(plan.key, plan.indices)
    trace.append(f"matched {name}")
    parts = normal_form_parts(plan.key, plan.indices, plan.moduli)
    return Result(
        plan.key,
        plan.indices,
        name,
        plan.modality,
        plan.mu,
        2,
        parameters,
        parts,
        trace,
    )
