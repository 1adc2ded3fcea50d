"""Recognition table for corank two germs.

Each entry ties a Newton boundary shape to a family of normal forms:
the weights and cut degree of its graded reduction, the monomials that
get unit coefficients, the positions of the moduli, and the arithmetic
restriction cutting out the open stratum.  Families with boundary
corners and the double core families are resolved by small functions
instead of static rows, since their data depends on the indices.
"""

from fractions import Fraction
from math import gcd

from .errors import PipelineError
from .poly import SparsePoly, term_sort_key, weight_value


class Plan:
    """Reduction data for one matched family."""

    __slots__ = (
        "key",
        "indices",
        "mu",
        "modality",
        "weights",
        "level",
        "dprime",
        "middle",
        "units",
        "moduli",
        "restriction",
    )

    def __init__(
        self,
        key,
        indices,
        mu,
        modality,
        weights,
        level,
        dprime,
        middle,
        units,
        moduli,
        restriction=None,
    ):
        self.key = key
        self.indices = indices
        self.mu = mu
        self.modality = modality
        self.weights = weights
        self.level = level
        self.dprime = dprime
        self.middle = middle
        self.units = units
        self.moduli = moduli
        self.restriction = restriction


def face_weight(xend, yend):
    """Primitive weight vector and degree of the segment between two
    boundary vertices."""
    di = xend[0] - yend[0]
    dj = yend[1] - xend[1]
    g = gcd(di, dj)
    w = (dj // g, di // g)
    return w, w[0] * xend[0] + w[1] * xend[1]


def _cubic_discriminant_ok(name):
    def check(values):
        a = values[name]
        return not (4 * a ** 3 + 27).is_zero()

    return check


def _square_gap_ok(name):
    def check(values):
        a = values[name]
        return not (a * a - 4).is_zero()

    return check


# key -> (mu, modality, dprime, middle, moduli, restriction)
# middle = (square exps, keep exps, kill exps, shift power) when a face
# has an interior point that must be shifted away before the ladder.
_SINGLE = {
    ((3, 0), (0, 4)): ("E_6", 6, 0, None, None, [], None),
    ((3, 0), (1, 3)): ("E_7", 7, 0, None, None, [], None),
    ((3, 0), (0, 5)): ("E_8", 8, 0, None, None, [], None),
    ((3, 0), (0, 6)): (
        "J_10",
        10,
        1,
        None,
        ((3, 0), (2, 2), (1, 4), 2),
        [("a", (2, 2))],
        _cubic_discriminant_ok("a"),
    ),
    ((3, 0), (0, 7)): ("E_12", 12, 1, 22, None, [("a", (1, 5))], None),
    ((3, 0), (1, 5)): ("E_13", 13, 1, 16, None, [("a", (0, 8))], None),
    ((3, 0), (0, 8)): ("E_14", 14, 1, 26, None, [("a", (1, 6))], None),
    ((3, 0), (0, 9)): (
        "J_3,0",
        16,
        2,
        10,
        ((3, 0), (2, 3), (1, 6), 3),
        [("b", (2, 3)), ("c", (1, 7))],
        _cubic_discriminant_ok("b"),
    ),
    ((3, 0), (0, 10)): (
        "E_18",
        18,
        2,
        34,
        None,
        [("a0", (1, 7)), ("a1", (1, 8))],
        None,
    ),
    ((3, 0), (1, 7)): (
        "E_19",
        19,
        2,
        24,
        None,
        [("a0", (0, 11)), ("a1", (0, 12))],
        None,
    ),
    ((3, 0), (0, 11)): (
        "E_20",
        20,
        2,
        38,
        None,
        [("a0", (1, 8)), ("a1", (1, 9))],
        None,
    ),
    ((3, 1), (0, 5)): ("Z_11", 11, 1, 16, None, [("a", (1, 4))], None),
    ((3, 1), (1, 4)): ("Z_12", 12, 1, 12, None, [("a", (2, 3))], None),
    ((3, 1), (0, 6)): ("Z_13", 13, 1, 20, None, [("a", (1, 5))], None),
    ((3, 1), (0, 7)): (
        "Z_1,0",
        15,
        2,
        8,
        ((3, 1), (2, 3), (1, 5), 2),
        [("d", (2, 3)), ("c", (1, 6))],
        _cubic_discriminant_ok("d"),
    ),
    ((3, 1), (0, 8)): (
        "Z_17",
        17,
        2,
        28,
        None,
        [("a0", (1, 6)), ("a1", (1, 7))],
        None,
    ),
    ((3, 1), (1, 6)): (
        "Z_18",
        18,
        2,
        20,
        None,
        [("a0", (0, 9)), ("a1", (0, 10))],
        None,
    ),
    ((3, 1), (0, 9)): (
        "Z_19",
        19,
        2,
        32,
        None,
        [("a0", (1, 7)), ("a1", (1, 8))],
        None,
    ),
    ((4, 0), (0, 5)): ("W_12", 12, 1, 22, None, [("a", (2, 3))], None),
    ((4, 0), (1, 4)): ("W_13", 13, 1, 18, None, [("a", (0, 6))], None),
    ((4, 0), (0, 6)): (
        "W_1,0",
        15,
        2,
        14,
        None,
        [("a0", (2, 3)), ("a1", (2, 4))],
        _square_gap_ok("a0"),
    ),
    ((4, 0), (1, 5)): (
        "W_17",
        17,
        2,
        24,
        None,
        [("a0", (0, 7)), ("a1", (0, 8))],
        None,
    ),
    ((4, 0), (0, 7)): (
        "W_18",
        18,
        2,
        34,
        None,
        [("a0", (2, 4)), ("a1", (2, 5))],
        None,
    ),
}


def single_face_plan(xend, yend):
    """Plan for a germ whose boundary is one face from xend to yend,
    or None when the shape is not in the table."""
    if xend == (2, 1) and yend[0] == 0 and yend[1] >= 3:
        m = yend[1]
        w, level = face_weight(xend, yend)
        return Plan(
            "D_k",
            (m + 1,),
            m + 1,
            0,
            (w,),
            level,
            level,
            None,
            [(2, 1), (0, m)],
            [],
        )
    row = _SINGLE.get((xend, yend))
    if row is None:
        return None
    key, mu, modality, dprime, middle, moduli, restriction = row
    w, level = face_weight(xend, yend)
    indices = _indices_from_key(key)
    return Plan(
        key,
        indices,
        mu,
        modality,
        (w,),
        level,
        dprime if dprime is not None else level,
        middle,
        [xend, yend],
        moduli,
        restriction,
    )


def x9_plan():
    return Plan(
        "X_9",
        (9,),
        9,
        1,
        ((1, 1),),
        4,
        4,
        None,
        [(4, 0), (0, 4)],
        [("a", (2, 2))],
        _square_gap_ok("a"),
    )


def corner_plan(xend, corner, m, weights, level):
    """Plan for a boundary with a recognized corner, the x side ending
    at xend and the y side at (0, m).  `weights` and `level` carry the
    common grading of the two faces at the corner."""
    if corner == (2, 2):
        if xend == (3, 0) and m >= 7:
            k = m - 6
            return Plan(
                "J_10+k",
                (10 + k,),
                10 + k,
                1,
                weights,
                level,
                level,
                None,
                [(3, 0), (2, 2)],
                [("a", (0, m))],
            )
        if xend == (4, 0) and m >= 5:
            k = m - 4
            return Plan(
                "X_9+k",
                (9 + k,),
                9 + k,
                1,
                weights,
                level,
                level,
                None,
                [(4, 0), (2, 2)],
                [("a", (0, m))],
            )
        if xend[1] == 0 and xend[0] >= 5 and m >= 5:
            r = xend[0]
            return Plan(
                "Y_r,s",
                (r, m),
                r + m + 1,
                1,
                weights,
                level,
                level,
                None,
                [(r, 0), (0, m)],
                [("a", (2, 2))],
            )
        return None
    if corner == (2, 3):
        moduli = [("a0", (0, m)), ("a1", (0, m + 1))]
        dprime = weight_value(weights, (0, m + 1))
        if xend == (3, 0) and m >= 10:
            p = m - 9
            return Plan(
                "J_3,p",
                (3, p),
                16 + p,
                2,
                weights,
                level,
                dprime,
                None,
                [(3, 0), (2, 3)],
                moduli,
            )
        if xend == (4, 0) and m >= 7:
            p = m - 6
            return Plan(
                "W_1,p",
                (1, p),
                15 + p,
                2,
                weights,
                level,
                dprime,
                None,
                [(4, 0), (2, 3)],
                moduli,
            )
        if xend == (3, 1) and m >= 8:
            p = m - 7
            return Plan(
                "Z_1,p",
                (1, p),
                15 + p,
                2,
                weights,
                level,
                dprime,
                None,
                [(3, 1), (2, 3)],
                moduli,
            )
        return None
    return None


def double_core_family(mu):
    """Family key and indices for the double core germs, by parity."""
    if mu < 16:
        raise PipelineError("double core invariants out of range")
    if mu % 2 == 0:
        q = (mu - 14) // 2
        return "W#_1,2q-1", (1, 2 * q - 1)
    q = (mu - 15) // 2
    return "W#_1,2q", (1, 2 * q)


def _indices_from_key(key):
    digits = key.split("_")[1]
    if "," in digits:
        return tuple(int(part) for part in digits.split(","))
    return (int(digits),)


def display_name(key, indices):
    """Resolved subscript name, e.g. J_12 or Z_1,3."""
    head = key.split("_")[0]
    return head + "_" + ",".join(str(i) for i in indices)


def normal_form_parts(key, indices, moduli):
    """Ordered (label, exps) pairs of the normal form, label 1 meaning
    a plain unit monomial.  For the double core families the square of
    the core is carried as a separate leading marker."""
    if key == "A_k":
        (k,) = indices
        return [(1, (k + 1,))]
    if key == "D_k":
        (k,) = indices
        return [(1, (2, 1)), (1, (0, k - 1))]
    if key.startswith("W#"):
        parts = [("core", None)]
        parts.extend(moduli)
        return parts
    units, named = _support_from(key, indices, moduli)
    parts = [(1, e) for e in units]
    parts.extend(named)
    parts.sort(key=lambda item: term_sort_key(item[1]))
    return parts


def _support_from(key, indices, moduli):
    if key == "X_9":
        return [(4, 0), (0, 4)], list(moduli)
    if key == "J_10+k":
        return [(3, 0), (2, 2)], list(moduli)
    if key == "X_9+k":
        return [(4, 0), (2, 2)], list(moduli)
    if key == "Y_r,s":
        r, s = indices
        return [(r, 0), (0, s)], list(moduli)
    if key == "J_3,p":
        return [(3, 0), (2, 3)], list(moduli)
    if key == "W_1,p":
        return [(4, 0), (2, 3)], list(moduli)
    if key == "Z_1,p":
        return [(3, 1), (2, 3)], list(moduli)
    for (xend, yend), row in _SINGLE.items():
        if row[0] == key:
            return [xend, yend], list(moduli)
    raise PipelineError(f"no display data for {key}")


def instantiate(key, indices, values):
    """Normal form germ over the rationals for given parameter values.

    Used by the harness and the round trip tests; every value must be
    a Fraction (or int)."""
    vars = ("x",) if key == "A_k" else ("x", "y")
    parts = normal_form_parts(
        key, indices, _moduli_positions(key, indices)
    )
    f = SparsePoly.zero(vars)
    for label, exps in parts:
        if label == "core":
            f = f + SparsePoly.build(vars, {(2, 0): 1, (0, 3): 1}) ** 2
        elif label == 1:
            f = f + SparsePoly.monomial(vars, exps, Fraction(1))
        else:
            c = Fraction(values[label])
            if c:
                f = f + SparsePoly.monomial(vars, exps, c)
    return f


def _moduli_positions(key, indices):
    """Named moduli positions of a family, recomputed from the key."""
    if key in ("A_k", "D_k", "E_6", "E_7", "E_8"):
        return []
    if key == "X_9":
        return [("a", (2, 2))]
    if key == "J_10+k":
        (sub,) = indices
        return [("a", (0, sub - 4))]
    if key == "X_9+k":
        (sub,) = indices
        return [("a", (0, sub - 5))]
    if key == "Y_r,s":
        return [("a", (2, 2))]
    if key == "J_3,p":
        _, p = indices
        return [("a0", (0, 9 + p)), ("a1", (0, 10 + p))]
    if key == "W_1,p":
        _, p = indices
        return [("a0", (0, 6 + p)), ("a1", (0, 7 + p))]
    if key == "Z_1,p":
        _, p = indices
        return [("a0", (0, 7 + p)), ("a1", (0, 8 + p))]
    if key == "W#_1,2q-1":
        _, odd = indices
        q = (odd + 1) // 2
        return [("a0", (1, 4 + q)), ("a1", (1, 5 + q))]
    if key == "W#_1,2q":
        _, even = indices
        q = even // 2
        return [("a0", (2, 3 + q)), ("a1", (2, 4 + q))]
    for row in _SINGLE.values():
        if row[0] == key:
            return list(row[5])
    raise PipelineError(f"no moduli data for {key}")


def moduli_positions(key, indices):
    return _moduli_positions(key, indices)
