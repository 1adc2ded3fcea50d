from fractions import Fraction

import pytest

from arnoldnf.errors import PipelineError
from arnoldnf.localalg import milnor_number
from arnoldnf.poly import SparsePoly, parse_poly, wlayer
from arnoldnf.scalars import approximate
from arnoldnf.transform import (
    absorb_above,
    apply_linear,
    clear_level,
    even_quartic_form,
    graded_ladder,
    hessian_corank,
    kill_face_middle,
    normalize_double_core,
    rescale_to_unit,
    split_germ,
    straighten_jet,
)
from milnor_oracle import brute_milnor


def P(text, vars=("x", "y")):
    return parse_poly(text, vars)


def B(terms):
    return SparsePoly.build(("x", "y"), terms)


# -- splitting off the quadratic part --------------------------------


def test_split_full_rank():
    res = split_germ(P("x^2+y^2"))
    assert res.corank == 0
    assert res.rank == 2
    assert res.mu == 1


def test_split_corank_one_degenerate_square():
    res = split_germ(P("x^2+2*x*y+y^2+x^4"))
    assert res.corank == 1
    assert res.mu == 3


def test_split_corank_two_residual_exact():
    res = split_germ(P("z^2+x^3+x*y^3", ("x", "y", "z")))
    assert res.corank == 2
    assert res.rank == 1
    assert res.residual.vars == ("x", "y")
    assert (res.residual - P("y^3+x^3*y")).is_zero()
    assert res.mu == 7
    assert brute_milnor(P("y^3+x^3*y")) == 7


def test_split_five_variables():
    res = split_germ(P("a^2+b^2+c^2+u^3+v^4", ("a", "b", "c", "u", "v")))
    assert res.corank == 2
    assert (res.residual - P("x^3+y^4")).is_zero()
    assert res.mu == 6


def test_split_corank_three_stops():
    res = split_germ(P("x^3+y^3+z^3", ("x", "y", "z")))
    assert res.corank == 3
    assert res.residual is None
    assert res.mu is None


def test_split_non_isolated():
    res = split_germ(P("x^2+2*x*y+y^2"))
    assert res.corank == 1
    assert res.mu is None


def test_hessian_corank():
    assert hessian_corank(P("x^2+3*x*y+y^4")) == (0, 2)
    assert hessian_corank(P("x^2+y^3")) == (1, 1)


# -- straightening the lowest jet ------------------------------------


def test_straighten_cube():
    g2, kind = straighten_jet(P("(x+y)^3+y^4"), 3, 12)
    assert kind == "cube"
    assert (g2 - P("x^3+y^4")).is_zero()


def test_straighten_square_line():
    g2, kind = straighten_jet(P("x^3+x^2*y+y^5"), 3, 12)
    assert kind == "square-line"
    assert wlayer(g2, (1, 1), 3).terms == {(2, 1): 1}


def test_straighten_three_lines_rational_root():
    g2, kind = straighten_jet(P("x^3+y^3+x^2*y^2"), 3, 12)
    assert kind == "three-lines"
    jet = wlayer(g2, (1, 1), 3)
    assert jet.coeff((2, 1)) == 3
    assert jet.coeff((0, 3)) == Fraction(1, 4)
    assert set(jet.terms) == {(2, 1), (0, 3)}


def test_straighten_three_lines_radical_root():
    g2, kind = straighten_jet(P("x^3+3*x*y^2+y^3+y^4"), 3, 12)
    assert kind == "three-lines"
    jet = wlayer(g2, (1, 1), 3)
    assert set(jet.terms) == {(2, 1), (0, 3)}
    assert not jet.coeff((2, 1)).is_zero()
    assert not jet.coeff((0, 3)).is_zero()


def test_straighten_fourth_power():
    g2, kind = straighten_jet(P("(x+2*y)^4+y^5"), 4, 12)
    assert kind == "fourth-power"
    assert wlayer(g2, (1, 1), 4).terms == {(4, 0): 1}


def test_straighten_cube_line():
    g2, kind = straighten_jet(P("x^4+x^3*y+y^5"), 4, 12)
    assert kind == "cube-line"
    assert wlayer(g2, (1, 1), 4).terms == {(3, 1): 1}


def test_straighten_two_double_lines_rational():
    g2, kind = straighten_jet(P("(x^2-y^2)^2+y^5"), 4, 12)
    assert kind == "two-double-lines"
    assert wlayer(g2, (1, 1), 4).terms == {(2, 2): 1}


def test_straighten_two_double_lines_radical():
    g2, kind = straighten_jet(P("(x^2+2*y^2)^2+x^5"), 4, 12)
    assert kind == "two-double-lines"
    jet = wlayer(g2, (1, 1), 4)
    assert set(jet.terms) == {(2, 2)}
    assert jet.coeff((2, 2)) == 1


def test_straighten_double_line_plus_pair():
    g2, kind = straighten_jet(P("x^4+x^3*y+x^2*y^2+y^5"), 4, 12)
    assert kind == "double-plus-two"
    jet = wlayer(g2, (1, 1), 4)
    assert jet.coeff((4, 0)) == Fraction(3, 4)
    assert jet.coeff((2, 2)) == 1
    assert set(jet.terms) == {(4, 0), (2, 2)}


def test_straighten_four_distinct_untouched():
    f = P("x^4+x^3*y+y^4")
    g2, kind = straighten_jet(f, 4, 12)
    assert kind == "four-distinct"
    assert (g2 - f).is_zero()


def test_apply_linear_swap():
    f = apply_linear(P("x^3+y^5"), [[0, 1], [1, 0]])
    assert f.terms == {(0, 3): 1, (5, 0): 1}


# -- emptying one graded level ---------------------------------------


def test_clear_level_corner_shear():
    f = P("x^4-2*x^3*y+x^2*y^2+y^5")
    weights = ((6, 4), (5, 5))
    allowed = {(4, 0), (2, 2), (0, 5)}
    f2 = clear_level(f, weights, 20, allowed, 12)
    assert f2 is not None
    assert (wlayer(f2, weights, 20) - P("x^2*y^2+y^5")).is_zero()


def test_clear_level_second_order_feedback():
    f = P("x^3+x^2*y^2+3*x*y^5+y^8")
    weights = ((9, 3), (8, 4))
    allowed = {(3, 0), (2, 2), (0, 8)}
    f2 = clear_level(f, weights, 24, allowed, 14)
    assert f2 is not None
    expected = B({(3, 0): 1, (2, 2): 1, (0, 8): Fraction(-5, 4)})
    assert (wlayer(f2, weights, 24) - expected).is_zero()


def test_clear_level_already_clean():
    f = P("x^3+x^2*y^2+y^8")
    f2 = clear_level(f, ((9, 3), (8, 4)), 24, {(3, 0), (2, 2), (0, 8)}, 14)
    assert (f2 - f).is_zero()


# -- the layer ladder ------------------------------------------------


def test_ladder_no_work_needed():
    f = P("x^3+2*y^7+x*y^5")
    f2 = graded_ladder(f, ((7, 3),), 21, 22, [(1, 5)])
    assert (f2 - f).is_zero()


def test_ladder_shears_one_layer():
    f = P("x^3+x*y^5+x^2*y^3")
    f2 = graded_ladder(f, ((5, 2),), 15, 16, [(0, 8)])
    expected = B({(3, 0): 1, (1, 5): 1, (0, 8): Fraction(-1, 3)})
    assert (f2 - expected).is_zero()


# -- exact absorption above a corner level ---------------------------

J_CORNER_WEIGHTS = ((63, 18), (60, 20))


def test_absorb_above_no_stray_terms():
    f = P("x^3+x^2*y^3+y^10+2*y^11")
    f2 = absorb_above(f, J_CORNER_WEIGHTS, 180, [(0, 11)], 19)
    assert (f2 - f).is_zero()


def test_absorb_above_cross_level_residue():
    # x^3*y sits at weighted degree 200 but reduces against the
    # Jacobian of x^3+x^2*y^3+y^10 with residue (20/9)*y^11 at 198,
    # so the absorbed tail shifts the lower modulus position
    f = P("x^3+x^2*y^3+y^10+2*y^11") + B({(3, 1): Fraction(9, 10)})
    f2 = absorb_above(f, J_CORNER_WEIGHTS, 180, [(0, 11)], 19)
    assert f2.coeff((3, 1)).is_zero()
    assert f2.coeff((0, 11)) == 4
    assert (wlayer(f2, J_CORNER_WEIGHTS, 180) - P("x^3+x^2*y^3+y^10")).is_zero()


def test_absorb_above_ideal_member_vanishes():
    f = P("x^3+x^2*y^3+y^10+2*y^11+5*y^12")
    f2 = absorb_above(f, J_CORNER_WEIGHTS, 180, [(0, 11)], 19)
    assert f2.coeff((0, 12)).is_zero()
    assert f2.coeff((0, 11)) == 2


# -- rescaling marked coefficients to one ----------------------------


def test_rescale_radical_modulus():
    f = P("x^3+2*y^7+x*y^5")
    f2 = rescale_to_unit(f, [(3, 0), (0, 7)])
    assert f2.coeff((3, 0)) == 1
    assert f2.coeff((0, 7)) == 1
    assert approximate(f2.coeff((1, 5)), 5) == "0.60950"


def test_rescale_two_mixed_monomials():
    f = P("2*x^3*y+3*x*y^4+5*x^2*y^3")
    f2 = rescale_to_unit(f, [(3, 1), (1, 4)])
    assert f2.coeff((3, 1)) == 1
    assert f2.coeff((1, 4)) == 1
    t = (2.0 / 27.0) ** (1.0 / 11.0)
    s = (1.0 / (2.0 * t)) ** (1.0 / 3.0)
    got = float(approximate(f2.coeff((2, 3)), 10))
    assert abs(got - 5.0 * s * s * t ** 3) < 1e-8


def test_rescale_with_axis_monomial():
    f = P("4*x^2*y+9*y^4")
    f2 = rescale_to_unit(f, [(2, 1), (0, 4)])
    assert f2.coeff((2, 1)) == 1
    assert f2.coeff((0, 4)) == 1


def test_rescale_rejects_pure_y_pair():
    f = P("y^3+y^5")
    with pytest.raises(PipelineError):
        rescale_to_unit(f, [(0, 3), (0, 5)])


def test_rescale_rejects_dependent_pair():
    f = P("x*y^2+3*x^2*y^4")
    with pytest.raises(PipelineError):
        rescale_to_unit(f, [(1, 2), (2, 4)])


# -- pre-normalization of a four point face --------------------------


def test_kill_face_middle_rational_shift():
    f = P("x^3-3*x*y^4+y^6")
    f2 = kill_face_middle(f, (3, 0), (2, 2), (1, 4), 2, 12)
    assert (f2 - P("x^3+3*x^2*y^2-y^6")).is_zero()


def test_kill_face_middle_radical_shift():
    f = P("x^3+x^2*y^2+x*y^4+y^6")
    f2 = kill_face_middle(f, (3, 0), (2, 2), (1, 4), 2, 12)
    assert f2.coeff((1, 4)).is_zero()
    assert f2.coeff((3, 0)) == 1
    assert not f2.coeff((0, 6)).is_zero()


def test_kill_face_middle_no_op():
    f = P("x^3+x^2*y^2+y^6")
    f2 = kill_face_middle(f, (3, 0), (2, 2), (1, 4), 2, 12)
    assert (f2 - f).is_zero()


# -- even quartic reduction ------------------------------------------


def test_even_quartic_fixed_point():
    f = P("x^4+3*x^2*y^2+y^4")
    f2 = even_quartic_form(f, 11)
    assert (f2 - f).is_zero()


def test_even_quartic_general_jet():
    f = P("x^4+x^3*y+y^4")
    f2 = even_quartic_form(f, 11)
    jet = wlayer(f2, (1, 1), 4)
    assert set(jet.terms) <= {(4, 0), (2, 2), (0, 4)}
    assert not jet.coeff((4, 0)).is_zero()
    assert not jet.coeff((0, 4)).is_zero()
    assert milnor_number(f) == 9
    assert milnor_number(f2) == 9


def test_even_quartic_missing_ends():
    f = P("x^3*y+x*y^3")
    assert brute_milnor(f) == 9
    f2 = even_quartic_form(f, 11)
    jet = wlayer(f2, (1, 1), 4)
    assert set(jet.terms) <= {(4, 0), (2, 2), (0, 4)}
    assert not jet.coeff((4, 0)).is_zero()
    assert not jet.coeff((0, 4)).is_zero()
    assert milnor_number(f2) == 9


# -- germs built on a double core ------------------------------------


def test_double_core_even_index():
    f = P("x^4+2*x^2*y^3+y^6+x*y^5")
    assert milnor_number(f) == 16
    res = normalize_double_core(f, 16)
    assert res.index == 1
    assert res.monomial0 == (1, 5)
    assert res.monomial1 == (1, 6)
    assert res.a0 == 1
    assert res.a1.is_zero()


def test_double_core_odd_index():
    # y^7 = y^4*(x^2+y^3) - x^2*y^4, so the gauge peel y -> y - y^2/6
    # converts the tail; its second order effect and the cross term on
    # y^7 leave (1/6)*y^5*(x^2+y^3) + (1/12)*y^8 on the next layer
    f = P("x^4+2*x^2*y^3+y^6+y^7+y^8")
    assert milnor_number(f) == 17
    res = normalize_double_core(f, 17)
    assert res.index == 2
    assert res.monomial0 == (2, 4)
    assert res.monomial1 == (2, 5)
    assert res.a0 == -1
    assert res.a1 == Fraction(-1, 12)


def test_double_core_catalog_gauge_round_trips():
    nf = B({(2, 0): 1, (0, 3): 1}) ** 2
    nf = nf + SparsePoly.monomial(("x", "y"), (2, 4), Fraction(-2))
    nf = nf + SparsePoly.monomial(("x", "y"), (2, 5), Fraction(1))
    res = normalize_double_core(nf, 17)
    assert res.a0 == -2
    assert res.a1 == 1


def test_double_core_flow_is_canonical():
    f = P("x^4+2*x^2*y^3+y^6+x*y^5+y^7")
    assert milnor_number(f) == 16
    res = normalize_double_core(f, 16)
    assert res.a0 == 1
    nf = B({(2, 0): 1, (0, 3): 1}) ** 2
    nf = nf + SparsePoly.monomial(("x", "y"), res.monomial0, res.a0)
    nf = nf + SparsePoly.monomial(("x", "y"), res.monomial1, res.a1)
    res2 = normalize_double_core(nf, 16)
    assert res2.a0 == res.a0
    assert res2.a1 == res.a1


def test_double_core_coordinate_invariance():
    from arnoldnf.poly import substitute

    f = P("x^4+2*x^2*y^3+y^6+x*y^5+y^7")
    image = P("x+y^3")
    g = substitute(f, {"x": image})
    assert milnor_number(g) == 16
    res = normalize_double_core(f, 16)
    res2 = normalize_double_core(g, 16)
    assert res2.a0 == res.a0
    assert res2.a1 == res.a1


def test_double_core_rescales_the_square():
    f = P("x^4+4*x^2*y^3+4*y^6+y^7")
    assert milnor_number(f) == 17
    res = normalize_double_core(f, 17)
    assert res.index == 2
    assert res.a0 ** 6 == Fraction(1, 4 ** 7)
    assert abs(float(approximate(res.a0, 8)) + 4.0 ** (-7.0 / 6.0)) < 1e-6


def test_double_core_rejects_non_square_jet():
    f = P("x^4+x^2*y^3+y^6+x*y^5")
    with pytest.raises(PipelineError):
        normalize_double_core(f, 16)
