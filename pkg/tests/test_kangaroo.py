import pytest
from hypothesis import given, settings, strategies as st

from conftest import P, ideal
from kangaroo_lab.blowup import BlowupChart
from kangaroo_lab.contact import Divisor, weak_max_contact
from kangaroo_lab.errors import InternalAssertion
from kangaroo_lab.kangaroo import (ConeFailure, VERDICT_KANGAROO, VERDICT_NO_INCREASE, VERDICT_ORDER_DROPPED,
                                   check_condition_5, check_condition_6, check_condition_7, check_condition_8,
                                   check_moh_bound, compute_l_b_residues, detect_kangaroo,
                                   extract_weighted_cone, factorize_F, moh_increase_bound, ord_mod_pe_QT,
                                   proposition_bound, sigma_weighted_initial, theorem_conditions)

WORKED_J = "z^2 + x1^3*x2 + x1*x2^3"
WORKED = BlowupChart.make({1, 2}, {1, 2}, {2: 1})
T1 = BlowupChart.make({1, 2}, {1})


def test_cone_of_worked_example():
    cone = extract_weighted_cone(weak_max_contact(ideal(WORKED_J)))
    assert cone.F == P("x1^3*x2 + x1*x2^3") and (cone.m, cone.e, cone.w) == (1, 1, 2)


def test_cone_of_a_cube():
    cone = extract_weighted_cone(weak_max_contact(ideal(f"({WORKED_J})^3")))
    assert (cone.c, cone.m, cone.e) == (6, 3, 1)
    assert cone.F == P("x1^3*x2 + x1*x2^3")


def test_cone_needs_every_minimal_generator_in_shape():
    # cleaning is blocked by the second generator, whose initial form has no z^2
    J = ideal("z^2 + x1^2*x2^2", "x1^2*x2^2 + x2^7")
    with pytest.raises(ConeFailure, match="generator 2"):
        extract_weighted_cone(weak_max_contact(J))


def test_cone_rejects_non_integral_weight():
    with pytest.raises(ConeFailure, match="condition \\(2\\)"):
        extract_weighted_cone(weak_max_contact(ideal("z^2 + x1^4 + x1^5")))


def test_factorize_examples():
    assert factorize_F(P("x1^3*x2 + x1*x2^3"), WORKED) == ({1: 1, 2: 1}, P("x1^2 + x2^2"), 2)
    assert factorize_F(P("x1^5"), BlowupChart.make({1})) == ({1: 5}, P("1"), 0)
    F = P("x1^2 + x1*x2 + x2^2")
    assert factorize_F(F, WORKED) == ({1: 0, 2: 0}, F, 2)


def test_ord_mod_examples():
    assert ord_mod_pe_QT(P("x1*x2*(x1 + x2)^2"), WORKED, 1) == 3
    assert ord_mod_pe_QT(P("x1^2 + x1*x2"), T1, 1) == 1
    assert ord_mod_pe_QT(P("x1^2*x2^2 + x2^4"), WORKED, 1) == float("inf")


def test_condition_5_examples():
    F = P("x1^3*x2 + x1*x2^3")
    r, G, v = factorize_F(F, WORKED)
    ok, N = check_condition_5(F, WORKED, 1, r, G, v)
    assert ok and N == P("x2")
    ok, N = check_condition_5(P("x1"), BlowupChart.make({1}), 1, {1: 1}, P("1"), 0)
    assert ok and N == P("1")
    # G(1, x2 + 1) = x2 has an odd monomial at degree <= v
    ok, _ = check_condition_5(P("x1*x2 + x1^2"), WORKED, 1, {1: 0, 2: 0}, P("x1*x2 + x1^2"), 2)
    assert not ok


def test_l_b_residues_examples():
    assert compute_l_b_residues(P("x1*x2*(x1 + x2)^2"), {1: 1, 2: 1}, 1, 2) == (0, 2, {1: 1, 2: 1}, 0)
    ell, b, res, _ = compute_l_b_residues(P("x1^2*x2^2*(x1 + x2)^4"), {1: 2, 2: 2}, 2, 2)
    assert ell == 1 and b == 2 and res == {1: 2, 2: 2}
    assert compute_l_b_residues(P("x1^2*x2^2*(x1 + x2)"), {1: 2, 2: 2}, 1, 2)[1] == 0
    with pytest.raises(InternalAssertion):
        compute_l_b_residues(P("x1^2"), {1: 2}, 1, 2)


def test_condition_6_examples():
    assert check_condition_6(0, 2, {1: 1, 2: 1}, 0, 2, degree=4)
    assert not check_condition_6(0, 1, {1: 1, 2: 0}, 1, 2)
    assert not check_condition_6(0, 0, {1: 0}, 0, 2)


def test_condition_7_examples():
    assert check_condition_7(P("x1*x2*x3", n=3), BlowupChart.make({1, 2, 3}, {1, 2, 3}, {2: 1, 3: 1}), 1)
    chart = BlowupChart.make({1, 2}, {1, 2}, {2: 1})
    assert not check_condition_7(P("x1^2*x3", n=3), chart, 1)
    assert check_condition_7(P("x1*x2*x3^2", n=3), chart, 1)
    assert not check_condition_7(P("x1*x2^2"), WORKED, 1, ell=1)


def test_condition_8_examples():
    F = P("x1^3*x2 + x1*x2^3")
    ok, checks = check_condition_8(F, WORKED, {1: 1, 2: 1}, 0, 1)
    assert ok
    assert [(h.index, h.H) for h in checks] == [(1, P("x1^2 + x2^2")), (2, P("x1^2 + x2^2"))]
    with pytest.raises(InternalAssertion):
        check_condition_8(P("x1^2*x2^2"), WORKED, {1: 2, 2: 2}, 0, 1)


def test_moh_examples():
    assert moh_increase_bound(2, 2) == 1
    assert moh_increase_bound(3, 3) == 2
    assert moh_increase_bound(4, 2) == 12
    assert check_moh_bound(2, 3, 2, 2)
    assert check_moh_bound(5, 3, 2, 2)
    assert not check_moh_bound(2, 4, 2, 2)
    assert moh_increase_bound(3, 2) == 3


def test_sigma_initial_examples():
    g = P("x1^2 + x1*x2")
    assert sigma_weighted_initial(g, BlowupChart.make({1})) == g.initial_form()
    chart = BlowupChart.make({1, 2})
    assert sigma_weighted_initial(P("x1*x2 + x1^3"), chart) == P("x1*x2 + x1^3")
    assert sigma_weighted_initial(P("x2^2 + x1^3"), chart) == P("x1^3")


def test_proposition_bound_examples():
    D0 = Divisor((0, 0))
    assert proposition_bound(P("x1^3*x2 + x1*x2^3"), BlowupChart.make({1, 2}, {1, 2}, {2: 1}), D0) == 2
    assert proposition_bound(P("x2^5"), T1, Divisor((0, 3))) == 2
    assert proposition_bound(P("x2^5"), T1, D0) == 5
    # x2 = y2 + x1 under the translation, so the initial form meets y1^5
    assert proposition_bound(P("x2^5"), WORKED, D0) == 0


def test_worked_example_detects_kangaroo():
    ar = detect_kangaroo(ideal(WORKED_J), Divisor((1, 1)), WORKED)
    assert ar.verdict == VERDICT_KANGAROO
    assert (ar.resord_before, ar.resord_after) == (2, 3)
    assert ar.certificate.all_pass()
    assert ar.moh == "equality"
    assert ar.transform.ideal.gens[0] == P("z^2 + x1^2*x2^2 + x1^2*x2^3")
    assert ar.transform.divisor == Divisor((2, 0))
    assert ar.frame_after.q_total == P("x1*x2")
    pr = ar.proposition
    assert pr.chain_ok and pr.u_match and pr.bound == 3
    assert not ar.violations


def test_untranslated_chart_has_no_increase():
    ar = detect_kangaroo(ideal(WORKED_J), Divisor((1, 1)), BlowupChart.make({1, 2}, {1}))
    assert ar.verdict == VERDICT_NO_INCREASE
    assert ar.certificate.conditions[6] is False


def test_cusp_order_drops():
    ar = detect_kangaroo(ideal("z^2 + x1^3", n=1), Divisor((0,)), BlowupChart.make({1}))
    assert ar.verdict == VERDICT_ORDER_DROPPED and ar.order_after == 1


def test_conditions_on_the_cube():
    J = ideal(f"({WORKED_J})^3")
    cert = theorem_conditions(weak_max_contact(J), WORKED)
    assert all(cert.conditions[k] for k in range(1, 9))
    # orders are scaled by c! = 720, so the divisor lives on that scale too
    ar = detect_kangaroo(J, Divisor((360, 360)), WORKED)
    assert ar.verdict == VERDICT_KANGAROO and ar.certificate.all_pass()
    assert (ar.resord_before, ar.resord_after, ar.moh) == (720, 1080, "equality")


@settings(max_examples=300)
@given(st.integers(0, 2), st.lists(st.integers(0, 40), min_size=1, max_size=4), st.integers(0, 40),
       st.sampled_from([2, 3, 5]))
def test_condition_6_forms_agree(ell, r, v, p):
    mod = p ** (ell + 1)
    residues = {i: x % mod for i, x in enumerate(r, 1)}
    b = sum(1 for x in residues.values() if x)
    degree = sum(r) + v
    if degree % mod:
        return
    check_condition_6(ell, b, residues, v % mod, p, degree)  # raises on disagreement
