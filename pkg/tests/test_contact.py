import math

import pytest
from hypothesis import given, settings, strategies as st

from conftest import F2, F3, F4, P, ideal, polys
from kangaroo_lab.contact import (EXACT_WEIGHT_BUDGET, MAXIMAL, PRECISION_EXHAUSTED, PURE_POWER, Divisor, cleaning_step,
                                  coeff_order, coefficient_data, coefficient_ideal, compatibility,
                                  largest_p_power, residual_order, shift_z, weak_max_contact)
from kangaroo_lab.errors import NotZRegular, PrecisionError
from kangaroo_lab.ideals import Ideal, ideal_order
from kangaroo_lab.poly import INF, Poly


def test_largest_p_power():
    assert largest_p_power(2, 2) == (2, 1)
    assert largest_p_power(6, 2) == (2, 1)
    assert largest_p_power(12, 2) == (4, 2)
    assert largest_p_power(5, 3) == (1, 0)


def test_coefficient_ideal_examples():
    K = coefficient_ideal(ideal("z^2 + x1^3*x2 + x1*x2^3"), 2)
    assert K.gens[0] == P("x1^3*x2 + x1*x2^3")
    assert coeff_order(ideal("z^2 + x1^3*x2 + x1*x2^3"), 2) == 4
    K = coefficient_ideal(ideal("z^2 + x1^2*x2^2*(x2 + 1)"), 2)
    assert K.gens[0] == P("x1^2*x2^2 + x1^2*x2^3")
    assert coeff_order(ideal("z^2 + x1^2*x2^2 + x1^2*x2^3"), 2) == 4
    assert not coefficient_ideal(ideal("z^3"), 3).gens
    assert coeff_order(ideal("z^3"), 3) == INF
    assert coeff_order(ideal("z^2 + x1^3", n=1), 2) == 3
    assert coeff_order(ideal("z^2 + 1 + x1"), 2) == 0


def test_coefficient_order_unreliable_inside_precision():
    J = ideal("z^2 + x1^9", precision=5)
    with pytest.raises(PrecisionError):
        coeff_order(J, 2)


def test_cleaning_step_examples():
    assert cleaning_step(ideal("z^2 + x1^3*x2 + x1*x2^3"), 2) is None
    assert cleaning_step(ideal("z^2 + x1^2*x2^2 + x1^2*x2^3"), 2) == P("x1*x2")
    assert cleaning_step(ideal("z^2 + x1^3", n=1), 2) is None
    with pytest.raises(NotZRegular):
        cleaning_step(ideal("x1*z^2 + x2^5"), 2)


def test_cleaning_needs_an_actual_increase():
    # the root x1*x2 exists, but the second generator keeps the order at 4
    J = ideal("z^2 + x1^2*x2^2", "x1^2*x2^2 + x2^7")
    assert cleaning_step(J, 2) is None


def test_weak_max_contact_examples():
    fr = weak_max_contact(ideal("z^2 + x1^3*x2 + x1*x2^3"))
    assert (fr.o, fr.status, fr.q_total.terms) == (4, MAXIMAL, {})
    fr = weak_max_contact(ideal("z^2 + x1^2*x2^2 + x1^2*x2^3"))
    assert (fr.o, fr.status, fr.q_total) == (5, MAXIMAL, P("x1*x2"))
    assert fr.hypersurface() == "V(z + x1*x2)"
    fr = weak_max_contact(ideal("(z + x1^2)^2"))
    assert fr.status == PURE_POWER and fr.q_total == P("x1^2")


def test_two_step_cleaning_over_f4():
    J = ideal("(z + a*x1*x2 + x2^3)^2 + x1^7 + x1^3*x2^5", field=F4, precision=40)
    fr = weak_max_contact(J)
    assert fr.status == MAXIMAL
    assert fr.orders == (4, 6, 7)
    assert fr.q_total == P("a*x1*x2 + x2^3", F4)


def test_precision_exhausted_status():
    fr = weak_max_contact(ideal("z^2 + x1^3*x2^5", precision=6))
    assert fr.status in (PRECISION_EXHAUSTED, PURE_POWER)
    fr = weak_max_contact(ideal("z^2 + x1^3*x2 + x2^9", precision=6))
    assert fr.status == MAXIMAL and fr.o == 4


def test_residual_order_examples():
    ro = residual_order(ideal("z^2 + x1^3*x2 + x1*x2^3"), Divisor((1, 1)))
    assert ro.compatible and ro.value == 2
    ro = residual_order(ideal("z^2 + x1^2*x2^2*(x2 + 1)"), Divisor((2, 0)))
    assert ro.value == 3 and ro.frame.q_total == P("x1*x2")
    ro = residual_order(ideal("z^2 + x1^3*x2 + x1*x2^3"), Divisor((0, 0)))
    assert ro.value == 4


def test_incompatible_divisor_is_reported():
    ro = residual_order(ideal("z^2 + x1^3*x2 + x1*x2^3"), Divisor((2, 1)))
    assert not ro.compatible
    assert ro.offending == (0, 0, 1)
    assert "incompatible" in ro.describe()


def test_divisor_basics():
    D = Divisor((2, 0, 1))
    assert D[1] == 2 and D[3] == 1 and D.total() == 3
    assert str(D) == "2*V(x1) + V(x3)"
    with pytest.raises(ValueError):
        Divisor((-1,))


def test_lemma_one_on_a_large_c():
    # c = 6: formula-based orders avoid f_i^720
    J = ideal("(z^2 + x1^3*x2 + x1*x2^3)^3")
    assert ideal_order(J) == 6
    assert coeff_order(J, 6) == math.factorial(6) * 2


def ideals_of_order(F, c):
    gen = polys(F, max_deg=c + 3, max_terms=5)
    return st.lists(gen, min_size=1, max_size=3).map(
        lambda gs: Ideal(tuple(g + Poly.monomial(F, 3, (c, 0, 0)) if i == 0 else g * P("z + x1", F)
                               for i, g in enumerate(gs)), 2))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F2, F3, F4]).flatmap(lambda F: ideals_of_order(F, 2)))
def test_formula_order_equals_explicit_order(J):
    c = ideal_order(J)
    if c == INF or c < 1:
        return
    assert coeff_order(J, c) == ideal_order(coefficient_ideal(J, c))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F2, F3, F4]).flatmap(lambda F: ideals_of_order(F, 2)))
def test_cleaning_strictly_increases_and_terminates(J):
    c = ideal_order(J)
    if c == INF or c < 1:
        return
    fr = weak_max_contact(J)
    assert all(a < b for a, b in zip(fr.orders, fr.orders[1:]))
    assert fr.status in (MAXIMAL, PURE_POWER, PRECISION_EXHAUSTED)
    assert coefficient_data(shift_z(J, fr.q_total), c).known_order == fr.o


def test_compatibility_names_the_offender():
    fr = weak_max_contact(ideal("z^2 + x1^3*x2 + x1*x2^3"))
    assert compatibility(fr, Divisor((1, 1))) is None
    assert compatibility(fr, Divisor((0, 2))) == (0, 0, 2)


def test_exact_power_series_root_stops_at_the_budget():
    # the contact coordinate of z + z^2 + x2 is a power series, so cleaning never ends by itself
    fr = weak_max_contact(ideal("z + x2 + z^2"))
    assert fr.status == PRECISION_EXHAUSTED
    assert fr.o > EXACT_WEIGHT_BUDGET
    assert all(a < b for a, b in zip(fr.orders, fr.orders[1:]))
