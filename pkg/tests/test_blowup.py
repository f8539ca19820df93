import pytest
from hypothesis import given, settings, strategies as st

from conftest import F2, F3, F4, P, ideal, polys
from kangaroo_lab.blowup import (BlowupChart, blowup, chart_substitution, divisor_transform, from_y,
                                 permissibility_check, pull_back, to_y, weak_transform)
from kangaroo_lab.contact import Divisor, weak_max_contact
from kangaroo_lab.ideals import ideal_order

WORKED = BlowupChart.make({1, 2}, {1, 2}, {2: 1})


def test_chart_validation():
    with pytest.raises(ValueError, match="nonzero"):
        BlowupChart.make({1, 2}, {1, 2}, {2: 0})
    with pytest.raises(ValueError):
        BlowupChart.make({2}, {1})
    with pytest.raises(ValueError):
        BlowupChart.make({1}, {1, 2}, {2: 1})
    with pytest.raises(ValueError):
        BlowupChart.make({1, 2}, {1, 2})


def test_chart_substitution_examples():
    assert chart_substitution(P("z^2"), WORKED) == P("x1^2*z^2")
    assert chart_substitution(P("x1^3*x2 + x1*x2^3"), WORKED) == P("x1^4*x2^2*(x2 + 1)")
    assert chart_substitution(P("x2"), BlowupChart.make({1, 2})) == P("x1*x2")


def test_weak_transform_examples():
    assert weak_transform(ideal("z^2 + x1^3*x2 + x1*x2^3"), WORKED).gens[0] == P("z^2 + x1^2*x2^2*(x2 + 1)")
    J = weak_transform(ideal("z^2 + x1^3", n=1), BlowupChart.make({1}))
    assert J.gens[0] == P("z^2 + x1", n=1) and ideal_order(J) == 1
    assert weak_transform(ideal("z^3"), WORKED).gens[0] == P("z^3")


def test_divisor_transform_examples():
    fr = weak_max_contact(ideal("z^2 + x1^3*x2 + x1*x2^3"))
    D2, lost, exc, div = divisor_transform(Divisor((1, 1)), WORKED, fr)
    assert D2 == Divisor((2, 0)) and lost == {2} and exc == 2 and div
    fr = weak_max_contact(ideal("z^2 + x1^3*x2^3*x3", n=3))
    D2, lost, exc, _ = divisor_transform(Divisor((0, 0, 1)), BlowupChart.make({1, 2}), fr)
    assert exc == 4 and D2[1] == 4 and D2[3] == 1 and not lost


def test_exceptional_multiplicity_need_not_be_divisible():
    # permissible, yet ord_P K - c! = 1 is not a multiple of 2
    J = ideal("z^2 + x1^3*x2")
    D = Divisor((0, 1))
    chart = BlowupChart.make({1})
    fr = weak_max_contact(J)
    assert permissibility_check(J, D, chart, fr).ok
    tr = blowup(J, D, chart, fr)
    assert tr.exceptional_multiplicity == 1 and not tr.divisible


def test_permissibility_examples():
    J = ideal("z^2 + x1^3*x2 + x1*x2^3")
    fr = weak_max_contact(J)
    assert permissibility_check(J, Divisor((1, 1)), WORKED, fr).ok
    J = ideal("z^2 + x1^3 + x2^3")
    assert permissibility_check(J, Divisor((0, 0)), BlowupChart.make({1, 2}), weak_max_contact(J)).ok
    rep = permissibility_check(J, Divisor((1, 0)), WORKED, weak_max_contact(ideal("z^2 + x1^3*x2 + x1^2*x2^2")))
    assert not rep.ok and "chart_normal_form" in rep.failures()
    J = ideal("z^2 + x2^3")
    rep = permissibility_check(J, Divisor((0, 0)), BlowupChart.make({1}), weak_max_contact(J))
    assert not rep.equimultiple_J


def test_y_coordinates_example():
    f = to_y(P("x1*x2*(x1 + x2)^2"), WORKED)
    assert f == P("x1*(x2 + x1)*x2^2")
    assert to_y(P("x1 + x2"), BlowupChart.make({1, 2})) == P("x1 + x2")


@settings(max_examples=60)
@given(st.sampled_from([F2, F3, F4]).flatmap(lambda F: st.tuples(polys(F), st.integers(1, F.q - 1))))
def test_y_round_trip(data):
    f, t = data
    chart = BlowupChart.make({1, 2}, {1, 2}, {2: t})
    assert from_y(to_y(f, chart), chart) == f


@settings(max_examples=60)
@given(st.sampled_from([F2, F3, F4]).flatmap(lambda F: st.tuples(polys(F, with_z=False), st.integers(1, F.q - 1))))
def test_pull_back_inverts_the_chart(data):
    g, t = data
    chart = BlowupChart.make({1, 2}, {1, 2}, {2: t})
    q = pull_back(g, chart)
    if q is not None:
        assert chart_substitution(q, chart) == P("x1", g.field) * g
