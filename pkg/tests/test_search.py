import pytest
from hypothesis import given, settings, strategies as st

from conftest import F2, F3, F4, P, scenario_path
from kangaroo_lab.blowup import BlowupChart, qt_degree, to_y
from kangaroo_lab.kangaroo import VERDICT_KANGAROO, ord_mod_pe_QT
from kangaroo_lab.report import machine_block, search_report
from kangaroo_lab.scenario import load
from kangaroo_lab.search import (Candidate, brute_line_order, brute_ord_mod_pe, cardinality,
                                 check_oracle_guard, evaluate, homogeneous_monomials, oracle_compare,
                                 poly_from_index, run_search)
from test_scenario import space


def test_homogeneous_monomials():
    assert homogeneous_monomials(2, 2) == [(0, 2, 0), (0, 1, 1), (0, 0, 2)]
    assert len(homogeneous_monomials(3, 4)) == 15


def test_poly_from_index_is_a_bijection():
    seen = {poly_from_index(F3, 2, 2, i) for i in range(3 ** 3)}
    assert len(seen) == 27


def test_brute_line_order_examples():
    assert brute_line_order(P("x1*x2*(x1 + x2)^2"), 1) == 2
    assert brute_line_order(P("(x2 + x1)^3*x1 + x1^7"), 1) == 0
    assert brute_line_order(P("(x2 + 2*x1)^3*x2", F3), 1) == 3
    assert brute_line_order(P("(x2 + 2*x1)^3*x2", F3), 2) == 0
    assert brute_line_order(P("0"), 1) == float("inf")


@settings(max_examples=80)
@given(st.sampled_from([F2, F3, F4]).flatmap(
    lambda F: st.tuples(st.just(F), st.integers(1, F.q - 1), st.integers(1, 6), st.data())))
def test_line_order_matches_the_y_coordinates(args):
    F, t, d, data = args
    mons = homogeneous_monomials(2, d)
    coeffs = data.draw(st.lists(st.integers(0, F.q - 1), min_size=len(mons), max_size=len(mons)))
    f = P("0", F).like({m: c for m, c in zip(mons, coeffs) if c})
    chart = BlowupChart.make({1, 2}, {1, 2}, {2: t})
    expect = min((qt_degree(m) for m in to_y(f, chart).terms), default=float("inf"))
    assert brute_line_order(f, t) == expect


def test_ord_mod_matches_brute_force_on_small_cases():
    chart = BlowupChart.make({1, 2}, {1, 2}, {2: 1})
    for text in ["x1*x2*(x1 + x2)^2", "x1^3*x2 + x1*x2^3", "x1^4 + x1^3*x2", "x1*x2^3"]:
        F = P(text)
        assert brute_ord_mod_pe(F, chart, 1) == ord_mod_pe_QT(F, chart, 1)


def test_small_search():
    sp = space(degrees=(4,), t={2: 1})
    assert cardinality(sp) == 24
    res = run_search(sp)
    assert res.visited == 24
    assert not res.violations()
    keys = [r.key for r in res.records]
    assert keys == sorted(keys)
    kang = res.kangaroos()
    assert any(r.F == "x1^3*x2 + x1*x2^3" for r in kang)
    assert all(r.verdict == VERDICT_KANGAROO and r.after > r.before for r in kang)


def test_workers_give_identical_reports():
    sp = load(scenario_path("comment_g_p2.space"))
    one = search_report(run_search(sp, 1)).render()
    three = search_report(run_search(sp, 3)).render()
    assert one == three
    mb = machine_block(one)
    assert mb["candidates.declared"] == mb["candidates.visited"] == str(cardinality(sp))
    assert mb["violations"] == "0"


def test_oracle_compare_is_clean_on_a_small_space():
    assert oracle_compare(space(degrees=(4, 6), t={2: 1})) == []


def test_oracle_guard():
    big = space(n=3, degrees=(6,), S=(1, 2, 3), T=(1, 2, 3))
    with pytest.raises(ValueError, match="oracle guard"):
        check_oracle_guard(big)


def test_evaluate_single_candidate():
    sp = space(degrees=(4,), t={2: 1})
    idx = next(i for i in range(32) if poly_from_index(F2, 2, 4, i) == P("x1^3*x2 + x1*x2^3"))
    rec = evaluate(sp, Candidate(4, idx, (1, 2), ((2, 1),)), oracle=True)
    assert rec.verdict == VERDICT_KANGAROO and (rec.before, rec.after) == (2, 3)
    assert rec.divisor == "V(x1) + V(x2)"
    assert not rec.discrepancies and rec.u_match
