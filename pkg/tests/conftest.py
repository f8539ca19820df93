import os
import sys

from hypothesis import strategies as st

from kangaroo_lab.field import FieldSpec
from kangaroo_lab.grammar import parse_poly
from kangaroo_lab.ideals import Ideal
from kangaroo_lab.poly import INF, Poly

sys.path.insert(0, os.path.dirname(__file__))

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCENARIOS = os.path.join(ROOT, "scenarios")

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F4 = FieldSpec(2, 2)
F8 = FieldSpec(2, 3)
F9 = FieldSpec(3, 2)
FIELDS = [F2, F3, F4, FieldSpec(5), F8, F9]


def P(text, field=F2, n=2, precision=INF):
    return parse_poly(text, field, n, precision)


def ideal(*texts, field=F2, n=2, precision=INF):
    return Ideal(tuple(P(t, field, n, precision) for t in texts), n)


def scenario_path(name):
    return os.path.join(SCENARIOS, name)


@st.composite
def polys(draw, field=F2, nvars=3, max_deg=4, max_terms=5, with_z=True):
    """Random exact polynomials; slot 0 is z unless with_z is False."""
    fields = field if isinstance(field, list) else [field]
    F = draw(st.sampled_from(fields))
    k = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(k):
        exps = draw(st.lists(st.integers(0, max_deg), min_size=nvars, max_size=nvars))
        if not with_z:
            exps[0] = 0
        if sum(exps) > max_deg:
            continue
        terms[tuple(exps)] = draw(st.integers(1, F.q - 1))
    return Poly(F, nvars, terms)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
