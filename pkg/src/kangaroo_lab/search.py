"""Exhaustive search over purely inseparable candidates, with independent oracles."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product

from .blowup import BlowupChart
from .contact import Divisor, coeff_order, coefficient_ideal, weak_max_contact
from .errors import InternalAssertion, PrecisionError
from .grammar import format_poly
from .ideals import Ideal, ideal_order
from .kangaroo import VERDICT_KANGAROO, VERDICT_NO_INCREASE, detect_kangaroo, flag, ord_mod_pe_QT
from .poly import INF, Poly, p_power_root, sort_key

ORACLE_GUARD = 200_000       # largest space oracle_compare agrees to run
BRUTE_H_GUARD = 4096         # largest number of H tried per candidate


def homogeneous_monomials(n, d):
    """Exponent tuples (slot 0 = z stays 0) of degree d in x1..xn, canonical order."""
    out = []

    def rec(i, left, acc):
        if i == n:
            out.append((0,) + tuple(acc) + (left,))
            return
        for a in range(left, -1, -1):
            rec(i + 1, left - a, acc + [a])

    if n == 1:
        return [(0, d)]
    rec(1, d, [])
    return sorted(out, key=sort_key)


def poly_from_index(field_, n, d, index):
    """The homogeneous polynomial whose coefficients are the base-q digits of index."""
    mons = homogeneous_monomials(n, d)
    terms = {}
    q = field_.q
    for m in mons:
        index, digit = divmod(index, q)
        if digit:
            terms[m] = digit
    return Poly(field_, n + 1, terms)


def count_homogeneous(n, d):
    return math.comb(d + n - 1, n - 1)


def charts(space):
    F = space.field
    S = frozenset(space.S)
    if space.T == "all":
        rest = sorted(S - {1})
        Ts = [frozenset({1, *extra}) for k in range(len(rest) + 1) for extra in combinations(rest, k)]
    else:
        Ts = [frozenset(space.T)]
    out = []
    for T in Ts:
        idx = sorted(T - {1})
        if space.t == "all":
            for vals in product(list(F.nonzero_elements()), repeat=len(idx)):
                out.append(BlowupChart.make(S, T, dict(zip(idx, vals))))
        else:
            out.append(BlowupChart.make(S, T, {i: space.t[i] for i in idx}))
    return out


def cardinality(space):
    """Number of candidates, counted without enumerating them."""
    q = space.field.q
    pe = space.field.p ** space.e
    total = 0
    for d in space.degrees:
        nonzero = q ** count_homogeneous(space.n, d) - 1
        if d % pe == 0:
            nonzero -= q ** count_homogeneous(space.n, d // pe) - 1
        total += nonzero
    if space.T == "all":
        rest = len(set(space.S) - {1})
        nchart = sum(math.comb(rest, k) * (q - 1) ** k for k in range(rest + 1))
    elif space.t == "all":
        nchart = (q - 1) ** (len(space.T) - 1)
    else:
        nchart = 1
    return total * nchart


@dataclass(frozen=True, order=True)
class Candidate:
    degree: int
    index: int
    T: tuple
    t: tuple

    def chart(self, space):
        return BlowupChart.make(space.S, set(self.T), dict(self.t))

    def F(self, space):
        return poly_from_index(space.field, space.n, self.degree, self.index)


def candidates(space):
    pe = space.field.p ** space.e
    chs = charts(space)
    out = []
    for d in space.degrees:
        for idx in range(1, space.field.q ** count_homogeneous(space.n, d)):
            F = poly_from_index(space.field, space.n, d, idx)
            if d % pe == 0 and p_power_root(F, space.e) is not None:
                continue
            for ch in chs:
                out.append(Candidate(d, idx, tuple(sorted(ch.T)), ch.t))
    return out


def candidate_ideal(space, F: Poly) -> Ideal:
    nv = space.n + 1
    pe = space.field.p ** space.e
    z = Poly.var(space.field, nv, 0)
    return Ideal((((z ** pe) + F) ** space.m,), space.n)


def canonical_divisor(space, frame) -> Divisor:
    """Maximal compatible divisor s_i = ord_(x_i) K, or the zero divisor."""
    if space.policy == "zero":
        return Divisor.zero(space.n)
    s = []
    for i in range(1, space.n + 1):
        v = frame.data.order_along([i])
        s.append(0 if v == INF else v)
    return Divisor(tuple(s))


@dataclass(frozen=True)
class Record:
    key: Candidate
    F: str
    chart: str
    divisor: str
    verdict: str
    before: object
    after: object
    conditions: tuple          # flags for 1..9
    prediction: bool           # conditions (5) and (6)
    moh: str
    exc: object
    violations: tuple = ()
    discrepancies: tuple = ()
    u_match: object = None     # sigma root equals the first pulled-back cleaning step

    @property
    def increase(self):
        if self.before is None or self.after is None:
            return None
        return self.after - self.before


def brute_line_order(P: Poly, t: int):
    """Order of a polynomial in x1, x2 along the line x2 = t x1 by repeated synthetic division.

    Each homogeneous part sum a_j x1^(d-j) x2^j is divisible by (x2 - t x1)^k
    exactly when s = t is a root of multiplicity k of sum a_j s^j.
    """
    F = P.field
    check_vars = [i for m in P.terms for i, a in enumerate(m) if a and i not in (1, 2)]
    if check_vars:
        raise ValueError("brute_line_order works in x1, x2 only")
    parts = {}
    for m, c in P.terms.items():
        parts.setdefault(m[1] + m[2], {})[m[2]] = c
    best = INF
    for d, coeffs in parts.items():
        row = [coeffs.get(j, 0) for j in range(d + 1)]
        mult = 0
        while len(row) > 1:
            # divide by (s - t): Horner from the top coefficient
            quot = [0] * (len(row) - 1)
            acc = 0
            for j in range(len(row) - 1, 0, -1):
                acc = F.add(row[j], F.mul(acc, t))
                quot[j - 1] = acc
            rem = F.add(row[0], F.mul(acc, t))
            if rem:
                break
            mult += 1
            row = quot
        best = min(best, mult)
    return best


def brute_ord_mod_pe(F: Poly, chart: BlowupChart, e: int, degree: int = None):
    """max over H of ord_{Q_T}(F + H^(p^e)), H ranging over all polynomials of the given degree.

    For homogeneous F only the homogeneous H of degree deg F / p^e matter;
    that is the default.  Returns None when the H family is too large.
    """
    if F.nvars != 3:
        raise ValueError("brute force is implemented for two x-variables")
    field_ = F.field
    pe = field_.p ** e
    t = dict(chart.t).get(2, 0)
    if degree is None:
        if F.degree() % pe:
            return brute_line_order(F, t)
        mons = homogeneous_monomials(2, F.degree() // pe)
    else:
        mons = [m for d in range(degree + 1) for m in homogeneous_monomials(2, d)]
    if field_.q ** len(mons) > BRUTE_H_GUARD:
        return None
    best = -1
    for coeffs in product(list(field_.elements()), repeat=len(mons)):
        H = Poly(field_, 3, {m: c for m, c in zip(mons, coeffs) if c})
        v = brute_line_order(F + H ** pe, t)
        if v > best:
            best = v
    return best


def evaluate(space, cand: Candidate, oracle: bool = False) -> Record:
    F = cand.F(space)
    chart = cand.chart(space)
    J = candidate_ideal(space, F)
    violations = []
    discrepancies = []
    verdict, before, after, conds, moh, exc, dstr = None, None, None, (None,) * 9, "n/a", None, ""
    prediction = False
    u_match = None
    try:
        frame = weak_max_contact(J)
        D = canonical_divisor(space, frame)
        dstr = str(D)
        rep = detect_kangaroo(J, D, chart, strict=False)
        verdict, before, after, moh = rep.verdict, rep.resord_before, rep.resord_after, rep.moh
        violations += rep.violations
        if rep.proposition is not None:
            u_match = rep.proposition.u_match
        cert = rep.certificate
        if cert is not None:
            conds = tuple(cert.conditions.get(k) for k in range(1, 10))
            prediction = cert.conditions.get(5) is True and cert.conditions.get(6) is True
        tr = rep.transform
        if tr is not None:
            exc = tr.exceptional_multiplicity
            if not tr.divisible and verdict != VERDICT_KANGAROO:
                violations.append(f"exceptional multiplicity {exc} is not a multiple of c!")
        if oracle:
            discrepancies += _oracle_checks(space, F, chart, J, frame, verdict, prediction)
    except InternalAssertion as exc_:
        violations.append(f"internal assertion: {exc_}")
    except PrecisionError as exc_:
        verdict = "inconclusive"
        violations.append(f"precision: {exc_}")
    return Record(cand, format_poly(F), chart.describe(), dstr, verdict, before, after,
                  tuple(flag(c) for c in conds), prediction, moh, exc,
                  tuple(violations), tuple(discrepancies), u_match)


def _oracle_checks(space, F, chart, J, frame, verdict, prediction):
    out = []
    # the iff only speaks about permissible blowups keeping the order
    in_scope = verdict in (VERDICT_KANGAROO, VERDICT_NO_INCREASE)
    if space.m == 1 and in_scope and (verdict == VERDICT_KANGAROO) != prediction:
        out.append(f"verdict {verdict} but conditions (5) and (6) predict "
                   f"{'kangaroo' if prediction else 'no kangaroo'}")
    if space.n == 2:
        fast = ord_mod_pe_QT(F, chart, space.e)
        slow = brute_ord_mod_pe(F, chart, space.e)
        if slow is not None and fast != slow:
            out.append(f"ord_mod_pe: stripping gives {fast}, brute force gives {slow}")
    formula = coeff_order(J, frame.c)
    explicit = ideal_order(coefficient_ideal(J, frame.c))
    if formula != explicit:
        out.append(f"coefficient order: formula {formula}, explicit {explicit}")
    return out


def _run_chunk(args):
    space, chunk, oracle = args
    return [evaluate(space, cand, oracle) for cand in chunk]


@dataclass
class SearchResult:
    space: object
    declared: int
    records: list = field(default_factory=list)

    @property
    def visited(self):
        return len(self.records)

    def kangaroos(self):
        return [r for r in self.records if r.verdict == VERDICT_KANGAROO]

    def violations(self):
        return [(r.key, v) for r in self.records for v in r.violations]

    def discrepancies(self):
        return [(r.key, d) for r in self.records for d in r.discrepancies]

    def verdict_counts(self):
        counts = {}
        for r in self.records:
            counts[r.verdict] = counts.get(r.verdict, 0) + 1
        return dict(sorted(counts.items()))


def run_search(space, workers: int = 1, oracle: bool = False, reverify: bool = True) -> SearchResult:
    """Evaluate every candidate; static partition over workers, merge by candidate key."""
    declared = cardinality(space)
    cands = candidates(space)
    if len(cands) != declared:
        raise InternalAssertion(f"enumerated {len(cands)} candidates, declared {declared}")
    workers = max(1, int(workers))
    if workers == 1 or len(cands) < 2:
        records = _run_chunk((space, cands, oracle))
    else:
        chunks = [cands[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, [(space, ch, oracle) for ch in chunks]))
        records = [r for part in parts for r in part]
    records.sort(key=lambda r: r.key)
    if len({r.key for r in records}) != declared:
        raise InternalAssertion("search visited a candidate twice or skipped one")
    result = SearchResult(space, declared, records)
    if reverify:
        for i, r in enumerate(result.records):
            if r.verdict != VERDICT_KANGAROO:
                continue
            again = evaluate(space, r.key)
            if (again.verdict, again.before, again.after) != (r.verdict, r.before, r.after):
                result.records[i] = _with_violation(r, "kangaroo did not re-verify under a fresh detect")
    return result


def _with_violation(r, msg):
    from dataclasses import replace
    return replace(r, violations=r.violations + (msg,))


def check_oracle_guard(space):
    size = cardinality(space)
    if size > ORACLE_GUARD:
        raise ValueError(f"space has an estimated {size} candidates, above the oracle guard of {ORACLE_GUARD}")
    return size


def oracle_compare(space, workers: int = 1) -> list:
    """All mismatches between the pipeline and the brute-force oracles."""
    if check_oracle_guard(space) == 0:
        return []
    result = run_search(space, workers, oracle=True)
    return result.discrepancies() + result.violations()
