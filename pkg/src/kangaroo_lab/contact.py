"""Coefficient ideals, cleaning towards weak maximal contact, residual order."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import NotZRegular, PrecisionError, check
from .field import lucas_binom
from .ideals import Ideal, ideal_order, z_coefficient, z_expansion, z_regular_witness
from .poly import INF, Poly, p_power_root, substitute

MAXIMAL = "maximal"
PURE_POWER = "pure-power"
PRECISION_EXHAUSTED = "precision-exhausted"


@dataclass(frozen=True)
class Divisor:
    """Multiplicities s_i of the coordinate hypersurfaces V(x_i), i = 1..n."""

    s: tuple

    def __post_init__(self):
        s = tuple(int(v) for v in self.s)
        if any(v < 0 for v in s):
            raise ValueError("divisor multiplicities must be non-negative")
        object.__setattr__(self, "s", s)

    @classmethod
    def zero(cls, n):
        return cls((0,) * n)

    @property
    def n(self):
        return len(self.s)

    def total(self):
        return sum(self.s)

    def __getitem__(self, i):
        """Multiplicity of V(x_i), 1-based."""
        return self.s[i - 1]

    def __str__(self):
        terms = [f"{v}*V(x{i})" if v != 1 else f"V(x{i})" for i, v in enumerate(self.s, 1) if v]
        return " + ".join(terms) if terms else "0"


def largest_p_power(c, p):
    """(p^e, e) with p^e the largest power of p dividing c."""
    e = 0
    while c % p ** (e + 1) == 0:
        e += 1
    return p ** e, e


@dataclass(frozen=True)
class CoefficientEntry:
    gen: int
    shift: int          # enrichment z^shift * generator
    index: int          # position i < c in the z-expansion
    coeff: Poly         # f_i, free of z
    exponent: int       # c! / (c - i)

    def contribution(self):
        return self.exponent * self.coeff.min_degree()


@dataclass(frozen=True)
class CoefficientData:
    """Everything the coefficient ideal's valuations depend on.

    ``vanished_bound`` is the least scaled order that a coefficient known
    to vanish only up to precision could still have.
    """

    c: int
    entries: tuple
    vanished_bound: object

    @cached_property
    def known_order(self):
        return min((e.contribution() for e in self.entries), default=INF)

    def reliable(self):
        return self.known_order <= self.vanished_bound

    def order(self):
        if self.known_order == INF and self.vanished_bound == INF:
            return INF
        if not self.reliable():
            raise PrecisionError(
                f"coefficient order is >= {self.vanished_bound} inside the jet precision", self.vanished_bound)
        return self.known_order

    def order_along(self, indices):
        """Scaled order of the coefficient ideal along the prime (x_i : i in indices)."""
        best = INF
        for e in self.entries:
            v = min((sum(m[i] for i in indices) for m in e.coeff.terms), default=INF)
            best = min(best, e.exponent * v)
        return best

    def minimal_entries(self):
        o = self.known_order
        return [e for e in self.entries if e.contribution() == o]


def coefficient_data(J: Ideal, c: int) -> CoefficientData:
    if c < 1:
        raise ValueError("coefficient ideal needs order c >= 1")
    cf = math.factorial(c)
    entries = []
    bound = INF
    for g_idx, g in enumerate(J.gens):
        coeffs = dict(z_expansion(g))
        for j in range(c):
            fj = coeffs.get(j)
            if fj is None:
                if g.precision != INF:
                    bound = min(bound, cf // (c - j) * (g.precision - j))
                continue
            for shift in range(c - j):
                i = j + shift
                entries.append(CoefficientEntry(g_idx, shift, i, fj, cf // (c - i)))
    return CoefficientData(c, tuple(entries), bound)


def coefficient_ideal(J: Ideal, c: int) -> Ideal:
    """Generators f_i^(c!/(c-i)) over the generators and their z-shifts.

    The zero ideal (no generators) signals J = (z^c) up to precision.
    """
    data = coefficient_data(J, c)
    gens = []
    seen = set()
    for e in data.entries:
        key = (e.gen, e.index - e.shift, e.exponent)
        if key in seen:
            continue
        seen.add(key)
        gens.append(e.coeff ** e.exponent)
    return Ideal(tuple(gens), J.n)


def coeff_order(J: Ideal, c: int):
    """min over generators f and i < c of (c!/(c-i)) * ord f_i."""
    return coefficient_data(J, c).order()


def shift_z(J: Ideal, q: Poly) -> Ideal:
    """Rewrite J in the coordinate u = z - q (substitute z -> z + q)."""
    z = Poly.var(q.field, q.nvars, 0)
    return J.map(lambda g: substitute(g, {0: z + q}))


def cleaning_step(J: Ideal, c: int, data: CoefficientData = None):
    """The homogeneous q raising the coefficient order under u = z - q, or None.

    None means V(z) already maximizes the coefficient order.  The only
    candidate is the p^e-th root of -C(c, p^e)^-1 * in(f_{c-p^e}) for a
    normalized z-regular f; it is tried and kept only when the order rises.
    """
    f = z_regular_witness(J, c)
    if f is None:
        raise NotZRegular(f"no generator contains z^{c} with unit coefficient")
    if data is None:
        data = coefficient_data(J, c)
    o = data.order()
    if o == INF:
        raise ValueError("coefficient ideal vanishes; nothing to clean")
    F = J.field
    p = F.p
    w = Fraction(o, math.factorial(c))
    if w.denominator != 1:
        return None
    w = int(w)
    pe, e = largest_p_power(c, p)
    for i in range(c - pe + 1, c):
        fi = z_coefficient(f, i)
        if fi.terms and fi.min_degree() == (c - i) * w:
            return None
    fcp = z_coefficient(f, c - pe)
    if not fcp.terms or fcp.min_degree() != pe * w:
        return None
    lam = F.neg(F.inv(lucas_binom(c, pe, p)))
    g = fcp.initial_form().mul_encoded(lam)
    q = p_power_root(g, e)
    if q is None:
        return None
    new = coefficient_data(shift_z(J, q), c)
    if new.known_order <= o:
        return None
    return q


@dataclass(frozen=True)
class ContactFrame:
    """Result of cleaning: J rewritten in u = z - q_total and its coefficient data."""

    c: int
    ideal: Ideal
    q_total: Poly
    data: CoefficientData
    o: object
    status: str
    orders: tuple = ()
    steps: tuple = ()

    @property
    def w(self):
        if self.o == INF:
            return INF
        return Fraction(self.o, math.factorial(self.c))

    @cached_property
    def K(self) -> Ideal:
        return coefficient_ideal(self.ideal, self.c)

    def hypersurface(self):
        from .grammar import format_poly
        if not self.q_total.terms:
            return "V(z)"
        return f"V({format_poly(Poly.var(self.q_total.field, self.q_total.nvars, 0) - self.q_total)})"


EXACT_WEIGHT_BUDGET = 64


def _frame_status(data):
    if data.known_order == INF:
        return PURE_POWER
    if not data.reliable():
        return PRECISION_EXHAUSTED
    return None


def weak_max_contact(J: Ideal) -> ContactFrame:
    """Iterate cleaning steps until no homogeneous coordinate change helps."""
    c = ideal_order(J)
    if c == INF or c < 1:
        raise ValueError("weak maximal contact needs an ideal of finite order >= 1")
    nv = J.n + 1
    q_total = Poly.zero(J.field, nv)
    cur = J
    orders = []
    steps = []
    # exact input whose contact coordinate is a power series, not a polynomial,
    # would clean forever; stop once w passes the budget
    budget = math.factorial(c) * EXACT_WEIGHT_BUDGET if J.precision == INF else INF
    limit = J.precision if J.precision != INF else budget
    while True:
        data = coefficient_data(cur, c)
        status = _frame_status(data)
        o = data.known_order if status != PURE_POWER else INF
        if status is None:
            check(not orders or o > orders[-1], "cleaning did not raise the coefficient order")
            if o > budget:
                status = PRECISION_EXHAUSTED
        orders.append(o)
        if status is not None:
            return ContactFrame(c, cur, q_total, data, o, status, tuple(orders), tuple(steps))
        try:
            q = cleaning_step(cur, c, data)
        except NotZRegular:
            q = None
        if q is None:
            return ContactFrame(c, cur, q_total, data, o, MAXIMAL, tuple(orders), tuple(steps))
        check(len(steps) < limit, "cleaning did not terminate within the precision budget")
        steps.append(q)
        q_total = q_total + q
        cur = shift_z(cur, q)


@dataclass(frozen=True)
class ResidualOrder:
    value: object
    frame: ContactFrame
    compatible: bool
    offending: tuple = ()   # (generator index, z-index, variable) when incompatible

    def describe(self):
        if self.compatible:
            return f"residual order {self.value}"
        g, i, var = self.offending
        return f"incompatible: coefficient f_{i} of generator {g + 1} is not divisible enough by x{var}"


def compatibility(frame: ContactFrame, D: Divisor):
    """First (generator, index, variable) whose coefficient power is not divisible by x^s."""
    for e in frame.data.entries:
        if e.shift:
            continue
        for j, s in enumerate(D.s, 1):
            if s and e.exponent * e.coeff.var_order(j) < s:
                return (e.gen, e.index, j)
    return None


def residual_order(J: Ideal, D: Divisor, frame: ContactFrame = None) -> ResidualOrder:
    """ord K - ord M for the maximal-contact frame, when K = M * I."""
    if frame is None:
        frame = weak_max_contact(J)
    if frame.o == INF or frame.status != MAXIMAL:
        raise PrecisionError(f"coefficient order not finite and certified (status {frame.status})")
    if D.n != J.n:
        raise ValueError("divisor and ideal have different variable counts")
    bad = compatibility(frame, D)
    if bad is not None:
        return ResidualOrder(None, frame, False, bad)
    return ResidualOrder(frame.o - D.total(), frame, True)
