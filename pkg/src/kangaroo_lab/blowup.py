"""Monomial blowups in the x1-chart with subordinate coordinates."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .contact import ContactFrame, Divisor
from .errors import InternalAssertion, check
from .ideals import CoordPrime, Ideal, order_along
from .poly import Poly, substitute


@dataclass(frozen=True)
class BlowupChart:
    """Center V(z, x_i : i in S); the chart point is fixed by T and t_i (i in T minus 1).

    ``t`` maps indices to raw encoded field elements.
    """

    S: frozenset
    T: frozenset
    t: tuple = ()   # sorted (index, value) pairs

    def __post_init__(self):
        S, T = frozenset(self.S), frozenset(self.T)
        t = dict(self.t)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "t", tuple(sorted(t.items())))
        if 1 not in S:
            raise ValueError("the center must contain x1 (blowup in the x1-chart)")
        if 1 not in T:
            raise ValueError("T must contain 1")
        if not T <= S:
            raise ValueError("T must be a subset of S")
        if set(t) != T - {1}:
            raise ValueError("translation constants must be given exactly for T minus {1}")
        if any(v == 0 for v in t.values()):
            raise ValueError("translation constant must be nonzero")

    @classmethod
    def make(cls, S, T=None, t=None):
        T = {1} if T is None else T
        return cls(frozenset(S), frozenset(T), tuple(sorted((t or {}).items())))

    @property
    def translations(self):
        return dict(self.t)

    def validate(self, n):
        if max(self.S) > n or min(self.S) < 1:
            raise ValueError(f"chart indices must lie in 1..{n}")

    def prime(self):
        return CoordPrime(True, self.S)

    def describe(self):
        s = ",".join(map(str, sorted(self.S)))
        tt = ",".join(map(str, sorted(self.T)))
        extra = "".join(f", t{i}={v}" for i, v in self.t)
        return f"S={{{s}}}, T={{{tt}}}{extra}"


def chart_images(chart: BlowupChart, field, nv):
    x1 = Poly.var(field, nv, 1)
    images = {0: x1 * Poly.var(field, nv, 0)}
    t = chart.translations
    for i in chart.S - {1}:
        xi = Poly.var(field, nv, i)
        if i in chart.T:
            images[i] = x1 * (xi + Poly(field, nv, {(0,) * nv: t[i]}))
        else:
            images[i] = x1 * xi
    return images


def chart_substitution(f: Poly, chart: BlowupChart) -> Poly:
    """z -> x1 z, x_i -> x1 (x_i + t_i) on T-1, x_i -> x1 x_i on S-T, others fixed."""
    return substitute(f, chart_images(chart, f.field, f.nvars))


def _x1_power(d, nv):
    m = [0] * nv
    m[1] = d
    return m


def weak_transform(J: Ideal, chart: BlowupChart) -> Ideal:
    """pi(J) divided by x1^ord_P(J)."""
    d = order_along(J, chart.prime())
    out = []
    for g in J.gens:
        h = chart_substitution(g, chart)
        try:
            out.append(h.exact_divide_monomial(_x1_power(d, g.nvars)))
        except ArithmeticError as exc:
            raise InternalAssertion(f"weak transform: {exc}") from exc
    return Ideal(tuple(out), J.n)


@dataclass(frozen=True)
class TransformResult:
    ideal: Ideal
    divisor: Divisor
    lost: frozenset
    exceptional_multiplicity: int
    divisible: bool     # exceptional multiplicity is a multiple of c!


def divisor_transform(D: Divisor, chart: BlowupChart, frame: ContactFrame):
    """D' = D^strict + (ord_P K - c!) E in the x1-chart.

    Returns (D', lost components, exceptional multiplicity, divisible-by-c!).
    """
    cf = math.factorial(frame.c)
    exc = frame.data.order_along(sorted(chart.S)) - cf
    check(exc >= 0, f"negative exceptional multiplicity {exc}: blowup was not permissible")
    s = list(D.s)
    lost = chart.T - {1}
    s[0] = exc
    for i in lost:
        s[i - 1] = 0
    return Divisor(tuple(s)), frozenset(lost), exc, exc % cf == 0


def blowup(J: Ideal, D: Divisor, chart: BlowupChart, frame: ContactFrame) -> TransformResult:
    """Weak transform of the frame's ideal together with the divisor transform."""
    Jp = weak_transform(frame.ideal, chart)
    Dp, lost, exc, div = divisor_transform(D, chart, frame)
    return TransformResult(Jp, Dp, lost, exc, div)


@dataclass(frozen=True)
class PermissibilityReport:
    equimultiple_J: bool
    equimultiple_I: bool
    chart_normal_form: bool
    center_in_V: bool = True
    normal_crossings: bool = True

    @property
    def ok(self):
        return all((self.equimultiple_J, self.equimultiple_I, self.chart_normal_form,
                    self.center_in_V, self.normal_crossings))

    def failures(self):
        names = ("equimultiple_J", "equimultiple_I", "chart_normal_form", "center_in_V", "normal_crossings")
        return [n for n in names if not getattr(self, n)]


def permissibility_check(J: Ideal, D: Divisor, chart: BlowupChart, frame: ContactFrame) -> PermissibilityReport:
    """Center inside the equimultiple loci of J and I, chart in normal form.

    Containment in V(u) and normal crossings with D hold for coordinate
    centers and are recorded as satisfied.
    """
    chart.validate(J.n)
    c = frame.c
    eq_J = order_along(frame.ideal, chart.prime()) == c
    S = sorted(chart.S)
    ord_P_I = frame.data.order_along(S) - sum(D[i] for i in S)
    ord_I = frame.o - D.total()
    eq_I = ord_P_I == ord_I
    normal = chart.T == {1} or all(D[i] >= 1 for i in chart.T)
    return PermissibilityReport(eq_J, eq_I, normal)


def y_coordinates(chart: BlowupChart, field, nv):
    """(to_y, from_y): substitutions writing an x-polynomial in y and back.

    y_i = x_i - t_i x1 for i in T minus 1 and y_i = x_i otherwise.  Apply
    ``to_y`` to F(x) to get F as a polynomial in y (same variable slots).
    """
    t = chart.translations
    x1 = Poly.var(field, nv, 1)
    to_y, from_y = {}, {}
    for i, ti in t.items():
        xi = Poly.var(field, nv, i)
        shift = x1.mul_encoded(ti)
        to_y[i] = xi + shift
        from_y[i] = xi - shift
    return to_y, from_y


def to_y(f: Poly, chart: BlowupChart) -> Poly:
    return substitute(f, y_coordinates(chart, f.field, f.nvars)[0])


def from_y(f: Poly, chart: BlowupChart) -> Poly:
    return substitute(f, y_coordinates(chart, f.field, f.nvars)[1])


def monomial_chart(f: Poly, chart: BlowupChart) -> Poly:
    """The blowup in y-coordinates: z -> x1 z, y1 -> x1, y_i -> x1 x_i (i in S-1)."""
    F, nv = f.field, f.nvars
    x1 = Poly.var(F, nv, 1)
    images = {0: x1 * Poly.var(F, nv, 0)}
    for i in chart.S - {1}:
        images[i] = x1 * Poly.var(F, nv, i)
    return substitute(f, images)


def qt_degree(m):
    """Degree of a y-monomial in Q_T = (y_2, ..., y_n); slot 0 (z) is ignored."""
    return sum(m[2:])


def pull_back(g: Poly, chart: BlowupChart):
    """q with pi(q) = x1 * g, or None when x1 * g has no preimage.

    In y-coordinates the chart map is monomial: y1 -> x1, y_i -> x1 x_i
    for i in S-1, other variables fixed.
    """
    S = chart.S - {1}
    terms = {}
    for m, c in g.terms.items():
        if m[0]:
            return None
        b = sum(m[i] for i in S)
        a = m[1] + 1 - b
        if a < 0:
            return None
        terms[(0, a) + m[2:]] = c
    q = from_y(g.like(terms), chart)
    x1 = Poly.var(g.field, g.nvars, 1)
    check(chart_substitution(q, chart) == x1 * g, "chart pull-back does not invert the blowup")
    return q
