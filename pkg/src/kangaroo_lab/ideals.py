"""Ideals as generator lists; plain, weighted and coordinate-prime orders."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import PrecisionError
from .poly import INF, Poly


@dataclass(frozen=True)
class Ideal:
    """Ideal of the jet ring generated by ``gens``; an empty tuple is the zero ideal."""

    gens: tuple
    n: int

    def __post_init__(self):
        gens = tuple(self.gens)
        object.__setattr__(self, "gens", gens)
        for g in gens:
            if g.nvars != self.n + 1:
                raise ValueError("generator lives in a ring with a different variable count")
        if gens and len({g.field for g in gens}) != 1:
            raise ValueError("generators over different fields")

    @classmethod
    def of(cls, *gens):
        return cls(tuple(gens), gens[0].nvars - 1)

    @property
    def field(self):
        return self.gens[0].field

    @property
    def precision(self):
        return min((g.precision for g in self.gens), default=INF)

    def is_zero(self):
        return all(g.is_zero() for g in self.gens)

    def map(self, fn) -> "Ideal":
        return Ideal(tuple(fn(g) for g in self.gens), self.n)

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)


@dataclass(frozen=True)
class CoordPrime:
    """The prime generated by z (optionally) and x_i for i in S."""

    include_z: bool
    S: frozenset

    def __post_init__(self):
        object.__setattr__(self, "S", frozenset(self.S))
        if not self.include_z and not self.S:
            raise ValueError("coordinate prime needs z or some x_i")

    def indices(self):
        return ([0] if self.include_z else []) + sorted(self.S)

    def x_part(self):
        return CoordPrime(False, self.S)


def order(f: Poly):
    """Total-degree order; inf for an exact zero, PrecisionError for a vanished jet."""
    if f.terms:
        return f.min_degree()
    if f.precision == INF:
        return INF
    raise PrecisionError(f"order is >= {f.precision}, the jet precision", f.precision)


def ideal_order(J: Ideal):
    """Minimum order over generators."""
    known = min((g.min_degree() for g in J.gens), default=INF)
    bound = min((g.precision for g in J.gens if not g.terms), default=INF)
    if known <= bound:
        return known
    raise PrecisionError(f"ideal order is >= {bound}, the jet precision", bound)


def initial_form(f: Poly) -> Poly:
    return f.initial_form()


def order_along(J, P: CoordPrime):
    """sup{k : J inside P^k}, read off the stored terms."""
    gens = J.gens if isinstance(J, Ideal) else (J,)
    idx = P.indices()
    best = INF
    prec = INF
    for g in gens:
        prec = min(prec, g.precision)
        for m in g.terms:
            v = sum(m[i] for i in idx)
            if v < best:
                best = v
    if best == INF and prec != INF:
        raise PrecisionError("every generator vanished inside the jet precision", prec)
    if best != INF and best >= prec:
        raise PrecisionError(f"order along the prime is >= {prec}", prec)
    return best


def z_expansion(f: Poly):
    """[(i, f_i)] with f = sum f_i z^i and f_i free of z, i ascending.

    f_i carries precision precision(f) - i.
    """
    buckets = {}
    for m, c in f.terms.items():
        buckets.setdefault(m[0], {})[(0,) + m[1:]] = c
    out = []
    for i in sorted(buckets):
        prec = f.precision - i if f.precision != INF else INF
        out.append((i, Poly(f.field, f.nvars, buckets[i], prec)))
    return out


def z_coefficient(f: Poly, i: int) -> Poly:
    terms = {(0,) + m[1:]: c for m, c in f.terms.items() if m[0] == i}
    prec = f.precision - i if f.precision != INF else INF
    return Poly(f.field, f.nvars, terms, prec)


def _weighted_entries(f, w):
    """Known values w*i + ord f_i and the lower bound left by vanished f_i."""
    w = Fraction(w)
    known = {}
    for i, fi in z_expansion(f):
        known[i] = w * i + fi.min_degree()
    bound = INF
    if f.precision != INF:
        # any z-power without a stored coefficient can hide terms of degree >= prec
        for i in range(0, int(f.precision) + 1):
            if i in known:
                continue
            bound = min(bound, w * i + (f.precision - i))
    return known, bound


def weighted_order(f: Poly, w):
    """min_i (w*i + ord f_i) for the weight vector (w, 1, ..., 1)."""
    w = Fraction(w)
    if w < 1:
        raise ValueError("weight must be >= 1")
    known, bound = _weighted_entries(f, w)
    best = min(known.values(), default=INF)
    if best == INF and bound == INF:
        return INF
    if best > bound:
        raise PrecisionError(f"weighted order is >= {bound} inside the jet precision", f.precision)
    return best


def weighted_initial_form(f: Poly, w) -> Poly:
    """sum of in(f_i) z^i over the indices attaining the weighted order."""
    best = weighted_order(f, w)
    w = Fraction(w)
    nv = f.nvars
    out = Poly.zero(f.field, nv)
    if best == INF:
        return out
    terms = {}
    for i, fi in z_expansion(f):
        if w * i + fi.min_degree() == best:
            for m, c in fi.initial_form().terms.items():
                terms[(i,) + m[1:]] = c
    return Poly(f.field, nv, terms)


def z_regular_witness(J: Ideal, c: int):
    """A combination f of generators with f_c(0) != 0, normalized to f_c(0) = 1.

    Only the coefficient of z^c x^0 decides z-regularity, and it is linear
    in the generators, so a single generator with that coefficient non-zero
    exists whenever any combination has one.  Returns None otherwise.
    """
    key = (c,) + (0,) * J.n
    for g in J.gens:
        lead = g.terms.get(key, 0)
        if lead:
            return g.mul_encoded(g.field.inv(lead))
    return None


def pairwise_witness_search(J: Ideal, c: int):
    """Brute-force confirmation of :func:`z_regular_witness` over pairs a*g + b*h.

    Coefficients range over the whole field when it has at most 16
    elements.  Used by tests as an independent check.
    """
    F = J.field
    key = (c,) + (0,) * J.n
    coeffs = list(F.elements()) if F.q <= 16 else [0, 1]
    gens = J.gens
    for i, g in enumerate(gens):
        for h in gens[i:]:
            for a, b in product(coeffs, coeffs):
                if a == 0 and b == 0:
                    continue
                lead = F.add(F.mul(a, g.terms.get(key, 0)), F.mul(b, h.terms.get(key, 0)))
                if lead:
                    return True
    return False
