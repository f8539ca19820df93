"""Sparse polynomials in z, x1..xn over F_{p^k}, read as power-series jets.

A :class:`Poly` knows every coefficient in total degree < ``precision``;
``math.inf`` marks an exact polynomial.  Exponent position 0 is z,
positions 1..n are x1..xn.
"""

from __future__ import annotations

import math

from .errors import PrecisionError
from .field import FieldSpec, Scalar, lucas_binom

INF = math.inf


def _deg(m):
    return sum(m)


def sort_key(m):
    """Graded lex with z greatest; ascending degree, so jets print low order first."""
    return (sum(m), tuple(-e for e in m))


class Poly:
    __slots__ = ("field", "nvars", "terms", "precision")

    def __init__(self, field: FieldSpec, nvars: int, terms=None, precision=INF):
        if precision != INF and precision < 0:
            precision = 0
        self.field = field
        self.nvars = nvars
        self.precision = precision
        clean = {}
        if terms:
            for m, c in terms.items():
                if c and sum(m) < precision:
                    clean[m] = c
        self.terms = clean

    @classmethod
    def _raw(cls, field, nvars, terms, precision):
        # caller guarantees: nonzero coefficients, degrees below precision
        self = object.__new__(cls)
        self.field = field
        self.nvars = nvars
        self.terms = terms
        self.precision = precision
        return self

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field, nvars, precision=INF):
        return cls._raw(field, nvars, {}, precision)

    @classmethod
    def constant(cls, field, nvars, c, precision=INF):
        c = _scalar_value(field, c)
        return cls(field, nvars, {(0,) * nvars: c}, precision)

    @classmethod
    def monomial(cls, field, nvars, exponents, c=1, precision=INF):
        c = _scalar_value(field, c)
        return cls(field, nvars, {tuple(exponents): c}, precision)

    @classmethod
    def var(cls, field, nvars, index, precision=INF):
        m = [0] * nvars
        m[index] = 1
        return cls(field, nvars, {tuple(m): 1}, precision)

    def like(self, terms, precision=None):
        return Poly(self.field, self.nvars, terms, self.precision if precision is None else precision)

    # -- basic queries -----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        for m in sorted(self.terms, key=sort_key):
            yield m, self.terms[m]

    def coefficient(self, m) -> int:
        return self.terms.get(tuple(m), 0)

    def degree(self):
        if not self.terms:
            return -1
        return max(map(_deg, self.terms))

    def min_degree(self):
        """Smallest total degree of a stored term (inf when there is none)."""
        if not self.terms:
            return INF
        return min(map(_deg, self.terms))

    def valuation_bound(self):
        """Certified lower bound for the order of the series this jet represents."""
        return min(self.min_degree(), self.precision)

    def is_exact(self):
        return self.precision == INF

    def exact(self):
        """Same terms, declared exact (for forms known to be complete)."""
        return Poly._raw(self.field, self.nvars, self.terms, INF)

    def is_homogeneous(self):
        return len({_deg(m) for m in self.terms}) <= 1

    def homogeneous_part(self, d):
        if d >= self.precision:
            raise PrecisionError(f"degree {d} part lies beyond precision {self.precision}", self.precision)
        return Poly._raw(self.field, self.nvars, {m: c for m, c in self.terms.items() if _deg(m) == d}, INF)

    def initial_form(self):
        if not self.terms:
            return Poly.zero(self.field, self.nvars)
        return self.homogeneous_part(self.min_degree())

    def variables(self):
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    def var_order(self, index):
        """Largest power of the given variable dividing every stored term."""
        if not self.terms:
            return INF
        return min(m[index] for m in self.terms)

    def leading_scalar(self):
        if not self.terms:
            return 0
        return self.terms[min(self.terms, key=sort_key)]

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field is other.field and self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, int):
            return self == Poly.constant(self.field, self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field is not self.field or other.nvars != self.nvars:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, (int, Scalar)):
            return Poly.constant(self.field, self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        prec = min(self.precision, other.precision)
        terms = {m: c for m, c in self.terms.items() if _deg(m) < prec}
        for m, c in other.terms.items():
            if _deg(m) >= prec:
                continue
            v = F.add(terms.get(m, 0), c)
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Poly._raw(F, self.nvars, terms, prec)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly._raw(F, self.nvars, {m: F.neg(c) for m, c in self.terms.items()}, self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "Poly":
        """Multiply by a Scalar or an integer (integers land in the prime field)."""
        return self.mul_encoded(_scalar_value(self.field, c))

    def mul_encoded(self, c: int) -> "Poly":
        """Multiply by a raw encoded field element."""
        F = self.field
        if c == 0:
            return Poly.zero(F, self.nvars, self.precision)
        if c == 1:
            return self
        return Poly._raw(F, self.nvars, {m: F.mul(v, c) for m, v in self.terms.items()}, self.precision)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        prec = min(self.precision + other.valuation_bound(), other.precision + self.valuation_bound())
        terms = {}
        mul, add = F.mul, F.add
        items = list(other.terms.items())
        for m1, c1 in self.terms.items():
            d1 = _deg(m1)
            for m2, c2 in items:
                if d1 + _deg(m2) >= prec:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                v = add(terms.get(m, 0), mul(c1, c2))
                if v:
                    terms[m] = v
                else:
                    del terms[m]
        return Poly._raw(F, self.nvars, terms, prec)

    __rmul__ = __mul__

    def frobenius(self, e=1):
        """self^(p^e), computed by raising exponents (additive in characteristic p)."""
        F = self.field
        pe = F.p ** e
        prec = self.precision
        if prec != INF:
            prec = prec + (pe - 1) * self.valuation_bound()
        terms = {tuple(a * pe for a in m): F.pow(c, pe) for m, c in self.terms.items()}
        return Poly(F, self.nvars, terms, prec)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        p = self.field.p
        e = 0
        while n and n % p == 0:
            n //= p
            e += 1
        base = self.frobenius(e) if e else self
        result = Poly.constant(self.field, self.nvars, 1)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_divide_monomial(self, exponents):
        """Divide by a monomial; every stored term must be divisible."""
        ex = tuple(exponents)
        terms = {}
        for m, c in self.terms.items():
            q = tuple(a - b for a, b in zip(m, ex))
            if min(q) < 0:
                raise ArithmeticError(f"term {m} is not divisible by {ex}")
            terms[q] = c
        prec = self.precision - sum(ex) if self.precision != INF else INF
        return Poly(self.field, self.nvars, terms, prec)

    def map_terms(self, fn, precision=None):
        terms = {}
        F = self.field
        for m, c in self.terms.items():
            out = fn(m, c)
            if out is None:
                continue
            m2, c2 = out
            v = F.add(terms.get(m2, 0), c2)
            if v:
                terms[m2] = v
            else:
                terms.pop(m2, None)
        return Poly(F, self.nvars, terms, self.precision if precision is None else precision)

    # -- display -----------------------------------------------------------

    def __str__(self):
        from .grammar import format_poly
        return format_poly(self)

    def __repr__(self):
        prec = "exact" if self.precision == INF else f"prec={self.precision}"
        return f"Poly({self}, {prec})"


def _scalar_value(field, c):
    if isinstance(c, Scalar):
        if c.field is not field:
            raise ValueError("scalar from a different field")
        return c.value
    # integers land in the prime subfield
    return field.from_int(c)


# -- operations named in the algebra-core contract --------------------------

def truncate(f: Poly, d: int) -> Poly:
    """Drop every term of total degree > d."""
    if d < 0:
        raise ValueError("truncation degree must be >= 0")
    prec = min(f.precision, d + 1)
    return Poly._raw(f.field, f.nvars, {m: c for m, c in f.terms.items() if _deg(m) <= d}, prec)


def hasse_derivative(f: Poly, var: int, order: int) -> Poly:
    """Hasse derivative d/dx^(k): x^a -> C(a, k) x^(a-k), coefficients via Lucas."""
    if order < 0:
        raise ValueError("Hasse derivative order must be >= 0")
    if order == 0:
        return f
    F = f.field
    p = F.p
    terms = {}
    for m, c in f.terms.items():
        a = m[var]
        b = lucas_binom(a, order, p)
        if b == 0:
            continue
        m2 = list(m)
        m2[var] = a - order
        terms[tuple(m2)] = F.mul(c, b)
    prec = f.precision - order if f.precision != INF else INF
    return Poly(F, f.nvars, terms, prec)


def p_power_root(f: Poly, ell: int):
    """g with g^(p^ell) = f, or None when some exponent is not divisible by p^ell."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if ell == 0:
        return f
    F = f.field
    pe = F.p ** ell
    terms = {}
    for m, c in f.terms.items():
        if any(a % pe for a in m):
            return None
        terms[tuple(a // pe for a in m)] = F.frobenius_root(c, ell)
    prec = f.precision
    if prec != INF:
        prec = -(-prec // pe)
    return Poly(F, f.nvars, terms, prec)


def max_p_power(f: Poly):
    """Largest ell with f a p^ell-th power; inf for constants and zero."""
    p = f.field.p
    g = 0
    for m in f.terms:
        for a in m:
            g = math.gcd(g, a)
    if g == 0:
        return INF
    ell = 0
    while g % p == 0:
        g //= p
        ell += 1
    return ell


def substitute(f: Poly, assignment: dict) -> Poly:
    """Formal substitution of polynomials for variables.

    Unassigned variables map to themselves.  The result is exact in degrees
    below min(propagated precision, precision(f) * least order of the images);
    a substitution that leaves no certified degree raises PrecisionError.
    """
    F, nv = f.field, f.nvars
    images = []
    for i in range(nv):
        g = assignment.get(i)
        if g is None:
            g = Poly.var(F, nv, i)
        elif isinstance(g, (int, Scalar)):
            g = Poly.constant(F, nv, g)
        images.append(g)
    used = f.variables()
    if f.precision == INF:
        tail = INF
    else:
        mu = min((images[i].valuation_bound() for i in range(nv)), default=1)
        tail = f.precision * mu if mu != INF else INF
        if tail <= 0:
            raise PrecisionError(
                f"substitution lowers certified degree of a precision-{f.precision} jet to 0", f.precision)
    powers = [dict() for _ in range(nv)]

    def power(i, a):
        cache = powers[i]
        if a not in cache:
            cache[a] = images[i] ** a
        return cache[a]

    result = Poly.zero(F, nv, tail)
    for m, c in f.terms.items():
        term = Poly(F, nv, {(0,) * nv: c}, tail)
        for i in used:
            a = m[i]
            if a:
                term = term * power(i, a)
        result = result + term
    if result.precision > tail:
        result = Poly(F, nv, result.terms, tail)
    if result.precision != INF and result.precision <= 0 and f.terms:
        raise PrecisionError("substitution exhausted the precision budget", f.precision)
    return result
