"""Finite fields F_{p^k} with elements encoded as small integers.

An element sum_j c_j a^j of F_p[a]/(modulus) is stored as the integer
sum_j c_j p^j.  Polynomials store these raw integers; :class:`Scalar` is
the user-facing wrapper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

_TABLE_LIMIT = 1 << 16
_ADD_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def lucas_binom(top: int, bottom: int, p: int) -> int:
    """Binomial coefficient C(top, bottom) mod p, digit by digit in base p."""
    if bottom < 0 or top < 0 or bottom > top:
        return 0
    result = 1
    while bottom:
        t, b = top % p, bottom % p
        if b > t:
            return 0
        result = result * math.comb(t, b) % p
        top //= p
        bottom //= p
    return result


# -- polynomials over F_p as coefficient lists, constant term first --------

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(_fp_trim(a)) - 1 >= dm:
        shift = len(a) - 1 - dm
        factor = a[-1] * inv_lead % p
        for j, mj in enumerate(m):
            a[shift + j] = (a[shift + j] - factor * mj) % p
    return a


def _monic_polys(degree, p):
    for code in range(p ** degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(code % p)
            code //= p
        yield coeffs + [1]


def is_irreducible(modulus, p) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    m = _fp_trim([c % p for c in modulus])
    k = len(m) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for cand in _monic_polys(d, p):
            if not _fp_trim(_fp_mod(m, cand, p)):
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p, k):
    """Smallest monic irreducible polynomial of degree k over F_p."""
    for cand in _monic_polys(k, p):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class FieldSpec:
    """The finite field F_{p^k}.

    Instances are interned per (p, k, modulus), so identity comparison is
    field equality.
    """

    _cache: dict = {}

    def __new__(cls, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if k == 1:
            modulus = None
        else:
            modulus = tuple(default_modulus(p, k) if modulus is None else (c % p for c in modulus))
            if len(modulus) != k + 1 or modulus[-1] == 0:
                raise ValueError(f"modulus must have degree {k}")
            if modulus[-1] != 1:
                inv = pow(modulus[-1], -1, p)
                modulus = tuple(c * inv % p for c in modulus)
        key = (p, k, modulus)
        self = cls._cache.get(key)
        if self is not None:
            return self
        if modulus is not None and not is_irreducible(modulus, p):
            raise ValueError(f"modulus {list(modulus)} is reducible over F_{p}")
        self = super().__new__(cls)
        self.p = p
        self.k = k
        self.modulus = modulus
        self.q = p ** k
        self._setup()
        cls._cache[key] = self
        return self

    def __getnewargs__(self):
        return (self.p, self.k, self.modulus)

    def __repr__(self):
        if self.k == 1:
            return f"FieldSpec(p={self.p})"
        return f"FieldSpec(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    # -- construction helpers -------------------------------------------

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds):
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _add_slow(self, a, b):
        p = self.p
        return self._undigits([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))])

    def _mul_slow(self, a, b):
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        red = _fp_mod(prod, self.modulus, p)
        red = red + [0] * (k - len(red))
        return self._undigits(red[:k])

    def _setup(self):
        q = self.q
        self._exp = self._log = self._add_t = None
        if self.k == 1:
            return
        if q <= _ADD_TABLE_LIMIT:
            self._add_t = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]
        if q <= _TABLE_LIMIT:
            factors = _prime_factors(q - 1)
            for g in range(2, q):
                if all(self._pow_slow(g, (q - 1) // r) != 1 for r in factors):
                    break
            exp = [1] * (q - 1)
            for i in range(1, q - 1):
                exp[i] = self._mul_slow(exp[i - 1], g)
            log = [0] * q
            for i, v in enumerate(exp):
                log[v] = i
            self._exp, self._log = exp, log
            self.generator = g

    def _pow_slow(self, a, n):
        result = 1
        while n:
            if n & 1:
                result = self._mul_slow(result, a)
            a = self._mul_slow(a, a)
            n >>= 1
        return result

    # -- arithmetic on encoded integers ----------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self._add_t is not None:
            return self._add_t[a][b]
        return self._add_slow(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        p = self.p
        return self._undigits([-d % p for d in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero in " + repr(self))
        if self.k == 1:
            return pow(a, -1, self.p)
        if self._exp is not None:
            return self._exp[-self._log[a] % (self.q - 1)]
        return self._pow_slow(a, self.q - 2)

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self.k == 1:
            return pow(a, n, self.p)
        if a == 0:
            return 1 if n == 0 else 0
        if self._exp is not None:
            return self._exp[self._log[a] * n % (self.q - 1)]
        return self._pow_slow(a, n % (self.q - 1))

    def frobenius_root(self, a: int, e: int) -> int:
        """The unique b with b^(p^e) = a."""
        shift = (-e) % self.k
        return self.pow(a, self.p ** shift)

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self):
        return range(self.q)

    def nonzero_elements(self):
        return range(1, self.q)

    def format(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        parts = []
        for j, d in reversed(list(enumerate(self._digits(a)))):
            if d == 0:
                continue
            if j == 0:
                parts.append(str(d))
            else:
                mon = "a" if j == 1 else f"a^{j}"
                parts.append(mon if d == 1 else f"{d}*{mon}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Scalar:
    """An element of a FieldSpec, canonical by construction."""

    field: FieldSpec
    value: int

    def __post_init__(self):
        if self.field.k == 1:
            object.__setattr__(self, "value", self.value % self.field.p)
        elif not 0 <= self.value < self.field.q:
            raise ValueError(f"{self.value} is not an encoded element of {self.field!r}")

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise ValueError("scalars from different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else Scalar(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else Scalar(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else Scalar(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else Scalar(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, n: int):
        return Scalar(self.field, self.field.pow(self.value, n))

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self * Scalar(self.field, self.field.inv(b))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.field.format(self.value)


def frobenius_root(a: Scalar, e: int) -> Scalar:
    if e < 1:
        raise ValueError("frobenius_root needs e >= 1")
    return Scalar(a.field, a.field.frobenius_root(a.value, e))


def generator(field: FieldSpec) -> Scalar:
    """The class of the extension generator ``a``."""
    if field.k == 1:
        raise ValueError("prime fields have no extension generator")
    return Scalar(field, field.p)
