"""Exact scalar arithmetic over Q and over the cyclotomic field Q(xi).

A :class:`CycloScalar` is an element of Q(xi), xi a primitive k-th root of
unity, stored as the canonical residue modulo the k-th cyclotomic polynomial
Phi_k. Reducing modulo Phi_k (rather than xi^k - 1) makes the quotient a
field, so every nonzero element has an inverse.

Values are immutable and carry their cyclotomic order ``k``; mixing two
different orders in one operation raises :class:`ContextMismatchError`.
Rationals are plain :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import ContextMismatchError, DivisionByZeroError, ParseError

Rational = Fraction


def _poly_trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _int_poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic; exact integer division is safe.
    num = list(num)
    q = [0] * max(0, len(num) - len(den) + 1)
    while len(num) >= len(den) and _poly_trim(num):
        shift = len(num) - len(den)
        factor = num[-1]
        q[shift] = factor
        for i, d in enumerate(den):
            num[shift + i] -= factor * d
        _poly_trim(num)
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_poly(k: int) -> tuple[int, ...]:
    """Coefficients of Phi_k, ascending, monic integer polynomial."""
    if k < 1:
        raise ValueError("cyclotomic order must be positive")
    if k == 1:
        return (-1, 1)
    num = [-1] + [0] * (k - 1) + [1]  # x^k - 1
    for d in range(1, k):
        if k % d == 0:
            num, rem = _int_poly_divmod(num, list(cyclotomic_poly(d)))
            assert not _poly_trim(rem)
    return tuple(num)


def _reduce_mod_phi(k: int, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(k)
    d = len(phi) - 1
    out = list(coeffs) + [Fraction(0)] * max(0, d - len(coeffs))
    for e in range(len(out) - 1, d - 1, -1):
        c = out[e]
        if c:
            for i in range(d):
                out[e - d + i] -= c * phi[i]
    return tuple(out[:d])


class CycloScalar:
    """Canonical element of Q(xi) for a fixed cyclotomic order k."""

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs):
        d = len(cyclotomic_poly(k)) - 1
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != d:
            coeffs = list(_reduce_mod_phi(k, coeffs))
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CycloScalar is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, k: int, value) -> "CycloScalar":
        d = len(cyclotomic_poly(k)) - 1
        return cls(k, [Fraction(value)] + [Fraction(0)] * (d - 1))

    @classmethod
    def zero(cls, k: int) -> "CycloScalar":
        return cls.from_rational(k, 0)

    @classmethod
    def one(cls, k: int) -> "CycloScalar":
        return cls.from_rational(k, 1)

    @classmethod
    def xi(cls, k: int) -> "CycloScalar":
        return xi_pow(k, 1)

    # -- helpers -----------------------------------------------------------

    def _coerce(self, other) -> "CycloScalar":
        if isinstance(other, CycloScalar):
            if other.k != self.k:
                raise ContextMismatchError(
                    f"cyclotomic order mismatch: {self.k} vs {other.k}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloScalar.from_rational(self.k, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- field operations --------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloScalar(self.k, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(self.k, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloScalar(self.k, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        d = len(a)
        if d == 1:
            return CycloScalar(self.k, (a[0] * b[0],))
        conv = [Fraction(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        return CycloScalar(self.k, conv)

    __rmul__ = __mul__

    def inv(self) -> "CycloScalar":
        """Multiplicative inverse, by the extended Euclid algorithm mod Phi_k."""
        if self.is_zero():
            raise DivisionByZeroError("inverse of zero")
        phi = [Fraction(c) for c in cyclotomic_poly(self.k)]
        r0, r1 = phi, _poly_trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while True:
            if len(r1) == 1:
                c = r1[0]
                return CycloScalar(self.k, [x / c for x in s1])
            q, rem = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, _poly_trim(rem)
            s_new = _poly_sub(s0, _poly_mul(q, s1))
            s0, s1 = s1, s_new
            if not r1:
                raise ArithmeticError("Phi_k not coprime to element")  # unreachable

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = CycloScalar.one(self.k)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- comparisons and rendering ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloScalar.from_rational(self.k, other)
        if not isinstance(other, CycloScalar):
            return NotImplemented
        return self.k == other.k and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.k, self.coeffs))

    def __str__(self):
        terms = []
        for e, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if e == 0:
                terms.append((str(abs(c)), c < 0))
            else:
                base = "xi" if e == 1 else f"xi^{e}"
                mag = abs(c)
                body = base if mag == 1 else f"{mag}*{base}"
                terms.append((body, c < 0))
        if not terms:
            return "0"
        out = []
        for idx, (body, neg) in enumerate(terms):
            if idx == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"CycloScalar(k={self.k}, {self})"


def _frac_poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    while len(num) >= len(den) and _poly_trim(num):
        shift = len(num) - len(den)
        factor = num[-1] / den[-1]
        q[shift] = factor
        for i, d in enumerate(den):
            num[shift + i] -= factor * d
        _poly_trim(num)
    return q, num


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, ai in enumerate(a):
        out[i] += ai
    for i, bi in enumerate(b):
        out[i] -= bi
    return _poly_trim(out)


def xi_pow(k: int, e: int) -> CycloScalar:
    """xi^e reduced to canonical form; e may be negative."""
    e %= k
    d = len(cyclotomic_poly(k)) - 1
    coeffs = [Fraction(0)] * (e + 1)
    coeffs[e] = Fraction(1)
    if e < d:
        return CycloScalar(k, coeffs + [Fraction(0)] * (d - e - 1))
    return CycloScalar(k, coeffs)


def inv(a: CycloScalar) -> CycloScalar:
    return a.inv()


def field_op(a: CycloScalar, b: CycloScalar, op: str) -> CycloScalar:
    """Named dispatch used by the driver; op is one of add, sub, mul."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown field op {op!r}")


def parse_scalar(k: int, text: str) -> CycloScalar:
    """Parse the canonical rendering, e.g. ``1/2 + 3*xi^2`` or ``-xi``."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty scalar")
    i = 0
    total = CycloScalar.zero(k)
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    while i <= len(s):
        j = i
        while j < len(s) and s[j] not in "+-":
            j += 1
        term = s[i:j]
        if not term:
            raise ParseError(f"bad scalar syntax in {text!r}")
        total = total + sign * _parse_scalar_term(k, term, text)
        if j >= len(s):
            break
        sign = -1 if s[j] == "-" else 1
        i = j + 1
    return total


def _parse_scalar_term(k: int, term: str, original: str) -> CycloScalar:
    coeff = Fraction(1)
    rest = term
    if "*" in term:
        head, rest = term.split("*", 1)
        coeff = Fraction(head)
    if rest.startswith("xi"):
        e = 1
        tail = rest[2:]
        if tail.startswith("^"):
            e = int(tail[1:])
        elif tail:
            raise ParseError(f"bad scalar syntax in {original!r}")
        return coeff * xi_pow(k, e)
    try:
        return CycloScalar.from_rational(k, Fraction(rest) * coeff)
    except ValueError as exc:
        raise ParseError(f"bad scalar syntax in {original!r}") from exc
