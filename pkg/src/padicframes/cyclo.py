"""Exact scalars of the form sum q * p^(h/2) * exp(2 pi i r).

Every scalar is kept in a canonical form: half-exponents are folded so that
each term has ``h`` in {0, 1}, angles are written over the smallest power of
``p`` that works, and the root-of-unity part of each ``h`` block is expressed
in the power basis ``1, z, ..., z^(phi(N)-1)`` of Q(z), z = exp(2 pi i/N),
N = p^m.  Two scalars are equal exactly when their term maps are equal, so
``is_zero`` is a dictionary emptiness test.

For p = 2 and p = 1 (mod 4) the square root of p lies in a cyclotomic
field (sqrt 2 = z8 + z8^-1, and for p = 1 mod 4 the quadratic Gauss sum
equals sqrt p), so ``h`` = 1 terms are rewritten as roots of unity.  For
p = 3 (mod 4) the only quadratic subfield of Q(z) is Q(sqrt -p), hence
1 and sqrt p are independent over Q(z) and the two blocks reduce separately.
Either way the canonical form is unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import mpmath

from .padic import PrimeMismatch

_ZERO = Fraction(0)


def _level(p: int, r: Fraction) -> int:
    den = r.denominator
    m = 0
    while den > 1:
        if den % p:
            raise ValueError(f"angle {r} has a denominator that is not a power of {p}")
        den //= p
        m += 1
    return m


def _reduce_block(p: int, block: dict[Fraction, Fraction]) -> dict[Fraction, Fraction]:
    """Canonical power-basis form of sum q_r * exp(2 pi i r) over rationals."""
    block = {r: q for r, q in block.items() if q}
    if not block:
        return {}
    m = max(_level(p, r) for r in block)
    if m == 0:
        return dict(block)
    n = p**m
    s = p ** (m - 1)
    phi = (p - 1) * s
    coeffs: dict[int, Fraction] = {}
    for r, q in block.items():
        e = (r.numerator * (n // r.denominator)) % n
        if e >= phi:
            # z^e = -sum_{t<p-1} z^(e - (p-1)s + t s), from Phi_N(z) = 0
            base = e - phi
            for t in range(p - 1):
                k = base + t * s
                coeffs[k] = coeffs.get(k, _ZERO) - q
        else:
            coeffs[e] = coeffs.get(e, _ZERO) + q
    coeffs = {e: q for e, q in coeffs.items() if q}
    while m > 0 and coeffs and all(e % p == 0 for e in coeffs):
        coeffs = {e // p: q for e, q in coeffs.items()}
        m -= 1
        n //= p
    return {Fraction(e, n): q for e, q in coeffs.items()}


def _legendre(a: int, p: int) -> int:
    t = pow(a, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


@lru_cache(maxsize=None)
def sqrt_p_roots(p: int) -> tuple[tuple[Fraction, int], ...] | None:
    """sqrt(p) as sum c * exp(2 pi i r) when it lies in a cyclotomic field."""
    if p == 2:
        return ((Fraction(1, 8), 1), (Fraction(7, 8), 1))
    if p % 4 == 1:
        return tuple((Fraction(a, p), _legendre(a, p)) for a in range(1, p))
    return None


def _canonical(p: int, raw: dict[tuple[int, Fraction], Fraction]) -> tuple:
    blocks: dict[int, dict[Fraction, Fraction]] = {0: {}, 1: {}}
    roots = sqrt_p_roots(p)
    for (h, r), q in raw.items():
        if not q:
            continue
        fold, hh = divmod(h, 2)
        if fold:
            q = q * Fraction(p) ** fold
        r = r - (r.numerator // r.denominator)
        if hh and roots is not None:
            blk = blocks[0]
            for rr, c in roots:
                t = r + rr
                t -= t.numerator // t.denominator
                blk[t] = blk.get(t, _ZERO) + c * q
            continue
        blk = blocks[hh]
        blk[r] = blk.get(r, _ZERO) + q
    terms = []
    for h in (0, 1):
        for r, q in sorted(_reduce_block(p, blocks[h]).items()):
            terms.append((h, r, q))
    return tuple(terms)


@dataclass(frozen=True, slots=True)
class CycScalar:
    """Exact scalar; ``terms`` is a sorted tuple of ``(h, r, q)``."""

    p: int
    terms: tuple = ()

    # -- construction -------------------------------------------------------
    @classmethod
    def from_terms(cls, p: int, items: Iterable[tuple[int, Fraction, Fraction]]) -> CycScalar:
        raw: dict[tuple[int, Fraction], Fraction] = {}
        for h, r, q in items:
            key = (h, Fraction(r))
            raw[key] = raw.get(key, _ZERO) + Fraction(q)
        return cls(p, _canonical(p, raw))

    @classmethod
    def rational(cls, p: int, q) -> CycScalar:
        q = Fraction(q)
        return cls(p, ((0, _ZERO, q),) if q else ())

    @classmethod
    def zero(cls, p: int) -> CycScalar:
        return cls(p, ())

    @classmethod
    def one(cls, p: int) -> CycScalar:
        return cls.rational(p, 1)

    @classmethod
    def root(cls, p: int, angle) -> CycScalar:
        """exp(2 pi i * angle)."""
        return cls.from_terms(p, [(0, Fraction(angle), Fraction(1))])

    @classmethod
    def half_power(cls, p: int, k: int, q=1) -> CycScalar:
        """q * p^(k/2)."""
        return cls.from_terms(p, [(k, _ZERO, Fraction(q))])

    @classmethod
    def sum(cls, p: int, scalars: Iterable[CycScalar]) -> CycScalar:
        """Add many scalars with a single canonicalisation pass."""
        raw: dict[tuple[int, Fraction], Fraction] = {}
        for s in scalars:
            if s.p != p:
                raise PrimeMismatch(f"mixed primes {s.p} and {p}")
            for h, r, q in s.terms:
                key = (h, r)
                raw[key] = raw.get(key, _ZERO) + q
        return cls(p, _canonical(p, raw))

    def _coerce(self, other) -> CycScalar:
        if isinstance(other, CycScalar):
            if other.p != self.p:
                raise PrimeMismatch(f"mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.rational(self.p, other)
        raise TypeError(f"cannot combine CycScalar with {type(other).__name__}")

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def as_fraction(self) -> Fraction | None:
        if not self.terms:
            return _ZERO
        if len(self.terms) == 1:
            h, r, q = self.terms[0]
            if h == 0 and r == 0:
                return q
        return None

    def is_real(self) -> bool:
        return self == self.conjugate()

    def level(self) -> int:
        return max((_level(self.p, r) for _, r, _ in self.terms), default=0)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> CycScalar:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CycScalar.sum(self.p, (self, other))

    __radd__ = __add__

    def __neg__(self) -> CycScalar:
        return CycScalar(self.p, tuple((h, r, -q) for h, r, q in self.terms))

    def __sub__(self, other) -> CycScalar:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> CycScalar:
        return (-self) + other

    def __mul__(self, other) -> CycScalar:
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return CycScalar.zero(self.p)
            return CycScalar(self.p, tuple((h, r, q * other) for h, r, q in self.terms))
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        raw: dict[tuple[int, Fraction], Fraction] = {}
        for h1, r1, q1 in self.terms:
            for h2, r2, q2 in other.terms:
                key = (h1 + h2, r1 + r2)
                raw[key] = raw.get(key, _ZERO) + q1 * q2
        return CycScalar(self.p, _canonical(self.p, raw))

    __rmul__ = __mul__

    def __truediv__(self, other) -> CycScalar:
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * self._coerce(other).inverse()

    def conjugate(self) -> CycScalar:
        return CycScalar.from_terms(self.p, ((h, -r, q) for h, r, q in self.terms))

    def abs2(self) -> CycScalar:
        return self * self.conjugate()

    def galois(self, k: int) -> CycScalar:
        """Apply exp(2 pi i r) -> exp(2 pi i k r) to the canonical terms.

        When p = 3 (mod 4) the square root of p is left fixed.
        """
        return CycScalar.from_terms(self.p, ((h, k * r, q) for h, r, q in self.terms))

    def _split(self) -> tuple[CycScalar, CycScalar]:
        a = CycScalar(self.p, tuple(t for t in self.terms if t[0] == 0))
        b = CycScalar(self.p, tuple((0, r, q) for h, r, q in self.terms if h == 1))
        return a, b

    def inverse(self) -> CycScalar:
        if not self.terms:
            raise ZeroDivisionError("inverse of zero scalar")
        q = self.as_fraction()
        if q is not None:
            return CycScalar.rational(self.p, 1 / q)
        a, b = self._split()
        if b:
            # (a + sqrt(p) b)^-1 = (a - sqrt(p) b) / (a^2 - p b^2)
            den = a * a - b * b * self.p
            if not den:
                raise ZeroDivisionError("scalar has no inverse in the tracked field")
            conj = a - b * CycScalar.half_power(self.p, 1)
            return conj * den.inverse()
        p = self.p
        m = a.level()
        n = p**m
        others = [k for k in range(2, n) if k % p]
        prod = CycScalar.one(p)
        for k in others:
            prod = prod * a.galois(k)
        norm = (a * prod).as_fraction()
        if norm is None:
            raise ArithmeticError("Galois norm did not reduce to a rational")
        return prod * (1 / norm)

    # -- numerics -----------------------------------------------------------
    def approx(self, precision_bits: int = 53) -> tuple[mpmath.mpf, mpmath.mpf]:
        if precision_bits < 24:
            raise ValueError("precision_bits must be at least 24")
        with mpmath.workprec(precision_bits + 16):
            re = mpmath.mpf(0)
            im = mpmath.mpf(0)
            sq = mpmath.sqrt(self.p)
            for h, r, q in self.terms:
                mag = mpmath.mpf(q.numerator) / q.denominator
                if h:
                    mag *= sq
                ang = 2 * mpmath.pi * mpmath.mpf(r.numerator) / r.denominator
                re += mag * mpmath.cos(ang)
                im += mag * mpmath.sin(ang)
            return +re, +im

    def __complex__(self) -> complex:
        re, im = self.approx(53)
        return complex(float(re), float(im))

    def __float__(self) -> float:
        re, _ = self.approx(53)
        return float(re)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for h, r, q in self.terms:
            s = str(q)
            if h:
                s += f"*{self.p}^(1/2)"
            if r:
                s += f"*e(2pi i {r})"
            parts.append(s)
        return " + ".join(parts)


def scalar_arith(a: CycScalar, b: CycScalar, op: str) -> CycScalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def reduce_and_is_zero(a: CycScalar) -> tuple[CycScalar, bool]:
    c = CycScalar.from_terms(a.p, a.terms)
    return c, c.is_zero()


def approx_eval(a: CycScalar, precision_bits: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    return a.approx(precision_bits)


def numerically_zero(a: CycScalar, bits: int = 64, threshold_bits: int = 40) -> bool:
    re, im = a.approx(bits)
    return mpmath.sqrt(re * re + im * im) < mpmath.mpf(2) ** (-threshold_bits)


def sign(a: CycScalar) -> int:
    """Sign of a real scalar: zero is decided exactly, the rest by refinement."""
    if not a.is_real():
        raise ValueError("sign of a non-real scalar")
    if a.is_zero():
        return 0
    scale = Fraction(sum(abs(q) for _, _, q in a.terms) * (a.p + 1))
    bits = 64
    while bits <= 8192:
        re, _ = a.approx(bits)
        err = mpmath.mpf(scale.numerator) / scale.denominator * mpmath.mpf(2) ** (8 - bits) * (len(a.terms) + 1)
        if abs(re) > err:
            return 1 if re > 0 else -1
        bits *= 2
    raise ArithmeticError("sign undecided at 8192 bits")


def compare(a: CycScalar, b: CycScalar) -> int:
    return sign(a - b)
