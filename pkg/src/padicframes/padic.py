"""Exact arithmetic on Z[1/p]: valuation, norm, fractional part, balls.

Only finite p-adic expansions are representable.  They are closed under
addition and multiplication and are enough to name every center,
translation and modulation used by the frame constructions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be a prime, got {p!r}")
    return p


class PrimeMismatch(ValueError):
    pass


def _same_prime(x, y) -> int:
    if x.p != y.p:
        raise PrimeMismatch(f"mixed primes {x.p} and {y.p}")
    return x.p


def _strip(p: int, u: int, v: int) -> tuple[int, int]:
    if u == 0:
        return 0, 0
    while u % p == 0:
        u //= p
        v += 1
    return u, v


@total_ordering
@dataclass(frozen=True, slots=True)
class PAdic:
    """The number ``u * p**v`` with ``p`` not dividing ``u`` (or ``u == 0``)."""

    p: int
    u: int
    v: int

    def __post_init__(self):
        if self.u == 0:
            if self.v != 0:
                raise ValueError("zero must be stored as u=0, v=0")
        elif self.u % self.p == 0:
            raise ValueError(f"unit part {self.u} divisible by {self.p}")

    @classmethod
    def make(cls, p: int, u: int, v: int = 0) -> PAdic:
        u, v = _strip(p, u, v)
        return cls(p, u, v)

    @classmethod
    def of(cls, p: int, value) -> PAdic:
        """Build from an int, a Fraction, a ``"num/den"`` string or a PAdic."""
        if isinstance(value, PAdic):
            if value.p != p:
                raise PrimeMismatch(f"mixed primes {value.p} and {p}")
            return value
        q = Fraction(value)
        den = q.denominator
        k = 0
        while den % p == 0:
            den //= p
            k += 1
        if den != 1:
            raise ValueError(f"{q} has a denominator that is not a power of {p}")
        return cls.make(p, q.numerator, -k)

    @classmethod
    def zero(cls, p: int) -> PAdic:
        return cls(p, 0, 0)

    # -- basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return self.u == 0

    @property
    def valuation(self) -> float | int:
        return INF if self.u == 0 else self.v

    @property
    def norm(self) -> Fraction:
        if self.u == 0:
            return Fraction(0)
        return Fraction(self.p) ** (-self.v)

    def to_fraction(self) -> Fraction:
        if self.v >= 0:
            return Fraction(self.u * self.p**self.v)
        return Fraction(self.u, self.p ** (-self.v))

    def frac(self) -> Fraction:
        """Sum of the digits at negative powers, a rational in [0, 1)."""
        if self.u == 0 or self.v >= 0:
            return Fraction(0)
        den = self.p ** (-self.v)
        return Fraction(self.u % den, den)

    def frac_padic(self) -> PAdic:
        return PAdic.of(self.p, self.frac())

    def in_ip(self) -> bool:
        """True when the number equals its own fractional part."""
        return self.to_fraction() == self.frac()

    def digits(self) -> tuple[int, ...]:
        """Base-p digits of the fractional part, from p^-1 downward."""
        f = self.frac()
        out = []
        while f:
            f *= self.p
            d = f.numerator // f.denominator
            out.append(d)
            f -= d
        return tuple(out)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: PAdic) -> PAdic:
        if not isinstance(other, PAdic):
            return NotImplemented
        p = _same_prime(self, other)
        if self.u == 0:
            return other
        if other.u == 0:
            return self
        m = min(self.v, other.v)
        s = self.u * p ** (self.v - m) + other.u * p ** (other.v - m)
        return PAdic.make(p, s, m)

    def __neg__(self) -> PAdic:
        return PAdic(self.p, -self.u, self.v)

    def __sub__(self, other: PAdic) -> PAdic:
        if not isinstance(other, PAdic):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> PAdic:
        if isinstance(other, int):
            other = PAdic.make(self.p, other)
        if not isinstance(other, PAdic):
            return NotImplemented
        p = _same_prime(self, other)
        if self.u == 0 or other.u == 0:
            return PAdic.zero(p)
        return PAdic(p, self.u * other.u, self.v + other.v)

    __rmul__ = __mul__

    def shift(self, k: int) -> PAdic:
        """Multiply by p**k."""
        if self.u == 0:
            return self
        return PAdic(self.p, self.u, self.v + k)

    def __lt__(self, other: PAdic) -> bool:
        return self.to_fraction() < other.to_fraction()

    def __str__(self) -> str:
        return f"{self.u}*{self.p}^{self.v}"

    def __repr__(self) -> str:
        return f"PAdic({self.p}, {self.to_fraction()})"


def valuation_norm(x: PAdic) -> tuple[float | int, Fraction]:
    return x.valuation, x.norm


def frac_part(x: PAdic) -> Fraction:
    return x.frac()


def character_angle(x: PAdic) -> Fraction:
    """Angle (in turns) of the additive character at ``x``."""
    return x.frac()


def canonical_center(gamma: int, x: PAdic) -> PAdic:
    """Representative of ``x + p^{-gamma} Z_p`` keeping digits below power -gamma."""
    if x.u == 0 or x.v >= -gamma:
        return PAdic.zero(x.p)
    return x.shift(gamma).frac_padic().shift(-gamma)


class Relation(Enum):
    EQUAL = "Equal"
    FIRST_INSIDE_SECOND = "FirstInsideSecond"
    SECOND_INSIDE_FIRST = "SecondInsideFirst"
    DISJOINT = "Disjoint"


@total_ordering
@dataclass(frozen=True, slots=True)
class Ball:
    """Closed ball of radius ``p**gamma`` with canonical center."""

    gamma: int
    center: PAdic

    def __post_init__(self):
        if canonical_center(self.gamma, self.center) != self.center:
            raise ValueError("ball center is not canonical; use Ball.make")

    @classmethod
    def make(cls, gamma: int, point: PAdic) -> Ball:
        return cls(gamma, canonical_center(gamma, point))

    @property
    def p(self) -> int:
        return self.center.p

    def contains(self, x: PAdic) -> bool:
        return (x - self.center).valuation >= -self.gamma

    def contains_ball(self, other: Ball) -> bool:
        return other.gamma <= self.gamma and self.contains(other.center)

    def measure(self) -> Fraction:
        return Fraction(self.p) ** self.gamma

    def children(self) -> list[Ball]:
        p = self.p
        step = PAdic.make(p, 1, -self.gamma)
        return [Ball.make(self.gamma - 1, self.center + step * i) for i in range(p)]

    def parent(self) -> Ball:
        return Ball.make(self.gamma + 1, self.center)

    def sort_key(self):
        return (self.gamma, self.center.to_fraction())

    def __lt__(self, other: Ball) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"B_{self.gamma}({self.center.to_fraction()})"


def ball_relation(b1: Ball, b2: Ball) -> Relation:
    _same_prime(b1, b2)
    if b1.gamma == b2.gamma:
        return Relation.EQUAL if b1.center == b2.center else Relation.DISJOINT
    if b1.gamma < b2.gamma:
        return Relation.FIRST_INSIDE_SECOND if b2.contains(b1.center) else Relation.DISJOINT
    return Relation.SECOND_INSIDE_FIRST if b1.contains(b2.center) else Relation.DISJOINT


def ball_children(b: Ball) -> list[Ball]:
    return b.children()


def ball_measure(b: Ball) -> Fraction:
    return b.measure()


def hull(balls) -> Ball:
    """Smallest ball containing every ball in ``balls``."""
    balls = list(balls)
    if not balls:
        raise ValueError("hull of nothing")
    h = balls[0]
    for b in balls[1:]:
        g = max(h.gamma, b.gamma)
        while not Ball.make(g, h.center).contains(b.center):
            g += 1
        h = Ball.make(g, h.center)
    return h


def ip_in_ball(ball: Ball) -> list[PAdic]:
    """Elements of I_p (numbers equal to their fractional part) inside ``ball``."""
    c = ball.center
    p = ball.p
    if ball.gamma < 0:
        return [c] if c.in_ip() else []
    out = []
    for t in range(p**ball.gamma):
        out.append((c + PAdic.make(p, t, -ball.gamma)).frac_padic())
    out.sort()
    return out
