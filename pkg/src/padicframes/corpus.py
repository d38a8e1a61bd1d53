"""Deterministic random test functions driven by a SplitMix64 stream."""

from __future__ import annotations

from fractions import Fraction

from .cyclo import CycScalar
from .functions import Atom, PFunction, integrate
from .padic import Ball, PAdic, check_prime
from .tables import CoefficientTable

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        if not 0 <= seed <= MASK:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.state = seed

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next() % n

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)


def random_atom(rng: SplitMix64, p: int) -> Atom:
    gamma = rng.between(-3, 2)
    center = sum(
        (Fraction(rng.below(p)) * Fraction(p) ** k for k in (-gamma - 1, -gamma - 2)),
        Fraction(0),
    )
    depth = rng.between(0, 3)
    b = sum((Fraction(rng.below(p)) * Fraction(p) ** (gamma - k) for k in range(1, depth + 1)), Fraction(0))
    coeff = Fraction(rng.between(-16, 16), rng.between(1, 16))
    return Atom.make(coeff, PAdic.of(p, b), Ball.make(gamma, PAdic.of(p, center)))


def random_function(rng: SplitMix64, p: int, zero_mean: bool = False) -> PFunction:
    while True:
        n = rng.between(1, 3)
        f = PFunction(p, [random_atom(rng, p) for _ in range(n)])
        if zero_mean and not f.is_zero():
            h = max((at.ball for at in f.atoms), key=lambda b: b.gamma)
            mean = integrate(f) * (Fraction(1) / h.measure())
            f = f - PFunction.indicator(h, mean)
        if not f.is_zero():
            return f


def generate_corpus(p: int, seed: int, size: int, zero_mean: bool = False) -> list[PFunction]:
    check_prime(p)
    if size < 1:
        raise ValueError("corpus size must be at least 1")
    rng = SplitMix64(seed)
    return [random_function(rng, p, zero_mean) for _ in range(size)]


def random_table(rng: SplitMix64, p: int, L: int, max_entries: int = 4) -> CoefficientTable:
    """Finite table with translations of denominator at most p^2 and scales in [-2, 2]."""
    entries = {}
    while not entries:
        for _ in range(rng.between(1, max_entries)):
            l = rng.between(1, L)
            j = rng.between(-2, 2)
            a = PAdic.of(p, Fraction(rng.below(p * p), p * p))
            entries[(l, j, a)] = CycScalar.rational(p, Fraction(rng.between(-16, 16), rng.between(1, 16)))
        entries = {k: v for k, v in entries.items() if not v.is_zero()}
    return CoefficientTable(p, entries)
