"""Multiframelet sets: generators whose Fourier transforms are indicators of ball unions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cyclo import CycScalar
from .fourier import fourier, inverse_fourier
from .frames import (
    BoundsReport,
    FineScaleDivergence,
    FrameError,
    GeneratorSet,
    analyze,
    enumerate_support,
    verify_frame_bounds,
)
from .functions import Atom, PFunction, inner_product, norm2
from .padic import Ball, PAdic, Relation, ball_relation, check_prime


@dataclass(frozen=True)
class BallUnionSet:
    p: int
    balls: tuple[Ball, ...]

    def __post_init__(self):
        balls = tuple(sorted(self.balls))
        for b in balls:
            if b.p != self.p:
                raise ValueError("ball over a different prime")
        for i, b1 in enumerate(balls):
            for b2 in balls[i + 1:]:
                if ball_relation(b1, b2) is not Relation.DISJOINT:
                    raise ValueError(f"balls {b1} and {b2} overlap")
        object.__setattr__(self, "balls", balls)

    def indicator(self) -> PFunction:
        return PFunction.from_balls(self.balls, self.p)

    def dilated(self, j: int) -> BallUnionSet:
        """The set p^-j F."""
        return BallUnionSet(self.p, tuple(Ball.make(b.gamma + j, b.center.shift(-j)) for b in self.balls))

    def measure(self) -> Fraction:
        return sum((b.measure() for b in self.balls), Fraction(0))


@dataclass(frozen=True)
class MultiframeletSet:
    parts: tuple[BallUnionSet, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("a multiframelet set needs at least one part")
        ps = {part.p for part in self.parts}
        if len(ps) != 1:
            raise ValueError("parts over different primes")
        for i, part in enumerate(self.parts, start=1):
            if not part.balls:
                raise ValueError(f"part {i} is empty")

    @property
    def p(self) -> int:
        return self.parts[0].p

    @property
    def L(self) -> int:
        return len(self.parts)


def generators_from_set(s: MultiframeletSet) -> GeneratorSet:
    gens = tuple(inverse_fourier(part.indicator()) for part in s.parts)
    return GeneratorSet(s.p, gens, "from-set")


def example_set(p: int) -> MultiframeletSet:
    check_prime(p)
    parts = tuple(
        BallUnionSet(p, (Ball.make(0, PAdic.of(p, Fraction(-k, p))),)) for k in range(1, p)
    )
    return MultiframeletSet(parts)


@dataclass
class SetReport:
    bounds: BoundsReport | None
    divergent: bool
    message: str = ""

    @property
    def parseval_consistent(self) -> bool:
        return self.bounds is not None and self.bounds.all_equal_to(1)


def verify_multiframelet_set(s: MultiframeletSet, corpus: Sequence[PFunction]) -> SetReport:
    gens = generators_from_set(s)
    try:
        return SetReport(verify_frame_bounds(gens, corpus), False)
    except FineScaleDivergence as exc:
        return SetReport(None, True, str(exc))


@dataclass
class NormIdentity:
    lhs: CycScalar
    rhs: CycScalar

    @property
    def equal(self) -> bool:
        return (self.lhs - self.rhs).is_zero()


def _fourier_side_term(gh: PFunction, part: BallUnionSet, j: int, a: PAdic) -> CycScalar:
    """p^-j |integral over p^-j F of chi(p^j a xi) conj(gh(xi))|^2."""
    p = part.p
    region = part.dilated(j)
    h = PFunction(p, [Atom.make(1, a.shift(j), b) for b in region.balls])
    return inner_product(h, gh).abs2() * Fraction(p) ** (-j)


def norm_identity_check(g: PFunction, s: MultiframeletSet) -> NormIdentity:
    """Both sides of the norm identity for a set whose generators are Parseval.

    Every term is integrated on the Fourier side over the dilated parts.  The
    coarse scales below the explicit window form a geometric series per
    (l, a); its ratio is confirmed on two scales before it is summed.
    """
    p = s.p
    gens = generators_from_set(s)
    try:
        plan = enumerate_support(g, gens)
    except FineScaleDivergence as exc:
        raise FrameError(f"set generators are not a Parseval system: {exc}") from exc
    if not (analyze(g, gens).norm2() - norm2(g)).is_zero():
        raise FrameError("set generators are not Parseval on g; the identity does not apply")
    gh = fourier(g)
    terms = [_fourier_side_term(gh, s.parts[l - 1], j, a) for l, j, a in plan.indices]
    if plan.tail is not None:
        J = plan.j_min - 1
        for l, a in sorted(plan.tail.amps, key=lambda k: (k[0], k[1].to_fraction())):
            top = _fourier_side_term(gh, s.parts[l - 1], J, a)
            below = _fourier_side_term(gh, s.parts[l - 1], J - 1, a)
            if not (top - below * p).is_zero():
                raise FrameError(f"coarse-scale terms for (l={l}, a={a}) are not geometric")
            terms.append(top * Fraction(p, p - 1))
    return NormIdentity(norm2(g), CycScalar.sum(p, terms))


@dataclass(frozen=True)
class Topology:
    open: bool
    compact: bool
    connected: bool


def set_topology(s: MultiframeletSet) -> Topology:
    # A nonempty finite union of balls is clopen and compact, and Q_p is
    # totally disconnected, so a union of balls (which has more than one
    # point) is never connected.
    return Topology(True, True, False)
