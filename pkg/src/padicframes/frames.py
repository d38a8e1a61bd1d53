"""Wavelet-structured frame systems f_{j,a}(x) = p^(j/2) f(p^-j x - a), a in I_p.

Analysis, synthesis and the frame operator are computed exactly.  The index
set of the analysis operator is infinite, but for a compactly supported g
only finitely many fine-scale coefficients are nonzero, and below some scale
every coefficient is ``(integral of g) * conj(f(-a)) * p^(j/2)``.  That coarse
part is carried as a closed-form geometric tail.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from .cyclo import CycScalar, compare, sign
from .functions import (
    Atom,
    PFunction,
    Translate,
    dilate_translate,
    evaluate,
    inner_product,
    integrate,
    norm2,
    unitary_apply,
)
from .padic import Ball, PAdic, check_prime, hull, ip_in_ball
from .tables import CoefficientTable, FrameIndex, Tail

log = logging.getLogger(__name__)


class FrameError(ValueError):
    pass


class FineScaleDivergence(FrameError):
    """A generator with nonzero integral: the fine-scale sum diverges for every g != 0."""


class UnresummableTail(FrameError):
    pass


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    p: int
    generators: tuple[PFunction, ...]
    label: str = ""

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a generator set needs at least one generator")
        for f in self.generators:
            if f.p != self.p:
                raise ValueError(f"generator over {f.p} in a set over {self.p}")
            if f.is_zero():
                raise ValueError("generators must be nonzero")
        object.__setattr__(self, "generators", tuple(self.generators))

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def L(self) -> int:
        return len(self.generators)

    def generator(self, l: int) -> PFunction:
        return self.generators[l - 1]

    @cached_property
    def hulls(self) -> tuple[Ball, ...]:
        return tuple(f.hull() for f in self.generators)

    @cached_property
    def constancy(self) -> int:
        return min(f.constancy() for f in self.generators)

    @cached_property
    def integrals(self) -> tuple[CycScalar, ...]:
        return tuple(integrate(f) for f in self.generators)

    @cached_property
    def zero_mean(self) -> bool:
        return all(i.is_zero() for i in self.integrals)

    @cached_property
    def _elements(self) -> dict:
        return {}

    def element(self, l: int, j: int, a: PAdic) -> PFunction:
        key = (l, j, a)
        cache = self._elements
        if key not in cache:
            cache[key] = dilate_translate(self.generator(l), j, a)
        return cache[key]

    def scaled(self, factors: Sequence, label: str = "") -> GeneratorSet:
        return GeneratorSet(self.p, tuple(f.scale(c) for f, c in zip(self.generators, factors)), label)

    def __add__(self, other: GeneratorSet) -> GeneratorSet:
        return GeneratorSet(self.p, self.generators + other.generators, f"{self.label}+{other.label}")


def kozyrev_generators(p: int) -> GeneratorSet:
    check_prime(p)
    zp = Ball.make(0, PAdic.zero(p))
    gens = tuple(PFunction.indicator(zp, 1, PAdic.make(p, k, -1)) for k in range(1, p))
    return GeneratorSet(p, gens, f"kozyrev({p})")


def ks_modulations(p: int, m: int) -> list[PAdic]:
    out = []
    for digits in product(range(p), repeat=m):
        # digits[-1] is the coefficient of p^-m
        if digits[-1] == 0:
            continue
        num = 0
        for d in digits:
            num = num * p + d
        out.append(PAdic.make(p, num, -m))
    out.sort()
    return out


def ks_generators(p: int, m: int) -> GeneratorSet:
    check_prime(p)
    if m < 1:
        raise ValueError("m must be at least 1")
    zp = Ball.make(0, PAdic.zero(p))
    gens = tuple(PFunction.indicator(zp, 1, s) for s in ks_modulations(p, m))
    return GeneratorSet(p, gens, f"ks({p},{m})")


def doubled(gens: GeneratorSet) -> GeneratorSet:
    return GeneratorSet(gens.p, gens.generators * 2, f"2x{gens.label}")


def weighted(gens: GeneratorSet, weights: Sequence) -> GeneratorSet:
    return gens.scaled(weights, f"{list(map(str, weights))}*{gens.label}")


# -- analysis ---------------------------------------------------------------


@dataclass
class SupportPlan:
    indices: list[FrameIndex]
    j_min: int
    j_max: int
    tail: Tail | None


def _natural_j_min(g: PFunction, gens: GeneratorSet) -> int:
    h = g.hull()
    jt = gens.constancy - h.gamma
    if not h.center.is_zero():
        jt = min(jt, gens.constancy + h.center.v)
    return jt + 1


def enumerate_support(g: PFunction, gens: GeneratorSet, j_min: int | None = None) -> SupportPlan:
    """Every index whose coefficient can be nonzero, plus the coarse tail."""
    if g.p != gens.p:
        raise FrameError("prime mismatch")
    if not gens.zero_mean:
        raise FineScaleDivergence(
            "a generator has nonzero integral; the fine-scale coefficient sum diverges"
        )
    p = g.p
    if g.is_zero():
        return SupportPlan([], 0, -1, None)
    natural = _natural_j_min(g, gens)
    if j_min is None:
        j_min = natural
    elif j_min > natural:
        raise FrameError(f"j_min={j_min} is above the first exact scale {natural}")
    seen: set[FrameIndex] = set()
    j_max = j_min - 1
    for l, f in enumerate(gens.generators, start=1):
        R = gens.hulls[l - 1].gamma
        for ga in g.atoms:
            top = R - ga.constancy() - 1
            j_max = max(j_max, top)
            for j in range(j_min, top + 1):
                for fa in f.atoms:
                    r = max(fa.ball.gamma - j, ga.ball.gamma) + j
                    target = ga.ball.center.shift(-j) - fa.ball.center
                    for a in ip_in_ball(Ball.make(r, target)):
                        seen.add(FrameIndex(l, j, a))
    tail = None
    ig = integrate(g)
    if not ig.is_zero():
        amps = {}
        for l, f in enumerate(gens.generators, start=1):
            for fa in f.atoms:
                for a in ip_in_ball(Ball.make(fa.ball.gamma, -fa.ball.center)):
                    if (l, a) in amps:
                        continue
                    v = ig * evaluate(f, -a).conjugate()
                    if not v.is_zero():
                        amps[(l, a)] = v
        tail = Tail(j_min, amps) if amps else None
    indices = sorted(seen, key=FrameIndex.key)
    return SupportPlan(indices, j_min, j_max, tail)


def analyze(g: PFunction, gens: GeneratorSet, j_min: int | None = None) -> CoefficientTable:
    plan = enumerate_support(g, gens, j_min)
    entries = {}
    for idx in plan.indices:
        v = inner_product(g, gens.element(*idx))
        if not v.is_zero():
            entries[idx] = v
    return CoefficientTable(g.p, entries, plan.tail)


def sum_squares(g: PFunction, gens: GeneratorSet) -> CycScalar:
    return analyze(g, gens).norm2()


# -- synthesis --------------------------------------------------------------


def _hull_at_origin(f: PFunction) -> int:
    h = hull([*f.balls(), Ball.make(f.constancy(), PAdic.zero(f.p))])
    g = h.gamma
    while not Ball.make(g, PAdic.zero(f.p)).contains_ball(h):
        g += 1
    return g


def _dilation_sum(K: PFunction, lo: int, hi: int) -> list[Atom]:
    """Atoms of sum_{j=lo}^{hi} p^j K(p^-j x)."""
    atoms = []
    for j in range(lo, hi + 1):
        d = dilate_translate(K, j, PAdic.zero(K.p))
        atoms.extend(d.scale(CycScalar.half_power(K.p, j)).atoms)
    return atoms


def resum_tail(tail: Tail, gens: GeneratorSet) -> PFunction:
    """Closed form of sum_{j<j_min} sum_{l,a} amp p^(j/2) f^(l)_{j,a}.

    With K(y) = sum amp f_l(y - a) the tail is h(x) = sum_{j<j_min} p^j K(p^-j x).
    That function is compactly supported exactly when
    Phi(u) = sum_{i <= R} p^i K(p^-i u) vanishes on the unit sphere, which is
    checked here before the closed form is used.
    """
    p = gens.p
    K = PFunction(
        p,
        [at for (l, a), amp in tail.amps.items() for at in Translate(a).apply(gens.generator(l)).scale(amp).atoms],
    )
    if K.is_zero():
        return PFunction.zero(p)
    R = _hull_at_origin(K)
    c = min(K.constancy(), R)
    k0 = evaluate(K, PAdic.zero(p))
    unit = Ball.make(0, PAdic.zero(p))
    inner_ball = Ball.make(-1, PAdic.zero(p))
    phi_atoms = _dilation_sum(K, c + 1, R)
    phi_atoms.append(Atom.make(k0 * (Fraction(p) ** (c + 1) / (p - 1)), PAdic.zero(p), unit))
    phi = PFunction(p, phi_atoms)
    if not (phi.restrict(unit) - phi.restrict(inner_ball)).is_zero():
        raise UnresummableTail(
            "coarse-scale sum of the generators is not compactly supported; "
            "the tail has no finite closed form"
        )
    J = tail.j_min - 1
    support = Ball.make(R - J - 1, PAdic.zero(p))
    lo = c - R + J + 2
    atoms = _dilation_sum(K, lo, J)
    atoms.append(Atom.make(k0 * (Fraction(p) ** lo / (p - 1)), PAdic.zero(p), support))
    return PFunction(p, atoms).restrict(support)


def synthesize(t: CoefficientTable, gens: GeneratorSet) -> PFunction:
    atoms = []
    for idx, c in t.sorted_items():
        atoms.extend(gens.element(*idx).scale(c).atoms)
    if t.tail is not None:
        atoms.extend(resum_tail(t.tail, gens).atoms)
    return PFunction(gens.p, atoms)


def frame_operator_apply(g: PFunction, gens: GeneratorSet) -> PFunction:
    return synthesize(analyze(g, gens), gens)


# -- bounds -----------------------------------------------------------------


@dataclass(frozen=True)
class FrameBounds:
    A: Fraction
    B: Fraction
    optimal: bool = False

    def __post_init__(self):
        A, B = Fraction(self.A), Fraction(self.B)
        if not (0 < A <= B):
            raise ValueError(f"need 0 < A <= B, got {A}, {B}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)


def ratio(num: CycScalar, den: CycScalar) -> CycScalar:
    q1, q2 = num.as_fraction(), den.as_fraction()
    if q1 is not None and q2 is not None:
        return CycScalar.rational(num.p, q1 / q2)
    return num * den.inverse()


def format_scalar(x: CycScalar) -> str:
    q = x.as_fraction()
    return str(q) if q is not None else f"{float(x):.17g}"


@dataclass
class BoundsReport:
    ratios: list[CycScalar]
    claimed: FrameBounds | None
    observed_min: CycScalar | None
    observed_max: CycScalar | None
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def all_equal_to(self, q) -> bool:
        return all((r - q).is_zero() for r in self.ratios)

    def summary(self) -> dict:
        return {
            "ratios": [format_scalar(r) for r in self.ratios],
            "observed_min": None if self.observed_min is None else format_scalar(self.observed_min),
            "observed_max": None if self.observed_max is None else format_scalar(self.observed_max),
            "claimed": None if self.claimed is None else [str(self.claimed.A), str(self.claimed.B)],
            "passed": self.passed,
            "failures": self.failures,
        }


def verify_frame_bounds(
    gens: GeneratorSet, corpus: Sequence[PFunction], claimed: FrameBounds | None = None
) -> BoundsReport:
    ratios = []
    failures = []
    lo = hi = None
    for i, g in enumerate(corpus):
        n = norm2(g)
        if n.is_zero():
            raise FrameError(f"corpus member {i} has zero norm")
        s = sum_squares(g, gens)
        r = ratio(s, n)
        ratios.append(r)
        if lo is None or compare(r, lo) < 0:
            lo = r
        if hi is None or compare(r, hi) > 0:
            hi = r
        if claimed is not None:
            if sign(s - n * claimed.A) < 0:
                failures.append({"index": i, "side": "lower", "sum": format_scalar(s), "bound": str(claimed.A * n.as_fraction()) if n.as_fraction() is not None else format_scalar(n * claimed.A)})
            if sign(n * claimed.B - s) < 0:
                failures.append({"index": i, "side": "upper", "sum": format_scalar(s), "bound": str(claimed.B * n.as_fraction()) if n.as_fraction() is not None else format_scalar(n * claimed.B)})
    return BoundsReport(ratios, claimed, lo, hi, failures)


def exact_sqrt(x, p: int) -> CycScalar | None:
    """sqrt(x) as q * p^(k/2) when x = q^2 p^k with q rational, else None."""
    if isinstance(x, CycScalar):
        x = x.as_fraction()
        if x is None:
            return None
    x = Fraction(x)
    if x <= 0:
        return None
    k = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return CycScalar.half_power(p, k, Fraction(rn, rd))


def rescale_to_parseval(gens: GeneratorSet, A) -> GeneratorSet:
    root = exact_sqrt(A, gens.p)
    if root is None:
        raise FrameError(f"1/sqrt({A}) is not representable as rational * p^(k/2)")
    inv = root.inverse()
    return gens.scaled([inv] * gens.L, f"{gens.label}/sqrt({A})")


@dataclass
class NormBoundReport:
    rows: list[dict]

    @property
    def passed(self) -> bool:
        return all(r["within_bound"] and r["invariant"] for r in self.rows)


def element_norm_bound_check(
    gens: GeneratorSet, bounds: FrameBounds, samples: Sequence[tuple[int, int, PAdic]]
) -> NormBoundReport:
    rows = []
    for l, j, a in samples:
        n = norm2(gens.element(l, j, a))
        rows.append(
            {
                "l": l,
                "j": j,
                "a": str(a.to_fraction()),
                "norm2": format_scalar(n),
                "within_bound": sign(n - bounds.B) <= 0,
                "invariant": (n - norm2(gens.generator(l))).is_zero(),
            }
        )
    return NormBoundReport(rows)


@dataclass
class TransportReport:
    original: list[CycScalar]
    transported: list[CycScalar]

    @property
    def passed(self) -> bool:
        return len(self.original) == len(self.transported) and all(
            (x - y).is_zero() for x, y in zip(self.original, self.transported)
        )


def unitary_transport_check(gens: GeneratorSet, U, corpus: Sequence[PFunction]) -> TransportReport:
    """Compare sum |<g, f_λ>|^2/|g|^2 with sum |<Ug, U f_λ>|^2/|Ug|^2.

    The transported coefficients are computed directly from the functions
    U f_{j,a}.  Below the explicit scales each (l, a) contributes a geometric
    series, whose ratio is confirmed on two scales before it is summed.
    """
    orig, trans = [], []
    for g in corpus:
        t = analyze(g, gens)
        orig.append(ratio(t.norm2(), norm2(g)))
        wide = t.lowered(t.tail.j_min - 2) if t.tail is not None else t
        ug = unitary_apply(g, U)
        parts = []
        for idx in wide.entries:
            v = inner_product(ug, unitary_apply(gens.element(*idx), U))
            parts.append(v.abs2())
        if wide.tail is not None:
            J = wide.tail.j_min - 1
            for l, a in wide.tail.amps:
                top = inner_product(ug, unitary_apply(gens.element(l, J, a), U)).abs2()
                below = inner_product(ug, unitary_apply(gens.element(l, J - 1, a), U)).abs2()
                if not (top - below * gens.p).is_zero():
                    raise FrameError(f"transported coarse terms for (l={l}, a={a}) are not geometric")
                parts.append(top * Fraction(gens.p, gens.p - 1))
        trans.append(ratio(CycScalar.sum(gens.p, parts), norm2(ug)))
    return TransportReport(orig, trans)
