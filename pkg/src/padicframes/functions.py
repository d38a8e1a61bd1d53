"""Finite sums of character-modulated ball indicators on Q_p.

An atom is ``x -> c * chi(b x) * 1_B(x)``.  These functions are dense in
L^2(Q_p), closed under the Fourier transform, dilation, translation and
modulation, and every integral of interest has a closed form on them.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclo import CycScalar
from .padic import Ball, PAdic, PrimeMismatch, Relation, ball_relation, canonical_center


def chi(x: PAdic) -> CycScalar:
    return CycScalar.root(x.p, x.frac())


@dataclass(frozen=True, slots=True)
class Atom:
    coeff: CycScalar
    b: PAdic
    ball: Ball

    @classmethod
    def make(cls, coeff, b: PAdic, ball: Ball) -> Atom:
        """Atom with modulation reduced modulo p^gamma Z_p.

        The dropped part of the modulation is constant on the ball; its
        phase is folded into the coefficient.
        """
        p = ball.p
        if not isinstance(coeff, CycScalar):
            coeff = CycScalar.rational(p, coeff)
        canon = canonical_center(-ball.gamma, b)
        delta = b - canon
        if not delta.is_zero():
            coeff = coeff * chi(delta * ball.center)
        return cls(coeff, canon, ball)

    @property
    def p(self) -> int:
        return self.ball.p

    def sort_key(self):
        return (self.ball.sort_key(), self.b.to_fraction())

    def constancy(self) -> int:
        """Largest k such that the atom is constant on every ball of radius p^k."""
        v = self.b.valuation
        return self.ball.gamma if self.b.is_zero() else min(self.ball.gamma, v)

    def split(self) -> list[Atom]:
        return [Atom.make(self.coeff, self.b, c) for c in self.ball.children()]

    def restrict(self, ball: Ball) -> Atom | None:
        rel = ball_relation(self.ball, ball)
        if rel in (Relation.EQUAL, Relation.FIRST_INSIDE_SECOND):
            return self
        if rel is Relation.SECOND_INSIDE_FIRST:
            return Atom.make(self.coeff, self.b, ball)
        return None


def _refine(atoms: list[Atom]) -> list[Atom]:
    # split any atom whose ball strictly contains another atom's ball
    while True:
        balls = sorted({a.ball for a in atoms}, key=lambda b: -b.gamma)
        coarse = set()
        for i, big in enumerate(balls):
            for small in balls[i + 1:]:
                if small.gamma < big.gamma and big.contains(small.center):
                    coarse.add(big)
                    break
        if not coarse:
            return atoms
        out = []
        for a in atoms:
            if a.ball in coarse:
                out.extend(a.split())
            else:
                out.append(a)
        atoms = out


def _merge(p: int, atoms: Iterable[Atom]) -> tuple[Atom, ...]:
    groups: dict[tuple[Ball, PAdic], list[CycScalar]] = defaultdict(list)
    for a in atoms:
        groups[(a.ball, a.b)].append(a.coeff)
    out = []
    for (ball, b), cs in groups.items():
        c = cs[0] if len(cs) == 1 else CycScalar.sum(p, cs)
        if c:
            out.append(Atom(c, b, ball))
    out.sort(key=Atom.sort_key)
    return tuple(out)


class PFunction:
    """A normal-form finite atom sum.

    Supports are pairwise equal or disjoint and atoms on the same support
    carry distinct modulations.  ``==`` compares the functions, not the
    stored representation; :meth:`canonical` gives a unique representation.
    """

    __slots__ = ("p", "atoms")

    def __init__(self, p: int, atoms: Iterable[Atom] = ()):
        atoms = list(atoms)
        for a in atoms:
            if a.p != p:
                raise PrimeMismatch(f"atom over {a.p} in a function over {p}")
        self.p = p
        self.atoms = _merge(p, _refine(atoms)) if atoms else ()

    @classmethod
    def _trusted(cls, p: int, atoms: tuple[Atom, ...]) -> PFunction:
        f = cls.__new__(cls)
        f.p = p
        f.atoms = atoms
        return f

    @classmethod
    def zero(cls, p: int) -> PFunction:
        return cls._trusted(p, ())

    @classmethod
    def indicator(cls, ball: Ball, coeff=1, b: PAdic | None = None) -> PFunction:
        p = ball.p
        return cls(p, [Atom.make(coeff, b if b is not None else PAdic.zero(p), ball)])

    @classmethod
    def from_balls(cls, balls: Iterable[Ball], p: int) -> PFunction:
        return cls(p, [Atom.make(1, PAdic.zero(p), b) for b in balls])

    # -- structure ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.atoms

    def __bool__(self) -> bool:
        return bool(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def balls(self) -> list[Ball]:
        return sorted({a.ball for a in self.atoms})

    def hull(self) -> Ball:
        from .padic import hull

        return hull(a.ball for a in self.atoms)

    def constancy(self) -> int:
        return min(a.constancy() for a in self.atoms)

    def structurally_equal(self, other: PFunction) -> bool:
        return self.p == other.p and self.atoms == other.atoms

    def __eq__(self, other) -> bool:
        if not isinstance(other, PFunction):
            return NotImplemented
        if self.p != other.p:
            return False
        if self.atoms == other.atoms:
            return True
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        body = ", ".join(f"({a.coeff})*chi({a.b.to_fraction()}x)*1[{a.ball}]" for a in self.atoms)
        return f"PFunction(p={self.p}, [{body}])"

    # -- linear structure ---------------------------------------------------
    def __add__(self, other: PFunction) -> PFunction:
        if other.p != self.p:
            raise PrimeMismatch(f"mixed primes {self.p} and {other.p}")
        return PFunction(self.p, self.atoms + other.atoms)

    def __neg__(self) -> PFunction:
        return PFunction._trusted(self.p, tuple(Atom(-a.coeff, a.b, a.ball) for a in self.atoms))

    def __sub__(self, other: PFunction) -> PFunction:
        return self + (-other)

    def scale(self, c) -> PFunction:
        if not isinstance(c, CycScalar):
            c = CycScalar.rational(self.p, c)
        if c.is_zero():
            return PFunction.zero(self.p)
        return PFunction._trusted(self.p, tuple(Atom(a.coeff * c, a.b, a.ball) for a in self.atoms))

    __mul__ = scale
    __rmul__ = scale

    def restrict(self, ball: Ball) -> PFunction:
        out = [r for a in self.atoms if (r := a.restrict(ball)) is not None]
        return PFunction(self.p, out)

    def canonical(self) -> PFunction:
        """Unique representation by maximal balls carrying a single character."""
        return PFunction._trusted(self.p, _canonical_atoms(self.p, self.atoms))


def linear_combination(p: int, terms: Iterable[tuple[object, PFunction]]) -> PFunction:
    atoms = []
    for c, f in terms:
        atoms.extend(f.scale(c).atoms)
    return PFunction(p, atoms)


def _canonical_atoms(p: int, atoms: Sequence[Atom]) -> tuple[Atom, ...]:
    # refine until every ball carries one atom
    by_ball: dict[Ball, list[Atom]] = defaultdict(list)
    for a in atoms:
        by_ball[a.ball].append(a)
    simple: dict[Ball, Atom] = {}
    work = list(by_ball.items())
    while work:
        ball, group = work.pop()
        if len(group) == 1:
            simple[ball] = group[0]
            continue
        for child in ball.children():
            merged = _merge(p, [Atom.make(a.coeff, a.b, child) for a in group])
            if merged:
                work.append((child, list(merged)))
    # coarsen complete sibling groups that are restrictions of one parent atom
    changed = True
    while changed:
        changed = False
        parents: dict[Ball, list[Ball]] = defaultdict(list)
        for ball in simple:
            parents[ball.parent()].append(ball)
        for parent, kids in sorted(parents.items(), key=lambda kv: kv[0].gamma):
            if len(kids) != p or any(k not in simple for k in kids):
                continue
            merged = _try_coarsen(p, parent, [simple[k] for k in kids])
            if merged is not None:
                for k in kids:
                    del simple[k]
                simple[parent] = merged
                changed = True
                break
    return tuple(sorted(simple.values(), key=Atom.sort_key))


def _try_coarsen(p: int, parent: Ball, kids: list[Atom]) -> Atom | None:
    first = kids[0]
    if any(k.b != first.b for k in kids):
        return None
    step = PAdic.make(p, 1, first.ball.gamma)
    for t in range(p):
        b = first.b + step * t
        probe = Atom.make(1, b, first.ball)
        c = first.coeff * probe.coeff.conjugate()
        cand = Atom.make(c, b, parent)
        if all(Atom.make(cand.coeff, cand.b, k.ball) == k for k in kids):
            return cand
    return None


def normalize(p: int, atoms: Iterable[Atom]) -> PFunction:
    return PFunction(p, atoms)


def evaluate(f: PFunction, x: PAdic) -> CycScalar:
    return CycScalar.sum(f.p, (a.coeff * chi(a.b * x) for a in f.atoms if a.ball.contains(x)))


def _power(p: int, k: int) -> Fraction:
    return Fraction(p) ** k


def integrate(f: PFunction) -> CycScalar:
    # canonical modulation is zero exactly when the character is trivial on the ball
    return CycScalar.sum(
        f.p,
        (a.coeff * _power(f.p, a.ball.gamma) for a in f.atoms if a.b.is_zero()),
    )


def atom_inner(x: Atom, y: Atom) -> CycScalar | None:
    rel = ball_relation(x.ball, y.ball)
    if rel is Relation.DISJOINT:
        return None
    small = x.ball if rel in (Relation.EQUAL, Relation.FIRST_INSIDE_SECOND) else y.ball
    delta = x.b - y.b
    if delta.valuation < small.gamma:
        return None
    return x.coeff * y.coeff.conjugate() * chi(delta * small.center) * _power(x.p, small.gamma)


def inner_product(f: PFunction, g: PFunction) -> CycScalar:
    if f.p != g.p:
        raise PrimeMismatch(f"mixed primes {f.p} and {g.p}")
    parts = []
    for x in f.atoms:
        for y in g.atoms:
            v = atom_inner(x, y)
            if v is not None:
                parts.append(v)
    return CycScalar.sum(f.p, parts)


def norm2(f: PFunction) -> CycScalar:
    return inner_product(f, f)


def dilate_translate(f: PFunction, j: int, a: PAdic) -> PFunction:
    """``x -> p^(j/2) f(p^-j x - a)``."""
    p = f.p
    scale = CycScalar.half_power(p, j)
    out = []
    for at in f.atoms:
        coeff = at.coeff * scale * chi(-(at.b * a))
        out.append(Atom.make(coeff, at.b.shift(-j), Ball.make(at.ball.gamma - j, (a + at.ball.center).shift(j))))
    return PFunction(p, out)


@dataclass(frozen=True)
class Translate:
    b: PAdic

    def apply(self, f: PFunction) -> PFunction:
        out = [
            Atom.make(at.coeff * chi(-(at.b * self.b)), at.b, Ball.make(at.ball.gamma, at.ball.center + self.b))
            for at in f.atoms
        ]
        return PFunction(f.p, out)

    def inverse(self) -> Translate:
        return Translate(-self.b)


@dataclass(frozen=True)
class Modulate:
    b: PAdic

    def apply(self, f: PFunction) -> PFunction:
        return PFunction(f.p, [Atom.make(at.coeff, at.b + self.b, at.ball) for at in f.atoms])

    def inverse(self) -> Modulate:
        return Modulate(-self.b)


@dataclass(frozen=True)
class Dilate:
    j: int

    def apply(self, f: PFunction) -> PFunction:
        return dilate_translate(f, self.j, PAdic.zero(f.p))

    def inverse(self) -> Dilate:
        return Dilate(-self.j)


def unitary_apply(f: PFunction, U) -> PFunction:
    """Apply one unitary, or a sequence of them left to right."""
    if isinstance(U, (list, tuple)):
        for u in U:
            f = u.apply(f)
        return f
    return U.apply(f)
