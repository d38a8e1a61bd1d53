"""Coefficient tables indexed by (l, j, a), with an optional geometric tail."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .cyclo import CycScalar
from .padic import PAdic


class FrameIndex(NamedTuple):
    l: int
    j: int
    a: PAdic

    def key(self):
        return (self.l, self.j, self.a.to_fraction())


def _geom(p: int, j_min: int) -> Fraction:
    """sum_{j < j_min} p^j."""
    return Fraction(p) ** j_min / (p - 1)


@dataclass
class Tail:
    """Coarse-scale coefficients: the entry at (l, j, a) with j < j_min is amp * p^(j/2)."""

    j_min: int
    amps: dict[tuple[int, PAdic], CycScalar] = field(default_factory=dict)

    def moduli(self) -> dict[tuple[int, PAdic], CycScalar]:
        return {k: v.abs2() for k, v in self.amps.items()}

    def value(self, l: int, j: int, a: PAdic) -> CycScalar:
        amp = self.amps[(l, a)]
        return amp * CycScalar.half_power(amp.p, j)

    def sorted_items(self):
        return sorted(self.amps.items(), key=lambda kv: (kv[0][0], kv[0][1].to_fraction()))


class CoefficientTable:
    """Finite map FrameIndex -> CycScalar plus an optional :class:`Tail`.

    Zero entries are never stored.  Tables form a vector space; tables with
    tails at different depths are aligned by expanding the shallower tail.
    """

    def __init__(self, p: int, entries: dict | Iterable = (), tail: Tail | None = None):
        self.p = p
        items = entries.items() if isinstance(entries, dict) else entries
        self.entries: dict[FrameIndex, CycScalar] = {
            FrameIndex(*k): v for k, v in items if not v.is_zero()
        }
        if tail is not None:
            amps = {k: v for k, v in tail.amps.items() if not v.is_zero()}
            tail = Tail(tail.j_min, amps) if amps else None
        self.tail = tail

    def __len__(self) -> int:
        return len(self.entries)

    def is_finite(self) -> bool:
        return self.tail is None

    def is_zero(self) -> bool:
        return not self.entries and self.tail is None

    def get(self, l: int, j: int, a: PAdic) -> CycScalar:
        idx = FrameIndex(l, j, a)
        if idx in self.entries:
            return self.entries[idx]
        if self.tail is not None and j < self.tail.j_min and (l, a) in self.tail.amps:
            return self.tail.value(l, j, a)
        return CycScalar.zero(self.p)

    def sorted_items(self) -> list[tuple[FrameIndex, CycScalar]]:
        return sorted(self.entries.items(), key=lambda kv: kv[0].key())

    def lowered(self, j_min: int) -> CoefficientTable:
        """Same table with the tail starting at ``j_min`` (explicit entries above)."""
        if self.tail is None or j_min >= self.tail.j_min:
            return self
        entries = dict(self.entries)
        for (l, a), amp in self.tail.amps.items():
            for j in range(j_min, self.tail.j_min):
                entries[FrameIndex(l, j, a)] = amp * CycScalar.half_power(self.p, j)
        return CoefficientTable(self.p, entries, Tail(j_min, dict(self.tail.amps)))

    def _align(self, other: CoefficientTable) -> tuple[CoefficientTable, CoefficientTable]:
        if self.tail is None or other.tail is None:
            return self, other
        j = min(self.tail.j_min, other.tail.j_min)
        return self.lowered(j), other.lowered(j)

    def _combine(self, other: CoefficientTable, sign: int) -> CoefficientTable:
        x, y = self._align(other)
        entries = dict(x.entries)
        for k, v in y.entries.items():
            entries[k] = entries[k] + v * sign if k in entries else v * sign
        tail = None
        if x.tail is not None or y.tail is not None:
            if x.tail is None or y.tail is None:
                t = x.tail or y.tail
                s = 1 if x.tail is not None else sign
                tail = Tail(t.j_min, {k: v * s for k, v in t.amps.items()})
            else:
                amps = dict(x.tail.amps)
                for k, v in y.tail.amps.items():
                    amps[k] = amps[k] + v * sign if k in amps else v * sign
                tail = Tail(x.tail.j_min, amps)
        return CoefficientTable(self.p, entries, tail)

    def __add__(self, other: CoefficientTable) -> CoefficientTable:
        return self._combine(other, 1)

    def __sub__(self, other: CoefficientTable) -> CoefficientTable:
        return self._combine(other, -1)

    def scale(self, c) -> CoefficientTable:
        entries = {k: v * c for k, v in self.entries.items()}
        tail = None
        if self.tail is not None:
            tail = Tail(self.tail.j_min, {k: v * c for k, v in self.tail.amps.items()})
        return CoefficientTable(self.p, entries, tail)

    def inner(self, other: CoefficientTable) -> CycScalar:
        """l2 inner product sum c conj(d), tails included in closed form."""
        x, y = self._align(other)
        parts = [v * y.entries[k].conjugate() for k, v in x.entries.items() if k in y.entries]
        if x.tail is not None and y.tail is not None:
            g = _geom(self.p, x.tail.j_min)
            for k, v in x.tail.amps.items():
                if k in y.tail.amps:
                    parts.append(v * y.tail.amps[k].conjugate() * g)
        return CycScalar.sum(self.p, parts)

    def norm2(self, weights: dict[int, object] | None = None) -> CycScalar:
        """Sum of squared moduli; ``weights`` rescales the terms of each l."""

        def w(l):
            return 1 if weights is None else weights[l]

        parts = [v.abs2() * w(k.l) for k, v in self.entries.items()]
        if self.tail is not None:
            g = _geom(self.p, self.tail.j_min)
            parts.extend(v.abs2() * g * w(l) for (l, _), v in self.tail.amps.items())
        return CycScalar.sum(self.p, parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientTable):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        tail = "" if self.tail is None else f", tail j_min={self.tail.j_min} ({len(self.tail.amps)} terms)"
        return f"CoefficientTable(p={self.p}, {len(self.entries)} entries{tail})"
