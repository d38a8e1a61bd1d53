"""Canonical duals, decomposition, minimal-norm coefficients, range projection,
S^(-1/2), and finite window stages for the frame operator.

S^(-1) is only known exactly in two situations:

* diagonal systems, where the generators are scalar multiples of the members
  of an orthonormal wavelet family (repeats allowed).  Then S acts on each
  direction by the sum of the squared norms of the generators along it;
* window-invariant systems, where S maps a finite space of locally constant
  functions into itself and the inverse is a finite exact linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cyclo import CycScalar, sign
from .frames import (
    FrameBounds,
    FrameError,
    GeneratorSet,
    UnresummableTail,
    analyze,
    exact_sqrt,
    frame_operator_apply,
    synthesize,
)
from .functions import PFunction, inner_product, norm2
from .padic import Ball, PAdic
from .tables import CoefficientTable

# -- diagonal structure -----------------------------------------------------


@dataclass
class DiagonalStructure:
    groups: list[list[int]]  # 1-based generator indices sharing one direction
    weights: dict[int, CycScalar]  # l -> eigenvalue of S on l's direction

    def bounds(self) -> FrameBounds:
        ws = [w.as_fraction() for w in self.weights.values()]
        if any(w is None for w in ws):
            raise FrameError("direction weights are not rational")
        return FrameBounds(min(ws), max(ws))


def _probes(p: int) -> list[PFunction]:
    zero = PAdic.zero(p)
    return [
        PFunction.indicator(Ball.make(0, zero)),
        PFunction.indicator(Ball.make(-1, zero)),
        PFunction.indicator(Ball.make(1, PAdic.make(p, 1, -2))),
    ]


def diagonal_structure(gens: GeneratorSet) -> DiagonalStructure:
    """Group proportional generators and check the directions are orthonormal-complete.

    Orthogonality of the whole family of directions is checked exactly: the
    analysis of each base direction against the base family must be a
    single entry at (l, 0, 0).  Completeness is checked on probe functions.
    """
    p = gens.p
    bases: list[PFunction] = []
    groups: list[list[int]] = []
    for l, f in enumerate(gens.generators, start=1):
        nf = norm2(f)
        for gi, base in enumerate(bases):
            ip = inner_product(f, base)
            if (ip.abs2() - nf * norm2(base)).is_zero() and not ip.is_zero():
                groups[gi].append(l)
                break
        else:
            bases.append(f)
            groups.append([l])
    base_set = GeneratorSet(p, tuple(bases), "directions")
    for i, base in enumerate(bases, start=1):
        t = analyze(base, base_set)
        expected = CoefficientTable(p, {(i, 0, PAdic.zero(p)): norm2(base)})
        if not t.is_finite() or t != expected:
            raise FrameError(f"direction {i} is not orthogonal to the rest of the wavelet family")
    inv = {i: norm2(b).inverse() for i, b in enumerate(bases, start=1)}
    for g in _probes(p):
        if not (analyze(g, base_set).norm2(inv) - norm2(g)).is_zero():
            raise FrameError("normalized directions are not a Parseval family")
    weights = {}
    for grp in groups:
        w = CycScalar.sum(p, (norm2(gens.generator(l)) for l in grp))
        if sign(w) <= 0:
            raise FrameError("nonpositive direction weight")
        for l in grp:
            weights[l] = w
    return DiagonalStructure(groups, weights)


# -- windows ----------------------------------------------------------------


@dataclass(frozen=True)
class WindowSpace:
    """Functions supported in B_G(0) and constant on balls of radius p^c."""

    p: int
    G: int
    c: int

    def __post_init__(self):
        if self.c > self.G:
            raise ValueError("need c <= G")

    def balls(self) -> list[Ball]:
        level = [Ball.make(self.G, PAdic.zero(self.p))]
        for _ in range(self.G - self.c):
            level = [ch for b in level for ch in b.children()]
        return sorted(level)

    def basis(self) -> list[PFunction]:
        return [PFunction.indicator(b) for b in self.balls()]

    @property
    def dim(self) -> int:
        return self.p ** (self.G - self.c)

    def coords(self, f: PFunction) -> list[CycScalar] | None:
        """Coordinates in the indicator basis, or None when f is outside the window."""
        scale = Fraction(self.p) ** (-self.c)
        basis = self.basis()
        cs = [inner_product(f, e) * scale for e in basis]
        back = PFunction(self.p, [at for c, e in zip(cs, basis) for at in e.scale(c).atoms])
        return cs if back == f else None

    def combine(self, coords: Sequence[CycScalar]) -> PFunction:
        return PFunction(self.p, [at for c, e in zip(coords, self.basis()) for at in e.scale(c).atoms])


def window_matrix(kind: str, gens: GeneratorSet, w: WindowSpace, require_invariant: bool = False):
    """M[i][k] = <S e_i, e_k> / p^c (kind "frame") or <e_i, e_k> / p^c (kind "gram").

    The frame-operator entries come from exact coefficient tables, so the
    compression of S to the window is available even when S does not map
    the window into itself.
    """
    if require_invariant and not window_invariant(gens, w):
        raise FrameError("window is not invariant under S; use a larger window")
    basis = w.basis()
    scale = Fraction(w.p) ** (-w.c)
    if kind == "gram":
        return [[inner_product(e, f) * scale for f in basis] for e in basis]
    if kind != "frame":
        raise ValueError(f"unknown matrix kind {kind!r}")
    tables = [analyze(e, gens) for e in basis]
    n = len(basis)
    M = [[None] * n for _ in range(n)]
    for i in range(n):
        for k in range(i, n):
            v = tables[i].inner(tables[k]) * scale
            M[i][k] = v
            M[k][i] = v.conjugate()
    return M


def window_invariant(gens: GeneratorSet, w: WindowSpace) -> bool:
    for e in w.basis():
        try:
            se = frame_operator_apply(e, gens)
        except UnresummableTail:
            return False
        if w.coords(se) is None:
            return False
    return True


def to_numpy(M) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in M], dtype=complex)


def window_eigenvalues(M) -> np.ndarray:
    return np.linalg.eigvalsh(to_numpy(M))


def determinant(M) -> CycScalar:
    """Exact determinant by cofactor expansion along the first row (small matrices)."""
    n = len(M)
    if n == 1:
        return M[0][0]
    p = M[0][0].p
    parts = []
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * determinant(minor)
        parts.append(term if j % 2 == 0 else -term)
    return CycScalar.sum(p, parts)


def solve(A, b):
    """Exact Gaussian elimination over CycScalar."""
    n = len(A)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not M[r][col].is_zero()), None)
        if piv is None:
            raise FrameError("singular window matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and not M[r][col].is_zero():
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


# -- canonical dual ---------------------------------------------------------


@dataclass(frozen=True)
class Diagonal:
    pass


@dataclass(frozen=True)
class Window:
    space: WindowSpace


def canonical_dual(gens: GeneratorSet, method=Diagonal()) -> GeneratorSet:
    """Generators of S^-1 f_{j,a}; S commutes with the wavelet indexing."""
    if isinstance(method, Diagonal):
        ds = diagonal_structure(gens)
        factors = [ds.weights[l].inverse() for l in range(1, gens.L + 1)]
        return gens.scaled(factors, f"dual({gens.label})")
    if isinstance(method, Window):
        w = method.space
        if not window_invariant(gens, w):
            raise FrameError("window is not invariant under S")
        M = window_matrix("frame", gens, w)
        n = len(M)
        # S e_i = sum_k M[i][k] e_k, so S has column i equal to row i of M
        A = [[M[i][k] for i in range(n)] for k in range(n)]
        duals = []
        for f in gens.generators:
            y = w.coords(f)
            if y is None:
                raise FrameError("generator lies outside the window")
            duals.append(w.combine(solve(A, y)))
        return GeneratorSet(gens.p, tuple(duals), f"dual({gens.label})")
    raise ValueError(f"unknown dual method {method!r}")


def dual_bounds(gens: GeneratorSet) -> FrameBounds:
    b = diagonal_structure(gens).bounds()
    return FrameBounds(1 / b.B, 1 / b.A)


@dataclass
class Decomposition:
    coeffs: CoefficientTable
    reconstruction: PFunction
    mirrored: PFunction
    exact: bool
    mirrored_exact: bool


def decompose_reconstruct(g: PFunction, gens: GeneratorSet, dual: GeneratorSet | None = None) -> Decomposition:
    if dual is None:
        dual = canonical_dual(gens)
    coeffs = analyze(g, dual)
    rec = synthesize(coeffs, gens)
    mir = synthesize(analyze(g, gens), dual)
    return Decomposition(coeffs, rec, mir, rec == g, mir == g)


@dataclass
class MinimalNormResult:
    lhs: CycScalar
    canonical_part: CycScalar
    residual_part: CycScalar

    @property
    def rhs(self) -> CycScalar:
        return self.canonical_part + self.residual_part

    @property
    def equal(self) -> bool:
        return (self.lhs - self.rhs).is_zero()


def minimal_norm_identity(
    g: PFunction, gens: GeneratorSet, alt: CoefficientTable, dual: GeneratorSet | None = None
) -> MinimalNormResult:
    if dual is None:
        dual = canonical_dual(gens)
    canon = analyze(g, dual)
    diff = alt - canon
    if alt.is_finite():
        if synthesize(alt, gens) != g:
            raise FrameError("alternative coefficients do not synthesize to g")
    elif not synthesize(diff, gens).is_zero():
        raise FrameError("alternative coefficients do not synthesize to g")
    return MinimalNormResult(alt.norm2(), canon.norm2(), diff.norm2())


def range_projection(t: CoefficientTable, gens: GeneratorSet, dual: GeneratorSet | None = None) -> CoefficientTable:
    """Orthogonal projection onto the range of the analysis operator."""
    if dual is None:
        dual = canonical_dual(gens)
    return analyze(synthesize(t, dual), gens)


def kernel_vector(p: int, L: int, pairs) -> CoefficientTable:
    """Synthesis-kernel table for a doubled system: +c on copy 1, -c on copy 2."""
    entries = {}
    for (l, j, a), c in pairs:
        entries[(l, j, a)] = c
        entries[(l + L, j, a)] = -c
    return CoefficientTable(p, entries)


# -- S^(-1/2) ---------------------------------------------------------------


def s_inv_sqrt_diagonal(gens: GeneratorSet) -> GeneratorSet:
    ds = diagonal_structure(gens)
    factors = []
    for l in range(1, gens.L + 1):
        r = exact_sqrt(ds.weights[l], gens.p)
        if r is None:
            raise FrameError(f"sqrt of the weight of generator {l} is not representable")
        factors.append(r.inverse())
    return gens.scaled(factors, f"S^-1/2({gens.label})")


@dataclass
class WindowSqrt:
    space: WindowSpace
    N: np.ndarray  # S in the orthonormal basis e_i / p^(c/2)
    root: np.ndarray  # N^(-1/2)
    gens: GeneratorSet

    def parseval_defect(self, g: PFunction) -> float:
        """| sum |<g, S^-1/2 f_λ>|^2 - |g|^2 | for g in the window."""
        w = self.space
        y = w.coords(g)
        if y is None:
            raise FrameError("probe function outside the window")
        half = float(w.p) ** (w.c / 2)
        yv = np.array([complex(c) for c in y]) * half
        h = self.root @ yv
        tables = [analyze(e, self.gens) for e in w.basis()]
        j0 = min((t.tail.j_min for t in tables if t.tail is not None), default=None)
        if j0 is not None:
            tables = [t.lowered(j0) for t in tables]
        coeff: dict = {}
        amps: dict = {}
        for hk, t in zip(h, tables):
            s = hk / half
            for idx, v in t.entries.items():
                coeff[idx] = coeff.get(idx, 0) + s * complex(v)
            if t.tail is not None:
                for k, v in t.tail.amps.items():
                    amps[k] = amps.get(k, 0) + s * complex(v)
        total = sum(abs(v) ** 2 for v in coeff.values())
        if amps:
            total += sum(abs(v) ** 2 for v in amps.values()) * float(w.p) ** j0 / (w.p - 1)
        return abs(total - complex(norm2(g)).real)


def s_inv_sqrt_window(gens: GeneratorSet, w: WindowSpace) -> WindowSqrt:
    M = window_matrix("frame", gens, w)
    N = to_numpy(M).T
    vals, vecs = np.linalg.eigh(N)
    if vals.min() <= 2.0**-40:
        raise FrameError("window matrix is not positive definite; enlarge the window")
    root = (vecs * vals**-0.5) @ vecs.conj().T
    return WindowSqrt(w, N, root, gens)
