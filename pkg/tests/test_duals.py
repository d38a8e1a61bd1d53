from fractions import Fraction

import pytest

from padicframes.corpus import SplitMix64, generate_corpus, random_table
from padicframes.cyclo import CycScalar
from padicframes.duals import (
    Window,
    WindowSpace,
    canonical_dual,
    decompose_reconstruct,
    determinant,
    diagonal_structure,
    dual_bounds,
    kernel_vector,
    minimal_norm_identity,
    range_projection,
    s_inv_sqrt_diagonal,
    s_inv_sqrt_window,
    window_eigenvalues,
    window_invariant,
    window_matrix,
)
from padicframes.frames import (
    FrameBounds,
    FrameError,
    analyze,
    doubled,
    kozyrev_generators,
    verify_frame_bounds,
    weighted,
)
from padicframes.functions import PFunction
from padicframes.padic import Ball, PAdic
from padicframes.tables import CoefficientTable

Z = PAdic.zero(3)
K = kozyrev_generators(3)
W = weighted(K, [2, 1])
D = doubled(K)


def same(a, b):
    return all(x.structurally_equal(y) for x, y in zip(a.generators, b.generators))


def test_weighted_dual():
    dual = canonical_dual(W)
    assert same(dual, K.scaled([Fraction(1, 2), 1]))
    assert dual_bounds(W) == FrameBounds(Fraction(1, 4), 1)
    assert same(canonical_dual(K), K)
    assert same(canonical_dual(dual), W)


def test_dual_bounds_verified_on_corpus():
    corpus = [K.generator(1), K.generator(2), *generate_corpus(3, 4, 10)]
    assert verify_frame_bounds(W, corpus, FrameBounds(1, 4)).passed
    rep = verify_frame_bounds(canonical_dual(W), corpus, FrameBounds(Fraction(1, 4), 1))
    assert rep.passed


def test_diagonal_structure_groups_copies():
    ds = diagonal_structure(D)
    assert ds.groups == [[1, 3], [2, 4]]
    assert {w.as_fraction() for w in ds.weights.values()} == {2}


def test_diagonal_rejects_non_orthogonal_directions():
    ball = Ball.make(0, Z)
    skew = PFunction.indicator(ball, 1, PAdic.of(3, Fraction(1, 3))) + PFunction.indicator(
        Ball.make(-1, Z), 1, PAdic.of(3, Fraction(1, 9))
    )
    with pytest.raises(FrameError):
        diagonal_structure(K.scaled([1, 1]) + type(K)(3, (skew,)))


def test_decompose_examples():
    d = decompose_reconstruct(K.generator(1), W)
    assert dict(d.coeffs.entries) == {(1, 0, Z): CycScalar.rational(3, Fraction(1, 2))}
    assert d.exact and d.mirrored_exact
    g = generate_corpus(3, 1, 1)[0]
    d = decompose_reconstruct(g, K)
    assert d.coeffs == analyze(g, K) and d.exact
    d = decompose_reconstruct(PFunction.zero(3), W)
    assert d.coeffs.is_zero() and d.reconstruction.is_zero()


def test_decompose_random():
    for gens in (W, D):
        for g in generate_corpus(3, 40, 10):
            d = decompose_reconstruct(g, gens)
            assert d.exact and d.mirrored_exact


def test_minimal_norm_examples():
    t1 = K.generator(1)
    alt = CoefficientTable(3, {(1, 0, Z): CycScalar.one(3)})
    r = minimal_norm_identity(t1, D, alt)
    canon = analyze(t1, canonical_dual(D))
    assert dict(canon.entries) == {(1, 0, Z): CycScalar.rational(3, Fraction(1, 2)), (3, 0, Z): CycScalar.rational(3, Fraction(1, 2))}
    assert r.equal and r.lhs.as_fraction() == 1
    r = minimal_norm_identity(t1, D, canon)
    assert r.residual_part.is_zero()
    v = kernel_vector(3, 2, [((2, 1, PAdic.of(3, Fraction(1, 3))), CycScalar.rational(3, 5))])
    r2 = minimal_norm_identity(t1, D, canon + v)
    assert (r2.lhs - r.lhs - v.norm2()).is_zero() and r2.equal
    with pytest.raises(FrameError):
        minimal_norm_identity(t1, D, canon.scale(2))


def test_range_projection_examples():
    one_copy = CoefficientTable(3, {(1, 0, Z): CycScalar.one(3)})
    half = CycScalar.rational(3, Fraction(1, 2))
    assert range_projection(one_copy, D) == CoefficientTable(3, {(1, 0, Z): half, (3, 0, Z): half})
    kern = CoefficientTable(3, {(1, 0, Z): half, (3, 0, Z): -half})
    assert range_projection(kern, D).is_zero()
    for g in generate_corpus(3, 6, 5):
        t = analyze(g, D)
        assert range_projection(t, D) == t


def test_range_projection_idempotent():
    rng = SplitMix64(8)
    for _ in range(10):
        u = random_table(rng, 3, D.L)
        P = range_projection(u, D)
        assert range_projection(P, D) == P


def test_s_inv_sqrt_diagonal():
    assert same(s_inv_sqrt_diagonal(W), K)
    assert same(s_inv_sqrt_diagonal(K), K)
    rep = verify_frame_bounds(s_inv_sqrt_diagonal(W), generate_corpus(3, 3, 10))
    assert rep.all_equal_to(1)


def test_window_basis():
    w = WindowSpace(3, 0, -1)
    basis = w.basis()
    assert len(basis) == w.dim == 3
    gram = window_matrix("gram", K, w)
    for i in range(3):
        for k in range(3):
            assert gram[i][k] == (CycScalar.one(3) if i == k else CycScalar.zero(3))


def test_window_matrix_kozyrev_is_identity():
    for w in (WindowSpace(3, 0, -1), WindowSpace(3, 1, -1)):
        M = window_matrix("frame", K, w)
        n = len(M)
        assert all(M[i][k] == CycScalar.rational(3, int(i == k)) for i in range(n) for k in range(n))
        assert window_invariant(K, w)


def test_window_matrix_weighted_eigenvalues():
    # exact characteristic roots, checked through det(M - lambda I) = 0
    for w in (WindowSpace(3, 0, -1), WindowSpace(3, 1, 0)):
        M = window_matrix("frame", W, w)
        assert all(M[i][k] == M[k][i].conjugate() for i in range(3) for k in range(3))
        for lam in (1, Fraction(5, 2), 4):
            shifted = [[M[i][k] - (lam if i == k else 0) for k in range(3)] for i in range(3)]
            assert determinant(shifted).is_zero()
        assert sorted(round(x, 12) for x in window_eigenvalues(M)) == [1, 2.5, 4]


def test_window_invariance_required_for_window_dual():
    w = WindowSpace(3, 0, -1)
    assert not window_invariant(W, w)
    with pytest.raises(FrameError):
        window_matrix("frame", W, w, require_invariant=True)
    with pytest.raises(FrameError):
        canonical_dual(W, Window(w))


def test_window_dual_matches_diagonal_on_parseval_system():
    w = WindowSpace(3, 0, -1)
    got, want = canonical_dual(D, Window(w)), canonical_dual(D)
    # the window solve returns the same functions written on the window's balls
    assert all(x == y for x, y in zip(got.generators, want.generators))


def test_window_inverse_sqrt_numeric():
    w = WindowSpace(3, 1, -1)
    root = s_inv_sqrt_window(W, w)
    for e in w.basis():
        assert root.parseval_defect(e) < 2**-40
