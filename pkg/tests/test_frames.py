import random
from fractions import Fraction

import pytest

from padicframes.corpus import SplitMix64, generate_corpus, random_table
from padicframes.cyclo import CycScalar, sign
from padicframes.frames import (
    FineScaleDivergence,
    FrameBounds,
    FrameError,
    GeneratorSet,
    UnresummableTail,
    analyze,
    doubled,
    element_norm_bound_check,
    enumerate_support,
    frame_operator_apply,
    kozyrev_generators,
    ks_generators,
    ks_modulations,
    rescale_to_parseval,
    sum_squares,
    synthesize,
    unitary_transport_check,
    verify_frame_bounds,
    weighted,
)
from padicframes.functions import Modulate, PFunction, Translate, inner_product, norm2
from padicframes.padic import Ball, PAdic
from padicframes.tables import CoefficientTable

Z3 = PAdic.zero(3)


def zp(p):
    return PFunction.indicator(Ball.make(0, PAdic.zero(p)))


def test_kozyrev_generators():
    assert kozyrev_generators(2).L == 1
    K = kozyrev_generators(3)
    assert K.L == 2
    for f in K.generators:
        (at,) = f.atoms
        assert at.ball == Ball.make(0, Z3) and at.coeff == CycScalar.one(3)
        assert norm2(f).as_fraction() == 1
    assert all(i.is_zero() for i in K.integrals)


def test_ks_generators():
    assert ks_generators(3, 2).L == 6
    assert ks_generators(2, 3).L == 4
    for p in (2, 3, 5):
        a, b = ks_generators(p, 1), kozyrev_generators(p)
        assert all(x.structurally_equal(y) for x, y in zip(a.generators, b.generators))


def test_ks_modulations_have_full_depth():
    assert [str(s.to_fraction()) for s in ks_modulations(3, 2)] == ["1/9", "2/9", "4/9", "5/9", "7/9", "8/9"]
    for p, m in ((3, 2), (2, 3)):
        assert all(s.norm == p**m for s in ks_modulations(p, m))
        assert verify_frame_bounds(ks_generators(p, m), generate_corpus(p, 14, 6)).all_equal_to(1)


def test_generator_set_rejects_zero():
    with pytest.raises(ValueError):
        GeneratorSet(3, (PFunction.zero(3),))


def test_enumerate_support_examples():
    K = kozyrev_generators(3)
    plan = enumerate_support(K.generator(1), K)
    t = analyze(K.generator(1), K)
    assert t.is_finite() and dict(t.entries) == {(1, 0, Z3): CycScalar.one(3)}
    assert (1, 0, Z3) in plan.indices
    one = zp(3)
    t = analyze(one, K, j_min=-3)
    for k in (1, 2):
        for j in (-3, -2, -1):
            assert t.get(k, j, Z3).abs2().as_fraction() == Fraction(3) ** j
    assert t.tail is not None and t.tail.j_min == -3
    assert analyze(one, K).get(1, -1, Z3).abs2().as_fraction() == Fraction(1, 3)
    assert analyze(PFunction.zero(3), K).is_zero()


def test_support_indices_overlap():
    K = kozyrev_generators(3)
    g = PFunction.indicator(Ball.make(0, Z3), 1, PAdic.of(3, Fraction(2, 9)))
    for l, j, a in enumerate_support(g, K).indices:
        hull = K.element(l, j, a).hull()
        assert hull.contains_ball(Ball.make(0, Z3)) or Ball.make(0, Z3).contains_ball(hull)


def test_sum_squares_examples():
    K = kozyrev_generators(3)
    assert sum_squares(zp(3), K).as_fraction() == 1
    assert sum_squares(K.generator(1), K).as_fraction() == 1
    assert sum_squares(PFunction.zero(3), K).is_zero()


def test_synthesize_examples():
    K = kozyrev_generators(3)
    t1 = K.generator(1)
    assert synthesize(analyze(t1, K), K) == t1
    assert synthesize(CoefficientTable(3, {(1, 0, Z3): CycScalar.one(3)}), K) == t1
    assert synthesize(CoefficientTable(3, {}), K).is_zero()


def test_frame_operator_examples():
    K = kozyrev_generators(3)
    W = weighted(K, [2, 1])
    assert frame_operator_apply(K.generator(1), K) == K.generator(1)
    assert frame_operator_apply(K.generator(1), W) == K.generator(1).scale(4)
    assert frame_operator_apply(PFunction.zero(3), W).is_zero()


def test_tail_resummation_matches_lowered_window():
    for p in (2, 3, 5):
        K = kozyrev_generators(p)
        for g in generate_corpus(p, 31, 8):
            t = analyze(g, K)
            if t.tail is None:
                continue
            lower = analyze(g, K, j_min=t.tail.j_min - 5)
            assert lower.norm2() == t.norm2()
            assert synthesize(lower, K) == synthesize(t, K) == g


def test_unresummable_tail_and_divergence():
    W = weighted(kozyrev_generators(3), [2, 1])
    with pytest.raises(UnresummableTail):
        frame_operator_apply(zp(3), W)
    bad = GeneratorSet(3, (zp(3),))
    with pytest.raises(FineScaleDivergence):
        analyze(kozyrev_generators(3).generator(1), bad)


def test_verify_frame_bounds_examples():
    K = kozyrev_generators(3)
    W = weighted(K, [2, 1])
    rep = verify_frame_bounds(W, [K.generator(1), K.generator(2)], FrameBounds(1, 4))
    assert rep.passed and [r.as_fraction() for r in rep.ratios] == [4, 1]
    assert verify_frame_bounds(doubled(K), generate_corpus(3, 5, 10)).all_equal_to(2)
    assert not verify_frame_bounds(W, [K.generator(2)], FrameBounds(2, 4)).passed
    with pytest.raises(FrameError):
        verify_frame_bounds(K, [PFunction.zero(3)])


def test_sandwich_on_weighted_corpus():
    W = weighted(kozyrev_generators(3), [2, Fraction(1, 2)])
    rep = verify_frame_bounds(W, generate_corpus(3, 8, 25), FrameBounds(Fraction(1, 4), 4))
    assert rep.passed


def test_rescale_to_parseval():
    K = kozyrev_generators(3)
    got = rescale_to_parseval(K.scaled([2, 2]), 4)
    assert all(a.structurally_equal(b) for a, b in zip(got.generators, K.generators))
    assert rescale_to_parseval(K, 1).generators == K.generators
    half = CycScalar.half_power(3, 1)
    got = rescale_to_parseval(K.scaled([half, half]), 3)
    assert verify_frame_bounds(got, generate_corpus(3, 2, 8)).all_equal_to(1)
    with pytest.raises(FrameError):
        rescale_to_parseval(K, 2)


def test_adjointness():
    rng = SplitMix64(77)
    K = ks_generators(3, 2)
    for g in generate_corpus(3, 77, 10):
        c = random_table(rng, 3, K.L)
        lhs = inner_product(synthesize(c, K), g)
        t = analyze(g, K)
        rhs = CycScalar.sum(3, [v * t.get(*idx).conjugate() for idx, v in c.entries.items()])
        assert lhs == rhs


def test_frame_operator_self_adjoint_and_positive():
    K = doubled(kozyrev_generators(5))
    fs = generate_corpus(5, 13, 10)
    for g, h in zip(fs, fs[1:]):
        assert inner_product(frame_operator_apply(g, K), h) == inner_product(g, frame_operator_apply(h, K))
        q = inner_product(frame_operator_apply(g, K), g).as_fraction()
        assert q is not None and q > 0


def test_redundant_system_minus_one_element():
    K = kozyrev_generators(3)
    D = doubled(K)
    drop = (1, 0, Z3)
    for g in generate_corpus(3, 19, 15):
        t = analyze(g, D)
        s = t.norm2() - t.get(*drop).abs2()
        n = norm2(g)
        assert sign(s - n) >= 0 and sign(n * 2 - s) >= 0


def test_transport_examples():
    K = kozyrev_generators(3)
    corpus = generate_corpus(3, 23, 10)
    rep = unitary_transport_check(K, Modulate(PAdic.zero(3)), corpus)
    assert rep.passed
    rep = unitary_transport_check(K, Modulate(PAdic.of(3, Fraction(1, 3))), corpus)
    assert rep.passed and all((r - 1).is_zero() for r in rep.transported)
    W = weighted(K, [2, 1])
    assert unitary_transport_check(W, Translate(PAdic.of(3, Fraction(1, 9))), corpus).passed


def test_element_norm_bound():
    rng = random.Random(2)
    K = kozyrev_generators(3)
    samples = [(rng.randint(1, 2), rng.randint(-3, 3), PAdic.of(3, Fraction(rng.randrange(9), 9))) for _ in range(10)]
    assert element_norm_bound_check(K, FrameBounds(1, 1), samples).passed
    W = weighted(K, [2, 1])
    rep = element_norm_bound_check(W, FrameBounds(1, 4), samples)
    assert rep.passed
    assert {r["norm2"] for r in rep.rows} <= {"4", "1"}
    assert not element_norm_bound_check(W, FrameBounds(1, 2), [(1, 0, Z3)]).passed
