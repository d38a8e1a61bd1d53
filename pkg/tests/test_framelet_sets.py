from fractions import Fraction

import pytest

from padicframes.corpus import generate_corpus
from padicframes.fourier import fourier
from padicframes.framelet_sets import (
    BallUnionSet,
    MultiframeletSet,
    example_set,
    generators_from_set,
    norm_identity_check,
    set_topology,
    verify_multiframelet_set,
)
from padicframes.frames import FrameError, kozyrev_generators
from padicframes.functions import PFunction
from padicframes.padic import Ball, PAdic


def ball(p, g, c=0):
    return Ball.make(g, PAdic.of(p, Fraction(c)))


def single(p, *balls):
    return MultiframeletSet((BallUnionSet(p, balls),))


def test_generators_from_set_examples():
    (t1,) = generators_from_set(single(3, ball(3, 0, Fraction(-1, 3)))).generators
    assert t1.structurally_equal(kozyrev_generators(3).generator(1))
    (one,) = generators_from_set(single(3, ball(3, 0))).generators
    assert one.structurally_equal(PFunction.indicator(ball(3, 0)))
    with pytest.raises(ValueError):
        MultiframeletSet((BallUnionSet(3, ()),))


def test_example_set():
    s = example_set(3)
    assert s.L == 2
    assert [part.balls[0].center.to_fraction() for part in s.parts] == [Fraction(2, 3), Fraction(1, 3)]
    assert [part.balls[0] for part in s.parts] == [ball(3, 0, Fraction(-1, 3)), ball(3, 0, Fraction(-2, 3))]
    assert example_set(2).L == 1
    for p in (2, 3, 5):
        got = generators_from_set(example_set(p)).generators
        assert all(a.structurally_equal(b) for a, b in zip(got, kozyrev_generators(p).generators))


def test_round_trip_to_indicators():
    s = MultiframeletSet((BallUnionSet(3, (ball(3, 0, Fraction(-1, 3)), ball(3, 1, Fraction(1, 9)))),))
    (f,) = generators_from_set(s).generators
    assert fourier(f) == s.parts[0].indicator()


def test_overlap_rejected():
    with pytest.raises(ValueError):
        BallUnionSet(3, (ball(3, 0), ball(3, -1, 3)))


def test_verify_set():
    rep = verify_multiframelet_set(example_set(3), generate_corpus(3, 50, 15))
    assert rep.parseval_consistent
    assert verify_multiframelet_set(single(2, ball(2, 0, Fraction(-1, 2))), generate_corpus(2, 1, 10)).parseval_consistent
    rep = verify_multiframelet_set(single(3, ball(3, 0)), generate_corpus(3, 1, 5, zero_mean=True))
    assert rep.divergent and not rep.parseval_consistent


def test_norm_identity_examples():
    s = example_set(3)
    r = norm_identity_check(PFunction.indicator(ball(3, 0)), s)
    assert r.equal and r.lhs.as_fraction() == 1 and r.rhs.as_fraction() == 1
    r = norm_identity_check(kozyrev_generators(3).generator(1), s)
    assert r.equal and r.rhs.as_fraction() == 1
    r = norm_identity_check(PFunction.zero(3), s)
    assert r.equal and r.lhs.is_zero()


def test_norm_identity_random():
    for p in (2, 3):
        for g in generate_corpus(p, 60, 10):
            assert norm_identity_check(g, example_set(p)).equal


def test_norm_identity_refuses_non_parseval_sets():
    doubled_part = MultiframeletSet((*example_set(3).parts, example_set(3).parts[0]))
    with pytest.raises(FrameError):
        norm_identity_check(kozyrev_generators(3).generator(1), doubled_part)
    with pytest.raises(FrameError):
        norm_identity_check(kozyrev_generators(3).generator(1), single(3, ball(3, 0)))


def test_topology():
    for p in (2, 3, 5):
        t = set_topology(example_set(p))
        assert (t.open, t.compact, t.connected) == (True, True, False)
    t = set_topology(single(3, ball(3, 2)))
    assert (t.open, t.compact, t.connected) == (True, True, False)
