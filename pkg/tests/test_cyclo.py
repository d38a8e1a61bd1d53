import random
from fractions import Fraction

import mpmath
import pytest

from padicframes.cyclo import (
    CycScalar,
    approx_eval,
    compare,
    numerically_zero,
    reduce_and_is_zero,
    scalar_arith,
    sign,
)
from padicframes.padic import PrimeMismatch


def z(p, r):
    return CycScalar.root(p, Fraction(r))


def close(a, b, tol=1e-12):
    return abs(complex(a) - b) < tol


def test_angle_addition_and_half_power_folding():
    assert z(3, Fraction(1, 3)) * z(3, Fraction(1, 3)) == z(3, Fraction(2, 3))
    r3 = CycScalar.half_power(3, 1)
    assert (r3 * r3).as_fraction() == 3


def test_cyclotomic_relations():
    assert (1 + z(3, Fraction(1, 3)) + z(3, Fraction(2, 3))).is_zero()
    assert (1 + z(2, Fraction(1, 2))).is_zero()
    s = 1 + z(3, Fraction(1, 3))
    assert not s.is_zero()
    assert close(s, complex(0.5, 3**0.5 / 2))
    _, zero = reduce_and_is_zero(CycScalar.sum(5, [z(5, Fraction(k, 5)) for k in range(5)]))
    assert zero


def test_deeper_level_relation():
    # the p^2-th roots z^k with k = 1 (mod 3) sum to zero
    assert CycScalar.sum(3, [z(3, Fraction(1 + 3 * t, 9)) for t in range(3)]).is_zero()


def test_sqrt_p_inside_the_field():
    # sqrt 5 is a Gauss sum and sqrt 2 = z8 + z8^-1; both must reduce to zero
    g = CycScalar.sum(5, [z(5, Fraction(1, 5)), -z(5, Fraction(2, 5)), -z(5, Fraction(3, 5)), z(5, Fraction(4, 5))])
    assert (CycScalar.half_power(5, 1) - g).is_zero()
    assert (CycScalar.half_power(2, 1) - z(2, Fraction(1, 8)) - z(2, Fraction(7, 8))).is_zero()


def test_conjugate_and_abs2():
    w = z(3, Fraction(1, 3))
    assert w.conjugate() == z(3, Fraction(2, 3))
    assert (1 + w).abs2().as_fraction() == 1
    t = CycScalar.from_terms(7, [(1, Fraction(3, 7), Fraction(-2, 5))])
    assert t.abs2().as_fraction() == Fraction(4, 25) * 7


def test_approx_eval_examples():
    re, im = approx_eval(z(3, Fraction(1, 3)), 64)
    assert abs(re + 0.5) < 1e-15 and abs(im - mpmath.sqrt(3) / 2) < 1e-15
    re, im = approx_eval(CycScalar.half_power(2, 1), 64)
    assert abs(re - mpmath.sqrt(2)) < 1e-15 and abs(im) < 1e-15
    assert approx_eval(CycScalar.zero(3), 64) == (0, 0)


def test_mixed_primes_rejected():
    with pytest.raises(PrimeMismatch):
        scalar_arith(CycScalar.one(3), CycScalar.one(5), "add")


def test_inverse_and_sign():
    x = 2 + z(5, Fraction(1, 25)) - CycScalar.half_power(5, 3, Fraction(1, 7))
    assert (x * x.inverse() - 1).is_zero()
    y = 1 + z(3, Fraction(1, 9)) * CycScalar.half_power(3, 1)
    assert (y * y.inverse() - 1).is_zero()
    assert sign(CycScalar.half_power(2, 1) - Fraction(141, 100)) == 1
    assert compare(CycScalar.rational(3, 1), CycScalar.half_power(3, 1)) == -1


def random_scalar(rng: random.Random, p: int, n_terms: int = 3) -> CycScalar:
    m = rng.randint(0, 2)
    items = [
        (rng.randint(0, 3), Fraction(rng.randrange(p**m), p**m), Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        for _ in range(n_terms)
    ]
    return CycScalar.from_terms(p, items)


def hidden_zero(rng: random.Random, p: int) -> CycScalar:
    """A scalar that is zero for a reason the term map does not show directly."""
    x, y, w = (random_scalar(rng, p) for _ in range(3))
    kind = rng.randrange(4)
    if kind == 0:
        return x * y - y * x
    if kind == 1:
        return (x + y) * w - x * w - y * w
    if kind == 2:
        return (x * y).abs2() - x.abs2() * y.abs2()
    m = rng.randint(1, 2)
    r = Fraction(rng.randrange(p**m), p**m)
    # sum of the p roots lying over one (p^(m-1))-th root vanishes
    return CycScalar.sum(p, [x * z(p, r + Fraction(t, p)) for t in range(p)])


def test_exact_zero_agrees_with_numerics_on_random_scalars():
    rng = random.Random(20240611)
    mismatches = []
    for i in range(10_000):
        p = rng.choice([2, 3, 5, 7])
        a = hidden_zero(rng, p) if i % 3 == 0 else random_scalar(rng, p)
        if a.is_zero() != numerically_zero(a, 64, 40):
            mismatches.append(a)
    assert not mismatches


def test_arithmetic_matches_numerics():
    rng = random.Random(5)
    for _ in range(300):
        p = rng.choice([2, 3, 5])
        a, b = random_scalar(rng, p), random_scalar(rng, p)
        assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-9 * (1 + abs(complex(a) * complex(b)))
        assert abs(complex(a + b) - complex(a) - complex(b)) < 1e-9 * (1 + abs(complex(a)) + abs(complex(b)))
        n = a.abs2()
        assert n.is_real() and sign(n) >= 0
        assert (a + (-a)).is_zero()
