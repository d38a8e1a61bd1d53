"""Fourier transform with kernel chi(xi x), its inverse, and Parseval."""

from __future__ import annotations

from fractions import Fraction

from .cyclo import CycScalar
from .functions import Atom, PFunction, chi, inner_product
from .padic import Ball


def fourier(f: PFunction) -> PFunction:
    """Closed form per atom.

    The transform of ``c chi(bx) 1[B_g(a)]`` is ``c p^g chi(ba) chi(a xi)``
    on the ball ``B_{-g}(-b)``.
    """
    p = f.p
    out = []
    for at in f.atoms:
        g = at.ball.gamma
        a = at.ball.center
        coeff = at.coeff * chi(at.b * a) * Fraction(p) ** g
        out.append(Atom.make(coeff, a, Ball.make(-g, -at.b)))
    return PFunction(p, out)


def inverse_fourier(f: PFunction) -> PFunction:
    """Inverse under the kernel chi(-x xi)."""
    p = f.p
    out = []
    for at in f.atoms:
        g = at.ball.gamma
        a = at.ball.center
        coeff = at.coeff * chi(at.b * a) * Fraction(p) ** g
        out.append(Atom.make(coeff, -a, Ball.make(-g, at.b)))
    return PFunction(p, out)


def parseval_check(f: PFunction, g: PFunction) -> tuple[CycScalar, CycScalar, bool]:
    lhs = inner_product(f, g)
    rhs = inner_product(fourier(f), fourier(g))
    return lhs, rhs, (lhs - rhs).is_zero()
