"""Exact multiframelet analysis on the p-adic line."""

from .corpus import generate_corpus
from .cyclo import CycScalar
from .duals import canonical_dual, decompose_reconstruct
from .fourier import fourier, inverse_fourier
from .framelet_sets import BallUnionSet, MultiframeletSet, example_set, generators_from_set
from .frames import (
    GeneratorSet,
    analyze,
    doubled,
    kozyrev_generators,
    ks_generators,
    sum_squares,
    synthesize,
    weighted,
)
from .functions import PFunction, inner_product, norm2
from .padic import Ball, PAdic

__all__ = [
    "Ball",
    "BallUnionSet",
    "CycScalar",
    "GeneratorSet",
    "MultiframeletSet",
    "PAdic",
    "PFunction",
    "analyze",
    "canonical_dual",
    "decompose_reconstruct",
    "doubled",
    "example_set",
    "fourier",
    "generate_corpus",
    "generators_from_set",
    "inner_product",
    "inverse_fourier",
    "kozyrev_generators",
    "ks_generators",
    "norm2",
    "sum_squares",
    "synthesize",
    "weighted",
]
