"""Seeded generators of small random rationals for sampled checks."""
from __future__ import annotations

import random
from fractions import Fraction


def rational(rng: random.Random, bound: int = 5, max_den: int = 4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-bound * den, bound * den), den)


def positive_rational(rng: random.Random, bound: int = 5, max_den: int = 4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(1, bound * den), den)


def rational_vector(rng: random.Random, n: int, bound: int = 5, max_den: int = 4) -> tuple:
    return tuple(rational(rng, bound, max_den) for _ in range(n))


def integer_vector(rng: random.Random, n: int, bound: int = 3) -> tuple:
    return tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))
