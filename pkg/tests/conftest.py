"""Shared fixtures: the six desk-scale test spaces and rational samplers."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from drlab.htype import SpaceSignature, build_space

# (label, m, copies): real-hyperbolic, two complex-hyperbolic, quaternionic,
# and two generically non-symmetric spaces.
SPACE_PARAMS = [
    ("RH4", 0, 3),
    ("CH2", 1, 1),
    ("CH3", 1, 2),
    ("HH2", 3, 1),
    ("M2N8", 2, 2),
    ("M5N8", 5, 1),
]

_cache: dict[tuple[int, int], SpaceSignature] = {}


def get_space(m: int, copies: int) -> SpaceSignature:
    key = (m, copies)
    if key not in _cache:
        _cache[key] = build_space(m, copies)
    return _cache[key]


@pytest.fixture(params=SPACE_PARAMS, ids=[p[0] for p in SPACE_PARAMS])
def space(request) -> SpaceSignature:
    _, m, copies = request.param
    return get_space(m, copies)


@pytest.fixture
def ch2() -> SpaceSignature:
    return get_space(1, 1)


@pytest.fixture
def ch3() -> SpaceSignature:
    return get_space(1, 2)


@pytest.fixture
def hh2() -> SpaceSignature:
    return get_space(3, 1)


def rational_vector(rng: np.random.Generator, k: int, den: int = 8) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(x), den) for x in rng.integers(-2 * den, 2 * den + 1, k))


def square_t(rng: np.random.Generator) -> Fraction:
    root = Fraction(int(rng.integers(1, 7)), int(rng.integers(1, 4)))
    return root * root
