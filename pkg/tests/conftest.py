from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from hetgame.model import GameSpec, make_spec

ACCEPTANCE_LINES: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "stochastic: Monte Carlo check; rerun with a fresh seed before failing")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def half_half():
    """n=10, two types of 5, y = z = 1."""
    return make_spec((5, 5), 1, 1)


@pytest.fixture
def four_four_two():
    return make_spec((4, 4, 2), 1, 1)


@st.composite
def specs(draw, min_types=2, max_types=5, n_max=50, kind=None):
    m = draw(st.integers(min_types, max_types))
    n = draw(st.integers(2 * m, max(2 * m, n_max)))
    extra = draw(st.lists(st.integers(0, m - 1), min_size=n - 2 * m, max_size=n - 2 * m))
    counts = [2] * m
    for t in extra:
        counts[t] += 1
    y = draw(st.fractions(min_value=Fraction(1, 12), max_value=20, max_denominator=12))
    z = draw(st.fractions(min_value=Fraction(1, 12), max_value=20, max_denominator=12))
    if kind is None:
        kind = draw(st.sampled_from(["coordination", "anti-coordination"]))
    sign = 1 if kind == "anti-coordination" else -1
    return GameSpec(n, tuple(counts), sign * y, sign * z)


def probabilities(max_denominator=30):
    return st.fractions(min_value=0, max_value=1, max_denominator=max_denominator)


@st.composite
def spec_and_profiles(draw, **kwargs):
    spec = draw(specs(**kwargs))
    alpha = tuple(draw(st.lists(probabilities(), min_size=spec.m, max_size=spec.m)))
    beta = tuple(draw(st.lists(probabilities(), min_size=spec.m, max_size=spec.m)))
    return spec, alpha, beta


def random_profile(rng: random.Random, m: int, max_den: int = 12) -> tuple[Fraction, ...]:
    out = []
    for _ in range(m):
        den = rng.randint(1, max_den)
        out.append(Fraction(rng.randint(0, den), den))
    return tuple(out)
