"""Encounter probabilities, expected payoffs and the incentive function.

Two expected-payoff routines are provided and they deliberately share no
code: :func:`expected_payoff_direct` is the literal double sum over ordered
type encounters, :func:`expected_payoff_factored` is the closed form used
by the solver. They must agree exactly.
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache

from .model import GameSpec


def _check_index(spec: GameSpec, k: int) -> None:
    if not 0 <= k < spec.m:
        raise IndexError(f"type index {k} out of range for {spec.m} types")


def encounter_probability(spec: GameSpec, i: int, j: int) -> Fraction:
    """Probability that a random ordered pair is (type ``i``, type ``j``).

    The opponent is drawn from the remaining ``n - 1`` individuals.
    """
    _check_index(spec, i)
    _check_index(spec, j)
    n = spec.n
    x_i = Fraction(spec.counts[i], n)
    if i == j:
        return (n * x_i - 1) * x_i / (n - 1)
    x_j = Fraction(spec.counts[j], n)
    return n * x_i * x_j / (n - 1)


@lru_cache(maxsize=256)
def encounter_matrix(spec: GameSpec) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(encounter_probability(spec, i, j) for j in range(spec.m)) for i in range(spec.m))


def stage_payoff(alpha_j: Fraction, beta_i: Fraction, y: Fraction, z: Fraction) -> Fraction:
    """Expected payoff of one encounter in the 2x2 game.

    ``alpha_j`` is the focal player's cooperation probability, ``beta_i`` the
    opponent's.
    """
    return y * alpha_j * (1 - beta_i) + z * (1 - alpha_j) * beta_i


def expected_payoff_direct(spec: GameSpec, alpha: Sequence[Fraction], beta: Sequence[Fraction]) -> Fraction:
    """Expected payoff of playing ``alpha`` against ``beta``, as the double sum
    over (focal type ``i``, opponent type ``j``) weighted by the encounter
    probability.

    Summed over integers: every input is put over one common denominator
    ``D`` and the encounter weights over ``n (n - 1)``, and the total is
    divided out once at the end.
    """
    alpha = [Fraction(a) for a in alpha]
    beta = [Fraction(b) for b in beta]
    D = math.lcm(spec.y.denominator, spec.z.denominator, *(v.denominator for v in alpha + beta))
    a = [int(v * D) for v in alpha]
    b = [int(v * D) for v in beta]
    Y, Z = int(spec.y * D), int(spec.z * D)
    c = spec.counts
    total = 0
    for j in range(spec.m):
        for i in range(spec.m):
            pairs = c[i] * (c[j] - 1) if i == j else c[i] * c[j]
            total += pairs * (Z * b[i] * D + Y * a[j] * D - (Y + Z) * b[i] * a[j])
    return Fraction(total, spec.n * (spec.n - 1) * D**3)


def incentive(spec: GameSpec, beta: Sequence[Fraction], j: int) -> Fraction:
    """Marginal value of cooperating against type ``j`` when the opponent plays ``beta``.

    Positive means cooperate, negative means defect, zero means indifferent.
    """
    _check_index(spec, j)
    n, s = spec.n, spec.y + spec.z
    mean_beta = sum((x * b for x, b in zip(spec.proportions, beta)), Fraction(0))
    return (n - 1) * spec.y + s * beta[j] - n * s * mean_beta


def incentive_vector(spec: GameSpec, beta: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(incentive(spec, beta, j) for j in range(spec.m))


def expected_payoff_factored(spec: GameSpec, alpha: Sequence[Fraction], beta: Sequence[Fraction]) -> Fraction:
    n = spec.n
    xs = spec.proportions
    base = spec.z * sum((x * b for x, b in zip(xs, beta)), Fraction(0))
    F = incentive_vector(spec, beta)
    return base + sum((x / (n - 1) * f * a for x, f, a in zip(xs, F, alpha)), Fraction(0))
