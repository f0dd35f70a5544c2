"""Monte Carlo random matching.

Each round draws a focal individual uniformly from the population and an
opponent uniformly from the remaining ``n - 1`` members, then samples both
actions and scores the focal player.

Random numbers come from numpy's PCG64 bit generator. Rounds are processed
in fixed-size chunks; chunk ``k`` of a run with seed ``s`` uses the stream
``SeedSequence(s, spawn_key=(k,))``. Chunk statistics are merged with a
fixed pairwise tree, so a report depends only on (game, profiles, rounds,
seed) and not on how many workers processed the chunks.
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import GameSpec, as_profile
from .payoff import expected_payoff_direct

CHUNK_ROUNDS = 1 << 16
DEFAULT_SEED = 0


@dataclass(frozen=True)
class SimReport:
    rounds: int
    mean: float
    stderr: float
    seed: int
    analytic: Fraction

    @property
    def z_score(self) -> float:
        diff = self.mean - float(self.analytic)
        if self.stderr == 0:
            return 0.0 if diff == 0 else math.inf
        return diff / self.stderr

    def to_json(self) -> dict:
        return {
            "rounds": self.rounds,
            "mean": self.mean,
            "stderr": self.stderr,
            "seed": self.seed,
            "analytic": str(self.analytic),
            "analytic_decimal": float(self.analytic),
        }


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _chunks(rounds: int) -> list[int]:
    full, rest = divmod(rounds, CHUNK_ROUNDS)
    return [CHUNK_ROUNDS] * full + ([rest] if rest else [])


def _draw_pairs(spec: GameSpec, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Types of the focal individual and of an opponent drawn without replacement."""
    type_of = np.repeat(np.arange(spec.m), spec.counts)
    focal = rng.integers(0, spec.n, size=size)
    other = rng.integers(0, spec.n - 1, size=size)
    other += other >= focal
    return type_of[focal], type_of[other]


def _pairwise(stats: list[tuple[int, float, float]]) -> tuple[int, float, float]:
    """Merge (count, mean, sum of squared deviations) triples, always in the same tree."""
    if len(stats) == 1:
        return stats[0]
    mid = len(stats) // 2
    na, ma, sa = _pairwise(stats[:mid])
    nb, mb, sb = _pairwise(stats[mid:])
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, sa + sb + delta * delta * na * nb / n


def _payoff_chunk(spec, alpha, beta, y, z, seed, chunk, size):
    rng = chunk_generator(seed, chunk)
    focal_type, opp_type = _draw_pairs(spec, rng, size)
    focal_coop = rng.random(size) < alpha[opp_type]
    opp_coop = rng.random(size) < beta[focal_type]
    scores = np.where(focal_coop & ~opp_coop, y, 0.0) + np.where(~focal_coop & opp_coop, z, 0.0)
    mean = float(scores.mean())
    return size, mean, float(((scores - mean) ** 2).sum())


def simulate(spec: GameSpec, alpha: Sequence[Fraction], beta: Sequence[Fraction], rounds: int,
             seed: int = DEFAULT_SEED, workers: int = 1) -> SimReport:
    """Estimate the expected payoff of ``alpha`` against ``beta`` by random matching."""
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    alpha = as_profile(alpha, spec.m)
    beta = as_profile(beta, spec.m)
    a = np.array([float(v) for v in alpha])
    b = np.array([float(v) for v in beta])
    y, z = float(spec.y), float(spec.z)
    jobs = list(enumerate(_chunks(rounds)))
    run = lambda job: _payoff_chunk(spec, a, b, y, z, seed, job[0], job[1])  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            stats = list(pool.map(run, jobs))
    else:
        stats = [run(job) for job in jobs]
    count, mean, ss = _pairwise(stats)
    stderr = math.sqrt(ss / (count - 1) / count) if count > 1 else 0.0
    return SimReport(rounds, mean, stderr, seed, expected_payoff_direct(spec, alpha, beta))


def empirical_encounter_frequencies(spec: GameSpec, rounds: int, seed: int = DEFAULT_SEED) -> list[list[Fraction]]:
    """Observed share of (focal type, opponent type) pairs; cells sum to 1 exactly."""
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    table = np.zeros((spec.m, spec.m), dtype=np.int64)
    for chunk, size in enumerate(_chunks(rounds)):
        focal_type, opp_type = _draw_pairs(spec, chunk_generator(seed, chunk), size)
        np.add.at(table, (focal_type, opp_type), 1)
    return [[Fraction(int(c), rounds) for c in row] for row in table]
