"""Independent checks for the closed-form solver.

Nothing here uses the factored payoff or the incentive function. Equilibria
are certified from the literal expected-payoff double sum: since that payoff
is linear in each cooperation probability of the deviator, the best
deviation from any profile is attained at one of the ``2**m`` pure
deviations, so checking those is a complete Nash test.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .equilibria import closed_form_values, enumerate_all
from .model import GameSpec, Profile, as_profile, discrimination_level
from .payoff import expected_payoff_direct

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class DeviationVerdict:
    nash: bool
    payoff: Fraction
    best_deviation: Profile
    best_payoff: Fraction

    @property
    def gap(self) -> Fraction:
        """Best deviation payoff minus the profile's own payoff."""
        return self.best_payoff - self.payoff


def pure_deviations(m: int) -> Iterable[Profile]:
    return itertools.product((Fraction(0), Fraction(1)), repeat=m)


def vertex_deviation_check(spec: GameSpec, profile: Sequence[Fraction]) -> DeviationVerdict:
    profile = as_profile(profile, spec.m)
    own = expected_payoff_direct(spec, profile, profile)
    best, best_payoff = None, None
    for d in pure_deviations(spec.m):
        u = expected_payoff_direct(spec, d, profile)
        if best_payoff is None or u > best_payoff:
            best, best_payoff = d, u
    return DeviationVerdict(best_payoff <= own, own, tuple(best), best_payoff)


class _ScaledDirectPayoff:
    """The same double sum as :func:`expected_payoff_direct`, over integers.

    Probabilities are numerators over ``denom``; the result equals the exact
    payoff times the positive constant ``n (n-1) * q * denom**2`` (``q`` the
    common denominator of y and z), so comparisons are exact.
    """

    def __init__(self, spec: GameSpec, denom: int):
        c = spec.counts
        m = spec.m
        self.m = m
        self.denom = denom
        self.pairs = [[c[i] * (c[j] - (i == j)) for j in range(m)] for i in range(m)]
        q = math.lcm(spec.y.denominator, spec.z.denominator)
        self.Y = int(spec.y * q)
        self.Z = int(spec.z * q)

    def __call__(self, a: Sequence[int], b: Sequence[int]) -> int:
        D, Y, Z, S = self.denom, self.Y, self.Z, self.Y + self.Z
        total = 0
        for j in range(self.m):
            aj = a[j]
            for i in range(self.m):
                bi = b[i]
                total += self.pairs[i][j] * (Z * bi * D + Y * aj * D - S * bi * aj)
        return total


def scaled_nash_test(spec: GameSpec, profile: Sequence[Fraction]) -> bool:
    """Pure-deviation Nash test on the integer form of the double sum."""
    D = math.lcm(*(Fraction(a).denominator for a in profile))
    payoff = _ScaledDirectPayoff(spec, D)
    b = [int(a * D) for a in profile]
    own = payoff(b, b)
    return all(payoff(d, b) <= own for d in itertools.product((0, D), repeat=spec.m))


def candidate_values(spec: GameSpec, resolution: int) -> list[Fraction]:
    """Per-type grid ``{0, 1/g, ..., 1}`` plus the mixed value, plus every
    closed-form value for anti-coordination games."""
    if resolution < 1:
        raise ValueError("grid resolution must be >= 1")
    values = {Fraction(k, resolution) for k in range(resolution + 1)}
    values.add(spec.zeta)
    if spec.is_anti_coordination:
        values |= closed_form_values(spec)
    return sorted(values)


def grid_search_equilibria(spec: GameSpec, resolution: int, budget: int = DEFAULT_BUDGET) -> list[Profile]:
    """All symmetric equilibria whose entries lie on the candidate grid."""
    values = candidate_values(spec, resolution)
    size = len(values) ** spec.m
    if size > budget:
        raise BudgetExceeded(f"{len(values)}^{spec.m} = {size} candidate profiles exceeds budget {budget}")
    D = math.lcm(*(v.denominator for v in values))
    scaled = [int(v * D) for v in values]
    payoff = _ScaledDirectPayoff(spec, D)
    vertices = list(itertools.product((0, D), repeat=spec.m))
    found = []
    for idx in itertools.product(range(len(values)), repeat=spec.m):
        b = [scaled[k] for k in idx]
        own = payoff(b, b)
        if all(payoff(d, b) <= own for d in vertices):
            found.append(tuple(values[k] for k in idx))
    return found


def _solve(A: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination over the rationals; ``None`` if singular."""
    k = len(rhs)
    M = [row[:] + [r] for row, r in zip(A, rhs)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if M[r][col] != 0), None)
        if pivot is None:
            return None
        M[col], M[pivot] = M[pivot], M[col]
        for r in range(k):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [M[r][k] / M[r][r] for r in range(k)]


def support_enumeration_equilibria(spec: GameSpec) -> list[Profile]:
    """All symmetric equilibria, found by enumerating which types get 0, 1 or
    an interior probability.

    The deviator's marginal gain from cooperating against type ``j`` is affine
    in the opponent profile; its coefficients are read off from double-sum
    evaluations at the zero profile and the unit profiles. Interior entries
    must make that gain vanish, which fixes them through a linear system. No
    assumption is made about how many distinct interior values exist.
    """
    m = spec.m
    zero = (Fraction(0),) * m

    def unit(k: int) -> Profile:
        return tuple(Fraction(int(t == k)) for t in range(m))

    def gains(beta: Profile) -> list[Fraction]:
        base = expected_payoff_direct(spec, zero, beta)
        return [expected_payoff_direct(spec, unit(j), beta) - base for j in range(m)]

    g0 = gains(zero)
    columns = [gains(unit(i)) for i in range(m)]
    slope = [[columns[i][j] - g0[j] for i in range(m)] for j in range(m)]

    found = set()
    for pattern in itertools.product("01i", repeat=m):
        interior = [t for t in range(m) if pattern[t] == "i"]
        beta = [Fraction(0) if p == "0" else Fraction(1) for p in pattern]
        if interior:
            A = [[slope[j][i] for i in interior] for j in interior]
            rhs = [-g0[j] - sum(slope[j][i] for i in range(m) if pattern[i] == "1") for j in interior]
            solution = _solve(A, rhs)
            if solution is None:
                raise RuntimeError(f"degenerate indifference system for pattern {''.join(pattern)}")
            if not all(0 < v < 1 for v in solution):
                continue
            for t, v in zip(interior, solution):
                beta[t] = v
        profile = tuple(beta)
        if scaled_nash_test(spec, profile):
            found.add(profile)
    return sorted(found)


def oracle_equilibria(spec: GameSpec, method: str = "grid", resolution: int = 8,
                      budget: int = DEFAULT_BUDGET) -> list[Profile]:
    if method == "grid":
        return grid_search_equilibria(spec, resolution, budget)
    if method == "support":
        return support_enumeration_equilibria(spec)
    raise ValueError(f"unknown oracle method {method!r}")


@dataclass
class CrossCheckReport:
    spec: GameSpec
    method: str
    analytic: list[Profile]
    oracle: list[Profile]
    missing: list[Profile] = field(default_factory=list)
    extra: list[Profile] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.missing and not self.extra

    def to_json(self) -> dict:
        fmt = lambda ps: [[str(a) for a in p] for p in ps]  # noqa: E731
        return {
            "passed": self.passed,
            "method": self.method,
            "analytic_count": len(self.analytic),
            "oracle_count": len(self.oracle),
            "missing_from_oracle": fmt(self.missing),
            "extra_in_oracle": fmt(self.extra),
            "spec": self.spec.to_json(),
        }


def cross_check(spec: GameSpec, resolution: int = 8, method: str = "grid",
                budget: int = DEFAULT_BUDGET) -> CrossCheckReport:
    """Compare the closed-form equilibrium set with an oracle's."""
    analytic = [r.profile for r in enumerate_all(spec)]
    found = oracle_equilibria(spec, method, resolution, budget)
    a, o = set(analytic), set(found)
    return CrossCheckReport(spec, method, analytic, sorted(found), sorted(a - o), sorted(o - a))


def random_rational(rng: random.Random, max_num: int = 9, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def random_spec(rng: random.Random, m: int, kind: str = "anti-coordination", n_max: int = 50) -> GameSpec:
    """A random valid game with ``m`` types and at most ``n_max`` players."""
    if kind not in ("coordination", "anti-coordination"):
        raise ValueError(f"unknown game kind {kind!r}")
    if n_max < 2 * m:
        raise ValueError(f"n_max={n_max} too small for {m} types")
    n = rng.randint(2 * m, n_max)
    counts = [2] * m
    for _ in range(n - 2 * m):
        counts[rng.randrange(m)] += 1
    sign = 1 if kind == "anti-coordination" else -1
    return GameSpec(n, tuple(counts), sign * random_rational(rng), sign * random_rational(rng))


def spec_family(kind: str, ms: Sequence[int], n_max: int = 50) -> Callable[[random.Random], GameSpec]:
    def generate(rng: random.Random) -> GameSpec:
        return random_spec(rng, rng.choice(list(ms)), kind, n_max)

    return generate


@dataclass
class PropertyReport:
    samples: int = 0
    equilibria: int = 0
    max_level: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def equilibrium_properties(spec: GameSpec, profile: Sequence[Fraction]) -> list[str]:
    """Names of the structural properties ``profile`` violates."""
    level, _ = discrimination_level(profile)
    problems = []
    if level >= 4:
        problems.append("at-most-three-values")
    if spec.is_coordination and level != 1:
        problems.append("coordination-non-discriminating")
    if len({a for a in profile if 0 < a < 1}) > 1:
        problems.append("single-interior-value")
    return problems


def theorem_checks(generator: Callable[[random.Random], GameSpec], samples: int, seed: int = 0,
                   method: str = "support", resolution: int = 8) -> PropertyReport:
    """Sample games and check the structural properties on both the closed-form
    equilibria and the oracle's."""
    rng = random.Random(seed)
    report = PropertyReport()
    for _ in range(samples):
        spec = generator(rng)
        report.samples += 1
        sources = {
            "closed-form": [r.profile for r in enumerate_all(spec)],
            method: oracle_equilibria(spec, method, resolution),
        }
        for source, profiles in sources.items():
            for profile in profiles:
                report.equilibria += 1
                report.max_level = max(report.max_level, discrimination_level(profile)[0])
                for problem in equilibrium_properties(spec, profile):
                    report.failures.append({
                        "property": problem,
                        "source": source,
                        "profile": [str(a) for a in profile],
                        "spec": spec.to_json(),
                    })
    return report


def replay_artifact(failure: dict) -> str:
    """JSON for a failing game, loadable with :func:`hetgame.model.validate_spec`."""
    return json.dumps(failure["spec"], indent=2)
