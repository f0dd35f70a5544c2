"""Acceptance criteria. Each test prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline;
they are also repeated in the terminal summary.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from fractions import Fraction
from functools import cache

from hetgame.cli import main
from hetgame.equilibria import check_equilibrium_conditions, enumerate_all
from hetgame.model import GameSpec, make_spec
from hetgame.oracle import (
    cross_check,
    grid_search_equilibria,
    oracle_equilibria,
    pure_deviations,
    random_spec,
    vertex_deviation_check,
)
from hetgame.payoff import encounter_probability, expected_payoff_direct, expected_payoff_factored, incentive_vector
from hetgame.sim import empirical_encounter_frequencies, simulate

from .conftest import ACCEPTANCE_LINES, random_profile

F = Fraction
ANTI, COORD = "anti-coordination", "coordination"


def report(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def levels(profiles) -> list[int]:
    return [len(set(p)) for p in profiles]


# Equilibria certified by criteria 2-6, shared with criteria 7 and 8.
@cache
def run_theorem1():
    rng = random.Random(2)
    bad, certified = [], []
    for _ in range(50):
        spec = random_spec(rng, rng.choice([2, 3, 4, 5]), COORD)
        got = {r.profile for r in enumerate_all(spec)}
        want = {(F(0),) * spec.m, (F(1),) * spec.m, (spec.zeta,) * spec.m}
        if got != want:
            bad.append(spec)
        certified += [(spec, p) for p in got]
    for _ in range(50):
        spec = random_spec(rng, rng.choice([2, 3, 4, 5]), ANTI)
        records = enumerate_all(spec)
        if [r.profile for r in records if r.level == 1] != [(spec.zeta,) * spec.m]:
            bad.append(spec)
        certified += [(spec, r.profile) for r in records]
    return bad, certified


@cache
def run_worked_instance():
    spec = make_spec((4, 4, 2), 1, 1)
    oracle = set(grid_search_equilibria(spec, 10))
    analytic = {r.profile for r in enumerate_all(spec)}
    return spec, oracle, analytic


@cache
def run_oracle_agreement():
    rng = random.Random(4)
    failures, certified = [], []
    for kind, ms in ((ANTI, [2, 3]), (COORD, [2, 3, 4])):
        for _ in range(100):
            spec = random_spec(rng, rng.choice(ms), kind)
            check = cross_check(spec, 8)
            if not check.passed:
                failures.append(check.to_json())
            certified += [(spec, p) for p in check.oracle]
    return failures, certified


@cache
def run_at_most_three():
    rng = random.Random(5)
    specs = [random_spec(rng, 4, ANTI) for _ in range(50)] + [random_spec(rng, 5, ANTI) for _ in range(20)]
    offenders, certified, max_level, disagreements = [], [], 0, 0
    for spec in specs:
        analytic = [r.profile for r in enumerate_all(spec)]
        oracle = oracle_equilibria(spec, "support")
        disagreements += set(analytic) != set(oracle)
        for p in analytic + oracle:
            max_level = max(max_level, len(set(p)))
            if len(set(p)) >= 4:
                offenders.append((spec.to_json(), [str(a) for a in p]))
        certified += [(spec, p) for p in oracle]
    return offenders, certified, max_level, disagreements


@cache
def run_coordination():
    rng = random.Random(6)
    offenders, certified = [], []
    for _ in range(50):
        spec = random_spec(rng, rng.choice([2, 3, 4]), COORD)
        paths = {
            "closed-form": [r.profile for r in enumerate_all(spec)],
            "grid": grid_search_equilibria(spec, 6),
            "support": oracle_equilibria(spec, "support"),
        }
        for name, found in paths.items():
            offenders += [(name, spec.to_json()) for lvl in levels(found) if lvl != 1]
            certified += [(spec, p) for p in found]
    return offenders, certified


def all_certified() -> list[tuple[GameSpec, tuple]]:
    spec, oracle, _ = run_worked_instance()
    pool = (run_theorem1()[1] + [(spec, p) for p in oracle] + run_oracle_agreement()[1]
            + run_at_most_three()[1] + run_coordination()[1])
    return list({(s, p): None for s, p in pool})


# ----------------------------------------------------------------------------


def test_criterion_01_payoff_identity():
    rng = random.Random(1)
    mismatches = 0
    trials = 1200
    for k in range(trials):
        spec = random_spec(rng, 2 + k % 4, rng.choice([ANTI, COORD]), n_max=50)
        alpha, beta = random_profile(rng, spec.m), random_profile(rng, spec.m)
        mismatches += expected_payoff_direct(spec, alpha, beta) != expected_payoff_factored(spec, alpha, beta)
    report(1, "direct double sum == factored payoff, exact", mismatches == 0,
           f"{trials} triples, m in 2..5, n <= 50, {mismatches} mismatches")


def test_criterion_02_nondiscriminating_equilibria():
    bad, _ = run_theorem1()
    report(2, "coordination -> {all-0, all-1, all-zeta}; anti-coordination level-1 == all-zeta", not bad,
           f"50 + 50 specs, {len(bad)} failures")


def test_criterion_03_worked_instance():
    spec, oracle, analytic = run_worked_instance()
    target = (F(0), F(5, 6), F(1))
    ok = (len(oracle) == 13 and oracle == analytic and target in analytic
          and incentive_vector(spec, target) == (F(-5, 3), 0, F(1, 3)))
    report(3, "n=10 counts (4,4,2) y=z=1: (0,5/6,1) with F=(-5/3,0,1/3); 13 equilibria", ok,
           f"grid oracle g=10 found {len(oracle)}, closed form {len(analytic)}")


def test_criterion_04_oracle_agreement():
    failures, _ = run_oracle_agreement()
    report(4, "closed form == grid search (g=8)", not failures,
           f"100 anti-coordination m in {{2,3}} + 100 coordination, {len(failures)} mismatches")


def test_criterion_05_at_most_three_values():
    offenders, _, max_level, disagreements = run_at_most_three()
    report(5, "no equilibrium with >= 4 distinct values (m=4, m=5)", not offenders and disagreements == 0,
           f"50 m=4 + 20 m=5 specs, closed form + support enumeration, max level {max_level}, "
           f"{disagreements} set disagreements")


def test_criterion_06_coordination_never_discriminates():
    offenders, certified = run_coordination()
    report(6, "coordination games: every equilibrium is level 1", not offenders,
           f"50 specs m<=4, 3 paths, {len(certified)} equilibria, {len(offenders)} offenders")


def test_criterion_07_single_interior_value():
    pool = all_certified()
    bad = [(s, p) for s, p in pool if len({a for a in p if 0 < a < 1}) > 1]
    report(7, "at most one distinct interior value per equilibrium", not bad,
           f"{len(pool)} certified equilibria from criteria 2-6")


def test_criterion_08_vertex_deviation_soundness():
    pool = all_certified()
    unsound = 0
    for spec, p in pool:
        own = expected_payoff_direct(spec, p, p)
        unsound += any(expected_payoff_direct(spec, d, p) > own for d in pure_deviations(spec.m))
    rng = random.Random(8)
    rejected = wrong = 0
    for _ in range(200):
        spec = random_spec(rng, rng.choice([2, 3, 4]), rng.choice([ANTI, COORD]))
        p = random_profile(rng, spec.m)
        verdict = vertex_deviation_check(spec, p)
        if not verdict.nash:
            rejected += 1
            wrong += not (expected_payoff_direct(spec, verdict.best_deviation, p) > expected_payoff_direct(spec, p, p))
        elif not check_equilibrium_conditions(spec, p).satisfied:
            wrong += 1
    report(8, "certified equilibria beat all pure deviations; rejected profiles have a strictly better one",
           unsound == 0 and wrong == 0 and rejected > 0,
           f"{len(pool)} equilibria, {rejected}/200 random profiles rejected, {unsound + wrong} errors")


def test_criterion_09_simulator_calibration():
    rounds = 10**5
    cases = [
        (make_spec((5, 5), 1, 1), (F(1, 2), F(1, 2)), 0),
        (make_spec((4, 4, 2), 1, 1), (F(0), F(5, 6), F(1)), 1),
        (make_spec((3, 5, 4), 2, 3), (F(1, 5), F(1), F(0)), 2),
    ]

    def mean_ok(spec, p, seed):
        r = simulate(spec, p, p, rounds, seed)
        return r.analytic == expected_payoff_direct(spec, p, p) and abs(r.mean - float(r.analytic)) <= 3 * r.stderr

    def freq_ok(spec, seed):
        table = empirical_encounter_frequencies(spec, rounds, seed)
        for i, j in itertools.product(range(spec.m), repeat=2):
            prob = float(encounter_probability(spec, i, j))
            if abs(float(table[i][j]) - prob) > 3 * math.sqrt(prob * (1 - prob) / rounds):
                return False
        return sum(map(sum, table)) == 1

    def two_strikes(check, seed):
        return check(seed) or check(seed + 1_000_003)

    means = [two_strikes(lambda s, spec=spec, p=p: mean_ok(spec, p, s), seed) for spec, p, seed in cases]
    freq_specs = [make_spec((5, 5), 1, 1), make_spec((2, 2), 1, 1), make_spec((4, 4, 2), 1, 1)]
    freqs = [two_strikes(lambda s, spec=spec: freq_ok(spec, s), 0) for spec in freq_specs]
    # regression: n=4 diagonal cell must be 1/6 (without replacement), not 1/4
    diag = float(empirical_encounter_frequencies(make_spec((2, 2), 1, 1), rounds, 0)[0][0])
    diag_ok = abs(diag - 1 / 6) < abs(diag - 1 / 4)
    report(9, "simulated mean within 3 SE of exact payoff; encounter cells within 3 binomial SE",
           all(means) and all(freqs) and diag_ok,
           f"means {means}, frequencies {freqs}, n=4 diagonal {diag:.4f} vs 1/6")


def test_criterion_10_invariance():
    rng = random.Random(10)
    failures = 0
    for _ in range(15):
        spec = random_spec(rng, rng.choice([2, 3, 4]), rng.choice([ANTI, COORD]))
        base = {r.profile for r in enumerate_all(spec)}
        perms = list(itertools.permutations(range(spec.m)))
        for perm in rng.sample(perms, min(len(perms), 6)):
            moved = {r.profile for r in enumerate_all(spec.relabeled(perm))}
            failures += moved != {tuple(p[k] for k in perm) for p in base}
        for c in (F(2), F(1, 3)):
            failures += {r.profile for r in enumerate_all(spec.scaled(c))} != base
    report(10, "relabeling permutes the equilibrium set; scaling by 2 and 1/3 leaves it unchanged", failures == 0,
           f"15 specs, {failures} failures")


def test_criterion_11_cli_end_to_end(tmp_path, capsys):
    rng = random.Random(11)
    specs = [make_spec((5, 5), 1, 1), make_spec((4, 4, 2), 1, 1), make_spec((5, 5), -1, -1)]
    specs += [random_spec(rng, rng.choice([2, 3, 4]), rng.choice([ANTI, COORD])) for _ in range(7)]
    verified = failed = 0
    for k, spec in enumerate(specs):
        path = tmp_path / f"spec{k}.json"
        path.write_text(json.dumps(spec.to_json()))
        assert main(["enumerate", "--spec", str(path)]) == 0
        doc = json.loads(capsys.readouterr().out)
        for record in doc["equilibria"]:
            profile = ",".join(p["exact"] for p in record["profile"])
            code = main(["verify", "--spec", str(path), "--profile", profile])
            capsys.readouterr()
            verified += code == 0
            failed += code != 0

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 10, "types": [{"label": "a", "count": 9}, {"label": "b", "count": 1}],
                               "y": 1, "z": 1}))
    good = tmp_path / "spec0.json"
    codes = {
        "validation": main(["enumerate", "--spec", str(bad)]),
        "parse": main(["verify", "--spec", str(good), "--profile", "1,oops"]),
        "not-equilibrium": main(["verify", "--spec", str(good), "--profile", "1,1"]),
    }
    capsys.readouterr()
    contract = codes == {"validation": 2, "parse": 2, "not-equilibrium": 1}
    report(11, "enumerate -> verify exits 0 for every record; exit codes 2/2/1 for input/parse/non-equilibrium",
           failed == 0 and verified > 0 and contract, f"10 specs, {verified} records verified, codes {codes}")
