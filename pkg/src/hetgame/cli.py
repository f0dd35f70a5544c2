"""Command-line interface.

Exit codes: 0 success (or certified equilibrium), 1 the profile is not an
equilibrium / a cross-check failed, 2 bad input. Input errors are written to
stderr as a JSON object ``{"error": ..., "message": ...}``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .equilibria import check_equilibrium_conditions, enumerate_all, two_partition_equilibrium, thresholds
from .model import (
    GameSpec,
    InvalidPartition,
    NotAntiCoordination,
    SpecError,
    decimal_string,
    parse_profile,
    parse_rational,
    validate_partition,
    validate_spec,
)
from .oracle import BudgetExceeded, cross_check, vertex_deviation_check
from .payoff import expected_payoff_direct, expected_payoff_factored, incentive_vector
from .sim import DEFAULT_SEED, simulate

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


def rational_json(value: Fraction) -> dict[str, str]:
    return {"exact": str(value), "decimal": decimal_string(value)}


def load_spec(path: str) -> GameSpec:
    try:
        if path == "-":
            raw = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read spec {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec {path!r} is not valid JSON: {exc}") from None
    return validate_spec(raw)


def _labels(spec: GameSpec, block) -> list[str]:
    return [spec.labels[t] for t in block]


def record_json(spec: GameSpec, record) -> dict:
    return {
        "profile": [{"type": label, **rational_json(a)} for label, a in zip(spec.labels, record.profile)],
        "level": record.level,
        "partition": [_labels(spec, block) for block in record.partition],
        "provenance": record.provenance,
        "boundary": record.boundary,
    }


def records_csv(spec: GameSpec, records) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = []
    for label in spec.labels:
        header += [f"alpha_{label}", f"alpha_{label}_decimal"]
    writer.writerow(header + ["level", "partition", "provenance", "boundary"])
    for r in records:
        row = []
        for a in r.profile:
            row += [str(a), decimal_string(a)]
        partition = "|".join(",".join(_labels(spec, block)) for block in r.partition)
        writer.writerow(row + [r.level, partition, r.provenance, str(r.boundary).lower()])
    return out.getvalue()


def cmd_enumerate(args) -> int:
    spec = load_spec(args.spec)
    records = enumerate_all(spec)
    status = EXIT_OK
    check = None
    if args.cross_check:
        try:
            check = cross_check(spec, args.grid, method=args.oracle)
        except BudgetExceeded as exc:
            raise SpecError(str(exc)) from None
        if not check.passed:
            status = EXIT_NEGATIVE
    if args.format == "csv":
        sys.stdout.write(records_csv(spec, records))
        if check is not None:
            print(json.dumps(check.to_json()), file=sys.stderr)
    else:
        doc = {
            "spec": spec.to_json(),
            "kind": spec.kind,
            "zeta": rational_json(spec.zeta),
            "count": len(records),
            "equilibria": [record_json(spec, r) for r in records],
        }
        if check is not None:
            doc["cross_check"] = check.to_json()
        print(json.dumps(doc, indent=2))
    return status


def certificate_json(spec: GameSpec, profile) -> dict:
    cert = check_equilibrium_conditions(spec, profile)
    verdict = vertex_deviation_check(spec, profile)
    return {
        "profile": [{"type": label, **rational_json(a)} for label, a in zip(spec.labels, profile)],
        "conditions": {
            "satisfied": cert.satisfied,
            "boundary": cert.boundary,
            "types": [
                {
                    "type": spec.labels[c.type],
                    "alpha": str(c.alpha),
                    "incentive": rational_json(c.incentive),
                    "relation": c.relation,
                    "satisfied": c.satisfied,
                }
                for c in cert.checks
            ],
        },
        "deviation": {
            "nash": verdict.nash,
            "payoff": rational_json(verdict.payoff),
            "best_deviation": [str(a) for a in verdict.best_deviation],
            "best_payoff": rational_json(verdict.best_payoff),
            "gap": rational_json(verdict.gap),
        },
        "equilibrium": cert.satisfied and verdict.nash,
    }


def cmd_verify(args) -> int:
    spec = load_spec(args.spec)
    profile = parse_profile(args.profile, spec.m)
    doc = certificate_json(spec, profile)
    print(json.dumps(doc, indent=2))
    return EXIT_OK if doc["equilibrium"] else EXIT_NEGATIVE


def cmd_payoff(args) -> int:
    spec = load_spec(args.spec)
    alpha = parse_profile(args.alpha, spec.m)
    beta = parse_profile(args.beta, spec.m) if args.beta else alpha
    direct = expected_payoff_direct(spec, alpha, beta)
    factored = expected_payoff_factored(spec, alpha, beta)
    doc = {
        "direct": rational_json(direct),
        "factored": rational_json(factored),
        "equal": direct == factored,
        "incentives": [{"type": label, **rational_json(f)}
                       for label, f in zip(spec.labels, incentive_vector(spec, beta))],
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = load_spec(args.spec)
    alpha = parse_profile(args.profile, spec.m)
    beta = parse_profile(args.beta, spec.m) if args.beta else alpha
    if args.rounds < 1:
        raise SpecError(f"--rounds must be >= 1, got {args.rounds}")
    if not 0 <= args.seed < 2**64:
        raise SpecError(f"--seed must be a 64-bit unsigned integer, got {args.seed}")
    report = simulate(spec, alpha, beta, args.rounds, args.seed, workers=args.workers)
    print(json.dumps(report.to_json(), indent=2))
    return EXIT_OK


SWEEP_COLUMNS = ("y", "z", "zeta", "theta1", "theta2", "share_t2", "case", "boundary", "alpha1", "alpha2")


def sweep_rows(spec: GameSpec, high_block, y_min: Fraction, y_max: Fraction, steps: int) -> list[dict]:
    """Case of the two-block equilibrium as ``y`` (and hence zeta) varies, ``z`` fixed."""
    if not spec.is_anti_coordination:
        raise NotAntiCoordination("sweep needs an anti-coordination spec (y, z > 0)")
    if steps < 1:
        raise SpecError(f"--steps must be >= 1, got {steps}")
    if not 0 < y_min <= y_max:
        raise SpecError(f"need 0 < y-min <= y-max, got {y_min}, {y_max}")
    high = tuple(sorted(high_block))
    low = tuple(t for t in range(spec.m) if t not in high)
    blocks = validate_partition((low, high), spec.m, blocks=2)
    share = Fraction(sum(spec.counts[t] for t in high), spec.n)
    rows = []
    for k in range(steps):
        y = y_min if steps == 1 else y_min + (y_max - y_min) * k / (steps - 1)
        game = GameSpec(spec.n, spec.counts, y, spec.z, spec.labels)
        record = two_partition_equilibrium(game, blocks)
        theta1, theta2 = thresholds(game)
        rows.append({
            "y": y,
            "z": game.z,
            "zeta": game.zeta,
            "theta1": theta1,
            "theta2": theta2,
            "share_t2": share,
            "case": int(record.provenance.split("case")[1][0]),
            "boundary": record.boundary,
            "alpha1": record.profile[blocks[0][0]],
            "alpha2": record.profile[blocks[1][0]],
        })
    return rows


def cmd_sweep(args) -> int:
    spec = load_spec(args.spec)
    if not args.t2:
        raise InvalidPartition("--t2 must name at least one type")
    high = {spec.type_index(label.strip()) for label in args.t2.split(",")}
    rows = sweep_rows(spec, high, parse_rational(args.y_min), parse_rational(args.y_max), args.steps)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    header = []
    for col in SWEEP_COLUMNS:
        header += [col, f"{col}_decimal"] if col not in ("case", "boundary") else [col]
    writer.writerow(header)
    for row in rows:
        out = []
        for col in SWEEP_COLUMNS:
            value = row[col]
            if isinstance(value, bool):
                out.append(str(value).lower())
            elif isinstance(value, Fraction):
                out += [str(value), decimal_string(value)]
            else:
                out.append(value)
        writer.writerow(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hetgame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--spec", required=True, help="game spec JSON file ('-' for stdin)")
        p.set_defaults(func=func)
        return p

    p = add("enumerate", cmd_enumerate, "list every symmetric equilibrium")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cross-check", action="store_true", help="compare against an independent oracle")
    p.add_argument("--grid", type=int, default=8, help="grid resolution for the oracle")
    p.add_argument("--oracle", choices=("grid", "support"), default="grid")

    p = add("verify", cmd_verify, "certify a symmetric profile")
    p.add_argument("--profile", required=True, help="comma-separated probabilities, e.g. 0,5/6,1")

    p = add("payoff", cmd_payoff, "expected payoff by both formulas")
    p.add_argument("--alpha", "--profile", dest="alpha", required=True)
    p.add_argument("--beta", help="opponent profile (default: same as --alpha)")

    p = add("simulate", cmd_simulate, "Monte Carlo estimate of the expected payoff")
    p.add_argument("--profile", required=True)
    p.add_argument("--beta", help="opponent profile (default: same as --profile)")
    p.add_argument("--rounds", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)

    p = add("sweep", cmd_sweep, "two-block equilibrium case as y varies")
    p.add_argument("--t2", required=True, help="comma-separated labels of the higher-cooperation block")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--y-min", default="1/10")
    p.add_argument("--y-max", default="10")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(json.dumps(exc.to_dict()), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
