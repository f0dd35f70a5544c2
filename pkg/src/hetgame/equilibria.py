"""Closed-form enumeration of symmetric equilibria.

Every symmetric equilibrium cooperates with probability 0, 1 or a single
shared interior value against each opponent type, so it is described by an
ordered partition of the types into at most three blocks. Coordination games
only have the three non-discriminating equilibria; anti-coordination games
additionally have one candidate per ordered 2-block partition and one per
ordered 3-block partition that satisfies two threshold inequalities.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction

from .model import (
    GameSpec,
    NotAntiCoordination,
    OrderedPartition,
    Profile,
    as_profile,
    discrimination_level,
    ordered_partitions,
    validate_partition,
)
from .payoff import incentive_vector

# provenance tags
THM1_COORD_0 = "Thm1-coord-0"
THM1_COORD_1 = "Thm1-coord-1"
THM1_MIXED = "Thm1-mixed"
THM5_CASE1 = "Thm5-case1"
THM5_CASE2 = "Thm5-case2"
THM5_CASE3 = "Thm5-case3"
THM6 = "Thm6"


class ConditionFailed(Exception):
    """A 3-block partition does not satisfy the threshold inequalities."""

    def __init__(self, condition: str, lhs: Fraction, rhs: Fraction):
        self.condition = condition
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"{condition} condition violated: {lhs} >= {rhs}")


@dataclass(frozen=True)
class TypeCheck:
    type: int
    alpha: Fraction
    incentive: Fraction
    relation: str
    satisfied: bool
    boundary: bool


@dataclass(frozen=True)
class Certificate:
    satisfied: bool
    checks: tuple[TypeCheck, ...]

    @property
    def boundary(self) -> bool:
        return any(c.boundary for c in self.checks)

    @property
    def incentives(self) -> tuple[Fraction, ...]:
        return tuple(c.incentive for c in self.checks)


@dataclass(frozen=True)
class EquilibriumRecord:
    profile: Profile
    level: int
    partition: OrderedPartition
    provenance: str
    boundary: bool = False

    def __post_init__(self) -> None:
        level, partition = discrimination_level(self.profile)
        if (level, partition) != (self.level, self.partition):
            raise ValueError(f"record level/partition inconsistent with profile {self.profile}")

    @property
    def interior_values(self) -> set[Fraction]:
        return {a for a in self.profile if 0 < a < 1}


def _record(profile: Sequence[Fraction], provenance: str, boundary: bool = False) -> EquilibriumRecord:
    profile = tuple(Fraction(a) for a in profile)
    level, partition = discrimination_level(profile)
    return EquilibriumRecord(profile, level, partition, provenance, boundary)


def check_equilibrium_conditions(spec: GameSpec, profile: Sequence[Fraction]) -> Certificate:
    """Check the best-response sign conditions of a symmetric profile.

    Against type ``k``: full cooperation needs a non-negative incentive, full
    defection a non-positive one, and an interior probability needs exactly
    zero. A pure entry facing a zero incentive passes and is flagged as a
    boundary case.
    """
    profile = as_profile(profile, spec.m)
    F = incentive_vector(spec, profile)
    checks = []
    for k, (a, f) in enumerate(zip(profile, F)):
        if a == 1:
            relation, ok = "F>=0", f >= 0
        elif a == 0:
            relation, ok = "F<=0", f <= 0
        else:
            relation, ok = "F=0", f == 0
        checks.append(TypeCheck(k, a, f, relation, ok, boundary=ok and f == 0 and a in (0, 1)))
    return Certificate(all(c.satisfied for c in checks), tuple(checks))


def nondiscriminating_equilibria(spec: GameSpec) -> list[EquilibriumRecord]:
    m = spec.m
    records = [_record((spec.zeta,) * m, THM1_MIXED)]
    if spec.is_coordination:
        records += [_record((Fraction(0),) * m, THM1_COORD_0), _record((Fraction(1),) * m, THM1_COORD_1)]
    return sorted(records, key=lambda r: r.profile)


def _require_anti_coordination(spec: GameSpec) -> None:
    if not spec.is_anti_coordination:
        raise NotAntiCoordination(f"discriminating equilibria need y, z > 0 (got y={spec.y}, z={spec.z})")


def _share(spec: GameSpec, block: Sequence[int]) -> Fraction:
    return Fraction(sum(spec.counts[t] for t in block), spec.n)


def _assign(m: int, blocks: OrderedPartition, values: Sequence[Fraction]) -> Profile:
    profile = [Fraction(0)] * m
    for block, value in zip(blocks, values):
        for t in block:
            profile[t] = value
    return tuple(profile)


def thresholds(spec: GameSpec) -> tuple[Fraction, Fraction]:
    """The two cut points for the share of the cooperated-with block."""
    low = (1 - Fraction(1, spec.n)) * spec.zeta
    return low, low + Fraction(1, spec.n)


def two_block_case(spec: GameSpec, share_high: Fraction) -> tuple[str, bool, Fraction | None, Fraction | None]:
    """Classify the share ``S2`` of the higher-cooperation block.

    Returns ``(tag, boundary, low_value, high_value)``; the low value is only
    filled in for case 1 and the high value only for case 3, since the other
    entry is pure. The low-block share is ``1 - S2``.
    """
    n, zeta = spec.n, spec.zeta
    theta1, theta2 = thresholds(spec)
    if share_high < theta1:
        low = ((n - 1) * zeta - n * share_high) / (n * (1 - share_high) - 1)
        return THM5_CASE1, False, low, None
    if share_high > theta2:
        return THM5_CASE3, False, None, (n - 1) * zeta / (n * share_high - 1)
    return THM5_CASE2, share_high in (theta1, theta2), None, None


def two_partition_equilibrium(spec: GameSpec, partition: Sequence[Sequence[int]]) -> EquilibriumRecord:
    """The unique equilibrium cooperating less with block 1 than with block 2."""
    _require_anti_coordination(spec)
    blocks = validate_partition(partition, spec.m, blocks=2)
    tag, boundary, low, high = two_block_case(spec, _share(spec, blocks[1]))
    values = (low if low is not None else Fraction(0), high if high is not None else Fraction(1))
    profile = _assign(spec.m, blocks, values)
    cert = check_equilibrium_conditions(spec, profile)
    assert cert.satisfied, f"closed form failed the equilibrium conditions: {profile}"
    assert values[0] < values[1]
    return _record(profile, tag, boundary or cert.boundary)


def three_block_interior(spec: GameSpec, blocks: OrderedPartition) -> Fraction:
    """Interior cooperation value on the middle block of an ordered 3-partition."""
    n = spec.n
    denom = n * _share(spec, blocks[1]) - 1
    assert denom > 0  # middle block holds >= 2 individuals
    return ((n - 1) * spec.zeta - n * _share(spec, blocks[2])) / denom


def three_partition_equilibrium(spec: GameSpec, partition: Sequence[Sequence[int]]) -> EquilibriumRecord:
    """Equilibrium playing 0 / interior / 1 on the three blocks.

    Raises :class:`ConditionFailed` when a threshold inequality fails. At an
    exact equality the middle value collapses to 0 or 1; the resulting
    two-valued profile still passes the equilibrium conditions and is
    flagged as a boundary record.
    """
    _require_anti_coordination(spec)
    blocks = validate_partition(partition, spec.m, blocks=3)
    factor = 1 - Fraction(1, spec.n)
    share1, share3 = _share(spec, blocks[0]), _share(spec, blocks[2])
    limit3, limit1 = factor * spec.zeta, factor * (1 - spec.zeta)
    if share3 > limit3:
        raise ConditionFailed("T3", share3, limit3)
    if share1 > limit1:
        raise ConditionFailed("T1", share1, limit1)
    boundary = share3 == limit3 or share1 == limit1
    middle = three_block_interior(spec, blocks)
    profile = _assign(spec.m, blocks, (Fraction(0), middle, Fraction(1)))
    cert = check_equilibrium_conditions(spec, profile)
    assert cert.satisfied, f"closed form failed the equilibrium conditions: {profile}"
    return _record(profile, THM6, boundary or cert.boundary)


def enumerate_all(spec: GameSpec) -> list[EquilibriumRecord]:
    """Every symmetric equilibrium of ``spec``, sorted by profile.

    Records reached by more than one generator are merged; their provenance
    tags are joined with ``+``.
    """
    found: dict[Profile, EquilibriumRecord] = {}

    def add(record: EquilibriumRecord) -> None:
        prev = found.get(record.profile)
        if prev is None:
            found[record.profile] = record
        else:
            tags = prev.provenance.split("+")
            if record.provenance not in tags:
                tags.append(record.provenance)
            found[record.profile] = replace(prev, provenance="+".join(tags), boundary=prev.boundary or record.boundary)

    for record in nondiscriminating_equilibria(spec):
        add(record)
    if spec.is_anti_coordination:
        for partition in ordered_partitions(spec.m, 2):
            add(two_partition_equilibrium(spec, partition))
        for partition in ordered_partitions(spec.m, 3):
            try:
                add(three_partition_equilibrium(spec, partition))
            except ConditionFailed:
                pass

    records = sorted(found.values(), key=lambda r: r.profile)
    for record in records:
        assert check_equilibrium_conditions(spec, record.profile).satisfied
        assert record.level <= 3, "at most three distinct cooperation values"
        assert spec.is_anti_coordination or record.level == 1
        assert len(record.interior_values) <= 1
    return records


def closed_form_values(spec: GameSpec) -> set[Fraction]:
    """All cooperation values the 2- and 3-block formulas produce for ``spec``,
    whether or not their conditions hold, restricted to ``[0, 1]``."""
    _require_anti_coordination(spec)
    values: set[Fraction] = set()
    for blocks in ordered_partitions(spec.m, 2):
        _, _, low, high = two_block_case(spec, _share(spec, blocks[1]))
        values.update(v for v in (low, high) if v is not None)
    for blocks in ordered_partitions(spec.m, 3):
        values.add(three_block_interior(spec, blocks))
    return {v for v in values if 0 <= v <= 1}
