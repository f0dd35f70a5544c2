"""Game specifications, strategy profiles and ordered partitions.

All quantities are exact :class:`fractions.Fraction` values. Proportions are
never stored directly; they are derived from integer per-type counts so that
``x_t = c_t / n`` is exact.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import cached_property

Profile = tuple[Fraction, ...]
OrderedPartition = tuple[tuple[int, ...], ...]


class SpecError(ValueError):
    """Base class for invalid game descriptions and arguments."""

    code = "InvalidSpec"

    def to_dict(self) -> dict[str, str]:
        return {"error": self.code, "message": str(self)}


class CountTooSmall(SpecError):
    code = "CountTooSmall"


class CountSumMismatch(SpecError):
    code = "CountSumMismatch"


class MixedSignPayoffs(SpecError):
    code = "MixedSignPayoffs"


class TooFewTypes(SpecError):
    code = "TooFewTypes"


class InvalidProfile(SpecError):
    code = "InvalidProfile"


class InvalidPartition(SpecError):
    code = "InvalidPartition"


class NotAntiCoordination(SpecError):
    code = "NotAntiCoordination"


def parse_rational(value: object) -> Fraction:
    """Parse an int, ``"p/q"`` string or terminating decimal string exactly.

    Floats are rejected: they rarely carry the value the user meant.
    """
    if isinstance(value, bool):
        raise SpecError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise SpecError(f"not a rational: {value!r}") from None
    raise SpecError(f"not a rational: {value!r} (use an int or a 'p/q' string)")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def decimal_string(value: Fraction, digits: int = 15) -> str:
    """Render ``value`` with ``digits`` significant digits."""
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(value.numerator) / Decimal(value.denominator)
    return format(d.normalize(), "f") if d != 0 else "0"


@dataclass(frozen=True)
class GameSpec:
    """The heterogeneous game: population size, type counts and payoffs.

    Construction validates the model assumptions; an existing instance is
    always a legal game.
    """

    n: int
    counts: tuple[int, ...]
    y: Fraction
    z: Fraction
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        object.__setattr__(self, "y", parse_rational(self.y))
        object.__setattr__(self, "z", parse_rational(self.z))
        if not self.labels:
            labels = tuple(f"t{k + 1}" for k in range(len(self.counts)))
        else:
            labels = tuple(str(s) for s in self.labels)
        object.__setattr__(self, "labels", labels)

        m = len(self.counts)
        if m < 2:
            raise TooFewTypes(f"need at least 2 types, got {m}")
        if len(self.labels) != m:
            raise SpecError(f"{len(self.labels)} labels for {m} types")
        if len(set(self.labels)) != m:
            raise SpecError(f"duplicate type labels: {list(self.labels)}")
        for label, c in zip(self.labels, self.counts):
            if c < 2:
                raise CountTooSmall(f"type {label!r} has count {c}; every type needs at least 2 members")
        if sum(self.counts) != self.n:
            raise CountSumMismatch(f"counts sum to {sum(self.counts)}, but n = {self.n}")
        # 2 <= c_t <= n - 1 follows from m >= 2 and every count >= 2
        if self.y * self.z <= 0:
            raise MixedSignPayoffs(
                f"y = {self.y} and z = {self.z} must be both negative (coordination) "
                "or both positive (anti-coordination)"
            )

    @property
    def m(self) -> int:
        return len(self.counts)

    @cached_property
    def proportions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.n) for c in self.counts)

    @cached_property
    def zeta(self) -> Fraction:
        return self.y / (self.y + self.z)

    @property
    def is_coordination(self) -> bool:
        return self.y < 0

    @property
    def is_anti_coordination(self) -> bool:
        return self.y > 0

    @property
    def kind(self) -> str:
        return "coordination" if self.is_coordination else "anti-coordination"

    def scaled(self, c: Fraction) -> GameSpec:
        return GameSpec(self.n, self.counts, self.y * c, self.z * c, self.labels)

    def relabeled(self, perm: Sequence[int]) -> GameSpec:
        """Return the game whose type ``k`` is this game's type ``perm[k]``."""
        return GameSpec(
            self.n,
            tuple(self.counts[p] for p in perm),
            self.y,
            self.z,
            tuple(self.labels[p] for p in perm),
        )

    def type_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise SpecError(f"unknown type label {label!r}") from None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "types": [{"label": s, "count": c} for s, c in zip(self.labels, self.counts)],
            "y": format_rational(self.y),
            "z": format_rational(self.z),
        }


def validate_spec(raw: Mapping) -> GameSpec:
    """Build a :class:`GameSpec` from its JSON document form.

    >>> validate_spec({"n": 10, "types": [{"label": "a", "count": 5},
    ...                                   {"label": "b", "count": 5}],
    ...                "y": 1, "z": "1"}).zeta
    Fraction(1, 2)
    """
    if not isinstance(raw, Mapping):
        raise SpecError("spec must be a JSON object")
    missing = [key for key in ("n", "types", "y", "z") if key not in raw]
    if missing:
        raise SpecError(f"spec is missing {', '.join(missing)}")
    n = raw["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SpecError(f"n must be a positive integer, got {n!r}")
    types = raw["types"]
    if not isinstance(types, list):
        raise SpecError("types must be a list")
    labels, counts = [], []
    for k, entry in enumerate(types):
        if isinstance(entry, Mapping):
            label = entry.get("label", f"t{k + 1}")
            count = entry.get("count")
        else:
            label, count = f"t{k + 1}", entry
        if isinstance(count, bool) or not isinstance(count, int):
            raise SpecError(f"count of type {label!r} must be an integer, got {count!r}")
        labels.append(str(label))
        counts.append(count)
    return GameSpec(n, tuple(counts), parse_rational(raw["y"]), parse_rational(raw["z"]), tuple(labels))


def make_spec(counts: Sequence[int], y, z, labels: Sequence[str] = ()) -> GameSpec:
    """Shorthand used throughout the tests: ``n`` is the sum of ``counts``."""
    return GameSpec(sum(counts), tuple(counts), parse_rational(y), parse_rational(z), tuple(labels))


def as_profile(values: Iterable, m: int) -> Profile:
    profile = tuple(parse_rational(v) for v in values)
    if len(profile) != m:
        raise InvalidProfile(f"profile has {len(profile)} entries, game has {m} types")
    for v in profile:
        if not 0 <= v <= 1:
            raise InvalidProfile(f"cooperation probability {v} outside [0, 1]")
    return profile


def parse_profile(text: str, m: int) -> Profile:
    """Parse ``"0,5/6,1"`` (or decimals such as ``"0.5,0.5"``)."""
    parts = [p for p in text.replace(" ", "").split(",")]
    if any(p == "" for p in parts):
        raise InvalidProfile(f"malformed profile {text!r}")
    return as_profile(parts, m)


def validate_partition(partition: Sequence[Iterable[int]], m: int, blocks: int | None = None) -> OrderedPartition:
    """Check that ``partition`` is an ordered partition of ``range(m)``."""
    normalized = tuple(tuple(sorted(int(t) for t in block)) for block in partition)
    if blocks is not None and len(normalized) != blocks:
        raise InvalidPartition(f"expected {blocks} blocks, got {len(normalized)}")
    if any(not block for block in normalized):
        raise InvalidPartition("partition blocks must be non-empty")
    flat = [t for block in normalized for t in block]
    if len(flat) != len(set(flat)):
        raise InvalidPartition("partition blocks overlap")
    if sorted(flat) != list(range(m)):
        raise InvalidPartition(f"partition does not cover the {m} types exactly")
    return normalized


def ordered_partitions(m: int, blocks: int) -> list[OrderedPartition]:
    """All ordered partitions of ``range(m)`` into ``blocks`` non-empty blocks.

    Order is lexicographic in the block-membership vector
    ``(block of type 0, block of type 1, ...)``. There are
    ``blocks! * S(m, blocks)`` of them (Stirling numbers of the second kind).
    """
    out = []

    def rec(prefix: list[int]) -> None:
        if len(prefix) == m:
            if len(set(prefix)) == blocks:
                out.append(tuple(tuple(t for t in range(m) if prefix[t] == b) for b in range(blocks)))
            return
        for b in range(blocks):
            prefix.append(b)
            rec(prefix)
            prefix.pop()

    if 1 <= blocks <= m:
        rec([])
    return out


def discrimination_level(profile: Sequence[Fraction]) -> tuple[int, OrderedPartition]:
    """Number of distinct cooperation values and the types grouped by value.

    Blocks are ordered by ascending value.

    >>> discrimination_level((Fraction(0), Fraction(1), Fraction(0)))
    (2, ((0, 2), (1,)))
    """
    values = sorted(set(profile))
    partition = tuple(tuple(t for t, a in enumerate(profile) if a == v) for v in values)
    return len(values), partition
