"""Exact-arithmetic primitives: state spaces, events, beliefs, lotteries, acts.

Everything here is immutable and hashable, and every probability or utility
is a ``fractions.Fraction``.  No floats enter at any point, so equality is
decidable and all downstream checks (chain rule, argmax strictness, round
trips) can demand exact matches.

Events are bit subsets keyed to the declaration order of the state space.
The canonical order over events, used everywhere a "first witness" is
reported, is lexicographic on the sorted tuple of state indices: for states
(a, b, c) it runs {a}, {a,b}, {a,b,c}, {a,c}, {b}, {b,c}, {c}.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    EmptyEvent,
    MissingUtility,
    NullConditioning,
    SpaceMismatch,
    TooManyStates,
    ValidationError,
)

ZERO = Fraction(0)
ONE = Fraction(1)

MAX_STATES_ENV = "BELIEFKIT_MAX_STATES"
DEFAULT_MAX_STATES = 20


def max_enumerable_states() -> int:
    """Cap on |S| for power-set enumerations, from BELIEFKIT_MAX_STATES."""
    raw = os.environ.get(MAX_STATES_ENV)
    if raw is None:
        return DEFAULT_MAX_STATES
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"{MAX_STATES_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValidationError(f"{MAX_STATES_ENV} must be positive, got {value}")
    return value


def as_fraction(value) -> Fraction:
    """Coerce int/Fraction to Fraction; reject floats and anything else."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise ValidationError(
        f"expected an exact rational (int or Fraction), got {type(value).__name__}"
    )


def _lex_masks(indices: Sequence[int]) -> list[int]:
    # nonempty subsets of the given sorted indices, in canonical order
    out: list[int] = []

    def rec(mask: int, start: int) -> None:
        for i in range(start, len(indices)):
            cur = mask | (1 << indices[i])
            out.append(cur)
            rec(cur, i + 1)

    rec(0, 0)
    return out


@lru_cache(maxsize=4096)
def lex_submasks(mask: int) -> tuple[int, ...]:
    """All submasks of ``mask`` in canonical order, empty mask first.

    Cached because the chain-rule scan revisits the same masks constantly.
    """
    indices = [i for i in range(mask.bit_length()) if mask >> i & 1]
    return (0, *_lex_masks(indices))


class StateSpace:
    """An ordered, finite set of state labels; the order is canonical."""

    __slots__ = ("states", "_index", "_hash", "_masks")

    def __init__(self, states: Iterable[str]):
        states = tuple(states)
        if not states:
            raise ValidationError("a state space needs at least one state")
        if any(not isinstance(s, str) or not s for s in states):
            raise ValidationError("state labels must be nonempty strings")
        if len(set(states)) != len(states):
            raise ValidationError("state labels must be distinct")
        self.states = states
        self._index = {s: i for i, s in enumerate(states)}
        self._hash = hash(states)
        self._masks: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.states)

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, StateSpace) and self.states == other.states)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"StateSpace({list(self.states)!r})"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"unknown state label {label!r}") from None

    def event(self, *labels: str) -> "Event":
        return self.event_from(labels)

    def event_from(self, labels: Iterable[str]) -> "Event":
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return Event(self, mask)

    @property
    def full_event(self) -> "Event":
        return Event(self, (1 << len(self.states)) - 1)

    @property
    def empty_event(self) -> "Event":
        return Event(self, 0)

    def canonical_masks(self) -> tuple[int, ...]:
        """Masks of every nonempty event, canonical order.  Cap-checked."""
        if self._masks is None:
            cap = max_enumerable_states()
            if len(self.states) > cap:
                raise TooManyStates(
                    f"power-set enumeration over {len(self.states)} states exceeds the "
                    f"cap of {cap} (set {MAX_STATES_ENV} to raise it)"
                )
            self._masks = tuple(_lex_masks(range(len(self.states))))
        return self._masks

    def events(self) -> Iterator["Event"]:
        """Every nonempty event in canonical order."""
        for mask in self.canonical_masks():
            yield Event(self, mask)


class Event:
    """A subset of a state space, stored as a bitmask over state indices."""

    __slots__ = ("space", "mask", "_hash")

    def __init__(self, space: StateSpace, mask: int):
        if not 0 <= mask < (1 << len(space)):
            raise ValidationError(f"event mask {mask} out of range for {space!r}")
        self.space = space
        self.mask = mask
        self._hash = hash((space._hash, mask))

    @property
    def indices(self) -> tuple[int, ...]:
        m = self.mask
        return tuple(i for i in range(m.bit_length()) if m >> i & 1)

    @property
    def members(self) -> tuple[str, ...]:
        states = self.space.states
        return tuple(states[i] for i in self.indices)

    @property
    def sort_key(self) -> tuple[int, ...]:
        return self.indices

    def __iter__(self) -> Iterator[str]:
        return iter(self.members)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, label: str) -> bool:
        return bool(self.mask >> self.space.index(label) & 1)

    def _check(self, other: "Event") -> None:
        if self.space != other.space:
            raise SpaceMismatch("events belong to different state spaces")

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask & other.mask)

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask | other.mask)

    def __sub__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask & ~other.mask)

    def __le__(self, other: "Event") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def issubset(self, other: "Event") -> bool:
        return self <= other

    def complement(self) -> "Event":
        return Event(self.space, ~self.mask & ((1 << len(self.space)) - 1))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Event)
            and self.mask == other.mask
            and (self.space is other.space or self.space == other.space)
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "Event({%s})" % ",".join(self.members)


class Belief:
    """A probability distribution over a state space, exact and immutable."""

    __slots__ = ("space", "mass", "support_mask", "_hash", "_den", "_nums", "_row")

    def __init__(self, space: StateSpace, masses: Mapping[str, Fraction | int]):
        vec = [ZERO] * len(space)
        for label, raw in masses.items():
            value = as_fraction(raw)
            if value < 0:
                raise ValidationError(f"negative mass {value} on state {label!r}")
            vec[space.index(label)] = value
        total = sum(vec)
        if total != 1:
            raise ValidationError(f"belief mass must sum to 1, got {total}")
        self.space = space
        self.mass = tuple(vec)
        self.support_mask = 0
        for i, value in enumerate(vec):
            if value:
                self.support_mask |= 1 << i
        self._hash = hash((space._hash, self.mass))
        self._den: int | None = None
        self._nums: tuple[int, ...] | None = None
        self._row: list[int] | None = None

    @classmethod
    def point(cls, space: StateSpace, label: str) -> "Belief":
        return cls(space, {label: ONE})

    @classmethod
    def uniform_on(cls, event: Event) -> "Belief":
        if not event:
            raise EmptyEvent("cannot spread mass over the empty event")
        share = Fraction(1, len(event))
        return cls(event.space, {label: share for label in event.members})

    def mass_of(self, label: str) -> Fraction:
        return self.mass[self.space.index(label)]

    def items(self) -> Iterator[tuple[str, Fraction]]:
        return zip(self.space.states, self.mass)

    @property
    def support(self) -> Event:
        return Event(self.space, self.support_mask)

    def _ints(self) -> tuple[int, tuple[int, ...]]:
        """Masses as integer numerators over one common denominator."""
        if self._den is None:
            den = lcm(*(value.denominator for value in self.mass))
            self._den = den
            self._nums = tuple(int(value * den) for value in self.mass)
        return self._den, self._nums  # type: ignore[return-value]

    def subset_row(self) -> list[int]:
        """Numerator of the mass of every event mask; index = mask.

        Size 2^|S|, built once on demand.  Pair with the denominator from
        ``_ints`` to recover exact probabilities.
        """
        if self._row is None:
            _, nums = self._ints()
            n = len(self.space)
            row = [0] * (1 << n)
            for mask in range(1, 1 << n):
                low = mask & -mask
                row[mask] = row[mask ^ low] + nums[low.bit_length() - 1]
            self._row = row
        return self._row

    def mass_on_mask(self, mask: int) -> Fraction:
        den, nums = self._ints()
        m = mask & self.support_mask
        num = 0
        while m:
            low = m & -m
            num += nums[low.bit_length() - 1]
            m ^= low
        return Fraction(num, den)

    def prob(self, event: Event) -> Fraction:
        if self.space != event.space:
            raise SpaceMismatch("belief and event belong to different state spaces")
        return self.mass_on_mask(event.mask)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Belief)
            and self.mass == other.mass
            and (self.space is other.space or self.space == other.space)
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inside = ", ".join(f"{s}: {v}" for s, v in self.items() if v)
        return f"Belief({inside})"


class Lottery:
    """A finite-support objective lottery over outcome labels.

    Zero-probability entries are dropped, so the stored support is exact.
    """

    __slots__ = ("entries", "_hash")

    def __init__(self, outcomes: Mapping[str, Fraction | int]):
        cleaned: list[tuple[str, Fraction]] = []
        total = ZERO
        for label in sorted(outcomes):
            value = as_fraction(outcomes[label])
            if value < 0:
                raise ValidationError(f"negative probability {value} on outcome {label!r}")
            total += value
            if value:
                cleaned.append((label, value))
        if total != 1:
            raise ValidationError(f"lottery probabilities must sum to 1, got {total}")
        self.entries = tuple(cleaned)
        self._hash = hash(self.entries)

    @classmethod
    def degenerate(cls, label: str) -> "Lottery":
        return cls({label: ONE})

    @property
    def outcomes(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.entries)

    def probability(self, label: str) -> Fraction:
        for key, value in self.entries:
            if key == label:
                return value
        return ZERO

    def items(self) -> tuple[tuple[str, Fraction], ...]:
        return self.entries

    def mix(self, alpha: Fraction | int, other: "Lottery") -> "Lottery":
        """alpha * self + (1 - alpha) * other, exact."""
        alpha = as_fraction(alpha)
        if not 0 <= alpha <= 1:
            raise ValidationError(f"mixture weight must lie in [0, 1], got {alpha}")
        merged: dict[str, Fraction] = {}
        for label, value in self.entries:
            merged[label] = merged.get(label, ZERO) + alpha * value
        for label, value in other.entries:
            merged[label] = merged.get(label, ZERO) + (1 - alpha) * value
        return Lottery(merged)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lottery) and self.entries == other.entries

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inside = ", ".join(f"{o}: {p}" for o, p in self.entries)
        return f"Lottery({inside})"


class Act:
    """A total assignment of one lottery to every state."""

    __slots__ = ("space", "assignment", "_hash")

    def __init__(self, space: StateSpace, assignment: Mapping[str, Lottery]):
        lots: list[Lottery | None] = [None] * len(space)
        for label, lottery in assignment.items():
            if not isinstance(lottery, Lottery):
                raise ValidationError(f"state {label!r} must map to a Lottery")
            lots[space.index(label)] = lottery
        missing = [space.states[i] for i, lot in enumerate(lots) if lot is None]
        if missing:
            raise ValidationError(f"act must assign a lottery to every state; missing {missing}")
        self.space = space
        self.assignment = tuple(lots)  # type: ignore[arg-type]
        self._hash = hash((space._hash, self.assignment))

    @classmethod
    def constant(cls, space: StateSpace, lottery: Lottery) -> "Act":
        return cls(space, {label: lottery for label in space.states})

    def lottery_at(self, label: str) -> Lottery:
        return self.assignment[self.space.index(label)]

    @property
    def outcomes(self) -> tuple[str, ...]:
        seen: set[str] = set()
        for lottery in self.assignment:
            seen.update(lottery.outcomes)
        return tuple(sorted(seen))

    def mix(self, alpha: Fraction | int, other: "Act") -> "Act":
        """Statewise lottery mixture of two acts."""
        if self.space != other.space:
            raise SpaceMismatch("acts belong to different state spaces")
        return Act(
            self.space,
            {
                label: self.assignment[i].mix(alpha, other.assignment[i])
                for i, label in enumerate(self.space.states)
            },
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Act)
            and self.assignment == other.assignment
            and (self.space is other.space or self.space == other.space)
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Act({dict(zip(self.space.states, self.assignment))!r})"


class UtilityFunction:
    """A finite outcome-to-utility table.  Utilities may be negative."""

    __slots__ = ("_map", "items", "_hash")

    def __init__(self, table: Mapping[str, Fraction | int]):
        if not table:
            raise ValidationError("utility table must not be empty")
        self._map = {label: as_fraction(value) for label, value in table.items()}
        self.items = tuple(sorted(self._map.items()))
        self._hash = hash(self.items)

    @property
    def outcomes(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.items)

    def value(self, outcome: str) -> Fraction:
        try:
            return self._map[outcome]
        except KeyError:
            raise MissingUtility(f"no utility assigned to outcome {outcome!r}") from None

    def expected(self, lottery: Lottery) -> Fraction:
        return sum((p * self.value(o) for o, p in lottery.entries), ZERO)

    def is_constant_on(self, outcomes: Iterable[str]) -> bool:
        values = {self.value(o) for o in outcomes}
        return len(values) <= 1

    def affine(self, alpha: Fraction | int, beta: Fraction | int) -> "UtilityFunction":
        alpha = as_fraction(alpha)
        beta = as_fraction(beta)
        return UtilityFunction({o: alpha * v + beta for o, v in self.items})

    def __eq__(self, other) -> bool:
        return isinstance(other, UtilityFunction) and self.items == other.items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"UtilityFunction({dict(self.items)!r})"


class Preference(Enum):
    """Outcome of a binary comparison between two acts."""

    FIRST = "first"
    SECOND = "second"
    INDIFFERENT = "indifferent"


def compare_values(a: Fraction, b: Fraction) -> Preference:
    if a > b:
        return Preference.FIRST
    if b > a:
        return Preference.SECOND
    return Preference.INDIFFERENT


@dataclass(frozen=True)
class CheckResult:
    """Boolean verdict plus, when it fails, the first witness found."""

    ok: bool
    witness: object | None = None

    def __bool__(self) -> bool:
        return self.ok


def bayes_update(mu: Belief, e: Event) -> Belief:
    """Condition ``mu`` on ``e``: restrict and renormalize.

    Raises EmptyEvent on e = {} and NullConditioning when mu(e) = 0.
    """
    if mu.space != e.space:
        raise SpaceMismatch("belief and event belong to different state spaces")
    if not e:
        raise EmptyEvent("cannot condition on the empty event")
    total = mu.prob(e)
    if total == 0:
        raise NullConditioning(f"event {{{','.join(e.members)}}} has probability zero")
    masses = {
        label: mu.mass[e.space.index(label)] / total
        for label in e.members
        if mu.mass[e.space.index(label)]
    }
    return Belief(mu.space, masses)


def compose_act(f: Act, e: Event, g: Act) -> Act:
    """The act equal to ``f`` on ``e`` and to ``g`` elsewhere."""
    if f.space != g.space:
        raise SpaceMismatch("acts belong to different state spaces")
    if f.space != e.space:
        raise SpaceMismatch("event belongs to a different state space")
    mask = e.mask
    return Act(
        f.space,
        {
            label: (f.assignment[i] if mask >> i & 1 else g.assignment[i])
            for i, label in enumerate(f.space.states)
        },
    )


def seu_value(u: UtilityFunction, mu: Belief, f: Act) -> Fraction:
    """Subjective expected utility of ``f`` under belief ``mu``.

    The utility table must cover every outcome the act can produce,
    including outcomes on zero-probability states.
    """
    if mu.space != f.space:
        raise SpaceMismatch("belief and act belong to different state spaces")
    total = ZERO
    for mass, lottery in zip(mu.mass, f.assignment):
        value = u.expected(lottery)
        if mass:
            total += mass * value
    return total


def is_null_event(mu: Belief, a: Event) -> bool:
    """True when ``a`` carries zero mass under ``mu``."""
    return mu.prob(a) == 0
