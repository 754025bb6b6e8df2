"""Ordered fallback hierarchies of priors and their induced updating rules.

A hierarchy lists beliefs from least to most surprising.  Conditioning on an
event selects the first prior that assigns the event positive mass (or mass
above a threshold, for the thresholded variant) and Bayes-updates it.  The
induced rule is always a conditional probability system, and every CPS
arises this way; ``cps_to_os`` recovers a hierarchy from a valid rule by
peeling supports off the remaining states.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .core import Belief, Event, StateSpace, ZERO, as_fraction, bayes_update
from .errors import (
    EmptyEvent,
    IncompleteCoverage,
    NoPriorExceedsThreshold,
    NotCps,
    SpaceMismatch,
    ValidationError,
)
from .rules import UpdatingRule, validate_cps


class OSRepresentation:
    """An ordered, nonempty list of priors over one state space."""

    __slots__ = ("space", "priors", "_hash")

    def __init__(self, space: StateSpace, priors: Iterable[Belief]):
        priors = tuple(priors)
        if not priors:
            raise ValidationError("a hierarchy needs at least one prior")
        for prior in priors:
            if prior.space != space:
                raise SpaceMismatch("prior built over a different state space")
        self.space = space
        self.priors = priors
        self._hash = hash((space, priors))

    def __len__(self) -> int:
        return len(self.priors)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OSRepresentation)
            and self.space == other.space
            and self.priors == other.priors
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"OSRepresentation(<{len(self.priors)} priors over {len(self.space)} states>)"

    @property
    def union_support_mask(self) -> int:
        mask = 0
        for prior in self.priors:
            mask |= prior.support_mask
        return mask

    @property
    def covers_space(self) -> bool:
        """True when every state is in some prior's support."""
        return self.union_support_mask == (1 << len(self.space)) - 1

    @property
    def is_canonical(self) -> bool:
        """True when supports are pairwise disjoint."""
        seen = 0
        for prior in self.priors:
            if prior.support_mask & seen:
                return False
            seen |= prior.support_mask
        return True


def canonicalize_os(priors: Sequence[Belief] | OSRepresentation) -> OSRepresentation:
    """Zero out mass already explained by earlier priors and renormalize.

    Priors left with no mass are dropped.  The induced update rule is
    unchanged: a state shared with an earlier support can never belong to
    an event that first becomes feasible at the later prior.  Whether the
    result covers the whole space is reported by ``covers_space``.
    """
    if isinstance(priors, OSRepresentation):
        space = priors.space
        sequence = priors.priors
    else:
        sequence = tuple(priors)
        if not sequence:
            raise ValidationError("a hierarchy needs at least one prior")
        space = sequence[0].space
    seen = 0
    cleaned: list[Belief] = []
    for prior in sequence:
        if prior.space != space:
            raise SpaceMismatch("prior built over a different state space")
        fresh = prior.support_mask & ~seen
        if not fresh:
            continue
        if fresh == prior.support_mask:
            cleaned.append(prior)
        else:
            cleaned.append(bayes_update(prior, Event(space, fresh)))
        seen |= fresh
    # the first prior always survives, so the list is never empty
    return OSRepresentation(space, cleaned)


def _min_order(priors: Sequence[Belief], mask: int, eps: Fraction) -> int | None:
    if eps == 0:
        for k, prior in enumerate(priors):
            if prior.support_mask & mask:
                return k
        return None
    for k, prior in enumerate(priors):
        den, nums = prior._ints()
        inner = mask & prior.support_mask
        num = 0
        while inner:
            low = inner & -inner
            num += nums[low.bit_length() - 1]
            inner ^= low
        if num * eps.denominator > eps.numerator * den:
            return k
    return None


def surprise_order(os: OSRepresentation, e: Event) -> int:
    """Index of the first prior assigning ``e`` positive mass."""
    if e.space != os.space:
        raise SpaceMismatch("event built over a different state space")
    if not e:
        raise EmptyEvent("the empty event has no surprise order")
    order = _min_order(os.priors, e.mask, ZERO)
    if order is None:
        raise IncompleteCoverage(
            f"no prior assigns positive mass to {{{','.join(e.members)}}}"
        )
    return order


def os_update(os: OSRepresentation, e: Event) -> Belief:
    """Bayes update of the first prior that finds ``e`` possible."""
    return bayes_update(os.priors[surprise_order(os, e)], e)


def os_rule(os: OSRepresentation) -> UpdatingRule:
    """Tabulate the induced rule on every nonempty event."""
    space = os.space
    priors = os.priors
    cache: dict[tuple[int, int], Belief] = {}
    table: dict[Event, Belief] = {}
    for mask in space.canonical_masks():
        for k, prior in enumerate(priors):
            inner = mask & prior.support_mask
            if inner:
                break
        else:
            raise IncompleteCoverage(
                "hierarchy does not cover the space; update undefined on some events"
            )
        key = (k, inner)
        belief = cache.get(key)
        if belief is None:
            belief = bayes_update(prior, Event(space, inner))
            cache[key] = belief
        table[Event(space, mask)] = belief
    return UpdatingRule(space, table)


def cps_to_os(rule: UpdatingRule) -> OSRepresentation:
    """Recover the canonical hierarchy from a valid CPS rule.

    Peels from the full space: each step takes the rule's belief on the
    remaining states and removes its support.  Raises NotCps (carrying the
    validation outcome) when the rule fails ``validate_cps``.
    """
    validation = validate_cps(rule)
    if not validation:
        detail = validation.reason or "chain rule violated"
        raise NotCps(f"rule is not a conditional probability system: {detail}", validation)
    space = rule.space
    rest = (1 << len(space)) - 1
    priors: list[Belief] = []
    while True:
        belief = rule[Event(space, rest)]
        priors.append(belief)
        if belief.support_mask == rest:
            break
        rest &= ~belief.support_mask
    return OSRepresentation(space, priors)


def eps_os_update(os: OSRepresentation, eps: Fraction | int, e: Event) -> Belief:
    """Bayes update of the first prior whose mass on ``e`` exceeds ``eps``."""
    eps = as_fraction(eps)
    if not 0 <= eps < 1:
        raise ValidationError(f"threshold must lie in [0, 1), got {eps}")
    if e.space != os.space:
        raise SpaceMismatch("event built over a different state space")
    if not e:
        raise EmptyEvent("cannot condition on the empty event")
    order = _min_order(os.priors, e.mask, eps)
    if order is None:
        raise NoPriorExceedsThreshold(
            f"no prior mass on {{{','.join(e.members)}}} exceeds {eps}"
        )
    return bayes_update(os.priors[order], e)


class SurprisePartition:
    """Events grouped by the hierarchy index that handles them.

    ``classes[k]`` holds the events whose first above-threshold prior is k,
    in canonical order.  ``undefined`` holds the events no prior clears.
    """

    __slots__ = ("space", "eps", "classes", "undefined", "_lookup")

    def __init__(
        self,
        space: StateSpace,
        eps: Fraction,
        classes: tuple[tuple[Event, ...], ...],
        undefined: tuple[Event, ...],
    ):
        self.space = space
        self.eps = eps
        self.classes = classes
        self.undefined = undefined
        lookup: dict[int, int | None] = {}
        for k, events in enumerate(classes):
            for event in events:
                lookup[event.mask] = k
        for event in undefined:
            lookup[event.mask] = None
        self._lookup = lookup

    def class_of(self, event: Event) -> int | None:
        """Class index for ``event``, or None when it is undefined."""
        if event.space != self.space:
            raise SpaceMismatch("event built over a different state space")
        try:
            return self._lookup[event.mask]
        except KeyError:
            raise ValidationError("event not covered by this partition") from None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SurprisePartition)
            and self.space == other.space
            and self.eps == other.eps
            and self.classes == other.classes
            and self.undefined == other.undefined
        )

    def __repr__(self) -> str:
        sizes = ",".join(str(len(c)) for c in self.classes)
        return f"SurprisePartition(eps={self.eps}, sizes=[{sizes}], undefined={len(self.undefined)})"


def surprise_partition(os: OSRepresentation, eps: Fraction | int = 0) -> SurprisePartition:
    """Partition all nonempty events by their first above-threshold prior."""
    eps = as_fraction(eps)
    if not 0 <= eps < 1:
        raise ValidationError(f"threshold must lie in [0, 1), got {eps}")
    space = os.space
    classes: list[list[Event]] = [[] for _ in os.priors]
    undefined: list[Event] = []
    for mask in space.canonical_masks():
        order = _min_order(os.priors, mask, eps)
        event = Event(space, mask)
        if order is None:
            undefined.append(event)
        else:
            classes[order].append(event)
    return SurprisePartition(
        space,
        eps,
        tuple(tuple(events) for events in classes),
        tuple(undefined),
    )
