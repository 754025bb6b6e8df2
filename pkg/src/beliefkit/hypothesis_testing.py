"""Likelihood-test selection among weighted priors, and two constructions.

A representation here is a prior list, a strictly top-heavy second-order
weight over it, and a threshold in [0, 1).  Conditioning Bayes-updates the
top prior when its mass on the event clears the threshold; otherwise the
prior maximizing mass-times-weight is selected, and the argmax must be
strict.

``os_to_ht`` turns an ordered hierarchy into such a representation whose
rule is identical: weight k+1 is scaled below weight k by half the smallest
support mass of prior k, which makes every selection score of the right
order beat all deeper orders.

``eps_os_to_ht`` covers the thresholded variant.  Its prior list is the set
of distinct conditional beliefs the thresholded update can ever produce.
Weights are assigned inside a descending chain of disjoint open intervals,
one interval per surprise class, spaced by midpoint bisection of the gap
above the returned threshold; within a class, beliefs are ordered
topologically under the dominance relation "the other belief is certain of
one of my representing events" and spaced evenly.  The returned threshold
is the largest conditional mass that must fall on the reject side (never
below the input threshold); for an input threshold of zero it is exactly 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .core import Belief, Event, StateSpace, ZERO, ONE, as_fraction, bayes_update
from .errors import (
    AllZeroScores,
    AmbiguousArgmax,
    CycleDetected,
    EmptyEvent,
    IncompleteCoverage,
    SpaceMismatch,
    ValidationError,
)
from .ordered_surprises import OSRepresentation, _min_order
from .rules import UpdatingRule, rules_equal

__all__ = [
    "HTRepresentation",
    "SelectionBranch",
    "SelectionTrace",
    "ht_select",
    "ht_rule",
    "os_to_ht",
    "EpsOsConstruction",
    "eps_os_construction",
    "eps_os_to_ht",
    "rules_equal",
]


class SelectionBranch(Enum):
    BAYESIAN = "bayesian"
    ARGMAX = "argmax"


@dataclass(frozen=True)
class SelectionTrace:
    """How a conditioning event was resolved: branch, all scores, winner."""

    event: Event
    branch: SelectionBranch
    scores: tuple[Fraction, ...]
    chosen: int


class HTRepresentation:
    """Priors with positive weights (top one strictly maximal) and a threshold."""

    __slots__ = ("space", "priors", "rho", "eps", "_fast")

    def __init__(
        self,
        space: StateSpace,
        priors: Iterable[Belief],
        rho: Iterable[Fraction | int],
        eps: Fraction | int = 0,
    ):
        priors = tuple(priors)
        rho = tuple(as_fraction(r) for r in rho)
        eps = as_fraction(eps)
        if not priors:
            raise ValidationError("a representation needs at least one prior")
        for prior in priors:
            if prior.space != space:
                raise SpaceMismatch("prior built over a different state space")
        if len(rho) != len(priors):
            raise ValidationError("need exactly one weight per prior")
        if any(r <= 0 for r in rho):
            raise ValidationError("weights must be strictly positive")
        if sum(rho) != 1:
            raise ValidationError(f"weights must sum to 1, got {sum(rho)}")
        if any(r >= rho[0] for r in rho[1:]):
            raise ValidationError("the first prior's weight must be strictly maximal")
        if not 0 <= eps < 1:
            raise ValidationError(f"threshold must lie in [0, 1), got {eps}")
        union = 0
        for prior in priors:
            union |= prior.support_mask
        if union != (1 << len(space)) - 1:
            raise ValidationError("prior supports must jointly cover the space")
        self.space = space
        self.priors = priors
        self.rho = rho
        self.eps = eps
        self._fast = None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HTRepresentation)
            and self.space == other.space
            and self.priors == other.priors
            and self.rho == other.rho
            and self.eps == other.eps
        )

    def __repr__(self) -> str:
        return (
            f"HTRepresentation(<{len(self.priors)} priors over "
            f"{len(self.space)} states, eps={self.eps}>)"
        )

    def _fast_tables(self):
        # integer views for bulk selection: per prior, numerators plus
        # cross-multiplication constants for score comparison
        if self._fast is None:
            nums = []
            mul = []  # score_j proportional to n_j * mul_num[j] / mul_den[j]
            div = []
            for prior, weight in zip(self.priors, self.rho):
                den, vec = prior._ints()
                nums.append(vec)
                mul.append(weight.numerator)
                div.append(den * weight.denominator)
            den0, _ = self.priors[0]._ints()
            self._fast = (nums, mul, div, den0)
        return self._fast


def _mass_num(nums, mask: int) -> int:
    total = 0
    while mask:
        low = mask & -mask
        total += nums[low.bit_length() - 1]
        mask ^= low
    return total


def _select_index(ht: HTRepresentation, mask: int) -> tuple[bool, int]:
    """(bayesian?, chosen prior index) for the event mask, integer-only."""
    nums, mul, div, den0 = ht._fast_tables()
    eps = ht.eps
    n0 = _mass_num(nums[0], mask & ht.priors[0].support_mask)
    if n0 * eps.denominator > eps.numerator * den0:
        return True, 0
    best = -1
    best_num = 0
    best_den = 1
    tied: list[int] = []
    for j in range(len(nums)):
        nj = _mass_num(nums[j], mask & ht.priors[j].support_mask)
        score_num = nj * mul[j]
        if score_num * best_den > best_num * div[j]:
            best, best_num, best_den = j, score_num, div[j]
            tied = [j]
        elif score_num * best_den == best_num * div[j] and score_num:
            tied.append(j)
    if best_num == 0:
        raise AllZeroScores(
            "every prior assigns zero mass to the event"
        )  # unreachable for validated representations; supports cover the space
    if len(tied) > 1:
        raise AmbiguousArgmax(
            f"priors {tied} tie for the maximal score",
            event=Event(ht.space, mask),
            tied=tuple(tied),
        )
    return False, best


def ht_select(ht: HTRepresentation, e: Event) -> tuple[SelectionTrace, Belief]:
    """Resolve one event: full score trace plus the resulting belief."""
    if e.space != ht.space:
        raise SpaceMismatch("event built over a different state space")
    if not e:
        raise EmptyEvent("cannot condition on the empty event")
    scores = tuple(
        prior.mass_on_mask(e.mask) * weight for prior, weight in zip(ht.priors, ht.rho)
    )
    bayesian, chosen = _select_index(ht, e.mask)
    branch = SelectionBranch.BAYESIAN if bayesian else SelectionBranch.ARGMAX
    trace = SelectionTrace(event=e, branch=branch, scores=scores, chosen=chosen)
    return trace, bayes_update(ht.priors[chosen], e)


def ht_rule(ht: HTRepresentation) -> UpdatingRule:
    """Tabulate the induced rule on every nonempty event.

    Propagates AmbiguousArgmax (with the offending event) if any event has
    a tied argmax, since the rule is undefined there.
    """
    space = ht.space
    cache: dict[tuple[int, int], Belief] = {}
    table: dict[Event, Belief] = {}
    for mask in space.canonical_masks():
        _, chosen = _select_index(ht, mask)
        prior = ht.priors[chosen]
        key = (chosen, mask & prior.support_mask)
        belief = cache.get(key)
        if belief is None:
            belief = bayes_update(prior, Event(space, key[1]))
            cache[key] = belief
        table[Event(space, mask)] = belief
    return UpdatingRule(space, table)


def _require_canonical_cover(os: OSRepresentation) -> None:
    if not os.is_canonical:
        raise ValidationError("hierarchy priors must have pairwise disjoint supports")
    if not os.covers_space:
        raise IncompleteCoverage("hierarchy supports must jointly cover the space")


def os_to_ht(os: OSRepresentation) -> HTRepresentation:
    """Weight construction matching an ordered hierarchy exactly.

    v(0) = 1 and v(k) = v(k-1) * (least support mass of prior k-1) / 2,
    normalized.  Threshold 0.  Any event feasible at order k then scores
    strictly higher there than at any deeper order, so selection and the
    hierarchy's first-feasible choice coincide on every event.
    """
    _require_canonical_cover(os)
    weights = [ONE]
    for prior in os.priors[:-1]:
        least = min(value for value in prior.mass if value)
        weights.append(weights[-1] * least / 2)
    total = sum(weights)
    rho = tuple(w / total for w in weights)
    return HTRepresentation(os.space, os.priors, rho, ZERO)


@dataclass(frozen=True)
class EpsOsConstruction:
    """Thresholded construction with its bookkeeping exposed for inspection.

    ``class_of[i]`` is the surprise class of constructed prior i; ``bounds``
    holds the (upper, lower) open interval per class (same normalization as
    the weights); ``edges`` lists dominance pairs (winner, loser) by prior
    index; ``cross_max`` is the largest cross-class conditional mass that
    forced the threshold up.
    """

    ht: HTRepresentation
    eps: Fraction
    class_of: tuple[int, ...]
    bounds: tuple[tuple[Fraction, Fraction], ...]
    edges: tuple[tuple[int, int], ...]
    cross_max: Fraction


def eps_os_construction(os: OSRepresentation, eps: Fraction | int) -> EpsOsConstruction:
    eps = as_fraction(eps)
    if not 0 <= eps < 1:
        raise ValidationError(f"threshold must lie in [0, 1), got {eps}")
    _require_canonical_cover(os)
    space = os.space
    priors = os.priors

    # Distinct conditional beliefs per class.  A class-k event E yields
    # BU(prior_k, E), which depends only on E intersected with the support,
    # so the intersection mask identifies the belief.
    seen_masks: list[dict[int, None]] = [dict() for _ in priors]
    class_events: list[list[int]] = [[] for _ in priors]
    for mask in space.canonical_masks():
        order = _min_order(priors, mask, eps)
        if order is None:
            continue
        inner = mask & priors[order].support_mask
        seen_masks[order].setdefault(inner)
        class_events[order].append(mask)

    conditionals: list[list[Belief]] = []
    for k, prior in enumerate(priors):
        row = []
        for inner in sorted(seen_masks[k], key=lambda m: Event(space, m).sort_key):
            row.append(bayes_update(prior, Event(space, inner)))
        conditionals.append(row)

    # Within-class dominance: b dominates b' when b' is certain of b's own
    # representing event (its support).  The mass b' puts on any event that
    # represents b equals the mass on the intersection of supports, so the
    # choice of representative does not matter.
    per_class_edges: list[list[tuple[int, int]]] = []
    gap_limits: list[Fraction] = []  # largest dominated-side mass below one
    for k, row in enumerate(conditionals):
        edges: list[tuple[int, int]] = []
        limit = ZERO
        for i, b in enumerate(row):
            for j, other in enumerate(row):
                if i == j:
                    continue
                value = other.mass_on_mask(b.support_mask)
                if value == 1:
                    edges.append((i, j))
                elif value > limit:
                    limit = value
        per_class_edges.append(edges)
        gap_limits.append(limit)

    # Cross-class pressure on the threshold: mass a shallower conditional
    # belief puts on a deeper class's event must stay in the reject region.
    cross_max = ZERO
    for k in range(1, len(priors)):
        for j in range(k):
            for belief in conditionals[j]:
                for mask in class_events[k]:
                    value = belief.mass_on_mask(mask)
                    if value > cross_max:
                        cross_max = value
    threshold = max(cross_max, eps)

    # Topological order per class (deterministic: canonical support key).
    ordered: list[list[int]] = []
    for k, row in enumerate(conditionals):
        incoming = [0] * len(row)
        outgoing: list[list[int]] = [[] for _ in row]
        for winner, loser in per_class_edges[k]:
            incoming[loser] += 1
            outgoing[winner].append(loser)
        ready = sorted(
            (i for i in range(len(row)) if incoming[i] == 0),
            key=lambda i: Event(space, row[i].support_mask).sort_key,
        )
        order: list[int] = []
        while ready:
            node = ready.pop(0)
            order.append(node)
            changed = False
            for nxt in outgoing[node]:
                incoming[nxt] -= 1
                if incoming[nxt] == 0:
                    changed = True
            if changed:
                ready = sorted(
                    (i for i in range(len(row)) if incoming[i] == 0 and i not in order),
                    key=lambda i: Event(space, row[i].support_mask).sort_key,
                )
        if len(order) != len(row):
            raise CycleDetected("dominance relation among conditional beliefs is cyclic")
        ordered.append(order)

    # Interval chain: all values live strictly above the threshold; each
    # class's lower bound also clears upper * (largest non-certain mass),
    # so dominated-but-uncertain beliefs can never outscore the class.
    bounds: list[tuple[Fraction, Fraction]] = []
    upper = ONE
    for k in range(len(priors)):
        floor = max(threshold, upper * gap_limits[k])
        lower = (floor + upper) / 2
        bounds.append((upper, lower))
        upper = (threshold + lower) / 2
    assert bounds[-1][1] > threshold * bounds[0][0]

    raw: list[Fraction] = []
    flat_priors: list[Belief] = []
    class_of: list[int] = []
    global_index: list[dict[int, int]] = [dict() for _ in priors]
    for k, order in enumerate(ordered):
        hi, lo = bounds[k]
        step = (hi - lo) / (len(order) + 1)
        for pos, local in enumerate(order):
            global_index[k][local] = len(flat_priors)
            flat_priors.append(conditionals[k][local])
            class_of.append(k)
            raw.append(hi - step * (pos + 1))

    total = sum(raw)
    rho = tuple(value / total for value in raw)
    scaled_bounds = tuple((hi / total, lo / total) for hi, lo in bounds)
    edges = tuple(
        (global_index[k][winner], global_index[k][loser])
        for k in range(len(priors))
        for winner, loser in per_class_edges[k]
    )
    ht = HTRepresentation(space, flat_priors, rho, threshold)
    return EpsOsConstruction(
        ht=ht,
        eps=eps,
        class_of=tuple(class_of),
        bounds=scaled_bounds,
        edges=edges,
        cross_max=cross_max,
    )


def eps_os_to_ht(os: OSRepresentation, eps: Fraction | int) -> HTRepresentation:
    """Representation agreeing with the thresholded update wherever defined."""
    return eps_os_construction(os, eps).ht
