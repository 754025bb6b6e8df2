"""Preference families over an ordered hierarchy, and axiom checks.

A family pairs the hierarchy with one utility per surprise order.  Ranking
given an event is expected utility under the event's conditional belief,
evaluated with the utility of the event's order.

The checks here verify axioms as properties of a representation on
deterministic act samples, not on raw choice data.  Dynamic consistency is
checked by composing acts so they agree off the subevent; consequentialism
by composing pairs so they agree on the event; surprise-independent risk
attitude by fitting an affine map from the base utility and verifying it
pointwise.  Sampled acts mix the first two shared outcomes on a fixed
probability grid, plus single-state bets, so odds flips between two
candidate beliefs always have a witness available.

Checks take any family-shaped object with ``space``, ``belief_given`` and
``utility_given``; that is what lets tests feed distorted families through
the same code path and watch them fail.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import (
    Act,
    Belief,
    CheckResult,
    Event,
    Lottery,
    Preference,
    StateSpace,
    UtilityFunction,
    compare_values,
    compose_act,
    seu_value,
)
from .errors import (
    EmptyEvent,
    InfeasibleSubevent,
    DegenerateBase,
    SpaceMismatch,
    ValidationError,
)
from .ordered_surprises import OSRepresentation, os_update, surprise_order

GRID_PROBABILITIES = (
    Fraction(0),
    Fraction(1, 4),
    Fraction(1, 2),
    Fraction(3, 4),
    Fraction(1),
)


class PreferenceFamily:
    """An ordered hierarchy plus one non-constant utility per order."""

    __slots__ = ("os", "utilities", "_beliefs")

    def __init__(
        self,
        os: OSRepresentation,
        utilities: Mapping[int, UtilityFunction] | Sequence[UtilityFunction],
    ):
        if isinstance(utilities, Mapping):
            try:
                ordered = tuple(utilities[k] for k in range(len(os.priors)))
            except KeyError as missing:
                raise ValidationError(
                    f"no utility for surprise order {missing.args[0]}"
                ) from None
            if len(utilities) != len(os.priors):
                raise ValidationError("utilities keyed outside the hierarchy's orders")
        else:
            ordered = tuple(utilities)
            if len(ordered) != len(os.priors):
                raise ValidationError(
                    f"need one utility per order, got {len(ordered)} "
                    f"for {len(os.priors)} priors"
                )
        for k, u in enumerate(ordered):
            values = {u.value(o) for o in u.outcomes}
            if len(values) < 2:
                raise ValidationError(f"utility for order {k} is constant")
        self.os = os
        self.utilities = ordered
        self._beliefs: dict[int, Belief] = {}

    @property
    def space(self) -> StateSpace:
        return self.os.space

    def belief_given(self, e: Event) -> Belief:
        belief = self._beliefs.get(e.mask)
        if belief is None:
            belief = os_update(self.os, e)
            self._beliefs[e.mask] = belief
        return belief

    def utility_given(self, e: Event) -> UtilityFunction:
        return self.utilities[surprise_order(self.os, e)]

    def shared_outcomes(self) -> tuple[str, ...]:
        common = set(self.utilities[0].outcomes)
        for u in self.utilities[1:]:
            common &= set(u.outcomes)
        return tuple(sorted(common))

    def __repr__(self) -> str:
        return f"PreferenceFamily(<{len(self.utilities)} orders>)"


def os_prefer(fam, e: Event, f: Act, g: Act) -> Preference:
    """Rank two acts given an event, through the family's own belief map."""
    belief = fam.belief_given(e)
    u = fam.utility_given(e)
    return compare_values(seu_value(u, belief, f), seu_value(u, belief, g))


def null_states(fam, e: Event) -> Event:
    """States ignored by the conditional ranking: zero mass given ``e``.

    Always contains everything outside ``e`` for honest families, since
    conditional mass lives inside the event.
    """
    belief = fam.belief_given(e)
    full = (1 << len(fam.space)) - 1
    return Event(fam.space, full & ~belief.support_mask)


def lottery_grid(
    outcomes: Sequence[str],
    probabilities: Sequence[Fraction] = GRID_PROBABILITIES,
) -> tuple[Lottery, ...]:
    """Mixtures of the first two distinct outcomes along a probability grid."""
    distinct = []
    for o in outcomes:
        if o not in distinct:
            distinct.append(o)
    if len(distinct) < 2:
        raise ValidationError("need at least two distinct outcomes to build lotteries")
    x, y = distinct[0], distinct[1]
    return tuple(Lottery({x: 1 - p, y: p}) for p in probabilities)


def act_grid(space: StateSpace, outcomes: Sequence[str], max_bets: int = 6) -> tuple[Act, ...]:
    """Constant acts on a coarse lottery grid plus single-state bets."""
    lotteries = lottery_grid(outcomes, (Fraction(0), Fraction(1, 2), Fraction(1)))
    acts = [Act.constant(space, lot) for lot in lotteries]
    low, high = lotteries[0], lotteries[-1]
    for label in space.states[:max_bets]:
        acts.append(
            Act(space, {s: (high if s == label else low) for s in space.states})
        )
    return tuple(acts)


def default_act_pairs(
    space: StateSpace, outcomes: Sequence[str], limit: int = 60
) -> tuple[tuple[Act, Act], ...]:
    """Ordered distinct pairs from the act grid, truncated deterministically."""
    grid = act_grid(space, outcomes)
    pairs = []
    for f in grid:
        for g in grid:
            if f != g:
                pairs.append((f, g))
                if len(pairs) == limit:
                    return tuple(pairs)
    return tuple(pairs)


def default_act_triples(
    space: StateSpace, outcomes: Sequence[str], limit: int = 60
) -> tuple[tuple[Act, Act, Act], ...]:
    """(f, g, h) samples: distinct pair plus a constant-act padding."""
    grid = act_grid(space, outcomes)
    paddings = grid[:3]
    triples = []
    for f in grid:
        for g in grid:
            if f == g:
                continue
            for h in paddings:
                triples.append((f, g, h))
                if len(triples) == limit:
                    return tuple(triples)
    return tuple(triples)


def check_consequentialism(
    fam,
    e: Event,
    sample_pairs: Iterable[tuple[Act, Act]] | None = None,
) -> CheckResult:
    """Acts forced to agree on the event must rank indifferent given it.

    Each sampled pair (f, g) is turned into f versus "f on e, g elsewhere".
    The witness is (f, composed act, verdict) for the first strict ranking.
    """
    if not e:
        raise EmptyEvent("cannot condition on the empty event")
    if sample_pairs is None:
        sample_pairs = default_act_pairs(fam.space, fam.shared_outcomes())
    for f, g in sample_pairs:
        forced = compose_act(f, e, g)
        verdict = os_prefer(fam, e, f, forced)
        if verdict is not Preference.INDIFFERENT:
            return CheckResult(False, (f, forced, verdict))
    return CheckResult(True)


def check_conditional_consistency(
    fam,
    e: Event,
    a: Event,
    sample_triples: Iterable[tuple[Act, Act, Act]] | None = None,
) -> CheckResult:
    """Rankings through a feasible subevent agree with rankings on it.

    For every sampled (f, g, h), "f on a, h elsewhere" versus the same for
    g under the ``e``-conditional must match f versus g under the
    ``a``-conditional.  The witness is (f, g, h, verdict under e, verdict
    under a) for the first disagreement.

    Raises InfeasibleSubevent when ``a`` carries no mass given ``e``; the
    axiom says nothing there and silence would be misleading.
    """
    if a.space != e.space:
        raise SpaceMismatch("events built over different state spaces")
    if not a:
        raise EmptyEvent("the subevent is empty")
    if not a.issubset(e):
        raise ValidationError("the subevent must be contained in the conditioning event")
    if fam.belief_given(e).prob(a) == 0:
        raise InfeasibleSubevent(
            "{" + ",".join(a.members) + "} is null given {" + ",".join(e.members) + "}"
        )
    if sample_triples is None:
        sample_triples = default_act_triples(fam.space, fam.shared_outcomes())
    composed: dict[tuple[Act, Act], Act] = {}
    for f, g, h in sample_triples:
        left_f = composed.get((f, h))
        if left_f is None:
            left_f = compose_act(f, a, h)
            composed[(f, h)] = left_f
        left_g = composed.get((g, h))
        if left_g is None:
            left_g = compose_act(g, a, h)
            composed[(g, h)] = left_g
        under_e = os_prefer(fam, e, left_f, left_g)
        under_a = os_prefer(fam, a, f, g)
        if under_e is not under_a:
            return CheckResult(False, (f, g, h, under_e, under_a))
    return CheckResult(True)


def default_event_pairs(os: OSRepresentation) -> tuple[tuple[Event, Event], ...]:
    """Feasible (event, subevent) pairs spanning every surprise order."""
    space = os.space
    pairs = [(space.full_event, Event(space, os.priors[0].support_mask))]
    for prior in os.priors:
        support = Event(space, prior.support_mask)
        first = Event(space, support.mask & -support.mask)
        pairs.append((support, first))
        if first != support:
            pairs.append((support, support))
    return tuple(pairs)


@dataclass(frozen=True)
class RiskIndependenceReport:
    """Whether every order's utility is a positive affine map of order 0's.

    ``coefficients[k]`` holds (scale, shift) with u_k = scale * u_0 + shift
    on the shared outcome table; populated only when the relation holds.
    On failure ``witness_order`` and ``witness_outcome`` locate the first
    point off the fitted line (or the first non-positive scale).
    """

    holds: bool
    coefficients: dict[int, tuple[Fraction, Fraction]] | None = None
    witness_order: int | None = None
    witness_outcome: str | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_risk_independence(fam) -> RiskIndependenceReport:
    """Fit each utility against the base one and verify pointwise.

    The affine coefficients are pinned by the first two shared outcomes
    where the base utility differs; every remaining shared outcome must
    land on that line and the scale must be positive.  Raises
    DegenerateBase when the base utility is constant on the shared table,
    since then no fit is determined.
    """
    outcomes = fam.shared_outcomes()
    base = fam.utilities[0]
    anchor = None
    for candidate in outcomes[1:]:
        if base.value(candidate) != base.value(outcomes[0]):
            anchor = (outcomes[0], candidate)
            break
    if anchor is None:
        raise DegenerateBase("base utility is constant on the shared outcome table")
    x, y = anchor
    coefficients: dict[int, tuple[Fraction, Fraction]] = {0: (Fraction(1), Fraction(0))}
    for k, u in enumerate(fam.utilities[1:], start=1):
        scale = (u.value(x) - u.value(y)) / (base.value(x) - base.value(y))
        shift = u.value(x) - scale * base.value(x)
        if scale <= 0:
            return RiskIndependenceReport(False, witness_order=k, witness_outcome=y)
        for o in outcomes:
            if u.value(o) != scale * base.value(o) + shift:
                return RiskIndependenceReport(False, witness_order=k, witness_outcome=o)
        coefficients[k] = (scale, shift)
    return RiskIndependenceReport(True, coefficients=coefficients)


def check_constant_act_agreement(
    fam,
    lotteries: Sequence[Lottery] | None = None,
) -> CheckResult:
    """Constant-act rankings must not depend on the surprise order.

    Compares every sampled lottery pair under each order's utility against
    order 0.  The witness is (lottery, lottery, order, verdict there,
    verdict at order 0) for the first flip.  Together with
    check_risk_independence this exercises both directions of the
    affine-utility equivalence on a grid.
    """
    if lotteries is None:
        lotteries = lottery_grid(fam.shared_outcomes())
    for i, p in enumerate(lotteries):
        for q in lotteries[i + 1 :]:
            bench = compare_values(
                fam.utilities[0].expected(p), fam.utilities[0].expected(q)
            )
            for k, u in enumerate(fam.utilities[1:], start=1):
                verdict = compare_values(u.expected(p), u.expected(q))
                if verdict is not bench:
                    return CheckResult(False, (p, q, k, verdict, bench))
    return CheckResult(True)
