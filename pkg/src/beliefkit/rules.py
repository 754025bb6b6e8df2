"""Belief-updating rules as finite tables, and the chain-rule validator.

An updating rule maps conditioning events to posterior beliefs.  A rule is a
conditional probability system (CPS) when it is complete (defined on every
nonempty event), concentrated (P(E|E) = 1), and satisfies the chain rule

    P(G|E) = P(G|F) * P(F|E)   for all G <= F <= E with F nonempty.

``validate_cps`` checks all of that exhaustively.  The triple scan runs on
integer numerator tables over per-belief common denominators, so the check
is pure machine-int arithmetic; Fractions are only rebuilt for the reported
witness.  Witnesses are always the lexicographically first violating triple
under the canonical event order, which keeps every report deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import (
    Belief,
    CheckResult,
    Event,
    StateSpace,
    bayes_update,
    lex_submasks,
)
from .errors import BadDelta, EmptyEvent, SpaceMismatch, ValidationError


class UpdatingRule:
    """An immutable table from conditioning events to beliefs."""

    __slots__ = ("space", "_table", "_events")

    def __init__(self, space: StateSpace, table: Mapping[Event, Belief]):
        checked: dict[Event, Belief] = {}
        for event, belief in table.items():
            if event.space != space:
                raise SpaceMismatch("table key built over a different state space")
            if not event:
                raise EmptyEvent("the empty event cannot appear in a rule's domain")
            if belief.space != space:
                raise SpaceMismatch("table value built over a different state space")
            checked[event] = belief
        self.space = space
        self._table = checked
        self._events: tuple[Event, ...] | None = None

    @property
    def domain(self):
        return self._table.keys()

    def events(self) -> tuple[Event, ...]:
        """Domain events in canonical order."""
        if self._events is None:
            self._events = tuple(sorted(self._table, key=lambda e: e.sort_key))
        return self._events

    def __getitem__(self, event: Event) -> Belief:
        return self._table[event]

    def get(self, event: Event, default=None):
        return self._table.get(event, default)

    def __contains__(self, event: Event) -> bool:
        return event in self._table

    def __len__(self) -> int:
        return len(self._table)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UpdatingRule)
            and self.space == other.space
            and self._table == other._table
        )

    def __repr__(self) -> str:
        return f"UpdatingRule(<{len(self._table)} events over {len(self.space)} states>)"


def is_complete(rule: UpdatingRule) -> bool:
    """True when the domain is every nonempty event of the space."""
    return len(rule) == (1 << len(rule.space)) - 1


def is_concentrated(rule: UpdatingRule) -> CheckResult:
    """Check P(E|E) = 1 on the whole domain; witness the first failure."""
    for event in rule.events():
        if rule[event].support_mask & ~event.mask:
            return CheckResult(False, event)
    return CheckResult(True)


def bayesian_rule(prior: Belief) -> UpdatingRule:
    """Bayes updating wherever it is defined: domain is the feasible events."""
    space = prior.space
    cache: dict[int, Belief] = {}
    table: dict[Event, Belief] = {}
    for mask in space.canonical_masks():
        inner = mask & prior.support_mask
        if not inner:
            continue
        belief = cache.get(inner)
        if belief is None:
            belief = bayes_update(prior, Event(space, inner))
            cache[inner] = belief
        table[Event(space, mask)] = belief
    return UpdatingRule(space, table)


def conservative_rule(prior: Belief, delta: Fraction | int) -> UpdatingRule:
    """Sticky updating: keep ``delta`` of the prior, update the rest.

    On a feasible event the rest is the Bayes posterior; on a null event it
    is spread uniformly over the event.  Complete but not concentrated for
    delta < 1 on any non-certain event, which is exactly what makes it a
    useful non-CPS foil.
    """
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise BadDelta(f"delta must lie in (0, 1], got {delta}")
    space = prior.space
    table: dict[Event, Belief] = {}
    for mask in space.canonical_masks():
        event = Event(space, mask)
        if mask & prior.support_mask:
            posterior = bayes_update(prior, event)
            masses = {
                label: delta * prior.mass[i] + (1 - delta) * posterior.mass[i]
                for i, label in enumerate(space.states)
                if prior.mass[i] or posterior.mass[i]
            }
        else:
            share = Fraction(1, len(event))
            masses = {}
            for i, label in enumerate(space.states):
                value = delta * prior.mass[i] + ((1 - delta) * share if mask >> i & 1 else 0)
                if value:
                    masses[label] = value
        table[event] = Belief(space, masses)
    return UpdatingRule(space, table)


@dataclass(frozen=True)
class CpsWitness:
    """A nested triple where the chain rule fails: lhs = P(G|E), rhs = P(G|F)P(F|E)."""

    g: Event
    f: Event
    e: Event
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class CpsValidation:
    """Outcome of ``validate_cps``: valid, violation, or not a candidate."""

    status: str  # "valid" | "violation" | "not-candidate"
    witness: CpsWitness | None = None
    reason: str | None = None
    triples: int = 0

    def __bool__(self) -> bool:
        return self.status == "valid"

    @classmethod
    def valid(cls, triples: int) -> "CpsValidation":
        return cls("valid", triples=triples)

    @classmethod
    def violation(cls, witness: CpsWitness, triples: int) -> "CpsValidation":
        return cls("violation", witness=witness, triples=triples)

    @classmethod
    def not_candidate(cls, reason: str) -> "CpsValidation":
        return cls("not-candidate", reason=reason)


def validate_cps(rule: UpdatingRule) -> CpsValidation:
    """Exhaustive CPS check over all nested triples G <= F <= E, F nonempty.

    Returns not-candidate (naming the failed property) if the rule is not
    complete or not concentrated, the first violating triple in canonical
    (E, F, G) order if the chain rule fails, and valid otherwise with the
    number of triples enumerated (always 4^n - 2^n for n states).
    """
    if not is_complete(rule):
        return CpsValidation.not_candidate("not complete")
    concentrated = is_concentrated(rule)
    if not concentrated:
        return CpsValidation.not_candidate("not concentrated")

    space = rule.space
    masks = space.canonical_masks()

    # Rows of integer numerators per distinct posterior; many events share one.
    row_of: dict[int, int] = {}
    rows: list[list[int]] = []
    dens: list[int] = []
    belief_index: dict[Belief, int] = {}
    for event in rule.events():
        belief = rule[event]
        idx = belief_index.get(belief)
        if idx is None:
            idx = len(rows)
            belief_index[belief] = idx
            den, _ = belief._ints()
            rows.append(belief.subset_row())
            dens.append(den)
        row_of[event.mask] = idx

    triples = 0
    for e_mask in masks:
        row_e = rows[row_of[e_mask]]
        for f_mask in lex_submasks(e_mask)[1:]:
            fi = row_of[f_mask]
            row_f = rows[fi]
            den_f = dens[fi]
            n_fe = row_e[f_mask]
            for g_mask in lex_submasks(f_mask):
                triples += 1
                if row_e[g_mask] * den_f != row_f[g_mask] * n_fe:
                    den_e = dens[row_of[e_mask]]
                    lhs = Fraction(row_e[g_mask], den_e)
                    rhs = Fraction(row_f[g_mask], den_f) * Fraction(n_fe, den_e)
                    witness = CpsWitness(
                        g=Event(space, g_mask),
                        f=Event(space, f_mask),
                        e=Event(space, e_mask),
                        lhs=lhs,
                        rhs=rhs,
                    )
                    return CpsValidation.violation(witness, triples)
    return CpsValidation.valid(triples)


def rules_equal(a: UpdatingRule, b: UpdatingRule, scope: Iterable[Event] | None = None) -> CheckResult:
    """Compare two rules event by event; witness the first difference.

    ``scope`` defaults to every nonempty event of the shared space.  An
    event missing from either table counts as a difference.
    """
    if a.space != b.space:
        raise SpaceMismatch("rules built over different state spaces")
    if scope is None:
        events: Iterable[Event] = a.space.events()
    else:
        events = sorted(scope, key=lambda e: e.sort_key)
    for event in events:
        if a.get(event) != b.get(event):
            return CheckResult(False, event)
    return CheckResult(True)
