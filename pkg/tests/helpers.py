"""Shared builders for the tests: a corpus generator and a few object shortcuts."""

import random
from fractions import Fraction

from beliefkit import (
    Act,
    Belief,
    Lottery,
    OSRepresentation,
    StateSpace,
    UtilityFunction,
)


def random_canonical_os(rng: random.Random, max_states: int = 8) -> OSRepresentation:
    """Hierarchy with disjoint supports that jointly cover the space.

    States are shuffled and cut into consecutive chunks, one prior per
    chunk, so every representation is already canonical and every update
    is defined.  Integer weights keep failure output readable.
    """
    n = rng.randint(1, max_states)
    space = StateSpace(tuple(f"s{i}" for i in range(n)))
    labels = list(space.states)
    rng.shuffle(labels)
    parts = rng.randint(1, min(n, 4))
    cuts = sorted(rng.sample(range(1, n), parts - 1))
    priors = []
    for lo, hi in zip([0] + cuts, cuts + [n]):
        chunk = labels[lo:hi]
        weights = [rng.randint(1, 9) for _ in chunk]
        total = sum(weights)
        priors.append(
            Belief(space, {s: Fraction(w, total) for s, w in zip(chunk, weights)})
        )
    return OSRepresentation(space, priors)


def coin_hierarchy() -> OSRepresentation:
    """The six-state example used throughout: fair coin, then early ends."""
    space = StateSpace(("h", "t", "e", "el", "l1", "l2"))
    mu0 = Belief(space, {"h": Fraction(1, 2), "t": Fraction(1, 2)})
    mu1 = Belief(space, {"e": Fraction(7, 8), "el": Fraction(1, 8)})
    mu2 = Belief(space, {"l1": Fraction(1, 2), "l2": Fraction(1, 2)})
    return OSRepresentation(space, (mu0, mu1, mu2))


def money_utility(*amounts: Fraction | int) -> UtilityFunction:
    """Linear utility over dollar labels, one entry per amount."""
    return UtilityFunction({f"${a}": Fraction(a) for a in amounts})


def bet(space: StateSpace, win: str, high: Lottery, low: Lottery) -> Act:
    return Act(space, {s: (high if s == win else low) for s in space.states})
