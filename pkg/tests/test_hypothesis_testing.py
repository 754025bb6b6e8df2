"""Score-based prior selection and the two weight constructions."""

import random
from fractions import Fraction

import pytest

from beliefkit import (
    AmbiguousArgmax,
    Belief,
    EpsOsConstruction,
    HTRepresentation,
    NoPriorExceedsThreshold,
    SelectionBranch,
    StateSpace,
    ValidationError,
    eps_os_construction,
    eps_os_to_ht,
    eps_os_update,
    ht_rule,
    ht_select,
    os_rule,
    os_to_ht,
    os_update,
    rules_equal,
    surprise_order,
    surprise_partition,
    validate_cps,
)
from helpers import coin_hierarchy, random_canonical_os


@pytest.fixture
def coin():
    return coin_hierarchy()


@pytest.fixture
def skewed(coin):
    """Hand-picked weights that overrule the hierarchy order on some events."""
    return HTRepresentation(
        coin.space,
        coin.priors,
        (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)),
        0,
    )


def test_representation_validation(coin):
    space, priors = coin.space, coin.priors
    with pytest.raises(ValidationError):
        HTRepresentation(space, priors, (Fraction(1, 2), Fraction(1, 3), Fraction(1, 3)))
    with pytest.raises(ValidationError):
        HTRepresentation(space, priors, (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)))
    with pytest.raises(ValidationError):
        HTRepresentation(space, priors, (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)), 1)
    with pytest.raises(ValidationError):
        HTRepresentation(
            space,
            (priors[0], priors[1], priors[1]),
            (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)),
        )


def test_select_uses_bayes_on_expected_events(skewed):
    space = skewed.space
    trace, belief = ht_select(skewed, space.event("h", "t", "e"))
    assert trace.branch is SelectionBranch.BAYESIAN
    assert trace.chosen == 0
    assert belief == Belief(space, {"h": Fraction(1, 2), "t": Fraction(1, 2)})


def test_select_scores_overrule_hierarchy_order(skewed):
    """The deeper prior wins on the short event, the shallow one on the long."""
    space = skewed.space
    a = space.event("el", "l1", "l2")
    trace_a, belief_a = ht_select(skewed, a)
    assert trace_a.branch is SelectionBranch.ARGMAX
    assert trace_a.scores == (0, Fraction(1, 24), Fraction(1, 6))
    assert trace_a.chosen == 2
    assert belief_a == Belief(space, {"l1": Fraction(1, 2), "l2": Fraction(1, 2)})

    e = space.event("e", "el", "l1", "l2")
    trace_e, belief_e = ht_select(skewed, e)
    assert trace_e.scores == (0, Fraction(1, 3), Fraction(1, 6))
    assert trace_e.chosen == 1
    assert belief_e == Belief(space, {"e": Fraction(7, 8), "el": Fraction(1, 8)})


def test_skewed_weights_break_the_chain_rule(skewed, coin):
    report = validate_cps(ht_rule(skewed))
    assert report.status == "violation"
    w = report.witness
    assert w.e.members == ("e", "el", "l1")
    assert w.f.members == ("el", "l1")
    assert w.g.members == ("el",)
    assert w.lhs == Fraction(1, 8)
    assert w.rhs == 0

    check = rules_equal(os_rule(coin), ht_rule(skewed))
    assert not check
    assert check.witness.members == ("el", "l1")


def test_tied_scores_raise_with_the_tie_reported():
    space = StateSpace(("a", "b", "c"))
    rep = HTRepresentation(
        space,
        (Belief.point(space, "a"), Belief.point(space, "b"), Belief.point(space, "c")),
        (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)),
    )
    with pytest.raises(AmbiguousArgmax) as exc:
        ht_select(rep, space.event("b", "c"))
    assert exc.value.event == space.event("b", "c")
    assert exc.value.tied == (1, 2)
    with pytest.raises(AmbiguousArgmax):
        ht_rule(rep)


def test_weight_construction_on_the_coin(coin):
    ht = os_to_ht(coin)
    assert ht.eps == 0
    assert ht.priors == coin.priors
    assert ht.rho == (Fraction(64, 81), Fraction(16, 81), Fraction(1, 81))
    assert rules_equal(os_rule(coin), ht_rule(ht))


def test_constructed_weights_make_depth_win_strictly(coin):
    """On every event the selected prior is the surprise-order one, and its
    score strictly beats every deeper prior's."""
    ht = os_to_ht(coin)
    for e in coin.space.events():
        trace, belief = ht_select(ht, e)
        k = surprise_order(coin, e)
        assert trace.chosen == k
        assert belief == os_update(coin, e)
        for j in range(k + 1, len(ht.priors)):
            assert trace.scores[k] > trace.scores[j]


def test_weight_construction_on_a_small_corpus():
    rng = random.Random(4242)
    for _ in range(20):
        hier = random_canonical_os(rng, max_states=6)
        assert rules_equal(os_rule(hier), ht_rule(os_to_ht(hier)))


def test_thresholded_construction_coin_quarter(coin):
    built = eps_os_construction(coin, Fraction(1, 4))
    assert isinstance(built, EpsOsConstruction)
    assert built.ht.eps == Fraction(1, 4)
    assert built.cross_max == Fraction(1, 8)
    assert built.class_of == (0, 0, 0, 1, 1, 2, 2, 2)
    assert built.ht.rho == (
        Fraction(48, 235),
        Fraction(224, 1175),
        Fraction(208, 1175),
        Fraction(8, 75),
        Fraction(368, 3525),
        Fraction(177, 2350),
        Fraction(17, 235),
        Fraction(163, 2350),
    )
    assert built.ht.priors[0] == coin.priors[0]


def test_thresholded_construction_interval_discipline(coin):
    for eps in (0, Fraction(1, 8), Fraction(1, 4)):
        built = eps_os_construction(coin, eps)
        bounds = built.bounds
        for hi, lo in bounds:
            assert hi > lo > 0
        for (_, lo), (next_hi, _) in zip(bounds, bounds[1:]):
            assert lo > next_hi
        for i, k in enumerate(built.class_of):
            hi, lo = bounds[k]
            assert lo < built.ht.rho[i] < hi
        threshold = built.ht.eps
        assert bounds[-1][1] > threshold * bounds[0][0]


def test_thresholded_construction_edges_are_forward_and_intra_class(coin):
    for eps in (0, Fraction(1, 8), Fraction(1, 4)):
        built = eps_os_construction(coin, eps)
        for winner, loser in built.edges:
            assert winner < loser
            assert built.class_of[winner] == built.class_of[loser]
            assert built.ht.rho[winner] > built.ht.rho[loser]


def test_thresholded_rule_agrees_wherever_defined(coin):
    for eps in (0, Fraction(1, 8), Fraction(1, 4)):
        ht = eps_os_to_ht(coin, eps)
        rule = ht_rule(ht)
        part = surprise_partition(coin, eps)
        for events in part.classes:
            for e in events:
                assert rule[e] == eps_os_update(coin, eps, e)
        for e in part.undefined:
            with pytest.raises(NoPriorExceedsThreshold):
                eps_os_update(coin, eps, e)


def test_threshold_zero_construction_reports_zero(coin):
    assert eps_os_to_ht(coin, 0).eps == 0
    assert eps_os_construction(coin, 0).cross_max == 0


def test_threshold_zero_construction_matches_plain_rule(coin):
    assert rules_equal(os_rule(coin), ht_rule(eps_os_to_ht(coin, 0)))
