"""Updating rules: completeness, concentration, chain rule, the sticky foil."""

from fractions import Fraction

import pytest

from beliefkit import (
    BadDelta,
    Belief,
    CheckResult,
    OSRepresentation,
    StateSpace,
    UpdatingRule,
    bayesian_rule,
    conservative_rule,
    is_complete,
    is_concentrated,
    os_rule,
    rules_equal,
    validate_cps,
)
from helpers import coin_hierarchy


@pytest.fixture
def half_half():
    space = StateSpace(("e", "h", "t"))
    return space, Belief(space, {"h": Fraction(1, 2), "t": Fraction(1, 2)})


def test_bayesian_rule_domain_is_positive_mass_events(half_half):
    space, prior = half_half
    rule = bayesian_rule(prior)
    masks = {e.mask for e in rule.events()}
    expected = {m for m in space.canonical_masks() if prior.mass_on_mask(m) > 0}
    assert masks == expected
    assert not is_complete(rule)
    assert is_concentrated(rule)


def test_partial_bayesian_rule_is_not_a_cps_candidate(half_half):
    _, prior = half_half
    report = validate_cps(bayesian_rule(prior))
    assert report.status == "not-candidate"
    assert "complete" in report.reason


def test_full_support_bayesian_rule_is_a_valid_cps():
    space = StateSpace(("a", "b", "c"))
    prior = Belief(space, {"a": Fraction(1, 2), "b": Fraction(1, 3), "c": Fraction(1, 6)})
    report = validate_cps(bayesian_rule(prior))
    assert report.status == "valid"
    assert report


def test_triple_count_formula():
    for n in (1, 2, 3, 4, 6):
        space = StateSpace(tuple(f"s{i}" for i in range(n)))
        mu = Belief(space, {s: Fraction(1, n) for s in space.states})
        report = validate_cps(os_rule(OSRepresentation(space, (mu,))))
        assert report.status == "valid"
        assert report.triples == 4**n - 2**n


def test_chain_rule_equals_ratio_form():
    """P(G|E) = P(G|F) P(F|E) pins conditionals to mass ratios."""
    rule = os_rule(coin_hierarchy())
    space = rule.space
    e = space.event("h", "t", "e")
    f = space.event("h", "t")
    g = space.event("h")
    p_g_e = rule[e].prob(g)
    assert p_g_e == rule[f].prob(g) * rule[e].prob(f)
    assert p_g_e == Fraction(1, 2)


def test_conservative_rule_blends_prior_and_posterior(half_half):
    space, prior = half_half
    rule = conservative_rule(prior, Fraction(1, 2))
    given_ht = rule[space.event("h", "t")]
    assert given_ht.mass_of("h") == Fraction(1, 2)
    assert given_ht.mass_of("t") == Fraction(1, 2)
    given_h = rule[space.event("h")]
    assert given_h.mass_of("h") == Fraction(3, 4)
    assert given_h.mass_of("t") == Fraction(1, 4)


def test_conservative_rule_spreads_uniformly_on_null_events(half_half):
    space, prior = half_half
    rule = conservative_rule(prior, Fraction(1, 2))
    given_e = rule[space.event("e")]
    assert given_e.mass_of("e") == Fraction(1, 2)
    assert given_e.mass_of("h") == Fraction(1, 4)
    assert is_complete(rule)
    check = is_concentrated(rule)
    assert not check
    assert check.witness == space.event("e")


def test_conservative_delta_one_is_the_constant_prior(half_half):
    space, prior = half_half
    rule = conservative_rule(prior, 1)
    for event in space.events():
        assert rule[event] == prior


def test_conservative_delta_bounds(half_half):
    _, prior = half_half
    with pytest.raises(BadDelta):
        conservative_rule(prior, 0)
    with pytest.raises(BadDelta):
        conservative_rule(prior, Fraction(3, 2))


def test_validate_cps_flags_conservative_as_not_candidate(half_half):
    _, prior = half_half
    report = validate_cps(conservative_rule(prior, Fraction(1, 2)))
    assert report.status == "not-candidate"
    assert not report
    assert "concentrated" in report.reason


def test_rules_equal_reflexive_and_witnessing():
    rule = os_rule(coin_hierarchy())
    assert rules_equal(rule, rule)
    space = rule.space
    table = {e: rule[e] for e in rule.events()}
    tweak = space.event("t")
    table[tweak] = Belief(space, {"t": 1})
    table[space.event("h")] = Belief(space, {"h": 1})
    other = UpdatingRule(space, table)
    check = rules_equal(rule, other)
    assert isinstance(check, CheckResult)
    assert bool(check)

    table[tweak] = Belief(space, {"h": 1})
    broken = UpdatingRule(space, table)
    check = rules_equal(rule, broken)
    assert not check
    assert check.witness == tweak


def test_rules_equal_scope_restriction():
    rule = os_rule(coin_hierarchy())
    space = rule.space
    table = {e: rule[e] for e in rule.events()}
    table[space.event("t")] = Belief(space, {"h": 1})
    broken = UpdatingRule(space, table)
    scoped = rules_equal(rule, broken, scope=[space.event("h", "t")])
    assert scoped
