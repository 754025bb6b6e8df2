"""Scenario files: a strict JSON schema binding names to domain objects.

Every number is a rational written as a string, "7/8" or "3"; raw JSON
numbers are rejected so nothing ever passes through a float.  Parsing is
strict about keys (unknown or duplicate keys fail with the offending
path), and ``render`` writes the canonical form back out, byte-identical
for files that are already canonical.

Top-level keys, all optional except ``space``:

    space      array of state labels, declaration order is significant
    beliefs    name -> {state: rational}
    os         array of belief names, outermost first
    ht         {"priors": [belief names], "rho": [rationals], "eps": rational}
    lps        array of belief names, level 0 first
    utilities  name -> {outcome: rational}
    acts       name -> {state: {outcome: rational}}
    events     name -> array of state labels
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .core import Act, Belief, Event, Lottery, StateSpace, UtilityFunction
from .errors import ParseError
from .hypothesis_testing import HTRepresentation
from .lps import LPSRepresentation
from .ordered_surprises import OSRepresentation

_TOP_KEYS = ("space", "beliefs", "os", "ht", "lps", "utilities", "acts", "events")
_HT_KEYS = ("priors", "rho", "eps")
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(value, path: str = "value") -> Fraction:
    if not isinstance(value, str):
        raise ParseError(f'{path}: rationals are strings like "7/8", got {value!r}')
    if not _RATIONAL.match(value):
        raise ParseError(f"{path}: not an integer or p/q rational: {value!r}")
    if "/" in value and value.split("/")[1].lstrip("0") == "":
        raise ParseError(f"{path}: zero denominator in {value!r}")
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    return str(value)


@dataclass
class Scenario:
    """Parsed scenario with both resolved objects and the declared names."""

    space: StateSpace
    beliefs: dict[str, Belief] = field(default_factory=dict)
    os: OSRepresentation | None = None
    os_names: tuple[str, ...] | None = None
    ht: HTRepresentation | None = None
    ht_prior_names: tuple[str, ...] | None = None
    lps: LPSRepresentation | None = None
    lps_names: tuple[str, ...] | None = None
    utilities: dict[str, UtilityFunction] = field(default_factory=dict)
    acts: dict[str, Act] = field(default_factory=dict)
    events: dict[str, Event] = field(default_factory=dict)

    def render(self) -> str:
        return render(self)


def _reject_duplicates(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise ParseError(f"duplicate key {key!r}")
        seen[key] = value
    return seen


def _expect_object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"{path}: expected an object, got {type(value).__name__}")
    return value


def _expect_array(value, path: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{path}: expected an array, got {type(value).__name__}")
    return value


def _expect_strings(value, path: str) -> list[str]:
    items = _expect_array(value, path)
    for i, item in enumerate(items):
        if not isinstance(item, str):
            raise ParseError(f"{path}[{i}]: expected a string, got {item!r}")
    return items


def _named_beliefs(names, beliefs: dict[str, Belief], path: str) -> list[Belief]:
    resolved = []
    for i, name in enumerate(_expect_strings(names, path)):
        if name not in beliefs:
            raise ParseError(f"{path}[{i}]: unknown belief name {name!r}")
        resolved.append(beliefs[name])
    return resolved


def parse_scenario(text: str) -> Scenario:
    try:
        raw = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as bad:
        raise ParseError(f"line {bad.lineno}, column {bad.colno}: {bad.msg}") from None
    doc = _expect_object(raw, "document")
    for key in doc:
        if key not in _TOP_KEYS:
            raise ParseError(f"unknown key {key!r} (expected one of {', '.join(_TOP_KEYS)})")
    if "space" not in doc:
        raise ParseError('missing required key "space"')

    space = StateSpace(_expect_strings(doc["space"], "space"))
    scenario = Scenario(space)

    for name, table in _expect_object(doc.get("beliefs", {}), "beliefs").items():
        path = f"beliefs.{name}"
        masses = {
            state: parse_rational(mass, f"{path}.{state}")
            for state, mass in _expect_object(table, path).items()
        }
        scenario.beliefs[name] = Belief(space, masses)

    if "os" in doc:
        names = _named_beliefs(doc["os"], scenario.beliefs, "os")
        scenario.os = OSRepresentation(space, names)
        scenario.os_names = tuple(_expect_strings(doc["os"], "os"))

    if "ht" in doc:
        block = _expect_object(doc["ht"], "ht")
        for key in block:
            if key not in _HT_KEYS:
                raise ParseError(f"ht: unknown key {key!r}")
        for key in _HT_KEYS:
            if key not in block:
                raise ParseError(f"ht: missing key {key!r}")
        priors = _named_beliefs(block["priors"], scenario.beliefs, "ht.priors")
        rho = [
            parse_rational(r, f"ht.rho[{i}]")
            for i, r in enumerate(_expect_array(block["rho"], "ht.rho"))
        ]
        eps = parse_rational(block["eps"], "ht.eps")
        scenario.ht = HTRepresentation(space, priors, rho, eps)
        scenario.ht_prior_names = tuple(_expect_strings(block["priors"], "ht.priors"))

    if "lps" in doc:
        names = _named_beliefs(doc["lps"], scenario.beliefs, "lps")
        scenario.lps = LPSRepresentation(space, names)
        scenario.lps_names = tuple(_expect_strings(doc["lps"], "lps"))

    for name, table in _expect_object(doc.get("utilities", {}), "utilities").items():
        path = f"utilities.{name}"
        values = {
            outcome: parse_rational(v, f"{path}.{outcome}")
            for outcome, v in _expect_object(table, path).items()
        }
        scenario.utilities[name] = UtilityFunction(values)

    for name, table in _expect_object(doc.get("acts", {}), "acts").items():
        path = f"acts.{name}"
        assignment = {}
        for state, lot in _expect_object(table, path).items():
            assignment[state] = Lottery(
                {
                    outcome: parse_rational(p, f"{path}.{state}.{outcome}")
                    for outcome, p in _expect_object(lot, f"{path}.{state}").items()
                }
            )
        scenario.acts[name] = Act(space, assignment)

    for name, labels in _expect_object(doc.get("events", {}), "events").items():
        scenario.events[name] = space.event_from(
            _expect_strings(labels, f"events.{name}")
        )

    return scenario


def render(scenario: Scenario) -> str:
    """Canonical serialization: space order for states, sorted outcomes."""
    space = scenario.space
    doc: dict = {"space": list(space.states)}
    if scenario.beliefs:
        doc["beliefs"] = {
            name: {
                state: format_rational(belief.mass_of(state))
                for state in space.states
                if belief.mass_of(state)
            }
            for name, belief in scenario.beliefs.items()
        }
    if scenario.os_names is not None:
        doc["os"] = list(scenario.os_names)
    if scenario.ht is not None:
        doc["ht"] = {
            "priors": list(scenario.ht_prior_names),
            "rho": [format_rational(r) for r in scenario.ht.rho],
            "eps": format_rational(scenario.ht.eps),
        }
    if scenario.lps_names is not None:
        doc["lps"] = list(scenario.lps_names)
    if scenario.utilities:
        doc["utilities"] = {
            name: {
                outcome: format_rational(u.value(outcome))
                for outcome in sorted(u.outcomes)
            }
            for name, u in scenario.utilities.items()
        }
    if scenario.acts:
        doc["acts"] = {
            name: {
                state: {
                    outcome: format_rational(p)
                    for outcome, p in sorted(act.lottery_at(state).items())
                }
                for state in space.states
            }
            for name, act in scenario.acts.items()
        }
    if scenario.events:
        doc["events"] = {
            name: [s for s in space.states if s in event]
            for name, event in scenario.events.items()
        }
    return json.dumps(doc, indent=2) + "\n"


def fixture_names() -> tuple[str, ...]:
    root = resources.files(__package__) / "fixtures"
    return tuple(sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json")))


def load_scenario(ref: str | Path) -> Scenario:
    """Load from a filesystem path, or by bundled fixture name."""
    path = Path(ref)
    if path.exists():
        return parse_scenario(path.read_text(encoding="utf-8"))
    if path.suffix == ".json":
        raise ParseError(f"no such scenario file: {ref}")
    candidate = resources.files(__package__) / "fixtures" / f"{ref}.json"
    if not candidate.is_file():
        raise ParseError(
            f"unknown scenario {str(ref)!r}; bundled fixtures: {', '.join(fixture_names())}"
        )
    return parse_scenario(candidate.read_text(encoding="utf-8"))
