"""Scenario files: schema-validated JSON bundling a pointed epistemic
model, a propositional event model, an optional allowed-event subset and
an optional goal.  Declaration order in the file is preserved everywhere
and drives all lexicographic tie-breaking downstream."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from . import formula as fm
from .errors import FormulaError, ModelError, NonPropositionalError, ScenarioError
from .models import EpistemicModel, EventModel
from .planner import PlanningInstance

_ID = {"type": "string", "pattern": "^[A-Za-z_][A-Za-z0-9_]*$"}
_PAIR_LIST = {
    "type": "array",
    "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
}

SCHEMA = {
    "type": "object",
    "required": ["agents", "ap", "model", "events"],
    "additionalProperties": False,
    "properties": {
        "agents": {"type": "array", "items": _ID, "minItems": 1},
        "ap": {"type": "array", "items": _ID},
        "model": {
            "type": "object",
            "required": ["worlds"],
            "additionalProperties": False,
            "properties": {
                "worlds": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["id"],
                        "additionalProperties": False,
                        "properties": {
                            "id": _ID,
                            "val": {"type": "array", "items": {"type": "string"}},
                        },
                    },
                },
                "relations": {"type": "object", "additionalProperties": _PAIR_LIST},
                "point": {"type": "string"},
            },
        },
        "events": {
            "type": "object",
            "required": ["events"],
            "additionalProperties": False,
            "properties": {
                "events": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["id"],
                        "additionalProperties": False,
                        "properties": {
                            "id": _ID,
                            "pre": {"type": "string"},
                            "post": {"type": "object", "additionalProperties": {"type": "string"}},
                        },
                    },
                },
                "relations": {"type": "object", "additionalProperties": _PAIR_LIST},
            },
        },
        "allowed": {"type": "array", "items": {"type": "string"}},
        "goal": {"type": "string"},
    },
}


@dataclass
class Scenario:
    model: EpistemicModel
    events: EventModel
    allowed: tuple[str, ...]
    goal_text: str | None

    @property
    def agents(self) -> tuple[str, ...]:
        return self.model.agents

    @property
    def ap(self) -> tuple[str, ...]:
        return self.model.ap

    def goal_formula(self) -> fm.Formula | None:
        if self.goal_text is None:
            return None
        goal = fm.parse_goal(self.goal_text, set(self.ap), set(self.agents))
        return goal.body if goal.head == "NOW" else None

    def goal(self) -> fm.GoalFormula | None:
        if self.goal_text is None:
            return None
        return fm.parse_goal(self.goal_text, set(self.ap), set(self.agents))

    def planning_instance(self, goal: fm.Formula | None = None) -> PlanningInstance:
        if goal is None:
            g = self.goal()
            if g is None:
                raise ScenarioError("no goal given (file has none and no --goal flag)")
            if g.head != "NOW":
                raise ScenarioError("planning goals must be plain epistemic formulas")
            goal = g.body
        return PlanningInstance(self.model, self.events, self.allowed, goal)


def loads(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"not valid JSON: {exc}") from None
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ScenarioError(f"schema violation at {path}: {exc.message}") from None

    agents = tuple(doc["agents"])
    ap = tuple(doc["ap"])
    ap_set, agent_set = set(ap), set(agents)
    if len(ap_set) != len(ap):
        raise ScenarioError("duplicate proposition in 'ap'")
    if len(agent_set) != len(agents):
        raise ScenarioError("duplicate agent in 'agents'")

    worlds = tuple(w["id"] for w in doc["model"]["worlds"])
    valuation: dict[str, list[str]] = {p: [] for p in ap}
    for w in doc["model"]["worlds"]:
        for p in w.get("val", ()):
            if p not in ap_set:
                raise ScenarioError(f"world '{w['id']}' uses undeclared proposition '{p}'")
            valuation[p].append(w["id"])
    try:
        model = EpistemicModel(
            worlds,
            agents,
            ap,
            doc["model"].get("relations"),
            valuation,
            doc["model"].get("point"),
        )
    except ModelError as exc:
        raise ScenarioError(str(exc)) from None

    def parse(text: str, where: str) -> fm.Formula:
        try:
            return fm.parse_formula(text, ap_set, agent_set)
        except FormulaError as exc:
            raise ScenarioError(f"{where}: {exc}") from None

    event_ids = tuple(e["id"] for e in doc["events"]["events"])
    pre = {}
    post: dict[str, dict[str, fm.Formula]] = {}
    for e in doc["events"]["events"]:
        if "pre" in e:
            f = parse(e["pre"], f"precondition of '{e['id']}'")
            if not fm.is_propositional(f):
                raise NonPropositionalError(
                    f"non-propositional precondition on event '{e['id']}'"
                )
            pre[e["id"]] = f
        assigns = {}
        for p, text_ in e.get("post", {}).items():
            if p not in ap_set:
                raise ScenarioError(
                    f"postcondition of '{e['id']}' assigns undeclared proposition '{p}'"
                )
            g = parse(text_, f"postcondition of '{e['id']}' for '{p}'")
            if not fm.is_propositional(g):
                raise NonPropositionalError(
                    f"non-propositional postcondition for '{p}' on event '{e['id']}'"
                )
            assigns[p] = g
        post[e["id"]] = assigns
    try:
        events = EventModel(event_ids, agents, ap, doc["events"].get("relations"), pre, post)
    except ModelError as exc:
        raise ScenarioError(str(exc)) from None

    allowed = tuple(doc.get("allowed", event_ids))
    for e in allowed:
        if e not in set(event_ids):
            raise ScenarioError(f"allowed set mentions unknown event '{e}'")
    return Scenario(model, events, allowed, doc.get("goal"))


def load(path: str | Path) -> Scenario:
    p = Path(path)
    if not p.exists():
        raise ScenarioError(f"no such file: {p}")
    return loads(p.read_text())


def dumps(s: Scenario) -> str:
    """Canonical JSON rendering; loads(dumps(s)) reproduces the scenario."""
    doc = {
        "agents": list(s.agents),
        "ap": list(s.ap),
        "model": {
            "worlds": [
                {"id": w, "val": sorted(s.model.val_of(w))} for w in s.model.worlds
            ],
            "relations": {
                a: sorted([list(p) for p in s.model.relations[a]])
                for a in s.agents
            },
            **({"point": s.model.point} if s.model.point else {}),
        },
        "events": {
            "events": [
                {
                    "id": e,
                    "pre": fm.to_text(s.events.pre[e]),
                    "post": {
                        p: fm.to_text(g)
                        for p, g in s.events.post[e].items()
                        if g != fm.Atom(p)
                    },
                }
                for e in s.events.events
            ],
            "relations": {
                a: sorted([list(p) for p in s.events.relations[a]])
                for a in s.agents
            },
        },
        "allowed": list(s.allowed),
        **({"goal": s.goal_text} if s.goal_text else {}),
    }
    return json.dumps(doc, indent=2) + "\n"


def save(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(dumps(s))
