"""Plan-set synthesis: a DFA over event letters recognizing every solution plan.

The compiled goal automaton accepts histories; re-rooting it past the
initial world letter and keeping only allowed-event transitions turns
it into an automaton over plans.  The empty plan is accepted exactly
when the goal already holds at the initial world.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import formula as fm
from .automata import (
    DEFAULT_STATE_BUDGET,
    Alphabet,
    Dfa,
    dfa_to_dot,
    empty_dfa,
    is_empty,
    minimize,
    shortest_accepted,
    trim,
)
from .errors import ModelError, NonPropositionalError
from .models import EpistemicModel, EventModel
from .satcompile import SatCompiler
from .structure import RegularRepresentation, build_representation


@dataclass(frozen=True)
class PlanningInstance:
    model: EpistemicModel
    events: EventModel
    allowed: tuple[str, ...]
    goal: fm.Formula

    def __post_init__(self) -> None:
        if self.model.point is None:
            raise ModelError("planning requires a pointed model")
        if not self.events.is_propositional:
            raise NonPropositionalError("planning requires a propositional event model")
        unknown = set(self.allowed) - set(self.events.events)
        if unknown:
            raise ModelError(f"allowed set mentions unknown event '{sorted(unknown)[0]}'")

    @property
    def size(self) -> int:
        return (
            self.model.size
            + self.events.size
            + len(self.allowed)
            + fm.size(self.goal)
            + len(self.model.ap)
        )

    def digest(self) -> str:
        payload = {
            "worlds": self.model.worlds,
            "point": self.model.point,
            "relations": {a: sorted(r) for a, r in self.model.relations.items()},
            "valuation": {p: sorted(v) for p, v in self.model.valuation.items()},
            "events": self.events.events,
            "event_relations": {a: sorted(r) for a, r in self.events.relations.items()},
            "pre": {e: fm.to_text(f) for e, f in self.events.pre.items()},
            "post": {
                e: {p: fm.to_text(g) for p, g in ps.items()}
                for e, ps in self.events.post.items()
            },
            "allowed": self.allowed,
            "goal": fm.to_text(self.goal),
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True)
class PlanAutomaton:
    dfa: Dfa  # over the event alphabet
    instance_digest: str
    max_states: int

    def accepts(self, plan: tuple[str, ...]) -> bool:
        return self.dfa.accepts_names(plan)

    def to_dot(self) -> str:
        return dfa_to_dot(self.dfa, "plans")

    def to_json(self) -> str:
        """Transition table as canonical JSON."""
        alph = self.dfa.alphabet
        doc = {
            "alphabet": list(alph.names),
            "states": self.dfa.n_states,
            "initial": self.dfa.initial,
            "accepting": sorted(self.dfa.accepting),
            "transitions": [
                [q, alph.name(a), self.dfa.delta[(q, a)]]
                for q in range(self.dfa.n_states)
                for a in alph.letters()
                if (q, a) in self.dfa.delta
            ],
            "instance": self.instance_digest,
            "max_states": self.max_states,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def synthesize_plans(
    inst: PlanningInstance,
    rep: RegularRepresentation | None = None,
    compiler: SatCompiler | None = None,
    max_states: int = DEFAULT_STATE_BUDGET,
) -> PlanAutomaton:
    rep = rep or build_representation(inst.model, inst.events)
    compiler = compiler or SatCompiler(rep, max_states=max_states)
    goal_dfa = compiler.compile_formula(inst.goal)
    event_alph = Alphabet(inst.events.events)
    allowed = set(inst.allowed)

    root = goal_dfa.delta.get((goal_dfa.initial, rep.alphabet.id(inst.model.point)))
    if root is None:
        # the initial world leads to no goal-satisfying history at all
        return PlanAutomaton(empty_dfa(event_alph), inst.digest(), max_states)

    delta = {
        (q, event_alph.id(rep.alphabet.name(a))): nxt
        for (q, a), nxt in goal_dfa.delta.items()
        if rep.alphabet.name(a) in allowed
    }
    rerooted = Dfa(event_alph, goal_dfa.n_states, delta, root, goal_dfa.accepting)
    return PlanAutomaton(minimize(trim(rerooted)), inst.digest(), max_states)


def decide(inst: PlanningInstance, **kwargs) -> bool:
    return not is_empty(synthesize_plans(inst, **kwargs).dfa)


def shortest_plan(inst: PlanningInstance, **kwargs) -> tuple[str, ...] | None:
    """Shortest solution plan, ties broken by event declaration order."""
    pa = synthesize_plans(inst, **kwargs)
    word = shortest_accepted(pa.dfa)
    if word is None:
        return None
    return pa.dfa.alphabet.spell(word)


def enumerate_plans(
    inst_or_pa: PlanningInstance | PlanAutomaton,
    max_len: int,
    max_count: int,
    **kwargs,
) -> tuple[list[tuple[str, ...]], bool]:
    """Plans ordered by (length, declaration-lex); second value flags truncation."""
    if max_len < 0 or max_count <= 0:
        raise ValueError("bounds must be positive")
    pa = (
        inst_or_pa
        if isinstance(inst_or_pa, PlanAutomaton)
        else synthesize_plans(inst_or_pa, **kwargs)
    )
    plans: list[tuple[str, ...]] = []
    truncated = False
    for word in pa.dfa.words_up_to(max_len):
        if len(plans) >= max_count:
            truncated = True
            break
        plans.append(pa.dfa.alphabet.spell(word))
    return plans, truncated
