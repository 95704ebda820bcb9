"""Automata encoding of the infinite forest of histories.

A history is a world followed by the events executed so far.  For a
propositional event model, which histories exist, which propositions
hold at them, and which histories each agent confuses are all regular,
so the whole forest compresses into:

  * a domain DFA over the mixed world/event alphabet, whose states
    track the current propositional valuation,
  * one valuation DFA per proposition (same skeleton, different
    accepting set), and
  * one transducer per agent, the pointwise accessibility relation
    restricted on both tapes to the domain.

`verify_against_oracle` cross-checks all three against brute-force
iterated update products, level by level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from . import formula as fm
from .automata import (
    Alphabet,
    Dfa,
    Transducer,
    compose,
    dfa_to_dot,
    identity_transducer,
    transducer_to_dot,
    trim_transducer,
)
from .errors import ModelError, NonPropositionalError
from .models import EpistemicModel, EventModel, iterate


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    levels_checked: int
    counterexample: str | None = None

    def __str__(self) -> str:
        if self.ok:
            return f"ok (levels 0..{self.levels_checked})"
        return f"FAIL: {self.counterexample}"


class RegularRepresentation:
    """The triple (domain DFA, relation transducers, valuation DFAs)."""

    def __init__(
        self,
        alphabet: Alphabet,
        domain: Dfa,
        valuations: dict[str, Dfa],
        relations: dict[str, Transducer],
        state_valuation: dict[int, frozenset[str]],
        world_names: tuple[str, ...] = (),
        event_names: tuple[str, ...] = (),
    ):
        self.alphabet = alphabet
        self.world_names = world_names
        self.event_names = event_names
        self.domain = domain
        self.valuations = valuations
        self.relations = relations
        # valuation tracked by each non-initial domain state
        self.state_valuation = state_valuation

    def valuation_dfa(self, p: str) -> Dfa:
        try:
            return self.valuations[p]
        except KeyError:
            raise ModelError(f"unknown proposition '{p}'") from None

    def relation_transducer(self, agent: str) -> Transducer:
        try:
            return self.relations[agent]
        except KeyError:
            raise ModelError(f"unknown agent '{agent}'") from None

    def contains(self, history: tuple[str, ...]) -> bool:
        return self.domain.accepts_names(history)

    def histories_at_level(self, level: int) -> Iterator[tuple[str, ...]]:
        """Histories with `level` events, in declaration-lex order."""
        for word in self.domain.words_of_length(level + 1):
            yield self.alphabet.spell(word)

    @property
    def total_size(self) -> int:
        """Transition counts summed over all component automata."""
        return (
            self.domain.n_transitions
            + sum(d.n_transitions for d in self.valuations.values())
            + sum(t.n_transitions for t in self.relations.values())
        )

    def size_report(self) -> str:
        """Tab-separated table of component sizes."""
        rows = [("component", "states", "transitions")]
        rows.append(("domain", str(self.domain.n_states), str(self.domain.n_transitions)))
        for p, d in self.valuations.items():
            rows.append((f"valuation[{p}]", str(d.n_states), str(d.n_transitions)))
        for i, t in self.relations.items():
            rows.append((f"relation[{i}]", str(t.n_states), str(t.n_transitions)))
        rows.append(("total", "", str(self.total_size)))
        return "\n".join("\t".join(r) for r in rows) + "\n"

    def to_dot(self) -> dict[str, str]:
        out = {"domain": dfa_to_dot(self.domain, "domain")}
        for p, d in self.valuations.items():
            out[f"valuation_{p}"] = dfa_to_dot(d, f"valuation_{p}")
        for i, t in self.relations.items():
            out[f"relation_{i}"] = transducer_to_dot(t, f"relation_{i}")
        return out


def _require_propositional(ev: EventModel) -> None:
    for e in ev.events:
        if not fm.is_propositional(ev.pre[e]):
            raise NonPropositionalError(f"non-propositional precondition on event '{e}'")
        for p, g in ev.post[e].items():
            if not fm.is_propositional(g):
                raise NonPropositionalError(
                    f"non-propositional postcondition for '{p}' on event '{e}'"
                )


def forest_alphabet(m: EpistemicModel, ev: EventModel) -> Alphabet:
    """Worlds then events, both in declaration order."""
    overlap = set(m.worlds) & set(ev.events)
    if overlap:
        raise ModelError(f"world and event share identifier '{sorted(overlap)[0]}'")
    return Alphabet(m.worlds + ev.events)


def build_domain_automaton(
    m: EpistemicModel, ev: EventModel, alphabet: Alphabet | None = None
) -> tuple[Dfa, dict[int, frozenset[str]]]:
    """DFA of all existing histories.

    State 0 is the start; every other state stands for a propositional
    valuation.  A world letter moves to that world's valuation; an event
    letter fires when the current valuation satisfies its precondition
    and rewrites the valuation through the postconditions.  Only
    valuations actually reachable get a state, so the count stays at
    most 2^|AP| + 1.
    """
    _require_propositional(ev)
    alph = alphabet or forest_alphabet(m, ev)
    ap = m.ap
    init = 0
    state_of: dict[frozenset[str], int] = {}
    state_valuation: dict[int, frozenset[str]] = {}
    delta: dict[tuple[int, int], int] = {}

    def state_for(val: frozenset[str]) -> int:
        if val not in state_of:
            state_of[val] = len(state_of) + 1
            state_valuation[state_of[val]] = val
        return state_of[val]

    worklist = []
    for w in m.worlds:
        q = state_for(m.val_of(w))
        delta[(init, alph.id(w))] = q
    worklist = sorted(state_valuation)
    seen = set(worklist)
    while worklist:
        q = worklist.pop(0)
        val = state_valuation[q]
        for e in ev.events:
            if not fm.eval_propositional(ev.pre[e], val):
                continue
            new_val = frozenset(
                p for p in ap if fm.eval_propositional(ev.post[e][p], val)
            )
            q2 = state_for(new_val)
            delta[(q, alph.id(e))] = q2
            if q2 not in seen:
                seen.add(q2)
                worklist.append(q2)
    n_states = len(state_of) + 1
    assert n_states <= 2 ** len(ap) + 1
    accepting = frozenset(range(1, n_states))
    return Dfa(alph, n_states, delta, init, accepting), dict(state_valuation)


def build_valuation_automaton(
    p: str, domain: Dfa, state_valuation: dict[int, frozenset[str]], ap: tuple[str, ...]
) -> Dfa:
    """Same skeleton as the domain DFA; accepts where p is in the tracked valuation."""
    if p not in ap:
        raise ModelError(f"unknown proposition '{p}'")
    accepting = frozenset(q for q, val in state_valuation.items() if p in val)
    return Dfa(domain.alphabet, domain.n_states, domain.delta, domain.initial, accepting)


def build_relation_transducer(
    agent: str, m: EpistemicModel, ev: EventModel, domain: Dfa
) -> Transducer:
    """Pointwise accessibility, sandwiched between two copies of the
    identity-over-domain transducer so both tapes stay inside the forest."""
    if agent not in m.agents:
        raise ModelError(f"unknown agent '{agent}'")
    alph = domain.alphabet
    raw = set()
    for (w, w2) in m.relations[agent]:
        raw.add((0, alph.id(w), alph.id(w2), 0))
    for (e, e2) in ev.relations.get(agent, frozenset()):
        raw.add((0, alph.id(e), alph.id(e2), 0))
    pointwise = Transducer(alph, 1, frozenset(raw), 0, frozenset({0}))
    ident = identity_transducer(domain)
    return trim_transducer(compose(compose(ident, pointwise), ident))


def build_representation(m: EpistemicModel, ev: EventModel) -> RegularRepresentation:
    alph = forest_alphabet(m, ev)
    domain, state_valuation = build_domain_automaton(m, ev, alph)
    valuations = {
        p: build_valuation_automaton(p, domain, state_valuation, m.ap) for p in m.ap
    }
    relations = {i: build_relation_transducer(i, m, ev, domain) for i in m.agents}
    return RegularRepresentation(
        alph, domain, valuations, relations, state_valuation, m.worlds, ev.events
    )


def verify_against_oracle(
    rep: RegularRepresentation, m: EpistemicModel, ev: EventModel, depth: int
) -> VerifyReport:
    """Per level n <= depth, compare against the n-fold update product:
    history existence, per-proposition valuations, and per-agent relation
    pairs must match exactly."""
    level_model = m
    for n in range(depth + 1):
        if n > 0:
            level_model = iterate(level_model, ev, 1)
        oracle_histories = {tuple(w.split(".")) for w in level_model.worlds}
        rep_histories = set(rep.histories_at_level(n))
        if rep_histories != oracle_histories:
            diff = sorted(rep_histories ^ oracle_histories)[0]
            side = "automaton" if diff in rep_histories else "oracle"
            return VerifyReport(
                False, n, f"level {n}: history {'.'.join(diff)} only on {side} side"
            )
        for p in m.ap:
            vd = rep.valuation_dfa(p)
            rep_true = {h for h in rep_histories if vd.accepts_names(h)}
            oracle_true = {
                tuple(w.split(".")) for w in level_model.valuation[p]
            }
            if rep_true != oracle_true:
                diff = sorted(rep_true ^ oracle_true)[0]
                return VerifyReport(
                    False, n, f"level {n}: valuation of '{p}' differs at {'.'.join(diff)}"
                )
        for agent in m.agents:
            t = rep.relation_transducer(agent)
            rep_pairs = {
                (rep.alphabet.spell(u), rep.alphabet.spell(w))
                for (u, w) in t.related_pairs(n + 1)
            }
            oracle_pairs = {
                (tuple(a.split(".")), tuple(b.split(".")))
                for (a, b) in level_model.relations[agent]
            }
            if rep_pairs != oracle_pairs:
                diff = sorted(rep_pairs ^ oracle_pairs)[0]
                return VerifyReport(
                    False,
                    n,
                    f"level {n}: relation of '{agent}' differs at "
                    f"({'.'.join(diff[0])}, {'.'.join(diff[1])})",
                )
    return VerifyReport(True, depth)
