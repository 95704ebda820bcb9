"""Epistemic models, event models, model checking and the update product.

Product worlds get canonical dotted identifiers "w.e1.e2..." so that a
world of the n-fold product is literally the history that produced it.
This module is the brute-force ground truth the automata constructions
are tested against.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from . import formula as fm
from .errors import BudgetExceeded, ModelError

Pair = tuple[str, str]

DEFAULT_WORLD_BUDGET = 10**6


def _normalize_relations(
    agents: Sequence[str],
    relations: Mapping[str, Iterable[Pair]] | None,
    members: Sequence[str],
    what: str,
) -> dict[str, frozenset[Pair]]:
    out: dict[str, frozenset[Pair]] = {}
    relations = relations or {}
    for agent in relations:
        if agent not in agents:
            raise ModelError(f"relation for undeclared agent '{agent}'")
    member_set = set(members)
    for agent in agents:
        pairs = frozenset(tuple(p) for p in relations.get(agent, ()))
        for a, b in pairs:
            if a not in member_set or b not in member_set:
                bad = a if a not in member_set else b
                raise ModelError(f"relation for agent '{agent}' mentions unknown {what} '{bad}'")
        out[agent] = pairs
    return out


class EpistemicModel:
    """Finite Kripke structure with one accessibility relation per agent."""

    def __init__(
        self,
        worlds: Sequence[str],
        agents: Sequence[str],
        ap: Sequence[str],
        relations: Mapping[str, Iterable[Pair]] | None = None,
        valuation: Mapping[str, Iterable[str]] | None = None,
        point: str | None = None,
    ):
        if len(set(worlds)) != len(worlds):
            raise ModelError("duplicate world identifiers")
        self.worlds = tuple(worlds)
        self.agents = tuple(agents)
        self.ap = tuple(ap)
        self.relations = _normalize_relations(self.agents, relations, self.worlds, "world")
        val: dict[str, frozenset[str]] = {}
        valuation = valuation or {}
        for p in valuation:
            if p not in self.ap:
                raise ModelError(f"valuation for undeclared proposition '{p}'")
        world_set = set(self.worlds)
        for p in self.ap:
            ws = frozenset(valuation.get(p, ()))
            if not ws <= world_set:
                bad = sorted(ws - world_set)[0]
                raise ModelError(f"valuation of '{p}' mentions unknown world '{bad}'")
            val[p] = ws
        self.valuation = val
        if point is not None and point not in world_set:
            raise ModelError(f"point '{point}' is not a world")
        self.point = point

    def val_of(self, w: str) -> frozenset[str]:
        """Set of propositions true at world w."""
        if w not in set(self.worlds):
            raise ModelError(f"unknown world '{w}'")
        return frozenset(p for p in self.ap if w in self.valuation[p])

    def successors(self, agent: str, w: str) -> list[str]:
        if agent not in self.relations:
            raise ModelError(f"unknown agent '{agent}'")
        rel = self.relations[agent]
        return [w2 for w2 in self.worlds if (w, w2) in rel]

    def check(self, w: str, f: fm.Formula) -> bool:
        """Kripke semantics; Know is a universal over accessibility successors."""
        if w not in set(self.worlds):
            raise ModelError(f"unknown world '{w}'")
        return self._check(w, f)

    def _check(self, w: str, f: fm.Formula) -> bool:
        if isinstance(f, fm.Top):
            return True
        if isinstance(f, fm.Bot):
            return False
        if isinstance(f, fm.Atom):
            if f.name not in self.valuation:
                raise ModelError(f"unknown proposition '{f.name}'")
            return w in self.valuation[f.name]
        if isinstance(f, fm.Not):
            return not self._check(w, f.sub)
        if isinstance(f, fm.Or):
            return self._check(w, f.left) or self._check(w, f.right)
        if isinstance(f, fm.And):
            return self._check(w, f.left) and self._check(w, f.right)
        if isinstance(f, fm.Implies):
            return (not self._check(w, f.left)) or self._check(w, f.right)
        if isinstance(f, fm.Know):
            return all(self._check(w2, f.sub) for w2 in self.successors(f.agent, w))
        raise TypeError(f"not a formula node: {f!r}")

    @property
    def size(self) -> int:
        """Total number of accessibility edges."""
        return sum(len(r) for r in self.relations.values())


class EventModel:
    """Events with per-agent relations and pre/postcondition formulas.

    Postconditions default to the identity: post(e)(p) = p for every
    proposition not explicitly assigned.
    """

    def __init__(
        self,
        events: Sequence[str],
        agents: Sequence[str],
        ap: Sequence[str],
        relations: Mapping[str, Iterable[Pair]] | None = None,
        pre: Mapping[str, fm.Formula] | None = None,
        post: Mapping[str, Mapping[str, fm.Formula]] | None = None,
    ):
        if len(set(events)) != len(events):
            raise ModelError("duplicate event identifiers")
        self.events = tuple(events)
        self.agents = tuple(agents)
        self.ap = tuple(ap)
        self.relations = _normalize_relations(self.agents, relations, self.events, "event")
        pre = dict(pre or {})
        post = {e: dict(ps) for e, ps in (post or {}).items()}
        for e in pre:
            if e not in self.events:
                raise ModelError(f"precondition for unknown event '{e}'")
        for e in post:
            if e not in self.events:
                raise ModelError(f"postcondition for unknown event '{e}'")
            for p in post[e]:
                if p not in self.ap:
                    raise ModelError(f"postcondition of '{e}' assigns unknown proposition '{p}'")
        self.pre: dict[str, fm.Formula] = {e: pre.get(e, fm.Top()) for e in self.events}
        self.post: dict[str, dict[str, fm.Formula]] = {
            e: {p: post.get(e, {}).get(p, fm.Atom(p)) for p in self.ap} for e in self.events
        }

    @property
    def is_propositional(self) -> bool:
        return all(
            fm.is_propositional(self.pre[e])
            and all(fm.is_propositional(g) for g in self.post[e].values())
            for e in self.events
        )

    @property
    def size(self) -> int:
        """Edges plus the sizes of all pre/postcondition formulas."""
        edges = sum(len(r) for r in self.relations.values())
        formulas = sum(
            fm.size(self.pre[e]) + sum(fm.size(g) for g in self.post[e].values())
            for e in self.events
        )
        return edges + formulas


def product(m: EpistemicModel, ev: EventModel) -> EpistemicModel:
    """Update product: keep (w, e) when w satisfies pre(e); relate pointwise;
    re-evaluate each proposition through post(e)."""
    new_worlds = []
    origin: dict[str, tuple[str, str]] = {}
    for w in m.worlds:
        for e in ev.events:
            if m.check(w, ev.pre[e]):
                we = f"{w}.{e}"
                new_worlds.append(we)
                origin[we] = (w, e)
    relations = {
        agent: [
            (u, v)
            for u in new_worlds
            for v in new_worlds
            if (origin[u][0], origin[v][0]) in m.relations[agent]
            and (origin[u][1], origin[v][1]) in ev.relations[agent]
        ]
        for agent in m.agents
    }
    valuation = {
        p: [we for we in new_worlds if m.check(origin[we][0], ev.post[origin[we][1]][p])]
        for p in m.ap
    }
    return EpistemicModel(new_worlds, m.agents, m.ap, relations, valuation)


def pointed_product(
    m: EpistemicModel, w: str, ev: EventModel, e: str
) -> EpistemicModel | None:
    """Pointed update product, or None when w fails pre(e)."""
    if w not in set(m.worlds):
        raise ModelError(f"unknown world '{w}'")
    if e not in set(ev.events):
        raise ModelError(f"unknown event '{e}'")
    if not m.check(w, ev.pre[e]):
        return None
    prod = product(m, ev)
    prod.point = f"{w}.{e}"
    return prod


def iterate(
    m: EpistemicModel, ev: EventModel, n: int, max_worlds: int = DEFAULT_WORLD_BUDGET
) -> EpistemicModel:
    """n-fold update product; worlds are dotted histories of length n+1."""
    cur = m
    for level in range(1, n + 1):
        cur = product(cur, ev)
        if len(cur.worlds) > max_worlds:
            raise BudgetExceeded(
                f"{len(cur.worlds)} worlds exceeds budget {max_worlds}",
                where=f"iterate level {level}",
            )
    return cur


def history_of(world_id: str) -> tuple[str, ...]:
    """Split a dotted product-world identifier into its history letters."""
    return tuple(world_id.split("."))
