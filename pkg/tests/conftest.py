"""Shared fixtures: the golden two-world scenario, seeded random instance
generators, and brute-force oracles kept deliberately independent of the
automata code paths."""

from __future__ import annotations

import os
import random
from collections import deque

import pytest

from delplan import formula as fm
from delplan.models import EpistemicModel, EventModel, pointed_product


def seed() -> int:
    return int(os.environ.get("DELPLAN_SEED", "20230817"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(seed())


def make_m0() -> EpistemicModel:
    return EpistemicModel(
        ("w1", "w2"),
        ("a",),
        ("p",),
        {"a": [("w1", "w1"), ("w1", "w2"), ("w2", "w1"), ("w2", "w2")]},
        {"p": ["w1"]},
        point="w1",
    )


def make_e0() -> EventModel:
    return EventModel(
        ("e1", "e2"),
        ("a",),
        ("p",),
        {"a": [("e1", "e1"), ("e2", "e2")]},
        pre={"e2": fm.Atom("p")},
        post={"e1": {"p": fm.Top()}},
    )


@pytest.fixture
def m0() -> EpistemicModel:
    return make_m0()


@pytest.fixture
def e0() -> EventModel:
    return make_e0()


# ---------------------------------------------------------------------------
# Random instance generation (small: |W| <= 4, |E| <= 3, |AP| <= 3, 1-2 agents).


def random_propositional(rng: random.Random, ap: tuple[str, ...], depth: int = 2) -> fm.Formula:
    if depth == 0 or rng.random() < 0.4:
        roll = rng.random()
        if roll < 0.1:
            return fm.Top()
        if roll < 0.15:
            return fm.Bot()
        return fm.Atom(rng.choice(ap))
    op = rng.choice(["not", "or", "and", "implies"])
    if op == "not":
        return fm.Not(random_propositional(rng, ap, depth - 1))
    left = random_propositional(rng, ap, depth - 1)
    right = random_propositional(rng, ap, depth - 1)
    return {"or": fm.Or, "and": fm.And, "implies": fm.Implies}[op](left, right)


def random_epistemic(
    rng: random.Random, ap: tuple[str, ...], agents: tuple[str, ...], know_depth: int
) -> fm.Formula:
    if know_depth == 0:
        return random_propositional(rng, ap, depth=2)
    roll = rng.random()
    if roll < 0.45:
        return fm.Know(rng.choice(agents), random_epistemic(rng, ap, agents, know_depth - 1))
    if roll < 0.6:
        return fm.Not(random_epistemic(rng, ap, agents, know_depth))
    if roll < 0.8:
        return fm.Or(
            random_epistemic(rng, ap, agents, know_depth),
            random_epistemic(rng, ap, agents, know_depth - 1),
        )
    return random_epistemic(rng, ap, agents, know_depth - 1)


def random_relation(rng: random.Random, members: tuple[str, ...], density: float = 0.35):
    return [
        (a, b) for a in members for b in members if rng.random() < density
    ]


def random_instance(rng: random.Random) -> tuple[EpistemicModel, EventModel]:
    n_worlds = rng.randint(1, 4)
    n_events = rng.randint(1, 3)
    n_ap = rng.randint(1, 3)
    n_agents = rng.randint(1, 2)
    worlds = tuple(f"w{k}" for k in range(1, n_worlds + 1))
    events = tuple(f"e{k}" for k in range(1, n_events + 1))
    ap = tuple(f"p{k}" for k in range(1, n_ap + 1))
    agents = tuple("ab"[:n_agents])
    relations = {i: random_relation(rng, worlds) for i in agents}
    valuation = {p: [w for w in worlds if rng.random() < 0.5] for p in ap}
    m = EpistemicModel(worlds, agents, ap, relations, valuation, point=worlds[0])
    ev_relations = {i: random_relation(rng, events, density=0.45) for i in agents}
    pre = {e: random_propositional(rng, ap, depth=1) for e in events}
    post = {
        e: {
            p: random_propositional(rng, ap, depth=1)
            for p in ap
            if rng.random() < 0.4  # the rest default to identity
        }
        for e in events
    }
    return m, EventModel(events, agents, ap, ev_relations, pre, post)


# ---------------------------------------------------------------------------
# Brute-force planning oracle: BFS over explicit pointed products.


def oracle_plans(
    m: EpistemicModel,
    ev: EventModel,
    allowed: tuple[str, ...],
    goal: fm.Formula,
    max_len: int,
) -> list[tuple[str, ...]]:
    """All solution plans of length <= max_len, by replaying products."""
    solutions = []
    queue: deque[tuple[tuple[str, ...], EpistemicModel]] = deque([((), m)])
    while queue:
        plan, cur = queue.popleft()
        if cur.check(cur.point, goal):
            solutions.append(plan)
        if len(plan) == max_len:
            continue
        for e in allowed:
            nxt = pointed_product(cur, cur.point, ev, e)
            if nxt is not None:
                queue.append((plan + (e,), nxt))
    solutions.sort(key=lambda p: (len(p), tuple(allowed.index(e) for e in p)))
    return solutions
