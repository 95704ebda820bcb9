"""Protocol synthesis for goals of shape AG/AF/EF/EG/NOW over epistemic
state formulas, by fixpoint computation on a finite arena.

The arena is the product of the domain automaton with the compiled goal
body, re-rooted at the initial world: its nodes summarize every history
by (current valuation state, goal-body state), and a node is "marked"
when the body holds at every history reaching it.  Safety goals run a
greatest fixpoint, reachability goals a least-fixpoint attractor, and
the result is emitted as a prefix-closed sub-automaton rooted at the
initial world.

Knowledge inside the goal body is always evaluated against the full
forest: deleting protocol branches never changes the marking.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from . import formula as fm
from .automata import DEFAULT_STATE_BUDGET, Dfa, complete, dfa_to_dot
from .errors import DelplanError, ModelError, NonPropositionalError
from .models import EpistemicModel, EventModel
from .satcompile import SatCompiler
from .structure import RegularRepresentation, build_representation


class UnsupportedGoal(DelplanError):
    pass


@dataclass(frozen=True)
class ProtocolAutomaton:
    """Prefix-closed tree of histories rooted at the initial world."""

    dfa: Dfa  # over the full world/event alphabet
    root_world: str
    goal: fm.GoalFormula
    serial: bool

    def words(self, max_depth: int) -> list[tuple[str, ...]]:
        """All protocol histories with at most `max_depth` events."""
        return [self.dfa.alphabet.spell(w) for w in self.dfa.words_up_to(max_depth + 1) if w]

    def to_dot(self) -> str:
        return dfa_to_dot(self.dfa, "protocol")

    def to_json(self, max_depth: int) -> str:
        doc = {
            "root": self.root_world,
            "goal": str(self.goal),
            "serial": self.serial,
            "depth_bound": max_depth,
            "histories": [" ".join(h) for h in self.words(max_depth)],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


@dataclass
class Arena:
    """Finite graph of (domain state, goal-body state) pairs reached from the root."""

    nodes: list[tuple[int, int]]
    index: dict[tuple[int, int], int]
    succ: list[list[tuple[int, int]]]  # node -> [(event letter, node)]
    marked: set[int]
    root: int


def build_arena(
    rep: RegularRepresentation, compiler: SatCompiler, body: fm.Formula, w_init: str
) -> Arena:
    body_dfa, sink = complete(compiler.compile_formula(body))
    dom = rep.domain
    alph = rep.alphabet
    w_letter = alph.id(w_init)
    d0 = dom.delta.get((dom.initial, w_letter))
    if d0 is None:
        raise ModelError(f"initial world '{w_init}' not recognized by the domain")
    b0 = body_dfa.delta[(body_dfa.initial, w_letter)]
    root = (d0, b0)
    index = {root: 0}
    nodes = [root]
    succ: list[list[tuple[int, int]]] = [[]]
    queue = deque([root])
    event_letters = [alph.id(e) for e in rep.event_names]
    while queue:
        node = queue.popleft()
        q = index[node]
        for a in event_letters:
            nd = dom.delta.get((node[0], a))
            if nd is None:
                continue
            nb = body_dfa.delta[(node[1], a)]
            key = (nd, nb)
            if key not in index:
                index[key] = len(index)
                nodes.append(key)
                succ.append([])
                queue.append(key)
            succ[q].append((a, index[key]))
    marked = {i for i, (nd, nb) in enumerate(nodes) if nb in body_dfa.accepting}
    return Arena(nodes, index, succ, marked, 0)


def _attractor(arena: Arena, require_all: bool) -> set[int]:
    """Least fixpoint of states forced (require_all) or able (not) to reach a mark."""
    inside = set(arena.marked)
    changed = True
    while changed:
        changed = False
        for i in range(len(arena.nodes)):
            if i in inside:
                continue
            succs = [j for (_, j) in arena.succ[i]]
            if not succs:
                continue
            ok = all(j in inside for j in succs) if require_all else any(
                j in inside for j in succs
            )
            if ok:
                inside.add(i)
                changed = True
    return inside


def _safety_core(arena: Arena, serial: bool) -> set[int]:
    """Greatest fixpoint inside the marked set; with seriality, repeatedly
    drop members with no successor left in the set."""
    core = set(arena.marked)
    if not serial:
        # without seriality only prefix-closure matters: keep the region of
        # marked nodes reachable from the root through marked nodes
        return core
    changed = True
    while changed:
        changed = False
        for i in list(core):
            if not any(j in core for (_, j) in arena.succ[i]):
                core.discard(i)
                changed = True
    return core


def _reachable_within(arena: Arena, allowed: set[int]) -> set[int]:
    if arena.root not in allowed:
        return set()
    seen = {arena.root}
    queue = deque([arena.root])
    while queue:
        i = queue.popleft()
        for (_, j) in arena.succ[i]:
            if j in allowed and j not in seen:
                seen.add(j)
                queue.append(j)
    return seen


def _emit(
    rep: RegularRepresentation,
    arena: Arena,
    keep_nodes: set[int],
    keep_edges: dict[int, list[tuple[int, int]]],
    w_init: str,
    goal: fm.GoalFormula,
    serial: bool,
) -> ProtocolAutomaton:
    """Package a sub-arena as a prefix-closed DFA: fresh start state, one
    transition on the root world, arena edges as chosen."""
    renumber = {i: k + 1 for k, i in enumerate(sorted(keep_nodes))}
    delta = {(0, rep.alphabet.id(w_init)): renumber[arena.root]}
    for i in sorted(keep_nodes):
        for (a, j) in keep_edges.get(i, ()):
            delta[(renumber[i], a)] = renumber[j]
    accepting = frozenset(renumber.values())
    dfa = Dfa(rep.alphabet, len(keep_nodes) + 1, delta, 0, accepting)
    return ProtocolAutomaton(dfa, w_init, goal, serial)


def _lex_branch_to_mark(arena: Arena, attractor: set[int]) -> list[tuple[int, int, int]]:
    """Shortest path root -> marked inside the attractor, lex-least letters."""
    parent: dict[int, tuple[int, int]] = {}
    seen = {arena.root}
    queue = deque([arena.root])
    target = None
    if arena.root in arena.marked:
        return []
    while queue and target is None:
        i = queue.popleft()
        for (a, j) in arena.succ[i]:
            if j not in attractor or j in seen:
                continue
            seen.add(j)
            parent[j] = (i, a)
            if j in arena.marked:
                target = j
                break
            queue.append(j)
    assert target is not None
    edges = []
    node = target
    while node != arena.root:
        prev, a = parent[node]
        edges.append((prev, a, node))
        node = prev
    edges.reverse()
    return edges


def synthesize_protocol(
    m: EpistemicModel,
    ev: EventModel,
    goal: fm.GoalFormula,
    serial: bool | None = None,
    rep: RegularRepresentation | None = None,
    compiler: SatCompiler | None = None,
    max_states: int = DEFAULT_STATE_BUDGET,
) -> ProtocolAutomaton | None:
    """Fixpoint synthesis on the arena; None when no protocol exists."""
    if m.point is None:
        raise ModelError("protocol synthesis requires a pointed model")
    if not ev.is_propositional:
        raise NonPropositionalError("protocol synthesis requires a propositional event model")
    if goal.head not in fm.TEMPORAL_HEADS:
        raise UnsupportedGoal(f"unsupported goal head '{goal.head}'")
    if serial is None:
        serial = goal.head in ("AG", "EG")
    rep = rep or build_representation(m, ev)
    compiler = compiler or SatCompiler(rep, max_states=max_states)
    w_init = m.point
    arena = build_arena(rep, compiler, goal.body, w_init)
    all_edges = {i: arena.succ[i] for i in range(len(arena.nodes))}

    if goal.head == "NOW":
        if arena.root not in arena.marked:
            return None
        return _emit(rep, arena, {arena.root}, {}, w_init, goal, serial)

    if goal.head == "AG":
        core = _safety_core(arena, serial)
        keep = _reachable_within(arena, core)
        if not keep:
            return None
        edges = {i: [(a, j) for (a, j) in arena.succ[i] if j in keep] for i in keep}
        return _emit(rep, arena, keep, edges, w_init, goal, serial)

    if goal.head == "EF":
        attractor = _attractor(arena, require_all=False)
        if arena.root not in attractor:
            return None
        branch = _lex_branch_to_mark(arena, attractor)
        keep = {arena.root} | {j for (_, _, j) in branch}
        edges: dict[int, list[tuple[int, int]]] = {}
        for (i, a, j) in branch:
            edges.setdefault(i, []).append((a, j))
        return _emit(rep, arena, keep, edges, w_init, goal, serial)

    if goal.head == "AF":
        attractor = _attractor(arena, require_all=True)
        if arena.root not in attractor:
            return None
        # marked nodes become leaves: every maximal branch ends in a mark
        keep = set()
        queue = deque([arena.root])
        keep.add(arena.root)
        edges = {}
        while queue:
            i = queue.popleft()
            if i in arena.marked:
                continue
            edges[i] = list(arena.succ[i])
            for (_, j) in arena.succ[i]:
                if j not in keep:
                    keep.add(j)
                    queue.append(j)
        return _emit(rep, arena, keep, edges, w_init, goal, serial)

    # EG: greatest fixpoint of marked-with-a-marked-successor, then follow
    # the lex-least surviving edge forever (a lasso in the arena)
    core = set(arena.marked)
    changed = True
    while changed:
        changed = False
        for i in list(core):
            if not any(j in core for (_, j) in arena.succ[i]):
                core.discard(i)
                changed = True
    if arena.root not in core:
        return None
    keep = {arena.root}
    edges = {}
    node = arena.root
    while node not in edges:
        a, nxt = min((a, j) for (a, j) in arena.succ[node] if j in core)
        edges[node] = [(a, nxt)]
        keep.add(nxt)
        node = nxt
    return _emit(rep, arena, keep, edges, w_init, goal, serial)


def check_protocol(
    pa: ProtocolAutomaton,
    goal: fm.GoalFormula,
    rep: RegularRepresentation,
    compiler: SatCompiler | None = None,
    depth: int = 5,
) -> bool:
    """Independent verification on the depth-`depth` truncation of the tree.

    Structural requirements (prefix-closure, domain inclusion, single root)
    raise on violation; the returned boolean is the goal check, sound for
    AG/EG within the horizon and exact for EF/AF when the witness depth
    fits inside it.
    """
    compiler = compiler or SatCompiler(rep)
    histories = pa.words(depth)
    if not histories:
        raise ModelError("protocol is empty")
    nodes = set(histories)
    for h in histories:
        if h[0] != pa.root_world:
            raise ModelError(f"history {' '.join(h)} not rooted at {pa.root_world}")
        if len(h) > 1 and h[:-1] not in nodes:
            raise ModelError(f"protocol is not prefix-closed at {' '.join(h)}")
        if not rep.contains(h):
            raise ModelError(f"history {' '.join(h)} outside the domain")

    sat = {h: compiler.holds_at(goal.body, h) for h in histories}
    children: dict[tuple[str, ...], list[tuple[str, ...]]] = {h: [] for h in histories}
    for h in histories:
        if len(h) > 1:
            children[h[:-1]].append(h)
    root = (pa.root_world,)

    if goal.head == "NOW":
        return sat[root]
    if goal.head == "AG":
        if pa.serial:
            for h in histories:
                if len(h) <= depth and not children[h]:
                    return False
        return all(sat.values())
    if goal.head == "EF":
        return any(sat.values())
    if goal.head == "AF":
        # every maximal branch within the truncation must hit the body
        def branch_ok(h: tuple[str, ...], seen_mark: bool) -> bool:
            seen_mark = seen_mark or sat[h]
            if not children[h]:
                return seen_mark
            return all(branch_ok(c, seen_mark) for c in children[h])

        return branch_ok(root, False)
    if goal.head == "EG":
        def some_branch(h: tuple[str, ...]) -> bool:
            if not sat[h]:
                return False
            if len(h) > depth or not children[h]:
                # horizon reached (or leaf): satisfied so far
                return len(h) > depth or not pa.serial
            return any(some_branch(c) for c in children[h])

        return some_branch(root)
    raise UnsupportedGoal(f"unsupported goal head '{goal.head}'")
