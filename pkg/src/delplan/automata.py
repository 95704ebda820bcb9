"""Finite automata and letter-synchronous transducers.

Letters are interned small integers; an `Alphabet` maps them to the
world/event names they stand for, in declaration order.  Declaration
order doubles as the lexicographic order used everywhere ties must be
broken (shortest witnesses, canonical state numbering, DOT output).

Transition functions are partial.  Completion with an explicit sink
happens only inside complementation; every public operation returns a
trimmed automaton.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import BudgetExceeded, ModelError

Word = tuple[int, ...]

DEFAULT_STATE_BUDGET = 10**6


class Alphabet:
    """Immutable name <-> letter-id table; order is declaration order."""

    def __init__(self, names: Iterable[str]):
        self._names = tuple(names)
        self._index = {n: i for i, n in enumerate(self._names)}
        if len(self._index) != len(self._names):
            raise ModelError("duplicate letter names in alphabet")

    def __len__(self) -> int:
        return len(self._names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self._names == other._names

    def __hash__(self) -> int:
        return hash(self._names)

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    def id(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ModelError(f"unknown letter '{name}'") from None

    def name(self, letter: int) -> str:
        return self._names[letter]

    def word(self, names: Iterable[str]) -> Word:
        return tuple(self.id(n) for n in names)

    def spell(self, word: Word) -> tuple[str, ...]:
        return tuple(self._names[a] for a in word)

    def letters(self) -> range:
        return range(len(self._names))


def _check_same_alphabet(*items) -> Alphabet:
    alph = items[0].alphabet
    for it in items[1:]:
        if it.alphabet != alph:
            raise ModelError("alphabet mismatch between automata")
    return alph


@dataclass(frozen=True)
class Dfa:
    """Deterministic automaton with a partial transition function."""

    alphabet: Alphabet
    n_states: int
    delta: dict[tuple[int, int], int]
    initial: int
    accepting: frozenset[int]

    def step(self, state: int, letter: int) -> int | None:
        return self.delta.get((state, letter))

    def run(self, word: Word) -> int | None:
        state: int | None = self.initial
        for a in word:
            state = self.delta.get((state, a))
            if state is None:
                return None
        return state

    def accepts(self, word: Word) -> bool:
        state = self.run(word)
        return state is not None and state in self.accepting

    def accepts_names(self, names: Iterable[str]) -> bool:
        return self.accepts(self.alphabet.word(names))

    def successors(self, state: int) -> Iterator[tuple[int, int]]:
        for a in self.alphabet.letters():
            nxt = self.delta.get((state, a))
            if nxt is not None:
                yield a, nxt

    def words_of_length(self, length: int) -> Iterator[Word]:
        """Accepted words of exactly `length`, in lexicographic order."""
        def rec(state: int, prefix: list[int]) -> Iterator[Word]:
            if len(prefix) == length:
                if state in self.accepting:
                    yield tuple(prefix)
                return
            for a, nxt in self.successors(state):
                prefix.append(a)
                yield from rec(nxt, prefix)
                prefix.pop()

        yield from rec(self.initial, [])

    def words_up_to(self, max_length: int) -> Iterator[Word]:
        """Accepted words ordered by (length, lex)."""
        for length in range(max_length + 1):
            yield from self.words_of_length(length)

    @property
    def n_transitions(self) -> int:
        return len(self.delta)


@dataclass(frozen=True)
class Nfa:
    alphabet: Alphabet
    n_states: int
    delta: dict[tuple[int, int], frozenset[int]]
    initials: frozenset[int]
    accepting: frozenset[int]

    def accepts(self, word: Word) -> bool:
        current = set(self.initials)
        for a in word:
            current = {q2 for q in current for q2 in self.delta.get((q, a), ())}
            if not current:
                return False
        return bool(current & self.accepting)


@dataclass(frozen=True)
class Transducer:
    """Two-tape automaton consuming one letter per tape per transition,
    so it relates only equal-length words."""

    alphabet: Alphabet
    n_states: int
    transitions: frozenset[tuple[int, int, int, int]]  # (state, in, out, state')
    initial: int
    accepting: frozenset[int]

    def relates(self, u: Word, w: Word) -> bool:
        if len(u) != len(w):
            return False
        current = {self.initial}
        for a, b in zip(u, w):
            current = {q2 for (q, x, y, q2) in self.transitions if q in current and x == a and y == b}
            if not current:
                return False
        return bool(current & self.accepting)

    def related_pairs(self, length: int) -> set[tuple[Word, Word]]:
        """All related pairs of words of exactly `length` (lazy subset walk,
        so cost is proportional to the number of distinct related prefixes)."""
        frontier: dict[tuple[Word, Word], frozenset[int]] = {
            ((), ()): frozenset({self.initial})
        }
        for _ in range(length):
            nxt: dict[tuple[Word, Word], set[int]] = {}
            for (u, w), states in frontier.items():
                for (q, a, b, q2) in self.transitions:
                    if q in states:
                        nxt.setdefault((u + (a,), w + (b,)), set()).add(q2)
            frontier = {k: frozenset(v) for k, v in nxt.items()}
        return {pair for pair, states in frontier.items() if states & self.accepting}

    @property
    def n_transitions(self) -> int:
        return len(self.transitions)


# ---------------------------------------------------------------------------
# Constructions on DFAs.


def empty_dfa(alphabet: Alphabet) -> Dfa:
    return Dfa(alphabet, 1, {}, 0, frozenset())


def trim(d: Dfa) -> Dfa:
    """Restrict to states both reachable and co-accessible, renumbering
    canonically by BFS in letter order."""
    reachable = {d.initial}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        for _, nxt in d.successors(q):
            if nxt not in reachable:
                reachable.add(nxt)
                queue.append(nxt)
    # backward pass
    rev: dict[int, set[int]] = {}
    for (q, _), nxt in d.delta.items():
        rev.setdefault(nxt, set()).add(q)
    alive = set(d.accepting) & reachable
    queue = deque(alive)
    while queue:
        q = queue.popleft()
        for prev in rev.get(q, ()):
            if prev in reachable and prev not in alive:
                alive.add(prev)
                queue.append(prev)
    if d.initial not in alive:
        return empty_dfa(d.alphabet)
    order = {d.initial: 0}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        for a in d.alphabet.letters():
            nxt = d.delta.get((q, a))
            if nxt in alive and nxt not in order:
                order[nxt] = len(order)
                queue.append(nxt)
    delta = {
        (order[q], a): order[nxt]
        for (q, a), nxt in d.delta.items()
        if q in order and nxt in order
    }
    accepting = frozenset(order[q] for q in d.accepting if q in order)
    return Dfa(d.alphabet, len(order), delta, 0, accepting)


def complete(d: Dfa) -> tuple[Dfa, int]:
    """Total-transition version of d; returns (dfa, sink_state)."""
    sink = d.n_states
    delta = dict(d.delta)
    for q in range(d.n_states + 1):
        for a in d.alphabet.letters():
            delta.setdefault((q, a), sink)
    return Dfa(d.alphabet, d.n_states + 1, delta, d.initial, d.accepting), sink


def determinize(n: Nfa, max_states: int = DEFAULT_STATE_BUDGET) -> Dfa:
    """Subset construction, materializing only reachable subset states."""
    alph = n.alphabet
    initial = tuple(sorted(n.initials))
    index: dict[tuple[int, ...], int] = {initial: 0}
    delta: dict[tuple[int, int], int] = {}
    accepting: set[int] = set()
    queue = deque([initial])
    while queue:
        subset = queue.popleft()
        q = index[subset]
        if set(subset) & n.accepting:
            accepting.add(q)
        for a in alph.letters():
            nxt = set()
            for s in subset:
                nxt |= n.delta.get((s, a), frozenset())
            if not nxt:
                continue
            key = tuple(sorted(nxt))
            if key not in index:
                if len(index) >= max_states:
                    raise BudgetExceeded(
                        f"subset construction exceeded {max_states} states",
                        where="determinize",
                    )
                index[key] = len(index)
                queue.append(key)
            delta[(q, a)] = index[key]
    return Dfa(alph, len(index), delta, 0, frozenset(accepting))


def dfa_to_nfa(d: Dfa) -> Nfa:
    delta = {(q, a): frozenset({nxt}) for (q, a), nxt in d.delta.items()}
    return Nfa(d.alphabet, d.n_states, delta, frozenset({d.initial}), d.accepting)


def intersect(a: Dfa, b: Dfa) -> Dfa:
    """Product construction on the partial transition functions."""
    alph = _check_same_alphabet(a, b)
    index: dict[tuple[int, int], int] = {(a.initial, b.initial): 0}
    delta: dict[tuple[int, int], int] = {}
    accepting: set[int] = set()
    queue = deque([(a.initial, b.initial)])
    while queue:
        pair = queue.popleft()
        q = index[pair]
        if pair[0] in a.accepting and pair[1] in b.accepting:
            accepting.add(q)
        for letter in alph.letters():
            na = a.delta.get((pair[0], letter))
            nb = b.delta.get((pair[1], letter))
            if na is None or nb is None:
                continue
            key = (na, nb)
            if key not in index:
                index[key] = len(index)
                queue.append(key)
            delta[(q, letter)] = index[key]
    return trim(Dfa(alph, len(index), delta, 0, frozenset(accepting)))


def union(a: Dfa, b: Dfa) -> Dfa:
    alph = _check_same_alphabet(a, b)
    ca, _ = complete(a)
    cb, _ = complete(b)
    index: dict[tuple[int, int], int] = {(ca.initial, cb.initial): 0}
    delta: dict[tuple[int, int], int] = {}
    accepting: set[int] = set()
    queue = deque([(ca.initial, cb.initial)])
    while queue:
        pair = queue.popleft()
        q = index[pair]
        if pair[0] in ca.accepting or pair[1] in cb.accepting:
            accepting.add(q)
        for letter in alph.letters():
            key = (ca.delta[(pair[0], letter)], cb.delta[(pair[1], letter)])
            if key not in index:
                index[key] = len(index)
                queue.append(key)
            delta[(q, letter)] = index[key]
    return trim(Dfa(alph, len(index), delta, 0, frozenset(accepting)))


def complement_within(d: Dfa, dom: Dfa) -> Dfa:
    """L(dom) \\ L(d): complete d with a sink, flip acceptance, intersect."""
    _check_same_alphabet(d, dom)
    cd, _ = complete(d)
    flipped = Dfa(
        cd.alphabet,
        cd.n_states,
        cd.delta,
        cd.initial,
        frozenset(range(cd.n_states)) - cd.accepting,
    )
    return intersect(flipped, dom)


def is_empty(d: Dfa, stats: dict | None = None) -> bool:
    """No accepting state reachable.  Visits each state and transition at
    most once; `stats['ops']` records the work actually done."""
    ops = 0
    seen = {d.initial}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        ops += 1
        if q in d.accepting:
            if stats is not None:
                stats["ops"] = ops
            return False
        for _, nxt in d.successors(q):
            ops += 1
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    if stats is not None:
        stats["ops"] = ops
    return True


def shortest_accepted(d: Dfa) -> Word | None:
    """BFS witness; ties broken by letter (declaration) order."""
    if d.initial in d.accepting:
        return ()
    seen = {d.initial}
    queue: deque[tuple[int, Word]] = deque([(d.initial, ())])
    while queue:
        q, word = queue.popleft()
        for a, nxt in d.successors(q):
            if nxt in seen:
                continue
            if nxt in d.accepting:
                return word + (a,)
            seen.add(nxt)
            queue.append((nxt, word + (a,)))
    return None


def minimize(d: Dfa) -> Dfa:
    """Hopcroft partition refinement over the trimmed, completed automaton."""
    d = trim(d)
    if not d.accepting:
        return d
    cd, sink = complete(d)
    n = cd.n_states
    rev: dict[tuple[int, int], list[int]] = {}
    for (q, a), nxt in cd.delta.items():
        rev.setdefault((nxt, a), []).append(q)

    accepting = set(cd.accepting)
    partition: list[set[int]] = [accepting, set(range(n)) - accepting]
    partition = [blk for blk in partition if blk]
    block_of = {}
    for i, blk in enumerate(partition):
        for q in blk:
            block_of[q] = i
    work = deque(range(len(partition)))
    in_work = set(work)
    while work:
        splitter = work.popleft()
        in_work.discard(splitter)
        splitter_states = set(partition[splitter])
        for a in cd.alphabet.letters():
            x = {q for s in splitter_states for q in rev.get((s, a), ())}
            if not x:
                continue
            touched = {block_of[q] for q in x}
            for bi in touched:
                blk = partition[bi]
                inside = blk & x
                outside = blk - x
                if not inside or not outside:
                    continue
                partition[bi] = inside
                partition.append(outside)
                new_index = len(partition) - 1
                for q in outside:
                    block_of[q] = new_index
                if bi in in_work:
                    work.append(new_index)
                    in_work.add(new_index)
                else:
                    smaller = new_index if len(outside) <= len(inside) else bi
                    work.append(smaller)
                    in_work.add(smaller)

    sink_block = block_of[sink]
    init_block = block_of[cd.initial]
    if init_block == sink_block:
        return empty_dfa(d.alphabet)
    # canonical renumbering by BFS in letter order, skipping the sink class
    order = {init_block: 0}
    queue = deque([init_block])
    delta: dict[tuple[int, int], int] = {}
    while queue:
        blk = queue.popleft()
        rep = next(iter(partition[blk]))
        for a in cd.alphabet.letters():
            nxt_blk = block_of[cd.delta[(rep, a)]]
            if nxt_blk == sink_block:
                continue
            if nxt_blk not in order:
                order[nxt_blk] = len(order)
                queue.append(nxt_blk)
            delta[(order[blk], a)] = order[nxt_blk]
    accepting_blocks = frozenset(
        order[block_of[q]] for q in cd.accepting if block_of[q] in order
    )
    return Dfa(d.alphabet, len(order), delta, 0, accepting_blocks)


# ---------------------------------------------------------------------------
# Constructions on transducers.


def identity_transducer(d: Dfa) -> Transducer:
    """Identity relation over L(d), obtained by pairing each transition with itself."""
    transitions = frozenset((q, a, a, nxt) for (q, a), nxt in d.delta.items())
    return Transducer(d.alphabet, d.n_states, transitions, d.initial, d.accepting)


def compose(t1: Transducer, t2: Transducer) -> Transducer:
    """Relational composition: pairs (u, w) with a middle word shared by both."""
    alph = _check_same_alphabet(t1, t2)
    # t2 indexed by its input letter, which must equal t1's output letter
    by_mid: dict[int, list[tuple[int, int, int]]] = {}
    for (q, b, c, q2) in t2.transitions:
        by_mid.setdefault(b, []).append((q, c, q2))
    index: dict[tuple[int, int], int] = {(t1.initial, t2.initial): 0}
    transitions: set[tuple[int, int, int, int]] = set()
    queue = deque([(t1.initial, t2.initial)])
    while queue:
        pair = queue.popleft()
        q = index[pair]
        for (p1, a, b, n1) in t1.transitions:
            if p1 != pair[0]:
                continue
            for (p2, c, n2) in by_mid.get(b, ()):
                if p2 != pair[1]:
                    continue
                key = (n1, n2)
                if key not in index:
                    index[key] = len(index)
                    queue.append(key)
                transitions.add((q, a, c, index[key]))
    accepting = frozenset(
        i for (s1, s2), i in index.items() if s1 in t1.accepting and s2 in t2.accepting
    )
    return trim_transducer(
        Transducer(alph, len(index), frozenset(transitions), 0, accepting)
    )


def trim_transducer(t: Transducer) -> Transducer:
    """Keep states both reachable and co-accessible."""
    fwd: dict[int, set[int]] = {}
    bwd: dict[int, set[int]] = {}
    for (q, _, _, q2) in t.transitions:
        fwd.setdefault(q, set()).add(q2)
        bwd.setdefault(q2, set()).add(q)
    reachable = {t.initial}
    queue = deque([t.initial])
    while queue:
        q = queue.popleft()
        for nxt in fwd.get(q, ()):
            if nxt not in reachable:
                reachable.add(nxt)
                queue.append(nxt)
    alive = set(t.accepting) & reachable
    queue = deque(alive)
    while queue:
        q = queue.popleft()
        for prev in bwd.get(q, ()):
            if prev in reachable and prev not in alive:
                alive.add(prev)
                queue.append(prev)
    if t.initial not in alive:
        return Transducer(t.alphabet, 1, frozenset(), 0, frozenset())
    order = {t.initial: 0}
    for q in sorted(alive):
        if q not in order:
            order[q] = len(order)
    transitions = frozenset(
        (order[q], a, b, order[q2])
        for (q, a, b, q2) in t.transitions
        if q in order and q2 in order
    )
    accepting = frozenset(order[q] for q in t.accepting if q in order)
    return Transducer(t.alphabet, len(order), transitions, 0, accepting)


def preimage(t: Transducer, d: Dfa) -> Nfa:
    """NFA for {u | exists w: (u, w) in [t] and w in L(d)}: run t and d in
    lockstep on the second tape, project to the first."""
    _check_same_alphabet(t, d)
    index: dict[tuple[int, int], int] = {(t.initial, d.initial): 0}
    delta: dict[tuple[int, int], set[int]] = {}
    queue = deque([(t.initial, d.initial)])
    while queue:
        pair = queue.popleft()
        q = index[pair]
        for (p, a, b, p2) in t.transitions:
            if p != pair[0]:
                continue
            nd = d.delta.get((pair[1], b))
            if nd is None:
                continue
            key = (p2, nd)
            if key not in index:
                index[key] = len(index)
                queue.append(key)
            delta.setdefault((q, a), set()).add(index[key])
    accepting = frozenset(
        i for (s1, s2), i in index.items() if s1 in t.accepting and s2 in d.accepting
    )
    return Nfa(
        d.alphabet,
        len(index),
        {k: frozenset(v) for k, v in delta.items()},
        frozenset({0}),
        accepting,
    )


# ---------------------------------------------------------------------------
# DOT export (deterministic node and edge ordering).


def dfa_to_dot(d: Dfa, name: str = "dfa") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __init [shape=point];']
    for q in range(d.n_states):
        shape = "doublecircle" if q in d.accepting else "circle"
        lines.append(f'  q{q} [shape={shape}, label="{q}"];')
    lines.append(f"  __init -> q{d.initial};")
    for q in range(d.n_states):
        for a in d.alphabet.letters():
            nxt = d.delta.get((q, a))
            if nxt is not None:
                lines.append(f'  q{q} -> q{nxt} [label="{d.alphabet.name(a)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def nfa_to_dot(n: Nfa, name: str = "nfa") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __init [shape=point];']
    for q in range(n.n_states):
        shape = "doublecircle" if q in n.accepting else "circle"
        lines.append(f'  q{q} [shape={shape}, label="{q}"];')
    for q in sorted(n.initials):
        lines.append(f"  __init -> q{q};")
    for q in range(n.n_states):
        for a in n.alphabet.letters():
            for nxt in sorted(n.delta.get((q, a), ())):
                lines.append(f'  q{q} -> q{nxt} [label="{n.alphabet.name(a)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def transducer_to_dot(t: Transducer, name: str = "transducer") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __init [shape=point];']
    for q in range(t.n_states):
        shape = "doublecircle" if q in t.accepting else "circle"
        lines.append(f'  q{q} [shape={shape}, label="{q}"];')
    lines.append(f"  __init -> q{t.initial};")
    for (q, a, b, q2) in sorted(t.transitions):
        label = f"{t.alphabet.name(a)}/{t.alphabet.name(b)}"
        lines.append(f'  q{q} -> q{q2} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
