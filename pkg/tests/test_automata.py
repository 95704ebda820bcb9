import itertools

import pytest

from delplan.automata import (
    Alphabet,
    Dfa,
    Nfa,
    Transducer,
    complement_within,
    compose,
    determinize,
    dfa_to_dot,
    dfa_to_nfa,
    empty_dfa,
    identity_transducer,
    intersect,
    is_empty,
    minimize,
    preimage,
    shortest_accepted,
    trim,
    union,
)
from delplan.errors import BudgetExceeded, ModelError

AB = Alphabet(["a", "b"])


def all_words(alphabet, max_len):
    for length in range(max_len + 1):
        yield from itertools.product(alphabet.letters(), repeat=length)


def language(d, max_len):
    return {w for w in all_words(d.alphabet, max_len) if d.accepts(w)}


def random_dfa(rng, alphabet=AB, max_states=5):
    n = rng.randint(1, max_states)
    delta = {}
    for q in range(n):
        for a in alphabet.letters():
            if rng.random() < 0.7:
                delta[(q, a)] = rng.randrange(n)
    accepting = frozenset(q for q in range(n) if rng.random() < 0.4)
    return Dfa(alphabet, n, delta, 0, accepting)


def random_nfa(rng, alphabet=AB, max_states=6):
    n = rng.randint(1, max_states)
    delta = {}
    for q in range(n):
        for a in alphabet.letters():
            targets = frozenset(p for p in range(n) if rng.random() < 0.3)
            if targets:
                delta[(q, a)] = targets
    initials = frozenset(q for q in range(n) if rng.random() < 0.4) or frozenset({0})
    accepting = frozenset(q for q in range(n) if rng.random() < 0.4)
    return Nfa(alphabet, n, delta, initials, accepting)


def random_transducer(rng, alphabet=AB, max_states=3):
    n = rng.randint(1, max_states)
    transitions = set()
    for q in range(n):
        for a in alphabet.letters():
            for b in alphabet.letters():
                if rng.random() < 0.3:
                    transitions.add((q, a, b, rng.randrange(n)))
    accepting = frozenset(q for q in range(n) if rng.random() < 0.5) or frozenset({0})
    return Transducer(alphabet, n, frozenset(transitions), 0, accepting)


def universal_dfa(alphabet):
    delta = {(0, a): 0 for a in alphabet.letters()}
    return Dfa(alphabet, 1, delta, 0, frozenset({0}))


class TestDeterminize:
    def test_identity_on_dfa(self, rng):
        for _ in range(20):
            d = random_dfa(rng)
            d2 = determinize(dfa_to_nfa(d))
            assert language(d, 6) == language(d2, 6)

    def test_words_containing_a(self):
        # two-state NFA guessing nothing: stays, sees 'a', accepts ever after
        n = Nfa(
            AB,
            2,
            {
                (0, 0): frozenset({0, 1}),
                (0, 1): frozenset({0}),
                (1, 0): frozenset({1}),
                (1, 1): frozenset({1}),
            },
            frozenset({0}),
            frozenset({1}),
        )
        d = determinize(n)
        assert d.n_states == 2
        assert language(d, 5) == {w for w in all_words(AB, 5) if 0 in w}

    def test_language_equal_on_random_nfas(self, rng):
        for _ in range(25):
            n = random_nfa(rng)
            d = determinize(n)
            for w in all_words(AB, 8):
                assert d.accepts(w) == n.accepts(w)

    def test_budget(self):
        n = Nfa(
            AB,
            2,
            {(0, 0): frozenset({0, 1}), (1, 1): frozenset({1})},
            frozenset({0}),
            frozenset({1}),
        )
        with pytest.raises(BudgetExceeded):
            determinize(n, max_states=1)


class TestBooleanOps:
    def test_complement_of_self_is_empty(self, rng):
        dom = random_dfa(rng)
        assert is_empty(complement_within(dom, dom))

    def test_complement_of_empty_is_domain(self, rng):
        dom = random_dfa(rng)
        c = complement_within(empty_dfa(AB), dom)
        assert language(c, 6) == language(dom, 6)

    def test_complement_matches_set_difference(self, rng):
        for _ in range(25):
            d, dom = random_dfa(rng), random_dfa(rng)
            c = complement_within(d, dom)
            assert language(c, 8) == language(dom, 8) - language(d, 8)

    def test_intersect_with_universal(self, rng):
        d = random_dfa(rng)
        assert language(intersect(d, universal_dfa(AB)), 6) == language(d, 6)

    def test_union_with_empty(self, rng):
        d = random_dfa(rng)
        assert language(union(d, empty_dfa(AB)), 6) == language(d, 6)

    def test_union_intersect_oracle(self, rng):
        for _ in range(25):
            a, b = random_dfa(rng), random_dfa(rng)
            assert language(union(a, b), 7) == language(a, 7) | language(b, 7)
            assert language(intersect(a, b), 7) == language(a, 7) & language(b, 7)

    def test_double_complement(self, rng):
        for _ in range(15):
            d, dom = random_dfa(rng), random_dfa(rng)
            back = complement_within(complement_within(d, dom), dom)
            assert language(back, 7) == language(d, 7) & language(dom, 7)

    def test_de_morgan(self, rng):
        for _ in range(15):
            a, b, dom = random_dfa(rng), random_dfa(rng), universal_dfa(AB)
            lhs = complement_within(union(a, b), dom)
            rhs = intersect(complement_within(a, dom), complement_within(b, dom))
            assert language(lhs, 7) == language(rhs, 7)

    def test_alphabet_mismatch(self, rng):
        d = random_dfa(rng)
        other = universal_dfa(Alphabet(["x", "y"]))
        with pytest.raises(ModelError):
            intersect(d, other)


class TestMinimize:
    def test_preserves_language(self, rng):
        for _ in range(30):
            d = random_dfa(rng)
            assert language(minimize(d), 8) == language(d, 8)

    def test_idempotent_state_count(self, rng):
        for _ in range(20):
            d = minimize(random_dfa(rng))
            assert minimize(d).n_states == d.n_states

    def test_determinize_idempotent_up_to_minimization(self, rng):
        for _ in range(15):
            n = random_nfa(rng)
            once = determinize(n)
            twice = determinize(dfa_to_nfa(once))
            assert minimize(once).n_states == minimize(twice).n_states

    def test_merges_equivalent_states(self):
        # two accepting states with identical behavior collapse
        delta = {(0, 0): 1, (0, 1): 2, (1, 0): 1, (2, 0): 2}
        d = Dfa(AB, 3, delta, 0, frozenset({1, 2}))
        assert minimize(d).n_states == 2


class TestEmptinessAndWitness:
    def test_unreachable_accepting_state(self):
        d = Dfa(AB, 2, {}, 0, frozenset({1}))
        assert is_empty(d)

    def test_witness_tie_break(self):
        # language {aa, b}: BFS with a < b still returns the shorter "b"
        delta = {(0, 0): 1, (1, 0): 2, (0, 1): 3}
        d = Dfa(AB, 4, delta, 0, frozenset({2, 3}))
        assert shortest_accepted(d) == (1,)

    def test_witness_is_lex_least_among_shortest(self):
        delta = {(0, 0): 1, (0, 1): 2}
        d = Dfa(AB, 3, delta, 0, frozenset({1, 2}))
        assert shortest_accepted(d) == (0,)

    def test_no_witness(self):
        assert shortest_accepted(empty_dfa(AB)) is None

    def test_emptiness_work_is_linear(self, rng):
        for _ in range(20):
            d = trim(random_dfa(rng, max_states=8))
            stats = {}
            is_empty(d, stats)
            assert stats["ops"] <= d.n_states + d.n_transitions + 1


class TestTransducers:
    def test_identity_composition(self, rng):
        ident = identity_transducer(universal_dfa(AB))
        for _ in range(15):
            t = random_transducer(rng)
            c = compose(ident, t)
            for u in all_words(AB, 4):
                for w in itertools.product(AB.letters(), repeat=len(u)):
                    assert c.relates(u, w) == t.relates(u, w)

    def test_one_state_composition_is_relational_join(self):
        t1 = Transducer(AB, 1, frozenset({(0, 0, 1, 0)}), 0, frozenset({0}))  # a -> b
        t2 = Transducer(AB, 1, frozenset({(0, 1, 0, 0)}), 0, frozenset({0}))  # b -> a
        c = compose(t1, t2)
        assert c.relates((0,), (0,))
        assert not c.relates((0,), (1,))

    def test_composition_size_bound(self, rng):
        for _ in range(15):
            t1, t2 = random_transducer(rng), random_transducer(rng)
            assert compose(t1, t2).n_transitions <= t1.n_transitions * t2.n_transitions

    def test_composition_matches_middle_word_oracle(self, rng):
        for _ in range(10):
            t1, t2 = random_transducer(rng, max_states=2), random_transducer(rng, max_states=2)
            c = compose(t1, t2)
            for length in range(4):
                words = list(itertools.product(AB.letters(), repeat=length))
                for u in words:
                    for w in words:
                        expected = any(
                            t1.relates(u, v) and t2.relates(v, w) for v in words
                        )
                        assert c.relates(u, w) == expected

    def test_compose_associative_on_relations(self, rng):
        for _ in range(8):
            ts = [random_transducer(rng, max_states=2) for _ in range(3)]
            left = compose(compose(ts[0], ts[1]), ts[2])
            right = compose(ts[0], compose(ts[1], ts[2]))
            for length in range(4):
                words = list(itertools.product(AB.letters(), repeat=length))
                for u in words:
                    for w in words:
                        assert left.relates(u, w) == right.relates(u, w)

    def test_synchrony(self, rng):
        t = random_transducer(rng)
        assert not t.relates((0,), (0, 1))
        for (u, w) in t.related_pairs(3):
            assert len(u) == len(w) == 3


class TestPreimage:
    def test_identity_preimage(self, rng):
        ident = identity_transducer(universal_dfa(AB))
        for _ in range(10):
            d = random_dfa(rng)
            pre = determinize(preimage(ident, d))
            assert language(pre, 6) == language(d, 6)

    def test_letter_swap(self):
        swap = Transducer(
            AB, 1, frozenset({(0, 0, 1, 0), (0, 1, 0, 0)}), 0, frozenset({0})
        )
        d_ab = Dfa(AB, 3, {(0, 0): 1, (1, 1): 2}, 0, frozenset({2}))  # {ab}
        pre = determinize(preimage(swap, d_ab))
        assert language(pre, 4) == {(1, 0)}  # {ba}

    def test_matches_pair_enumeration_oracle(self, rng):
        for _ in range(12):
            t = random_transducer(rng, max_states=2)
            d = random_dfa(rng, max_states=3)
            pre = determinize(preimage(t, d))
            for u in all_words(AB, 6):
                expected = any(
                    t.relates(u, w) and d.accepts(w)
                    for w in itertools.product(AB.letters(), repeat=len(u))
                )
                assert pre.accepts(u) == expected


class TestDot:
    def test_deterministic_output(self, rng):
        d = random_dfa(rng)
        assert dfa_to_dot(d) == dfa_to_dot(d)
        assert dfa_to_dot(d).startswith("digraph")
