import itertools

import pytest
from hypothesis import given, strategies as st

from delplan import formula as fm
from delplan.errors import FormulaError

AP = {"p", "q", "r", "s"}
AGENTS = {"a", "b"}


def parse(text):
    return fm.parse_formula(text, AP, AGENTS)


class TestParse:
    def test_single_atom(self):
        assert parse("p") == fm.Atom("p")

    def test_know_over_disjunction(self):
        assert parse("K[a](p | ~q)") == fm.Know(
            "a", fm.Or(fm.Atom("p"), fm.Not(fm.Atom("q")))
        )

    def test_nested_know(self):
        f = parse("K[a](K[b] p)")
        assert f == fm.Know("a", fm.Know("b", fm.Atom("p")))
        assert fm.nesting_depth(f) == 2

    def test_precedence(self):
        # ~ binds tighter than &, & tighter than |, | tighter than ->
        assert parse("~p & q | r -> s") == fm.Implies(
            fm.Or(fm.And(fm.Not(fm.Atom("p")), fm.Atom("q")), fm.Atom("r")),
            fm.Atom("s"),
        )

    def test_implies_right_associative(self):
        assert parse("p -> q -> r") == fm.Implies(
            fm.Atom("p"), fm.Implies(fm.Atom("q"), fm.Atom("r"))
        )

    def test_literals(self):
        assert parse("true") == fm.Top()
        assert parse("false") == fm.Bot()

    def test_syntax_error_has_position(self):
        with pytest.raises(FormulaError) as exc:
            parse("p | | q")
        assert exc.value.position == 4

    def test_unknown_proposition(self):
        with pytest.raises(FormulaError, match="unknown proposition 'z'"):
            parse("p | z")

    def test_unknown_agent(self):
        with pytest.raises(FormulaError, match="unknown agent 'c'"):
            parse("K[c] p")

    def test_goal_heads(self):
        goal = fm.parse_goal("EF K[a] p", AP, AGENTS)
        assert goal.head == "EF"
        assert goal.body == fm.Know("a", fm.Atom("p"))
        assert fm.parse_goal("p | q", AP, AGENTS).head == "NOW"


class TestMeasures:
    @pytest.mark.parametrize(
        "text,depth",
        [("p | ~p", 0), ("K[a] p", 1), ("K[a](p & K[b] K[a] q)", 3)],
    )
    def test_nesting_depth(self, text, depth):
        assert fm.nesting_depth(parse(text)) == depth

    @pytest.mark.parametrize(
        "text,prop",
        [("p -> q", True), ("K[a] p", False), ("~(p | K[b] q)", False)],
    )
    def test_is_propositional(self, text, prop):
        assert fm.is_propositional(parse(text)) is prop

    def test_depth_zero_iff_propositional(self, rng):
        from conftest import random_epistemic

        for _ in range(200):
            f = random_epistemic(rng, ("p", "q"), ("a", "b"), rng.randint(0, 2))
            assert (fm.nesting_depth(f) == 0) == fm.is_propositional(f)


class TestEval:
    @pytest.mark.parametrize(
        "text,val,expected",
        [
            ("p", {"p"}, True),
            ("p & ~q", {"p"}, True),
            ("p -> q", {"p"}, False),
            ("true", set(), True),
            ("false", {"p"}, False),
        ],
    )
    def test_basic(self, text, val, expected):
        assert fm.eval_propositional(parse(text), val) is expected

    def test_rejects_epistemic(self):
        with pytest.raises(FormulaError):
            fm.eval_propositional(parse("K[a] p"), {"p"})

    def test_normalize_preserves_truth_exhaustively(self, rng):
        # all valuations over up to 4 atoms, random formulas
        from conftest import random_propositional

        ap = ("p", "q", "r", "s")
        for _ in range(100):
            f = random_propositional(rng, ap, depth=3)
            g = fm.normalize(f)
            assert fm.is_propositional(g)
            for k in range(len(ap) + 1):
                for subset in itertools.combinations(ap, k):
                    val = set(subset)
                    assert fm.eval_propositional(f, val) == fm.eval_propositional(g, val)


# hypothesis strategy for random ASTs over the declared atoms/agents
formulas = st.recursive(
    st.one_of(
        st.just(fm.Top()),
        st.just(fm.Bot()),
        st.sampled_from([fm.Atom(p) for p in sorted(AP)]),
    ),
    lambda children: st.one_of(
        children.map(fm.Not),
        st.tuples(children, children).map(lambda lr: fm.Or(*lr)),
        st.tuples(children, children).map(lambda lr: fm.And(*lr)),
        st.tuples(children, children).map(lambda lr: fm.Implies(*lr)),
        st.tuples(st.sampled_from(sorted(AGENTS)), children).map(lambda af: fm.Know(*af)),
    ),
    max_leaves=25,
)


@given(formulas)
def test_print_parse_round_trip(f):
    assert parse(fm.to_text(f)) == f
