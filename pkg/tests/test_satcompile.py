import pytest

from conftest import random_epistemic, random_instance
from delplan import formula as fm
from delplan.errors import ModelError
from delplan.models import iterate
from delplan.satcompile import SatCompiler
from delplan.structure import build_representation


@pytest.fixture
def compiler(m0, e0):
    return SatCompiler(build_representation(m0, e0))


def language(dfa, max_len):
    return set(dfa.words_up_to(max_len))


class TestCompileBasics:
    def test_atom_equals_valuation_automaton(self, compiler):
        compiled = compiler.compile_formula(fm.Atom("p"))
        vp = compiler.rep.valuation_dfa("p")
        assert language(compiled, 6) == language(vp, 6)

    def test_double_negation(self, compiler, rng):
        for _ in range(10):
            f = random_epistemic(rng, ("p",), ("a",), rng.randint(0, 1))
            d1 = compiler.compile_formula(f)
            d2 = compiler.compile_formula(fm.Not(fm.Not(f)))
            assert language(d1, 5) == language(d2, 5)

    def test_know_after_public_announcement(self, compiler):
        kp = fm.Know("a", fm.Atom("p"))
        assert not compiler.holds_at(kp, ("w1",))
        assert compiler.holds_at(kp, ("w1", "e1"))

    def test_excluded_middle_covers_domain(self, compiler, rng):
        for _ in range(10):
            f = random_epistemic(rng, ("p",), ("a",), rng.randint(0, 1))
            d = compiler.compile_formula(fm.Or(f, fm.Not(f)))
            assert language(d, 5) == language(compiler.rep.domain, 5)

    def test_language_inside_domain(self, compiler, rng):
        dom_lang = language(compiler.rep.domain, 5)
        for _ in range(15):
            f = random_epistemic(rng, ("p",), ("a",), rng.randint(0, 2))
            assert language(compiler.compile_formula(f), 5) <= dom_lang

    def test_true_everywhere(self, compiler):
        for h in compiler.rep.domain.words_up_to(4):
            assert compiler.holds_at(fm.Top(), compiler.rep.alphabet.spell(h))

    def test_holds_at_outside_domain(self, compiler):
        with pytest.raises(ModelError):
            compiler.holds_at(fm.Top(), ("w2", "e2"))


class TestOracleEquivalence:
    def test_level_zero_agrees_with_model_checking(self, m0, e0, compiler):
        for f in [fm.Atom("p"), fm.Know("a", fm.Atom("p")), fm.Not(fm.Atom("p"))]:
            for w in m0.worlds:
                assert compiler.holds_at(f, (w,)) == m0.check(w, f)

    def test_m0_e0_exhaustive(self, m0, e0, compiler, rng):
        formulas = [
            fm.Atom("p"),
            fm.Know("a", fm.Atom("p")),
            fm.Know("a", fm.Know("a", fm.Atom("p"))),
            fm.Not(fm.Know("a", fm.Not(fm.Atom("p")))),
            fm.Or(fm.Know("a", fm.Atom("p")), fm.Not(fm.Atom("p"))),
        ]
        level = m0
        for n in range(4):
            if n:
                level = iterate(level, e0, 1)
            for w in level.worlds:
                h = tuple(w.split("."))
                for f in formulas:
                    assert compiler.holds_at(f, h) == level.check(w, f), (w, str(f))

    def test_random_instances(self, rng):
        for _ in range(12):
            m, ev = random_instance(rng)
            rep = build_representation(m, ev)
            compiler = SatCompiler(rep)
            formulas = [
                random_epistemic(rng, m.ap, m.agents, rng.randint(0, 2))
                for _ in range(4)
            ]
            level = m
            for n in range(4):
                if n:
                    level = iterate(level, ev, 1)
                    if len(level.worlds) > 150:
                        break
                for w in level.worlds:
                    h = tuple(w.split("."))
                    for f in formulas:
                        assert compiler.holds_at(f, h) == level.check(w, f)


class TestBlowupReport:
    def test_depth_zero_single_entry(self, compiler):
        report = compiler.blowup_report(fm.Or(fm.Atom("p"), fm.Not(fm.Atom("p"))))
        assert len(report.pre_minimization) == 1
        assert report.minimized[0] <= compiler.rep.domain.n_states

    def test_report_length(self, compiler):
        f = fm.Know("a", fm.Or(fm.Atom("p"), fm.Know("a", fm.Atom("p"))))
        report = compiler.blowup_report(f)
        assert len(report.pre_minimization) == fm.nesting_depth(f) + 1

    def test_tsv_shape(self, compiler):
        report = compiler.blowup_report(fm.Know("a", fm.Atom("p")))
        lines = report.to_tsv().strip().splitlines()
        assert lines[0] == "level\tstates_pre_min\tstates_minimized"
        assert len(lines) == 3


class TestMemo:
    def test_memo_shares_normalized_forms(self, compiler):
        f = fm.And(fm.Atom("p"), fm.Atom("p"))
        compiler.compile_formula(f)
        n_before = len(compiler.memoized())
        compiler.compile_formula(fm.Not(fm.Or(fm.Not(fm.Atom("p")), fm.Not(fm.Atom("p")))))
        assert len(compiler.memoized()) == n_before
