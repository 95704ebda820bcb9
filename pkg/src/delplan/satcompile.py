"""Compile epistemic formulas into DFAs over the history forest.

`compile_formula(f)` returns a DFA accepting exactly the histories at
which f holds.  Atoms map to the valuation DFAs, boolean connectives to
boolean operations relative to the domain, and each knowledge operator
to: take the complement of the subformula language, pull it back through
the agent's relation transducer, determinize, complement again.  Each
knowledge level therefore costs one subset construction, which is where
the tower of exponentials lives; every intermediate result is minimized
to keep the tower as flat as the instance allows.

Knowledge is evaluated against the full forest, never against any plan
or protocol restriction: compilation depends only on the representation.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import formula as fm
from .automata import (
    DEFAULT_STATE_BUDGET,
    Dfa,
    complement_within,
    determinize,
    empty_dfa,
    minimize,
    preimage,
    union,
)
from .errors import BudgetExceeded, ModelError
from .structure import RegularRepresentation


@dataclass
class BlowupReport:
    """Per-knowledge-level state counts of the compiled automata.

    `pre_minimization[k]` is the largest DFA materialized while handling
    level k (the raw subset-construction output for k >= 1), before
    minimization; `minimized[k]` is the corresponding count afterwards.
    """

    pre_minimization: list[int]
    minimized: list[int]

    def to_tsv(self) -> str:
        lines = ["level\tstates_pre_min\tstates_minimized"]
        for k, (pre, post) in enumerate(zip(self.pre_minimization, self.minimized)):
            lines.append(f"{k}\t{pre}\t{post}")
        return "\n".join(lines) + "\n"


class SatCompiler:
    """Memoizing compiler bound to one representation.

    Memo keys are ASTs normalized into {Not, Or, Know}, so derived
    operators and syntactic duplicates share work.
    """

    def __init__(self, rep: RegularRepresentation, max_states: int = DEFAULT_STATE_BUDGET):
        self.rep = rep
        self.max_states = max_states
        self._memo: dict[fm.Formula, Dfa] = {}
        self._level_pre: dict[int, int] = {}
        self._level_min: dict[int, int] = {}

    def compile_formula(self, f: fm.Formula) -> Dfa:
        return self._compile(fm.normalize(f))

    def _record(self, level: int, pre: int, post: int) -> None:
        self._level_pre[level] = max(self._level_pre.get(level, 0), pre)
        self._level_min[level] = max(self._level_min.get(level, 0), post)

    def _compile(self, f: fm.Formula) -> Dfa:
        if f in self._memo:
            return self._memo[f]
        dom = self.rep.domain
        if isinstance(f, fm.Top):
            result = dom
        elif isinstance(f, fm.Bot):
            result = empty_dfa(dom.alphabet)
        elif isinstance(f, fm.Atom):
            result = self.rep.valuation_dfa(f.name)
        elif isinstance(f, fm.Not):
            result = minimize(complement_within(self._compile(f.sub), dom))
        elif isinstance(f, fm.Or):
            result = minimize(union(self._compile(f.left), self._compile(f.right)))
        elif isinstance(f, fm.Know):
            sub = self._compile(f.sub)
            violating = complement_within(sub, dom)
            t = self.rep.relation_transducer(f.agent)
            level = fm.nesting_depth(f)
            try:
                can_reach_violation = determinize(
                    preimage(t, violating), max_states=self.max_states
                )
            except BudgetExceeded as exc:
                raise BudgetExceeded(
                    str(exc), where=f"knowledge nesting level {level}"
                ) from None
            pre_count = can_reach_violation.n_states
            result = minimize(complement_within(can_reach_violation, dom))
            self._record(level, pre_count, result.n_states)
        else:
            raise TypeError(f"unexpected node after normalization: {f!r}")
        if fm.nesting_depth(f) == 0 and not isinstance(f, (fm.Top, fm.Bot, fm.Atom)):
            self._record(0, result.n_states, result.n_states)
        self._memo[f] = result
        return result

    def holds_at(self, f: fm.Formula, history: tuple[str, ...]) -> bool:
        if not self.rep.contains(history):
            raise ModelError(f"history {'.'.join(history)} is not in the forest")
        return self.compile_formula(f).accepts_names(history)

    def blowup_report(self, f: fm.Formula) -> BlowupReport:
        compiled = self.compile_formula(f)
        depth = fm.nesting_depth(f)
        if depth == 0:
            self._record(0, compiled.n_states, compiled.n_states)
        elif 0 not in self._level_min:
            # formula has no compound knowledge-free part; the positional
            # evaluation still starts from the domain automaton
            self._record(0, self.rep.domain.n_states, self.rep.domain.n_states)
        pre = [self._level_pre.get(k, 0) for k in range(depth + 1)]
        post = [self._level_min.get(k, 0) for k in range(depth + 1)]
        return BlowupReport(pre, post)

    def memoized(self) -> dict[str, Dfa]:
        """Compiled automata keyed by formula text (for DOT dumps)."""
        return {fm.to_text(f): d for f, d in self._memo.items()}
