"""Epistemic formulas: AST, parser, printer and structural measures.

The language is propositional logic plus one knowledge modality per
agent.  `And` and `Implies` are derived operators: they are kept in
parsed ASTs but `normalize` eliminates them into {Not, Or} before any
automaton construction.  Goal formulas wrap a single temporal head
(AG / AF / EF / EG / NOW) around a knowledge-free-or-not state formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import FormulaError


class Formula:
    """Base class; concrete nodes are the frozen dataclasses below."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    agent: str
    sub: Formula


TEMPORAL_HEADS = ("AG", "AF", "EF", "EG", "NOW")


@dataclass(frozen=True)
class GoalFormula:
    """One temporal head applied to an epistemic state formula."""

    head: str
    body: Formula

    def __post_init__(self) -> None:
        if self.head not in TEMPORAL_HEADS:
            raise FormulaError(f"unknown temporal head '{self.head}'")

    def __str__(self) -> str:
        return f"{self.head} {to_text(self.body)}"


# ---------------------------------------------------------------------------
# Tokenizer / parser.  Precedence: ~ and K[_] bind tightest, then &, |, ->.
# '->' is right-associative; '&' and '|' associate to the left.

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<sym>[~&|()\[\]])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise FormulaError(f"unexpected character '{text[at]}'", at)
        if m.group("arrow"):
            tokens.append(("->", "->", m.start("arrow")))
        elif m.group("sym"):
            tokens.append((m.group("sym"), m.group("sym"), m.start("sym")))
        else:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise FormulaError("unexpected end of input", len(self.text))
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise FormulaError(f"expected '{kind}', got '{tok[1]}'", tok[2])
        return tok

    def parse(self) -> Formula:
        f = self.implication()
        tok = self.peek()
        if tok is not None:
            raise FormulaError(f"trailing input '{tok[1]}'", tok[2])
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        tok = self.peek()
        if tok is not None and tok[0] == "->":
            self.next()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while (tok := self.peek()) is not None and tok[0] == "|":
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while (tok := self.peek()) is not None and tok[0] == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.next()
        kind, value, pos = tok
        if kind == "~":
            return Not(self.unary())
        if kind == "ident" and value == "K" and (nxt := self.peek()) and nxt[0] == "[":
            self.next()
            agent = self.expect("ident")[1]
            self.expect("]")
            return Know(agent, self.unary())
        if kind == "ident":
            if value == "true":
                return Top()
            if value == "false":
                return Bot()
            return Atom(value)
        if kind == "(":
            f = self.implication()
            self.expect(")")
            return f
        raise FormulaError(f"unexpected token '{value}'", pos)


def parse_formula(text: str, ap: set[str], agents: set[str]) -> Formula:
    """Parse `text` and validate every atom and agent against the declared sets."""
    f = _Parser(text).parse()
    for atom in atoms(f):
        if atom not in ap:
            raise FormulaError(f"unknown proposition '{atom}'")
    for agent in agents_of(f):
        if agent not in agents:
            raise FormulaError(f"unknown agent '{agent}'")
    return f


def parse_goal(text: str, ap: set[str], agents: set[str]) -> GoalFormula:
    """Parse a goal: a temporal head followed by a state formula.

    A bare state formula is accepted and treated as `NOW`.
    """
    stripped = text.lstrip()
    for head in TEMPORAL_HEADS:
        if stripped.startswith(head) and not re.match(
            r"[A-Za-z0-9_]", stripped[len(head):][:1] or " "
        ):
            return GoalFormula(head, parse_formula(stripped[len(head):], ap, agents))
    return GoalFormula("NOW", parse_formula(text, ap, agents))


# ---------------------------------------------------------------------------
# Printing (inverse of the parser on ASTs).

_PREC_IMPLIES = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_UNARY = 4
_PREC_ATOM = 5


def _fmt(f: Formula, parent: int) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return _wrap("~" + _fmt(f.sub, _PREC_UNARY), _PREC_UNARY, parent)
    if isinstance(f, Know):
        return _wrap(f"K[{f.agent}] " + _fmt(f.sub, _PREC_UNARY), _PREC_UNARY, parent)
    if isinstance(f, And):
        s = _fmt(f.left, _PREC_AND) + " & " + _fmt(f.right, _PREC_AND + 1)
        return _wrap(s, _PREC_AND, parent)
    if isinstance(f, Or):
        s = _fmt(f.left, _PREC_OR) + " | " + _fmt(f.right, _PREC_OR + 1)
        return _wrap(s, _PREC_OR, parent)
    if isinstance(f, Implies):
        s = _fmt(f.left, _PREC_IMPLIES + 1) + " -> " + _fmt(f.right, _PREC_IMPLIES)
        return _wrap(s, _PREC_IMPLIES, parent)
    raise TypeError(f"not a formula node: {f!r}")


def _wrap(s: str, prec: int, parent: int) -> str:
    return f"({s})" if prec < parent else s


def to_text(f: Formula) -> str:
    return _fmt(f, 0)


# ---------------------------------------------------------------------------
# Structural measures and transformations.


def walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Not):
            stack.append(node.sub)
        elif isinstance(node, Know):
            stack.append(node.sub)
        elif isinstance(node, (Or, And, Implies)):
            stack.append(node.right)
            stack.append(node.left)


def atoms(f: Formula) -> set[str]:
    return {n.name for n in walk(f) if isinstance(n, Atom)}


def agents_of(f: Formula) -> set[str]:
    return {n.agent for n in walk(f) if isinstance(n, Know)}


def size(f: Formula) -> int:
    """AST node count."""
    return sum(1 for _ in walk(f))


def nesting_depth(f: Formula) -> int:
    """Maximum number of knowledge operators on a root-to-leaf path."""
    if isinstance(f, (Top, Bot, Atom)):
        return 0
    if isinstance(f, Not):
        return nesting_depth(f.sub)
    if isinstance(f, Know):
        return 1 + nesting_depth(f.sub)
    return max(nesting_depth(f.left), nesting_depth(f.right))


def is_propositional(f: Formula) -> bool:
    return not any(isinstance(n, Know) for n in walk(f))


def eval_propositional(f: Formula, valuation: set[str] | frozenset[str]) -> bool:
    """Truth of a knowledge-free formula under a set of true propositions."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Atom):
        return f.name in valuation
    if isinstance(f, Not):
        return not eval_propositional(f.sub, valuation)
    if isinstance(f, Or):
        return eval_propositional(f.left, valuation) or eval_propositional(f.right, valuation)
    if isinstance(f, And):
        return eval_propositional(f.left, valuation) and eval_propositional(f.right, valuation)
    if isinstance(f, Implies):
        return (not eval_propositional(f.left, valuation)) or eval_propositional(
            f.right, valuation
        )
    raise FormulaError("eval_propositional requires a knowledge-free formula")


def normalize(f: Formula) -> Formula:
    """Eliminate the derived operators And/Implies into {Not, Or}."""
    if isinstance(f, (Top, Bot, Atom)):
        return f
    if isinstance(f, Not):
        return Not(normalize(f.sub))
    if isinstance(f, Know):
        return Know(f.agent, normalize(f.sub))
    if isinstance(f, Or):
        return Or(normalize(f.left), normalize(f.right))
    if isinstance(f, And):
        return Not(Or(Not(normalize(f.left)), Not(normalize(f.right))))
    if isinstance(f, Implies):
        return Or(Not(normalize(f.left)), normalize(f.right))
    raise TypeError(f"not a formula node: {f!r}")
