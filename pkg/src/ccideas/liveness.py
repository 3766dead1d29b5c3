"""Role liveness expressions compiled to finite automata.

A liveness expression describes a role's legal behaviour as a
regular-expression-like formula over activity names:

    (RequirementsInscription.GiveRequirements)+ · (Assignment)+ · ...

Identifiers are symbols; ``.`` (period) and ``·`` (middle dot) are both
plain concatenation; ``(e)+`` is one-or-more repetition. ``(e)*`` and
``e|e`` are supported as extensions for completeness with the operator
family even though the shipped role corpus uses only ``.``/``·``/``+``.
``+``/``*`` bind to the immediately preceding group or atom.

Compilation uses the position construction: atoms are numbered in parse
order, first/last/follow sets give a nondeterministic automaton without
epsilon transitions, which is simulated on-line. Expressions are tiny,
so no determinization is performed. Automata are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import EngineError

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
CONCAT_CHARS = {".", "·"}  # ASCII period and middle dot


class ParseError(EngineError):
    def __init__(self, position: int, message: str):
        super().__init__(f"parse error at position {position}: {message}", position=position)
        self.position = position


class UnknownActivity(EngineError):
    def __init__(self, name: str):
        super().__init__(f"activity {name!r} is not an atom of the expression", activity=name)
        self.activity = name


class InvalidPrefix(EngineError):
    def __init__(self, index: int):
        super().__init__(f"prefix is already a protocol violation at index {index}", index=index)
        self.index = index


# --- expression AST ---------------------------------------------------------


@dataclass(frozen=True)
class _Atom:
    name: str
    pos: int  # position index, assigned in parse order (1-based)


@dataclass(frozen=True)
class _Concat:
    parts: tuple


@dataclass(frozen=True)
class _Alt:
    parts: tuple


@dataclass(frozen=True)
class _Repeat:
    inner: object
    min_one: bool  # True for +, False for *


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT LPAREN RPAREN CONCAT PLUS STAR PIPE END
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(source):
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in CONCAT_CHARS:
            tokens.append(_Token("CONCAT", ch, i))
            i += 1
        elif ch == "+":
            tokens.append(_Token("PLUS", ch, i))
            i += 1
        elif ch == "*":
            tokens.append(_Token("STAR", ch, i))
            i += 1
        elif ch == "|":
            tokens.append(_Token("PIPE", ch, i))
            i += 1
        elif ch == "(":
            tokens.append(_Token("LPAREN", ch, i))
            i += 1
        elif ch == ")":
            tokens.append(_Token("RPAREN", ch, i))
            i += 1
        else:
            m = IDENT_RE.match(source, i)
            if not m:
                raise ParseError(i, f"unexpected character {ch!r}")
            tokens.append(_Token("IDENT", m.group(), i))
            i = m.end()
    tokens.append(_Token("END", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.index = 0
        self.next_pos = 1

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def take(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def parse(self):
        node = self.alternation()
        trailing = self.peek()
        if trailing.kind == "RPAREN":
            raise ParseError(trailing.pos, "unbalanced parenthesis")
        if trailing.kind != "END":
            raise ParseError(trailing.pos, f"unexpected {trailing.text!r}")
        return node

    def alternation(self):
        parts = [self.sequence()]
        while self.peek().kind == "PIPE":
            self.take()
            parts.append(self.sequence())
        return parts[0] if len(parts) == 1 else _Alt(tuple(parts))

    def sequence(self):
        parts = [self.term()]
        while True:
            tok = self.peek()
            if tok.kind == "CONCAT":
                self.take()
                parts.append(self.term())
            elif tok.kind in ("IDENT", "LPAREN"):
                # juxtaposition is concatenation too
                parts.append(self.term())
            else:
                break
        return parts[0] if len(parts) == 1 else _Concat(tuple(parts))

    def term(self):
        node = self.atom()
        while self.peek().kind in ("PLUS", "STAR"):
            tok = self.take()
            node = _Repeat(node, min_one=(tok.kind == "PLUS"))
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "IDENT":
            self.take()
            atom = _Atom(tok.text, self.next_pos)
            self.next_pos += 1
            return atom
        if tok.kind == "LPAREN":
            self.take()
            if self.peek().kind == "RPAREN":
                raise ParseError(self.peek().pos, "empty group")
            node = self.alternation()
            closing = self.peek()
            if closing.kind != "RPAREN":
                raise ParseError(closing.pos, "unbalanced parenthesis")
            self.take()
            return node
        if tok.kind in ("PLUS", "STAR", "CONCAT", "PIPE"):
            raise ParseError(tok.pos, f"dangling operator {tok.text!r}")
        if tok.kind == "RPAREN":
            raise ParseError(tok.pos, "unbalanced parenthesis")
        raise ParseError(tok.pos, "empty group")


# --- position automaton -----------------------------------------------------


class VerdictKind(Enum):
    ACCEPTED = "Accepted"
    VALID_PREFIX = "ValidPrefix"
    VIOLATION = "Violation"


@dataclass(frozen=True)
class TraceVerdict:
    kind: VerdictKind
    violation_index: int | None = None
    allowed_next: frozenset[str] = frozenset()

    @property
    def ok(self) -> bool:
        return self.kind is not VerdictKind.VIOLATION


@dataclass(frozen=True)
class ProtocolAutomaton:
    """Compiled liveness expression. State 0 is the start state; every
    other state is an atom occurrence of the source expression."""

    source: str
    atoms: frozenset[str]
    states: frozenset[int]
    start: int
    accepting: frozenset[int]
    transitions: dict[tuple[int, str], frozenset[int]] = field(hash=False)
    out_symbols: dict[int, frozenset[str]] = field(hash=False, default_factory=dict)

    def step(self, states: frozenset[int], symbol: str) -> frozenset[int]:
        nxt: set[int] = set()
        for s in states:
            nxt.update(self.transitions.get((s, symbol), ()))
        return frozenset(nxt)

    def outgoing(self, states: frozenset[int]) -> frozenset[str]:
        if len(states) == 1:
            for s in states:
                return self.out_symbols.get(s, frozenset())
        result: set[str] = set()
        for s in states:
            result.update(self.out_symbols.get(s, ()))
        return frozenset(result)


def _analyze(node, follow: dict[int, set[int]]) -> tuple[bool, frozenset[int], frozenset[int]]:
    """Return (nullable, first, last) and accumulate the follow relation."""
    if isinstance(node, _Atom):
        p = frozenset({node.pos})
        return False, p, p
    if isinstance(node, _Alt):
        nullable = False
        first: set[int] = set()
        last: set[int] = set()
        for part in node.parts:
            n, f, l = _analyze(part, follow)
            nullable = nullable or n
            first |= f
            last |= l
        return nullable, frozenset(first), frozenset(last)
    if isinstance(node, _Concat):
        nullable = True
        first: set[int] = set()
        last: set[int] = set()
        for part in node.parts:
            n, f, l = _analyze(part, follow)
            for p in last:
                follow.setdefault(p, set()).update(f)
            if nullable:
                first |= f
            if n:
                last |= l
            else:
                last = set(l)
            nullable = nullable and n
        return nullable, frozenset(first), frozenset(last)
    if isinstance(node, _Repeat):
        n, f, l = _analyze(node.inner, follow)
        for p in l:
            follow.setdefault(p, set()).update(f)
        return (n or not node.min_one), f, l
    raise TypeError(f"unexpected node {node!r}")


def parse_liveness(source: str) -> ProtocolAutomaton:
    """Compile a liveness expression into a protocol automaton."""
    if not source.strip():
        raise ParseError(0, "empty expression")
    parser = _Parser(source)
    root = parser.parse()

    symbols: dict[int, str] = {}

    def collect(node):
        if isinstance(node, _Atom):
            symbols[node.pos] = node.name
        elif isinstance(node, (_Alt, _Concat)):
            for part in node.parts:
                collect(part)
        elif isinstance(node, _Repeat):
            collect(node.inner)

    collect(root)

    follow: dict[int, set[int]] = {}
    nullable, first, last = _analyze(root, follow)

    transitions: dict[tuple[int, str], set[int]] = {}
    for p in first:
        transitions.setdefault((0, symbols[p]), set()).add(p)
    for p, targets in follow.items():
        for q in targets:
            transitions.setdefault((p, symbols[q]), set()).add(q)

    accepting = set(last)
    if nullable:
        accepting.add(0)

    out_symbols: dict[int, set[str]] = {}
    for state, symbol in transitions:
        out_symbols.setdefault(state, set()).add(symbol)

    return ProtocolAutomaton(
        source=source,
        atoms=frozenset(symbols.values()),
        states=frozenset(range(len(symbols) + 1)),
        start=0,
        accepting=frozenset(accepting),
        transitions={k: frozenset(v) for k, v in transitions.items()},
        out_symbols={s: frozenset(v) for s, v in out_symbols.items()},
    )


def judge_trace(automaton: ProtocolAutomaton, trace: list[str] | tuple[str, ...]) -> TraceVerdict:
    """Judge an activity trace against a role's automaton.

    Every state of the position automaton can reach an accepting state
    (the expression grammar cannot denote the empty language), so a
    trace is doomed exactly when the simulated state set empties out.
    """
    current = frozenset({automaton.start})
    for i, symbol in enumerate(trace):
        if symbol not in automaton.atoms:
            raise UnknownActivity(symbol)
        current = automaton.step(current, symbol)
        if not current:
            return TraceVerdict(VerdictKind.VIOLATION, violation_index=i)
    allowed = automaton.outgoing(current)
    if current & automaton.accepting:
        return TraceVerdict(VerdictKind.ACCEPTED, allowed_next=allowed)
    return TraceVerdict(VerdictKind.VALID_PREFIX, allowed_next=allowed)


def allowed_next(automaton: ProtocolAutomaton, prefix: list[str] | tuple[str, ...]) -> frozenset[str]:
    """Exactly the symbols that extend ``prefix`` without violating the protocol."""
    verdict = judge_trace(automaton, prefix)
    if verdict.kind is VerdictKind.VIOLATION:
        raise InvalidPrefix(verdict.violation_index or 0)
    return verdict.allowed_next


# --- role corpus ------------------------------------------------------------

#: Solver-participant activity names, in happy-path order.
REQUIREMENTS_INSCRIPTION = "RequirementsInscription"
GIVE_REQUIREMENTS = "GiveRequirements"
ASSIGNMENT = "Assignment"
PROVIDES = "Provides"
OFFER_ACTIVITY = "Offer_activity"
SELECT_ACTIVITY = "SelectActivity"
WORK_IDEAS = "WorkIdeas"
OFFER_METHOD = "Offer_method"
SELECT_METHOD = "SelectMethod"
WORK_IDEA_CARDS = "WorkIdeaCards"
IMPROVE = "Improve"
COMPARE_IDEAS = "CompareIdeas"
SENDING_IDEA_CARDS = "SendingIdeaCards"
RECEIVING_POSSIBLE_SOLUTIONS = "ReceivingPossibleSolutions"
WATCHING_POSSIBLE_SOLUTIONS = "WatchingPossibleSolutions"
AWARDS_END = "AwardsEnd"

SOLVER_PARTICIPANT_ROLE = "solver_participant"

SOLVER_PARTICIPANT_EXPRESSION = (
    "(RequirementsInscription.GiveRequirements)+ · (Assignment)+ · (Provides)+ · "
    "(Offer_activity.SelectActivity.WorkIdeas)+ · "
    "(Offer_method.SelectMethod.WorkIdeaCards.Improve)+ · (CompareIdeas)+ · "
    "(SendingIdeaCards.ReceivingPossibleSolutions)+ · "
    "(WatchingPossibleSolutions.AwardsEnd)+"
)

DEFAULT_CORPUS = (
    "# Role protocol corpus: one `role_name = expression` per line.\n"
    f"{SOLVER_PARTICIPANT_ROLE} = {SOLVER_PARTICIPANT_EXPRESSION}\n"
)


def parse_corpus(text: str) -> dict[str, ProtocolAutomaton]:
    """Parse a corpus file: ``role_name = expression`` lines, ``#`` comments."""
    corpus: dict[str, ProtocolAutomaton] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(0, f"line {lineno}: expected `role = expression`")
        name, expr = line.split("=", 1)
        corpus[name.strip()] = parse_liveness(expr.strip())
    return corpus


def default_corpus() -> dict[str, ProtocolAutomaton]:
    return parse_corpus(DEFAULT_CORPUS)
