"""Propositional formulas over bottom, variables, conjunction, disjunction and implication.

Concrete syntax (lowest to highest binding)::

    formula ::= junction [ '->' formula ]          right-associative
    junction ::= unary ( '&' unary )* | unary ( '|' unary )*
    unary   ::= '~' unary | '_|_' | identifier | '(' formula ')'

Conjunction and disjunction share one precedence level, so a chain that mixes
them must be parenthesised.  Negation is sugar: ``~a`` is ``a -> _|_``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping

__all__ = [
    "Formula",
    "Bottom",
    "Var",
    "And",
    "Or",
    "Implies",
    "BOT",
    "ParseError",
    "MissingBindingError",
    "neg",
    "parse",
    "to_text",
    "instantiate",
    "variables",
    "subformulas",
    "axiom",
    "AXIOM_NAMES",
    "conj",
    "disj",
    "size",
]

IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


class Formula:
    """Base class of the immutable formula AST."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    def __repr__(self) -> str:
        return "Bottom()"

    def __hash__(self) -> int:
        return 0x5BD1E995


@dataclass(frozen=True, slots=True)
class Var(Formula):
    name: str

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not IDENT.fullmatch(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")

    def __hash__(self) -> int:
        return hash(self.name)


# binary nodes cache their hash: sequent search hashes the same formulas constantly
@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((1, self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((2, self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((3, self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash


BOT = Bottom()


def neg(f: Formula) -> Implies:
    return Implies(f, BOT)


def is_neg(f: Formula) -> bool:
    return isinstance(f, Implies) and isinstance(f.right, Bottom)


def conj(fs) -> Formula:
    """Left-nested conjunction of a nonempty sequence."""
    fs = list(fs)
    if not fs:
        raise ValueError("empty conjunction")
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(fs) -> Formula:
    fs = list(fs)
    if not fs:
        raise ValueError("empty disjunction")
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    """Syntax error; ``offset`` is the UTF-8 byte offset of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


_TOKEN = re.compile(r"\s*(?:(->)|(_\|_)|([&|~()])|([a-zA-Z][a-zA-Z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:]
            stripped = len(rest) - len(rest.lstrip())
            if pos + stripped == n:
                break
            bad = pos + stripped
            raise ParseError(f"unexpected character {text[bad]!r}", _byte_offset(text, bad))
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("->", "->", start))
        elif m.group(2):
            tokens.append(("bot", "_|_", start))
        elif m.group(3):
            tokens.append((m.group(3), m.group(3), start))
        else:
            tokens.append(("ident", m.group(4), start))
        pos = m.end()
    tokens.append(("eof", "", n))
    return tokens


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: tuple[str, str, int]):
        raise ParseError(message, _byte_offset(self.text, tok[2]))

    def formula(self) -> Formula:
        left = self.junction()
        if self.peek()[0] == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def junction(self) -> Formula:
        out = self.unary()
        op = None
        while self.peek()[0] in ("&", "|"):
            tok = self.take()
            if op is not None and tok[0] != op:
                self.fail("'&' and '|' mixed without parentheses", tok)
            op = tok[0]
            right = self.unary()
            out = And(out, right) if op == "&" else Or(out, right)
        return out

    def unary(self) -> Formula:
        tok = self.take()
        kind = tok[0]
        if kind == "~":
            return neg(self.unary())
        if kind == "bot":
            return BOT
        if kind == "ident":
            return Var(tok[1])
        if kind == "(":
            inner = self.formula()
            close = self.take()
            if close[0] != ")":
                self.fail("expected ')'", close)
            return inner
        if kind == "eof":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected token {tok[1]!r}", tok)


def parse(text: str) -> Formula:
    if not text or not text.strip():
        raise ParseError("empty formula", 0)
    p = _Parser(text)
    f = p.formula()
    tok = p.peek()
    if tok[0] != "eof":
        p.fail(f"unexpected token {tok[1]!r}", tok)
    return f


# ---------------------------------------------------------------------------
# printing


def _atomic(f: Formula) -> bool:
    return isinstance(f, (Bottom, Var)) or is_neg(f)


def to_text(f: Formula) -> str:
    """Render with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Bottom):
        return "_|_"
    if isinstance(f, Var):
        return f.name
    if is_neg(f):
        inner = f.left
        body = to_text(inner)
        return "~" + (body if _atomic(inner) else f"({body})")
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        left = to_text(f.left)
        if not (_atomic(f.left) or type(f.left) is type(f)):
            left = f"({left})"
        right = to_text(f.right)
        if not _atomic(f.right):
            right = f"({right})"
        return left + op + right
    if isinstance(f, Implies):
        left = to_text(f.left)
        if isinstance(f.left, Implies) and not is_neg(f.left):
            left = f"({left})"
        return f"{left} -> {to_text(f.right)}"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# structure


def variables(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.name)
        elif isinstance(g, (And, Or, Implies)):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas in post-order (children before parents)."""
    seen: dict[Formula, None] = {}

    def walk(g: Formula) -> None:
        if g in seen:
            return
        if isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        seen[g] = None

    walk(f)
    return list(seen)


def size(f: Formula) -> int:
    if isinstance(f, (And, Or, Implies)):
        return 1 + size(f.left) + size(f.right)
    return 1


def iter_nodes(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, (And, Or, Implies)):
        yield from iter_nodes(f.left)
        yield from iter_nodes(f.right)


class MissingBindingError(ValueError):
    pass


def instantiate(schema: Formula, bindings: Mapping[str, Formula]) -> Formula:
    """Simultaneously replace the variables of ``schema`` by ``bindings``."""
    missing = sorted(variables(schema) - set(bindings))
    if missing:
        raise MissingBindingError(f"no binding for schema variable(s): {', '.join(missing)}")
    return _subst(schema, bindings)


def _subst(f: Formula, b: Mapping[str, Formula]) -> Formula:
    if isinstance(f, Var):
        return b[f.name]
    if isinstance(f, Bottom):
        return f
    return type(f)(_subst(f.left, b), _subst(f.right, b))


def rename(f: Formula, mapping: Mapping[str, str]) -> Formula:
    return _subst(f, {v: Var(mapping.get(v, v)) for v in variables(f)})


# ---------------------------------------------------------------------------
# axioms

_AXIOM_TEXT = {
    "su": "((~p -> q) & (~q -> p) -> r | s) -> (p -> r) | (q -> s)",
    "aa": "((~p -> q) -> r | s) -> ((~p -> q) -> r) | (~~p -> s)",
    "aa_plus": "((p -> q) -> r | s) -> ((p -> q) -> r) | (~p -> s)",
    "kp": "(~p -> q | r) -> (~p -> q) | (~p -> r)",
    "sa": "((~~p -> p) -> p | ~p) -> ~p | ~~p",
}

AXIOM_NAMES = tuple(_AXIOM_TEXT)


def axiom(name: str) -> Formula:
    try:
        return parse(_AXIOM_TEXT[name])
    except KeyError:
        raise ValueError(f"unknown axiom {name!r}; expected one of {', '.join(AXIOM_NAMES)}") from None
