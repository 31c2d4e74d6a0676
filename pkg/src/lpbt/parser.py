"""Concrete ASCII syntax: tokenizer, precedence-climbing parser and printer.

Binding strength, tightest first::

    ~ G H F P [] <>     prefix
    &                   left
    |                   left
    =>                  right   (counterfactual)
    ->                  right
    <->                 right
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import (
    METAVARIABLES,
    And,
    Atom,
    AllFuture,
    AllPast,
    Bot,
    Counterfactual,
    Formula,
    HistNec,
    HistPoss,
    Iff,
    Implies,
    Not,
    Or,
    SomeFuture,
    SomePast,
    Top,
)

RESERVED = {"true", "false", "G", "H", "F", "P"}

PREFIX = {
    "~": Not,
    "G": AllFuture,
    "H": AllPast,
    "F": SomeFuture,
    "P": SomePast,
    "[]": HistNec,
    "<>": HistPoss,
}
PREFIX_SYMBOL = {cls: sym for sym, cls in PREFIX.items()}

# symbol -> (node type, precedence, right associative)
BINARY = {
    "<->": (Iff, 1, True),
    "->": (Implies, 2, True),
    "=>": (Counterfactual, 3, True),
    "|": (Or, 4, False),
    "&": (And, 5, False),
}
BINARY_INFO = {cls: (sym, prec, right) for sym, (cls, prec, right) in BINARY.items()}
UNARY_PREC = 6
LEAF_PREC = 7

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym><->|->|=>|\[\]|<>|[~&|()]))"
)


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = expected
        detail = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "sym" or "eof"
    text: str
    offset: int


_ANY_TOKEN = frozenset({"identifier", "~", "&", "|", "->", "<->", "=>", "[]", "<>", "(", ")"})


def tokenize(text: str) -> list[Token]:
    raw = text.encode("utf-8")
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", len(text[:pos].encode("utf-8")), _ANY_TOKEN)
        kind = "ident" if m.group("ident") else "sym"
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), len(text[:start].encode("utf-8"))))
        pos = m.end()
    tokens.append(Token("eof", "", len(raw)))
    return tokens


_OPERAND_START = frozenset({"atom", "true", "false", "("} | set(PREFIX))


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def parse(self) -> Formula:
        f = self.expr(1)
        if self.tok.kind != "eof":
            raise ParseError(
                f"unexpected {self.tok.text!r}", self.tok.offset, frozenset(BINARY) | {"end of input"}
            )
        return f

    def expr(self, min_prec: int) -> Formula:
        left = self.unary()
        while self.tok.kind == "sym" and self.tok.text in BINARY:
            cls, prec, right_assoc = BINARY[self.tok.text]
            if prec < min_prec:
                break
            self.i += 1
            right = self.expr(prec if right_assoc else prec + 1)
            left = cls(left, right)
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if tok.text in PREFIX and tok.kind in ("sym", "ident"):
            self.i += 1
            return PREFIX[tok.text](self.unary())
        if tok.kind == "ident":
            self.i += 1
            if tok.text == "true":
                return Top()
            if tok.text == "false":
                return Bot()
            if tok.text in RESERVED:
                raise ParseError(f"reserved word {tok.text!r} used as atom", tok.offset, _OPERAND_START)
            if not (tok.text[0].islower() or tok.text in METAVARIABLES):
                raise ParseError(f"invalid atom name {tok.text!r}", tok.offset, _OPERAND_START)
            return Atom(tok.text)
        if tok.text == "(" and tok.kind == "sym":
            self.i += 1
            inner = self.expr(1)
            if self.tok.text != ")" or self.tok.kind != "sym":
                raise ParseError(f"unexpected {self.tok.text or 'end of input'!r}", self.tok.offset, frozenset({")"}))
            self.i += 1
            return inner
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.offset, _OPERAND_START)


def parse(text: str) -> Formula:
    """Parse ``text`` into a formula; raises :class:`ParseError` on bad input."""
    return _Parser(text).parse()


def _prec(f: Formula) -> int:
    if type(f) in BINARY_INFO:
        return BINARY_INFO[type(f)][1]
    if type(f) in PREFIX_SYMBOL:
        return UNARY_PREC
    return LEAF_PREC


def render(f: Formula) -> str:
    """Print ``f`` with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if type(f) in PREFIX_SYMBOL:
        sym = PREFIX_SYMBOL[type(f)]
        body = render(f.body)
        if _prec(f.body) < UNARY_PREC:
            body = f"({body})"
        if sym == "~" or body.startswith("~"):
            return sym + body
        return f"{sym} {body}"
    sym, prec, right_assoc = BINARY_INFO[type(f)]
    left, right = render(f.left), render(f.right)
    lp, rp = _prec(f.left), _prec(f.right)
    if lp < prec or (lp == prec and right_assoc):
        left = f"({left})"
    if rp < prec or (rp == prec and not right_assoc):
        right = f"({right})"
    return f"{left} {sym} {right}"
