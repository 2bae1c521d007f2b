"""Recursive-descent parser for the .pi concrete syntax.

Grammar sketch (prefixes bind tighter than `|`, which is right-associative):

    process := "0"
             | name "!" "(" payload ")" ["." process]
             | ["*"] name "?" "(" binders ")" ["." process]
             | process "|" process
             | "new" name [":" chtype] "in" process
             | "if" sexp "then" process "else" process
             | "let*" name {"," name} "in" process
             | "(" process ")"
    payload := sexps [";" names] | ";" names |
    chtype  := "ch" "(" ["int" {"," "int"}] [";" chtype {"," chtype}] ")"

An omitted continuation after an output or input means `.0`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..exprs import IntLit, Op, SimpleExpr, Var
from .ast import ChanType, If, Input, LetNd, Nil, Nu, Output, Par, Process, RepInput

RESERVED = {"new", "in", "if", "then", "else", "let", "true", "false", "and", "or", "not", "ch", "int"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<letstar>let\*)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<op><=|>=|!=|<|>|=|\+|-|\*|\(|\)|\||\.|!|\?|;|,|:)
    """,
    re.VERBOSE,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected=()):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.expected = tuple(expected)


@dataclass
class Token:
    kind: str  # 'name' | 'int' | 'op' | 'letstar' | 'eof'
    text: str
    line: int
    col: int


def tokenize(source: str) -> list:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, message, expected=()):
        t = self.peek()
        raise ParseError(f"{message} (found {t.text!r})", t.line, t.col, expected)

    def expect(self, text) -> Token:
        t = self.peek()
        if t.text != text:
            self.error(f"expected {text!r}", expected=(text,))
        return self.next()

    def at(self, text) -> bool:
        return self.peek().text == text

    def ident(self) -> str:
        t = self.peek()
        if t.kind != "name" or t.text in RESERVED:
            self.error("expected identifier", expected=("identifier",))
        return self.next().text

    # --- processes ---

    def parse_par(self) -> Process:
        left = self.parse_prefix()
        if self.at("|"):
            self.next()
            right = self.parse_par()
            return Par(left, right)
        return left

    def parse_prefix(self) -> Process:
        t = self.peek()
        span = (t.line, t.col)
        if t.text == "0":
            self.next()
            return Nil(span=span)
        if t.text == "(":
            self.next()
            p = self.parse_par()
            self.expect(")")
            return p
        if t.text == "new":
            self.next()
            name = self.ident()
            annot = None
            if self.at(":"):
                self.next()
                annot = self.parse_chtype()
            self.expect("in")
            return Nu(name, annot, self.parse_prefix(), span=span)
        if t.text == "if":
            self.next()
            cond = self.parse_sexp()
            self.expect("then")
            then = self.parse_prefix()
            self.expect("else")
            return If(cond, then, self.parse_prefix(), span=span)
        if t.kind == "letstar":
            self.next()
            names = [self.ident()]
            while self.at(","):
                self.next()
                names.append(self.ident())
            self.expect("in")
            return LetNd(tuple(names), self.parse_prefix(), span=span)
        if t.text == "*":
            self.next()
            return self.parse_comm(replicated=True, span=span)
        if t.kind == "name" and t.text not in RESERVED:
            return self.parse_comm(replicated=False, span=span)
        self.error("expected process", expected=("process",))

    def parse_comm(self, replicated: bool, span) -> Process:
        chan = self.ident()
        t = self.peek()
        if t.text == "!":
            if replicated:
                self.error("replication applies to inputs only")
            self.next()
            self.expect("(")
            ints, chans = self.parse_payload()
            self.expect(")")
            cont = self.parse_cont()
            return Output(chan, tuple(ints), tuple(chans), cont, span=span)
        if t.text == "?":
            self.next()
            self.expect("(")
            int_params, chan_params = self.parse_binders()
            self.expect(")")
            cont = self.parse_cont()
            cls = RepInput if replicated else Input
            return cls(chan, tuple(int_params), tuple(chan_params), cont, span=span)
        self.error("expected '!' or '?' after channel name", expected=("!", "?"))

    def parse_cont(self) -> Process:
        if self.at("."):
            self.next()
            return self.parse_prefix()
        return Nil()

    def parse_payload(self):
        ints, chans = [], []
        if self.at(")"):
            return ints, chans
        if self.at(";"):
            self.next()
            chans = self.parse_names()
            return ints, chans
        ints.append(self.parse_sexp())
        while self.at(","):
            self.next()
            ints.append(self.parse_sexp())
        if self.at(";"):
            self.next()
            if not self.at(")"):
                chans = self.parse_names()
        return ints, chans

    def parse_binders(self):
        ints, chans = [], []
        if self.at(")"):
            return ints, chans
        if self.at(";"):
            self.next()
            chans = self.parse_names()
            return ints, chans
        ints = self.parse_names()
        if self.at(";"):
            self.next()
            if not self.at(")"):
                chans = self.parse_names()
        return ints, chans

    def parse_names(self):
        names = [self.ident()]
        while self.at(","):
            self.next()
            names.append(self.ident())
        return names

    # --- channel type annotations ---

    def parse_chtype(self) -> ChanType:
        self.expect("ch")
        self.expect("(")
        arity = 0
        payload = []
        if self.at("int"):
            self.next()
            arity = 1
            while self.at(","):
                self.next()
                self.expect("int")
                arity += 1
        if self.at(";"):
            self.next()
            if not self.at(")"):
                payload.append(self.parse_chtype())
                while self.at(","):
                    self.next()
                    payload.append(self.parse_chtype())
        self.expect(")")
        return ChanType(None, arity, tuple(payload))

    # --- simple expressions (precedence: or < and < cmp < +,- < *) ---

    def parse_sexp(self) -> SimpleExpr:
        return self.parse_or()

    def parse_or(self) -> SimpleExpr:
        e = self.parse_and()
        while self.at("or"):
            self.next()
            e = Op("or", (e, self.parse_and()))
        return e

    def parse_and(self) -> SimpleExpr:
        e = self.parse_cmp()
        while self.at("and"):
            self.next()
            e = Op("and", (e, self.parse_cmp()))
        return e

    def parse_cmp(self) -> SimpleExpr:
        e = self.parse_add()
        if self.peek().text in ("<", "<=", "=", "!=", ">", ">="):
            op = self.next().text
            return Op(op, (e, self.parse_add()))
        return e

    def parse_add(self) -> SimpleExpr:
        e = self.parse_mul()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            e = Op(op, (e, self.parse_mul()))
        return e

    def parse_mul(self) -> SimpleExpr:
        e = self.parse_atom()
        while self.at("*"):
            self.next()
            e = Op("*", (e, self.parse_atom()))
        return e

    def parse_atom(self) -> SimpleExpr:
        t = self.peek()
        span = (t.line, t.col)
        if t.kind == "int":
            self.next()
            return IntLit(int(t.text), span=span)
        if t.text == "-":
            self.next()
            inner = self.parse_atom()
            if isinstance(inner, IntLit):
                return IntLit(-inner.value, span=span)
            return Op("-", (IntLit(0), inner), span=span)
        if t.text == "not":
            self.next()
            return Op("not", (self.parse_atom(),), span=span)
        if t.text == "true":
            self.next()
            return IntLit(1, span=span)
        if t.text == "false":
            self.next()
            return IntLit(0, span=span)
        if t.text == "(":
            self.next()
            e = self.parse_sexp()
            self.expect(")")
            return e
        if t.kind == "name" and t.text not in RESERVED:
            self.next()
            return Var(t.text, span=span)
        self.error("expected expression", expected=("expression",))


def parse_process(source: str) -> Process:
    """Parse a .pi source text into a Process; raises ParseError on bad input."""
    p = _Parser(tokenize(source))
    result = p.parse_par()
    if p.peek().kind != "eof":
        p.error("trailing input after process")
    return result


def parse_expr(source: str) -> SimpleExpr:
    p = _Parser(tokenize(source))
    result = p.parse_sexp()
    if p.peek().kind != "eof":
        p.error("trailing input after expression")
    return result
