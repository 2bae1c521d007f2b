"""Parser for the textual IR of sequential programs.

    def F_r1(n) = if n<2 then F_r2(1) else (F_r1(n-1) [] F_r1(n-2) [] let* x,y in F_r2(x+y))
    def F_r2(z) = skip
    main = let* m in F_r1(m)

`[]` is nondeterministic choice (lowest precedence, right-associative);
`assume(phi); E` is the guarded expression; prefix forms take an atomic
body, so choices under a prefix need parentheses.
"""

from __future__ import annotations

import re

from ..exprs import IntLit, Op, SimpleExpr, Var
from ..pi.parser import ParseError, Token
from .ast import Assume, Call, Choice, Definition, If, LetNd, SeqExpr, SeqProgram, Skip

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<choice>\[\])
  | (?P<letstar>let\*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<op><=|>=|!=|<|>|=|\+|-|\*|\(|\)|,|;)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"def", "main", "if", "then", "else", "in", "skip", "assume", "and", "or", "not", "true", "false"}


def _tokenize(source: str) -> list:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        text = m.group(0)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _IRParser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text):
        return self.peek().text == text

    def error(self, message, expected=()):
        t = self.peek()
        raise ParseError(f"{message} (found {t.text!r})", t.line, t.col, expected)

    def expect(self, text):
        if not self.at(text):
            self.error(f"expected {text!r}", expected=(text,))
        return self.next()

    def ident(self):
        t = self.peek()
        if t.kind != "name" or t.text in _KEYWORDS:
            self.error("expected identifier")
        return self.next().text

    def parse_program(self) -> SeqProgram:
        defs = []
        main = None
        while self.peek().kind != "eof":
            if self.at("def"):
                self.next()
                fname = self.ident()
                self.expect("(")
                params = []
                if not self.at(")"):
                    params.append(self.ident())
                    while self.at(","):
                        self.next()
                        params.append(self.ident())
                self.expect(")")
                self.expect("=")
                defs.append(Definition(fname, tuple(params), self.parse_choice()))
            elif self.at("main"):
                self.next()
                self.expect("=")
                if main is not None:
                    self.error("duplicate main")
                main = self.parse_choice()
            else:
                self.error("expected 'def' or 'main'")
        if main is None:
            main = Skip()
        return SeqProgram(tuple(defs), main)

    def parse_choice(self) -> SeqExpr:
        left = self.parse_atom()
        if self.at("[]"):
            self.next()
            return Choice(left, self.parse_choice())
        return left

    def parse_atom(self) -> SeqExpr:
        t = self.peek()
        if t.text == "skip":
            self.next()
            return Skip()
        if t.text == "(":
            self.next()
            e = self.parse_choice()
            self.expect(")")
            return e
        if t.text == "if":
            self.next()
            cond = self.parse_sexp()
            self.expect("then")
            then = self.parse_atom()
            self.expect("else")
            return If(cond, then, self.parse_atom())
        if t.kind == "letstar":
            self.next()
            names = [self.ident()]
            while self.at(","):
                self.next()
                names.append(self.ident())
            self.expect("in")
            return LetNd(tuple(names), self.parse_atom())
        if t.text == "assume":
            self.next()
            self.expect("(")
            cond = self.parse_sexp()
            self.expect(")")
            self.expect(";")
            return Assume(cond, self.parse_atom())
        if t.kind == "name" and t.text not in _KEYWORDS:
            fname = self.ident()
            self.expect("(")
            args = []
            if not self.at(")"):
                args.append(self.parse_sexp())
                while self.at(","):
                    self.next()
                    args.append(self.parse_sexp())
            self.expect(")")
            return Call(fname, tuple(args))
        self.error("expected expression")

    # simple expressions: same precedence ladder as the process language
    def parse_sexp(self):
        return self.parse_or()

    def parse_or(self):
        e = self.parse_and()
        while self.at("or"):
            self.next()
            e = Op("or", (e, self.parse_and()))
        return e

    def parse_and(self):
        e = self.parse_cmp()
        while self.at("and"):
            self.next()
            e = Op("and", (e, self.parse_cmp()))
        return e

    def parse_cmp(self):
        e = self.parse_add()
        if self.peek().text in ("<", "<=", "=", "!=", ">", ">="):
            op = self.next().text
            return Op(op, (e, self.parse_add()))
        return e

    def parse_add(self):
        e = self.parse_mul()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            e = Op(op, (e, self.parse_mul()))
        return e

    def parse_mul(self):
        e = self.parse_satom()
        while self.at("*"):
            self.next()
            e = Op("*", (e, self.parse_satom()))
        return e

    def parse_satom(self) -> SimpleExpr:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return IntLit(int(t.text))
        if t.text == "-":
            self.next()
            inner = self.parse_satom()
            if isinstance(inner, IntLit):
                return IntLit(-inner.value)
            return Op("-", (IntLit(0), inner))
        if t.text == "not":
            self.next()
            return Op("not", (self.parse_satom(),))
        if t.text == "true":
            self.next()
            return IntLit(1)
        if t.text == "false":
            self.next()
            return IntLit(0)
        if t.text == "(":
            self.next()
            e = self.parse_sexp()
            self.expect(")")
            return e
        if t.kind == "name" and t.text not in _KEYWORDS:
            self.next()
            return Var(t.text)
        self.error("expected expression")


def parse_program(source: str) -> SeqProgram:
    p = _IRParser(_tokenize(source))
    return p.parse_program()


def parse_seq_expr(source: str) -> SeqExpr:
    p = _IRParser(_tokenize(source))
    e = p.parse_choice()
    if p.peek().kind != "eof":
        p.error("trailing input after expression")
    return e
