"""AST for the nondeterministic sequential target language.

A program is a multiset of function definitions plus a main expression.
Multiple definitions may share a function name; a call then picks one
nondeterministically. Choice is the only branching composition and is
subject to the congruence axioms (commutativity, associativity, Skip unit).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..exprs import SimpleExpr, expr_key, expr_vars, subst_expr

SeqExpr = Union["Skip", "LetNd", "Call", "Choice", "If", "Assume"]


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class LetNd:
    names: tuple  # tuple[str, ...]
    body: SeqExpr


@dataclass(frozen=True)
class Call:
    fname: str
    args: tuple  # tuple[SimpleExpr, ...]


@dataclass(frozen=True)
class Choice:
    left: SeqExpr
    right: SeqExpr


@dataclass(frozen=True)
class If:
    cond: SimpleExpr
    then: SeqExpr
    orelse: SeqExpr


@dataclass(frozen=True)
class Assume:
    cond: SimpleExpr
    body: SeqExpr
    # provenance of a refinement guard (predicate name, argument terms);
    # ignored by equality so congruence laws see through it
    origin: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Definition:
    fname: str
    params: tuple  # tuple[str, ...]
    body: SeqExpr


@dataclass(frozen=True)
class SeqProgram:
    defs: tuple  # tuple[Definition, ...]  (a multiset; order irrelevant)
    main: SeqExpr

    def defs_of(self, fname: str) -> list:
        return [d for d in self.defs if d.fname == fname]


def expr_free_vars(e: SeqExpr) -> frozenset:
    """Free (integer) variables of an expression; function names excluded."""
    out: set = set()

    def go(e, bound: frozenset):
        if isinstance(e, Skip):
            return
        if isinstance(e, LetNd):
            go(e.body, bound | set(e.names))
        elif isinstance(e, Call):
            for a in e.args:
                out.update(x for x in expr_vars(a) if x not in bound)
        elif isinstance(e, Choice):
            go(e.left, bound)
            go(e.right, bound)
        elif isinstance(e, If):
            out.update(x for x in expr_vars(e.cond) if x not in bound)
            go(e.then, bound)
            go(e.orelse, bound)
        elif isinstance(e, Assume):
            out.update(x for x in expr_vars(e.cond) if x not in bound)
            go(e.body, bound)
        else:
            raise AssertionError(e)

    go(e, frozenset())
    return frozenset(out)


def subst_seq(e: SeqExpr, subst: dict) -> SeqExpr:
    """Substitute integer expressions for free variables (capture-avoiding).

    Substitution ranges in this toolchain are closed (integer literals), so
    binders only ever shadow, never capture.
    """
    if not subst:
        return e
    if isinstance(e, Skip):
        return e
    if isinstance(e, LetNd):
        inner = {k: v for k, v in subst.items() if k not in e.names}
        return LetNd(e.names, subst_seq(e.body, inner))
    if isinstance(e, Call):
        return Call(e.fname, tuple(subst_expr(a, subst) for a in e.args))
    if isinstance(e, Choice):
        return Choice(subst_seq(e.left, subst), subst_seq(e.right, subst))
    if isinstance(e, If):
        return If(subst_expr(e.cond, subst), subst_seq(e.then, subst), subst_seq(e.orelse, subst))
    if isinstance(e, Assume):
        return Assume(subst_expr(e.cond, subst), subst_seq(e.body, subst), origin=e.origin)
    raise AssertionError(e)


def seq_key(e: SeqExpr, env: dict | None = None, depth: int = 0):
    """Alpha-invariant structural key (LetNd binders normalized away)."""
    env = env or {}
    if isinstance(e, Skip):
        return ("skip",)
    if isinstance(e, LetNd):
        env2 = dict(env)
        for i, x in enumerate(e.names):
            env2[x] = ("B", depth, i)
        return ("let", len(e.names), seq_key(e.body, env2, depth + 1))
    if isinstance(e, Call):
        return ("call", e.fname) + tuple(expr_key(a, env) for a in e.args)
    if isinstance(e, Choice):
        return ("cho", seq_key(e.left, env, depth), seq_key(e.right, env, depth))
    if isinstance(e, If):
        return ("if", expr_key(e.cond, env), seq_key(e.then, env, depth), seq_key(e.orelse, env, depth))
    if isinstance(e, Assume):
        return ("asm", expr_key(e.cond, env), seq_key(e.body, env, depth))
    raise AssertionError(e)


def def_key(d: Definition):
    env = {x: ("P", i) for i, x in enumerate(d.params)}
    return (d.fname, len(d.params), seq_key(d.body, env, 0))


def alpha_equal_expr(a: SeqExpr, b: SeqExpr) -> bool:
    return seq_key(a) == seq_key(b)
