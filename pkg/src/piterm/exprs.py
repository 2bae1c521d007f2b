"""Integer-valued simple expressions shared by the process and sequential languages.

Comparisons and boolean connectives evaluate to 0/1, so conditionals need
no separate boolean type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

SimpleExpr = Union["Var", "IntLit", "Op"]

# op symbol -> arity (None = variadic, at least 1)
OPS = {
    "+": 2,
    "-": 2,
    "*": 2,
    "<": 2,
    "<=": 2,
    "=": 2,
    "!=": 2,
    ">": 2,
    ">=": 2,
    "and": 2,
    "or": 2,
    "not": 1,
}


@dataclass(frozen=True)
class Var:
    name: str
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class IntLit:
    value: int
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Op:
    op: str
    args: tuple
    span: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown operator {self.op!r}")
        if len(self.args) != OPS[self.op]:
            raise ValueError(f"operator {self.op!r} expects {OPS[self.op]} args, got {len(self.args)}")


class UnboundVariable(Exception):
    def __init__(self, name: str):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


def _b(x: bool) -> int:
    return 1 if x else 0


def eval_simple_expr(v: SimpleExpr, env: Mapping[str, int]) -> int:
    """Evaluate under an integer environment; comparisons yield 0/1."""
    if isinstance(v, IntLit):
        return v.value
    if isinstance(v, Var):
        if v.name not in env:
            raise UnboundVariable(v.name)
        return env[v.name]
    args = [eval_simple_expr(a, env) for a in v.args]
    op = v.op
    if op == "+":
        return args[0] + args[1]
    if op == "-":
        return args[0] - args[1]
    if op == "*":
        return args[0] * args[1]
    if op == "<":
        return _b(args[0] < args[1])
    if op == "<=":
        return _b(args[0] <= args[1])
    if op == "=":
        return _b(args[0] == args[1])
    if op == "!=":
        return _b(args[0] != args[1])
    if op == ">":
        return _b(args[0] > args[1])
    if op == ">=":
        return _b(args[0] >= args[1])
    if op == "and":
        return _b(args[0] != 0 and args[1] != 0)
    if op == "or":
        return _b(args[0] != 0 or args[1] != 0)
    if op == "not":
        return _b(args[0] == 0)
    raise AssertionError(op)


def expr_vars(v: SimpleExpr) -> Iterator[str]:
    """All variable names occurring in v (with repetitions)."""
    if isinstance(v, Var):
        yield v.name
    elif isinstance(v, Op):
        for a in v.args:
            yield from expr_vars(a)


def subst_expr(v: SimpleExpr, subst: Mapping[str, SimpleExpr]) -> SimpleExpr:
    if isinstance(v, Var):
        return subst.get(v.name, v)
    if isinstance(v, Op):
        return Op(v.op, tuple(subst_expr(a, subst) for a in v.args))
    return v


# Precedence levels for printing (higher binds tighter).
_PREC = {
    "or": 1,
    "and": 2,
    "<": 3, "<=": 3, "=": 3, "!=": 3, ">": 3, ">=": 3,
    "+": 4, "-": 4,
    "*": 5,
    "not": 6,
}


def print_expr(v: SimpleExpr, parent_prec: int = 0) -> str:
    if isinstance(v, IntLit):
        if v.value < 0 and parent_prec > 4:
            return f"({v.value})"
        return str(v.value)
    if isinstance(v, Var):
        return v.name
    prec = _PREC[v.op]
    if v.op == "not":
        body = f"not {print_expr(v.args[0], prec)}"
    else:
        # binary ops print left-associative; same-precedence right child gets parens
        lhs = print_expr(v.args[0], prec)
        rhs = print_expr(v.args[1], prec + 1)
        body = f"{lhs} {v.op} {rhs}"
    if prec < parent_prec:
        return f"({body})"
    return body


def expr_key(v: SimpleExpr, env: Mapping[str, object] | None = None):
    """Hashable structural key; bound names may be mapped through env."""
    if isinstance(v, IntLit):
        return ("i", v.value)
    if isinstance(v, Var):
        if env is not None and v.name in env:
            return ("v", env[v.name])
        return ("v", v.name)
    return ("op", v.op) + tuple(expr_key(a, env) for a in v.args)
