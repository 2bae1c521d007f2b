"""Printer for the sequential-program textual IR (one definition per line)."""

from __future__ import annotations

from ..exprs import print_expr
from .ast import Assume, Call, Choice, Definition, If, LetNd, SeqExpr, SeqProgram, Skip


def _atom(e: SeqExpr) -> str:
    if isinstance(e, Choice):
        return f"({print_seq_expr(e)})"
    return print_seq_expr(e)


def print_seq_expr(e: SeqExpr) -> str:
    if isinstance(e, Skip):
        return "skip"
    if isinstance(e, Call):
        return f"{e.fname}({', '.join(print_expr(a) for a in e.args)})"
    if isinstance(e, Choice):
        right = print_seq_expr(e.right) if isinstance(e.right, Choice) else _atom(e.right)
        return f"{_atom(e.left)} [] {right}"
    if isinstance(e, If):
        return f"if {print_expr(e.cond)} then {_atom(e.then)} else {_atom(e.orelse)}"
    if isinstance(e, LetNd):
        return f"let* {','.join(e.names)} in {_atom(e.body)}"
    if isinstance(e, Assume):
        return f"assume({print_expr(e.cond)}); {_atom(e.body)}"
    raise AssertionError(e)


def print_program(prog: SeqProgram) -> str:
    lines = [f"def {d.fname}({', '.join(d.params)}) = {print_seq_expr(d.body)}" for d in prog.defs]
    lines.append(f"main = {print_seq_expr(prog.main)}")
    return "\n".join(lines) + "\n"
