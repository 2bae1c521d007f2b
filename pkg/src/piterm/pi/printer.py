"""Pretty-printer for processes; output re-parses to an alpha-equivalent AST."""

from __future__ import annotations

from ..exprs import print_expr
from .ast import ChanType, If, Input, LetNd, Nil, Nu, Output, Par, Process, RepInput


def print_chtype(t: ChanType) -> str:
    ints = ",".join(["int"] * t.int_arity)
    if t.chan_payload:
        chans = ",".join(print_chtype(s) for s in t.chan_payload)
        return f"ch({ints};{chans})"
    return f"ch({ints})"


def _payload(ints, chans) -> str:
    s = ",".join(print_expr(v) for v in ints)
    if chans:
        s += ";" + ",".join(chans)
    return s


def _prefix(p: Process) -> str:
    """Render p at prefix level: parenthesize parallel compositions."""
    if isinstance(p, Par):
        return f"({print_process(p)})"
    return print_process(p)


def _cont(p: Process) -> str:
    if isinstance(p, Nil):
        return ""
    return "." + _prefix(p)


def print_process(p: Process) -> str:
    if isinstance(p, Nil):
        return "0"
    if isinstance(p, Output):
        return f"{p.chan}!({_payload(p.ints, p.chans)}){_cont(p.cont)}"
    if isinstance(p, Input):
        return f"{p.chan}?({_payload_binders(p)}){_cont(p.cont)}"
    if isinstance(p, RepInput):
        return f"*{p.chan}?({_payload_binders(p)}){_cont(p.cont)}"
    if isinstance(p, Par):
        return f"{_prefix(p.left)} | {print_process(p.right) if isinstance(p.right, Par) else _prefix(p.right)}"
    if isinstance(p, Nu):
        annot = f" : {print_chtype(p.annot)}" if p.annot is not None else ""
        return f"new {p.name}{annot} in {_prefix(p.body)}"
    if isinstance(p, If):
        return f"if {print_expr(p.cond)} then {_prefix(p.then)} else {_prefix(p.orelse)}"
    if isinstance(p, LetNd):
        return f"let* {','.join(p.names)} in {_prefix(p.body)}"
    raise AssertionError(p)


def _payload_binders(p) -> str:
    s = ",".join(p.int_params)
    if p.chan_params:
        s += ";" + ",".join(p.chan_params)
    return s
