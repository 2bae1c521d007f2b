"""Standard and non-standard reduction for sequential programs.

Standard reduction resolves a nondeterministic choice by discarding one
branch. Non-standard reduction instead reduces inside both branches and is
closed under the choice congruence (commutativity, associativity, Skip
unit), which we decide by a multiset-of-branches canonical form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..exprs import IntLit, eval_simple_expr
from ..pi.semantics import NondetDomain
from ..search import BudgetExhausted, Diverges, ExploreResult, Terminates, explore
from .ast import Assume, Call, Choice, Definition, If, LetNd, SeqExpr, SeqProgram, Skip, seq_key, subst_seq


def _branches(e: SeqExpr) -> list:
    """Flatten the choice tree into its non-choice branches, dropping Skip."""
    if isinstance(e, Choice):
        return _branches(e.left) + _branches(e.right)
    if isinstance(e, Skip):
        return []
    return [e]


def congruence_normal_form(e: SeqExpr) -> SeqExpr:
    """Canonical representative of e's congruence class.

    Branch multisets are sorted structurally; the normalization recurses
    into every subexpression, and is idempotent.
    """
    e = _canon_inside(e)
    return _rebuild(_branches(e))


def _canon_inside(e: SeqExpr) -> SeqExpr:
    if isinstance(e, (Skip, Call)):
        return e
    if isinstance(e, Choice):
        return Choice(congruence_normal_form(e.left), congruence_normal_form(e.right))
    if isinstance(e, If):
        return If(e.cond, congruence_normal_form(e.then), congruence_normal_form(e.orelse))
    if isinstance(e, LetNd):
        return LetNd(e.names, congruence_normal_form(e.body))
    if isinstance(e, Assume):
        return Assume(e.cond, congruence_normal_form(e.body), origin=e.origin)
    raise AssertionError(e)


def _rebuild(branches: list) -> SeqExpr:
    if not branches:
        return Skip()
    branches = sorted(branches, key=lambda b: repr(seq_key(b)))
    out = branches[-1]
    for b in reversed(branches[:-1]):
        out = Choice(b, out)
    return out


def expr_congruent(a: SeqExpr, b: SeqExpr) -> bool:
    """Decide the least congruence generated by the choice axioms."""
    return seq_key(congruence_normal_form(a)) == seq_key(congruence_normal_form(b))


def _top_steps(prog: SeqProgram, e: SeqExpr, dom: NondetDomain) -> list:
    """Successors of e by the choice-free top-level rules."""
    if isinstance(e, Skip):
        return []
    if isinstance(e, LetNd):
        out = []
        for vals in itertools.product(dom.values, repeat=len(e.names)):
            out.append(subst_seq(e.body, {x: IntLit(v) for x, v in zip(e.names, vals)}))
        return out
    if isinstance(e, Call):
        args = [eval_simple_expr(a, {}) for a in e.args]
        out = []
        for d in prog.defs_of(e.fname):
            if len(d.params) != len(args):
                raise ValueError(f"arity mismatch calling {e.fname}")
            out.append(subst_seq(d.body, {p: IntLit(v) for p, v in zip(d.params, args)}))
        return out
    if isinstance(e, If):
        val = eval_simple_expr(e.cond, {})
        return [e.then if val != 0 else e.orelse]
    if isinstance(e, Assume):
        val = eval_simple_expr(e.cond, {})
        return [e.body if val != 0 else Skip()]
    return None  # Choice: handled by the caller


def step_standard(prog: SeqProgram, dom: NondetDomain, e: SeqExpr = None) -> set:
    """One-step successors under standard reduction (choices discard a branch)."""
    e = prog.main if e is None else e
    if isinstance(e, Choice):
        return {e.left, e.right}
    steps = _top_steps(prog, e, dom)
    return set(steps)


def step_nonstandard(prog: SeqProgram, dom: NondetDomain, e: SeqExpr = None) -> set:
    """One-step successors under non-standard reduction, canonicalized.

    Reduction happens inside the branches of choices without discarding
    either branch; results are congruence normal forms.
    """
    e = congruence_normal_form(prog.main if e is None else e)
    branches = _branches(e)
    out = set()
    for i, b in enumerate(branches):
        rest = branches[:i] + branches[i + 1:]
        for succ in _top_steps(prog, b, dom):
            out.add(congruence_normal_form(_rebuild(rest + _branches(_canon_inside(succ)))))
    return out


def explore_seq_terminates(prog: SeqProgram, dom: NondetDomain, budget: int = 100_000,
                           semantics: str = "standard") -> ExploreResult:
    """Exhaustive exploration of the reduction graph of (defs, main)."""
    if semantics == "standard":
        init = prog.main
        step = lambda s: step_standard(prog, dom, s)
    elif semantics == "nonstandard":
        init = congruence_normal_form(prog.main)
        step = lambda s: step_nonstandard(prog, dom, s)
    else:
        raise ValueError(f"unknown semantics {semantics!r}")
    return explore(
        [(seq_key(init), init)],
        lambda s: [(seq_key(t), t) for t in step(s)],
        budget,
    )


@dataclass
class ChoiceTrace:
    """Result of a deterministic run: call states and guard events."""

    calls: list  # list[(fname, tuple[int])]
    finished: bool  # reduced to skip (True) or ran out of choices (False)
    assume_failed: bool = False


class _Choices:
    def __init__(self, values):
        self.values = list(values)
        self.i = 0

    def next(self) -> int:
        if self.i >= len(self.values):
            raise IndexError
        v = self.values[self.i]
        self.i += 1
        return v


def run_with_choices(prog: SeqProgram, choices: list, max_steps: int = 10_000) -> ChoiceTrace:
    """Execute under standard reduction, consuming `choices` deterministically.

    Consumption order mirrors the emitted C: one integer per choice branch
    (nonzero = left), one per nondeterministically-chosen definition, and one
    per let*-bound variable. Used to cross-check C emission fidelity.
    """
    ch = _Choices(choices)
    e = prog.main
    trace = ChoiceTrace(calls=[], finished=False)
    try:
        for _ in range(max_steps):
            if isinstance(e, Skip):
                trace.finished = True
                return trace
            if isinstance(e, Choice):
                e = e.left if ch.next() != 0 else e.right
            elif isinstance(e, LetNd):
                vals = {x: IntLit(ch.next()) for x in e.names}
                e = subst_seq(e.body, vals)
            elif isinstance(e, Call):
                args = tuple(eval_simple_expr(a, {}) for a in e.args)
                defs = prog.defs_of(e.fname)
                if not defs:
                    raise ValueError(f"undefined function {e.fname}")
                d = defs[ch.next() % len(defs)] if len(defs) > 1 else defs[0]
                trace.calls.append((e.fname, args))
                e = subst_seq(d.body, {p: IntLit(v) for p, v in zip(d.params, args)})
            elif isinstance(e, If):
                e = e.then if eval_simple_expr(e.cond, {}) != 0 else e.orelse
            elif isinstance(e, Assume):
                if eval_simple_expr(e.cond, {}) != 0:
                    e = e.body
                else:
                    trace.finished = True
                    trace.assume_failed = True
                    return trace
            else:
                raise AssertionError(e)
    except IndexError:
        return trace
    return trace
