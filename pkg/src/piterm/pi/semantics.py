"""Reference interpreter for the process reduction semantics.

Structural congruence is handled by canonicalization: parallel compositions
are flattened into a multiset, Nil members dropped, and top-level
restrictions hoisted with canonical names, which makes state identity
decidable for exhaustive exploration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..exprs import IntLit, eval_simple_expr
from ..search import BudgetExhausted, Diverges, ExploreResult, Terminates, explore
from .ast import (If, Input, LetNd, Nil, Nu, Output, Par, Process, RepInput,
                  canonical_key, free_names, substitute)

eval_simple_expr = eval_simple_expr  # re-exported: shared with the sequential language


@dataclass(frozen=True)
class NondetDomain:
    """Finite set of integers used to instantiate nondeterministic binders."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("nondeterminism domain must be non-empty")

    @staticmethod
    def parse(text: str) -> "NondetDomain":
        """Parse 'a..b' or a comma-separated list of integers."""
        if ".." in text:
            lo, hi = text.split("..", 1)
            return NondetDomain(tuple(range(int(lo), int(hi) + 1)))
        return NondetDomain(tuple(int(t) for t in text.split(",")))


@dataclass(frozen=True)
class ProcState:
    """Canonical form: hoisted restricted names plus a parallel multiset."""

    restricted: tuple  # canonical restricted names ("#0", "#1", ...)
    members: tuple  # tuple[Process, ...] in canonical order

    def key(self):
        return tuple(canonical_key(m) for m in self.members)


_MAX_TIE_PERMS = 5040  # bail out of exhaustive tie-breaking beyond this


def _decompose(p: Process, restricted: list, members: list, counter: list):
    """Flatten the Par/Nu spine; restricted names renamed apart eagerly."""
    if isinstance(p, Nil):
        return
    if isinstance(p, Par):
        _decompose(p.left, restricted, members, counter)
        _decompose(p.right, restricted, members, counter)
    elif isinstance(p, Nu):
        fresh = f"#t{counter[0]}"
        counter[0] += 1
        restricted.append(fresh)
        _decompose(substitute(p.body, {}, {p.name: fresh}), restricted, members, counter)
    else:
        members.append(p)


def canonicalize(p: Process | list) -> ProcState:
    """Canonical state of a process (or list of parallel members)."""
    restricted: list = []
    members: list = []
    counter = [0]
    if isinstance(p, list):
        for q in p:
            _decompose(q, restricted, members, counter)
    else:
        _decompose(p, restricted, members, counter)

    # drop restrictions that no longer occur
    used = set()
    for m in members:
        ints, chans = free_names(m)
        used |= chans | ints
    restricted = [r for r in restricted if r in used]

    # mask restricted names to group structurally-identical members
    mask = {r: ("R",) for r in restricted}
    masked = [(canonical_key(m, mask), i) for i, m in enumerate(members)]
    masked.sort(key=lambda t: (repr(t[0]), t[1]))

    groups: list = []
    for key, group in itertools.groupby(masked, key=lambda t: t[0]):
        groups.append([i for _, i in group])

    def assignment_for(order):
        naming: dict = {}
        for i in order:
            ints, chans = free_names(members[i])
            for n in _occurrence_order(members[i]):
                if n in restricted and n not in naming:
                    naming[n] = f"#{len(naming)}"
        for r in restricted:
            naming.setdefault(r, f"#{len(naming)}")
        return naming

    def encode(order, naming):
        env = {r: ("F", naming[r]) for r in restricted}
        return tuple(repr(canonical_key(members[i], env)) for i in order)

    # choose the lexicographically least encoding over orderings that permute
    # only within equal-masked-key groups
    n_perms = 1
    for g in groups:
        for k in range(2, len(g) + 1):
            n_perms *= k
    base_order = [i for g in groups for i in g]
    candidates = [base_order]
    if 1 < n_perms <= _MAX_TIE_PERMS:
        candidates = [
            [i for g in perm_groups for i in g]
            for perm_groups in itertools.product(*(list(itertools.permutations(g)) for g in groups))
        ]
    best = None
    for order in candidates:
        naming = assignment_for(order)
        enc = encode(order, naming)
        if best is None or enc < best[0]:
            best = (enc, order, naming)
    _, order, naming = best
    final_members = tuple(
        substitute(members[i], {}, {r: naming[r] for r in restricted}) for i in order
    )
    final_restricted = tuple(sorted(naming.values()))
    return ProcState(final_restricted, final_members)


def _occurrence_order(p: Process) -> list:
    """Channel names in first-occurrence order (for canonical naming)."""
    out: list = []
    seen: set = set()

    def add(n):
        if n not in seen:
            seen.add(n)
            out.append(n)

    def go(p):
        if isinstance(p, Nil):
            return
        if isinstance(p, Output):
            add(p.chan)
            for w in p.chans:
                add(w)
            go(p.cont)
        elif isinstance(p, (Input, RepInput)):
            add(p.chan)
            go(p.cont)
        elif isinstance(p, Par):
            go(p.left)
            go(p.right)
        elif isinstance(p, Nu):
            go(p.body)
        elif isinstance(p, If):
            go(p.then)
            go(p.orelse)
        elif isinstance(p, LetNd):
            go(p.body)

    go(p)
    return out


def step_process(s: ProcState, dom: NondetDomain) -> set:
    """All one-step successors of a canonical state (re-canonicalized)."""
    out: dict = {}

    def emit(members: list):
        st = canonicalize(list(members))
        out[st.key()] = st

    members = list(s.members)
    for i, m in enumerate(members):
        rest = members[:i] + members[i + 1:]
        if isinstance(m, If):
            val = eval_simple_expr(m.cond, {})
            emit(rest + [m.then if val != 0 else m.orelse])
        elif isinstance(m, LetNd):
            for vals in itertools.product(dom.values, repeat=len(m.names)):
                emit(rest + [substitute(m.body, dict(zip(m.names, vals)), {})])
        elif isinstance(m, Output):
            # communication with every matching input member
            for j, n in enumerate(members):
                if i == j or not isinstance(n, (Input, RepInput)):
                    continue
                if n.chan != m.chan:
                    continue
                if len(n.int_params) != len(m.ints) or len(n.chan_params) != len(m.chans):
                    continue
                ivals = {y: IntLit(eval_simple_expr(v, {})) for y, v in zip(n.int_params, m.ints)}
                cvals = dict(zip(n.chan_params, m.chans))
                body = substitute(n.cont, ivals, cvals)
                others = [q for k, q in enumerate(members) if k not in (i, j)]
                if isinstance(n, RepInput):
                    emit(others + [n, body, m.cont])
                else:
                    emit(others + [body, m.cont])
    return set(out.values())


def explore_terminates(p: Process, dom: NondetDomain, budget: int = 100_000) -> ExploreResult:
    """Exhaustively explore the reduction graph of p restricted to dom."""
    init = canonicalize(p)
    return explore(
        [(init.key(), init)],
        lambda st: [(t.key(), t) for t in step_process(st, dom)],
        budget,
    )
