"""Process AST and syntactic utilities: free names, substitution, alpha-equivalence.

Binders: Nu binds its name; LetNd binds its names; Input/RepInput bind their
integer and channel parameters in the continuation. Payload lists on outputs
and inputs are split into an integer part and a channel part.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from ..exprs import IntLit, Op, SimpleExpr, Var, expr_key, expr_vars, subst_expr

Process = Union["Nil", "Output", "Input", "RepInput", "Par", "Nu", "If", "LetNd"]


@dataclass(frozen=True)
class ChanType:
    """Channel type: region label, integer payload arity, channel payload types.

    region is None on surface syntax annotations; type inference fills it in.
    """

    region: Optional[int]
    int_arity: int
    chan_payload: tuple  # tuple[ChanType, ...]

    def erased(self) -> "ChanType":
        return ChanType(None, self.int_arity, tuple(t.erased() for t in self.chan_payload))

    def __str__(self) -> str:
        ints = ",".join(["int"] * self.int_arity)
        chans = ",".join(str(t) for t in self.chan_payload)
        inner = ints if not chans else f"{ints};{chans}"
        if self.region is None:
            return f"ch({inner})"
        return f"ch[r{self.region}]({inner})"


@dataclass(frozen=True)
class Nil:
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Output:
    chan: str
    ints: tuple  # tuple[SimpleExpr, ...]
    chans: tuple  # tuple[str, ...]
    cont: Process
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Input:
    chan: str
    int_params: tuple  # tuple[str, ...]
    chan_params: tuple  # tuple[str, ...]
    cont: Process
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RepInput:
    chan: str
    int_params: tuple
    chan_params: tuple
    cont: Process
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Par:
    left: Process
    right: Process
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Nu:
    name: str
    annot: Optional[ChanType]
    body: Process
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class If:
    cond: SimpleExpr
    then: Process
    orelse: Process
    span: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class LetNd:
    names: tuple  # tuple[str, ...]
    body: Process
    span: tuple = field(default=None, compare=False, repr=False)


def free_names(p: Process) -> tuple[frozenset, frozenset]:
    """Free (integer variables, channel variables) of p.

    A name in expression position is an integer variable; names in
    subject/payload-channel position are channel variables.
    """
    ints: set = set()
    chans: set = set()

    def go(p: Process, bound_ints: frozenset, bound_chans: frozenset):
        if isinstance(p, Nil):
            return
        if isinstance(p, Output):
            if p.chan not in bound_chans:
                chans.add(p.chan)
            for v in p.ints:
                for x in expr_vars(v):
                    if x not in bound_ints:
                        ints.add(x)
            for w in p.chans:
                if w not in bound_chans:
                    chans.add(w)
            go(p.cont, bound_ints, bound_chans)
        elif isinstance(p, (Input, RepInput)):
            if p.chan not in bound_chans:
                chans.add(p.chan)
            go(p.cont, bound_ints | set(p.int_params), bound_chans | set(p.chan_params))
        elif isinstance(p, Par):
            go(p.left, bound_ints, bound_chans)
            go(p.right, bound_ints, bound_chans)
        elif isinstance(p, Nu):
            go(p.body, bound_ints, bound_chans | {p.name})
        elif isinstance(p, If):
            for x in expr_vars(p.cond):
                if x not in bound_ints:
                    ints.add(x)
            go(p.then, bound_ints, bound_chans)
            go(p.orelse, bound_ints, bound_chans)
        elif isinstance(p, LetNd):
            go(p.body, bound_ints | set(p.names), bound_chans)
        else:
            raise AssertionError(p)

    go(p, frozenset(), frozenset())
    return frozenset(ints), frozenset(chans)


def _fresh(base: str, avoid: set) -> str:
    base = base.rstrip("0123456789") or "x"
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in avoid:
            return cand


def substitute(p: Process, int_subst: Mapping[str, object] = None,
               chan_subst: Mapping[str, str] = None) -> Process:
    """Capture-avoiding simultaneous substitution.

    int_subst maps integer variables to SimpleExprs (plain ints accepted);
    chan_subst maps channel names to channel names. Binders colliding with
    the substitution range are renamed first.
    """
    isub = {k: (IntLit(v) if isinstance(v, int) else v) for k, v in (int_subst or {}).items()}
    csub = dict(chan_subst or {})

    range_vars: set = set()
    for v in isub.values():
        range_vars.update(expr_vars(v))
    range_vars.update(csub.values())

    def go(p: Process, isub: dict, csub: dict) -> Process:
        if not isub and not csub:
            return p
        if isinstance(p, Nil):
            return p
        if isinstance(p, Output):
            return Output(
                csub.get(p.chan, p.chan),
                tuple(subst_expr(v, isub) for v in p.ints),
                tuple(csub.get(w, w) for w in p.chans),
                go(p.cont, isub, csub),
            )
        if isinstance(p, (Input, RepInput)):
            chan = csub.get(p.chan, p.chan)
            int_params, chan_params, cont = p.int_params, p.chan_params, p.cont
            isub2 = {k: v for k, v in isub.items() if k not in int_params}
            csub2 = {k: v for k, v in csub.items() if k not in chan_params}
            # rename binders that would capture names of the range
            ren_i, ren_c = {}, {}
            avoid = range_vars | set(int_params) | set(chan_params) | _all_names(cont)
            for y in int_params:
                if y in range_vars:
                    ren_i[y] = _fresh(y, avoid)
                    avoid.add(ren_i[y])
            for z in chan_params:
                if z in range_vars:
                    ren_c[z] = _fresh(z, avoid)
                    avoid.add(ren_c[z])
            if ren_i or ren_c:
                cont = go(cont, {k: Var(v) for k, v in ren_i.items()}, ren_c)
                int_params = tuple(ren_i.get(y, y) for y in int_params)
                chan_params = tuple(ren_c.get(z, z) for z in chan_params)
            cls = Input if isinstance(p, Input) else RepInput
            return cls(chan, int_params, chan_params, go(cont, isub2, csub2))
        if isinstance(p, Par):
            return Par(go(p.left, isub, csub), go(p.right, isub, csub))
        if isinstance(p, Nu):
            name, body = p.name, p.body
            csub2 = {k: v for k, v in csub.items() if k != name}
            if name in range_vars:
                new = _fresh(name, range_vars | _all_names(body) | {name})
                body = go(body, {}, {name: new})
                name = new
            return Nu(name, p.annot, go(body, isub, csub2))
        if isinstance(p, If):
            return If(subst_expr(p.cond, isub), go(p.then, isub, csub), go(p.orelse, isub, csub))
        if isinstance(p, LetNd):
            names, body = p.names, p.body
            isub2 = {k: v for k, v in isub.items() if k not in names}
            ren = {}
            avoid = range_vars | set(names) | _all_names(body)
            for x in names:
                if x in range_vars:
                    ren[x] = _fresh(x, avoid)
                    avoid.add(ren[x])
            if ren:
                body = go(body, {k: Var(v) for k, v in ren.items()}, {})
                names = tuple(ren.get(x, x) for x in names)
            return LetNd(names, go(body, isub2, csub))
        raise AssertionError(p)

    return go(p, isub, csub)


def _all_names(p: Process) -> set:
    """Every name occurring in p, free or bound (used to pick fresh names)."""
    out: set = set()

    def go(p):
        if isinstance(p, Nil):
            return
        if isinstance(p, Output):
            out.add(p.chan)
            for v in p.ints:
                out.update(expr_vars(v))
            out.update(p.chans)
            go(p.cont)
        elif isinstance(p, (Input, RepInput)):
            out.add(p.chan)
            out.update(p.int_params)
            out.update(p.chan_params)
            go(p.cont)
        elif isinstance(p, Par):
            go(p.left)
            go(p.right)
        elif isinstance(p, Nu):
            out.add(p.name)
            go(p.body)
        elif isinstance(p, If):
            out.update(expr_vars(p.cond))
            go(p.then)
            go(p.orelse)
        elif isinstance(p, LetNd):
            out.update(p.names)
            go(p.body)

    go(p)
    return out


def canonical_key(p: Process, free_env: Mapping[str, object] | None = None):
    """Hashable encoding invariant under renaming of bound names.

    Bound names become (binder-counter, position) tokens; free names map
    through free_env when given, else to themselves.
    """
    free_env = free_env or {}

    def name_key(n, env):
        if n in env:
            return env[n]
        if n in free_env:
            return ("F", free_env[n])
        return ("F", n)

    def ty_key(t: Optional[ChanType]):
        if t is None:
            return None
        return (t.int_arity, tuple(ty_key(s) for s in t.chan_payload))

    def go(p, env, depth):
        if isinstance(p, Nil):
            return ("nil",)
        if isinstance(p, Output):
            return ("out", name_key(p.chan, env),
                    tuple(expr_key(v, env) for v in p.ints),
                    tuple(name_key(w, env) for w in p.chans),
                    go(p.cont, env, depth))
        if isinstance(p, (Input, RepInput)):
            tag = "rin" if isinstance(p, RepInput) else "in"
            env2 = dict(env)
            for i, y in enumerate(p.int_params):
                env2[y] = ("B", depth, i)
            for i, z in enumerate(p.chan_params):
                env2[z] = ("B", depth, len(p.int_params) + i)
            return (tag, name_key(p.chan, env), len(p.int_params), len(p.chan_params),
                    go(p.cont, env2, depth + 1))
        if isinstance(p, Par):
            return ("par", go(p.left, env, depth), go(p.right, env, depth))
        if isinstance(p, Nu):
            env2 = dict(env)
            env2[p.name] = ("B", depth, 0)
            return ("nu", ty_key(p.annot), go(p.body, env2, depth + 1))
        if isinstance(p, If):
            return ("if", expr_key(p.cond, env), go(p.then, env, depth), go(p.orelse, env, depth))
        if isinstance(p, LetNd):
            env2 = dict(env)
            for i, x in enumerate(p.names):
                env2[x] = ("B", depth, i)
            return ("let", len(p.names), go(p.body, env2, depth + 1))
        raise AssertionError(p)

    return go(p, {}, 0)


def alpha_equal(p: Process, q: Process) -> bool:
    """True iff p and q differ only in the choice of bound names."""
    return canonical_key(p) == canonical_key(q)
