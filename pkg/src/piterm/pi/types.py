"""Simple type inference with region assignment.

Channel types are inferred by unification over mutable type-variable cells;
the union-find classes of those cells are the regions, so two channel
occurrences get the same region exactly when the typing rules force their
types to be equal (a may-alias analysis).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..exprs import IntLit, Op, Var
from .ast import ChanType, If, Input, LetNd, Nil, Nu, Output, Par, Process, RepInput


class TypeError_(Exception):
    """Arity mismatch, int/channel confusion, or an occurs-check failure."""

    def __init__(self, message: str, span=None):
        if span:
            message = f"{span[0]}:{span[1]}: {message}"
        super().__init__(message)
        self.span = span


class _Cell:
    """Union-find cell for one channel type variable."""

    __slots__ = ("parent", "rank", "int_arity", "payload", "region")

    def __init__(self):
        self.parent = self
        self.rank = 0
        self.int_arity: Optional[int] = None
        self.payload: Optional[list] = None  # list[_Cell] once constrained
        self.region: Optional[int] = None

    def find(self) -> "_Cell":
        root = self
        while root.parent is not root:
            root = root.parent
        # path compression
        node = self
        while node.parent is not root:
            node.parent, node = root, node.parent
        return root


def _occurs(needle: _Cell, hay: _Cell, seen=None) -> bool:
    seen = seen if seen is not None else set()
    hay = hay.find()
    if hay is needle:
        return True
    if id(hay) in seen:
        return False
    seen.add(id(hay))
    for sub in hay.payload or []:
        if _occurs(needle, sub, seen):
            return True
    return False


def _unify(a: _Cell, b: _Cell, span=None):
    a, b = a.find(), b.find()
    if a is b:
        return
    if _occurs(a, b) or _occurs(b, a):
        raise TypeError_("recursive channel type (occurs check)", span)
    if a.rank < b.rank:
        a, b = b, a
    b.parent = a
    if a.rank == b.rank:
        a.rank += 1
    # merge constraints
    if a.int_arity is None:
        a.int_arity = b.int_arity
    elif b.int_arity is not None and a.int_arity != b.int_arity:
        raise TypeError_(f"arity mismatch: {a.int_arity} integer slots vs {b.int_arity}", span)
    if a.payload is None:
        a.payload = b.payload
    elif b.payload is not None:
        if len(a.payload) != len(b.payload):
            raise TypeError_(f"arity mismatch: {len(a.payload)} channel slots vs {len(b.payload)}", span)
        for x, y in zip(a.payload, b.payload):
            _unify(x, y, span)


def _shape(cell: _Cell, arity: int, n_chans: int, span=None):
    cell = cell.find()
    if cell.int_arity is None:
        cell.int_arity = arity
    elif cell.int_arity != arity:
        raise TypeError_(f"arity mismatch on channel: {cell.int_arity} integer slots vs {arity}", span)
    if cell.payload is None:
        cell.payload = [_Cell() for _ in range(n_chans)]
    elif len(cell.payload) != n_chans:
        raise TypeError_(f"arity mismatch on channel: {len(cell.payload)} channel slots vs {n_chans}", span)
    return cell


def _cell_from_annot(t: ChanType) -> _Cell:
    c = _Cell()
    c.int_arity = t.int_arity
    c.payload = [_cell_from_annot(s) for s in t.chan_payload]
    return c


@dataclass(frozen=True)
class TypeEnv:
    ints: dict  # name -> "int" (free integer variables)
    chans: dict  # name -> ChanType (free channels)


@dataclass
class InferenceResult:
    annotated: Process
    env: TypeEnv
    regions: dict  # region id -> (int_arity, tuple of payload region ids)
    chan_types: dict = field(default_factory=dict)  # free channel name -> ChanType


INT = "int"


def infer_simple_types(p: Process) -> InferenceResult:
    """Infer channel types and regions; annotate every Nu with its ChanType.

    Free names are permitted: their inferred types are returned in the
    environment. Unconstrained channels default to zero payload arity.
    """
    free_ints: dict = {}
    free_chans: dict = {}  # name -> _Cell

    def lookup_chan(name: str, env: dict, span=None) -> _Cell:
        if name in env:
            v = env[name]
            if v is INT:
                raise TypeError_(f"{name!r} used as a channel but bound as an integer", span)
            return v
        if name in free_ints:
            raise TypeError_(f"{name!r} used both as integer and as channel", span)
        return free_chans.setdefault(name, _Cell())

    def check_int_var(name: str, env: dict, span=None):
        if name in env:
            if env[name] is not INT:
                raise TypeError_(f"{name!r} used as an integer but bound as a channel", span)
            return
        if name in free_chans:
            raise TypeError_(f"{name!r} used both as channel and as integer", span)
        free_ints[name] = INT

    def check_expr(v, env):
        if isinstance(v, Var):
            check_int_var(v.name, env, v.span)
        elif isinstance(v, Op):
            for a in v.args:
                check_expr(a, env)

    def walk_collect(p: Process, env: dict, nu_map: list):
        # constraint collection; records the cell created for each Nu in preorder
        if isinstance(p, Nil):
            return
        if isinstance(p, Output):
            cell = lookup_chan(p.chan, env, p.span)
            cell = _shape(cell, len(p.ints), len(p.chans), p.span)
            for v in p.ints:
                check_expr(v, env)
            for w, sub in zip(p.chans, cell.find().payload):
                _unify(lookup_chan(w, env, p.span), sub, p.span)
            walk_collect(p.cont, env, nu_map)
        elif isinstance(p, (Input, RepInput)):
            cell = lookup_chan(p.chan, env, p.span)
            cell = _shape(cell, len(p.int_params), len(p.chan_params), p.span)
            env2 = dict(env)
            for y in p.int_params:
                env2[y] = INT
            for z, sub in zip(p.chan_params, cell.find().payload):
                env2[z] = sub
            walk_collect(p.cont, env2, nu_map)
        elif isinstance(p, Par):
            walk_collect(p.left, env, nu_map)
            walk_collect(p.right, env, nu_map)
        elif isinstance(p, Nu):
            cell = _cell_from_annot(p.annot) if p.annot is not None else _Cell()
            nu_map.append(cell)
            env2 = dict(env)
            env2[p.name] = cell
            walk_collect(p.body, env2, nu_map)
        elif isinstance(p, If):
            check_expr(p.cond, env)
            walk_collect(p.then, env, nu_map)
            walk_collect(p.orelse, env, nu_map)
        elif isinstance(p, LetNd):
            env2 = dict(env)
            for x in p.names:
                env2[x] = INT
            walk_collect(p.body, env2, nu_map)
        else:
            raise AssertionError(p)

    nu_map: list = []
    walk_collect(p, {}, nu_map)

    # default unconstrained channels to zero arity
    def finalize_shape(cell: _Cell, seen):
        cell = cell.find()
        if id(cell) in seen:
            return
        seen.add(id(cell))
        if cell.int_arity is None:
            cell.int_arity = 0
        if cell.payload is None:
            cell.payload = []
        for sub in cell.payload:
            finalize_shape(sub, seen)

    seen: set = set()
    for cell in list(free_chans.values()) + nu_map:
        finalize_shape(cell, seen)

    # region numbering by first occurrence: free channels in name order of
    # first textual use is not tracked, so use (free channels in process
    # order via a walk) then nu cells in preorder; payload regions are
    # numbered depth-first at the point their carrier is numbered.
    regions: dict = {}
    region_table: dict = {}
    counter = [0]

    def number(cell: _Cell):
        cell = cell.find()
        if cell.region is None:
            counter[0] += 1
            cell.region = counter[0]
            for sub in cell.payload:
                number(sub)
            region_table[cell.region] = (cell.int_arity, tuple(s.find().region for s in cell.payload))

    def numbering_walk(p: Process, env: dict):
        if isinstance(p, Nil):
            return
        if isinstance(p, Output):
            number(lookup_chan(p.chan, env))
            for w in p.chans:
                number(lookup_chan(w, env))
            numbering_walk(p.cont, env)
        elif isinstance(p, (Input, RepInput)):
            cell = lookup_chan(p.chan, env).find()
            number(cell)
            env2 = dict(env)
            for y in p.int_params:
                env2[y] = INT
            for z, sub in zip(p.chan_params, cell.payload):
                env2[z] = sub
            numbering_walk(p.cont, env2)
        elif isinstance(p, Par):
            numbering_walk(p.left, env)
            numbering_walk(p.right, env)
        elif isinstance(p, Nu):
            idx = nu_order.pop(0)
            cell = nu_cells_in_order[idx]
            number(cell)
            env2 = dict(env)
            env2[p.name] = cell
            numbering_walk(p.body, env2)
        elif isinstance(p, If):
            numbering_walk(p.then, env)
            numbering_walk(p.orelse, env)
        elif isinstance(p, LetNd):
            env2 = dict(env)
            for x in p.names:
                env2[x] = INT
            numbering_walk(p.body, env2)

    nu_cells_in_order = nu_map
    nu_order = list(range(len(nu_map)))
    numbering_walk(p, {})
    # any channels never touched by the numbering walk (e.g. free but unused)
    for cell in free_chans.values():
        number(cell)

    def to_chantype(cell: _Cell) -> ChanType:
        cell = cell.find()
        return ChanType(cell.region, cell.int_arity, tuple(to_chantype(s) for s in cell.payload))

    # rebuild the process with Nu annotations filled in
    nu_iter = iter(nu_map)

    def annotate(p: Process):
        if isinstance(p, Nil):
            return p
        if isinstance(p, Output):
            return Output(p.chan, p.ints, p.chans, annotate(p.cont), span=p.span)
        if isinstance(p, Input):
            return Input(p.chan, p.int_params, p.chan_params, annotate(p.cont), span=p.span)
        if isinstance(p, RepInput):
            return RepInput(p.chan, p.int_params, p.chan_params, annotate(p.cont), span=p.span)
        if isinstance(p, Par):
            return Par(annotate(p.left), annotate(p.right), span=p.span)
        if isinstance(p, Nu):
            cell = next(nu_iter)
            return Nu(p.name, to_chantype(cell), annotate(p.body), span=p.span)
        if isinstance(p, If):
            return If(p.cond, annotate(p.then), annotate(p.orelse), span=p.span)
        if isinstance(p, LetNd):
            return LetNd(p.names, annotate(p.body), span=p.span)
        raise AssertionError(p)

    annotated = annotate(p)
    env = TypeEnv(ints=dict(free_ints), chans={n: to_chantype(c) for n, c in free_chans.items()})
    return InferenceResult(annotated=annotated, env=env, regions=region_table, chan_types=dict(env.chans))


def regions_of(result: InferenceResult) -> dict:
    """Region table: region id -> (int arity, payload region signature)."""
    return dict(result.regions)


def dump_types(result: InferenceResult) -> str:
    """Human-readable channel typing for --dump-types."""
    lines = []
    for name in sorted(result.env.chans):
        lines.append(f"{name} : {result.env.chans[name]}")

    def nu_lines(p: Process):
        if isinstance(p, Nu):
            lines.append(f"{p.name} : {p.annot}")
            nu_lines(p.body)
        elif isinstance(p, (Output, Input, RepInput)):
            nu_lines(p.cont)
        elif isinstance(p, Par):
            nu_lines(p.left)
            nu_lines(p.right)
        elif isinstance(p, If):
            nu_lines(p.then)
            nu_lines(p.orelse)
        elif isinstance(p, LetNd):
            nu_lines(p.body)

    nu_lines(result.annotated)
    return "\n".join(lines)
