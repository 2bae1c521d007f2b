"""Quantifier-free linear integer arithmetic: terms, formulas, and a
complete satisfiability/validity decision procedure (Pugh's Omega test).

All termination obligations, clause checks, and solution validations in the
toolchain are discharged here, so the package needs no external SMT solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Union

from .exprs import IntLit, Op, SimpleExpr, Var


class NonLinearError(Exception):
    pass


@dataclass(frozen=True)
class LinTerm:
    """Canonical linear term: sum of coeff*var plus a constant."""

    coeffs: tuple  # sorted tuple[(name, int)], zero coefficients dropped
    const: int = 0

    @staticmethod
    def of(coeffs: Mapping[str, int] = None, const: int = 0) -> "LinTerm":
        items = tuple(sorted((n, c) for n, c in (coeffs or {}).items() if c != 0))
        return LinTerm(items, const)

    @staticmethod
    def var(name: str) -> "LinTerm":
        return LinTerm(((name, 1),), 0)

    @staticmethod
    def lit(value: int) -> "LinTerm":
        return LinTerm((), value)

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __add__(self, other: "LinTerm") -> "LinTerm":
        d = self.as_dict()
        for n, c in other.coeffs:
            d[n] = d.get(n, 0) + c
        return LinTerm.of(d, self.const + other.const)

    def __sub__(self, other: "LinTerm") -> "LinTerm":
        return self + other.scale(-1)

    def scale(self, k: int) -> "LinTerm":
        return LinTerm.of({n: c * k for n, c in self.coeffs}, self.const * k)

    def is_const(self) -> bool:
        return not self.coeffs

    def vars(self) -> frozenset:
        return frozenset(n for n, _ in self.coeffs)

    def eval(self, env: Mapping[str, int]) -> int:
        return self.const + sum(c * env[n] for n, c in self.coeffs)

    def rename(self, mapping: Mapping[str, str]) -> "LinTerm":
        d: dict = {}
        for n, c in self.coeffs:
            m = mapping.get(n, n)
            d[m] = d.get(m, 0) + c
        return LinTerm.of(d, self.const)

    def subst(self, mapping: Mapping[str, "LinTerm"]) -> "LinTerm":
        out = LinTerm.lit(self.const)
        for n, c in self.coeffs:
            out = out + (mapping[n].scale(c) if n in mapping else LinTerm.of({n: c}))
        return out

    def __str__(self) -> str:
        parts = []
        for n, c in self.coeffs:
            if c == 1:
                parts.append(n if not parts else f"+ {n}")
            elif c == -1:
                parts.append(f"-{n}" if not parts else f"- {n}")
            elif c < 0:
                parts.append(f"-{-c}*{n}" if not parts else f"- {-c}*{n}")
            else:
                parts.append(f"{c}*{n}" if not parts else f"+ {c}*{n}")
        if self.const or not parts:
            if not parts:
                parts.append(str(self.const))
            elif self.const < 0:
                parts.append(f"- {-self.const}")
            else:
                parts.append(f"+ {self.const}")
        return " ".join(parts)


def linearize(v: SimpleExpr) -> LinTerm:
    """SimpleExpr -> LinTerm; raises NonLinearError on products of variables
    or on boolean-valued subterms."""
    if isinstance(v, IntLit):
        return LinTerm.lit(v.value)
    if isinstance(v, Var):
        return LinTerm.var(v.name)
    if v.op == "+":
        return linearize(v.args[0]) + linearize(v.args[1])
    if v.op == "-":
        return linearize(v.args[0]) - linearize(v.args[1])
    if v.op == "*":
        a, b = linearize(v.args[0]), linearize(v.args[1])
        if a.is_const():
            return b.scale(a.const)
        if b.is_const():
            return a.scale(b.const)
        raise NonLinearError(f"nonlinear product in {v!r}")
    raise NonLinearError(f"non-arithmetic operator {v.op!r} in term position")


# --- formulas ---

Formula = Union["TrueF", "FalseF", "Atom", "And", "Or", "Not", "PredApp"]

CMP_OPS = ("<=", "<", "=", "!=", ">=", ">")


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Atom:
    op: str
    lhs: LinTerm
    rhs: LinTerm

    def __post_init__(self):
        if self.op not in CMP_OPS:
            raise ValueError(f"bad comparison {self.op!r}")

    def __str__(self):
        return f"{self.lhs} {self.op} {self.rhs}"


@dataclass(frozen=True)
class And:
    args: tuple

    def __str__(self):
        return "(" + " and ".join(str(a) for a in self.args) + ")" if self.args else "true"


@dataclass(frozen=True)
class Or:
    args: tuple

    def __str__(self):
        return "(" + " or ".join(str(a) for a in self.args) + ")" if self.args else "false"


@dataclass(frozen=True)
class Not:
    arg: Formula

    def __str__(self):
        return f"(not {self.arg})"


@dataclass(frozen=True)
class PredApp:
    """Application of a predicate variable to argument terms."""

    pred: str
    args: tuple  # tuple[LinTerm, ...]

    def __str__(self):
        return f"{self.pred}({', '.join(str(a) for a in self.args)})"


TRUE = TrueF()
FALSE = FalseF()


def conj(args: Iterable) -> Formula:
    out = []
    for a in args:
        if isinstance(a, FalseF):
            return FALSE
        if isinstance(a, TrueF):
            continue
        if isinstance(a, And):
            out.extend(a.args)
        else:
            out.append(a)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(args: Iterable) -> Formula:
    out = []
    for a in args:
        if isinstance(a, TrueF):
            return TRUE
        if isinstance(a, FalseF):
            continue
        if isinstance(a, Or):
            out.extend(a.args)
        else:
            out.append(a)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def neg(f: Formula) -> Formula:
    if isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def implies(a: Formula, b: Formula) -> Formula:
    return disj([neg(a), b])


def atom(op: str, lhs, rhs) -> Formula:
    lhs = lhs if isinstance(lhs, LinTerm) else LinTerm.lit(lhs) if isinstance(lhs, int) else linearize(lhs)
    rhs = rhs if isinstance(rhs, LinTerm) else LinTerm.lit(rhs) if isinstance(rhs, int) else linearize(rhs)
    d = lhs - rhs
    if d.is_const():
        k = d.const
        result = {"<=": k <= 0, "<": k < 0, "=": k == 0, "!=": k != 0, ">=": k >= 0, ">": k > 0}[op]
        return TRUE if result else FALSE
    return Atom(op, lhs, rhs)


def formula_vars(f: Formula) -> frozenset:
    if isinstance(f, (TrueF, FalseF)):
        return frozenset()
    if isinstance(f, Atom):
        return f.lhs.vars() | f.rhs.vars()
    if isinstance(f, PredApp):
        out = frozenset()
        for t in f.args:
            out |= t.vars()
        return out
    if isinstance(f, Not):
        return formula_vars(f.arg)
    out = frozenset()
    for a in f.args:
        out |= formula_vars(a)
    return out


def formula_preds(f: Formula) -> list:
    """Predicate applications in f, in syntactic order."""
    out = []

    def go(f):
        if isinstance(f, PredApp):
            out.append(f)
        elif isinstance(f, Not):
            go(f.arg)
        elif isinstance(f, (And, Or)):
            for a in f.args:
                go(a)

    go(f)
    return out


def subst_formula(f: Formula, mapping: Mapping[str, LinTerm]) -> Formula:
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Atom):
        return atom(f.op, f.lhs.subst(mapping), f.rhs.subst(mapping))
    if isinstance(f, PredApp):
        return PredApp(f.pred, tuple(t.subst(mapping) for t in f.args))
    if isinstance(f, Not):
        return neg(subst_formula(f.arg, mapping))
    if isinstance(f, And):
        return conj(subst_formula(a, mapping) for a in f.args)
    if isinstance(f, Or):
        return disj(subst_formula(a, mapping) for a in f.args)
    raise AssertionError(f)


def subst_preds(f: Formula, solution: Mapping[str, tuple]) -> Formula:
    """Replace predicate applications by their solution bodies.

    solution maps predicate name -> (param names, Formula over the params).
    """
    if isinstance(f, PredApp):
        if f.pred not in solution:
            raise KeyError(f"no assignment for predicate {f.pred}")
        params, body = solution[f.pred]
        if len(params) != len(f.args):
            raise ValueError(f"arity mismatch for {f.pred}")
        return subst_formula(body, dict(zip(params, f.args)))
    if isinstance(f, Not):
        return neg(subst_preds(f.arg, solution))
    if isinstance(f, And):
        return conj(subst_preds(a, solution) for a in f.args)
    if isinstance(f, Or):
        return disj(subst_preds(a, solution) for a in f.args)
    return f


def eval_formula(f: Formula, env: Mapping[str, int]) -> bool:
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Atom):
        l, r = f.lhs.eval(env), f.rhs.eval(env)
        return {"<=": l <= r, "<": l < r, "=": l == r, "!=": l != r, ">=": l >= r, ">": l > r}[f.op]
    if isinstance(f, Not):
        return not eval_formula(f.arg, env)
    if isinstance(f, And):
        return all(eval_formula(a, env) for a in f.args)
    if isinstance(f, Or):
        return any(eval_formula(a, env) for a in f.args)
    raise ValueError(f"cannot evaluate {f}")


def simplify(f: Formula) -> Formula:
    """Light simplification: NNF-free constant folding and flattening."""
    if isinstance(f, Atom):
        return atom(f.op, f.lhs, f.rhs)
    if isinstance(f, Not):
        inner = simplify(f.arg)
        return neg(inner)
    if isinstance(f, And):
        return conj(simplify(a) for a in f.args)
    if isinstance(f, Or):
        return disj(simplify(a) for a in f.args)
    return f


# --- satisfiability: DNF + Omega test ---


def _nnf_atoms(f: Formula, polarity: bool) -> Formula:
    """Negation normal form with negations folded into atoms."""
    if isinstance(f, TrueF):
        return TRUE if polarity else FALSE
    if isinstance(f, FalseF):
        return FALSE if polarity else TRUE
    if isinstance(f, Not):
        return _nnf_atoms(f.arg, not polarity)
    if isinstance(f, And):
        parts = [_nnf_atoms(a, polarity) for a in f.args]
        return conj(parts) if polarity else disj(parts)
    if isinstance(f, Or):
        parts = [_nnf_atoms(a, polarity) for a in f.args]
        return disj(parts) if polarity else conj(parts)
    if isinstance(f, Atom):
        if polarity:
            return f
        flipped = {"<=": ">", "<": ">=", "=": "!=", "!=": "=", ">=": "<", ">": "<="}[f.op]
        return atom(flipped, f.lhs, f.rhs)
    if isinstance(f, PredApp):
        raise ValueError("predicate application in a closed LIA query")
    raise AssertionError(f)


def _dnf(f: Formula) -> list:
    """List of conjunctions (lists of Atoms); disequalities split."""
    f = _nnf_atoms(f, True)

    def go(f) -> list:
        if isinstance(f, TrueF):
            return [[]]
        if isinstance(f, FalseF):
            return []
        if isinstance(f, Atom):
            if f.op == "!=":
                return go(atom("<", f.lhs, f.rhs)) + go(atom(">", f.lhs, f.rhs))
            return [[f]]
        if isinstance(f, Or):
            out = []
            for a in f.args:
                out.extend(go(a))
            return out
        if isinstance(f, And):
            cubes = [[]]
            for a in f.args:
                sub = go(a)
                cubes = [c + d for c in cubes for d in sub]
                if not cubes:
                    return []
            return cubes
        raise AssertionError(f)

    return go(f)


_GEQ_OPS = {
    # op -> (scale of (lhs - rhs), constant shift) so that term >= 0 over Z
    "<=": (-1, 0),   # lhs <= rhs  <=>  rhs - lhs >= 0
    "<": (-1, -1),   # lhs < rhs   <=>  rhs - lhs - 1 >= 0
    ">=": (1, 0),
    ">": (1, -1),
}


def _cube_to_system(cube: list) -> tuple | None:
    """Conjunction of atoms -> (equalities, inequalities) as LinTerms
    (eq: t == 0, ineq: t >= 0). None if trivially unsatisfiable."""
    eqs, ineqs = [], []
    for a in cube:
        if a.op == "=":
            eqs.append(a.lhs - a.rhs)
            continue
        scale, shift = _GEQ_OPS[a.op]
        t = (a.lhs - a.rhs).scale(scale)
        ineqs.append(LinTerm(t.coeffs, t.const + shift))
    for t in eqs:
        if t.is_const() and t.const != 0:
            return None
    keep = []
    for t in ineqs:
        if t.is_const():
            if t.const < 0:
                return None
            continue
        keep.append(t)
    return [t for t in eqs if not t.is_const()], keep


class _Budget:
    def __init__(self, limit=200_000):
        self.left = limit

    def tick(self, n=1):
        self.left -= n
        if self.left < 0:
            raise RecursionError("omega test budget exceeded")


def _tighten_ineq(t: LinTerm) -> LinTerm:
    """Divide t >= 0 by the gcd of its variable coefficients, rounding the
    constant down (sound and complete over the integers)."""
    if t.is_const():
        return t
    g = 0
    for _, c in t.coeffs:
        g = gcd(g, abs(c))
    if g > 1:
        t = LinTerm(tuple((n, c // g) for n, c in t.coeffs), t.const // g)
    return t


def _smod(a: int, m: int) -> int:
    """Symmetric residue of a modulo m, in (-m/2, m/2]."""
    r = a % m
    return r if 2 * r <= m else r - m


def _subst_var(rows: list, x: str, value: LinTerm) -> list:
    out = []
    for r in rows:
        c = dict(r.coeffs).get(x, 0)
        if c == 0:
            out.append(r)
        else:
            base = LinTerm(tuple((n, v) for n, v in r.coeffs if n != x), r.const)
            out.append(base + value.scale(c))
    return out


def _omega_feasible(eqs: list, ineqs: list, budget: _Budget, fresh: list) -> bool:
    """Integer feasibility of { e == 0 } union { t >= 0 } (Omega test)."""
    budget.tick(len(eqs) + len(ineqs) + 1)

    # --- eliminate equalities exactly ---
    eqs = list(eqs)
    while eqs:
        eq = eqs.pop()
        if eq.is_const():
            if eq.const != 0:
                return False
            continue
        g = 0
        for _, c in eq.coeffs:
            g = gcd(g, abs(c))
        if eq.const % g != 0:
            return False
        if g > 1:
            eq = LinTerm(tuple((n, c // g) for n, c in eq.coeffs), eq.const // g)
        unit = next(((n, c) for n, c in eq.coeffs if abs(c) == 1), None)
        if unit is not None:
            x, c = unit
            # c*x + rest = 0  =>  x = -(rest)/c with c = +-1
            rest = LinTerm(tuple((n, v) for n, v in eq.coeffs if n != x), eq.const)
            value = rest.scale(-c)
            eqs = _subst_var(eqs, x, value)
            ineqs = _subst_var(ineqs, x, value)
        else:
            # no unit coefficient: shrink via a symmetric-modulo substitution
            x, a = min(eq.coeffs, key=lambda nc: (abs(nc[1]), nc[0]))
            m = abs(a) + 1
            sigma = f"$s{len(fresh)}"
            fresh.append(sigma)
            reduced = LinTerm.of(
                {n: _smod(c, m) for n, c in eq.coeffs} | {sigma: -m},
                _smod(eq.const, m),
            )
            # reduced has coefficient -+1 on x; solve it for x and substitute
            cx = dict(reduced.coeffs)[x]
            rest = LinTerm(tuple((n, v) for n, v in reduced.coeffs if n != x), reduced.const)
            value = rest.scale(-cx)
            eqs = _subst_var(eqs + [eq], x, value)
            ineqs = _subst_var(ineqs, x, value)

    # --- inequality elimination with shadows ---
    rows = []
    for t in (_tighten_ineq(r) for r in ineqs):
        if t.is_const():
            if t.const < 0:
                return False
            continue
        rows.append(t)
    if not rows:
        return True

    occurrences: dict = {}
    for r in rows:
        for n, c in r.coeffs:
            occurrences.setdefault(n, []).append(c)

    def cost(n):
        cs = occurrences[n]
        lo = sum(1 for c in cs if c > 0)
        up = sum(1 for c in cs if c < 0)
        exact = all(abs(c) == 1 for c in cs)
        return (not exact, lo * up - lo - up)

    x = min(occurrences, key=lambda n: (cost(n), n))

    lowers, uppers, others = [], [], []
    for r in rows:
        c = dict(r.coeffs).get(x, 0)
        if c > 0:
            # c*x + rest >= 0  =>  c*x >= -rest
            lowers.append((c, LinTerm(tuple((n, v) for n, v in r.coeffs if n != x), r.const)))
        elif c < 0:
            # c*x + rest >= 0  =>  (-c)*x <= rest
            uppers.append((-c, LinTerm(tuple((n, v) for n, v in r.coeffs if n != x), r.const)))
        else:
            others.append(r)

    if not lowers or not uppers:
        return _omega_feasible([], others, budget, fresh)

    exact = all(c == 1 for c, _ in lowers) or all(c == 1 for c, _ in uppers)

    def shadow(dark: bool) -> list:
        new_rows = list(others)
        for b, rest_l in lowers:       # b*x >= -rest_l
            for bp, rest_u in uppers:  # bp*x <= rest_u
                slack = (b - 1) * (bp - 1) if dark else 0
                t = rest_u.scale(b) + rest_l.scale(bp)
                new_rows.append(LinTerm(t.coeffs, t.const - slack))
        return new_rows

    if exact:
        return _omega_feasible([], shadow(dark=False), budget, fresh)
    if _omega_feasible([], shadow(dark=True), budget, fresh):
        return True
    if not _omega_feasible([], shadow(dark=False), budget, fresh):
        return False
    # splinter: check the fringe between the dark and real shadows; for each
    # lower bound b*x >= -rest_l try the exact cases b*x = -rest_l + i
    bmax = max(bp for bp, _ in uppers)
    for b, rest_l in lowers:
        limit = (b * bmax - b - bmax) // bmax
        for i in range(0, limit + 1):
            case = LinTerm.of({x: b, **rest_l.as_dict()}, rest_l.const - i)
            if _omega_feasible([case], rows, budget, fresh):
                return True
    return False


def lia_sat(f: Formula) -> bool:
    """Satisfiability over the integers (complete)."""
    budget = _Budget()
    for cube in _dnf(simplify(f)):
        system = _cube_to_system(cube)
        if system is None:
            continue
        eqs, ineqs = system
        if _omega_feasible(eqs, ineqs, budget, fresh=[]):
            return True
    return False


def lia_valid(f: Formula) -> bool:
    """Validity over the integers: no integer assignment falsifies f."""
    return not lia_sat(neg(f))


def lia_equiv(a: Formula, b: Formula) -> bool:
    return lia_valid(conj([implies(a, b), implies(b, a)]))


# --- SimpleExpr <-> Formula bridges ---


def expr_truthy(v: SimpleExpr) -> Formula:
    """Formula equivalent to 'v evaluates to nonzero'."""
    if isinstance(v, IntLit):
        return TRUE if v.value != 0 else FALSE
    if isinstance(v, Op):
        if v.op in CMP_OPS:
            try:
                return atom(v.op, linearize(v.args[0]), linearize(v.args[1]))
            except NonLinearError:
                raise
        if v.op == "and":
            return conj([expr_truthy(v.args[0]), expr_truthy(v.args[1])])
        if v.op == "or":
            return disj([expr_truthy(v.args[0]), expr_truthy(v.args[1])])
        if v.op == "not":
            return neg(expr_truthy(v.args[0]))
    # arithmetic term or variable: nonzero test
    return atom("!=", linearize(v), LinTerm.lit(0))


def term_to_expr(t: LinTerm) -> SimpleExpr:
    e: SimpleExpr | None = None
    for n, c in t.coeffs:
        if c == -1 and e is not None:
            e = Op("-", (e, Var(n)))
            continue
        if c == 1:
            piece: SimpleExpr = Var(n)
        elif c == -1:
            piece = Op("-", (IntLit(0), Var(n)))
        else:
            piece = Op("*", (IntLit(c), Var(n)))
        e = piece if e is None else Op("+", (e, piece))
    if e is None:
        return IntLit(t.const)
    if t.const > 0:
        e = Op("+", (e, IntLit(t.const)))
    elif t.const < 0:
        e = Op("-", (e, IntLit(-t.const)))
    return e


def formula_to_expr(f: Formula) -> SimpleExpr:
    """Formula -> 0/1-valued SimpleExpr (for Assume conditions)."""
    if isinstance(f, TrueF):
        return IntLit(1)
    if isinstance(f, FalseF):
        return IntLit(0)
    if isinstance(f, Atom):
        return Op(f.op, (term_to_expr(f.lhs), term_to_expr(f.rhs)))
    if isinstance(f, Not):
        return Op("not", (formula_to_expr(f.arg),))
    if isinstance(f, And):
        e = formula_to_expr(f.args[0])
        for a in f.args[1:]:
            e = Op("and", (e, formula_to_expr(a)))
        return e
    if isinstance(f, Or):
        e = formula_to_expr(f.args[0])
        for a in f.args[1:]:
            e = Op("or", (e, formula_to_expr(a)))
        return e
    raise ValueError(f"cannot convert {f} to an expression")


# --- SMT-LIB2 serialization ---


def term_to_smt(t: LinTerm) -> str:
    parts = []
    for n, c in t.coeffs:
        if c == 1:
            parts.append(n)
        elif c == -1:
            parts.append(f"(- {n})")
        elif c < 0:
            parts.append(f"(* (- {-c}) {n})")
        else:
            parts.append(f"(* {c} {n})")
    if t.const != 0 or not parts:
        parts.append(str(t.const) if t.const >= 0 else f"(- {-t.const})")
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


def formula_to_smt(f: Formula) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        op = {"=": "=", "!=": "distinct", "<=": "<=", "<": "<", ">=": ">=", ">": ">"}[f.op]
        return f"({op} {term_to_smt(f.lhs)} {term_to_smt(f.rhs)})"
    if isinstance(f, Not):
        return f"(not {formula_to_smt(f.arg)})"
    if isinstance(f, And):
        return "(and " + " ".join(formula_to_smt(a) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(formula_to_smt(a) for a in f.args) + ")"
    if isinstance(f, PredApp):
        if not f.args:
            return f.pred
        return f"({f.pred} " + " ".join(term_to_smt(a) for a in f.args) + ")"
    raise AssertionError(f)


# --- s-expression model parsing ---


def _sexp_tokens(text: str):
    text = _strip_comments(text)
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            yield c
            i += 1
        elif c == "|":
            j = text.index("|", i + 1)
            yield text[i + 1:j]
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            yield text[i:j]
            i = j


def _strip_comments(text: str) -> str:
    return "\n".join(line.split(";", 1)[0] for line in text.splitlines())


def parse_sexprs(text: str) -> list:
    stack = [[]]
    for tok in _sexp_tokens(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise ValueError("unbalanced s-expression")
    return stack[0]


def _sexp_to_term(sx, env: dict) -> LinTerm:
    if isinstance(sx, str):
        if sx.lstrip("-").isdigit():
            return LinTerm.lit(int(sx))
        if sx in env:
            return env[sx]
        return LinTerm.var(sx)
    head = sx[0]
    args = sx[1:]
    if head == "-" and len(args) == 1:
        return _sexp_to_term(args[0], env).scale(-1)
    if head == "-":
        out = _sexp_to_term(args[0], env)
        for a in args[1:]:
            out = out - _sexp_to_term(a, env)
        return out
    if head == "+":
        out = LinTerm.lit(0)
        for a in args:
            out = out + _sexp_to_term(a, env)
        return out
    if head == "*":
        terms = [_sexp_to_term(a, env) for a in args]
        acc = None
        k = 1
        for t in terms:
            if t.is_const():
                k *= t.const
            elif acc is None:
                acc = t
            else:
                raise NonLinearError("nonlinear product in model")
        return LinTerm.lit(k) if acc is None else acc.scale(k)
    raise ValueError(f"unsupported term {sx!r}")


def sexp_to_formula(sx, env: dict | None = None) -> Formula:
    """Parse a solver model body into a Formula. Supports the boolean and
    integer operators that CHC solvers emit, including let and ite."""
    env = env or {}
    if isinstance(sx, str):
        if sx == "true":
            return TRUE
        if sx == "false":
            return FALSE
        if sx in env and isinstance(env[sx], (TrueF, FalseF, Atom, And, Or, Not)):
            return env[sx]
        raise ValueError(f"unsupported boolean atom {sx!r}")
    head = sx[0]
    args = sx[1:]
    if head == "and":
        return conj(sexp_to_formula(a, env) for a in args)
    if head == "or":
        return disj(sexp_to_formula(a, env) for a in args)
    if head == "not":
        return neg(sexp_to_formula(args[0], env))
    if head == "=>":
        out = sexp_to_formula(args[-1], env)
        for a in reversed(args[:-1]):
            out = implies(sexp_to_formula(a, env), out)
        return out
    if head in ("<=", "<", ">=", ">"):
        return atom(head, _sexp_to_term(args[0], env), _sexp_to_term(args[1], env))
    if head == "=":
        return atom("=", _sexp_to_term(args[0], env), _sexp_to_term(args[1], env))
    if head == "distinct":
        return atom("!=", _sexp_to_term(args[0], env), _sexp_to_term(args[1], env))
    if head == "let":
        env2 = dict(env)
        for binding in args[0]:
            name, body = binding
            try:
                env2[name] = sexp_to_formula(body, env)
            except (ValueError, NonLinearError):
                env2[name] = _sexp_to_term(body, env)
        return sexp_to_formula(args[1], env2)
    if head == "ite":
        c = sexp_to_formula(args[0], env)
        return disj([conj([c, sexp_to_formula(args[1], env)]),
                     conj([neg(c), sexp_to_formula(args[2], env)])])
    raise ValueError(f"unsupported model construct {sx!r}")
