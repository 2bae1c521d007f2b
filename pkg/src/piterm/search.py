"""Bounded exhaustive exploration of reduction graphs with cycle detection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable


@dataclass(frozen=True)
class Terminates:
    states_explored: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Diverges:
    """A reachable cycle: list of state representatives, first == last."""

    cycle: tuple = field(compare=False)
    states_explored: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BudgetExhausted:
    states_explored: int = field(default=0, compare=False)


ExploreResult = Terminates | Diverges | BudgetExhausted


def explore(initial: Iterable, successors: Callable, budget: int) -> ExploreResult:
    """DFS over the state graph rooted at `initial`.

    `successors(state)` yields (key, state) pairs; states with equal keys are
    identified. Returns Diverges with a witness cycle if any reachable state
    can reach itself, Terminates if the reachable graph is finite and acyclic
    within budget, BudgetExhausted otherwise.
    """
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict = {}
    explored = 0

    roots = list(initial)
    for root_key, root_state in roots:
        if color.get(root_key, WHITE) == BLACK:
            continue
        # iterative DFS; stack holds (key, state, successor iterator)
        stack = [(root_key, root_state, None)]
        while stack:
            key, state, it = stack[-1]
            if it is None:
                if color.get(key, WHITE) == BLACK:
                    stack.pop()
                    continue
                color[key] = GRAY
                explored += 1
                if explored > budget:
                    return BudgetExhausted(states_explored=explored)
                it = iter(sorted(successors(state), key=lambda kv: repr(kv[0])))
                stack[-1] = (key, state, it)
            advanced = False
            for nkey, nstate in it:
                c = color.get(nkey, WHITE)
                if c == GRAY:
                    # cycle: unwind the stack back to nkey
                    cyc = [nstate]
                    for k, s, _ in reversed(stack):
                        cyc.append(s)
                        if k == nkey:
                            break
                    cyc.reverse()
                    return Diverges(cycle=tuple(cyc), states_explored=explored)
                if c == WHITE:
                    stack.append((nkey, nstate, None))
                    advanced = True
                    break
            if not advanced:
                color[key] = BLACK
                stack.pop()
    return Terminates(states_explored=explored)
