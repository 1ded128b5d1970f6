"""
Simple 3-branching 2nfa for reachability from vertex 0 to vertex n-1 on graph encodings.

The machine works round by round. In every round it knows the current vertex i and the number
t of edges taken so far; at $ it guesses an entry index j in {1, 2, 3}, and during the next
sweep it finds the row labeled binary(i+1), reads its j-th entry and carries the new vertex to $.
After n-1 edges without reaching n-1 the branch rejects.
"""
import logging

from twowaygym.automata.machine import TwoWayAutomaton
from twowaygym.automata.transforms import chain_with_checker
from twowaygym.codecs.graph import MAX_OUTDEGREE
from twowaygym.codecs.strings import binary_repr
from twowaygym.definitions import HASH
from twowaygym.reductions.sweeps import ACCEPT, SweepProgram, compile_sweep_program
from twowaygym.reductions.validator import build_graph_validator

logger = logging.getLogger(__name__)

_DIGITS = ("0", "1")

# Hashes from the end of a label to the start of the next row label.
_ROW_TAIL_HASHES = 5


class ReachabilityProgram(SweepProgram):
    """
    Sweep program of the solver; assumes its input is a valid encoding of an n-vertex graph.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"Solver size must be at least 1, got {n}.")
        self.n = n
        self.labels = [binary_repr(r + 1) for r in range(n)]

    def initial(self):
        return ("init",)

    def _branch(self, t: int, i: int) -> tuple:
        return tuple(("lbl", t, i, j, 0) for j in range(1, MAX_OUTDEGREE + 1))

    def step(self, state, sym):
        kind = state[0]
        if kind in ("init", "carry"):
            return state
        if kind == "lbl":
            _, t, i, j, p = state
            label = self.labels[i]
            if sym == HASH:
                if p == len(label):
                    return ("num", t, 0) if j == 1 else ("seek", t, j, 1)
                return ("skiprow", t, i, j, 1)
            if p < len(label) and label[p] == sym:
                return ("lbl", t, i, j, p + 1)
            return ("lbl-miss", t, i, j)
        if kind == "lbl-miss":
            return ("skiprow", state[1], state[2], state[3], 1) if sym == HASH else state
        if kind == "skiprow":
            _, t, i, j, h = state
            if sym in _DIGITS:
                return state
            if h + 1 == _ROW_TAIL_HASHES:
                return ("lbl", t, i, j, 0)
            return ("skiprow", t, i, j, h + 1)
        if kind == "seek":
            _, t, j, k = state
            if sym in _DIGITS:
                return state
            return ("num", t, 0) if k + 1 == j else ("seek", t, j, k + 1)
        if kind == "num":
            _, t, val = state
            if sym in _DIGITS:
                return ("num", t, 2 * val + int(sym))
            return ("carry", t, val - 1) if val else None
        raise ValueError(f"Unknown solver state {state!r}.")

    def _advance(self, t: int, v: int):
        if v == self.n - 1:
            return ACCEPT
        if t + 1 >= self.n:
            return ()
        return self._branch(t + 1, v)

    def finish(self, state):
        kind = state[0]
        if kind == "init":
            return ACCEPT if self.n == 1 else self._branch(1, 0)
        if kind == "carry":
            return self._advance(state[1], state[2])
        if kind == "num" and state[2]:
            return self._advance(state[1], state[2] - 1)
        return ()


def build_reachability_core(n: int) -> TwoWayAutomaton:
    """
    The solver without the validity check in front.
    """
    return compile_sweep_program(ReachabilityProgram(n), name=f"reach-{n}")


def build_3dstcon_solver(n: int) -> TwoWayAutomaton:
    """
    Simple 3-branching 2nfa accepting exactly the encodings of n-vertex graphs with a path from
    0 to n-1. Invalid encodings are rejected by the validator run in front of the solver.
    """
    machine = chain_with_checker(build_graph_validator(n), build_reachability_core(n))
    machine = machine.replace(name=f"solver-{n}")
    logger.debug("Reachability solver for n=%d has %d states.", n, len(machine.states))
    return machine
