"""
Simple 2dfa checking that its input is the binary encoding of a degree-3 digraph on n vertices.

The check runs as a sequence of sweeps over the quaternary symbols:
  1. shape: n rows of four '#'-separated tokens joined by '##', tokens are empty or binary
     numerals without leading zeros, labels are nonempty and empty entries come last;
  2. labels: row r is labeled binary(r+1);
  3. one sweep per v = 1..n: an entry equal to v is followed by an empty entry or an entry
     greater than v, and for v = n no entry exceeds n.
"""
import logging
import typing as T

from twowaygym.automata.machine import TwoWayAutomaton
from twowaygym.codecs.strings import binary_repr
from twowaygym.definitions import HASH
from twowaygym.reductions.sweeps import ACCEPT, SweepProgram, compile_sweep_program

logger = logging.getLogger(__name__)

_DIGITS = ("0", "1")


class GraphValidatorProgram(SweepProgram):

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"Validator size must be at least 1, got {n}.")
        self.n = n
        self.labels = [binary_repr(r + 1) for r in range(n)]

    def initial(self):
        return ("shape", 0, 0, False, False)

    # Shape phase: ("shape", row, field, has_digits, seen_empty) and ("shape-gap", row)

    def _close_token(self, field: int, has_digits: bool, seen_empty: bool) -> T.Optional[bool]:
        """
        New seen_empty flag after a token ends, or None if the token is illegal.
        """
        if field == 0:
            return False if has_digits else None
        if not has_digits:
            return True
        return None if seen_empty else seen_empty

    def _step_shape(self, state, sym):
        if state[0] == "shape-gap":
            r = state[1]
            if sym == HASH and r + 1 < self.n:
                return ("shape", r + 1, 0, False, False)
            return None
        _, r, f, has_digits, seen_empty = state
        if sym in _DIGITS:
            if not has_digits and sym == "0":
                return None
            return ("shape", r, f, True, seen_empty)
        if sym != HASH:
            return None
        seen_empty = self._close_token(f, has_digits, seen_empty)
        if seen_empty is None:
            return None
        if f == 3:
            return ("shape-gap", r)
        return ("shape", r, f + 1, False, seen_empty)

    def _finish_shape(self, state):
        if state[0] != "shape":
            return ()
        _, r, f, has_digits, seen_empty = state
        if r != self.n - 1 or f != 3 or self._close_token(f, has_digits, seen_empty) is None:
            return ()
        return (("label", 0, 0),)

    # Label phase: ("label", row, matched) and ("label-skip", row, hashes)

    def _step_label(self, state, sym):
        if state[0] == "label-skip":
            _, r, h = state
            if sym in _DIGITS:
                return state
            if h + 1 == 5:
                return ("label", r + 1, 0) if r + 1 < self.n else None
            return ("label-skip", r, h + 1)
        _, r, p = state
        label = self.labels[r]
        if sym == HASH:
            return ("label-skip", r, 1) if p == len(label) else None
        if p < len(label) and label[p] == sym:
            return ("label", r, p + 1)
        return None

    def _finish_label(self, state):
        if state == ("label-skip", self.n - 1, 3):
            return (("order", 1, 0, False, 0, "eq"),)
        return ()

    # Order phase for one v: ("order", v, field, prev_eq, digits, rel) and ("order-gap", v)

    def _compare(self, v: int, digits: int, rel: str) -> T.Optional[str]:
        if digits == 0:
            return None
        length = len(self.labels[v - 1])
        if digits > length:
            return "gt"
        if digits < length:
            return "lt"
        return rel

    def _close_entry(self, v: int, prev_eq: bool, digits: int, rel: str) -> T.Optional[bool]:
        """
        New prev_eq flag after an entry ends, or None if the entry breaks the order.
        """
        result = self._compare(v, digits, rel)
        if result is None:
            return False
        if prev_eq and result != "gt":
            return None
        if v == self.n and result == "gt":
            return None
        return result == "eq"

    def _step_order(self, state, sym):
        if state[0] == "order-gap":
            return ("order", state[1], 0, False, 0, "eq") if sym == HASH else None
        _, v, f, prev_eq, digits, rel = state
        label = self.labels[v - 1]
        if sym in _DIGITS:
            if f == 0:
                return state
            if digits < len(label) and rel == "eq" and sym != label[digits]:
                rel = "lt" if sym < label[digits] else "gt"
            return ("order", v, f, prev_eq, min(digits + 1, len(label) + 1), rel)
        if sym != HASH:
            return None
        if f == 0:
            return ("order", v, 1, False, 0, "eq")
        prev_eq = self._close_entry(v, prev_eq, digits, rel)
        if prev_eq is None:
            return None
        if f == 3:
            return ("order-gap", v)
        return ("order", v, f + 1, prev_eq, 0, "eq")

    def _finish_order(self, state):
        if state[0] != "order" or state[2] != 3:
            return ()
        _, v, f, prev_eq, digits, rel = state
        if self._close_entry(v, prev_eq, digits, rel) is None:
            return ()
        if v == self.n:
            return ACCEPT
        return (("order", v + 1, 0, False, 0, "eq"),)

    def step(self, state, symbol):
        phase = state[0]
        if phase.startswith("shape"):
            return self._step_shape(state, symbol)
        if phase.startswith("label"):
            return self._step_label(state, symbol)
        return self._step_order(state, symbol)

    def finish(self, state):
        phase = state[0]
        if phase.startswith("shape"):
            return self._finish_shape(state)
        if phase.startswith("label"):
            return self._finish_label(state)
        return self._finish_order(state)


def build_graph_validator(n: int) -> TwoWayAutomaton:
    """
    Simple deterministic automaton accepting exactly the valid encodings of n-vertex graphs.
    It only accepts while scanning $, so it can be chained in front of other machines.
    """
    machine = compile_sweep_program(GraphValidatorProgram(n), name=f"validator-{n}")
    logger.debug("Graph validator for n=%d has %d states.", n, len(machine.states))
    return machine
