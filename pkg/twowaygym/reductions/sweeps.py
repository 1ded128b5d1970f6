"""
Compilation of sweep programs into simple automata.

A sweep program reads the input one symbol per step from ¢ to $ and decides at $ to accept,
to reject or to start one or more new sweeps. Since every move of the compiled machine is +1 on
a circular tape and choices are only made at $, the result is simple by construction.
"""
import abc
import logging
import typing as T
from collections import deque

from twowaygym.automata.machine import TapeGeometry, TwoWayAutomaton
from twowaygym.definitions import BINARY_ALPHABET, CENT, DOLLAR, QUATERNARY, RIGHT

logger = logging.getLogger(__name__)

_PAIRS = {v: k for k, v in QUATERNARY.items()}

ACCEPT_STATE = "acc"


class _Accept:

    def __repr__(self) -> str:
        return "ACCEPT"


ACCEPT = _Accept()

ScanState = T.Hashable
Finish = T.Union[_Accept, tuple]


class SweepProgram(abc.ABC):
    """
    Finite control of a simple automaton written one sweep at a time.

    With `paired` set (the default) the tape holds a binary string and the program sees its
    quaternary symbols {0, 1, #, ⊥}, two tape cells per symbol. Otherwise the program sees the
    tape symbols of `alphabet` directly.
    """

    alphabet: tuple[str, ...] = BINARY_ALPHABET
    paired: bool = True

    @abc.abstractmethod
    def initial(self) -> ScanState:
        raise NotImplementedError

    @abc.abstractmethod
    def step(self, state: ScanState, symbol: str) -> T.Optional[ScanState]:
        """
        Next state after reading `symbol`, or None to reject.
        """
        raise NotImplementedError

    @abc.abstractmethod
    def finish(self, state: ScanState) -> Finish:
        """
        Decision at $: ACCEPT, or the start states of the next sweeps (empty to reject).
        More than one start state makes the compiled machine nondeterministic at $.
        """
        raise NotImplementedError

    def is_universal(self, state: ScanState) -> bool:
        """
        Whether the compiled state reading $ in `state` takes all of its choices. Ignored when
        `finish` rejects, so an empty choice list never accepts vacuously.
        """
        return False


def _state_name(key: tuple) -> str:
    return repr(key)


def compile_sweep_program(program: SweepProgram, name: str = "") -> TwoWayAutomaton:
    """
    Build the simple automaton of `program` by breadth-first search over its reachable states.
    Compiled states are (scan state, pending bit); the pending bit is the first half of a
    quaternary symbol and is always None unless `program.paired`.
    """
    start = (program.initial(), None)
    seen = {start: None}
    queue = deque([start])
    transitions: dict[tuple[str, str], tuple] = {}
    universal = set()
    accept_used = False

    def visit(key: tuple) -> str:
        if key not in seen:
            seen[key] = None
            queue.append(key)
        return _state_name(key)

    while queue:
        key = queue.popleft()
        s, pending = key
        q = _state_name(key)
        transitions[(q, CENT)] = ((q, RIGHT),)
        for sym in program.alphabet:
            if program.paired and pending is None:
                transitions[(q, sym)] = ((visit((s, sym)), RIGHT),)
                continue
            decoded = _PAIRS[pending + sym] if program.paired else sym
            nxt = program.step(s, decoded)
            if nxt is not None:
                transitions[(q, sym)] = ((visit((nxt, None)), RIGHT),)
        if pending is not None:
            continue
        result = program.finish(s)
        if result is not ACCEPT and result and program.is_universal(s):
            universal.add(q)
        if result is ACCEPT:
            accept_used = True
            transitions[(q, DOLLAR)] = ((ACCEPT_STATE, RIGHT),)
        else:
            targets = list(dict.fromkeys(visit((t, None)) for t in result))
            transitions[(q, DOLLAR)] = tuple((t, RIGHT) for t in targets)
    states = tuple(_state_name(k) for k in seen) + ((ACCEPT_STATE,) if accept_used else ())
    machine = TwoWayAutomaton(
        states=states,
        alphabet=tuple(program.alphabet),
        initial=_state_name(start),
        transitions=transitions,
        accepting=frozenset({ACCEPT_STATE}) if accept_used else frozenset(),
        universal=frozenset(universal),
        geometry=TapeGeometry.CIRCULAR,
        name=name or type(program).__name__,
    )
    logger.debug("Compiled %s into %d states.", machine.name, len(machine.states))
    return machine
