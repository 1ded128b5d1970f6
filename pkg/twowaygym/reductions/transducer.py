"""
Simple deterministic transducer simulating a log-space DTM transducer on inputs of one length.

Inner states pack the DTM's state, work head, work content and input head together with the
position of the current sweep. Each sweep applies at most one DTM step, at the cell the DTM's
input head is on, and writes the DTM's output for that step.
"""
import logging
import typing as T
from collections import deque

from twowaygym.automata.machine import SurfaceConfig, Symbol, TapeGeometry, TwoWayAutomaton, successors, tape_of
from twowaygym.config import load_caps
from twowaygym.definitions import BLANK, CENT, DOLLAR, RIGHT
from twowaygym.errors import CapExceededError, DomainError
from twowaygym.reductions.dtm import SpaceBoundedDTM, validate_dtm

logger = logging.getLogger(__name__)

DONE_STATE = "done"
ACCEPT_STATE = "acc"


def transducer_sizing(D: SpaceBoundedDTM, n: int, space: int) -> dict[str, int]:
    """
    Upper estimate of the inner-state count of `dtm_to_sweeping_transducer(D, n, space)`.
    """
    cells = n + 2
    configurations = len(D.states) * space * len(D.work_alphabet) ** space * cells
    return {
        "dtm_states": len(D.states),
        "work_alphabet": len(D.work_alphabet),
        "space": space,
        "tape_cells": cells,
        "estimated_states": 2 * configurations * cells + 2,
    }


def dtm_to_sweeping_transducer(
    D: SpaceBoundedDTM, n: int, space: int, cap: T.Optional[int] = None
) -> TwoWayAutomaton:
    """
    Build a simple 2dfa with output that writes what `D` writes on every input of length `n`,
    as long as `D` stays within `space` work cells.

    Args:
        D (SpaceBoundedDTM): Transducer to simulate.
        n (int): Input length.
        space (int): Work cells available to D.
        cap (int, optional): State cap; defaults to `transducer_state_cap` from the caps file.

    Raises:
        CapExceededError: if the estimated state count exceeds the cap. The sizing report is
            attached to the exception.
    """
    if n < 0 or space < 1:
        raise DomainError(f"Need n >= 0 and space >= 1, got n={n}, space={space}.")
    validate_dtm(D)
    cap = load_caps().transducer_state_cap if cap is None else cap
    sizing = transducer_sizing(D, n, space)
    if sizing["estimated_states"] > cap:
        raise CapExceededError(
            f"Sweeping transducer for {D.name or 'DTM'} needs up to {sizing['estimated_states']} "
            f"states, cap is {cap}.",
            sizing,
        )
    last = n + 1
    symbols = (CENT,) + tuple(D.input_alphabet) + (DOLLAR,)
    # (q, k, w, j, s, stepped): DTM configuration, sweep position s, step taken this sweep
    start = (D.initial, 0, (BLANK,) * space, 0, 0, False)
    seen = {start: None}
    queue = deque([start])
    transitions: dict[tuple[str, str], tuple] = {}
    emissions: dict[tuple[str, str], str] = {}

    def visit(key) -> str:
        if key not in seen:
            seen[key] = None
            queue.append(key)
        return repr(key)

    for sym in symbols:
        transitions[(DONE_STATE, sym)] = ((ACCEPT_STATE if sym == DOLLAR else DONE_STATE, RIGHT),)

    while queue:
        key = queue.popleft()
        q, k, w, j, s, stepped = key
        name = repr(key)
        for sym in symbols:
            if (sym == CENT) != (s == 0) or (sym == DOLLAR) != (s == last):
                continue
            nxt_s = 0 if s == last else s + 1
            if stepped or s != j:
                after = (q, k, w, j, nxt_s, stepped and s != last)
                transitions[(name, sym)] = ((visit(after), RIGHT),)
                continue
            move = D.transitions.get((q, sym, w[k]))
            if move is None:
                continue
            j2, k2 = j + move.input_dir, k + move.work_dir
            if not (0 <= j2 <= last and 0 <= k2 < space):
                continue
            w2 = w[:k] + (move.write,) + w[k + 1:]
            emitted = D.emissions.get((q, sym, w[k]), "")
            if move.state in D.accepting:
                target = ACCEPT_STATE if sym == DOLLAR else DONE_STATE
            elif move.state in D.rejecting:
                continue
            else:
                target = visit((move.state, k2, w2, j2, nxt_s, s != last))
            transitions[(name, sym)] = ((target, RIGHT),)
            if emitted:
                emissions[(name, sym)] = emitted
    states = tuple(repr(key) for key in seen) + (DONE_STATE, ACCEPT_STATE)
    machine = TwoWayAutomaton(
        states=states,
        alphabet=tuple(D.input_alphabet),
        initial=repr(start),
        transitions=transitions,
        accepting=frozenset({ACCEPT_STATE}),
        geometry=TapeGeometry.CIRCULAR,
        emissions=emissions,
        name=f"sweep[{D.name or 'dtm'}, n={n}, S={space}]",
    )
    logger.debug("%s has %d states.", machine.name, len(states))
    return machine


def run_transducer(A: TwoWayAutomaton, x: T.Sequence[Symbol]) -> tuple[bool, str]:
    """
    Run a deterministic machine with output on `x`.

    Returns:
        tuple[bool, str]: acceptance and the concatenated output. A run that dies or loops
            rejects and keeps the output written so far.
    """
    if A.branching_bound > 1:
        raise DomainError("run_transducer requires a deterministic machine.")
    tape = tape_of(x)
    config = SurfaceConfig(A.initial, 0)
    output = []
    seen = set()
    while config.state not in A.halting:
        if config in seen:
            return False, "".join(output)
        seen.add(config)
        nxt = successors(A, tape, config.state, config.head)
        if not nxt:
            return False, "".join(output)
        output.append(A.emissions.get((config.state, tape[config.head]), ""))
        config = nxt[0]
    return config.state in A.accepting, "".join(output)
