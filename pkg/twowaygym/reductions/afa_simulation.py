"""
Narrow 2afa for a space-bounded DTM, built by tracing the DTM's computation backwards.

Every existential claim is about one moment i of the DTM's run and is located on the input
cell the DTM scans at that moment:
  H(q, i, k, g): the DTM is in state q with its work head on cell k, which holds g, and its
      input head on the cell under the automaton's head;
  C(i, k, g): work cell k holds g and the work head is elsewhere.
A claim at moment i is justified by guessing a window of at most three work cells around k at
moment i-1, moving the automaton's head to the DTM's input position at i-1, and universally
splitting the window into its single-cell claims. Claims at moment 0 are checked against the
initial configuration. Accepting states idle by moving the input head back and forth, which
lets every accepting run be padded to exactly T steps.

Every moment takes the same number of automaton steps on every branch, so each ∀-level holds
windows of a single moment. The automaton's head guesses the DTM's input position backwards,
and the computation graph keeps every guess, so one moment's windows may sit on any of the
|x|+2 cells. The ∀-width is therefore bounded by a DTM-dependent constant times S·(|x|+2) and
does not grow with T.
"""
import logging
import typing as T
from collections import deque

from twowaygym.automata.machine import ResourceBounds, TapeGeometry, TwoWayAutomaton
from twowaygym.automata.transforms import eliminate_stationary_moves
from twowaygym.definitions import BLANK, CENT, DOLLAR, EDGE, LEFT, RIGHT, STAY, WILDCARD
from twowaygym.errors import DomainError
from twowaygym.reductions.dtm import SpaceBoundedDTM, run_dtm, validate_dtm

logger = logging.getLogger(__name__)

HAT = "^"
ACCEPT_STATE = "acc"
REJECT_STATE = "rej"

# (p, s, g_o, e, f, h): from state p reading s and g_o the DTM writes e and moves by f and h.
Predecessor = tuple[str, str, str, str, int, int]


def _padded_moves(D: SpaceBoundedDTM) -> dict[str, list[Predecessor]]:
    """
    Transitions grouped by target state, with idle moves of the accepting states added.
    """
    by_target: dict[str, list[Predecessor]] = {q: [] for q in D.states}
    for (p, s, g), move in D.transitions.items():
        by_target[move.state].append((p, s, g, move.write, move.input_dir, move.work_dir))
    for q in sorted(D.accepting):
        for s in D.input_symbols:
            for g in D.work_alphabet:
                for f in (LEFT, RIGHT):
                    by_target[q].append((q, s, g, g, f, STAY))
    return by_target


def _halt_move(symbol: str) -> int:
    return RIGHT if symbol == CENT else LEFT


def _walk_directions(symbol: str) -> tuple[int, ...]:
    if symbol == CENT:
        return (RIGHT,)
    if symbol == DOLLAR:
        return (LEFT,)
    return (LEFT, RIGHT)


class _Builder:

    def __init__(self, D: SpaceBoundedDTM, time_bound: int, space_bound: int, length: int):
        self.D = D
        self.T = time_bound
        self.S = space_bound
        self.length = length
        self.symbols = D.input_symbols
        self.gamma = tuple(D.work_alphabet)
        self.preds = _padded_moves(D)
        self.all_moves = [m for moves in self.preds.values() for m in moves]
        walk = length + 1
        if walk % 2 != time_bound % 2:
            walk += 1
        self.walk = walk

    def in_range(self, k: int) -> bool:
        return 0 <= k < self.S

    def initial(self):
        return ("walk", self.walk)

    def expand(self, key) -> tuple[dict[str, list[tuple[T.Any, int]]], bool]:
        """
        Moves of one automaton state per input symbol, and whether the state is universal.
        """
        kind = key[0]
        if kind == "walk":
            return self._walk(key), False
        if kind == "W":
            return self._window(key), True
        if key[2 if kind == "H" else 1] == 0:
            return self._leaf(key), False
        if kind == "H":
            moves = self._expand_h(key)
        else:
            moves = self._expand_c(key)
        return {s: moves for s in self.symbols}, False

    def _walk(self, key):
        r = key[1]
        if r > 1:
            targets = [("walk", r - 1)]
        else:
            targets = [
                ("H", q, self.T, k, g) for q in sorted(self.D.accepting) for k in range(self.S) for g in self.gamma
            ]
        return {s: [(t, d) for d in _walk_directions(s) for t in targets] for s in self.symbols}

    def _leaf(self, key):
        out = {}
        for s in self.symbols:
            if key[0] == "H":
                _, q, _, k, g = key
                ok = q == self.D.initial and s == CENT and k == 0 and g == BLANK
            else:
                _, _, k, g = key
                ok = k != 0 and g == BLANK
            out[s] = [(ACCEPT_STATE if ok else REJECT_STATE, _halt_move(s))]
        return out

    def _expand_h(self, key):
        _, q, i, k, g = key
        moves = []
        for p, s, g_o, e, f, h in self.preds[q]:
            o = -h
            if o == 0:
                if e != g:
                    continue
                cells = {k: g_o + HAT}
            else:
                if not self.in_range(k + o):
                    continue
                cells = {k: g, k + o: g_o + HAT}
            moves.append((self._window_key(p, i - 1, k, cells, s), -f))
        return moves

    def _expand_c(self, key):
        _, i, k, g = key
        moves = []
        left = self.gamma if self.in_range(k - 1) else (EDGE,)
        right = self.gamma if self.in_range(k + 1) else (EDGE,)
        for b in left:
            for d in right:
                window = ("W", None, i - 1, k, (b, g, d), WILDCARD)
                moves.extend((window, f) for f in (LEFT, RIGHT))
        for p, s, g_o, e, f, h in self.all_moves:
            if e == g and h != 0 and self.in_range(k + h):
                moves.append((self._window_key(p, i - 1, k, {k: g_o + HAT}, s), -f))
            for o in (LEFT, RIGHT):
                if self.in_range(k + o) and h != -o and self.in_range(k + o + h):
                    moves.append((self._window_key(p, i - 1, k, {k: g, k + o: g_o + HAT}, s), -f))
        return list(dict.fromkeys(moves))

    def _window_key(self, p, i, k, cells: dict[int, str], s):
        row = tuple(cells.get(k + o, WILDCARD) for o in (LEFT, STAY, RIGHT))
        return ("W", p, i, k, row, s)

    def _window(self, key):
        _, p, i, k, row, s = key
        children = []
        for o, cell in zip((LEFT, STAY, RIGHT), row):
            if cell in (WILDCARD, EDGE):
                continue
            if cell.endswith(HAT):
                children.append(("H", p, i, k + o, cell[:-len(HAT)]))
            else:
                children.append(("C", i, k + o, cell))
        out = {}
        for sym in self.symbols:
            if s != WILDCARD and sym != s:
                out[sym] = [(REJECT_STATE, _halt_move(sym))]
            else:
                out[sym] = [(child, STAY) for child in children]
        return out


def _state_name(key) -> str:
    return key if isinstance(key, str) else repr(key)


def dtm_to_narrow_afa(D: SpaceBoundedDTM, bounds: ResourceBounds, length: int) -> TwoWayAutomaton:
    """
    2afa over the flat tape that accepts an input of length `length` iff `D` accepts it within
    `bounds.time_bound` steps using at most `bounds.space_bound` work cells.

    Args:
        D (SpaceBoundedDTM): Machine to simulate.
        bounds (ResourceBounds): Time bound T and space bound S of this length class.
        length (int): Input length the automaton is built for.

    Returns:
        TwoWayAutomaton: {∀, ∃}-leveled 2afa without stationary moves, whose ∀-levels each hold
            one moment of the DTM's run and have width O(S·(length+2)).
    """
    if bounds.time_bound is None or bounds.space_bound is None:
        raise DomainError("Both a time bound and a space bound are required.")
    if length < 0:
        raise DomainError(f"Input length must be nonnegative, got {length}.")
    validate_dtm(D)
    builder = _Builder(D, bounds.time_bound, bounds.space_bound, length)
    start = builder.initial()
    order = {start: None}
    queue = deque([start])
    transitions = {}
    universal = set()
    while queue:
        key = queue.popleft()
        moves, is_universal = builder.expand(key)
        name = _state_name(key)
        if is_universal:
            universal.add(name)
        for sym, targets in moves.items():
            row = []
            for target, d in targets:
                if target not in order and target not in (ACCEPT_STATE, REJECT_STATE):
                    order[target] = None
                    queue.append(target)
                row.append((_state_name(target), d))
            transitions[(name, sym)] = tuple(row)
    states = tuple(_state_name(k) for k in order) + (ACCEPT_STATE, REJECT_STATE)
    afa = TwoWayAutomaton(
        states=states,
        alphabet=tuple(D.input_alphabet),
        initial=_state_name(start),
        transitions=transitions,
        accepting=frozenset({ACCEPT_STATE}),
        rejecting=frozenset({REJECT_STATE}),
        universal=frozenset(universal),
        geometry=TapeGeometry.FLAT,
        name=f"afa[{D.name or 'dtm'}, T={bounds.time_bound}, S={bounds.space_bound}, l={length}]",
    )
    afa = eliminate_stationary_moves(afa)
    logger.debug("%s has %d states.", afa.name, len(afa.states))
    return afa


def dtm_within_bounds(D: SpaceBoundedDTM, x: T.Sequence[str], bounds: ResourceBounds) -> bool:
    """
    Run `D` directly and warn when it does not halt within the bounds the automaton was built for.
    """
    run = run_dtm(D, x, time_bound=bounds.time_bound, space_bound=bounds.space_bound)
    if run.exceeded:
        logger.warning(
            "%s exceeds T=%s or S=%s on %r; the automaton rejects there.",
            D.name or "DTM", bounds.time_bound, bounds.space_bound, "".join(x),
        )
    return run.accepted
