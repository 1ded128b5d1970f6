"""
Constructions over the one-letter alphabet {1}: the unary reachability solver, tail/cycle
decomposition of deterministic unary sweeps, and evaluation of unary machines on lengths given
by their prime factors, so that 1^e is never written out.
"""
import functools
import logging
import typing as T
from dataclasses import dataclass, field

from twowaygym.automata.evaluators import measure_narrowness
from twowaygym.automata.machine import State, TapeGeometry, TwoWayAutomaton
from twowaygym.codecs.graph import MAX_OUTDEGREE, decode_row, iter_rows
from twowaygym.codecs.prime import (
    UnaryWord, decode_graph_prime, edge_of_prime, prime_block_width, prime_index, residue_of
)
from twowaygym.codecs.strings import bin_fixed, parse_bin_fixed
from twowaygym.config import load_caps
from twowaygym.definitions import CENT, DOLLAR, HASH, RIGHT, UNARY_SYMBOL
from twowaygym.errors import DomainError, EncodingError, FormatError, WrongMachineKindError
from twowaygym.reductions.sweeps import ACCEPT, SweepProgram, compile_sweep_program

logger = logging.getLogger(__name__)

# Outcome of a sweep that gets stuck in a universal state; it accepts vacuously.
VACUOUS = "⊤"


class UnaryReachabilityProgram(SweepProgram):
    """
    Round-by-round reachability on 1^e where e is the product of the edge primes.

    At $ with current vertex i the program guesses k in {1, 2, 3}; the following sweeps test
    the candidates j = 0, 1, ... one per sweep by counting e modulo p_(i,j). The k-th candidate
    dividing e becomes the next vertex; with fewer than k of them the branch dies.
    """

    alphabet = (UNARY_SYMBOL,)
    paired = False

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"Solver size must be at least 1, got {n}.")
        self.n = n

    def _candidates(self, i: int) -> list[int]:
        return [j for j in range(self.n) if (i, j) != (0, 0)]

    def _next_candidate(self, i: int, j: int) -> T.Optional[int]:
        later = [c for c in self._candidates(i) if c > j]
        return later[0] if later else None

    def _branch(self, t: int, i: int) -> tuple:
        first = self._candidates(i)[0]
        return tuple(("div", t, i, k, first, 0, 0) for k in (1, 2, 3))

    def initial(self):
        return ("init",)

    def step(self, state, sym):
        if state[0] == "init":
            return state
        _, t, i, k, j, h, l = state
        return ("div", t, i, k, j, h, (l + 1) % prime_index(self.n, i, j))

    def finish(self, state):
        if state[0] == "init":
            return ACCEPT if self.n == 1 else self._branch(1, 0)
        _, t, i, k, j, h, l = state
        if l == 0:
            h += 1
            if h == k:
                if j == self.n - 1:
                    return ACCEPT
                if t + 1 >= self.n:
                    return ()
                return self._branch(t + 1, j)
        j = self._next_candidate(i, j)
        if j is None:
            return ()
        return (("div", t, i, k, j, h, 0),)


def build_unary_3dstcon_solver(n: int) -> TwoWayAutomaton:
    """
    Simple 3-branching unary 2nfa accepting 1^e, for e the unary code of an n-vertex graph,
    iff the graph has a path from 0 to n-1.
    """
    machine = compile_sweep_program(UnaryReachabilityProgram(n), name=f"unary-solver-{n}")
    logger.debug("Unary solver for n=%d has %d states.", n, len(machine.states))
    return machine


@dataclass(frozen=True)
class RhoDecomposition:
    """
    States of a deterministic unary sweep started in `start`: `tail[m]` (then the cycle) is the
    state after reading ¢ and m ones. A sweep that halts or dies has `halted` set and a single
    cycle entry holding the halting state, None for a dead branch or `VACUOUS`.
    """

    start: State
    tail: tuple[State, ...]
    cycle: tuple[T.Optional[State], ...]
    halted: bool = False

    @property
    def cycle_length(self) -> int:
        return len(self.cycle)

    def state_at(self, e: T.Union[UnaryWord, int]) -> T.Optional[State]:
        e = e if isinstance(e, UnaryWord) else UnaryWord(int(e))
        if e.length < len(self.tail):
            return self.tail[e.length]
        if self.halted:
            return self.cycle[0]
        L = len(self.cycle)
        return self.cycle[(residue_of(e, L) - len(self.tail)) % L]


@functools.lru_cache(maxsize=None)
def _require_simple_unary(A: TwoWayAutomaton) -> None:
    if A.alphabet != (UNARY_SYMBOL,):
        raise WrongMachineKindError(f"Expected the unary alphabet, got {A.alphabet}.")
    if A.geometry != TapeGeometry.CIRCULAR:
        raise WrongMachineKindError("Unary sweeps require a circular tape.")
    for (q, s), moves in A.transitions.items():
        if any(d != RIGHT for _, d in moves):
            raise WrongMachineKindError(f"Transition ({q!r}, {s!r}) is not a sweeping move.")
        if s != DOLLAR and len(moves) > 1:
            raise WrongMachineKindError(f"State {q!r} branches on {s!r}; choices are only allowed at $.")


def _single_move(A: TwoWayAutomaton, q: State, symbol: str) -> T.Optional[State]:
    moves = A.delta(q, symbol)
    if not moves:
        return VACUOUS if q in A.universal else None
    return moves[0][0]


@functools.lru_cache(maxsize=None)
def rho_decompose(A: TwoWayAutomaton, q_start: State) -> RhoDecomposition:
    """
    Iterate the step map on 1 from δ(q_start, ¢) until a state repeats or the sweep halts.

    Raises:
        WrongMachineKindError: if `A` is not a simple unary machine.
    """
    _require_simple_unary(A)
    seq: list[State] = []
    index: dict[State, int] = {}
    cur = _single_move(A, q_start, CENT)
    while True:
        if cur is None or cur == VACUOUS or cur in A.halting:
            return RhoDecomposition(q_start, tuple(seq), (cur,), halted=True)
        if cur in index:
            k = index[cur]
            return RhoDecomposition(q_start, tuple(seq[:k]), tuple(seq[k:]))
        index[cur] = len(seq)
        seq.append(cur)
        cur = _single_move(A, cur, UNARY_SYMBOL)


def sweep_state_after_unary(A: TwoWayAutomaton, q_start: State, e: T.Union[UnaryWord, int]) -> T.Optional[State]:
    """
    State of the sweep started at ¢ in `q_start` once it has read ¢1^e, i.e. the state scanning $.
    For a factored `e` only residues of the factors are used.
    """
    return rho_decompose(A, q_start).state_at(e)


def simulate_sweep(A: TwoWayAutomaton, q_start: State, length: int) -> T.Optional[State]:
    """
    Step-by-step counterpart of `sweep_state_after_unary` on a written-out tape.
    """
    cur = _single_move(A, q_start, CENT)
    for _ in range(length):
        if cur is None or cur == VACUOUS or cur in A.halting:
            return cur
        cur = _single_move(A, cur, UNARY_SYMBOL)
    return cur


def run_unary(A: TwoWayAutomaton, e: T.Union[UnaryWord, int]) -> bool:
    """
    Acceptance of a simple unary 2nfa or 2afa on 1^e. Every sweep is replaced by its compressed
    outcome and the choices at $ are evaluated as a least fixpoint over the sweep-start states.
    """
    _require_simple_unary(A)
    e = e if isinstance(e, UnaryWord) else UnaryWord(int(e))
    children: dict[State, list[State]] = {}
    accepted: set[State] = set()
    stack = [A.initial]
    while stack:
        q = stack.pop()
        if q in children:
            continue
        children[q] = []
        if q in A.accepting:
            accepted.add(q)
            continue
        if q in A.halting:
            continue
        r = sweep_state_after_unary(A, q, e)
        if r == VACUOUS or r in A.accepting:
            accepted.add(q)
            continue
        if r is None or r in A.halting:
            continue
        targets = list(dict.fromkeys(p for p, _ in A.delta(r, DOLLAR)))
        if r in A.universal and not targets:
            accepted.add(q)
            continue
        children[q] = targets
        stack.extend(p for p in targets if p not in children)
    universal = {q for q in children if q not in accepted and _decides_universally(A, q, e)}
    changed = True
    while changed:
        changed = False
        for q, targets in children.items():
            if q in accepted or not targets:
                continue
            hits = [p in accepted for p in targets]
            if all(hits) if q in universal else any(hits):
                accepted.add(q)
                changed = True
    return A.initial in accepted


def _decides_universally(A: TwoWayAutomaton, q: State, e: UnaryWord) -> bool:
    return sweep_state_after_unary(A, q, e) in A.universal


class _PrimeSweepProgram(SweepProgram):
    """
    Flat counterpart of a simple unary machine on prime encodings: each sweep of the unary
    machine becomes one sweep over the blocks that multiplies the primes modulo the sweep's
    cycle length and, saturated at the tail length, as integers.

    Every sweep checks that each block is bin_s(p) for an edge prime p of an n-vertex graph.
    The first sweep also remembers the primes seen so far and rejects repeated edges and
    vertices of outdegree above 3, so the flat machine rejects whatever `decode_graph_prime`
    rejects. Later sweeps reread the same input and skip that bookkeeping.
    """

    alphabet = ("0", "1", HASH)
    paired = False

    def __init__(self, M: TwoWayAutomaton, n: int):
        self.M = M
        self.n = n
        self.width = prime_block_width(n)
        self._primes: dict[str, T.Optional[int]] = {}

    def _start(self, q: State, checking: bool = False):
        rho = rho_decompose(self.M, q)
        return (q, 1 % rho.cycle_length, min(1, len(rho.tail)), None, frozenset(), checking)

    def initial(self):
        return self._start(self.M.initial, checking=True)

    def _block_prime(self, block: str) -> T.Optional[int]:
        if block not in self._primes:
            try:
                p = parse_bin_fixed(block, self.width)
                edge_of_prime(self.n, p)
            except (FormatError, DomainError):
                p = None
            self._primes[block] = p
        return self._primes[block]

    def _close_block(self, state) -> T.Optional[tuple]:
        q, r, small, block, seen, checking = state
        p = self._block_prime(block)
        if p is None:
            return None
        if checking:
            u = edge_of_prime(self.n, p)[0]
            if p in seen or sum(edge_of_prime(self.n, x)[0] == u for x in seen) >= MAX_OUTDEGREE:
                return None
            seen = seen | {p}
        rho = rho_decompose(self.M, q)
        return (q, (r * p) % rho.cycle_length, min(small * p, len(rho.tail)), "sep", seen, checking)

    def step(self, state, sym):
        q, r, small, block, seen, checking = state
        if sym == HASH:
            if block is None or block == "sep":
                return None
            return self._close_block(state)
        block = "" if block is None or block == "sep" else block
        if len(block) >= self.width:
            return None
        return (q, r, small, block + sym, seen, checking)

    def _state_at_dollar(self, state) -> T.Optional[State]:
        block = state[3]
        if block == "sep":
            return None
        if block is not None:
            state = self._close_block(state)
            if state is None:
                return None
        q, r, small = state[:3]
        rho = rho_decompose(self.M, q)
        if small < len(rho.tail):
            return rho.tail[small]
        if rho.halted:
            return rho.cycle[0]
        return rho.cycle[(r - len(rho.tail)) % rho.cycle_length]

    def is_universal(self, state) -> bool:
        return self._state_at_dollar(state) in self.M.universal

    def finish(self, state):
        M = self.M
        s = self._state_at_dollar(state)
        if s == VACUOUS or s in M.accepting:
            return ACCEPT
        if s is None or s in M.halting:
            return ()
        targets = list(dict.fromkeys(p for p, _ in M.delta(s, DOLLAR)))
        if s in M.universal:
            if any(p in M.rejecting for p in targets):
                return ()
            targets = [p for p in targets if p not in M.accepting]
            if not targets:
                return ACCEPT
        elif any(p in M.accepting for p in targets):
            return ACCEPT
        return tuple(self._start(p) for p in targets if p not in M.halting)


@dataclass(frozen=True)
class PrimeInputEvaluator:
    """
    Decides prime-encoded inputs by running a simple unary machine on the length they stand for.
    `flat` is the literal automaton over {0, 1, #} when it fit under the emission cap.
    """

    machine: TwoWayAutomaton
    n: int
    flat: T.Optional[TwoWayAutomaton] = None
    report: dict = field(default_factory=dict, hash=False, compare=False)

    def word_of(self, text: str) -> UnaryWord:
        G = decode_graph_prime(text, self.n)
        return UnaryWord.from_factors(sorted(prime_index(self.n, i, j) for i, j in G.edges()))

    def accepts(self, text: str) -> bool:
        try:
            e = self.word_of(text)
        except FormatError:
            return False
        return run_unary(self.machine, e)

    def __call__(self, text: str) -> bool:
        return self.accepts(text)


def _sweep_starts(M: TwoWayAutomaton) -> list[State]:
    starts = [M.initial]
    for (q, s), moves in M.transitions.items():
        if s == DOLLAR:
            starts.extend(p for p, _ in moves if p not in M.halting)
    return list(dict.fromkeys(starts))


def compress_unary_afa(
    M: TwoWayAutomaton, n: int, emit_flat: bool = True, cap: T.Optional[int] = None
) -> PrimeInputEvaluator:
    """
    Evaluator of `M` on prime encodings of n-vertex graphs; optionally also a flat automaton.

    Args:
        M (TwoWayAutomaton): Simple unary 2nfa or 2afa, branching only at $.
        n (int): Vertex count of the encoded graphs.
        emit_flat (bool, optional): Whether to try building the flat automaton.
        cap (int, optional): Largest estimated flat state count; defaults to `flat_emission_cap`.
    """
    _require_simple_unary(M)
    if M.initial in M.halting:
        raise WrongMachineKindError("The unary machine must not start in a halting state.")
    starts = _sweep_starts(M)
    rhos = [rho_decompose(M, q) for q in starts]
    width = prime_block_width(n)
    per_sweep = max(r.cycle_length for r in rhos) * (max(len(r.tail) for r in rhos) + 1) * (2 ** (width + 1) + 1)
    # the first sweep also carries the set of primes read so far
    estimate = per_sweep * (len(starts) + 2 ** max(n * n - 1, 0))
    report = {"machine_states": len(M.states), "sweep_starts": len(starts), "flat_estimate": estimate}
    flat = None
    if emit_flat:
        cap = load_caps().flat_emission_cap if cap is None else cap
        if estimate > cap:
            logger.warning("Flat automaton for %s would need ~%d states (cap %d); skipped.", M.name, estimate, cap)
        else:
            flat = compile_sweep_program(_PrimeSweepProgram(M, n), name=f"prime[{M.name}]")
            narrowness = measure_narrowness(flat, "") if flat.universal else None
            report.update(
                flat_states=len(flat.states),
                flat_branching=flat.branching_bound,
                flat_narrowness=narrowness.width if narrowness else 0,
            )
    return PrimeInputEvaluator(M, n, flat, report)


def graph_binary_to_prime(x: str) -> str:
    """
    Translate a binary graph encoding into its prime encoding row by row. Rows come in order,
    so the primes p_(i,j) are emitted in ascending order.

    Raises:
        FormatError: if `x` is not a graph encoding.
        EncodingError: if the graph has the edge (0, 0).
    """
    n = sum(1 for _ in iter_rows(x))
    s = prime_block_width(n)
    blocks = []
    for v, (label, entries) in enumerate(iter_rows(x)):
        for j in decode_row(v, label, entries, n):
            if v == 0 and j == 0:
                raise EncodingError("Edge (0, 0) has no prime and cannot be represented.")
            blocks.append(bin_fixed(s, prime_index(n, v, j)))
    return HASH.join(blocks)
