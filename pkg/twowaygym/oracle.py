"""
Brute-force reference implementations for differential testing, plus enumerators and seeded
random generators of graphs and machines. Nothing here calls the evaluators of
`twowaygym.automata`.
"""
import itertools
import logging
import math
import typing as T
from multiprocessing import Pool

import networkx as nx
import numpy as np

from twowaygym.automata.machine import TapeGeometry, TwoWayAutomaton
from twowaygym.codecs.graph import MAX_OUTDEGREE, Digraph3
from twowaygym.config import load_caps
from twowaygym.definitions import BINARY_ALPHABET, CENT, DOLLAR, LEFT, RIGHT, STAY
from twowaygym.errors import CapExceededError, WrongMachineKindError

if T.TYPE_CHECKING:
    from twowaygym.reductions.dtm import SpaceBoundedDTM

logger = logging.getLogger(__name__)

Seed = T.Union[int, np.random.Generator]


def _rng(seed: Seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def reach(G: Digraph3, s: int, t: int) -> bool:
    if not (0 <= s < G.n and 0 <= t < G.n):
        raise ValueError(f"Vertices {s}, {t} must lie in [0, {G.n - 1}].")
    return nx.has_path(G.to_networkx(), s, t)


def _moves(A: TwoWayAutomaton, tape: str, q: str, h: int) -> list[tuple[str, int]]:
    """
    Successor configurations, written independently of the evaluators.
    """
    out = []
    for p, d in A.transitions.get((q, tape[h]), ()):
        g = h + d
        if A.geometry == TapeGeometry.CIRCULAR:
            out.append((p, g % len(tape)))
        elif 0 <= g < len(tape):
            out.append((p, g))
    return out


def _tape(x: T.Sequence[str]) -> list[str]:
    return [CENT] + list(x) + [DOLLAR]


def nfa_accept_bruteforce(A: TwoWayAutomaton, x: T.Sequence[str]) -> bool:
    """
    Iterative-deepening depth-first search for an accepting path of length at most |Q|(|x|+2).
    """
    if A.universal:
        raise WrongMachineKindError("nfa_accept_bruteforce requires a machine without universal states.")
    tape = _tape(x)
    max_depth = len(A.states) * len(tape)
    for limit in range(max_depth + 1):
        # failed[c] = largest remaining depth already searched from c without success
        failed: dict[tuple[str, int], int] = {}

        def dfs(q: str, h: int, remaining: int) -> bool:
            if q in A.accepting:
                return True
            if remaining == 0 or q in A.rejecting or failed.get((q, h), -1) >= remaining:
                return False
            for p, g in _moves(A, tape, q, h):
                if dfs(p, g, remaining - 1):
                    return True
            failed[(q, h)] = remaining
            return False

        if dfs(A.initial, 0, limit):
            return True
    return False


def afa_accept_bruteforce(A: TwoWayAutomaton, x: T.Sequence[str]) -> bool:
    """
    Bounded-height backward induction: ACC_h holds the configurations with an accepting
    computation subtree of height at most h, for h up to |Q|(|x|+2).
    """
    tape = _tape(x)
    configs = [(q, h) for q in A.states for h in range(len(tape))]
    succ = {c: [] if c[0] in A.accepting | A.rejecting else _moves(A, tape, *c) for c in configs}
    acc = {c for c in configs if c[0] in A.accepting or (c[0] in A.universal and not succ[c])}
    for _ in range(len(configs)):
        nxt = set(acc)
        for c in configs:
            q = c[0]
            if c in acc or q in A.accepting or q in A.rejecting:
                continue
            children = succ[c]
            if q in A.universal:
                if all(ch in acc for ch in children):
                    nxt.add(c)
            elif any(ch in acc for ch in children):
                nxt.add(c)
        if nxt == acc:
            break
        acc = nxt
    return (A.initial, 0) in acc


def count_graphs(n: int) -> int:
    """
    Number of Digraph3 values on n vertices: (sum_{k <= min(3, n)} C(n, k))^n.
    """
    return sum(math.comb(n, k) for k in range(min(MAX_OUTDEGREE, n) + 1)) ** n


def enumerate_graphs(n: int, max_n: T.Optional[int] = None) -> T.Iterator[Digraph3]:
    """
    All Digraph3 values on n vertices, without duplicates.

    Raises:
        CapExceededError: if n exceeds the enumeration cap.
    """
    max_n = load_caps().enumeration_max_n if max_n is None else max_n
    if n > max_n:
        raise CapExceededError(
            f"Refusing to enumerate {count_graphs(n)} graphs on n={n} > {max_n} vertices.",
            {"n": n, "cap": max_n, "count": count_graphs(n)},
        )
    rows = [c for k in range(min(MAX_OUTDEGREE, n) + 1) for c in itertools.combinations(range(n), k)]
    for out in itertools.product(rows, repeat=n):
        yield Digraph3(n, out)


def random_graph(n: int, seed: Seed, max_outdegree: int = MAX_OUTDEGREE) -> Digraph3:
    rng = _rng(seed)
    out = []
    for _ in range(n):
        k = int(rng.integers(0, min(max_outdegree, n) + 1))
        out.append(tuple(sorted(int(j) for j in rng.choice(n, size=k, replace=False))))
    return Digraph3(n, tuple(out))


def all_words(alphabet: T.Sequence[str], max_len: int) -> T.Iterator[str]:
    for length in range(max_len + 1):
        for w in itertools.product(alphabet, repeat=length):
            yield "".join(w)


def random_word(alphabet: T.Sequence[str], max_len: int, seed: Seed) -> str:
    rng = _rng(seed)
    length = int(rng.integers(0, max_len + 1))
    return "".join(alphabet[int(i)] for i in rng.integers(0, len(alphabet), size=length))


def random_dtm_input(D: "SpaceBoundedDTM", max_len: int, seed: Seed, length: T.Optional[int] = None) -> str:
    """
    Random input for a space-bounded DTM, over its input alphabet. With `length` the word has
    exactly that length, otherwise a length in [0, max_len] is drawn.
    """
    rng = _rng(seed)
    if length is None:
        return random_word(D.input_alphabet, max_len, rng)
    return "".join(D.input_alphabet[int(i)] for i in rng.integers(0, len(D.input_alphabet), size=length))


def random_simple_nfa(
    n_states: int,
    c: int,
    alphabet: T.Sequence[str] = BINARY_ALPHABET,
    seed: Seed = 0,
    accepting_prob: float = 0.3,
) -> TwoWayAutomaton:
    """
    Random simple 2nfa: circular, every move +1, single choices away from $, and between one
    and `c` distinct choices at $. Accepting states are halting; q0 is the initial state.
    """
    rng = _rng(seed)
    alphabet = tuple(alphabet)
    states = tuple(f"q{i}" for i in range(n_states))
    accepting = frozenset(q for q in states[1:] if rng.random() < accepting_prob)
    transitions = {}
    for q in states:
        if q in accepting:
            continue
        for s in (CENT,) + alphabet:
            transitions[(q, s)] = ((states[int(rng.integers(n_states))], RIGHT),)
        k = int(rng.integers(1, c + 1))
        targets = rng.choice(n_states, size=min(k, n_states), replace=False)
        transitions[(q, DOLLAR)] = tuple((states[int(t)], RIGHT) for t in targets)
    return TwoWayAutomaton(
        states=states,
        alphabet=alphabet,
        initial=states[0],
        transitions=transitions,
        accepting=accepting,
        name=f"random-simple-{n_states}",
    )


def random_afa(
    n_states: int,
    alphabet: T.Sequence[str] = BINARY_ALPHABET,
    seed: Seed = 0,
    c: int = 2,
    universal_prob: float = 0.4,
    stationary: bool = False,
    geometry: TapeGeometry = TapeGeometry.CIRCULAR,
) -> TwoWayAutomaton:
    """
    Random 2afa with one accepting and one rejecting state. With `stationary`, direction 0 is
    allowed as well.
    """
    rng = _rng(seed)
    alphabet = tuple(alphabet)
    states = tuple(f"q{i}" for i in range(n_states)) + ("acc", "rej")
    working = states[:-2]
    directions = (LEFT, STAY, RIGHT) if stationary else (LEFT, RIGHT)
    transitions = {}
    for q in working:
        for s in alphabet + (CENT, DOLLAR):
            k = int(rng.integers(0, c + 1))
            transitions[(q, s)] = tuple(
                (states[int(rng.integers(len(states)))], directions[int(rng.integers(len(directions)))])
                for _ in range(k)
            )
    universal = frozenset(q for q in working if rng.random() < universal_prob)
    return TwoWayAutomaton(
        states=states,
        alphabet=alphabet,
        initial=working[0],
        transitions=transitions,
        accepting=frozenset({"acc"}),
        rejecting=frozenset({"rej"}),
        universal=universal,
        geometry=geometry,
        name=f"random-afa-{n_states}",
    )


def enumerate_simple_nfas(
    n_states: int, alphabet: T.Sequence[str] = BINARY_ALPHABET, max_choices: int = 3
) -> T.Iterator[TwoWayAutomaton]:
    """
    All simple 2nfas whose last state is the only accepting one: each working state picks at
    most one successor per symbol away from $ and any set of at most `max_choices` successors
    at $. Two states give 108 machines over a binary alphabet.
    """
    alphabet = tuple(alphabet)
    states = tuple(f"q{i}" for i in range(n_states))
    working = states[:-1]
    singles = [()] + [((p, RIGHT),) for p in states]
    branches = [
        tuple((p, RIGHT) for p in combo)
        for k in range(min(max_choices, n_states) + 1)
        for combo in itertools.combinations(states, k)
    ]
    keys = [(q, s) for q in working for s in (CENT,) + alphabet] + [(q, DOLLAR) for q in working]
    options = [singles] * (len(working) * (len(alphabet) + 1)) + [branches] * len(working)
    for choice in itertools.product(*options):
        yield TwoWayAutomaton(
            states=states,
            alphabet=alphabet,
            initial=states[0],
            transitions=dict(zip(keys, choice)),
            accepting=frozenset({states[-1]}),
        )


def run_trials(fn: T.Callable, trials: T.Sequence, workers: int = 1) -> list:
    """
    Apply `fn` to every trial, in a process pool when `workers` > 1. `fn` must be picklable.
    Results come back in trial order.
    """
    if workers <= 1:
        return [fn(t) for t in trials]
    with Pool(workers) as pool:
        return pool.map(fn, trials)
