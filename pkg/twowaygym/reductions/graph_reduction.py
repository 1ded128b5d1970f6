"""
Reduction from a simple 2nfa M and an input x to a reachability instance G_x: M accepts x iff
the vertex of (initial state, ¢) reaches the vertex of (accepting state, ¢) in G_x.

Vertices are triples <k, j, r>: <0, j, 0> stands for state j at ¢, <1, j, 0> for state j at $,
and <1, j, r> with r >= 1 are the nodes of a binary tree that fans the choices at $ out into at
most two edges per node. A triple is numbered 2^(e+1) * j + 2r + k with e = ceil(log2(c+1)).
"""
import logging
import typing as T
from dataclasses import dataclass, field

from twowaygym.automata.machine import TwoWayAutomaton, validate_automaton
from twowaygym.codecs.graph import Digraph3
from twowaygym.definitions import CENT, DOLLAR, RIGHT
from twowaygym.errors import WrongMachineKindError

logger = logging.getLogger(__name__)

Triple = tuple[int, int, int]


def _fresh(base: str, taken: T.Collection[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def _require_simple_nfa(M: TwoWayAutomaton) -> None:
    report = validate_automaton(M)
    if not report.is_simple:
        raise WrongMachineKindError(f"Machine {M.name or '<unnamed>'} is not simple.")
    if M.universal:
        raise WrongMachineKindError("The reduction applies to 2nfas only.")


def normalize_unique_accept(M: TwoWayAutomaton) -> TwoWayAutomaton:
    """
    Equivalent simple 2nfa with states [start] + M.states + [carry, accept]: the initial state
    has index 0, the only accepting state has index |Q|+2 and is entered only at $.
    An accepting move of M taken away from $ enters `carry`, which sweeps on to $.
    The branching bound is kept, but not the shape of a (c+1)-branching machine: the start
    state copies the moves of M's initial state, and choices merged into `accept` collapse.
    """
    _require_simple_nfa(M)
    start = _fresh("<start>", M.states)
    carry = _fresh("<carry>", M.states)
    accept = _fresh("<accept>", M.states)

    def redirect(moves, symbol):
        out = []
        for p, d in moves:
            if p in M.accepting:
                p = accept if symbol == DOLLAR else carry
            out.append((p, d))
        return tuple(dict.fromkeys(out))

    transitions = {key: redirect(moves, key[1]) for key, moves in M.transitions.items()}
    for s in M.symbols:
        transitions[(carry, s)] = ((accept if s == DOLLAR else carry, RIGHT),)
    source = carry if M.initial in M.accepting else M.initial
    for s in M.symbols:
        moves = transitions.get((source, s), ())
        if moves:
            transitions[(start, s)] = moves
    return M.replace(
        states=(start,) + M.states + (carry, accept),
        initial=start,
        transitions=transitions,
        accepting=frozenset({accept}),
        existential=None,
        name=f"{M.name or 'M'}+unique-accept",
    )


def gadget_exponent(c: int) -> int:
    """
    e = ceil(log2(c+1)).
    """
    return max(1, c.bit_length())


@dataclass(frozen=True)
class ReductionOutput:
    """
    Graph of a reduction with its source, target and the vertex numbers of all triples.
    `degree_violations` lists vertices whose in- plus outdegree exceeds 3.
    """

    graph: Digraph3
    source: int
    target: int
    labels: dict[Triple, int] = field(hash=False)
    c: int = 1
    e: int = 1
    degree_violations: tuple[int, ...] = ()
    legalized: bool = False

    def as_instance(self) -> Digraph3:
        """
        Reachability instance on the vertices touched by edges, renumbered so that the source is
        vertex 0 and the target the last vertex.
        """
        used = {self.source, self.target}
        for u, v in self.graph.edges():
            used.update((u, v))
        order = [self.source] + sorted(used - {self.source, self.target}) + [self.target]
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u, v in self.graph.edges()]
        return Digraph3.from_edges(len(order), edges)

    def to_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.edges()],
            "source": self.source,
            "target": self.target,
            "c": self.c,
            "e": self.e,
            "labels": [[k, j, r, v] for (k, j, r), v in sorted(self.labels.items(), key=lambda kv: kv[1])],
            "degree_violations": list(self.degree_violations),
            "legalized": self.legalized,
        }


def _sweep_map(M: TwoWayAutomaton, x: T.Sequence[str]) -> dict[int, int]:
    """
    j -> k: the state reached at $ when state j starts at ¢ and reads ¢x.
    """
    idx = M.state_index()
    out = {}
    for q in M.states:
        state = q
        for s in (CENT, *x):
            moves = M.delta(state, s)
            if not moves:
                state = None
                break
            state = moves[0][0]
        if state is not None:
            out[idx[q]] = idx[state]
    return out


def nfa_to_graph(M: TwoWayAutomaton, x: T.Sequence[str]) -> ReductionOutput:
    """
    Build G_x for a simple 2nfa and an input word.

    The $-choices of state j hang below the heap tree E_j: choice t enters ⟨0,p_t,0⟩ from leaf
    2^(e-1) + t//2, so each leaf carries two choices and the tree needs only ceil(c/2) leaves.

    Args:
        M (TwoWayAutomaton): Simple 2nfa; it is normalized first.
        x (Sequence[str]): Input word over M's alphabet.

    Returns:
        ReductionOutput: with 2^(e+1) * (|Q|+3) vertices and outdegree at most 2.
    """
    N = normalize_unique_accept(M)
    idx = N.state_index()
    c = max(1, max((len(N.delta(q, DOLLAR)) for q in N.states), default=1))
    e = gadget_exponent(c)
    stride = 2 ** (e + 1)
    first_leaf = 2 ** (e - 1)

    def label(k: int, j: int, r: int) -> int:
        return stride * j + 2 * r + k

    labels = {(k, j, r): label(k, j, r) for j in range(len(N.states)) for r in range(2 ** e) for k in (0, 1)}
    edges = [(label(0, j, 0), label(1, k, 0)) for j, k in _sweep_map(N, x).items()]
    for q in N.states:
        choices = N.delta(q, DOLLAR)
        if not choices:
            continue
        j = idx[q]
        edges.append((label(1, j, 0), label(1, j, 1)))
        for r in range(1, first_leaf):
            edges.append((label(1, j, r), label(1, j, 2 * r)))
            edges.append((label(1, j, r), label(1, j, 2 * r + 1)))
        for t, (p, _) in enumerate(choices):
            edges.append((label(1, j, first_leaf + t // 2), label(0, idx[p], 0)))
    graph = Digraph3.from_edges(stride * len(N.states), edges)
    out = ReductionOutput(
        graph=graph,
        source=label(0, idx[N.initial], 0),
        target=label(0, len(N.states) - 1, 0),
        labels=labels,
        c=c,
        e=e,
        degree_violations=tuple(graph.degree_violations()),
    )
    if out.degree_violations:
        logger.debug("G_x has %d vertices of degree above 3.", len(out.degree_violations))
    return out


def legalize_indegree(output: ReductionOutput) -> ReductionOutput:
    """
    Route the in-edges of every vertex of degree above 3 through a relay chain whose nodes have
    indegree 2 and outdegree 1, so that the hub keeps indegree 1. Reachability is unchanged.
    """
    G = output.graph
    preds: dict[int, list[int]] = {v: [] for v in range(G.n)}
    for u, v in G.edges():
        preds[v].append(u)
    edges = []
    n = G.n
    hot = set(output.degree_violations)
    for v in range(G.n):
        if v not in hot or len(preds[v]) < 2:
            edges.extend((u, v) for u in preds[v])
            continue
        ins = preds[v]
        relay = n
        n += 1
        edges.extend([(ins[0], relay), (ins[1], relay)])
        for u in ins[2:]:
            nxt = n
            n += 1
            edges.extend([(relay, nxt), (u, nxt)])
            relay = nxt
        edges.append((relay, v))
    graph = Digraph3.from_edges(n, edges)
    return ReductionOutput(
        graph=graph,
        source=output.source,
        target=output.target,
        labels=output.labels,
        c=output.c,
        e=output.e,
        degree_violations=tuple(graph.degree_violations()),
        legalized=True,
    )


@dataclass(frozen=True)
class LabelAudit:
    """
    Vertex counts of the reduction for branching bound c and n = |Q|: the count 2^e(n+2)+2^(e+1)-1
    of the stride-2^e numbering, the number of triples it maps onto an already used number, and
    the count 2^(e+1)(n+3) of the injective stride-2^(e+1) numbering.
    """

    c: int
    n: int
    e: int
    narrow_count: int
    narrow_collisions: int
    injective_count: int


def label_audit(c: int, n: int) -> LabelAudit:
    e = gadget_exponent(c)
    seen = set()
    collisions = 0
    for j in range(n + 3):
        for r in range(2 ** e):
            for k in (0, 1):
                v = 2 ** e * j + 2 * r + k
                collisions += v in seen
                seen.add(v)
    return LabelAudit(
        c=c,
        n=n,
        e=e,
        narrow_count=2 ** e * (n + 2) + 2 ** (e + 1) - 1,
        narrow_collisions=collisions,
        injective_count=2 ** (e + 1) * (n + 3),
    )
