"""
Acceptance evaluators over the surface-configuration graph: reachability for 2nfa, least-fixpoint
labeling for 2afa, and the leveled breadth-first evaluation that also yields the computation graph.
"""
import logging
import typing as T
from collections import deque
from dataclasses import dataclass

from twowaygym.automata.machine import (
    SurfaceConfig, Symbol, TwoWayAutomaton, successors, tape_of, validate_automaton
)
from twowaygym.errors import WrongMachineKindError

logger = logging.getLogger(__name__)


class LevelLabel:

    UNIVERSAL = 'universal'
    EXISTENTIAL = 'existential'
    MIXED = 'mixed'
    HALTING = 'halting'


@dataclass(frozen=True)
class NfaVerdict:

    accepted: bool
    path_length: T.Optional[int] = None

    def __bool__(self) -> bool:
        return self.accepted


@dataclass(frozen=True)
class Level:

    configs: tuple[SurfaceConfig, ...]
    quantifier_label: str
    universal_count: int

    @property
    def width(self) -> int:
        return len(self.configs)


@dataclass(frozen=True)
class ComputationGraph:
    """
    Leveled DAG of surface configurations; identical configurations at the same depth are merged.
    `edges[i]` holds the (parent, child) pairs between level i and level i+1.
    """

    levels: tuple[Level, ...]
    edges: tuple[tuple[tuple[SurfaceConfig, SurfaceConfig], ...], ...]
    depth_bound: int
    labels: tuple[frozenset, ...] = ()

    @property
    def widths(self) -> list[int]:
        return [lvl.width for lvl in self.levels]

    def is_leveled(self) -> bool:
        return all(lvl.quantifier_label != LevelLabel.MIXED for lvl in self.levels)


@dataclass(frozen=True)
class NarrownessReport:
    """
    `width` is the size of the largest pure-∀ level, halting configurations included;
    `universal_width` counts only ∀ configurations, in any level, mixed ones included.
    """

    width: int
    leveled: bool
    mixed_levels: tuple[int, ...] = ()
    universal_width: int = 0


def default_depth_bound(A: TwoWayAutomaton, x: T.Sequence[Symbol]) -> int:
    return max(1, len(A.states) * (len(x) + 2))


def accepts_nfa(A: TwoWayAutomaton, x: T.Sequence[Symbol]) -> NfaVerdict:
    """
    Breadth-first search from (initial, 0) for an accepting configuration.

    Returns:
        NfaVerdict: verdict and, when accepting, the length of a shortest accepting path
            (at most |Q|(|x|+2)).
    """
    if A.universal:
        raise WrongMachineKindError("accepts_nfa requires a machine without universal states.")
    tape = tape_of(x)
    start = SurfaceConfig(A.initial, 0)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        if c.state in A.accepting:
            return NfaVerdict(True, dist[c])
        if c.state in A.rejecting:
            continue
        for nxt in successors(A, tape, c.state, c.head):
            if nxt not in dist:
                dist[nxt] = dist[c] + 1
                queue.append(nxt)
    return NfaVerdict(False)


def explore(A: TwoWayAutomaton, tape: tuple[Symbol, ...]) -> dict[SurfaceConfig, list[SurfaceConfig]]:
    """
    All configurations reachable from (initial, 0) with their distinct successors.
    """
    start = SurfaceConfig(A.initial, 0)
    graph: dict[SurfaceConfig, list[SurfaceConfig]] = {}
    stack = [start]
    while stack:
        c = stack.pop()
        if c in graph:
            continue
        children = [] if c.state in A.halting else list(dict.fromkeys(successors(A, tape, c.state, c.head)))
        graph[c] = children
        stack.extend(ch for ch in children if ch not in graph)
    return graph


def accepts_afa_fixpoint(A: TwoWayAutomaton, x: T.Sequence[Symbol]) -> bool:
    """
    Least-fixpoint ACCEPT labeling of the AND/OR configuration graph: accepting configurations
    are ACCEPT, an ∃-configuration is ACCEPT iff some successor is, a ∀-configuration iff all
    successors are (vacuously so without successors). Looping machines terminate.
    Direction-0 transitions are handled as well.
    """
    graph = explore(A, tape_of(x))
    parents: dict[SurfaceConfig, list[SurfaceConfig]] = {c: [] for c in graph}
    pending: dict[SurfaceConfig, int] = {}
    accepted: set[SurfaceConfig] = set()
    worklist = []
    for c, children in graph.items():
        for ch in children:
            parents[ch].append(c)
        if c.state in A.accepting:
            accepted.add(c)
            worklist.append(c)
        elif c.state in A.universal:
            pending[c] = len(children)
            if not children:
                accepted.add(c)
                worklist.append(c)
    while worklist:
        c = worklist.pop()
        for par in parents[c]:
            if par in accepted:
                continue
            if par.state in A.universal:
                pending[par] -= 1
                if pending[par] == 0:
                    accepted.add(par)
                    worklist.append(par)
            elif par.state not in A.halting:
                accepted.add(par)
                worklist.append(par)
    return SurfaceConfig(A.initial, 0) in accepted


def _label_level(A: TwoWayAutomaton, configs: T.Iterable[SurfaceConfig]) -> tuple[str, int]:
    n_univ = n_exist = 0
    for c in configs:
        if c.state in A.universal:
            n_univ += 1
        elif c.state not in A.halting:
            n_exist += 1
    if n_univ and n_exist:
        return LevelLabel.MIXED, n_univ
    if n_univ:
        return LevelLabel.UNIVERSAL, n_univ
    if n_exist:
        return LevelLabel.EXISTENTIAL, 0
    return LevelLabel.HALTING, 0


def build_computation_graph(
    A: TwoWayAutomaton, x: T.Sequence[Symbol], depth_bound: T.Optional[int] = None
) -> tuple[ComputationGraph, list[dict[SurfaceConfig, list[SurfaceConfig]]]]:
    """
    Forward phase: levels C_0..C_depth_bound from (initial, 0), merging equal configurations per
    level. Expansion stops early once a level is empty.
    """
    depth_bound = default_depth_bound(A, x) if depth_bound is None else depth_bound
    if depth_bound < 1:
        raise ValueError(f"depth_bound must be at least 1, got {depth_bound}.")
    tape = tape_of(x)
    current = [SurfaceConfig(A.initial, 0)]
    levels, edges, children_per_level = [], [], []
    for depth in range(depth_bound + 1):
        label, n_univ = _label_level(A, current)
        levels.append(Level(tuple(current), label, n_univ))
        if depth == depth_bound:
            children_per_level.append({c: [] for c in current})
            break
        children = {}
        nxt: dict[SurfaceConfig, None] = {}
        level_edges = []
        for c in current:
            chs = [] if c.state in A.halting else list(dict.fromkeys(successors(A, tape, c.state, c.head)))
            children[c] = chs
            for ch in chs:
                level_edges.append((c, ch))
                nxt.setdefault(ch, None)
        children_per_level.append(children)
        if not nxt:
            break
        edges.append(tuple(level_edges))
        current = list(nxt)
    graph = ComputationGraph(tuple(levels), tuple(edges), depth_bound)
    return graph, children_per_level


def evaluate_leveled(
    A: TwoWayAutomaton, x: T.Sequence[Symbol], depth_bound: T.Optional[int] = None
) -> tuple[bool, ComputationGraph]:
    """
    Breadth-first evaluation: build the computation graph forward, label the last level by
    acceptance, then propagate ACCEPT backward (∃: some child, ∀: all children).

    Args:
        A (TwoWayAutomaton): Machine to run.
        x (Sequence[str]): Input word.
        depth_bound (int, optional): Number of levels after the root; defaults to |Q|(|x|+2).

    Returns:
        tuple[bool, ComputationGraph]: verdict and the graph with per-level ACCEPT sets.
    """
    graph, children_per_level = build_computation_graph(A, x, depth_bound)
    labels: list[frozenset] = [frozenset()] * len(graph.levels)
    below: frozenset = frozenset()
    for depth in range(len(graph.levels) - 1, -1, -1):
        level = graph.levels[depth]
        children = children_per_level[depth]
        last = depth == graph.depth_bound
        acc = set()
        for c in level.configs:
            if c.state in A.accepting:
                acc.add(c)
            elif c.state in A.halting:
                continue
            elif c.state in A.universal:
                if last:
                    if not _has_successors(A, x, c):
                        acc.add(c)
                elif all(ch in below for ch in children[c]):
                    acc.add(c)
            elif not last and any(ch in below for ch in children[c]):
                acc.add(c)
        below = frozenset(acc)
        labels[depth] = below
    graph = ComputationGraph(graph.levels, graph.edges, graph.depth_bound, tuple(labels))
    verdict = SurfaceConfig(A.initial, 0) in labels[0]
    logger.debug("Leveled evaluation: %d levels, verdict %s", len(graph.levels), verdict)
    return verdict, graph


def _has_successors(A: TwoWayAutomaton, x: T.Sequence[Symbol], c: SurfaceConfig) -> bool:
    return bool(successors(A, tape_of(x), c.state, c.head))


def measure_narrowness(
    A: TwoWayAutomaton, x: T.Sequence[Symbol], depth_bound: T.Optional[int] = None
) -> NarrownessReport:
    """
    Largest number of distinct configurations, halting ones included, in a level whose
    non-halting configurations are all universal. Machines without ∀-levels have width 0. Mixed
    levels are reported, not counted.
    """
    graph, _ = build_computation_graph(A, x, depth_bound)
    width = 0
    universal_width = 0
    mixed = []
    for depth, level in enumerate(graph.levels):
        universal_width = max(universal_width, level.universal_count)
        if level.quantifier_label == LevelLabel.UNIVERSAL:
            width = max(width, level.width)
        elif level.quantifier_label == LevelLabel.MIXED:
            mixed.append(depth)
    return NarrownessReport(width, not mixed, tuple(mixed), universal_width)


def accepts_with_stationary(A: TwoWayAutomaton, x: T.Sequence[Symbol]) -> bool:
    """
    Fixpoint acceptance for a machine that may still contain direction-0 transitions.
    """
    validate_automaton(A, allow_stationary=True)
    return accepts_afa_fixpoint(A, x)
