"""
Degree-3 digraphs and their binary encoding <G>.

Rows are `binary(v+1)#e1#e2#e3`, where an entry is `binary(j+1)` for an out-neighbor j or empty,
rows are joined by `##`, and the whole string is passed through the quaternary codec.
"""
import logging
import typing as T
from dataclasses import dataclass

import networkx as nx

from twowaygym.codecs.strings import binary_repr, encode_quaternary, iter_quaternary, parse_binary
from twowaygym.definitions import HASH
from twowaygym.errors import FormatError

logger = logging.getLogger(__name__)

MAX_OUTDEGREE = 3

Edge = tuple[int, int]


@dataclass(frozen=True)
class Digraph3:
    """
    Directed graph on vertices 0..n-1 with at most three out-neighbors per vertex, stored as
    strictly increasing out-lists. Vertex 0 is the source and n-1 the target.
    """

    n: int
    out: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"A graph needs at least one vertex, got n={self.n}.")
        out = tuple(tuple(int(j) for j in row) for row in self.out)
        object.__setattr__(self, "out", out)
        if len(out) != self.n:
            raise ValueError(f"Expected {self.n} out-lists, got {len(out)}.")
        for v, row in enumerate(out):
            if len(row) > MAX_OUTDEGREE:
                raise ValueError(f"Vertex {v} has outdegree {len(row)} > {MAX_OUTDEGREE}.")
            if any(j < 0 or j >= self.n for j in row):
                raise ValueError(f"Vertex {v} has an out-neighbor outside [0, {self.n - 1}].")
            if any(a >= b for a, b in zip(row, row[1:])):
                raise ValueError(f"Out-list of vertex {v} is not strictly increasing: {row}.")

    @classmethod
    def from_edges(cls, n: int, edges: T.Iterable[Edge]) -> "Digraph3":
        rows: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n):
                raise ValueError(f"Edge ({u}, {v}) leaves the vertex range [0, {n - 1}].")
            rows[u].add(v)
        return cls(n, tuple(tuple(sorted(r)) for r in rows))

    @classmethod
    def empty(cls, n: int) -> "Digraph3":
        return cls(n, tuple(() for _ in range(n)))

    @property
    def source(self) -> int:
        return 0

    @property
    def target(self) -> int:
        return self.n - 1

    def edges(self) -> list[Edge]:
        return [(u, v) for u, row in enumerate(self.out) for v in row]

    def indegrees(self) -> list[int]:
        deg = [0] * self.n
        for _, v in self.edges():
            deg[v] += 1
        return deg

    def degree_violations(self) -> list[int]:
        """
        Vertices whose in- plus outdegree exceeds 3.
        """
        indeg = self.indegrees()
        return [v for v in range(self.n) if indeg[v] + len(self.out[v]) > MAX_OUTDEGREE]

    def is_degree3(self) -> bool:
        return not self.degree_violations()

    def without_edges(self, drop: T.Iterable[Edge]) -> "Digraph3":
        drop = set(drop)
        return Digraph3.from_edges(self.n, [e for e in self.edges() if e not in drop])

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g


@dataclass(frozen=True)
class GraphCheck:
    """
    Result of `validate_graph_encoding`.
    """

    valid: bool
    n: T.Optional[int] = None
    graph: T.Optional[Digraph3] = None
    degree_ok: T.Optional[bool] = None
    condition: T.Optional[str] = None
    reason: T.Optional[str] = None


def graph_preimage(G: Digraph3) -> str:
    """
    Encoding of `G` before the quaternary pairing, e.g. "1#10####10###" for n=2 and edge (0,1).
    """
    rows = []
    for v, row in enumerate(G.out):
        entries = [binary_repr(j + 1) for j in row]
        entries += [""] * (MAX_OUTDEGREE - len(entries))
        rows.append(HASH.join([binary_repr(v + 1)] + entries))
    return (HASH * 2).join(rows)


def encode_graph(G: Digraph3) -> str:
    return encode_quaternary(graph_preimage(G))


def iter_rows(x: str) -> T.Iterator[tuple[str, tuple[str, str, str]]]:
    """
    Stream the rows of a graph encoding as (label, entries) token tuples without checking labels
    or entry values. Raises `FormatError` on block-structure violations.
    """
    token: list[str] = []
    tokens: list[str] = []
    for sym in iter_quaternary(x):
        if sym == HASH:
            tokens.append("".join(token))
            token = []
            if len(tokens) == 5:
                if tokens[4] != "":
                    raise FormatError("Rows must be separated by '##'.", "(ii) row structure")
                yield tokens[0], (tokens[1], tokens[2], tokens[3])
                tokens = []
        elif sym in "01":
            token.append(sym)
        else:
            raise FormatError(f"Unexpected symbol {sym!r} in a graph encoding.", "(i) block alphabet")
    tokens.append("".join(token))
    if len(tokens) != 4:
        raise FormatError("The last row does not have a label and three entry slots.", "(ii) row structure")
    yield tokens[0], (tokens[1], tokens[2], tokens[3])


def decode_graph(x: str, n: T.Optional[int] = None) -> Digraph3:
    """
    Decode a graph encoding, checking (i) the 2-bit block structure, (ii) the row structure and,
    if `n` is given, the row count, (iii) the row labels binary(1)..binary(n) in order and
    (iv) entries that are in-range vertices in strictly increasing order with empty slots last.

    Args:
        x (str): Binary string.
        n (int, optional): Expected vertex count.
    """
    rows = list(iter_rows(x))
    if n is not None and len(rows) != n:
        raise FormatError(f"Expected {n} rows, found {len(rows)}.", "(ii) row count")
    size = len(rows)
    out = [decode_row(v, label, entries, size) for v, (label, entries) in enumerate(rows)]
    return Digraph3(size, tuple(out))


def decode_row(v: int, label: str, entries: tuple[str, str, str], size: int) -> tuple[int, ...]:
    """
    Out-neighbors of row `v` of an encoding with `size` rows, checking conditions (iii) and (iv).
    """
    if label != binary_repr(v + 1):
        raise FormatError(f"Row {v} is labeled {label!r}, expected {binary_repr(v + 1)!r}.", "(iii) row labels")
    neighbors = []
    seen_empty = False
    for entry in entries:
        if entry == "":
            seen_empty = True
            continue
        if seen_empty:
            raise FormatError(f"Row {v} has an entry after an empty slot.", "(iv) entries")
        value = _parse_entry(entry, v)
        if not (1 <= value <= size):
            raise FormatError(f"Row {v} names vertex label {value} outside [1, {size}].", "(iv) entries")
        if neighbors and value - 1 <= neighbors[-1]:
            raise FormatError(f"Row {v} entries are not strictly increasing.", "(iv) entries")
        neighbors.append(value - 1)
    return tuple(neighbors)


def _parse_entry(entry: str, v: int) -> int:
    try:
        return parse_binary(entry)
    except FormatError:
        raise FormatError(f"Row {v} has a malformed entry {entry!r}.", "(iv) entries") from None


def validate_graph_encoding(x: str, n: T.Optional[int] = None) -> GraphCheck:
    """
    Check conditions (i)-(iv) of a graph encoding and additionally report whether every vertex
    has in- plus outdegree at most 3.
    """
    try:
        G = decode_graph(x, n)
    except FormatError as e:
        return GraphCheck(valid=False, condition=e.condition, reason=str(e))
    return GraphCheck(valid=True, n=G.n, graph=G, degree_ok=G.is_degree3())


def vertex_count_of_encoding(x: str) -> T.Optional[int]:
    """
    Size parameter m_ver: the vertex count of `x` if it encodes a graph, None otherwise.
    """
    check = validate_graph_encoding(x)
    return check.n if check.valid else None


def parse_edge_list(text: str) -> Digraph3:
    """
    Parse the human-readable format: a header line `n=<count>` followed by one `u v` pair per line.
    Blank lines and lines starting with '%' are ignored.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("%")]
    if not lines or not lines[0].replace(" ", "").startswith("n="):
        raise FormatError("Edge list must start with a header 'n=<count>'.", "edge-list header")
    try:
        n = int(lines[0].replace(" ", "")[2:])
        edges = [tuple(int(tok) for tok in ln.split()) for ln in lines[1:]]
    except ValueError:
        raise FormatError("Edge list contains a non-integer token.", "edge-list syntax") from None
    if any(len(e) != 2 for e in edges):
        raise FormatError("Every edge line must hold exactly two vertices.", "edge-list syntax")
    try:
        return Digraph3.from_edges(n, edges)
    except ValueError as e:
        raise FormatError(str(e), "edge-list range") from None


def format_edge_list(G: Digraph3) -> str:
    return "\n".join([f"n={G.n}"] + [f"{u} {v}" for u, v in G.edges()]) + "\n"
