"""
Binary machine code <M>: one row per (state, symbol) pair, state index major and symbol index
minor, rows `#<p1,d1>#...#<pc,dc>#` joined by `##` and passed through the quaternary codec.
An entry <p,d> is bin_w(index(p)+1) followed by 0 for +1 or 1 for -1; unused slots are ⊥.
"""
import logging
import typing as T
from dataclasses import dataclass

from twowaygym.automata.machine import TapeGeometry, TwoWayAutomaton
from twowaygym.codecs.strings import bin_fixed, decode_quaternary, encode_quaternary, parse_bin_fixed
from twowaygym.definitions import BOTTOM, ENDMARKERS, HASH, LEFT, RIGHT
from twowaygym.errors import EncodingError, FormatError

logger = logging.getLogger(__name__)

_DIRECTION_BITS = {RIGHT: "0", LEFT: "1"}
_BITS_DIRECTION = {v: k for k, v in _DIRECTION_BITS.items()}


@dataclass(frozen=True)
class MachineSignature:
    """
    Everything a machine code does not carry: state names, alphabet, state classes and geometry.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    initial: str
    accepting: frozenset = frozenset()
    rejecting: frozenset = frozenset()
    universal: frozenset = frozenset()
    geometry: TapeGeometry = TapeGeometry.CIRCULAR

    @classmethod
    def from_automaton(cls, A: TwoWayAutomaton) -> "MachineSignature":
        return cls(A.states, A.alphabet, A.initial, A.accepting, A.rejecting, A.universal, A.geometry)

    @classmethod
    def default(cls, n_states: int, alphabet: T.Sequence[str], accepting: T.Iterable[int] = ()) -> "MachineSignature":
        states = tuple(f"q{i}" for i in range(n_states))
        return cls(states, tuple(alphabet), states[0], frozenset(states[i] for i in accepting))


def entry_width(n_states: int) -> int:
    """
    w = ceil(log2(|Q|+1)) + 1, enough for bin_w(|Q|).
    """
    return n_states.bit_length() + 1


def machine_preimage(A: TwoWayAutomaton, c: T.Optional[int] = None) -> str:
    c = A.branching_bound if c is None else c
    if c < 1:
        raise EncodingError(f"Branching bound must be at least 1, got {c}.")
    idx = A.state_index()
    w = entry_width(len(A.states))
    rows = []
    for q in A.states:
        for s in A.symbols:
            moves = A.delta(q, s)
            if len(moves) > c:
                raise EncodingError(f"Transition ({q!r}, {s!r}) has {len(moves)} choices, more than c={c}.")
            entries = []
            for p, d in moves:
                if p not in idx:
                    raise EncodingError(f"Transition ({q!r}, {s!r}) names unknown state {p!r}.")
                if d not in _DIRECTION_BITS:
                    raise EncodingError(f"Direction {d} cannot be encoded.")
                entries.append(bin_fixed(w, idx[p] + 1) + _DIRECTION_BITS[d])
            entries += [BOTTOM] * (c - len(entries))
            rows.append(HASH + HASH.join(entries) + HASH)
    return (HASH * 2).join(rows)


def encode_automaton(A: TwoWayAutomaton, c: T.Optional[int] = None) -> str:
    """
    Binary code of `A` with `c` entry slots per row (defaults to the machine's branching bound).
    """
    return encode_quaternary(machine_preimage(A, c))


def decode_automaton(bits: str, signature: MachineSignature) -> TwoWayAutomaton:
    """
    Inverse of `encode_automaton`; the branching bound is read off the first row.

    Raises:
        FormatError: if the rows do not match the signature or an entry is malformed.
    """
    pre = decode_quaternary(bits)
    symbols = signature.alphabet + ENDMARKERS
    n_rows = len(signature.states) * len(symbols)
    if len(pre) < 2 or pre[0] != HASH or pre[-1] != HASH:
        raise FormatError("A machine code starts and ends with '#'.", "machine rows")
    rows = pre[1:-1].split(HASH * 4)
    if len(rows) != n_rows:
        raise FormatError(f"Expected {n_rows} rows, found {len(rows)}.", "machine rows")
    w = entry_width(len(signature.states))
    c = None
    transitions = {}
    for r, row in enumerate(rows):
        entries = row.split(HASH)
        if c is None:
            c = len(entries)
        elif len(entries) != c:
            raise FormatError(f"Row {r} has {len(entries)} slots, expected {c}.", "machine rows")
        moves = []
        padding = False
        for entry in entries:
            if entry == BOTTOM:
                padding = True
                continue
            if padding:
                raise FormatError(f"Row {r} has an entry after padding.", "machine entries")
            if len(entry) != w + 1 or entry[-1] not in _BITS_DIRECTION:
                raise FormatError(f"Row {r} has a malformed entry {entry!r}.", "machine entries")
            index = parse_bin_fixed(entry[:-1], w)
            if not (1 <= index <= len(signature.states)):
                raise FormatError(f"Row {r} names state index {index} out of range.", "machine entries")
            moves.append((signature.states[index - 1], _BITS_DIRECTION[entry[-1]]))
        if moves:
            q = signature.states[r // len(symbols)]
            transitions[(q, symbols[r % len(symbols)])] = tuple(moves)
    return TwoWayAutomaton(
        states=signature.states,
        alphabet=signature.alphabet,
        initial=signature.initial,
        transitions=transitions,
        accepting=signature.accepting,
        rejecting=signature.rejecting,
        universal=signature.universal,
        geometry=signature.geometry,
    )
