"""
Two-way finite automata (2dfa / 2nfa / 2afa) on flat or circular tapes ¢x$.
"""
import logging
import typing as T
from dataclasses import dataclass, field, replace
from enum import Enum

from twowaygym.definitions import CENT, DOLLAR, ENDMARKERS, LEFT, RIGHT, STAY
from twowaygym.errors import DomainError, ValidationError

logger = logging.getLogger(__name__)

# type aliases for code readability
State = str
Symbol = str
Direction = int
Move = tuple[State, Direction]


class TapeGeometry(Enum):

    FLAT = 'flat'
    CIRCULAR = 'circular'


class SurfaceConfig(T.NamedTuple):
    """
    Inner state plus head position in [0, |x|+1] (0 scans ¢, |x|+1 scans $).
    """

    state: State
    head: int


@dataclass(frozen=True)
class StructuralReport:

    branching_bound: int
    is_sweeping: bool
    is_end_branching: bool
    is_simple: bool
    is_deterministic: bool
    state_count: int


@dataclass(frozen=True)
class ResourceBounds:
    """
    Concrete time, space and narrowness bounds of one (parameter, input length) class.
    Any bound may be omitted; supplied bounds must be positive.
    """

    time_bound: T.Optional[int] = None
    space_bound: T.Optional[int] = None
    narrowness_bound: T.Optional[int] = None

    def __post_init__(self):
        for name in ("time_bound", "space_bound", "narrowness_bound"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be strictly positive, got {value}.")


@dataclass(frozen=True)
class TwoWayAutomaton:
    """
    Unified machine value for 2dfa, 2nfa and 2afa.

    Transition lists are ordered: the k-th entry of `transitions[(q, σ)]` is the k-th choice.
    Missing keys mean no move (the branch dies). States neither halting nor universal are
    existential unless `existential` is given explicitly.

    Args:
        states: Ordered state ids; the order fixes state indices in encodings.
        alphabet: Ordered input symbols, never containing ¢ or $.
        initial: Initial state.
        transitions: Map (state, symbol) -> ordered tuple of (state, direction).
        accepting: Accepting halting states.
        rejecting: Rejecting halting states.
        universal: States whose branches must all accept.
        existential: States of which one branch must accept.
        geometry: Flat tape or circular tape (the cell right of $ is ¢).
        emissions: Output strings written when taking (state, symbol); transducers only.
        name: Free-form label, ignored by comparisons.
    """

    states: tuple[State, ...]
    alphabet: tuple[Symbol, ...]
    initial: State
    transitions: T.Mapping[tuple[State, Symbol], tuple[Move, ...]] = field(default_factory=dict, hash=False)
    accepting: frozenset = frozenset()
    rejecting: frozenset = frozenset()
    universal: frozenset = frozenset()
    existential: T.Optional[frozenset] = None
    geometry: TapeGeometry = TapeGeometry.CIRCULAR
    emissions: T.Mapping[tuple[State, Symbol], str] = field(default_factory=dict, hash=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        for attr in ("accepting", "rejecting", "universal"):
            object.__setattr__(self, attr, frozenset(getattr(self, attr)))
        transitions = {
            (q, s): tuple((p, int(d)) for p, d in moves)
            for (q, s), moves in self.transitions.items() if moves
        }
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "emissions", {k: v for k, v in self.emissions.items() if v})
        if self.existential is None:
            halting = self.accepting | self.rejecting
            existential = frozenset(q for q in self.states if q not in halting and q not in self.universal)
            object.__setattr__(self, "existential", existential)
        else:
            object.__setattr__(self, "existential", frozenset(self.existential))
        if isinstance(self.geometry, str):
            object.__setattr__(self, "geometry", TapeGeometry(self.geometry))

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        """
        Tape symbols in encoding order: the alphabet, then ¢, then $.
        """
        return self.alphabet + ENDMARKERS

    @property
    def halting(self) -> frozenset:
        return self.accepting | self.rejecting

    @property
    def kind(self) -> str:
        if self.universal:
            return "2afa"
        if all(len(m) <= 1 for m in self.transitions.values()):
            return "2dfa"
        return "2nfa"

    @property
    def branching_bound(self) -> int:
        return max((len(m) for m in self.transitions.values()), default=0)

    def delta(self, state: State, symbol: Symbol) -> tuple[Move, ...]:
        return self.transitions.get((state, symbol), ())

    def state_index(self) -> dict[State, int]:
        return {q: i for i, q in enumerate(self.states)}

    def replace(self, **changes) -> "TwoWayAutomaton":
        return replace(self, **changes)

    def __len__(self) -> int:
        return len(self.states)


def tape_of(x: T.Sequence[Symbol]) -> tuple[Symbol, ...]:
    return (CENT, *x, DOLLAR)


def structural_violations(A: TwoWayAutomaton, allow_stationary: bool = False) -> list[str]:
    """
    List every violation of the machine invariants; an empty list means well-formed.
    """
    violations = []
    declared = set(A.states)
    if len(declared) != len(A.states):
        violations.append("duplicate state ids")
    if A.initial not in declared:
        violations.append(f"initial state {A.initial!r} is not declared")
    for attr in ("accepting", "rejecting", "universal", "existential"):
        unknown = getattr(A, attr) - declared
        if unknown:
            violations.append(f"{attr} names undeclared states {sorted(unknown)}")
    overlap = A.accepting & A.rejecting
    if overlap:
        violations.append(f"states {sorted(overlap)} are both accepting and rejecting")
    if A.universal & A.existential:
        violations.append(f"states {sorted(A.universal & A.existential)} are both universal and existential")
    if (A.universal | A.existential) & A.halting:
        violations.append("halting states must be neither universal nor existential")
    uncovered = declared - A.halting - A.universal - A.existential
    if uncovered:
        violations.append(f"non-halting states {sorted(uncovered)} are neither universal nor existential")
    reserved = set(A.alphabet) & set(ENDMARKERS)
    if reserved:
        violations.append(f"endmarkers {sorted(reserved)} appear in the alphabet")
    symbols = set(A.symbols)
    directions = {LEFT, RIGHT, STAY} if allow_stationary else {LEFT, RIGHT}
    for (q, s), moves in A.transitions.items():
        if q not in declared:
            violations.append(f"transition from undeclared state {q!r}")
        if s not in symbols:
            violations.append(f"transition on unknown symbol {s!r}")
        if q in A.halting:
            violations.append(f"halting state {q!r} has outgoing transitions on {s!r}")
        for p, d in moves:
            if p not in declared:
                violations.append(f"transition ({q!r}, {s!r}) names undeclared state {p!r}")
            if d not in directions:
                violations.append(f"transition ({q!r}, {s!r}) has direction {d}")
    return violations


def validate_automaton(A: TwoWayAutomaton, allow_stationary: bool = False) -> StructuralReport:
    """
    Check the machine invariants and compute its structural flags.

    Raises:
        ValidationError: listing every violation found.
    """
    violations = structural_violations(A, allow_stationary=allow_stationary)
    if violations:
        raise ValidationError(violations)
    circular = A.geometry == TapeGeometry.CIRCULAR
    sweeping = circular and all(d == RIGHT for moves in A.transitions.values() for _, d in moves)
    end_branching = all(len(moves) <= 1 for (_, s), moves in A.transitions.items() if s != DOLLAR)
    deterministic = not A.universal and all(len(m) <= 1 for m in A.transitions.values())
    return StructuralReport(
        branching_bound=A.branching_bound,
        is_sweeping=sweeping,
        is_end_branching=end_branching,
        is_simple=circular and sweeping and end_branching,
        is_deterministic=deterministic,
        state_count=len(A.states),
    )


def successors(A: TwoWayAutomaton, tape: tuple[Symbol, ...], state: State, head: int) -> list[SurfaceConfig]:
    """
    Successor configurations in transition-list order, without precondition checks.
    """
    size = len(tape)
    out = []
    for p, d in A.transitions.get((state, tape[head]), ()):
        h = head + d
        if A.geometry == TapeGeometry.CIRCULAR:
            h %= size
        elif h < 0 or h >= size:
            continue
        out.append(SurfaceConfig(p, h))
    return out


def step_successors(A: TwoWayAutomaton, x: T.Sequence[Symbol], c: SurfaceConfig) -> list[SurfaceConfig]:
    """
    Apply one transition step to configuration `c` on input `x`. On a circular tape head
    arithmetic is modulo |x|+2; on a flat tape a move off either end yields no successor.
    """
    tape = tape_of(x)
    if not (0 <= c.head < len(tape)):
        raise DomainError(f"Head {c.head} outside [0, {len(tape) - 1}] for input of length {len(x)}.")
    if c.state in A.halting:
        raise DomainError(f"Configuration {c} is halting and has no successors.")
    if c.state not in A.state_index():
        raise DomainError(f"Unknown state {c.state!r}.")
    return successors(A, tape, c.state, c.head)
