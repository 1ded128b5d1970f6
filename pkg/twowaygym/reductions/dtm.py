"""
Space-bounded deterministic Turing machines with a read-only input tape ¢x$, one work tape and
an optional write-only output, plus a direct simulator and a few bundled machines.
"""
import logging
import typing as T
from dataclasses import dataclass, field

from twowaygym.definitions import BINARY_ALPHABET, BLANK, CENT, DOLLAR, LEFT, RIGHT, STAY
from twowaygym.errors import ValidationError
from twowaygym.reductions.validator import build_graph_validator

logger = logging.getLogger(__name__)


class DtmMove(T.NamedTuple):

    state: str
    write: str
    input_dir: int
    work_dir: int


class DtmSurfaceConfig(T.NamedTuple):
    """
    (state, input head j, work head k, work tape content w).
    """

    state: str
    input_head: int
    work_head: int
    work: tuple[str, ...]


@dataclass(frozen=True)
class SpaceBoundedDTM:
    """
    Deterministic machine; a missing transition on a non-halting triple rejects.
    The input head moves ±1 every step, the work head moves -1, 0 or +1 and starts on cell 0
    of an all-blank work tape.

    Args:
        transitions: Map (state, input symbol, work symbol) -> DtmMove.
        emissions: Output written when a transition is taken (transducer mode).
    """

    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    work_alphabet: tuple[str, ...]
    initial: str
    accepting: frozenset
    rejecting: frozenset = frozenset()
    transitions: T.Mapping[tuple[str, str, str], DtmMove] = field(default_factory=dict, hash=False)
    emissions: T.Mapping[tuple[str, str, str], str] = field(default_factory=dict, hash=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "rejecting", frozenset(self.rejecting))
        object.__setattr__(self, "transitions", {k: DtmMove(*v) for k, v in self.transitions.items()})
        object.__setattr__(self, "emissions", {k: v for k, v in self.emissions.items() if v})

    @property
    def input_symbols(self) -> tuple[str, ...]:
        return (CENT,) + tuple(self.input_alphabet) + (DOLLAR,)

    @property
    def halting(self) -> frozenset:
        return self.accepting | self.rejecting

    @property
    def is_transducer(self) -> bool:
        return bool(self.emissions)


def dtm_violations(D: SpaceBoundedDTM) -> list[str]:
    violations = []
    declared = set(D.states)
    if D.initial not in declared:
        violations.append(f"initial state {D.initial!r} is not declared")
    if BLANK not in D.work_alphabet:
        violations.append(f"work alphabet lacks the blank {BLANK!r}")
    if D.accepting & D.rejecting:
        violations.append("accepting and rejecting states overlap")
    if not D.accepting:
        violations.append("no accepting state")
    for (q, a, g), move in D.transitions.items():
        where = f"transition ({q!r}, {a!r}, {g!r})"
        if q not in declared or move.state not in declared:
            violations.append(f"{where} names an undeclared state")
        if q in D.halting:
            violations.append(f"{where} leaves a halting state")
        if a not in D.input_symbols:
            violations.append(f"{where} reads an unknown input symbol")
        if g not in D.work_alphabet or move.write not in D.work_alphabet:
            violations.append(f"{where} uses an unknown work symbol")
        if move.input_dir not in (LEFT, RIGHT):
            violations.append(f"{where} moves the input head by {move.input_dir}")
        if move.work_dir not in (LEFT, STAY, RIGHT):
            violations.append(f"{where} moves the work head by {move.work_dir}")
    for key in D.emissions:
        if key not in D.transitions:
            violations.append(f"emission on {key} has no transition")
    return violations


def validate_dtm(D: SpaceBoundedDTM) -> None:
    violations = dtm_violations(D)
    if violations:
        raise ValidationError(violations)


@dataclass(frozen=True)
class DtmRun:
    """
    Outcome of a direct run. `exceeded` is set when the time or space bound was hit before
    the machine halted; the run then counts as rejecting.
    """

    accepted: bool
    steps: int
    space_used: int
    output: str = ""
    exceeded: bool = False
    final: T.Optional[DtmSurfaceConfig] = None


def run_dtm(
    D: SpaceBoundedDTM,
    x: T.Sequence[str],
    time_bound: T.Optional[int] = None,
    space_bound: T.Optional[int] = None,
    max_steps: int = 1_000_000,
) -> DtmRun:
    """
    Simulate `D` on input `x`.

    Args:
        D (SpaceBoundedDTM): Machine to run.
        x (Sequence[str]): Input word.
        time_bound (int, optional): Steps after which the run is cut off.
        space_bound (int, optional): Work cells available; leaving them cuts the run off.
        max_steps (int, optional): Safety limit when no time bound is given.

    Raises:
        ValidationError: if the work head moves left of cell 0.
    """
    tape = (CENT, *x, DOLLAR)
    limit = time_bound if time_bound is not None else max_steps
    work = [BLANK]
    q, j, k = D.initial, 0, 0
    output = []
    steps = 0
    space_used = 1
    seen = set()
    while True:
        config = DtmSurfaceConfig(q, j, k, tuple(work))
        if q in D.accepting or q in D.rejecting:
            return DtmRun(q in D.accepting, steps, space_used, "".join(output), False, config)
        if steps >= limit:
            return DtmRun(False, steps, space_used, "".join(output), True, config)
        if time_bound is None:
            if config in seen:
                return DtmRun(False, steps, space_used, "".join(output), False, config)
            seen.add(config)
        key = (q, tape[j], work[k])
        move = D.transitions.get(key)
        if move is None:
            return DtmRun(False, steps, space_used, "".join(output), False, config)
        output.append(D.emissions.get(key, ""))
        work[k] = move.write
        q, j, k = move.state, j + move.input_dir, k + move.work_dir
        steps += 1
        if k < 0:
            raise ValidationError([f"work head of {D.name or 'DTM'} moved left of cell 0 via {key}"])
        if not (0 <= j < len(tape)):
            return DtmRun(False, steps, space_used, "".join(output), False, None)
        if k >= len(work):
            work.append(BLANK)
        space_used = max(space_used, k + 1)
        if space_bound is not None and space_used > space_bound:
            logger.warning("%s exceeded its space bound %d on %r.", D.name or "DTM", space_bound, "".join(x))
            return DtmRun(False, steps, space_used, "".join(output), True, None)


def parity_dtm(alphabet: T.Sequence[str] = BINARY_ALPHABET) -> SpaceBoundedDTM:
    """
    Accepts iff x holds an even number of 1s; the work head stays on cell 0.
    """
    transitions = {("e", CENT, BLANK): ("e", BLANK, RIGHT, STAY)}
    for a in alphabet:
        flip = a == "1"
        transitions[("e", a, BLANK)] = ("o" if flip else "e", BLANK, RIGHT, STAY)
        transitions[("o", a, BLANK)] = ("e" if flip else "o", BLANK, RIGHT, STAY)
    transitions[("e", DOLLAR, BLANK)] = ("acc", BLANK, LEFT, STAY)
    transitions[("o", DOLLAR, BLANK)] = ("rej", BLANK, LEFT, STAY)
    return SpaceBoundedDTM(
        states=("e", "o", "acc", "rej"),
        input_alphabet=tuple(alphabet),
        work_alphabet=(BLANK,),
        initial="e",
        accepting=frozenset({"acc"}),
        rejecting=frozenset({"rej"}),
        transitions=transitions,
        name="parity",
    )


def immediate_accept_dtm(alphabet: T.Sequence[str] = BINARY_ALPHABET) -> SpaceBoundedDTM:
    return SpaceBoundedDTM(
        states=("s0", "acc"),
        input_alphabet=tuple(alphabet),
        work_alphabet=(BLANK,),
        initial="s0",
        accepting=frozenset({"acc"}),
        transitions={("s0", CENT, BLANK): ("acc", BLANK, RIGHT, STAY)},
        name="immediate-accept",
    )


def block_copy_dtm() -> SpaceBoundedDTM:
    """
    Accepts iff |x| >= 2 and the first two symbols of x equal its last two. The first two
    symbols are copied to work cells 0 and 1 and compared against the tail of x.
    """
    symbols = BINARY_ALPHABET
    work = (BLANK,) + symbols
    transitions = {("s0", CENT, BLANK): ("c1", BLANK, RIGHT, STAY)}
    for a in symbols:
        transitions[("c1", a, BLANK)] = ("c2", a, RIGHT, RIGHT)
        transitions[("c2", a, BLANK)] = ("scan", a, RIGHT, STAY)
        for g in work:
            transitions[("scan", a, g)] = ("scan", g, RIGHT, STAY)
        transitions[("back1", a, a)] = ("cmp", a, LEFT, LEFT)
        transitions[("cmp", a, a)] = ("acc", a, RIGHT, STAY)
    for g in work:
        transitions[("scan", DOLLAR, g)] = ("back1", g, LEFT, STAY)
    return SpaceBoundedDTM(
        states=("s0", "c1", "c2", "scan", "back1", "cmp", "acc", "rej"),
        input_alphabet=symbols,
        work_alphabet=work,
        initial="s0",
        accepting=frozenset({"acc"}),
        rejecting=frozenset({"rej"}),
        transitions=transitions,
        name="block-copy",
    )


def identity_transducer(alphabet: T.Sequence[str] = BINARY_ALPHABET) -> SpaceBoundedDTM:
    transitions = {("s0", CENT, BLANK): ("copy", BLANK, RIGHT, STAY)}
    emissions = {}
    for a in alphabet:
        transitions[("copy", a, BLANK)] = ("copy", BLANK, RIGHT, STAY)
        emissions[("copy", a, BLANK)] = a
    transitions[("copy", DOLLAR, BLANK)] = ("acc", BLANK, LEFT, STAY)
    return SpaceBoundedDTM(
        states=("s0", "copy", "acc"),
        input_alphabet=tuple(alphabet),
        work_alphabet=(BLANK,),
        initial="s0",
        accepting=frozenset({"acc"}),
        transitions=transitions,
        emissions=emissions,
        name="identity",
    )


def constant_transducer(word: str, alphabet: T.Sequence[str] = BINARY_ALPHABET) -> SpaceBoundedDTM:
    transitions = {("s0", CENT, BLANK): ("run", BLANK, RIGHT, STAY)}
    for a in alphabet:
        transitions[("run", a, BLANK)] = ("run", BLANK, RIGHT, STAY)
    transitions[("run", DOLLAR, BLANK)] = ("acc", BLANK, LEFT, STAY)
    return SpaceBoundedDTM(
        states=("s0", "run", "acc"),
        input_alphabet=tuple(alphabet),
        work_alphabet=(BLANK,),
        initial="s0",
        accepting=frozenset({"acc"}),
        transitions=transitions,
        emissions={("s0", CENT, BLANK): word},
        name=f"constant-{word}",
    )


def vertex_count_transducer(max_n: int) -> SpaceBoundedDTM:
    """
    Writes 1^n when x encodes an n-vertex graph with n <= max_n, and nothing otherwise.

    The validators for n = 1..max_n are run one after another; each sweep of a validator is
    replayed left to right on the flat input tape and followed by a rewind to ¢.
    """
    transitions: dict[tuple[str, str, str], tuple] = {}
    emissions: dict[tuple[str, str, str], str] = {}
    states = ["acc"]

    def run(n: int, q: str) -> str:
        return f"v{n}:{q}"

    def rewind(n: int, q: str) -> str:
        return f"r{n}:{q}"

    validators = {n: build_graph_validator(n) for n in range(1, max_n + 1)}
    for n, A in validators.items():
        nxt_start = (n + 1, validators[n + 1].initial) if n < max_n else None
        for q in A.states:
            if q in A.halting:
                continue
            states.extend([run(n, q), rewind(n, q)])
            for s in A.symbols:
                moves = A.delta(q, s)
                key = (run(n, q), s, BLANK)
                if moves:
                    p = moves[0][0]
                    if p in A.accepting:
                        transitions[key] = ("acc", BLANK, LEFT if s == DOLLAR else RIGHT, STAY)
                        emissions[key] = "1" * n
                    elif s == DOLLAR:
                        transitions[key] = (rewind(n, p), BLANK, LEFT, STAY)
                    else:
                        transitions[key] = (run(n, p), BLANK, RIGHT, STAY)
                elif nxt_start is None:
                    transitions[key] = ("acc", BLANK, LEFT if s == DOLLAR else RIGHT, STAY)
                else:
                    transitions[key] = (rewind(*nxt_start), BLANK, RIGHT if s == CENT else LEFT, STAY)
                if s != CENT:
                    transitions[(rewind(n, q), s, BLANK)] = (rewind(n, q), BLANK, LEFT, STAY)
            p = A.delta(q, CENT)[0][0]
            transitions[(rewind(n, q), CENT, BLANK)] = (run(n, p), BLANK, RIGHT, STAY)
    return SpaceBoundedDTM(
        states=tuple(dict.fromkeys(states)),
        input_alphabet=BINARY_ALPHABET,
        work_alphabet=(BLANK,),
        initial=rewind(1, validators[1].initial),
        accepting=frozenset({"acc"}),
        transitions=transitions,
        emissions=emissions,
        name=f"vertex-count-{max_n}",
    )
