import logging
import typing as T

from twowaygym.automata.machine import Move, State, TwoWayAutomaton, validate_automaton
from twowaygym.definitions import CENT, DOLLAR, LEFT, RIGHT, STAY
from twowaygym.errors import CompositionError, ValidationError

logger = logging.getLogger(__name__)


def detour_state(target: State, symbol: str) -> State:
    return f"{target}~{symbol}"


def eliminate_stationary_moves(A: TwoWayAutomaton) -> TwoWayAutomaton:
    """
    Replace every direction-0 transition into q taken at symbol σ by a move into a fresh detour
    state q̄_σ that steps back into q on any symbol. The detour leaves ¢ rightward and every
    other cell leftward, so it never falls off a flat tape.
    At most |Q|(|Σ|+2) states are added; machines without stationary moves are returned as is.
    """
    if not any(d == STAY for moves in A.transitions.values() for _, d in moves):
        return A
    names = set(A.states)
    detours: dict[tuple[State, str], State] = {}
    transitions: dict[tuple[State, str], tuple[Move, ...]] = {}
    for (q, s), moves in A.transitions.items():
        new_moves = []
        for p, d in moves:
            if d != STAY:
                new_moves.append((p, d))
                continue
            if (p, s) not in detours:
                name = detour_state(p, s)
                while name in names:
                    name += "~"
                names.add(name)
                detours[(p, s)] = name
            new_moves.append((detours[(p, s)], RIGHT if s == CENT else LEFT))
        transitions[(q, s)] = tuple(new_moves)
    for (p, s), name in detours.items():
        back = LEFT if s == CENT else RIGHT
        for sym in A.symbols:
            transitions[(name, sym)] = ((p, back),)
    logger.debug("Stationary-move elimination added %d detour states.", len(detours))
    return A.replace(
        states=A.states + tuple(detours.values()),
        transitions=transitions,
        existential=A.existential | frozenset(detours.values()),
    )


def _check_chainable(checker: TwoWayAutomaton, main: TwoWayAutomaton) -> None:
    try:
        report = validate_automaton(checker)
    except ValidationError as e:
        raise CompositionError(f"Checker is malformed: {e}") from None
    if not (report.is_simple and report.is_deterministic):
        raise CompositionError("Checker must be a simple deterministic machine.")
    if checker.initial in checker.accepting:
        raise CompositionError("Checker accepts at ¢ instead of at $.")
    for (q, s), moves in checker.transitions.items():
        if s != DOLLAR and any(p in checker.accepting for p, _ in moves):
            raise CompositionError(f"Checker enters an accepting state while scanning {s!r}, not $.")
    if checker.alphabet != main.alphabet:
        raise CompositionError(f"Alphabets differ: {checker.alphabet} vs {main.alphabet}.")
    if checker.geometry != main.geometry:
        raise CompositionError("Checker and main machine must share the tape geometry.")


def chain_with_checker(checker: TwoWayAutomaton, main: TwoWayAutomaton) -> TwoWayAutomaton:
    """
    Run `checker` first; when it accepts at $ control moves on to ¢ and `main` starts from its
    initial state. The composed verdict is checker(x) and main(x).
    """
    _check_chainable(checker, main)

    def chk(q: State) -> State:
        return f"chk:{q}"

    def mn(q: State) -> State:
        return f"main:{q}"

    transitions = {}
    for (q, s), moves in checker.transitions.items():
        transitions[(chk(q), s)] = tuple(
            (mn(main.initial), d) if p in checker.accepting else (chk(p), d) for p, d in moves
        )
    for (q, s), moves in main.transitions.items():
        transitions[(mn(q), s)] = tuple((mn(p), d) for p, d in moves)
    kept_checker = [q for q in checker.states if q not in checker.accepting]
    composed = TwoWayAutomaton(
        states=tuple(chk(q) for q in kept_checker) + tuple(mn(q) for q in main.states),
        alphabet=main.alphabet,
        initial=chk(checker.initial),
        transitions=transitions,
        accepting=frozenset(mn(q) for q in main.accepting),
        rejecting=frozenset(chk(q) for q in checker.rejecting) | frozenset(mn(q) for q in main.rejecting),
        universal=frozenset(mn(q) for q in main.universal),
        geometry=main.geometry,
        name=f"{checker.name or 'checker'}>>{main.name or 'main'}",
    )
    logger.debug("Chained machine has %d states.", len(composed.states))
    return composed


def accept_all_checker(alphabet: T.Sequence[str]) -> TwoWayAutomaton:
    """
    Simple 2dfa that sweeps once and accepts at $.
    """
    alphabet = tuple(alphabet)
    transitions = {("sweep", s): (("sweep", RIGHT),) for s in alphabet + (CENT,)}
    transitions[("sweep", DOLLAR)] = (("ok", RIGHT),)
    return TwoWayAutomaton(
        states=("sweep", "ok"),
        alphabet=alphabet,
        initial="sweep",
        transitions=transitions,
        accepting=frozenset({"ok"}),
        name="accept-all",
    )
