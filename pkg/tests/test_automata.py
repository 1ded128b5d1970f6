import math

import pytest

import twowaygym.oracle as oracle
from twowaygym.automata import (
    SurfaceConfig, TapeGeometry, TwoWayAutomaton, accept_all_checker, accepts_afa_fixpoint,
    accepts_nfa, accepts_with_stationary, automaton_from_dict, automaton_from_json,
    automaton_to_dict, automaton_to_dot, automaton_to_json, chain_with_checker,
    computation_graph_to_dot, eliminate_stationary_moves, evaluate_leveled, load_automaton,
    measure_narrowness, save_automaton, step_successors, structural_violations, tape_of,
    validate_automaton,
)
from twowaygym.codecs import MachineSignature, decode_automaton, encode_automaton, entry_width
from twowaygym.config import load_regression
from twowaygym.definitions import CENT, DOLLAR, LEFT, RIGHT, STAY
from twowaygym.errors import (
    CompositionError, DomainError, EncodingError, FormatError, ValidationError, WrongMachineKindError
)


@pytest.fixture(scope="module")
def ones_parity():
    """
    Simple 2dfa accepting words over {0, 1} with an even number of 1s.
    """
    transitions = {
        ("e", CENT): (("e", RIGHT),),
        ("e", "0"): (("e", RIGHT),),
        ("e", "1"): (("o", RIGHT),),
        ("o", "0"): (("o", RIGHT),),
        ("o", "1"): (("e", RIGHT),),
        ("e", DOLLAR): (("acc", RIGHT),),
    }
    return TwoWayAutomaton(
        states=("e", "o", "acc"),
        alphabet=("0", "1"),
        initial="e",
        transitions=transitions,
        accepting=frozenset({"acc"}),
        name="ones-parity",
    )


@pytest.fixture(scope="module")
def all_must_see_one():
    """
    2afa on a flat tape: at ¢ it forks into two branches that both have to find a 1.
    """
    transitions = {
        ("fork", CENT): (("a", RIGHT), ("b", RIGHT)),
        ("a", "0"): (("a", RIGHT),),
        ("a", "1"): (("acc", RIGHT),),
        ("b", "0"): (("b", RIGHT),),
        ("b", "1"): (("acc", LEFT),),
    }
    return TwoWayAutomaton(
        states=("fork", "a", "b", "acc"),
        alphabet=("0", "1"),
        initial="fork",
        transitions=transitions,
        accepting=frozenset({"acc"}),
        universal=frozenset({"fork"}),
        geometry=TapeGeometry.FLAT,
    )


def test_machine_properties(ones_parity, all_must_see_one):
    assert ones_parity.kind == "2dfa"
    assert all_must_see_one.kind == "2afa"
    assert ones_parity.existential == frozenset({"e", "o"})
    assert ones_parity.symbols == ("0", "1", CENT, DOLLAR)
    assert ones_parity.delta("o", DOLLAR) == ()
    assert len(ones_parity) == 3
    assert tape_of("01") == (CENT, "0", "1", DOLLAR)

    report = validate_automaton(ones_parity)
    assert report.is_simple and report.is_deterministic and report.is_end_branching
    report = validate_automaton(all_must_see_one)
    assert not report.is_sweeping and not report.is_end_branching
    assert report.branching_bound == 2


def test_structural_violations():
    A = TwoWayAutomaton(
        states=("q", "acc"),
        alphabet=("0", DOLLAR),
        initial="z",
        transitions={("acc", "0"): (("q", RIGHT),), ("q", "0"): (("w", STAY),)},
        accepting=frozenset({"acc"}),
    )
    violations = structural_violations(A)
    assert any("initial state" in v for v in violations)
    assert any("endmarkers" in v for v in violations)
    assert any("halting state 'acc'" in v for v in violations)
    assert any("undeclared state 'w'" in v for v in violations)
    assert any("direction 0" in v for v in violations)
    with pytest.raises(ValidationError) as e:
        validate_automaton(A)
    assert e.value.violations == violations


def test_step_successors(ones_parity, all_must_see_one):
    # circular tape: $ wraps around to ¢
    assert step_successors(ones_parity, "1", SurfaceConfig("e", 2)) == [SurfaceConfig("acc", 0)]
    assert step_successors(ones_parity, "1", SurfaceConfig("e", 1)) == [SurfaceConfig("o", 2)]
    # flat tape: moving off the right end has no successor
    B = all_must_see_one.replace(transitions={("a", DOLLAR): (("a", RIGHT),)})
    assert step_successors(B, "0", SurfaceConfig("a", 2)) == []
    with pytest.raises(DomainError, match="outside"):
        step_successors(ones_parity, "1", SurfaceConfig("e", 3))
    with pytest.raises(DomainError, match="halting"):
        step_successors(ones_parity, "1", SurfaceConfig("acc", 0))


def test_accepts_nfa(ones_parity):
    for x in oracle.all_words(("0", "1"), 5):
        verdict = accepts_nfa(ones_parity, x)
        assert bool(verdict) == (x.count("1") % 2 == 0)
        if verdict:
            assert verdict.path_length == len(x) + 2
    with pytest.raises(WrongMachineKindError):
        accepts_nfa(TwoWayAutomaton(("q",), ("0",), "q", universal=frozenset({"q"})), "")


def test_universal_branches(all_must_see_one):
    for x in ["", "0", "00"]:
        assert not accepts_afa_fixpoint(all_must_see_one, x)
    for x in ["1", "01", "100"]:
        assert accepts_afa_fixpoint(all_must_see_one, x)
        assert evaluate_leveled(all_must_see_one, x)[0]

    # a universal state without moves accepts vacuously
    A = TwoWayAutomaton(("q",), ("0",), "q", universal=frozenset({"q"}))
    assert accepts_afa_fixpoint(A, "0")
    assert evaluate_leveled(A, "0")[0]
    # an existential one rejects
    assert not accepts_afa_fixpoint(A.replace(universal=frozenset(), existential=None), "0")


def test_enumerated_nfas_against_bruteforce():
    machines = list(oracle.enumerate_simple_nfas(2))
    assert len(machines) == 108
    words = list(oracle.all_words(("0", "1"), 3))
    for M in machines:
        for x in words:
            expected = oracle.nfa_accept_bruteforce(M, x)
            assert bool(accepts_nfa(M, x)) == expected
            assert accepts_afa_fixpoint(M, x) == expected


@pytest.mark.parametrize("geometry", [TapeGeometry.CIRCULAR, TapeGeometry.FLAT])
def test_random_afa_against_bruteforce(geometry):
    for seed in range(40):
        A = oracle.random_afa(4, seed=seed, geometry=geometry)
        for x in oracle.all_words(("0", "1"), 3):
            assert accepts_afa_fixpoint(A, x) == oracle.afa_accept_bruteforce(A, x)


def test_leveled_evaluation_matches_fixpoint():
    # with a depth bound beyond the number of configurations every finite branch is seen
    for seed in range(20):
        A = oracle.random_afa(3, seed=seed, geometry=TapeGeometry.FLAT)
        for x in ["", "1", "01", "110"]:
            verdict, graph = evaluate_leveled(A, x)
            assert verdict == accepts_afa_fixpoint(A, x)
            assert len(graph.labels) == len(graph.levels)


def test_computation_graph(all_must_see_one):
    verdict, graph = evaluate_leveled(all_must_see_one, "01")
    assert verdict
    assert graph.levels[0].configs == (SurfaceConfig("fork", 0),)
    assert graph.levels[0].quantifier_label == "universal"
    assert graph.widths[:2] == [1, 2]
    assert SurfaceConfig("fork", 0) in graph.labels[0]

    report = measure_narrowness(all_must_see_one, "01")
    assert report.width == 1 and report.leveled
    assert measure_narrowness(all_must_see_one.replace(universal=frozenset(), existential=None), "01").width == 0

    dot = computation_graph_to_dot(all_must_see_one, graph)
    assert "fork@0" in dot.source
    assert "cluster_0" in dot.source


def test_narrowness_counts_halting_configurations():
    # level 1 holds the universal u@1 next to the halting acc@1
    A = TwoWayAutomaton(
        states=("s", "u", "acc"),
        alphabet=("0",),
        initial="s",
        transitions={
            ("s", CENT): (("u", RIGHT), ("acc", RIGHT)),
            ("u", "0"): (("acc", RIGHT),),
        },
        accepting=frozenset({"acc"}),
        universal=frozenset({"u"}),
        geometry=TapeGeometry.FLAT,
    )
    _, graph = evaluate_leveled(A, "0")
    assert graph.levels[1].quantifier_label == "universal"
    report = measure_narrowness(A, "0")
    assert report.width == 2
    assert report.universal_width == 1


def test_eliminate_stationary_moves():
    for geometry in [TapeGeometry.CIRCULAR, TapeGeometry.FLAT]:
        for seed in range(30):
            A = oracle.random_afa(3, seed=seed, stationary=True, geometry=geometry)
            B = eliminate_stationary_moves(A)
            validate_automaton(B)
            assert len(B.states) <= len(A.states) * (len(A.alphabet) + 3)
            for x in oracle.all_words(("0", "1"), 2):
                assert accepts_with_stationary(A, x) == accepts_afa_fixpoint(B, x)


def test_eliminate_stationary_moves_noop(ones_parity):
    assert eliminate_stationary_moves(ones_parity) is ones_parity


def test_chain_with_checker(ones_parity):
    checker = accept_all_checker(("0", "1"))
    chained = chain_with_checker(checker, ones_parity)
    validate_automaton(chained)
    for x in oracle.all_words(("0", "1"), 4):
        assert bool(accepts_nfa(chained, x)) == bool(accepts_nfa(ones_parity, x))

    # the parity machine accepts at $ as well, so it can act as a checker
    twice = chain_with_checker(ones_parity, ones_parity)
    assert bool(accepts_nfa(twice, "11")) and not accepts_nfa(twice, "1")

    with pytest.raises(CompositionError, match="Alphabets"):
        chain_with_checker(accept_all_checker(("a",)), ones_parity)
    nondeterministic = checker.replace(transitions={**checker.transitions, ("sweep", "0"): (("sweep", RIGHT), ("ok", RIGHT))})
    with pytest.raises(CompositionError):
        chain_with_checker(nondeterministic, ones_parity)

    # accepting on a 1 would hand over to the main machine away from $
    early = ones_parity.replace(transitions={**ones_parity.transitions, ("o", "1"): (("acc", RIGHT),)})
    validate_automaton(early)
    with pytest.raises(CompositionError, match="not \\$"):
        chain_with_checker(early, ones_parity)


def test_json_serialization(ones_parity, all_must_see_one, tmp_path):
    for A in [ones_parity, all_must_see_one, oracle.random_afa(3, seed=7)]:
        B = automaton_from_json(automaton_to_json(A))
        assert B == A and B.name == A.name

    doc = automaton_to_dict(ones_parity)
    assert doc["version"] == 1
    assert {"from": "e", "symbol": "CENT", "to": "e", "dir": 1} in doc["transitions"]

    pth = tmp_path / "m.json"
    save_automaton(all_must_see_one, pth)
    assert load_automaton(pth) == all_must_see_one

    with pytest.raises(FormatError, match="version"):
        automaton_from_dict({**doc, "version": 99})
    with pytest.raises(FormatError, match="json-schema"):
        automaton_from_dict({"version": 1, "states": ["q"]})
    with pytest.raises(FormatError, match="json-syntax"):
        automaton_from_json("{")


def test_automaton_dot(ones_parity, all_must_see_one):
    source = automaton_to_dot(ones_parity).source
    assert "doublecircle" in source
    assert "<start>" in source
    assert "box" in automaton_to_dot(all_must_see_one).source


def test_machine_codec(ones_parity):
    assert entry_width(3) == 3
    bits = encode_automaton(ones_parity)
    assert set(bits) <= {"0", "1"}
    assert decode_automaton(bits, MachineSignature.from_automaton(ones_parity)) == ones_parity

    for seed in range(200):
        M = oracle.random_simple_nfa(2 + seed % 7, 3, seed=seed)
        sig = MachineSignature.from_automaton(M)
        assert decode_automaton(encode_automaton(M), sig) == M
        assert decode_automaton(encode_automaton(M, c=5), sig) == M

    with pytest.raises(EncodingError, match="choices"):
        encode_automaton(oracle.random_simple_nfa(4, 3, seed=1).replace(
            transitions={("q0", DOLLAR): (("q1", RIGHT), ("q2", RIGHT))}
        ), c=1)
    with pytest.raises(FormatError, match="machine rows"):
        decode_automaton(bits, MachineSignature.default(2, ("0", "1")))


def test_machine_code_length():
    e = load_regression()["machine_code_length_e"]
    for n in [2, 3, 4, 8, 16, 32, 64]:
        for c in [1, 2, 3]:
            for seed in range(3):
                M = oracle.random_simple_nfa(n, c, seed=100 * n + 10 * c + seed)
                assert len(encode_automaton(M)) <= e * n * math.log2(n)
