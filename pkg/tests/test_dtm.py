import pytest

import twowaygym.oracle as oracle
from twowaygym.automata import (
    ResourceBounds, TapeGeometry, accepts_afa_fixpoint, evaluate_leveled, measure_narrowness,
    validate_automaton,
)
from twowaygym.codecs import Digraph3, encode_graph, vertex_count_of_encoding
from twowaygym.config import load_regression
from twowaygym.definitions import BLANK, CENT, DOLLAR, LEFT, RIGHT, STAY
from twowaygym.errors import CapExceededError, DomainError, ValidationError
from twowaygym.reductions import (
    SpaceBoundedDTM, block_copy_dtm, constant_transducer, dtm_to_narrow_afa, dtm_to_sweeping_transducer,
    dtm_violations, dtm_within_bounds, identity_transducer, immediate_accept_dtm, parity_dtm, run_dtm,
    run_transducer, transducer_sizing, validate_dtm, vertex_count_transducer,
)


def parity_bounds(length: int) -> ResourceBounds:
    return ResourceBounds(time_bound=2 * (length + 2), space_bound=2)


def test_run_dtm():
    D = parity_dtm()
    for x in oracle.all_words(("0", "1"), 4):
        run = run_dtm(D, x)
        assert run.accepted == (x.count("1") % 2 == 0)
        assert run.steps == len(x) + 2
        assert run.space_used == 1
        assert not run.exceeded

    # cut off by the time bound
    run = run_dtm(D, "00", time_bound=3)
    assert not run.accepted and run.exceeded

    D = block_copy_dtm()
    assert run_dtm(D, "0110").accepted is False
    assert run_dtm(D, "01001").accepted is True
    assert run_dtm(D, "01100").accepted is False
    assert run_dtm(D, "0101").accepted is True
    assert run_dtm(D, "01").accepted is True
    assert run_dtm(D, "0").accepted is False
    assert run_dtm(D, "0101").space_used == 2
    assert not run_dtm(D, "0101", space_bound=1).accepted


def test_run_dtm_output():
    assert run_dtm(identity_transducer(), "0110").output == "0110"
    assert run_dtm(constant_transducer("101"), "00").output == "101"


def test_dtm_validation():
    D = parity_dtm()
    assert dtm_violations(D) == []
    bad = SpaceBoundedDTM(
        states=("s", "acc"),
        input_alphabet=("0",),
        work_alphabet=("a",),
        initial="s",
        accepting=frozenset({"acc"}),
        transitions={("s", CENT, "a"): ("acc", "a", STAY, RIGHT), ("acc", "0", "a"): ("s", "a", RIGHT, STAY)},
    )
    violations = dtm_violations(bad)
    assert any("blank" in v for v in violations)
    assert any("moves the input head by 0" in v for v in violations)
    assert any("leaves a halting state" in v for v in violations)
    with pytest.raises(ValidationError):
        validate_dtm(bad)

    # moving the work head left of cell 0
    falls_off = SpaceBoundedDTM(
        states=("s", "acc"),
        input_alphabet=("0",),
        work_alphabet=(BLANK,),
        initial="s",
        accepting=frozenset({"acc"}),
        transitions={("s", CENT, BLANK): ("acc", BLANK, RIGHT, LEFT)},
    )
    with pytest.raises(ValidationError, match="left of cell 0"):
        run_dtm(falls_off, "0")


@pytest.mark.parametrize("length", [0, 1, 2, 3])
def test_parity_afa(length):
    D = parity_dtm()
    bounds = parity_bounds(length)
    A = dtm_to_narrow_afa(D, bounds, length)
    assert A.geometry == TapeGeometry.FLAT
    assert A.kind == "2afa"
    validate_automaton(A)
    for x in oracle.all_words(("0", "1"), length):
        if len(x) != length:
            continue
        expected = run_dtm(D, x, bounds.time_bound, bounds.space_bound).accepted
        verdict, _ = evaluate_leveled(A, x)
        assert verdict == expected
        assert accepts_afa_fixpoint(A, x) == expected
        assert dtm_within_bounds(D, x, bounds) == expected


@pytest.mark.parametrize("length", [1, 2, 3, 4, 5, 6])
def test_parity_afa_size_and_narrowness(length):
    regression = load_regression()
    kappa = regression["parity_afa_narrowness_kappa"]
    kappa_prime = regression["parity_afa_states_kappa_prime"]
    bounds = parity_bounds(length)
    A = dtm_to_narrow_afa(parity_dtm(), bounds, length)
    assert len(A.states) <= kappa_prime * bounds.time_bound * bounds.space_bound
    for x in ["0" * length, "1" * length]:
        report = measure_narrowness(A, x)
        assert report.leveled
        # the head guesses the DTM's input position, so every cell can carry windows
        assert 1 <= report.width <= kappa * bounds.space_bound * (length + 2)


def test_parity_afa_width_ignores_time_bound():
    widths = []
    for time_bound in [6, 10, 20, 40]:
        A = dtm_to_narrow_afa(parity_dtm(), ResourceBounds(time_bound, 2), 2)
        report = measure_narrowness(A, "01")
        assert report.leveled
        widths.append(report.width)
    assert len(set(widths)) == 1


def test_immediate_accept_afa():
    D = immediate_accept_dtm()
    for length in [0, 1, 2]:
        A = dtm_to_narrow_afa(D, ResourceBounds(2, 1), length)
        for x in oracle.all_words(("0", "1"), length):
            if len(x) == length:
                assert accepts_afa_fixpoint(A, x)


@pytest.mark.slow
@pytest.mark.parametrize("length", [3, 4, 5, 6])
def test_immediate_accept_afa_longer_inputs(length):
    D = immediate_accept_dtm()
    A = dtm_to_narrow_afa(D, ResourceBounds(2, 1), length)
    for x in oracle.all_words(("0", "1"), length):
        if len(x) == length:
            assert accepts_afa_fixpoint(A, x)
            assert dtm_within_bounds(D, x, ResourceBounds(2, 1))


@pytest.mark.slow
@pytest.mark.parametrize("length", [0, 1, 2, 3, 4, 5, 6])
def test_block_copy_afa(length):
    D = block_copy_dtm()
    bounds = ResourceBounds(length + 6, 2)
    A = dtm_to_narrow_afa(D, bounds, length)
    for x in oracle.all_words(("0", "1"), length):
        if len(x) == length:
            expected = run_dtm(D, x, bounds.time_bound, bounds.space_bound).accepted
            assert accepts_afa_fixpoint(A, x) == expected


@pytest.mark.slow
@pytest.mark.parametrize("length", [4, 5, 6])
def test_parity_afa_longer_inputs(length):
    D = parity_dtm()
    bounds = parity_bounds(length)
    A = dtm_to_narrow_afa(D, bounds, length)
    for x in oracle.all_words(("0", "1"), length):
        if len(x) == length:
            assert evaluate_leveled(A, x)[0] == (x.count("1") % 2 == 0)


def test_afa_too_tight_bounds():
    # parity needs |x|+2 steps, so a smaller time bound rejects everything
    D = parity_dtm()
    A = dtm_to_narrow_afa(D, ResourceBounds(3, 1), 2)
    for x in ["00", "11"]:
        assert not accepts_afa_fixpoint(A, x)
        assert not dtm_within_bounds(D, x, ResourceBounds(3, 1))


def test_afa_domain_errors():
    with pytest.raises(DomainError, match="time bound"):
        dtm_to_narrow_afa(parity_dtm(), ResourceBounds(space_bound=1), 2)
    with pytest.raises(DomainError, match="nonnegative"):
        dtm_to_narrow_afa(parity_dtm(), ResourceBounds(4, 1), -1)
    with pytest.raises(ValueError):
        ResourceBounds(time_bound=0)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_identity_transducer(n):
    A = dtm_to_sweeping_transducer(identity_transducer(), n, 1)
    report = validate_automaton(A)
    assert report.is_simple and report.is_deterministic
    for x in oracle.all_words(("0", "1"), n):
        if len(x) == n:
            assert run_transducer(A, x) == (True, x)


def test_constant_transducer():
    A = dtm_to_sweeping_transducer(constant_transducer("110"), 3, 1)
    for x in ["000", "101", "111"]:
        assert run_transducer(A, x) == (True, "110")


def test_transducer_cap():
    D = vertex_count_transducer(1)
    sizing = transducer_sizing(D, 8, 1)
    assert sizing["tape_cells"] == 10
    assert sizing["estimated_states"] == 2 * len(D.states) * 100 + 2
    with pytest.raises(CapExceededError) as e:
        dtm_to_sweeping_transducer(D, 8, 1, cap=1000)
    assert e.value.sizing == sizing
    with pytest.raises(DomainError):
        dtm_to_sweeping_transducer(identity_transducer(), -1, 1)


def test_vertex_count_dtm():
    D = vertex_count_transducer(2)
    for G in [Digraph3.empty(1), Digraph3.from_edges(2, [(0, 1)]), Digraph3.from_edges(3, [(0, 2)])]:
        x = encode_graph(G)
        run = run_dtm(D, x)
        assert run.accepted
        assert run.output == ("1" * G.n if G.n <= 2 else "")
    assert run_dtm(D, "0101").output == ""


@pytest.mark.slow
def test_vertex_count_sweeping_transducer():
    D = vertex_count_transducer(1)
    A = dtm_to_sweeping_transducer(D, 8, 1, cap=5_000_000)
    for x in oracle.all_words(("0", "1"), 8):
        if len(x) != 8:
            continue
        accepted, output = run_transducer(A, x)
        assert accepted
        assert output == ("1" if vertex_count_of_encoding(x) == 1 else "")
        assert output == run_dtm(D, x).output
