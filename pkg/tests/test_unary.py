import pytest

import twowaygym.oracle as oracle
from twowaygym.automata import TapeGeometry, TwoWayAutomaton, accepts_afa_fixpoint, accepts_nfa, validate_automaton
from twowaygym.codecs import (
    Digraph3, UnaryWord, bin_fixed, decode_graph_prime, edge_of_prime, encode_graph, encode_graph_prime,
    encode_graph_unary, prime_block_width,
)
from twowaygym.definitions import CENT, DOLLAR, LEFT, RIGHT
from twowaygym.errors import EncodingError, FormatError, WrongMachineKindError
from twowaygym.unary import (
    build_unary_3dstcon_solver, compress_unary_afa, graph_binary_to_prime, rho_decompose, run_unary,
    VACUOUS, _PrimeSweepProgram, simulate_sweep, sweep_state_after_unary,
)


def unary_graphs(n):
    # graphs with the edge (0, 0) have no unary code
    return [G for G in oracle.enumerate_graphs(n) if 0 not in G.out[0]]


@pytest.fixture(scope="module")
def divisible_by_six():
    """
    Simple unary 2afa: one sweep, then a universal fork into a mod-2 and a mod-3 counter.
    """
    transitions = {
        ("s", CENT): (("s", RIGHT),),
        ("s", "1"): (("s", RIGHT),),
        ("s", DOLLAR): (("m2_0", RIGHT), ("m3_0", RIGHT)),
        ("m2_0", DOLLAR): (("acc", RIGHT),),
        ("m3_0", DOLLAR): (("acc", RIGHT),),
    }
    for m in (2, 3):
        for k in range(m):
            transitions[(f"m{m}_{k}", CENT)] = ((f"m{m}_{k}", RIGHT),)
            transitions[(f"m{m}_{k}", "1")] = ((f"m{m}_{(k + 1) % m}", RIGHT),)
    return TwoWayAutomaton(
        states=("s", "m2_0", "m2_1", "m3_0", "m3_1", "m3_2", "acc"),
        alphabet=("1",),
        initial="s",
        transitions=transitions,
        accepting=frozenset({"acc"}),
        universal=frozenset({"s"}),
        name="divisible-by-six",
    )


def test_unary_solver_single_vertex():
    A = build_unary_3dstcon_solver(1)
    assert run_unary(A, 1)
    assert accepts_nfa(A, "1")


def test_unary_solver_materialized():
    A = build_unary_3dstcon_solver(2)
    report = validate_automaton(A)
    assert report.is_simple and report.branching_bound <= 3
    for G in unary_graphs(2):
        e = encode_graph_unary(G)
        assert bool(accepts_nfa(A, "1" * e.length)) == oracle.reach(G, 0, 1)


@pytest.mark.parametrize("n", [2, 3])
def test_unary_solver_against_reach(n):
    A = build_unary_3dstcon_solver(n)
    for G in unary_graphs(n):
        assert run_unary(A, encode_graph_unary(G)) == oracle.reach(G, 0, n - 1)


def test_unary_solver_long_path():
    n = 5
    path = Digraph3.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    A = build_unary_3dstcon_solver(n)
    assert run_unary(A, encode_graph_unary(path))
    assert not run_unary(A, encode_graph_unary(path.without_edges([(2, 3)])))


def test_rho_decomposition():
    A = build_unary_3dstcon_solver(3)
    for q in A.states:
        rho = rho_decompose(A, q)
        assert rho.cycle_length >= 1
        for m in range(40):
            assert sweep_state_after_unary(A, q, m) == simulate_sweep(A, q, m)
        e = UnaryWord.from_factors([2, 3, 5])
        assert sweep_state_after_unary(A, q, e) == simulate_sweep(A, q, 30)


def test_run_unary_universal(divisible_by_six):
    for e in range(14):
        expected = e % 6 == 0
        assert run_unary(divisible_by_six, e) == expected
        assert accepts_afa_fixpoint(divisible_by_six, "1" * e) == expected
    assert run_unary(divisible_by_six, UnaryWord.from_factors([2, 3, 7919]))
    assert not run_unary(divisible_by_six, UnaryWord.from_factors([2, 5, 7919]))


def test_compress_solver():
    evaluator = compress_unary_afa(build_unary_3dstcon_solver(2), 2)
    assert evaluator.flat is not None
    assert validate_automaton(evaluator.flat).is_simple
    for key in ["machine_states", "sweep_starts", "flat_estimate", "flat_states", "flat_narrowness"]:
        assert key in evaluator.report
    assert evaluator.word_of("0110#1101") == UnaryWord(10, (2, 5))
    for G in unary_graphs(2):
        text = encode_graph_prime(G)
        expected = oracle.reach(G, 0, 1)
        assert evaluator(text) == expected
        assert bool(accepts_nfa(evaluator.flat, text)) == expected

    # repeated edge, non-prime, prime out of range, leading zero, wrong width, trailing '#'
    malformed = ["0110#0110", "0110#1100", "0110#1111", "0110#1001", "01100", "0110#1101#0110", "0110#", "#0110"]
    for w in malformed:
        with pytest.raises(FormatError):
            decode_graph_prime(w, 2)
        assert not evaluator.accepts(w)
        assert not accepts_nfa(evaluator.flat, w)


def first_sweep(program, text):
    state = program.initial()
    for sym in text:
        state = program.step(state, sym)
        if state is None:
            return ()
    return program.finish(state)


def test_prime_sweep_rejects_high_outdegree():
    # n=4: the primes 7, 11, 13, 17 are the edges (1, 0) .. (1, 3)
    n, primes = 4, [7, 11, 13, 17]
    assert [edge_of_prime(n, p) for p in primes] == [(1, 0), (1, 1), (1, 2), (1, 3)]
    s = prime_block_width(n)
    ok = "#".join(bin_fixed(s, p) for p in primes[:3])
    bad = "#".join(bin_fixed(s, p) for p in primes)
    with pytest.raises(FormatError):
        decode_graph_prime(bad, n)

    program = _PrimeSweepProgram(build_unary_3dstcon_solver(n), n)
    assert first_sweep(program, ok) != ()
    assert first_sweep(program, bad) == ()
    assert not compress_unary_afa(build_unary_3dstcon_solver(n), n, emit_flat=False).accepts(bad)


def test_compress_universal(divisible_by_six):
    evaluator = compress_unary_afa(divisible_by_six, 2)
    assert evaluator.flat.kind == "2afa"
    for G in unary_graphs(2):
        text = encode_graph_prime(G)
        expected = encode_graph_unary(G).length % 6 == 0
        assert evaluator.accepts(text) == expected
        assert accepts_afa_fixpoint(evaluator.flat, text) == expected


def test_compress_cap():
    evaluator = compress_unary_afa(build_unary_3dstcon_solver(2), 2, cap=10)
    assert evaluator.flat is None
    assert "flat_states" not in evaluator.report
    assert evaluator("0110")


def test_graph_binary_to_prime():
    G = Digraph3.from_edges(2, [(0, 1), (1, 1)])
    assert graph_binary_to_prime(encode_graph(G)) == "0110#1101"
    for n in [1, 2, 3]:
        for G in unary_graphs(n):
            assert graph_binary_to_prime(encode_graph(G)) == encode_graph_prime(G)
    with pytest.raises(EncodingError):
        graph_binary_to_prime(encode_graph(Digraph3.from_edges(2, [(0, 0)])))
    with pytest.raises(FormatError):
        graph_binary_to_prime("10")


def test_unary_wrong_machine_kind(divisible_by_six):
    with pytest.raises(WrongMachineKindError, match="unary alphabet"):
        run_unary(oracle.random_simple_nfa(3, 2, seed=0), 4)
    left = divisible_by_six.replace(transitions={**divisible_by_six.transitions, ("s", "1"): (("s", LEFT),)})
    with pytest.raises(WrongMachineKindError, match="sweeping"):
        run_unary(left, 4)
    with pytest.raises(WrongMachineKindError, match="circular"):
        rho_decompose(divisible_by_six.replace(geometry=TapeGeometry.FLAT), "s")


def next_sweep_state(A, cur):
    if cur is None or cur == VACUOUS or cur in A.halting:
        return cur
    moves = A.delta(cur, "1")
    if not moves:
        return VACUOUS if cur in A.universal else None
    return moves[0][0]


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4])
def test_rho_decomposition_long_words(n, divisible_by_six):
    for A in [build_unary_3dstcon_solver(n), divisible_by_six]:
        for q in A.states:
            cur = simulate_sweep(A, q, 0)
            for m in range(10**4 + 1):
                assert sweep_state_after_unary(A, q, m) == cur
                if m and m % 997 == 0:
                    assert sweep_state_after_unary(A, q, UnaryWord(m).with_factorization()) == cur
                cur = next_sweep_state(A, cur)
