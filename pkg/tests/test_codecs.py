import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import twowaygym.codecs as codecs
import twowaygym.oracle as oracle
from twowaygym.codecs import Digraph3
from twowaygym.config import load_regression
from twowaygym.errors import CapExceededError, DomainError, EncodingError, FormatError


def test_quaternary():
    assert codecs.encode_quaternary("10") == "0100"
    assert codecs.encode_quaternary("0#1⊥1") == "0011011001"
    assert codecs.decode_quaternary("0011011001") == "0#1⊥1"
    assert codecs.encode_quaternary("") == ""
    assert "".join(codecs.iter_quaternary("0011011001")) == "0#1⊥1"

    with pytest.raises(FormatError, match="Odd length"):
        codecs.decode_quaternary("011")
    with pytest.raises(FormatError, match="even-length"):
        list(codecs.iter_quaternary("010"))
    with pytest.raises(EncodingError):
        codecs.encode_quaternary("2")


def test_bin_fixed():
    assert codecs.bin_fixed(5, 2) == "00110"
    assert codecs.bin_fixed(4, 5) == "1101"
    assert codecs.bin_fixed(3, 1) == "011"
    assert codecs.parse_bin_fixed("00110") == 2
    assert codecs.parse_bin_fixed("1101", 4) == 5

    # binary(5) = "101" needs width at least 4
    with pytest.raises(DomainError, match="too small"):
        codecs.bin_fixed(3, 5)
    with pytest.raises(FormatError, match="block-width"):
        codecs.parse_bin_fixed("0110", 5)
    with pytest.raises(FormatError, match="marker"):
        codecs.parse_bin_fixed("000")


@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=1, max_value=4))
def test_bin_fixed_inverse(i, pad):
    n = len(codecs.binary_repr(i)) + pad
    block = codecs.bin_fixed(n, i)
    assert len(block) == n
    assert codecs.parse_bin_fixed(block, n) == i


def test_binary_numerals():
    assert codecs.binary_repr(0) == "0"
    assert codecs.binary_repr(6) == "110"
    assert codecs.parse_binary("110") == 6
    for bad in ["", "01", "2"]:
        with pytest.raises(FormatError):
            codecs.parse_binary(bad)


def test_graph_encoding():
    G = Digraph3.from_edges(2, [(0, 1)])
    assert codecs.graph_preimage(G) == "1#10####10###"
    assert codecs.encode_graph(G) == codecs.encode_quaternary("1#10####10###")
    assert codecs.decode_graph(codecs.encode_graph(G)) == G
    assert codecs.graph_preimage(Digraph3.empty(1)) == "1###"
    assert codecs.vertex_count_of_encoding(codecs.encode_graph(G)) == 2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_graph_encoding_all_graphs(n):
    graphs = list(oracle.enumerate_graphs(n))
    assert len(graphs) == oracle.count_graphs(n)
    encodings = {codecs.encode_graph(G) for G in graphs}
    assert len(encodings) == len(graphs)
    for G in graphs:
        assert codecs.decode_graph(codecs.encode_graph(G), n) == G


@pytest.mark.parametrize(
    "pre, condition",
    [
        ("1#10####1###", "(iii) row labels"),
        ("1#11##", "(iv) entries"),
        ("1#1#1#", "(iv) entries"),
        ("1##1#", "(iv) entries"),
        ("1#01##", "(iv) entries"),
        ("1###1###", "(ii) row structure"),
        ("1##", "(ii) row structure"),
    ],
)
def test_graph_encoding_malformed(pre, condition):
    check = codecs.validate_graph_encoding(codecs.encode_quaternary(pre))
    assert not check.valid
    assert check.condition == condition
    assert codecs.vertex_count_of_encoding(codecs.encode_quaternary(pre)) is None


def test_graph_encoding_wrong_size():
    x = codecs.encode_graph(Digraph3.empty(3))
    assert codecs.validate_graph_encoding(x).n == 3
    with pytest.raises(FormatError, match="row count"):
        codecs.decode_graph(x, 2)
    # a block outside {00, 01, 11}
    check = codecs.validate_graph_encoding("10")
    assert check.condition == "(i) block alphabet"


def test_degree_check():
    G = Digraph3.from_edges(4, [(0, 3), (1, 3), (2, 3), (3, 0)])
    assert G.degree_violations() == [3]
    check = codecs.validate_graph_encoding(codecs.encode_graph(G))
    assert check.valid and not check.degree_ok


def test_graph_code_length():
    c = load_regression()["graph_code_length_c"]
    for i, n in enumerate([2, 3, 5, 8, 16, 33, 64]):
        for seed in range(5):
            x = codecs.encode_graph(oracle.random_graph(n, seed=1000 * i + seed))
            assert n <= len(x) <= c * n * math.log2(n)


def test_edge_list():
    G = codecs.parse_edge_list("% a comment\nn=3\n0 1\n\n1 2\n")
    assert G == Digraph3.from_edges(3, [(0, 1), (1, 2)])
    assert codecs.parse_edge_list(codecs.format_edge_list(G)) == G

    with pytest.raises(FormatError, match="header"):
        codecs.parse_edge_list("0 1\n")
    with pytest.raises(FormatError, match="range"):
        codecs.parse_edge_list("n=2\n2 0\n")
    with pytest.raises(FormatError, match="edge-list range"):
        codecs.parse_edge_list("n=5\n0 1\n0 2\n0 3\n0 4\n")


def test_digraph_invariants():
    with pytest.raises(ValueError):
        Digraph3(0, ())
    with pytest.raises(ValueError, match="increasing"):
        Digraph3(2, ((1, 0), ()))
    G = Digraph3.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert G.source == 0 and G.target == 2
    assert G.without_edges([(0, 2)]).edges() == [(0, 1), (1, 2)]
    assert sorted(G.to_networkx().edges()) == [(0, 1), (0, 2), (1, 2)]


def test_prime_index():
    assert codecs.prime_index(2, 0, 1) == 2
    assert codecs.prime_index(2, 1, 0) == 3
    assert codecs.prime_index(2, 1, 1) == 5
    assert codecs.edge_of_prime(2, 5) == (1, 1)
    with pytest.raises(DomainError, match="no prime index"):
        codecs.prime_index(2, 0, 0)
    with pytest.raises(DomainError, match="not prime"):
        codecs.edge_of_prime(2, 4)
    with pytest.raises(DomainError):
        codecs.edge_of_prime(2, 7)


@pytest.mark.parametrize("n", [2, 3, 5, 10])
def test_prime_index_inverse(n):
    for i in range(n):
        for j in range(n):
            if (i, j) == (0, 0):
                continue
            assert codecs.edge_of_prime(n, codecs.prime_index(n, i, j)) == (i, j)


def test_prime_encoding():
    G = Digraph3.from_edges(2, [(0, 1), (1, 1)])
    assert codecs.prime_block_width(2) == 4
    assert codecs.encode_graph_prime(G) == "0110#1101"
    assert codecs.decode_graph_prime("0110#1101", 2) == G
    assert codecs.decode_graph_prime("1101#0110", 2) == G
    assert codecs.decode_graph_prime("", 2) == Digraph3.empty(2)

    e = codecs.encode_graph_unary(G)
    assert e.length == 10 and e.factors == (2, 5)
    with pytest.raises(EncodingError, match=r"\(0, 0\)"):
        codecs.encode_graph_prime(Digraph3.from_edges(2, [(0, 0)]))
    with pytest.raises(FormatError, match="twice"):
        codecs.decode_graph_prime("0110#0110", 2)


def test_unary_word():
    e = codecs.UnaryWord.parse("2*3*5")
    assert e.length == 30 and e.factors == (2, 3, 5)
    assert str(e) == "2*3*5"
    assert codecs.UnaryWord.parse("12").length == 12
    assert codecs.UnaryWord(12).with_factorization().factors == (2, 2, 3)
    assert e.materialize(cap=30) == "1" * 30
    with pytest.raises(CapExceededError):
        e.materialize(cap=29)
    with pytest.raises(DomainError):
        codecs.UnaryWord(6, (2, 2))
    with pytest.raises(FormatError):
        codecs.UnaryWord.parse("two")


@settings(max_examples=50)
@given(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13, 101]), max_size=6), st.integers(min_value=1, max_value=60))
def test_residue_from_factors(factors, modulus):
    e = codecs.UnaryWord.from_factors(factors)
    assert codecs.residue_of(e, modulus) == math.prod(factors) % modulus
    assert e.residue(modulus) == codecs.residue_of(codecs.UnaryWord(e.length), modulus)


@pytest.mark.slow
def test_graph_encoding_all_graphs_n4():
    count = 0
    for G in oracle.enumerate_graphs(4):
        x = codecs.encode_graph(G)
        assert codecs.validate_graph_encoding(x).n == 4
        assert codecs.decode_graph(x, 4) == G
        count += 1
    assert count == oracle.count_graphs(4) == 50625


@pytest.mark.slow
def test_residue_from_random_factor_sets():
    rng = np.random.default_rng(0)
    primes = [2, 3, 5, 7, 11, 13, 101, 7919]
    for _ in range(1000):
        factors = [int(p) for p in rng.choice(primes, size=int(rng.integers(0, 9)))]
        modulus = int(rng.integers(1, 500))
        e = codecs.UnaryWord.from_factors(factors)
        assert codecs.residue_of(e, modulus) == math.prod(factors) % modulus
