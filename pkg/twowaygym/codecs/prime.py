"""
Unary and prime encodings of degree-3 digraphs. Edge (i, j) is identified with the (i*n+j)-th
prime, so the pair (0, 0) has no prime and cannot be encoded.
"""
import logging
import math
import typing as T
from dataclasses import dataclass

from sympy import factorint, isprime, prime, primepi

from twowaygym.codecs.graph import Digraph3
from twowaygym.codecs.strings import bin_fixed, binary_repr, parse_bin_fixed
from twowaygym.definitions import HASH, UNARY_SYMBOL
from twowaygym.errors import CapExceededError, DomainError, EncodingError, FormatError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UnaryWord:
    """
    The word 1^length, kept as its length and optionally its prime factorization.
    """

    length: int
    factors: T.Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.length < 0:
            raise DomainError(f"Unary length must be nonnegative, got {self.length}.")
        if self.factors is not None:
            factors = tuple(sorted(int(p) for p in self.factors))
            object.__setattr__(self, "factors", factors)
            if math.prod(factors) != self.length:
                raise DomainError(f"Factors {factors} do not multiply to {self.length}.")

    @classmethod
    def from_factors(cls, factors: T.Union[str, T.Iterable[int]]) -> "UnaryWord":
        """
        Build from a factor list such as [2, 3, 5] or the text "2*3*5".
        """
        if isinstance(factors, str):
            try:
                factors = [int(tok) for tok in factors.split("*") if tok.strip()]
            except ValueError:
                raise FormatError(f"{factors!r} is not a '*'-separated factor list.", "factor list") from None
        factors = tuple(factors)
        return cls(math.prod(factors), factors)

    @classmethod
    def parse(cls, text: str) -> "UnaryWord":
        """
        Parse a decimal length or a factor list.
        """
        text = text.strip()
        if "*" in text:
            return cls.from_factors(text)
        try:
            return cls(int(text))
        except ValueError:
            raise FormatError(f"{text!r} is neither a decimal length nor a factor list.", "unary length") from None

    def with_factorization(self) -> "UnaryWord":
        if self.factors is not None or self.length == 0:
            return self
        factors = [p for p, k in factorint(self.length).items() for _ in range(k)]
        return UnaryWord(self.length, tuple(factors))

    def residue(self, modulus: int) -> int:
        return residue_of(self, modulus)

    def materialize(self, cap: int) -> str:
        if self.length > cap:
            raise CapExceededError(
                f"Refusing to write out 1^{self.length} above the cap {cap}.",
                {"length": self.length, "cap": cap},
            )
        return UNARY_SYMBOL * self.length

    def __str__(self) -> str:
        if self.factors:
            return "*".join(str(p) for p in self.factors)
        return str(self.length)


def residue_of(e: UnaryWord, modulus: int) -> int:
    """
    e.length mod `modulus`, computed factor by factor when a factorization is known.
    """
    if modulus < 1:
        raise DomainError(f"Modulus must be positive, got {modulus}.")
    if e.factors is None:
        return e.length % modulus
    r = 1 % modulus
    for p in e.factors:
        r = (r * (p % modulus)) % modulus
    return r


def prime_index(n: int, i: int, j: int) -> int:
    """
    p_(i,j), the (i*n+j)-th prime (p_1 = 2).
    """
    if not (0 <= i < n and 0 <= j < n):
        raise DomainError(f"Pair ({i}, {j}) is outside [0, {n - 1}]^2.")
    if i == 0 and j == 0:
        raise DomainError("The pair (0, 0) has no prime index.")
    return int(prime(i * n + j))


def edge_of_prime(n: int, p: int) -> tuple[int, int]:
    """
    Inverse of `prime_index`.
    """
    if not isprime(p):
        raise DomainError(f"{p} is not prime.")
    k = int(primepi(p))
    if not (1 <= k < n * n):
        raise DomainError(f"Prime {p} is not p_(i,j) for any pair of an n={n} graph.")
    return divmod(k, n)


def _check_unary_representable(G: Digraph3) -> None:
    if 0 in G.out[0]:
        raise EncodingError("Edge (0, 0) has no prime and cannot be represented.")


def encode_graph_unary(G: Digraph3) -> UnaryWord:
    _check_unary_representable(G)
    factors = tuple(prime_index(G.n, i, j) for i, j in G.edges())
    return UnaryWord.from_factors(factors)


def prime_block_width(n: int) -> int:
    """
    s = |binary(p_(n-1,n-1))| + 1, the smallest width for which every bin_s(p) is defined.
    """
    if n < 2:
        return 0
    return len(binary_repr(prime_index(n, n - 1, n - 1))) + 1


def encode_graph_prime(G: Digraph3) -> str:
    """
    Blocks bin_s(p_(i,j)) for every edge, in ascending prime order, joined by '#'.
    """
    _check_unary_representable(G)
    s = prime_block_width(G.n)
    primes = sorted(prime_index(G.n, i, j) for i, j in G.edges())
    return HASH.join(bin_fixed(s, p) for p in primes)


def decode_graph_prime(text: str, n: int) -> Digraph3:
    """
    Inverse of `encode_graph_prime` for a given vertex count; blocks may come in any order.
    """
    if n < 1:
        raise DomainError(f"Vertex count must be positive, got {n}.")
    if text == "":
        return Digraph3.empty(n)
    s = prime_block_width(n)
    if n == 1:
        raise FormatError("A one-vertex graph has no encodable edges.", "prime blocks")
    edges = []
    for block in text.split(HASH):
        p = parse_bin_fixed(block, s)
        try:
            edges.append(edge_of_prime(n, p))
        except DomainError as e:
            raise FormatError(str(e), "prime blocks") from None
    if len(set(edges)) != len(edges):
        raise FormatError("An edge is encoded twice.", "prime blocks")
    try:
        return Digraph3.from_edges(n, edges)
    except ValueError as e:
        raise FormatError(str(e), "prime blocks") from None
