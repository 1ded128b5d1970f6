"""
Basic string codecs: the quaternary pairing of {0, 1, #, ⊥} into bits and the number formats
binary(i) and bin_n(i).
"""
import typing as T

from twowaygym.definitions import QUATERNARY
from twowaygym.errors import DomainError, EncodingError, FormatError

_QUATERNARY_INV = {v: k for k, v in QUATERNARY.items()}


def encode_quaternary(s: str) -> str:
    """
    Replace every symbol of `s` by its 2-bit block: 0 -> 00, 1 -> 01, # -> 11, ⊥ -> 10.
    """
    try:
        return "".join(QUATERNARY[sym] for sym in s)
    except KeyError as e:
        raise EncodingError(f"Symbol {e.args[0]!r} is not one of 0, 1, #, ⊥.") from None


def decode_quaternary(bits: str) -> str:
    if len(bits) % 2:
        raise FormatError(f"Odd length {len(bits)} cannot be split into 2-bit blocks.", "even-length")
    out = []
    for i in range(0, len(bits), 2):
        block = bits[i:i + 2]
        if block not in _QUATERNARY_INV:
            raise FormatError(f"Block {block!r} at offset {i} is not binary.", "binary-alphabet")
        out.append(_QUATERNARY_INV[block])
    return "".join(out)


def iter_quaternary(bits: T.Iterable[str]) -> T.Iterator[str]:
    """
    Streaming version of `decode_quaternary`.
    """
    pending = None
    for b in bits:
        if pending is None:
            pending = b
            continue
        block = pending + b
        if block not in _QUATERNARY_INV:
            raise FormatError(f"Block {block!r} is not binary.", "binary-alphabet")
        yield _QUATERNARY_INV[block]
        pending = None
    if pending is not None:
        raise FormatError("Input ends in the middle of a 2-bit block.", "even-length")


def binary_repr(i: int) -> str:
    """
    Standard binary representation without leading zeros, binary(0) = "0".
    """
    if i < 0:
        raise DomainError(f"binary_repr is undefined for negative {i}.")
    return format(i, "b")


def parse_binary(s: str) -> int:
    """
    Inverse of `binary_repr`; rejects empty strings and leading zeros.
    """
    if not s or any(c not in "01" for c in s) or (len(s) > 1 and s[0] == "0"):
        raise FormatError(f"{s!r} is not a binary numeral without leading zeros.", "binary-numeral")
    return int(s, 2)


def bin_fixed(n: int, i: int) -> str:
    """
    Fixed-width format bin_n(i) = 0^(k-1) 1 binary(i) with k = n - |binary(i)| >= 1.

    Args:
        n (int): Total width.
        i (int): Nonnegative integer to encode.
    """
    b = binary_repr(i)
    k = n - len(b)
    if k < 1:
        raise DomainError(f"Width {n} is too small for bin_n({i}): need at least {len(b) + 1}.")
    return "0" * (k - 1) + "1" + b


def parse_bin_fixed(block: str, n: T.Optional[int] = None) -> int:
    """
    Inverse of `bin_fixed`. If `n` is given, the block must have exactly that width.
    """
    if n is not None and len(block) != n:
        raise FormatError(f"Block {block!r} does not have width {n}.", "block-width")
    marker = block.find("1")
    if marker < 0 or any(c not in "01" for c in block):
        raise FormatError(f"Block {block!r} has no marker bit.", "block-marker")
    return parse_binary(block[marker + 1:])
