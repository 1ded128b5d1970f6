"""
Uniform instances <M>#x: a machine code, the quaternary '#', and the input word over {0, 1}
written two bits per symbol.
"""
import typing as T

from twowaygym.automata.machine import TwoWayAutomaton
from twowaygym.codecs.machine import MachineSignature, decode_automaton, encode_automaton
from twowaygym.codecs.strings import decode_quaternary, encode_quaternary
from twowaygym.definitions import BINARY_ALPHABET, HASH
from twowaygym.errors import EncodingError, FormatError


def encode_instance(M: TwoWayAutomaton, x: str, c: T.Optional[int] = None) -> str:
    if tuple(M.alphabet) != BINARY_ALPHABET or any(s not in BINARY_ALPHABET for s in x):
        raise EncodingError("Instances are defined for machines and words over {0, 1}.")
    return encode_automaton(M, c) + encode_quaternary(HASH + x)


def decode_instance(bits: str, signature: MachineSignature) -> tuple[TwoWayAutomaton, str]:
    pre = decode_quaternary(bits)
    cut = pre.rfind(HASH)
    if cut < 1 or pre[cut - 1] != HASH:
        raise FormatError("No '#' separates the machine code from the word.", "instance separator")
    x = pre[cut + 1:]
    if any(s not in BINARY_ALPHABET for s in x):
        raise FormatError("The word after the separator is not over {0, 1}.", "instance word")
    return decode_automaton(encode_quaternary(pre[:cut]), signature), x
