from .strings import (
    encode_quaternary, decode_quaternary, iter_quaternary, binary_repr, parse_binary, bin_fixed,
    parse_bin_fixed,
)
from .graph import (
    Digraph3, GraphCheck, graph_preimage, encode_graph, decode_graph, decode_row, iter_rows,
    validate_graph_encoding, vertex_count_of_encoding, parse_edge_list, format_edge_list,
)
from .machine import MachineSignature, entry_width, machine_preimage, encode_automaton, decode_automaton
from .prime import (
    UnaryWord, residue_of, prime_index, edge_of_prime, encode_graph_unary, prime_block_width,
    encode_graph_prime, decode_graph_prime,
)

__all__ = [
    "encode_quaternary",
    "decode_quaternary",
    "iter_quaternary",
    "binary_repr",
    "parse_binary",
    "bin_fixed",
    "parse_bin_fixed",
    "Digraph3",
    "GraphCheck",
    "graph_preimage",
    "encode_graph",
    "decode_graph",
    "decode_row",
    "iter_rows",
    "validate_graph_encoding",
    "vertex_count_of_encoding",
    "parse_edge_list",
    "format_edge_list",
    "MachineSignature",
    "entry_width",
    "machine_preimage",
    "encode_automaton",
    "decode_automaton",
    "UnaryWord",
    "residue_of",
    "prime_index",
    "edge_of_prime",
    "encode_graph_unary",
    "prime_block_width",
    "encode_graph_prime",
    "decode_graph_prime",
]
