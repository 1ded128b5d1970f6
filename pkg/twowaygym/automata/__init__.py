from .machine import (
    TapeGeometry, SurfaceConfig, StructuralReport, ResourceBounds, TwoWayAutomaton,
    tape_of, structural_violations, validate_automaton, successors, step_successors,
)
from .evaluators import (
    LevelLabel, NfaVerdict, Level, ComputationGraph, NarrownessReport, default_depth_bound,
    accepts_nfa, accepts_afa_fixpoint, accepts_with_stationary, build_computation_graph,
    evaluate_leveled, measure_narrowness,
)
from .transforms import eliminate_stationary_moves, chain_with_checker, accept_all_checker
from .serialization import (
    automaton_to_dict, automaton_from_dict, automaton_to_json, automaton_from_json,
    save_automaton, load_automaton,
)
from .dot import automaton_to_dot, computation_graph_to_dot

__all__ = [
    "TapeGeometry",
    "SurfaceConfig",
    "StructuralReport",
    "ResourceBounds",
    "TwoWayAutomaton",
    "tape_of",
    "structural_violations",
    "validate_automaton",
    "successors",
    "step_successors",
    "LevelLabel",
    "NfaVerdict",
    "Level",
    "ComputationGraph",
    "NarrownessReport",
    "default_depth_bound",
    "accepts_nfa",
    "accepts_afa_fixpoint",
    "accepts_with_stationary",
    "build_computation_graph",
    "evaluate_leveled",
    "measure_narrowness",
    "eliminate_stationary_moves",
    "chain_with_checker",
    "accept_all_checker",
    "automaton_to_dict",
    "automaton_from_dict",
    "automaton_to_json",
    "automaton_from_json",
    "save_automaton",
    "load_automaton",
    "automaton_to_dot",
    "computation_graph_to_dot",
]
