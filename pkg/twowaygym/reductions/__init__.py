from .sweeps import ACCEPT, SweepProgram, compile_sweep_program
from .validator import GraphValidatorProgram, build_graph_validator
from .solver import ReachabilityProgram, build_reachability_core, build_3dstcon_solver
from .graph_reduction import (
    ReductionOutput, LabelAudit, normalize_unique_accept, gadget_exponent, nfa_to_graph,
    legalize_indegree, label_audit,
)
from .instance import encode_instance, decode_instance
from .dtm import (
    DtmMove, DtmSurfaceConfig, SpaceBoundedDTM, DtmRun, dtm_violations, validate_dtm, run_dtm,
    parity_dtm, immediate_accept_dtm, block_copy_dtm, identity_transducer, constant_transducer,
    vertex_count_transducer,
)
from .afa_simulation import dtm_to_narrow_afa, dtm_within_bounds
from .transducer import transducer_sizing, dtm_to_sweeping_transducer, run_transducer

__all__ = [
    "ACCEPT",
    "SweepProgram",
    "compile_sweep_program",
    "GraphValidatorProgram",
    "build_graph_validator",
    "ReachabilityProgram",
    "build_reachability_core",
    "build_3dstcon_solver",
    "ReductionOutput",
    "LabelAudit",
    "normalize_unique_accept",
    "gadget_exponent",
    "nfa_to_graph",
    "legalize_indegree",
    "label_audit",
    "encode_instance",
    "decode_instance",
    "DtmMove",
    "DtmSurfaceConfig",
    "SpaceBoundedDTM",
    "DtmRun",
    "dtm_violations",
    "validate_dtm",
    "run_dtm",
    "parity_dtm",
    "immediate_accept_dtm",
    "block_copy_dtm",
    "identity_transducer",
    "constant_transducer",
    "vertex_count_transducer",
    "dtm_to_narrow_afa",
    "dtm_within_bounds",
    "transducer_sizing",
    "dtm_to_sweeping_transducer",
    "run_transducer",
]
