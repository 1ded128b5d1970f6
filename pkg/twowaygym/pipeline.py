"""
Seeded experiment pipelines chaining codecs, builders, reductions, evaluators and oracles, and
the state-complexity report. Every run produces an `ExperimentManifest`.
"""
import datetime
import functools
import json
import logging
import typing as T
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from twowaygym.automata.dot import automaton_to_dot
from twowaygym.automata.evaluators import (
    accepts_afa_fixpoint, accepts_nfa, evaluate_leveled, measure_narrowness
)
from twowaygym.automata.machine import ResourceBounds, TwoWayAutomaton
from twowaygym.automata.serialization import automaton_to_json
from twowaygym.codecs.graph import Digraph3, encode_graph, format_edge_list
from twowaygym.codecs.prime import encode_graph_prime
from twowaygym.config import Caps, load_caps
from twowaygym.definitions import BINARY_ALPHABET, MANIFEST_VERSION, TWOWAYGYM_VERSION
from twowaygym.errors import CapExceededError, CompositionError, OracleDisagreement, TwoWayGymError
from twowaygym import oracle
from twowaygym.reductions.afa_simulation import dtm_to_narrow_afa
from twowaygym.reductions.dtm import (
    SpaceBoundedDTM, block_copy_dtm, immediate_accept_dtm, parity_dtm, run_dtm
)
from twowaygym.reductions.graph_reduction import legalize_indegree, nfa_to_graph
from twowaygym.reductions.solver import build_3dstcon_solver
from twowaygym.reductions.validator import build_graph_validator
from twowaygym.unary import build_unary_3dstcon_solver, compress_unary_afa
from twowaygym.utils import digest, fit_constants

logger = logging.getLogger(__name__)


@dataclass
class ExperimentManifest:
    """
    Record of one experiment. `digest()` covers everything but the timestamp, so two runs of
    the same pipeline with the same seed and version have equal digests.
    """

    command: str
    parameters: dict
    seed: T.Optional[int]
    input_digests: dict = field(default_factory=dict)
    version: str = TWOWAYGYM_VERSION
    outcome: dict = field(default_factory=dict)
    timestamp: str = ""
    manifest_version: int = MANIFEST_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        doc = self.to_dict()
        doc.pop("timestamp")
        return digest(doc)

    def save(self, pth: T.Union[str, Path]) -> None:
        doc = self.to_dict()
        doc["digest"] = self.digest()
        Path(pth).write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, pth: T.Union[str, Path]) -> "ExperimentManifest":
        doc = json.loads(Path(pth).read_text(encoding="utf-8"))
        doc.pop("digest", None)
        return cls(**doc)


# Named DTMs available to pipelines: (constructor, time bound in |x|, space bound)
DTMS: dict[str, tuple[T.Callable[[], SpaceBoundedDTM], T.Callable[[int], int], int]] = {
    "parity": (parity_dtm, lambda l: 2 * (l + 2), 2),
    "immediate-accept": (immediate_accept_dtm, lambda l: 2, 1),
    "block-copy": (block_copy_dtm, lambda l: l + 6, 2),
}


# Stage implementations: fn(ctx, params, rng, trial) -> digestible summary.
# `requires` are context slots a stage reads, `provides` the slots it writes.

@dataclass(frozen=True)
class Stage:

    name: str
    requires: tuple[str, ...]
    provides: tuple[str, ...]
    fn: T.Callable


STAGES: dict[str, Stage] = {}


def stage(name: str, requires: T.Sequence[str] = (), provides: T.Sequence[str] = ()):
    def register(fn):
        STAGES[name] = Stage(name, tuple(requires), tuple(provides), fn)
        return fn
    return register


@functools.lru_cache(maxsize=None)
def _solver(n: int) -> TwoWayAutomaton:
    return build_3dstcon_solver(n)


@functools.lru_cache(maxsize=None)
def _validator(n: int) -> TwoWayAutomaton:
    return build_graph_validator(n)


@functools.lru_cache(maxsize=None)
def _all_graphs(n: int, max_n: int) -> tuple[Digraph3, ...]:
    return tuple(oracle.enumerate_graphs(n, max_n=max_n))


@functools.lru_cache(maxsize=None)
def _unary_evaluator(n: int):
    return compress_unary_afa(build_unary_3dstcon_solver(n), n, emit_flat=False)


@functools.lru_cache(maxsize=None)
def _dtm_afa(name: str, length: int) -> TwoWayAutomaton:
    make, time_bound, space = DTMS[name]
    return dtm_to_narrow_afa(make(), ResourceBounds(time_bound(length), space), length)


def _graph_summary(G: Digraph3) -> str:
    return digest(format_edge_list(G))


@stage("random-graph", provides=("graph", "n"))
def _random_graph(ctx, params, rng, trial):
    G = oracle.random_graph(int(params["n"]), rng)
    ctx.update(graph=G, n=G.n)
    return _graph_summary(G)


@stage("enumerated-graph", provides=("graph", "n"))
def _enumerated_graph(ctx, params, rng, trial):
    graphs = _all_graphs(int(params["n"]), ctx["caps"].enumeration_max_n)
    G = graphs[trial % len(graphs)]
    ctx.update(graph=G, n=G.n)
    return _graph_summary(G)


@stage("random-nfa", provides=("machine", "word"))
def _random_nfa(ctx, params, rng, trial):
    M = oracle.random_simple_nfa(int(params.get("states", 4)), int(params.get("c", 3)), BINARY_ALPHABET, rng)
    x = oracle.random_word(BINARY_ALPHABET, int(params.get("max_len", 6)), rng)
    ctx.update(machine=M, word=x)
    return digest(automaton_to_json(M) + "|" + x)


@stage("dtm", provides=("dtm", "word", "bounds"))
def _dtm(ctx, params, rng, trial):
    name = params.get("name", "parity")
    if name not in DTMS:
        raise CompositionError(f"Unknown DTM {name!r}; choose from {sorted(DTMS)}.")
    make, time_bound, space = DTMS[name]
    D = make()
    x = params.get("word")
    if x is None:
        x = oracle.random_dtm_input(D, int(params.get("max_len", 6)), rng)
    ctx.update(dtm=D, dtm_name=name, word=x, bounds=ResourceBounds(time_bound(len(x)), space))
    return digest(f"{name}|{x}")


@stage("encode", requires=("graph",), provides=("word",))
def _encode(ctx, params, rng, trial):
    ctx["word"] = encode_graph(ctx["graph"])
    return digest(ctx["word"])


@stage("build-validator", requires=("n",), provides=("machine",))
def _build_validator(ctx, params, rng, trial):
    ctx["machine"] = _validator(ctx["n"])
    return len(ctx["machine"].states)


@stage("build-solver", requires=("n",), provides=("machine",))
def _build_solver(ctx, params, rng, trial):
    n = ctx["n"]
    if n > ctx["caps"].solver_max_n:
        raise CapExceededError(f"Solver size {n} exceeds the cap {ctx['caps'].solver_max_n}.", {"n": n})
    ctx["machine"] = _solver(n)
    return len(ctx["machine"].states)


@stage("nfa-to-graph", requires=("machine", "word"), provides=("graph", "n", "reduction"))
def _nfa_to_graph(ctx, params, rng, trial):
    out = nfa_to_graph(ctx["machine"], ctx["word"])
    if params.get("legalize"):
        out = legalize_indegree(out)
    G = out.as_instance()
    ctx.update(reduction=out, graph=G, n=G.n, legalize=bool(params.get("legalize")))
    return _graph_summary(G)


@stage("dtm-to-afa", requires=("dtm", "word", "bounds"), provides=("machine",))
def _dtm_to_afa(ctx, params, rng, trial):
    ctx["machine"] = _dtm_afa(ctx["dtm_name"], len(ctx["word"]))
    return len(ctx["machine"].states)


@stage("compress-unary", requires=("graph",), provides=("evaluator", "prime_text"))
def _compress_unary(ctx, params, rng, trial):
    G = ctx["graph"]
    G = G.without_edges([(0, 0)])
    ctx.update(evaluator=_unary_evaluator(G.n), prime_text=encode_graph_prime(G))
    return digest(ctx["prime_text"])


@stage("evaluate", provides=("verdict",))
def _evaluate(ctx, params, rng, trial):
    if "evaluator" in ctx:
        ctx["verdict"] = ctx["evaluator"](ctx["prime_text"])
        return ctx["verdict"]
    if "machine" not in ctx or "word" not in ctx:
        raise CompositionError("Stage 'evaluate' needs a machine and a word, or a unary evaluator.")
    ctx["evaluator_mode"] = params.get("evaluator")
    ctx["verdict"] = _machine_verdict(ctx["machine"], ctx["word"], ctx["evaluator_mode"])
    return ctx["verdict"]


def _machine_verdict(A: TwoWayAutomaton, x: str, mode: T.Optional[str] = None) -> bool:
    if not A.universal:
        return bool(accepts_nfa(A, x))
    if mode == "fixpoint":
        return accepts_afa_fixpoint(A, x)
    return evaluate_leveled(A, x)[0]


@stage("oracle-check", requires=("verdict",), provides=("oracle",))
def _oracle_check(ctx, params, rng, trial):
    if "dtm" in ctx:
        expected = run_dtm(ctx["dtm"], ctx["word"], ctx["bounds"].time_bound, ctx["bounds"].space_bound).accepted
    elif "graph" in ctx:
        G = ctx["graph"]
        expected = oracle.reach(G, 0, G.n - 1)
    elif ctx["machine"].universal:
        expected = oracle.afa_accept_bruteforce(ctx["machine"], ctx["word"])
    else:
        expected = oracle.nfa_accept_bruteforce(ctx["machine"], ctx["word"])
    ctx["oracle"] = expected
    if expected != ctx["verdict"]:
        raise OracleDisagreement(
            f"Trial {trial}: evaluator says {ctx['verdict']}, oracle says {expected}.",
            _counterexample(ctx, trial),
        )
    return expected


def _counterexample(ctx: dict, trial: int) -> dict:
    doc: dict = {"trial": trial, "verdict": ctx.get("verdict"), "oracle": ctx.get("oracle")}
    if "word" in ctx:
        doc["word"] = ctx["word"]
    if "graph" in ctx:
        doc["graph"] = format_edge_list(ctx["graph"])
    if "machine" in ctx:
        doc["machine"] = json.loads(automaton_to_json(ctx["machine"], indent=None))
    if "dtm_name" in ctx:
        doc["dtm"] = ctx["dtm_name"]
    minimized = _minimized(ctx)
    if minimized:
        doc["minimized"] = minimized
    return doc


def _still_disagrees(check: T.Callable[[T.Any], bool]) -> T.Callable[[T.Any], bool]:
    def disagrees(candidate) -> bool:
        try:
            return check(candidate)
        except TwoWayGymError:
            return False
    return disagrees


def _reach(G: Digraph3) -> bool:
    return oracle.reach(G, 0, G.n - 1)


def _reduced_reach(ctx: dict, x: str) -> bool:
    out = nfa_to_graph(ctx["machine"], x)
    if ctx.get("legalize"):
        out = legalize_indegree(out)
    return _reach(out.as_instance())


def _minimized(ctx: dict) -> dict:
    """
    Shrink the failing input of a trial while the evaluator and the oracle keep disagreeing.
    DTM trials are left as they are since their automaton is built for one input length.
    """
    if "dtm" in ctx:
        return {}
    if "evaluator" in ctx:
        G = minimize_graph_counterexample(ctx["graph"], _still_disagrees(
            lambda H: ctx["evaluator"](encode_graph_prime(H.without_edges([(0, 0)]))) != _reach(H)
        ))
        return {"graph": format_edge_list(G)}
    A, mode = ctx["machine"], ctx.get("evaluator_mode")
    if "reduction" in ctx:
        x = minimize_word_counterexample(ctx["word"], _still_disagrees(
            lambda y: _machine_verdict(A, y, mode) != _reduced_reach(ctx, y)
        ))
        return {"word": x}
    if "graph" in ctx:
        G = minimize_graph_counterexample(ctx["graph"], _still_disagrees(
            lambda H: _machine_verdict(A, encode_graph(H), mode) != _reach(H)
        ))
        return {"graph": format_edge_list(G), "word": encode_graph(G)}
    bruteforce = oracle.afa_accept_bruteforce if A.universal else oracle.nfa_accept_bruteforce
    x = minimize_word_counterexample(ctx["word"], _still_disagrees(
        lambda y: _machine_verdict(A, y, mode) != bruteforce(A, y)
    ))
    return {"word": x}


def check_stages(stages: T.Sequence[dict]) -> None:
    """
    Check that every stage exists and that the slots it reads are written by an earlier stage.

    Raises:
        CompositionError: on an unknown stage or a missing input slot.
    """
    available = set()
    for i, entry in enumerate(stages):
        name = entry.get("stage")
        if name not in STAGES:
            raise CompositionError(f"Stage {i} is unknown: {name!r}; choose from {sorted(STAGES)}.")
        missing = [slot for slot in STAGES[name].requires if slot not in available]
        if missing:
            raise CompositionError(f"Stage {i} ({name}) needs {missing}, which no earlier stage provides.")
        available.update(STAGES[name].provides)


def _run_stages(stages: T.Sequence[dict], seed: int, trial: int, caps: Caps) -> dict:
    rng = np.random.default_rng(seed)
    ctx: dict = {"caps": caps}
    trace = []
    for entry in stages:
        params = {k: v for k, v in entry.items() if k != "stage"}
        trace.append([entry["stage"], STAGES[entry["stage"]].fn(ctx, params, rng, trial)])
    return {
        "trial": trial,
        "trace_digest": digest(trace),
        "verdict": ctx.get("verdict"),
        "states": len(ctx["machine"].states) if "machine" in ctx else None,
    }


def _run_trial(args: tuple) -> dict:
    stages, seed, trial, caps = args
    try:
        return _run_stages(stages, seed, trial, caps)
    except OracleDisagreement as e:
        e.counterexample.update(seed=seed, stages=list(stages))
        return {"trial": trial, "disagreement": e.counterexample, "message": str(e)}


def trial_seeds(seed: int, trials: int) -> list[int]:
    """
    Independent per-trial seeds derived from the pipeline seed.
    """
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(trials)]


def run_pipeline(pipeline: dict, caps: T.Optional[Caps] = None, workers: int = 1) -> ExperimentManifest:
    """
    Run a pipeline description and summarize it in a manifest.

    Args:
        pipeline (dict): {"name": str, "seed": int, "trials": int, "stages": [{"stage": name, ...}]}.
            The seed is mandatory whenever there are stages.
        caps (Caps, optional): Size caps; loaded from the caps file by default.
        workers (int, optional): Worker processes for the trials.

    Raises:
        CompositionError: if the stages do not fit together.
        OracleDisagreement: on the first trial where an evaluator and its oracle disagree.
    """
    caps = caps or load_caps()
    stages = list(pipeline.get("stages", []))
    name = pipeline.get("name", "pipeline")
    manifest = ExperimentManifest(
        command=name,
        parameters={k: v for k, v in pipeline.items() if k not in ("seed", "name")},
        seed=pipeline.get("seed"),
        input_digests={"pipeline": digest({k: v for k, v in pipeline.items() if k != "name"})},
        timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(),
    )
    if not stages:
        manifest.outcome = {"trials": 0}
        return manifest
    check_stages(stages)
    if manifest.seed is None:
        raise CompositionError("Pipelines with stages need an explicit seed.")
    trials = int(pipeline.get("trials", 1))
    seeds = trial_seeds(int(manifest.seed), trials)
    results = oracle.run_trials(_run_trial, [(stages, s, i, caps) for i, s in enumerate(seeds)], workers)
    failures = [r for r in results if "disagreement" in r]
    if failures:
        first = min(failures, key=lambda r: r["trial"])
        raise OracleDisagreement(first["message"], first["disagreement"])
    verdicts = [r["verdict"] for r in results]
    states = [r["states"] for r in results if r["states"] is not None]
    manifest.outcome = {
        "trials": trials,
        "accepted": sum(v is True for v in verdicts),
        "rejected": sum(v is False for v in verdicts),
        "disagreements": 0,
        "max_states": max(states) if states else None,
        "trace_digest": digest(sorted((r["trial"], r["trace_digest"]) for r in results)),
    }
    logger.info("Pipeline %s: %d trials, %d accepted.", name, trials, manifest.outcome["accepted"])
    return manifest


def minimize_graph_counterexample(
    G: Digraph3, disagrees: T.Callable[[Digraph3], bool]
) -> Digraph3:
    """
    Greedily drop edges of `G` while `disagrees` keeps holding.
    """
    changed = True
    while changed:
        changed = False
        for e in G.edges():
            smaller = G.without_edges([e])
            if disagrees(smaller):
                G, changed = smaller, True
                break
    return G


def minimize_word_counterexample(x: str, disagrees: T.Callable[[str], bool]) -> str:
    """
    Greedily delete single symbols of `x` while `disagrees` keeps holding.
    """
    changed = True
    while changed:
        changed = False
        for i in range(len(x)):
            shorter = x[:i] + x[i + 1:]
            if disagrees(shorter):
                x, changed = shorter, True
                break
    return x


FAMILIES = ("validator", "solver", "unary-solver", "dtm-afa")
REPORT_COMMAND = "report"


def _build_family(family: str, n: int, caps: Caps) -> tuple[TwoWayAutomaton, dict]:
    if family == "validator":
        return build_graph_validator(n), {}
    if family in ("solver", "unary-solver") and n > caps.solver_max_n:
        raise CapExceededError(f"{family} size {n} exceeds the cap {caps.solver_max_n}.", {"n": n})
    if family == "solver":
        return build_3dstcon_solver(n), {}
    if family == "unary-solver":
        return build_unary_3dstcon_solver(n), {}
    if family == "dtm-afa":
        make, time_bound, space = DTMS["parity"]
        bounds = ResourceBounds(time_bound(n), space)
        A = dtm_to_narrow_afa(make(), bounds, n)
        narrowness = measure_narrowness(A, "1" * n)
        return A, {"narrowness": narrowness.width, "time_bound": bounds.time_bound, "space_bound": space}
    raise ValueError(f"Unknown family {family!r}; choose from {FAMILIES}.")


def report_state_complexity(
    ns: T.Iterable[int],
    family: str,
    caps: T.Optional[Caps] = None,
    dot_dir: T.Optional[T.Union[str, Path]] = None,
) -> tuple[pd.DataFrame, pd.DataFrame]:
    """
    State counts of one construction family over a range of sizes, with least-squares constants
    against n log n, n^2 log n and n^3 log n.

    Args:
        ns (Iterable[int]): Sizes; for "dtm-afa" the input length of the parity DTM.
        family (str): One of "validator", "solver", "unary-solver", "dtm-afa".
        caps (Caps, optional): Size caps; the table stops at the first size over a cap.
        dot_dir (str or Path, optional): Directory for DOT exports of every machine.

    Returns:
        tuple[pd.DataFrame, pd.DataFrame]: per-size table and fitted constants.
    """
    if family not in FAMILIES:
        raise ValueError(f"Unknown family {family!r}; choose from {FAMILIES}.")
    caps = caps or load_caps()
    rows = []
    for n in ns:
        try:
            A, extra = _build_family(family, n, caps)
        except CapExceededError as e:
            logger.warning("Stopping the %s table at n=%d: %s", family, n, e)
            break
        rows.append({"family": family, "n": n, "states": len(A.states), "branching": A.branching_bound, **extra})
        if dot_dir is not None:
            Path(dot_dir).mkdir(parents=True, exist_ok=True)
            automaton_to_dot(A).save(filename=f"{family}-{n}.dot", directory=str(dot_dir))
    table = pd.DataFrame(rows, columns=["family", "n", "states", "branching"] + (
        ["narrowness", "time_bound", "space_bound"] if family == "dtm-afa" else []
    ))
    fit = fit_constants(table["n"].tolist(), table["states"].tolist())
    return table, fit


def run_report(
    family: str,
    n_min: int,
    n_max: int,
    caps: T.Optional[Caps] = None,
    dot_dir: T.Optional[T.Union[str, Path]] = None,
) -> tuple[ExperimentManifest, pd.DataFrame, pd.DataFrame]:
    """
    `report_state_complexity` over n_min..n_max, recorded in a manifest that `replay_manifest`
    can reproduce. The report draws no random numbers, so its seed is 0.
    """
    caps = caps or load_caps()
    table, fit = report_state_complexity(range(n_min, n_max + 1), family, caps=caps, dot_dir=dot_dir)
    parameters = {"report": {"family": family, "n_min": n_min, "n_max": n_max}, "caps": asdict(caps)}
    manifest = ExperimentManifest(
        command=REPORT_COMMAND,
        parameters=parameters,
        seed=0,
        input_digests={"report": digest(parameters)},
        outcome={"rows": table.to_dict(orient="records"), "fit": fit.to_dict(orient="records")},
        timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(),
    )
    return manifest, table, fit


def replay_manifest(recorded: ExperimentManifest, caps: T.Optional[Caps] = None, workers: int = 1) -> ExperimentManifest:
    """
    Run a recorded pipeline or report again. Reports reuse the caps they were recorded with.
    """
    if recorded.command == REPORT_COMMAND and "report" in recorded.parameters:
        caps = Caps(**recorded.parameters["caps"])
        return run_report(**recorded.parameters["report"], caps=caps)[0]
    pipeline = {"name": recorded.command, "seed": recorded.seed, **recorded.parameters}
    return run_pipeline(pipeline, caps=caps, workers=workers)
