"""
Command-line entry point `twowaygym`.

Exit codes: 0 on success, 2 on malformed input, 3 when an evaluator and an oracle disagree,
1 on any other error of the package.
"""
import argparse
import json
import logging
import sys
import typing as T
from pathlib import Path

from twowaygym.automata.dot import automaton_to_dot, computation_graph_to_dot
from twowaygym.automata.evaluators import (
    accepts_afa_fixpoint, accepts_nfa, evaluate_leveled, measure_narrowness
)
from twowaygym.automata.machine import ResourceBounds, validate_automaton
from twowaygym.automata.serialization import load_automaton, save_automaton
from twowaygym.codecs.graph import decode_graph, encode_graph, format_edge_list, parse_edge_list
from twowaygym.codecs.machine import encode_automaton
from twowaygym.codecs.prime import UnaryWord, decode_graph_prime, encode_graph_prime, encode_graph_unary
from twowaygym.codecs.strings import decode_quaternary, encode_quaternary
from twowaygym.config import Caps, load_caps
from twowaygym.definitions import TWOWAYGYM_COUNTEREXAMPLES_DIR
from twowaygym.errors import FormatError, OracleDisagreement, TwoWayGymError, ValidationError
from twowaygym.pipeline import DTMS, ExperimentManifest, FAMILIES, replay_manifest, run_pipeline, run_report
from twowaygym.reductions.afa_simulation import dtm_to_narrow_afa
from twowaygym.reductions.graph_reduction import legalize_indegree, nfa_to_graph
from twowaygym.reductions.solver import build_3dstcon_solver
from twowaygym.reductions.validator import build_graph_validator
from twowaygym.unary import (
    build_unary_3dstcon_solver, compress_unary_afa, rho_decompose, run_unary
)
from twowaygym.utils import canonical_json, digest, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FORMAT = 2
EXIT_DISAGREEMENT = 3

# Pipelines behind `fuzz --target`
FUZZ_TARGETS = {
    "solver": lambda args: [
        {"stage": "random-graph", "n": args.n}, {"stage": "encode"}, {"stage": "build-solver"},
        {"stage": "evaluate"}, {"stage": "oracle-check"},
    ],
    "reduction": lambda args: [
        {"stage": "random-nfa", "states": args.states, "c": 3, "max_len": args.max_len},
        {"stage": "evaluate"}, {"stage": "nfa-to-graph"}, {"stage": "oracle-check"},
    ],
    "dtm-afa": lambda args: [
        {"stage": "dtm", "name": args.dtm, "max_len": args.max_len}, {"stage": "dtm-to-afa"},
        {"stage": "evaluate"}, {"stage": "oracle-check"},
    ],
    "unary": lambda args: [
        {"stage": "random-graph", "n": args.n}, {"stage": "compress-unary"}, {"stage": "evaluate"},
        {"stage": "oracle-check"},
    ],
}


def _read_text(value: T.Optional[str], pth: T.Optional[str]) -> str:
    if value is not None:
        return value
    if pth is None or pth == "-":
        return sys.stdin.read().strip()
    return Path(pth).read_text(encoding="utf-8").strip()


def _emit(args: argparse.Namespace, record: dict, text: T.Optional[str] = None) -> None:
    if args.format == "json":
        print(canonical_json(record))
    else:
        print(text if text is not None else "\n".join(f"{k}: {v}" for k, v in record.items()))


def _caps(args: argparse.Namespace) -> Caps:
    return load_caps(
        args.caps,
        enumeration_max_n=args.cap_enumeration_max_n,
        unary_materialization_cap=args.cap_unary_materialization,
        flat_emission_cap=args.cap_flat_emission,
        transducer_state_cap=args.cap_transducer_states,
        solver_max_n=args.cap_solver_max_n,
    )


def _machine_summary(A) -> dict:
    report = validate_automaton(A, allow_stationary=True)
    return {
        "name": A.name,
        "kind": A.kind,
        "states": report.state_count,
        "branching": report.branching_bound,
        "simple": report.is_simple,
        "deterministic": report.is_deterministic,
    }


def cmd_encode(args: argparse.Namespace) -> int:
    text = _read_text(args.text, args.input)
    if args.kind == "quaternary":
        out = encode_quaternary(text)
    elif args.kind == "graph":
        G = parse_edge_list(text)
        if args.scheme == "binary":
            out = encode_graph(G)
        elif args.scheme == "prime":
            out = encode_graph_prime(G)
        else:
            out = str(encode_graph_unary(G))
    else:
        out = encode_automaton(load_automaton(args.input))
    _emit(args, {"kind": args.kind, "encoding": out}, out)
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    text = _read_text(args.text, args.input)
    if args.kind == "quaternary":
        out = decode_quaternary(text)
    elif args.kind == "prime":
        if args.n is None:
            raise FormatError("Decoding a prime encoding needs --n.", "prime blocks")
        out = format_edge_list(decode_graph_prime(text, args.n))
    else:
        out = format_edge_list(decode_graph(text, args.n))
    _emit(args, {"kind": args.kind, "decoded": out}, out.rstrip("\n"))
    return EXIT_OK


def _build(args: argparse.Namespace):
    if args.family == "validator":
        return build_graph_validator(args.n)
    if args.family == "solver":
        return build_3dstcon_solver(args.n)
    if args.family == "unary-solver":
        return build_unary_3dstcon_solver(args.n)
    make, time_bound, space = DTMS[args.dtm]
    bounds = ResourceBounds(args.time_bound or time_bound(args.n), args.space_bound or space)
    return dtm_to_narrow_afa(make(), bounds, args.n)


def cmd_build(args: argparse.Namespace) -> int:
    A = _build(args)
    if args.out:
        save_automaton(A, args.out)
    _emit(args, _machine_summary(A))
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    A = load_automaton(args.machine)
    if args.evaluator == "auto":
        evaluator = "nfa" if not A.universal else "leveled"
    else:
        evaluator = args.evaluator
    if evaluator == "nfa":
        verdict = bool(accepts_nfa(A, args.word))
    elif evaluator == "fixpoint":
        verdict = accepts_afa_fixpoint(A, args.word)
    else:
        verdict, _ = evaluate_leveled(A, args.word, args.depth_bound)
    _emit(args, {"machine": A.name, "word": args.word, "evaluator": evaluator, "accepted": verdict},
          "accept" if verdict else "reject")
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    out = nfa_to_graph(load_automaton(args.machine), args.word)
    if args.legalize:
        out = legalize_indegree(out)
    doc = out.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    _emit(args, {
        "vertices": out.graph.n,
        "edges": len(out.graph.edges()),
        "source": out.source,
        "target": out.target,
        "degree_violations": len(out.degree_violations),
    })
    return EXIT_OK


def cmd_measure(args: argparse.Namespace) -> int:
    A = load_automaton(args.machine)
    report = measure_narrowness(A, args.word, args.depth_bound)
    _emit(args, {
        "machine": A.name,
        "word": args.word,
        "width": report.width,
        "leveled": report.leveled,
        "mixed_levels": list(report.mixed_levels),
        "universal_width": report.universal_width,
        **_machine_summary(A),
    })
    return EXIT_OK


def _finish_pipeline(args: argparse.Namespace, pipeline: dict) -> int:
    try:
        manifest = run_pipeline(pipeline, caps=_caps(args), workers=args.workers)
    except OracleDisagreement as e:
        out_dir = Path(args.counterexample_dir or TWOWAYGYM_COUNTEREXAMPLES_DIR)
        out_dir.mkdir(parents=True, exist_ok=True)
        pth = out_dir / f"{pipeline.get('name', 'pipeline')}-{digest(e.counterexample)[:12]}.json"
        pth.write_text(json.dumps(e.counterexample, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        logger.error("%s Counterexample written to %s.", e, pth)
        return EXIT_DISAGREEMENT
    if args.manifest:
        manifest.save(args.manifest)
    _emit(args, {**manifest.outcome, "digest": manifest.digest()})
    return EXIT_OK


def cmd_fuzz(args: argparse.Namespace) -> int:
    pipeline = {
        "name": f"fuzz-{args.target}",
        "seed": args.seed,
        "trials": args.trials,
        "stages": FUZZ_TARGETS[args.target](args),
    }
    return _finish_pipeline(args, pipeline)


def cmd_verify(args: argparse.Namespace) -> int:
    if args.replay:
        recorded = ExperimentManifest.load(args.replay)
        manifest = replay_manifest(recorded, caps=_caps(args), workers=args.workers)
        same = manifest.digest() == recorded.digest()
        _emit(args, {"replayed": args.replay, "reproduced": same, "digest": manifest.digest()})
        return EXIT_OK if same else EXIT_ERROR
    if args.pipeline is None:
        raise FormatError("verify needs a pipeline file or --replay.", "arguments")
    pipeline = json.loads(Path(args.pipeline).read_text(encoding="utf-8"))
    return _finish_pipeline(args, pipeline)


def cmd_report(args: argparse.Namespace) -> int:
    manifest, table, fit = run_report(args.family, args.n_min, args.n_max, caps=_caps(args), dot_dir=args.dot_dir)
    if args.csv:
        table.to_csv(args.csv, index=False)
    if args.format == "json":
        for row in table.to_dict(orient="records"):
            print(canonical_json(row))
        for row in fit.to_dict(orient="records"):
            print(canonical_json(row))
    else:
        print(table.to_string(index=False))
        print()
        print(fit.to_string(index=False))
    if args.manifest:
        manifest.save(args.manifest)
    return EXIT_OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    A = load_automaton(args.machine)
    if args.word is None:
        dot = automaton_to_dot(A)
    else:
        _, graph = evaluate_leveled(A, args.word, args.depth_bound)
        dot = computation_graph_to_dot(A, graph)
    Path(args.out).write_text(dot.source, encoding="utf-8")
    _emit(args, {"machine": A.name, "out": args.out})
    return EXIT_OK


def cmd_unary(args: argparse.Namespace) -> int:
    M = build_unary_3dstcon_solver(args.n)
    if args.unary_cmd == "solve":
        e = UnaryWord.parse(args.length)
        verdict = run_unary(M, e)
        _emit(args, {"n": args.n, "length": str(e), "accepted": verdict}, "accept" if verdict else "reject")
    elif args.unary_cmd == "compress":
        evaluator = compress_unary_afa(M, args.n, emit_flat=args.flat, cap=_caps(args).flat_emission_cap)
        text = _read_text(args.text, args.input)
        verdict = evaluator(text)
        if args.out and evaluator.flat is not None:
            save_automaton(evaluator.flat, args.out)
        _emit(args, {"n": args.n, "accepted": verdict, **evaluator.report})
    else:
        states = [args.state] if args.state else list(M.states)
        for q in states:
            if q in M.halting:
                continue
            rho = rho_decompose(M, q)
            _emit(args, {"start": q, "tail": len(rho.tail), "cycle": rho.cycle_length, "halted": rho.halted})
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--caps", type=str, default=None, help="Path to a caps JSON file.")
    p.add_argument("--cap-enumeration-max-n", type=int, default=None)
    p.add_argument("--cap-unary-materialization", type=int, default=None)
    p.add_argument("--cap-flat-emission", type=int, default=None)
    p.add_argument("--cap-transducer-states", type=int, default=None)
    p.add_argument("--cap-solver-max-n", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twowaygym", description="Two-way finite automata workbench.")
    sub = parser.add_subparsers(dest="command", required=True)

    # Codecs
    p = sub.add_parser("encode", help="Encode a string, an edge list or a machine.")
    p.add_argument("--kind", choices=["quaternary", "graph", "machine"], required=True)
    p.add_argument("--scheme", choices=["binary", "prime", "unary"], default="binary")
    p.add_argument("--text", type=str, default=None)
    p.add_argument("--input", type=str, default=None)
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("decode", help="Decode a quaternary string or a graph encoding.")
    p.add_argument("--kind", choices=["quaternary", "graph", "prime"], required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--text", type=str, default=None)
    p.add_argument("--input", type=str, default=None)
    p.set_defaults(fn=cmd_decode)

    # Builders and evaluators
    p = sub.add_parser("build", help="Build a machine family member.")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True, help="Graph size, or input length for dtm-afa.")
    p.add_argument("--dtm", choices=sorted(DTMS), default="parity")
    p.add_argument("--time-bound", type=int, default=None)
    p.add_argument("--space-bound", type=int, default=None)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(fn=cmd_build)

    for name, fn, description in [
        ("run", cmd_run, "Decide a word with a machine."),
        ("measure", cmd_measure, "Measure the narrowness of a machine on a word."),
        ("export-dot", cmd_export_dot, "Export a machine or its computation graph as DOT."),
    ]:
        p = sub.add_parser(name, help=description)
        p.add_argument("--machine", type=str, required=True)
        p.add_argument("--word", type=str, default="" if name != "export-dot" else None)
        p.add_argument("--depth-bound", type=int, default=None)
        if name == "run":
            p.add_argument("--evaluator", choices=["auto", "nfa", "fixpoint", "leveled"], default="auto")
        if name == "export-dot":
            p.add_argument("--out", type=str, required=True)
        p.set_defaults(fn=fn)

    p = sub.add_parser("reduce", help="Reduce a simple 2nfa and a word to a reachability instance.")
    p.add_argument("--machine", type=str, required=True)
    p.add_argument("--word", type=str, default="")
    p.add_argument("--legalize", action="store_true")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(fn=cmd_reduce)

    # Campaigns
    for name, fn in [("fuzz", cmd_fuzz), ("verify", cmd_verify)]:
        p = sub.add_parser(name)
        if name == "fuzz":
            p.add_argument("--target", choices=sorted(FUZZ_TARGETS), required=True)
            p.add_argument("--seed", type=int, required=True)
            p.add_argument("--trials", type=int, default=100)
            p.add_argument("--n", type=int, default=4)
            p.add_argument("--states", type=int, default=4)
            p.add_argument("--max-len", type=int, default=6)
            p.add_argument("--dtm", choices=sorted(DTMS), default="parity")
        else:
            p.add_argument("pipeline", nargs="?", default=None, help="Pipeline description (JSON).")
            p.add_argument("--replay", type=str, default=None, help="Manifest to reproduce.")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--manifest", type=str, default=None)
        p.add_argument("--counterexample-dir", type=str, default=None)
        p.set_defaults(fn=fn)

    p = sub.add_parser("report", help="State-complexity table of a construction family.")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--csv", type=str, default=None)
    p.add_argument("--dot-dir", type=str, default=None)
    p.add_argument("--manifest", type=str, default=None)
    p.set_defaults(fn=cmd_report)

    # Unary constructions
    p = sub.add_parser("unary", help="Unary solver, prime-input evaluation and sweep decomposition.")
    usub = p.add_subparsers(dest="unary_cmd", required=True)
    u = usub.add_parser("solve")
    u.add_argument("--length", type=str, required=True, help="Decimal length or factor list like 2*3*5.")
    u = usub.add_parser("compress")
    u.add_argument("--text", type=str, default=None)
    u.add_argument("--input", type=str, default=None)
    u.add_argument("--flat", action="store_true")
    u.add_argument("--out", type=str, default=None)
    u = usub.add_parser("rho")
    u.add_argument("--state", type=str, default=None)
    for u in usub.choices.values():
        u.add_argument("--n", type=int, required=True)
        _add_common(u)
    p.set_defaults(fn=cmd_unary)

    for name, p in sub.choices.items():
        if name != "unary":
            _add_common(p)
    return parser


def main(argv: T.Optional[T.Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.fn(args)
    except (FormatError, ValidationError) as e:
        logger.error("%s", e)
        return EXIT_FORMAT
    except OracleDisagreement as e:
        logger.error("%s", e)
        return EXIT_DISAGREEMENT
    except TwoWayGymError as e:
        logger.error("%s", e)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
