import argparse
import datetime
import json
import logging
from pathlib import Path

import pandas as pd

import twowaygym.utils as utils
from twowaygym.cli import FUZZ_TARGETS
from twowaygym.config import load_caps
from twowaygym.definitions import TWOWAYGYM_COUNTEREXAMPLES_DIR, TWOWAYGYM_RESULTS_DIR
from twowaygym.errors import OracleDisagreement
from twowaygym.pipeline import DTMS, FAMILIES, run_pipeline, run_report


logger = logging.getLogger("twowaygym.scripts.run")


parser = argparse.ArgumentParser()

# Experiment setup
parser.add_argument('--run_name', type=str, required=True)
parser.add_argument('--seed', type=int, default=0)
parser.add_argument('--workers', type=int, default=1)
parser.add_argument('--verbose', action='store_true')
parser.add_argument('--out_dir', type=Path, default=None)

# Campaign
parser.add_argument('--campaign', type=str, choices=['fuzz', 'report'], required=True)
parser.add_argument('--trials', type=int, default=1000)
parser.add_argument('--targets', type=str, default='solver,reduction,dtm-afa,unary',
    help='Comma-separated fuzz targets.')

# - Sizes
parser.add_argument('--n', type=int, default=4)
parser.add_argument('--states', type=int, default=4)
parser.add_argument('--max_len', type=int, default=6)
parser.add_argument('--dtm', type=str, choices=sorted(DTMS), default='parity')

# - Report
parser.add_argument('--families', type=str, default=','.join(FAMILIES))
parser.add_argument('--n_min', type=int, default=2)
parser.add_argument('--n_max', type=int, default=8)

# Caps
parser.add_argument('--caps', type=str, default=None)
parser.add_argument('--solver_max_n', type=int, default=None)


def main(args):
    utils.setup_logging(args.verbose)
    caps = load_caps(args.caps, solver_max_n=args.solver_max_n)

    # Get current time
    now_formatted = datetime.datetime.now().strftime("%Y-%m-%d_%H-%M-%S")
    out_dir = args.out_dir or TWOWAYGYM_RESULTS_DIR / f"{args.run_name}_{now_formatted}"
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.campaign == 'fuzz':
        rows = []
        for target in args.targets.strip().replace(' ', '').split(','):
            pipeline = {
                'name': f"{args.run_name}-{target}",
                'seed': args.seed,
                'trials': args.trials,
                'stages': FUZZ_TARGETS[target](args),
            }
            try:
                manifest = run_pipeline(pipeline, caps=caps, workers=args.workers)
            except OracleDisagreement as e:
                TWOWAYGYM_COUNTEREXAMPLES_DIR.mkdir(parents=True, exist_ok=True)
                pth = TWOWAYGYM_COUNTEREXAMPLES_DIR / f"{pipeline['name']}-{utils.digest(e.counterexample)[:12]}.json"
                pth.write_text(json.dumps(e.counterexample, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
                logger.error("%s Counterexample written to %s.", e, pth)
                rows.append({'target': target, 'disagreements': 1})
                continue
            manifest.save(out_dir / f"{target}_manifest.json")
            rows.append({'target': target, **manifest.outcome})
        summary = pd.DataFrame(rows)
        summary.to_csv(out_dir / "fuzz_summary.csv", index=False)
        print(summary.to_string(index=False))
    else:
        for family in args.families.strip().replace(' ', '').split(','):
            manifest, table, fit = run_report(family, args.n_min, args.n_max, caps=caps, dot_dir=out_dir / "dot")
            manifest.save(out_dir / f"{family}_manifest.json")
            table.to_csv(out_dir / f"{family}_states.csv", index=False)
            fit.to_csv(out_dir / f"{family}_fit.csv", index=False)
            print(table.to_string(index=False))
            print(fit.to_string(index=False))


if __name__ == "__main__":
    args = parser.parse_args([] if "__file__" not in globals() else None)
    main(args)
