#!/usr/bin/env python3
"""
APGT sparse online estimation: Monte-Carlo MSE experiments and the
per-iteration scaling benchmark.

    python main.py --config experiment.cfg --realizations 20 --out run.csv
    python main.py --bench-dims 512,1024,2048,4096 --bench-sparsity 0.1 --window 64
"""

import argparse
import logging
import sys

from engine.oracles import OracleConvergenceError
from harness.bench import bench_linear_scaling
from harness.experiment import RealizationError, run_experiment
from thresholding.bridge import BridgeRootError
from utils.config_parser import (
    KEYS,
    ConfigError,
    bench_sparsity_ratio,
    build_experiment_config,
    merge_settings,
    parse_config_file,
)

# Set up custom logging with file details
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

# Create console handler
handler = logging.StreamHandler()
handler.setLevel(logging.INFO)

# Create formatter with file details in brackets
formatter = logging.Formatter('[%(filename)s:%(lineno)d] %(levelname)s: %(message)s')
handler.setFormatter(formatter)

# Add handler to logger
logger.addHandler(handler)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

HELP = {
    "dim": "ambient dimension L",
    "sparsity-true": "true sparsity K* of the generated vector",
    "sparsity-est": "sparsity estimate K used by the GT operator",
    "window": "number q of hyperslabs kept in the window",
    "rule": "shrinkage rule token, e.g. hard, scad:alpha=12, bridge:p=3",
    "lambda": "fixed threshold lambda (makes the rule fixed unless --adaptive true)",
    "alpha": "SCAD shape parameter",
    "p-extra": "extra components P of the adaptive bridge rule",
    "adaptive": "true|false, recompute lambda from the current estimate",
    "delta": "strict-shrinkage margin of the GT operator",
    "eps-mult": "hyperslab half-width as a multiple of sigma",
    "mu-scale": "step multiplier, mu_n = mu-scale * M_n",
    "eps-prime": "relaxation floor",
    "noise-var": "noise variance sigma^2",
    "iters": "stream length N",
    "realizations": "number of Monte-Carlo realizations",
    "seed": "base seed, realization i uses seed + i",
    "change-at": "iteration of the abrupt change of a*",
    "change-count": "coordinates of a* switched on at the change",
    "probes": "comma list: slab-distance, omega-distance, sparsity, theta-equivalence",
    "out": "CSV output path",
    "workers": "worker processes (default: all cores)",
    "bench-dims": "comma list of dimensions; runs the scaling benchmark instead",
    "bench-sparsity": "K/L ratio for the benchmark, e.g. 0.1 sets K* = K = L/10",
    "thresholds": "comma list of MSE thresholds for the summary",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="APGT online sparse estimation experiments")
    parser.add_argument("--config", help="key=value experiment file; flags override it")
    for key in KEYS:
        parser.add_argument(f"--{key}", dest=key.replace("-", "_"), default=None, help=HELP[key])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    try:
        file_settings = parse_config_file(args.config) if args.config else {}
        overrides = {key: getattr(args, key.replace("-", "_")) for key in KEYS}
        settings = merge_settings(file_settings, overrides)
        cfg, dims = build_experiment_config(settings)
        ratio = bench_sparsity_ratio(settings)
    except ConfigError as e:
        logger.error(f"❌ Configuration error: {e}")
        return EXIT_CONFIG

    try:
        if dims:
            bench_linear_scaling(cfg, dims, sparsity_ratio=ratio)
        else:
            run_experiment(cfg)
    except (RealizationError, BridgeRootError, OracleConvergenceError) as e:
        logger.error(f"❌ Run failed: {e}")
        return EXIT_RUNTIME
    except OSError as e:
        logger.error(f"❌ Could not write results: {e}")
        return EXIT_RUNTIME
    except Exception as e:
        logger.error(f"❌ Unexpected error: {type(e).__name__}: {e}")
        return EXIT_RUNTIME

    logger.info("✅ Done")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
