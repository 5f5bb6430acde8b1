"""
Parsing of experiment files, CLI overrides, rule tokens and comma lists
"""

import logging
from typing import Callable, Optional

import config
from core.model import AlgoParams
from engine.runner import ProbeConfig
from harness.experiment import ExperimentConfig
from scenarios.generator import ScenarioConfig
from thresholding.base import ShrinkageRule
from thresholding.catalog import RULES, make_rule

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
handler = logging.StreamHandler()
formatter = logging.Formatter('[%(filename)s:%(lineno)d] %(levelname)s: %(message)s')
handler.setFormatter(formatter)
logger.addHandler(handler)

# Keys accepted in experiment files; CLI flags are the same names with "--"
KEYS = (
    "dim", "sparsity-true", "sparsity-est", "window", "rule", "lambda", "alpha",
    "p-extra", "adaptive", "delta", "eps-mult", "mu-scale", "eps-prime", "noise-var",
    "iters", "realizations", "seed", "change-at", "change-count", "probes", "out",
    "workers", "bench-dims", "bench-sparsity", "thresholds",
)

RULE_KEYS = ("lambda", "alpha", "p", "adaptive")


class ConfigError(ValueError):
    """Unknown key, malformed value or invalid parameter combination."""


def parse_list(text: str, cast: Callable = float, name: str = "list") -> list:
    """
    Parse a comma-separated string into a list of values

    Args:
        text: String like "0.1" or "0.1, 0.01,0.001"
        cast: Conversion applied to every item
        name: Setting name used in error messages

    Returns:
        List of converted values; an empty string gives []

    Examples:
        >>> parse_list("0.1,0.01")
        [0.1, 0.01]
        >>> parse_list("512, 1024", int)
        [512, 1024]
        >>> parse_list("")
        []
    """
    if text is None or not text.strip():
        return []
    try:
        return [cast(x.strip()) for x in text.split(",") if x.strip()]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid {name} list '{text}': {e}") from e


def parse_dims(text: str) -> list[int]:
    """
    Parse benchmark dimensions

    Examples:
        >>> parse_dims("512,1024,2048")
        [512, 1024, 2048]
    """
    dims = parse_list(text, int, "bench-dims")
    if any(d < 2 for d in dims):
        raise ConfigError(f"all bench dimensions must be >= 2, got {dims}")
    if len(dims) < 2 or any(b <= a for a, b in zip(dims, dims[1:])):
        raise ConfigError(f"bench-dims needs at least two strictly ascending values, got {dims}")
    return dims


def parse_bool(text: str, name: str = "flag") -> bool:
    value = str(text).strip().lower()
    if value in ("true", "yes", "1", "on"):
        return True
    if value in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"invalid boolean for {name}: '{text}'")


def parse_config_file(path) -> dict[str, str]:
    """
    Read a flat key=value file

    Blank lines and lines starting with "#" are ignored. Unknown or repeated
    keys raise ConfigError.
    """
    settings = {}
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e

    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got '{line}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        if key in settings:
            raise ConfigError(f"{path}:{lineno}: duplicate key '{key}'")
        settings[key] = value

    logger.info(f"📊 Loaded {len(settings)} settings from {path}")
    return settings


def parse_rule(
    token: str,
    lam: Optional[str] = None,
    alpha: Optional[str] = None,
    p: Optional[str] = None,
    adaptive: Optional[str] = None,
) -> ShrinkageRule:
    """
    Build a shrinkage rule from a token like "scad:alpha=12" or "bridge:p=3,adaptive=true"

    Explicit ``lam``/``alpha``/``p``/``adaptive`` values (the --lambda,
    --alpha, --p-extra and --adaptive settings) override the token's own.
    scad defaults to alpha=SCAD_ALPHA and bridge to p=BRIDGE_P.

    Examples:
        >>> parse_rule("hard").adaptive
        True
        >>> parse_rule("soft:lambda=0.05").adaptive
        False
        >>> parse_rule("bridge:p=3").p
        3
    """
    name, _, body = token.strip().partition(":")
    name = name.strip().lower()
    if name not in RULES:
        raise ConfigError(f"unknown rule '{name}', expected one of {sorted(RULES)}")

    fields = {}
    for item in (x.strip() for x in body.split(",")):
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip().lower()
        if not sep or key not in RULE_KEYS:
            raise ConfigError(f"invalid rule parameter '{item}' in '{token}'")
        fields[key] = value.strip()

    for key, override in (("lambda", lam), ("alpha", alpha), ("p", p), ("adaptive", adaptive)):
        if override is not None and str(override).strip() != "":
            fields[key] = str(override).strip()

    if name == "scad":
        fields.setdefault("alpha", str(config.SCAD_ALPHA))
    if name == "bridge":
        fields.setdefault("p", str(config.BRIDGE_P))

    try:
        return make_rule(
            name,
            lam=float(fields["lambda"]) if "lambda" in fields else None,
            alpha=float(fields["alpha"]) if "alpha" in fields else None,
            p=int(fields["p"]) if "p" in fields else None,
            adaptive=parse_bool(fields["adaptive"], "adaptive") if "adaptive" in fields else None,
        )
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"invalid rule '{token}': {e}") from e


def parse_probes(text: str) -> ProbeConfig:
    """
    Parse a probe list like "slab-distance,sparsity"

    Examples:
        >>> parse_probes("sparsity").names()
        ['sparsity']
    """
    try:
        return ProbeConfig.from_names(parse_list(text, str, "probes"))
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _optional_int(value: str) -> Optional[int]:
    value = value.strip()
    if value == "" or value.lower() == "none":
        return None
    return int(value)


def default_settings() -> dict[str, str]:
    return {
        "dim": str(config.DIM),
        "sparsity-true": str(config.SPARSITY_TRUE),
        "sparsity-est": str(config.SPARSITY_EST),
        "window": str(config.WINDOW),
        "rule": config.RULE,
        "delta": repr(config.DELTA),
        "eps-mult": repr(config.EPS_MULT),
        "mu-scale": repr(config.MU_SCALE),
        "eps-prime": repr(config.EPS_PRIME),
        "noise-var": repr(config.NOISE_VAR),
        "iters": str(config.ITERS),
        "realizations": str(config.REALIZATIONS),
        "seed": str(config.SEED),
        "change-at": "" if config.CHANGE_AT is None else str(config.CHANGE_AT),
        "change-count": str(config.CHANGE_COUNT),
        "probes": config.PROBES,
        "out": config.OUT,
        "workers": "" if config.WORKERS is None else str(config.WORKERS),
        "thresholds": config.MSE_THRESHOLDS,
        "bench-sparsity": "" if config.BENCH_SPARSITY is None else repr(config.BENCH_SPARSITY),
    }


def bench_sparsity_ratio(settings: dict[str, str]) -> Optional[float]:
    """K/L ratio for the scaling benchmark, or None to keep K* and K fixed."""
    text = settings.get("bench-sparsity", "").strip()
    if text == "" or text.lower() == "none":
        return None
    try:
        ratio = float(text)
    except ValueError as e:
        raise ConfigError(f"bench-sparsity must be a number, got '{text}'") from e
    if not 0.0 < ratio < 1.0:
        raise ConfigError(f"bench-sparsity must lie in (0, 1), got {ratio}")
    return ratio


def merge_settings(file_settings: dict, overrides: dict) -> dict[str, str]:
    """Defaults, then file values, then CLI overrides (None means not given)."""
    merged = default_settings()
    for source in (file_settings, overrides):
        for key, value in source.items():
            if key not in KEYS:
                raise ConfigError(f"unknown key '{key}'")
            if value is not None:
                merged[key] = str(value)
    return merged


def build_experiment_config(settings: dict[str, str]) -> tuple[ExperimentConfig, Optional[list[int]]]:
    """
    Turn merged settings into an ExperimentConfig

    Returns:
        (config, bench dims or None when no benchmark was requested)
    """
    unknown = sorted(set(settings) - set(KEYS))
    if unknown:
        raise ConfigError(f"unknown keys: {unknown}")
    s = {**default_settings(), **settings}

    try:
        scenario = ScenarioConfig(
            L=int(s["dim"]),
            K_star=int(s["sparsity-true"]),
            sigma2=float(s["noise-var"]),
            N=int(s["iters"]),
            seed=int(s["seed"]),
            change_at=_optional_int(s["change-at"]),
            change_count=int(s["change-count"]),
        )
        rule = parse_rule(
            s["rule"],
            lam=s.get("lambda"),
            alpha=s.get("alpha"),
            p=s.get("p-extra"),
            adaptive=s.get("adaptive"),
        )
        algo = AlgoParams(
            K=int(s["sparsity-est"]),
            q=int(s["window"]),
            rule=rule,
            eps_prime=float(s["eps-prime"]),
            mu_scale=float(s["mu-scale"]),
            delta=float(s["delta"]),
        )
        experiment = ExperimentConfig(
            scenario=scenario,
            algo=algo,
            eps_multiplier=float(s["eps-mult"]),
            realizations=int(s["realizations"]),
            probes=parse_probes(s["probes"]),
            output_path=s["out"],
            workers=_optional_int(s["workers"]),
            thresholds=tuple(parse_list(s["thresholds"], float, "thresholds")),
        )
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from e

    dims = parse_dims(s["bench-dims"]) if s.get("bench-dims") else None
    return experiment, dims
