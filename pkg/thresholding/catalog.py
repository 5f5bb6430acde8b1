# thresholding/catalog.py

from typing import Optional

from thresholding.base import ShrinkageRule
from thresholding.bridge import BridgeHalf
from thresholding.hard import Hard
from thresholding.scad import Scad
from thresholding.soft import Soft

RULES = {
    "hard": Hard,
    "soft": Soft,
    "scad": Scad,
    "bridge": BridgeHalf,
}


def make_rule(
    name: str,
    lam: Optional[float] = None,
    alpha: Optional[float] = None,
    p: Optional[int] = None,
    adaptive: Optional[bool] = None,
) -> ShrinkageRule:
    """Build a rule by name.

    Without ``lam`` the rule is adaptive unless ``adaptive=False``; with
    ``lam`` it is fixed unless ``adaptive=True``.
    """
    key = name.strip().lower()
    if key not in RULES:
        raise ValueError(f"unknown shrinkage rule '{name}', expected one of {sorted(RULES)}")
    if adaptive is None:
        adaptive = lam is None
    kwargs = {"lam": 0.0 if lam is None else float(lam), "adaptive": adaptive}

    if alpha is not None:
        if key != "scad":
            raise ValueError(f"alpha only applies to scad, not {key}")
        kwargs["alpha"] = float(alpha)
    if p is not None:
        if key != "bridge":
            raise ValueError(f"p only applies to bridge, not {key}")
        kwargs["p"] = int(p)
    return RULES[key](**kwargs)
