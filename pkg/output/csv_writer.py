# output/csv_writer.py
import logging
from pathlib import Path

import pandas as pd

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
handler = logging.StreamHandler()
formatter = logging.Formatter('[%(filename)s:%(lineno)d] %(levelname)s: %(message)s')
handler.setFormatter(formatter)
logger.addHandler(handler)

FORMAT_VERSION = "1"
FLOAT_FORMAT = "%.17g"


def metadata_lines(metadata: list[tuple[str, str]]) -> list[str]:
    return [f"# {key}={value}" for key, value in metadata]


def write_csv(path, frame: pd.DataFrame, metadata: list[tuple[str, str]]) -> Path:
    """
    Write ``#`` metadata lines followed by the frame as UTF-8 with LF endings.

    Reals use 17 significant digits so every 64-bit float reads back exactly.
    """
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w", encoding="utf-8", newline="") as f:
        for line in metadata_lines([("format_version", FORMAT_VERSION)] + list(metadata)):
            f.write(line + "\n")
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

    logger.info(f"✅ Wrote {len(frame)} rows to {path}")
    return path


def read_csv(path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#", float_precision="round_trip")
