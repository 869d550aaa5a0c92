# backend/utils/file_handlers.py
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional

import pandas as pd

from core.exceptions import OutputPathError

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


def write_output(text: str, out_path: Optional[str] = None) -> None:
    """Write text to stdout or to out_path as UTF-8 with LF line endings"""
    if not text.endswith("\n"):
        text += "\n"
    if out_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    directory = os.path.dirname(os.path.abspath(out_path))
    if not os.path.isdir(directory):
        raise OutputPathError(f"output directory does not exist: {directory}")
    try:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as exc:
        raise OutputPathError(f"cannot write {out_path}: {exc.strerror or exc}") from exc
    logger.info("wrote %d bytes to %s", len(text.encode("utf-8")), out_path)


def frame_to_csv(df: pd.DataFrame) -> str:
    """CSV text with 17 significant digits and empty cells for missing values"""
    return df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n", na_rep="")


def lines_to_text(lines: List[str]) -> str:
    return "\n".join(lines) + "\n"


def dict_to_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, default=str) + "\n"


def load_phase_csv(path: str) -> pd.DataFrame:
    """Read a phase CSV back, keeping 'class' as text and 'param' as float"""
    return pd.read_csv(path, dtype={"class": str, "param": float}, float_precision="round_trip")
