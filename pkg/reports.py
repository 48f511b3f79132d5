"""
Machine-readable output for the command-line tool.
JSON documents with 17 significant digits and CSV sweeps written through pandas.
"""
import json
import math
from dataclasses import asdict, is_dataclass
from typing import IO, Any, Sequence

import numpy as np
import pandas as pd

FLOAT_FORMAT = "%.17g"


def to_jsonable(value: Any) -> Any:
    """Plain JSON structure: complex as [re, im], non-finite reals as None."""
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def _encode(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, list):
        return "[" + ", ".join(_encode(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(document: Any) -> str:
    """Single JSON document, floats at 17 significant digits."""
    return _encode(to_jsonable(document))


def write_json(document: Any, stream: IO[str]) -> None:
    stream.write(dumps(document))
    stream.write("\n")


def write_csv(rows: Sequence[dict], stream: IO[str], columns: Sequence[str]) -> None:
    """Header line, one row per record, LF endings, '.' decimals."""
    frame = pd.DataFrame(list(rows), columns=list(columns))
    frame.to_csv(stream, index=False, lineterminator="\n", float_format=FLOAT_FORMAT)
