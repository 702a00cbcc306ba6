"""JSON report serialization.

Complex numbers serialize as {"re": ..., "im": ...}; numpy scalars and
arrays become plain Python values. Keys are sorted so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return {"re": c.real, "im": c.imag}
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    if dataclasses.is_dataclass(obj):
        return to_jsonable(dataclasses.asdict(obj))
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)


def write_json(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps(obj))
        fh.write("\n")


def write_complex_csv(values, path, header="re,im"):
    """CSV of complex values, one 're,im' pair per row."""
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for v in values:
            c = complex(v)
            fh.write(f"{c.real!r},{c.imag!r}\n")


def write_matrix_csv(matrix, path):
    """Row-major CSV of a complex matrix; each entry written as re,im pair."""
    with open(path, "w") as fh:
        for row in np.asarray(matrix):
            fh.write(",".join(f"{complex(v).real!r},{complex(v).imag!r}" for v in row))
            fh.write("\n")
