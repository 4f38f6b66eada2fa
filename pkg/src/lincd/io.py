"""File formats: JSON documents and per-context CSV directories."""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .model import LatentModel, PrecisionSet

CSV_FMT = "%.17g"


def write_json(obj, path):
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def save_model(model: LatentModel, path):
    write_json(model.to_dict(), path)


def load_model(path) -> LatentModel:
    return LatentModel.from_dict(read_json(path))


def save_precision_set(ps: PrecisionSet, path):
    """JSON when ``path`` ends in ``.json``, otherwise a directory of ``theta_<k>.csv`` files."""
    path = Path(path)
    if path.suffix == ".json":
        write_json(ps.to_dict(), path)
        return
    path.mkdir(parents=True, exist_ok=True)
    for k, t in enumerate(ps.thetas):
        np.savetxt(path / f"theta_{k}.csv", t, fmt=CSV_FMT, delimiter=",")


def load_precision_set(path) -> PrecisionSet:
    """Read a precision set from a JSON document or a directory of ``theta_<k>.csv`` files.

    CSV directories carry no metadata; context 0 is assumed observational
    only if the caller says so.
    """
    path = Path(path)
    if path.is_dir():
        files = []
        for f in path.iterdir():
            m = re.fullmatch(r"theta_(\d+)\.csv", f.name)
            if m:
                files.append((int(m.group(1)), f))
        if not files:
            raise InvalidInputError(f"no theta_<k>.csv files in {path}")
        files.sort()
        if [k for k, _ in files] != list(range(len(files))):
            raise InvalidInputError("theta files must be numbered 0..K without gaps")
        return PrecisionSet(tuple(np.atleast_2d(np.loadtxt(f, delimiter=",")) for _, f in files))
    data = read_json(path)
    if not isinstance(data, dict) or "thetas" not in data:
        raise InvalidInputError(f"{path} is not a precision-set document")
    return PrecisionSet.from_dict(data)
