"""Point-set, measure and expansion files; JSON reports.

Point-set files are plain text::

    # comments and blank lines are ignored
    dim 2
    weights            (optional: the last column of every row is a weight)
    0.0 0.0 1.0 0.5
    0.0 0.0 -1.0 0.5

Rows are renormalized when their norm is within 1e-6 of one and rejected
otherwise. Weights must sum to one within 1e-6 and are rescaled to sum to one.
"""
from __future__ import annotations

import hashlib
import json
import platform
from pathlib import Path

import numpy as np

from .gegenbauer import GegenbauerExpansion
from .sphere import NORM_REJECT, PointSet, WeightedMeasure

WEIGHT_RESCALE = 1e-6


class FormatError(ValueError):
    pass


def load_pointset(path) -> PointSet | WeightedMeasure:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such point-set file: {path}")
    dim = None
    weighted = False
    rows = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()
        if head[0] == "dim":
            if dim is not None or rows or len(head) != 2:
                raise FormatError(f"{path}:{lineno}: malformed or misplaced 'dim' header")
            try:
                dim = int(head[1])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: dim must be an integer") from None
            if dim < 1:
                raise FormatError(f"{path}:{lineno}: dim must be >= 1")
            continue
        if head[0] == "weights":
            if rows or len(head) != 1:
                raise FormatError(f"{path}:{lineno}: 'weights' must precede the data rows")
            weighted = True
            continue
        if dim is None:
            raise FormatError(f"{path}:{lineno}: data row before the 'dim' header")
        want = dim + 1 + weighted
        if len(head) != want:
            raise FormatError(f"{path}:{lineno}: expected {want} columns, found {len(head)}")
        try:
            vals = [float(v) for v in head]
        except ValueError:
            raise FormatError(f"{path}:{lineno}: non-numeric entry") from None
        coords = np.asarray(vals[: dim + 1])
        dev = abs(float(np.linalg.norm(coords)) - 1.0)
        if dev > NORM_REJECT:
            raise FormatError(f"{path}:{lineno}: point norm deviates from 1 by {dev:.3g}")
        rows.append(vals)
    if dim is None:
        raise FormatError(f"{path}: missing 'dim' header")
    if not rows:
        raise FormatError(f"{path}: no points")
    data = np.asarray(rows)
    if not weighted:
        return PointSet(data, label=path.stem)
    w = data[:, -1]
    total = float(np.sum(w))
    if abs(total - 1.0) > WEIGHT_RESCALE:
        raise FormatError(f"{path}: weights sum to {total!r}, not 1")
    return WeightedMeasure(data[:, :-1], w / total)


def save_pointset(obj, path) -> None:
    path = Path(path)
    X = obj.points
    lines = [f"dim {X.shape[1] - 1}"]
    if isinstance(obj, WeightedMeasure):
        lines.append("weights")
        X = np.column_stack([X, obj.weights])
    lines += [" ".join(repr(float(v)) for v in row) for row in X]
    path.write_text("\n".join(lines) + "\n")


def export_expansion(expansion: GegenbauerExpansion, path) -> None:
    """Header ``lambda``/``n_max`` lines, then one coefficient per line (repr round-trips)."""
    path = Path(path)
    lines = [f"lambda {expansion.lam!r}", f"n_max {expansion.n_max}"]
    lines += [repr(float(c)) for c in expansion.coeffs]
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write expansion to {path}: {exc}") from exc


def import_expansion(path) -> GegenbauerExpansion:
    path = Path(path)
    lines = [ln.strip() for ln in path.read_text().splitlines() if ln.strip()]
    if len(lines) < 3 or not lines[0].startswith("lambda ") or not lines[1].startswith("n_max "):
        raise FormatError(f"{path}: expected 'lambda' and 'n_max' header lines")
    lam = float(lines[0].split()[1])
    n_max = int(lines[1].split()[1])
    coeffs = [float(v) for v in lines[2:]]
    if len(coeffs) != n_max + 1:
        raise FormatError(f"{path}: n_max={n_max} but {len(coeffs)} coefficients")
    return GegenbauerExpansion(lam, np.asarray(coeffs))


def file_digest(*paths) -> str | None:
    h = hashlib.sha256()
    seen = False
    for p in paths:
        if p is None:
            continue
        h.update(Path(p).read_bytes())
        seen = True
    return h.hexdigest() if seen else None


def versions() -> dict:
    import scipy

    from . import __version__

    return {
        "stolarsky": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dump_report(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2)


def save_report(report: dict, path) -> None:
    path = Path(path)
    try:
        path.write_text(dump_report(report) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
