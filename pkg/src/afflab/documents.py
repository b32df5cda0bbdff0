"""Tuple documents (JSON), run configuration and CSV emission."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass, is_dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import InputError
from .symbolic import DEFAULT_BUDGET, MatrixTuple, word_budget


@dataclass
class TupleDocument:
    d: int
    N: int
    matrices: list[list[float]]
    label: str | None = None
    cap: float | None = None
    reduced: bool = False

    def to_tuple(self) -> MatrixTuple:
        mats = tuple(np.array(m, dtype=float).reshape(self.d, self.d) for m in self.matrices)
        return MatrixTuple(mats, cap=self.cap, label=self.label, reduced=self.reduced)

    @classmethod
    def from_tuple(cls, tuple_: MatrixTuple) -> "TupleDocument":
        return cls(tuple_.d, tuple_.N, [A.ravel().tolist() for A in tuple_.matrices],
                   tuple_.label, tuple_.cap, tuple_.reduced)


def parse_document(text: str) -> TupleDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"tuple document is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise InputError("tuple document must be a JSON object")
    unknown = set(raw) - {"d", "N", "matrices", "label", "cap", "reduced"}
    if unknown:
        raise InputError(f"unknown fields {sorted(unknown)}")
    try:
        d, N, mats = raw["d"], raw["N"], raw["matrices"]
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from None
    if not (isinstance(d, int) and d >= 1 and isinstance(N, int) and N >= 1):
        raise InputError("d and N must be positive integers")
    reduced = bool(raw.get("reduced", False))
    if N < 2 and not reduced:
        raise InputError("N >= 2 required unless the document is flagged reduced")
    if not isinstance(mats, list) or len(mats) != N:
        raise InputError(f"expected {N} matrices")
    for i, m in enumerate(mats):
        if not isinstance(m, list) or len(m) != d * d:
            raise InputError(f"matrix {i + 1} must have d^2 = {d * d} entries")
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x) for x in m):
            raise InputError(f"matrix {i + 1} has non-numeric or non-finite entries")
    cap = raw.get("cap")
    if cap is not None and not (isinstance(cap, (int, float)) and cap > 0):
        raise InputError("cap must be a positive number")
    label = raw.get("label")
    return TupleDocument(d, N, [[float(x) for x in m] for m in mats], label,
                         None if cap is None else float(cap), reduced)


def load_document(path) -> TupleDocument:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse_document(text)


def dump_document(doc: TupleDocument) -> str:
    out = {"d": doc.d, "N": doc.N, "matrices": doc.matrices}
    if doc.label is not None:
        out["label"] = doc.label
    if doc.cap is not None:
        out["cap"] = doc.cap
    if doc.reduced:
        out["reduced"] = True
    return json.dumps(out, indent=2)


@dataclass
class RunConfig:
    n_max: int | None = None
    budget: int = DEFAULT_BUDGET
    tol: float = 1e-8
    e1_gap: float = 1e-8
    e2_minor: float = 1e-10
    seed: int = 0
    threads: int = 1
    out: Path | None = None

    def __post_init__(self):
        for name in ("tol", "e1_gap", "e2_minor"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be > 0")
        if self.budget < 1 or self.threads < 1 or (self.n_max is not None and self.n_max < 1):
            raise InputError("budgets, depths and thread counts must be >= 1")

    @classmethod
    def from_env(cls, **kwargs) -> "RunConfig":
        if "AFFLAB_BUDGET" in os.environ:
            kwargs.setdefault("budget", word_budget())
        return cls(**kwargs)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    return buf.getvalue()


def write_csv(directory: Path | None, name: str, header: list[str], rows) -> Path | None:
    if directory is None:
        return None
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / name
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(header, rows))
    return path


def jsonable(obj):
    """Plain JSON types; non-finite floats become strings."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(asdict(obj))
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [[float(z.real), float(z.imag)] for z in obj.ravel()] if obj.ndim == 1 else jsonable(obj.tolist())
        return jsonable(obj.tolist())
    if isinstance(obj, complex):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, Path):
        return str(obj)
    return obj
