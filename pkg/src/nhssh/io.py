"""Deterministic CSV / JSON writers and the run manifest."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

FLOAT_FORMAT = "{:.17g}"


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT.format(float(value))
    return str(value)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header and float data of a CSV written by :func:`write_csv`."""
    text = Path(path).read_text().splitlines()
    header = text[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]], dtype=float)
    return header, data.reshape(-1, len(header))


def to_jsonable(obj):
    """Recursively turn numpy values, enums and complex numbers into JSON types.

    Non-finite floats become ``None``; complex numbers become ``[re, im]``.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if hasattr(obj, "value") and hasattr(obj, "name") and not isinstance(obj, (int, float)):
        return obj.value
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def invariant_record(params, name: str, value, n_k=None, flags=()) -> dict:
    """``{params, invariant_name, value, n_k, flags}`` record for one invariant."""
    return {
        "params": params.as_dict() if hasattr(params, "as_dict") else params,
        "invariant_name": name,
        "value": value,
        "n_k": n_k,
        "flags": list(flags),
    }


def spectrum_record(spectrum, include_vectors: bool = False) -> dict:
    record = {
        "boundary": getattr(spectrum, "boundary", None),
        "eigenvalues": np.asarray(spectrum.eigenvalues),
    }
    if hasattr(spectrum, "residual"):
        record["residual"] = spectrum.residual
        record["defective"] = np.asarray(spectrum.defective)
    if include_vectors and hasattr(spectrum, "right_vectors"):
        record["right_vectors"] = np.asarray(spectrum.right_vectors).T
        record["left_vectors"] = np.asarray(spectrum.left_vectors).T
    return record


@dataclass
class RunManifest:
    command: str
    params: dict | None
    settings: dict
    seed: int | None = None
    tool_version: str = __version__
    output_paths: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "settings": self.settings,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "output_paths": sorted(self.output_paths),
        }

    def write(self, out_stem) -> Path:
        return write_json(manifest_path(out_stem), self.as_dict())


def manifest_path(out_stem) -> Path:
    stem = Path(out_stem)
    return stem.with_name(stem.name + ".manifest.json")


def with_suffix(out_stem, suffix: str) -> Path:
    """``<out_stem><suffix>``; the stem may itself contain dots."""
    stem = Path(out_stem)
    return stem.with_name(stem.name + suffix)
