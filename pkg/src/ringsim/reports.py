"""CSV artifacts and the per-run manifest.

CSV files start with '#'-prefixed metadata lines (config hash, column
units) followed by a header row. Floats are written with repr, so
identical inputs produce byte-identical artifacts.
"""
from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

__all__ = ["RunWriter", "sha256_file"]


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (complex, np.complexfloating)):
        return f"{repr(float(value.real))}{'+' if value.imag >= 0 else '-'}{repr(abs(float(value.imag)))}j"
    return str(value)


@dataclass
class RunWriter:
    """Collects artifacts for one CLI run and writes the manifest."""

    output_dir: str
    command: str
    config_path: str | None = None
    seed: int | None = None
    artifacts: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    _t0: float = field(default_factory=time.perf_counter)

    def __post_init__(self):
        os.makedirs(self.output_dir, exist_ok=True)
        self.config_sha = sha256_file(self.config_path) if self.config_path else None

    def path(self, name: str) -> str:
        return os.path.join(self.output_dir, name)

    def write_csv(self, name: str, columns: dict, meta: dict | None = None) -> str:
        """columns maps header -> 1-D array; all must share one length."""
        path = self.path(name)
        arrays = {k: np.asarray(v) for k, v in columns.items()}
        lengths = {len(v) for v in arrays.values()}
        if len(lengths) != 1:
            raise ValueError(f"csv columns have differing lengths: {lengths}")
        with open(path, "w", encoding="utf-8") as fh:
            if self.config_sha:
                fh.write(f"# config_sha256: {self.config_sha}\n")
            for key, value in (meta or {}).items():
                fh.write(f"# {key}: {value}\n")
            fh.write(",".join(arrays) + "\n")
            for row in zip(*arrays.values()):
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        self.artifacts.append(path)
        return path

    def write_plot_data(self, name: str, columns: dict, meta: dict | None = None) -> str:
        """Whitespace-separated columns, ready for gnuplot."""
        path = self.path(name)
        arrays = [np.asarray(v) for v in columns.values()]
        with open(path, "w", encoding="utf-8") as fh:
            for key, value in (meta or {}).items():
                fh.write(f"# {key}: {value}\n")
            fh.write("# " + " ".join(columns) + "\n")
            for row in zip(*arrays):
                fh.write(" ".join(_fmt(v) for v in row) + "\n")
        self.artifacts.append(path)
        return path

    def write_jsonl(self, name: str, records: list) -> str:
        path = self.path(name)
        with open(path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
        self.artifacts.append(path)
        return path

    def add(self, path: str) -> str:
        self.artifacts.append(path)
        return path

    def finish(self, extra: dict | None = None) -> str:
        import numpy
        import scipy

        from . import __version__

        manifest = {
            "command": self.command,
            "config": self.config_path,
            "config_sha256": self.config_sha,
            "seed": self.seed,
            "wall_time_s": round(time.perf_counter() - self._t0, 6),
            "versions": {
                "ringsim": __version__,
                "numpy": numpy.__version__,
                "scipy": scipy.__version__,
            },
            "artifacts": [
                {"path": os.path.basename(p), "sha256": sha256_file(p)}
                for p in self.artifacts
            ],
        }
        manifest.update(self.notes)
        if extra:
            manifest.update(extra)
        path = self.path("manifest.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path
