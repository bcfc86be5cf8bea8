"""Run configuration: a JSON document with explicit units on dimensioned fields."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .elements import CoaxSpec, DEFAULT_COAX
from .netlist import RingParams
from .pulse import DEFAULT_DURATION, DEFAULT_SAMPLE_RATE, PulseSpec
from .sweep import FrequencyGrid
from .units import parse_quantity

__all__ = ["ConfigError", "RunConfig", "load_config"]


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    grid: FrequencyGrid
    ring: RingParams | None = None
    netlist_path: str | None = None
    band: tuple = (None, None)
    pulse: PulseSpec | None = None
    sample_rate: float = DEFAULT_SAMPLE_RATE
    duration: float = DEFAULT_DURATION
    gamma_half_grid: np.ndarray | None = None
    balanced: bool = True
    block: int = 50
    realizations: int = 0
    seed: int | None = None
    output_dir: str = "out"
    workers: int | None = None
    fit_modes: int | None = None
    source_path: str | None = field(default=None, repr=False)

    def band_or_grid(self) -> tuple:
        lo = self.grid.f_start if self.band[0] is None else self.band[0]
        hi = self.grid.f_stop if self.band[1] is None else self.band[1]
        return lo, hi


def _take(mapping: dict, context: str, known: set[str]) -> None:
    unknown = set(mapping) - known
    if unknown:
        raise ConfigError(f"unknown keys in {context}: {sorted(unknown)}")


def _parse_coax(doc: dict) -> CoaxSpec:
    _take(doc, "coax", {"a", "b", "eps_r", "tan_delta", "rho"})
    return CoaxSpec(
        inner_radius_a=parse_quantity(doc["a"], "length") if "a" in doc else DEFAULT_COAX.inner_radius_a,
        outer_radius_b=parse_quantity(doc["b"], "length") if "b" in doc else DEFAULT_COAX.outer_radius_b,
        eps_r=parse_quantity(doc.get("eps_r", DEFAULT_COAX.eps_r), "dimensionless"),
        tan_delta=parse_quantity(doc.get("tan_delta", DEFAULT_COAX.tan_delta), "dimensionless"),
        rho=parse_quantity(doc["rho"], "resistivity") if "rho" in doc else DEFAULT_COAX.rho,
    )


def _parse_ring(doc: dict) -> RingParams:
    _take(doc, "ring", {"branch_electrical_length", "coax", "gamma_upper",
                        "gamma_lower", "gyrator_mode", "gyrator_phase",
                        "uniform_loss_on"})
    if "branch_electrical_length" not in doc:
        raise ConfigError("ring requires branch_electrical_length")
    return RingParams(
        branch_electrical_length=parse_quantity(doc["branch_electrical_length"], "length"),
        coax=_parse_coax(doc.get("coax", {})),
        gamma_upper=parse_quantity(doc.get("gamma_upper", "0 Np"), "attenuation"),
        gamma_lower=parse_quantity(doc.get("gamma_lower", "0 Np"), "attenuation"),
        gyrator_mode=doc.get("gyrator_mode", "composed"),
        gyrator_phase=parse_quantity(doc.get("gyrator_phase", f"{math.pi} rad"), "angle"),
        uniform_loss_on=bool(doc.get("uniform_loss_on", False)),
    )


def _parse_grid(doc: dict) -> FrequencyGrid:
    _take(doc, "grid", {"f_start", "f_stop", "n_points"})
    try:
        return FrequencyGrid(
            parse_quantity(doc["f_start"], "frequency"),
            parse_quantity(doc["f_stop"], "frequency"),
            int(parse_quantity(doc["n_points"], "dimensionless")),
        )
    except KeyError as exc:
        raise ConfigError(f"grid requires f_start, f_stop, n_points (missing {exc})") from exc


def _parse_pulse(doc: dict) -> PulseSpec:
    _take(doc, "pulse", {"fc", "fwhm", "amplitude", "t_center"})
    return PulseSpec(
        fc=parse_quantity(doc["fc"], "frequency"),
        fwhm=parse_quantity(doc.get("fwhm", "1 ns"), "time"),
        amplitude=parse_quantity(doc.get("amplitude", 1.0), "dimensionless"),
        t_center=parse_quantity(doc.get("t_center", "8 ns"), "time"),
    )


def _parse_gamma_grid(doc) -> np.ndarray:
    if isinstance(doc, list):
        return np.array([parse_quantity(v, "attenuation") for v in doc])
    _take(doc, "gamma_half_grid", {"start", "stop", "step"})
    start = parse_quantity(doc["start"], "attenuation")
    stop = parse_quantity(doc["stop"], "attenuation")
    step = parse_quantity(doc["step"], "attenuation")
    n = int(round((stop - start) / step)) + 1
    return start + step * np.arange(n)


_TOP_KEYS = {"grid", "ring", "netlist", "band", "pulse", "record", "gamma_half_grid",
             "balanced", "block", "realizations", "seed", "output_dir", "workers",
             "fit_modes"}


def load_config(path: str) -> RunConfig:
    """Load and validate a JSON run configuration."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    _take(doc, "config", _TOP_KEYS)

    try:
        cfg = RunConfig(grid=_parse_grid(doc.get("grid", {
            "f_start": "7 GHz", "f_stop": "12.4 GHz", "n_points": 32001})))
        if "ring" in doc and "netlist" in doc:
            raise ConfigError("give either ring or netlist, not both")
        if "ring" in doc:
            cfg.ring = _parse_ring(doc["ring"])
        if "netlist" in doc:
            cfg.netlist_path = os.path.join(os.path.dirname(os.path.abspath(path)),
                                            doc["netlist"])
            if not os.path.exists(cfg.netlist_path):
                raise ConfigError(f"netlist file not found: {cfg.netlist_path}")
        if "band" in doc:
            lo, hi = doc["band"]
            cfg.band = (parse_quantity(lo, "frequency"), parse_quantity(hi, "frequency"))
            if not (cfg.grid.f_start <= cfg.band[0] < cfg.band[1] <= cfg.grid.f_stop):
                raise ConfigError("band must lie inside the sweep grid")
        if "pulse" in doc:
            cfg.pulse = _parse_pulse(doc["pulse"])
        if "record" in doc:
            _take(doc["record"], "record", {"sample_rate", "duration"})
            cfg.sample_rate = parse_quantity(doc["record"].get("sample_rate", "64 GHz"),
                                             "frequency")
            cfg.duration = parse_quantity(doc["record"].get("duration", "64 ns"), "time")
        if "gamma_half_grid" in doc:
            cfg.gamma_half_grid = _parse_gamma_grid(doc["gamma_half_grid"])
        cfg.balanced = bool(doc.get("balanced", True))
        cfg.block = int(doc.get("block", 50))
        cfg.realizations = int(doc.get("realizations", 0))
        cfg.seed = None if doc.get("seed") is None else int(doc["seed"])
        cfg.output_dir = str(doc.get("output_dir", "out"))
        cfg.workers = None if doc.get("workers") is None else int(doc["workers"])
        cfg.fit_modes = None if doc.get("fit_modes") is None else int(doc["fit_modes"])
        cfg.source_path = os.path.abspath(path)
    except ConfigError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"config {path!r}: {exc}") from exc
    return cfg
