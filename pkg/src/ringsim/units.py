"""Parsing of dimensioned quantities from config and netlist text.

Values in text files carry explicit units ("8.5 GHz", "0.3m", "0.18 Np");
everything is converted to SI on parse.
"""
from __future__ import annotations

import math
import re

_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_QUANTITY_RE = re.compile(rf"^\s*({_NUMBER})\s*([A-Za-z.]*)\s*$")

# unit -> (dimension, scale to SI)
_UNITS = {
    "hz": ("frequency", 1.0),
    "khz": ("frequency", 1e3),
    "mhz": ("frequency", 1e6),
    "ghz": ("frequency", 1e9),
    "m": ("length", 1.0),
    "cm": ("length", 1e-2),
    "mm": ("length", 1e-3),
    "s": ("time", 1.0),
    "ms": ("time", 1e-3),
    "us": ("time", 1e-6),
    "ns": ("time", 1e-9),
    "ps": ("time", 1e-12),
    "np": ("attenuation", 1.0),
    "db": ("attenuation", math.log(10.0) / 20.0),  # amplitude dB -> Np
    "rad": ("angle", 1.0),
    "deg": ("angle", math.pi / 180.0),
    "ohm.m": ("resistivity", 1.0),
    "v": ("voltage", 1.0),
}


class UnitError(ValueError):
    """A quantity string is malformed or has the wrong dimension."""


def parse_quantity(text: str | float | int, dimension: str) -> float:
    """Parse ``text`` like "8.5 GHz" into an SI float of the given dimension.

    Dimensionless fields accept bare numbers; dimensioned fields require a
    unit token.
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        if dimension == "dimensionless":
            return float(text)
        raise UnitError(f"field requires a unit of {dimension}, got bare number {text!r}")
    m = _QUANTITY_RE.match(str(text))
    if not m:
        raise UnitError(f"cannot parse quantity {text!r}")
    value, unit = float(m.group(1)), m.group(2).lower()
    if dimension == "dimensionless":
        if unit:
            raise UnitError(f"dimensionless field has unit {unit!r} in {text!r}")
        return value
    if not unit:
        raise UnitError(f"missing unit on {text!r} (expected {dimension})")
    if unit not in _UNITS:
        raise UnitError(f"unknown unit {unit!r} in {text!r}")
    dim, scale = _UNITS[unit]
    if dim != dimension:
        raise UnitError(f"{text!r} has dimension {dim}, expected {dimension}")
    return value * scale
