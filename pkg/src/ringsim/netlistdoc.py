"""Declarative netlist text format.

Line-oriented, one statement per line, '#' comments:

    component <id> <kind> key=value ...
    connect <id>.<port> <id>.<port>
    external <id>.<port> [<id>.<port> ...]
    sweep f_start=7GHz f_stop=12.4GHz n_points=32001

Kinds and their keys (units mandatory on dimensioned values):

    tee         ports=3
    line        length=0.3m | electrical_length=0.3m, plus optional coax
                overrides (a=..., b=..., eps_r=..., tan_delta=..., rho=...)
                and lossless=true|false
    attenuator  loss=0.18Np
    circulator  chirality=forward|reverse
    termination kind=open|short|matched
    gyrator     electrical_length=0.3m phase=180deg [lossless=...] [coax keys]

Unknown kinds or keys are rejected with the offending line number.
"""
from __future__ import annotations

import math

from .elements import (
    Attenuator,
    Circulator,
    CoaxSpec,
    DEFAULT_COAX,
    IdealGyrator,
    Line,
    LineSpec,
    Tee,
    Termination,
)
from .netlist import Netlist, PortRef
from .sweep import FrequencyGrid
from .units import parse_quantity

__all__ = ["NetlistDocError", "parse_netlist_doc", "load_netlist_doc"]


class NetlistDocError(ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


_COAX_KEYS = {
    "a": ("length", "inner_radius_a"),
    "b": ("length", "outer_radius_b"),
    "eps_r": ("dimensionless", "eps_r"),
    "tan_delta": ("dimensionless", "tan_delta"),
    "rho": ("resistivity", "rho"),
}


def _parse_kv(tokens: list[str], lineno: int) -> dict[str, str]:
    out: dict[str, str] = {}
    for tok in tokens:
        if "=" not in tok:
            raise NetlistDocError(lineno, f"expected key=value, got {tok!r}")
        key, value = tok.split("=", 1)
        if key in out:
            raise NetlistDocError(lineno, f"duplicate key {key!r}")
        out[key] = value
    return out


def _parse_bool(value: str, lineno: int) -> bool:
    if value.lower() in ("true", "yes", "1"):
        return True
    if value.lower() in ("false", "no", "0"):
        return False
    raise NetlistDocError(lineno, f"expected boolean, got {value!r}")


def _parse_coax(kv: dict[str, str], lineno: int) -> CoaxSpec:
    fields = {
        "inner_radius_a": DEFAULT_COAX.inner_radius_a,
        "outer_radius_b": DEFAULT_COAX.outer_radius_b,
        "eps_r": DEFAULT_COAX.eps_r,
        "tan_delta": DEFAULT_COAX.tan_delta,
        "rho": DEFAULT_COAX.rho,
    }
    for key, (dim, attr) in _COAX_KEYS.items():
        if key in kv:
            fields[attr] = parse_quantity(kv.pop(key), dim)
    return CoaxSpec(**fields)


def _line_spec(kv: dict[str, str], lineno: int) -> LineSpec:
    coax = _parse_coax(kv, lineno)
    lossless = _parse_bool(kv.pop("lossless", "false"), lineno)
    has_phys = "length" in kv
    has_elec = "electrical_length" in kv
    if has_phys == has_elec:
        raise NetlistDocError(lineno, "give exactly one of length / electrical_length")
    if has_phys:
        return LineSpec(coax, parse_quantity(kv.pop("length"), "length"), lossless)
    return LineSpec.from_electrical(
        coax, parse_quantity(kv.pop("electrical_length"), "length"), lossless)


def _make_component(kind: str, kv: dict[str, str], lineno: int):
    if kind == "tee":
        ports = int(parse_quantity(kv.pop("ports", "3"), "dimensionless"))
        elem = Tee(ports)
    elif kind == "line":
        elem = Line(_line_spec(kv, lineno))
    elif kind == "attenuator":
        elem = Attenuator(parse_quantity(kv.pop("loss"), "attenuation"))
    elif kind == "circulator":
        elem = Circulator(kv.pop("chirality", "forward"))
    elif kind == "termination":
        elem = Termination(kv.pop("kind"))
    elif kind == "gyrator":
        phase = parse_quantity(kv.pop("phase", f"{math.pi}rad"), "angle")
        elem = IdealGyrator(_line_spec(kv, lineno), phase)
    else:
        raise NetlistDocError(lineno, f"unknown component kind {kind!r}")
    if kv:
        raise NetlistDocError(lineno, f"unknown keys for {kind}: {sorted(kv)}")
    return elem


def _port_ref(token: str, lineno: int) -> PortRef:
    if "." not in token:
        raise NetlistDocError(lineno, f"expected <id>.<port>, got {token!r}")
    cid, port = token.rsplit(".", 1)
    try:
        return PortRef(cid, int(port))
    except ValueError:
        raise NetlistDocError(lineno, f"port index in {token!r} is not an integer") from None


def parse_netlist_doc(text: str) -> tuple[Netlist, FrequencyGrid | None]:
    components: list = []
    connections: list = []
    external: list = []
    grid: FrequencyGrid | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        stmt = tokens[0]
        if stmt == "component":
            if len(tokens) < 3:
                raise NetlistDocError(lineno, "component needs an id and a kind")
            cid, kind = tokens[1], tokens[2]
            kv = _parse_kv(tokens[3:], lineno)
            try:
                components.append((cid, _make_component(kind, kv, lineno)))
            except (ValueError, KeyError) as exc:
                if isinstance(exc, NetlistDocError):
                    raise
                raise NetlistDocError(lineno, str(exc)) from exc
        elif stmt == "connect":
            if len(tokens) != 3:
                raise NetlistDocError(lineno, "connect takes exactly two ports")
            connections.append((_port_ref(tokens[1], lineno), _port_ref(tokens[2], lineno)))
        elif stmt == "external":
            external.extend(_port_ref(t, lineno) for t in tokens[1:])
        elif stmt == "sweep":
            kv = _parse_kv(tokens[1:], lineno)
            try:
                grid = FrequencyGrid(
                    parse_quantity(kv.pop("f_start"), "frequency"),
                    parse_quantity(kv.pop("f_stop"), "frequency"),
                    int(parse_quantity(kv.pop("n_points"), "dimensionless")),
                )
            except (ValueError, KeyError) as exc:
                raise NetlistDocError(lineno, f"bad sweep statement: {exc}") from exc
            if kv:
                raise NetlistDocError(lineno, f"unknown sweep keys: {sorted(kv)}")
        else:
            raise NetlistDocError(lineno, f"unknown statement {stmt!r}")

    return Netlist(components, connections, external), grid


def load_netlist_doc(path: str) -> tuple[Netlist, FrequencyGrid | None]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_netlist_doc(fh.read())
