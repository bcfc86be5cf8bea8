"""Component graphs and their reduction to an external scattering matrix.

A netlist is a list of components, a set of unordered port-pair
connections (ideal zero-length, lossless, reflectionless joints) and an
ordered list of external ports. ``assemble`` stacks the component
S-matrices block-diagonally and eliminates the internal ports with one
dense solve:

    S_ext = S_EE + S_EI P (I - S_II P)^-1 S_IE

where P is the permutation pairing connected internal ports.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np
from scipy.constants import c as C0

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

__all__ = [
    "PortRef",
    "Diagnostic",
    "Netlist",
    "NetlistInvalidError",
    "SingularResonanceError",
    "validate",
    "assemble",
    "assemble_batch",
    "RingParams",
    "build_ring",
]

COND_LIMIT = 1e12


@dataclass(frozen=True, order=True)
class PortRef:
    """A (component id, 0-based port index) pair."""

    component: str
    port: int

    def __str__(self) -> str:
        return f"{self.component}.{self.port}"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class NetlistInvalidError(ValueError):
    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in diagnostics))


class SingularResonanceError(ArithmeticError):
    """The interconnection solve is singular at a trapped-mode resonance."""

    def __init__(self, frequencies: Sequence[float]):
        self.frequencies = list(frequencies)
        shown = ", ".join(f"{f:.9e}" for f in self.frequencies[:5])
        super().__init__(
            f"interconnection matrix is singular (cond > {COND_LIMIT:.0e}) at "
            f"f = [{shown}] Hz; perturb the frequency by half a grid step"
        )


@dataclass
class Netlist:
    """Immutable-by-convention component graph.

    components : sequence of (id, element) in a fixed order
    connections : iterable of (PortRef, PortRef) unordered pairs
    external_ports : ordered PortRefs defining external port numbering
    """

    components: tuple
    connections: tuple
    external_ports: tuple
    _layout: dict | None = field(default=None, repr=False, compare=False)

    def __init__(self, components: Iterable, connections: Iterable,
                 external_ports: Iterable):
        self.components = tuple((str(cid), elem) for cid, elem in components)
        self.connections = tuple(
            (a, b) if isinstance(a, PortRef) else (PortRef(*a), PortRef(*b))
            for a, b in connections
        )
        self.external_ports = tuple(
            p if isinstance(p, PortRef) else PortRef(*p) for p in external_ports
        )
        self._layout = None

    @property
    def n_external(self) -> int:
        return len(self.external_ports)

    def component_map(self) -> dict:
        return dict(self.components)

    def layout(self) -> dict:
        """Global port bookkeeping; validates on first use."""
        if self._layout is not None:
            return self._layout
        diags = validate(self)
        if diags:
            raise NetlistInvalidError(diags)

        offsets: dict[str, int] = {}
        total = 0
        for cid, elem in self.components:
            offsets[cid] = total
            total += elem.n_ports

        def gidx(ref: PortRef) -> int:
            return offsets[ref.component] + ref.port

        ext = np.array([gidx(p) for p in self.external_ports], dtype=int)
        internal = np.array(sorted(set(range(total)) - set(ext.tolist())), dtype=int)
        pos = {g: k for k, g in enumerate(internal.tolist())}
        perm = np.empty(len(internal), dtype=int)
        for a, b in self.connections:
            ia, ib = pos[gidx(a)], pos[gidx(b)]
            perm[ia] = ib
            perm[ib] = ia
        self._layout = {
            "offsets": offsets,
            "n_total": total,
            "ext": ext,
            "internal": internal,
            "perm": perm,
        }
        return self._layout


def validate(netlist: Netlist) -> list[Diagnostic]:
    """Check netlist invariants; an empty list means the netlist is well formed."""
    diags: list[Diagnostic] = []
    seen_ids: set[str] = set()
    ports: dict[str, int] = {}
    for cid, elem in netlist.components:
        if cid in seen_ids:
            diags.append(Diagnostic("duplicate-id", f"component id {cid!r} appears twice"))
        seen_ids.add(cid)
        ports[cid] = elem.n_ports

    def check_ref(ref: PortRef, where: str) -> bool:
        if ref.component not in ports:
            diags.append(Diagnostic("unknown-component",
                                    f"{where} references unknown component {ref.component!r}"))
            return False
        if not (0 <= ref.port < ports[ref.component]):
            diags.append(Diagnostic("bad-port-index",
                                    f"{where} references {ref} but {ref.component!r} has "
                                    f"{ports[ref.component]} ports"))
            return False
        return True

    usage: dict[PortRef, int] = {}
    for a, b in netlist.connections:
        ok = check_ref(a, "connection") and check_ref(b, "connection")
        if a == b:
            diags.append(Diagnostic("self-connection", f"port {a} connected to itself"))
            continue
        if ok:
            usage[a] = usage.get(a, 0) + 1
            usage[b] = usage.get(b, 0) + 1
    for p in netlist.external_ports:
        if check_ref(p, "external port"):
            usage[p] = usage.get(p, 0) + 1

    if not netlist.external_ports:
        diags.append(Diagnostic("no-external-ports", "netlist has no external ports"))

    for ref, count in sorted(usage.items()):
        if count > 1:
            diags.append(Diagnostic("port-reused",
                                    f"port {ref} used {count} times (must be exactly once)"))
    for cid, n in ports.items():
        for k in range(n):
            ref = PortRef(cid, k)
            if ref not in usage:
                diags.append(Diagnostic("dangling-port",
                                        f"port {ref} is neither connected nor external"))
    return diags


def assemble_batch(netlist: Netlist, frequencies: np.ndarray) -> np.ndarray:
    """External S-matrices at each frequency, shape (F, E, E)."""
    lay = netlist.layout()
    f = np.asarray(frequencies, dtype=float)
    if f.ndim != 1:
        raise ValueError("frequencies must be a 1-D array")
    nf, total = len(f), lay["n_total"]

    s_blk = np.zeros((nf, total, total), dtype=complex)
    for cid, elem in netlist.components:
        o = lay["offsets"][cid]
        n = elem.n_ports
        s_blk[:, o:o + n, o:o + n] = elem.smatrix(f)

    ext, internal, perm = lay["ext"], lay["internal"], lay["perm"]
    s_ee = s_blk[:, ext[:, None], ext[None, :]]
    if len(internal) == 0:
        return s_ee
    s_ei = s_blk[:, ext[:, None], internal[None, :]]
    s_ie = s_blk[:, internal[:, None], ext[None, :]]
    s_ii = s_blk[:, internal[:, None], internal[None, :]]

    # right-multiplication by the pairing permutation is a column gather
    s_ii_p = s_ii[:, :, perm]
    s_ei_p = s_ei[:, :, perm]
    a = np.eye(len(internal), dtype=complex)[None, :, :] - s_ii_p

    cond = np.linalg.cond(a)
    bad = ~np.isfinite(cond) | (cond > COND_LIMIT)
    if np.any(bad):
        raise SingularResonanceError(f[bad].tolist())

    x = np.linalg.solve(a, s_ie)
    return s_ee + s_ei_p @ x


def assemble(netlist: Netlist, f: float) -> np.ndarray:
    """External S-matrix at a single frequency, shape (E, E)."""
    return assemble_batch(netlist, np.array([float(f)]))[0]


# --- the two-port ring network --------------------------------------------


@dataclass(frozen=True)
class RingParams:
    """Parameters of the balanced two-branch ring.

    branch_electrical_length : one-way electrical length of each branch (m);
        the ring circumference is twice this and the shape-resonance comb
        spacing is c / circumference.
    gamma_upper, gamma_lower : lumped attenuation per bond in Np.
    gyrator_mode : "composed" builds the gyrator from two circulators, two
        phase trimmers and an open/short pair; "ideal" uses the analytic
        two-port. Both give identical external responses.
    gyrator_phase : differential phase of the non-reciprocal element
        (composed mode realizes exactly pi).
    uniform_loss_on : apply the coax attenuation model to every line.
    """

    branch_electrical_length: float
    coax: CoaxSpec = DEFAULT_COAX
    gamma_upper: float = 0.0
    gamma_lower: float = 0.0
    gyrator_mode: str = "composed"
    gyrator_phase: float = np.pi
    uniform_loss_on: bool = False

    def __post_init__(self):
        if self.branch_electrical_length <= 0:
            raise ValueError("branch_electrical_length must be > 0")
        if self.gamma_upper < 0 or self.gamma_lower < 0:
            raise ValueError("attenuations must be >= 0 Np")
        if self.gyrator_mode not in ("composed", "ideal"):
            raise ValueError("gyrator_mode must be 'composed' or 'ideal'")

    @property
    def circumference(self) -> float:
        return 2.0 * self.branch_electrical_length

    @property
    def comb_spacing(self) -> float:
        """Shape-resonance repetition frequency c/circumference in Hz."""
        return C0 / self.circumference

    def with_gamma(self, gamma_upper: float, gamma_lower: float) -> "RingParams":
        return replace(self, gamma_upper=gamma_upper, gamma_lower=gamma_lower)


def build_ring(params: RingParams) -> Netlist:
    """Two-port ring: tee - {upper: line + attenuator | lower: gyrator +
    attenuator} - tee, with equal electrical length in both branches."""
    lossless = not params.uniform_loss_on
    upper = LineSpec.from_electrical(params.coax, params.branch_electrical_length, lossless)

    components = [
        ("tee_left", Tee(3)),
        ("tee_right", Tee(3)),
        ("upper_line", Line(upper)),
        ("upper_att", Attenuator(params.gamma_upper)),
        ("lower_att", Attenuator(params.gamma_lower)),
    ]
    connections = [
        (PortRef("tee_left", 1), PortRef("upper_line", 0)),
        (PortRef("upper_line", 1), PortRef("upper_att", 0)),
        (PortRef("upper_att", 1), PortRef("tee_right", 1)),
    ]

    if params.gyrator_mode == "ideal":
        gyr = LineSpec.from_electrical(params.coax, params.branch_electrical_length, lossless)
        components.append(("gyrator", IdealGyrator(gyr, params.gyrator_phase)))
        connections += [
            (PortRef("tee_left", 2), PortRef("gyrator", 0)),
            (PortRef("gyrator", 1), PortRef("lower_att", 0)),
            (PortRef("lower_att", 1), PortRef("tee_right", 2)),
        ]
    else:
        if not np.isclose(params.gyrator_phase % (2 * np.pi), np.pi):
            raise ValueError("composed gyrator realizes a pi differential phase only; "
                             "use gyrator_mode='ideal' for other phases")
        # Each direction passes one trimmer twice, so half the branch length
        # per trimmer keeps both branches at equal electrical length.
        trim = LineSpec.from_electrical(params.coax,
                                        params.branch_electrical_length / 2.0, lossless)
        components += [
            ("circ_left", Circulator("forward")),
            ("trim_left", Line(trim)),
            ("open_ref", Termination("open")),
            ("circ_right", Circulator("reverse")),
            ("trim_right", Line(trim)),
            ("short_ref", Termination("short")),
        ]
        connections += [
            (PortRef("tee_left", 2), PortRef("circ_left", 0)),
            (PortRef("circ_left", 1), PortRef("trim_left", 0)),
            (PortRef("trim_left", 1), PortRef("open_ref", 0)),
            (PortRef("circ_left", 2), PortRef("circ_right", 0)),
            (PortRef("circ_right", 1), PortRef("trim_right", 0)),
            (PortRef("trim_right", 1), PortRef("short_ref", 0)),
            (PortRef("circ_right", 2), PortRef("lower_att", 0)),
            (PortRef("lower_att", 1), PortRef("tee_right", 2)),
        ]

    external = [PortRef("tee_left", 0), PortRef("tee_right", 0)]
    return Netlist(components, connections, external)
