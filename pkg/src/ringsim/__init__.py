"""ringsim: frequency- and time-domain simulation of non-reciprocal
microwave ring-graph networks."""

__version__ = "0.1.0"

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
    attenuation_rate,
)
from .netlist import (
    Netlist,
    NetlistInvalidError,
    PortRef,
    RingParams,
    SingularResonanceError,
    assemble,
    assemble_batch,
    build_ring,
    validate,
)
from .sweep import FrequencyGrid, FrequencySpectrum, sweep
from .delays import ComplexDelaySpectrum, band_mean, transmission_delay, wigner_smith_delay
from .polezero import Mode, PoleZeroSet, fit_delay, model_delay, zero_crossing_scan
from .pulse import (
    PulseSpec,
    TimeSeries,
    gaussian_pulse,
    propagate,
    pulse_asymmetry,
    pulse_metrics,
)
from .metrics import (
    asymmetry_spectrum,
    attenuation_sweep,
    band_average,
    noise_transmission,
)
from .touchstone import read_touchstone, write_touchstone
from .netlistdoc import load_netlist_doc, parse_netlist_doc
from .config import RunConfig, load_config

__all__ = [
    "Attenuator", "Circulator", "CoaxSpec", "DEFAULT_COAX", "IdealGyrator",
    "Line", "LineSpec", "Tee", "Termination", "attenuation_rate",
    "Netlist", "NetlistInvalidError", "PortRef", "RingParams",
    "SingularResonanceError", "assemble", "assemble_batch", "build_ring", "validate",
    "FrequencyGrid", "FrequencySpectrum", "sweep",
    "ComplexDelaySpectrum", "band_mean", "transmission_delay", "wigner_smith_delay",
    "Mode", "PoleZeroSet", "fit_delay", "model_delay", "zero_crossing_scan",
    "PulseSpec", "TimeSeries", "gaussian_pulse", "propagate",
    "pulse_asymmetry", "pulse_metrics",
    "asymmetry_spectrum", "attenuation_sweep", "band_average", "noise_transmission",
    "read_touchstone", "write_touchstone",
    "load_netlist_doc", "parse_netlist_doc",
    "RunConfig", "load_config",
]
