"""Command-line surface.

Subcommands: sweep, delays, pulse, pzfit, attnsweep, noise, validate.
Each reads a JSON run config (and/or a netlist document), writes CSV /
Touchstone artifacts plus a manifest into the output directory, and by
default renders report figures next to them. Exit codes: 0 success,
2 configuration/validation error, 3 numerical failure. Diagnostics go to
stderr as JSON lines.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .delays import band_mean, transmission_delay, wigner_smith_delay
from .metrics import (
    asymmetry_spectrum,
    attenuation_sweep,
    band_average,
    noise_transmission,
    pulse_band_grid,
)
from .netlist import NetlistInvalidError, SingularResonanceError, build_ring, validate
from .netlistdoc import NetlistDocError, load_netlist_doc
from .polezero import zero_crossing_scan
from .pulse import BandMismatchError, gaussian_pulse, propagate, pulse_metrics
from .reports import RunWriter
from .sweep import sweep
from .touchstone import UnsupportedFormatError, write_touchstone
from .units import UnitError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

CONFIG_ERRORS = (ConfigError, NetlistDocError, NetlistInvalidError, UnitError,
                 UnsupportedFormatError, FileNotFoundError)
NUMERICAL_ERRORS = (SingularResonanceError, BandMismatchError, np.linalg.LinAlgError)


def _diag(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")


def _build_network(cfg: RunConfig):
    if cfg.netlist_path:
        netlist, _ = load_netlist_doc(cfg.netlist_path)
        return netlist
    if cfg.ring is None:
        raise ConfigError("config must provide a ring or a netlist")
    return build_ring(cfg.ring)


def _maybe_figures(args, render) -> None:
    if args.no_figures:
        return
    from . import viz  # matplotlib stays out of the computation path

    render(viz)


def _cmd_validate(args) -> int:
    if args.netlist:
        netlist, _ = load_netlist_doc(args.netlist)
    else:
        cfg = load_config(args.config)
        netlist = _build_network(cfg)
    diags = validate(netlist)
    for d in diags:
        _diag(d.code, d.message)
    if diags:
        print(f"invalid: {len(diags)} diagnostic(s)")
        return EXIT_CONFIG
    print("ok")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    writer = _writer(args, cfg, "sweep")
    netlist = _build_network(cfg)
    spectrum = sweep(netlist, cfg.grid, workers=args.workers or cfg.workers)

    f = cfg.grid.frequencies
    columns = {"f_hz": f}
    e = spectrum.n_ports
    for i in range(e):
        for j in range(e):
            columns[f"re_s{i + 1}{j + 1}"] = spectrum.matrices[:, i, j].real
            columns[f"im_s{i + 1}{j + 1}"] = spectrum.matrices[:, i, j].imag
    writer.write_csv("spectrum.csv", columns, {"units": "f in Hz"})
    if e == 2:
        s2p = writer.path("spectrum.s2p")
        write_touchstone(spectrum, s2p)
        writer.add(s2p)
        p = asymmetry_spectrum(spectrum)
        mag = {
            "f_hz": f,
            "mag_s21": np.abs(spectrum.s(2, 1)),
            "mag_s12": np.abs(spectrum.s(1, 2)),
            "p21_minus_p12": p,
        }
        writer.write_csv("magnitudes.csv", mag, {"units": "f in Hz, magnitudes linear"})
        lo, hi = cfg.band_or_grid()
        writer.notes["band_mean_p21_minus_p12"] = band_average(p, cfg.grid, lo, hi)
        if args.plot_data:
            writer.write_plot_data("magnitudes.plotdata", mag)
        _maybe_figures(args, lambda viz: writer.add(
            viz.plot_spectrum(spectrum, writer.path("spectrum.png"))))
    writer.finish()
    return EXIT_OK


def _cmd_delays(args) -> int:
    cfg = load_config(args.config)
    writer = _writer(args, cfg, "delays")
    netlist = _build_network(cfg)
    spectrum = sweep(netlist, cfg.grid, workers=args.workers or cfg.workers)
    lo, hi = cfg.band_or_grid()

    results = {
        "tau_21": transmission_delay(spectrum, from_port=1, to_port=2),
        "tau_12": transmission_delay(spectrum, from_port=2, to_port=1),
        "tau_ws": wigner_smith_delay(spectrum),
    }
    means = {}
    for name, d in results.items():
        writer.write_csv(f"{name}.csv", {
            "f_hz": cfg.grid.frequencies,
            "re_tau_s": d.values.real,
            "im_tau_s": d.values.imag,
            "valid": d.valid.astype(int),
        }, {"kind": d.kind, "units": "tau in s"})
        mean = band_mean(d, lo, hi)
        means[name] = {"re_s": mean.real, "im_s": mean.imag}
        if args.plot_data:
            writer.write_plot_data(f"{name}.plotdata", {
                "f_hz": cfg.grid.frequencies[d.valid],
                "re_tau_s": d.values.real[d.valid],
                "im_tau_s": d.values.imag[d.valid],
            })
    means["ratio_12_over_21"] = means["tau_12"]["re_s"] / means["tau_21"]["re_s"]
    writer.notes["band"] = [lo, hi]
    writer.notes["band_means"] = means
    print(json.dumps(means, indent=2, sort_keys=True))
    _maybe_figures(args, lambda viz: writer.add(viz.plot_delays(
        {"tau_21": results["tau_21"], "tau_12": results["tau_12"]},
        writer.path("delays.png"))))
    writer.finish()
    return EXIT_OK


def _cmd_pulse(args) -> int:
    cfg = load_config(args.config)
    if cfg.pulse is None:
        raise ConfigError("pulse subcommand requires a pulse section")
    writer = _writer(args, cfg, "pulse")
    netlist = _build_network(cfg)
    vin = gaussian_pulse(cfg.pulse, cfg.sample_rate, cfg.duration)
    grid = pulse_band_grid(cfg.pulse.fc, cfg.pulse.fwhm, cfg.sample_rate,
                           len(vin.samples))
    spectrum = sweep(netlist, grid, workers=args.workers or cfg.workers)

    traces = {
        "v_in": vin,
        "v21": propagate(spectrum, vin, from_port=1, to_port=2),
        "v12": propagate(spectrum, vin, from_port=2, to_port=1),
        "v11": propagate(spectrum, vin, from_port=1, to_port=1),
    }
    records = []
    for name, ts in traces.items():
        writer.write_csv(f"trace_{name}.csv",
                         {"t_s": ts.times, "v": ts.samples}, {"trace": name})
        m = pulse_metrics(ts)
        records.append({
            "trace": name,
            "arrival_s": m.arrival,
            "arrival_rel_s": m.arrival - cfg.pulse.t_center,
            "peak_amp": m.peak_amp,
            "ambiguous": m.ambiguous,
            "peaks": [{"t_s": t, "amp": a} for t, a in m.peaks],
        })
    writer.write_jsonl("pulse_metrics.jsonl", records)
    print(json.dumps({r["trace"]: r["arrival_rel_s"] for r in records}, indent=2))
    _maybe_figures(args, lambda viz: writer.add(
        viz.plot_time_traces(traces, writer.path("pulses.png"))))
    writer.finish()
    return EXIT_OK


def _cmd_pzfit(args) -> int:
    cfg = load_config(args.config)
    if cfg.ring is None:
        raise ConfigError("pzfit requires a ring section")
    if cfg.gamma_half_grid is None:
        raise ConfigError("pzfit requires gamma_half_grid")
    writer = _writer(args, cfg, "pzfit")
    lo, hi = cfg.band_or_grid()
    scan = zero_crossing_scan(cfg.ring, cfg.gamma_half_grid, (lo, hi),
                              n_modes=cfg.fit_modes,
                              workers=args.workers or cfg.workers)

    rows = {"gamma_half_np": [], "mode": [], "f_n_hz": [], "gamma_n_hz": [],
            "re_z_hz": [], "im_z_hz": [], "confidence": []}
    for g, fit in zip(scan.gamma_half, scan.fits):
        for k, m in enumerate(fit.pole_zero_set.modes):
            rows["gamma_half_np"].append(g)
            rows["mode"].append(k)
            rows["f_n_hz"].append(m.f_n)
            rows["gamma_n_hz"].append(m.gamma_n)
            rows["re_z_hz"].append(m.z_re)
            rows["im_z_hz"].append(m.z_im)
            rows["confidence"].append(int(fit.pole_confidence[k]))
    writer.write_csv("pole_zero_trajectories.csv", rows,
                     {"units": "gamma in Np, frequencies in Hz"})
    summary = {
        "crossing_np": scan.crossing_np,
        "monotone": scan.monotone,
        "max_re_drift_rel": scan.max_re_drift_rel,
    }
    writer.notes.update(summary)
    print(json.dumps(summary, indent=2, sort_keys=True))
    _maybe_figures(args, lambda viz: writer.add(
        viz.plot_pz_trajectories(scan, writer.path("pole_zero.png"))))
    writer.finish()
    return EXIT_OK


def _cmd_attnsweep(args) -> int:
    cfg = load_config(args.config)
    if cfg.ring is None:
        raise ConfigError("attnsweep requires a ring section")
    if cfg.gamma_half_grid is None:
        raise ConfigError("attnsweep requires gamma_half_grid")
    writer = _writer(args, cfg, "attnsweep")
    lo, hi = cfg.band_or_grid()
    curve = attenuation_sweep(cfg.ring, cfg.gamma_half_grid, (lo, hi),
                              mode=args.mode, balanced=cfg.balanced,
                              pulse=cfg.pulse,
                              sample_rate=cfg.sample_rate, duration=cfg.duration,
                              workers=args.workers or cfg.workers)
    columns = {"gamma_half_np": curve.gamma_half, "value": curve.values}
    writer.write_csv(f"asymmetry_{curve.mode}.csv", columns,
                     {"mode": curve.mode, "band_hz": f"{lo} {hi}"})
    if args.plot_data:
        writer.write_plot_data(f"asymmetry_{curve.mode}.plotdata", columns)
    summary = {"argmax_gamma_np": curve.argmax_gamma,
               "rises_then_falls": curve.rises_then_falls}
    writer.notes.update(summary)
    print(json.dumps(summary, indent=2, sort_keys=True))
    _maybe_figures(args, lambda viz: writer.add(
        viz.plot_asymmetry_curve(curve, writer.path("asymmetry.png"))))
    writer.finish()
    return EXIT_OK


def _cmd_noise(args) -> int:
    cfg = load_config(args.config)
    if cfg.ring is None:
        raise ConfigError("noise requires a ring section")
    writer = _writer(args, cfg, "noise")
    report = noise_transmission(cfg.ring, cfg.grid, cfg.block,
                                realizations=cfg.realizations, seed=cfg.seed,
                                workers=args.workers or cfg.workers)
    writer.write_csv("noise.csv", {
        "f_hz": cfg.grid.frequencies,
        "np21": report.np21,
        "np12": report.np12,
        "np21_blocked": report.np21_blocked,
        "np12_blocked": report.np12_blocked,
        "ratio": report.ratio,
        "ratio_blocked": report.ratio_blocked,
    }, {"block": report.block})
    summary = {"mean_ratio": report.mean_ratio,
               "stochastic_mean_ratio": report.stochastic_mean_ratio,
               "realizations": report.realizations}
    writer.notes.update(summary)
    print(json.dumps(summary, indent=2, sort_keys=True))
    _maybe_figures(args, lambda viz: writer.add(
        viz.plot_noise(report, writer.path("noise.png"))))
    writer.finish()
    return EXIT_OK


def _writer(args, cfg: RunConfig, command: str) -> RunWriter:
    out = args.out or cfg.output_dir
    return RunWriter(out, command, config_path=cfg.source_path, seed=cfg.seed)


def _add_common(p: argparse.ArgumentParser, config_required: bool = True) -> None:
    p.add_argument("--config", required=config_required, help="JSON run config")
    p.add_argument("--out", default=None, help="output directory (overrides config)")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--plot-data", action="store_true",
                   help="also emit gnuplot-ready column files")
    p.add_argument("--no-figures", action="store_true",
                   help="skip rendering report figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringsim",
        description="Simulate non-reciprocal microwave ring-graph networks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, extra in [
        ("sweep", _cmd_sweep, None),
        ("delays", _cmd_delays, None),
        ("pulse", _cmd_pulse, None),
        ("pzfit", _cmd_pzfit, None),
        ("attnsweep", _cmd_attnsweep, "mode"),
        ("noise", _cmd_noise, None),
    ]:
        p = sub.add_parser(name)
        _add_common(p)
        if extra == "mode":
            p.add_argument("--mode", choices=["frequency", "time"], default="frequency")
        p.set_defaults(func=fn)

    pv = sub.add_parser("validate")
    pv.add_argument("--config", default=None)
    pv.add_argument("--netlist", default=None, help="netlist document to check")
    pv.set_defaults(func=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate" and not (args.netlist or args.config):
        _diag("config", "validate needs --netlist or --config")
        return EXIT_CONFIG
    try:
        return args.func(args)
    except CONFIG_ERRORS as exc:
        _diag("config", str(exc))
        return EXIT_CONFIG
    except NUMERICAL_ERRORS as exc:
        _diag("numerical", str(exc))
        return EXIT_NUMERICAL
    except ValueError as exc:
        _diag("config", str(exc))
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
