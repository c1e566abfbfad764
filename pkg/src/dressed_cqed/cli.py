"""Command-line front end: ``dressed-cqed <command> --config <path>``.

The config is a JSON object with optional sections ``transmon``,
``calibration``, ``model``, ``cavity``, ``sweep`` and ``output``; every
omitted key takes the default below (the measured device).  Unknown keys
are rejected.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import dressed, sweep
from .io import write_trace
from .models import DrivenModelSpec, Variant
from .transmon import TransmonSpec, calibrate_bias_map

COMMANDS = (
    "spectrum",
    "anticrossing",
    "multiphoton-peaks",
    "lzs-sweep",
    "dressed-energies",
    "transmission",
)

DEFAULTS = {
    "transmon": {"EJ0": 90.0, "EC": 0.5, "ng": 0.0, "charge_cutoff": 40},
    "calibration": {"anchor_current_uA": 7.2, "anchor_freq_GHz": 5.513},
    "model": {
        "variant": "Z_drive",
        "omega_d_GHz": 5.455,
        "omega_a_GHz": None,
        "eps0": 0.5,
        "lambda": 0.45,
        "eta": 0.05,
        "drive_dim": 100,
        "N_ref": 20,
        "N_min": 19,
        "N_max": 21,
        "lambda_detuning": 0.05,
        "alpha_scale": 1.0,
    },
    "cavity": {
        "probe_mode_GHz": 5.514,
        "drive_mode_GHz": 5.455,
        "g_probe_MHz": 5.0,
        "g_drive_MHz": 2.5,
        "probe_dim": 2,
        "anticrossing_mode": "probe",
    },
    "sweep": {
        "axis": None,
        "start": None,
        "stop": None,
        "points": None,
        "m_list": [1, 2, 3],
        "m_max": 4,
        "probe_GHz": 5.513,
        "alpha": 1.0,
        "bias_uA": 7.2,
        "linewidth_MHz": 1.0,
        "linewidth_uA": 0.01,
        "workers": 1,
    },
    "output": {"path": None, "format": "csv"},
}

COMMAND_SWEEPS = {
    "spectrum": ("bias_current", 5.0, 9.0, 401),
    "anticrossing": ("bias_current", 5.0, 9.0, 401),
    "multiphoton-peaks": (None, None, None, None),
    "lzs-sweep": ("drive_alpha", 0.0, 6.0, 601),
    "dressed-energies": ("drive_alpha", 0.0, 6.0, 61),
    "transmission": ("bias_current", 6.9, 7.3, 801),
}

POSITIVE = {
    "transmon": ("EJ0", "EC"),
    "calibration": ("anchor_current_uA", "anchor_freq_GHz"),
    "model": ("omega_d_GHz", "omega_a_GHz", "N_ref", "alpha_scale"),
    "cavity": ("probe_mode_GHz", "drive_mode_GHz", "g_probe_MHz", "g_drive_MHz"),
    "sweep": ("probe_GHz", "linewidth_MHz", "linewidth_uA", "m_max", "workers"),
}

BOUNDS = {
    ("transmon", "charge_cutoff"): (10, 500),
    ("model", "drive_dim"): (4, 2000),
    ("cavity", "probe_dim"): (2, 10),
    ("sweep", "points"): (2, 1_000_000),
    ("sweep", "m_max"): (1, 10),
}

INTEGER_KEYS = {
    ("transmon", "charge_cutoff"),
    ("model", "drive_dim"),
    ("model", "N_ref"),
    ("model", "N_min"),
    ("model", "N_max"),
    ("cavity", "probe_dim"),
    ("sweep", "points"),
    ("sweep", "m_max"),
    ("sweep", "workers"),
}

STRING_CHOICES = {
    ("model", "variant"): tuple(v.value for v in Variant),
    ("cavity", "anticrossing_mode"): ("probe", "drive"),
    ("sweep", "axis"): tuple(a.value for a in sweep.Axis),
    ("output", "format"): ("csv", "json"),
}


class ConfigError(ValueError):
    """The config document violates the schema."""


@dataclass
class RunConfig:
    command: str
    transmon: dict
    calibration: dict
    model: dict
    cavity: dict
    sweep: dict
    output: dict

    def metadata(self):
        """Flat ``section.key`` echo of the resolved configuration."""
        meta = {"command": self.command}
        for section in DEFAULTS:
            for key, val in getattr(self, section).items():
                meta[f"{section}.{key}"] = val
        return meta


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _validate_value(section, key, val):
    name = f"{section}.{key}"
    if (section, key) in STRING_CHOICES:
        if val is None and key in ("axis",):
            return
        if val not in STRING_CHOICES[(section, key)]:
            raise ConfigError(f"{name}: must be one of {STRING_CHOICES[(section, key)]}, got {val!r}")
        return
    if key == "path":
        if val is not None and not isinstance(val, str):
            raise ConfigError(f"{name}: must be a string")
        return
    if key == "m_list":
        if not isinstance(val, list) or not val or not all(
            isinstance(m, int) and not isinstance(m, bool) and 1 <= m <= 10 for m in val
        ):
            raise ConfigError(f"{name}: must be a non-empty list of integers in 1..10")
        return
    if val is None:
        if DEFAULTS[section][key] is None:
            return
        raise ConfigError(f"{name}: must not be null")
    if not _is_number(val) or not math.isfinite(val):
        raise ConfigError(f"{name}: must be a finite number, got {val!r}")
    if (section, key) in INTEGER_KEYS and int(val) != val:
        raise ConfigError(f"{name}: must be an integer")
    if key in POSITIVE.get(section, ()) and not val > 0:
        raise ConfigError(f"{name}: must be positive, got {val}")
    if (section, key) in BOUNDS:
        lo, hi = BOUNDS[(section, key)]
        if not lo <= val <= hi:
            raise ConfigError(f"{name}: must lie in [{lo}, {hi}], got {val}")
    if key in ("eta", "lambda_detuning", "N_min", "N_max") and val < 0:
        raise ConfigError(f"{name}: must be non-negative, got {val}")


def parse_config(text, command=None) -> RunConfig:
    """Validate a JSON config document and fill defaults.

    ``command`` (from the command line) overrides a ``command`` key in the
    document; they must agree when both are given.
    """
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - set(DEFAULTS) - {"command"})
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}")
    doc_cmd = doc.get("command")
    if command and doc_cmd and command != doc_cmd:
        raise ConfigError(f"command: config says {doc_cmd!r} but {command!r} was requested")
    cmd = command or doc_cmd
    if cmd is None:
        raise ConfigError("command: missing; pass one of " + ", ".join(COMMANDS))
    if cmd not in COMMANDS:
        raise ConfigError(f"command: unknown command {cmd!r}")

    resolved = copy.deepcopy(DEFAULTS)
    axis, start, stop, points = COMMAND_SWEEPS[cmd]
    resolved["sweep"].update(axis=axis, start=start, stop=stop, points=points)
    resolved["output"]["path"] = f"{cmd}.csv"
    for section, defaults in DEFAULTS.items():
        given = doc.get(section, {})
        if given is None:
            given = {}
        if not isinstance(given, dict):
            raise ConfigError(f"{section}: must be an object")
        bad = sorted(set(given) - set(defaults))
        if bad:
            raise ConfigError(f"unknown key(s) in {section}: {', '.join(bad)}")
        for key, val in given.items():
            _validate_value(section, key, val)
            resolved[section][key] = val

    sw = resolved["sweep"]
    if cmd != "multiphoton-peaks":
        if sw["start"] is None or sw["stop"] is None or sw["points"] is None:
            raise ConfigError("sweep: start, stop and points are required")
        if not sw["start"] < sw["stop"]:
            raise ConfigError("sweep.start: must be below sweep.stop")
    md = resolved["model"]
    if md["N_min"] > md["N_max"]:
        raise ConfigError("model.N_min: must not exceed model.N_max")
    return RunConfig(command=cmd, **resolved)


def _transmon(cfg):
    t = cfg.transmon
    return TransmonSpec(EJ0=t["EJ0"], EC=t["EC"], ng=t["ng"], charge_cutoff=int(t["charge_cutoff"]))


def _calibrated(cfg):
    tspec = _transmon(cfg)
    c = cfg.calibration
    return tspec, calibrate_bias_map(tspec, (c["anchor_current_uA"], c["anchor_freq_GHz"]))


def _plan(cfg):
    sw = cfg.sweep
    return sweep.SweepPlan(sw["axis"], float(sw["start"]), float(sw["stop"]), int(sw["points"]))


def _require_axis(cfg, *allowed):
    if cfg.sweep["axis"] not in allowed:
        raise ConfigError(f"sweep.axis: {cfg.command} supports {allowed}, got {cfg.sweep['axis']!r}")


def _lam(cfg):
    md = cfg.model
    if md["omega_a_GHz"] is not None:
        return md["omega_a_GHz"] / (2.0 * md["omega_d_GHz"])
    return md["lambda"]


def _cmd_spectrum(cfg):
    _require_axis(cfg, "bias_current")
    tspec, calib = _calibrated(cfg)
    bias = _plan(cfg).grid()
    return [
        sweep.Trace(bias, sweep.omega10_trace(tspec, calib, bias, m), name=f"omega_{m}0_GHz", axis_name="bias_uA")
        for m in range(1, int(cfg.sweep["m_max"]) + 1)
    ]


def _cmd_anticrossing(cfg):
    _require_axis(cfg, "bias_current")
    tspec, calib = _calibrated(cfg)
    cav = cfg.cavity
    if cav["anticrossing_mode"] == "probe":
        mode, g = cav["probe_mode_GHz"], cav["g_probe_MHz"]
    else:
        mode, g = cav["drive_mode_GHz"], cav["g_drive_MHz"]
    return list(sweep.anticrossing_trace(tspec, calib, mode, g, _plan(cfg)))


def _cmd_peaks(cfg):
    tspec, calib = _calibrated(cfg)
    peaks = sweep.multiphoton_peak_positions(tspec, calib, cfg.sweep["probe_GHz"], int(cfg.sweep["m_max"]))
    if not peaks:
        raise RuntimeError("no multi-photon resonance inside the bias window")
    ms, currents = zip(*peaks)
    return [sweep.Trace(np.array(ms, dtype=float), np.array(currents), name="bias_uA", axis_name="m")]


def _cmd_lzs(cfg):
    _require_axis(cfg, "drive_alpha")
    md = cfg.model
    return sweep.lzs_amplitude_sweep(
        md["variant"],
        cfg.sweep["m_list"],
        _plan(cfg).grid(),
        n_ref=int(md["N_ref"]),
        drive_dim=int(md["drive_dim"]),
        lambda_detuning=md["lambda_detuning"],
        alpha_scale=md["alpha_scale"],
        workers=int(cfg.sweep["workers"]),
    )


def _cmd_dressed(cfg):
    _require_axis(cfg, "drive_alpha")
    md = cfg.model
    alpha = _plan(cfg).grid()
    window = list(range(int(md["N_min"]), int(md["N_max"]) + 1))
    n_ref = int(md["N_ref"])
    variant = Variant(md["variant"])
    columns = {(b, N): [] for N in window for b in (1, -1)}
    for a in alpha:
        eta = a * md["alpha_scale"] / (4.0 * math.sqrt(n_ref))
        if variant is Variant.X_DRIVE:
            spec = DrivenModelSpec.x_drive(lam=_lam(cfg), eta=eta, drive_dim=int(md["drive_dim"]))
            states = dressed.x_dressed_spectrum(spec, window)
        else:
            spec = DrivenModelSpec.z_drive(md["eps0"], md["lambda"], eta, int(md["drive_dim"]))
            states = dressed.z_dressed_spectrum(spec, window)
        for s in states:
            columns[(s.branch, s.N)].append(s.energy if s.labeled else float("nan"))
    names = {1: "plus", -1: "minus"}
    return [
        sweep.Trace(alpha, columns[(b, N)], name=f"E_{names[b]}_N{N}", axis_name="alpha")
        for N in window
        for b in (1, -1)
    ]


def _channel_height(cfg, m, alpha):
    md = cfg.model
    if Variant(md["variant"]) is Variant.Z_DRIVE:
        return abs(float(dressed.transmission_z(m, alpha)))
    n_ref = int(md["N_ref"])
    spec = DrivenModelSpec.x_drive(
        lam=sweep.x_channel_lambda(m, md["lambda_detuning"]),
        eta=alpha / (4.0 * math.sqrt(n_ref)),
        drive_dim=int(md["drive_dim"]),
    )
    return abs(dressed.transmission_x(spec, n_ref))


def _cmd_transmission(cfg):
    _require_axis(cfg, "bias_current", "probe_frequency")
    tspec, calib = _calibrated(cfg)
    sw = cfg.sweep
    plan = _plan(cfg)
    if plan.axis is sweep.Axis.BIAS_CURRENT:
        alpha = sw["alpha"] * cfg.model["alpha_scale"]
        peaks = sweep.multiphoton_peak_positions(tspec, calib, sw["probe_GHz"], int(sw["m_max"]))
        lines = [(pos, _channel_height(cfg, m, alpha)) for m, pos in peaks]
        trace = sweep.synthetic_transmission_trace(lines, sw["linewidth_uA"], plan, name="transmission")
        trace.axis_name = "bias_uA"
        return [trace]
    cav = cfg.cavity
    wq = float(sweep.omega10_trace(tspec, calib, [sw["bias_uA"]])[0])
    wr, g = cav["probe_mode_GHz"], cav["g_probe_MHz"] * 1e-3
    vals, vecs = np.linalg.eigh(np.array([[wq, g], [g, wr]]))
    lines = [(vals[k], vecs[1, k] ** 2) for k in range(2)]
    trace = sweep.synthetic_transmission_trace(lines, sw["linewidth_MHz"] * 1e-3, plan, name="transmission")
    trace.axis_name = "probe_GHz"
    return [trace]


HANDLERS = {
    "spectrum": _cmd_spectrum,
    "anticrossing": _cmd_anticrossing,
    "multiphoton-peaks": _cmd_peaks,
    "lzs-sweep": _cmd_lzs,
    "dressed-energies": _cmd_dressed,
    "transmission": _cmd_transmission,
}


def compute(cfg: RunConfig):
    """Run the configured command and return its traces."""
    return HANDLERS[cfg.command](cfg)


def run(cfg: RunConfig, output=None, fmt=None, stream=None) -> int:
    """Compute, write the output file and print a one-line summary.

    Returns a process exit status; errors are reported with their module
    of origin instead of raised.
    """
    stream = stream if stream is not None else sys.stdout
    path = output or cfg.output["path"]
    fmt = fmt or cfg.output["format"]
    try:
        traces = compute(cfg)
        meta = cfg.metadata()
        meta["output.path"] = path
        meta["output.format"] = fmt
        write_trace(traces, fmt, path, metadata=meta)
    except Exception as exc:  # noqa: BLE001 - surfaced to the user verbatim
        print(f"error [{type(exc).__module__}]: {exc}", file=sys.stderr)
        return 1
    print(f"{cfg.command}: {len(traces[0].axis_values)} points -> {path}", file=stream)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dressed-cqed", description="Dressed-state cavity QED simulations."
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON config file (defaults used when omitted)")
    parser.add_argument("--output", help="output path (overrides output.path)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    text = ""
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error [config]: {exc}", file=sys.stderr)
            return 2
    try:
        cfg = parse_config(text, command=args.command)
    except ConfigError as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return 2
    return run(cfg, output=args.output, fmt=args.format)


if __name__ == "__main__":
    sys.exit(main())
