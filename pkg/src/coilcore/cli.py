"""Command-line front end.

Subcommands: ``simulate`` (netlist transient), ``hysteresis`` (m-H loop),
``rho-q`` (constitutive curve), ``amoeba`` (SPS experiment).  Exit codes:
0 success, 1 usage error, 2 parse/validation error, 3 simulation error.
Outputs are written atomically (temp file + rename) and only on success;
every CSV gets a sibling matplotlib plot script.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .amoeba import SpsConfig, run_sps
from .device import CoilCoreParams, rho_and_L_constant_current
from .engine import (analyze_second_order, compile_circuit, measure_ringdown,
                     simulate_transient)
from .errors import (CoilcoreError, ConfigError, DomainError, NetlistError,
                     SimulationError)
from .hysteresis import (fit_tanh_branches, full_excursion_amplitude,
                         loop_metrics, loop_to_csv_text, simulate_mh_loop)
from .netlist import (CoilCoreInductor, StaircaseInductor, parse_netlist,
                      validate_circuit)
from .trace import format_float
from .waveforms import Waveform


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    p = _Parser(prog="coilcore",
                description="Coil-core meminductor simulation toolkit")
    p.add_argument("--version", action="version", version=f"coilcore {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    sim = sub.add_parser("simulate", help="run a netlist transient")
    sim.add_argument("netlist", help="netlist file")
    sim.add_argument("-o", "--out", default=".", help="output directory")
    sim.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="override an element value (R1=5), model parameter "
                          "(ML1.sw=1e-7) or tran.step/tran.stop")

    hys = sub.add_parser("hysteresis", help="generate an m-H loop")
    hys.add_argument("-o", "--out", default=".")
    hys.add_argument("--sw", type=float, default=1.0)
    hys.add_argument("--m0", type=float, default=-0.99)
    hys.add_argument("--flux-scale", type=float, default=1.0)
    hys.add_argument("--drive", choices=("sine", "step"), default="sine")
    hys.add_argument("--amplitude", type=float, default=None,
                     help="sine amplitude (default: full-excursion value)")
    hys.add_argument("--freq", type=float, default=1.0)
    hys.add_argument("--cycles", type=int, default=2)
    hys.add_argument("--samples", type=int, default=1024)
    hys.add_argument("--step-level", type=float, default=1.0)
    hys.add_argument("--duration", type=float, default=10.0,
                     help="step-drive duration, seconds")

    rho = sub.add_parser("rho-q", help="constitutive rho(q) / L(q) curve")
    rho.add_argument("-o", "--out", default=".")
    rho.add_argument("--flux-scale", type=float, default=1.0)
    rho.add_argument("--sw", type=float, default=1.0)
    rho.add_argument("--m0", type=float, default=-0.964)
    rho.add_argument("--i0", type=float, default=1.0)
    rho.add_argument("--q-max", type=float, default=None,
                     help="grid end (default 10*sw)")
    rho.add_argument("--points", type=int, default=501)

    amo = sub.add_parser("amoeba", help="run the SPS learning experiment")
    amo.add_argument("-o", "--out", default=".")
    amo.add_argument("--f-sti", type=float, default=100.0)
    amo.add_argument("--n-train", type=int, default=3)
    amo.add_argument("--n-probe", type=int, default=3)
    amo.add_argument("--amplitude", type=float, default=1.0)
    amo.add_argument("--r", type=float, default=10.0)
    amo.add_argument("--l0", type=float, default=2.0)
    amo.add_argument("--delta", type=float, default=0.2)
    amo.add_argument("--c", type=float, default=None)
    amo.add_argument("--dt", type=float, default=None)
    amo.add_argument("--pulse-width", type=float, default=None)
    return p


# ----------------------------------------------------------- output layer

def _emit(outdir: str, files: dict) -> None:
    """Write every file via temp-then-rename; called only after success."""
    os.makedirs(outdir, exist_ok=True)
    for name, text in files.items():
        path = os.path.join(outdir, name)
        tmp = path + f".tmp{os.getpid()}"
        with open(tmp, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)


_PLOT_HEADER = """\
#!/usr/bin/env python3
# Companion plot script; run where {csv} lives.
import csv

import matplotlib.pyplot as plt

rows = list(csv.reader(open({csv!r})))
header, data = rows[0], rows[1:]
cols = {{name: [float(r[k]) if r[k] else None for r in data]
        for k, name in enumerate(header)}}
"""


def _plot_script_trace(csv_name: str) -> str:
    return _PLOT_HEADER.format(csv=csv_name) + """\
t = cols["time"]
fig, axes = plt.subplots(2, 1, sharex=True)
for name in ("v_in", "v_out"):
    if cols[name][0] is not None:
        axes[0].plot(t, cols[name], label=name)
axes[0].set_ylabel("voltage [V]")
axes[0].legend()
axes[1].plot(t, cols["i"], label="i")
if cols["l_eff"][0] is not None:
    ax2 = axes[1].twinx()
    ax2.plot(t, cols["l_eff"], color="tab:red", label="l_eff")
    ax2.set_ylabel("L [H]")
axes[1].set_xlabel("time [s]")
axes[1].set_ylabel("current [A]")
axes[1].legend()
plt.tight_layout()
plt.show()
"""


def _plot_script_loop(csv_name: str) -> str:
    return _PLOT_HEADER.format(csv=csv_name) + """\
plt.plot(cols["h"], cols["m"])
plt.xlabel("H (drive units)")
plt.ylabel("m")
plt.grid(True)
plt.show()
"""


def _plot_script_rho(csv_name: str) -> str:
    return _PLOT_HEADER.format(csv=csv_name) + """\
fig, axes = plt.subplots(2, 1, sharex=True)
axes[0].plot(cols["q"], cols["rho"])
axes[0].set_ylabel("rho [Wb s]")
axes[1].plot(cols["q"], cols["L"])
axes[1].set_xlabel("q [C]")
axes[1].set_ylabel("L [H]")
plt.tight_layout()
plt.show()
"""


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ------------------------------------------------------------ subcommands

def _apply_overrides(doc, sets):
    for item in sets:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set needs KEY=VALUE, got {item!r}")
        try:
            val = float(value)
        except ValueError:
            raise ConfigError(f"--set value must be numeric, got {value!r}")
        target, _, param = key.partition(".")
        if target.lower() == "tran":
            trans = [d for d in doc.directives if d.name == "tran"]
            if not trans or param not in ("step", "stop"):
                raise ConfigError(f"cannot apply override {item!r}")
            step, stop = trans[0].values
            trans[0].values = (val, stop) if param == "step" else (step, val)
            continue
        elem = next((e for e in doc.elements
                     if e.name.upper() == target.upper()), None)
        if elem is None:
            raise ConfigError(f"--set target {target!r} not in netlist")
        if param:
            if param.lower() not in elem.params:
                raise ConfigError(f"element {target!r} has no parameter {param!r}")
            elem.params[param.lower()] = val
        elif elem.value is not None:
            elem.value = val
            if elem.kind == "V":
                elem.waveform = Waveform.constant(val)
        else:
            raise ConfigError(
                f"element {target!r} takes parameter overrides, not a bare value")


def _cmd_simulate(args) -> int:
    try:
        with open(args.netlist) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.netlist}: {exc}", file=sys.stderr)
        return 2
    doc = parse_netlist(text)
    _apply_overrides(doc, args.set)
    circuit = validate_circuit(doc)
    trace = simulate_transient(compile_circuit(circuit))

    metrics = {"backend": BACKEND,
               "tran": {"step": circuit.tran_step, "stop": circuit.tran_stop}}
    ind = circuit.inductor
    if isinstance(ind, CoilCoreInductor):
        metrics["second_order"] = None
    else:
        if isinstance(ind, StaircaseInductor):
            n_up = sum(1 for s in circuit.source.pulse_starts()
                       if s <= circuit.tran_stop)
            l_init, l_final = ind.l0, ind.l0 * (1 - ind.delta) ** n_up
        else:
            l_init = l_final = ind.l
        metrics["second_order"] = {
            "initial": asdict(analyze_second_order(circuit.r, l_init, circuit.c)),
            "final": asdict(analyze_second_order(circuit.r, l_final, circuit.c)),
        }
    try:
        f, alpha = measure_ringdown(trace, "i")
        metrics["ringdown"] = {"frequency": f, "alpha": alpha}
    except SimulationError:
        metrics["ringdown"] = None

    _emit(args.out, {
        "trace.csv": trace.to_csv_text(signals=circuit.outputs),
        "metrics.json": _json(metrics),
        "plot_trace.py": _plot_script_trace("trace.csv"),
    })
    return 0


def _cmd_hysteresis(args) -> int:
    params = CoilCoreParams(args.flux_scale, args.sw, args.m0)
    if args.drive == "sine":
        amp = args.amplitude
        if amp is None:
            amp = full_excursion_amplitude(params, args.freq)
        drive = Waveform.sine(0.0, amp, args.freq)
        loop = simulate_mh_loop(drive, params, cycles=args.cycles,
                                samples_per_cycle=args.samples)
        met = loop_metrics(loop)
        fit = fit_tanh_branches(loop)
        metrics = {"area": met.area, "hc_up": met.hc_up, "hc_down": met.hc_down,
                   "tanh_fit": asdict(fit), "amplitude": amp}
    else:
        drive = Waveform.step(0.0, args.step_level, 0.0)
        loop = simulate_mh_loop(drive, params, cycles=1,
                                samples_per_cycle=args.samples,
                                duration=args.duration)
        metrics = {"area": None, "hc_up": None, "hc_down": None,
                   "tanh_fit": None, "amplitude": args.step_level}

    _emit(args.out, {
        "loop.csv": loop_to_csv_text(loop),
        "loop_metrics.json": _json(metrics),
        "plot_loop.py": _plot_script_loop("loop.csv"),
    })
    return 0


def _cmd_rho_q(args) -> int:
    params = CoilCoreParams(args.flux_scale, args.sw, args.m0)
    q_max = args.q_max if args.q_max is not None else 10.0 * args.sw
    if q_max <= 0 or args.points < 2:
        raise ConfigError("need q-max > 0 and points >= 2")
    q = np.linspace(0.0, q_max, args.points)
    rho, L = rho_and_L_constant_current(q, args.i0, params)
    lines = ["q,rho,L"]
    for k in range(len(q)):
        lines.append(",".join(format_float(v) for v in (q[k], rho[k], L[k])))
    _emit(args.out, {
        "rho_q.csv": "\n".join(lines) + "\n",
        "plot_rho_q.py": _plot_script_rho("rho_q.csv"),
    })
    return 0


def _cmd_amoeba(args) -> int:
    cfg = SpsConfig(f_sti=args.f_sti, n_train=args.n_train, n_probe=args.n_probe,
                    amplitude=args.amplitude, r=args.r, l0=args.l0,
                    delta=args.delta, capacitance=args.c, dt=args.dt,
                    pulse_width=args.pulse_width)
    report = run_sps(cfg)
    _emit(args.out, {
        "sps_report.json": report.to_json() + "\n",
        "trace.csv": report.trace.to_csv_text(),
        "plot_trace.py": _plot_script_trace("trace.csv"),
    })
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "hysteresis": _cmd_hysteresis,
    "rho-q": _cmd_rho_q,
    "amoeba": _cmd_amoeba,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (see --help)")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except NetlistError as exc:
        print(f"netlist error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ConfigError) as exc:
        print(f"invalid configuration [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"simulation error [{exc.code}]: {exc}", file=sys.stderr)
        return 3
    except CoilcoreError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 3


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
