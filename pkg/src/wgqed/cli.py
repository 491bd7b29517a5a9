"""Command-line front end.

Exit codes: 0 success, 1 cross-check tolerance exceeded, 2 invalid input,
3 non-finite numerical result.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import closed_form as cf
from . import dynamics as dyn
from . import oracle as orc
from .core import (ONE_QUBIT_TAGS, TWO_QUBIT_TAGS, SystemConfig, bell_ket, density_from_tag, ket,
                   product_labels)
from .generator import build_generator
from .io import load_density, write_table

COMMANDS = ("probabilities", "spectrum", "emission-rate", "photon-mean", "cross-check")
ENGINES = {
    "probabilities": ("closed-form", "ode", "oracle"),
    "spectrum": ("closed-form", "quadrature", "oracle"),
    "emission-rate": ("closed-form", "ode"),
    "photon-mean": ("closed-form", "quadrature"),
    "cross-check": ("closed-form",),
}
CROSS_CHECK_TOL = 1e-3
OMEGA_CONVENTION = "absolute angular frequency; forward (+k) branch; v_g/2L=1"


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


@dataclass
class Run:
    args: argparse.Namespace
    config: SystemConfig
    rho0: np.ndarray
    tag: str | None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="number of emitters")
    common.add_argument("--initial", default="E", help="state tag or path to a density/state JSON file")
    common.add_argument("--k0d", type=float, default=None, help="phase separation of a pair")
    common.add_argument("--phases", default=None, help="comma-separated k0*x_n, one per emitter")
    common.add_argument("--gamma", type=float, default=1.0)
    common.add_argument("--gamma-over-omega", type=float, default=0.05)
    common.add_argument("--engine", default=None)
    common.add_argument("--t-max", type=float, default=None)
    common.add_argument("--t-count", type=int, default=101, help="output time samples")
    common.add_argument("--dt", type=float, default=None, help="largest integration step")
    common.add_argument("--w-halfwidth", type=float, default=30.0, help="window half width in units of gamma")
    common.add_argument("--w-count", type=int, default=4001)
    common.add_argument("--band-halfwidth", type=float, default=400.0, help="oracle band, units of gamma")
    common.add_argument("--mode-spacing", type=float, default=0.05, help="oracle mode spacing, units of gamma")
    common.add_argument("--output", default=None)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    parser = argparse.ArgumentParser(prog="wgqed", description="Collective emission of emitters in a waveguide.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


# ---------------------------------------------------------------- validation

def _config(a) -> SystemConfig:
    if a.n < 1:
        raise UsageError("--n", "must be at least 1")
    if not (a.gamma > 0 and math.isfinite(a.gamma)):
        raise UsageError("--gamma", "must be positive")
    if not (a.gamma_over_omega > 0 and math.isfinite(a.gamma_over_omega)):
        raise UsageError("--gamma-over-omega", "must be positive")
    omega = a.gamma / a.gamma_over_omega
    if a.phases is not None:
        if a.k0d is not None:
            raise UsageError("--phases", "give either --phases or --k0d")
        try:
            ph = tuple(float(x) for x in a.phases.split(","))
        except ValueError:
            raise UsageError("--phases", "expected comma-separated numbers") from None
        if len(ph) != a.n or not all(math.isfinite(x) for x in ph):
            raise UsageError("--phases", f"need {a.n} finite values")
        return SystemConfig(a.n, omega, a.gamma, ph)
    if a.k0d is not None:
        if a.n != 2:
            raise UsageError("--k0d", "only meaningful for --n 2")
        if not math.isfinite(a.k0d):
            raise UsageError("--k0d", "must be finite")
        return SystemConfig.pair(a.k0d, omega, a.gamma)
    if a.n >= 2:
        raise UsageError("--k0d", "required for two or more emitters (or use --phases)")
    return SystemConfig(1, omega, a.gamma)


def parse_initial(value: str, n: int) -> tuple[str | None, np.ndarray]:
    tags = TWO_QUBIT_TAGS if n == 2 else ONE_QUBIT_TAGS if n == 1 else ()
    if value in tags:
        return value, density_from_tag(value, n)
    if n > 2 and len(value) == n and set(value) <= set("ge"):
        return value, np.outer(ket(value), ket(value))
    if not os.path.isfile(value):
        raise UsageError("--initial", f"unknown tag or missing file {value!r}")
    try:
        rho = load_density(value)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError("--initial", str(exc)) from None
    if rho.shape[0] != 2**n:
        raise UsageError("--initial", f"state dimension {rho.shape[0]} does not match --n {n}")
    return None, rho


def _need_closed_form_pair(run: Run) -> None:
    if run.config.n_qubits > 2:
        raise UsageError("--engine", "closed forms exist for one or two emitters only")
    if run.config.n_qubits == 2 and run.args.phases is not None:
        raise UsageError("--phases", "closed forms use --k0d (emitters at -d/2, +d/2)")


def _step(run: Run, span: float) -> float:
    limit = dyn.max_step(run.config.omega, run.config.gamma)
    dt = run.args.dt if run.args.dt is not None else min(dyn.DEFAULT_DT, limit)
    if not (dt > 0) or dt > limit * (1 + 1e-12):
        raise UsageError("--dt", f"must be positive and at most {limit:.6g}")
    return span / math.ceil(span / dt - 1e-9) if span > 0 else dt


def _t_max(run: Run, default: float) -> float:
    t = run.args.t_max if run.args.t_max is not None else default
    if not (t > 0):
        raise UsageError("--t-max", "must be positive")
    return t


def _default_horizon(run: Run) -> float:
    if run.config.n_qubits == 2 and run.tag is not None and run.args.k0d is not None:
        return cf.long_time(run.tag, run.args.k0d, run.config.gamma)
    return 12.0 / run.config.gamma


def _omegas(run: Run) -> np.ndarray:
    a = run.args
    if not (a.w_halfwidth > 0) or a.w_count < 2:
        raise UsageError("--w-halfwidth", "window must be positive with --w-count >= 2")
    return dyn.default_omegas(run.config.omega, run.config.gamma, a.w_halfwidth, a.w_count)


def _times(run: Run, t_max: float) -> np.ndarray:
    if run.args.t_count < 2:
        raise UsageError("--t-count", "need at least two samples")
    if not math.isfinite(t_max):
        raise UsageError("--t-max", "must be finite for time series")
    return np.linspace(0.0, t_max, run.args.t_count)


# ---------------------------------------------------------------- finals

def _finals(n: int) -> list[tuple[str, np.ndarray]]:
    if n == 2:
        return [(lab, bell_ket(lab)) for lab in "GESA"] + [("eg", ket("eg")), ("ge", ket("ge"))]
    return [(lab, ket(lab)) for lab in product_labels(n)]


def _trace_with(rho: np.ndarray, op: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,ji->...", rho, op).real


# ---------------------------------------------------------------- commands

def cmd_probabilities(run: Run):
    t_max = _t_max(run, 5.0 / run.config.gamma)
    times = _times(run, t_max)
    finals = _finals(run.config.n_qubits)
    n, c = run.config.n_qubits, run.config
    engine = run.args.engine
    if engine == "closed-form":
        _need_closed_form_pair(run)
        coeffs = (cf.one_qubit_coefficients(times, c.omega, c.gamma) if n == 1
                  else cf.two_qubit_coefficients(times, c.k0d, c.omega, c.gamma, basis="product"))
        d = c.dim
        cols = []
        for _, f in finals:
            proj = np.outer(f, f.conj()).reshape(d * d)
            op = np.einsum("k,...kl->...l", proj, coeffs).reshape(times.shape + (d, d))
            cols.append(_trace_with(op, run.rho0))
        values = np.column_stack(cols)
    elif engine == "ode":
        spacing = times[1] - times[0]
        dt = _step(run, spacing)
        stride = int(round(spacing / dt))
        _, rhos = dyn.density_series(build_generator(c), run.rho0, t_max, dt, check_step=False)
        rhos = rhos[::stride]
        values = np.column_stack([_trace_with(rhos, np.outer(f, f.conj())) for _, f in finals])
    else:
        series = _oracle_run(run, t_max, times[1] - times[0])
        amps = series.qubit_amplitudes
        cols = []
        for lab, f in finals:
            single = orc.single_excitation_weights(f, n)
            if single is not None:
                cols.append(np.abs(amps @ single.conj()) ** 2)
            elif np.allclose(f, ket("g" * n)):
                cols.append(1.0 - np.sum(np.abs(amps) ** 2, axis=1))
            else:
                cols.append(np.zeros(len(series.times)))
        values = np.column_stack(cols)
        times = series.times
    columns = ["t"] + [f"P_{lab}" for lab, _ in finals]
    header = {"quantity": "transition probability", "units": "dimensionless; t in the units of 1/gamma"}
    return header, columns, np.column_stack([times, values])


def _oracle_pure_state(run: Run) -> np.ndarray:
    w, v = np.linalg.eigh(run.rho0)
    if w[-1] < 1 - 1e-10:
        raise UsageError("--initial", "oracle needs a pure state")
    psi = v[:, -1]
    return psi / np.linalg.norm(psi)


def _oracle_run(run: Run, t_max: float, sample: float | None = None) -> orc.BathSeries:
    g = run.config.gamma
    try:
        bath = orc.BathConfig(run.args.band_halfwidth * g, run.args.mode_spacing * g)
    except ValueError as exc:
        raise UsageError("--band-halfwidth", str(exc)) from None
    if bath.recurrence_time <= t_max:
        raise UsageError("--t-max", f"must stay below the recurrence time {bath.recurrence_time:.6g}")
    limit = 0.1 / bath.band_halfwidth
    dt, store = limit, 10
    if sample is not None:
        store = math.ceil(sample / limit - 1e-9)
        dt = sample / store
    n_steps = round(t_max / dt)
    t_max = n_steps * dt
    try:
        return orc.evolve_bath(run.config, bath, _oracle_pure_state(run), t_max, dt, store_every=store)
    except ValueError as exc:
        raise UsageError("--initial", str(exc)) from None


def _spectrum_closed_form(run: Run, w: np.ndarray, t: float) -> np.ndarray:
    _need_closed_form_pair(run)
    c = run.config
    if c.n_qubits == 1:
        return cf.one_qubit_spectrum(w, t, c.omega, c.gamma, run.rho0[1, 1].real)
    if run.tag is None:
        raise UsageError("--initial", "closed-form spectra need a state tag; try --engine quadrature")
    return cf.two_qubit_spectrum(run.tag, w, t, c.k0d, c.omega, c.gamma)


def _spectrum_quadrature(run: Run, w: np.ndarray, t: float) -> np.ndarray:
    if not math.isfinite(t):
        raise UsageError("--t-max", "quadrature needs a finite horizon")
    dt = _step(run, t)
    return dyn.spectrum_quadrature(run.config, run.rho0, w, t, dt).values


def cmd_spectrum(run: Run):
    t = _t_max(run, _default_horizon(run))
    engine = run.args.engine
    if engine == "oracle":
        series = _oracle_run(run, t)
        try:
            w, vals = orc.oracle_spectrum(series, branch=1)
        except ValueError as exc:
            raise UsageError("--t-max", str(exc)) from None
        half = run.args.w_halfwidth * run.config.gamma
        sel = np.abs(w - run.config.omega) <= half * (1 + 1e-12)
        w, vals = w[sel], vals[sel]
    else:
        w = _omegas(run)
        vals = _spectrum_closed_form(run, w, t) if engine == "closed-form" else _spectrum_quadrature(run, w, t)
    header = {"quantity": "photon number per mode", "units": "per unit angular frequency"}
    return header, ["omega", "value"], np.column_stack([w, vals])


def cmd_emission_rate(run: Run):
    t_max = _t_max(run, 5.0 / run.config.gamma)
    times = _times(run, t_max)
    c = run.config
    if run.args.engine == "closed-form":
        _need_closed_form_pair(run)
        if c.n_qubits == 1:
            vals = cf.one_qubit_emission_rate(times, c.gamma, run.rho0[1, 1].real)
        elif run.tag is None:
            raise UsageError("--initial", "closed-form rates need a state tag; try --engine ode")
        else:
            vals = cf.two_qubit_emission_rate(run.tag, times, c.k0d, c.gamma)
    else:
        spacing = times[1] - times[0]
        dt = _step(run, spacing)
        stride = int(round(spacing / dt))
        _, rhos = dyn.density_series(build_generator(c), run.rho0, t_max, dt, check_step=False)
        splus = dyn.collective_raising(c, 1)
        vals = 0.5 * c.gamma * _trace_with(rhos[::stride], splus @ splus.conj().T)
    header = {"quantity": "forward emission rate", "units": "photons per unit time"}
    return header, ["t", "value"], np.column_stack([times, vals])


def cmd_photon_mean(run: Run):
    t = _t_max(run, 5.0 / run.config.gamma)
    if not math.isfinite(t):
        raise UsageError("--t-max", "must be finite")
    w = _omegas(run)
    c = run.config
    if run.args.engine == "closed-form":
        _need_closed_form_pair(run)
        if c.n_qubits == 1:
            vals = cf.one_qubit_photon_means(w, t, run.rho0, c.omega, c.gamma)[0]
        elif run.tag is None:
            raise UsageError("--initial", "closed-form photon means need a state tag")
        else:
            vals = cf.two_qubit_photon_mean(run.tag, w, t, c.k0d, c.omega, c.gamma)
    else:
        dt = _step(run, t)
        field = dyn.evolve_field(build_generator(c), t, dt, check_step=False)
        vals = dyn.photon_mean_numeric(field, run.rho0, w, t, c)
    header = {"quantity": "forward mode amplitude <a_k(t)>", "units": "sqrt(time) with g_k=sqrt(gamma)"}
    return header, ["omega", "re", "im"], np.column_stack([w, vals.real, vals.imag])


def cmd_cross_check(run: Run):
    t = _t_max(run, _default_horizon(run))
    w = _omegas(run)
    ref = _spectrum_closed_form(run, w, t)
    num = _spectrum_quadrature(run, w, t)
    peak = float(np.max(np.abs(ref)))
    diff = float(np.max(np.abs(ref - num)))
    rel = diff / peak if peak > 0 else diff
    header = {"quantity": "photon number per mode, closed form vs quadrature",
              "units": "per unit angular frequency", "max_abs_deviation": repr(diff),
              "max_rel_peak_deviation": repr(rel)}
    return header, ["omega", "closed_form", "quadrature"], np.column_stack([w, ref, num]), rel


_HANDLERS = {"probabilities": cmd_probabilities, "spectrum": cmd_spectrum, "emission-rate": cmd_emission_rate,
             "photon-mean": cmd_photon_mean, "cross-check": cmd_cross_check}


def _header(run: Run, extra: dict) -> dict:
    a, c = run.args, run.config
    head = {"command": a.command, "engine": a.engine, "n": c.n_qubits, "initial": a.initial,
            "k0d": repr(a.k0d) if a.k0d is not None else "", "phases": ",".join(repr(p) for p in c.phases),
            "gamma": repr(c.gamma), "omega": repr(c.omega), "gamma_over_omega": repr(a.gamma_over_omega),
            "t_max": repr(a.t_max) if a.t_max is not None else "default",
            "dt": repr(a.dt) if a.dt is not None else "default",
            "basis": "product g=0,e=1, emitter 1 most significant; S=(ge+eg)/sqrt2, A=(ge-eg)/sqrt2",
            "omega_convention": OMEGA_CONVENTION}
    head.update(extra)
    return head


def run(argv=None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.engine = args.engine or ENGINES[args.command][0]
    try:
        if args.engine not in ENGINES[args.command]:
            raise UsageError("--engine", f"{args.command} supports {', '.join(ENGINES[args.command])}")
        config = _config(args)
        tag, rho0 = parse_initial(args.initial, args.n)
        job = Run(args, config, rho0, tag)
        result = _HANDLERS[args.command](job)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FloatingPointError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 3
    header, columns, data = result[:3]
    if not np.all(np.isfinite(data)):
        print("error: non-finite values in the result", file=sys.stderr)
        return 3
    text = write_table(args.output, _header(job, header), columns, data, args.format)
    if args.command == "cross-check":
        rel = result[3]
        print(f"max relative peak deviation: {rel:.3e}", file=stdout)
        return 0 if rel < CROSS_CHECK_TOL else 1
    if args.output is None:
        stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
