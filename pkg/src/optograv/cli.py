"""Command-line front end.

Subcommands: steady | uncertainty | fig2 | qfi | validate.
Shared flags: --config PATH, --out PATH, --format {csv,jsonl}, --jobs N,
--dims A,B[,C], --regime NAME.  The environment variable OPTOGRAV_LOG
(error|warn|info|debug) sets the log level.

Exit codes: 0 success, 2 configuration error, 3 solver failure; validate
returns 1 when any tolerance is breached.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import fluctuations as fl
from . import metrology as mt
from . import oracle as orc
from . import weak_drive as wd
from .config import (ConfigError, RunConfig, build_run_config, fmt17,
                     parse_config_file, parse_regime, sweep_points)
from .exceptions import (BeyondCriticalError, NoSteadyStateError, OptogravError)
from .mean_field import Regime, regime_for, steady_state
from .params import SystemParams, two_photon_critical

log = logging.getLogger("optograv")

_PARAM_COLUMNS = ("omega_b", "kappa", "lambda", "gamma_a", "gamma_b", "mass",
                  "g", "eta", "chi", "upsilon", "theta_tilt", "force_F")


def _setup_logging() -> None:
    level = os.environ.get("OPTOGRAV_LOG", "warn").lower()
    levels = {"error": logging.ERROR, "warn": logging.WARNING,
              "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _param_values(p: SystemParams) -> dict:
    return {"omega_b": p.omega_b, "kappa": p.kappa, "lambda": p.lam,
            "gamma_a": p.gamma_a, "gamma_b": p.gamma_b, "mass": p.mass,
            "g": p.g, "eta": p.eta, "chi": p.chi, "upsilon": p.upsilon,
            "theta_tilt": p.theta_tilt, "force_F": p.force_F}


def _write_records(cfg: RunConfig, schema: str, columns: tuple, records: list) -> None:
    """Serialize records deterministically (17 significant digits, LF)."""
    if cfg.format == "csv":
        lines = [f"# optograv-schema: {schema}", ",".join(columns)]
        for rec in records:
            lines.append(",".join(
                rec[c] if isinstance(rec[c], str) else fmt17(rec[c])
                for c in columns))
        text = "\n".join(lines) + "\n"
    else:
        out = []
        for rec in records:
            obj = {"schema": schema}
            for c in columns:
                v = rec[c]
                if isinstance(v, float):
                    v = None if math.isnan(v) else float(fmt17(v))
                elif isinstance(v, np.bool_):
                    v = bool(v)
                obj[c] = v
            out.append(json.dumps(obj, sort_keys=False, separators=(",", ":")))
        text = "\n".join(out) + "\n"
    if cfg.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# steady

_STEADY_COLUMNS = _PARAM_COLUMNS + (
    "regime", "alpha_re", "alpha_im", "beta_re", "beta_im", "stable",
    "eig1_re", "eig1_im", "eig2_re", "eig2_im", "eig3_re", "eig3_im",
    "eig4_re", "eig4_im", "n_fluct", "var_M")


def _steady_record(args) -> dict:
    p, regime = args
    rec = _param_values(p)
    rec["regime"] = regime.value
    empty = {k: float("nan") for k in _STEADY_COLUMNS if k not in rec}
    rec.update(empty)
    try:
        mf = steady_state(p, regime)
    except (BeyondCriticalError, NoSteadyStateError):
        rec["stable"] = False
        if regime.nonreciprocal:
            # mechanics decouples, so its amplitude and the spectrum survive
            beta = -1j * p.gravity_coupling_net / (1j * p.omega_b + p.gamma_b + p.kappa)
            rec["beta_re"], rec["beta_im"] = beta.real, beta.imag
            ev = np.linalg.eigvals(fl.drift_matrix(p, 0.0, beta))
            for i, e in enumerate(sorted(ev, key=lambda z: (z.real, z.imag))):
                rec[f"eig{i+1}_re"], rec[f"eig{i+1}_im"] = e.real, e.imag
        return rec
    ls = fl.build_drift(p, mf)
    rec["alpha_re"], rec["alpha_im"] = mf.alpha.real, mf.alpha.imag
    rec["beta_re"], rec["beta_im"] = mf.beta.real, mf.beta.imag
    rec["stable"] = bool(ls.stable)
    for i, e in enumerate(sorted(ls.eigenvalues, key=lambda z: (z.real, z.imag))):
        rec[f"eig{i+1}_re"], rec[f"eig{i+1}_im"] = e.real, e.imag
    if ls.stable:
        mom = fl.steady_covariance(ls)
        rec["n_fluct"] = mom.n_a
        rec["var_M"] = fl.homodyne_variance(mom)
    return rec


def cmd_steady(cfg: RunConfig) -> int:
    points = sweep_points(cfg)
    regime = cfg.regime
    tasks = [(p, regime or regime_for(p)) for p in points]
    records = _map_tasks(_steady_record, tasks, cfg.jobs)
    _write_records(cfg, "steady.v1", _STEADY_COLUMNS, records)
    return 0


# ---------------------------------------------------------------------------
# uncertainty

_UNCERT_COLUMNS = _PARAM_COLUMNS + (
    "regime", "signal", "noise_var", "delta_g", "validity_ratio")


def _uncertainty_record(args) -> dict:
    p, regime = args
    rep = mt.uncertainty(p, regime)
    rec = _param_values(p)
    rec.update(regime=regime.value, signal=rep.signal, noise_var=rep.noise_var,
               delta_g=rep.delta_g, validity_ratio=rep.validity_ratio)
    return rec


def cmd_uncertainty(cfg: RunConfig) -> int:
    if cfg.preset == "regime_ratio":
        R, rep_nr, rep_r = mt.regime_ratio(cfg.params)
        cols = ("R", "delta_g_nr", "delta_g_r", "validity_nr", "validity_r")
        _write_records(cfg, "regime-ratio.v1", cols, [{
            "R": R, "delta_g_nr": rep_nr.delta_g, "delta_g_r": rep_r.delta_g,
            "validity_nr": rep_nr.validity_ratio,
            "validity_r": rep_r.validity_ratio}])
        return 0
    if cfg.preset == "two_photon_scaling":
        fracs = [float(s) for s in
                 str(cfg.extra.get("chi_fracs", "0.9,0.99,0.999,0.9999")).split(",")]
        chi_c = two_photon_critical(cfg.params)
        margins, sig, n_fluct, dgv = [], [], [], []
        for frac in fracs:
            q = cfg.params.replace(chi=frac * chi_c)
            rep = mt.uncertainty(q, Regime.NONRECIPROCAL_TWO_PHOTON)
            mom = fl.steady_covariance(fl.build_drift(q, rep.mean_field))
            margins.append(chi_c ** 2 - q.chi ** 2)
            sig.append(rep.signal)
            n_fluct.append(mom.n_a)
            dgv.append(rep.delta_g)
        s_sig, _ = fl.fit_power_law(margins, sig)
        s_noise, _ = fl.fit_power_law(margins, n_fluct)
        s_dg, _ = fl.fit_power_law(margins, dgv)
        cols = ("signal_slope", "noise_slope", "delta_g_slope")
        _write_records(cfg, "two-photon-scaling.v1", cols, [{
            "signal_slope": s_sig, "noise_slope": s_noise,
            "delta_g_slope": s_dg}])
        return 0
    if cfg.params.g == 0.0:
        raise NoSteadyStateError("degenerate estimand: g = 0")
    points = sweep_points(cfg)
    tasks = [(p, cfg.regime or regime_for(p)) for p in points]
    records = _map_tasks(_uncertainty_record, tasks, cfg.jobs)
    _write_records(cfg, "uncertainty.v1", _UNCERT_COLUMNS, records)
    return 0


# ---------------------------------------------------------------------------
# fig2-style ratio map

def cmd_fig2(cfg: RunConfig) -> int:
    e = cfg.extra
    kappas = np.geomspace(e.get("kappa_min", 0.01), e.get("kappa_max", 5.0),
                          int(e.get("kappa_count", 50)))
    gammas = np.geomspace(e.get("gamma_a_min", 0.1), e.get("gamma_a_max", 10.0),
                          int(e.get("gamma_a_count", 50)))
    R = wd.ratio_sweep(kappas, gammas, gamma_b=cfg.params.gamma_b,
                       omega_b=cfg.params.omega_b)
    records = [{"kappa": k, "gamma_a": ga, "R_w": R[i, j]}
               for i, k in enumerate(kappas) for j, ga in enumerate(gammas)]
    _write_records(cfg, "ratio-map.v1", ("kappa", "gamma_a", "R_w"), records)
    return 0


# ---------------------------------------------------------------------------
# qfi

_QFI_COLUMNS = _PARAM_COLUMNS + ("regime", "qfi_numeric", "qfi_closed",
                                 "closed_form_flagged")


def _qfi_record(p: SystemParams) -> dict:
    res = wd.qfi(p)
    rec = _param_values(p)
    rec.update(regime=res.regime, qfi_numeric=res.numeric,
               qfi_closed=res.closed_form,
               closed_form_flagged=res.closed_form_flagged)
    return rec


def cmd_qfi(cfg: RunConfig) -> int:
    records = _map_tasks(_qfi_record, sweep_points(cfg), cfg.jobs)
    _write_records(cfg, "qfi.v1", _QFI_COLUMNS, records)
    return 0


# ---------------------------------------------------------------------------
# validate

def cmd_validate(cfg: RunConfig) -> int:
    """Oracle comparison battery; exit 1 when any tolerance is breached."""
    from .model import build_hamiltonian
    tol = float(cfg.extra.get("tolerance", 0.05))
    p = cfg.params
    if p.eta == 0.0:
        p = p.replace(eta=0.05)
    if not p.is_nonreciprocal:
        p = p.replace(lam=p.kappa)
    checks = []

    dims = cfg.dims[:2]
    ops = build_hamiltonian(p, dims)
    sd = orc.steady_state(ops)
    mf = steady_state(p, Regime.NONRECIPROCAL_SINGLE)
    mom = fl.steady_covariance(fl.build_drift(p, mf))
    na_lin = mf.photon_number + mom.n_a
    na_orc = orc.photon_number(sd, ops)
    checks.append(("photon_number", abs(na_lin / na_orc - 1.0), tol))
    m1, var = orc.homodyne_moments(sd, ops)
    checks.append(("mean_homodyne", abs(2.0 * mf.alpha.real / m1 - 1.0), tol))
    checks.append(("homodyne_variance",
                   abs(fl.homodyne_variance(mom) / var - 1.0), tol))

    small = build_hamiltonian(p, (4, 4))
    d_methods = orc.trace_distance(
        orc.steady_state(small, orc.Method.NULL_SPACE).rho,
        orc.steady_state(small, orc.Method.TIME_EVOLUTION).rho)
    checks.append(("dual_method_trace_distance", d_methods, 1e-6))

    if cfg.oracle:
        from .model import mu_for_lambda
        gamma_c1 = 50.0 * max(p.gamma_a, p.gamma_b)
        gamma_c2 = 500.0 * max(p.gamma_a, p.gamma_b)
        r1 = orc.validate_adiabatic_elimination(
            p.replace(lam=0.0), mu_for_lambda(p.kappa, 0.0, gamma_c1), 0.0, gamma_c1)
        r2 = orc.validate_adiabatic_elimination(
            p.replace(lam=0.0), mu_for_lambda(p.kappa, 0.0, gamma_c2), 0.0, gamma_c2)
        checks.append(("adiabatic_distance_ratio50", r1.trace_distance, 1e-2))
        checks.append(("adiabatic_trend",
                       r2.trace_distance / r1.trace_distance, 1.0))

    records = [{"check": name, "value": val, "tolerance": t,
                "passed": bool(val < t)} for name, val, t in checks]
    _write_records(cfg, "validate.v1", ("check", "value", "tolerance", "passed"),
                   records)
    return 0 if all(r["passed"] for r in records) else 1


# ---------------------------------------------------------------------------
# plumbing

def _map_tasks(fn, tasks, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, tasks))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="optograv",
        description="Dissipative-optomechanics gravimetry toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in (("steady", cmd_steady), ("uncertainty", cmd_uncertainty),
                     ("fig2", cmd_fig2), ("qfi", cmd_qfi),
                     ("validate", cmd_validate)):
        sp = sub.add_parser(name)
        sp.add_argument("--config", metavar="PATH")
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--format", choices=("csv", "jsonl"))
        sp.add_argument("--jobs", type=int, metavar="N")
        sp.add_argument("--dims", metavar="A,B[,C]")
        sp.add_argument("--regime", metavar="NAME")
        sp.set_defaults(handler=fn)
    return ap


def _merged_config(args) -> RunConfig:
    values = parse_config_file(args.config) if args.config else {}
    if args.out is not None:
        values["out"] = args.out
    if args.format is not None:
        values["format"] = args.format
    if args.jobs is not None:
        values["jobs"] = args.jobs
    if args.dims is not None:
        values["dims"] = tuple(int(s) for s in args.dims.split(","))
    if args.regime is not None:
        values["regime"] = args.regime
        parse_regime(args.regime)  # fail fast with exit 2 on a typo
    return build_run_config(values)


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        cfg = _merged_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.handler(cfg)
    except OptogravError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
