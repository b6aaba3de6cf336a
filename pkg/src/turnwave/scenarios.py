"""Scenario pipelines: each canonical experiment as a single driver function.

Every scenario consumes a ScenarioConfig, writes its artifacts (snapshots,
diagnostics.csv, events.json, report.json, SVG plots) under
config.output_dir, and returns a ScenarioResult whose exit_code follows the
CLI convention: 0 success, 3 numerical failure, 4 certificate failure.
Config errors (exit 2) are raised before any pipeline starts.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import strip as strip_mod
from .closures import ClosureIterationError, PhysicalConstants
from .config import ScenarioConfig, dump_config
from .curve import (Curve, PERIODIC, as_graph, derivative, graph_curve,
                    graph_slope_sup, load_csv, min_slope, resample)
from .diagnostics import (sigma10, sigma10_checklist, sigma_muskat,
                          verify_weighted_rt, weight_h, weight_hbar,
                          _negative_intervals)
from .initial_data import (TurningParams, dv1_at_zero_periodic,
                           turning_candidate_open, turning_candidate_periodic,
                           turning_certificate, waterwave_datum)
from .stepping import (BlowUpError, GRAPH_BLOWUP, RT_SIGN_CHANGE, TURNING,
                       advance, initial_muskat_omega, muskat_state, run,
                       waterwave_state)
from .strip import (InsufficientAnalyticityError, RegimeExitError, ck_solve,
                    extend_to_strip, linear_shrink, strip_distance)
from .svg import render_curve, render_series

# fixed stage parameters of the breakdown pipeline (the backward
# analyticity radius is generous because the candidate is band-limited)
BACKWARD_STRIP_R0 = 0.1
BACKWARD_PANELS = 16
CONTINUATION_NORM_BOUND = 1e12
RT_RUN_LENGTH = 3


@dataclass
class ScenarioResult:
    scenario: str
    exit_code: int
    report: dict = field(default_factory=dict)
    message: str = ""


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _emit_common(cfg: ScenarioConfig, report: dict):
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    _write(os.path.join(out, "config.txt"), dump_config(cfg))
    _write(os.path.join(out, "report.json"),
           json.dumps(report, indent=1, sort_keys=False) + "\n")


def _emit_trajectory_svgs(out, traj, consts):
    t = traj.column("t")
    _write(os.path.join(out, "min_slope.svg"),
           render_series(t, traj.column("min_slope"), "min_slope"))
    _write(os.path.join(out, "sigma_min.svg"),
           render_series(t, traj.column("sigma_min"), "sigma_min"))
    tl, curve, _ = traj.snapshots[-1]
    rep = sigma_muskat(curve, consts)
    _write(os.path.join(out, "interface.svg"),
           render_curve(curve.alpha, curve.z1, curve.z2,
                        rep.negative_intervals, title=f"interface t={tl:.6g}"))


def _fit_decay_rate(times, amplitudes):
    """Least-squares slope of log|amplitude| against time."""
    amp = np.asarray(amplitudes, dtype=float)
    keep = amp > 1e-300
    slope, _ = np.polyfit(np.asarray(times)[keep], np.log(amp[keep]), 1)
    return float(-slope)


def _fit_frequency(times, series, omega0):
    """Angular frequency of a standing oscillation started at an amplitude
    extremum: least-squares fit of A cos(omega t), seeded at omega0."""
    from scipy.optimize import curve_fit
    t = np.asarray(times, dtype=float)
    v = np.asarray(series, dtype=float)
    (amp, omega), _ = curve_fit(
        lambda tt, a, w: a * np.cos(w * tt), t, v, p0=(v[0], omega0))
    return float(abs(omega))


def _mode_amplitude(samples, k):
    n = len(samples)
    return 2.0 * abs(np.fft.fft(np.asarray(samples, float))[k]) / n


def _thin_snapshots(traj, cadence):
    """Keep every cadence-th snapshot (plus the last) before writing; the
    linear scenarios record every step in memory for the mode fit."""
    keep = traj.snapshots[::cadence]
    if traj.snapshots and traj.snapshots[-1] is not keep[-1]:
        keep.append(traj.snapshots[-1])
    traj.snapshots = keep


def _max_run(mask, periodic=True):
    mask = np.asarray(mask, bool)
    if not mask.any():
        return 0
    if mask.all():
        return mask.size
    doubled = np.concatenate([mask, mask]) if periodic else mask
    best = cur = 0
    for v in doubled:
        cur = cur + 1 if v else 0
        best = max(best, cur)
    return min(best, mask.size)


# --- scenarios ---------------------------------------------------------------

def muskat_linear(cfg: ScenarioConfig) -> ScenarioResult:
    """Modal decay of a small periodic Muskat graph versus the analytic rate
    darcy_factor * |k| / 2."""
    consts = cfg.constants()
    k = cfg.wave.k
    eps = cfg.wave.epsilon
    curve = graph_curve(eps * np.cos(k * np.linspace(
        0.0, 2.0 * np.pi, cfg.grid.n, endpoint=False)))
    state = muskat_state(curve, consts=consts,
                         filter_threshold=cfg.numerics.filter_threshold)
    traj, _, _ = run(state, cfg.numerics.t_end, cfg.numerics.dt,
                     snapshot_cadence=1, stop_on=())
    times = traj.times
    amps = [_mode_amplitude(c.z2, k) for _, c, _ in traj.snapshots]
    measured = _fit_decay_rate(times, amps)
    theory = consts.darcy_factor * k / 2.0
    rel = abs(measured - theory) / theory
    report = {"k": k, "measured_rate": measured, "theory_rate": theory,
              "relative_error": rel, "pass": bool(rel < 5e-3)}
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    _thin_snapshots(traj, cfg.numerics.snapshot_cadence)
    traj.write_dir(out)
    _emit_common(cfg, report)
    _emit_trajectory_svgs(out, traj, consts)
    _write(os.path.join(out, "mode_amplitude.svg"),
           render_series(times, np.log(np.maximum(amps, 1e-300)),
                         f"log|f_hat_{k}|"))
    code = 0 if report["pass"] else 4
    return ScenarioResult(cfg.scenario, code, report,
                          f"decay rate {measured:.6g} vs {theory:.6g}")


def muskat_turning(cfg: ScenarioConfig) -> ScenarioResult:
    """Open-interface turning: certificate on the exact candidate, then a
    forward run from the tilted unfolding until the Turning event."""
    consts = cfg.constants()
    params = cfg.turning_params()
    exact = turning_candidate_open(params, n=cfg.grid.n, L=cfg.grid.L)
    cert = turning_certificate(exact)
    tilted = turning_candidate_open(params, n=cfg.grid.n, L=cfg.grid.L,
                                    tilt=cfg.turning.tilt)
    state = muskat_state(tilted, consts=consts,
                         filter_threshold=cfg.numerics.filter_threshold)
    traj, log, _ = run(state, cfg.numerics.t_end, cfg.numerics.dt,
                       snapshot_cadence=cfg.numerics.snapshot_cadence,
                       stop_on=(TURNING,))
    ev = log.first(TURNING)
    report = {
        "certificate": {"passed": cert.passed, "min_slope": cert.min_slope,
                        "dz2_at_zero": cert.dz2_at_zero,
                        "dv1_at_zero": cert.dv1_at_zero},
        "turning_time": ev.t if ev else None,
        "pass": bool(cert.passed and ev is not None),
    }
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    traj.write_dir(out)
    _emit_common(cfg, report)
    _emit_trajectory_svgs(out, traj, consts)
    code = 0 if report["pass"] else 4
    msg = (f"t* = {ev.t:.6g}" if ev else "no Turning event before t_end")
    return ScenarioResult(cfg.scenario, code, report, msg)


def muskat_breakdown(cfg: ScenarioConfig) -> ScenarioResult:
    """Periodic breakdown: certificate -> backward analytic construction of
    a graph datum -> forward run to Turning -> strip continuation past
    turnover until the RT function goes negative on >= 3 nodes."""
    consts = cfg.constants()
    params = cfg.turning_params()
    pref = consts.darcy_factor / (4.0 * np.pi)
    candidate = turning_candidate_periodic(params, n=cfg.grid.n)
    dv1 = dv1_at_zero_periodic(candidate, pref)
    cert = turning_certificate(candidate, dv1=dv1)
    report = {"certificate": {"passed": cert.passed, "dv1_at_zero": dv1,
                              "dz2_at_zero": cert.dz2_at_zero}}
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    if not cert.passed:
        report["pass"] = False
        _emit_common(cfg, report)
        return ScenarioResult(cfg.scenario, 4, report,
                              "turning certificate failed")

    # backward-in-time analytic continuation produces a strict graph datum
    sc0 = extend_to_strip(candidate, BACKWARD_STRIP_R0, t=0.0)
    back = ck_solve(sc0, cfg.wave.delta, -pref, panels=BACKWARD_PANELS,
                    tol=cfg.strip.tol, max_iter=cfg.strip.max_iter,
                    norm_bound=CONTINUATION_NORM_BOUND)
    datum = back.curves[-1].real_curve()
    report["datum_min_slope"] = min_slope(datum).min_slope

    state = muskat_state(datum, consts=consts,
                         filter_threshold=cfg.numerics.filter_threshold)
    traj, log, final = run(state, cfg.numerics.t_end, cfg.numerics.dt,
                           snapshot_cadence=cfg.numerics.snapshot_cadence,
                           stop_on=(TURNING,))
    ev = log.first(TURNING)
    if ev is None:
        report["pass"] = False
        traj.write_dir(out)
        _emit_common(cfg, report)
        return ScenarioResult(cfg.scenario, 4, report,
                              "forward run reached no Turning event")
    report["turning_time"] = ev.t

    # handoff: resample so the truncated Fourier tail is exactly zero,
    # then continue on a shrinking strip of analyticity
    handoff = resample(final.curve, cfg.strip.M)
    sc = extend_to_strip(handoff, cfg.strip.r0, t=final.t)
    shrink = (linear_shrink(cfg.strip.r0, cfg.strip.T)
              if cfg.strip.shrink == "linear" else None)
    res = ck_solve(sc, cfg.strip.T, pref, shrink=shrink,
                   panels=cfg.strip.panels, tol=cfg.strip.tol,
                   max_iter=cfg.strip.max_iter,
                   norm_bound=CONTINUATION_NORM_BOUND)

    cont_rows = []
    rt_event = None
    for tt, sc_t in zip(res.times, res.curves):
        rc = sc_t.real_curve()
        sig = sigma_muskat(rc, consts)
        run_len = _max_run(sig.sigma < 0.0)
        cont_rows.append((final.t + tt, min_slope(rc).min_slope,
                          sig.min_sigma, run_len))
        if rt_event is None and run_len >= RT_RUN_LENGTH:
            rt_event = (final.t + tt, run_len, sig)
            traj.snapshots.append((final.t + tt, rc, None))
            break

    with open(os.path.join(out, "continuation.csv"), "w") as fh:
        fh.write("t,min_slope,sigma_min,negative_run\n")
        for row in cont_rows:
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")

    if rt_event is None:
        report["pass"] = False
        traj.write_dir(out)
        _emit_common(cfg, report)
        return ScenarioResult(cfg.scenario, 4, report,
                              "no RT sign change within continuation horizon")

    t_rt, run_len, sig = rt_event
    log.add(t_rt, RT_SIGN_CHANGE, nodes=int(run_len),
            sigma_min=float(sig.min_sigma),
            intervals=[list(map(float, iv)) for iv in sig.negative_intervals])
    report["rt_sign_change_time"] = t_rt
    report["rt_negative_nodes"] = int(run_len)
    report["event_order"] = [e.kind for e in log.events]
    report["pass"] = True
    traj.write_dir(out)
    _emit_common(cfg, report)
    _emit_trajectory_svgs(out, traj, consts)
    return ScenarioResult(cfg.scenario, 0, report,
                          f"Turning at {ev.t:.6g}, RT sign change at {t_rt:.6g}")


def waterwave_linear(cfg: ScenarioConfig) -> ScenarioResult:
    """Standing-wave frequency of a small water-wave graph versus the
    dispersion value sqrt(g |k|)."""
    consts = PhysicalConstants(rho1=0.0, rho2=cfg.physics.rho2,
                               g=cfg.physics.g, mu=cfg.physics.mu,
                               kappa=cfg.physics.kappa)
    k = cfg.wave.k
    eps = cfg.wave.epsilon
    alpha = np.linspace(0.0, 2.0 * np.pi, cfg.grid.n, endpoint=False)
    curve = graph_curve(eps * np.cos(k * alpha))
    state = waterwave_state(curve, np.zeros(cfg.grid.n), consts=consts,
                            filter_threshold=cfg.numerics.filter_threshold)
    traj, _, _ = run(state, cfg.numerics.t_end, cfg.numerics.dt,
                     snapshot_cadence=1, stop_on=())
    times = traj.times
    series = [np.real(np.fft.fft(c.z2)[k]) * 2.0 / c.n
              for _, c, _ in traj.snapshots]
    theory = float(np.sqrt(consts.g * abs(k)))
    measured = _fit_frequency(times, series, theory)
    rel = abs(measured - theory) / theory
    report = {"k": k, "measured_frequency": measured, "theory_frequency": theory,
              "relative_error": rel, "pass": bool(rel < 1e-2)}
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    _thin_snapshots(traj, cfg.numerics.snapshot_cadence)
    traj.write_dir(out)
    _emit_common(cfg, report)
    _write(os.path.join(out, "mode_series.svg"),
           render_series(times, series, f"Re f_hat_{k}"))
    code = 0 if report["pass"] else 4
    return ScenarioResult(cfg.scenario, code, report,
                          f"frequency {measured:.6g} vs {theory:.6g}")


def waterwave_turning(cfg: ScenarioConfig) -> ScenarioResult:
    """Water-wave turning from a backward-constructed graph datum: the graph
    slope sup |f_alpha| diverges and the interface leaves the graph class at
    the Turning event."""
    consts = PhysicalConstants(rho1=0.0, rho2=cfg.physics.rho2,
                               g=cfg.physics.g, mu=cfg.physics.mu,
                               kappa=cfg.physics.kappa)
    params = cfg.turning_params()
    star = turning_candidate_periodic(params, n=cfg.grid.n)
    datum, omega0 = waterwave_datum(star, cfg.wave.delta, consts=consts,
                                    dt=cfg.numerics.dt,
                                    filter_threshold=cfg.numerics.filter_threshold)
    # round trip: the datum integrated forward by delta must recover the
    # turning curve
    rt_state = advance(waterwave_state(datum, omega0, consts=consts,
                                       filter_threshold=cfg.numerics.filter_threshold),
                       cfg.wave.delta, cfg.numerics.dt)
    round_trip = float(max(np.max(np.abs(rt_state.curve.z1 - star.z1)),
                           np.max(np.abs(rt_state.curve.z2 - star.z2))))

    state = waterwave_state(datum, omega0, consts=consts,
                            filter_threshold=cfg.numerics.filter_threshold)
    traj, log, final = run(state, cfg.numerics.t_end, cfg.numerics.dt,
                           snapshot_cadence=1, stop_on=(TURNING,))
    ev_turn = log.first(TURNING)
    ev_blow = log.first(GRAPH_BLOWUP)
    graph_fails = False
    if ev_turn is not None:
        try:
            as_graph(final.curve)
        except Exception:
            graph_fails = True
    sup_fa = [graph_slope_sup(c) if np.all(derivative(c, 1)[0] > 0) else np.inf
              for _, c, _ in traj.snapshots]
    finite = [v for v in sup_fa if np.isfinite(v)]
    report = {
        "round_trip_error": round_trip,
        "turning_time": ev_turn.t if ev_turn else None,
        "graph_blowup_time": ev_blow.t if ev_blow else None,
        "max_finite_slope_sup": max(finite) if finite else None,
        "as_graph_fails_at_turning": graph_fails,
        "pass": bool(ev_turn is not None and ev_blow is not None
                     and ev_blow.t <= ev_turn.t and graph_fails
                     and round_trip < 1e-4),
    }
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    traj.write_dir(out)
    _emit_common(cfg, report)
    _write(os.path.join(out, "slope_sup.svg"),
           render_series(traj.times,
                         np.minimum(sup_fa, 1e6), "sup|f_alpha| (capped)"))
    _emit_trajectory_svgs(out, traj, consts)
    code = 0 if report["pass"] else 4
    return ScenarioResult(cfg.scenario, code, report,
                          f"turning at {ev_turn.t:.6g}" if ev_turn
                          else "no Turning event")


def ck_compare(cfg: ScenarioConfig) -> ScenarioResult:
    """Cross-validation of the strip Picard solver against the real-space
    RK4 integrator on stable small periodic data."""
    consts = cfg.constants()
    pref = consts.darcy_factor / (4.0 * np.pi)
    alpha = np.linspace(0.0, 2.0 * np.pi, cfg.grid.n, endpoint=False)
    curve = graph_curve(0.01 * np.cos(alpha) + 0.005 * np.sin(2 * alpha))
    sc = extend_to_strip(curve, cfg.strip.r0, t=0.0)
    res = ck_solve(sc, cfg.strip.T, pref, panels=cfg.strip.panels,
                   tol=cfg.strip.tol, max_iter=cfg.strip.max_iter)

    state = muskat_state(curve, consts=consts,
                         filter_threshold=cfg.numerics.filter_threshold)
    dists = []
    t_prev = 0.0
    for tt, sc_t in zip(res.times, res.curves):
        if tt > t_prev:
            state = advance(state, tt - t_prev, cfg.numerics.dt)
            t_prev = tt
        rc = sc_t.real_curve()
        dists.append(float(max(np.max(np.abs(rc.z1 - state.curve.z1)),
                               np.max(np.abs(rc.z2 - state.curve.z2)))))
    hist = list(map(float, res.contraction_history))
    ratios = [hist[i + 1] / hist[i] for i in range(len(hist) - 1) if hist[i] > 0]
    late = ratios[2:] if len(ratios) > 2 else ratios
    report = {
        "max_node_distance": max(dists),
        "iterations": res.iterations,
        "converged": res.converged,
        "contraction_history": hist,
        "max_late_ratio": max(late) if late else None,
        "pass": bool(res.converged and max(dists) < 1e-6
                     and late and max(late) < 0.9),
    }
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    _emit_common(cfg, report)
    with open(os.path.join(out, "ck_compare.csv"), "w") as fh:
        fh.write("t,node_distance\n")
        for tt, d in zip(res.times, dists):
            fh.write(f"{tt:.17g},{d:.17g}\n")
    code = 0 if report["pass"] else 4
    return ScenarioResult(cfg.scenario, code, report,
                          f"max node distance {max(dists):.3g}")


def rt_verify(cfg: ScenarioConfig) -> ScenarioResult:
    """Pointwise RT verifiers on the unperturbed periodic candidate: the
    sigma10 checklist at (x, t) = (0, 0) and the weighted inequalities on
    their time windows."""
    consts = cfg.constants()
    wp = cfg.weight_params()
    params = cfg.turning_params()
    candidate = turning_candidate_periodic(params, n=cfg.grid.n)
    dt = wp.tau / 200.0
    state = muskat_state(candidate, consts=consts,
                         filter_threshold=cfg.numerics.filter_threshold)
    traj, _, _ = run(state, wp.tau, dt, snapshot_cadence=1, stop_on=())
    times = traj.times
    curves = [c for _, c, _ in traj.snapshots]
    checklist = sigma10_checklist(curves, times)
    sig_grid = np.array([sigma10(c) for c in curves])
    weighted = verify_weighted_rt(sig_grid, candidate.alpha, times, wp)
    x = candidate.alpha
    h_vals = weight_h(x, wp.tau, wp)
    hbar_vals = weight_hbar(x, 0.5 * wp.tau ** 2, wp)
    report = {
        "sigma10_checklist": checklist,
        "weighted": {
            "hi_margin": weighted.hi_margin,
            "hbari_margin": weighted.hbari_margin,
            "hbari_bound": weighted.hbari_bound,
            "hi_pass": weighted.hi_pass,
            "hbari_pass": weighted.hbari_pass,
        },
        "h_at_origin_final_time": float(weight_h(np.array([0.0]), wp.tau, wp)[0]),
        "weights_nonnegative": bool(np.all(h_vals >= 0)
                                    and np.all(hbar_vals >= 0)),
        "pass": bool(checklist["p2"]["pass"] and checklist["p4"]["pass"]
                     and checklist["p5"]["pass"]
                     and checklist["p6"]["value"] < 0.0
                     and checklist["p7"]["value"] > 0.0
                     and np.all(h_vals >= 0) and np.all(hbar_vals >= 0)),
    }
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    traj.write_dir(out)
    _emit_common(cfg, report)
    _write(os.path.join(out, "rt_report.json"),
           json.dumps(report, indent=1) + "\n")
    _write(os.path.join(out, "sigma10.svg"),
           render_series(candidate.alpha, sig_grid[0], "sigma10(x, 0)"))
    code = 0 if report["pass"] else 4
    return ScenarioResult(cfg.scenario, code, report,
                          "sigma10 checklist and weighted inequalities")


_PIPELINES = {
    "muskat-linear": muskat_linear,
    "muskat-turning": muskat_turning,
    "muskat-breakdown": muskat_breakdown,
    "waterwave-linear": waterwave_linear,
    "waterwave-turning": waterwave_turning,
    "ck-compare": ck_compare,
    "rt-verify": rt_verify,
}

NUMERICAL_ERRORS = (BlowUpError, RegimeExitError, InsufficientAnalyticityError,
                    ClosureIterationError, FloatingPointError)


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    pipeline = _PIPELINES[cfg.scenario]
    try:
        return pipeline(cfg)
    except NUMERICAL_ERRORS as exc:
        os.makedirs(cfg.output_dir, exist_ok=True)
        report = {"error": f"{type(exc).__name__}: {exc}", "pass": False}
        _emit_common(cfg, report)
        return ScenarioResult(cfg.scenario, 3, report,
                              f"numerical failure: {exc}")


# --- post-hoc verification and rendering of a trajectory directory -----------

def verify_trajectory(path) -> ScenarioResult:
    """Consistency checks on an artifact directory: events well-ordered
    (Turning precedes RTSignChange when both occur), diagnostics time
    strictly increasing, finite arc-chord constants."""
    events_path = os.path.join(path, "events.json")
    diag_path = os.path.join(path, "diagnostics.csv")
    if not os.path.exists(events_path) or not os.path.exists(diag_path):
        raise FileNotFoundError(f"{path}: events.json / diagnostics.csv missing")
    with open(events_path) as fh:
        events = json.load(fh)
    rows = np.genfromtxt(diag_path, delimiter=",", names=True)
    t = np.atleast_1d(rows["t"])
    checks = {
        "time_monotone": bool(np.all(np.diff(t) > 0)) if t.size > 1 else True,
        "sup_F_finite": bool(np.all(np.isfinite(np.atleast_1d(rows["sup_F"])))),
    }
    kinds = [e["kind"] for e in events]
    if TURNING in kinds and RT_SIGN_CHANGE in kinds:
        checks["turning_before_rt"] = kinds.index(TURNING) < kinds.index(RT_SIGN_CHANGE)
        t_turn = next(e["t"] for e in events if e["kind"] == TURNING)
        t_rt = next(e["t"] for e in events if e["kind"] == RT_SIGN_CHANGE)
        checks["turning_time_before_rt_time"] = t_turn <= t_rt
    ok = all(checks.values())
    report = {"checks": checks, "events": kinds, "pass": ok}
    return ScenarioResult("verify", 0 if ok else 4, report,
                          "trajectory consistent" if ok else "inconsistent")


def render_trajectory(path, consts: PhysicalConstants = None) -> list:
    """Render SVG plots for an existing artifact directory.  Returns the
    list of files written."""
    if consts is None:
        consts = PhysicalConstants()
    snaps = sorted(f for f in os.listdir(path) if f.startswith("snap_")
                   and f.endswith(".csv"))
    if not snaps:
        raise FileNotFoundError(f"{path}: no snapshot files")
    written = []
    curve, t_last, _ = load_csv(os.path.join(path, snaps[-1]))
    rep = sigma_muskat(curve, consts)
    target = os.path.join(path, "interface.svg")
    _write(target, render_curve(curve.alpha, curve.z1, curve.z2,
                                rep.negative_intervals,
                                title=f"interface t={t_last:.6g}"))
    written.append(target)
    diag_path = os.path.join(path, "diagnostics.csv")
    if os.path.exists(diag_path):
        rows = np.genfromtxt(diag_path, delimiter=",", names=True)
        t = np.atleast_1d(rows["t"])
        for name in ("min_slope", "sigma_min"):
            target = os.path.join(path, f"{name}.svg")
            _write(target, render_series(t, np.atleast_1d(rows[name]), name))
            written.append(target)
    return written
