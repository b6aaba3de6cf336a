"""Explicit RK4 time stepping, spectral filtering, and event detection.

The driver advances a SimState (curve, optional amplitude) under one of
three problems: open-line Muskat, periodic Muskat, or periodic water
waves.  After every accepted step the Krasny filter is applied to the
Fourier coefficients (periodic case) to suppress roundoff-seeded
instability, and cheap diagnostics are recorded: minimum slope, arc-chord
supremum, Rayleigh-Taylor minimum, H4 size, and the graph mean.

Events:
  Turning        first zero crossing of min d_alpha z1 (time located by
                 linear interpolation between accepted steps, O(dt^2))
  RTSignChange   sigma = (rho2-rho1) d_alpha z1 < 0 on >= 3 consecutive
                 nodes
  GraphBlowup    sup |f_alpha| exceeds a threshold while still a graph
  ArcChordFailure  sup F(z) exceeds a threshold or the curve
                 self-intersects at grid resolution
"""

import json
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .closures import (PhysicalConstants, darcy_amplitude, waterwave_amplitude_rhs,
                       waterwave_velocity)
from .curve import (Curve, PERIODIC, SelfIntersectionError, arc_chord, derivative,
                    graph_slope_sup, min_slope, save_csv)
from .initial_data import discrete_h4_norm
from .singular import br_matrix, muskat_rhs_open, muskat_rhs_periodic
from .spectral import apply_krasny

MUSKAT_OPEN = "muskat-open"
MUSKAT_PERIODIC = "muskat-periodic"
WATER_WAVES = "water-waves"

TURNING = "Turning"
RT_SIGN_CHANGE = "RTSignChange"
ARC_CHORD_FAILURE = "ArcChordFailure"
GRAPH_BLOWUP = "GraphBlowup"


class BlowUpError(Exception):
    """NaN/Inf encountered; carries the last valid state and trajectory."""

    def __init__(self, message, state=None, trajectory=None):
        super().__init__(message)
        self.state = state
        self.trajectory = trajectory


@dataclass
class SimState:
    curve: Curve
    omega: Optional[np.ndarray] = None
    t: float = 0.0
    consts: PhysicalConstants = field(default_factory=PhysicalConstants)
    filter_threshold: float = 1e-12
    problem: str = MUSKAT_PERIODIC
    prefactor: Optional[float] = None  # periodic Muskat; default darcy/(4 pi)

    def muskat_prefactor(self) -> float:
        if self.prefactor is not None:
            return self.prefactor
        return self.consts.darcy_factor / (4.0 * np.pi)


def _rhs(state: SimState, curve: Curve, omega):
    """(z_t, omega_t or None) for the state's problem on given geometry."""
    if state.problem == MUSKAT_OPEN:
        return muskat_rhs_open(curve, state.consts.darcy_factor), None
    if state.problem == MUSKAT_PERIODIC:
        return muskat_rhs_periodic(curve, state.muskat_prefactor()), None
    if state.problem == WATER_WAVES:
        mat = br_matrix(curve)
        u, c, _ = waterwave_velocity(curve, omega, br_mat=mat)
        wt = waterwave_amplitude_rhs(curve, omega, c, state.consts,
                                     velocity=u, br_mat=mat)
        return u, wt
    raise ValueError(f"unknown problem {state.problem!r}")


def _filtered(state: SimState, curve: Curve, omega):
    if curve.topology != PERIODIC or state.filter_threshold == 0:
        return curve, omega
    th = state.filter_threshold
    z1 = apply_krasny(curve.z1 - curve.alpha, th) + curve.alpha
    z2 = apply_krasny(curve.z2, th)
    new = Curve(PERIODIC, curve.alpha, z1, z2)
    if omega is not None:
        omega = apply_krasny(omega, th)
    return new, omega


def step_rk4(state: SimState, dt: float) -> SimState:
    """One classical 4-stage explicit step, then spectral filtering."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    c0, w0 = state.curve, state.omega

    def shift(a, k):
        zt, wt = k
        curve = c0.with_components(c0.z1 + a * dt * zt[:, 0],
                                   c0.z2 + a * dt * zt[:, 1])
        omega = None if w0 is None else w0 + a * dt * wt
        return curve, omega

    k1 = _rhs(state, c0, w0)
    k2 = _rhs(state, *shift(0.5, k1))
    k3 = _rhs(state, *shift(0.5, k2))
    k4 = _rhs(state, *shift(1.0, k3))

    zt = (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) / 6.0
    curve = c0.with_components(c0.z1 + dt * zt[:, 0], c0.z2 + dt * zt[:, 1])
    omega = None
    if w0 is not None:
        wt = (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0
        omega = w0 + dt * wt
    if (not np.all(np.isfinite(curve.z1)) or not np.all(np.isfinite(curve.z2))
            or (omega is not None and not np.all(np.isfinite(omega)))):
        raise BlowUpError(f"non-finite values at t = {state.t + dt:.6g}", state=state)
    curve, omega = _filtered(state, curve, omega)
    return replace(state, curve=curve, omega=omega, t=state.t + dt)


def advance(state: SimState, T: float, dt: float) -> SimState:
    """Advance by T without event bookkeeping."""
    t_target = state.t + T
    while state.t < t_target - 1e-14:
        step = min(dt, t_target - state.t)
        state = step_rk4(state, step)
    return state


@dataclass
class Event:
    t: float
    kind: str
    payload: dict

    def as_dict(self):
        return {"t": self.t, "kind": self.kind, "payload": self.payload}


@dataclass
class EventLog:
    events: list = field(default_factory=list)

    def add(self, t, kind, **payload):
        self.events.append(Event(float(t), kind, payload))

    def kinds(self):
        return [e.kind for e in self.events]

    def first(self, kind) -> Optional[Event]:
        for e in self.events:
            if e.kind == kind:
                return e
        return None

    def to_json(self):
        return json.dumps([e.as_dict() for e in self.events], indent=1,
                          sort_keys=False)


DIAG_COLUMNS = ["t", "min_slope", "sup_F", "sigma_min", "h4_norm", "mean_f", "t_star"]


@dataclass
class Trajectory:
    snapshots: list = field(default_factory=list)  # (t, curve, omega)
    diagnostics: list = field(default_factory=list)
    events: EventLog = field(default_factory=EventLog)

    @property
    def times(self):
        return np.array([t for t, _, _ in self.snapshots])

    def state_at(self, t):
        """Snapshot closest to time t."""
        i = int(np.argmin(np.abs(self.times - t)))
        return self.snapshots[i]

    def column(self, name):
        j = DIAG_COLUMNS.index(name)
        return np.array([row[j] for row in self.diagnostics])

    def write_dir(self, path):
        import os
        os.makedirs(path, exist_ok=True)
        for i, (t, curve, omega) in enumerate(self.snapshots):
            save_csv(curve, os.path.join(path, f"snap_{i:05d}.csv"), t=t, omega=omega)
        with open(os.path.join(path, "diagnostics.csv"), "w") as fh:
            fh.write(",".join(DIAG_COLUMNS) + "\n")
            for row in self.diagnostics:
                fh.write(",".join("" if (isinstance(x, float) and np.isnan(x))
                                  else f"{x:.17g}" for x in row) + "\n")
        with open(os.path.join(path, "events.json"), "w") as fh:
            fh.write(self.events.to_json() + "\n")


def _diagnose(state: SimState):
    curve = state.curve
    report = min_slope(curve)
    try:
        supF = arc_chord(curve)
    except SelfIntersectionError:
        supF = np.inf
    d1, _ = derivative(curve, 1)
    sigma = state.consts.rho_jump * d1
    if curve.topology == PERIODIC:
        h4 = np.sqrt(discrete_h4_norm(curve.z1 - curve.alpha) ** 2
                     + discrete_h4_norm(curve.z2) ** 2)
        mean_f = float(np.mean(curve.z2 * d1))
    else:
        period = 2.0 * curve.L
        h4 = np.sqrt(discrete_h4_norm(curve.z1 - curve.alpha, period) ** 2
                     + discrete_h4_norm(curve.z2, period) ** 2)
        mean_f = float(np.trapezoid(curve.z2 * d1, curve.alpha))
    return report, supF, sigma, float(h4), mean_f


def _max_negative_run(sigma, periodic):
    neg = sigma < 0.0
    if not np.any(neg):
        return 0
    if np.all(neg):
        return neg.size
    arr = neg
    if periodic:
        # rotate so the array starts at a non-negative node
        start = int(np.argmin(arr))
        arr = np.roll(arr, -start)
    best = cur = 0
    for v in arr:
        cur = cur + 1 if v else 0
        best = max(best, cur)
    return best


def run(state: SimState, t_end: float, dt: float,
        snapshot_cadence: int = 10,
        stop_on=(RT_SIGN_CHANGE, ARC_CHORD_FAILURE),
        arc_chord_max: float = 1e8,
        graph_blowup_threshold: float = 1e3,
        rt_run_length: int = 3):
    """Advance to t_end or a stopping event.  Returns (Trajectory, EventLog).

    Raises BlowUpError (carrying the partial trajectory) on NaN/Inf.
    """
    traj = Trajectory()
    log = traj.events
    seen = set()
    prev_ms = None
    step_index = 0

    def record(st, report, supF, sigma, h4, mean_f):
        t_star = log.first(TURNING)
        traj.diagnostics.append([st.t, report.min_slope, supF,
                                 float(sigma.min()), h4, mean_f,
                                 t_star.t if t_star else float("nan")])

    report, supF, sigma, h4, mean_f = _diagnose(state)
    record(state, report, supF, sigma, h4, mean_f)
    traj.snapshots.append((state.t, state.curve, None if state.omega is None
                           else state.omega.copy()))
    prev_ms = (state.t, report.min_slope)

    while state.t < t_end - 1e-14:
        h_step = min(dt, t_end - state.t)
        try:
            state = step_rk4(state, h_step)
        except BlowUpError as exc:
            exc.trajectory = traj
            raise
        step_index += 1
        report, supF, sigma, h4, mean_f = _diagnose(state)

        if TURNING not in seen and prev_ms[1] > 0.0 >= report.min_slope:
            t0, m0 = prev_ms
            frac = m0 / (m0 - report.min_slope) if m0 != report.min_slope else 0.0
            t_star = t0 + frac * (state.t - t0)
            log.add(t_star, TURNING, min_slope=report.min_slope,
                    alpha=report.argmin_alpha)
            seen.add(TURNING)
        prev_ms = (state.t, report.min_slope)

        if RT_SIGN_CHANGE not in seen:
            run_len = _max_negative_run(sigma, state.curve.topology == PERIODIC)
            if run_len >= rt_run_length:
                log.add(state.t, RT_SIGN_CHANGE, nodes=int(run_len),
                        sigma_min=float(sigma.min()))
                seen.add(RT_SIGN_CHANGE)

        if GRAPH_BLOWUP not in seen:
            sup_fa = graph_slope_sup(state.curve)
            if sup_fa > graph_blowup_threshold:
                log.add(state.t, GRAPH_BLOWUP, sup_f_alpha=float(sup_fa))
                seen.add(GRAPH_BLOWUP)

        if ARC_CHORD_FAILURE not in seen and not supF < arc_chord_max:
            log.add(state.t, ARC_CHORD_FAILURE, sup_F=float(supF))
            seen.add(ARC_CHORD_FAILURE)

        record(state, report, supF, sigma, h4, mean_f)
        if step_index % snapshot_cadence == 0 or state.t >= t_end - 1e-14:
            traj.snapshots.append((state.t, state.curve,
                                   None if state.omega is None else state.omega.copy()))
        if seen & set(stop_on):
            if traj.snapshots[-1][0] != state.t:
                traj.snapshots.append((state.t, state.curve,
                                       None if state.omega is None else state.omega.copy()))
            break

    return traj, log, state


def muskat_state(curve, consts=None, problem=None, **kw) -> SimState:
    if consts is None:
        consts = PhysicalConstants()
    if problem is None:
        problem = MUSKAT_PERIODIC if curve.topology == PERIODIC else MUSKAT_OPEN
    return SimState(curve=curve, omega=None, consts=consts, problem=problem, **kw)


def waterwave_state(curve, omega, consts=None, **kw) -> SimState:
    if consts is None:
        consts = PhysicalConstants(rho1=0.0, rho2=1.0)
    return SimState(curve=curve, omega=np.asarray(omega, float), consts=consts,
                    problem=WATER_WAVES, **kw)


def initial_muskat_omega(curve, consts):
    return darcy_amplitude(curve, consts)
