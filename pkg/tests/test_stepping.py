"""Time stepping: RK4 order, Krasny filtering, event detection, trajectory
persistence."""

import json

import numpy as np
import pytest

from turnwave.closures import PhysicalConstants
from turnwave.curve import Curve, graph_curve, periodic_grid
from turnwave.initial_data import TurningParams, turning_candidate_periodic
from turnwave.stepping import (BlowUpError, GRAPH_BLOWUP, RT_SIGN_CHANGE,
                               TURNING, SimState, advance, muskat_state, run,
                               step_rk4, waterwave_state)


def small_graph(n=64, eps=1e-3, k=2):
    return graph_curve(eps * np.cos(k * periodic_grid(n)))


def test_rk4_fourth_order_self_convergence():
    """Halving dt cuts the time-discretization error by ~16x (measured
    against a fine-dt reference of the same spatial problem)."""
    k = 2

    def amplitude(dt):
        st = muskat_state(small_graph(64, 1e-2, k))
        st = advance(st, 0.5, dt)
        return 2 * abs(np.fft.fft(st.curve.z2)[k]) / 64

    ref = amplitude(0.4 / 64)
    e1 = abs(amplitude(0.1) - ref)
    e2 = abs(amplitude(0.05) - ref)
    assert e1 / e2 > 10.0  # fourth order would be ~16

    # and the rate itself is the linear one to leading order
    assert amplitude(0.05) == pytest.approx(1e-2 * np.exp(-k * 0.25), rel=1e-3)


def test_advance_reaches_target_time():
    st = muskat_state(small_graph())
    out = advance(st, 0.123, 0.02)  # not divisible by dt
    assert abs(out.t - 0.123) < 1e-12


def test_krasny_filter_keeps_solution_clean():
    st = muskat_state(small_graph(), filter_threshold=1e-12)
    out = advance(st, 0.2, 1e-2)
    coeffs = np.abs(np.fft.fft(out.curve.z2)) / 64
    peak = coeffs.max()
    # no partially-contaminated band: every mode is either resolved or at
    # the roundoff floor the filter keeps re-zeroing
    assert np.all((coeffs < 1e-15 * peak) | (coeffs > 1e-13 * peak))


def test_run_records_monotone_diagnostics():
    st = muskat_state(small_graph())
    traj, log, final = run(st, 0.05, 1e-2, snapshot_cadence=2, stop_on=())
    t = traj.column("t")
    assert np.all(np.diff(t) > 0)
    assert final.t == pytest.approx(0.05)
    assert log.kinds() == []


def test_run_emits_turning_event():
    params = TurningParams(beta1=1.5, b=3.0)
    cand = turning_candidate_periodic(params, n=256, tilt=0.02)
    st = muskat_state(cand)
    traj, log, final = run(st, 0.2, 1e-3, stop_on=(TURNING,))
    ev = log.first(TURNING)
    assert ev is not None and 0.0 < ev.t <= final.t + 1e-12
    # interpolated crossing: min_slope positive before, negative at stop
    ms = traj.column("min_slope")
    assert ms[0] > 0 and ms[-1] <= 0


def test_blowup_error_carries_trajectory():
    st = muskat_state(small_graph())
    st.curve.z2[3] = np.nan
    with pytest.raises(BlowUpError) as err:
        run(st, 0.05, 1e-2)
    assert err.value.trajectory is not None


def test_trajectory_write_dir_round_trip(tmp_path):
    st = muskat_state(small_graph())
    traj, log, _ = run(st, 0.03, 1e-2, snapshot_cadence=1, stop_on=())
    traj.write_dir(tmp_path)
    events = json.loads((tmp_path / "events.json").read_text())
    assert events == []
    header = (tmp_path / "diagnostics.csv").read_text().splitlines()[0]
    assert header.split(",")[0] == "t"
    snaps = sorted(tmp_path.glob("snap_*.csv"))
    assert len(snaps) == len(traj.snapshots)


def test_waterwave_state_defaults_vacuum_above():
    st = waterwave_state(small_graph(), np.zeros(64))
    assert st.consts.rho1 == 0.0
    assert st.problem == "water-waves"


def test_waterwave_energy_bounded_small_amplitude():
    """A small standing wave stays bounded over a few periods (the stable
    stratification)."""
    n, k, eps = 64, 2, 1e-4
    st = waterwave_state(graph_curve(eps * np.cos(k * periodic_grid(n))),
                         np.zeros(n))
    out = advance(st, 3.0, 5e-3)
    assert np.max(np.abs(out.curve.z2)) < 3 * eps
