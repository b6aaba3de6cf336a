"""Turning candidates and sign certificates."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from turnwave.closures import PhysicalConstants
from turnwave.curve import as_graph, derivative, min_slope
from turnwave.initial_data import (DeltaTooLargeError, PreconditionError,
                                   TurningParams, discrete_h4_norm,
                                   dv1_at_zero_full, dv1_at_zero_periodic,
                                   dv1_at_zero_reduced, heat_mollify,
                                   perturb_h4, turning_candidate_open,
                                   turning_candidate_periodic,
                                   turning_certificate, waterwave_datum)

DEFAULT = TurningParams()


def test_params_validation():
    with pytest.raises(ValueError):
        TurningParams(beta1=3.0, beta2=1.0)
    with pytest.raises(ValueError):
        TurningParams(b=-1.0)
    with pytest.raises(ValueError):
        TurningParams(cbar=0.1)


def test_open_candidate_geometry():
    c = turning_candidate_open(DEFAULT, n=513, L=15.0)
    d1 = c.profile.dz1(c.alpha)
    i0 = np.argmin(np.abs(c.alpha))
    assert abs(d1[i0]) < 1e-14                       # vertical tangent at 0
    assert np.all(d1[np.abs(c.alpha) > 1e-9] > 0)    # strict graph elsewhere
    assert c.profile.dz2(0.0) > 0                    # rising through it
    # odd symmetry and flat tails at the configured level
    assert np.max(np.abs(c.z2 + c.z2[::-1])) < 1e-12
    assert abs(c.z2[-1] - DEFAULT.cbar) < 1e-12


def test_open_candidate_tilt_unfolds():
    c = turning_candidate_open(DEFAULT, n=513, L=15.0, tilt=0.05)
    rep = min_slope(c)
    assert rep.min_slope == pytest.approx(0.05, rel=1e-6)
    as_graph(c)  # strict graph


def test_periodic_candidate_geometry():
    params = TurningParams(beta1=1.5, b=3.0)
    c = turning_candidate_periodic(params, n=256)
    d1, d2 = derivative(c, 1)
    assert abs(d1[0]) < 1e-12
    assert np.all(d1[1:] > 0)
    assert d2[0] > 0
    # z2 changes sign exactly at beta1 on (0, pi)
    inside = (c.alpha > 1e-9) & (c.alpha < params.beta1 - 1e-9)
    beyond = (c.alpha > params.beta1 + 1e-9) & (c.alpha < np.pi - 1e-9)
    assert np.all(c.z2[inside] > 0) and np.all(c.z2[beyond] < 0)


def test_reduced_vs_full_integration_by_parts():
    """The two quadratures of d_alpha v1(0) agree (they differ by an exact
    integration by parts)."""
    for b in (1.0, 2.5, 4.0):
        c = turning_candidate_open(TurningParams(b=b), n=257, L=15.0)
        red, full = dv1_at_zero_reduced(c), dv1_at_zero_full(c)
        assert abs(red - full) <= 1e-6 * max(abs(red), abs(full))


def test_reduced_rejects_non_candidates():
    c = turning_candidate_open(DEFAULT, n=257, L=15.0, tilt=0.3)
    with pytest.raises(PreconditionError):
        dv1_at_zero_reduced(c)


def test_certificate_passes_default_open_candidate():
    c = turning_candidate_open(DEFAULT, n=513, L=15.0)
    cert = turning_certificate(c)
    assert cert.passed
    assert cert.dv1_at_zero < 0 and cert.dz2_at_zero > 0


def test_certificate_periodic_candidate_sign_depends_on_beta1():
    """Converged velocity gradient: the wide-bump candidate turns
    (dv1 < 0), the narrow one does not -- resolution artifacts at the
    vertical-tangent point must not flip these signs."""
    pref = PhysicalConstants().darcy_factor / (4.0 * np.pi)
    wide = turning_candidate_periodic(TurningParams(beta1=1.5, b=3.0), n=512)
    assert dv1_at_zero_periodic(wide, pref) < -0.1
    narrow = turning_candidate_periodic(TurningParams(beta1=0.6, b=3.0), n=512)
    assert dv1_at_zero_periodic(narrow, pref) > 0.0


def test_dv1_periodic_resolution_stable():
    pref = PhysicalConstants().darcy_factor / (4.0 * np.pi)
    c = turning_candidate_periodic(TurningParams(beta1=1.5, b=3.0), n=256)
    v1 = dv1_at_zero_periodic(c, pref, n_eval=2048)
    v2 = dv1_at_zero_periodic(c, pref, n_eval=4096)
    assert abs(v1 - v2) < 5e-3 * abs(v2)


def test_heat_mollify_identity_and_smoothing():
    c = turning_candidate_periodic(TurningParams(beta1=1.5, b=3.0), n=128)
    same = heat_mollify(c, 0.0)
    assert np.array_equal(same.z2, c.z2)
    smooth = heat_mollify(c, 0.1)
    assert discrete_h4_norm(smooth.z2) < discrete_h4_norm(c.z2)


def test_perturb_h4_exact_size_and_reproducible():
    c = turning_candidate_periodic(TurningParams(beta1=1.5, b=3.0), n=128)
    p1 = perturb_h4(c, 1e-3, seed=7)
    p2 = perturb_h4(c, 1e-3, seed=7)
    assert np.array_equal(p1.z2, p2.z2)
    size = np.sqrt(discrete_h4_norm(p1.z1 - c.z1) ** 2
                   + discrete_h4_norm(p1.z2 - c.z2) ** 2)
    assert size == pytest.approx(1e-3, rel=1e-10)


def test_waterwave_datum_is_graph_and_round_trips():
    star = turning_candidate_periodic(TurningParams(beta1=1.5, b=3.0), n=128)
    datum, omega0 = waterwave_datum(star, 1e-3, dt=1e-4)
    assert min_slope(datum).min_slope > 0
    from turnwave.stepping import advance, waterwave_state
    back = advance(waterwave_state(datum, omega0), 1e-3, 1e-4)
    assert np.max(np.abs(back.curve.z2 - star.z2)) < 1e-6


def test_waterwave_datum_rejects_bad_delta():
    star = turning_candidate_periodic(TurningParams(beta1=1.5, b=3.0), n=128)
    with pytest.raises(ValueError):
        waterwave_datum(star, -1.0)


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=0.5, max_value=4.0),
       st.floats(min_value=-1.0, max_value=-0.05))
def test_open_candidate_certificate_quadratures_agree(b, cbar):
    c = turning_candidate_open(TurningParams(b=b, cbar=cbar), n=257, L=15.0)
    red, full = dv1_at_zero_reduced(c), dv1_at_zero_full(c)
    assert abs(red - full) <= 1e-6 * max(abs(red), abs(full), 1e-12)
