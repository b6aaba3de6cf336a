"""Constructors for turning initial data and their sign certificate.

The open-line candidate is built from

    z1(beta) = beta^3 / (1 + beta^2)

(odd, z1'(0) = 0, z1' > 0 elsewhere) and a vertical component
z2 = b * z2star on [0, beta2] with

    z2star(beta) = beta (beta1^2 - beta^2) / (1 + beta^4)

(odd, slope beta1^2 at 0, positive on (0, beta1), negative on
(beta1, beta2]), blended by a C^2 quintic on [beta2, beta3] down to a
constant negative level cbar on [beta3, inf).

The certificate for "the curve is about to turn" is: z1' >= 0 with
equality only at 0, z2'(0) > 0, and d_alpha v1(0) < 0, the last evaluated
by the reduced single-integral formula

    dv1(0) = 4 z2'(0) * int_0^inf z1 z2 z1' / |z|^4 dbeta

and, independently, by the two-integral formula obtained by
differentiating the contour equation directly (their agreement is an
integration-by-parts identity).
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.integrate import quad, simpson

from .curve import (Curve, CurveProfile, OPEN, PERIODIC, as_graph, derivative,
                    min_slope, open_grid, periodic_grid)
from .spectral import heat_multiplier, modes


class PreconditionError(Exception):
    pass


class DeltaTooLargeError(Exception):
    pass


@dataclass(frozen=True)
class TurningParams:
    beta1: float = 1.0
    beta2: float = 3.0
    beta3: float = 5.0
    b: float = 3.0
    cbar: float = -0.2
    mollify_tau: float = 0.0

    def __post_init__(self):
        if not (0 < self.beta1 < self.beta2 < self.beta3):
            raise ValueError("need 0 < beta1 < beta2 < beta3")
        if self.b <= 0:
            raise ValueError("amplitude b must be positive")
        if self.cbar >= 0:
            raise ValueError("tail level cbar must be negative")
        if self.mollify_tau < 0:
            raise ValueError("mollify_tau must be >= 0")


# --- closed-form horizontal profile ----------------------------------------

def z1_profile(beta):
    beta = np.asarray(beta, dtype=float)
    return beta ** 3 / (1.0 + beta ** 2)


def dz1_profile(beta):
    beta = np.asarray(beta, dtype=float)
    return beta ** 2 * (beta ** 2 + 3.0) / (1.0 + beta ** 2) ** 2


def d2z1_profile(beta):
    beta = np.asarray(beta, dtype=float)
    return 2.0 * beta * (3.0 - beta ** 2) / (1.0 + beta ** 2) ** 3


def z2star(beta, beta1):
    beta = np.asarray(beta, dtype=float)
    return beta * (beta1 ** 2 - beta ** 2) / (1.0 + beta ** 4)


def dz2star(beta, beta1):
    beta = np.asarray(beta, dtype=float)
    num = beta1 ** 2 * beta - beta ** 3
    dnum = beta1 ** 2 - 3.0 * beta ** 2
    den = 1.0 + beta ** 4
    return (dnum * den - num * 4.0 * beta ** 3) / den ** 2


def d2z2star(beta, beta1):
    beta = np.asarray(beta, dtype=float)
    num = beta1 ** 2 * beta - beta ** 3
    dnum = beta1 ** 2 - 3.0 * beta ** 2
    d2num = -6.0 * beta
    den = 1.0 + beta ** 4
    dden = 4.0 * beta ** 3
    d2den = 12.0 * beta ** 2
    return (d2num / den - 2.0 * dnum * dden / den ** 2
            + num * (2.0 * dden ** 2 / den ** 3 - d2den / den ** 2))


def _hermite_quintic(x0, x1, v0, d0, s0, v1, d1, s1):
    """Coefficients (ascending) of the quintic matching value and two
    derivatives at x0 and x1."""
    rows = []
    rhs = [v0, d0, s0, v1, d1, s1]
    for x in (x0, x1):
        rows.append([x ** j for j in range(6)])
        rows.append([j * x ** (j - 1) if j >= 1 else 0.0 for j in range(6)])
        rows.append([j * (j - 1) * x ** (j - 2) if j >= 2 else 0.0 for j in range(6)])
    order = [0, 1, 2, 3, 4, 5]
    A = np.array([rows[i] for i in order], dtype=float)
    b = np.array([rhs[i] for i in order], dtype=float)
    return np.linalg.solve(A, b)


class _VerticalProfile:
    """Piecewise odd z2: b*z2star on [0, beta2], quintic blend on
    [beta2, beta3], constant cbar beyond."""

    def __init__(self, params: TurningParams):
        self.p = params
        p = params
        coeffs = _hermite_quintic(
            p.beta2, p.beta3,
            p.b * z2star(p.beta2, p.beta1),
            p.b * dz2star(p.beta2, p.beta1),
            p.b * d2z2star(p.beta2, p.beta1),
            p.cbar, 0.0, 0.0)
        self.poly = np.polynomial.Polynomial(coeffs)
        self.dpoly = self.poly.deriv()

    def _eval(self, beta, fn_core, fn_blend, tail, odd):
        beta = np.asarray(beta, dtype=float)
        sgn = np.sign(beta)
        ab = np.abs(beta)
        out = np.where(ab <= self.p.beta2, fn_core(ab),
                       np.where(ab < self.p.beta3, fn_blend(ab), tail))
        return sgn * out if odd else out

    def value(self, beta):
        return self._eval(beta, lambda x: self.p.b * z2star(x, self.p.beta1),
                          self.poly, self.p.cbar, odd=True)

    def deriv(self, beta):
        # derivative of an odd function is even
        return self._eval(beta, lambda x: self.p.b * dz2star(x, self.p.beta1),
                          self.dpoly, 0.0, odd=False)


def tilt_profile(alpha):
    """Bounded odd tilt a / (1 + a^2): unit slope at 0, flat at infinity."""
    return alpha / (1.0 + alpha ** 2)


def dtilt_profile(alpha):
    return (1.0 - alpha ** 2) / (1.0 + alpha ** 2) ** 2


def d2tilt_profile(alpha):
    return 2.0 * alpha * (alpha ** 2 - 3.0) / (1.0 + alpha ** 2) ** 3


def turning_candidate_open(params: TurningParams, n: int = 1025,
                           L: float = 40.0, tilt: float = 0.0) -> Curve:
    """Open-line turning candidate on a symmetric uniform grid.

    n odd places a node exactly at alpha = 0.  The returned curve carries
    a closed-form profile (used by the high-accuracy certificate
    quadratures) unless mollification is requested.  tilt > 0 adds
    tilt * a/(1+a^2) to z1, unfolding the vertical tangent into a strict
    graph (slope tilt at 0) so forward evolution reaches it at a finite
    positive time.
    """
    if L <= params.beta3:
        raise ValueError("truncation L must exceed beta3")
    alpha = open_grid(n, L)
    vert = _VerticalProfile(params)
    if tilt:
        horiz = (lambda a: z1_profile(a) + tilt * tilt_profile(a),
                 lambda a: dz1_profile(a) + tilt * dtilt_profile(a),
                 lambda a: d2z1_profile(a) + tilt * d2tilt_profile(a))
    else:
        horiz = (z1_profile, dz1_profile, d2z1_profile)
    z1 = horiz[0](alpha)
    z2 = vert.value(alpha)
    profile = CurveProfile(
        z1=horiz[0], dz1=horiz[1], d2z1=horiz[2],
        z2=vert.value, dz2=vert.deriv,
        tail_start=params.beta3, tail_level=params.cbar)
    curve = Curve(OPEN, alpha, z1, z2, L=L, profile=profile)
    if params.mollify_tau > 0:
        curve = heat_mollify(curve, params.mollify_tau)
    return curve


def turning_candidate_periodic(params: TurningParams, n: int = 256,
                               tilt: float = 0.0) -> Curve:
    """Periodic analogue of the turning candidate.

    z1 = alpha - sin(alpha) (+ tilt * sin(alpha)): z1' = 1 - cos(alpha),
    zero only at 0 when tilt = 0.  z2 is the trig-polynomial analogue of
    the open vertical profile with sign change at beta1:

        z2 = b * sin(alpha) (cos(alpha) - cos(beta1)) / (1 - cos(beta1)).

    Both components are band-limited, so the candidate is entire.  tilt >
    0 unfolds the vertical tangent into a strict graph (min slope =
    tilt), giving a finite turning time under forward evolution.
    """
    alpha = periodic_grid(n)
    a1 = params.beta1
    if not (0 < a1 < np.pi):
        raise ValueError("periodic candidate needs beta1 in (0, pi)")
    z1 = alpha - np.sin(alpha) + tilt * np.sin(alpha)
    z2 = params.b * np.sin(alpha) * (np.cos(alpha) - np.cos(a1)) / (1.0 - np.cos(a1))
    curve = Curve(PERIODIC, alpha, z1, z2)
    if params.mollify_tau > 0:
        curve = heat_mollify(curve, params.mollify_tau)
    return curve


# --- sign certificate quadratures -------------------------------------------

_SLOPE_TOL = 1e-8


def _check_reduced_hypotheses(curve: Curve):
    if curve.topology != OPEN:
        raise PreconditionError("reduced formula applies to open curves")
    if curve.profile is not None:
        d1 = np.asarray(curve.profile.dz1(curve.alpha), dtype=float)
    else:
        d1, _ = derivative(curve, 1)
    i0 = int(np.argmin(np.abs(curve.alpha)))
    if abs(d1[i0]) > 1e-4:
        raise PreconditionError(
            f"d_alpha z1(0) = {d1[i0]:.3e}, not a vertical-tangent candidate")
    # oddness of both components
    if (np.max(np.abs(curve.z1 + curve.z1[::-1])) > 1e-10 * (1 + np.max(np.abs(curve.z1)))
            or np.max(np.abs(curve.z2 + curve.z2[::-1])) > 1e-8 * (1 + np.max(np.abs(curve.z2)))):
        raise PreconditionError("curve is not odd-symmetric")
    return i0


def dv1_at_zero_reduced(curve: Curve) -> float:
    """d_alpha v1(0) by the reduced formula
    4 z2'(0) int_0^inf z1 z2 z1' / (z1^2 + z2^2)^2 dbeta."""
    i0 = _check_reduced_hypotheses(curve)
    prof = curve.profile
    if prof is not None:
        def g(beta):
            zz1 = prof.z1(beta)
            zz2 = prof.z2(beta)
            return zz1 * zz2 * prof.dz1(beta) / (zz1 ** 2 + zz2 ** 2) ** 2
        dz2_0 = float(prof.dz2(0.0))
        ts = prof.tail_start
        body, _ = quad(g, 0.0, ts, limit=200,
                       points=[p for p in (1.0, ts / 2) if p < ts])
        tail, _ = quad(g, ts, np.inf, limit=200)
        return 4.0 * dz2_0 * (body + tail)
    # grid fallback: Simpson on [0, L] plus a flat-tail closed form
    d1, d2 = derivative(curve, 1)
    mask = curve.alpha >= 0.0
    beta = curve.alpha[mask]
    z1, z2 = curve.z1[mask], curve.z2[mask]
    r4 = (z1 ** 2 + z2 ** 2) ** 2
    integrand = np.where(beta > 0, z1 * z2 * d1[mask] / np.where(r4 > 0, r4, 1.0), 0.0)
    body = simpson(integrand, x=beta)
    L = beta[-1]
    cbar = z2[-1]
    tail = cbar / (2.0 * (L ** 2 + cbar ** 2))  # z ~ (beta, cbar) beyond L
    return 4.0 * d2[i0] * (body + tail)


def dv1_at_zero_full(curve: Curve) -> float:
    """d_alpha v1(0) by direct differentiation of the contour equation
    (two-integral form, before integration by parts)."""
    i0 = _check_reduced_hypotheses(curve)
    prof = curve.profile
    if prof is not None:
        dz2_0 = float(prof.dz2(0.0))

        def g(beta):
            zz1, zz2 = prof.z1(beta), prof.z2(beta)
            dd1, dd2 = prof.dz1(beta), prof.dz2(beta)
            r2 = zz1 ** 2 + zz2 ** 2
            i1 = (dd1 ** 2 + zz1 * prof.d2z1(beta)) / r2
            i2 = -2.0 * zz1 * dd1 * (zz1 * dd1 - zz2 * (dz2_0 - dd2)) / r2 ** 2
            return i1 + i2
        ts = prof.tail_start
        body, _ = quad(g, 0.0, ts, limit=200,
                       points=[p for p in (1.0, ts / 2) if p < ts])
        tail, _ = quad(g, ts, np.inf, limit=200)
        return 2.0 * (body + tail)
    d1, d2 = derivative(curve, 1)
    dd1, _ = derivative(curve, 2)
    mask = curve.alpha >= 0.0
    beta = curve.alpha[mask]
    z1, z2 = curve.z1[mask], curve.z2[mask]
    r2 = z1 ** 2 + z2 ** 2
    safe = np.where(r2 > 0, r2, 1.0)
    i1 = (d1[mask] ** 2 + z1 * dd1[mask]) / safe
    i2 = -2.0 * z1 * d1[mask] * (z1 * d1[mask] - z2 * (d2[i0] - d2[mask])) / safe ** 2
    integrand = np.where(beta > 0, i1 + i2, 0.0)
    body = simpson(integrand, x=beta)
    L = beta[-1]
    cbar = z2[-1]
    # flat-tail closed forms for both integrals with z = (beta, cbar)
    tail1, _ = quad(lambda s: 1.0 / (s ** 2 + cbar ** 2), L, np.inf)
    tail2, _ = quad(lambda s: -2.0 * s * (s - cbar * d2[i0]) / (s ** 2 + cbar ** 2) ** 2,
                    L, np.inf)
    return 2.0 * (body + tail1 + tail2)


def dv1_at_zero_periodic(curve: Curve, prefactor: float,
                         n_eval: int = 2048) -> float:
    """d_alpha v1 at alpha = 0 for a periodic curve, from the full contour
    velocity on a refined grid.

    The velocity gradient at a vertical-tangent point converges slowly in
    the node count (the kernel peak narrows with the flattening of z1),
    so the curve is trigonometrically resampled to n_eval nodes and the
    derivative taken by a centered fourth-order stencil: spectral
    differentiation at the original resolution aliases badly here.
    """
    from .curve import resample
    from .singular import muskat_rhs_periodic

    c = resample(curve, n_eval) if curve.n < n_eval else curve
    v = muskat_rhs_periodic(c, prefactor)
    h = 2.0 * np.pi / c.n
    return float((-v[2, 0] + 8.0 * v[1, 0] - 8.0 * v[-1, 0] + v[-2, 0])
                 / (12.0 * h))


@dataclass
class TurningCertificate:
    min_slope: float
    argmin_alpha: float
    dz2_at_zero: float
    dv1_at_zero: float
    passed: bool


def turning_certificate(curve: Curve, dv1: Optional[float] = None,
                        slope_tol: float = _SLOPE_TOL) -> TurningCertificate:
    """Machine check of the turning conditions: vertical tangent exactly
    at alpha = 0, positive vertical slope there, and negative d_alpha v1.

    dv1 may be supplied (periodic candidates certify through the evolved
    velocity field); open candidates default to the reduced quadrature.
    """
    report = min_slope(curve)
    if curve.profile is not None:
        d1 = np.asarray(curve.profile.dz1(curve.alpha), dtype=float)
        d2 = np.asarray(curve.profile.dz2(curve.alpha), dtype=float)
    else:
        d1, d2 = derivative(curve, 1)
    i0 = int(np.argmin(np.abs(curve.alpha)))
    off_zero = np.abs(curve.alpha - curve.alpha[i0]) > 10 * np.spacing(curve.alpha[-1])
    slope_ok = (abs(d1[i0]) <= slope_tol and np.all(d1[off_zero] > 0.0)
                and abs(report.min_slope) <= slope_tol)
    if dv1 is None:
        dv1 = dv1_at_zero_reduced(curve)
    passed = bool(slope_ok and d2[i0] > 0.0 and dv1 < 0.0)
    return TurningCertificate(
        min_slope=report.min_slope, argmin_alpha=report.argmin_alpha,
        dz2_at_zero=float(d2[i0]), dv1_at_zero=float(dv1), passed=passed)


# --- smoothing and perturbations --------------------------------------------

def heat_mollify(curve: Curve, tau_smooth: float) -> Curve:
    """Gauss-Weierstrass smoothing of the vertical component only.

    Periodic: exact Fourier multiplier exp(-k^2 tau).  Open: discrete
    convolution with the sampled heat kernel, tails extended by their
    constant levels.  tau_smooth = 0 is the identity.
    """
    if tau_smooth < 0:
        raise ValueError("tau_smooth must be >= 0")
    if tau_smooth == 0:
        return curve
    if curve.topology == PERIODIC:
        z2 = heat_multiplier(curve.z2, tau_smooth)
        return Curve(PERIODIC, curve.alpha, curve.z1.copy(), z2)
    h = curve.alpha[1] - curve.alpha[0]
    half = int(np.ceil(8.0 * np.sqrt(2.0 * tau_smooth) / h)) + 1
    x = h * np.arange(-half, half + 1)
    kern = np.exp(-x ** 2 / (4.0 * tau_smooth))
    kern /= kern.sum()
    padded = np.concatenate([np.full(half, curve.z2[0]), curve.z2,
                             np.full(half, curve.z2[-1])])
    z2 = np.convolve(padded, kern, mode="valid")
    return Curve(OPEN, curve.alpha, curve.z1.copy(), z2, L=curve.L)


def _h4_seminorm_field(field, period):
    """Discrete H^4 norm (L^2 + 4th derivative L^2) of periodic samples."""
    field = np.asarray(field, dtype=float)
    n = field.size
    k = modes(n) * (2.0 * np.pi / period)
    fk = np.fft.fft(field) / n
    weights = 1.0 + k ** 8
    return float(np.sqrt(period * np.sum(weights * np.abs(fk) ** 2)))


def perturb_h4(curve: Curve, epsilon: float, seed: int, kmax: int = 8) -> Curve:
    """Add a reproducible band-limited perturbation of exact discrete H^4
    size epsilon (split across both components)."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if epsilon == 0:
        return curve
    rng = np.random.default_rng(seed)
    n = curve.n
    if curve.topology == PERIODIC:
        period = 2.0 * np.pi
        x = curve.alpha
        envelope = 1.0
    else:
        period = 2.0 * curve.L
        x = np.pi * (curve.alpha + curve.L) / curve.L  # maps to [0, 2pi]
        envelope = np.exp(-((curve.alpha / (curve.L / 8.0)) ** 2))
    fields = []
    for _ in range(2):
        f = np.zeros(n)
        for k in range(1, kmax + 1):
            amp_c, amp_s = rng.standard_normal(2)
            f += amp_c * np.cos(k * x) + amp_s * np.sin(k * x)
        fields.append(f * envelope)
    e1, e2 = fields
    size = np.sqrt(_h4_seminorm_field(e1, period) ** 2
                   + _h4_seminorm_field(e2, period) ** 2)
    scale = epsilon / size
    return Curve(curve.topology, curve.alpha, curve.z1 + scale * e1,
                 curve.z2 + scale * e2, L=curve.L)


def discrete_h4_norm(field, period=2.0 * np.pi) -> float:
    return _h4_seminorm_field(field, period)


# --- water-wave datum --------------------------------------------------------

def waterwave_datum(curve_star: Curve, delta: float, consts=None,
                    dt: float = 1e-3, filter_threshold: float = 1e-12):
    """Graph datum for the water-wave turning run.

    Takes the amplitude omega* = d_alpha z1* on the turning curve and
    integrates the system backward by delta (time reversal: negate omega,
    run forward, negate back).  The returned state must be a graph.
    """
    from .closures import PhysicalConstants
    from .stepping import SimState, WATER_WAVES, advance

    if delta <= 0:
        raise ValueError("delta must be positive")
    if consts is None:
        consts = PhysicalConstants(rho1=0.0, rho2=1.0)
    d1, _ = derivative(curve_star, 1)
    omega_star = d1.copy()
    state = SimState(curve=curve_star, omega=-omega_star, t=0.0, consts=consts,
                     filter_threshold=filter_threshold, problem=WATER_WAVES)
    back = advance(state, delta, dt)
    datum_curve = back.curve
    datum_omega = -back.omega
    try:
        as_graph(datum_curve)
    except Exception as exc:
        raise DeltaTooLargeError(
            f"backward run by delta={delta} did not reach a graph: {exc}") from exc
    return datum_curve, datum_omega
