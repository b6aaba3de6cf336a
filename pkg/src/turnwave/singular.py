"""Principal-value quadrature for interface velocities.

Two kinds of kernels appear:

* genuinely singular (Hilbert-type) kernels: the Birkhoff-Rott integral
  and its geometric time derivative.  These use the alternating-point
  trapezoidal rule: targets of one grid parity integrate against sources
  of the other parity with doubled weight.  Spectrally accurate for
  periodic analytic data.
* kernels with a removable singularity: the Muskat contour right-hand
  sides.  Plain trapezoid with the diagonal replaced by its analytic
  limit.

Complex shorthand: a point (x, y) is w = x + i*y; a velocity (v1, v2) is
recovered from q = v1 - i*v2.  The perp convention is (x, y)^perp =
(-y, x), which makes the flat-contour Birkhoff-Rott equal
(0, Hilbert(omega)/2).
"""

import numpy as np

from .curve import Curve, OPEN, PERIODIC, derivative


class QuadratureError(Exception):
    pass


def _require_even(curve: Curve):
    if curve.n % 2 != 0:
        raise QuadratureError("alternating-point quadrature requires even N")


def _w(curve: Curve) -> np.ndarray:
    return curve.z1 + 1j * curve.z2


def _parity_weights(n: int, h: float) -> np.ndarray:
    """weights[i, j] = 2h if i-j odd else 0."""
    i = np.arange(n)
    odd = (i[:, None] - i[None, :]) % 2 == 1
    return np.where(odd, 2.0 * h, 0.0)


def br_matrix(curve: Curve) -> np.ndarray:
    """Matrix A with q = A @ omega, q = v1 - i*v2 of the Birkhoff-Rott
    velocity.  Reusable across amplitudes on a frozen geometry."""
    _require_even(curve)
    w = _w(curve)
    dw = w[:, None] - w[None, :]
    n = curve.n
    if curve.topology == PERIODIC:
        h = 2.0 * np.pi / n
        with np.errstate(divide="ignore", invalid="ignore"):
            kern = 1.0 / np.tan(0.5 * dw)
        np.fill_diagonal(kern, 0.0)
        pref = 1.0 / (4.0j * np.pi)
    else:
        h = curve.alpha[1] - curve.alpha[0]
        with np.errstate(divide="ignore", invalid="ignore"):
            kern = 1.0 / dw
        np.fill_diagonal(kern, 0.0)
        pref = 1.0 / (2.0j * np.pi)
    A = pref * _parity_weights(n, h) * kern
    np.fill_diagonal(A, 0.0)
    return A


def birkhoff_rott(curve: Curve, omega, matrix=None) -> np.ndarray:
    """Birkhoff-Rott velocity of amplitude omega: (N, 2) samples."""
    omega = np.asarray(omega, dtype=float)
    A = br_matrix(curve) if matrix is None else matrix
    q = A @ omega
    return np.column_stack([q.real, -q.imag])


def br_geometric_rate(curve: Curve, omega, velocity, matrix_unused=None) -> np.ndarray:
    """Time derivative of the Birkhoff-Rott velocity due to the motion of
    the curve alone (amplitude frozen), for curve velocity `velocity`
    ((N, 2) samples).  Periodic curves only."""
    _require_even(curve)
    if curve.topology != PERIODIC:
        raise QuadratureError("geometric BR rate implemented for periodic curves")
    omega = np.asarray(omega, dtype=float)
    velocity = np.asarray(velocity, dtype=float)
    w = _w(curve)
    u = velocity[:, 0] + 1j * velocity[:, 1]
    dw = w[:, None] - w[None, :]
    du = u[:, None] - u[None, :]
    n = curve.n
    h = 2.0 * np.pi / n
    with np.errstate(divide="ignore", invalid="ignore"):
        kern = du / np.sin(0.5 * dw) ** 2
    W = _parity_weights(n, h)
    np.fill_diagonal(kern, 0.0)
    q = (-1.0 / (8.0j * np.pi)) * (W * kern) @ omega
    return np.column_stack([q.real, -q.imag])


def muskat_rhs_periodic(curve: Curve, prefactor: float) -> np.ndarray:
    """Periodic Muskat contour velocity.

    Kernel sin(dz1) / (cosh(dz2) - cos(dz1)) against the tangent
    difference; the beta -> alpha limit is 2 z1' z'' / (z1'^2 + z2'^2).
    The prefactor is exposed because the periodic equation absorbs its
    constants; (rho2 - rho1) / (4 pi) reproduces the open-line linear
    decay rate.
    """
    _require_even(curve)
    if curve.topology != PERIODIC:
        raise QuadratureError("use muskat_rhs_open for open curves")
    n = curve.n
    h = 2.0 * np.pi / n
    dz1 = curve.z1[:, None] - curve.z1[None, :]
    dz2 = curve.z2[:, None] - curve.z2[None, :]
    d1, d2 = derivative(curve, 1)
    tp = d1 + 1j * d2
    dt = tp[:, None] - tp[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        kern = np.sin(dz1) / (np.cosh(dz2) - np.cos(dz1))
    np.fill_diagonal(kern, 0.0)
    integrand = kern * dt
    dd1, dd2 = derivative(curve, 2)
    speed2 = d1 ** 2 + d2 ** 2
    diag = 2.0 * d1 * (dd1 + 1j * dd2) / speed2
    idx = np.arange(n)
    integrand[idx, idx] = diag
    q = prefactor * h * integrand.sum(axis=1)
    return np.column_stack([q.real, q.imag])


def _open_tail_levels(curve: Curve):
    """Flat-tail heights beyond the truncation (right, left)."""
    return float(curve.z2[-1]), float(curve.z2[0])


def muskat_rhs_open(curve: Curve, rho_jump: float = 1.0) -> np.ndarray:
    """Open-line Muskat contour velocity (flat-at-infinity curves).

    Trapezoid over [-L, L] with the diagonal limit z1' z'' / |z'|^2, plus
    the closed-form contribution of the exactly-flat tails
    z(beta) = (beta, c_right) for beta > L and (beta, c_left) for
    beta < -L:

        T(alpha) = (1/2) log( ((z1 - L)^2 + (z2 - c_right)^2)
                            / ((z1 + L)^2 + (z2 - c_left)^2) )

    multiplying (z'(alpha) - (1, 0)).
    """
    if curve.topology != OPEN:
        raise QuadratureError("use muskat_rhs_periodic for periodic curves")
    n = curve.n
    h = curve.alpha[1] - curve.alpha[0]
    dz1 = curve.z1[:, None] - curve.z1[None, :]
    dz2 = curve.z2[:, None] - curve.z2[None, :]
    d1, d2 = derivative(curve, 1)
    tp = d1 + 1j * d2
    dt = tp[:, None] - tp[None, :]
    denom = dz1 ** 2 + dz2 ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        kern = dz1 / denom
    np.fill_diagonal(kern, 0.0)
    integrand = kern * dt
    dd1, dd2 = derivative(curve, 2)
    speed2 = d1 ** 2 + d2 ** 2
    idx = np.arange(n)
    integrand[idx, idx] = d1 * (dd1 + 1j * dd2) / speed2
    weights = np.full(n, h)
    weights[0] = weights[-1] = 0.5 * h
    q = integrand @ weights

    L = float(curve.alpha[-1])
    c_right, c_left = _open_tail_levels(curve)
    num = (curve.z1 - L) ** 2 + (curve.z2 - c_right) ** 2
    den = (curve.z1 + L) ** 2 + (curve.z2 - c_left) ** 2
    # at the truncation nodes num/den vanish, but so does tp - 1 (flat tail)
    with np.errstate(divide="ignore"):
        T = np.where((num > 0) & (den > 0), 0.5 * np.log(num / den), 0.0)
    q = q + T * (tp - 1.0)

    q = q * (rho_jump / (2.0 * np.pi))
    return np.column_stack([q.real, q.imag])


def quadrature_refinement_error(rhs_values_fine, rhs_values_coarse):
    """Max-norm discrepancy between a fine-grid evaluation and a coarse
    evaluation injected on the shared (even-index) nodes."""
    fine = np.asarray(rhs_values_fine)
    coarse = np.asarray(rhs_values_coarse)
    return float(np.max(np.abs(fine[:: fine.shape[0] // coarse.shape[0]] - coarse)))
