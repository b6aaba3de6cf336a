"""Interface representation and calculus on sampled curves.

A curve is a sampled parameterization alpha -> (z1(alpha), z2(alpha)).
Two topologies are supported:

* periodic: uniform grid alpha_i = 2*pi*i/N on [0, 2*pi); z1 - alpha and
  z2 are 2*pi-periodic.  Calculus is spectral.
* open: uniform symmetric grid on [-L, L]; the curve is flat-at-infinity,
  |z(alpha) - (alpha, z2(+-L))| small at the truncation.  Calculus uses
  quintic splines.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator, make_interp_spline

from .spectral import fourier_derivative

PERIODIC = "periodic"
OPEN = "open"

MAX_DERIVATIVE_ORDER = 5
MIN_NODES = 16


class CurveError(Exception):
    pass


class SelfIntersectionError(CurveError):
    pass


class NotAGraphError(CurveError):
    pass


@dataclass
class CurveProfile:
    """Closed-form description of a curve, when one is available.

    Used by quadratures that need accuracy beyond the sampled grid
    (semi-infinite tail integrals).  z2 is constant, equal to tail_level,
    for |alpha| >= tail_start (odd extension on the left).
    """

    z1: Callable[[np.ndarray], np.ndarray]
    dz1: Callable[[np.ndarray], np.ndarray]
    d2z1: Callable[[np.ndarray], np.ndarray]
    z2: Callable[[np.ndarray], np.ndarray]
    dz2: Callable[[np.ndarray], np.ndarray]
    tail_start: float
    tail_level: float


@dataclass
class Curve:
    topology: str
    alpha: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    L: Optional[float] = None
    profile: Optional[CurveProfile] = field(default=None, repr=False)

    def __post_init__(self):
        self.alpha = np.asarray(self.alpha, dtype=float)
        self.z1 = np.asarray(self.z1, dtype=float)
        self.z2 = np.asarray(self.z2, dtype=float)
        if self.topology not in (PERIODIC, OPEN):
            raise ValueError(f"unknown topology {self.topology!r}")
        if not (self.alpha.shape == self.z1.shape == self.z2.shape):
            raise ValueError("alpha, z1, z2 must have identical shapes")
        if self.alpha.size < MIN_NODES:
            raise ValueError(f"need at least {MIN_NODES} nodes")
        if np.any(np.diff(self.alpha) <= 0):
            raise ValueError("alphas must be strictly increasing")
        if self.topology == OPEN and self.L is None:
            self.L = float(abs(self.alpha[0]))

    @property
    def n(self) -> int:
        return self.alpha.size

    def points(self) -> np.ndarray:
        """Node coordinates as an (N, 2) array."""
        return np.column_stack([self.z1, self.z2])

    def with_components(self, z1, z2) -> "Curve":
        return Curve(self.topology, self.alpha, np.asarray(z1, float),
                     np.asarray(z2, float), L=self.L)


def periodic_grid(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def open_grid(n: int, L: float = 40.0) -> np.ndarray:
    return np.linspace(-L, L, n)


def flat_curve(n: int = 256, topology: str = PERIODIC, L: float = 40.0,
               offset: float = 0.0) -> Curve:
    if topology == PERIODIC:
        a = periodic_grid(n)
    else:
        a = open_grid(n, L)
    return Curve(topology, a, a.copy(), np.full(n, offset), L=L if topology == OPEN else None)


def resample(curve: Curve, m: int) -> Curve:
    """Trigonometric resampling of a periodic curve to m nodes.

    Upsampling zero-pads the spectrum (adds no information; the new tail
    is exactly zero), downsampling truncates it.
    """
    if curve.topology != PERIODIC:
        raise CurveError("resample applies to periodic curves only")
    n = curve.n

    def _interp(samples):
        coeffs = np.fft.fft(samples) / n
        out = np.zeros(m, dtype=complex)
        half = min(n, m) // 2
        out[:half] = coeffs[:half]
        out[-half:] = coeffs[-half:]
        return np.real(np.fft.ifft(out) * m)

    a = periodic_grid(m)
    return Curve(PERIODIC, a, a + _interp(curve.z1 - curve.alpha),
                 _interp(curve.z2))


def graph_curve(f, n: Optional[int] = None, topology: str = PERIODIC,
                L: float = 40.0) -> Curve:
    """Embed graph samples f(alpha_i) as the curve (alpha, f(alpha))."""
    f = np.asarray(f, dtype=float)
    n = f.size if n is None else n
    if topology == PERIODIC:
        a = periodic_grid(n)
    else:
        a = open_grid(n, L)
    return Curve(topology, a, a.copy(), f, L=L if topology == OPEN else None)


def derivative(curve: Curve, order: int = 1):
    """Per-component d^order/d alpha^order, sampled at the nodes.

    Periodic: spectral (exact for band-limited data); the linear part of
    z1 is handled separately.  Open: quintic-spline differentiation.
    """
    if not (1 <= order <= MAX_DERIVATIVE_ORDER):
        raise ValueError(f"order must be in 1..{MAX_DERIVATIVE_ORDER}")
    if curve.n < MIN_NODES:
        raise ValueError("curve too coarse to differentiate")
    if curve.topology == PERIODIC:
        p = curve.z1 - curve.alpha
        d1 = fourier_derivative(p, order)
        if order == 1:
            d1 = d1 + 1.0
        d2 = fourier_derivative(curve.z2, order)
        return d1, d2
    s1 = make_interp_spline(curve.alpha, curve.z1, k=5)
    s2 = make_interp_spline(curve.alpha, curve.z2, k=5)
    return (s1.derivative(order)(curve.alpha),
            s2.derivative(order)(curve.alpha))


def tangent(curve: Curve):
    """First derivative as an (N, 2) array."""
    d1, d2 = derivative(curve, 1)
    return np.column_stack([d1, d2])


def _chord_components(curve: Curve):
    """Pairwise (beta, dz1, dz2) between all node pairs.

    Periodic: beta is the wrapped parameter difference in (-pi, pi] and
    the z1 difference is unwrapped consistently (z1 - alpha is periodic).
    """
    a = curve.alpha
    if curve.topology == PERIODIC:
        da = a[:, None] - a[None, :]
        beta = (da + np.pi) % (2.0 * np.pi) - np.pi
        p = curve.z1 - a
        dz1 = p[:, None] - p[None, :] + beta
    else:
        beta = a[:, None] - a[None, :]
        dz1 = curve.z1[:, None] - curve.z1[None, :]
    dz2 = curve.z2[:, None] - curve.z2[None, :]
    return beta, dz1, dz2


def arc_chord(curve: Curve) -> float:
    """sup over node pairs of F(z) = |beta|^2 / |z(a) - z(a-beta)|^2.

    The diagonal is the removable limit 1 / |d_alpha z|^2.  A zero chord
    between distinct nodes raises SelfIntersectionError.
    """
    beta, dz1, dz2 = _chord_components(curve)
    denom = dz1 ** 2 + dz2 ** 2
    off = ~np.eye(curve.n, dtype=bool)
    bad = off & (denom == 0.0)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise SelfIntersectionError(
            f"nodes {i} and {j} coincide: alpha={curve.alpha[i]:.6g}, {curve.alpha[j]:.6g}")
    d1, d2 = derivative(curve, 1)
    speed2 = d1 ** 2 + d2 ** 2
    if np.any(speed2 == 0.0):
        raise SelfIntersectionError("parameterization degenerate: |d_alpha z| = 0")
    F = np.empty_like(denom)
    F[off] = beta[off] ** 2 / denom[off]
    np.fill_diagonal(F, 1.0 / speed2)
    return float(F.max())


@dataclass
class SlopeReport:
    min_slope: float
    argmin_alpha: float
    vertical_tangent: bool


def min_slope(curve: Curve, tol: float = 0.0) -> SlopeReport:
    """Minimum of d_alpha z1 with 3-point quadratic subgrid refinement.

    Uses the curve's closed-form profile when one is attached (exact node
    derivatives); otherwise the grid derivative.
    """
    if curve.profile is not None:
        d1 = np.asarray(curve.profile.dz1(curve.alpha), dtype=float)
    else:
        d1, _ = derivative(curve, 1)
    i = int(np.argmin(d1))
    a, v = curve.alpha, d1
    n = curve.n
    if curve.topology == PERIODIC:
        im, ip = (i - 1) % n, (i + 1) % n
        h = 2.0 * np.pi / n
    else:
        i = min(max(i, 1), n - 2)
        im, ip = i - 1, i + 1
        h = a[1] - a[0]
    ym, y0, yp = v[im], v[i], v[ip]
    denom = ym - 2.0 * y0 + yp
    if denom > 0:
        s = 0.5 * (ym - yp) / denom
        s = float(np.clip(s, -1.0, 1.0))
        val = y0 - 0.25 * (ym - yp) * s
        amin = a[i] + s * h
    else:
        val, amin = y0, a[i]
    if curve.topology == PERIODIC:
        amin = amin % (2.0 * np.pi)
    return SlopeReport(min_slope=float(val), argmin_alpha=float(amin),
                       vertical_tangent=bool(val <= tol))


def as_graph(curve: Curve) -> np.ndarray:
    """Reparameterize as a graph: samples f on the curve's own alpha grid.

    Requires d_alpha z1 > 0 everywhere; otherwise NotAGraphError.  Uses
    monotone (PCHIP) interpolation of z2 against z1.
    """
    report = min_slope(curve)
    if report.min_slope <= 0.0:
        raise NotAGraphError(
            f"min d_alpha z1 = {report.min_slope:.3e} at alpha = {report.argmin_alpha:.4f}")
    if curve.topology == PERIODIC:
        # extend one period on each side so the target grid is interior
        x = np.concatenate([curve.z1 - 2.0 * np.pi, curve.z1, curve.z1 + 2.0 * np.pi])
        y = np.tile(curve.z2, 3)
        target = curve.alpha
    else:
        x, y = curve.z1, curve.z2
        target = np.clip(curve.alpha, x[0], x[-1])
    interp = PchipInterpolator(x, y)
    return interp(target)


def graph_slope_sup(curve: Curve) -> float:
    """sup |f_alpha| = sup |d_alpha z2 / d_alpha z1| over nodes where the
    curve is locally a graph; +inf if d_alpha z1 <= 0 somewhere."""
    d1, d2 = derivative(curve, 1)
    if np.any(d1 <= 0.0):
        return np.inf
    return float(np.max(np.abs(d2 / d1)))


# --- snapshot file format -------------------------------------------------

def save_csv(curve: Curve, path, t: float = 0.0, omega=None):
    """Curve snapshot: '#' comment header, then alpha,z1,z2[,omega] rows."""
    cols = [curve.alpha, curve.z1, curve.z2]
    header_cols = "alpha,z1,z2"
    if omega is not None:
        cols.append(np.asarray(omega, dtype=float))
        header_cols += ",omega"
    meta = f"# topology={curve.topology} t={t!r} N={curve.n}"
    if curve.topology == OPEN:
        meta += f" L={curve.L!r}"
    data = np.column_stack(cols)
    with open(path, "w") as fh:
        fh.write(meta + "\n")
        fh.write(header_cols + "\n")
        for row in data:
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


def load_csv(path):
    """Inverse of save_csv.  Returns (curve, t, omega_or_None)."""
    with open(path) as fh:
        meta = fh.readline().strip()
        header = fh.readline().strip()
        rows = np.array([[float(x) for x in line.split(",")]
                         for line in fh if line.strip()])
    if not meta.startswith("#"):
        raise ValueError(f"{path}: missing comment header")
    kv = dict(item.split("=", 1) for item in meta[1:].split())
    topology = kv["topology"]
    t = float(kv.get("t", 0.0))
    L = float(kv["L"]) if "L" in kv else None
    omega = rows[:, 3] if header.endswith("omega") else None
    curve = Curve(topology, rows[:, 0], rows[:, 1], rows[:, 2], L=L)
    return curve, t, omega
