"""Rayleigh-Taylor functions, Sobolev/strip norms, weighted-RT verifiers.

Two RT reductions are implemented literally:

* sigma_muskat: the sign proxy (rho2 - rho1) * d_alpha z1, whose first
  sign change marks the entry into the unstable regime;
* sigma10: the periodic-setting RT function
  -2*pi * z1' / ((z1')^2 + (z2')^2), which vanishes exactly at a
  vertical tangent.

The weight pair (weight_h on [tau^2, tau], weight_hbar on [0, tau^2]) and
the weighted inequalities they enter are evaluated pointwise with
analytic time/space derivatives.  Note hbar is implemented with
sin^2(x/2): the printed sin(x/2) is neither 2*pi-periodic nor
sign-definite, contradicting the positivity/periodicity the weights must
satisfy; set literal_hbar=True to evaluate the printed form.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .closures import PhysicalConstants
from .curve import Curve, PERIODIC, derivative
from .spectral import modes


@dataclass(frozen=True)
class WeightParams:
    A: float = 100.0
    tau: float = 0.005
    literal_hbar: bool = False

    def __post_init__(self):
        if self.A < 1.0:
            raise ValueError("A must be >= 1")
        if not (0.0 < self.tau <= 1.0):
            raise ValueError("tau must be in (0, 1]")
        if 1.0 / self.A < self.tau - self.tau ** 2:
            warnings.warn(
                "weight h is not nonnegative unless 1/A >= tau - tau^2 "
                "(choose A large, then tau small)", stacklevel=2)


@dataclass
class RTReport:
    sigma: np.ndarray
    negative_intervals: list
    min_sigma: float


def _negative_intervals(alpha, sigma, periodic):
    neg = sigma < 0.0
    if not np.any(neg):
        return []
    n = neg.size
    intervals = []
    idx = np.flatnonzero(neg)
    if np.all(neg):
        return [(float(alpha[0]), float(alpha[-1]))]
    # walk maximal runs, with wraparound merging in the periodic case
    runs = []
    start = prev = idx[0]
    for i in idx[1:]:
        if i == prev + 1:
            prev = i
        else:
            runs.append((start, prev))
            start = prev = i
    runs.append((start, prev))
    if periodic and len(runs) > 1 and runs[0][0] == 0 and runs[-1][1] == n - 1:
        first = runs.pop(0)
        last = runs.pop()
        runs.append((last[0], first[1] + n))
    for s, e in runs:
        intervals.append((float(alpha[s % n]), float(alpha[e % n])))
    return intervals


def sigma_muskat(curve: Curve, consts: PhysicalConstants) -> RTReport:
    """RT sign proxy (rho2 - rho1) d_alpha z1 with sign-run extraction."""
    d1, _ = derivative(curve, 1)
    sigma = consts.rho_jump * d1
    return RTReport(sigma=sigma,
                    negative_intervals=_negative_intervals(
                        curve.alpha, sigma, curve.topology == PERIODIC),
                    min_sigma=float(sigma.min()))


def sigma10(curve: Curve) -> np.ndarray:
    """Periodic-setting RT function -2*pi*z1' / ((z1')^2 + (z2')^2)."""
    d1, d2 = derivative(curve, 1)
    speed2 = d1 ** 2 + d2 ** 2
    if np.any(speed2 < 1e-14):
        raise ValueError("parameterization degenerate: |d_alpha z| ~ 0")
    return -2.0 * np.pi * d1 / speed2


def sobolev_norm(samples, k: int, period: float = 2.0 * np.pi) -> float:
    """(||f||_L2^2 + ||d^k f||_L2^2)^(1/2) of periodic samples, by Fourier."""
    f = np.asarray(samples, dtype=float)
    n = f.size
    if k > n // 4:
        warnings.warn(f"order {k} under-resolved at N={n}", stacklevel=2)
    kk = modes(n) * (2.0 * np.pi / period)
    fk = np.fft.fft(f) / n
    return float(np.sqrt(period * np.sum((1.0 + kk ** (2 * k)) * np.abs(fk) ** 2)))


# --- section-4 weight functions ----------------------------------------------

def _check_window(t, lo, hi, name):
    t = np.asarray(t, dtype=float)
    if np.any(t < lo - 1e-12) or np.any(t > hi + 1e-12):
        raise ValueError(f"{name} defined for t in [{lo:g}, {hi:g}]")
    return t


def weight_h(x, t, params: WeightParams):
    """h(x,t) = A^-1 (tau^2 - t^2) + (A^-1 - (tau - t)) sin^2(x/2),
    t in [tau^2, tau]."""
    A, tau = params.A, params.tau
    t = _check_window(t, tau ** 2, tau, "weight_h")
    x = np.asarray(x, dtype=float)
    return (tau ** 2 - t ** 2) / A + (1.0 / A - (tau - t)) * np.sin(0.5 * x) ** 2


def weight_h_dt(x, t, params: WeightParams):
    A, tau = params.A, params.tau
    t = _check_window(t, tau ** 2, tau, "weight_h")
    return -2.0 * t / A + np.sin(0.5 * np.asarray(x, dtype=float)) ** 2


def weight_h_dx(x, t, params: WeightParams):
    A, tau = params.A, params.tau
    t = _check_window(t, tau ** 2, tau, "weight_h")
    x = np.asarray(x, dtype=float)
    return (1.0 / A - (tau - t)) * 0.5 * np.sin(x)


def _hbar_profile(x, params: WeightParams):
    x = np.asarray(x, dtype=float)
    if params.literal_hbar:
        return np.sin(0.5 * x)
    return np.sin(0.5 * x) ** 2


def weight_hbar(x, t, params: WeightParams):
    """hbar(x,t) = (1/4)(A^-1 tau^2 + A^-1 s(x)) + A^-2 tau t + A t s(x),
    t in [0, tau^2], with s = sin^2(x/2) (or the printed sin(x/2) when
    literal_hbar)."""
    A, tau = params.A, params.tau
    t = _check_window(t, 0.0, tau ** 2, "weight_hbar")
    s = _hbar_profile(x, params)
    return 0.25 * (tau ** 2 / A + s / A) + tau * t / A ** 2 + A * t * s


def weight_hbar_dt(x, t, params: WeightParams):
    A, tau = params.A, params.tau
    t = _check_window(t, 0.0, tau ** 2, "weight_hbar")
    return tau / A ** 2 + A * _hbar_profile(x, params)


def weight_hbar_dx(x, t, params: WeightParams):
    A, tau = params.A, params.tau
    t = _check_window(t, 0.0, tau ** 2, "weight_hbar")
    x = np.asarray(x, dtype=float)
    if params.literal_hbar:
        ds = 0.5 * np.cos(0.5 * x)
    else:
        ds = 0.5 * np.sin(x)
    return 0.25 * ds / A + A * np.asarray(t, dtype=float) * ds


@dataclass
class WeightedRTReport:
    hi_margin: float           # min of sigma10 + h_t - sqrt(A) h on [tau^2, tau]
    hbari_margin: float        # min of sigma10 + hbar_t - sqrt(A) hbar on [0, tau^2]
    hbari_bound: float         # the claimed lower bound A^-2 tau / 2
    hi_pass: bool              # positivity of the h-window margin
    hbari_pass: bool           # margin >= bound


def verify_weighted_rt(sigma10_grid, x, t, params: WeightParams) -> WeightedRTReport:
    """Minimum margins of the weighted RT inequalities over a sampled
    (x, t) trajectory of sigma10 values (shape (len(t), len(x)))."""
    sig = np.asarray(sigma10_grid, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if sig.shape != (t.size, x.size):
        raise ValueError("sigma10 grid must be (n_times, n_x)")
    A, tau = params.A, params.tau
    rootA = np.sqrt(A)
    hi_vals, hbari_vals = [], []
    for ti, row in zip(t, sig):
        if tau ** 2 - 1e-12 <= ti <= tau + 1e-12:
            lhs = row + weight_h_dt(x, ti, params) - rootA * weight_h(x, ti, params)
            hi_vals.append(lhs.min())
        if -1e-12 <= ti <= tau ** 2 + 1e-12:
            lhs = row + weight_hbar_dt(x, ti, params) - rootA * weight_hbar(x, ti, params)
            hbari_vals.append(lhs.min())
    if not hi_vals and not hbari_vals:
        raise ValueError("trajectory does not cover either weight window")
    hi_margin = float(min(hi_vals)) if hi_vals else float("nan")
    hbari_margin = float(min(hbari_vals)) if hbari_vals else float("nan")
    bound = 0.5 * tau / A ** 2
    return WeightedRTReport(
        hi_margin=hi_margin, hbari_margin=hbari_margin, hbari_bound=bound,
        hi_pass=bool(hi_vals and hi_margin > 0.0),
        hbari_pass=bool(hbari_vals and hbari_margin >= bound))


# --- sigma10 property checklist ----------------------------------------------

SIGMA10_PROPERTIES = ["p1", "p2", "p3", "p4", "p5", "p6", "p7"]


def sigma10_checklist(curves, times, tol: float = 1e-6) -> dict:
    """Evaluate the stated properties of sigma10 at (x, t) = (0, 0) on a
    trajectory of periodic curves.

    p1/p3 (analyticity / C^k bounds) are reported as boundedness values;
    p2 reality and p4 value, p5 first derivative are checked against tol;
    p6 (d_x^2 < 0) and p7 (d_t > 0) report signed values.
    """
    curves = list(curves)
    times = np.asarray(times, dtype=float)
    if len(curves) < 3:
        raise ValueError("need >= 3 snapshots for the time derivative")
    sig_rows = np.array([sigma10(c) for c in curves])
    c0 = curves[0]
    if abs(c0.alpha[0]) > 1e-12:
        raise ValueError("grid must contain x = 0")
    from .spectral import fourier_derivative
    s0 = sig_rows[0]
    ds = fourier_derivative(s0)
    d2s = fourier_derivative(s0, 2)
    # one-sided time derivative at t = times[0] from a quadratic fit
    poly = np.polyfit(times[:3] - times[0], sig_rows[:3, 0], 2)
    st = float(poly[1])
    out = {
        "p1": {"value": float(np.max(np.abs(sig_rows))), "pass": bool(np.all(np.isfinite(sig_rows)))},
        "p2": {"value": float(np.max(np.abs(np.imag(sig_rows + 0j)))), "pass": True},
        "p3": {"value": float(np.max(np.abs(d2s))), "pass": bool(np.all(np.isfinite(d2s)))},
        "p4": {"value": float(s0[0]), "pass": bool(abs(s0[0]) <= tol)},
        "p5": {"value": float(ds[0]), "pass": bool(abs(ds[0]) <= tol)},
        "p6": {"value": float(d2s[0]), "pass": bool(d2s[0] < 0.0)},
        "p7": {"value": float(st), "pass": bool(st > 0.0)},
    }
    return out


# --- strip-based blow-up functional --------------------------------------------

@dataclass
class StripRTNorm:
    h4: float            # ||z - flat||_{H4} over both strip boundaries
    f_sup: float         # sup of the arc-chord ratio |beta|^2 / |dz|^2
    inf_f: float         # inf over the strip boundaries of Re(dz1/((dz1)^2+(dz2)^2))
    im_f_h2: float       # H2 trace norm of Im of the same quantity
    value: float         # combined blow-up functional; inf on regime exit
    regime_exit: bool


def strip_rt_norm(strip, c: float = None, K: float = 1.0,
                  n_levels: int = 5) -> StripRTNorm:
    """Blow-up functional ||z||_RT^2 = H4-trace norm^2 + sup F + the
    reciprocal stability margin 1/(inf Re f - c - K ||Im f||_H2).

    f = d_a z1 / ((d_a z1)^2 + (d_a z2)^2) continued to the strip; its
    real part is harmonic, so the infimum over the strip is attained on
    the boundary traces, where it is evaluated.  c defaults to half the
    current infimum; a nonpositive denominator is reported as regime
    exit (value = +inf), not an exception.
    """
    from .strip import strip_norm
    from .spectral import fourier_derivative

    h4 = strip_norm(strip, j=4)

    # arc-chord ratio over sampled horizontal levels (same-level pairs,
    # real parameter offsets beta)
    zetas = (np.linspace(-strip.r, strip.r, n_levels)
             if strip.r > 0 else np.array([0.0]))
    alpha = strip.alpha
    dal = alpha[:, None] - alpha[None, :]
    beta2 = np.angle(np.exp(1j * dal)) ** 2
    f_sup = 0.0
    inf_f = np.inf
    im_h2 = 0.0
    h_step = 2.0 * np.pi / strip.n
    for z in zetas:
        tr = strip.trace(z)
        d1 = tr[0][:, None] - tr[0][None, :]
        d2 = tr[1][:, None] - tr[1][None, :]
        chord2 = np.abs(d1) ** 2 + np.abs(d2) ** 2
        mask = beta2 > 1e-28
        f_sup = max(f_sup, float((beta2[mask] / chord2[mask]).max()))
    for z in (strip.r, -strip.r) if strip.r > 0 else (0.0,):
        d = strip.trace_derivative(z, 1)
        denom = d[0] ** 2 + d[1] ** 2
        if np.abs(denom).min() < 1e-14:
            return StripRTNorm(h4=h4, f_sup=f_sup, inf_f=-np.inf,
                               im_f_h2=np.inf, value=np.inf, regime_exit=True)
        f = d[0] / denom
        inf_f = min(inf_f, float(f.real.min()))
        imf = f.imag
        d2f = np.fft.ifft((1j * strip.mode_numbers()) ** 2 * np.fft.fft(f))
        im_h2 += h_step * (np.sum(imf ** 2) + np.sum(d2f.imag ** 2))
    im_h2 = float(np.sqrt(im_h2))
    if c is None:
        c = inf_f / 2.0
    denom = inf_f - c - K * im_h2
    if denom <= 0.0:
        return StripRTNorm(h4=h4, f_sup=f_sup, inf_f=inf_f, im_f_h2=im_h2,
                           value=np.inf, regime_exit=True)
    return StripRTNorm(h4=h4, f_sup=f_sup, inf_f=inf_f, im_f_h2=im_h2,
                       value=float(np.sqrt(h4 ** 2 + f_sup + 1.0 / denom)),
                       regime_exit=False)


# --- energy distances on strip contours ---------------------------------------

def energy_distance(strip, reference, k: int = 4) -> float:
    """int over Gamma_+ of |d^k z - d^k zbar|^2 dRe(zeta) between two strip
    curves sharing the same strip geometry."""
    if abs(strip.r - reference.r) > 1e-14 or strip.n != reference.n:
        raise ValueError("strip curves must share strip geometry")
    kmodes = strip.mode_numbers()
    diff = strip.coeffs - reference.coeffs  # (2, n_modes)
    mult = (1j * kmodes) ** k * np.exp(-kmodes * strip.r)
    vals = diff * mult
    return float(2.0 * np.pi * np.sum(np.abs(vals) ** 2))
