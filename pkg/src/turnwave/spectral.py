"""Fourier-side helpers for periodic grids.

All routines assume a uniform grid of N points covering one period,
alpha_i = period * i / N, and use numpy's FFT conventions (mode k lives
at index k for 0 <= k < N/2 and at N+k for k < 0).
"""

import numpy as np


def modes(n: int) -> np.ndarray:
    """Integer wavenumbers in FFT order."""
    return np.fft.fftfreq(n, d=1.0 / n)


def fourier_derivative(f, order=1, period=2.0 * np.pi):
    """Spectral derivative of periodic samples.

    The Nyquist mode is zeroed for odd orders (its derivative is not
    representable on the grid).
    """
    f = np.asarray(f, dtype=float)
    n = f.size
    k = modes(n) * (2.0 * np.pi / period)
    fk = np.fft.fft(f)
    mult = (1j * k) ** order
    if order % 2 == 1 and n % 2 == 0:
        mult[n // 2] = 0.0
    return np.fft.ifft(fk * mult).real


def hilbert_transform(f):
    """Periodic Hilbert transform, symbol -i*sign(k)."""
    f = np.asarray(f, dtype=float)
    k = modes(f.size)
    fk = np.fft.fft(f)
    return np.fft.ifft(-1j * np.sign(k) * fk).real


def heat_multiplier(f, tau, period=2.0 * np.pi):
    """Gauss-Weierstrass smoothing: multiply mode k by exp(-k^2 tau)."""
    f = np.asarray(f, dtype=float)
    k = modes(f.size) * (2.0 * np.pi / period)
    fk = np.fft.fft(f)
    return np.fft.ifft(fk * np.exp(-(k ** 2) * tau)).real


def krasny_filter(coeffs, threshold):
    """Zero Fourier coefficients below threshold * max(|coeffs|).

    threshold = 0 is the identity.  Operates on (a copy of) a complex
    coefficient array in any mode ordering.
    """
    if threshold < 0:
        raise ValueError("filter threshold must be >= 0")
    coeffs = np.array(coeffs, dtype=complex)
    if threshold == 0:
        return coeffs
    mags = np.abs(coeffs)
    top = mags.max()
    if top == 0.0:
        return coeffs
    coeffs[mags < threshold * top] = 0.0
    return coeffs


def apply_krasny(f, threshold):
    """Krasny filter applied to real periodic samples."""
    fk = krasny_filter(np.fft.fft(np.asarray(f, dtype=float)), threshold)
    return np.fft.ifft(fk).real


def antiderivative(f, period=2.0 * np.pi):
    """Zero-mean antiderivative of the zero-mean part of f.

    The mean of f is dropped (a nonzero mean has no periodic
    antiderivative); the result has zero mean.
    """
    f = np.asarray(f, dtype=float)
    n = f.size
    k = modes(n) * (2.0 * np.pi / period)
    fk = np.fft.fft(f)
    fk[0] = 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = fk / (1j * k)
    out[0] = 0.0
    return np.fft.ifft(out).real
