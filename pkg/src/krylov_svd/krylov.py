"""Krylov-chain dynamics: wavefunction evolution and spread complexity.

Evolution uses the eigendecomposition of the symmetric tridiagonal Jacobi
matrix (exact unitary propagation, no time-stepping error): with
``J = Q theta Q^T`` and the chain started at site 0,
``psi(t) = Q exp(-i theta t) Q^T e_0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .decomp import LanczosCoefficients
from .errors import InvalidParameterError


@dataclass
class ComplexityCurve:
    """Spread complexity samples on a time grid.

    ``ks`` is in raw units (mean chain position, 0 <= ks <= dim - 1);
    ``dim`` is the chain length, so ``ks_normalized`` is the K/dim form
    used for ensemble comparisons.
    """

    times: np.ndarray
    ks: np.ndarray
    dim: int

    @property
    def ks_normalized(self) -> np.ndarray:
        return self.ks / self.dim


def evolve(coeffs: LanczosCoefficients, times: np.ndarray) -> np.ndarray:
    """Chain wavefunctions ``psi_n(t)`` for the initial condition ``delta_n0``.

    Returns a complex array of shape ``(len(times), K)``; norm is conserved
    to eigensolver accuracy at every sample.
    """
    if coeffs.dim == 0:
        raise InvalidParameterError("empty coefficient list")
    times = np.asarray(times, dtype=float)
    if coeffs.dim == 1:
        return np.exp(-1j * coeffs.a[0] * times)[:, None]
    theta, q = eigh_tridiagonal(coeffs.a, coeffs.b)
    w0 = q[0, :]  # overlaps <theta|e_0>; q is real orthogonal
    phases = np.exp(-1j * np.outer(times, theta))
    return (phases * w0) @ q.T


def complexity(wavefunctions: np.ndarray, times: np.ndarray,
               dim: int | None = None) -> ComplexityCurve:
    """Mean chain position ``K_S(t) = sum_n n |psi_n(t)|^2``."""
    wf = np.asarray(wavefunctions)
    times = np.asarray(times, dtype=float)
    if wf.ndim != 2 or wf.shape[0] != len(times):
        raise InvalidParameterError("wavefunctions must be (n_times, K)")
    k = wf.shape[1]
    ks = np.abs(wf) ** 2 @ np.arange(k)
    return ComplexityCurve(times=times, ks=ks, dim=dim if dim is not None else k)


def complexity_of(coeffs: LanczosCoefficients, times: np.ndarray) -> ComplexityCurve:
    """Evolve a coefficient chain and return its complexity curve."""
    return complexity(evolve(coeffs, times), times)


def plateau(curve: ComplexityCurve, window: tuple[float, float]) -> float:
    """Time average of ``ks`` over ``[t_lo, t_hi]`` (trapezoid weighted)."""
    lo, hi = window
    if not lo < hi:
        raise InvalidParameterError("window must satisfy t_lo < t_hi")
    mask = (curve.times >= lo) & (curve.times <= hi)
    if not np.any(mask):
        raise InvalidParameterError("window contains no samples")
    t = curve.times[mask]
    k = curve.ks[mask]
    if len(t) == 1:
        return float(k[0])
    return float(np.trapezoid(k, t) / (t[-1] - t[0]))


def ehrenfest_rate(coeffs: LanczosCoefficients) -> float:
    """Initial complexity acceleration ``d^2 K_S / dt^2 (0) = 2 b_1^2``."""
    if coeffs.dim < 2:
        return 0.0
    return float(2.0 * coeffs.b[0] ** 2)


@dataclass
class PeakDetection:
    """Location/significance of the largest interior local maximum."""

    has_peak: bool
    t_peak: float
    k_peak: float
    plateau: float
    significance: float  # (k_peak - plateau) in units of the local stderr


def detect_peak(times: np.ndarray, ks_mean: np.ndarray, ks_stderr: np.ndarray,
                plateau_window: tuple[float, float],
                n_sigma: float = 2.0) -> PeakDetection:
    """Find the largest interior local maximum exceeding the plateau estimate.

    The plateau is the trapezoid average over ``plateau_window``; a peak is
    declared when the maximum beats it by more than ``n_sigma`` local
    standard errors.
    """
    times = np.asarray(times, dtype=float)
    ks_mean = np.asarray(ks_mean, dtype=float)
    plat = plateau(ComplexityCurve(times, ks_mean, 1), plateau_window)
    interior = slice(1, len(times) - 1)
    is_max = (ks_mean[interior] >= ks_mean[:-2]) & (ks_mean[interior] >= ks_mean[2:])
    idx = np.nonzero(is_max)[0] + 1
    # restrict to maxima before the plateau window
    idx = idx[times[idx] < plateau_window[0]]
    if len(idx) == 0:
        return PeakDetection(False, np.nan, np.nan, plat, 0.0)
    best = idx[np.argmax(ks_mean[idx])]
    se = float(ks_stderr[best]) if ks_stderr is not None else 0.0
    excess = ks_mean[best] - plat
    if se > 0:
        sig = excess / se
    else:
        sig = np.inf if excess > 0 else 0.0
    return PeakDetection(bool(sig > n_sigma), float(times[best]),
                         float(ks_mean[best]), plat, float(sig))


def mean_curve(ks_stack: np.ndarray):
    """Ensemble mean and standard error over realizations (axis 0).

    The reduction is a fixed-order fold over the realization index (numpy
    pairwise summation), so results do not depend on worker scheduling.
    """
    ks_stack = np.asarray(ks_stack, dtype=float)
    mean = ks_stack.mean(axis=0)
    n = ks_stack.shape[0]
    stderr = (ks_stack.std(axis=0, ddof=1) / np.sqrt(n)) if n > 1 else np.zeros_like(mean)
    return mean, stderr


def time_grid(t_min: float, t_max: float, points: int, mode: str = "hybrid") -> np.ndarray:
    """Sampling grid for complexity curves.

    ``linear`` and ``log`` are what they say; ``hybrid`` spends half the
    points linearly up to the geometric mean of the endpoints (dense through
    the ramp/peak) and the rest log-spaced out to ``t_max``.
    """
    if not (t_min > 0 and t_max > t_min and points >= 2):
        raise InvalidParameterError("need 0 < t_min < t_max and points >= 2")
    if mode == "linear":
        return np.linspace(t_min, t_max, points)
    if mode == "log":
        return np.geomspace(t_min, t_max, points)
    if mode == "hybrid":
        knee = float(np.sqrt(t_min * t_max))
        n1 = points // 2
        head = np.linspace(t_min, knee, n1, endpoint=False)
        tail = np.geomspace(knee, t_max, points - n1)
        return np.concatenate([head, tail])
    raise InvalidParameterError(f"unknown grid mode {mode!r}")
