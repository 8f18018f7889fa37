"""Singular-value statistics and the density <-> Lanczos correspondence.

Covers spacing-ratio statistics, the quadrant law and Wigner-Dyson surmise,
half-integer Catalan moments, the moment -> Jacobi-coefficient recurrence,
and the forward/inverse integral relation between a singular density and the
bulk profiles a(x), b(x) of the mean Lanczos coefficients:

    rho(sigma) = \\int_0^1 dx  Theta(4 b(x)^2 - (sigma - a(x))^2)
                              / (pi sqrt(4 b(x)^2 - (sigma - a(x))^2)).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .decomp import LanczosCoefficients
from .errors import (
    FitFailureError,
    InsufficientDataError,
    InvalidMomentsError,
    InvalidParameterError,
    PoorFitWarning,
    SpliceMismatchWarning,
)


# ---------------------------------------------------------------------------
# Spacing statistics
# ---------------------------------------------------------------------------


@dataclass
class SpacingRatios:
    """Consecutive-gap ratios r_n = min(g_n, g_{n+1}) / max(g_n, g_{n+1})."""

    ratios: np.ndarray
    mean: float
    n_dropped: int  # zero spacings (degeneracies) removed before the ratios

    def to_record(self):
        return {"mean_r": self.mean, "n_ratios": int(len(self.ratios)),
                "n_dropped_degenerate": int(self.n_dropped)}


def spacing_ratios(values: np.ndarray, degeneracy_tol: float = 1e-8) -> SpacingRatios:
    """Spacing-ratio statistic of a sorted spectrum.

    Gaps below ``degeneracy_tol`` times the mean gap are treated as exact
    degeneracies (e.g. Kramers pairs) and dropped with a count, before the
    ratios are formed.
    """
    sigma = np.sort(np.asarray(values, dtype=float))
    if len(sigma) < 3:
        raise InsufficientDataError("need at least 3 values for spacing ratios")
    gaps = np.diff(sigma)
    scale = gaps.mean()
    keep = gaps > degeneracy_tol * max(scale, 1e-300)
    dropped = int(np.count_nonzero(~keep))
    gaps = gaps[keep]
    if len(gaps) < 2:
        raise InsufficientDataError("not enough nondegenerate gaps")
    r = np.minimum(gaps[:-1], gaps[1:]) / np.maximum(gaps[:-1], gaps[1:])
    return SpacingRatios(ratios=r, mean=float(r.mean()), n_dropped=dropped)


def dedup_kramers(values: np.ndarray, rel_tol: float = 1e-6) -> np.ndarray:
    """Collapse exactly degenerate pairs of a Kramers spectrum.

    Expects an even count pairing up as (s_0, s_1), (s_2, s_3), ... after
    sorting; raises if the members of a pair differ by more than ``rel_tol``
    relative to the spectrum scale.
    """
    s = np.sort(np.asarray(values, dtype=float))
    if len(s) % 2:
        raise InvalidParameterError("Kramers spectrum must have even length")
    scale = max(abs(s[-1]), 1e-300)
    split = np.abs(s[1::2] - s[0::2]).max() if len(s) else 0.0
    if split > rel_tol * scale:
        raise InvalidParameterError(
            f"pair splitting {split:.2e} too large for a Kramers spectrum")
    return (s[0::2] + s[1::2]) / 2


# ---------------------------------------------------------------------------
# Reference densities
# ---------------------------------------------------------------------------


def quadrant_law(sigma) -> np.ndarray:
    """Large-d singular density of Ginibre matrices: (1/pi) sqrt(4 - s^2) on [0, 2]."""
    sigma = np.asarray(sigma, dtype=float)
    out = np.zeros_like(sigma)
    mask = (sigma >= 0) & (sigma <= 2)
    out[mask] = np.sqrt(4.0 - sigma[mask] ** 2) / np.pi
    return out if out.ndim else float(out)


def z_factor(beta: float) -> float:
    """Scale factor Gamma(1 + beta/2) / Gamma((1 + beta)/2) of the surmise."""
    return float(special.gamma(1 + beta / 2) / special.gamma((1 + beta) / 2))


def wigner_dyson(lam, beta: float) -> np.ndarray:
    """Wigner-Dyson spacing surmise, normalized to unit mass and unit mean.

    ``rho(s) = 2 z exp(-(s z)^2) (s z)^beta / Gamma((1 + beta)/2)`` with
    ``z = z_factor(beta)``.
    """
    if beta <= 0:
        raise InvalidParameterError("beta must be > 0 (beta = 0 is the Poisson branch)")
    lam = np.asarray(lam, dtype=float)
    z = z_factor(beta)
    out = 2 * z * np.exp(-((lam * z) ** 2)) * (lam * z) ** beta / special.gamma((1 + beta) / 2)
    return out if out.ndim else float(out)


def wigner_dyson_cdf(lam, beta: float) -> np.ndarray:
    """CDF of the surmise (regularized incomplete gamma of (s z)^2)."""
    if beta <= 0:
        raise InvalidParameterError("beta must be > 0")
    lam = np.asarray(lam, dtype=float)
    z = z_factor(beta)
    out = special.gammainc((1 + beta) / 2, (lam * z) ** 2)
    return out if out.ndim else float(out)


def catalan_half(k: int) -> float:
    """Half-integer Catalan number C_{k/2} = 2^k Gamma(k/2 + 1/2) / (sqrt(pi) Gamma(k/2 + 2)).

    These are the moments of the quadrant law; at even k they reduce to the
    integer Catalan numbers.
    """
    if k < 0:
        raise InvalidParameterError("k must be >= 0")
    return float(2.0 ** k * special.gamma(k / 2 + 0.5)
                 / (np.sqrt(np.pi) * special.gamma(k / 2 + 2)))


def quadrant_moments(n: int) -> np.ndarray:
    """First ``n`` moments m_0 .. m_{n-1} of the quadrant law."""
    return np.array([catalan_half(k) for k in range(n)])


# ---------------------------------------------------------------------------
# Moments -> Jacobi coefficients
# ---------------------------------------------------------------------------


def moments_to_lanczos(moments) -> LanczosCoefficients:
    """Jacobi recurrence coefficients of the measure behind a moment sequence.

    Runs the Chebyshev moment recurrence (no Hankel determinants) in extended
    precision; ``2K`` moments yield at most ``K`` diagonal coefficients.  A
    vanishing Hankel minor truncates the chain (finite-support measure); a
    negative one raises ``InvalidMomentsError``, which also signals exhausted
    precision (for quadrant-law moments that happens near K ~ 16 even in
    80-bit arithmetic).
    """
    m = np.asarray(moments, dtype=np.longdouble)
    if len(m) < 2:
        raise InvalidMomentsError("need at least m_0, m_1")
    if not m[0] > 0:
        raise InvalidMomentsError("m_0 must be positive")
    m = m / m[0]
    kmax = len(m) // 2
    a = np.zeros(kmax, dtype=np.longdouble)
    bsq = np.zeros(kmax, dtype=np.longdouble)
    a[0] = m[1]
    sig_prev = np.zeros(2 * kmax, dtype=np.longdouble)
    sig_cur = m[: 2 * kmax].copy()
    scale = max(float(m[2]) if len(m) > 2 else 1.0, 1.0)
    k_eff = kmax
    for k in range(1, kmax):
        sig_next = np.zeros(2 * kmax, dtype=np.longdouble)
        lo, hi = k, 2 * kmax - k
        sig_next[lo:hi] = (sig_cur[lo + 1: hi + 1] - a[k - 1] * sig_cur[lo:hi]
                           - bsq[k - 1] * sig_prev[lo:hi])
        ratio = sig_next[k] / sig_cur[k - 1]
        if ratio <= 1e-12 * scale:
            if ratio < -1e-8 * scale:
                raise InvalidMomentsError(
                    f"Hankel minor turned negative at step {k}: the moments do "
                    "not define a positive measure (or precision is exhausted)")
            k_eff = k
            break
        bsq[k] = ratio
        a[k] = sig_next[k + 1] / sig_next[k] - sig_cur[k] / sig_cur[k - 1]
        sig_prev, sig_cur = sig_cur, sig_next
    return LanczosCoefficients(np.asarray(a[:k_eff], dtype=float),
                               np.sqrt(np.asarray(bsq[1:k_eff], dtype=float)))


def jacobi_moments(coeffs: LanczosCoefficients, n: int, dtype=np.longdouble) -> np.ndarray:
    """Moments <e_0| J^k |e_0>, k = 0 .. n-1, of a Jacobi matrix.

    Computed in extended precision by default: the inverse map amplifies
    moment noise by the Hankel condition number, so round-trips need the
    extra digits.
    """
    j = coeffs.jacobi().astype(dtype)
    v = np.zeros(coeffs.dim, dtype=dtype)
    v[0] = 1.0
    out = np.empty(n, dtype=dtype)
    cur = v
    for k in range(n):
        out[k] = cur[0]
        cur = j @ cur
    return out


# ---------------------------------------------------------------------------
# Bulk profiles and the forward/inverse integral relation
# ---------------------------------------------------------------------------


@dataclass
class DensityProfile:
    """Density samples ``rho`` on an ascending grid; unit mass to ~1e-3."""

    grid: np.ndarray
    rho: np.ndarray

    def mass(self) -> float:
        return float(np.trapezoid(self.rho, self.grid))


@dataclass
class BulkProfile:
    """Mean Lanczos coefficient profiles a(x), b(x) on x in [0, 1]."""

    x: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def interp(self, x):
        return np.interp(x, self.x, self.a), np.interp(x, self.x, self.b)


def _grid_edges(grid):
    grid = np.asarray(grid, dtype=float)
    mid = (grid[1:] + grid[:-1]) / 2
    first = grid[0] - (grid[1] - grid[0]) / 2
    last = grid[-1] + (grid[-1] - grid[-2]) / 2
    return np.concatenate([[first], mid, [last]])


def density_from_bulk(profile: BulkProfile, sigma_grid) -> DensityProfile:
    """Forward map: bulk profiles -> singular density, on ``sigma_grid``.

    Integrates the local arcsine laws cell-by-cell in x with their CDF in
    closed form (substitution sigma = a + 2 b sin(theta)), which handles the
    inverse-square-root edges exactly; the result is the bin-averaged density
    on the bins centered at the grid points.
    """
    sigma_grid = np.asarray(sigma_grid, dtype=float)
    if len(sigma_grid) < 2:
        raise InvalidParameterError("sigma_grid needs at least 2 points")
    edges = _grid_edges(sigma_grid)
    x = np.asarray(profile.x, dtype=float)
    a_mid = (np.asarray(profile.a)[1:] + np.asarray(profile.a)[:-1]) / 2
    b_mid = (np.asarray(profile.b)[1:] + np.asarray(profile.b)[:-1]) / 2
    dx = np.diff(x)
    mass = np.zeros(len(edges))
    for ai, bi, wi in zip(a_mid, b_mid, dx):
        if bi > 1e-12:
            u = np.clip((edges - ai) / (2 * bi), -1.0, 1.0)
            cdf = 0.5 + np.arcsin(u) / np.pi
        else:
            cdf = (edges >= ai).astype(float)  # point mass at a(x)
        mass += wi * cdf
    rho = np.diff(mass) / np.diff(edges)
    return DensityProfile(grid=sigma_grid, rho=rho)


def l2_distance(profile: DensityProfile, reference) -> float:
    """L2 norm of ``rho - reference`` over the profile's grid.

    ``reference`` may be a callable or an array on the same grid.
    """
    ref = reference(profile.grid) if callable(reference) else np.asarray(reference)
    diff = profile.rho - ref
    return float(np.sqrt(np.trapezoid(diff ** 2, profile.grid)))


def _family_profile(theta, x):
    """Two-term family a(x) = a0 (1 - p x^q), b(x) = b0 sqrt(1 - x^g)."""
    a0, p, q, b0, g = theta
    xc = np.clip(x, 0.0, 1.0)
    a = a0 * (1.0 - p * np.power(xc, q))
    b = b0 * np.sqrt(np.clip(1.0 - np.power(xc, g), 0.0, None))
    return a, b


@dataclass
class BulkFit:
    """Result of the inverse problem: recovered profile and residual."""

    profile: BulkProfile
    residual: float
    params: tuple | None  # seed-family parameters (a0, p, q, b0, gamma)


def bulk_from_density(target: DensityProfile, x_grid=None, n_knots: int = 64,
                      refine: bool = True, max_iter: int = 4000) -> BulkFit:
    """Inverse map: fit monotone bulk profiles whose density matches ``target``.

    Stage 1 fits the five-parameter family ``a = a0 (1 - p x^q)``,
    ``b = b0 sqrt(1 - x^gamma)`` (seeded from the target's first two moments)
    with restarted Nelder-Mead on the L2 density residual, evaluated through
    a fine x-discretization.  Stage 2 optionally refines the knot values with
    a monotone coordinate descent.  b(1) = 0 is built in; the inverse problem
    is otherwise underdetermined and the monotone family is the regularizer.
    """
    if x_grid is None:
        x_grid = np.linspace(0.0, 1.0, n_knots)
    x_grid = np.asarray(x_grid, dtype=float)
    x_fine = np.linspace(0.0, 1.0, 257)
    grid = target.grid
    rho_t = target.rho

    def resid_profile(x, a, b):
        dens = density_from_bulk(BulkProfile(x, a, b), grid)
        return float(np.sqrt(np.trapezoid((dens.rho - rho_t) ** 2, grid)))

    def resid_theta(theta):
        a0, p, q, b0, g = theta
        if not (0 <= p <= 1.5 and 0.05 <= q <= 6 and 0 < b0 <= 5 and 0.05 <= g <= 6):
            return 1e6
        a, b = _family_profile(theta, x_fine)
        return resid_profile(x_fine, a, b)

    m1 = float(np.trapezoid(grid * rho_t, grid))
    m2 = float(np.trapezoid(grid ** 2 * rho_t, grid))
    var = max(m2 - m1 ** 2, 1e-4)
    seed = np.array([m1 if abs(m1) > 1e-3 else 1.0, 0.3, 0.9, np.sqrt(var), 1.2])
    if abs(m1) < 1e-3:
        seed[0], seed[1] = 0.0, 0.0  # symmetric target: flat a

    history = []
    theta = seed
    for _ in range(2):  # restarting Nelder-Mead escapes its flat-simplex stalls
        res = optimize.minimize(resid_theta, theta, method="Nelder-Mead",
                                options={"maxiter": max_iter,
                                         "xatol": 1e-7, "fatol": 1e-11})
        theta = res.x
        history.append(res.fun)
    if not res.success and res.fun > 0.2:
        raise FitFailureError("bulk inversion did not converge", history)
    a, b = _family_profile(theta, x_grid)

    def resid_knots(aa, bb):
        # measure through a fine interpolation so knot discretization does
        # not pollute the reported fit quality
        prof = BulkProfile(x_grid, aa, bb)
        af, bf = prof.interp(x_fine)
        return resid_profile(x_fine, af, bf)

    best = resid_knots(a, b)
    if refine:
        a, b, best = _refine_knots(a, b, best, resid_knots)
    return BulkFit(profile=BulkProfile(x_grid, a, b), residual=best, params=tuple(theta))


def _refine_knots(a, b, best, resid_profile, sweeps: int = 2):
    """Monotone coordinate descent over the profile knots (decrement form)."""
    a = a.copy()
    b = b.copy()
    n = len(a)
    for _ in range(sweeps):
        for which, arr in (("a", a), ("b", b)):
            for i in range(n - (1 if which == "b" else 0)):  # keep b(1) = 0
                lo = arr[i + 1] if i + 1 < n else -np.inf
                hi = arr[i - 1] if i > 0 else np.inf
                span = 0.05 * max(abs(arr[i]), 0.1)
                lo = max(lo, arr[i] - span) if which == "b" else arr[i] - span
                hi = min(hi, arr[i] + span) if which == "b" else arr[i] + span
                if not lo < hi:
                    continue
                keep = arr[i]

                def f(v):
                    arr[i] = v
                    return resid_profile(a, b)

                r = optimize.minimize_scalar(f, bounds=(lo, hi), method="bounded",
                                             options={"xatol": 1e-5, "maxiter": 20})
                if r.fun < best:
                    best = r.fun
                    arr[i] = r.x
                else:
                    arr[i] = keep
    return a, b, best


# ---------------------------------------------------------------------------
# Bulk fits of ensemble-mean coefficients
# ---------------------------------------------------------------------------


@dataclass
class BulkFitParams:
    """Fitted exponents of a(x) ~ 1 - p x^q, b(x) ~ (1/2) sqrt(1 - x^gamma)."""

    p: float
    q: float
    gamma: float
    a_rms: float
    b_rms: float


def fit_bulk(a_mean, b_mean, d: int, window: tuple[float, float] = (0.05, 0.9),
             rms_threshold: float = 0.02) -> BulkFitParams:
    """Least-squares fit of the bulk laws to ensemble-mean Lanczos coefficients.

    ``a_mean[n]`` sits at x = n/d and ``b_mean[n]`` (n >= 1) at x = n/d; only
    the window in x is fitted.  Issues ``PoorFitWarning`` when the residual
    exceeds ``rms_threshold`` (e.g. for non-quadrant inputs, where the
    one-parameter-family ansatz degenerates).
    """
    a_mean = np.asarray(a_mean, dtype=float)
    b_mean = np.asarray(b_mean, dtype=float)
    xa = np.arange(len(a_mean)) / d
    xb = np.arange(1, len(b_mean) + 1) / d
    ma = (xa >= window[0]) & (xa <= window[1])
    mb = (xb >= window[0]) & (xb <= window[1])
    if ma.sum() < 4 or mb.sum() < 4:
        raise InsufficientDataError("too few coefficients inside the fit window")

    def a_model(x, p, q):
        return 1.0 - p * np.power(x, q)

    def b_model(x, g):
        return 0.5 * np.sqrt(np.clip(1.0 - np.power(x, g), 0.0, None))

    (p, q), _ = optimize.curve_fit(a_model, xa[ma], a_mean[ma], p0=(0.3, 0.9),
                                   maxfev=20000)
    (gamma,), _ = optimize.curve_fit(b_model, xb[mb], b_mean[mb], p0=(1.2,),
                                     maxfev=20000)
    a_rms = float(np.sqrt(np.mean((a_model(xa[ma], p, q) - a_mean[ma]) ** 2)))
    b_rms = float(np.sqrt(np.mean((b_model(xb[mb], gamma) - b_mean[mb]) ** 2)))
    if a_rms > rms_threshold or b_rms > rms_threshold:
        warnings.warn(
            f"bulk fit residuals a_rms={a_rms:.3g}, b_rms={b_rms:.3g} exceed "
            f"{rms_threshold}; the input is not in the fitted family",
            PoorFitWarning, stacklevel=2)
    return BulkFitParams(float(p), float(q), float(gamma), a_rms, b_rms)


def pad_coefficients(edge: LanczosCoefficients | None, bulk: BulkProfile, d: int,
                     n_fade: int = 4) -> LanczosCoefficients:
    """Stitch moment-method edge coefficients onto a bulk profile.

    The first ``n_edge`` entries come from ``edge``; the remainder samples the
    bulk profile at x = n/d.  A linear cross-fade over ``n_fade`` indices
    centered at the splice removes the step; a residual discontinuity above
    10% of the local value raises ``SpliceMismatchWarning``.
    """
    xs_a = np.arange(d) / d
    xs_b = np.arange(1, d) / d
    a_bulk, _ = bulk.interp(xs_a)
    _, b_bulk = bulk.interp(xs_b)
    a = a_bulk.copy()
    b = b_bulk.copy()
    n_edge = edge.dim if edge is not None else 0
    if n_edge == 0:
        return LanczosCoefficients(a, b)
    if n_edge > d:
        raise InvalidParameterError("edge longer than the requested chain")

    jump_a = abs(edge.a[n_edge - 1] - a_bulk[min(n_edge, d - 1)])
    scale_a = max(abs(a_bulk[min(n_edge, d - 1)]), 1e-12)
    if jump_a > 0.1 * scale_a:
        warnings.warn(f"edge/bulk mismatch {jump_a:.3g} at the a-splice "
                      f"(n = {n_edge})", SpliceMismatchWarning, stacklevel=2)

    a[:n_edge] = edge.a
    b[: n_edge - 1] = edge.b
    # cross-fade the last n_fade edge entries toward the bulk values
    for k in range(n_fade):
        n = n_edge - n_fade + k
        w = (k + 1) / (n_fade + 1)
        if 0 <= n < d:
            a[n] = (1 - w) * edge.a[n] + w * a_bulk[n]
        if 1 <= n < d:
            b[n - 1] = (1 - w) * edge.b[n - 1] + w * b_bulk[n - 1]
    return LanczosCoefficients(a, b)


def histogram_density(samples, bins="fd", range_=None) -> DensityProfile:
    """Histogram density at bin centers (Freedman-Diaconis bins by default)."""
    hist, edges = np.histogram(np.asarray(samples, dtype=float), bins=bins,
                               range=range_, density=True)
    centers = (edges[1:] + edges[:-1]) / 2
    return DensityProfile(grid=centers, rho=hist)
