"""Doubled Hermitian embedding [[0, H], [H^dag, 0]] and its Krylov dynamics.

The doubled matrix has spectrum {+/- sigma_i} with eigenvectors
(u_i, +/- v_i)/sqrt(2) built from the SVD pairing H v_i = sigma_i u_i,
H^dag u_i = sigma_i v_i; taking the pairing from the SVD (rather than from
diagonalizing the doubled matrix) avoids phase ambiguity inside degenerate
+/- sigma pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomp import LanczosCoefficients, _check_finite, lanczos
from .errors import EquivalenceError, InvalidParameterError
from .krylov import ComplexityCurve, complexity, evolve


@dataclass
class HermitizedPair:
    """A matrix and its 2d-dimensional Hermitian embedding."""

    source: np.ndarray
    doubled: np.ndarray


def hermitize(h: np.ndarray) -> HermitizedPair:
    """Embed ``h`` into ``[[0, h], [h^dag, 0]]`` (Hermitian, spectrum +/- sigma)."""
    h = _check_finite(h)
    d = h.shape[0]
    z = np.zeros((d, d), dtype=complex)
    doubled = np.block([[z, h], [h.conj().T, z]])
    return HermitizedPair(source=h, doubled=doubled)


def eigenpairs(pair: HermitizedPair):
    """Eigenvalues and eigenvectors of the doubled matrix from the SVD pairing.

    Returns ``(energies, vectors)`` with columns ``(u_i, +/- v_i)/sqrt(2)``;
    energies ordered ``(+sigma_1, ..., +sigma_d, -sigma_1, ..., -sigma_d)``
    with sigma descending inside each half.
    """
    u, s, vh = np.linalg.svd(pair.source)
    v = vh.conj().T
    plus = np.vstack([u, v]) / np.sqrt(2)
    minus = np.vstack([u, -v]) / np.sqrt(2)
    energies = np.concatenate([s, -s])
    return energies, np.hstack([plus, minus])


def full_superposition_state(h: np.ndarray) -> np.ndarray:
    """Uniform superposition of all 2d doubled eigenvectors: (1/sqrt d) sum (u_i, 0)."""
    u, _, _ = np.linalg.svd(_check_finite(h))
    d = h.shape[0]
    return np.concatenate([u.sum(axis=1), np.zeros(d)]) / np.sqrt(d)


def hermitized_lanczos(h: np.ndarray, state: np.ndarray | None = None) -> LanczosCoefficients:
    """Lanczos coefficients of the doubled matrix from the superposition state.

    For the default (full superposition) seed the +/- symmetric spectrum
    forces every diagonal coefficient to vanish; the ensemble-mean
    off-diagonals follow sqrt(1 - n/(2d)) in the bulk for quadrant-law
    ensembles.
    """
    pair = hermitize(h)
    v0 = full_superposition_state(h) if state is None else np.asarray(state, dtype=complex)
    return lanczos(pair.doubled, v0)


def hermitized_complexity(h: np.ndarray, times: np.ndarray,
                          state: np.ndarray | None = None) -> ComplexityCurve:
    """Spread complexity of the doubled evolution from the superposition state."""
    coeffs = hermitized_lanczos(h, state)
    return complexity(evolve(coeffs, times), times)


@dataclass
class EquivalenceReport:
    """Moment-identity check between doubled and single-sided evolutions."""

    moments_doubled: np.ndarray
    moments_v: np.ndarray
    moments_u: np.ndarray
    max_rel_dev: float


def restricted_equivalence_check(h: np.ndarray, weights, n_max: int = 12,
                                 tol: float = 1e-8) -> EquivalenceReport:
    """Verify <Psi_+| Hd^n |Psi_+> against the single-sided square roots.

    ``Psi_+ = sum_i c_i (u_i, v_i)/sqrt(2)`` under the doubled matrix must
    reproduce the moments of ``sum_i c_i v_i`` under ``sqrt(H^dag H)`` and of
    ``sum_i c_i u_i`` under ``sqrt(H H^dag)`` (all equal sum |c_i|^2 sigma^n).
    A deviation above ``tol`` raises ``EquivalenceError`` - it flags a broken
    eigenvector pairing.
    """
    h = _check_finite(h)
    c = np.asarray(weights, dtype=complex)
    if abs(np.linalg.norm(c) - 1.0) > 1e-10:
        raise InvalidParameterError("weights must be l2-normalized")
    u, s, vh = np.linalg.svd(h)
    if len(c) != len(s):
        raise InvalidParameterError("need one weight per singular value")
    v = vh.conj().T

    pair = hermitize(h)
    psi_plus = np.concatenate([u @ c, v @ c]) / np.sqrt(2)
    psi_v = v @ c
    psi_u = u @ c

    sqrt_hh = (v * s) @ vh                  # sqrt(H^dag H)
    sqrt_hh_left = (u * s) @ u.conj().T     # sqrt(H H^dag)

    def moments(mat, vec):
        out = np.empty(n_max + 1)
        cur = vec
        for n in range(n_max + 1):
            out[n] = np.real(np.vdot(vec, cur))
            cur = mat @ cur
        return out

    m_doubled = moments(pair.doubled, psi_plus)
    m_v = moments(sqrt_hh, psi_v)
    m_u = moments(sqrt_hh_left, psi_u)
    scale = np.maximum(np.abs(m_doubled), 1e-300)
    max_dev = float(np.max([np.abs(m_doubled - m_v) / scale,
                            np.abs(m_doubled - m_u) / scale]))
    report = EquivalenceReport(m_doubled, m_v, m_u, max_dev)
    if max_dev > tol:
        raise EquivalenceError(
            f"moment identity broken: max relative deviation {max_dev:.3e}")
    return report
