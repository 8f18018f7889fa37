"""SVD-based tridiagonalization of non-Hermitian matrices.

The central construction: factor ``H = S Sigma_h T^dag`` where ``Sigma_h`` is
real symmetric tridiagonal with the same singular values as ``H``.  ``T`` and
``Sigma_h`` come from a Lanczos run on the Hermitian square root
``sqrt(H^dag H)`` seeded at the chosen start vector; ``S`` is the unitary
polar factor of ``H`` applied to ``T``, which realizes ``H T Sigma_h^{-1}``
on the regular subspace and a canonical orthonormal extension on any null
directions, so it stays exactly unitary even for singular ``H``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractViolationError,
    DecompositionError,
    InvalidParameterError,
    NumericInputError,
)

#: Relative Lanczos termination / unitarity tolerance (double-precision SVD at d <= 2048).
DEFAULT_TOL = 1e-10


@dataclass
class LanczosCoefficients:
    """Three-term recurrence coefficients of a Jacobi (tridiagonal) matrix.

    ``a`` holds the K diagonal entries, ``b`` the K-1 positive off-diagonal
    entries (``b[0]`` is the coefficient usually written b_1).
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        if self.b.shape != (max(len(self.a) - 1, 0),):
            raise InvalidParameterError("need len(b) == len(a) - 1")

    @property
    def dim(self) -> int:
        return len(self.a)

    def jacobi(self) -> np.ndarray:
        """Dense symmetric tridiagonal matrix built from the coefficients."""
        j = np.diag(self.a)
        if len(self.b):
            j += np.diag(self.b, 1) + np.diag(self.b, -1)
        return j

    def shifted(self, c: float) -> "LanczosCoefficients":
        return LanczosCoefficients(self.a + c, self.b.copy())


@dataclass
class TridiagonalSVD:
    """Factorization ``H = S Sigma_h T^dag`` with unitary S, T.

    ``diag``/``offdiag`` store the tridiagonal ``Sigma_h``; ``krylov_dim`` is
    the dimension of the Krylov space grown from the seed vector before any
    basis completion (equal to ``d`` for generic matrices).
    """

    s: np.ndarray
    diag: np.ndarray
    offdiag: np.ndarray
    t: np.ndarray
    krylov_dim: int

    @property
    def sigma_h(self) -> np.ndarray:
        return LanczosCoefficients(self.diag, self.offdiag).jacobi()

    def coefficients(self) -> LanczosCoefficients:
        """Coefficients of the seeded Krylov chain (truncated at krylov_dim)."""
        k = self.krylov_dim
        return LanczosCoefficients(self.diag[:k], self.offdiag[: k - 1])

    def reconstruct(self) -> np.ndarray:
        return self.s @ (self.sigma_h @ self.t.conj().T)


def _check_finite(h):
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidParameterError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise NumericInputError("matrix contains NaN or Inf entries")
    return h.astype(complex, copy=False)


def singular_values(h: np.ndarray) -> np.ndarray:
    """Ascending singular values of ``h`` (tiny negatives clipped to 0)."""
    h = _check_finite(h)
    s = np.linalg.svd(h, compute_uv=False)
    s = np.where(s < 1e-12, np.maximum(s, 0.0), s)
    return np.sort(s)


def polar_sqrt(h: np.ndarray) -> np.ndarray:
    """Hermitian PSD square root ``sqrt(H^dag H) = V Sigma V^dag``.

    Computed from the SVD of ``h`` rather than by diagonalizing the squared
    matrix, which would double the condition number.
    """
    h = _check_finite(h)
    _, s, vh = np.linalg.svd(h)
    a = (vh.conj().T * s) @ vh
    return (a + a.conj().T) / 2


def lanczos(a: np.ndarray, v0: np.ndarray, k: int | None = None,
            reorthogonalize: bool = True, return_basis: bool = False):
    """Lanczos three-term recurrence on a Hermitian matrix.

    Runs from unit vector ``v0`` for at most ``k`` steps (default: the full
    dimension), with full reorthogonalization against the stored basis when
    ``reorthogonalize`` is set.  Terminates early once the next off-diagonal
    coefficient drops below ``1e-10 * ||a||_F`` and reports the Krylov
    dimension actually reached.

    Returns
    -------
    LanczosCoefficients, or ``(LanczosCoefficients, basis)`` with the
    orthonormal Krylov vectors as columns when ``return_basis`` is set.
    """
    a = _check_finite(a)
    n = a.shape[0]
    anorm = np.linalg.norm(a)
    if np.linalg.norm(a - a.conj().T) > DEFAULT_TOL * max(1.0, anorm):
        raise ContractViolationError("lanczos requires a Hermitian matrix")
    v0 = np.asarray(v0, dtype=complex)
    nrm = np.linalg.norm(v0)
    if abs(nrm - 1.0) > 1e-8:
        raise InvalidParameterError("start vector must be normalized")
    if k is None:
        k = n
    if not 1 <= k <= n:
        raise InvalidParameterError("need 1 <= k <= dim")

    q = np.zeros((n, k), dtype=complex)
    alpha = np.zeros(k)
    beta = np.zeros(k)
    q[:, 0] = v0 / nrm
    w = a @ q[:, 0]
    alpha[0] = np.real(np.vdot(q[:, 0], w))
    w = w - alpha[0] * q[:, 0]
    btol = DEFAULT_TOL * max(anorm, 1e-300)
    m = 1
    for j in range(1, k):
        if reorthogonalize:
            # two Gram-Schmidt passes keep the basis orthonormal to ~1e-14;
            # conjugate the vector, not the basis (avoids an O(d j) copy)
            w -= q[:, :j] @ np.conj(np.conj(w) @ q[:, :j])
            w -= q[:, :j] @ np.conj(np.conj(w) @ q[:, :j])
        bj = np.linalg.norm(w)
        if bj <= btol:
            break
        beta[j] = bj
        q[:, j] = w / bj
        w = a @ q[:, j]
        alpha[j] = np.real(np.vdot(q[:, j], w))
        w = w - alpha[j] * q[:, j] - beta[j] * q[:, j - 1]
        m = j + 1

    coeffs = LanczosCoefficients(alpha[:m], beta[1:m])
    if return_basis:
        return coeffs, q[:, :m]
    return coeffs


def _phase_fix(v):
    """Rotate the global phase so the first nonzero component is real positive."""
    idx = np.nonzero(np.abs(v) > 1e-13)[0]
    if len(idx) == 0:
        return v
    ph = v[idx[0]] / abs(v[idx[0]])
    return v / ph


def _lanczos_complete(a, v0, tol):
    """Lanczos basis of the full space, restarting on invariant subspaces.

    Returns (alpha, beta, Q, krylov_dim): beta[j] couples sites j-1 and j and
    is exactly zero at restart splices; Q is a full unitary whose first column
    is v0; krylov_dim is the size of the first (seeded) block.
    """
    n = a.shape[0]
    anorm = np.linalg.norm(a)
    btol = tol * max(anorm, 1e-300)
    q = np.zeros((n, n), dtype=complex)
    alpha = np.zeros(n)
    beta = np.zeros(n)
    q[:, 0] = v0
    first_block = None

    def _project_out(vec, j):
        return vec - q[:, :j] @ np.conj(np.conj(vec) @ q[:, :j])

    j = 0
    w = a @ q[:, 0]
    alpha[0] = np.real(np.vdot(q[:, 0], w))
    w = w - alpha[0] * q[:, 0]
    for j in range(1, n):
        w = _project_out(_project_out(w, j), j)
        bj = np.linalg.norm(w)
        if bj <= btol:
            if first_block is None:
                first_block = j
            # invariant subspace: restart from the first canonical direction
            # with significant weight outside the current span
            w = None
            for e in range(n):
                cand = np.zeros(n, dtype=complex)
                cand[e] = 1.0
                cand = _project_out(cand, j)
                if np.linalg.norm(cand) > 0.5:
                    cand = _project_out(cand, j)
                    w = _phase_fix(cand / np.linalg.norm(cand))
                    break
            if w is None:
                raise DecompositionError("failed to complete the Lanczos basis")
            beta[j] = 0.0
            q[:, j] = w
        else:
            beta[j] = bj
            q[:, j] = w / bj
        w = a @ q[:, j]
        alpha[j] = np.real(np.vdot(q[:, j], w))
        w = w - alpha[j] * q[:, j] - beta[j] * q[:, j - 1]
    if first_block is None:
        first_block = n
    return alpha, beta[1:], q, first_block


def tridiagonalize_svd(h: np.ndarray, v0: np.ndarray | None = None,
                       tol: float = DEFAULT_TOL) -> TridiagonalSVD:
    """Tridiagonalize a (generally non-Hermitian) matrix through its SVD.

    ``Sigma_h`` is the Jacobi matrix of ``sqrt(H^dag H)`` seeded at ``v0``
    (default ``e_0``); the first column of ``T`` equals ``v0``.  ``S`` is
    the polar factor ``U V^dag`` of ``H`` applied to ``T``, exactly unitary
    by construction.  Degenerate or zero singular values merely truncate the
    seeded Krylov block; the basis is then completed orthonormally, which
    leaves ``H = S Sigma_h T^dag`` intact because the completed directions
    only meet zero off-diagonal couplings.
    """
    h = _check_finite(h)
    n = h.shape[0]
    if v0 is None:
        v0 = np.zeros(n, dtype=complex)
        v0[0] = 1.0
    else:
        v0 = np.asarray(v0, dtype=complex)
        if abs(np.linalg.norm(v0) - 1.0) > 1e-8:
            raise InvalidParameterError("start vector must be normalized")
        v0 = v0 / np.linalg.norm(v0)

    u, s, vh = np.linalg.svd(h)
    a = (vh.conj().T * s) @ vh
    a = (a + a.conj().T) / 2
    alpha, beta, q, kdim = _lanczos_complete(a, v0, tol)
    w = u @ vh  # unitary polar factor of h
    out = TridiagonalSVD(s=w @ q, diag=alpha, offdiag=beta, t=q, krylov_dim=kdim)

    hnorm = np.linalg.norm(h)
    resid = np.linalg.norm(out.reconstruct() - h)
    if resid > 100 * tol * max(hnorm, 1e-300):
        raise DecompositionError(
            f"reconstruction residual {resid:.3e} exceeds tolerance "
            f"(||H|| = {hnorm:.3e}, krylov_dim = {kdim})")
    return out


def thermal_state(h: np.ndarray, beta: float) -> np.ndarray:
    """Boltzmann-weighted superposition of the eigenvectors of sqrt(H^dag H).

    Weights ``exp(-beta * sigma_i / 2)`` over the right singular vectors of
    ``h``; ``beta = 0`` is the uniform superposition.  Stable at large beta
    (weights are shifted by the smallest singular value before exponentiation).
    """
    if beta < 0:
        raise InvalidParameterError("beta must be >= 0")
    h = _check_finite(h)
    _, s, vh = np.linalg.svd(h)
    w = np.exp(-beta * (s - s.min()) / 2.0)
    w /= np.linalg.norm(w)
    return vh.conj().T @ w
