"""Seeded generation of the non-Hermitian matrix families under study.

Every sampler draws from a caller-supplied ``numpy.random.Generator`` so that
a realization is a pure function of its seed.  ``EnsembleSpec`` bundles the
ensemble kind, size, and master seed; realization ``i`` of a spec always uses
the generator returned by :func:`realization_rng`, which derives a per-index
stream from ``(seed, i)`` and is therefore independent of worker scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

import numpy as np

from .errors import InvalidParameterError

GINIBRE_KINDS = ("GinOE", "GinUE", "GinSE")
ENSEMBLE_KINDS = GINIBRE_KINDS + ("DiagPoisson", "Interpolating", "NHSYK", "Class2x2")
CLASS_TAGS = ("A", "AI", "AIdag", "AII", "AIIdag")

# (Dyson index, hard-edge exponent) of the sampled non-Hermitian classes.
CLASS_INDICES = {
    "A": (2, 1),
    "AI": (1, 0),
    "AIdag": (1, 1),
    "AII": (4, 3),
    "AIIdag": (4, 1),
}

# Classes whose construction forces doubly degenerate (Kramers) singular values.
KRAMERS_CLASSES = frozenset({"AII", "AIIdag"})


@dataclass(frozen=True)
class EnsembleSpec:
    """Declarative description of an ensemble run.

    Parameters
    ----------
    kind : str
        One of ``ENSEMBLE_KINDS``.
    dim : int
        Matrix dimension ``d``.  For ``NHSYK`` this is derived from ``N`` and
        must equal ``2**(N//2 - 1)``; for ``Class2x2`` it is forced to 2.
    params : mapping
        Kind-specific parameters: ``nu`` for ``Interpolating``, ``N`` (and
        fixed ``q = 4``) for ``NHSYK``, ``tag`` for ``Class2x2``.
    seed : int
        64-bit master seed of the realization stream.
    realizations : int
        Number of independent draws.
    """

    kind: str
    dim: int
    params: Mapping = field(default_factory=dict)
    seed: int = 0
    realizations: int = 1

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise InvalidParameterError(f"unknown ensemble kind {self.kind!r}")
        if self.realizations < 1:
            raise InvalidParameterError("realizations must be >= 1")
        if self.kind == "Class2x2":
            object.__setattr__(self, "dim", 2)
            tag = self.params.get("tag")
            if tag not in CLASS_TAGS:
                raise InvalidParameterError(f"unknown symmetry-class tag {tag!r}")
        elif self.kind == "NHSYK":
            n = self.params.get("N")
            if n is None or n % 2 or n < 4:
                raise InvalidParameterError("NHSYK requires an even N >= 4")
            if self.params.get("q", 4) != 4:
                raise InvalidParameterError("only q = 4 couplings are implemented")
            object.__setattr__(self, "dim", 2 ** (n // 2 - 1))
        else:
            if self.dim < 1:
                raise InvalidParameterError("dim must be >= 1")
            if self.kind == "Interpolating":
                nu = self.params.get("nu")
                if nu is None or not 0.0 <= nu <= 1.0:
                    raise InvalidParameterError("Interpolating requires 0 <= nu <= 1")

    def to_dict(self):
        return {
            "kind": self.kind,
            "dim": int(self.dim),
            "params": dict(self.params),
            "seed": int(self.seed),
            "realizations": int(self.realizations),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(kind=d["kind"], dim=d.get("dim", 1), params=d.get("params", {}),
                   seed=d["seed"], realizations=d.get("realizations", 1))


def sub_seed(master_seed: int, index: int) -> int:
    """Stable 64-bit sub-seed of realization ``index`` under ``master_seed``.

    Uses numpy's ``SeedSequence`` spawn-key hashing; documented so external
    tools can re-derive any single realization.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def realization_rng(master_seed: int, index: int) -> np.random.Generator:
    """Generator owning the stream of realization ``index``."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def _complex_normal(rng, shape, var):
    """iid complex Gaussians with E|z|^2 = var."""
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_ginibre(kind: str, d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one Ginibre matrix.

    GinOE: real entries, mean 0, variance ``1/d``.  GinUE: complex entries
    with ``E|H_mn|^2 = 1/d``.  GinSE: quaternionic 2x2-block matrix
    ``[[A, B], [-conj(B), conj(A)]]`` returned as its ``2d x 2d`` complex
    representation; singular values come in exactly degenerate Kramers pairs
    and the block variance ``1/(2d)`` puts the deduplicated spectrum on the
    quadrant law at large ``d``.
    """
    if d < 1:
        raise InvalidParameterError("matrix dimension must be >= 1")
    if kind == "GinOE":
        return rng.standard_normal((d, d)) / np.sqrt(d)
    if kind == "GinUE":
        return _complex_normal(rng, (d, d), 1.0 / d)
    if kind == "GinSE":
        a = _complex_normal(rng, (d, d), 1.0 / (2 * d))
        b = _complex_normal(rng, (d, d), 1.0 / (2 * d))
        return np.block([[a, b], [-np.conj(b), np.conj(a)]])
    raise InvalidParameterError(f"unknown Ginibre kind {kind!r}")


def sample_diag_poisson(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uncorrelated diagonal matrix with complex entries, ``E|P_nn|^2 = 1``."""
    if d < 1:
        raise InvalidParameterError("matrix dimension must be >= 1")
    return np.diag(_complex_normal(rng, d, 1.0))


def sample_interpolating(nu: float, d: int, rng: np.random.Generator) -> np.ndarray:
    """Linear interpolation ``(1 - nu) P + nu Q`` between a Poisson diagonal
    and a GinUE draw; ``nu = 0`` is exactly diagonal, ``nu = 1`` is GinUE."""
    if not 0.0 <= nu <= 1.0:
        raise InvalidParameterError("nu must lie in [0, 1]")
    p = sample_diag_poisson(d, rng)
    q = sample_ginibre("GinUE", d, rng)
    return (1.0 - nu) * p + nu * q


# ---------------------------------------------------------------------------
# Non-Hermitian SYK_4
# ---------------------------------------------------------------------------
#
# Majorana operators are Jordan-Wigner strings; in the computational basis
# each one is a signed permutation (a single nonzero per column), so we store
# it as (perm, val) with  op|s> = val[s] |perm[s]>.  Quartic products stay
# signed permutations, which keeps the Hamiltonian build at O(d) per term.


def _majorana_maps(n: int):
    """Signed-permutation maps of the N Jordan-Wigner Majoranas on N/2 qubits.

    Normalization 1/sqrt(2) so that {psi_a, psi_b} = delta_ab.
    """
    nq = n // 2
    dim = 1 << nq
    idx = np.arange(dim)
    ops = []
    zpar = np.zeros(dim, dtype=np.int64)  # parity of bits 0..q-1
    for q in range(nq):
        sign = 1.0 - 2.0 * zpar
        perm = idx ^ (1 << q)
        bit = (idx >> q) & 1
        ops.append((perm, (sign / np.sqrt(2)).astype(complex)))            # Z..Z X_q
        ops.append((perm, (1j * (1.0 - 2.0 * bit) * sign / np.sqrt(2))))   # Z..Z Y_q
        zpar = zpar ^ bit
    return dim, ops


def _compose(op1, op2):
    """Product of two signed permutations, (op1 @ op2)."""
    p1, v1 = op1
    p2, v2 = op2
    return p1[p2], v2 * v1[p2]


def majorana_matrices(n: int) -> list[np.ndarray]:
    """Dense Majorana matrices (for algebra checks; use only at small N)."""
    dim, ops = _majorana_maps(n)
    cols = np.arange(dim)
    out = []
    for perm, val in ops:
        m = np.zeros((dim, dim), dtype=complex)
        m[perm, cols] = val
        out.append(m)
    return out


def parity_mask(n: int) -> np.ndarray:
    """Boolean mask of even-parity computational-basis states on N/2 qubits."""
    nq = n // 2
    idx = np.arange(1 << nq)
    par = np.zeros(idx.shape, dtype=np.int64)
    for j in range(nq):
        par ^= (idx >> j) & 1
    return par == 0


def build_nhsyk(n: int, rng: np.random.Generator, m_scale: float = 1.0,
                full: bool = False) -> np.ndarray:
    """Non-Hermitian SYK_4 Hamiltonian restricted to the even-parity block.

    Builds ``H = sum_{a<b<c<d} (J + i m_scale * M) psi_a psi_b psi_c psi_d``
    with iid Gaussian couplings of variance ``6/N^3``; ``m_scale = 0`` gives
    the Hermitian model.  The quartic terms preserve fermion parity exactly,
    so the restriction to the even block (dimension ``2**(N/2 - 1)``, basis
    ordered by ascending computational index) is lossless.

    Parameters
    ----------
    n : even int
        Number of Majorana fermions.
    full : bool
        Return the unrestricted ``2**(N/2)`` matrix instead of the block.
    """
    if n % 2 or n < 4:
        raise InvalidParameterError("N must be even and >= 4")
    dim, psi = _majorana_maps(n)
    var = 6.0 / n**3
    n_terms = len(list(combinations(range(n), 4)))
    j_coup = rng.normal(0.0, np.sqrt(var), size=n_terms)
    m_coup = rng.normal(0.0, np.sqrt(var), size=n_terms)

    pair = {}
    for a in range(n):
        for b in range(a + 1, n):
            pair[(a, b)] = _compose(psi[a], psi[b])

    h = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for (a, b, c, d), j, m in zip(combinations(range(n), 4), j_coup, m_coup):
        perm, val = _compose(pair[(a, b)], pair[(c, d)])
        np.add.at(h, (perm, cols), (j + 1j * m_scale * m) * val)

    if full:
        return h
    keep = np.nonzero(parity_mask(n))[0]
    return h[np.ix_(keep, keep)]


def nhsyk_class(n: int) -> str:
    """Symmetry-class tag of the q = 4 non-Hermitian SYK model by N mod 8."""
    tag = {0: "AIdag", 2: "A", 4: "AIIdag", 6: "A"}.get(n % 8)
    if tag is None:
        raise InvalidParameterError("N must be even")
    return tag


# ---------------------------------------------------------------------------
# 2x2 samplers for five non-Hermitian symmetry classes
# ---------------------------------------------------------------------------


def _goe(rng, d, size):
    a = rng.standard_normal(size + (d, d))
    return (a + np.swapaxes(a, -1, -2)) / np.sqrt(2)


def _quaternion_ginibre(rng, d, size):
    a = _complex_normal(rng, size + (d, d), 1.0)
    b = _complex_normal(rng, size + (d, d), 1.0)
    top = np.concatenate([a, b], axis=-1)
    bot = np.concatenate([-np.conj(b), np.conj(a)], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def _gse(rng, d, size):
    q = _quaternion_ginibre(rng, d, size)
    return (q + np.conj(np.swapaxes(q, -1, -2))) / 2


def sample_class_2x2(tag: str, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Draw 2x2 matrices from one of five non-Hermitian symmetry classes.

    A: complex Ginibre.  AI: real Ginibre.  AIdag: GOE + i GOE.
    AII: quaternionic Ginibre (4x4 complex representation).  AIIdag:
    GSE + i GSE (4x4 representation).  The quaternionic classes carry
    exactly degenerate Kramers pairs of singular values; report the two
    distinct values.  Overall scale is immaterial: spacing statistics are
    normalized by the ensemble mean spacing downstream.

    With ``size=None`` returns a single matrix, else a ``(size, ., .)`` stack.
    """
    shape = () if size is None else (int(size),)
    if tag == "A":
        out = _complex_normal(rng, shape + (2, 2), 1.0)
    elif tag == "AI":
        out = rng.standard_normal(shape + (2, 2))
    elif tag == "AIdag":
        out = _goe(rng, 2, shape) + 1j * _goe(rng, 2, shape)
    elif tag == "AII":
        out = _quaternion_ginibre(rng, 2, shape)
    elif tag == "AIIdag":
        out = _gse(rng, 2, shape) + 1j * _gse(rng, 2, shape)
    else:
        raise InvalidParameterError(f"unknown symmetry-class tag {tag!r}")
    return out


def has_kramers(spec: EnsembleSpec) -> bool:
    """Whether the spec's singular spectra carry exact Kramers degeneracy."""
    if spec.kind == "GinSE":
        return True
    if spec.kind == "Class2x2":
        return spec.params["tag"] in KRAMERS_CLASSES
    if spec.kind == "NHSYK":
        return spec.params["N"] % 8 == 4
    return False


def realize(spec: EnsembleSpec, index: int) -> np.ndarray:
    """Realization ``index`` of ``spec`` (pure function of ``(seed, index)``)."""
    if not 0 <= index < spec.realizations:
        raise InvalidParameterError(f"realization index {index} out of range")
    rng = realization_rng(spec.seed, index)
    if spec.kind in GINIBRE_KINDS:
        return sample_ginibre(spec.kind, spec.dim, rng)
    if spec.kind == "DiagPoisson":
        return sample_diag_poisson(spec.dim, rng)
    if spec.kind == "Interpolating":
        return sample_interpolating(spec.params["nu"], spec.dim, rng)
    if spec.kind == "NHSYK":
        return build_nhsyk(spec.params["N"], rng, m_scale=spec.params.get("m_scale", 1.0))
    if spec.kind == "Class2x2":
        return sample_class_2x2(spec.params["tag"], rng)
    raise InvalidParameterError(f"unknown ensemble kind {spec.kind!r}")
