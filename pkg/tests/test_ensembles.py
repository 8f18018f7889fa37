import numpy as np
import numpy.linalg as la
import pytest

from krylov_svd import (
    EnsembleSpec,
    build_nhsyk,
    nhsyk_class,
    realization_rng,
    realize,
    sample_class_2x2,
    sample_ginibre,
    sample_interpolating,
)
from krylov_svd.ensembles import (
    CLASS_INDICES,
    has_kramers,
    majorana_matrices,
    parity_mask,
    sample_diag_poisson,
    sub_seed,
)
from krylov_svd.errors import InvalidParameterError
from krylov_svd.spectral import wigner_dyson_cdf


class TestEnsembleSpec:
    def test_rejects_bad_kind(self):
        with pytest.raises(InvalidParameterError):
            EnsembleSpec(kind="bogus", dim=4)

    def test_rejects_bad_dim(self):
        with pytest.raises(InvalidParameterError):
            EnsembleSpec(kind="GinOE", dim=0)

    def test_interpolating_nu_range(self):
        with pytest.raises(InvalidParameterError):
            EnsembleSpec(kind="Interpolating", dim=8, params={"nu": 1.5})

    def test_nhsyk_dim_derived(self):
        spec = EnsembleSpec(kind="NHSYK", dim=1, params={"N": 22})
        assert spec.dim == 1024

    def test_nhsyk_rejects_odd(self):
        with pytest.raises(InvalidParameterError):
            EnsembleSpec(kind="NHSYK", dim=1, params={"N": 9})

    def test_class2x2_forces_dim(self):
        spec = EnsembleSpec(kind="Class2x2", dim=17, params={"tag": "A"})
        assert spec.dim == 2

    def test_roundtrip_dict(self):
        spec = EnsembleSpec(kind="Interpolating", dim=16, params={"nu": 0.5},
                            seed=12, realizations=3)
        assert EnsembleSpec.from_dict(spec.to_dict()) == spec


class TestReproducibility:
    def test_realization_is_pure_function(self):
        spec = EnsembleSpec(kind="GinUE", dim=16, seed=99, realizations=4)
        first = [realize(spec, i) for i in range(4)]
        again = [realize(spec, i) for i in (2, 0, 3, 1)]
        for i, j in enumerate((2, 0, 3, 1)):
            np.testing.assert_array_equal(again[i], first[j])

    def test_sub_seed_stable_and_distinct(self):
        assert sub_seed(7, 3) == sub_seed(7, 3)
        seeds = {sub_seed(7, i) for i in range(10000)}
        assert len(seeds) == 10000

    def test_distinct_masters_distinct_streams(self):
        a = realization_rng(1, 0).standard_normal(4)
        b = realization_rng(2, 0).standard_normal(4)
        assert not np.allclose(a, b)


class TestGinibre:
    def test_rejects_zero_dim(self, rng):
        with pytest.raises(InvalidParameterError):
            sample_ginibre("GinOE", 0, rng)

    def test_ginoe_real_with_correct_moments(self, rng):
        d = 1024
        h = sample_ginibre("GinOE", d, rng)
        assert np.isrealobj(h)
        # mean of d^2 iid N(0, 1/d) entries: 4 sigma band
        band = 4 * np.sqrt(1.0 / d) / d
        assert abs(h.mean()) < band
        assert abs(h.var() * d - 1.0) < 0.05

    def test_ginue_scalar_variance(self, rng):
        draws = np.array([sample_ginibre("GinUE", 1, rng)[0, 0] for _ in range(20000)])
        # E|H|^2 = 1 at d = 1; var of |z|^2 is 1 -> 3 sigma band
        assert abs(np.mean(np.abs(draws) ** 2) - 1.0) < 3 / np.sqrt(20000)

    def test_ginue_entry_variance_scaling(self, rng):
        d, reps = 64, 50
        acc = 0.0
        for _ in range(reps):
            h = sample_ginibre("GinUE", d, rng)
            acc += np.mean(np.abs(h) ** 2)
        est = acc / reps * d
        assert abs(est - 1.0) < 5 / np.sqrt(reps * d * d)

    def test_ginse_shape_and_kramers(self, rng):
        d = 32
        h = sample_ginibre("GinSE", d, rng)
        assert h.shape == (2 * d, 2 * d)
        s = la.svd(h, compute_uv=False)
        assert np.abs(s[0::2] - s[1::2]).max() < 1e-12 * s[0]

    def test_ginse_block_structure(self, rng):
        d = 8
        h = sample_ginibre("GinSE", d, rng)
        np.testing.assert_allclose(h[d:, d:], np.conj(h[:d, :d]), atol=1e-15)
        np.testing.assert_allclose(h[d:, :d], -np.conj(h[:d, d:]), atol=1e-15)


class TestInterpolating:
    def test_nu_zero_exactly_diagonal(self, rng):
        h = sample_interpolating(0.0, 32, rng)
        off = h - np.diag(np.diag(h))
        assert np.abs(off).max() == 0.0

    def test_nu_one_matches_ginue_stats(self, rng):
        d = 128
        h = sample_interpolating(1.0, d, rng)
        assert abs(np.mean(np.abs(h) ** 2) * d - 1.0) < 0.1

    def test_diagonal_variance(self, rng):
        h = sample_diag_poisson(4096, rng)
        assert abs(np.mean(np.abs(np.diag(h)) ** 2) - 1.0) < 0.1

    def test_rejects_out_of_range(self, rng):
        with pytest.raises(InvalidParameterError):
            sample_interpolating(1.2, 8, rng)


class TestNHSYK:
    def test_block_dimensions(self):
        assert EnsembleSpec(kind="NHSYK", dim=1, params={"N": 8}).dim == 8
        assert EnsembleSpec(kind="NHSYK", dim=1, params={"N": 22}).dim == 1024

    def test_majorana_algebra(self):
        psi = majorana_matrices(8)
        assert len(psi) == 8
        eye = np.eye(psi[0].shape[0])
        worst = 0.0
        for a in range(8):
            for b in range(8):
                anti = psi[a] @ psi[b] + psi[b] @ psi[a]
                target = eye if a == b else 0.0
                worst = max(worst, np.abs(anti - target).max())
        assert worst < 1e-12

    def test_parity_commutes_before_restriction(self, rng):
        n = 10
        h = build_nhsyk(n, rng, full=True)
        p = np.where(parity_mask(n), 1.0, -1.0)
        comm = h * p[None, :] - p[:, None] * h  # [H, P] for diagonal P
        assert np.abs(comm).max() < 1e-10

    def test_hermiticity_breaking_toggle(self):
        h0 = build_nhsyk(10, realization_rng(3, 0), m_scale=0.0)
        assert np.abs(h0 - h0.conj().T).max() < 1e-12
        h1 = build_nhsyk(10, realization_rng(3, 0), m_scale=1.0)
        assert np.abs(h1 - h1.conj().T).max() > 1e-3

    def test_block_size(self, rng):
        h = build_nhsyk(8, rng)
        assert h.shape == (8, 8)

    def test_rejects_odd_n(self, rng):
        with pytest.raises(InvalidParameterError):
            build_nhsyk(9, rng)

    def test_class_assignments(self):
        assert nhsyk_class(16) == "AIdag"
        assert nhsyk_class(18) == "A"
        assert nhsyk_class(20) == "AIIdag"
        assert nhsyk_class(22) == "A"
        assert nhsyk_class(24) == "AIdag"

    def test_kramers_degeneracy_when_n_mod8_is_4(self, rng):
        h = build_nhsyk(12, rng)  # 12 mod 8 = 4: within-block Kramers pairs
        s = np.sort(la.svd(h, compute_uv=False))
        assert np.abs(s[1::2] - s[0::2]).max() < 1e-10 * s[-1]

    def test_coupling_variance(self):
        # tr(H Hdag)/dim estimates C(N,4) * 2 * (6/N^3) / 16
        n, reps = 10, 40
        est = 0.0
        for i in range(reps):
            h = build_nhsyk(n, realization_rng(11, i), full=True)
            est += np.real(np.trace(h @ h.conj().T)) / h.shape[0]
        est /= reps
        from math import comb
        expected = comb(n, 4) * 2 * 6 / n**3 / 16
        assert abs(est / expected - 1) < 0.15


class TestClass2x2:
    def test_shapes(self, rng):
        assert sample_class_2x2("A", rng).shape == (2, 2)
        assert sample_class_2x2("AII", rng).shape == (4, 4)
        assert sample_class_2x2("AI", rng, size=7).shape == (7, 2, 2)
        assert sample_class_2x2("AIIdag", rng, size=5).shape == (5, 4, 4)

    def test_ai_real_a_complex(self, rng):
        assert np.isrealobj(sample_class_2x2("AI", rng))
        assert np.iscomplexobj(sample_class_2x2("A", rng))

    def test_aidag_complex_symmetric(self, rng):
        h = sample_class_2x2("AIdag", rng)
        np.testing.assert_allclose(h, h.T, atol=1e-14)

    def test_quaternionic_kramers_pairs(self, rng):
        for tag in ("AII", "AIIdag"):
            h = sample_class_2x2(tag, rng, size=50)
            s = la.svd(h, compute_uv=False)
            assert np.abs(s[:, 0] - s[:, 1]).max() < 1e-12
            assert np.abs(s[:, 2] - s[:, 3]).max() < 1e-12

    def test_unknown_tag(self, rng):
        with pytest.raises(InvalidParameterError):
            sample_class_2x2("B", rng)

    @pytest.mark.parametrize("tag,beta", [("A", 2), ("AI", 1), ("AII", 4)])
    def test_spacing_distribution_matches_surmise(self, tag, beta):
        # Kolmogorov-Smirnov distance against the Wigner-Dyson surmise
        from krylov_svd.cli import class_spacings

        lam = class_spacings(tag, 100000, realization_rng(101, hash(tag) % 100))
        lam = np.sort(lam)
        emp = (np.arange(1, len(lam) + 1) - 0.5) / len(lam)
        ks = np.abs(emp - wigner_dyson_cdf(lam, beta)).max()
        assert ks < 0.01


def test_has_kramers():
    assert has_kramers(EnsembleSpec(kind="GinSE", dim=8))
    assert not has_kramers(EnsembleSpec(kind="GinOE", dim=8))
    assert has_kramers(EnsembleSpec(kind="NHSYK", dim=1, params={"N": 12}))
    assert not has_kramers(EnsembleSpec(kind="NHSYK", dim=1, params={"N": 14}))
    assert has_kramers(EnsembleSpec(kind="Class2x2", dim=2, params={"tag": "AII"}))
    assert not has_kramers(EnsembleSpec(kind="Class2x2", dim=2, params={"tag": "A"}))


def test_class_indices_table():
    assert CLASS_INDICES == {"A": (2, 1), "AI": (1, 0), "AIdag": (1, 1),
                             "AII": (4, 3), "AIIdag": (4, 1)}
