"""Tests for the random problem generators."""

import numpy as np
import pytest
from pydantic import ValidationError

from core.ensembles import (
    MAX_SPINS,
    EnsembleSizeError,
    inner_dimension,
    sample_coupling_tensor,
    sample_rhs,
    sample_sphere_point,
    sample_wishart,
    trial_stream,
)
from core.ensembles.couplings import BERNOULLI_MAGNITUDE, COUPLING_STD, UNIFORM_HALF_WIDTH
from core.storage.models import CouplingEnsemble, CouplingKind, MatrixEnsemble


class TestTrialStream:
    def test_same_key_same_numbers(self):
        a = trial_stream(42, 3).standard_normal(5)
        b = trial_stream(42, 3).standard_normal(5)
        np.testing.assert_array_equal(a, b)

    def test_different_index_differs(self):
        a = trial_stream(42, 3).standard_normal(5)
        b = trial_stream(42, 4).standard_normal(5)
        assert not np.array_equal(a, b)

    def test_different_seed_differs(self):
        a = trial_stream(1, 0).standard_normal(5)
        b = trial_stream(2, 0).standard_normal(5)
        assert not np.array_equal(a, b)

    def test_independent_of_creation_order(self):
        forward = [trial_stream(9, i).random() for i in range(5)]
        backward = [trial_stream(9, i).random() for i in reversed(range(5))]
        assert forward == list(reversed(backward))

    def test_accepts_full_64_bit_seed(self):
        trial_stream(2**64 - 1, 0).random()

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            trial_stream(0, -1)


class TestSampleRhs:
    def test_open_interval(self):
        b = sample_rhs(3, np.random.default_rng(0))
        assert b.shape == (3,)
        assert np.all(np.abs(b) < 1.0)

    def test_moments(self):
        b = sample_rhs(100_000, np.random.default_rng(1))
        assert abs(b.mean()) < 0.01
        assert b.var() == pytest.approx(1.0 / 3.0, abs=0.01)

    def test_rejects_nonpositive_dimension(self):
        with pytest.raises(ValueError):
            sample_rhs(0, np.random.default_rng(0))


class TestInnerDimension:
    @pytest.mark.parametrize("n, c, expected", [
        (500, 2.0, 544),
        (500, 0.0, 500),
        (100, 2.0, 120),
        (1, 2.0, 3),
        (8, 2.0, 12),
        (10, 1.5, 14),
    ])
    def test_values(self, n, c, expected):
        assert inner_dimension(n, c) == expected

    def test_rejects_negative_scaling(self):
        with pytest.raises(ValueError):
            inner_dimension(10, -1.0)


class TestSampleWishart:
    def test_pbe_one_by_one_is_one(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            a = sample_wishart(MatrixEnsemble(kind="PBE", n=1, m=1), rng)
            np.testing.assert_array_equal(a, [[1.0]])

    @pytest.mark.parametrize("kind", ["PBE", "LOE", "LUE"])
    def test_exactly_hermitian(self, kind):
        a = sample_wishart(MatrixEnsemble(kind=kind, n=12, m=15), np.random.default_rng(3))
        assert a.shape == (12, 12)
        np.testing.assert_array_equal(a, a.conj().T)

    def test_field_follows_kind(self):
        rng = np.random.default_rng(0)
        assert sample_wishart(MatrixEnsemble(kind="LOE", n=4, m=4), rng).dtype == np.float64
        assert sample_wishart(MatrixEnsemble(kind="PBE", n=4, m=4), rng).dtype == np.float64
        assert sample_wishart(MatrixEnsemble(kind="LUE", n=4, m=4), rng).dtype == np.complex128

    @pytest.mark.parametrize("kind", ["LOE", "LUE"])
    def test_positive_semidefinite(self, kind):
        a = sample_wishart(MatrixEnsemble(kind=kind, n=8, m=8), np.random.default_rng(5))
        eigenvalues = np.linalg.eigvalsh(a)
        assert eigenvalues.min() >= -1e-10 * np.abs(eigenvalues).max()

    def test_lue_entry_variance(self):
        # E[A_ii] = m for unit-variance complex entries
        rng = np.random.default_rng(11)
        diag = [np.real(np.diag(sample_wishart(MatrixEnsemble(kind="LUE", n=10, m=20), rng))).mean()
                for _ in range(200)]
        assert np.mean(diag) == pytest.approx(20.0, rel=0.02)

    def test_rejects_short_inner_dimension(self):
        with pytest.raises(ValidationError):
            MatrixEnsemble(kind="LOE", n=5, m=4)


class TestSampleCouplingTensor:
    @pytest.mark.parametrize("kind", ["gaussian", "bernoulli", "uniform"])
    def test_entry_count(self, kind):
        x = sample_coupling_tensor(CouplingEnsemble(kind=kind, n=2), np.random.default_rng(0))
        assert x.entries.size == 8
        assert x.entries.shape == (2, 2, 2)

    def test_bernoulli_values(self):
        x = sample_coupling_tensor(CouplingEnsemble(kind="bernoulli", n=10), np.random.default_rng(0))
        assert set(np.unique(x.entries)) == {-BERNOULLI_MAGNITUDE, BERNOULLI_MAGNITUDE}

    @pytest.mark.parametrize("kind, variance", [
        ("gaussian", 1.0),
        ("bernoulli", 0.5),
        ("uniform", UNIFORM_HALF_WIDTH ** 2 / 3.0),
    ])
    def test_entry_variance(self, kind, variance):
        # 47^3 = 103,823 draws
        x = sample_coupling_tensor(CouplingEnsemble(kind=kind, n=47), np.random.default_rng(2))
        assert x.entries.var() == pytest.approx(variance, abs=0.015)
        assert COUPLING_STD[CouplingKind(kind)] ** 2 == pytest.approx(variance, rel=1e-12)

    def test_uniform_support(self):
        x = sample_coupling_tensor(CouplingEnsemble(kind="uniform", n=20), np.random.default_rng(0))
        assert np.all(np.abs(x.entries) < UNIFORM_HALF_WIDTH)
        assert UNIFORM_HALF_WIDTH ** 2 / 3.0 == pytest.approx(0.4368, abs=1e-4)

    def test_size_guard(self):
        with pytest.raises(EnsembleSizeError) as exc_info:
            sample_coupling_tensor(CouplingEnsemble(kind="gaussian", n=MAX_SPINS + 1),
                                   np.random.default_rng(0))
        assert exc_info.value.limit == MAX_SPINS

    def test_reproducible(self):
        spec = CouplingEnsemble(kind="uniform", n=5)
        a = sample_coupling_tensor(spec, trial_stream(4, 2))
        b = sample_coupling_tensor(spec, trial_stream(4, 2))
        np.testing.assert_array_equal(a.entries, b.entries)


class TestSampleSpherePoint:
    @pytest.mark.parametrize("n", [1, 2, 4, 10, 500])
    def test_radius(self, n):
        w = sample_sphere_point(n, np.random.default_rng(n))
        assert np.dot(w, w) == pytest.approx(n, rel=1e-10)

    def test_zero_sphere(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            w = sample_sphere_point(1, rng)
            assert abs(w[0]) == pytest.approx(1.0, rel=1e-12)

    def test_first_coordinate_centered(self):
        rng = np.random.default_rng(8)
        first = np.array([sample_sphere_point(10, rng)[0] for _ in range(20_000)])
        assert abs(first.mean()) < 0.03
