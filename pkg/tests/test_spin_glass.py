"""Tests for the spherical spin glass energy and projected gradient descent."""

import numpy as np
import pytest

from core.ensembles import CouplingTensor, sample_coupling_tensor, sample_sphere_point, trial_stream
from core.spin_glass import (
    FLOOR_ENERGY_PER_SPIN,
    energy_and_gradient,
    gradient,
    gradient_descent_halting,
    hamiltonian,
    tangential_component,
)
from core.storage.models import CouplingEnsemble, GradientNorm, SpinGlassConfig

RTOL = 1e-10


def _instance(n: int, seed: int, kind: str = "gaussian"):
    rng = trial_stream(seed, 0)
    x = sample_coupling_tensor(CouplingEnsemble(kind=kind, n=n), rng)
    w = sample_sphere_point(n, rng)
    return x, w


def _brute_force_energy(x: CouplingTensor, w: np.ndarray) -> float:
    total = 0.0
    for i in range(x.n):
        for j in range(x.n):
            for k in range(x.n):
                total += x.entries[i, j, k] * w[i] * w[j] * w[k]
    return total / x.n


class TestHamiltonian:
    def test_zero_couplings(self):
        w = np.array([1.0, -1.0, 1.0])
        assert hamiltonian(CouplingTensor.zeros(3), w) == 0.0
        np.testing.assert_array_equal(gradient(CouplingTensor.zeros(3), w), np.zeros(3))

    def test_single_entry(self):
        entries = np.zeros((2, 2, 2))
        entries[0, 0, 0] = 1.0
        x = CouplingTensor(n=2, entries=entries)
        w = np.array([1.2, -0.7])
        assert hamiltonian(x, w) == pytest.approx(1.2 ** 3 / 2.0, rel=RTOL)
        np.testing.assert_allclose(gradient(x, w), [3.0 * 1.2 ** 2 / 2.0, 0.0], rtol=RTOL, atol=1e-14)

    def test_matches_triple_loop(self):
        x, w = _instance(5, 1)
        assert hamiltonian(x, w) == pytest.approx(_brute_force_energy(x, w), rel=1e-12)

    def test_energy_and_gradient_agree(self):
        x, w = _instance(7, 2)
        energy, grad = energy_and_gradient(x, w)
        assert energy == pytest.approx(hamiltonian(x, w), rel=1e-12)
        np.testing.assert_allclose(grad, gradient(x, w), rtol=1e-12)

    def test_euler_identity(self):
        # H is homogeneous of degree 3
        x, w = _instance(9, 3)
        energy, grad = energy_and_gradient(x, w)
        assert np.dot(grad, w) == pytest.approx(3.0 * energy, rel=1e-10)

    @pytest.mark.parametrize("kind", ["gaussian", "bernoulli", "uniform"])
    def test_homogeneity(self, kind):
        x, w = _instance(11, 12, kind)
        energy, grad = energy_and_gradient(x, w)
        scaled_energy, scaled_grad = energy_and_gradient(x, 2.0 * w)
        assert scaled_energy == pytest.approx(8.0 * energy, rel=1e-12)
        np.testing.assert_allclose(scaled_grad, 4.0 * grad, rtol=1e-12, atol=1e-12 * np.max(np.abs(grad)))

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(0)
        h = 1e-5
        for seed in range(20):
            n = int(rng.integers(2, 11))
            kind = ["gaussian", "bernoulli", "uniform"][seed % 3]
            x, w = _instance(n, seed, kind)
            grad = gradient(x, w)
            fd = np.empty(n)
            for i in range(n):
                step = np.zeros(n)
                step[i] = h
                fd[i] = (hamiltonian(x, w + step) - hamiltonian(x, w - step)) / (2.0 * h)
            assert np.max(np.abs(grad - fd)) / np.max(np.abs(grad)) < 1e-6

    def test_dimension_mismatch(self):
        x, _ = _instance(4, 0)
        with pytest.raises(ValueError):
            hamiltonian(x, np.ones(5))


class TestTangentialComponent:
    def test_orthogonal_to_point(self):
        x, w = _instance(12, 4)
        tangent = tangential_component(gradient(x, w), w)
        assert abs(np.dot(tangent, w)) < 1e-10 * np.linalg.norm(w) * np.linalg.norm(tangent)

    def test_never_longer_than_ambient(self):
        x, w = _instance(12, 5)
        grad = gradient(x, w)
        assert np.linalg.norm(tangential_component(grad, w)) <= np.linalg.norm(grad)


class TestGradientDescentHalting:
    def test_zero_couplings_halt_immediately(self):
        w0 = sample_sphere_point(5, np.random.default_rng(0))
        result = gradient_descent_halting(CouplingTensor.zeros(5), w0, SpinGlassConfig(eta=0.01, eps=0.1, max_iter=10))
        assert result.halting_time == 0
        assert result.converged
        assert result.final_energy == 0.0

    def test_descends_and_converges(self):
        x, w0 = _instance(20, 6)
        cfg = SpinGlassConfig(eta=0.02, eps=0.2, max_iter=50_000, record_history=True)
        result = gradient_descent_halting(x, w0, cfg)
        assert result.converged
        assert result.error is None
        assert result.final_gradient_norm < 0.2
        assert result.final_energy < hamiltonian(x, w0)
        assert result.final_energy_per_spin == pytest.approx(result.final_energy / 20)
        assert len(result.energy_history) == result.halting_time + 1
        assert result.energy_history[0] == pytest.approx(hamiltonian(x, w0))

    def test_ambient_norm_halts_no_earlier(self):
        # The trajectory does not depend on the norm being tested
        x, w0 = _instance(15, 7)
        base = dict(eta=0.02, eps=0.5, max_iter=5000)
        tangential = gradient_descent_halting(x, w0, SpinGlassConfig(**base, gradient_norm=GradientNorm.TANGENTIAL))
        ambient = gradient_descent_halting(x, w0, SpinGlassConfig(**base, gradient_norm=GradientNorm.AMBIENT))
        assert ambient.halting_time >= tangential.halting_time

    def test_max_iter_flagged(self):
        x, w0 = _instance(10, 8)
        result = gradient_descent_halting(x, w0, SpinGlassConfig(eta=0.01, eps=1e-12, max_iter=3))
        assert result.halting_time == 3
        assert not result.converged
        assert result.error == "max_iter"

    def test_start_must_lie_on_sphere(self):
        x, w0 = _instance(6, 9)
        with pytest.raises(ValueError):
            gradient_descent_halting(x, 2.0 * w0, SpinGlassConfig(eta=0.01, eps=0.1, max_iter=10))

    def test_start_dimension(self):
        x, _ = _instance(6, 9)
        with pytest.raises(ValueError):
            gradient_descent_halting(x, np.ones(4) * np.sqrt(6 / 4), SpinGlassConfig(eta=0.01, eps=0.1, max_iter=10))

    def test_deterministic(self):
        x, w0 = _instance(10, 10)
        cfg = SpinGlassConfig(eta=0.02, eps=0.3, max_iter=10_000)
        first = gradient_descent_halting(x, w0, cfg)
        second = gradient_descent_halting(x, w0, cfg)
        assert first.halting_time == second.halting_time
        assert first.final_energy == second.final_energy

    def test_final_point_on_sphere(self):
        x, w0 = _instance(20, 13)
        result = gradient_descent_halting(x, w0, SpinGlassConfig(eta=0.02, eps=0.2, max_iter=50_000))
        assert np.linalg.norm(result.final_point) == pytest.approx(np.sqrt(20), rel=1e-10)
        assert hamiltonian(x, result.final_point) == pytest.approx(result.final_energy, rel=1e-12)

    def test_floor_constant(self):
        assert FLOOR_ENERGY_PER_SPIN == pytest.approx(-1.633, abs=1e-3)


class TestDescentInvariants:
    N = 100

    @pytest.mark.parametrize("kind", ["gaussian", "bernoulli", "uniform"])
    def test_every_iterate_on_sphere(self, kind):
        x, w0 = _instance(self.N, 14, kind)
        radius = np.sqrt(self.N)
        for t in range(1, 31):
            result = gradient_descent_halting(x, w0, SpinGlassConfig(eta=0.01, eps=1e-12, max_iter=t))
            assert result.halting_time == t
            assert abs(np.linalg.norm(result.final_point) - radius) <= 1e-10 * radius

    @pytest.mark.parametrize("kind", ["gaussian", "bernoulli", "uniform"])
    @pytest.mark.parametrize("eta", [0.01, 0.005])
    def test_energy_never_rises_for_small_steps(self, kind, eta):
        for seed in (15, 16):
            x, w0 = _instance(self.N, seed, kind)
            cfg = SpinGlassConfig(eta=eta, eps=1e-12, max_iter=400, record_history=True)
            history = np.array(gradient_descent_halting(x, w0, cfg).energy_history)
            assert len(history) == 401
            assert np.all(np.diff(history) <= 1e-8 * self.N)

