"""Trial runners: one random problem instance and one halting-time measurement per call."""

import logging
import threading
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import ValidationError

from config.settings import get_settings
from ..cg import cg_halting_time
from ..deep_net import (
    N_DIGITS,
    MnistDataset,
    load_mnist_idx,
    subsample,
    complement,
    make_noise_inputs,
    accuracy,
    sgd_train_halting,
)
from ..ensembles import (
    COUPLING_STD,
    MAX_SPINS,
    sample_wishart,
    sample_rhs,
    sample_coupling_tensor,
    sample_sphere_point,
)
from ..spin_glass import gradient_descent_halting
from ..storage.models import (
    Algorithm,
    ExperimentConfig,
    TrialRecord,
    MatrixEnsemble,
    CouplingEnsemble,
    CgConfig,
    SpinGlassConfig,
    MlpArchitecture,
    InputKind,
    StoppingKind,
    inner_dimension,
)

logger = logging.getLogger(__name__)


class ConfigurationError(Exception):
    """Raised when an experiment cannot be set up from its configuration."""
    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(message)


# Ensemble display names used in summary tables
ENSEMBLE_LABELS = {
    "LOE": "LOE",
    "LUE": "LUE",
    "PBE": "PBE",
    "gaussian": "Gaussian",
    "bernoulli": "Bernoulli",
    "uniform": "Uniform",
    "mnist": "MNIST",
    "noise": "Random",
}


def model_label(config: ExperimentConfig) -> str:
    """Table row label for the algorithm/regime of a config."""
    if config.algorithm == Algorithm.CG:
        if config.m == config.n:
            return "CG: M = N"
        if config.m == inner_dimension(config.n, 2.0):
            return "CG: M = N + 2 floor(sqrt N)"
        return f"CG: M = N + {config.m - config.n}"
    if config.algorithm == Algorithm.SPIN_GLASS:
        return "Spin Glass"
    if config.stopping is not None and config.stopping.kind == StoppingKind.GRAD_NORM:
        return "Cond. on gradient"
    return "Fully connected"


def ensemble_label(config: ExperimentConfig) -> str:
    return ENSEMBLE_LABELS.get(config.ensemble, config.ensemble)


# =============================================================================
# RUNNERS
# =============================================================================

class BaseTrialRunner(ABC):
    """Abstract trial runner.

    Runners hold only read-only state after prepare(), so one instance is
    shared by every worker thread.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def prepare(self) -> None:
        """Load shared inputs before the first trial."""

    @abstractmethod
    def run_trial(self, trial_index: int, rng: np.random.Generator) -> TrialRecord:
        """
        Sample one instance and measure its halting time.

        Args:
            trial_index: Index of the trial within the experiment
            rng: Stream owned by this trial

        Returns:
            TrialRecord; numerical failures are flagged through converged/error
        """
        pass

    def failed_record(self, trial_index: int, reason: str) -> TrialRecord:
        """Record for a trial that raised instead of returning."""
        return TrialRecord(
            experiment_id=self.config.experiment_id,
            trial_index=trial_index,
            halting_time=0,
            converged=False,
            final_value=float("nan"),
            error=f"exception: {reason}",
        )


class CgTrialRunner(BaseTrialRunner):
    """Conjugate gradient on A = XX*, b uniform on (-1, 1)^n."""

    def __init__(self, config: ExperimentConfig):
        super().__init__(config)
        try:
            self.ensemble = MatrixEnsemble(kind=config.ensemble, n=config.n, m=config.m)
            self.cg_config = CgConfig(eps=config.eps, max_iter=config.max_iter,
                                      record_history=config.record_history)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid CG configuration: {e}") from e

    def run_trial(self, trial_index: int, rng: np.random.Generator) -> TrialRecord:
        a = sample_wishart(self.ensemble, rng)
        b = sample_rhs(self.ensemble.n, rng)
        result = cg_halting_time(a, b, self.cg_config)
        return TrialRecord(
            experiment_id=self.config.experiment_id,
            trial_index=trial_index,
            halting_time=result.halting_time,
            converged=result.converged,
            final_value=result.recursive_residual_norm,
            diagnostics={"true_residual_norm": result.true_residual_norm},
            history=result.residual_history,
            error=result.error,
        )


class SpinGlassTrialRunner(BaseTrialRunner):
    """Projected gradient descent on a random 3-spin spherical Hamiltonian.

    With match_coupling_scale the step is eta / sigma and the threshold eps * sigma,
    sigma the coupling law's standard deviation. The trajectory is then the one
    eta and eps give on the standardized couplings x / sigma, for every law.
    """

    def __init__(self, config: ExperimentConfig):
        super().__init__(config)
        if config.n > MAX_SPINS:
            raise ConfigurationError(f"n={config.n} exceeds the coupling tensor limit of {MAX_SPINS}", field="n")
        try:
            self.ensemble = CouplingEnsemble(kind=config.ensemble, n=config.n)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid spin glass configuration: {e}") from e

        self.coupling_std = COUPLING_STD[self.ensemble.kind]
        scale = self.coupling_std if config.match_coupling_scale else 1.0
        self.descent_config = SpinGlassConfig(
            eta=config.eta / scale,
            eps=config.eps * scale,
            max_iter=config.max_iter,
            gradient_norm=config.gradient_norm,
            record_history=config.record_history,
        )
        if scale != 1.0:
            logger.debug(
                f"{config.ensemble} couplings: step {self.descent_config.eta:.4g}, "
                f"threshold {self.descent_config.eps:.4g}"
            )

    def run_trial(self, trial_index: int, rng: np.random.Generator) -> TrialRecord:
        x = sample_coupling_tensor(self.ensemble, rng)
        w0 = sample_sphere_point(self.ensemble.n, rng)
        result = gradient_descent_halting(x, w0, self.descent_config)
        return TrialRecord(
            experiment_id=self.config.experiment_id,
            trial_index=trial_index,
            halting_time=result.halting_time,
            converged=result.converged,
            final_value=result.final_energy_per_spin,
            diagnostics={
                "final_energy": result.final_energy,
                "final_gradient_norm": result.final_gradient_norm,
                "standardized_energy_per_spin": result.final_energy_per_spin / self.coupling_std,
            },
            history=result.energy_history,
            error=result.error,
        )


class DeepNetTrialRunner(BaseTrialRunner):
    """Minibatch SGD on a fresh subsample of MNIST (or Gaussian noise with MNIST labels)."""

    def __init__(self, config: ExperimentConfig, train_set: Optional[MnistDataset] = None,
                 test_set: Optional[MnistDataset] = None):
        """
        Initialize deep-net runner.

        Args:
            config: Experiment configuration
            train_set: Pre-loaded training pool; read from IDX files when omitted
            test_set: Pre-loaded held-out set; read from IDX files when paths are given
        """
        super().__init__(config)
        try:
            self.arch = MlpArchitecture(layer_sizes=config.layer_sizes)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid architecture: {e}") from e
        if self.arch.n_classes != N_DIGITS:
            raise ConfigurationError(
                f"Output layer has {self.arch.n_classes} units, MNIST labels need {N_DIGITS}",
                field="layer_sizes",
            )
        self.train_set = train_set
        self.test_set = test_set
        self._lock = threading.Lock()

    def _resolve_paths(self) -> tuple[Path, Path, Optional[Path], Optional[Path]]:
        defaults = get_settings().deep_net
        cfg = self.config
        train_images, train_labels = cfg.train_images_path, cfg.train_labels_path
        test_images, test_labels = cfg.test_images_path, cfg.test_labels_path

        if defaults.mnist_dir:
            base = Path(defaults.mnist_dir)

            def _find(name: str) -> Optional[str]:
                for candidate in (base / name, base / f"{name}.gz"):
                    if candidate.exists():
                        return str(candidate)
                return None

            train_images = train_images or _find(defaults.train_images)
            train_labels = train_labels or _find(defaults.train_labels)
            test_images = test_images or _find(defaults.test_images)
            test_labels = test_labels or _find(defaults.test_labels)

        if not train_images or not train_labels:
            raise ConfigurationError(
                "MNIST training files not configured. Set train_images_path/train_labels_path "
                "or HALTING_MNIST_DIR",
                field="train_images_path",
            )
        test_pair = (Path(test_images), Path(test_labels)) if test_images and test_labels else (None, None)
        return Path(train_images), Path(train_labels), *test_pair

    def prepare(self) -> None:
        with self._lock:
            if self.train_set is None:
                train_images, train_labels, test_images, test_labels = self._resolve_paths()
                for path in (train_images, train_labels):
                    if not path.exists():
                        raise ConfigurationError(f"MNIST file not found: {path}", field="train_images_path")
                self.train_set = load_mnist_idx(train_images, train_labels)
                if test_images is not None and test_images.exists() and test_labels.exists():
                    self.test_set = load_mnist_idx(test_images, test_labels)

        if self.config.samples > len(self.train_set):
            raise ConfigurationError(
                f"samples={self.config.samples} exceeds the {len(self.train_set)} available training items",
                field="samples",
            )
        if self.train_set.images.shape[1] != self.arch.layer_sizes[0]:
            raise ConfigurationError(
                f"Inputs have {self.train_set.images.shape[1]} features, "
                f"architecture expects {self.arch.layer_sizes[0]}",
                field="layer_sizes",
            )

    def _held_out(self, drawn: MnistDataset, rng: np.random.Generator) -> Optional[MnistDataset]:
        limit = self.config.eval_samples
        if not limit:
            return None
        if self.test_set is not None:
            held_out = self.test_set.take(np.arange(min(limit, len(self.test_set))))
        else:
            held_out = complement(self.train_set, drawn, limit=limit)
        if len(held_out) == 0:
            return None
        if self.config.ensemble_kind == InputKind.NOISE:
            held_out = make_noise_inputs(held_out, rng)
        return held_out

    def run_trial(self, trial_index: int, rng: np.random.Generator) -> TrialRecord:
        if self.train_set is None:
            self.prepare()
        cfg = self.config

        drawn = subsample(self.train_set, cfg.samples, rng)
        train = make_noise_inputs(drawn, rng) if cfg.ensemble_kind == InputKind.NOISE else drawn

        result = sgd_train_halting(
            self.arch,
            train,
            batch_size=cfg.batch_size,
            lr=cfg.learning_rate,
            stop=cfg.stopping,
            cap=cfg.cap,
            rng=rng,
            record_history=cfg.record_history,
        )

        diagnostics = {
            "train_accuracy": result.train_accuracy,
            "final_gradient_norm": result.final_gradient_norm,
        }
        held_out = self._held_out(drawn, rng)
        if held_out is not None and result.params.is_finite():
            diagnostics["test_accuracy"] = accuracy(result.params, held_out)

        return TrialRecord(
            experiment_id=cfg.experiment_id,
            trial_index=trial_index,
            halting_time=result.halting_time,
            converged=result.converged,
            final_value=result.final_train_cost,
            diagnostics=diagnostics,
            history=result.cost_history,
            error=result.error,
        )


def get_trial_runner(config: ExperimentConfig, **kwargs) -> BaseTrialRunner:
    """
    Factory function to get the runner for a config's algorithm.

    Args:
        config: Validated experiment configuration
        **kwargs: Passed to the runner (e.g. pre-loaded datasets for deep_net)

    Returns:
        Configured trial runner
    """
    if config.algorithm == Algorithm.CG:
        return CgTrialRunner(config)
    elif config.algorithm == Algorithm.SPIN_GLASS:
        return SpinGlassTrialRunner(config)
    elif config.algorithm == Algorithm.DEEP_NET:
        return DeepNetTrialRunner(config, **kwargs)
    else:
        raise ConfigurationError(f"Unknown algorithm: {config.algorithm}")
