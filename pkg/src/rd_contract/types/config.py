import json
import os
from collections.abc import Mapping
from enum import StrEnum
from pathlib import Path
from typing import Any, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from rd_contract.core.utils import logger

from .translation import TranslationParams

# ============================================================================
# Enumerations
# ============================================================================


class Command(StrEnum):
    """CLI commands."""

    SIMULATE = "simulate"
    CERTIFY = "certify"
    SWEEP_OMEGA = "sweep-omega"
    SWEEP_ZETA = "sweep-zeta"
    BCF = "bcf"
    EIG = "eig"
    QSS = "qss"


class ModelPreset(StrEnum):
    """Built-in systems addressable by name."""

    EXAMPLE31 = "example31"
    EXAMPLE32 = "example32"
    TRANSLATION = "translation"


class LambdaSource(StrEnum):
    """Where the diffusion margin Lambda of the deviation condition comes from."""

    FLOOR = "floor"
    """Certified analytic floor pi^2 min d^(2 theta) / max d^(2 theta - 1)."""

    NUMERIC = "numeric"
    """Discrete second eigenvalue of the assembled operator."""


# ============================================================================
# Configuration sections
# ============================================================================


class GridSettings(BaseModel):
    """Spatial discretization."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(default=500, ge=3)
    """Number of grid nodes."""


class TimeSettings(BaseModel):
    """Time stepping and slope window.

    Attributes:
        dt: Step size; None picks 0.1 / (reaction Jacobian spectral radius), capped at 0.1
        t_end: Final time
        sample_every: Store every k-th step in the trajectory
        window: (t_lo, t_hi) interval for the log-norm slope
    """

    model_config = ConfigDict(frozen=True)

    dt: float | None = Field(default=None, gt=0)
    t_end: float = Field(default=100.0, gt=0)
    sample_every: int = Field(default=10, ge=1)
    window: tuple[float, float] = (80.0, 100.0)


class SamplingSettings(BaseModel):
    """Probe density for the sampled infima and suprema of the certificate conditions."""

    model_config = ConfigDict(frozen=True)

    n_random: int = Field(default=64, ge=0)
    """Uniform random probes drawn in addition to the centre, corners and face midpoints."""

    seed: int = 0
    """Seed for ``numpy.random.default_rng``; recorded in every output."""


class SweepSettings(BaseModel):
    """Parameter ranges and pool size for the sweep commands."""

    model_config = ConfigDict(frozen=True)

    omega_min: float = Field(default=1e-3, gt=0)
    omega_max: float = Field(default=1.0, gt=0)
    r_min: float = Field(default=0.0, ge=0)
    r_max: float = Field(default=1.0, ge=0)
    zeta_min: float = Field(default=1.0, gt=0)
    zeta_max: float = Field(default=10.0, gt=0)
    steps: int = Field(default=11, ge=2)
    tol: float = Field(default=0.05, gt=0)
    """Relative bisection tolerance: the search stops once the bracket is narrower than tol times its lower end."""

    workers: int = Field(default=4, ge=1)
    """Requested pool size; capped by RD_CONTRACT_THREADS and the CPU count."""


class ModelSettings(BaseModel):
    """Which built-in system to run and its scalar parameters."""

    model_config = ConfigDict(frozen=True)

    preset: ModelPreset = ModelPreset.EXAMPLE31
    epsilon: float = Field(default=1e-2, gt=0)
    omega: float = Field(default=0.1, ge=0)
    zeta: float = Field(default=3.0, gt=0)
    r: float = Field(default=0.0, ge=0)
    diffusion_scale: float = Field(default=1.0, gt=0)
    """Multiplier on the translation-model diffusivities."""

    pointwise_gamma: bool = True
    """Use a per-node diagonal witness when certifying the two-species example."""


# ============================================================================
# Run configuration
# ============================================================================


class RunConfig(BaseModel):
    """Complete description of one CLI run.

    Loaded from JSON with :meth:`from_file`; command-line flags are merged on top with
    :meth:`with_overrides`. The canonical JSON dump of this model is what the config hash covers.
    """

    model_config = ConfigDict(frozen=True)

    command: Command = Command.SIMULATE
    model: ModelSettings = ModelSettings()
    grid: GridSettings = GridSettings()
    time: TimeSettings = TimeSettings()
    sampling: SamplingSettings = SamplingSettings()
    sweep: SweepSettings = SweepSettings()
    translation: TranslationParams = TranslationParams()
    lambda_source: LambdaSource = LambdaSource.FLOOR
    output_dir: Path = Path("output")
    """Directory that receives CSV, JSON and run.log."""

    @model_validator(mode="after")
    def _check_cross_fields(self) -> Self:
        t_lo, t_hi = self.time.window
        if not 0.0 <= t_lo < t_hi <= self.time.t_end:
            raise ValueError(f"window {self.time.window} must satisfy 0 <= t_lo < t_hi <= t_end={self.time.t_end}")
        ranges = {
            "omega": (self.sweep.omega_min, self.sweep.omega_max),
            "r": (self.sweep.r_min, self.sweep.r_max),
            "zeta": (self.sweep.zeta_min, self.sweep.zeta_max),
        }
        for name, (lo, hi) in ranges.items():
            if not lo < hi:
                raise ValueError(f"{name} range must have min < max, got [{lo}, {hi}]")
        return self

    @property
    def seed(self) -> int:
        return self.sampling.seed

    def with_overrides(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """Return a copy with dotted-key overrides applied; ``None`` values are ignored.

        Args:
            overrides: Mapping such as ``{"model.epsilon": 0.01, "grid.n": 200}``

        Returns:
            Re-validated config

        Raises:
            ValueError: If a key does not name a config field or the result fails validation
        """
        data = self.model_dump()
        for dotted, value in overrides.items():
            if value is None:
                continue
            *parents, leaf = dotted.split(".")
            target = data
            for key in parents:
                if key not in target or not isinstance(target[key], dict):
                    raise ValueError(f"Unknown config section {key!r} in override {dotted!r}")
                target = target[key]
            if leaf not in target:
                raise ValueError(f"Unknown config field {dotted!r}")
            target[leaf] = value
        return type(self).model_validate(data)

    @classmethod
    def from_file(cls, config_file: Path | str) -> Self:
        """Load config from a JSON file.

        Args:
            config_file: Path to config JSON file

        Returns:
            Loaded and validated config instance
        """
        config_path = Path(config_file).resolve()
        if not config_path.exists():
            raise FileNotFoundError(f"Config file {str(config_path)!r} does not exist.")
        try:
            logger.info(f"Loading config from: {str(config_path)!r}")
            raw = json.loads(config_path.read_text())
            return cls.model_validate(raw)
        except Exception:
            logger.error(f"Failed to load config. Check your configuration {str(config_path)!r}.")
            raise

    def to_file(self, config_file: Path | str) -> None:
        """Save configuration to JSON file.

        Args:
            config_file: Destination path, absolute or relative

        Raises:
            OSError: If file cannot be written (e.g., permission issues, invalid path)
        """
        config_path = Path(config_file).resolve()
        config_path.parent.mkdir(parents=True, exist_ok=True)

        logger.info(f"Saving config to: {str(config_path)!r}")
        with open(config_path, "w") as f:
            json.dump(self.model_dump(mode="json"), f, indent=2)


class RuntimeSettings(BaseSettings):
    """Process-level settings read from ``RD_CONTRACT_*`` environment variables."""

    model_config = SettingsConfigDict(env_prefix="RD_CONTRACT_")

    threads: int | None = Field(default=None, ge=1)
    """Upper bound on sweep worker processes (``RD_CONTRACT_THREADS``)."""

    def effective_workers(self, requested: int) -> int:
        """min(requested, RD_CONTRACT_THREADS, cpu count), at least 1."""
        caps = [requested, os.cpu_count() or 1]
        if self.threads is not None:
            caps.append(self.threads)
        return max(1, min(caps))
