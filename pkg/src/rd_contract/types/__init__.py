"""Type definitions for rd_contract."""

from .certificate import (
    CertificateInputs,
    CertificateMode,
    CertificateReport,
    ConditionDiagnostics,
    EigenReport,
    GammaMode,
    StateBox,
)
from .config import (
    Command,
    GridSettings,
    LambdaSource,
    ModelPreset,
    ModelSettings,
    RunConfig,
    RuntimeSettings,
    SamplingSettings,
    SweepSettings,
    TimeSettings,
)
from .diffusion import DiffusionSpec, HalfNodeFlux, PsiWeight, SpeciesDiffusion
from .grid import ScalarField, SpatialGrid, VolumeProfile
from .simulation import (
    ContractionDiagnostics,
    CriticalPoint,
    DecomposedState,
    ReactionSpec,
    Stability,
    SweepPoint,
    Trajectory,
)
from .translation import QssState, TranslationBounds, TranslationParams, TranslationProfiles

__all__ = [
    "CertificateInputs",
    "CertificateMode",
    "CertificateReport",
    "Command",
    "ConditionDiagnostics",
    "ContractionDiagnostics",
    "CriticalPoint",
    "DecomposedState",
    "DiffusionSpec",
    "EigenReport",
    "GammaMode",
    "GridSettings",
    "HalfNodeFlux",
    "LambdaSource",
    "ModelPreset",
    "ModelSettings",
    "PsiWeight",
    "QssState",
    "ReactionSpec",
    "RunConfig",
    "RuntimeSettings",
    "SamplingSettings",
    "ScalarField",
    "SpatialGrid",
    "SpeciesDiffusion",
    "Stability",
    "StateBox",
    "SweepPoint",
    "SweepSettings",
    "TimeSettings",
    "Trajectory",
    "TranslationBounds",
    "TranslationParams",
    "TranslationProfiles",
    "VolumeProfile",
]
