"""Experiment configuration: dataclasses, YAML loading, hashing, manifests."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import yaml

from .hamiltonian import DENSE_LIMIT
from .msa import MSAParams, ScaleSchedule, scale_sequence
from .spectral import ALPHA, BETA, CnrPolicy

ARTIFACT_VERSION = "0.1.0"

# alpha and beta are fixed model exponents; configs must not try to set them.
_FORBIDDEN_KEYS = ("alpha", "beta")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    d: int = 1
    N: int = 1
    n: int = 1
    h: float = 1.0
    u0: float = 1.0
    r0: float = 1.0
    g: float = 5.0
    distribution: str = "uniform"
    R: int = 1

    def __post_init__(self):
        if not 1 <= self.n <= self.N:
            raise ConfigError(f"model.n must satisfy 1 <= n <= N, got n={self.n}, N={self.N}")
        if self.d < 1 or self.h <= 0:
            raise ConfigError("model.d must be >= 1 and model.h positive")


@dataclass(frozen=True)
class ScalesConfig:
    L0: int = 8
    k_max: int = 1

    def __post_init__(self):
        if self.L0 < 3:
            raise ConfigError(f"scales.L0 must be >= 3, got {self.L0}")
        if self.k_max < 0:
            raise ConfigError("scales.k_max must be >= 0")


@dataclass(frozen=True)
class MSAConfig:
    m: float = 0.8
    p: float = 1.5
    q: float = 4.0
    E0: float = 0.0
    eta: float = 0.25
    n_energies: int = 64
    cnr_policy: str = "strided"
    cnr_stride: int | None = None

    def params(self) -> MSAParams:
        return MSAParams(
            m=self.m, p=self.p, q=self.q, E0=self.E0, eta=self.eta,
            n_energies=self.n_energies,
        )

    def policy(self) -> CnrPolicy:
        return CnrPolicy(kind=self.cnr_policy, stride=self.cnr_stride)


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    scales: ScalesConfig = field(default_factory=ScalesConfig)
    msa: MSAConfig = field(default_factory=MSAConfig)
    trials: int = 50
    seed: int = 0
    dense_cap: int = DENSE_LIMIT
    n_eigenfunctions: int = 5

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.dense_cap > DENSE_LIMIT:
            raise ConfigError(
                f"dense_cap {self.dense_cap} exceeds the hard cap {DENSE_LIMIT}"
            )
        # all configured scales must respect the dense cap at mesh h=1
        for k, L in enumerate(self.schedule_scales()):
            dim = (2 * L - 1) ** (self.model.n * self.model.d)
            if dim > self.dense_cap:
                raise ConfigError(
                    f"scale L_{k}={L} gives matrix dimension {dim} over dense_cap "
                    f"{self.dense_cap}; lower scales.k_max or scales.L0"
                )

    def schedule(self) -> ScaleSchedule:
        return ScaleSchedule(self.scales.L0)

    def schedule_scales(self) -> tuple[int, ...]:
        return scale_sequence(self.scales.L0, self.scales.k_max)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _reject_forbidden(tree, path=""):
    if isinstance(tree, dict):
        for key, val in tree.items():
            here = f"{path}.{key}" if path else str(key)
            if key in _FORBIDDEN_KEYS:
                raise ConfigError(
                    f"field {here!r} is not configurable (alpha=3/2 and beta=1/2 are fixed)"
                )
            _reject_forbidden(val, here)


def _build(cls, tree: dict, path: str):
    if not isinstance(tree, dict):
        raise ConfigError(f"section {path!r} must be a mapping")
    names = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, val in tree.items():
        if key not in names:
            raise ConfigError(f"unknown field {path}.{key}")
        kwargs[key] = val
    return cls(**kwargs)


def config_from_dict(tree: dict) -> ExperimentConfig:
    _reject_forbidden(tree)
    tree = dict(tree)
    parts = {}
    for name, cls in (("model", ModelConfig), ("scales", ScalesConfig), ("msa", MSAConfig)):
        if name in tree:
            parts[name] = _build(cls, tree.pop(name), name)
    top = {f.name for f in dataclasses.fields(ExperimentConfig)}
    for key in tree:
        if key not in top:
            raise ConfigError(f"unknown field {key}")
    return ExperimentConfig(**parts, **tree)


def load_config(path: str | Path) -> ExperimentConfig:
    raw = Path(path).read_text()
    try:
        tree = yaml.safe_load(raw) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(tree, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return config_from_dict(tree)


def config_hash(config: ExperimentConfig) -> str:
    blob = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class RunManifest:
    config_hash: str
    calibration_hash: str | None
    version: str
    timestamp: str
    seed_start: int
    seed_end: int
    outputs: list[str]
    alpha: float = ALPHA  # read-only, fixed
    beta: float = BETA  # read-only, fixed

    @classmethod
    def create(cls, config: ExperimentConfig, calibration: dict | None, outputs) -> "RunManifest":
        return cls(
            config_hash=config_hash(config),
            calibration_hash=calibration.get("hash") if calibration else None,
            version=ARTIFACT_VERSION,
            timestamp=datetime.now(timezone.utc).isoformat(),
            seed_start=config.seed,
            seed_end=config.seed + config.trials - 1,
            outputs=sorted(outputs),
        )

    def write(self, run_dir: Path) -> Path:
        path = Path(run_dir) / "manifest.json"
        path.write_text(json.dumps(dataclasses.asdict(self), sort_keys=True, indent=1))
        return path
