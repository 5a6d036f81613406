from __future__ import annotations

import math
import tomllib
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

TASKS = ("check", "evolve", "modes", "quantize", "lorentz", "dirac", "propagator")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
Task = Literal["check", "evolve", "modes", "quantize", "lorentz", "dirac", "propagator"]


class ConfigError(ValueError):
    pass


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class BoxConfig(_Section):
    lengths: tuple[float, float, float] = (2 * math.pi,) * 3
    points: tuple[int, int, int] = (16, 16, 16)

    @field_validator("lengths")
    @classmethod
    def validate_lengths(cls, value: tuple[float, float, float]):
        if any(not v > 0 for v in value):
            raise ValueError("Box lengths must be positive")
        return value

    @field_validator("points")
    @classmethod
    def validate_points(cls, value: tuple[int, int, int]):
        if any(n < 4 or n % 2 for n in value):
            raise ValueError("Grid points must be even and at least 4 per axis")
        return value


class PacketConfig(_Section):
    """A single plane-wave mode when ``sigma_k`` is 0, otherwise a Gaussian packet."""

    n: tuple[int, int, int] = (1, 0, 0)
    helicity: int = 1
    sigma_k: float = 0.0
    amplitude: float = 1.0

    @field_validator("helicity")
    @classmethod
    def validate_helicity(cls, value: int):
        if value not in (-1, 1):
            raise ValueError("Packet helicity must be +1 or -1")
        return value

    @field_validator("sigma_k", "amplitude")
    @classmethod
    def validate_non_negative(cls, value: float):
        if value < 0:
            raise ValueError("Packet width and amplitude must be non-negative")
        return value


class EvolveConfig(_Section):
    periods: float = 1.0
    samples: int = 4
    curl_steps: tuple[int, ...] = (64, 128, 256)

    @field_validator("samples")
    @classmethod
    def validate_samples(cls, value: int):
        if value < 1:
            raise ValueError("At least one sample is required")
        return value

    @field_validator("curl_steps")
    @classmethod
    def validate_curl_steps(cls, value: tuple[int, ...]):
        if len(value) < 2 or any(b <= a for a, b in zip(value, value[1:])) or value[0] < 1:
            raise ValueError("Curl step counts must be at least two increasing positive integers")
        return value


class ModesConfig(_Section):
    cutoff: int = 1


class QuantizeConfig(_Section):
    labels: list[tuple[tuple[int, int, int], int]] = Field(
        default_factory=lambda: [((1, 0, 0), 1), ((0, 1, 0), -1)]
    )
    n_max: int = 3
    commutator_points: int = 8

    @field_validator("commutator_points")
    @classmethod
    def validate_commutator_points(cls, value: int):
        if not 4 <= value <= 16 or value % 2:
            raise ValueError("Commutator grid points must be even and between 4 and 16")
        return value


class LorentzConfig(_Section):
    parameters: tuple[float, ...] = (1e-2, 1e-3, 1e-4)
    axis: int = 0

    @field_validator("axis")
    @classmethod
    def validate_axis(cls, value: int):
        if value not in (0, 1, 2):
            raise ValueError("Axis must be 0, 1 or 2")
        return value


class DiracConfig(_Section):
    mass: float = 1.0
    momentum: tuple[float, float, float] = (0.3, -0.2, 0.5)
    rapidity: float = 1e-3

    @field_validator("mass")
    @classmethod
    def validate_mass(cls, value: float):
        if value < 0:
            raise ValueError("Mass must be non-negative")
        return value


class PropagatorConfig(_Section):
    dims: tuple[int, int, int, int] = (8, 8, 8, 8)
    extents: Optional[tuple[float, float, float, float]] = None
    epsilon: float = 1e-3
    sweep: tuple[float, ...] = (1e-3, 2e-3, 4e-3)

    @field_validator("dims")
    @classmethod
    def validate_dims(cls, value: tuple[int, int, int, int]):
        if any(n < 2 or n % 2 for n in value):
            raise ValueError("Lattice dimensions must be positive even integers")
        return value

    @field_validator("extents")
    @classmethod
    def validate_extents(cls, value):
        if value is not None and any(not v > 0 for v in value):
            raise ValueError("Lattice extents must be positive")
        return value

    @field_validator("epsilon")
    @classmethod
    def validate_epsilon(cls, value: float):
        if not value > 0:
            raise ValueError("The regulator must be positive")
        return value

    @field_validator("sweep")
    @classmethod
    def validate_sweep(cls, value: tuple[float, ...]):
        if len(value) < 2 or any(not v > 0 for v in value):
            raise ValueError("The regulator sweep needs at least two positive values")
        return value


class Tolerances(_Section):
    """Upper bounds on residuals; every entry is scaled by ``--tol-scale``."""

    exact: float = 1e-13
    dispersion: float = 1e-12
    polarization: float = 1e-12
    orthonormality: float = 1e-12
    mode_residual: float = 1e-12
    completeness: float = 1e-12
    unitarity: float = 1e-12
    reversibility: float = 1e-12
    curl_agreement: float = 1e-3
    conservation: float = 1e-8
    energy_drift: float = 1e-12
    spin_orbit: float = 1e-10
    lagrangian: float = 1e-12
    hamiltonian: float = 1e-10
    euler_lagrange: float = 1e-6
    spectrum: float = 1e-12
    commutator: float = 1e-10
    heisenberg: float = 1e-12
    lorentz: float = 1e-12
    dirac: float = 1e-12
    dirac_ratio: float = 1e-10
    dirac_number: float = 1e-10
    green: float = 1e-10
    epsilon_linearity: float = 0.1

    @field_validator("*")
    @classmethod
    def validate_positive(cls, value: float):
        if not value > 0:
            raise ValueError("Tolerances must be positive")
        return value

    def scaled(self, factor: float) -> "Tolerances":
        return Tolerances(**{name: value * factor for name, value in self.model_dump().items()})


class Orders(_Section):
    """Targets that are not residuals and are left alone by ``--tol-scale``."""

    curl_order: float = 2.0
    curl_order_width: float = 0.1
    delta_L_order: float = 1.9
    boost_ratio: float = 4.0
    density_ratio: float = 2.0
    boost_ratio_width: float = 0.2


class RunConfig(_Section):
    task: Task = "check"
    seed: int = 0
    out: Path = Path("photonwave-out")
    tol_scale: float = 1.0
    normalization: Literal["canonical", "number"] = "canonical"
    unit_longitudinal: bool = False
    log_level: str = "INFO"
    box: BoxConfig = Field(default_factory=BoxConfig)
    packet: PacketConfig = Field(default_factory=PacketConfig)
    evolve: EvolveConfig = Field(default_factory=EvolveConfig)
    modes: ModesConfig = Field(default_factory=ModesConfig)
    quantize: QuantizeConfig = Field(default_factory=QuantizeConfig)
    lorentz: LorentzConfig = Field(default_factory=LorentzConfig)
    dirac: DiracConfig = Field(default_factory=DiracConfig)
    propagator: PropagatorConfig = Field(default_factory=PropagatorConfig)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    orders: Orders = Field(default_factory=Orders)

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, value: int):
        if not 0 <= value < 2**64:
            raise ValueError("Seed must be an unsigned 64-bit integer")
        return value

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, value: str):
        value = value.upper()
        if value not in LOG_LEVELS:
            raise ValueError(f"Log level must be one of {LOG_LEVELS}")
        return value

    @field_validator("tol_scale")
    @classmethod
    def validate_tol_scale(cls, value: float):
        if not value > 0:
            raise ValueError("Tolerance scale must be positive")
        return value

    @property
    def effective_tolerances(self) -> Tolerances:
        return self.tolerances.scaled(self.tol_scale)


def load_run_config(path: Path | None, **overrides) -> RunConfig:
    """Read a TOML run file and apply command-line overrides (``None`` values are skipped)."""

    data: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as handle:
                data = tomllib.load(handle)
        except OSError as exc:
            raise ConfigError(f"Cannot read config {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"Malformed config {path}: {exc}") from exc
    data.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
