from typing import Literal, get_args
from pydantic import BaseModel, ConfigDict, Field, model_validator
from app.models.constants import PhysicalConstants
from app.models.zpf import UnruhConfig

Command = Literal[
    "spectra",
    "ode",
    "invariance",
    "wien",
    "kinematics",
    "fluctuations",
    "unruh-expected",
    "unruh-mc",
    "gamma-check",
    "all-checks",
]
COMMANDS: tuple[str, ...] = get_args(Command)


class Tolerances(BaseModel):
    """Pass thresholds of the verification checks."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    planck_limit: float = Field(default=1e-6, gt=0)
    planck_deficit: float = Field(default=1e-3, gt=0)
    ode: float = Field(default=1e-6, gt=0)
    rayleigh_jeans: float = Field(default=1e-12, gt=0)
    variance: float = Field(default=1e-6, gt=0)
    lorentz: float = Field(default=1e-12, gt=0)
    lorentz_discrimination: float = Field(default=0.1, gt=0)
    wien_adiabatic: float = Field(default=1e-8, gt=0)
    wien_scaling: float = Field(default=1e-12, gt=0)
    kinematics: float = Field(default=1e-10, gt=0)
    gamma_identity: float = Field(default=1e-9, gt=0)
    regularized_integral: float = Field(default=1e-6, gt=0)
    contour: float = Field(default=1e-8, gt=0)
    unruh_bin: float = Field(default=0.03, gt=0)
    unruh_temperature: float = Field(default=0.15, gt=0)
    fit_sanity: float = Field(default=1e-6, gt=0)
    mc_sigma: float = Field(default=4.0, gt=0)
    mc_coverage: float = Field(default=0.95, gt=0, le=1)


class SpectraParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["rayleigh_jeans", "zeropoint", "planck", "planck_zp"] = "planck_zp"
    temperature: float = Field(default=1.0, ge=0)
    omega_min: float = Field(default=0.01, gt=0)
    omega_max: float = Field(default=10.0, gt=0)
    n_omega: int = Field(default=200, ge=2)


class OdeParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    omega: float = Field(default=1.0, gt=0)
    t_start: float = Field(default=0.1, gt=0)
    t_end: float = Field(default=2.0, gt=0)
    steps: int = Field(default=2000, ge=1)
    include_zeropoint: bool = True


class RunConfig(BaseModel):
    """One CLI invocation: command, units, seed, output and per-command parameters."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command
    unit_system: Literal["natural", "si"] = Field(default="natural")
    constants_file: str | None = Field(default=None)
    seed: int = Field(default=0, ge=0, lt=1 << 64)
    output_path: str | None = Field(
        default=None, description="Output file; derived from the command when unset."
    )
    format: Literal["csv", "json"] = Field(default="csv")
    n_jobs: int = Field(default=1, description="joblib workers; output does not depend on it.")
    spectra: SpectraParams = Field(default_factory=SpectraParams)
    ode: OdeParams = Field(default_factory=OdeParams)
    unruh: UnruhConfig = Field(default_factory=UnruhConfig)
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @model_validator(mode="after")
    def check_units(self):
        if self.unit_system == "si" and not self.constants_file:
            raise ValueError("--unit-system si requires --constants FILE")
        if self.constants_file and self.unit_system != "si":
            raise ValueError("--constants FILE requires --unit-system si")
        return self

    def physical_constants(self) -> PhysicalConstants:
        if self.unit_system == "si":
            return PhysicalConstants.from_file(self.constants_file)
        return PhysicalConstants.natural()
