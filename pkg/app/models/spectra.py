from enum import Enum
import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from app.models.arrays import readonly_array, strictly_increasing
from app.models.constants import NATURAL, PhysicalConstants


class SpectralKind(str, Enum):
    RAYLEIGH_JEANS = "rayleigh_jeans"
    ZEROPOINT = "zeropoint"
    PLANCK = "planck"
    PLANCK_ZP = "planck_zp"
    ESTIMATED = "estimated"


class ThermodynamicState(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    temperature: float = Field(ge=0, description="Temperature T; 0 is the zeropoint state.")


class OscillatorState(BaseModel):
    """One oscillator of quantum epsilon in equilibrium at a temperature."""

    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(gt=0, description="Energy quantum.")
    temperature: float = Field(ge=0)
    mean_energy: float = Field(ge=0)
    entropy: float = Field(ge=0)


class SpectralCurve(BaseModel):
    """Spectral energy density sampled on an increasing frequency grid."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: SpectralKind
    temperature: float = Field(ge=0)
    omegas: np.ndarray
    values: np.ndarray
    constants: PhysicalConstants = Field(default=NATURAL)

    @field_validator("omegas", "values", mode="before")
    @classmethod
    def _as_array(cls, value):
        return readonly_array(value)

    @model_validator(mode="after")
    def check_grid(self):
        if len(self.omegas) != len(self.values):
            raise ValueError("omegas and values must have equal length")
        if np.any(self.omegas <= 0) or not strictly_increasing(self.omegas):
            raise ValueError("omegas must be positive and strictly increasing")
        if np.any(self.values < 0):
            raise ValueError("spectral values must be non-negative")
        return self

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "omega": self.omegas,
                "value": self.values,
                "kind": self.kind.value,
                "temperature": self.temperature,
            }
        )


class SpectrumTrajectory(BaseModel):
    """Spectral density at one frequency followed along a temperature path."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    omega: float = Field(gt=0)
    include_zeropoint: bool = Field(default=True)
    temperatures: np.ndarray
    values: np.ndarray
    closed_form: np.ndarray

    @field_validator("temperatures", "values", "closed_form", mode="before")
    @classmethod
    def _as_array(cls, value):
        return readonly_array(value)

    @property
    def relative_error(self) -> np.ndarray:
        return np.abs(self.values - self.closed_form) / np.abs(self.closed_form)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "T": self.temperatures,
                "rho_numeric": self.values,
                "rho_closed": self.closed_form,
                "rel_err": self.relative_error,
            }
        )
