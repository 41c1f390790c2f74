from typing import Literal
import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from app.models.arrays import readonly_array, strictly_increasing


class UnruhConfig(BaseModel):
    """Defaults of the accelerated-detector simulation (natural units, a = 1)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    acceleration: float = Field(default=1.0, gt=0)
    t_obs: float = Field(default=12.0, gt=0, description="Proper observation time.")
    delta_x: float = Field(default=0.02, gt=0, le=0.5, description="Log-frequency spacing.")
    omega_out_min: float = Field(default=0.5, gt=0)
    omega_out_max: float = Field(default=3.0, gt=0)
    n_out: int = Field(default=26, ge=2)
    ir_factor: float = Field(
        default=0.05, gt=0, lt=1, description="Lowest mode as a fraction of omega_out_min."
    )
    uv_margin: float = Field(
        default=4.0,
        ge=1,
        description="Lowest instantaneous frequency of the top mode at tau = t_obs, in units of omega_out_max.",
    )
    fade_factor: float | None = Field(
        default=16.0,
        gt=1,
        description="Resolved ceiling in units of omega_out_max; None disables the fade.",
    )
    max_phase_step: float = Field(default=0.25, gt=0, le=0.3)
    dtau: float | None = Field(default=None, gt=0)
    n_realizations: int = Field(default=100, ge=2)
    window: Literal["hann"] = Field(default="hann")

    @model_validator(mode="after")
    def check_band(self):
        if self.omega_out_max <= self.omega_out_min:
            raise ValueError("omega_out_max must exceed omega_out_min")
        return self

    @property
    def omegas_out(self) -> np.ndarray:
        return np.linspace(self.omega_out_min, self.omega_out_max, self.n_out)

    @property
    def resolved_ceiling(self) -> float | None:
        if self.fade_factor is None:
            return None
        return self.fade_factor * self.omega_out_max

    def mode_band(self, c: float = 1.0) -> tuple[float, float]:
        """Lowest and highest mode frequency: every mode that chirps through the
        output band during the window, with margins on both sides."""
        omega_min = self.ir_factor * self.omega_out_min
        omega_max = (
            self.uv_margin * self.omega_out_max * np.exp(self.acceleration * self.t_obs / c)
        )
        return omega_min, float(omega_max)


class ModeSet(BaseModel):
    """Discrete log-uniform zeropoint modes with one draw of random phases."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    omegas: np.ndarray
    weights: np.ndarray = Field(description="Amplitude constants C_n.")
    amplitudes: np.ndarray = Field(description="alpha_n = exp(i theta_n)/sqrt(2).")
    delta_x: float = Field(gt=0)
    seed: int = Field(ge=0)
    realization: int = Field(default=0, ge=0)

    @field_validator("omegas", "weights", mode="before")
    @classmethod
    def _as_real(cls, value):
        return readonly_array(value)

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return readonly_array(value, dtype=complex)

    @model_validator(mode="after")
    def check_modes(self):
        n = len(self.omegas)
        if len(self.weights) != n or len(self.amplitudes) != n:
            raise ValueError("omegas, weights and amplitudes must have equal length")
        if n and (np.any(self.omegas <= 0) or not strictly_increasing(self.omegas)):
            raise ValueError("mode frequencies must be positive and increasing")
        return self

    def __len__(self) -> int:
        return len(self.omegas)


class ObservationWindow(BaseModel):
    """Sampled window on [0, t_obs] plus its calibration constants."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["hann"] = "hann"
    t_obs: float = Field(gt=0)
    dtau: float = Field(gt=0)
    tau: np.ndarray
    weights: np.ndarray
    noise_gain: float = Field(
        gt=0, description="sum w^2 dtau / 2pi: periodogram of a flat unit spectrum."
    )
    sinusoid_gain: float = Field(
        gt=0, description="(sum w dtau / 2pi)^2 / 2: peak per unit C^2 of one mode."
    )

    @field_validator("tau", "weights", mode="before")
    @classmethod
    def _as_array(cls, value):
        return readonly_array(value)


class SpectrumEstimate(BaseModel):
    """Periodogram of the detector field with its reference curves."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    omegas: np.ndarray
    expected: np.ndarray
    mc_mean: np.ndarray | None = None
    mc_stderr: np.ndarray | None = None
    theory_convolved: np.ndarray | None = None
    theory_raw: np.ndarray | None = None
    zeropoint_convolved: np.ndarray | None = None
    n_realizations: int = Field(default=0, ge=0)
    seed: int = Field(default=0, ge=0)
    window: ObservationWindow | None = Field(
        default=None, description="Observation window the periodogram was taken over."
    )

    @field_validator(
        "omegas",
        "expected",
        "mc_mean",
        "mc_stderr",
        "theory_convolved",
        "theory_raw",
        "zeropoint_convolved",
        mode="before",
    )
    @classmethod
    def _as_array(cls, value):
        if value is None:
            return None
        return readonly_array(value)

    @model_validator(mode="after")
    def check_lengths(self):
        n = len(self.omegas)
        for name in (
            "expected",
            "mc_mean",
            "mc_stderr",
            "theory_convolved",
            "theory_raw",
            "zeropoint_convolved",
        ):
            column = getattr(self, name)
            if column is not None and len(column) != n:
                raise ValueError(f"{name} has {len(column)} entries, expected {n}")
        if self.mc_stderr is not None and np.any(self.mc_stderr < 0):
            raise ValueError("mc_stderr must be non-negative")
        return self

    def to_frame(self) -> pd.DataFrame:
        nan = np.full(len(self.omegas), np.nan)

        def column(values):
            return nan if values is None else values

        return pd.DataFrame(
            {
                "omega_out": self.omegas,
                "expected": self.expected,
                "mc_mean": column(self.mc_mean),
                "mc_stderr": column(self.mc_stderr),
                "theory_convolved": column(self.theory_convolved),
                "theory_raw": column(self.theory_raw),
            }
        )


class TemperatureFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    temperature: float = Field(gt=0)
    stderr: float = Field(ge=0)
    rms_residual: float = Field(ge=0, description="RMS relative residual of the fit.")
    n_bins: int = Field(ge=1)
    target: float | None = Field(default=None, description="Unruh temperature of the frame.")

    @property
    def relative_error(self) -> float | None:
        if self.target is None:
            return None
        return abs(self.temperature - self.target) / self.target
