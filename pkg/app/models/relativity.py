import math
from typing import Callable
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from app.models.constants import NATURAL, PhysicalConstants


class Boost(BaseModel):
    """Pure boost along +x with velocity beta*c."""

    model_config = ConfigDict(frozen=True)

    beta: float = Field(gt=-1.0, lt=1.0)

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt((1.0 - self.beta) * (1.0 + self.beta))


class WaveVector4(BaseModel):
    model_config = ConfigDict(frozen=True)

    omega: float = Field(gt=0)
    kx: float = 0.0
    ky: float = 0.0
    kz: float = 0.0

    @classmethod
    def light_like(
        cls, omega: float, direction, constants: PhysicalConstants = NATURAL
    ) -> "WaveVector4":
        """Null wave vector of frequency omega travelling along `direction`."""
        n = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(n)
        if norm == 0:
            raise ValueError("direction must be non-zero")
        k = (omega / constants.c) * n / norm
        return cls(omega=omega, kx=k[0], ky=k[1], kz=k[2])

    @property
    def k_norm(self) -> float:
        return math.sqrt(self.kx**2 + self.ky**2 + self.kz**2)

    def is_light_like(self, constants: PhysicalConstants = NATURAL, rtol=1e-12) -> bool:
        return abs(self.omega - constants.c * self.k_norm) <= rtol * self.omega


class SpectrumModel(BaseModel):
    """A spectral shape f(omega) with a label for reports."""

    model_config = ConfigDict(frozen=True)

    label: str
    f: Callable[[float], float]

    def __call__(self, omega: float) -> float:
        return self.f(omega)


class AcceleratedFrame(BaseModel):
    """Detector with constant proper acceleration a along +x."""

    model_config = ConfigDict(frozen=True)

    a: float = Field(gt=0, description="Proper acceleration.")
    constants: PhysicalConstants = Field(default=NATURAL)

    @property
    def chirp_rate(self) -> float:
        """a/c: e-folding rate of the Doppler chirp in proper time."""
        return self.a / self.constants.c

    def unruh_temperature(self) -> float:
        k = self.constants
        return k.hbar * self.a / (2.0 * math.pi * k.c * k.k_b)


class TrajectoryPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau: float
    t: float
    x: float
    velocity: float
    gamma: float = Field(ge=1.0)

    @model_validator(mode="after")
    def check_subluminal(self):
        if not math.isfinite(self.gamma):
            raise ValueError("gamma overflowed")
        return self
