from typing import Literal
from pydantic import BaseModel, ConfigDict, Field


class EnergyDistribution(BaseModel):
    """Maximum-entropy energy distribution at fixed mean energy."""

    model_config = ConfigDict(frozen=True)

    mean_energy: float = Field(gt=0)
    kind: Literal["exponential"] = Field(default="exponential")


class VarianceDecomposition(BaseModel):
    """Energy variance split into independent thermal and zeropoint shares."""

    model_config = ConfigDict(frozen=True)

    omega: float = Field(gt=0)
    temperature: float = Field(ge=0)
    total: float = Field(ge=0, description="<E>^2 of the full mean energy incl. zeropoint.")
    zeropoint: float = Field(ge=0, description="(hbar omega / 2)^2.")
    thermal: float = Field(ge=0, description="total - zeropoint.")
