import json
from typing import Literal
from pydantic import BaseModel, ConfigDict, Field


class PhysicalConstants(BaseModel):
    """Constants every formula is written against. Natural units unless stated."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    hbar: float = Field(default=1.0, gt=0, description="Reduced Planck constant.")
    c: float = Field(default=1.0, gt=0, description="Speed of light.")
    k_b: float = Field(default=1.0, gt=0, description="Boltzmann constant.")
    unit_system: Literal["natural", "si"] = Field(default="natural")

    @classmethod
    def natural(cls) -> "PhysicalConstants":
        return cls()

    @classmethod
    def si(cls) -> "PhysicalConstants":
        from scipy import constants as codata

        return cls(hbar=codata.hbar, c=codata.c, k_b=codata.k, unit_system="si")

    @classmethod
    def from_file(cls, path: str) -> "PhysicalConstants":
        """SI constants overridden by a JSON object of hbar, c and k_b.

        Entries missing from the file keep their CODATA values.
        """
        with open(path, "r") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ValueError(f"{path} must hold a JSON object")
        return cls.model_validate({**cls.si().model_dump(), **data, "unit_system": "si"})


NATURAL = PhysicalConstants()
