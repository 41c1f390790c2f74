from pydantic import BaseModel, ConfigDict, Field, model_validator


class ContourLegs(BaseModel):
    """Integrals along the five legs of the quarter-circle contour.

    I1 runs along the real axis, I2 down the imaginary axis (as an integral
    over t of t^(p-1) e^(-it) scaled by i^p), I3 and I4 close the square of
    side a and I5 is the small arc of radius epsilon around the origin.
    """

    model_config = ConfigDict(frozen=True)

    p: complex
    a: float = Field(gt=0)
    epsilon: float = Field(gt=0)
    I1: complex
    I2: complex
    I3: complex
    I4: complex
    I5: complex
    bound_I3: float = Field(ge=0)
    bound_I4: float = Field(ge=0)
    bound_I5: float = Field(ge=0)

    @property
    def cauchy_residual(self) -> float:
        """|I1 - I2 + I3 - I4 + I5|; zero for an exact closed contour."""
        return abs(self.I1 - self.I2 + self.I3 - self.I4 + self.I5)

    @property
    def bounds_hold(self) -> bool:
        return (
            abs(self.I3) <= self.bound_I3
            and abs(self.I4) <= self.bound_I4
            and abs(self.I5) <= self.bound_I5
        )


class ComplexParameter(BaseModel):
    """Exponent p of t^(p-1) in the oscillatory integrals; 0 <= re(p) < 1, p != 0."""

    model_config = ConfigDict(frozen=True)

    p: complex

    @model_validator(mode="after")
    def check_strip(self):
        if self.p == 0:
            raise ValueError("p must be non-zero")
        if not 0.0 <= self.p.real < 1.0:
            raise ValueError(f"re(p) must lie in [0, 1), got {self.p.real}")
        return self

    @property
    def x(self) -> float:
        return self.p.real

    @property
    def y(self) -> float:
        return self.p.imag
