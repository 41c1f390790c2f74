import math
from pydantic import BaseModel, Field
from app.errors import ExitCode


class CheckResult(BaseModel):
    name: str
    module: str
    passed: bool
    residual: float | None = Field(default=None, description="Measured deviation.")
    tolerance: float | None = Field(default=None)
    detail: str | None = Field(default=None)

    @classmethod
    def within(
        cls, name: str, module: str, residual: float, tolerance: float, detail=None
    ) -> "CheckResult":
        residual = float(residual)
        return cls(
            name=name,
            module=module,
            passed=bool(math.isfinite(residual) and residual <= tolerance),
            residual=residual,
            tolerance=tolerance,
            detail=detail,
        )


class RunReport(BaseModel):
    """Machine-readable summary of one CLI command."""

    command: str
    seed: int
    unit_system: str
    config: dict = Field(default_factory=dict, description="Echo of the RunConfig.")
    version: str
    checks: list[CheckResult] = Field(default_factory=list)
    outputs: list[str] = Field(default_factory=list)
    error: str | None = Field(default=None)
    wall_time_s: float = Field(default=0.0, ge=0)

    @property
    def passed(self) -> bool:
        return self.error is None and all(check.passed for check in self.checks)

    @property
    def exit_code(self) -> ExitCode:
        return ExitCode.OK if self.passed else ExitCode.CHECK_FAILED

    @property
    def max_residuals(self) -> dict[str, float]:
        return {
            check.name: check.residual
            for check in self.checks
            if check.residual is not None
        }
