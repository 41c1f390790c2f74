from app.models.constants import NATURAL, PhysicalConstants
from app.models.fluctuations import EnergyDistribution, VarianceDecomposition
from app.models.gamma import ComplexParameter, ContourLegs
from app.models.relativity import (
    AcceleratedFrame,
    Boost,
    SpectrumModel,
    TrajectoryPoint,
    WaveVector4,
)
from app.models.reports import CheckResult, RunReport
from app.models.spectra import (
    OscillatorState,
    SpectralCurve,
    SpectralKind,
    SpectrumTrajectory,
    ThermodynamicState,
)
from app.models.zpf import (
    ModeSet,
    ObservationWindow,
    SpectrumEstimate,
    TemperatureFit,
    UnruhConfig,
)
