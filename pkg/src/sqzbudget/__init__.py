"""Loss budgets and quantum-noise spectra for squeezed-light setups.

The squeezed field of an optical parametric amplifier is propagated through
an ordered chain of lossy optics and detuned cavities to a homodyne
detector, in the two-photon (sideband-pair) quadrature picture.  Everything
is normalized to shot noise; squeezing in dB is positive below shot noise.
"""

from .cavity import (
    CavityParams,
    TransferPair,
    derive_rates,
    finesse,
    quadrature_transfer,
    reflection,
    rotation_angle,
)
from .chain import (
    BudgetReport,
    CavityStage,
    FrequencyGrid,
    LossElement,
    Scenario,
    build_budget,
    efficiency_sweep,
    homodyne_readout,
    propagate,
    total_efficiency,
)
from .interferometer import NoiseSpectrum, SrcParams, signal_gain, snr_spectrum, src_squeezing_reflection
from .quadcore import (
    SpectralCovariance,
    UnphysicalError,
    apply_loss,
    apply_loss_cov,
    db_to_variance,
    variance_to_db,
)
from .scenario_io import ScenarioParseError, format_scenario, load_scenario, parse_scenario, save_scenario
from .source import (
    SourceParams,
    escape_efficiency,
    generated_spectrum,
    pump_parameter,
    vacuum_source,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetReport",
    "CavityParams",
    "CavityStage",
    "FrequencyGrid",
    "LossElement",
    "NoiseSpectrum",
    "Scenario",
    "ScenarioParseError",
    "SourceParams",
    "SpectralCovariance",
    "SrcParams",
    "TransferPair",
    "UnphysicalError",
    "apply_loss",
    "apply_loss_cov",
    "build_budget",
    "db_to_variance",
    "derive_rates",
    "efficiency_sweep",
    "escape_efficiency",
    "finesse",
    "format_scenario",
    "generated_spectrum",
    "homodyne_readout",
    "load_scenario",
    "parse_scenario",
    "propagate",
    "pump_parameter",
    "quadrature_transfer",
    "reflection",
    "rotation_angle",
    "save_scenario",
    "signal_gain",
    "snr_spectrum",
    "src_squeezing_reflection",
    "total_efficiency",
    "vacuum_source",
    "variance_to_db",
]
