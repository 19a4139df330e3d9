"""Block entanglement entropy of the XX chain carrying an energy current."""

__version__ = "0.1.0"

from .spectrum import (ModelParams, Phase, PhaseLabel, FermiSeaDecomposition,
                       characteristic_wavenumbers, classify_phase, current_density,
                       dispersion, fermi_seas, magnetization)
from .correlations import (CorrelatorSequence, build_correlation_matrix, correlator_finite,
                           correlator_infinite, correlator_sequence, shift_wavenumbers)
from .entropy import (EntropyValue, OccupationSpectrum, block_entropy, entropy_pipeline,
                      entropy_series, mode_occupations)
from .asymptotics import (KEATING, EntropySeries, LogFit, ScalingCurve, analytic_S0,
                          collapse_spread, fit_log_growth, scaling_collapse, scaling_length)

__all__ = [
    "ModelParams", "Phase", "PhaseLabel", "FermiSeaDecomposition",
    "characteristic_wavenumbers", "classify_phase", "current_density", "dispersion",
    "fermi_seas", "magnetization",
    "CorrelatorSequence", "build_correlation_matrix", "correlator_finite",
    "correlator_infinite", "correlator_sequence", "shift_wavenumbers",
    "EntropyValue", "OccupationSpectrum", "block_entropy", "entropy_pipeline",
    "entropy_series", "mode_occupations",
    "KEATING", "EntropySeries", "LogFit", "ScalingCurve", "analytic_S0",
    "collapse_spread", "fit_log_growth", "scaling_collapse", "scaling_length",
]
