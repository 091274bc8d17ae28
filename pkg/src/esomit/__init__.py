"""Non-Hermitian whispering-gallery optomechanics: eigenvalue structure,
exceptional-surface membership, OMIT transmission spectra and group delays.
"""

from .params import SystemParams, Drive, DerivedRates, build_system, \
    derived_rates, drive_amplitudes
from .eigenspace import EigenSplit, PhaseClass, alpha_beta, eigen_split, \
    es_coupling, classify_point, distance_to_es
from .steady_state import SteadyState, intracavity_steady, solve_steady
from .response import ResponseSolution, SpectrumTable, fluctuation_system, \
    solve_response, transmission, transmission_spectrum, group_delay
from .closedform import closed_form_response, crosscheck_closed_form
from .presets import Preset, WindowMetrics, preset, preset_names, \
    line_gamma2, sweep_1d, sweep_phase, window_metrics, run_preset
from .feasibility import NanoparticleSpec, FiberCouplingSpec, \
    coupling_from_nanoparticle, fiber_coupling_rate, check_ranges

__version__ = "0.1.0"
