"""Two-level ion in a deformed harmonic trap.

Simulation of the coupled ion + trap dynamics on a truncated Fock basis,
with the entropy and mutual-entropy observables and collapse/revival event
detection, plus a CSV/PNG-emitting command line (see qtrap.cli).
"""

from .analysis import (
    Event,
    EventReport,
    classify_events,
    envelope,
    find_onsets,
    find_peaks,
)
from .model import (
    INITIAL_KINDS,
    JointState,
    SystemParams,
    build_hamiltonian,
    fq_matrix,
    initial_state,
)
from .observables import (
    DivergenceError,
    EntropyRecord,
    IonState2x2,
    coherence_part,
    entropy_entrywise,
    entropy_vn,
    entropy_vn_motion,
    inversion,
    mutual_entropy,
    population_part,
    reduce_ion,
    reduce_motion,
    relative_entropy_entrywise,
)
from .propagator import (
    NumericalError,
    SpectralDecomposition,
    diagonalize,
    evolve,
    rescaled_to_physical,
    time_series,
)
from .qalgebra import (
    DeformationParams,
    coherent_amplitudes,
    q_exponential,
    q_factorial,
    q_number,
)
from .runner import (
    COLUMNS,
    ConfigError,
    RunConfig,
    RunResult,
    format_value,
    render_csv,
    run_simulation,
    simulate,
    time_grid,
)

__version__ = "0.1.0"

__all__ = [
    "COLUMNS",
    "ConfigError",
    "DeformationParams",
    "DivergenceError",
    "EntropyRecord",
    "Event",
    "EventReport",
    "INITIAL_KINDS",
    "IonState2x2",
    "JointState",
    "NumericalError",
    "RunConfig",
    "RunResult",
    "SpectralDecomposition",
    "SystemParams",
    "build_hamiltonian",
    "classify_events",
    "coherence_part",
    "coherent_amplitudes",
    "diagonalize",
    "entropy_entrywise",
    "entropy_vn",
    "entropy_vn_motion",
    "envelope",
    "evolve",
    "find_onsets",
    "find_peaks",
    "format_value",
    "fq_matrix",
    "initial_state",
    "inversion",
    "mutual_entropy",
    "population_part",
    "q_exponential",
    "q_factorial",
    "q_number",
    "reduce_ion",
    "reduce_motion",
    "relative_entropy_entrywise",
    "render_csv",
    "rescaled_to_physical",
    "run_simulation",
    "simulate",
    "time_grid",
    "time_series",
]
