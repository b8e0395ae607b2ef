"""Qubits in coupled lossy cavities: exact single-excitation dynamics,
coherence, non-Markovianity, concurrence, entanglement death and trapping."""

__version__ = "0.1.0"

from ._ode import KERNEL
from .amplitudes import (
    AmplitudeTrajectory,
    AmplitudeVector,
    PropagatorSample,
    evolve_ode,
    propagator,
)
from .coherence import (
    CoherenceTrace,
    asymptotic_coherence,
    coherence,
    coherence_trace,
    evolve_qubit,
)
from .core import (
    PureQubitInit,
    QubitState,
    SiteParams,
    TimeGrid,
    TwoQubitState,
    classify_regime,
    psd_check,
    validate_params,
)
from .laplace import LaplacePoles, laplace_poles
from .nonmarkov import (
    BlpResult,
    StatePair,
    antipodal_pairs,
    blp_measure,
    equatorial_pair_shortcut,
    trace_distance,
)
from .twoqubit import (
    NEVER_DIES,
    BellLikeInit,
    ConcurrenceTrace,
    TwoSiteParams,
    compose_two_qubit,
    concurrence_trace,
    concurrence_wootters,
    concurrence_x,
    esd_analysis,
    esd_time,
    trapped_concurrence,
)
