"""Linear-optics overlap measurement of photon polarization states.

A state-vector simulation of coherently addressed teleportation through the
five-photon |C-SWAP-> resource. Two Bell measurements restricted to linear
optics are postselected, and |<phi|psi>|^2 is read off the control photon.
"""

from .bellmeas import (
    INCONCLUSIVE,
    BellMeasurementResult,
    BellPairTerm,
    MeasurementModel,
    bell_measure_sample,
    bell_project,
    expand_bell_pairs,
)
from .hadamard_test import Ensemble, estimate_trace, hadamard_test_probs, swap_test_probs
from .protocol import (
    BRANCH_PROBABILITY,
    NAIVE_CSWAP_BOUND,
    SUCCESS_PROBABILITY,
    ChiBranch,
    ProtocolDistribution,
    ProtocolOutcome,
    measure_control,
    overlap_from_distribution,
    run_exact,
    run_shot,
    z_correction,
)
from .rng import RandomStream
from .sampler import EstimateReport, ShotCounts, estimate, run_trials
from .states import (
    BellKind,
    PolarizationState,
    bell,
    build_full_state,
    build_resource,
    pm_state,
    polarization,
)
from .statevec import Operator, StateVector, apply, inner, project, tensor

__version__ = "0.1.0"
