"""Bell-basis projections on pairs of modes, exact and sampled."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import states
from .errors import ModeMismatch
from .rng import RandomStream, draw_index
from .states import BELL_ORDER, BellKind
from .statevec import CANONICAL_MODES, StateVector, _labels, project, reorder, tensor_all

#: Analyzer pairs: input 1 meets resource photon 3', input 2 meets 4'.
PAIR_1 = ("1", "3'")
PAIR_2 = ("2", "4'")
CHI_MODES = ("3", "4", "C")


class MeasurementModel(enum.Enum):
    IDEAL = "Ideal"
    LINEAR_OPTICS = "LinearOptics"


class Inconclusive(enum.Enum):
    """Marker for a Phi+- event that a linear-optics analyzer cannot label."""

    INCONCLUSIVE = "Inconclusive"

    def __repr__(self):
        return "INCONCLUSIVE"


INCONCLUSIVE = Inconclusive.INCONCLUSIVE


@dataclass(frozen=True)
class BellMeasurementResult:
    outcome: BellKind | Inconclusive
    prob: float
    residual: StateVector | None


@dataclass(frozen=True)
class BellPairTerm:
    """One term of the two-pair Bell expansion of a seven-mode state."""

    kind1: BellKind
    kind2: BellKind
    weight: float
    chi: StateVector | None


def bell_project(s: StateVector, pair, kind: BellKind) -> tuple[float, StateVector | None]:
    """Probability and residual for finding ``pair`` in Bell state ``kind``."""
    mu, nu = _labels(pair)
    return project(s, (mu, nu), states.bell(kind, mu, nu))


def bell_distribution(s: StateVector, pair) -> list[tuple[float, StateVector | None]]:
    """``bell_project`` for every kind, in :data:`BELL_ORDER`."""
    return [bell_project(s, pair, k) for k in BELL_ORDER]


def expand_bell_pairs(s: StateVector) -> list[BellPairTerm]:
    """All sixteen components of ``s`` over Bell states of (1,3') and (2,4').

    Each term's weight is the joint probability. Its ``chi`` is the normalized
    three-photon state left on modes (3, 4, C), or ``None`` when the weight
    is zero.
    """
    if s.modes != CANONICAL_MODES:
        raise ModeMismatch(f"expected canonical layout {CANONICAL_MODES}, got {s.modes}")
    terms = []
    for k1 in BELL_ORDER:
        p1, r1 = bell_project(s, PAIR_1, k1)
        for k2 in BELL_ORDER:
            if r1 is None:
                terms.append(BellPairTerm(k1, k2, 0.0, None))
                continue
            p2, r2 = bell_project(r1, PAIR_2, k2)
            chi = None if r2 is None else reorder(r2, CHI_MODES)
            terms.append(BellPairTerm(k1, k2, p1 * p2, chi))
    return terms


def reconstruct(terms: list[BellPairTerm]) -> StateVector:
    """Inverse of :func:`expand_bell_pairs`: sum of sqrt(w) |bell1>|bell2>|chi>."""
    total = np.zeros(2 ** len(CANONICAL_MODES), dtype=np.complex128)
    for t in terms:
        if t.chi is None:
            continue
        piece = tensor_all(
            states.bell(t.kind1, *PAIR_1), states.bell(t.kind2, *PAIR_2), t.chi
        )
        total += np.sqrt(t.weight) * reorder(piece, CANONICAL_MODES).amps
    return StateVector(CANONICAL_MODES, total)


def bell_measure_sample(
    s: StateVector,
    pair,
    model: MeasurementModel,
    rng: RandomStream,
) -> BellMeasurementResult:
    """Draw one Bell outcome on ``pair`` with its Born probability.

    Uses exactly one uniform from ``rng``. Under the linear-optics model a
    drawn Phi+- is reported as inconclusive, with no residual state.
    """
    dist = bell_distribution(s, pair)
    k = draw_index([p for p, _ in dist], rng.uniform())
    kind = BELL_ORDER[k]
    prob, residual = dist[k]
    if MeasurementModel(model) is MeasurementModel.LINEAR_OPTICS and not kind.linear_optics_visible:
        return BellMeasurementResult(INCONCLUSIVE, prob, None)
    return BellMeasurementResult(kind, prob, residual)
