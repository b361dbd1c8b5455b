"""End-to-end overlap measurement through coherently addressed teleportation.

Inputs phi (mode 1) and psi (mode 2) are joined with the |C-SWAP-> resource.
Pairs (1,3') and (2,4') are Bell-measured. Only the records (Psi+,Psi+) and
(Psi-,Psi-) are kept. Measuring the control photon in the +/- basis then gives
P+ - P- = |<phi|psi>|^2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bellmeas import (
    CHI_MODES,
    INCONCLUSIVE,
    PAIR_1,
    PAIR_2,
    Inconclusive,
    MeasurementModel,
    bell_distribution,
    bell_measure_sample,
    bell_project,
)
from .errors import ModeMismatch
from .rng import RandomStream, draw_index
from .states import BELL_ORDER, BellKind, PolarizationState, build_full_state, pm_state
from .statevec import SWAP, Z, StateVector, apply, project, reorder, tensor_all

#: Probability of each accepted Bell record.
BRANCH_PROBABILITY = 1 / 16
#: Overall postselection success probability.
SUCCESS_PROBABILITY = 1 / 8
#: Upper bound for a C-SWAP composed from five probabilistic two-qubit gates, each at most 1/4.
NAIVE_CSWAP_BOUND = 4.0**-5


class ChiBranch(enum.Enum):
    PLUS_PLUS = (BellKind.PSI_PLUS, BellKind.PSI_PLUS)
    MINUS_MINUS = (BellKind.PSI_MINUS, BellKind.PSI_MINUS)
    PLUS_MINUS = (BellKind.PSI_PLUS, BellKind.PSI_MINUS)
    MINUS_PLUS = (BellKind.PSI_MINUS, BellKind.PSI_PLUS)

    @property
    def accepted(self) -> bool:
        return self in (ChiBranch.PLUS_PLUS, ChiBranch.MINUS_MINUS)

    @classmethod
    def from_kinds(cls, k1, k2) -> ChiBranch | None:
        try:
            return cls((k1, k2))
        except ValueError:
            return None


ACCEPTED_BRANCHES = (ChiBranch.PLUS_PLUS, ChiBranch.MINUS_MINUS)


@dataclass(frozen=True)
class ProtocolDistribution:
    p_accept: float
    p_plus_given_accept: float
    p_minus_given_accept: float
    overlap_true: float


@dataclass(frozen=True)
class ProtocolOutcome:
    bell1: BellKind | Inconclusive
    bell2: BellKind | Inconclusive
    accepted: bool
    control: str | None  # "+", "-" or None when rejected


def z_correction(chi: StateVector) -> StateVector:
    """Z on modes 3 and 4; turns the (Psi-,Psi-) state into the (Psi+,Psi+) one."""
    if chi.modes != CHI_MODES:
        raise ModeMismatch(f"expected modes {CHI_MODES}, got {chi.modes}")
    return apply(Z, ["4"], apply(Z, ["3"], chi))


def measure_control(chi: StateVector) -> tuple[float, float]:
    """Born probabilities of the control photon in |+> and |->."""
    if "C" not in chi.modes:
        raise ModeMismatch(f"control mode C missing from {chi.modes}")
    p_plus, _ = project(chi, ["C"], pm_state("+", "C"))
    p_minus, _ = project(chi, ["C"], pm_state("-", "C"))
    return p_plus, p_minus


def branch_state(
    phi: PolarizationState,
    psi: PolarizationState,
    branch: ChiBranch,
    apply_correction: bool = False,
) -> tuple[float, StateVector]:
    """Joint probability of ``branch`` and the collapsed state on (3, 4, C)."""
    k1, k2 = branch.value
    p1, r1 = bell_project(build_full_state(phi, psi), PAIR_1, k1)
    p2, r2 = bell_project(r1, PAIR_2, k2)
    chi = reorder(r2, CHI_MODES)
    if apply_correction and branch is ChiBranch.MINUS_MINUS:
        chi = z_correction(chi)
    return p1 * p2, chi


def ideal_cswap_output(phi: PolarizationState, psi: PolarizationState) -> StateVector:
    """Controlled-SWAP applied to |phi>_3 |psi>_4 |+>_C, on modes (3, 4, C)."""
    start = tensor_all(pm_state("+", "C"), phi.on("3"), psi.on("4"))
    return reorder(apply(SWAP.controlled(), ["C", "3", "4"], start), CHI_MODES)


def run_exact(
    phi: PolarizationState,
    psi: PolarizationState,
    apply_correction: bool = False,
) -> ProtocolDistribution:
    """Exact postselection probability and conditional control statistics."""
    p_accept = 0.0
    plus = minus = 0.0
    for branch in ACCEPTED_BRANCHES:
        w, chi = branch_state(phi, psi, branch, apply_correction)
        pp, pm = measure_control(chi)
        p_accept += w
        plus += w * pp
        minus += w * pm
    return ProtocolDistribution(
        p_accept=p_accept,
        p_plus_given_accept=plus / p_accept,
        p_minus_given_accept=minus / p_accept,
        overlap_true=phi.overlap(psi),
    )


def overlap_from_distribution(d: ProtocolDistribution) -> float:
    return d.p_plus_given_accept - d.p_minus_given_accept


def _visible(kind: BellKind) -> BellKind | Inconclusive:
    return kind if kind.linear_optics_visible else INCONCLUSIVE


def run_shot(
    phi: PolarizationState,
    psi: PolarizationState,
    rng: RandomStream,
    apply_correction: bool = False,
) -> ProtocolOutcome:
    """One run of the optical circuit with linear-optics Bell analyzers.

    Draw order: uniform 0 picks the (1,3') outcome, uniform 1 the (2,4')
    outcome, and uniform 2 (accepted shots only) the control result. An
    unlabeled Phi+- event still collapses the state.
    """
    full = build_full_state(phi, psi)
    m1 = bell_measure_sample(full, PAIR_1, MeasurementModel.IDEAL, rng)
    m2 = bell_measure_sample(m1.residual, PAIR_2, MeasurementModel.IDEAL, rng)
    branch = ChiBranch.from_kinds(m1.outcome, m2.outcome)
    b1, b2 = _visible(m1.outcome), _visible(m2.outcome)
    if branch is None or not branch.accepted:
        return ProtocolOutcome(b1, b2, False, None)
    chi = reorder(m2.residual, CHI_MODES)
    if apply_correction and branch is ChiBranch.MINUS_MINUS:
        chi = z_correction(chi)
    k = draw_index(measure_control(chi), rng.uniform())
    return ProtocolOutcome(b1, b2, True, "+-"[k])


@dataclass(frozen=True)
class ShotTable:
    """Exact per-draw probabilities that drive :func:`run_shot`.

    ``bell1[i]``: first outcome ``BELL_ORDER[i]``; ``bell2[i, j]``: second
    outcome ``j`` given first ``i``; ``control[i, j]``: (P+, P-) for accepted
    ``(i, j)``, zeros otherwise.
    """

    bell1: np.ndarray
    bell2: np.ndarray
    control: np.ndarray


def shot_table(
    phi: PolarizationState,
    psi: PolarizationState,
    apply_correction: bool = False,
) -> ShotTable:
    # mirrors run_shot call-for-call so that sampled draws agree bit for bit
    full = build_full_state(phi, psi)
    n = len(BELL_ORDER)
    bell1 = np.zeros(n)
    bell2 = np.zeros((n, n))
    control = np.zeros((n, n, 2))
    for i, (p1, r1) in enumerate(bell_distribution(full, PAIR_1)):
        bell1[i] = p1
        if r1 is None:
            continue
        for j, (p2, r2) in enumerate(bell_distribution(r1, PAIR_2)):
            bell2[i, j] = p2
            branch = ChiBranch.from_kinds(BELL_ORDER[i], BELL_ORDER[j])
            if r2 is None or branch is None or not branch.accepted:
                continue
            chi = reorder(r2, CHI_MODES)
            if apply_correction and branch is ChiBranch.MINUS_MINUS:
                chi = z_correction(chi)
            control[i, j] = measure_control(chi)
    return ShotTable(bell1, bell2, control)
