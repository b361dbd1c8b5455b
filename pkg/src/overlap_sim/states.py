"""Named states of the overlap protocol.

Input photons sit in modes 1 and 2. The five-photon resource occupies modes
3, 3', 4, 4' and the control mode C. Teleportation channels are |Psi+> pairs.
The control photon selects the wiring: (3,3')(4,4') for H and (4,3')(3,4')
for V.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from .errors import DuplicateMode, NotNormalizable, ZeroState
from .statevec import (
    CANONICAL_MODES,
    NORM_TOL,
    StateVector,
    _label,
    basis_state,
    reorder,
    tensor,
    tensor_all,
)

RENORMALIZE_LIMIT = 1e-6

RESOURCE_MODES: tuple[str, ...] = ("3", "3'", "4", "4'", "C")


class BellKind(enum.Enum):
    PSI_PLUS = "PsiPlus"
    PSI_MINUS = "PsiMinus"
    PHI_PLUS = "PhiPlus"
    PHI_MINUS = "PhiMinus"

    @property
    def linear_optics_visible(self) -> bool:
        """Whether a linear-optics analyzer can identify this state."""
        return self in (BellKind.PSI_PLUS, BellKind.PSI_MINUS)


#: Fixed outcome order used by every sampler draw.
BELL_ORDER: tuple[BellKind, ...] = (
    BellKind.PSI_PLUS,
    BellKind.PSI_MINUS,
    BellKind.PHI_PLUS,
    BellKind.PHI_MINUS,
)


def _check_amplitudes(a: complex, b: complex) -> tuple[complex, complex]:
    a, b = complex(a), complex(b)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise NotNormalizable("amplitudes must be finite")
    n = float(np.hypot(abs(a), abs(b)))
    if n == 0.0:
        raise ZeroState("both amplitudes are zero")
    dev = abs(n - 1.0)
    if dev > RENORMALIZE_LIMIT:
        raise NotNormalizable(
            f"amplitude norm {n:.9g} deviates from 1 by {dev:.3g} (> {RENORMALIZE_LIMIT:g})"
        )
    if dev > NORM_TOL:
        a, b = a / n, b / n
    return a, b


@dataclass(frozen=True)
class PolarizationState:
    """Single-photon polarization ``alpha_h |H> + alpha_v |V>``."""

    alpha_h: complex
    alpha_v: complex

    def __post_init__(self):
        a, b = _check_amplitudes(self.alpha_h, self.alpha_v)
        object.__setattr__(self, "alpha_h", a)
        object.__setattr__(self, "alpha_v", b)

    @classmethod
    def from_angles(cls, theta: float, lam: float = 0.0) -> PolarizationState:
        """cos(theta/2)|H> + e^{i lam} sin(theta/2)|V>."""
        return cls(np.cos(theta / 2), np.exp(1j * lam) * np.sin(theta / 2))

    @classmethod
    def random(cls, rng: np.random.Generator) -> PolarizationState:
        """Haar-random pure state."""
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        return cls(v[0], v[1])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha_h, self.alpha_v], dtype=np.complex128)

    def on(self, mode) -> StateVector:
        return StateVector((_label(mode),), self.vector)

    def with_phase(self, angle: float) -> PolarizationState:
        w = np.exp(1j * angle)
        return PolarizationState(w * self.alpha_h, w * self.alpha_v)

    def overlap(self, other: PolarizationState) -> float:
        """|<self|other>|^2."""
        return float(abs(np.vdot(self.vector, other.vector)) ** 2)


H = PolarizationState(1.0, 0.0)
V = PolarizationState(0.0, 1.0)
PLUS = PolarizationState(1 / np.sqrt(2), 1 / np.sqrt(2))
MINUS = PolarizationState(1 / np.sqrt(2), -1 / np.sqrt(2))


def polarization(a: complex, b: complex, mode) -> StateVector:
    """Normalized ``a|H> + b|V>`` on one mode."""
    return PolarizationState(a, b).on(mode)


def bell(kind: BellKind, mu, nu) -> StateVector:
    """Bell state on modes ``(mu, nu)``, e.g. Psi+- = (|HV> +- |VH>)/sqrt(2)."""
    return _bell(BellKind(kind), _label(mu), _label(nu))


@functools.lru_cache(maxsize=256)
def _bell(kind: BellKind, mu: str, nu: str) -> StateVector:
    if mu == nu:
        raise DuplicateMode(f"Bell pair needs two distinct modes, got {mu!r} twice")
    s = 1 / np.sqrt(2)
    amps = {
        BellKind.PSI_PLUS: [0, s, s, 0],
        BellKind.PSI_MINUS: [0, s, -s, 0],
        BellKind.PHI_PLUS: [s, 0, 0, s],
        BellKind.PHI_MINUS: [s, 0, 0, -s],
    }[kind]
    return StateVector((mu, nu), amps)


def pm_state(sign: int | str, mode) -> StateVector:
    """(|H> +- |V>)/sqrt(2); ``sign`` is ``+1``/``-1`` or ``"+"``/``"-"``."""
    if sign in (1, "+"):
        return PLUS.on(mode)
    if sign in (-1, "-"):
        return MINUS.on(mode)
    raise ValueError(f"sign must be + or -, got {sign!r}")


def build_resource() -> StateVector:
    """Five-photon |C-SWAP-> resource over modes (3, 3', 4, 4', C)."""
    straight = tensor_all(
        bell(BellKind.PSI_PLUS, "3", "3'"),
        bell(BellKind.PSI_PLUS, "4", "4'"),
        basis_state("H", ["C"]),
    )
    crossed = tensor_all(
        bell(BellKind.PSI_PLUS, "4", "3'"),
        bell(BellKind.PSI_PLUS, "3", "4'"),
        basis_state("V", ["C"]),
    )
    amps = (reorder(straight, RESOURCE_MODES).amps + reorder(crossed, RESOURCE_MODES).amps) / np.sqrt(2)
    return StateVector(RESOURCE_MODES, amps)


def build_full_state(phi: PolarizationState, psi: PolarizationState) -> StateVector:
    """|phi>_1 |psi>_2 |C-SWAP->, 128 amplitudes in canonical mode order."""
    full = tensor(tensor(phi.on("1"), psi.on("2")), build_resource())
    assert full.modes == CANONICAL_MODES
    return full
