"""Dense state vectors over labeled polarization modes.

Every photon mode carries one polarization qubit, H -> 0 and V -> 1. A state on
modes ``(m0, m1, ..., m_{n-1})`` stores ``2**n`` complex amplitudes, where
``m0`` owns the most significant bit of the basis index. So with
``modes=("1", "2")`` the amplitude of ``|H>_1 |V>_2`` lives at index ``0b01``.

States and operators are immutable. Every operation returns a new object.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import (
    ArityMismatch,
    DuplicateMode,
    ModeMismatch,
    NonUnitary,
    UnknownMode,
    ZeroProbabilityCollapse,
)

#: Global ordering of the optical modes; all multi-mode states are packed in this order.
CANONICAL_MODES: tuple[str, ...] = ("1", "2", "3", "3'", "4", "4'", "C")

NORM_TOL = 1e-12
ZERO_PROB = 1e-15

ModeLabel = str


def _label(mode) -> ModeLabel:
    return str(mode)


def _labels(modes: Iterable) -> tuple[ModeLabel, ...]:
    return tuple(_label(m) for m in modes)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over an ordered tuple of mode labels."""

    modes: tuple[ModeLabel, ...]
    amps: np.ndarray

    def __post_init__(self):
        modes = _labels(self.modes)
        if len(set(modes)) != len(modes):
            raise DuplicateMode(f"mode labels must be unique, got {modes}")
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != 2 ** len(modes):
            raise ValueError(
                f"{len(modes)} modes need {2 ** len(modes)} amplitudes, got {amps.size}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "amps", _frozen(amps))

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> StateVector:
        n = self.norm()
        if n < ZERO_PROB:
            raise ZeroProbabilityCollapse("cannot normalize a zero vector")
        return StateVector(self.modes, self.amps / n)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis of length 2 per mode."""
        return self.amps.reshape((2,) * self.n_modes)

    def amplitude(self, bits: Sequence[int] | str) -> complex:
        """Amplitude of one basis configuration.

        ``bits`` is given in mode order, either as 0/1 integers or as an
        ``"HV.."`` string.
        """
        if isinstance(bits, str):
            bits = [{"H": 0, "V": 1}[c] for c in bits]
        if len(bits) != self.n_modes:
            raise ModeMismatch(f"expected {self.n_modes} bits, got {len(bits)}")
        return complex(self.tensor()[tuple(bits)])

    def index_of(self, mode) -> int:
        try:
            return self.modes.index(_label(mode))
        except ValueError:
            raise UnknownMode(f"mode {mode!r} not in {self.modes}") from None

    def __repr__(self):
        return f"StateVector(modes={self.modes}, amps={np.array2string(self.amps, precision=4)})"


def basis_state(bits: str, modes: Sequence) -> StateVector:
    """Product state such as ``basis_state("HV", ["1", "2"])``."""
    modes = _labels(modes)
    if len(bits) != len(modes):
        raise ModeMismatch("one polarization letter per mode is required")
    amps = np.zeros(2 ** len(modes), dtype=np.complex128)
    idx = int("".join({"H": "0", "V": "1"}[c] for c in bits) or "0", 2)
    amps[idx] = 1.0
    return StateVector(modes, amps)


def empty_state(amp: complex = 1.0) -> StateVector:
    """The zero-mode state: a single (phase) amplitude."""
    return StateVector((), np.array([amp]))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    shared = set(a.modes) & set(b.modes)
    if shared:
        raise DuplicateMode(f"modes {sorted(shared)} appear in both factors")
    return StateVector(a.modes + b.modes, np.kron(a.amps, b.amps))


def tensor_all(*states: StateVector) -> StateVector:
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.modes != b.modes:
        raise ModeMismatch(f"mode lists differ: {a.modes} vs {b.modes}")
    return complex(np.vdot(a.amps, b.amps))


def reorder(s: StateVector, modes: Sequence) -> StateVector:
    """Same state with its modes permuted into ``modes`` order."""
    modes = _labels(modes)
    if sorted(modes) != sorted(s.modes):
        raise ModeMismatch(f"cannot reorder {s.modes} into {modes}")
    perm = [s.index_of(m) for m in modes]
    return StateVector(modes, np.transpose(s.tensor(), perm).reshape(-1))


@dataclass(frozen=True, eq=False)
class Operator:
    """A ``2**arity`` square matrix acting on ``arity`` modes."""

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        n = m.shape[0].bit_length() - 1
        if 2**n != m.shape[0]:
            raise ValueError(f"operator dimension {m.shape[0]} is not a power of two")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def arity(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def dagger(self) -> Operator:
        return Operator(self.matrix.conj().T, f"{self.name}^dag")

    def is_unitary(self, tol: float = NORM_TOL) -> bool:
        m = self.matrix
        return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), rtol=0, atol=tol))

    def controlled(self) -> Operator:
        """Controlled version; the control is the new first (most significant) mode."""
        d = self.matrix.shape[0]
        m = np.eye(2 * d, dtype=np.complex128)
        m[d:, d:] = self.matrix
        return Operator(m, f"C-{self.name}")


def assert_unitary(op: Operator, tol: float = NORM_TOL) -> None:
    if not op.is_unitary(tol):
        raise NonUnitary(f"operator {op.name or '<unnamed>'} is not unitary within {tol}")


_S2 = 1 / np.sqrt(2)

I2 = Operator(np.eye(2), "I")
X = Operator([[0, 1], [1, 0]], "X")
Z = Operator([[1, 0], [0, -1]], "Z")
H_GATE = Operator([[_S2, _S2], [_S2, -_S2]], "H")
SWAP = Operator([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], "SWAP")


def phase_gate(angle: float) -> Operator:
    """diag(1, e^{i angle})."""
    return Operator(np.diag([1.0, np.exp(1j * angle)]), f"P({angle:g})")


def kron_ops(*ops: Operator) -> Operator:
    m = np.eye(1)
    for op in ops:
        m = np.kron(m, op.matrix)
    return Operator(m, "x".join(op.name for op in ops))


def _axes(s: StateVector, targets: Sequence) -> list[int]:
    axes = [s.index_of(t) for t in targets]
    if len(set(axes)) != len(axes):
        raise DuplicateMode(f"repeated target modes {list(targets)}")
    return axes


def apply(op: Operator, targets: Sequence, s: StateVector) -> StateVector:
    """Apply ``op`` to the listed modes of ``s`` (identity on the rest).

    ``targets[0]`` is the most significant bit of the operator's own index.
    """
    targets = _labels(targets)
    if len(targets) != op.arity:
        raise ArityMismatch(f"{op.name or 'operator'} acts on {op.arity} modes, got {len(targets)}")
    axes = _axes(s, targets)
    k = op.arity
    gate = op.matrix.reshape((2,) * (2 * k))
    # contract the gate's input legs with the target axes, then move the output legs back
    out = np.tensordot(gate, s.tensor(), axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return StateVector(s.modes, out.reshape(-1))


def amplitudes_onto(s: StateVector, targets: Sequence, onto: StateVector) -> StateVector:
    """Unnormalized ``(<onto| x I) |s>`` on the untouched modes, in their original order."""
    targets = _labels(targets)
    if onto.modes != targets:
        if sorted(onto.modes) != sorted(targets):
            raise ModeMismatch(f"projector modes {onto.modes} do not match targets {targets}")
        onto = reorder(onto, targets)
    axes = _axes(s, targets)
    rest = tuple(m for m in s.modes if m not in targets)
    out = np.tensordot(onto.tensor().conj(), s.tensor(), axes=(list(range(len(targets))), axes))
    return StateVector(rest, np.asarray(out).reshape(-1))


def project(
    s: StateVector,
    targets: Sequence,
    onto: StateVector,
    require_residual: bool = False,
) -> tuple[float, StateVector | None]:
    """Projective measurement of ``targets`` against the state ``onto``.

    Returns the Born probability and the renormalized post-measurement state of
    the remaining modes. Below the ``1e-15`` cutoff the residual is ``None``,
    or :class:`ZeroProbabilityCollapse` is raised if ``require_residual``.
    """
    raw = amplitudes_onto(s, targets, onto)
    prob = float(np.vdot(raw.amps, raw.amps).real)
    if prob < ZERO_PROB:
        if require_residual:
            raise ZeroProbabilityCollapse(f"outcome probability {prob:.3g} is below the cutoff")
        return prob, None
    return prob, StateVector(raw.modes, raw.amps / np.sqrt(prob))
