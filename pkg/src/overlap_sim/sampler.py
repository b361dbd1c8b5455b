"""Seeded Monte Carlo runs of the overlap protocol and the resulting estimates."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from statistics import NormalDist

import numpy as np

from .errors import NoAcceptedShots
from .protocol import ShotTable, shot_table
from .rng import shot_uniforms, draw_indices
from .states import PolarizationState

THREADS_ENV = "OVERLAP_SIM_THREADS"
CHUNK = 1 << 16
Z95 = NormalDist().inv_cdf(0.975)

# indices into BELL_ORDER
_PSI_PLUS, _PSI_MINUS = 0, 1


@dataclass(frozen=True)
class ShotCounts:
    n_total: int = 0
    n_inconclusive: int = 0
    n_rejected: int = 0
    n_plus: int = 0
    n_minus: int = 0

    def __post_init__(self):
        parts = self.n_inconclusive + self.n_rejected + self.n_plus + self.n_minus
        if min(self.n_inconclusive, self.n_rejected, self.n_plus, self.n_minus) < 0:
            raise ValueError("counts must be non-negative")
        if parts != self.n_total:
            raise ValueError(f"tallies sum to {parts}, not n_total={self.n_total}")

    @property
    def n_accepted(self) -> int:
        return self.n_plus + self.n_minus

    def __add__(self, other: ShotCounts) -> ShotCounts:
        return ShotCounts(*(a + b for a, b in zip(astuple_counts(self), astuple_counts(other))))

    def as_dict(self) -> dict:
        return asdict(self)


def astuple_counts(c: ShotCounts) -> tuple[int, int, int, int, int]:
    return (c.n_total, c.n_inconclusive, c.n_rejected, c.n_plus, c.n_minus)


@dataclass(frozen=True)
class EstimateReport:
    overlap_hat: float
    overlap_hat_clamped: float
    stderr: float
    ci95_low: float
    ci95_high: float
    p_accept_hat: float
    n_accepted: int

    def as_dict(self) -> dict:
        return asdict(self)


def _tally_chunk(table: ShotTable, seed: int, start: int, count: int) -> ShotCounts:
    u = shot_uniforms(seed, start, count)
    n = table.bell1.size

    cum1 = np.cumsum(table.bell1)[None, :]
    last1 = np.array([np.flatnonzero(table.bell1 > 0)[-1]])
    k1 = draw_indices(cum1, np.zeros(count, dtype=np.intp), u[:, 0], last1)

    cum2 = np.cumsum(table.bell2, axis=1)
    last2 = np.array([np.flatnonzero(r > 0)[-1] if np.any(r > 0) else n - 1 for r in table.bell2])
    k2 = draw_indices(cum2, k1, u[:, 1], last2)

    visible = (k1 <= _PSI_MINUS) & (k2 <= _PSI_MINUS)
    accepted = visible & (k1 == k2)
    n_inconclusive = int(np.count_nonzero(~visible))
    n_rejected = int(np.count_nonzero(visible & ~accepted))

    branch = k1[accepted] * n + k2[accepted]
    cum3 = np.cumsum(table.control.reshape(n * n, 2), axis=1)
    last3 = np.array([1 if r[1] > 0 else 0 for r in table.control.reshape(n * n, 2)])
    k3 = draw_indices(cum3, branch, u[accepted, 2], last3)
    n_minus = int(np.count_nonzero(k3))
    n_plus = int(k3.size) - n_minus
    return ShotCounts(count, n_inconclusive, n_rejected, n_plus, n_minus)


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return max(1, min(8, os.cpu_count() or 1))


def run_trials(
    phi: PolarizationState,
    psi: PolarizationState,
    n: int,
    seed: int,
    start: int = 0,
    apply_correction: bool = False,
    workers: int | None = None,
) -> ShotCounts:
    """Tally shots ``start .. start+n-1`` of the stream keyed by ``seed``.

    The result matches running :func:`overlap_sim.protocol.run_shot` once per
    shot with ``RandomStream.for_shot(seed, k)``, whatever the worker count.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    table = shot_table(phi, psi, apply_correction)
    chunks = [(s, min(CHUNK, start + n - s)) for s in range(start, start + n, CHUNK)]
    workers = workers or worker_count()
    if workers == 1 or len(chunks) == 1:
        parts = [_tally_chunk(table, seed, s, c) for s, c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda sc: _tally_chunk(table, seed, *sc), chunks))
    total = ShotCounts()
    for p in parts:
        total = total + p
    return total


def wilson_interval(successes: int, n: int, z: float = Z95) -> tuple[float, float]:
    p = successes / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    # the exact interval always contains p; keep that true under rounding
    return max(0.0, min(centre - half, p)), min(1.0, max(centre + half, p))


def estimate(counts: ShotCounts) -> EstimateReport:
    """Overlap estimate from accepted-shot control statistics.

    The 95% interval is the Wilson interval for P+ mapped through o = 2p - 1.
    """
    n_acc = counts.n_accepted
    if n_acc == 0:
        raise NoAcceptedShots(f"none of {counts.n_total} shots passed postselection")
    p_plus = counts.n_plus / n_acc
    overlap = (counts.n_plus - counts.n_minus) / n_acc
    lo, hi = wilson_interval(counts.n_plus, n_acc)
    return EstimateReport(
        overlap_hat=overlap,
        overlap_hat_clamped=min(max(overlap, 0.0), 1.0),
        stderr=2 * math.sqrt(p_plus * (1 - p_plus) / n_acc),
        ci95_low=min(2 * lo - 1, overlap),
        ci95_high=max(2 * hi - 1, overlap),
        p_accept_hat=n_acc / counts.n_total,
        n_accepted=n_acc,
    )
