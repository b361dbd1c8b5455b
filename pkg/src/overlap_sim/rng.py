"""Counter-based random streams.

All randomness comes from Philox4x64-10 (``numpy.random.Philox``) keyed by a
64-bit seed. Each counter value yields one block of four 64-bit words, and a
word ``w`` becomes the double ``(w >> 11) * 2**-53`` in [0, 1).

Protocol shot ``k`` owns counter block ``k`` and nothing else. Any range of
shots can therefore be regenerated on its own, in any order, on any number of
workers, with the same result.
"""

from __future__ import annotations

import numpy as np

WORDS_PER_BLOCK = 4
_SCALE = 2.0**-53
SEED_MASK = (1 << 64) - 1


def words_to_uniform(words: np.ndarray) -> np.ndarray:
    return (np.asarray(words, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * _SCALE


def shot_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms for shots ``start .. start+count-1`` as a ``(count, 4)`` array."""
    if count <= 0:
        return np.empty((0, WORDS_PER_BLOCK))
    gen = np.random.Philox(key=int(seed) & SEED_MASK, counter=int(start))
    return words_to_uniform(gen.random_raw(WORDS_PER_BLOCK * count)).reshape(count, WORDS_PER_BLOCK)


class RandomStream:
    """Sequential uniform draws from a Philox stream.

    ``RandomStream(seed)`` is an unbounded stream starting at counter 0.
    :meth:`for_shot` gives the single-block stream owned by one protocol shot.
    It raises once its four words are used up, so one shot can never read
    into the next shot's block.
    """

    def __init__(self, seed: int, counter: int = 0, limit: int | None = None):
        self.seed = int(seed) & SEED_MASK
        self._gen = np.random.Philox(key=self.seed, counter=int(counter))
        self._limit = limit
        self._used = 0

    @classmethod
    def for_shot(cls, seed: int, shot: int) -> RandomStream:
        return cls(seed, counter=shot, limit=WORDS_PER_BLOCK)

    @property
    def draws_used(self) -> int:
        return self._used

    def uniform(self) -> float:
        if self._limit is not None and self._used >= self._limit:
            raise RuntimeError("per-shot stream exhausted (4 draws per shot)")
        self._used += 1
        return float(words_to_uniform(self._gen.random_raw(1))[0])


def draw_index(probs, u: float) -> int:
    """Pick an outcome by inverse CDF: the first ``k`` with ``u < cumsum(probs)[k]``.

    If rounding leaves ``u`` above the last cumulative value, the last outcome
    with positive probability is chosen.
    """
    probs = np.asarray(probs, dtype=np.float64)
    cum = np.cumsum(probs)
    k = int(np.searchsorted(cum, u, side="right"))
    if k >= probs.size:
        k = int(np.flatnonzero(probs > 0)[-1])
    return k


def draw_indices(cum_table: np.ndarray, rows: np.ndarray, u: np.ndarray, last_positive: np.ndarray) -> np.ndarray:
    """Vectorized :func:`draw_index` against per-row cumulative tables."""
    cums = cum_table[rows]
    k = np.sum(u[:, None] >= cums, axis=1)
    over = k >= cums.shape[1]
    k[over] = last_positive[rows[over]]
    return k
