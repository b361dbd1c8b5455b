import math

import numpy as np
import pytest

from overlap_sim.bellmeas import INCONCLUSIVE
from overlap_sim.errors import NoAcceptedShots
from overlap_sim.protocol import run_exact, run_shot
from overlap_sim.rng import RandomStream, draw_index, shot_uniforms
from overlap_sim.sampler import CHUNK, ShotCounts, estimate, run_trials
from overlap_sim.states import PLUS, H, PolarizationState

import oracles


def tally_by_loop(phi, psi, n, seed, start=0, correct=False):
    c = dict(n_total=n, n_inconclusive=0, n_rejected=0, n_plus=0, n_minus=0)
    for k in range(start, start + n):
        out = run_shot(phi, psi, RandomStream.for_shot(seed, k), apply_correction=correct)
        if INCONCLUSIVE in (out.bell1, out.bell2):
            c["n_inconclusive"] += 1
        elif not out.accepted:
            c["n_rejected"] += 1
        elif out.control == "+":
            c["n_plus"] += 1
        else:
            c["n_minus"] += 1
    return ShotCounts(**c)


def test_shot_uniforms_match_per_shot_streams():
    u = shot_uniforms(123, 10, 5)
    for i in range(5):
        s = RandomStream.for_shot(123, 10 + i)
        assert [s.uniform() for _ in range(4)] == u[i].tolist()
        with pytest.raises(RuntimeError):
            s.uniform()


def test_draw_index_strict_less_than():
    assert draw_index([0.5, 0.5], 0.0) == 0
    assert draw_index([0.5, 0.5], 0.5) == 1
    assert draw_index([0.25, 0.0, 0.75], 0.25) == 2
    assert draw_index([0.5, 0.5 - 1e-17, 0.0], 1 - 1e-18) == 1


@pytest.mark.parametrize(
    "phi, psi, correct",
    [
        (H, PLUS, False),
        (PolarizationState(0.6, 0.8j), PolarizationState(0.28, -0.96), True),
        (H, H, False),
    ],
)
def test_vectorized_trials_equal_shot_loop(phi, psi, correct):
    assert run_trials(phi, psi, 1500, seed=31, start=77, apply_correction=correct) == tally_by_loop(
        phi, psi, 1500, seed=31, start=77, correct=correct
    )


def test_single_shot_increments_one_tally():
    c = run_trials(H, PLUS, 1, seed=5)
    assert c.n_total == 1
    assert sorted([c.n_inconclusive, c.n_rejected, c.n_plus, c.n_minus]) == [0, 0, 0, 1]


def test_determinism_and_worker_independence():
    n = 3 * CHUNK + 17
    a = run_trials(H, PLUS, n, seed=8, workers=1)
    assert a == run_trials(H, PLUS, n, seed=8, workers=1)
    assert a == run_trials(H, PLUS, n, seed=8, workers=4)


def test_merge_property():
    n, k = 200_003, 70_001
    whole = run_trials(H, PLUS, n, seed=99)
    assert run_trials(H, PLUS, k, seed=99) + run_trials(H, PLUS, n - k, seed=99, start=k) == whole


def test_identical_inputs_million_shots():
    n = 1_000_000
    c = run_trials(H, H, n, seed=1)
    assert c.n_minus == 0
    rep = estimate(c)
    assert abs(rep.p_accept_hat - 0.125) <= 5 * oracles.binom_sigma(0.125, n)
    assert rep.overlap_hat == 1.0 and rep.overlap_hat_clamped == 1.0


def test_sampled_frequencies_match_exact():
    rng = np.random.default_rng(2)
    n = 200_000
    for seed in range(3):
        phi, psi = PolarizationState.random(rng), PolarizationState.random(rng)
        d = run_exact(phi, psi)
        c = run_trials(phi, psi, n, seed=seed)
        assert abs(c.n_accepted / n - d.p_accept) <= 5 * oracles.binom_sigma(d.p_accept, n)
        assert abs(c.n_inconclusive / n - 0.75) <= 5 * oracles.binom_sigma(0.75, n)
        p = d.p_plus_given_accept
        assert abs(c.n_plus / c.n_accepted - p) <= 5 * oracles.binom_sigma(p, c.n_accepted) + 1e-12


def test_estimate_arithmetic():
    rep = estimate(ShotCounts(8000, 5000, 2000, 750, 250))
    assert rep.overlap_hat == 0.5
    assert rep.n_accepted == 1000
    assert rep.p_accept_hat == 0.125
    assert rep.stderr == pytest.approx(2 * math.sqrt(0.75 * 0.25 / 1000))
    assert rep.ci95_low <= rep.overlap_hat <= rep.ci95_high

    rep = estimate(ShotCounts(40, 30, 5, 5, 0))
    assert rep.overlap_hat == 1.0 and rep.overlap_hat_clamped == 1.0
    assert rep.ci95_low <= 1.0 <= rep.ci95_high


def test_wilson_interval_reference_value():
    # statsmodels proportion_confint(750, 1000, alpha=0.05, method="wilson")
    rep = estimate(ShotCounts(1000, 0, 0, 750, 250))
    assert (rep.ci95_low + 1) / 2 == pytest.approx(0.7222397197409138, abs=1e-12)
    assert (rep.ci95_high + 1) / 2 == pytest.approx(0.7758469010163087, abs=1e-12)


def test_clamped_estimate():
    rep = estimate(ShotCounts(100, 80, 10, 4, 6))
    assert rep.overlap_hat == pytest.approx(-0.2)
    assert rep.overlap_hat_clamped == 0.0


def test_no_accepted_shots():
    with pytest.raises(NoAcceptedShots):
        estimate(ShotCounts(8, 6, 2, 0, 0))


def test_counts_validation():
    with pytest.raises(ValueError):
        ShotCounts(5, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        ShotCounts(0, -1, 1, 0, 0)


def test_coverage_and_consistency_over_seeds():
    n = 1_000_000
    truth = run_exact(H, PLUS).overlap_true
    covered = within_5se = 0
    accept_sigma = math.sqrt(0.125 * 0.875 / n)
    for seed in range(100):
        rep = estimate(run_trials(H, PLUS, n, seed=seed))
        covered += rep.ci95_low <= truth <= rep.ci95_high
        within_5se += abs(rep.overlap_hat - truth) <= 5 * rep.stderr
        assert abs(rep.p_accept_hat - 0.125) <= 5 * accept_sigma
    assert covered >= 90
    assert within_5se >= 95
