"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line, shown in the pytest terminal summary.
"""

import io
import json
import math
import re
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from overlap_sim import cli
from overlap_sim.bellmeas import PAIR_1, PAIR_2, bell_project, expand_bell_pairs, reconstruct
from overlap_sim.hadamard_test import swap_test_probs
from overlap_sim.protocol import (
    NAIVE_CSWAP_BOUND,
    SUCCESS_PROBABILITY,
    ChiBranch,
    branch_state,
    overlap_from_distribution,
    run_exact,
)
from overlap_sim.sampler import run_trials
from overlap_sim.states import BellKind, PolarizationState, build_full_state
from overlap_sim.statevec import StateVector, inner, tensor

from conftest import ACCEPTANCE_LINES

EXACT_TOL = 1e-12
README = Path(__file__).resolve().parents[1] / "README.md"


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
    assert ok, f"criterion {number} ({title}) failed: {detail}"


def random_pairs(n, seed):
    rng = np.random.default_rng(seed)
    return [(PolarizationState.random(rng), PolarizationState.random(rng)) for _ in range(n)]


def test_01_success_probability():
    pairs = random_pairs(100, seed=101)
    t0 = time.perf_counter()
    err = max(abs(run_exact(phi, psi).p_accept - 0.125) for phi, psi in pairs)
    dt = time.perf_counter() - t0
    record(1, "p_accept = 1/8", err <= EXACT_TOL and dt < 1.0, f"max |err| = {err:.2e}, {dt:.3f} s")


def test_02_per_outcome_probability():
    pairs = random_pairs(100, seed=102)
    t0 = time.perf_counter()
    err = 0.0
    for phi, psi in pairs:
        full = build_full_state(phi, psi)
        for k1 in (BellKind.PSI_PLUS, BellKind.PSI_MINUS):
            p1, r1 = bell_project(full, PAIR_1, k1)
            for k2 in (BellKind.PSI_PLUS, BellKind.PSI_MINUS):
                p2, _ = bell_project(r1, PAIR_2, k2)
                err = max(err, abs(p1 * p2 - 1 / 16))
    dt = time.perf_counter() - t0
    record(2, "each (Psi+-,Psi+-) outcome = 1/16", err <= EXACT_TOL and dt < 1.0, f"max |err| = {err:.2e}, {dt:.3f} s")


def test_03_overlap_law():
    pairs = random_pairs(100, seed=103)
    t0 = time.perf_counter()
    err = 0.0
    for phi, psi in pairs:
        truth = abs(inner(phi.on("x"), psi.on("x"))) ** 2
        for correct in (False, True):
            err = max(err, abs(overlap_from_distribution(run_exact(phi, psi, correct)) - truth))
    dt = time.perf_counter() - t0
    record(3, "P+ - P- = |<phi|psi>|^2", err <= EXACT_TOL and dt < 1.0, f"max |err| = {err:.2e}, {dt:.3f} s (both settings)")


def test_04_bell_expansion_completeness():
    worst_sum = worst_rec = 0.0
    negative = False
    for phi, psi in random_pairs(20, seed=104):
        s = build_full_state(phi, psi)
        terms = expand_bell_pairs(s)
        weights = np.array([t.weight for t in terms])
        negative |= bool(np.any(weights < 0)) or len(terms) != 16
        worst_sum = max(worst_sum, abs(weights.sum() - 1))
        worst_rec = max(worst_rec, float(np.max(np.abs(reconstruct(terms).amps - s.amps))))
    ok = not negative and worst_sum <= EXACT_TOL and worst_rec <= EXACT_TOL
    record(4, "16-term expansion complete", ok, f"|sum w - 1| <= {worst_sum:.2e}, reconstruction <= {worst_rec:.2e}")


def test_05_ideal_gate_equality():
    err = 0.0
    for phi, psi in random_pairs(100, seed=105):
        _, chi = branch_state(phi, psi, ChiBranch.PLUS_PLUS, apply_correction=True)
        # (|phi>_3|psi>_4|0>_C + |psi>_3|phi>_4|1>_C)/sqrt(2), built directly
        a = tensor(tensor(phi.on("3"), psi.on("4")), StateVector(("C",), [1, 0]))
        b = tensor(tensor(psi.on("3"), phi.on("4")), StateVector(("C",), [0, 1]))
        target = (a.amps + b.amps) / math.sqrt(2)
        err = max(err, float(np.max(np.abs(chi.amps - target))))
    record(5, "corrected branch = ideal C-SWAP output", err <= EXACT_TOL, f"max amplitude error = {err:.2e}")


def test_06_hadamard_cross_oracle():
    err = 0.0
    for phi, psi in random_pairs(100, seed=106):
        d = run_exact(phi, psi)
        p0, p1 = swap_test_probs(phi, psi)
        err = max(err, abs(p0 - d.p_plus_given_accept), abs(p1 - d.p_minus_given_accept))
    record(6, "Hadamard test (SWAP) = protocol P+-", err <= EXACT_TOL, f"max |err| = {err:.2e}")


def test_07_monte_carlo_convergence():
    out = io.StringIO()
    t0 = time.perf_counter()
    code = cli.main(["simulate", "--phi", "H", "--psi", "+", "--shots", "1000000", "--seed", "42"], out=out)
    dt = time.perf_counter() - t0
    rep = json.loads(out.getvalue())
    accept_bound = 5 * math.sqrt(0.125 * 0.875 / 1e6)
    ok = (
        code == 0
        and abs(rep["overlap_hat"] - 0.5) <= 5 * rep["stderr"]
        and abs(rep["p_accept_hat"] - 0.125) <= accept_bound
        and dt < 60
    )
    record(
        7,
        "Monte Carlo convergence (1e6 shots)",
        ok,
        f"overlap_hat = {rep['overlap_hat']:.5f} (5 se = {5 * rep['stderr']:.5f}), "
        f"p_accept_hat = {rep['p_accept_hat']:.5f} (bound {accept_bound:.5f}), {dt:.2f} s",
    )


def test_08_determinism():
    argv = [sys.executable, "-m", "overlap_sim", "simulate", "--phi", "theta=2.0,lambda=1.0", "--psi", "+",
            "--shots", "300000", "--seed", "2718"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    phi, psi = PolarizationState.from_angles(2.0, 1.0), PolarizationState.from_angles(np.pi / 2)
    whole = run_trials(phi, psi, 300_000, seed=2718)
    merged = run_trials(phi, psi, 123_457, seed=2718) + run_trials(phi, psi, 300_000 - 123_457, seed=2718, start=123_457)
    ok = first == second and whole == merged and json.loads(first)["n_plus"] == whole.n_plus
    record(8, "determinism and split/merge", ok, f"identical JSON: {first == second}, merge exact: {whole == merged}")


def test_09_documented_constants():
    text = README.read_text(encoding="utf-8")
    has_bound = bool(re.search(r"4\^-5|4⁻⁵", text)) and "0.001" in text
    has_rate = "1/8" in text
    values_ok = abs(NAIVE_CSWAP_BOUND - 0.001) < 5e-5 and SUCCESS_PROBABILITY == 0.125
    record(9, "docs state 4^-5 ~ 0.001 next to 1/8", has_bound and has_rate and values_ok,
           f"bound in README: {has_bound}, 1/8 in README: {has_rate}, 4^-5 = {NAIVE_CSWAP_BOUND:.7f}")
