"""Command-line front end: ``overlap-sim exact|simulate|sweep|hadamard-test|verify``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 no accepted shots.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from collections.abc import Callable, Sequence

import numpy as np

from . import hadamard_test, protocol, sampler
from .errors import NoAcceptedShots, NotNormalizable, OverlapSimError, ZeroState
from .states import PolarizationState
from .statevec import SWAP, I2, kron_ops

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NO_SHOTS = 0, 1, 2, 3

NAMED_STATES = {
    "H": (1.0, 0.0),
    "V": (0.0, 1.0),
    "+": (1 / math.sqrt(2), 1 / math.sqrt(2)),
    "-": (1 / math.sqrt(2), -1 / math.sqrt(2)),
}

_PI_RE = re.compile(r"^\s*(?P<num>[-+]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+\.?\d*))?\s*$")


class InputError(Exception):
    pass


def parse_real(text: str) -> float:
    """A float, or a multiple of pi such as ``pi/2``, ``3pi/4``, ``-0.5*pi``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_RE.match(text)
    if not m:
        raise ValueError(f"not a number: {text!r}")
    num = m.group("num")
    factor = {"": 1.0, "+": 1.0, "-": -1.0}.get(num)
    if factor is None:
        factor = float(num)
    den = float(m.group("den")) if m.group("den") else 1.0
    return factor * math.pi / den


def parse_state(text: str, field: str) -> PolarizationState:
    """Parse a ``--phi``/``--psi`` value.

    Accepted forms: ``H``, ``V``, ``+``, ``-``; four comma-separated reals
    ``a_re,a_im,b_re,b_im``; or ``theta=..,lambda=..`` meaning
    cos(theta/2)|H> + e^{i lambda} sin(theta/2)|V>.
    """
    text = text.strip()
    try:
        if text in NAMED_STATES:
            return PolarizationState(*NAMED_STATES[text])
        if "=" in text:
            params = {}
            for part in text.split(","):
                key, _, value = part.partition("=")
                key = key.strip().lower()
                if key not in ("theta", "lambda"):
                    raise ValueError(f"unknown angle parameter {key!r}")
                params[key] = parse_real(value)
            if "theta" not in params:
                raise ValueError("theta is required")
            return PolarizationState.from_angles(params["theta"], params.get("lambda", 0.0))
        parts = [parse_real(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 4 comma-separated reals, got {len(parts)}")
        a_re, a_im, b_re, b_im = parts
        return PolarizationState(complex(a_re, a_im), complex(b_re, b_im))
    except (ValueError, ZeroState, NotNormalizable) as exc:
        raise InputError(f"{field}: {exc}") from exc


def _emit_json(obj: dict, out) -> None:
    out.write(json.dumps(obj) + "\n")


def _emit_csv(rows: Sequence[dict], out) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    out.write(buf.getvalue())


def _emit(obj: dict, args, out) -> None:
    if getattr(args, "format", "json") == "csv":
        _emit_csv([obj], out)
    else:
        _emit_json(obj, out)


def cmd_exact(args, out=sys.stdout) -> int:
    phi, psi = parse_state(args.phi, "--phi"), parse_state(args.psi, "--psi")
    d = protocol.run_exact(phi, psi, apply_correction=args.correction)
    _emit(
        {
            "overlap_true": d.overlap_true,
            "p_accept": d.p_accept,
            "p_plus_given_accept": d.p_plus_given_accept,
            "p_minus_given_accept": d.p_minus_given_accept,
            "overlap_recovered": protocol.overlap_from_distribution(d),
        },
        args,
        out,
    )
    return EXIT_OK


def cmd_simulate(args, out=sys.stdout) -> int:
    phi, psi = parse_state(args.phi, "--phi"), parse_state(args.psi, "--psi")
    if args.shots < 1:
        raise InputError("--shots: must be at least 1")
    counts = sampler.run_trials(phi, psi, args.shots, args.seed, apply_correction=args.correction)
    try:
        report = sampler.estimate(counts)
    except NoAcceptedShots as exc:
        _emit_json({"error": "NoAcceptedShots", "message": str(exc), **counts.as_dict()}, out)
        return EXIT_NO_SHOTS
    _emit({"seed": args.seed, "shots": args.shots, **counts.as_dict(), **report.as_dict()}, args, out)
    return EXIT_OK


SWEEP_COLUMNS = (
    "theta",
    "overlap_true",
    "p_plus_exact",
    "p_plus_hat",
    "overlap_hat",
    "ci_low",
    "ci_high",
    "n_accepted",
)


def cmd_sweep(args, out=sys.stdout) -> int:
    if args.steps < 2:
        raise InputError("--steps: must be at least 2")
    if args.shots < 1:
        raise InputError("--shots: must be at least 1")
    phi = PolarizationState(1.0, 0.0)
    rows = []
    for k in range(args.steps):
        theta = k * (math.pi / 2) / (args.steps - 1)
        psi = PolarizationState(math.cos(theta), math.sin(theta))
        d = protocol.run_exact(phi, psi)
        counts = sampler.run_trials(phi, psi, args.shots, args.seed + k)
        try:
            rep = sampler.estimate(counts)
        except NoAcceptedShots as exc:
            _emit_json({"error": "NoAcceptedShots", "message": f"theta={theta!r}: {exc}"}, out)
            return EXIT_NO_SHOTS
        rows.append(
            dict(
                zip(
                    SWEEP_COLUMNS,
                    (
                        theta,
                        d.overlap_true,
                        d.p_plus_given_accept,
                        counts.n_plus / counts.n_accepted,
                        rep.overlap_hat,
                        rep.ci95_low,
                        rep.ci95_high,
                        rep.n_accepted,
                    ),
                )
            )
        )
    if args.format == "json":
        _emit_json({"rows": rows}, out)
    else:
        _emit_csv(rows, out)
    return EXIT_OK


UNITARIES = {"swap": SWAP, "identity": kron_ops(I2, I2)}


def cmd_hadamard_test(args, out=sys.stdout) -> int:
    phi, psi = parse_state(args.phi, "--phi"), parse_state(args.psi, "--psi")
    u = UNITARIES[args.unitary]
    rho = hadamard_test.Ensemble.product(phi, psi)
    p0, p1 = hadamard_test.hadamard_test_probs(u, rho, args.phase)
    tr = hadamard_test.estimate_trace(u, rho)
    _emit(
        {
            "unitary": args.unitary,
            "phase": args.phase,
            "p0": p0,
            "p1": p1,
            "trace_re": tr.real,
            "trace_im": tr.imag,
            "overlap_true": phi.overlap(psi),
        },
        args,
        out,
    )
    return EXIT_OK


# ---- invariant verification -------------------------------------------------

VERIFY_TOL = 1e-12


def _check_accept(phi, psi, rng):
    return max(abs(protocol.run_exact(phi, psi, c).p_accept - protocol.SUCCESS_PROBABILITY) for c in (False, True))


def _check_overlap_law(phi, psi, rng):
    ov = phi.overlap(psi)
    return max(
        abs(protocol.overlap_from_distribution(protocol.run_exact(phi, psi, c)) - ov) for c in (False, True)
    )


def _dist_gap(a: protocol.ProtocolDistribution, b: protocol.ProtocolDistribution) -> float:
    return max(
        abs(a.p_accept - b.p_accept),
        abs(a.p_plus_given_accept - b.p_plus_given_accept),
        abs(a.p_minus_given_accept - b.p_minus_given_accept),
        abs(a.overlap_true - b.overlap_true),
    )


def _check_symmetry(phi, psi, rng):
    return _dist_gap(protocol.run_exact(phi, psi), protocol.run_exact(psi, phi))


def _check_phase(phi, psi, rng):
    a, b = rng.uniform(0, 2 * np.pi, size=2)
    base = protocol.run_exact(phi, psi)
    return max(
        _dist_gap(base, protocol.run_exact(phi.with_phase(a), psi)),
        _dist_gap(base, protocol.run_exact(phi, psi.with_phase(b))),
    )


def _check_ideal_gate(phi, psi, rng):
    _, chi = protocol.branch_state(phi, psi, protocol.ChiBranch.PLUS_PLUS, apply_correction=True)
    _, chi_mm = protocol.branch_state(phi, psi, protocol.ChiBranch.MINUS_MINUS, apply_correction=True)
    ideal = protocol.ideal_cswap_output(phi, psi).amps
    return max(np.max(np.abs(chi.amps - ideal)), np.max(np.abs(chi_mm.amps - ideal)))


def _check_hadamard(phi, psi, rng):
    d = protocol.run_exact(phi, psi)
    p0, p1 = hadamard_test.swap_test_probs(phi, psi)
    return max(abs(p0 - d.p_plus_given_accept), abs(p1 - d.p_minus_given_accept))


VERIFY_CHECKS: tuple[tuple[str, Callable], ...] = (
    ("success probability 1/8", _check_accept),
    ("overlap law P+ - P- = |<phi|psi>|^2", _check_overlap_law),
    ("symmetry under phi <-> psi", _check_symmetry),
    ("global-phase invariance", _check_phase),
    ("ideal C-SWAP output", _check_ideal_gate),
    ("Hadamard-test agreement", _check_hadamard),
)


def run_verify(trials: int, seed: int, out=sys.stdout) -> int:
    rng = np.random.Generator(np.random.Philox(seed))
    pairs = [(PolarizationState.random(rng), PolarizationState.random(rng)) for _ in range(trials)]
    status = EXIT_OK
    for name, check in VERIFY_CHECKS:
        worst, failure = 0.0, None
        for i, (phi, psi) in enumerate(pairs):
            err = float(check(phi, psi, rng))
            worst = max(worst, err)
            if failure is None and not err <= VERIFY_TOL:
                failure = (i, phi, psi, err)
        if failure is None:
            out.write(f"PASS  {name}  (trials={trials}, max_err={worst:.3e})\n")
        else:
            i, phi, psi, err = failure
            out.write(
                f"FAIL  {name}  trial {i}: error {err:.3e} > {VERIFY_TOL:g}"
                f"  phi=({phi.alpha_h:.6g}, {phi.alpha_v:.6g}) psi=({psi.alpha_h:.6g}, {psi.alpha_v:.6g})\n"
            )
            status = EXIT_VERIFY
    out.write(f"{len(VERIFY_CHECKS)} checks, {'all passed' if status == EXIT_OK else 'FAILED'}\n")
    return status


def cmd_verify(args, out=sys.stdout) -> int:
    if args.trials < 1:
        raise InputError("--trials: must be at least 1")
    return run_verify(args.trials, args.seed, out)


def _format_flags(p: argparse.ArgumentParser, default: str) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output")
    g.add_argument("--csv", dest="format", action="store_const", const="csv", help="CSV output")
    p.set_defaults(format=default)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="overlap-sim",
        description="Simulate overlap measurement of photon polarization states via coherently addressed teleportation.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    state_help = "H|V|+|- , a_re,a_im,b_re,b_im , or theta=..,lambda=.."

    p = sub.add_parser("exact", help="exact protocol probabilities")
    p.add_argument("--phi", required=True, help=state_help)
    p.add_argument("--psi", required=True, help=state_help)
    p.add_argument("--correction", action="store_true", help="apply Z x Z to the (Psi-,Psi-) branch")
    _format_flags(p, "json")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("simulate", help="Monte Carlo shots and overlap estimate")
    p.add_argument("--phi", required=True, help=state_help)
    p.add_argument("--psi", required=True, help=state_help)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--correction", action="store_true")
    _format_flags(p, "json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="overlap sweep psi = cos(t)H + sin(t)V against phi = H")
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    _format_flags(p, "csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("hadamard-test", help="generic Hadamard-test oracle on |phi>|psi>")
    p.add_argument("--phi", required=True, help=state_help)
    p.add_argument("--psi", required=True, help=state_help)
    p.add_argument("--phase", type=parse_real, default=0.0, help="phase-gate angle in radians")
    p.add_argument("--unitary", choices=sorted(UNITARIES), default="swap")
    _format_flags(p, "json")
    p.set_defaults(func=cmd_hadamard_test)

    p = sub.add_parser("verify", help="check protocol invariants on random inputs")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except OverlapSimError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
