"""Command line front end.

Commands: channel-info, enumerate, run, multiqubit, average.
Exit codes: 0 all checks passed, 1 invariant violation (a fidelity or
verdict that should hold does not), 2 invalid input.

The env var BQT_TOLERANCE overrides the 1e-10 fidelity acceptance
tolerance (testing only).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .engine import (
    ChannelState,
    build_cluster_channel,
    regenerated_table_matches,
)
from .errors import BqtError
from .harness import (
    POLICY_PRESETS,
    average_fidelity,
    random_coefficients,
    run_protocol,
)
from .statevector import dump_statevector, parse_statevector

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_BAD_INPUT = 2

COEFF_NORM_WINDOW = 1e-6
MULTIQUBIT_CAP = 5

CONVENTION_NOTE = (
    "note: psi+- = (|00> +- |11>)/sqrt(2), phi+- = (|01> +- |10>)/sqrt(2); "
    "many texts swap the psi/phi names."
)


class InputError(Exception):
    pass


def _tolerance() -> float:
    return float(os.environ.get("BQT_TOLERANCE", "1e-10"))


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise InputError(f"expected 're' or 're,im', got {text!r}")
    try:
        re = float(parts[0])
        im = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError as exc:
        raise InputError(f"bad complex number {text!r}: {exc}") from None
    return complex(re, im)


def _normalize_pair(c0: complex, c1: complex, name: str) -> tuple[complex, complex]:
    norm = math.sqrt(abs(c0) ** 2 + abs(c1) ** 2)
    if abs(norm - 1.0) > COEFF_NORM_WINDOW:
        raise InputError(
            f"{name} coefficients have norm {norm!r}; "
            f"must be within {COEFF_NORM_WINDOW} of 1"
        )
    return c0 / norm, c1 / norm


def _resolve_coeffs(args) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
    explicit = [args.a0, args.a1, args.b0, args.b1]
    if any(c is not None for c in explicit):
        if args.random:
            raise InputError("--random conflicts with explicit coefficients")
        if not all(c is not None for c in explicit):
            raise InputError("give all four of --a0 --a1 --b0 --b1, or none")
        a = _normalize_pair(_parse_complex(args.a0), _parse_complex(args.a1), "a")
        b = _normalize_pair(_parse_complex(args.b0), _parse_complex(args.b1), "b")
        return a, b
    rng = np.random.default_rng(args.seed)
    return random_coefficients(rng), random_coefficients(rng)


def _load_channel(path: str | None) -> ChannelState | None:
    if path is None:
        return None
    return ChannelState.from_statevector(parse_statevector(Path(path).read_text()))


def _policy(name: str):
    return POLICY_PRESETS[name]


def _emit(text: str, out: str | None) -> None:
    if out is None:
        print(text, end="" if text.endswith("\n") else "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _branch_table(records) -> str:
    lines = [CONVENTION_NOTE]
    lines.append(
        f"{'k':>2} {'alice_bsm':>9} {'bob_bsm':>7} {'prob':>8} "
        f"{'a_corr':>6} {'b_corr':>6} {'fid_alice':>14} {'fid_bob':>14}"
    )
    for r in records:
        fid_a = f"{r.fid_alice:.12f}" if r.fid_alice is not None else "n/a"
        fid_b = f"{r.fid_bob:.12f}" if r.fid_bob is not None else "n/a"
        lines.append(
            f"{r.branch_index:>2} {r.alice_outcome.value:>9} {r.bob_outcome.value:>7} "
            f"{r.prob:>8.4f} {r.alice_corr.value:>6} {r.bob_corr.value:>6} "
            f"{fid_a:>14} {fid_b:>14}"
        )
    return "\n".join(lines)


def cmd_channel_info(args) -> int:
    channel = _load_channel(args.channel) or build_cluster_channel()
    verdict = channel.verdict()
    if args.json:
        payload = {
            "labels": list(channel.state.labels),
            "amplitudes": [
                [format(i, "04b"), amp.real, amp.imag]
                for i, amp in enumerate(channel.state.amplitudes)
                if amp != 0
            ],
            "entropy_bits": verdict.entropy_bits,
            "schmidt_rank": verdict.schmidt_rank,
            "verdict": "OK" if verdict.ok else "FAIL",
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2), args.out)
    else:
        text = dump_statevector(channel.state)
        text += f"entropy_bits={verdict.entropy_bits:.12f}\n"
        text += f"schmidt_rank={verdict.schmidt_rank}\n"
        text += f"verdict={'OK' if verdict.ok else 'FAIL'}\n"
        _emit(text, args.out)
    return EXIT_OK if verdict.ok else EXIT_INVARIANT


def cmd_enumerate(args) -> int:
    from .engine import enumerate_branches

    tol = _tolerance()
    a, b = _resolve_coeffs(args)
    channel = _load_channel(args.channel)
    records = enumerate_branches(a, b, channel)

    status = EXIT_OK
    realized = [r for r in records if r.fid_alice is not None]
    if any(r.fid_alice < 1 - tol or r.fid_bob < 1 - tol for r in realized):
        status = EXIT_INVARIANT

    regen_line = None
    if args.regen_table:
        ok = regenerated_table_matches(a, b, tol)
        regen_line = f"correction table regeneration: {'PASS' if ok else 'FAIL'}"
        if not ok:
            status = EXIT_INVARIANT

    if args.json:
        _emit(json.dumps([r.to_json_dict() for r in records], indent=2), args.out)
        if regen_line:
            print(regen_line, file=sys.stderr)
    else:
        text = _branch_table(records)
        if regen_line:
            text += "\n" + regen_line
        _emit(text, args.out)
    return status


def cmd_run(args) -> int:
    tol = _tolerance()
    a, b = _resolve_coeffs(args)
    channel = _load_channel(args.channel)
    policy_a = _policy(args.policy_a)
    policy_b = _policy(args.policy_b)
    transcript = run_protocol(
        a, b, policy_a, policy_b, seed=args.seed, m=args.m, n=args.n, channel=channel
    )
    fid_alice, fid_bob = transcript.final_fidelities()
    summary = f"fid_alice={fid_alice:.12f} fid_bob={fid_bob:.12f}"
    if args.out is None:
        print(transcript.to_jsonl(), end="")
        print(summary, file=sys.stderr)
    else:
        Path(args.out).write_text(transcript.to_jsonl())
        print(summary)

    honest = policy_a.is_honest and policy_b.is_honest
    canonical = channel is None or channel.verdict().ok
    if honest and canonical and (fid_alice < 1 - tol or fid_bob < 1 - tol):
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_multiqubit(args) -> int:
    if not (1 <= args.m <= MULTIQUBIT_CAP and 1 <= args.n <= MULTIQUBIT_CAP):
        raise InputError(f"m and n must be in 1..{MULTIQUBIT_CAP}")
    if args.mode == "sample":
        return cmd_run(args)

    from .engine import enumerate_branches_multiqubit

    tol = _tolerance()
    a, b = _resolve_coeffs(args)
    channel = _load_channel(args.channel)
    records = enumerate_branches_multiqubit(args.m, args.n, a, b, channel)
    if args.json:
        _emit(json.dumps([r.to_json_dict() for r in records], indent=2), args.out)
    else:
        worst = min(min(r.fid_alice, r.fid_bob) for r in records)
        text = _branch_table(records)
        text += f"\nm={args.m} n={args.n} worst_branch_fidelity={worst:.12f}"
        _emit(text, args.out)
    if any(r.fid_alice < 1 - tol or r.fid_bob < 1 - tol for r in records):
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_average(args) -> int:
    tol = _tolerance()
    policy_a = _policy(args.policy_a)
    policy_b = _policy(args.policy_b)
    channel = _load_channel(args.channel)
    stats = average_fidelity(
        policy_a, policy_b, trials=args.trials, seed=args.seed,
        m=args.m, n=args.n, channel=channel,
    )
    text = (
        f"mean_fid_alice={stats.mean_alice:.12f} mean_fid_bob={stats.mean_bob:.12f}\n"
        f"std_alice={stats.std_alice:.6e} std_bob={stats.std_bob:.6e} "
        f"trials={stats.trials}"
    )
    _emit(text, args.out)
    honest = policy_a.is_honest and policy_b.is_honest
    canonical = channel is None or channel.verdict().ok
    if honest and canonical and (stats.mean_alice < 1 - tol or stats.mean_bob < 1 - tol):
        return EXIT_INVARIANT
    return EXIT_OK


def _add_coeff_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a0", help="Alice coefficient a0 as 're,im'")
    p.add_argument("--a1", help="Alice coefficient a1 as 're,im'")
    p.add_argument("--b0", help="Bob coefficient b0 as 're,im'")
    p.add_argument("--b1", help="Bob coefficient b1 as 're,im'")
    p.add_argument("--random", action="store_true",
                   help="draw coefficients from --seed (default when none given)")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--channel", help="amplitude-dump file with a custom channel")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bqt",
        description="Simulate the two-way teleportation exchange over a "
        "four-qubit cluster channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("channel-info", help="channel amplitudes and entanglement verdict")
    p.add_argument("--channel", help="amplitude-dump file with a custom channel")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_channel_info)

    p = sub.add_parser("enumerate", help="all sixteen measurement branches")
    _add_coeff_flags(p)
    _add_common_flags(p)
    p.add_argument("--regen-table", action="store_true",
                   help="re-derive the correction table by exhaustive search")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("run", help="one sampled session with a transcript")
    _add_coeff_flags(p)
    _add_common_flags(p)
    p.add_argument("--policy-a", choices=sorted(POLICY_PRESETS), default="honest")
    p.add_argument("--policy-b", choices=sorted(POLICY_PRESETS), default="honest")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("multiqubit", help="m-to-n exchange of GHZ-form states")
    _add_coeff_flags(p)
    _add_common_flags(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["enumerate", "sample"], default="enumerate")
    p.add_argument("--policy-a", choices=sorted(POLICY_PRESETS), default="honest")
    p.add_argument("--policy-b", choices=sorted(POLICY_PRESETS), default="honest")
    p.set_defaults(func=cmd_multiqubit)

    p = sub.add_parser("average", help="Monte Carlo mean fidelities under policies")
    _add_common_flags(p)
    p.add_argument("--policy-a", choices=sorted(POLICY_PRESETS), default="honest")
    p.add_argument("--policy-b", choices=sorted(POLICY_PRESETS), default="honest")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_average)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, BqtError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
