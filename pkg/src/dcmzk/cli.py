"""Command line entry point: ``dcmzk <verb> ...``.

Exit codes: 0 success (a REJECT verdict is still a successful run),
2 unreadable input, 3 resource refusal, 4 transport failure,
5 precondition violation.
"""

from __future__ import annotations

import argparse
import secrets
import socket
import sys
import time
from fractions import Fraction

from . import dcnm as dcnm_mod
from .channel import DEFAULT_TIMEOUT, StreamChannel, drive
from .dcm import dcm_decide, dcm_factorize
from .errors import ParseError, PreconditionError, ResourceError, RestartCapExceeded, TransportError
from .formats import format_instance, parse_instance
from .gi import parse_graph, reduce_gi
from .permgroup import DEFAULT_CAP
from .protocol import (
    HonestProver,
    ProverWitness,
    Transcript,
    View,
    optimal_cheating_prover,
    parallel_verifier_party,
    prover_party,
    run_session,
    strategy_by_name,
    verifier_party,
    _digest,
)
from .randomness import RandomSource, split
from .simulator import exact_view_distribution, simulate_sequential
from .stats import EmpiricalSample, acceptance_rate, format_fraction, format_tv, report_table, tv_distance
from .wire import format_message, format_perm

EXIT_PARSE, EXIT_RESOURCE, EXIT_TRANSPORT, EXIT_PRECONDITION = 2, 3, 4, 5


def _seed(value: str | None) -> int:
    if value is None:
        return secrets.randbits(64)
    return int(value, 0)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_instance(path: str):
    return parse_instance(_read(path))


def _address(text: str) -> tuple[str, int]:
    host, _, port = text.rpartition(":")
    try:
        return host or "127.0.0.1", int(port)
    except ValueError:
        raise ParseError(f"bad address {text!r}, expected HOST:PORT") from None


def _connect(args) -> StreamChannel:
    timeout = args.timeout
    if args.listen:
        server = socket.create_server(_address(args.listen))
        server.settimeout(timeout)
        host, port = server.getsockname()[:2]
        print(f"listening on {host}:{port}", file=sys.stderr, flush=True)
        try:
            conn, _ = server.accept()
        except OSError as exc:
            raise TransportError(f"no peer connected: {exc}") from exc
        finally:
            server.close()
        return StreamChannel(conn, timeout)
    if args.connect:
        deadline = time.monotonic() + timeout
        while True:
            try:
                return StreamChannel(socket.create_connection(_address(args.connect), timeout=timeout), timeout)
            except OSError as exc:
                if time.monotonic() >= deadline:
                    raise TransportError(f"cannot connect to {args.connect}: {exc}") from exc
                time.sleep(0.05)
    raise ParseError("one of --listen or --connect is required")


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print_view(view: View) -> None:
    print(f"view-randomness: {view.consumed_randomness or '-'}")
    for msg in view.messages:
        print(f"view-message: {format_message(msg)}")


def _mode_label(mode: str, k: int) -> str:
    return "atomic" if mode == "atomic" else f"{mode}:{k}"


def _check_mode(args) -> None:
    if args.mode == "atomic" and args.k != 1:
        raise ParseError("--mode atomic runs exactly one execution (--k 1)")


# --- verbs ------------------------------------------------------------------------


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    if not dcm_decide(inst, args.cap):
        print("NO")
        return 0
    f = dcm_factorize(inst, args.cap)
    print("YES")
    print(f"g0: {format_perm(f.g0)}")
    print(f"h0: {format_perm(f.h0)}")
    return 0


def cmd_prove(args) -> int:
    _check_mode(args)
    inst = _load_instance(args.instance)
    prover = HonestProver(inst, ProverWitness.for_instance(inst, args.cap))
    channel = _connect(args)
    try:
        accepted = drive(prover_party(prover, args.k, split(_seed(args.seed), "prover"), args.mode == "parallel"), channel)
    finally:
        channel.close()
    print(f"verdict: {'ACCEPT' if accepted else 'REJECT'}")
    return 0


def cmd_verify(args) -> int:
    _check_mode(args)
    inst = _load_instance(args.instance)
    seed = _seed(args.seed)
    rng = RandomSource(seed, "verifier", 0)
    if args.mode == "parallel":
        party = parallel_verifier_party(inst, args.k, rng)
    else:
        party = verifier_party(inst, strategy_by_name(args.adversary, args.k), args.k, rng)
    channel = _connect(args)
    try:
        outcome = drive(party, channel)
    finally:
        channel.close()
    prover_seed = None if args.seed_prover is None else int(args.seed_prover, 0)
    transcript = Transcript(
        _digest(inst), _mode_label(args.mode, args.k), seed, prover_seed, outcome.rounds, outcome.accept
    )
    print(f"verdict: {'ACCEPT' if outcome.accept else 'REJECT'}")
    if args.transcript:
        _emit(transcript.to_text(), args.transcript)
        print(f"transcript: {args.transcript}")
    else:
        sys.stdout.write(transcript.to_text())
    return 0


def cmd_run(args) -> int:
    _check_mode(args)
    inst = _load_instance(args.instance)
    base = _seed(args.seed)
    sv = base if args.seed_verifier is None else int(args.seed_verifier, 0)
    sp = base if args.seed_prover is None else int(args.seed_prover, 0)
    strategy = None if args.mode == "parallel" else strategy_by_name(args.adversary, args.k)
    transcript, view = run_session(
        inst,
        ProverWitness.for_instance(inst, args.cap),
        k=args.k,
        mode=args.mode,
        strategy=strategy,
        seed_verifier=sv,
        seed_prover=sp,
        transport=args.transport,
    )
    print(f"verdict: {'ACCEPT' if transcript.verdict else 'REJECT'}")
    if args.transcript:
        _emit(transcript.to_text(), args.transcript)
        print(f"transcript: {args.transcript}")
    else:
        print("transcript: -")
        sys.stdout.write(transcript.to_text())
    _print_view(view)
    return 0


def cmd_simulate(args) -> int:
    inst = _load_instance(args.instance)
    strategy = strategy_by_name(args.adversary, args.k)
    sim = simulate_sequential(
        inst, strategy, args.k, RandomSource(_seed(args.seed), "simulator", 0), restart_cap=args.restart_cap, cap=args.cap
    )
    _print_view(sim.view)
    print("attempts: " + " ".join(map(str, sim.attempts_per_stage)))
    return 0


def cmd_zk_check(args) -> int:
    inst = _load_instance(args.instance)
    strategy = strategy_by_name(args.adversary, args.k)
    if args.samples is None:
        real = exact_view_distribution(inst, "interaction", strategy, args.k, cap=args.cap)
        if args.k == 1 and args.adversary == "honest" and args.atomic_simulator:
            fake = exact_view_distribution(inst, "atomic-simulator", cap=args.cap)
        else:
            fake = exact_view_distribution(inst, "simulator", strategy, args.k, cap=args.cap)
        if args.table:
            print(report_table(real, fake))
        print(format_tv(tv_distance(real, fake)))
        return 0
    seed = _seed(args.seed)
    witness = ProverWitness.for_instance(inst, args.cap)
    real_s, fake_s = EmpiricalSample(), EmpiricalSample()
    for i in range(args.samples):
        _, view = run_session(
            inst, witness, k=args.k, strategy=strategy, seed_verifier=seed + 2 * i, seed_prover=seed + 2 * i + 1
        )
        real_s.add(view.key())
        sim = simulate_sequential(inst, strategy, args.k, RandomSource(seed, "simulator", i), check=False)
        fake_s.add(sim.view.key())
    if args.table:
        print(report_table(real_s, fake_s))
    tv = tv_distance(real_s, fake_s)
    print(f"{format_tv(tv)} ({float(tv):.6f}, empirical over {args.samples} samples each)")
    return 0


def cmd_dcnm_run(args) -> int:
    inst = _load_instance(args.instance)
    if dcm_decide(inst, args.cap):
        raise PreconditionError("the non-membership protocol is for instances with s outside GH")
    transcript, view = dcnm_mod.run_dcnm(
        inst, args.k, seed_verifier=_seed(args.seed), transport=args.transport, cap=args.cap
    )
    print(f"verdict: {'ACCEPT' if transcript.verdict else 'REJECT'}")
    if args.transcript:
        _emit(transcript.to_text(), args.transcript)
        print(f"transcript: {args.transcript}")
    else:
        sys.stdout.write(transcript.to_text())
    _print_view(view)
    return 0


def cmd_dcnm_simulate(args) -> int:
    inst = _load_instance(args.instance)
    if args.exact:
        real = dcnm_mod.exact_dcnm_view_distribution(inst, "interaction", cap=args.cap)
        fake = dcnm_mod.exact_dcnm_view_distribution(inst, "simulator", cap=args.cap)
        if args.table:
            print(report_table(real, fake))
        print(format_tv(tv_distance(real, fake)))
        return 0
    view = dcnm_mod.simulate_dcnm_honest(inst, RandomSource(_seed(args.seed), "simulator", 0), cap=args.cap)
    _print_view(view)
    return 0


def cmd_reduce_gi(args) -> int:
    inst = reduce_gi(parse_graph(_read(args.graph_a)), parse_graph(_read(args.graph_b)))
    _emit(format_instance(inst), args.output)
    return 0


def cmd_soundness(args) -> int:
    _check_mode(args)
    inst = _load_instance(args.instance)
    cheater = optimal_cheating_prover(inst, args.cap)
    seed = _seed(args.seed)

    def session(i: int) -> bool:
        transcript, _ = run_session(
            inst, cheater, k=args.k, mode=args.mode, seed_verifier=seed + 2 * i, seed_prover=seed + 2 * i + 1
        )
        return transcript.verdict

    result = acceptance_rate(session, args.trials)
    expected = Fraction(1, 2**args.k)
    print(f"accepted: {result.accepted}/{result.trials}")
    print(f"rate: {result.rate:.6f} +/- {result.half_width:.6f} (3 sigma)")
    print(f"bound: {format_fraction(expected)}")
    return 0


# --- parser -----------------------------------------------------------------------


def _session_flags(p: argparse.ArgumentParser, seed_help: str = "seed (decimal or 0x hex; default: OS entropy)"):
    p.add_argument("instance")
    p.add_argument("--mode", choices=("atomic", "sequential", "parallel"), default="sequential")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--seed", help=seed_help)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcmzk", description="Zero-knowledge proofs for double coset membership.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("solve", help="decide s in GH and print a factorization")
    p.add_argument("instance")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_solve)

    for verb, func in (("prove", cmd_prove), ("verify", cmd_verify)):
        p = sub.add_parser(verb, help=f"run the {'prover' if verb == 'prove' else 'verifier'} end over TCP")
        _session_flags(p)
        where = p.add_mutually_exclusive_group(required=True)
        where.add_argument("--listen", metavar="HOST:PORT")
        where.add_argument("--connect", metavar="HOST:PORT")
        p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
        if verb == "verify":
            p.add_argument("--adversary", default="honest")
            p.add_argument("--seed-prover", help="prover seed to record in the transcript header")
            p.add_argument("--transcript", "-o")
        p.set_defaults(func=func)

    p = sub.add_parser("run", help="run both parties in this process")
    _session_flags(p)
    p.add_argument("--seed-verifier")
    p.add_argument("--seed-prover")
    p.add_argument("--adversary", default="honest")
    p.add_argument("--transport", choices=("threads", "lockstep", "socket"), default="threads")
    p.add_argument("--transcript", "-o")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("simulate", help="black-box simulation of a sequential session")
    p.add_argument("instance")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--adversary", default="honest")
    p.add_argument("--seed")
    p.add_argument("--restart-cap", type=int, default=64)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("zk-check", help="compare interaction and simulator view distributions")
    p.add_argument("instance")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--adversary", default="honest")
    how = p.add_mutually_exclusive_group()
    how.add_argument("--exact", action="store_true", help="exact enumeration (default)")
    how.add_argument("--samples", type=int)
    p.add_argument("--atomic-simulator", action="store_true", help="use the one-pass honest-verifier simulator")
    p.add_argument("--seed")
    p.add_argument("--table", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_zk_check)

    p = sub.add_parser("dcnm-run", help="run the non-membership protocol")
    p.add_argument("instance")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--seed")
    p.add_argument("--transport", choices=("threads", "lockstep", "socket"), default="threads")
    p.add_argument("--transcript", "-o")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_dcnm_run)

    p = sub.add_parser("dcnm-simulate", help="simulate the non-membership protocol")
    p.add_argument("instance")
    p.add_argument("--seed")
    p.add_argument("--exact", action="store_true", help="compare exact view distributions instead")
    p.add_argument("--table", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_dcnm_simulate)

    p = sub.add_parser("reduce-gi", help="turn a graph pair into an instance")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_reduce_gi)

    p = sub.add_parser("soundness", help="acceptance rate of the optimal cheating prover")
    _session_flags(p)
    p.add_argument("--cheater", choices=("optimal",), default="optimal")
    p.add_argument("--trials", type=int, default=10_000)
    p.set_defaults(func=cmd_soundness)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ResourceError, RestartCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except TransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
