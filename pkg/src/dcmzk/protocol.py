"""The three-round public-coin proof of ``s in GH`` and its compositions.

One atomic execution:

1. the prover draws uniform ``g in G``, ``h in H`` and commits to ``t = g s h``;
2. the verifier answers with a challenge byte ``b`` (one fresh random bit
   when honest);
3. for ``b = 0`` the prover opens ``(g, h)`` and the verifier checks
   ``t = g s h``; for any nonzero ``b`` it sends ``(g g0, h0 h)`` where
   ``s = g0 h0`` and the verifier checks ``t = g1 h1``.  Both branches also
   check membership of the two factors.

A commit that is not a permutation of the instance's degree makes the
verifier stop and accept that execution.  That is the prescribed behaviour,
odd as it looks: such a commit can only come from a cheating prover.

Sequential composition repeats the atomic protocol ``k`` times with fresh
prover streams and accepts iff every execution accepted.  Parallel
composition bundles the ``k`` copies of each message into one frame, so a
session has exactly three prover/verifier rounds plus the final verdict.
Every session ends with a :class:`~dcmzk.wire.Verdict` frame from the
verifier; in a sequential session an execution stopped early by a malformed
commit is closed by an extra ``Verdict(accept=True)`` in place of its
challenge.
"""

from __future__ import annotations

import functools
import struct
from dataclasses import dataclass
from typing import Callable

from .channel import RECV, run_lockstep, run_socketpair, run_threaded
from .dcm import DcmInstance, Factorization, dcm_decide, dcm_factorize
from .errors import ParseError, RequiresNoInstance
from .formats import instance_digest
from .permgroup import DEFAULT_CAP, Permutation, _mul, uniform_sample
from .randomness import RandomSource, Tape, split
from .wire import (
    Challenge,
    Commit,
    Message,
    Response,
    Verdict,
    encode_frame,
    format_message,
    parse_message,
)


@dataclass(frozen=True)
class ProverWitness:
    factorization: Factorization

    @classmethod
    def for_instance(cls, inst: DcmInstance, cap: int = DEFAULT_CAP) -> "ProverWitness":
        """Find a factorization with the brute-force oracle.

        Raises ``OrderExceedsCap`` when the instance is too large for it and
        ``NotInDoubleCoset`` on a NO instance.
        """
        return cls(dcm_factorize(inst, cap))


@dataclass(frozen=True)
class View:
    """What the verifier saw: the random bits it read and the messages it received."""

    consumed_randomness: str
    messages: tuple[Message, ...]

    def key(self) -> bytes:
        """Canonical bytes; equal views and only equal views share a key."""
        bits = self.consumed_randomness
        packed = int(bits, 2).to_bytes((len(bits) + 7) // 8, "big") if bits else b""
        return struct.pack(">I", len(bits)) + packed + b"".join(map(encode_frame, self.messages))


@dataclass(frozen=True)
class Transcript:
    instance_digest: str
    mode: str
    seed_verifier: int | None
    seed_prover: int | None
    rounds: tuple[tuple[str, Message], ...]
    verdict: bool

    def to_text(self) -> str:
        lines = [
            f"instance-digest: {self.instance_digest}",
            f"seed-verifier: {_hex_seed(self.seed_verifier)}",
            f"seed-prover: {_hex_seed(self.seed_prover)}",
            f"mode: {self.mode}",
        ]
        lines += [f"{who}: {format_message(msg)}" for who, msg in self.rounds]
        lines.append(f"result: {'ACCEPT' if self.verdict else 'REJECT'}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Transcript":
        header: dict[str, str] = {}
        rounds = []
        verdict = None
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, rest = line.partition(": ")
            if key in ("P", "V"):
                rounds.append((key, parse_message(rest)))
            elif key == "result":
                verdict = rest.strip() == "ACCEPT"
            else:
                header[key] = rest.strip()
        for key in ("instance-digest", "seed-verifier", "seed-prover", "mode"):
            if key not in header:
                raise ParseError(f"transcript missing {key!r}")
        if verdict is None:
            raise ParseError("transcript missing result line")
        return cls(
            header["instance-digest"],
            header["mode"],
            _unhex_seed(header["seed-verifier"]),
            _unhex_seed(header["seed-prover"]),
            tuple(rounds),
            verdict,
        )


def _hex_seed(seed: int | None) -> str:
    return "-" if seed is None else format(seed, "x")


def _unhex_seed(text: str) -> int | None:
    return None if text == "-" else int(text, 16)


@dataclass(frozen=True)
class VerifierStrategy:
    """A (possibly cheating) verifier, reduced to how it picks challenges.

    ``behavior(inst, tape, history, t)`` returns the challenge byte for the
    current execution.  ``history`` holds one ``(t, (x, y))`` entry per
    finished execution (``None`` where a message was malformed) and ``tape``
    is the verifier's random string of ``randomness_bound`` bits.  It must
    be a pure function of its arguments.
    """

    name: str
    behavior: Callable[[DcmInstance, Tape, tuple, Permutation], int]
    randomness_bound: int


def honest_strategy(k: int = 1) -> VerifierStrategy:
    return VerifierStrategy("honest", lambda inst, tape, history, t: tape[len(history)], k)


def constant_strategy(value: int) -> VerifierStrategy:
    return VerifierStrategy(f"constant-{value}", lambda inst, tape, history, t: value, 0)


def first_bit_strategy() -> VerifierStrategy:
    return VerifierStrategy("first-bit", lambda inst, tape, history, t: t.images[0] & 1, 0)


def echo_strategy(k: int) -> VerifierStrategy:
    """Reads one of two tape bits depending on ``t`` and answers 0 or the non-bit 2."""

    def behavior(inst, tape, history, t):
        return 2 * tape[2 * len(history) + (t.images[0] & 1)]

    return VerifierStrategy("echo", behavior, 2 * k)


def adversary_zoo(k: int) -> list[VerifierStrategy]:
    return [
        honest_strategy(k),
        constant_strategy(0),
        constant_strategy(1),
        first_bit_strategy(),
        echo_strategy(k),
    ]


def strategy_by_name(name: str, k: int) -> VerifierStrategy:
    for strat in adversary_zoo(k):
        if strat.name == name:
            return strat
    raise ValueError(f"unknown verifier strategy {name!r}")


# --- atomic operations -------------------------------------------------------


def commit_ok(inst: DcmInstance, t) -> bool:
    return isinstance(t, Permutation) and t.degree == inst.degree


def prover_commit(inst: DcmInstance, witness: ProverWitness, rng) -> tuple[Commit, tuple]:
    g = uniform_sample(inst.G, rng)
    h = uniform_sample(inst.H, rng)
    t = Permutation._trusted(_mul(_mul(g.images, inst.s.images), h.images))
    return Commit((t,)), (g, h)


def verifier_challenge(inst: DcmInstance, commit: Message, rng) -> Challenge | Verdict:
    if not (isinstance(commit, Commit) and len(commit.t) == 1 and commit_ok(inst, commit.t[0])):
        return Verdict(True)
    return Challenge(bytes([rng.bits(1)]))


def challenge_value(msg: Message) -> int:
    """Integer value of a challenge; anything unreadable counts as nonzero."""
    if isinstance(msg, Challenge):
        return int.from_bytes(msg.b, "big")
    if isinstance(msg, int):
        return msg
    return 1


def prover_respond(inst: DcmInstance, witness: ProverWitness, hidden: tuple, challenge) -> Response:
    return Response((HonestProver(inst, witness).respond(hidden, challenge_value(challenge)),))


def slot_accepts(inst: DcmInstance, t: Permutation, b: int, x, y) -> bool:
    m = inst.degree
    if not (isinstance(x, Permutation) and isinstance(y, Permutation)):
        return False
    if x.degree != m or y.degree != m:
        return False
    if not (inst.G.contains_images(x.images) and inst.H.contains_images(y.images)):
        return False
    left = _mul(x.images, inst.s.images) if b == 0 else x.images
    return _mul(left, y.images) == t.images


def verifier_check(inst: DcmInstance, commit: Commit, challenge, response: Message) -> Verdict:
    t = commit.t[0]
    if not (isinstance(response, Response) and len(response.pairs) == 1):
        return Verdict(False)
    x, y = response.pairs[0]
    return Verdict(slot_accepts(inst, t, challenge_value(challenge), x, y))


# --- provers -------------------------------------------------------------------


class HonestProver:
    def __init__(self, inst: DcmInstance, witness: ProverWitness):
        self.inst = inst
        self.g0 = witness.factorization.g0.images
        self.h0 = witness.factorization.h0.images

    def commit(self, rng) -> tuple[Permutation, tuple]:
        commit, hidden = prover_commit(self.inst, None, rng)
        return commit.t[0], hidden

    def respond(self, hidden: tuple, b: int) -> tuple[Permutation, Permutation]:
        g, h = hidden
        if b == 0:
            return g, h
        return (
            Permutation._trusted(_mul(g.images, self.g0)),
            Permutation._trusted(_mul(self.h0, h.images)),
        )


class OptimalCheatingProver:
    """Commits to ``t = gh`` and always opens ``(g, h)``.

    On a NO instance this passes every nonzero challenge and fails every
    zero challenge, which is the best any prover can do there.
    """

    def __init__(self, inst: DcmInstance, cap: int = DEFAULT_CAP, check: bool = True):
        if check and dcm_decide(inst, cap):
            raise RequiresNoInstance("the cheating prover is for instances with s not in GH")
        self.inst = inst

    def commit(self, rng) -> tuple[Permutation, tuple]:
        g = uniform_sample(self.inst.G, rng)
        h = uniform_sample(self.inst.H, rng)
        return Permutation._trusted(_mul(g.images, h.images)), (g, h)

    def respond(self, hidden: tuple, b: int) -> tuple[Permutation, Permutation]:
        return hidden


def optimal_cheating_prover(inst: DcmInstance, cap: int = DEFAULT_CAP) -> OptimalCheatingProver:
    return OptimalCheatingProver(inst, cap)


# --- parties --------------------------------------------------------------------


@dataclass(frozen=True)
class SessionOutcome:
    accept: bool
    rounds: tuple[tuple[str, Message], ...]
    view: View


def _tape(rng, q: int) -> Tape:
    return Tape(format(rng.bits(q), f"0{q}b") if q else "")


def _single_commit(inst: DcmInstance, msg: Message):
    if isinstance(msg, Commit) and len(msg.t) == 1 and commit_ok(inst, msg.t[0]):
        return msg.t[0]
    return None


def verifier_party(inst: DcmInstance, strategy: VerifierStrategy, k: int, rng):
    """Verifier of the k-fold sequential composition (``k = 1``: atomic)."""
    tape = _tape(rng, strategy.randomness_bound)
    rounds: list = []
    seen: list = []
    history: list = []
    accept = True
    for _ in range(k):
        msg = yield RECV
        rounds.append(("P", msg))
        seen.append(msg)
        t = _single_commit(inst, msg)
        if t is None:
            closing = Verdict(True)
            yield closing
            rounds.append(("V", closing))
            history.append((None, None))
            continue
        b = strategy.behavior(inst, tape, tuple(history), t)
        challenge = Challenge(bytes([b]))
        yield challenge
        rounds.append(("V", challenge))
        resp = yield RECV
        rounds.append(("P", resp))
        seen.append(resp)
        if isinstance(resp, Response) and len(resp.pairs) == 1:
            pair = resp.pairs[0]
            ok = slot_accepts(inst, t, b, *pair)
        else:
            pair, ok = None, False
        accept = accept and ok
        history.append((t, pair))
    final = Verdict(accept)
    yield final
    rounds.append(("V", final))
    return SessionOutcome(accept, tuple(rounds), View(tape.used(), tuple(seen)))


def parallel_verifier_party(inst: DcmInstance, k: int, rng):
    """Honest verifier of the k-fold parallel composition."""
    tape = _tape(rng, k)
    rounds: list = []
    msg = yield RECV
    rounds.append(("P", msg))
    seen = [msg]
    if not (isinstance(msg, Commit) and len(msg.t) == k):
        final = Verdict(True)
        yield final
        rounds.append(("V", final))
        return SessionOutcome(True, tuple(rounds), View(tape.used(), tuple(seen)))
    ts = msg.t
    bs = bytes(tape[i] for i in range(k))
    challenge = Challenge(bs)
    yield challenge
    rounds.append(("V", challenge))
    resp = yield RECV
    rounds.append(("P", resp))
    seen.append(resp)
    pairs = resp.pairs if isinstance(resp, Response) and len(resp.pairs) == k else None
    accept = True
    for i, t in enumerate(ts):
        if not commit_ok(inst, t):
            continue
        if pairs is None or not slot_accepts(inst, t, bs[i], *pairs[i]):
            accept = False
    final = Verdict(accept)
    yield final
    rounds.append(("V", final))
    return SessionOutcome(accept, tuple(rounds), View(tape.used(), tuple(seen)))


def prover_party(prover, k: int, rngs: Callable[[int], object], parallel: bool = False):
    """Prover side for either composition; ``prover`` supplies commit/respond."""
    if parallel:
        committed = [prover.commit(rngs(i)) for i in range(k)]
        yield Commit(tuple(t for t, _ in committed))
        msg = yield RECV
        if isinstance(msg, Verdict):
            return msg.accept
        bs = msg.b if isinstance(msg, Challenge) else b""
        yield Response(
            tuple(prover.respond(hidden, bs[i] if i < len(bs) else 1) for i, (_, hidden) in enumerate(committed))
        )
    else:
        for i in range(k):
            t, hidden = prover.commit(rngs(i))
            yield Commit((t,))
            msg = yield RECV
            if isinstance(msg, Verdict):
                continue
            yield Response((prover.respond(hidden, challenge_value(msg)),))
    final = yield RECV
    return isinstance(final, Verdict) and final.accept


# --- sessions -------------------------------------------------------------------

TRANSPORTS: dict[str, Callable] = {
    "lockstep": run_lockstep,
    "threads": run_threaded,
    "socket": run_socketpair,
}


@functools.lru_cache(maxsize=256)
def _digest(inst: DcmInstance) -> str:
    return instance_digest(inst)


def _as_prover(inst: DcmInstance, prover):
    if isinstance(prover, ProverWitness):
        return HonestProver(inst, prover)
    if isinstance(prover, Factorization):
        return HonestProver(inst, ProverWitness(prover))
    return prover


def run_session(
    inst: DcmInstance,
    prover,
    *,
    k: int = 1,
    mode: str = "sequential",
    strategy: VerifierStrategy | None = None,
    seed_verifier: int = 0,
    seed_prover: int = 0,
    transport: str | Callable = "lockstep",
    prover_rngs: Callable[[int], object] | None = None,
    verifier_rng=None,
) -> tuple[Transcript, View]:
    """Run one session of the atomic protocol or one of its compositions.

    ``prover`` is a :class:`ProverWitness` (honest prover) or any object with
    ``commit(rng)`` and ``respond(hidden, b)``.  Prover stream ``i`` is keyed
    by ``(seed_prover, "prover", i)``; the verifier reads one random string
    keyed by ``(seed_verifier, "verifier", 0)``.  Both can be overridden
    (exact enumeration does that).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if mode not in ("atomic", "sequential", "parallel"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "atomic" and k != 1:
        raise ValueError("atomic mode runs exactly one execution")
    runner = TRANSPORTS[transport] if isinstance(transport, str) else transport
    prover_rngs = prover_rngs or split(seed_prover, "prover")
    verifier_rng = verifier_rng or RandomSource(seed_verifier, "verifier", 0)
    parallel = mode == "parallel"
    if parallel:
        if strategy is not None and strategy.name != "honest":
            raise ValueError("the parallel composition is only run against the honest verifier")
        v_party = parallel_verifier_party(inst, k, verifier_rng)
    else:
        v_party = verifier_party(inst, strategy or honest_strategy(k), k, verifier_rng)
    p_party = prover_party(_as_prover(inst, prover), k, prover_rngs, parallel)
    _, outcome = runner(p_party, v_party)
    label = "atomic" if mode == "atomic" else f"{mode}:{k}"
    transcript = Transcript(
        _digest(inst), label, seed_verifier, seed_prover, outcome.rounds, outcome.accept
    )
    return transcript, outcome.view


def run_atomic(inst: DcmInstance, prover, strategy: VerifierStrategy | None = None, **kw):
    return run_session(inst, prover, k=1, mode="atomic", strategy=strategy, **kw)


def run_sequential(inst: DcmInstance, prover, k: int, strategy: VerifierStrategy | None = None, **kw):
    return run_session(inst, prover, k=k, mode="sequential", strategy=strategy, **kw)


def run_parallel(inst: DcmInstance, prover, k: int, **kw):
    return run_session(inst, prover, k=k, mode="parallel", **kw)


def verifier_messages(transcript: Transcript) -> list[Message]:
    return [msg for who, msg in transcript.rounds if who == "V"]


def public_coin_holds(transcript: Transcript, view: View, bits_per_challenge: int = 1) -> bool:
    """Honest-verifier check: the challenges, read as bits, spell a prefix of the used randomness.

    Closing verdicts are not challenges and are skipped.
    """
    bits = []
    for msg in verifier_messages(transcript):
        if isinstance(msg, Challenge):
            bits.extend(format(b, f"0{bits_per_challenge}b") for b in msg.b)
    spelled = "".join(bits)
    return view.consumed_randomness.startswith(spelled)
