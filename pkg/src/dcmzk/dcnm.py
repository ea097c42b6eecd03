"""Two-round proof that ``s`` is *not* in ``GH``.

The verifier flips a bit ``b`` and sends ``t = gh`` (``b = 0``) or
``t = gsh`` (``b = 1``) for uniform ``g in G``, ``h in H``.  The prover
answers ``a = 0`` iff ``t in GH`` and the verifier accepts iff ``a = b``.
On a NO instance the two cases are told apart perfectly.  On a YES instance
``t`` is uniform on ``GH`` whatever ``b`` is, so no answer rule beats 1/2.

Unlike the membership protocol this one is not public-coin: ``b`` stays
hidden inside ``t``.  The view is the verifier's consumed bits (its first
bit is ``b``, the rest feed the two uniform samples, rejected draws
included) together with the probe and the answer.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .channel import RECV
from .dcm import DcmInstance, dcm_decide, product_table
from .errors import RequiresNoInstance, RequiresYesInstance
from .permgroup import DEFAULT_CAP, Permutation, _mul, uniform_sample
from .protocol import TRANSPORTS, SessionOutcome, Transcript, View, _digest
from .randomness import EnumeratingSource, RandomSource, enumerate_outcomes
from .stats import ExactDistribution
from .wire import Answer, Probe, Verdict


@dataclass(frozen=True)
class DcnmChallenge:
    t: Permutation
    b: int
    g: Permutation
    h: Permutation


def dcnm_verifier_probe(inst: DcmInstance, rng) -> DcnmChallenge:
    b = rng.bits(1)
    g = uniform_sample(inst.G, rng)
    h = uniform_sample(inst.H, rng)
    left = _mul(g.images, inst.s.images) if b else g.images
    return DcnmChallenge(Permutation._trusted(_mul(left, h.images)), b, g, h)


@functools.lru_cache(maxsize=4096)
def dcnm_prover_answer(inst: DcmInstance, t: Permutation, cap: int = DEFAULT_CAP) -> int:
    return 0 if dcm_decide(inst.with_s(t), cap) else 1


def dcnm_verdict(b: int, a: int) -> Verdict:
    return Verdict(a == b)


def simulate_dcnm_honest(inst: DcmInstance, rng, cap: int = DEFAULT_CAP, check: bool = True) -> View:
    if check and dcm_decide(inst, cap):
        raise RequiresNoInstance("the non-membership simulator needs s outside GH")
    challenge = dcnm_verifier_probe(inst, rng)
    return View(rng.bitstring(), (Probe(challenge.t), Answer(challenge.b)))


# --- parties and sessions -------------------------------------------------------


def dcnm_verifier_party(inst: DcmInstance, k: int, rng):
    rounds: list = []
    seen: list = []
    accept = True
    for _ in range(k):
        challenge = dcnm_verifier_probe(inst, rng)
        probe = Probe(challenge.t)
        yield probe
        rounds.append(("V", probe))
        msg = yield RECV
        rounds.append(("P", msg))
        seen += [probe, msg]
        a = msg.a if isinstance(msg, Answer) else None
        accept = accept and a == challenge.b
    final = Verdict(accept)
    yield final
    rounds.append(("V", final))
    return SessionOutcome(accept, tuple(rounds), View(rng.bitstring(), tuple(seen)))


def dcnm_prover_party(answer: Callable[[Permutation], int], k: int):
    for _ in range(k):
        msg = yield RECV
        yield Answer(answer(msg.t) if isinstance(msg, Probe) else 1)
    final = yield RECV
    return isinstance(final, Verdict) and final.accept


def honest_answer(inst: DcmInstance, cap: int = DEFAULT_CAP) -> Callable[[Permutation], int]:
    return lambda t: dcnm_prover_answer(inst, t, cap)


def table_answer(table: Mapping[Permutation, int], default: int = 1) -> Callable[[Permutation], int]:
    return lambda t: table.get(t, default)


def run_dcnm(
    inst: DcmInstance,
    k: int = 1,
    answer: Callable[[Permutation], int] | None = None,
    seed_verifier: int = 0,
    transport: str | Callable = "lockstep",
    verifier_rng=None,
    cap: int = DEFAULT_CAP,
) -> tuple[Transcript, View]:
    """One session of ``k`` sequential probes; the honest prover answers by brute force."""
    if k < 1:
        raise ValueError("k must be >= 1")
    runner = TRANSPORTS[transport] if isinstance(transport, str) else transport
    rng = verifier_rng or RandomSource(seed_verifier, "verifier", 0)
    answer = answer or honest_answer(inst, cap)
    _, outcome = runner(dcnm_prover_party(answer, k), dcnm_verifier_party(inst, k, rng))
    transcript = Transcript(_digest(inst), f"dcnm:{k}", seed_verifier, None, outcome.rounds, outcome.accept)
    return transcript, outcome.view


# --- exact analysis ---------------------------------------------------------------


def exact_dcnm_view_distribution(
    inst: DcmInstance, mode: str = "interaction", max_rejections: int = 3, cap: int = DEFAULT_CAP
) -> ExactDistribution:
    """Exact view law over the verifier's bit-level coins.

    Coin paths with more than ``max_rejections`` consecutive rejected draws
    in one sample are cut off and pooled under :data:`~dcmzk.randomness.TAIL`;
    both modes draw identically so the pooled masses agree.
    """
    if mode == "interaction":
        answer = honest_answer(inst, cap)

        def experiment(path):
            src = EnumeratingSource(path, bitwise=True, max_rejections=max_rejections)
            return run_dcnm(inst, 1, answer, verifier_rng=src)[1].key()

    elif mode == "simulator":
        if dcm_decide(inst, cap):
            raise RequiresNoInstance("the non-membership simulator needs s outside GH")

        def experiment(path):
            src = EnumeratingSource(path, bitwise=True, max_rejections=max_rejections)
            return simulate_dcnm_honest(inst, src, check=False).key()

    else:
        raise ValueError(f"unknown mode {mode!r}")
    return ExactDistribution(enumerate_outcomes(experiment))


def exact_acceptance(
    inst: DcmInstance, answer: Callable[[Permutation], int] | None = None, k: int = 1, cap: int = DEFAULT_CAP
) -> Fraction:
    """Exact probability that the verifier accepts after ``k`` probes."""
    answer = answer or honest_answer(inst, cap)

    def experiment(path):
        return run_dcnm(inst, k, answer, verifier_rng=EnumeratingSource(path))[0].verdict

    return enumerate_outcomes(experiment).get(True, Fraction(0))


def probe_distribution(inst: DcmInstance) -> dict[tuple[int, Permutation], Fraction]:
    """Exact joint law of ``(b, t)`` for one probe."""

    def experiment(path):
        c = dcnm_verifier_probe(inst, EnumeratingSource(path))
        return c.b, c.t

    return enumerate_outcomes(experiment)


def cheater_ceiling(inst: DcmInstance, cap: int = DEFAULT_CAP, max_support: int = 16) -> tuple[Fraction, dict]:
    """Best acceptance over every deterministic answer table on a YES instance.

    Tables range over all 0/1 labellings of the probes that can occur
    (``GH`` and ``GsH``, one set on a YES instance).  Returns the maximum
    and one table attaining it.
    """
    if not dcm_decide(inst, cap):
        raise RequiresYesInstance("the cheating ceiling is measured on instances with s in GH")
    joint = probe_distribution(inst)
    probes = sorted({t for _, t in joint})
    if len(probes) > max_support:
        raise ValueError(f"{len(probes)} probes give too many answer tables")
    best, best_table = Fraction(-1), {}
    for labels in itertools.product((0, 1), repeat=len(probes)):
        table = dict(zip(probes, labels))
        p = sum((pr for (b, t), pr in joint.items() if table[t] == b), Fraction(0))
        if p > best:
            best, best_table = p, table
    return best, best_table


def gh_set(inst: DcmInstance, cap: int = DEFAULT_CAP) -> set[Permutation]:
    return {row[0] for row in product_table(inst, cap=cap)}
