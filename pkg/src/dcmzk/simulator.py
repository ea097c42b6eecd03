"""Simulators for the membership protocol, and exact view distributions.

Two simulators produce verifier views without the witness:

* :func:`simulate_atomic_honest` fakes one execution against the honest
  verifier in a single pass: pick the challenge first, then build a commit
  that can be opened for it.
* :func:`simulate_sequential` is a black-box simulator for any
  :class:`~dcmzk.protocol.VerifierStrategy` over the k-fold sequential
  composition.  It fixes the strategy's random string once, and for each
  stage guesses a branch ``a``, builds a commit openable for that branch,
  asks the strategy for its challenge and keeps the stage only if the
  challenge falls in the guessed branch (zero versus nonzero).  The commit
  is uniform on ``GH`` whatever ``a`` is, so each attempt succeeds with
  probability exactly 1/2.

:func:`exact_view_distribution` computes view distributions exactly, for the
real interaction and for either simulator, by walking every coin outcome.
"""

from __future__ import annotations

import functools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .dcm import DcmInstance, dcm_decide
from .errors import RequiresYesInstance, RestartCapExceeded, StateSpaceTooLarge
from .permgroup import DEFAULT_CAP, Permutation, _mul, uniform_sample
from .protocol import ProverWitness, VerifierStrategy, View, honest_strategy, run_session
from .randomness import EnumeratingSource, Tape, enumerate_outcomes
from .stats import ExactDistribution
from .wire import Commit, Response

DEFAULT_RESTART_CAP = 64
DEFAULT_MAX_STATES = 10**6


@dataclass(frozen=True)
class SimulatedView:
    view: View
    attempts_per_stage: tuple[int, ...]


@functools.lru_cache(maxsize=256)
def _is_yes(inst: DcmInstance, cap: int) -> bool:
    return dcm_decide(inst, cap)


def _require_yes(inst: DcmInstance, cap: int) -> None:
    if not _is_yes(inst, cap):
        raise RequiresYesInstance("simulators are defined on instances with s in GH only")


def _stage_commit(inst: DcmInstance, a: int, rng) -> tuple[Permutation, Permutation, Permutation]:
    g = uniform_sample(inst.G, rng)
    h = uniform_sample(inst.H, rng)
    left = _mul(g.images, inst.s.images) if a == 0 else g.images
    return Permutation._trusted(_mul(left, h.images)), g, h


def _stage_messages(t, g, h) -> tuple:
    return Commit((t,)), Response(((g, h),))


def simulate_atomic_honest(inst: DcmInstance, rng, cap: int = DEFAULT_CAP, check: bool = True) -> View:
    if check:
        _require_yes(inst, cap)
    b = rng.bits(1)
    t, g, h = _stage_commit(inst, b, rng)
    return View(str(b), _stage_messages(t, g, h))


def _attempt(inst: DcmInstance, vstar: VerifierStrategy, r: str, history: tuple, rng):
    """One simulated stage attempt; ``None`` when the guess missed."""
    a = rng.bits(1)
    t, g, h = _stage_commit(inst, a, rng)
    tape = Tape(r)
    b = vstar.behavior(inst, tape, history, t)
    if (b == 0) != (a == 0):
        return None
    return t, g, h, tape.high


def simulate_sequential(
    inst: DcmInstance,
    vstar: VerifierStrategy,
    k: int,
    rng,
    restart_cap: int = DEFAULT_RESTART_CAP,
    cap: int = DEFAULT_CAP,
    check: bool = True,
) -> SimulatedView:
    """Black-box simulation of ``k`` sequential executions against ``vstar``.

    The view's random string is the prefix of ``r`` that ``vstar`` read
    during the kept attempts; reads made only in discarded attempts do not
    count.
    """
    if check:
        _require_yes(inst, cap)
    q = vstar.randomness_bound
    r = format(rng.bits(q), f"0{q}b") if q else ""
    history: list = []
    messages: list = []
    attempts: list = []
    high = 0
    for stage in range(k):
        for n in range(1, restart_cap + 1):
            kept = _attempt(inst, vstar, r, tuple(history), rng)
            if kept is not None:
                break
        else:
            raise RestartCapExceeded(stage, restart_cap)
        t, g, h, used = kept
        high = max(high, used)
        history.append((t, (g, h)))
        messages.extend(_stage_messages(t, g, h))
        attempts.append(n)
    return SimulatedView(View(r[:high], tuple(messages)), tuple(attempts))


def stage_distribution(
    inst: DcmInstance, vstar: VerifierStrategy, r: str, history: tuple = ()
) -> dict[tuple, Fraction]:
    """Exact law of one kept stage ``(t, g, h, bits read)`` for a fixed random string.

    Attempts are independent and identically distributed, so the law of the
    kept attempt is the single-attempt law conditioned on success; restarts
    never need to be unrolled.
    """
    outcomes = enumerate_outcomes(lambda path: _attempt(inst, vstar, r, history, EnumeratingSource(path)))
    kept = {key: p for key, p in outcomes.items() if key is not None}
    z = sum(kept.values())
    if z == 0:
        raise RestartCapExceeded(len(history), 0)
    return {key: p / z for key, p in kept.items()}


def stage_success_probability(inst: DcmInstance, vstar: VerifierStrategy, r: str, history: tuple = ()) -> Fraction:
    outcomes = enumerate_outcomes(lambda path: _attempt(inst, vstar, r, history, EnumeratingSource(path)))
    return sum((p for key, p in outcomes.items() if key is not None), Fraction(0))


def _estimate_states(inst: DcmInstance, k: int) -> int:
    return (inst.G.order * inst.H.order * 2) ** k


def _sequential_simulator_distribution(inst, vstar, k, max_states) -> dict[bytes, Fraction]:
    q = vstar.randomness_bound
    dist: dict[bytes, Fraction] = defaultdict(Fraction)
    for rv in range(1 << q):
        r = format(rv, f"0{q}b") if q else ""
        states = [((), (), 0, Fraction(1, 1 << q))]
        for _ in range(k):
            grown = []
            for history, messages, high, p in states:
                for (t, g, h, used), pr in stage_distribution(inst, vstar, r, history).items():
                    grown.append(
                        (history + ((t, (g, h)),), messages + _stage_messages(t, g, h), max(high, used), p * pr)
                    )
            states = grown
            if len(states) > max_states:
                raise StateSpaceTooLarge(len(states), max_states)
        for _, messages, high, p in states:
            dist[View(r[:high], messages).key()] += p
    return dict(dist)


def exact_view_distribution(
    inst: DcmInstance,
    mode: str = "interaction",
    strategy: VerifierStrategy | None = None,
    k: int = 1,
    max_states: int = DEFAULT_MAX_STATES,
    cap: int = DEFAULT_CAP,
) -> ExactDistribution:
    """Exact distribution of the verifier's view, keyed by :meth:`View.key`.

    ``mode`` is ``"interaction"`` (honest prover against ``strategy`` over
    ``k`` sequential executions), ``"simulator"`` (:func:`simulate_sequential`)
    or ``"atomic-simulator"`` (:func:`simulate_atomic_honest`, ``k = 1``).
    """
    states = _estimate_states(inst, k)
    if states > max_states:
        raise StateSpaceTooLarge(states, max_states)
    strategy = strategy or honest_strategy(k)
    if mode == "interaction":
        witness = ProverWitness.for_instance(inst, cap)

        def experiment(path):
            _, view = run_session(
                inst,
                witness,
                k=k,
                strategy=strategy,
                prover_rngs=lambda i: EnumeratingSource(path),
                verifier_rng=EnumeratingSource(path, bitwise=True),
            )
            return view.key()

        return ExactDistribution(enumerate_outcomes(experiment, max_states))
    _require_yes(inst, cap)
    if mode == "atomic-simulator":
        if k != 1:
            raise ValueError("the honest-verifier simulator covers one execution")
        return ExactDistribution(
            enumerate_outcomes(
                lambda path: simulate_atomic_honest(inst, EnumeratingSource(path), check=False).key(), max_states
            )
        )
    if mode == "simulator":
        return ExactDistribution(_sequential_simulator_distribution(inst, strategy, k, max_states))
    raise ValueError(f"unknown mode {mode!r}")
