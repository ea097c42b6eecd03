from collections import Counter
from fractions import Fraction

import pytest

from dcmzk.dcm import product_table
from dcmzk.errors import RequiresYesInstance, RestartCapExceeded, StateSpaceTooLarge
from dcmzk.permgroup import symmetric_group
from dcmzk.protocol import VerifierStrategy, adversary_zoo, constant_strategy, honest_strategy
from dcmzk.randomness import EnumeratingSource, RandomSource, enumerate_outcomes
from dcmzk.simulator import (
    _stage_commit,
    exact_view_distribution,
    simulate_atomic_honest,
    simulate_sequential,
    stage_distribution,
    stage_success_probability,
)
from dcmzk.stats import tv_distance
from dcmzk.wire import Commit

from helpers import SHARED_YES, TINY_NO, TINY_YES, TRIVIAL_YES, cyc, instance


def test_atomic_simulator_trivial_groups():
    # trivial G and H force s = e, so both branches commit to s = e
    def exp(path):
        view = simulate_atomic_honest(TRIVIAL_YES, EnumeratingSource(path))
        return view.consumed_randomness, view.messages[0].t[0]

    e = TRIVIAL_YES.s
    assert enumerate_outcomes(exp) == {("0", e): Fraction(1, 2), ("1", e): Fraction(1, 2)}


def test_atomic_simulator_single_pass_and_accounting():
    view = simulate_atomic_honest(TINY_YES, RandomSource(3))
    assert len(view.consumed_randomness) == 1
    assert len(view.messages) == 2


def test_atomic_simulator_rejects_no_instances():
    with pytest.raises(RequiresYesInstance):
        simulate_atomic_honest(TINY_NO, RandomSource(1))
    with pytest.raises(RequiresYesInstance):
        simulate_sequential(TINY_NO, honest_strategy(1), 1, RandomSource(1))


@pytest.mark.parametrize("inst", [TINY_YES, SHARED_YES, TRIVIAL_YES])
def test_atomic_perfect_zk(inst):
    real = exact_view_distribution(inst, "interaction")
    assert sum(real.outcomes.values()) == 1
    assert real == exact_view_distribution(inst, "atomic-simulator")
    assert real == exact_view_distribution(inst, "simulator")


@pytest.mark.parametrize("k", [1, 2])
def test_black_box_perfect_zk_for_zoo(k):
    for inst in (TINY_YES, SHARED_YES):
        for strat in adversary_zoo(k):
            real = exact_view_distribution(inst, "interaction", strat, k)
            fake = exact_view_distribution(inst, "simulator", strat, k)
            assert tv_distance(real, fake) == 0, strat.name


def test_comparison_is_sensitive():
    # a simulator that forgets to trim r to its used prefix is caught
    real = exact_view_distribution(TINY_YES, "interaction", constant_strategy(0), 1)
    wrong = exact_view_distribution(TINY_YES, "interaction", honest_strategy(1), 1)
    assert tv_distance(real, wrong) > 0


def test_stage_acceptance_is_exactly_half():
    for strat in adversary_zoo(2):
        q = strat.randomness_bound
        for rv in range(1 << q):
            r = format(rv, f"0{q}b") if q else ""
            assert stage_success_probability(SHARED_YES, strat, r) == Fraction(1, 2)


def test_stage_law_uniform_on_openings():
    # for fixed r the kept (t, g, h) is uniform over the openings the challenge permits
    for strat in adversary_zoo(1):
        q = strat.randomness_bound
        for rv in range(1 << q):
            r = format(rv, f"0{q}b") if q else ""
            law = stage_distribution(TINY_YES, strat, r)
            assert len(set(law.values())) == 1
            assert sum(law.values()) == 1


def test_branch_guess_independent_of_commit():
    def exp(path):
        src = EnumeratingSource(path)
        a = src.bits(1)
        return a, _stage_commit(TINY_YES, a, src)[0]

    dist = enumerate_outcomes(exp)
    gh = {row[0] for row in product_table(TINY_YES)}
    for a in (0, 1):
        assert {t for (x, t) in dist if x == a} == gh
    assert set(dist.values()) == {Fraction(1, 8)}


def test_used_prefix_excludes_failed_attempts():
    # reads the whole tape only when t is the identity, and then answers nonzero
    def greedy(inst, tape, history, t):
        if t.is_identity():
            tape[7]
            return 1
        return 0

    strat = VerifierStrategy("greedy", greedy, 8)
    for seed in range(40):
        sim = simulate_sequential(TINY_YES, strat, 1, RandomSource(seed))
        (commit, _resp) = sim.view.messages
        expected = 8 if commit.t[0].is_identity() else 0
        assert len(sim.view.consumed_randomness) == expected


def test_mean_attempts_about_two():
    attempts = []
    for seed in range(3000):
        attempts += simulate_sequential(SHARED_YES, honest_strategy(4), 4, RandomSource(seed, "sim")).attempts_per_stage
    mean = sum(attempts) / len(attempts)
    assert 1.9 <= mean <= 2.1
    assert min(attempts) >= 1


def test_restart_cap():
    never = VerifierStrategy("never", lambda inst, tape, history, t: 0, 0)
    # the kept condition fails whenever a = 1, so a cap of one attempt trips quickly
    with pytest.raises(RestartCapExceeded):
        for seed in range(64):
            simulate_sequential(TINY_YES, never, 4, RandomSource(seed), restart_cap=1)


def test_state_space_guard():
    big = instance(cyc(5, (0, 1)), symmetric_group(5), symmetric_group(5))
    with pytest.raises(StateSpaceTooLarge):
        exact_view_distribution(big, "interaction", k=3)


def test_simulated_messages_are_commit_response_pairs():
    sim = simulate_sequential(TINY_YES, honest_strategy(3), 3, RandomSource(5))
    assert len(sim.attempts_per_stage) == 3
    kinds = Counter(type(m).__name__ for m in sim.view.messages)
    assert kinds == {"Commit": 3, "Response": 3}
    assert isinstance(sim.view.messages[0], Commit)
