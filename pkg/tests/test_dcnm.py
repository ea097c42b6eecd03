import random
from fractions import Fraction

import pytest

from dcmzk.dcm import product_table
from dcmzk.dcnm import (
    cheater_ceiling,
    dcnm_prover_answer,
    dcnm_verdict,
    dcnm_verifier_probe,
    exact_acceptance,
    exact_dcnm_view_distribution,
    probe_distribution,
    run_dcnm,
    simulate_dcnm_honest,
    table_answer,
)
from dcmzk.errors import RequiresNoInstance, RequiresYesInstance
from dcmzk.permgroup import Permutation
from dcmzk.randomness import TAIL, RandomSource
from dcmzk.stats import tv_distance
from dcmzk.wire import Answer, Probe, Verdict

from helpers import TINY_NO, TINY_YES, cyc, gens, instance, random_instance


def test_probe_trivial_groups():
    s = cyc(3, (0, 2))
    inst = instance(s, gens(3), gens(3))
    for seed in range(20):
        c = dcnm_verifier_probe(inst, RandomSource(seed))
        assert c.t == (s if c.b else Permutation.identity(3))


def test_probe_on_yes_is_independent_of_b():
    joint = probe_distribution(TINY_YES)
    gh = {row[0] for row in product_table(TINY_YES)}
    for b in (0, 1):
        assert {t for (x, t) in joint if x == b} == gh
    assert set(joint.values()) == {Fraction(1, 8)}


def test_probe_on_no_separates_b():
    gh = {row[0] for row in product_table(TINY_NO)}
    for (b, t) in probe_distribution(TINY_NO):
        assert (t in gh) == (b == 0)


def test_prover_answer_and_verdict():
    assert dcnm_prover_answer(TINY_NO, Permutation.identity(3)) == 0
    assert dcnm_prover_answer(TINY_NO, TINY_NO.s) == 1
    assert dcnm_verdict(1, 1) == Verdict(True)
    assert dcnm_verdict(0, 1) == Verdict(False)


def test_completeness_exact_on_no_instances():
    rng = random.Random(2)
    for inst in [TINY_NO] + [random_instance(rng, rng.randint(3, 5), 12, yes=False) for _ in range(8)]:
        assert exact_acceptance(inst) == 1
        assert exact_acceptance(inst, k=2) == 1


def test_cheater_ceiling_half():
    best, table = cheater_ceiling(TINY_YES)
    assert best == Fraction(1, 2)
    assert exact_acceptance(TINY_YES, table_answer(table), k=3) == Fraction(1, 8)
    with pytest.raises(RequiresYesInstance):
        cheater_ceiling(TINY_NO)


def test_simulator_matches_interaction():
    for inst in (TINY_NO, instance(cyc(3, (0, 1)), gens(3, cyc(3, (0, 1, 2))), gens(3))):
        real = exact_dcnm_view_distribution(inst, "interaction")
        fake = exact_dcnm_view_distribution(inst, "simulator")
        assert tv_distance(real, fake) == 0
    # |G| = 3 needs rejection sampling, so some mass is cut off; both sides agree on it
    assert real[TAIL] > 0 and real[TAIL] == fake[TAIL]


def test_simulator_accounting():
    for seed in range(30):
        rng = RandomSource(seed)
        view = simulate_dcnm_honest(TINY_NO, rng)
        assert view.consumed_randomness == rng.bitstring()
        # b, then one bit per order-2 group
        assert len(view.consumed_randomness) == 3
        probe, answer = view.messages
        assert isinstance(probe, Probe) and answer == Answer(int(view.consumed_randomness[0]))
    with pytest.raises(RequiresNoInstance):
        simulate_dcnm_honest(TINY_YES, RandomSource(0))


def test_session_and_transports():
    base = run_dcnm(TINY_NO, 3, seed_verifier=5)
    assert base[0].verdict and base[0].mode == "dcnm:3"
    for transport in ("threads", "socket"):
        assert run_dcnm(TINY_NO, 3, seed_verifier=5, transport=transport) == base


def test_not_public_coin():
    # the probe is no prefix of the verifier's coins; the public-coin check must not be applied here
    tr, view = run_dcnm(TINY_NO, 1, seed_verifier=1)
    assert not any(type(m).__name__ == "Challenge" for _, m in tr.rounds)
    assert tr.rounds[0][0] == "V" and isinstance(tr.rounds[0][1], Probe)
    assert len(view.consumed_randomness) == 3
