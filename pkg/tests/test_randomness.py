from fractions import Fraction

import pytest

from dcmzk.errors import StateSpaceTooLarge
from dcmzk.randomness import TAIL, EnumeratingSource, RandomSource, Tape, enumerate_outcomes, split


def test_same_key_same_stream():
    a, b = RandomSource(7, "p", 3), RandomSource(7, "p", 3)
    assert [a.bits(13) for _ in range(40)] == [b.bits(13) for _ in range(40)]


def test_distinct_keys_differ():
    streams = [RandomSource(7, "p", i).bits(64) for i in range(5)]
    streams += [RandomSource(7, "v", 0).bits(64), RandomSource(8, "p", 0).bits(64)]
    assert len(set(streams)) == len(streams)


def test_consumed_accounting_and_log():
    r = RandomSource(1)
    x = r.bits(5)
    y = r.bits(300)
    assert r.consumed == 305
    assert r.bitstring() == format(x, "05b") + format(y, "0300b")
    assert r.bitstring(5) == format(y, "0300b")


def test_bits_split_consistently():
    # drawing 8 bits at once equals drawing them one at a time
    a, b = RandomSource(4), RandomSource(4)
    whole = a.bits(8)
    parts = 0
    for _ in range(8):
        parts = (parts << 1) | b.bits(1)
    assert whole == parts


def test_below_counts_rejected_draws():
    r = RandomSource(3)
    draws = [r.below(5) for _ in range(2000)]
    assert set(draws) == {0, 1, 2, 3, 4}
    assert r.consumed % 3 == 0 and r.consumed > 3 * 2000
    assert RandomSource(3).below(1) == 0


def test_split_indexes_streams():
    f = split(11, "prover")
    assert f(2).bits(32) == RandomSource(11, "prover", 2).bits(32)


def test_tape_high_water():
    t = Tape("0110")
    assert t.used() == ""
    assert t[2] == 1 and t[0] == 0
    assert t.used() == "011"
    with pytest.raises(IndexError):
        t[4]
    assert t.fork().used() == ""


def test_enumeration_exact():
    def exp(path):
        src = EnumeratingSource(path)
        return src.below(3) + src.bits(1)

    assert enumerate_outcomes(exp) == {0: Fraction(1, 6), 1: Fraction(1, 3), 2: Fraction(1, 3), 3: Fraction(1, 6)}


def test_bitwise_enumeration_matches_rejection():
    def exp(path):
        src = EnumeratingSource(path, bitwise=True, max_rejections=4)
        return src.below(3), src.bitstring()

    dist = enumerate_outcomes(exp)
    assert dist[(0, "00")] == Fraction(1, 4)
    assert dist[(2, "1110")] == Fraction(1, 16)
    # the mass cut off after four rejections is (1/4)^5
    assert dist[TAIL] == Fraction(1, 4**5)
    assert sum(dist.values()) == 1


def test_state_limit():
    with pytest.raises(StateSpaceTooLarge):
        enumerate_outcomes(lambda path: EnumeratingSource(path).bits(12), max_states=100)
