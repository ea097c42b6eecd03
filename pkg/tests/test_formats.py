import random

import pytest

from dcmzk.dcm import normalize
from dcmzk.errors import ParseError
from dcmzk.formats import format_group, format_instance, instance_digest, parse_group, parse_instance
from dcmzk.permgroup import GeneratorSet, Permutation

from helpers import TINY_YES, cyc, gens, random_instance


def test_instance_text():
    text = format_instance(TINY_YES)
    assert text == "degree 3\ns: 2 3 1\nG:\n2 1 3\nH:\n1 3 2\n\n"
    assert parse_instance(text) == TINY_YES


def test_round_trips():
    rng = random.Random(6)
    for _ in range(30):
        inst = random_instance(rng, rng.randint(2, 8), 500)
        text = format_instance(inst)
        assert parse_instance(text) == inst
        assert format_instance(parse_instance(text)) == text
        group = inst.g_group
        assert parse_group(format_group(group)) == group


def test_group_file_with_cycles_and_comments():
    g = parse_group("# a comment\ndegree 4\n(1 2)\n2 3 4 1\n")
    assert g == GeneratorSet(4, (cyc(4, (0, 1)), cyc(4, (0, 1, 2, 3))))


def test_empty_generator_blocks():
    inst = parse_instance("degree 2\ns: 1 2\nG:\nH:\n")
    assert inst.g_group == gens(2) and inst.h_group == gens(2)


def test_tau_line_normalizes():
    sigma, tau = cyc(3, (0, 2)), cyc(3, (0, 1))
    text = "degree 3\nsigma: 3 2 1\ntau: 2 1 3\nG:\n2 1 3\nH:\n1 3 2\n"
    assert parse_instance(text) == normalize(sigma, tau, gens(3, cyc(3, (0, 1))), gens(3, cyc(3, (1, 2))))


def test_parse_stops_at_blank_line():
    text = format_instance(TINY_YES) + "garbage after the instance\n"
    assert parse_instance(text) == TINY_YES


@pytest.mark.parametrize(
    "text",
    [
        "",
        "degree x\n",
        "degree 3\nG:\nH:\n",
        "degree 3\ns: 1 2 3\nH:\n",
        "degree 3\ns: 1 2 3\nG:\n1 2\nH:\n",
        "degree 3\ns: 1 2 3\ns: 1 2 3\nG:\nH:\n",
        "degree 3\nbogus\ns: 1 2 3\nG:\nH:\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_instance(text)


def test_digest_is_sha256_of_canonical_text():
    import hashlib

    assert instance_digest(TINY_YES) == hashlib.sha256(format_instance(TINY_YES).encode()).hexdigest()
    other = TINY_YES.with_s(Permutation.identity(3))
    assert instance_digest(other) != instance_digest(TINY_YES)
