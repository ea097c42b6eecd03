"""Shared instances and builders for the test modules."""

import random

from dcmzk.dcm import DcmInstance, dcm_decide
from dcmzk.permgroup import GeneratorSet, Permutation, all_permutations, enumerate_elements, uniform_sample
from dcmzk.randomness import RandomSource


def perm(*images):
    return Permutation(images)


def cyc(m, *cycles):
    return Permutation.from_cycles(m, cycles)


def gens(m, *ps):
    return GeneratorSet(m, tuple(ps))


def instance(s, g, h):
    return DcmInstance(s, g, h)


# G = <(0 1)>, H = <(1 2)> on 3 points; GH has four elements
G01 = gens(3, cyc(3, (0, 1)))
H12 = gens(3, cyc(3, (1, 2)))
TINY_YES = instance(cyc(3, (0, 1)) * cyc(3, (1, 2)), G01, H12)
TINY_NO = instance(perm(2, 1, 0), G01, H12)

# G = H = <(0 1)>: nontrivial intersection, k = 2
SHARED_YES = instance(cyc(3, (0, 1)), G01, G01)

TRIVIAL_YES = instance(Permutation.identity(3), gens(3), gens(3))


def yes_instances_by_degree():
    """Five YES instances of degrees 3 to 8."""
    out = [TINY_YES]
    g = gens(4, cyc(4, (0, 1)), cyc(4, (0, 1, 2)))
    h = gens(4, cyc(4, (1, 2)), cyc(4, (1, 2, 3)))
    out.append(instance(cyc(4, (0, 2, 1)) * cyc(4, (1, 3)), g, h))
    g = gens(5, cyc(5, (0, 1, 2, 3, 4)))
    h = gens(5, cyc(5, (0, 1)))
    out.append(instance(cyc(5, (0, 2, 4, 1, 3)) * cyc(5, (0, 1)), g, h))
    g = gens(6, cyc(6, (0, 1)), cyc(6, (2, 3)))
    h = gens(6, cyc(6, (0, 1, 2), (3, 4, 5)))
    out.append(instance(cyc(6, (2, 3)) * cyc(6, (0, 2, 1), (3, 5, 4)), g, h))
    g = gens(8, cyc(8, (0, 1, 2, 3), (4, 5, 6, 7)), cyc(8, (0, 4)))
    h = gens(8, cyc(8, (1, 2)), cyc(8, (5, 6, 7)))
    out.append(instance(cyc(8, (0, 4)) * cyc(8, (5, 7, 6)), g, h))
    return out


def random_generator_set(rng: random.Random, degree: int, count: int) -> GeneratorSet:
    pts = list(range(degree))
    out = []
    for _ in range(count):
        kind = rng.random()
        if kind < 0.5:
            a, b = rng.sample(pts, 2)
            out.append(cyc(degree, (a, b)))
        else:
            length = rng.randint(2, degree)
            out.append(cyc(degree, rng.sample(pts, length)))
    return GeneratorSet(degree, tuple(out))


def random_small_group(rng: random.Random, degree: int, max_order: int) -> GeneratorSet:
    from dcmzk.permgroup import schreier_sims

    while True:
        g = random_generator_set(rng, degree, rng.randint(0, 2))
        if schreier_sims(g).order <= max_order:
            return g


def random_instance(rng: random.Random, degree: int, max_order: int, yes: bool | None = None) -> DcmInstance:
    """Random instance with both groups of order at most ``max_order``."""
    while True:
        g = random_small_group(rng, degree, max_order)
        h = random_small_group(rng, degree, max_order)
        probe = DcmInstance(Permutation.identity(degree), g, h)
        if yes is None:
            s = Permutation([*rng.sample(range(degree), degree)])
        elif yes:
            src = RandomSource(rng.getrandbits(32), "instance")
            s = uniform_sample(probe.G, src) * uniform_sample(probe.H, src)
        else:
            gh = {a * b for a in enumerate_elements(probe.G) for b in enumerate_elements(probe.H)}
            outside = [p for p in all_permutations(degree) if p not in gh] if degree <= 6 else []
            if not outside:
                continue
            s = rng.choice(outside)
        inst = probe.with_s(s)
        if yes is not None:
            assert dcm_decide(inst) == yes
        return inst
