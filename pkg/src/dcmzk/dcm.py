"""Double coset membership instances and the desk-scale decision oracle.

An instance ``(s, G, H)`` asks whether ``s`` lies in the product set
``GH = {gh : g in G, h in H}``.  The four-argument form ``sigma in G tau H``
reduces to it by :func:`normalize`.

The oracle here is brute force: enumerate the smaller of the two groups and
test the complementary factor by sifting.  That is what the honest provers
use, so every protocol is limited to groups small enough to enumerate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeMismatch, NotInDoubleCoset, OrderExceedsCap
from .permgroup import (
    BSGS,
    DEFAULT_CAP,
    GeneratorSet,
    Permutation,
    _inv,
    _mul,
    enumerate_elements,
    intersect_bruteforce,
    schreier_sims,
)


@dataclass(frozen=True)
class DcmInstance:
    s: Permutation
    g_group: GeneratorSet
    h_group: GeneratorSet

    def __post_init__(self):
        m = self.s.degree
        if self.g_group.degree != m or self.h_group.degree != m:
            raise DegreeMismatch(
                f"s has degree {m}, G degree {self.g_group.degree}, H degree {self.h_group.degree}"
            )

    @property
    def degree(self) -> int:
        return self.s.degree

    @property
    def G(self) -> BSGS:
        return schreier_sims(self.g_group)

    @property
    def H(self) -> BSGS:
        return schreier_sims(self.h_group)

    def with_s(self, s: Permutation) -> "DcmInstance":
        return DcmInstance(s, self.g_group, self.h_group)


@dataclass(frozen=True)
class Factorization:
    g0: Permutation
    h0: Permutation


def normalize(
    sigma: Permutation, tau: Permutation, g_group: GeneratorSet, h_group: GeneratorSet
) -> DcmInstance:
    """Rewrite ``sigma in G tau H`` as ``tau^-1 sigma in (tau^-1 G tau) H``."""
    m = sigma.degree
    if tau.degree != m or g_group.degree != m or h_group.degree != m:
        raise DegreeMismatch("sigma, tau, G and H must share one degree")
    tinv = tau.inverse()
    conj = tuple(tinv * g * tau for g in g_group.generators)
    return DcmInstance(tinv * sigma, GeneratorSet(m, conj), h_group)


def _check_cap(inst: DcmInstance, cap: int) -> tuple[BSGS, BSGS]:
    G, H = inst.G, inst.H
    if min(G.order, H.order) > cap:
        raise OrderExceedsCap(min(G.order, H.order), cap)
    return G, H


def dcm_decide(inst: DcmInstance, cap: int = DEFAULT_CAP) -> bool:
    """True iff ``s`` is in ``GH``."""
    G, H = _check_cap(inst, cap)
    s = inst.s.images
    if G.order <= H.order:
        return any(H.contains_images(_mul(_inv(g.images), s)) for g in enumerate_elements(G, cap))
    return any(G.contains_images(_mul(s, _inv(h.images))) for h in enumerate_elements(H, cap))


def dcm_factorize(inst: DcmInstance, cap: int = DEFAULT_CAP) -> Factorization:
    """``s = g0 h0`` with ``g0`` the lexicographically least valid left factor."""
    G, H = _check_cap(inst, cap)
    s = inst.s.images
    if G.order <= H.order:
        for g in enumerate_elements(G, cap):
            h = _mul(_inv(g.images), s)
            if H.contains_images(h):
                return Factorization(g, Permutation._trusted(h))
        raise NotInDoubleCoset("s is not in GH")
    lefts = [
        g
        for g in (_mul(s, _inv(h.images)) for h in enumerate_elements(H, cap))
        if G.contains_images(g)
    ]
    if not lefts:
        raise NotInDoubleCoset("s is not in GH")
    g0 = min(lefts)
    return Factorization(Permutation._trusted(g0), Permutation._trusted(_mul(_inv(g0), s)))


def intersection_order(inst: DcmInstance, cap: int = DEFAULT_CAP) -> int:
    """``k = |G ∩ H|``."""
    return len(intersect_bruteforce(inst.G, inst.H, cap)) + 1


def representations(
    inst: DcmInstance, t: Permutation, with_s: bool = False, cap: int = DEFAULT_CAP
) -> list[tuple[Permutation, Permutation]]:
    """All ``(g, h)`` in ``G x H`` with ``gh = t`` (or ``gsh = t`` when ``with_s``)."""
    G, H = inst.G, inst.H
    if t.degree != inst.degree:
        raise DegreeMismatch(f"t has degree {t.degree}, instance {inst.degree}")
    out = []
    for g in enumerate_elements(G, cap):
        left = _mul(g.images, inst.s.images) if with_s else g.images
        h = _mul(_inv(left), t.images)
        if H.contains_images(h):
            out.append((g, Permutation._trusted(h)))
    return out


def alpha_bijection_check(
    inst: DcmInstance, fact: Factorization, t: Permutation, cap: int = DEFAULT_CAP
) -> bool:
    """Whether ``(g, h) -> (g g0, h0 h)`` maps ``R_s(t)`` one-to-one onto ``R(t)``."""
    rs = representations(inst, t, with_s=True, cap=cap)
    r = set(representations(inst, t, with_s=False, cap=cap))
    image = {(g * fact.g0, fact.h0 * h) for g, h in rs}
    return len(image) == len(rs) and image == r


def product_table(inst: DcmInstance, with_s: bool = False, cap: int = DEFAULT_CAP):
    """Every product ``gh`` (or ``gsh``) over ``G x H``, paired with its factors.

    Direct oracle used by the tests and the exact-enumeration tools; sizes
    are ``|G| * |H|``.
    """
    gs = enumerate_elements(inst.G, cap)
    hs = enumerate_elements(inst.H, cap)
    s = inst.s.images
    rows = []
    for g in gs:
        left = _mul(g.images, s) if with_s else g.images
        for h in hs:
            rows.append((Permutation._trusted(_mul(left, h.images)), g, h))
    return rows
