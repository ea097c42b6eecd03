"""Permutations and generator-defined permutation groups.

Products follow one convention throughout the package: ``p * q`` is the map
``x -> p(q(x))``, i.e. ``q`` is applied first.

Groups are handled through a base and strong generating set (BSGS) built by
the deterministic Schreier-Sims algorithm.  A BSGS supports membership
testing by sifting, exact group order, enumeration and exactly uniform
sampling (one independent uniform transversal representative per level).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegreeMismatch, OrderExceedsCap

DEFAULT_CAP = 10**5


def _mul(p: tuple, q: tuple) -> tuple:
    return tuple(map(p.__getitem__, q))


def _inv(p: tuple) -> tuple:
    r = [0] * len(p)
    for i, x in enumerate(p):
        r[x] = i
    return tuple(r)


class Permutation:
    """A bijection of ``{0, ..., m-1}`` stored as its image array."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        if not images:
            raise ValueError("a permutation needs degree >= 1")
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {list(images)}")
        self.images = images
        self._hash = None

    @classmethod
    def _trusted(cls, images: tuple) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from disjoint cycles on 0-indexed points, e.g. ``[(0, 1, 2)]``."""
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                if a in seen or not 0 <= a < degree:
                    raise ValueError(f"bad cycle point {a}")
                seen.add(a)
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        return Permutation._trusted(_inv(self.images))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __le__(self, other: "Permutation") -> bool:
        return self.images <= other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __repr__(self):
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation<{self.degree}>{cyc or '()'}"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``pq`` with ``(pq)(x) = p(q(x))``."""
    if p.degree != q.degree:
        raise DegreeMismatch(f"cannot compose degrees {p.degree} and {q.degree}")
    return Permutation._trusted(_mul(p.images, q.images))


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


@dataclass(frozen=True)
class GeneratorSet:
    """Generators of a permutation group; no generators means the trivial group."""

    degree: int
    generators: tuple[Permutation, ...] = ()

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if g.degree != self.degree:
                raise DegreeMismatch(
                    f"generator of degree {g.degree} in a group of degree {self.degree}"
                )

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


class _Level:
    __slots__ = ("point", "gens", "orbit", "reps", "invreps", "checked")

    def __init__(self, point: int, identity: tuple):
        self.point = point
        self.gens: list[tuple] = []
        self.orbit = [point]
        self.reps = {point: identity}
        self.invreps = {point: identity}
        self.checked: set[tuple[int, int]] = set()

    def extend_orbit(self):
        reps, invreps, orbit = self.reps, self.invreps, self.orbit
        i = 0
        while i < len(orbit):
            x = orbit[i]
            ux = reps[x]
            for s in self.gens:
                y = s[x]
                if y not in reps:
                    u = _mul(s, ux)
                    reps[y] = u
                    invreps[y] = _inv(u)
                    orbit.append(y)
            i += 1


def _sift(levels: list[_Level], g: tuple, start: int = 0) -> tuple[tuple, int]:
    for depth in range(start, len(levels)):
        lvl = levels[depth]
        inv = lvl.invreps.get(g[lvl.point])
        if inv is None:
            return g, depth
        g = _mul(inv, g)
    return g, len(levels)


def _first_moved(g: tuple) -> int:
    for i, x in enumerate(g):
        if i != x:
            return i
    raise ValueError("identity moves no point")


class BSGS:
    """Base and strong generating set with explicit transversals.

    ``transversals[i]`` maps each point of the orbit of ``base[i]`` under the
    ``i``-th stabilizer to a coset representative sending ``base[i]`` there.
    Instances are immutable once built.
    """

    def __init__(self, degree: int, levels: list[_Level]):
        self.degree = degree
        self._levels = levels
        self._identity = tuple(range(degree))
        self.base = tuple(lvl.point for lvl in levels)
        strong = []
        seen = set()
        for lvl in levels:
            for g in lvl.gens:
                if g not in seen:
                    seen.add(g)
                    strong.append(Permutation._trusted(g))
        self.strong_generators = tuple(strong)
        self.order = 1
        for lvl in levels:
            self.order *= len(lvl.orbit)
        # sorted orbit points fix the index -> representative map used by sampling
        self._sorted_orbits = [sorted(lvl.orbit) for lvl in levels]

    @functools.cached_property
    def transversals(self) -> tuple[dict[int, Permutation], ...]:
        return tuple(
            {pt: Permutation._trusted(u) for pt, u in sorted(lvl.reps.items())}
            for lvl in self._levels
        )

    def level_gens(self, depth: int) -> tuple[Permutation, ...]:
        return tuple(Permutation._trusted(g) for g in self._levels[depth].gens)

    def sift(self, p: Permutation) -> tuple[Permutation, int]:
        """Return the residue of ``p`` and the depth at which sifting stopped."""
        if p.degree != self.degree:
            raise DegreeMismatch(f"degree {p.degree} vs group degree {self.degree}")
        h, depth = _sift(self._levels, p.images)
        return Permutation._trusted(h), depth

    def contains_images(self, images: tuple) -> bool:
        h, _ = _sift(self._levels, images)
        return h == self._identity

    def __contains__(self, p: Permutation) -> bool:
        return contains(self, p)

    def __repr__(self):
        return f"BSGS(degree={self.degree}, base={list(self.base)}, order={self.order})"


@functools.lru_cache(maxsize=4096)
def schreier_sims(gens: GeneratorSet) -> BSGS:
    """Deterministic Schreier-Sims.

    New base points are the smallest point moved by the element that needs
    them, so the result (and everything sampled from it) depends only on
    ``gens``.
    """
    m = gens.degree
    ident = tuple(range(m))
    levels: list[_Level] = []
    strong: list[tuple] = []
    for g in gens.generators:
        g = g.images
        if g == ident or g in strong:
            continue
        if all(g[lvl.point] == lvl.point for lvl in levels):
            levels.append(_Level(_first_moved(g), ident))
        strong.append(g)
    for depth, lvl in enumerate(levels):
        fixed = [lv.point for lv in levels[:depth]]
        lvl.gens = [s for s in strong if all(s[b] == b for b in fixed)]
        lvl.extend_orbit()

    depth = len(levels) - 1
    while depth >= 0:
        lvl = levels[depth]
        jumped = False
        for x in lvl.orbit:
            for si in range(len(lvl.gens)):
                if (x, si) in lvl.checked:
                    continue
                lvl.checked.add((x, si))
                s = lvl.gens[si]
                y = s[x]
                schreier = _mul(lvl.invreps[y], _mul(s, lvl.reps[x]))
                h, stop = _sift(levels, schreier, depth + 1)
                if h == ident:
                    continue
                if stop == len(levels):
                    levels.append(_Level(_first_moved(h), ident))
                for lower in range(depth + 1, stop + 1):
                    levels[lower].gens.append(h)
                    levels[lower].extend_orbit()
                depth = stop
                jumped = True
                break
            if jumped:
                break
        if not jumped:
            depth -= 1
    return BSGS(m, levels)


def group(degree: int, *generators: Permutation | Sequence[int]) -> BSGS:
    """Convenience: BSGS of the group generated by image arrays or permutations."""
    perms = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
    return schreier_sims(GeneratorSet(degree, tuple(perms)))


def contains(bsgs: BSGS, p: Permutation) -> bool:
    if p.degree != bsgs.degree:
        raise DegreeMismatch(f"degree {p.degree} vs group degree {bsgs.degree}")
    return bsgs.contains_images(p.images)


def uniform_sample(bsgs: BSGS, rng) -> Permutation:
    """Exactly uniform element: one uniform representative per level, multiplied.

    ``rng`` needs a ``below(n)`` method returning a uniform integer in
    ``[0, n)``.  Level ``i`` draws ``below(len(orbit_i))``; levels with a single
    orbit point draw nothing.
    """
    g = bsgs._identity
    for lvl, pts in zip(bsgs._levels, bsgs._sorted_orbits):
        n = len(pts)
        idx = rng.below(n) if n > 1 else 0
        g = _mul(g, lvl.reps[pts[idx]])
    return Permutation._trusted(g)


def element_from_indices(bsgs: BSGS, indices: Sequence[int]) -> Permutation:
    """The element ``uniform_sample`` returns when level ``i`` picks ``indices[i]``."""
    g = bsgs._identity
    for lvl, pts, idx in zip(bsgs._levels, bsgs._sorted_orbits, indices):
        g = _mul(g, lvl.reps[pts[idx]])
    return Permutation._trusted(g)


def transversal_sizes(bsgs: BSGS) -> tuple[int, ...]:
    return tuple(len(pts) for pts in bsgs._sorted_orbits)


def enumerate_elements(bsgs: BSGS, cap: int = DEFAULT_CAP) -> list[Permutation]:
    """All group elements in lexicographic order of their image arrays."""
    if bsgs.order > cap:
        raise OrderExceedsCap(bsgs.order, cap)
    return [Permutation._trusted(g) for g in _element_tuples(bsgs)]


@functools.lru_cache(maxsize=256)
def _element_tuples(bsgs: BSGS) -> tuple[tuple, ...]:
    elems = [bsgs._identity]
    for lvl in reversed(bsgs._levels):
        reps = list(lvl.reps.values())
        elems = [_mul(u, g) for u in reps for g in elems]
    elems.sort()
    return tuple(elems)


def intersect_bruteforce(g: BSGS, h: BSGS, cap: int = DEFAULT_CAP) -> GeneratorSet:
    """``G ∩ H`` as the full list of its non-identity elements.

    The smaller group is enumerated and filtered by membership in the other.
    """
    if g.degree != h.degree:
        raise DegreeMismatch(f"degrees {g.degree} and {h.degree}")
    small, big = (g, h) if g.order <= h.order else (h, g)
    elems = enumerate_elements(small, cap)
    common = tuple(p for p in elems if big.contains_images(p.images) and not p.is_identity())
    return GeneratorSet(g.degree, common)


def closure_bruteforce(gens: GeneratorSet, limit: int = 10**6) -> set[tuple]:
    """Orbit of the identity under right multiplication by generators (test oracle)."""
    ident = tuple(range(gens.degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens.generators:
                y = _mul(x, s.images)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise OrderExceedsCap(len(seen), limit)
        frontier = nxt
    return seen


def symmetric_group(degree: int) -> GeneratorSet:
    if degree < 3:
        gens = () if degree == 1 else (Permutation([1, 0]),)
        return GeneratorSet(degree, gens)
    return GeneratorSet(
        degree,
        (
            Permutation.from_cycles(degree, [(0, 1)]),
            Permutation.from_cycles(degree, [tuple(range(degree))]),
        ),
    )


def all_permutations(degree: int) -> Iterable[Permutation]:
    for images in itertools.permutations(range(degree)):
        yield Permutation._trusted(images)
