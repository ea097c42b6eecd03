"""Graph isomorphism as a double coset membership question.

Write the ordered vertex pairs of an ``n``-vertex graph as points of the
square ``{0..n-1}^2`` (point ``i*n + j``) and let ``S1``, ``S2`` be the pair
sets of the two adjacency matrices.  ``G`` is the image of ``Sym(n)`` acting
on both coordinates at once, ``H`` the setwise stabilizer of ``S1`` in
``Sym(n^2)``, and ``s`` any permutation with ``s(S1) = S2``.  Some relabelling
in ``G`` carries ``S1`` onto ``S2`` exactly when ``s in GH``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .dcm import DcmInstance
from .errors import ParseError, SizeMismatch
from .permgroup import GeneratorSet, Permutation


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: symmetric 0/1 adjacency with an empty diagonal."""

    n: int
    adjacency: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        a = self.adjacency
        if len(a) != self.n or any(len(row) != self.n for row in a):
            raise ValueError("adjacency must be n x n")
        for i in range(self.n):
            if a[i][i]:
                raise ValueError(f"loop at vertex {i}")
            for j in range(i):
                if a[i][j] != a[j][i]:
                    raise ValueError(f"adjacency not symmetric at ({i}, {j})")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        a = [[False] * n for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            a[u][v] = a[v][u] = True
        return cls(n, tuple(map(tuple, a)))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.adjacency[i][j]]

    def relabel(self, perm) -> "Graph":
        """The graph with vertex ``i`` renamed ``perm[i]``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])


def parse_graph(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2 or lines[0][0] != "n":
        raise ParseError("graph file must start with 'n <count>'")
    try:
        n = int(lines[0][1])
        edges = []
        for parts in lines[1:]:
            if len(parts) != 2:
                raise ParseError(f"bad edge line {' '.join(parts)!r}")
            u, v = int(parts[0]) - 1, int(parts[1]) - 1
            if u == v:
                raise ParseError(f"loop at vertex {u + 1}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"edge {u + 1} {v + 1} out of range for {n} vertices")
            edges.append((u, v))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad graph file: {exc}") from exc
    if n < 1:
        raise ParseError("vertex count must be >= 1")
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    return "\n".join([f"n {g.n}", *(f"{u + 1} {v + 1}" for u, v in g.edges())]) + "\n"


def square_point_index(i: int, j: int, n: int) -> int:
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"({i}, {j}) outside the {n} x {n} square")
    return i * n + j


def edge_points(g: Graph) -> frozenset[int]:
    """``S = {(i, j) : a_ij = 1}`` as square points; both orientations of each edge."""
    n = g.n
    return frozenset(i * n + j for i in range(n) for j in range(n) if g.adjacency[i][j])


def conjugation_group_generators(n: int) -> GeneratorSet:
    """One generator per vertex pair ``i < j``: swap ``i, j`` in both coordinates."""
    gens = []
    for i, j in itertools.combinations(range(n), 2):
        swap = list(range(n))
        swap[i], swap[j] = j, i
        gens.append(Permutation._trusted(tuple(swap[x] * n + swap[y] for x in range(n) for y in range(n))))
    return GeneratorSet(n * n, tuple(gens))


def _part_generators(part: list[int], degree: int) -> list[Permutation]:
    # a transposition and a full cycle generate the symmetric group on the part
    if len(part) < 2:
        return []
    gens = [Permutation.from_cycles(degree, [part[:2]])]
    if len(part) > 2:
        gens.append(Permutation.from_cycles(degree, [part]))
    return gens


def edge_set_stabilizer_generators(points, degree: int) -> GeneratorSet:
    """Generators of ``Sym(S) x Sym(complement)``, the setwise stabilizer of ``S``."""
    inside = sorted(set(points))
    if inside and not (0 <= inside[0] and inside[-1] < degree):
        raise ValueError("points outside the degree")
    outside = sorted(set(range(degree)) - set(inside))
    return GeneratorSet(degree, tuple(_part_generators(inside, degree) + _part_generators(outside, degree)))


def cross_map(s1, s2, degree: int) -> Permutation:
    """Sorted ``s1`` onto sorted ``s2``, sorted complement onto sorted complement."""
    a, b = sorted(set(s1)), sorted(set(s2))
    if len(a) != len(b):
        raise SizeMismatch(f"|S1| = {len(a)} but |S2| = {len(b)}")
    images = [0] * degree
    rest_a = sorted(set(range(degree)) - set(a))
    rest_b = sorted(set(range(degree)) - set(b))
    for x, y in itertools.chain(zip(a, b), zip(rest_a, rest_b)):
        images[x] = y
    return Permutation(images)


CANONICAL_NO = DcmInstance(Permutation([1, 0]), GeneratorSet(2, ()), GeneratorSet(2, ()))


def reduce_gi(a: Graph, b: Graph) -> DcmInstance:
    """An instance that is YES exactly when ``a`` and ``b`` are isomorphic.

    Graphs with different vertex or edge counts cannot be isomorphic and map
    to :data:`CANONICAL_NO`.
    """
    if a.n != b.n:
        return CANONICAL_NO
    s1, s2 = edge_points(a), edge_points(b)
    degree = a.n * a.n
    try:
        s = cross_map(s1, s2, degree)
    except SizeMismatch:
        return CANONICAL_NO
    return DcmInstance(s, conjugation_group_generators(a.n), edge_set_stabilizer_generators(s1, degree))


def isomorphic_bruteforce(a: Graph, b: Graph) -> bool:
    """Try all ``n!`` bijections."""
    if a.n != b.n or len(a.edges()) != len(b.edges()):
        return False
    target = set(b.edges())
    for perm in itertools.permutations(range(a.n)):
        if {tuple(sorted((perm[u], perm[v]))) for u, v in a.edges()} == target:
            return True
    return False


def all_graphs(n: int) -> list[Graph]:
    pairs = list(itertools.combinations(range(n), 2))
    return [
        Graph.from_edges(n, [p for p, bit in zip(pairs, mask) if bit])
        for mask in itertools.product((0, 1), repeat=len(pairs))
    ]
