"""The generalized Dynkin diagram data model and its graph analysis.

A diagram is the twist-equivalence class of a braiding matrix: vertex labels
q_ii and symmetric edge labels for the pairs with q_ij*q_ji != 1.  Vertices
are 0-indexed internally; the text format and the CLI are 1-indexed.
"""

from __future__ import annotations

import re
from itertools import combinations, permutations
from typing import Iterable, NamedTuple

from .cyclo import ONE, RootOfUnity, parse_token

__all__ = ["Diagram", "Shape", "classify_shape", "shape_automorphisms"]

MAX_RANK = 9


class Shape(NamedTuple):
    """Unlabeled-graph taxonomy used by the rank-by-rank case analysis.

    ``kind`` is one of: line, triangle, square, tadpole, dtype, tm (triangle
    in the middle), e (E6/E7), star, bowtie, semidirect, cross, ext_e6, other.
    ``param`` carries the diagonal count for squares and n for E-types.
    """

    kind: str
    param: int = 0

    def __str__(self):
        if self.kind == "square":
            return f"square({self.param})"
        if self.kind == "e":
            return f"e{self.param}"
        return self.kind


class Diagram:
    """Immutable diagram: rank, vertex labels, and symmetric edge labels."""

    __slots__ = ("rank", "vertices", "edges", "_ekey", "_hash")

    def __init__(self, vertices: Iterable[RootOfUnity], edges: dict[tuple[int, int], RootOfUnity]):
        vertices = tuple(vertices)
        rank = len(vertices)
        if not 1 <= rank <= MAX_RANK:
            raise ValueError(f"rank must be in 1..{MAX_RANK}, got {rank}")
        norm: dict[tuple[int, int], RootOfUnity] = {}
        for (i, j), t in edges.items():
            if i == j or not (0 <= i < rank and 0 <= j < rank):
                raise ValueError(f"bad edge pair {(i, j)}")
            if t is ONE or t == ONE:
                continue  # absent pair means no edge
            a, b = (i, j) if i < j else (j, i)
            if norm.setdefault((a, b), t) != t:
                raise ValueError(f"conflicting labels for edge {(a, b)}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", norm)
        ekey = tuple(sorted(norm.items()))
        object.__setattr__(self, "_ekey", ekey)
        object.__setattr__(self, "_hash", hash((vertices, ekey)))

    def __setattr__(self, name, value):
        raise AttributeError("Diagram is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self._hash == other._hash
            and self.vertices == other.vertices
            and self._ekey == other._ekey
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Diagram.parse({self.serialize()!r})"

    # -- labels ------------------------------------------------------------

    def vertex(self, i: int) -> RootOfUnity:
        return self.vertices[i]

    def edge(self, i: int, j: int) -> RootOfUnity:
        """The symmetric label q~_ij; 1 when there is no edge."""
        if i > j:
            i, j = j, i
        return self.edges.get((i, j), ONE)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(
            j for j in range(self.rank) if j != i and (min(i, j), max(i, j)) in self.edges
        )

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    # -- subdiagrams and relabelings ----------------------------------------

    def restrict(self, subset: Iterable[int]) -> "Diagram":
        """Induced subdiagram, vertices renumbered by increasing original index."""
        sub = sorted(set(subset))
        if not sub:
            raise ValueError("empty vertex subset")
        pos = {v: k for k, v in enumerate(sub)}
        verts = tuple(self.vertices[v] for v in sub)
        edges = {
            (pos[i], pos[j]): t
            for (i, j), t in self.edges.items()
            if i in pos and j in pos
        }
        return Diagram(verts, edges)

    def permute(self, sigma: Iterable[int]) -> "Diagram":
        """Relabel vertices: old vertex i becomes sigma[i]."""
        sigma = tuple(sigma)
        if sorted(sigma) != list(range(self.rank)):
            raise ValueError("sigma is not a permutation of the vertex set")
        verts: list[RootOfUnity] = [ONE] * self.rank
        for i, v in enumerate(self.vertices):
            verts[sigma[i]] = v
        edges = {(sigma[i], sigma[j]): t for (i, j), t in self.edges.items()}
        return Diagram(tuple(verts), edges)

    # -- text format ---------------------------------------------------------

    def serialize(self) -> str:
        v = ",".join(t.token() for t in self.vertices)
        e = ",".join(
            f"({i + 1},{j + 1})={t.token()}" for (i, j), t in sorted(self.edges.items())
        )
        return f"rank={self.rank}; v=[{v}]; e=[{e}]"

    _EDGE_RE = re.compile(r"\((\d+),(\d+)\)=([^,()\s]+)")

    @classmethod
    def parse(cls, text: str) -> "Diagram":
        parts = {}
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            key, _, val = chunk.partition("=")
            parts[key.strip()] = val.strip()
        try:
            rank = int(parts["rank"])
            vtxt = parts["v"]
        except KeyError as exc:
            raise ValueError(f"missing field {exc} in diagram text") from exc
        if not (vtxt.startswith("[") and vtxt.endswith("]")):
            raise ValueError("v must be a bracketed list")
        vtoks = [t for t in vtxt[1:-1].split(",") if t.strip()]
        if len(vtoks) != rank:
            raise ValueError(f"expected {rank} vertex labels, got {len(vtoks)}")
        verts = tuple(parse_token(t) for t in vtoks)
        edges: dict[tuple[int, int], RootOfUnity] = {}
        etxt = parts.get("e", "[]")
        for m in cls._EDGE_RE.finditer(etxt):
            i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
            edges[(i, j)] = parse_token(m.group(3))
        return cls(verts, edges)

    # -- graph analysis -------------------------------------------------------

    def adjacency(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(self.neighbors(i)) for i in range(self.rank))

    def components(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        comps = []
        for start in range(self.rank):
            if start in seen:
                continue
            stack, comp = [start], set()
            while stack:
                v = stack.pop()
                if v in comp:
                    continue
                comp.add(v)
                stack.extend(self.neighbors(v))
            seen |= comp
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def has_cycle(self, n: int) -> bool:
        """True iff the unlabeled edge graph contains a cycle of length exactly n."""
        if n < 3 or n > self.rank:
            return False
        adj = self.adjacency()
        for subset in combinations(range(self.rank), n):
            inside = set(subset)
            if any(len(adj[v] & inside) < 2 for v in subset):
                continue
            first, *rest = subset
            for order in permutations(rest):
                cyc = (first, *order)
                if all(cyc[(k + 1) % n] in adj[cyc[k]] for k in range(n)):
                    return True
        return False

    def classify_shape(self) -> Shape:
        return classify_shape(self)

    def canonical_key(self) -> bytes:
        """Lexicographic minimum of the serializations over all relabelings.

        Equal keys iff the diagrams are permutation-equivalent.  The search is
        pruned to label/degree-preserving relabelings, which is exhaustive.
        """
        best: str | None = None
        for sigma in _candidate_relabelings(self):
            s = self.permute(sigma).serialize()
            if best is None or s < best:
                best = s
        assert best is not None
        return best.encode()


def _vertex_invariant(d: Diagram, i: int):
    inc = sorted(d.edge(i, j).token() for j in d.neighbors(i))
    return (d.vertices[i].token(), len(inc), tuple(inc))


def _candidate_relabelings(d: Diagram):
    """All permutations preserving the vertex invariant classes.

    A permutation realizing the minimal serialization must map each vertex to
    one with the same (label, degree, incident edge labels) invariant, so
    restricting to these candidates is exhaustive for canonical_key.
    """
    inv = [_vertex_invariant(d, i) for i in range(d.rank)]
    classes: dict[object, list[int]] = {}
    for i, key in enumerate(inv):
        classes.setdefault(key, []).append(i)
    groups = sorted(classes.values())
    for parts in _product_permutations(groups):
        sigma = [0] * d.rank
        for group, images in zip(groups, parts):
            for src, dst in zip(group, images):
                sigma[src] = dst
        yield tuple(sigma)


def _product_permutations(groups: list[list[int]]):
    if not groups:
        yield ()
        return
    head, *tail = groups
    for perm in permutations(head):
        for rest in _product_permutations(tail):
            yield (perm, *rest)


# -- shape taxonomy -----------------------------------------------------------


def classify_shape(d: Diagram) -> Shape:
    """Classify the unlabeled edge graph into the fixed shape taxonomy."""
    n = d.rank
    if not d.is_connected():
        return Shape("other")
    m = len(d.edges)
    deg = [d.degree(i) for i in range(n)]
    if m == n - 1:  # tree
        return _classify_tree(d, deg)
    if m == n:  # exactly one cycle
        return _classify_unicyclic(d, deg)
    if n == 4 and m == 5:
        return Shape("square", 1)
    if n == 4 and m == 6:
        return Shape("square", 2)
    if n == 5 and m == 6:
        # two triangles sharing a vertex
        tris = _triangles(d)
        if len(tris) == 2 and len(set(tris[0]) & set(tris[1])) == 1 and max(deg) == 4:
            return Shape("bowtie")
    return Shape("other")


def _classify_tree(d: Diagram, deg: list[int]) -> Shape:
    n = d.rank
    if max(deg, default=0) <= 2:
        return Shape("line")
    hubs = [i for i in range(n) if deg[i] >= 3]
    if len(hubs) != 1:
        return Shape("other")
    hub = hubs[0]
    if deg[hub] == 4 and n == 5:
        return Shape("cross")
    if deg[hub] != 3:
        return Shape("other")
    arms = sorted(_arm_lengths(d, hub))
    if arms[0] == 1 and arms[1] == 1:
        return Shape("dtype")
    if arms == [1, 2, 2] and n == 6:
        return Shape("e", 6)
    if arms == [1, 2, 3] and n == 7:
        return Shape("e", 7)
    if arms == [2, 2, 2] and n == 7:
        return Shape("ext_e6")
    return Shape("other")


def _arm_lengths(d: Diagram, hub: int) -> list[int]:
    lengths = []
    for start in d.neighbors(hub):
        ln, prev, cur = 1, hub, start
        while True:
            nxt = [v for v in d.neighbors(cur) if v != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                return [-1]  # nested branching: not an arm decomposition
            prev, cur = cur, nxt[0]
            ln += 1
        lengths.append(ln)
    return lengths


def _triangles(d: Diagram) -> list[tuple[int, int, int]]:
    adj = d.adjacency()
    return [
        (i, j, k)
        for i, j, k in combinations(range(d.rank), 3)
        if j in adj[i] and k in adj[i] and k in adj[j]
    ]


def _classify_unicyclic(d: Diagram, deg: list[int]) -> Shape:
    n = d.rank
    tris = _triangles(d)
    if not tris:
        if n == 4 and all(x == 2 for x in deg):
            return Shape("square", 0)
        return Shape("other")
    if len(tris) != 1:
        return Shape("other")
    tri = tris[0]
    if n == 3:
        return Shape("triangle")
    branched = [v for v in tri if deg[v] >= 3]
    outside = [v for v in range(n) if v not in tri]
    # every vertex off the triangle must sit on a simple path (no branching)
    if any(deg[v] > 2 for v in outside):
        return Shape("other")
    if len(branched) == 1:
        b = branched[0]
        if deg[b] == 3:
            return Shape("tadpole")
        if deg[b] == 4 and n == 5:
            return Shape("semidirect")
        return Shape("other")
    if len(branched) == 2 and all(deg[v] == 3 for v in branched):
        return Shape("tm")
    if len(branched) == 3 and all(deg[v] == 3 for v in branched) and n == 6:
        # star: three pendant paths; the paper's star has all three of length 1
        if all(len(_arm_lengths(d, v)) == 3 for v in branched):
            return Shape("star")
    return Shape("other")


def shape_automorphisms(d: Diagram) -> list[tuple[int, ...]]:
    """All relabelings preserving the unlabeled edge set (graph automorphisms)."""
    adj = d.adjacency()
    degs = [len(a) for a in adj]
    out = []
    for sigma in permutations(range(d.rank)):
        if any(degs[i] != degs[sigma[i]] for i in range(d.rank)):
            continue
        if all(
            ((sigma[i], sigma[j]) if sigma[i] < sigma[j] else (sigma[j], sigma[i]))
            in d.edges
            for (i, j) in d.edges
        ):
            out.append(sigma)
    return out
