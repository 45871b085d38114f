"""Generalized Cartan matrices, Cartan-type detection, finite-type recognition.

The Cartan entry at (i, j) is c_ij = -min{n >= 0 : (n+1)_{q_ii} (1 - q_ii^n q~_ij) = 0}.
Both zero branches are multiplicative: (n+1)_q = 0 iff q^(n+1) = 1 and q != 1,
so everything reduces to exponent arithmetic on the diagram labels.
"""

from __future__ import annotations

from itertools import combinations

from .cyclo import ONE, RootOfUnity
from .diagram import Diagram

__all__ = [
    "NotReflectableError",
    "BraidingMatrix",
    "cartan_entry",
    "cartan_entry_labels",
    "cartan_matrix",
    "is_cartan_type",
    "gcm_finite_type",
]


class NotReflectableError(ValueError):
    """Raised when no n satisfies the defining product at some vertex."""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"diagram is not reflectable at vertex {vertex + 1}")


class BraidingMatrix:
    """A braiding matrix; the canonical representative puts q_ij = q~_ij, q_ji = 1."""

    __slots__ = ("rank", "q")

    def __init__(self, q: list[list[RootOfUnity]]):
        self.rank = len(q)
        self.q = [list(row) for row in q]
        if any(len(row) != self.rank for row in self.q):
            raise ValueError("braiding matrix must be square")

    @classmethod
    def from_diagram(cls, d: Diagram) -> "BraidingMatrix":
        q = [[ONE] * d.rank for _ in range(d.rank)]
        for i in range(d.rank):
            q[i][i] = d.vertices[i]
        for (i, j), t in d.edges.items():
            q[i][j] = t
        return cls(q)

    def diagram(self) -> Diagram:
        edges = {}
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                t = self.q[i][j] * self.q[j][i]
                if not t.is_one():
                    edges[(i, j)] = t
        return Diagram(tuple(self.q[i][i] for i in range(self.rank)), edges)


def cartan_entry_labels(v: RootOfUnity, t: RootOfUnity) -> int | None:
    """c_ij from the vertex label v = q_ii and edge label t = q~_ij.

    The candidate set is {n : v^n t = 1} plus ord(v) - 1 when v != 1; returns
    -min, or None when the set is empty (only possible for v = 1, t != 1).
    """
    if t.is_one():
        return 0
    best: int | None = None
    if not v.is_one():
        best = v.order - 1  # (n+1)_v vanishes first at n = ord(v) - 1
    # smallest n >= 0 with v^n = t^{-1}
    acc = ONE
    ti = t.inverse()
    bound = v.order if not v.is_one() else 1
    for n in range(bound):
        if acc == ti:
            if best is None or n < best:
                best = n
            break
        acc = acc * v
    if best is None:
        return None
    return -best


def cartan_entry(q: BraidingMatrix, i: int, j: int) -> int:
    """Cartan entry on a braiding matrix; i != j required."""
    if i == j:
        raise ValueError("cartan_entry requires i != j")
    c = cartan_entry_labels(q.q[i][i], q.q[i][j] * q.q[j][i])
    if c is None:
        raise NotReflectableError(i)
    return c


def cartan_matrix(d: Diagram) -> list[list[int]]:
    """The generalized Cartan matrix of a diagram.

    Raises NotReflectableError naming the first vertex where no exponent
    satisfies the defining product (possible only for q_ii = 1, q~_ij != 1).
    """
    n = d.rank
    c = [[2] * n for _ in range(n)]
    for i in range(n):
        vi = d.vertices[i]
        for j in range(n):
            if i == j:
                continue
            entry = cartan_entry_labels(vi, d.edge(i, j))
            if entry is None:
                raise NotReflectableError(i)
            c[i][j] = entry
    return c


def is_cartan_type(d: Diagram) -> bool:
    """True iff q_ii^{c_ij} = q~_ij for all i != j, with (c_ij) the computed GCM."""
    c = cartan_matrix(d)
    for i in range(d.rank):
        vi = d.vertices[i]
        for j in range(d.rank):
            if i != j and vi ** c[i][j] != d.edge(i, j):
                return False
    return True


# -- finite-type recognition ----------------------------------------------------


def gcm_finite_type(c: list[list[int]]) -> str | None:
    """Name of the finite type (components joined by '+'), or None if not finite.

    Table-driven for rank <= 9: each connected component must match one of
    A_n, B_n, C_n, D_n, E_6..E_8, F_4, G_2 up to simultaneous permutation.
    """
    n = len(c)
    for i in range(n):
        if c[i][i] != 2:
            return None
        for j in range(n):
            if i != j and (c[i][j] > 0 or (c[i][j] == 0) != (c[j][i] == 0)):
                return None
    names = []
    for comp in _components(c):
        name = _component_type(c, comp)
        if name is None:
            return None
        names.append(name)
    names.sort()
    return "+".join(names)


def _components(c: list[list[int]]) -> list[list[int]]:
    n = len(c)
    seen: set[int] = set()
    comps = []
    for start in range(n):
        if start in seen:
            continue
        stack, comp = [start], set()
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(j for j in range(n) if j != v and c[v][j] != 0)
        seen |= comp
        comps.append(sorted(comp))
    return comps


def _component_type(c: list[list[int]], comp: list[int]) -> str | None:
    k = len(comp)
    if k == 1:
        return "A1"
    edges = [
        (i, j)
        for i, j in combinations(comp, 2)
        if c[i][j] != 0
    ]
    if len(edges) != k - 1:
        return None  # finite types are trees
    deg = {v: 0 for v in comp}
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    weights = sorted((sorted((abs(c[i][j]), abs(c[j][i]))) for i, j in edges))
    heavy = [w for w in weights if w != [1, 1]]
    if any(w[1] > 3 or w[0] != 1 for w in heavy):
        return None
    if not heavy:
        return _simply_laced_type(comp, edges, deg)
    if len(heavy) > 1:
        return None
    if heavy[0] == [1, 3]:
        return "G2" if k == 2 else None
    # exactly one (1,2)-edge: path required
    if max(deg.values()) > 2:
        return None
    path = _as_path(comp, edges, deg)
    if path is None:
        return None
    pos = next(
        t for t in range(k - 1) if sorted((abs(c[path[t]][path[t + 1]]), abs(c[path[t + 1]][path[t]]))) == [1, 2]
    )
    if pos == 0 or pos == k - 2:
        if k == 2:
            return "B2"
        a, b = (path[pos], path[pos + 1]) if pos == 0 else (path[pos + 1], path[pos])
        # a is the end vertex on the double bond; c[a][b] = -2 means alpha_a long
        return f"B{k}" if abs(c[b][a]) == 2 else f"C{k}"
    if k == 4 and pos == 1:
        return "F4"
    return None


def _as_path(comp: list[int], edges: list[tuple[int, int]], deg: dict[int, int]) -> list[int] | None:
    ends = [v for v in comp if deg[v] == 1]
    if len(ends) != 2:
        return None
    adj: dict[int, list[int]] = {v: [] for v in comp}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    path, prev, cur = [ends[0]], None, ends[0]
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        path.append(cur)
    return path if len(path) == len(comp) else None


def _simply_laced_type(comp: list[int], edges: list[tuple[int, int]], deg: dict[int, int]) -> str | None:
    k = len(comp)
    if max(deg.values()) <= 2:
        return f"A{k}"
    hubs = [v for v in comp if deg[v] >= 3]
    if len(hubs) != 1 or deg[hubs[0]] != 3:
        return None
    adj: dict[int, list[int]] = {v: [] for v in comp}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    arms = []
    for start in adj[hubs[0]]:
        ln, prev, cur = 1, hubs[0], start
        while True:
            nxt = [v for v in adj[cur] if v != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            ln += 1
        arms.append(ln)
    arms.sort()
    if arms[:2] == [1, 1]:
        return f"D{k}"
    if arms == [1, 2, 2]:
        return "E6"
    if arms == [1, 2, 3]:
        return "E7"
    if arms == [1, 2, 4]:
        return "E8"
    return None
