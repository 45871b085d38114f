"""Reflections, Weyl-equivalence orbits, and root-system computation.

reflect() applies (rho_i q)_jk = q_jk q_ik^{-c_ij} q_ji^{-c_ik} q_ii^{c_ij c_ik}
to the canonical matrix representative and returns the resulting diagram.
positive_roots() spreads root sets along the orbit using
Delta_+(rho_i q) = s_i^q(Delta_+(q) - {a_i}) u {a_i} until a global fixpoint:
for finite generalized root systems all roots are real, so the fixpoint is the
full positive root set; unbounded growth is cut off by caps and reported as
CapExceeded, never as a proof of infiniteness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cartan import NotReflectableError, cartan_entry_labels
from .cyclo import RootOfUnity
from .diagram import Diagram

__all__ = [
    "Caps",
    "WeylOrbit",
    "RootSystemResult",
    "reflect",
    "orbit",
    "positive_roots",
]


@dataclass(frozen=True)
class Caps:
    max_members: int = 100_000
    max_roots: int = 10_000


DEFAULT_CAPS = Caps()


def _cartan_row(d: Diagram, i: int) -> list[int]:
    vi = d.vertices[i]
    row = []
    for j in range(d.rank):
        if j == i:
            row.append(2)
            continue
        c = cartan_entry_labels(vi, d.edge(i, j))
        if c is None:
            raise NotReflectableError(i)
        row.append(c)
    return row


def reflect(d: Diagram, i: int) -> Diagram:
    """The reflection rho_i at vertex i (0-indexed), as a diagram."""
    row = _cartan_row(d, i)
    m = [-c for c in row]  # m_ij = -c_ij
    vi = d.vertices[i]
    verts = list(d.vertices)
    edges: dict[tuple[int, int], RootOfUnity] = {}
    for j in range(d.rank):
        if j == i:
            continue
        tij = d.edge(i, j)
        verts[j] = d.vertices[j] * tij ** m[j] * vi ** (m[j] * m[j])
        new_t = tij.inverse() * vi ** (-2 * m[j])
        if not new_t.is_one():
            edges[(min(i, j), max(i, j))] = new_t
    for j in range(d.rank):
        for k in range(j + 1, d.rank):
            if i in (j, k):
                continue
            t = (
                d.edge(j, k)
                * d.edge(i, k) ** m[j]
                * d.edge(i, j) ** m[k]
                * vi ** (2 * m[j] * m[k])
            )
            if not t.is_one():
                edges[(j, k)] = t
    return Diagram(tuple(verts), edges)


@dataclass
class WeylOrbit:
    """BFS closure of a diagram under all reflections, up to exact equality."""

    base: Diagram
    members: dict[str, Diagram]
    edges: dict[tuple[str, int], str]
    status: str  # "complete" | "cap_exceeded" | "not_all_reflections"
    failure_vertex: int | None = None

    def __len__(self):
        return len(self.members)


def orbit(d: Diagram, caps: Caps = DEFAULT_CAPS) -> WeylOrbit:
    members = {d.serialize(): d}
    edges: dict[tuple[str, int], str] = {}
    frontier = [d]
    while frontier:
        nxt = []
        for cur in frontier:
            ck = cur.serialize()
            for i in range(d.rank):
                try:
                    img = reflect(cur, i)
                except NotReflectableError as exc:
                    return WeylOrbit(d, members, edges, "not_all_reflections", exc.vertex)
                ik = img.serialize()
                edges[(ck, i)] = ik
                if ik not in members:
                    members[ik] = img
                    nxt.append(img)
                    if len(members) > caps.max_members:
                        return WeylOrbit(d, members, edges, "cap_exceeded")
        frontier = nxt
    return WeylOrbit(d, members, edges, "complete")


@dataclass
class RootSystemResult:
    status: str  # "finite" | "cap_exceeded" | "not_all_reflections"
    positive_roots: tuple[tuple[int, ...], ...] = ()
    orbit_size: int = 0
    failure_vertex: int | None = None

    @property
    def finite(self) -> bool:
        return self.status == "finite"

    def count(self) -> int:
        return len(self.positive_roots)


def positive_roots(d: Diagram, caps: Caps = DEFAULT_CAPS) -> RootSystemResult:
    """Positive roots of d via real-root closure over the orbit.

    Maintains one root set per orbit member (in that member's own basis) and
    propagates s_i images between rho_i-neighbours until nothing new appears.
    """
    rank = d.rank
    simples = [tuple(1 if k == j else 0 for k in range(rank)) for j in range(rank)]
    base_key = d.serialize()
    objects: dict[str, Diagram] = {base_key: d}
    rows: dict[str, list[list[int]]] = {}
    neighbor: dict[tuple[str, int], str] = {}
    roots: dict[str, set[tuple[int, ...]]] = {base_key: set(simples)}
    dirty = [base_key]

    def cartan_rows(key: str) -> list[list[int]]:
        cached = rows.get(key)
        if cached is None:
            obj = objects[key]
            cached = rows[key] = [_cartan_row(obj, i) for i in range(rank)]
        return cached

    while dirty:
        key = dirty.pop()
        obj = objects[key]
        try:
            crows = cartan_rows(key)
        except NotReflectableError as exc:
            return RootSystemResult("not_all_reflections", failure_vertex=exc.vertex)
        current = list(roots[key])
        for i in range(rank):
            nkey = neighbor.get((key, i))
            if nkey is None:
                img = reflect(obj, i)
                nkey = img.serialize()
                neighbor[(key, i)] = nkey
                neighbor[(nkey, i)] = key
                if nkey not in objects:
                    objects[nkey] = img
                    roots[nkey] = set(simples)
                    if len(objects) > caps.max_members:
                        return RootSystemResult("cap_exceeded", orbit_size=len(objects))
                    dirty.append(nkey)
            target = roots[nkey]
            ci = crows[i]
            added = False
            for v in current:
                if v == simples[i]:
                    continue
                coef = sum(c * x for c, x in zip(ci, v))
                w = list(v)
                w[i] -= coef
                tw = tuple(w)
                if tw not in target:
                    target.add(tw)
                    added = True
            if added:
                if len(target) > caps.max_roots:
                    return RootSystemResult("cap_exceeded", orbit_size=len(objects))
                if nkey not in dirty:
                    dirty.append(nkey)
    base_roots = sorted(roots[base_key])
    counts = {len(r) for r in roots.values()}
    assert counts == {len(base_roots)}, "positive-root counts must agree on the orbit"
    return RootSystemResult("finite", tuple(base_roots), orbit_size=len(objects))
