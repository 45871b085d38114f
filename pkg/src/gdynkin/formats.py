"""Canonical vertex numberings per shape.

Candidate sets and the classification database store diagrams in a fixed
numbering per shape (mirroring the appendix's tuple encodings), so that exact
positional equality doubles as the dedup convention.  ``to_format`` renumbers
an arbitrary diagram of a recognized shape into that numbering; any choice
among the shape's automorphisms is fine because stored sets are closed under
them.

Numberings (1-indexed, as in the paper's figures where it gives one):
  line       1 - 2 - ... - n
  triangle   cycle 1-2-3
  square     cycle 1-2-3-4, diagonals (1,3) and (2,4)
  tadpole    triangle {1,2,3}, tail 3-4-...-n
  dtype      rank 4: leaves 1,2 on center 3, tail 4 (the paper's tripod);
             rank >= 5: path 1-...-( n-1), extra leaf n on vertex 2
  tm         path 1-...-(n-1), apex n joined to path vertices (s+1, s+2)
             where s is the shorter tail length
  e6/e7      path 1-...-(n-1), leaf n on vertex 3
  ext_e6     path 1-..-5, 6 on 3, 7 on 6
  star       path 1-..-4, apex 5 on {2,3}, pendant 6 on 5
  bowtie     path 1-2-3, 4 on {1,2}, 5 on {2,3}
  semidirect path 1-2-3, 4 on {1,2}, 5 on 2
  cross      path 1-2-3, 4 on 2, 5 on 2
"""

from __future__ import annotations

from .diagram import Diagram, Shape, classify_shape

__all__ = ["to_format", "format_permutation"]


def _walk_path(d: Diagram, start: int, prev: int | None = None) -> list[int]:
    out, cur = [start], start
    while True:
        nxt = [v for v in d.neighbors(cur) if v != prev]
        if not nxt:
            return out
        prev, cur = cur, nxt[0]
        out.append(cur)


def _triangle(d: Diagram) -> tuple[int, int, int]:
    for i in range(d.rank):
        ni = set(d.neighbors(i))
        for j in sorted(ni):
            if j <= i:
                continue
            for k in sorted(ni & set(d.neighbors(j))):
                if k > j:
                    return (i, j, k)
    raise ValueError("no triangle")


def format_permutation(d: Diagram, shape: Shape | None = None) -> tuple[int, ...]:
    """A permutation sigma with d.permute(sigma) in the canonical numbering."""
    if shape is None:
        shape = classify_shape(d)
    n = d.rank
    kind = shape.kind
    order: list[int]
    if kind == "line":
        if n == 1:
            order = [0]
        else:
            end = min(v for v in range(n) if d.degree(v) <= 1)
            order = _walk_path(d, end)
    elif kind == "triangle":
        order = list(_triangle(d))
    elif kind == "square":
        order = list(_find_4cycle(d))
    elif kind == "tadpole":
        tri = _triangle(d)
        bearer = next(v for v in tri if d.degree(v) == 3)
        others = [v for v in tri if v != bearer]
        tail_start = next(v for v in d.neighbors(bearer) if v not in tri)
        order = others + [bearer] + _walk_path(d, tail_start, bearer)
    elif kind == "dtype":
        if n == 4:
            center = next(v for v in range(4) if d.degree(v) == 3)
            leaves = sorted(v for v in range(4) if v != center)
            order = [leaves[0], leaves[1], center, leaves[2]]
        else:
            hub = next(v for v in range(n) if d.degree(v) == 3)
            arms = sorted(
                (_walk_path(d, s, hub) for s in d.neighbors(hub)), key=len
            )
            short1, short2, long = arms  # lengths 1, 1, n-3
            order = [short2[0], hub] + long + [short1[0]]
    elif kind == "tm":
        tri = _triangle(d)
        bearers = [v for v in tri if d.degree(v) == 3]
        apex = next(v for v in tri if v not in bearers)
        t1 = _walk_path(d, next(u for u in d.neighbors(bearers[0]) if u not in tri), bearers[0])
        t2 = _walk_path(d, next(u for u in d.neighbors(bearers[1]) if u not in tri), bearers[1])
        if len(t1) > len(t2):
            bearers.reverse()
            t1, t2 = t2, t1
        order = t1[::-1] + [bearers[0], bearers[1]] + t2 + [apex]
    elif kind == "e":
        hub = next(v for v in range(n) if d.degree(v) == 3)
        arms = sorted((_walk_path(d, s, hub) for s in d.neighbors(hub)), key=len)
        a1, a2, a3 = arms  # lengths 1,2,(2|3)
        order = a2[::-1] + [hub] + a3 + a1
    elif kind == "ext_e6":
        hub = next(v for v in range(n) if d.degree(v) == 3)
        arms = sorted((_walk_path(d, s, hub) for s in d.neighbors(hub)), key=lambda a: a[-1])
        a1, a2, a3 = arms  # all length 2; any assignment is automorphic
        order = a1[::-1] + [hub] + a2 + a3
    elif kind == "star":
        tri = _triangle(d)
        # all three branches are pendants; any triangle vertex can be the apex
        apex = None
        for v in tri:
            off = [u for u in d.neighbors(v) if u not in tri]
            if len(off) == 1 and d.degree(off[0]) == 1:
                pend = off[0]
                rest = [w for w in tri if w != v]
                offs = [
                    [u for u in d.neighbors(w) if u not in tri] for w in rest
                ]
                if all(len(o) == 1 and d.degree(o[0]) == 1 for o in offs):
                    apex = v
                    order = [offs[0][0], rest[0], rest[1], offs[1][0], v, pend]
                    break
        if apex is None:
            raise ValueError("not a star")
    elif kind == "bowtie":
        mid = next(v for v in range(n) if d.degree(v) == 4)
        tris = [t for t in _all_triangles(d)]
        t1, t2 = tris
        w1 = [v for v in t1 if v != mid]
        w2 = [v for v in t2 if v != mid]
        order = [w1[0], mid, w2[0], w1[1], w2[1]]
    elif kind == "semidirect":
        mid = next(v for v in range(n) if d.degree(v) == 4)
        tri = _triangle(d)
        others = [v for v in tri if v != mid]
        pend = [v for v in range(n) if v not in tri]
        order = [others[0], mid, pend[0], others[1], pend[1]]
    elif kind == "cross":
        mid = next(v for v in range(n) if d.degree(v) == 4)
        leaves = [v for v in range(n) if v != mid]
        order = [leaves[0], mid, leaves[1], leaves[2], leaves[3]]
    else:
        raise ValueError(f"no canonical numbering for shape {shape}")
    sigma = [0] * n
    for pos, v in enumerate(order):
        sigma[v] = pos
    return tuple(sigma)


def _all_triangles(d: Diagram):
    out = []
    for i in range(d.rank):
        ni = set(d.neighbors(i))
        for j in sorted(ni):
            if j <= i:
                continue
            for k in sorted(ni & set(d.neighbors(j))):
                if k > j:
                    out.append((i, j, k))
    return out


def _find_4cycle(d: Diagram) -> tuple[int, int, int, int]:
    n = d.rank
    adj = d.adjacency()
    for a in range(n):
        for b in adj[a]:
            for c in adj[b]:
                if c == a:
                    continue
                for e in adj[c]:
                    if e != b and e != a and a in adj[e]:
                        return (a, b, c, e)
    raise ValueError("no 4-cycle")


def to_format(d: Diagram, shape: Shape | None = None) -> Diagram:
    """d renumbered into the canonical numbering of its shape."""
    return d.permute(format_permutation(d, shape))
