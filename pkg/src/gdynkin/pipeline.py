"""Gluing enumerations and filter chains for the rank-by-rank verification.

Candidates of each shape are glued from two classification-database pieces of
lower rank sharing a prescribed overlap, keeping only gluings whose newly
created subdiagrams of the checked kinds are again in the database.  Chains
then discard candidates by Cartan-type arguments, the criteria, and shape
analysis of reflections until (for the "bad diagram" scenarios) nothing
survives.  Candidate sets are sets of diagrams in the canonical numbering of
their shape, so exact equality reproduces the tuple-level dedup convention.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import permutations

from .cartan import cartan_matrix, is_cartan_type
from .criteria import admissible_a_tuples, collapse, criterium_a, criterium_d, criterium_e, criterium_f
from .cyclo import ONE, RootOfUnity
from .diagram import Diagram, classify_shape
from .hlist import HlistDb
from .weyl import reflect

__all__ = ["build_candidates", "run_filter_chain", "PipelineReport", "Step"]


def _uniq(cands: list[Diagram]) -> list[Diagram]:
    seen: set[Diagram] = set()
    out = []
    for d in cands:
        if d not in seen:
            seen.add(d)
            out.append(d)
    return out


def _line_slots(d: Diagram) -> tuple:
    """(v0, e01, v1, e12, v2, ...) of a line in canonical numbering."""
    out = [d.vertices[0]]
    for i in range(d.rank - 1):
        out.append(d.edge(i, i + 1))
        out.append(d.vertices[i + 1])
    return tuple(out)


def _diag(verts, edges) -> Diagram:
    return Diagram(tuple(verts), {k: v for k, v in edges.items() if not v.is_one()})


# -- rank-4 builders ---------------------------------------------------------------


def _build_squares(db: HlistDb) -> list[Diagram]:
    tris = db.shape_list(3, "triangle")
    lines = db.shape_list(3, "line")
    line_keys = {_line_slots(l) for l in lines}
    out: list[Diagram] = []
    with_diag: list[Diagram] = []
    # squares with one diagonal: two triangles sharing the (0,2) side
    by_side: dict[tuple, list[Diagram]] = {}
    for t in tris:
        by_side.setdefault((t.vertices[0], t.vertices[2], t.edge(0, 2)), []).append(t)
    for key, group in by_side.items():
        for a in group:
            for b in group:
                if (
                    (a.vertices[1], a.edge(0, 1), a.vertices[0], b.edge(0, 1), b.vertices[1])
                    not in line_keys
                ):
                    continue
                if (
                    (a.vertices[1], a.edge(1, 2), a.vertices[2], b.edge(1, 2), b.vertices[1])
                    not in line_keys
                ):
                    continue
                with_diag.append(
                    _diag(
                        (a.vertices[0], a.vertices[1], a.vertices[2], b.vertices[1]),
                        {
                            (0, 1): a.edge(0, 1),
                            (1, 2): a.edge(1, 2),
                            (2, 3): b.edge(1, 2),
                            (0, 3): b.edge(0, 1),
                            (0, 2): a.edge(0, 2),
                        },
                    )
                )
    with_diag = _uniq(with_diag)
    out.extend(with_diag)
    # complete squares: add the second diagonal with a third triangle
    tri_keys = {
        (t.vertices[0], t.vertices[1], t.vertices[2], t.edge(0, 1), t.edge(1, 2), t.edge(0, 2)): t
        for t in tris
    }
    tri_set = set(tri_keys)
    by_e = {}
    for t in tris:
        by_e.setdefault(
            (t.vertices[0], t.edge(0, 1), t.vertices[1], t.edge(1, 2), t.vertices[2]), []
        ).append(t.edge(0, 2))
    for s in with_diag:
        key = (s.vertices[1], s.edge(0, 1), s.vertices[0], s.edge(0, 3), s.vertices[3])
        for new_diag in by_e.get(key, ()):
            if (
                s.vertices[1],
                s.vertices[2],
                s.vertices[3],
                s.edge(1, 2),
                s.edge(2, 3),
                new_diag,
            ) not in tri_set:
                continue
            edges = dict(s.edges)
            edges[(1, 3)] = new_diag
            out.append(_diag(s.vertices, edges))
    # clean squares: two lines sharing both endpoints
    by_ends: dict[tuple, list[Diagram]] = {}
    for l in lines:
        by_ends.setdefault((l.vertices[0], l.vertices[2]), []).append(l)
    for key, group in by_ends.items():
        for a in group:
            for b in group:
                if (
                    (a.vertices[1], a.edge(0, 1), a.vertices[0], b.edge(0, 1), b.vertices[1])
                    not in line_keys
                ):
                    continue
                if (
                    (a.vertices[1], a.edge(1, 2), a.vertices[2], b.edge(1, 2), b.vertices[1])
                    not in line_keys
                ):
                    continue
                out.append(
                    _diag(
                        (a.vertices[0], a.vertices[1], a.vertices[2], b.vertices[1]),
                        {
                            (0, 1): a.edge(0, 1),
                            (1, 2): a.edge(1, 2),
                            (2, 3): b.edge(1, 2),
                            (0, 3): b.edge(0, 1),
                        },
                    )
                )
    return _uniq(out)


def _build_tadpoles4(db: HlistDb) -> list[Diagram]:
    tris = db.shape_list(3, "triangle")
    lines = db.shape_list(3, "line")
    line_keys = {_line_slots(l) for l in lines}
    by_prefix: dict[tuple, list[tuple]] = {}
    for l in lines:
        s = _line_slots(l)
        by_prefix.setdefault(s[:3], []).append(s[3:])
    out = []
    for t in tris:
        key = (t.vertices[1], t.edge(1, 2), t.vertices[2])
        for (e_tail, v_tail) in by_prefix.get(key, ()):
            if (t.vertices[0], t.edge(0, 2), t.vertices[2], e_tail, v_tail) not in line_keys:
                continue
            out.append(
                _diag(
                    (t.vertices[0], t.vertices[1], t.vertices[2], v_tail),
                    {
                        (0, 1): t.edge(0, 1),
                        (1, 2): t.edge(1, 2),
                        (0, 2): t.edge(0, 2),
                        (2, 3): e_tail,
                    },
                )
            )
    return _uniq(out)


def _build_tripods4(db: HlistDb) -> list[Diagram]:
    lines = db.shape_list(3, "line")
    line_keys = {_line_slots(l) for l in lines}
    by_suffix: dict[tuple, list[tuple]] = {}
    for l in lines:
        s = _line_slots(l)
        by_suffix.setdefault(s[2:], []).append(s[:2])
    out = []
    for s_shared, group in by_suffix.items():
        for (va, ea) in group:
            for (vb, eb) in group:
                if (va, ea, s_shared[0], eb, vb) not in line_keys:
                    continue
                out.append(
                    _diag(
                        (va, vb, s_shared[0], s_shared[2]),
                        {(0, 2): ea, (1, 2): eb, (2, 3): s_shared[1]},
                    )
                )
    return _uniq(out)


def _extend_line(db: HlistDb, rank: int) -> list[Diagram]:
    """Lines of the given rank glued from two rank-1-smaller lines."""
    lines = db.shape_list(rank - 1, "line")
    by_prefix: dict[tuple, list[tuple]] = {}
    for l in lines:
        s = _line_slots(l)
        by_prefix.setdefault(s[:-2], []).append(s[-2:])
    out = []
    for l in lines:
        s = _line_slots(l)
        for (e_new, v_new) in by_prefix.get(s[2:], ()):
            verts = tuple(l.vertices) + (v_new,)
            edges = {(i, i + 1): l.edge(i, i + 1) for i in range(rank - 2)}
            edges[(rank - 2, rank - 1)] = e_new
            out.append(_diag(verts, edges))
    return _uniq(out)


# -- rank >= 5 builders --------------------------------------------------------------


def _tadpole_slots(d: Diagram) -> tuple:
    """(v0, v1, base edges, tail slots) for matching; triangle {0,1,2}, tail off 2."""
    tail = [d.vertices[2]]
    for i in range(2, d.rank - 1):
        tail.append(d.edge(i, i + 1))
        tail.append(d.vertices[i + 1])
    return (
        d.vertices[0],
        d.vertices[1],
        d.edge(0, 1),
        d.edge(0, 2),
        d.edge(1, 2),
        tuple(tail),
    )


def _build_tadpoles(db: HlistDb, rank: int) -> list[Diagram]:
    """Tadpoles of rank n: a rank n-1 tadpole extended by a rank-3 line at the tail."""
    tads = db.shape_list(rank - 1, "tadpole")
    lines3 = db.shape_list(3, "line")
    lines_prev = {_line_slots(l) for l in db.shape_list(rank - 1, "line")}
    by_prefix: dict[tuple, list[tuple]] = {}
    for l in lines3:
        s = _line_slots(l)
        by_prefix.setdefault(s[:3], []).append(s[3:])
    out = []
    for t in tads:
        last, prev = rank - 2, rank - 3
        key = (t.vertices[prev], t.edge(prev, last), t.vertices[last])
        for (e_new, v_new) in by_prefix.get(key, ()):
            # the through-line from vertex 0 across the triangle and down the tail
            slots = [t.vertices[0], t.edge(0, 2)]
            for i in range(2, rank - 1):
                slots.append(t.vertices[i])
                if i + 1 <= last:
                    slots.append(t.edge(i, i + 1))
            slots += [e_new, v_new]
            if tuple(slots) not in lines_prev:
                continue
            verts = tuple(t.vertices) + (v_new,)
            edges = dict(t.edges)
            edges[(rank - 2, rank - 1)] = e_new
            out.append(_diag(verts, edges))
    return _uniq(out)


def _build_dtype(db: HlistDb, rank: int) -> list[Diagram]:
    """D-type of rank n: two rank n-1 lines sharing all but their first vertex.

    Keeps a gluing only when the new rank n-1 D-subdiagram (both fork tips
    plus the shared path shortened by one) is in the database.
    """
    lines = db.shape_list(rank - 1, "line")
    dcheck = set(db.shape_list(rank - 1, "dtype"))
    by_suffix: dict[tuple, list[tuple]] = {}
    for l in lines:
        s = _line_slots(l)
        by_suffix.setdefault(s[2:], []).append(s[:2])
    out = []
    for s_shared, group in by_suffix.items():
        sv = s_shared[0::2]  # shared path vertices
        se = s_shared[1::2]  # shared path edges
        for (va, ea) in group:
            for (vb, eb) in group:
                if rank == 5:
                    sub = _diag(
                        (va, vb, sv[0], sv[1]),
                        {(0, 2): ea, (1, 2): eb, (2, 3): se[0]},
                    )
                else:
                    verts = (va,) + sv[:-1] + (vb,)
                    edges = {(0, 1): ea, (1, rank - 2): eb}
                    for i in range(1, rank - 3):
                        edges[(i, i + 1)] = se[i - 1]
                    sub = _diag(verts, edges)
                if sub not in dcheck:
                    continue
                verts = (va,) + sv + (vb,)
                edges = {(0, 1): ea, (1, rank - 1): eb}
                for i in range(1, rank - 2):
                    edges[(i, i + 1)] = se[i - 1]
                out.append(_diag(verts, edges))
    return _uniq(out)


def _build_tm(db: HlistDb, rank: int) -> list[Diagram]:
    """Triangle-in-middle of rank n from a rank n-1 tadpole and a rank-4 tadpole.

    The two pieces share the triangle with opposite orientation; the through
    line of rank n-1 must be in the database.  For rank 5 both pieces are
    rank-4 tadpoles, matching the appendix construction verbatim.
    """
    big = db.shape_list(rank - 1, "tadpole")
    small = db.shape_list(4, "tadpole")
    lines_prev = {_line_slots(l) for l in db.shape_list(rank - 1, "line")}
    by_tri: dict[tuple, list] = {}
    for e in small:
        # triangle of e reversed: e.v2 glues to d.v0
        key = (e.vertices[2], e.vertices[1], e.vertices[0], e.edge(0, 1), e.edge(1, 2), e.edge(0, 2))
        by_tri.setdefault(key, []).append((e.vertices[3], e.edge(2, 3)))
    out = []
    for d in big:
        key = (
            d.vertices[0],
            d.vertices[1],
            d.vertices[2],
            d.edge(0, 1),
            d.edge(0, 2),
            d.edge(1, 2),
        )
        for (v_new, e_new) in by_tri.get(key, ()):
            # through line: v_new - d0 - d2 - d3 - ... in path order
            slots = [v_new, e_new, d.vertices[0], d.edge(0, 2)]
            for i in range(2, rank - 1):
                slots.append(d.vertices[i])
                if i + 1 <= rank - 2:
                    slots.append(d.edge(i, i + 1))
            if tuple(slots) not in lines_prev:
                continue
            # canonical tm numbering: path v_new, d0, d2, d3, ..., apex = d1
            verts = [v_new, d.vertices[0], d.vertices[2]]
            verts += [d.vertices[i] for i in range(3, rank - 1)]
            verts.append(d.vertices[1])
            edges = {
                (0, 1): e_new,
                (1, 2): d.edge(0, 2),
                (1, rank - 1): d.edge(0, 1),
                (2, rank - 1): d.edge(1, 2),
            }
            for i in range(2, rank - 2):
                edges[(i, i + 1)] = d.edge(i, i + 1)
            out.append(_diag(tuple(verts), edges))
    return _uniq(out)


def _build_e(db: HlistDb, rank: int) -> list[Diagram]:
    if rank == 6:
        return _build_e6(db)
    return _build_e7(db)


def _build_e6(db: HlistDb) -> list[Diagram]:
    """E6 shape from two D5 pieces sharing hub, branch, and both inner arms."""
    d5 = db.shape_list(5, "dtype")
    lines5 = {_line_slots(l) for l in db.shape_list(5, "line")}
    by_core: dict[tuple, list[tuple]] = {}
    for a in d5:
        # canonical dtype5: path 0-1-2-3, branch 4 on 1
        core = (
            a.vertices[1],
            a.vertices[2],
            a.vertices[0],
            a.edge(1, 2),
            a.edge(0, 1),
            a.vertices[4],
            a.edge(1, 4),
        )
        by_core.setdefault(core, []).append((a.vertices[3], a.edge(2, 3)))
    out = []
    for a in d5:
        core = (
            a.vertices[1],
            a.vertices[0],
            a.vertices[2],
            a.edge(0, 1),
            a.edge(1, 2),
            a.vertices[4],
            a.edge(1, 4),
        )
        for (v_new, e_new) in by_core.get(core, ()):
            line = (
                a.vertices[3],
                a.edge(2, 3),
                a.vertices[2],
                a.edge(1, 2),
                a.vertices[1],
                a.edge(0, 1),
                a.vertices[0],
                e_new,
                v_new,
            )
            if line not in lines5:
                continue
            verts = (a.vertices[3], a.vertices[2], a.vertices[1], a.vertices[0], v_new, a.vertices[4])
            edges = {
                (0, 1): a.edge(2, 3),
                (1, 2): a.edge(1, 2),
                (2, 3): a.edge(0, 1),
                (3, 4): e_new,
                (2, 5): a.edge(1, 4),
            }
            out.append(_diag(verts, edges))
    return _uniq(out)


def _build_e7(db: HlistDb) -> list[Diagram]:
    """E7 shape: an E6 piece extended along the long arm by a rank-3 line."""
    e6 = db.shape_list(6, "e")
    lines3 = db.shape_list(3, "line")
    d6 = set(db.shape_list(6, "dtype"))
    by_prefix: dict[tuple, list[tuple]] = {}
    for l in lines3:
        s = _line_slots(l)
        by_prefix.setdefault(s[:3], []).append(s[3:])
    out = []
    for a in e6:
        key = (a.vertices[3], a.edge(3, 4), a.vertices[4])
        for (e_new, v_new) in by_prefix.get(key, ()):
            # check the D6 subdiagram {1..5, leaf}: path 1-2-3-4-new, branch on 2
            sub = _diag(
                (a.vertices[1], a.vertices[2], a.vertices[3], a.vertices[4], v_new, a.vertices[5]),
                {
                    (0, 1): a.edge(1, 2),
                    (1, 2): a.edge(2, 3),
                    (2, 3): a.edge(3, 4),
                    (3, 4): e_new,
                    (1, 5): a.edge(2, 5),
                },
            )
            if sub not in d6:
                continue
            verts = tuple(a.vertices[:5]) + (v_new, a.vertices[5])
            edges = {
                (0, 1): a.edge(0, 1),
                (1, 2): a.edge(1, 2),
                (2, 3): a.edge(2, 3),
                (3, 4): a.edge(3, 4),
                (4, 5): e_new,
                (2, 6): a.edge(2, 5),
            }
            out.append(_diag(verts, edges))
    return _uniq(out)


# -- forbidden-shape builders ----------------------------------------------------------


def _build_bowtie(db: HlistDb) -> list[Diagram]:
    tads = db.shape_list(4, "tadpole")
    tad_set = set(tads)
    by_core: dict[tuple, list] = {}
    for t in tads:
        by_core.setdefault(
            (t.vertices[2], t.vertices[0], t.edge(0, 2), t.vertices[3], t.edge(2, 3)),
            [],
        ).append(t)
    out = []
    for a in tads:
        core = (a.vertices[2], a.vertices[3], a.edge(2, 3), a.vertices[0], a.edge(0, 2))
        for b in by_core.get(core, ()):
            t1 = _diag(
                (a.vertices[0], a.vertices[1], a.vertices[2], b.vertices[1]),
                {
                    (0, 1): a.edge(0, 1),
                    (0, 2): a.edge(0, 2),
                    (1, 2): a.edge(1, 2),
                    (2, 3): b.edge(1, 2),
                },
            )
            t2 = _diag(
                (b.vertices[0], b.vertices[1], b.vertices[2], a.vertices[1]),
                {
                    (0, 1): b.edge(0, 1),
                    (0, 2): b.edge(0, 2),
                    (1, 2): b.edge(1, 2),
                    (2, 3): a.edge(1, 2),
                },
            )
            if t1 not in tad_set or t2 not in tad_set:
                continue
            verts = (a.vertices[0], a.vertices[2], b.vertices[0], a.vertices[1], b.vertices[1])
            edges = {
                (0, 1): a.edge(0, 2),
                (1, 2): b.edge(0, 2),
                (0, 3): a.edge(0, 1),
                (1, 3): a.edge(1, 2),
                (1, 4): b.edge(1, 2),
                (2, 4): b.edge(0, 1),
            }
            out.append(_diag(verts, edges))
    return _uniq(out)


def _build_semidirect(db: HlistDb) -> list[Diagram]:
    tads = db.shape_list(4, "tadpole")
    tripods = db.shape_list(4, "dtype")
    tad_set = set(tads)
    tri_set = set(tripods)
    by_core: dict[tuple, list] = {}
    for p in tripods:
        # canonical tripod: leaves 0,1, center 2, tail 3
        by_core.setdefault(
            (p.vertices[0], p.edge(0, 2), p.vertices[2], p.edge(2, 3), p.vertices[3]), []
        ).append((p.vertices[1], p.edge(1, 2)))
        by_core.setdefault(
            (p.vertices[1], p.edge(1, 2), p.vertices[2], p.edge(2, 3), p.vertices[3]), []
        ).append((p.vertices[0], p.edge(0, 2)))
        by_core.setdefault(
            (p.vertices[0], p.edge(0, 2), p.vertices[2], p.edge(1, 2), p.vertices[1]), []
        ).append((p.vertices[3], p.edge(2, 3)))
        by_core.setdefault(
            (p.vertices[1], p.edge(1, 2), p.vertices[2], p.edge(0, 2), p.vertices[0]), []
        ).append((p.vertices[3], p.edge(2, 3)))
        by_core.setdefault(
            (p.vertices[3], p.edge(2, 3), p.vertices[2], p.edge(0, 2), p.vertices[0]), []
        ).append((p.vertices[1], p.edge(1, 2)))
        by_core.setdefault(
            (p.vertices[3], p.edge(2, 3), p.vertices[2], p.edge(1, 2), p.vertices[1]), []
        ).append((p.vertices[0], p.edge(0, 2)))
    out = []
    for t in tads:
        core = (t.vertices[0], t.edge(0, 2), t.vertices[2], t.edge(2, 3), t.vertices[3])
        for (v_new, e_new) in by_core.get(core, ()):
            chk_t = _diag(
                (t.vertices[0], t.vertices[1], t.vertices[2], v_new),
                {
                    (0, 1): t.edge(0, 1),
                    (0, 2): t.edge(0, 2),
                    (1, 2): t.edge(1, 2),
                    (2, 3): e_new,
                },
            )
            chk_p = _diag(
                (t.vertices[1], v_new, t.vertices[2], t.vertices[3]),
                {(0, 2): t.edge(1, 2), (1, 2): e_new, (2, 3): t.edge(2, 3)},
            )
            if chk_t not in tad_set or chk_p not in tri_set:
                continue
            verts = (t.vertices[0], t.vertices[2], t.vertices[3], t.vertices[1], v_new)
            edges = {
                (0, 1): t.edge(0, 2),
                (1, 2): t.edge(2, 3),
                (0, 3): t.edge(0, 1),
                (1, 3): t.edge(1, 2),
                (1, 4): e_new,
            }
            out.append(_diag(verts, edges))
    return _uniq(out)


def _build_cross(db: HlistDb) -> list[Diagram]:
    tripods = db.shape_list(4, "dtype")
    tri_set = set(tripods)
    by_core: dict[tuple, list] = {}
    for p in tripods:
        # six ways to see (path leaf, center, path leaf) with the remaining leaf free
        combos = [
            ((p.vertices[0], p.edge(0, 2), p.vertices[2], p.edge(2, 3), p.vertices[3]), (p.vertices[1], p.edge(1, 2))),
            ((p.vertices[1], p.edge(1, 2), p.vertices[2], p.edge(2, 3), p.vertices[3]), (p.vertices[0], p.edge(0, 2))),
            ((p.vertices[0], p.edge(0, 2), p.vertices[2], p.edge(1, 2), p.vertices[1]), (p.vertices[3], p.edge(2, 3))),
            ((p.vertices[1], p.edge(1, 2), p.vertices[2], p.edge(0, 2), p.vertices[0]), (p.vertices[3], p.edge(2, 3))),
            ((p.vertices[3], p.edge(2, 3), p.vertices[2], p.edge(0, 2), p.vertices[0]), (p.vertices[1], p.edge(1, 2))),
            ((p.vertices[3], p.edge(2, 3), p.vertices[2], p.edge(1, 2), p.vertices[1]), (p.vertices[0], p.edge(0, 2))),
        ]
        for core, extra in combos:
            by_core.setdefault(core, []).append(extra)
    out = []
    for core, extras in by_core.items():
        v0, e01, v1, e12, v2 = core
        for (va, ea) in extras:
            for (vb, eb) in extras:
                c1 = _diag((va, vb, v1, v0), {(0, 2): ea, (1, 2): eb, (2, 3): e01})
                c2 = _diag((va, vb, v1, v2), {(0, 2): ea, (1, 2): eb, (2, 3): e12})
                if c1 not in tri_set or c2 not in tri_set:
                    continue
                if is_cartan_type(c1) and is_cartan_type(c2):
                    continue
                verts = (v0, v1, v2, va, vb)
                edges = {(0, 1): e01, (1, 2): e12, (1, 3): ea, (1, 4): eb}
                out.append(_diag(verts, edges))
    return _uniq(out)


def _build_star(db: HlistDb) -> list[Diagram]:
    tms = db.shape_list(5, "tm")
    tm_set = set(tms)
    by_core: dict[tuple, list] = {}
    for b in tms:
        # b = (p, t, x, w, y): path p-t-x-w, apex y on (t, x)
        core = (
            b.vertices[1],
            b.vertices[2],
            b.vertices[3],
            b.vertices[4],
            b.edge(1, 2),
            b.edge(2, 3),
            b.edge(1, 4),
            b.edge(2, 4),
        )
        by_core.setdefault(core, []).append((b.vertices[0], b.edge(0, 1)))
    out = []
    for a in tms:
        # a = (w, x, y, z, t): path w-x-y-z, apex t on (x, y)
        core = (
            a.vertices[4],
            a.vertices[1],
            a.vertices[0],
            a.vertices[2],
            a.edge(1, 4),
            a.edge(0, 1),
            a.edge(2, 4),
            a.edge(1, 2),
        )
        for (v_new, e_new) in by_core.get(core, ()):
            chk = _diag(
                (v_new, a.vertices[4], a.vertices[2], a.vertices[3], a.vertices[1]),
                {
                    (0, 1): e_new,
                    (1, 2): a.edge(2, 4),
                    (2, 3): a.edge(2, 3),
                    (1, 4): a.edge(1, 4),
                    (2, 4): a.edge(1, 2),
                },
            )
            if chk not in tm_set:
                continue
            verts = tuple(a.vertices) + (v_new,)
            edges = dict(a.edges)
            edges[(4, 5)] = e_new
            out.append(_diag(verts, edges))
    return _uniq(out)


def _build_ext_e6(db: HlistDb) -> list[Diagram]:
    e6s = db.shape_list(6, "e")
    e6_set = set(e6s)
    by_core: dict[tuple, list] = {}
    for b in e6s:
        # b = (g, f, c, d, e, leaf=b1): path g-f-c-d-e, leaf b1 on c
        core = (
            b.vertices[2],
            b.vertices[3],
            b.vertices[4],
            b.edge(2, 3),
            b.edge(3, 4),
            b.vertices[1],
            b.edge(1, 2),
            b.vertices[5],
            b.edge(2, 5),
        )
        by_core.setdefault(core, []).append((b.vertices[0], b.edge(0, 1)))
    out = []
    for a in e6s:
        core = (
            a.vertices[2],
            a.vertices[3],
            a.vertices[4],
            a.edge(2, 3),
            a.edge(3, 4),
            a.vertices[5],
            a.edge(2, 5),
            a.vertices[1],
            a.edge(1, 2),
        )
        for (v_new, e_new) in by_core.get(core, ()):
            chk = _diag(
                (a.vertices[0], a.vertices[1], a.vertices[2], a.vertices[5], v_new, a.vertices[3]),
                {
                    (0, 1): a.edge(0, 1),
                    (1, 2): a.edge(1, 2),
                    (2, 3): a.edge(2, 5),
                    (3, 4): e_new,
                    (2, 5): a.edge(2, 3),
                },
            )
            if chk not in e6_set:
                continue
            verts = tuple(a.vertices) + (v_new,)
            edges = dict(a.edges)
            edges[(5, 6)] = e_new
            out.append(_diag(verts, edges))
    return _uniq(out)


def _build_tm7_center(db: HlistDb) -> list[Diagram]:
    """Rank-7 centered triangle-in-middle (tails 2 and 2) from two rank-6 tm's."""
    tms = db.shape_list(6, "tm")
    lines6 = {_line_slots(l) for l in db.shape_list(6, "line")}
    by_core: dict[tuple, list] = {}
    for y in tms:
        # y = (p4, p3, p2, p1, p0, t): path with apex t on (p3, p2)
        core = (
            y.vertices[3],
            y.vertices[2],
            y.vertices[1],
            y.vertices[0],
            y.vertices[5],
            y.edge(2, 3),
            y.edge(1, 2),
            y.edge(0, 1),
            y.edge(2, 5),
            y.edge(1, 5),
        )
        by_core.setdefault(core, []).append((y.vertices[4], y.edge(3, 4)))
    out = []
    for x in tms:
        # x = (p1, p2, p3, p4, p5, t)
        core = (
            x.vertices[0],
            x.vertices[1],
            x.vertices[2],
            x.vertices[3],
            x.vertices[5],
            x.edge(0, 1),
            x.edge(1, 2),
            x.edge(2, 3),
            x.edge(1, 5),
            x.edge(2, 5),
        )
        for (v_new, e_new) in by_core.get(core, ()):
            line = (v_new, e_new) + _line_slots(
                _diag(
                    tuple(x.vertices[:5]),
                    {(i, i + 1): x.edge(i, i + 1) for i in range(4)},
                )
            )
            if line not in lines6:
                continue
            verts = (v_new,) + tuple(x.vertices)
            edges = {(0, 1): e_new}
            for i in range(4):
                edges[(i + 1, i + 2)] = x.edge(i, i + 1)
            edges[(2, 6)] = x.edge(1, 5)
            edges[(3, 6)] = x.edge(2, 5)
            out.append(_diag(verts, edges))
    return _uniq(out)


_BUILDERS = {
    (4, "square"): _build_squares,
    (4, "tadpole"): _build_tadpoles4,
    (4, "dtype"): _build_tripods4,
    (4, "line"): lambda db: _extend_line(db, 4),
    (5, "bowtie"): _build_bowtie,
    (5, "semidirect"): _build_semidirect,
    (5, "cross"): _build_cross,
    (6, "star"): _build_star,
    (7, "ext_e6"): _build_ext_e6,
    (7, "tm_center"): _build_tm7_center,
}
for _r in (5, 6, 7):
    _BUILDERS[(_r, "tadpole")] = (lambda r: lambda db: _build_tadpoles(db, r))(_r)
    _BUILDERS[(_r, "dtype")] = (lambda r: lambda db: _build_dtype(db, r))(_r)
    _BUILDERS[(_r, "line")] = (lambda r: lambda db: _extend_line(db, r))(_r)
    _BUILDERS[(_r, "tm")] = (lambda r: lambda db: _build_tm(db, r))(_r)
for _r in (6, 7):
    _BUILDERS[(_r, "e")] = (lambda r: lambda db: _build_e(db, r))(_r)


def build_candidates(rank: int, shape: str, db: HlistDb) -> list[Diagram]:
    """All gluings for the given rank and shape, in deterministic order."""
    try:
        builder = _BUILDERS[(rank, shape)]
    except KeyError:
        raise ValueError(f"unsupported (rank, shape) = ({rank}, {shape})") from None
    return sorted(builder(db), key=Diagram.serialize)


# -- filter chains ------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    name: str
    args: tuple = ()


@dataclass
class PipelineReport:
    scenario: str
    steps: list[tuple[str, int, int]] = field(default_factory=list)
    survivors: list[Diagram] = field(default_factory=list)
    caveats: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def counts(self) -> list[int]:
        if not self.steps:
            return []
        return [self.steps[0][1]] + [s[2] for s in self.steps]

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "steps": [{"name": n, "in": i, "out": o} for n, i, o in self.steps],
            "survivors": sorted(d.serialize() for d in self.survivors),
            "caveats": list(self.caveats),
            "seconds": round(self.seconds, 3),
        }

    def text(self) -> str:
        lines = [f"scenario {self.scenario}"]
        for n, i, o in self.steps:
            lines.append(f"  {n:<40} {i:>7} -> {o:>7}")
        lines.append(f"  survivors: {len(self.survivors)}   ({self.seconds:.2f}s)")
        return "\n".join(lines)


def _words_up_to(rank: int, depth: int):
    """Nonempty reflection words of length <= depth without immediate repeats."""
    frontier: list[tuple[int, ...]] = [()]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for i in range(rank):
                if w and w[-1] == i:
                    continue
                word = w + (i,)
                yield word
                nxt.append(word)
        frontier = nxt


def _word_image(d: Diagram, word: tuple[int, ...]) -> Diagram:
    for i in word:
        d = reflect(d, i)
    return d


def _fails_crit_a(d: Diagram, member) -> bool:
    return any(not member(criterium_a(d, i, j, n)) for (i, j, n) in admissible_a_tuples(d))


def _fails_crit_d(d: Diagram, member) -> bool:
    if d.rank != 4:
        return False
    c = cartan_matrix(d)
    for sigma in permutations(range(4)):
        inv = [0] * 4
        for a, b in enumerate(sigma):
            inv[b] = a
        m21 = -c[inv[1]][inv[0]]
        m23 = -c[inv[1]][inv[2]]
        if m21 == 0 or m23 == 0:
            continue
        for m in range(1, m21 + 1):
            for n in range(1, m23 + 1):
                if not member(criterium_d(d, sigma, m, n)):
                    return True
    return False


def _fails_crit_e(d: Diagram, member) -> bool:
    if d.rank != 4:
        return False
    c = cartan_matrix(d)
    for sigma in permutations(range(4)):
        inv = [0] * 4
        for a, b in enumerate(sigma):
            inv[b] = a
        m12 = -c[inv[0]][inv[1]]
        m23 = -c[inv[1]][inv[2]]
        m34 = -c[inv[2]][inv[3]]
        if 0 in (m12, m23, m34):
            continue
        for m in range(1, m12 + 1):
            for n in range(1, m23 + 1):
                for p in range(1, m34 + 1):
                    if not member(criterium_e(d, sigma, m, n, p)):
                        return True
    return False


def run_filter_chain(
    candidates: list[Diagram],
    chain: list[Step],
    db: HlistDb,
    scenario: str = "chain",
) -> PipelineReport:
    """Apply the steps in order, recording counts; see Step names in _apply_step.

    Diagrams removed by criteria-style steps are certified to have infinite GK
    dimension; their permutation-canonical keys feed the fixpoint step, which
    may discard survivors reflecting onto an already-discarded candidate.
    """
    t0 = time.time()
    rep = PipelineReport(scenario)
    cur = list(candidates)
    known_bad: set[bytes] = set()
    for step in chain:
        before = len(cur)
        nxt = _apply_step(cur, step, db, rep, known_bad)
        if step.name not in ("remove_hlist", "dedup_perms"):
            kept = set(nxt)
            known_bad.update(d.canonical_key() for d in cur if d not in kept)
        cur = nxt
        rep.steps.append((_step_label(step), before, len(cur)))
    rep.survivors = sorted(cur, key=Diagram.serialize)
    rep.seconds = time.time() - t0
    return rep


def _step_label(step: Step) -> str:
    if step.args:
        return f"{step.name}({','.join(map(str, step.args))})"
    return step.name


def _apply_step(
    cur: list[Diagram],
    step: Step,
    db: HlistDb,
    rep: PipelineReport,
    known_bad: set[bytes],
) -> list[Diagram]:
    name = step.name
    member = db.contains
    if name == "remove_hlist":
        rank = cur[0].rank if cur else 0
        hset = set(db.entries(rank)) if rank else set()
        return [d for d in cur if d not in hset]
    if name == "dedup_perms":
        seen: set[bytes] = set()
        out = []
        for d in cur:
            k = d.canonical_key()
            if k not in seen:
                seen.add(k)
                out.append(d)
        return out
    if name == "not_cartan":
        return [d for d in cur if not is_cartan_type(d)]
    if name == "crit_a":
        return [d for d in cur if not _fails_crit_a(d, member)]
    if name == "crit_d":
        return [d for d in cur if not _fails_crit_d(d, member)]
    if name == "crit_e":
        return [d for d in cur if not _fails_crit_e(d, member)]
    if name == "crit_a_reflections":
        depth = step.args[0] if step.args else 1
        out = []
        for d in cur:
            bad = False
            for w in _words_up_to(d.rank, depth):
                img = _word_image(d, w)
                if _fails_crit_a(img, member):
                    bad = True
                    break
            if not bad:
                out.append(d)
        return out
    if name == "reflect_shape":
        # discard when any listed reflection word lands in any listed shape kind
        words, kinds = step.args
        out = []
        for d in cur:
            bad = False
            for w in words:
                if classify_shape(_word_image(d, w)).kind in kinds:
                    bad = True
                    break
            if not bad:
                out.append(d)
        return out
    if name == "collapse_pairs":
        # discard when collapsing any listed (i, j) pair leaves the database
        pairs = step.args[0]
        out = []
        for d in cur:
            bad = False
            for (i, j) in pairs:
                try:
                    img = collapse(d, i, j)
                except ValueError:
                    continue
                if not member(img):
                    bad = True
                    break
            if not bad:
                out.append(d)
        return out
    if name == "crit_f":
        sigmas = step.args[0]
        out = []
        for d in cur:
            bad = False
            for sigma in sigmas:
                try:
                    img = criterium_f(d, sigma)
                except ValueError:
                    continue
                if not member(img):
                    bad = True
                    break
            if not bad:
                out.append(d)
        return out
    if name == "reflect_discarded_fixpoint":
        # iteratively discard survivors some reflection image of which is an
        # already-discarded (hence infinite) candidate, up to relabeling
        depth = step.args[0] if step.args else 1
        bad_keys = set(known_bad)
        survivors = list(cur)
        changed = True
        while changed:
            changed = False
            kept = []
            for d in survivors:
                dead = False
                for w in _words_up_to(d.rank, depth):
                    if _word_image(d, w).canonical_key() in bad_keys:
                        dead = True
                        break
                if dead:
                    bad_keys.add(d.canonical_key())
                    changed = True
                else:
                    kept.append(d)
            survivors = kept
        return survivors
    if name == "reflect_not_hlist":
        # discard when a reflection word image of a listed shape is outside the db
        words, kinds = step.args
        out = []
        for d in cur:
            bad = False
            for w in words:
                img = _word_image(d, w)
                if classify_shape(img).kind in kinds and not member(img):
                    bad = True
                    break
            if not bad:
                out.append(d)
        return out
    raise ValueError(f"unknown step {name!r}")
