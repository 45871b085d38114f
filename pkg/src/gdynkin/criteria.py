"""Degree-vector subquotient diagrams and the Criteria A-F filters.

Each criterium picks theta-1 degree vectors B orthogonal to a vector omega and
produces the rank theta-1 diagram with labels q_{beta,gamma} = prod q_ij^{b_i c_j}.
If the input has finite GK dimension the output must again have finite root
system, so an output falling outside the classification database certifies
infinite GK dimension.  omega is recorded for audit only; it never enters the
label computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .cartan import cartan_matrix, gcm_finite_type, is_cartan_type
from .cyclo import ONE, RootOfUnity
from .diagram import Diagram
from .weyl import reflect

__all__ = [
    "DegreeBasis",
    "degree_vector_diagram",
    "criterium_a",
    "collapse",
    "criterium_b",
    "criterium_c",
    "criterium_d",
    "criterium_e",
    "criterium_f",
    "Verdict",
    "passes_criteria",
    "admissible_a_tuples",
]


@dataclass(frozen=True)
class DegreeBasis:
    """theta-1 integer degree vectors plus the orthogonal omega (audit only)."""

    vectors: tuple[tuple[int, ...], ...]
    omega: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("empty degree basis")
        if self.omega:
            for b in self.vectors:
                if sum(x * y for x, y in zip(b, self.omega)) != 0:
                    raise ValueError(f"basis vector {b} not orthogonal to omega")


def degree_vector_diagram(d: Diagram, basis: DegreeBasis) -> Diagram:
    """Rank len(B) diagram with vertex labels q_{b,b} and edges q_{b,c} q_{c,b}.

    Works on the canonical matrix representative; the result depends only on
    the diagram (any splitting of q~ into q_ij q_ji gives the same output).
    """
    vec = basis.vectors
    verts = []
    for b in vec:
        lab = ONE
        for i in range(d.rank):
            if b[i]:
                lab = lab * d.vertices[i] ** (b[i] * b[i])
                for j in range(i + 1, d.rank):
                    if b[j]:
                        lab = lab * d.edge(i, j) ** (b[i] * b[j])
        verts.append(lab)
    edges: dict[tuple[int, int], RootOfUnity] = {}
    for a in range(len(vec)):
        for bidx in range(a + 1, len(vec)):
            u, w = vec[a], vec[bidx]
            lab = ONE
            for i in range(d.rank):
                if u[i] and w[i]:
                    lab = lab * d.vertices[i] ** (2 * u[i] * w[i])
                for j in range(i + 1, d.rank):
                    e = u[i] * w[j] + u[j] * w[i]
                    if e:
                        lab = lab * d.edge(i, j) ** e
            if not lab.is_one():
                edges[(a, bidx)] = lab
    return Diagram(tuple(verts), edges)


def _unit(rank: int, i: int, coef: int = 1) -> tuple[int, ...]:
    return tuple(coef if k == i else 0 for k in range(rank))


def _sum_vec(rank: int, pairs) -> tuple[int, ...]:
    v = [0] * rank
    for coef, i in pairs:
        v[i] += coef
    return tuple(v)


def _m_entry(d: Diagram, i: int, j: int) -> int:
    return -cartan_matrix(d)[i][j]


def criterium_a(d: Diagram, i: int, j: int, n: int = 1) -> Diagram:
    """Criterium A for (i, j; n): B = {a_k | k != i,j} u {a_j + n a_i}.

    Requires m_ij != 0 and 1 <= n <= m_ij.  The collapsed vertex comes first,
    then the untouched vertices in increasing order.
    """
    if i == j:
        raise ValueError("need i != j")
    m = _m_entry(d, i, j)
    if m == 0:
        raise ValueError(f"criterium A needs m_ij != 0 at ({i + 1},{j + 1})")
    if not 1 <= n <= m:
        raise ValueError(f"criterium A needs 1 <= n <= m_ij = {m}, got n = {n}")
    rank = d.rank
    vecs = [_sum_vec(rank, [(1, j), (n, i)])]
    vecs += [_unit(rank, k) for k in range(rank) if k not in (i, j)]
    omega = _sum_vec(rank, [(1, i), (-n, j)])
    return degree_vector_diagram(d, DegreeBasis(tuple(vecs), omega))


def collapse(d: Diagram, i: int, j: int) -> Diagram:
    """Collapse vertices i and j: Criterium A with n = 1, extended to q~_ij = 1.

    For non-adjacent i, j the bracket [x_i, x_j]_c is primitive exactly when
    q~_ij = 1, so the same degree-vector construction applies; the appendix
    uses this form on the valence-four shapes.
    """
    if i == j:
        raise ValueError("need i != j")
    if d.edge(i, j).is_one():
        rank = d.rank
        vecs = [_sum_vec(rank, [(1, j), (1, i)])]
        vecs += [_unit(rank, k) for k in range(rank) if k not in (i, j)]
        omega = _sum_vec(rank, [(1, i), (-1, j)])
        return degree_vector_diagram(d, DegreeBasis(tuple(vecs), omega))
    return criterium_a(d, i, j, 1)


def criterium_b(d: Diagram, i: int, j: int, k: int) -> Diagram:
    """Criterium B: B = {a_p | p != i,j,k} u {a_i + a_k, a_j + a_k}; m_ik, m_jk != 0."""
    if len({i, j, k}) != 3:
        raise ValueError("need pairwise different i, j, k")
    if _m_entry(d, i, k) == 0 or _m_entry(d, j, k) == 0:
        raise ValueError("criterium B needs m_ik, m_jk != 0")
    rank = d.rank
    vecs = [_sum_vec(rank, [(1, i), (1, k)]), _sum_vec(rank, [(1, j), (1, k)])]
    vecs += [_unit(rank, p) for p in range(rank) if p not in (i, j, k)]
    omega = _sum_vec(rank, [(1, i), (1, j), (-1, k)])
    return degree_vector_diagram(d, DegreeBasis(tuple(vecs), omega))


def criterium_c(d: Diagram) -> Diagram:
    """Criterium C (theta >= 6): B = {a_1, a_theta} u {a_i + a_{i+1}, i in 2..theta-2}."""
    rank = d.rank
    if rank < 6:
        raise ValueError("criterium C needs rank >= 6")
    for i in range(1, rank - 1):
        if _m_entry(d, i, i + 1) == 0:
            raise ValueError(f"criterium C needs m_{i + 1},{i + 2} != 0")
    vecs = [_unit(rank, 0)]
    vecs += [_sum_vec(rank, [(1, i), (1, i + 1)]) for i in range(1, rank - 2)]
    vecs += [_unit(rank, rank - 1)]
    omega = tuple(
        (-1) ** (i + 1) if 1 <= i <= rank - 2 else 0 for i in range(rank)
    )
    return degree_vector_diagram(d, DegreeBasis(tuple(vecs), omega))


def criterium_d(d: Diagram, sigma: tuple[int, ...] | None = None, m: int = 1, n: int = 1) -> Diagram:
    """Criterium D (theta = 4): B = {a_1 + m a_2, n a_2 + a_3, a_4} after sigma."""
    if d.rank != 4:
        raise ValueError("criterium D needs rank 4")
    if sigma is not None:
        d = d.permute(sigma)
    m21 = _m_entry(d, 1, 0)
    m23 = _m_entry(d, 1, 2)
    if m21 == 0 or m23 == 0:
        raise ValueError("criterium D needs m_21, m_23 != 0")
    if not (1 <= m <= m21 and 1 <= n <= m23):
        raise ValueError("criterium D needs m <= m_21 and n <= m_23")
    vecs = (
        _sum_vec(4, [(1, 0), (m, 1)]),
        _sum_vec(4, [(n, 1), (1, 2)]),
        _unit(4, 3),
    )
    omega = _sum_vec(4, [(1, 1), (-m, 0), (-n, 2)])
    return degree_vector_diagram(d, DegreeBasis(vecs, omega))


def criterium_e(
    d: Diagram, sigma: tuple[int, ...] | None = None, m: int = 1, n: int = 1, p: int = 1
) -> Diagram:
    """Criterium E (theta = 4): B = {m a_1 + a_2, n a_2 + a_3, p a_3 + a_4} after sigma."""
    if d.rank != 4:
        raise ValueError("criterium E needs rank 4")
    if sigma is not None:
        d = d.permute(sigma)
    m12 = _m_entry(d, 0, 1)
    m23 = _m_entry(d, 1, 2)
    m34 = _m_entry(d, 2, 3)
    if 0 in (m12, m23, m34):
        raise ValueError("criterium E needs m_12, m_23, m_34 != 0")
    if not (1 <= m <= m12 and 1 <= n <= m23 and 1 <= p <= m34):
        raise ValueError("criterium E bounds violated")
    vecs = (
        _sum_vec(4, [(m, 0), (1, 1)]),
        _sum_vec(4, [(n, 1), (1, 2)]),
        _sum_vec(4, [(p, 2), (1, 3)]),
    )
    omega = _sum_vec(4, [(1, 0), (-m, 1), (m * n, 2), (-m * n * p, 3)])
    return degree_vector_diagram(d, DegreeBasis(vecs, omega))


def criterium_f(d: Diagram, sigma: tuple[int, ...] | None = None) -> Diagram:
    """Criterium F (theta >= 5): B = {a_1+a_2, a_2+a_3, a_3+a_4} u {a_p | p >= 5}."""
    if d.rank < 5:
        raise ValueError("criterium F needs rank >= 5")
    if sigma is not None:
        d = d.permute(sigma)
    for a, b in ((0, 1), (1, 2), (2, 3)):
        if _m_entry(d, a, b) == 0:
            raise ValueError("criterium F needs m_12, m_23, m_34 != 0")
    rank = d.rank
    vecs = [
        _sum_vec(rank, [(1, 0), (1, 1)]),
        _sum_vec(rank, [(1, 1), (1, 2)]),
        _sum_vec(rank, [(1, 2), (1, 3)]),
    ]
    vecs += [_unit(rank, p) for p in range(4, rank)]
    omega = _sum_vec(rank, [(1, 0), (-1, 1), (1, 2), (-1, 3)])
    return degree_vector_diagram(d, DegreeBasis(tuple(vecs), omega))


def admissible_a_tuples(d: Diagram) -> list[tuple[int, int, int]]:
    """All (i, j, n) with m_ij != 0 and 1 <= n <= m_ij."""
    c = cartan_matrix(d)
    out = []
    for i in range(d.rank):
        for j in range(d.rank):
            if i != j:
                for n in range(1, -c[i][j] + 1):
                    out.append((i, j, n))
    return out


# -- policy-driven verdicts ------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    survives: bool
    criterium: str = ""
    witness: tuple = ()
    offending: Diagram | None = None

    def __bool__(self):
        return self.survives


@dataclass(frozen=True)
class Policy:
    """Which criteria to run and how deep to chase reflections."""

    criteria: tuple[str, ...] = ("cartan", "A")
    reflection_depth: int = 0
    forbidden_shapes: tuple[str, ...] = ()


def _fails_here(d: Diagram, policy: Policy, membership) -> Verdict | None:
    if "cartan" in policy.criteria and is_cartan_type(d):
        if gcm_finite_type(cartan_matrix(d)) is None:
            return Verdict(False, "CartanFilter", ())
    shape = d.classify_shape()
    if shape.kind in policy.forbidden_shapes or (
        "cycle" in policy.forbidden_shapes and any(d.has_cycle(k) for k in range(4, d.rank + 1))
    ):
        return Verdict(False, "ForbiddenShape", (shape.kind,))
    if "A" in policy.criteria:
        for (i, j, n) in admissible_a_tuples(d):
            out = criterium_a(d, i, j, n)
            if not membership(out):
                return Verdict(False, "A", (i + 1, j + 1, n), out)
    if "B" in policy.criteria:
        for k in range(d.rank):
            nbrs = [p for p in range(d.rank) if p != k and _m_entry(d, p, k) != 0]
            for i, j in permutations(nbrs, 2):
                if i < j:
                    out = criterium_b(d, i, j, k)
                    if not membership(out):
                        return Verdict(False, "B", (i + 1, j + 1, k + 1), out)
    if "C" in policy.criteria and d.rank >= 6:
        try:
            out = criterium_c(d)
        except ValueError:
            out = None
        if out is not None and not membership(out):
            return Verdict(False, "C", (), out)
    if "D" in policy.criteria and d.rank == 4:
        for sigma in permutations(range(4)):
            try:
                out = criterium_d(d, sigma)
            except ValueError:
                continue
            if not membership(out):
                return Verdict(False, "D", tuple(s + 1 for s in sigma), out)
    if "E" in policy.criteria and d.rank == 4:
        for sigma in permutations(range(4)):
            try:
                out = criterium_e(d, sigma)
            except ValueError:
                continue
            if not membership(out):
                return Verdict(False, "E", tuple(s + 1 for s in sigma), out)
    if "F" in policy.criteria and d.rank >= 5:
        for sigma in permutations(range(d.rank)):
            try:
                out = criterium_f(d, sigma)
            except ValueError:
                continue
            if not membership(out):
                return Verdict(False, "F", tuple(s + 1 for s in sigma), out)
    return None


def passes_criteria(d: Diagram, policy: Policy, membership) -> Verdict:
    """Run the policy's criteria on d and on reflections up to the policy depth.

    ``membership`` decides whether a produced rank theta-1 diagram lies in the
    classification database.  Any failure certifies infinite GK dimension.
    """
    seen = {d.serialize(): ()}
    frontier = [(d, ())]
    for depth in range(policy.reflection_depth + 1):
        nxt = []
        for cur, word in frontier:
            bad = _fails_here(cur, policy, membership)
            if bad is not None:
                return Verdict(False, bad.criterium, bad.witness + ("via", word), bad.offending)
            if depth < policy.reflection_depth:
                for i in range(d.rank):
                    img = reflect(cur, i)
                    key = img.serialize()
                    if key not in seen:
                        seen[key] = word + (i + 1,)
                        nxt.append((img, word + (i + 1,)))
        frontier = nxt
    return Verdict(True)
