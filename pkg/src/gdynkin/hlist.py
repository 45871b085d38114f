"""The encoded classification database for ranks 2..7.

Rank-3 parametric families are the seventeen lines and three triangles the
case analysis works with; rank-4 families cover the parametric tadpoles and
tripods.  Everything else ships as fixed entries whose correctness is not a
matter of transcription trust: hlist_validate recomputes reflection closure
and root-system finiteness for every stored diagram.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .cartan import cartan_matrix
from .cyclo import ONE, RootOfUnity, gf_elements, rou
from .diagram import Diagram, Shape, classify_shape, shape_automorphisms
from .formats import to_format
from .weyl import Caps, DEFAULT_CAPS, positive_roots, reflect

__all__ = [
    "Monomial",
    "ParametricFamily",
    "HlistDb",
    "load_hlist",
    "save_hlist",
    "Membership",
    "ValidationReport",
    "hlist_validate",
    "default_data_dir",
]

GF = gf_elements()


# -- monomials and families ------------------------------------------------------

_MONO_RE = re.compile(r"^(-)?(?:1|(?:q\^(-?\d+))?(?:\*?r\^(-?\d+))?)$")


@dataclass(frozen=True)
class Monomial:
    """(-1)^sign * q^qe * r^re; the label alphabet of family patterns."""

    sign: int = 0
    qe: int = 0
    re: int = 0

    def evaluate(self, q: RootOfUnity, r: RootOfUnity | None = None) -> RootOfUnity:
        out = q ** self.qe
        if self.re:
            if r is None:
                raise ValueError("two-parameter slot needs r")
            out = out * r ** self.re
        if self.sign:
            out = out * rou(1, 2)
        return out

    def token(self) -> str:
        parts = []
        if self.qe:
            parts.append(f"q^{self.qe}")
        if self.re:
            parts.append(f"r^{self.re}")
        body = "*".join(parts) if parts else "1"
        return ("-" if self.sign else "") + body

    @classmethod
    def parse(cls, tok: str) -> "Monomial":
        m = _MONO_RE.match(tok.strip())
        if not m or (m.group(2) is None and m.group(3) is None and "1" not in tok):
            raise ValueError(f"bad monomial token {tok!r}")
        return cls(
            1 if m.group(1) else 0,
            int(m.group(2) or 0),
            int(m.group(3) or 0),
        )


_FAMILY_RE = re.compile(
    r"^family\s+rank=(\d+)\s+shape=(\w+)(?:\((\d+)\))?\s+arity=([12])"
    r"\s+v=\[([^\]]*)\]\s+e=\[([^\]]*)\]\s+row=(\S+)$"
)
_EDGE_SLOT_RE = re.compile(r"\((\d+),(\d+)\)=([^,\s]+)")


@dataclass(frozen=True)
class ParametricFamily:
    """A parametric row: per-slot monomials plus slot-wellformedness validity.

    An evaluation is valid iff every vertex slot and every declared edge slot
    evaluates to something different from 1.
    """

    rank: int
    shape: Shape
    arity: int
    vertex_slots: tuple[Monomial, ...]
    edge_slots: tuple[tuple[tuple[int, int], Monomial], ...]
    row: str

    def evaluate(self, q: RootOfUnity, r: RootOfUnity | None = None) -> Diagram | None:
        verts = []
        for mono in self.vertex_slots:
            lab = mono.evaluate(q, r)
            if lab.is_one():
                return None
            verts.append(lab)
        edges = {}
        for (i, j), mono in self.edge_slots:
            lab = mono.evaluate(q, r)
            if lab.is_one():
                return None
            edges[(i, j)] = lab
        return Diagram(tuple(verts), edges)

    def instances(self) -> list[tuple[Diagram, RootOfUnity, RootOfUnity | None]]:
        """All valid evaluations over G_f (both parameters range over G_f)."""
        out = []
        if self.arity == 1:
            for q in GF:
                d = self.evaluate(q)
                if d is not None:
                    out.append((d, q, None))
        else:
            for q in GF:
                for r in GF:
                    d = self.evaluate(q, r)
                    if d is not None:
                        out.append((d, q, r))
        return out

    def serialize(self) -> str:
        shp = f"{self.shape.kind}({self.shape.param})" if self.shape.kind == "square" else (
            f"{self.shape.kind}{self.shape.param}" if self.shape.kind == "e" else self.shape.kind
        )
        v = ",".join(m.token() for m in self.vertex_slots)
        e = ",".join(f"({i + 1},{j + 1})={m.token()}" for (i, j), m in self.edge_slots)
        return f"family rank={self.rank} shape={shp} arity={self.arity} v=[{v}] e=[{e}] row={self.row}"

    @classmethod
    def parse(cls, line: str) -> "ParametricFamily":
        m = _FAMILY_RE.match(line.strip())
        if not m:
            raise ValueError(f"bad family line: {line!r}")
        rank = int(m.group(1))
        kind = m.group(2)
        param = int(m.group(3) or 0)
        if kind in ("e6", "e7"):
            kind, param = "e", int(kind[1])
        shape = Shape(kind, param)
        verts = tuple(Monomial.parse(t) for t in m.group(5).split(",") if t.strip())
        edges = []
        for em in _EDGE_SLOT_RE.finditer(m.group(6)):
            i, j = int(em.group(1)) - 1, int(em.group(2)) - 1
            edges.append(((i, j), Monomial.parse(em.group(3))))
        if len(verts) != rank:
            raise ValueError(f"family {m.group(7)}: expected {rank} vertex slots")
        return cls(rank, shape, int(m.group(4)), verts, tuple(edges), m.group(7))


# -- the database ------------------------------------------------------------------


@dataclass
class RankData:
    rank: int
    families: list[ParametricFamily] = field(default_factory=list)
    finite: list[tuple[Diagram, str]] = field(default_factory=list)
    # computed at load time
    evaluated: dict[Diagram, str] = field(default_factory=dict)
    tags: dict[Diagram, str] = field(default_factory=dict)
    by_shape: dict[str, tuple[Diagram, ...]] = field(default_factory=dict)

    def close(self):
        """Evaluate families over G_f, add permutations, build the indexes."""
        self.evaluated = {}
        for fam in self.families:
            for d, q, r in fam.instances():
                self._add(self.evaluated, d, fam.row)
        self.tags = {}
        for d, tag in self.finite:
            self._add(self.tags, d, tag)
        for d, tag in self.evaluated.items():
            self.tags.setdefault(d, tag)
        shapes: dict[str, list[Diagram]] = {}
        for d in self.tags:
            shapes.setdefault(classify_shape(d).kind, []).append(d)
        self.by_shape = {
            k: tuple(sorted(v, key=Diagram.serialize)) for k, v in shapes.items()
        }

    @staticmethod
    def _add(store: dict[Diagram, str], d: Diagram, tag: str):
        for sigma in shape_automorphisms(d):
            store.setdefault(d.permute(sigma), tag)

    def shape_list(self, kind: str) -> tuple[Diagram, ...]:
        return self.by_shape.get(kind, ())


@dataclass(frozen=True)
class Membership:
    status: str  # "finite" | "family" | "product" | "none"
    tag: str = ""
    params: tuple[RootOfUnity, ...] = ()
    parts: tuple["Membership", ...] = ()

    def __bool__(self):
        return self.status != "none"


NOT_IN = Membership("none")


class HlistDb:
    """Loaded classification tables with membership and shape indexes."""

    def __init__(self, ranks: dict[int, RankData]):
        self.ranks = ranks

    def rank_data(self, rank: int) -> RankData:
        try:
            return self.ranks[rank]
        except KeyError:
            raise ValueError(f"no hlist data for rank {rank}") from None

    def shape_list(self, rank: int, kind: str) -> tuple[Diagram, ...]:
        return self.rank_data(rank).shape_list(kind)

    def entries(self, rank: int) -> tuple[Diagram, ...]:
        rd = self.rank_data(rank)
        return tuple(sorted(rd.tags, key=Diagram.serialize))

    # -- membership -----------------------------------------------------------

    def contains(self, d: Diagram, families: bool = True) -> bool:
        return bool(self.membership(d, families=families))

    def membership(self, d: Diagram, families: bool = True) -> Membership:
        """Classification verdict for an arbitrary diagram of rank <= 7.

        Disconnected diagrams are members iff each connected component is
        (twisted tensor factorization); rank-1 components always belong.
        """
        if d.rank > 7:
            raise ValueError("membership is defined for rank <= 7 only")
        comps = d.components()
        if len(comps) > 1:
            parts = []
            for comp in comps:
                sub = self.membership(d.restrict(comp), families=families)
                if not sub:
                    return NOT_IN
                parts.append(sub)
            return Membership("product", parts=tuple(parts))
        return self._connected_membership(d, families)

    def _connected_membership(self, d: Diagram, families: bool) -> Membership:
        if d.rank == 1:
            return Membership("finite", "rank1")
        rd = self.ranks.get(d.rank)
        if rd is None:
            return NOT_IN
        shape = classify_shape(d)
        if shape.kind == "other":
            return NOT_IN
        try:
            fd = to_format(d, shape)
        except ValueError:
            return NOT_IN
        tag = rd.tags.get(fd)
        if tag is not None:
            return Membership("finite", tag)
        if families:
            hit = self._match_families(fd, rd, shape)
            if hit is not None:
                return hit
        return NOT_IN

    def _match_families(self, fd: Diagram, rd: RankData, shape: Shape) -> Membership | None:
        autos = shape_automorphisms(fd)
        variants = {fd.permute(a) for a in autos}
        for fam in rd.families:
            if fam.shape != shape:
                continue
            for var in variants:
                hit = _match_one(fam, var)
                if hit is not None:
                    return Membership("family", fam.row, hit)
        return None


def _slot_values(fam: ParametricFamily, d: Diagram):
    for idx, mono in enumerate(fam.vertex_slots):
        yield mono, d.vertices[idx]
    for (i, j), mono in fam.edge_slots:
        lab = d.edge(i, j)
        if lab.is_one():
            return  # declared edge missing: cannot match
        yield mono, lab


def _roots_of(u: RootOfUnity, e: int) -> list[RootOfUnity]:
    """All x with x^e = u (e != 0)."""
    if e < 0:
        return _roots_of(u.inverse(), -e)
    return [rou(u.num + k * u.den, e * u.den) for k in range(e)]


def _match_one(fam: ParametricFamily, d: Diagram) -> tuple[RootOfUnity, ...] | None:
    slots = list(_slot_values(fam, d))
    if len(slots) != len(fam.vertex_slots) + len(fam.edge_slots):
        return None
    qslots = [(m, lab) for m, lab in slots if m.qe and not m.re]
    if not qslots:
        qslots = [(m, lab) for m, lab in slots if m.qe]
    anchors_q = min(qslots, key=lambda t: abs(t[0].qe), default=None) if qslots else None
    if fam.arity == 1:
        if anchors_q is None:
            return None
        mono, lab = anchors_q
        target = lab * rou(1, 2) if mono.sign else lab
        for q in _roots_of(target, mono.qe):
            if all(m.evaluate(q) == v for m, v in slots):
                return (q,)
        return None
    # two parameters: solve q from a pure-q anchor, then r
    pure_q = [(m, lab) for m, lab in slots if m.qe and not m.re]
    pure_r = [(m, lab) for m, lab in slots if m.re and not m.qe]
    if not pure_q or not pure_r:
        return None
    mq, labq = min(pure_q, key=lambda t: abs(t[0].qe))
    mr, labr = min(pure_r, key=lambda t: abs(t[0].re))
    tq = labq * rou(1, 2) if mq.sign else labq
    tr = labr * rou(1, 2) if mr.sign else labr
    for q in _roots_of(tq, mq.qe):
        for r in _roots_of(tr, mr.re):
            if all(m.evaluate(q, r) == v for m, v in slots):
                return (q, r)
    return None


# -- persistence --------------------------------------------------------------------

_HEADER = "# gdynkin-hlist v1"


def default_data_dir() -> Path:
    return Path(__file__).resolve().parent / "data" / "hlist"


def load_hlist(path: str | Path | None = None) -> HlistDb:
    """Load and close the database from a directory of rank files."""
    base = Path(path) if path is not None else default_data_dir()
    if not base.is_dir():
        raise FileNotFoundError(f"hlist data directory not found: {base}")
    ranks: dict[int, RankData] = {}
    for file in sorted(base.glob("rank*.txt")):
        rd = _load_rank_file(file)
        ranks[rd.rank] = rd
    if not ranks:
        raise ValueError(f"no rank files in {base}")
    for rd in ranks.values():
        rd.close()
    return HlistDb(ranks)


def _load_rank_file(file: Path) -> RankData:
    lines = file.read_text().splitlines()
    if not lines or not lines[0].startswith(_HEADER):
        raise ValueError(f"{file.name}: missing or bad header")
    m = re.search(r"rank=(\d+)", lines[0])
    if not m:
        raise ValueError(f"{file.name}: header lacks rank")
    rank = int(m.group(1))
    rd = RankData(rank)
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("family "):
            fam = ParametricFamily.parse(line)
            if fam.rank != rank:
                raise ValueError(f"{file.name}:{lineno}: family rank mismatch ({fam.row})")
            rd.families.append(fam)
        elif line.startswith("entry "):
            m = re.match(r"^entry\s+row=(\S+)\s*\|\s*(.*)$", line)
            if not m:
                raise ValueError(f"{file.name}:{lineno}: bad entry line")
            tag = m.group(1)
            try:
                d = Diagram.parse(m.group(2))
            except Exception as exc:
                raise ValueError(f"{file.name}:{lineno}: row {tag}: {exc}") from exc
            if d.rank != rank:
                raise ValueError(f"{file.name}:{lineno}: row {tag}: rank mismatch")
            rd.finite.append((d, tag))
        else:
            raise ValueError(f"{file.name}:{lineno}: unrecognized line")
    return rd


def save_hlist(db: HlistDb, path: str | Path):
    base = Path(path)
    base.mkdir(parents=True, exist_ok=True)
    for rank, rd in sorted(db.ranks.items()):
        out = [f"{_HEADER} rank={rank}"]
        for fam in rd.families:
            out.append(fam.serialize())
        for d, tag in rd.finite:
            out.append(f"entry row={tag} | {d.serialize()}")
        (base / f"rank{rank}.txt").write_text("\n".join(out) + "\n")


# -- validation ----------------------------------------------------------------------


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [f"{k}: {v} checked" for k, v in sorted(self.checked.items())]
        lines += [f"FAIL {f}" for f in self.failures]
        lines.append("hlist-validate: " + ("PASS" if self.ok else f"{len(self.failures)} failure(s)"))
        return "\n".join(lines)


def _order_in(lab: RootOfUnity, orders: tuple[int, ...]) -> bool:
    return any(n % lab.den == 0 for n in orders)


def hlist_validate(db: HlistDb, caps: Caps = DEFAULT_CAPS) -> ValidationReport:
    """Recompute the database's own soundness guarantees.

    (a) finite rank-3 lines live in G_6 u G_9 and triangles in G_6;
    (b) parametric rank-4 tadpoles and tripods have all m_ij in {0, 1};
    (c) the union set is closed under reflections (up to membership);
    (d) every stored entry has a finite root system within the caps.
    """
    rep = ValidationReport()
    rd3 = db.ranks.get(3)
    if rd3 is not None:
        count = 0
        for d, tag in rd3.finite:
            count += 1
            kind = classify_shape(d).kind
            orders = (6, 9) if kind == "line" else (6,)
            labels = list(d.vertices) + list(d.edges.values())
            if not all(_order_in(lab, orders) for lab in labels):
                rep.failures.append(f"(a) rank-3 {tag}: label outside G_6 u G_9: {d.serialize()}")
        rep.checked["(a) finite rank-3 label orders"] = count
    rd4 = db.ranks.get(4)
    if rd4 is not None:
        count = 0
        for fam in rd4.families:
            if fam.shape.kind not in ("tadpole", "dtype"):
                continue
            for d, q, r in fam.instances():
                count += 1
                c = cartan_matrix(d)
                ms = {-c[i][j] for i in range(4) for j in range(4) if i != j}
                if not ms <= {0, 1}:
                    rep.failures.append(
                        f"(b) family {fam.row} at q={q.token()}: m_ij = {sorted(ms)}"
                    )
        rep.checked["(b) rank-4 parametric m_ij in {0,1}"] = count
    closure = roots_checked = 0
    for rank in sorted(db.ranks):
        for d in db.entries(rank):
            closure += 1
            for i in range(d.rank):
                img = reflect(d, i)
                if not db.contains(img):
                    rep.failures.append(
                        f"(c) rank-{rank} entry not closed under rho_{i + 1}: {d.serialize()}"
                    )
                    break
            res = positive_roots(d, caps)
            roots_checked += 1
            if not res.finite:
                rep.failures.append(
                    f"(d) rank-{rank} entry root system {res.status}: {d.serialize()}"
                )
    rep.checked["(c) reflection closure"] = closure
    rep.checked["(d) finite root systems"] = roots_checked
    return rep
