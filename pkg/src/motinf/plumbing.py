"""Decorated dual graphs of normal-crossing boundaries of surfaces.

Vertices are the rational branches of the boundary with the degree d of
their normal bundle O(d); edges carry the intersection points between two
branches, each with a multiplicity and a residue field (k or a quadratic
extension). From this data we build the incidence matrix, the quadratic
Mumford matrix over GW(k), and the homology motives at infinity H_0..H_3.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .complexes import P1, POINT, Generator, Stratum, TateComplex, complex_homology, ordered_cech_complex
from .errors import NonRationalPoint, OddSelfIntersection, ValidationError
from .gw import RATIONAL, EtaleAlgebra, Field, GwElement, SquareClass, euler_class_P1_bundle
from .gw import n_epsilon, trace_form_class
from .gw_matrix import DiagonalizationResult, GwMatrix, gw_diagonalize, rank_realization
from .motives import ArtinTateMotive, TateSummand
from .snf import SnfResult, smith_normal_form, transpose


@dataclass(frozen=True)
class Vertex:
    name: str
    d: int


@dataclass(frozen=True)
class IntersectionPoint:
    """A point of D_i n D_j with multiplicity ``m`` and residue ``residue``
    (``"rational"`` or the square class d of k(sqrt d))."""

    m: int = 1
    residue: object = RATIONAL
    unit_override: GwElement | None = None

    @property
    def is_rational(self) -> bool:
        return self.residue == RATIONAL

    def algebra(self, field: Field) -> EtaleAlgebra:
        return EtaleAlgebra(field, (self.residue,))

    @property
    def degree(self) -> int:
        return 1 if self.is_rational else 2


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    points: tuple[IntersectionPoint, ...] = (IntersectionPoint(),)


@dataclass(frozen=True)
class PlumbingGraph:
    field: Field
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        V = len(self.vertices)
        for k, e in enumerate(self.edges):
            path = f"edges[{k}]"
            if not (0 <= e.i < V and 0 <= e.j < V):
                raise ValidationError(f"vertex index out of range ({e.i}, {e.j})", path)
            if e.i == e.j:
                raise ValidationError("self-edge", path)
            if e.i > e.j:
                raise ValidationError(f"edge must satisfy i < j, got ({e.i}, {e.j})", path)
            if not e.points:
                raise ValidationError("edge without intersection points", f"{path}.points")
            for t, pt in enumerate(e.points):
                ppath = f"{path}.points[{t}]"
                if not isinstance(pt.m, int) or pt.m < 1:
                    raise ValidationError(f"multiplicity must be a positive integer, got {pt.m!r}", f"{ppath}.m")
                if not pt.is_rational:
                    if not isinstance(pt.residue, SquareClass) or pt.residue.field != self.field:
                        raise ValidationError("bad residue", f"{ppath}.residue")
                    if pt.residue.is_trivial:
                        raise ValidationError("quadratic residue with square d splits", f"{ppath}.residue")
                if pt.unit_override is not None:
                    u = pt.unit_override
                    if u.field != self.field or not u.is_unit():
                        raise ValidationError("unit_override must be a unit of GW(k)", f"{ppath}.unit_override")

    @property
    def points(self) -> list[tuple[int, int, IntersectionPoint]]:
        return [(e.i, e.j, pt) for e in self.edges for pt in e.points]

    def is_rational(self) -> bool:
        return all(pt.is_rational for _, _, pt in self.points)

    def has_even_weights(self) -> bool:
        return all(v.d % 2 == 0 for v in self.vertices)

    def permuted(self, perm: Sequence[int]) -> PlumbingGraph:
        """Relabel: old vertex ``v`` moves to position ``perm[v]``."""
        V = len(self.vertices)
        if sorted(perm) != list(range(V)):
            raise ValidationError("not a permutation")
        verts = [None] * V
        for old, new in enumerate(perm):
            verts[new] = self.vertices[old]
        edges = []
        for e in self.edges:
            a, b = perm[e.i], perm[e.j]
            edges.append(Edge(min(a, b), max(a, b), e.points))
        return PlumbingGraph(self.field, tuple(verts), tuple(edges))

    # records

    @classmethod
    def from_record(cls, rec: dict, field: Field | None = None) -> PlumbingGraph:
        if not isinstance(rec, dict):
            raise ValidationError("plumbing record must be an object")
        # An explicit field overrides the record's; residue tokens that do not
        # exist over it are rejected below with their path.
        if field is None:
            if "field" not in rec:
                raise ValidationError("missing field", "field")
            field = Field.parse(rec["field"])
        verts = rec.get("vertices")
        if not isinstance(verts, list):
            raise ValidationError("vertices must be a list", "vertices")
        vertices = []
        for k, v in enumerate(verts):
            if not isinstance(v, dict) or not isinstance(v.get("d"), int) or isinstance(v.get("d"), bool):
                raise ValidationError("vertex needs an integer d", f"vertices[{k}]")
            vertices.append(Vertex(str(v.get("name", f"v{k}")), v["d"]))
        edges_rec = rec.get("edges", [])
        if not isinstance(edges_rec, list):
            raise ValidationError("edges must be a list", "edges")
        edges = []
        for k, e in enumerate(edges_rec):
            path = f"edges[{k}]"
            if not isinstance(e, dict) or not all(isinstance(e.get(x), int) for x in ("i", "j")):
                raise ValidationError("edge needs integer i and j", path)
            if e["i"] == e["j"]:
                raise ValidationError("self-edge", path)
            pts_rec = e.get("points", [{"m": 1, "residue": RATIONAL}])
            if not isinstance(pts_rec, list):
                raise ValidationError("points must be a list", f"{path}.points")
            pts = [_point_from_record(p, field, f"{path}.points[{t}]") for t, p in enumerate(pts_rec)]
            edges.append(Edge(e["i"], e["j"], tuple(pts)))
        return cls(field, tuple(vertices), tuple(edges))

    def to_record(self) -> dict:
        return {
            "field": self.field.to_record(),
            "vertices": [{"name": v.name, "d": v.d} for v in self.vertices],
            "edges": [
                {"i": e.i, "j": e.j, "points": [_point_to_record(p) for p in e.points]} for e in self.edges
            ],
        }


def _point_from_record(rec, field: Field, path: str) -> IntersectionPoint:
    if not isinstance(rec, dict):
        raise ValidationError("point must be an object", path)
    m = rec.get("m", 1)
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValidationError(f"multiplicity must be a positive integer, got {m!r}", f"{path}.m")
    res = rec.get("residue", RATIONAL)
    if res == RATIONAL:
        residue = RATIONAL
    elif isinstance(res, str) and res.startswith("quadratic:"):
        try:
            residue = SquareClass(field, res.split(":", 1)[1])
        except ValidationError as exc:
            raise ValidationError(str(exc), f"{path}.residue") from None
    else:
        raise ValidationError(f"residue must be 'rational' or 'quadratic:<class>', got {res!r}", f"{path}.residue")
    override = rec.get("unit_override")
    if override is not None:
        if not isinstance(override, dict):
            raise ValidationError("unit_override must be a GW element record", f"{path}.unit_override")
        try:
            override = GwElement.from_record(override, field)
        except ValidationError as exc:
            raise ValidationError(str(exc), f"{path}.unit_override") from None
    return IntersectionPoint(m, residue, override)


def _point_to_record(p: IntersectionPoint) -> dict:
    rec: dict = {"m": p.m, "residue": RATIONAL if p.is_rational else f"quadratic:{p.residue.token}"}
    if p.unit_override is not None:
        rec["unit_override"] = {k: v for k, v in p.unit_override.to_record().items() if k != "field"}
    return rec


def incidence_matrix(G: PlumbingGraph) -> list[list[int]]:
    """One row per intersection point on edge (i, j): +1 at column i, -1 at column j."""
    rows = []
    for i, j, pt in G.points:
        if not pt.is_rational:
            raise NonRationalPoint(
                f"intersection point on edge ({i}, {j}) has a quadratic residue field; "
                "the incidence/homology path only handles rational points"
            )
        row = [0] * len(G.vertices)
        row[i], row[j] = 1, -1
        rows.append(row)
    return rows


def _point_degree(G: PlumbingGraph, pt: IntersectionPoint) -> GwElement:
    val = n_epsilon(pt.m, G.field) * trace_form_class(pt.algebra(G.field))
    return val * pt.unit_override if pt.unit_override is not None else val


def mumford_matrix(G: PlumbingGraph) -> GwMatrix:
    """Quadratic Mumford matrix: Euler classes on the diagonal, quadratic
    intersection degrees off it."""
    for k, v in enumerate(G.vertices):
        if v.d % 2:
            raise OddSelfIntersection(
                f"vertex {v.name} (vertices[{k}]) has odd self-intersection {v.d}: its normal bundle is not "
                "orientable, so only the classical (rank-only) Mumford matrix is defined"
            )
    V = len(G.vertices)
    zero = GwElement.zero(G.field)
    a = [[zero] * V for _ in range(V)]
    for k, v in enumerate(G.vertices):
        a[k][k] = euler_class_P1_bundle(v.d, G.field)
    for i, j, pt in G.points:
        val = _point_degree(G, pt)
        a[i][j] = a[i][j] + val
        a[j][i] = a[j][i] + val
    return GwMatrix.from_rows(G.field, a) if V else GwMatrix(G.field, 0, 0, ())


def classical_mumford_matrix(G: PlumbingGraph) -> list[list[int]]:
    """Integer Mumford matrix: self-intersections on the diagonal and
    sum of m_x * [k(x):k] off it (signed by any unit override)."""
    V = len(G.vertices)
    a = [[0] * V for _ in range(V)]
    for k, v in enumerate(G.vertices):
        a[k][k] = v.d
    for i, j, pt in G.points:
        sign = pt.unit_override.rank if pt.unit_override is not None else 1
        a[i][j] += sign * pt.m * pt.degree
        a[j][i] += sign * pt.m * pt.degree
    return a


def cech_boundary_complex(G: PlumbingGraph) -> TateComplex:
    """Ordered Cech complex of the boundary: P^1 per vertex, points per edge."""
    if not G.is_rational():
        incidence_matrix(G)  # raises NonRationalPoint
    strata: dict = {(k,): Stratum(P1) for k in range(len(G.vertices))}
    for e in G.edges:
        key = frozenset((e.i, e.j))
        prev = strata.get(key)
        count = len(e.points) + (prev.rank if prev is not None else 0)
        strata[key] = Stratum(POINT, count)
    return ordered_cech_complex(strata, order=list(range(len(G.vertices))))


@dataclass(frozen=True)
class BoundaryDecomposition:
    """M(boundary) = D_X + (#vertices) 1(1)[2]; D_X is the two-term complex
    points -> vertices."""

    combinatorial: TateComplex
    geometric: ArtinTateMotive


def boundary_motive_decomposition(G: PlumbingGraph) -> BoundaryDecomposition:
    N = incidence_matrix(G)
    V, E = len(G.vertices), len(N)
    P = transpose(N, (E, V))
    terms = (tuple(_gens(V)), tuple(_gens(E))) if E else (tuple(_gens(V)),)
    diffs = (tuple(tuple(r) for r in P),) if E else ()
    return BoundaryDecomposition(
        TateComplex(terms, diffs),
        ArtinTateMotive.unit(1, 2, V) if V else ArtinTateMotive.zero(),
    )


def _gens(k: int) -> list[Generator]:
    return [Generator(0, 0)] * k


def _coker_motive(res: SnfResult, q: int) -> ArtinTateMotive:
    free = res.shape[0] - res.rank
    parts = [TateSummand.free(q, 0, free)] if free else []
    parts += [TateSummand.torsion(t, q) for t in res.divisors if t > 1]
    return ArtinTateMotive(tuple(parts))


@dataclass(frozen=True)
class InfinityHomology:
    """H_0..H_3 at infinity with the intermediate matrices that produced them."""

    H: tuple[ArtinTateMotive, ...]
    incidence: list[list[int]]
    mu_rank: list[list[int]]
    snf_boundary: SnfResult
    snf_mu: SnfResult
    mu: GwMatrix | None = None
    diagonalization: DiagonalizationResult | None = None
    boundary_homology: tuple[ArtinTateMotive, ...] = ()
    warnings: tuple[str, ...] = dc_field(default=())

    def table(self) -> list[tuple[int, str]]:
        return [(i, str(h)) for i, h in enumerate(self.H)]


def homology_at_infinity(G: PlumbingGraph, rank_only: bool = False) -> InfinityHomology:
    """Homology motives at infinity from the six-term integer data.

    With E intersection points and V branches, p: Z^E -> Z^V is the boundary
    map and its transpose p2: Z^V -> Z^E is the Gysin side. Then

    * H_0 = coker p
    * 0 -> coker(mu)(1) -> H_1 -> ker p -> 0
    * 0 -> coker(p2)(2) -> H_2 -> ker(mu)(1) -> 0
    * H_3 = ker(p2)(2)

    Extensions are reported split and flagged. ``mu`` enters through its
    rank realization; the GW-valued matrix is attached when all weights are
    even. ``rank_only`` skips it and allows odd weights.
    """
    N = incidence_matrix(G)
    V, E = len(G.vertices), len(N)
    P = transpose(N, (E, V))  # V x E
    snf_p = smith_normal_form(P, (V, E))
    snf_p2 = smith_normal_form(N, (E, V))

    warnings = []
    mu = diag = None
    if rank_only:
        mu_rank = classical_mumford_matrix(G)
    else:
        mu = mumford_matrix(G)
        mu_rank = rank_realization(mu)
        diag = gw_diagonalize(mu) if V else None
        if diag is not None:
            warnings.extend(diag.notes)
    snf_mu = smith_normal_form(mu_rank, (V, V))

    H0 = _coker_motive(snf_p, 0)
    ker_p = E - snf_p.rank
    coker_mu = _coker_motive(snf_mu, 1)
    H1 = coker_mu + (ArtinTateMotive.unit(0, 0, ker_p) if ker_p else ArtinTateMotive.zero())
    if ker_p and not coker_mu.is_zero():
        H1 = ArtinTateMotive(H1.summands, split_assumed=True)
    coker_p2 = _coker_motive(snf_p2, 2)
    ker_mu = V - snf_mu.rank
    H2 = coker_p2 + (ArtinTateMotive.unit(1, 0, ker_mu) if ker_mu else ArtinTateMotive.zero())
    if ker_mu and not coker_p2.is_zero():
        H2 = ArtinTateMotive(H2.summands, split_assumed=True)
    ker_p2 = V - snf_p2.rank
    H3 = ArtinTateMotive.unit(2, 0, ker_p2) if ker_p2 else ArtinTateMotive.zero()

    for i, h in ((1, H1), (2, H2)):
        if h.split_assumed:
            warnings.append(f"split_assumed: H_{i} is reported as a direct sum; the extension is not computed")

    boundary = complex_homology(boundary_motive_decomposition(G).combinatorial)
    return InfinityHomology(
        H=(H0, H1, H2, H3),
        incidence=N,
        mu_rank=mu_rank,
        snf_boundary=snf_p,
        snf_mu=snf_mu,
        mu=mu,
        diagonalization=diag,
        boundary_homology=tuple(boundary),
        warnings=tuple(warnings),
    )


def euler_characteristic_check(G: PlumbingGraph, result: InfinityHomology) -> bool:
    """Alternating free ranks of the long exact sequence: sum (-1)^i rank H_i
    must equal the alternating sum of its six integer terms, which is 0."""
    V, E = len(G.vertices), len(result.incidence)
    # Z^V(2) -> Z^E(2), Z^V(1) -> Z^V(1), Z^E -> Z^V, signs following the sequence
    terms = (V - E) - (V - V) + (E - V)
    lhs = sum((-1) ** i * h.free_rank() for i, h in enumerate(result.H))
    return lhs == terms


# Fixture builders for the two families worked out by hand.


def three_lines_graph(field: Field) -> PlumbingGraph:
    """Proper transforms of three general lines after blowing up one point on each."""
    return PlumbingGraph(
        field,
        (Vertex("L1", 0), Vertex("L2", 0), Vertex("L3", 0)),
        (Edge(0, 1), Edge(0, 2), Edge(1, 2)),
    )


def danielewski_graph(n: int, field: Field) -> PlumbingGraph:
    """Boundary fork of the Danielewski surface x^n z = y(y - 1).

    Order: F_inf < C_inf < F_0 < E_{1,0} < ... < E_{n-1,0} < E_{1,1} < ... < E_{n-1,1}.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    verts = [Vertex("F_inf", 0), Vertex("C_inf", 0), Vertex("F_0", -2)]
    verts += [Vertex(f"E_{k},0", -2) for k in range(1, n)]
    verts += [Vertex(f"E_{k},1", -2) for k in range(1, n)]
    edges = [Edge(0, 1), Edge(1, 2)]
    for branch in (0, 1):
        chain = [2] + [3 + branch * (n - 1) + k for k in range(n - 1)]
        edges += [Edge(a, b) for a, b in zip(chain, chain[1:])]
    return PlumbingGraph(field, tuple(verts), tuple(edges))
