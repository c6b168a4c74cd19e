"""Twist-graded chain complexes of Tate motives and their homology.

A :class:`TateComplex` has terms indexed by homological degree n >= 0. Each
term is a list of generators 1(q)[p] (optionally carrying an Artin label),
and ``differentials[n - 1]`` is the integer matrix of d_n: term n -> term n-1
(rows index term n-1, columns index term n). Nonzero entries may only join
generators with the same (q, p).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import MissingFaceData, NonPermutationArtinDifferential, ValidationError
from .motives import TORSION, ArtinTateMotive, TateSummand
from .snf import matmul, smith_normal_form


@dataclass(frozen=True)
class Generator:
    q: int = 0
    p: int = 0
    label: str | None = None

    @property
    def key(self) -> tuple[int, int]:
        return (self.q, self.p)

    def to_record(self) -> dict:
        rec: dict = {"q": self.q, "p": self.p}
        if self.label is not None:
            rec["label"] = self.label
        return rec

    @classmethod
    def from_record(cls, rec: dict, path: str) -> Generator:
        if not isinstance(rec, dict):
            raise ValidationError("generator must be an object", path)
        q = rec.get("q", 0)
        if not isinstance(q, int) or isinstance(q, bool):
            raise ValidationError("q must be an integer", f"{path}.q")
        # default shift: pure Tate piece 1(q)[2q]
        p = rec.get("p", 2 * q)
        if not isinstance(p, int) or isinstance(p, bool):
            raise ValidationError("p must be an integer", f"{path}.p")
        label = rec.get("label")
        if label is not None and not isinstance(label, str):
            raise ValidationError("label must be a string", f"{path}.label")
        return cls(q, p, label)


@dataclass(frozen=True)
class TateComplex:
    terms: tuple[tuple[Generator, ...], ...]
    differentials: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        terms = tuple(tuple(t) for t in self.terms)
        diffs = tuple(tuple(tuple(int(x) for x in row) for row in d) for d in self.differentials)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "differentials", diffs)
        if len(diffs) != max(len(terms) - 1, 0):
            raise ValidationError(
                f"{len(terms)} terms need {max(len(terms) - 1, 0)} differentials, got {len(diffs)}",
                "differentials",
            )
        for n in range(1, len(terms)):
            d = diffs[n - 1]
            rows, cols = len(terms[n - 1]), len(terms[n])
            if len(d) != rows or any(len(r) != cols for r in d):
                raise ValidationError(f"d_{n} must be {rows}x{cols}", f"differentials[{n - 1}]")
            for i in range(rows):
                for j in range(cols):
                    if d[i][j] and terms[n - 1][i].key != terms[n][j].key:
                        raise ValidationError(
                            f"d_{n} entry ({i}, {j}) joins different twists", f"differentials[{n - 1}]"
                        )
        for n in range(2, len(terms)):
            comp = matmul(
                [list(r) for r in diffs[n - 2]], [list(r) for r in diffs[n - 1]], inner=len(terms[n - 1])
            )
            bad = next(((i, j) for i, row in enumerate(comp) for j, x in enumerate(row) if x), None)
            if bad is not None:
                raise ValidationError(
                    f"d_{n - 1} o d_{n} != 0 (first nonzero entry {bad})", f"differentials[{n - 2}..{n - 1}]"
                )

    @property
    def length(self) -> int:
        return len(self.terms)

    def d(self, n: int) -> list[list[int]]:
        return [list(r) for r in self.differentials[n - 1]]

    def to_record(self) -> dict:
        return {
            "terms": [[g.to_record() for g in t] for t in self.terms],
            "differentials": [[list(r) for r in d] for d in self.differentials],
        }

    @classmethod
    def from_record(cls, rec: dict) -> TateComplex:
        if not isinstance(rec, dict) or not isinstance(rec.get("terms"), list):
            raise ValidationError("complex record needs a terms list", "terms")
        terms = []
        for n, t in enumerate(rec["terms"]):
            if not isinstance(t, list):
                raise ValidationError("term must be a list", f"terms[{n}]")
            terms.append(tuple(Generator.from_record(g, f"terms[{n}][{i}]") for i, g in enumerate(t)))
        diffs = rec.get("differentials", [])
        if not isinstance(diffs, list):
            raise ValidationError("differentials must be a list", "differentials")
        return cls(tuple(terms), tuple(tuple(tuple(r) for r in d) for d in diffs))


def _block(d: Sequence[Sequence[int]], rows: list[int], cols: list[int]) -> list[list[int]]:
    return [[d[i][j] for j in cols] for i in rows]


def complex_homology(C: TateComplex) -> list[ArtinTateMotive]:
    """Homology per degree, computed blockwise by Smith normal form.

    Blocks are indexed by (label, q, p). Artin-labelled blocks only accept
    differentials built from signed permutations (entries in {-1, 0, 1}
    between generators of one label) and must not produce torsion, since
    M(B)/n is not representable.
    """
    L = C.length
    out: list[list[TateSummand]] = [[] for _ in range(L)]

    for n in range(1, L):
        lower, upper = C.terms[n - 1], C.terms[n]
        for i, row in enumerate(C.differentials[n - 1]):
            for j, x in enumerate(row):
                if x and (lower[i].label is not None or upper[j].label is not None):
                    if lower[i].label != upper[j].label or abs(x) != 1:
                        raise NonPermutationArtinDifferential(
                            f"d_{n} entry ({i}, {j}) = {x} is not a signed identification of Artin generators"
                        )

    keys = sorted({(g.label or "", g.label is not None, g.q, g.p) for t in C.terms for g in t})
    for label, is_artin, q, p in keys:
        def member(g):
            return (g.label is not None) == is_artin and (g.label or "") == label and g.key == (q, p)

        idx = [[i for i, g in enumerate(t) if member(g)] for t in C.terms]
        snfs = {}
        for n in range(1, L):
            if idx[n] and idx[n - 1]:
                blk = _block(C.differentials[n - 1], idx[n - 1], idx[n])
                snfs[n] = smith_normal_form(blk, (len(idx[n - 1]), len(idx[n])))
        for n in range(L):
            rank_out = snfs[n].rank if n in snfs else 0
            rank_in = snfs[n + 1].rank if n + 1 in snfs else 0
            free = len(idx[n]) - rank_out - rank_in
            torsion = [t for t in snfs[n + 1].divisors if t > 1] if n + 1 in snfs else []
            if is_artin:
                if torsion:
                    raise NonPermutationArtinDifferential(
                        f"Artin block {label!r} has torsion {torsion} in degree {n}"
                    )
                if free:
                    out[n].append(TateSummand.artin(free, label, q, p))
                continue
            if free:
                out[n].append(TateSummand.free(q, p, free))
            out[n].extend(TateSummand.torsion(t, q, p) for t in torsion)
    return [ArtinTateMotive(tuple(s)) for s in out]


def euler_characteristics(C: TateComplex) -> dict[tuple[int, int], int]:
    """Alternating generator count per (q, p) block of the chain groups."""
    chi: dict[tuple[int, int], int] = {}
    for n, term in enumerate(C.terms):
        for g in term:
            chi[g.key] = chi.get(g.key, 0) + (-1) ** n
    return {k: v for k, v in sorted(chi.items()) if v}


def homology_euler_characteristics(homology: Sequence[ArtinTateMotive]) -> dict[tuple[int, int], int]:
    """Alternating free (and Artin) rank per (q, p); torsion contributes 0."""
    chi: dict[tuple[int, int], int] = {}
    for n, H in enumerate(homology):
        for s in H.summands:
            if s.kind != TORSION:
                chi[(s.q, s.p)] = chi.get((s.q, s.p), 0) + (-1) ** n * s.value
    return {k: v for k, v in sorted(chi.items()) if v}


def total_motive(homology: Sequence[ArtinTateMotive]) -> ArtinTateMotive:
    """Sum of H_n[n]: the motive the complex resolves."""
    total = ArtinTateMotive.zero()
    for n, H in enumerate(homology):
        total = total + H.twisted(0, n)
    return total


P1 = "P1"
POINT = "point"
ARTIN = "artin"


@dataclass(frozen=True)
class Stratum:
    """What sits over a closed stratum D_J: a P^1, ``rank`` rational points,
    or an Artin point Spec B of degree ``rank``."""

    kind: str
    rank: int = 1
    label: str = ""

    def __post_init__(self):
        if self.kind not in (P1, POINT, ARTIN):
            raise ValidationError(f"unknown stratum kind {self.kind!r}")
        if self.rank < 1 or (self.kind == P1 and self.rank != 1):
            raise ValidationError(f"bad stratum rank {self.rank}")
        if self.kind == ARTIN and not self.label:
            raise ValidationError("Artin stratum needs a positive rank and a label")

    def generators(self) -> list[Generator]:
        if self.kind == P1:
            return [Generator(0, 0), Generator(1, 2)]
        if self.kind == POINT:
            return [Generator(0, 0)] * self.rank
        return [Generator(0, 0, self.label)] * self.rank

    @classmethod
    def parse(cls, spec) -> Stratum:
        if isinstance(spec, Stratum):
            return spec
        if isinstance(spec, str):
            s = spec.strip()
            if s.upper() == "P1":
                return cls(P1)
            if s.lower() == POINT:
                return cls(POINT)
        if isinstance(spec, dict):
            kind = spec.get("kind")
            if isinstance(kind, str) and kind.upper() == "P1":
                return cls(P1)
            if kind == POINT:
                rank = spec.get("rank", 1)
                if not isinstance(rank, int):
                    raise ValidationError("point count must be an integer")
                return cls(POINT, rank)
            if kind == ARTIN:
                rank = spec.get("rank", 1)
                if not isinstance(rank, int):
                    raise ValidationError("Artin rank must be an integer")
                return cls(ARTIN, rank, str(spec.get("label", "")))
        raise ValidationError(f"bad stratum descriptor {spec!r}")


def _default_face(upper: Stratum, lower: Stratum, K, J) -> list[list[int]]:
    if ARTIN in (upper.kind, lower.kind):
        raise MissingFaceData(f"face map {sorted(K)} -> {sorted(J)} between Artin strata needs explicit data")
    if upper.kind == P1 and lower.kind == P1:
        return [[1, 0], [0, 1]]
    if upper.kind == POINT and lower.kind == P1:
        return [[1] * upper.rank, [0] * upper.rank]
    if upper.kind == POINT and lower.kind == POINT and upper.rank == lower.rank == 1:
        return [[1]]
    if upper.kind == POINT and lower.kind == POINT:
        raise MissingFaceData(f"face map {sorted(K)} -> {sorted(J)} between point sets needs explicit data")
    raise ValidationError(f"stratum {sorted(K)} (P1) cannot sit inside the point {sorted(J)}")


def ordered_cech_complex(
    strata: Mapping,
    order: Sequence | None = None,
    face_data: Mapping | None = None,
) -> TateComplex:
    """Chain complex of the ordered Cech semi-simplicial object of a closed cover.

    ``strata`` maps nonempty subsets J (any iterable of index labels) with
    D_J nonempty to a :class:`Stratum` descriptor. Term n is the sum over
    #J = n+1; d_n restricted to J c K is (-1)^k times the pushforward, where
    J omits the k-th element of K in the given order. ``face_data`` may
    supply pushforward matrices keyed by ``(K, J)``.
    """
    strata = {frozenset(J): Stratum.parse(s) for J, s in strata.items()}
    if any(not J for J in strata):
        raise ValidationError("strata must be keyed by nonempty subsets")
    universe = sorted(set().union(*strata)) if strata else []
    if order is None:
        order = universe
    order = list(order)
    if sorted(order) != universe or len(set(order)) != len(order):
        raise ValidationError("order must list every index exactly once", "order")
    pos = {x: k for k, x in enumerate(order)}
    faces = {(frozenset(K), frozenset(J)): m for (K, J), m in (face_data or {}).items()}

    def ordered(J):
        return tuple(sorted(J, key=pos.__getitem__))

    levels: list[list[tuple]] = []
    for n in range(len(order)):
        level = sorted((ordered(J) for J in strata if len(J) == n + 1), key=lambda t: [pos[x] for x in t])
        if not level:
            break
        levels.append(level)
    if len(levels) < max((len(J) for J in strata), default=0):
        raise ValidationError("a stratum is nonempty while every stratum of some smaller size is empty")

    terms = []
    offsets = []
    for level in levels:
        gens, off = [], {}
        for J in level:
            off[J] = len(gens)
            gens.extend(strata[frozenset(J)].generators())
        terms.append(tuple(gens))
        offsets.append(off)

    diffs = []
    for n in range(1, len(levels)):
        d = [[0] * len(terms[n]) for _ in range(len(terms[n - 1]))]
        for K in levels[n]:
            upper = strata[frozenset(K)]
            for k in range(len(K)):
                J = K[:k] + K[k + 1:]
                if frozenset(J) not in strata:
                    raise ValidationError(f"D_{list(K)} is nonempty but D_{list(J)} is empty")
                lower = strata[frozenset(J)]
                face = faces.get((frozenset(K), frozenset(J)))
                if face is None:
                    face = _default_face(upper, lower, K, J)
                nr, nc = len(lower.generators()), len(upper.generators())
                if len(face) != nr or any(len(r) != nc for r in face):
                    raise ValidationError(
                        f"face matrix {list(K)} -> {list(J)} at (n, k) = ({n}, {k}) must be {nr}x{nc}", "faces"
                    )
                sign = -1 if k % 2 else 1
                r0, c0 = offsets[n - 1][J], offsets[n][K]
                for i in range(nr):
                    for j in range(nc):
                        d[r0 + i][c0 + j] += sign * face[i][j]
        diffs.append(tuple(tuple(r) for r in d))
    return TateComplex(tuple(terms), tuple(diffs))
