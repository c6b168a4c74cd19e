"""Affine hyperplane arrangements: stratum table and motivic decompositions.

For every subset J of hyperplanes with nonempty intersection D_J we record
n_J = #J and c_J = codim D_J (the rank of the normals). The homotopy types
of the complement are then direct sums over these rows:

* Pi     = sum_J 1(c_J)[2 c_J - n_J]
* Pi^c   = sum_K 1(d - c_K)[2 (d - c_K) + n_K]
* Pi^inf = Pi + sum_K 1(d - c_K)[2 (d - c_K) + n_K - 1]

The empty subset is a row with c = n = 0. All arithmetic is over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import TooManyHyperplanes, ValidationError
from .motives import ArtinTateMotive, TateSummand

MAX_HYPERPLANES = 20


def _parse_rational(x, path: str) -> Fraction:
    if isinstance(x, bool):
        raise ValidationError("expected a rational number", path)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ValidationError(f"expected an integer or 'p/q' string, got {x!r}", path)


@dataclass(frozen=True)
class Hyperplane:
    """{x : normal . x = constant}."""

    normal: tuple[Fraction, ...]
    constant: Fraction

    def augmented(self) -> tuple[Fraction, ...]:
        return self.normal + (self.constant,)


def _proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    # u, v nonzero; proportional iff all 2x2 minors vanish
    k = next(i for i, x in enumerate(u) if x)
    return all(u[k] * v[i] == v[k] * u[i] for i in range(len(u)))


@dataclass(frozen=True)
class Arrangement:
    dim: int
    hyperplanes: tuple[Hyperplane, ...] = ()

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValidationError("dimension must be a positive integer", "dim")
        object.__setattr__(self, "hyperplanes", tuple(self.hyperplanes))
        for i, h in enumerate(self.hyperplanes):
            if len(h.normal) != self.dim:
                raise ValidationError(f"hyperplane needs {self.dim} normal coefficients", f"hyperplanes[{i}]")
            if not any(h.normal):
                raise ValidationError("zero normal vector", f"hyperplanes[{i}]")
            for j in range(i):
                if _proportional(self.hyperplanes[j].augmented(), h.augmented()):
                    raise ValidationError(f"duplicate of hyperplanes[{j}]", f"hyperplanes[{i}]")

    @classmethod
    def from_rows(cls, dim: int, rows: Sequence[Sequence]) -> Arrangement:
        """Rows are ``[a_1, ..., a_d, b]`` for the hyperplane a . x = b."""
        hs = []
        for i, row in enumerate(rows):
            if not isinstance(row, (list, tuple)) or len(row) != dim + 1:
                raise ValidationError(f"expected {dim + 1} numbers", f"hyperplanes[{i}]")
            vals = [_parse_rational(x, f"hyperplanes[{i}][{k}]") for k, x in enumerate(row)]
            hs.append(Hyperplane(tuple(vals[:-1]), vals[-1]))
        return cls(dim, tuple(hs))

    @classmethod
    def from_record(cls, rec: dict) -> Arrangement:
        if not isinstance(rec, dict):
            raise ValidationError("arrangement record must be an object")
        dim = rec.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise ValidationError("dim must be an integer", "dim")
        rows = rec.get("hyperplanes", [])
        if not isinstance(rows, list):
            raise ValidationError("hyperplanes must be a list", "hyperplanes")
        return cls.from_rows(dim, rows)

    def to_record(self) -> dict:
        def enc(x: Fraction):
            return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        return {"dim": self.dim, "hyperplanes": [[enc(x) for x in h.augmented()] for h in self.hyperplanes]}

    def without(self, index: int) -> Arrangement:
        return Arrangement(self.dim, self.hyperplanes[:index] + self.hyperplanes[index + 1:])


@dataclass(frozen=True)
class StratumRow:
    J: tuple[int, ...]
    n: int
    c: int


@dataclass(frozen=True)
class StratumTable:
    dim: int
    rows: tuple[StratumRow, ...]

    @property
    def nc_flag(self) -> bool:
        return all(r.c == r.n for r in self.rows)

    @property
    def m_profile(self) -> list[int] | None:
        """m(n) for n = 0..dim: number of nonempty D_J of codimension n."""
        if not self.nc_flag:
            return None
        m = [0] * (self.dim + 1)
        for r in self.rows:
            m[r.c] += 1
        return m

    def row(self, J: Sequence[int]) -> StratumRow | None:
        key = tuple(sorted(J))
        return next((r for r in self.rows if r.J == key), None)

    def to_record(self) -> dict:
        return {
            "rows": [{"J": list(r.J), "n": r.n, "c": r.c} for r in self.rows],
            "nc_flag": self.nc_flag,
            "m_profile": self.m_profile,
        }


class _Echelon:
    """Row-reduced augmented system [A | b], grown one equation at a time."""

    def __init__(self, pivots=(), rows=()):
        self.pivots = list(pivots)
        self.rows = list(rows)

    def add(self, v: Sequence[Fraction]) -> _Echelon | None:
        """Return the extended system, or None if it became inconsistent."""
        v = list(v)
        for piv, row in zip(self.pivots, self.rows):
            if v[piv]:
                f = v[piv]
                v = [a - f * b for a, b in zip(v, row)]
        lead = next((i for i, x in enumerate(v[:-1]) if x), None)
        if lead is None:
            return None if v[-1] else _Echelon(self.pivots, self.rows)
        inv = 1 / v[lead]
        v = [x * inv for x in v]
        rows = []
        for row in self.rows:
            f = row[lead]
            rows.append([a - f * b for a, b in zip(row, v)] if f else row)
        return _Echelon(self.pivots + [lead], rows + [v])

    @property
    def rank(self) -> int:
        return len(self.pivots)


def stratum_table(A: Arrangement) -> StratumTable:
    """Enumerate all subsets J with D_J nonempty, with their codimension.

    Supersets of a subset with empty intersection are pruned; each nonempty
    D_J is an affine subspace, hence a single connected stratum.
    """
    H = len(A.hyperplanes)
    if H > MAX_HYPERPLANES:
        raise TooManyHyperplanes(f"{H} hyperplanes exceeds the limit of {MAX_HYPERPLANES}", "hyperplanes")
    rows: list[StratumRow] = []

    def walk(J: tuple[int, ...], system: _Echelon, start: int):
        rows.append(StratumRow(J, len(J), system.rank))
        for k in range(start, H):
            ext = system.add(A.hyperplanes[k].augmented())
            if ext is not None:
                walk(J + (k,), ext, k + 1)

    walk((), _Echelon(), 0)
    rows.sort(key=lambda r: (r.n, r.J))
    return StratumTable(A.dim, tuple(rows))


def homotopy_type(A: Arrangement, table: StratumTable | None = None) -> ArtinTateMotive:
    """Pi(complement) = sum over rows of 1(c_J)[2 c_J - n_J]."""
    table = table or stratum_table(A)
    return ArtinTateMotive(tuple(TateSummand.free(r.c, 2 * r.c - r.n) for r in table.rows))


def compact_support_type(A: Arrangement, table: StratumTable | None = None) -> ArtinTateMotive:
    table = table or stratum_table(A)
    d = A.dim
    return ArtinTateMotive(tuple(TateSummand.free(d - r.c, 2 * (d - r.c) + r.n) for r in table.rows))


def homotopy_type_at_infinity(A: Arrangement, table: StratumTable | None = None) -> ArtinTateMotive:
    table = table or stratum_table(A)
    d = A.dim
    boundary = ArtinTateMotive(tuple(TateSummand.free(d - r.c, 2 * (d - r.c) + r.n - 1) for r in table.rows))
    return homotopy_type(A, table) + boundary


def normal_crossing_homotopy_type(table: StratumTable) -> ArtinTateMotive:
    """Closed form sum_n m(n) 1(n)[n], valid when every c_J = n_J."""
    m = table.m_profile
    if m is None:
        raise ValidationError("closed form needs a normal crossing arrangement")
    return ArtinTateMotive(tuple(TateSummand.free(n, n, k) for n, k in enumerate(m) if k))


def normal_crossing_type_at_infinity(table: StratumTable) -> ArtinTateMotive:
    m = table.m_profile
    if m is None:
        raise ValidationError("closed form needs a normal crossing arrangement")
    d = table.dim
    tail = ArtinTateMotive(tuple(TateSummand.free(d - n, 2 * d - n - 1, k) for n, k in enumerate(m) if k))
    return normal_crossing_homotopy_type(table) + tail


def coordinate_arrangement(d: int) -> Arrangement:
    """The d coordinate hyperplanes x_i = 0; complement (G_m)^d."""
    return Arrangement(
        d, tuple(Hyperplane(tuple(Fraction(int(i == k)) for i in range(d)), Fraction(0)) for k in range(d))
    )
