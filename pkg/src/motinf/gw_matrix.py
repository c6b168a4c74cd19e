"""Matrices over GW(k): realizations and diagonalization by row/column operations.

The reduction is matrix *equivalence* (independent row and column operations),
not congruence. Every step is recorded so the result can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import ValidationError, WrongField
from .gw import QC, RC, Field, GwElement, SquareClass, _TOKENS
from .snf import smith_normal_form


@dataclass(frozen=True)
class GwMatrix:
    field: Field
    rows: int
    cols: int
    entries: tuple[GwElement, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows * self.cols:
            raise ValidationError("entry count does not match the shape")
        for k, e in enumerate(self.entries):
            if e.field != self.field:
                raise WrongField(f"entry {divmod(k, self.cols)} lives over {e.field}, not {self.field}")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[GwElement]]) -> GwMatrix:
        m = len(rows)
        n = len(rows[0]) if m else 0
        if any(len(r) != n for r in rows):
            raise ValidationError("ragged GW matrix")
        return cls(field, m, n, tuple(e for r in rows for e in r))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> GwMatrix:
        return cls(field, rows, cols, (GwElement.zero(field),) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> GwElement:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[GwElement]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def transpose(self) -> GwMatrix:
        return GwMatrix.from_rows(self.field, [[self[i, j] for i in range(self.rows)] for j in range(self.cols)]) \
            if self.rows else GwMatrix(self.field, self.cols, 0, ())

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def to_record(self) -> dict:
        return {
            "field": self.field.to_record(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[_strip(e) for e in row] for row in self.to_rows()],
        }

    def __str__(self) -> str:
        return format_matrix([[str(e) for e in row] for row in self.to_rows()])


def format_matrix(cells: Sequence[Sequence[str]]) -> str:
    if not cells:
        return "[]"
    width = max(len(c) for row in cells for c in row) if cells[0] else 0
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def rank_realization(M: GwMatrix) -> list[list[int]]:
    """Entrywise rank: GW(k) -> Z."""
    return [[e.rank for e in row] for row in M.to_rows()]


def signature_realization(M: GwMatrix) -> list[list[int]]:
    """Entrywise signature; real closed fields only."""
    if M.field.kind != RC:
        raise WrongField(f"signature realization needs a real closed field, got {M.field}")
    return [[e.aux for e in row] for row in M.to_rows()]


def units(field: Field) -> list[GwElement]:
    """All units of GW(k): +<a> then -<a> for each square class a."""
    pos = [GwElement.from_class(SquareClass(field, t)) for t in _TOKENS[field.kind]]
    return pos + [-u for u in pos]


@dataclass(frozen=True)
class ElementaryOp:
    """One elementary operation on rows (left) or columns (right).

    * ``swap``: exchange lines ``i`` and ``j``
    * ``add``: line ``i`` += ``c`` * line ``j``
    * ``scale``: line ``i`` *= ``c`` (``c`` a unit)
    """

    kind: str
    i: int
    j: int = -1
    c: GwElement | None = None

    def to_record(self) -> dict:
        rec: dict = {"op": self.kind, "i": self.i}
        if self.kind != "scale":
            rec["j"] = self.j
        if self.c is not None:
            rec["c"] = {k: v for k, v in self.c.to_record().items() if k != "field"}
        return rec


class _Work:
    """Mutable working copy that logs the operations it performs."""

    def __init__(self, M: GwMatrix):
        self.field = M.field
        self.m, self.n = M.rows, M.cols
        self.a = M.to_rows()
        self.left: list[ElementaryOp] = []
        self.right: list[ElementaryOp] = []

    def swap_rows(self, i, j):
        if i != j:
            self.a[i], self.a[j] = self.a[j], self.a[i]
            self.left.append(ElementaryOp("swap", i, j))

    def swap_cols(self, i, j):
        if i != j:
            for row in self.a:
                row[i], row[j] = row[j], row[i]
            self.right.append(ElementaryOp("swap", i, j))

    def add_row(self, i, j, c):
        self.a[i] = [x + c * y for x, y in zip(self.a[i], self.a[j])]
        self.left.append(ElementaryOp("add", i, j, c))

    def add_col(self, i, j, c):
        for row in self.a:
            row[i] = row[i] + row[j] * c
        self.right.append(ElementaryOp("add", i, j, c))

    def scale_row(self, i, c):
        self.a[i] = [c * x for x in self.a[i]]
        self.left.append(ElementaryOp("scale", i, c=c))


def apply_ops(M: GwMatrix, left: Sequence[ElementaryOp], right: Sequence[ElementaryOp]) -> GwMatrix:
    """Replay a certificate: row operations then column operations."""
    a = M.to_rows()
    for op in left:
        if op.kind == "swap":
            a[op.i], a[op.j] = a[op.j], a[op.i]
        elif op.kind == "add":
            a[op.i] = [x + op.c * y for x, y in zip(a[op.i], a[op.j])]
        elif op.kind == "scale":
            if not op.c.is_unit():
                raise ValueError("scale by a non-unit")
            a[op.i] = [op.c * x for x in a[op.i]]
        else:
            raise ValueError(f"unknown op {op.kind}")
    for op in right:
        for row in a:
            if op.kind == "swap":
                row[op.i], row[op.j] = row[op.j], row[op.i]
            elif op.kind == "add":
                row[op.i] = row[op.i] + row[op.j] * op.c
            elif op.kind == "scale":
                if not op.c.is_unit():
                    raise ValueError("scale by a non-unit")
                row[op.i] = row[op.i] * op.c
            else:
                raise ValueError(f"unknown op {op.kind}")
    return GwMatrix.from_rows(M.field, a) if M.rows else M


@dataclass(frozen=True)
class DiagonalizationResult:
    """Outcome of :func:`gw_diagonalize`.

    The claimed normal form has ``diagonal`` at positions (k, k) for
    k < len(diagonal), the residual block (if any) in the lower-right corner
    starting at (len(diagonal), len(diagonal)), and zeros elsewhere.
    """

    source: GwMatrix
    diagonal: tuple[GwElement, ...]
    residual_block: GwMatrix | None
    left_ops: tuple[ElementaryOp, ...]
    right_ops: tuple[ElementaryOp, ...]
    rank_snf: tuple[int, ...]
    signature_snf: tuple[int, ...] | None = None
    notes: tuple[str, ...] = dc_field(default=())

    @property
    def unit_count(self) -> int:
        return sum(1 for d in self.diagonal if d.is_unit())

    def claimed_matrix(self) -> GwMatrix:
        m, n, k = self.source.rows, self.source.cols, len(self.diagonal)
        zero = GwElement.zero(self.source.field)
        a = [[zero] * n for _ in range(m)]
        for t, d in enumerate(self.diagonal):
            a[t][t] = d
        if self.residual_block is not None:
            for i, row in enumerate(self.residual_block.to_rows()):
                for j, e in enumerate(row):
                    a[k + i][k + j] = e
        return GwMatrix.from_rows(self.source.field, a) if m else self.source

    def replay(self) -> GwMatrix:
        return apply_ops(self.source, self.left_ops, self.right_ops)

    def verify(self) -> bool:
        return self.replay() == self.claimed_matrix()

    def summary(self) -> dict:
        return {
            "diagonal": [str(d) for d in self.diagonal],
            "unit_entries": self.unit_count,
            "residual_block": None if self.residual_block is None else [
                [str(e) for e in row] for row in self.residual_block.to_rows()
            ],
            "left_ops": len(self.left_ops),
            "right_ops": len(self.right_ops),
            "certificate_replays": self.verify(),
            "rank_snf": list(self.rank_snf),
            "signature_snf": None if self.signature_snf is None else list(self.signature_snf),
        }

    def to_record(self) -> dict:
        return {
            "field": self.source.field.to_record(),
            "diagonal": [_strip(d) for d in self.diagonal],
            "residual_block": None if self.residual_block is None else [
                [_strip(e) for e in row] for row in self.residual_block.to_rows()
            ],
            "left_ops": [op.to_record() for op in self.left_ops],
            "right_ops": [op.to_record() for op in self.right_ops],
            "rank_snf": list(self.rank_snf),
            "signature_snf": None if self.signature_snf is None else list(self.signature_snf),
            "notes": list(self.notes),
        }


def _strip(e: GwElement) -> dict:
    return {k: v for k, v in e.to_record().items() if k != "field"}


def _probe_multipliers(field: Field) -> list[GwElement]:
    return [u * k for k in (1, 2, 3) for u in units(field)]


def _find_unit(w: _Work, t: int) -> tuple[int, int] | None:
    for i in range(t, w.m):
        for j in range(t, w.n):
            if w.a[i][j].is_unit():
                return i, j
    return None


def _probe(w: _Work, t: int, mults: list[GwElement]) -> bool:
    """Apply the first single add-multiple step that creates a unit entry."""
    for dst in range(t, w.m):
        for src in range(t, w.m):
            if src == dst or all(x.is_zero() for x in w.a[src][t:]):
                continue
            for c in mults:
                if any((w.a[dst][k] + c * w.a[src][k]).is_unit() for k in range(t, w.n)):
                    w.add_row(dst, src, c)
                    return True
    for dst in range(t, w.n):
        for src in range(t, w.n):
            if src == dst or all(w.a[r][src].is_zero() for r in range(t, w.m)):
                continue
            for c in mults:
                if any((w.a[r][dst] + w.a[r][src] * c).is_unit() for r in range(t, w.m)):
                    w.add_col(dst, src, c)
                    return True
    return False


def _isolated(w: _Work, t: int, nonzero: bool) -> tuple[int, int] | None:
    for i in range(t, w.m):
        for j in range(t, w.n):
            if w.a[i][j].is_zero() == nonzero:
                continue
            if all(w.a[i][k].is_zero() for k in range(t, w.n) if k != j) and all(
                w.a[r][j].is_zero() for r in range(t, w.m) if r != i
            ):
                return i, j
    return None


def _normalize_sign(e: GwElement) -> bool:
    return e.rank < 0 or (e.rank == 0 and e.field.kind == RC and e.aux < 0)


def gw_diagonalize(M: GwMatrix) -> DiagonalizationResult:
    """Reduce ``M`` by elementary row and column operations.

    Unit pivots are taken leftmost-uppermost in row-major order and scaled to
    <1>. When no unit is left, single add-multiple probes try to create one.
    Isolated non-unit entries and zero row/column pairs are then moved onto
    the diagonal; whatever remains is returned as the residual block.
    """
    w = _Work(M)
    one = GwElement.one(M.field)
    mults = _probe_multipliers(M.field)
    t = 0
    while t < min(w.m, w.n):
        pos = _find_unit(w, t)
        if pos is None:
            if _probe(w, t, mults):
                continue
            break
        i, j = pos
        w.swap_rows(t, i)
        w.swap_cols(t, j)
        p = w.a[t][t]
        if p != one:
            w.scale_row(t, p.inverse())
        for r in range(t + 1, w.m):
            if not w.a[r][t].is_zero():
                w.add_row(r, t, -w.a[r][t])
        for c in range(t + 1, w.n):
            if not w.a[t][c].is_zero():
                w.add_col(c, t, -w.a[t][c])
        t += 1
    n_units = t

    for nonzero in (True, False):
        while t < min(w.m, w.n):
            pos = _isolated(w, t, nonzero)
            if pos is None:
                break
            w.swap_rows(t, pos[0])
            w.swap_cols(t, pos[1])
            if _normalize_sign(w.a[t][t]):
                w.scale_row(t, -one)
            t += 1

    diagonal = tuple(w.a[k][k] for k in range(t))
    residual = None
    if t < w.m and t < w.n and any(not w.a[i][j].is_zero() for i in range(t, w.m) for j in range(t, w.n)):
        residual = GwMatrix.from_rows(M.field, [row[t:] for row in w.a[t:]])

    rank_snf = smith_normal_form(rank_realization(M), (M.rows, M.cols)).divisors
    sig_snf = None
    if M.field.kind == RC:
        sig_snf = smith_normal_form(signature_realization(M), (M.rows, M.cols)).divisors

    notes = []
    for d in diagonal[n_units:]:
        if not d.is_zero() and d == one * d.rank and abs(d.rank) > 1 and M.field.kind != QC:
            notes.append(
                f"notation ambiguous: non-unit diagonal entry {d}; a bare integer {d.rank} in GW(k) is ambiguous "
                f"between {d.rank}<1> and a hyperbolic multiple; the computed entry is {d}"
            )
    if residual is not None:
        notes.append("residual block present: no further unit could be produced by a single step")
    return DiagonalizationResult(
        source=M,
        diagonal=diagonal,
        residual_block=residual,
        left_ops=tuple(w.left),
        right_ops=tuple(w.right),
        rank_snf=rank_snf,
        signature_snf=sig_snf,
        notes=tuple(notes),
    )

