"""Formal Artin-Tate motives: finite sums of 1(q)[p], (1/n)(q)[p] and Artin pieces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationError

FREE = "free"
TORSION = "torsion"
ARTIN = "artin"
_KIND_ORDER = {FREE: 0, TORSION: 1, ARTIN: 2}


@dataclass(frozen=True)
class TateSummand:
    """One summand. ``value`` is the multiplicity (free), the order n (torsion)
    or the rank (Artin); ``label`` names an Artin piece."""

    kind: str
    value: int
    q: int = 0
    p: int = 0
    label: str = ""

    def __post_init__(self):
        if self.kind == FREE and self.value < 0:
            raise ValidationError("free multiplicity must be >= 0")
        if self.kind == TORSION and self.value < 2:
            raise ValidationError("torsion order must be >= 2")
        if self.kind == ARTIN and (self.value < 1 or not self.label):
            raise ValidationError("Artin summand needs a positive rank and a label")
        if self.kind not in _KIND_ORDER:
            raise ValidationError(f"unknown summand kind {self.kind!r}")

    @classmethod
    def free(cls, q: int = 0, p: int = 0, mult: int = 1) -> TateSummand:
        return cls(FREE, mult, q, p)

    @classmethod
    def torsion(cls, n: int, q: int = 0, p: int = 0) -> TateSummand:
        return cls(TORSION, n, q, p)

    @classmethod
    def artin(cls, rank: int, label: str, q: int = 0, p: int = 0) -> TateSummand:
        return cls(ARTIN, rank, q, p, label)

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.q, self.p, self.value, self.label)

    def twisted(self, dq: int = 0, dp: int = 0) -> TateSummand:
        return TateSummand(self.kind, self.value, self.q + dq, self.p + dp, self.label)

    def _suffix(self) -> str:
        return (f"({self.q})" if self.q else "") + (f"[{self.p}]" if self.p else "")

    def __str__(self) -> str:
        sfx = self._suffix()
        if self.kind == FREE:
            return ("" if self.value == 1 else f"{self.value}*") + "1" + sfx
        if self.kind == TORSION:
            return f"(1/{self.value})" + sfx
        return f"M({self.label})" + ("" if self.value == 1 else f"^{self.value}") + sfx

    def to_record(self) -> dict:
        rec: dict = {"kind": self.kind, "q": self.q, "p": self.p}
        rec[{FREE: "mult", TORSION: "n", ARTIN: "rank"}[self.kind]] = self.value
        if self.kind == ARTIN:
            rec["label"] = self.label
        return rec

    @classmethod
    def from_record(cls, rec: dict, path: str = "summand") -> TateSummand:
        if not isinstance(rec, dict):
            raise ValidationError("summand must be an object", path)
        kind = rec.get("kind")
        key = {FREE: "mult", TORSION: "n", ARTIN: "rank"}.get(kind)
        if key is None:
            raise ValidationError(f"unknown summand kind {kind!r}", f"{path}.kind")
        vals = {}
        for name in (key, "q", "p"):
            v = rec.get(name, 0 if name != key else None)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValidationError(f"{name} must be an integer", f"{path}.{name}")
            vals[name] = v
        try:
            return cls(kind, vals[key], vals["q"], vals["p"], rec.get("label", "") if kind == ARTIN else "")
        except ValidationError as exc:
            raise ValidationError(str(exc), path) from None


def _canonical(summands: Iterable[TateSummand]) -> tuple[TateSummand, ...]:
    free: dict[tuple[int, int], int] = {}
    rest = []
    for s in summands:
        if s.kind == FREE:
            free[(s.q, s.p)] = free.get((s.q, s.p), 0) + s.value
        else:
            rest.append(s)
    out = [TateSummand.free(q, p, m) for (q, p), m in free.items() if m]
    return tuple(sorted(out + rest, key=TateSummand.sort_key))


@dataclass(frozen=True)
class ArtinTateMotive:
    """Canonical direct sum of Tate summands.

    ``split_assumed`` records that some extension was reported as split.
    """

    summands: tuple[TateSummand, ...] = ()
    split_assumed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "summands", _canonical(self.summands))

    @classmethod
    def of(cls, *summands: TateSummand, split_assumed: bool = False) -> ArtinTateMotive:
        return cls(tuple(summands), split_assumed)

    @classmethod
    def zero(cls) -> ArtinTateMotive:
        return cls()

    @classmethod
    def unit(cls, q: int = 0, p: int = 0, mult: int = 1) -> ArtinTateMotive:
        return cls((TateSummand.free(q, p, mult),))

    def __add__(self, other: ArtinTateMotive) -> ArtinTateMotive:
        return ArtinTateMotive(self.summands + other.summands, self.split_assumed or other.split_assumed)

    def twisted(self, dq: int = 0, dp: int = 0) -> ArtinTateMotive:
        return ArtinTateMotive(tuple(s.twisted(dq, dp) for s in self.summands), self.split_assumed)

    def is_zero(self) -> bool:
        return not self.summands

    def free_rank(self, q: int | None = None) -> int:
        return sum(s.value for s in self.summands if s.kind == FREE and (q is None or s.q == q))

    def count(self) -> int:
        """Number of indecomposable summands (free multiplicities expanded)."""
        return sum(s.value if s.kind == FREE else 1 for s in self.summands)

    def multiset(self) -> dict[tuple[int, int], int]:
        """Free multiplicities keyed by (q, p)."""
        return {(s.q, s.p): s.value for s in self.summands if s.kind == FREE}

    def __str__(self) -> str:
        return " + ".join(str(s) for s in self.summands) if self.summands else "0"

    def to_record(self) -> dict:
        return {"summands": [s.to_record() for s in self.summands], "split_assumed": self.split_assumed}

    @classmethod
    def from_record(cls, rec: dict) -> ArtinTateMotive:
        if not isinstance(rec, dict) or not isinstance(rec.get("summands"), list):
            raise ValidationError("motive record needs a summands list", "summands")
        flag = rec.get("split_assumed", False)
        if not isinstance(flag, bool):
            raise ValidationError("split_assumed must be a boolean", "split_assumed")
        return cls(
            tuple(TateSummand.from_record(s, f"summands[{i}]") for i, s in enumerate(rec["summands"])),
            flag,
        )


def motive_pretty_print(M: ArtinTateMotive) -> str:
    return str(M)


def motive_serialize(M: ArtinTateMotive) -> dict:
    return M.to_record()


def motive_parse(rec: dict) -> ArtinTateMotive:
    return ArtinTateMotive.from_record(rec)
