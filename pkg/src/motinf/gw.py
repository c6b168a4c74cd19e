"""Exact arithmetic in Grothendieck-Witt rings of a few fields with decidable invariants.

Three kinds of base field are supported, each with a complete invariant of
non-degenerate symmetric bilinear forms:

* quadratically closed: rank
* real closed: rank and signature
* finite of odd order q: rank and the class of the determinant

Elements are stored in that canonical form, so equality is tuple equality.
For a finite field the second coordinate is the coefficient of ``<u>`` modulo
two, where ``u`` is a fixed non-square; it is the "disc bit".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import OddDegree, ValidationError, WrongField

QC = "qc"
RC = "rc"
FQ = "fq"


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


@dataclass(frozen=True, order=True)
class Field:
    """Descriptor of a supported base field.

    Use :meth:`quadratically_closed`, :meth:`real_closed` or :meth:`finite`
    rather than the raw constructor.
    """

    kind: str
    q: int = 0

    def __post_init__(self):
        if self.kind not in (QC, RC, FQ):
            raise ValidationError(f"unknown field kind {self.kind!r}", "field")
        if self.kind == FQ:
            pe = _prime_power(self.q)
            if pe is None or pe[0] == 2:
                raise ValidationError(f"q={self.q} is not an odd prime power", "field.q")
        elif self.q:
            raise ValidationError("only finite fields carry q", "field.q")

    @classmethod
    def quadratically_closed(cls) -> Field:
        return cls(QC)

    @classmethod
    def real_closed(cls) -> Field:
        return cls(RC)

    @classmethod
    def finite(cls, q: int) -> Field:
        return cls(FQ, q)

    @property
    def characteristic(self) -> int:
        return _prime_power(self.q)[0] if self.kind == FQ else 0

    @property
    def degree(self) -> int:
        return _prime_power(self.q)[1] if self.kind == FQ else 0

    @property
    def minus_one_is_square(self) -> bool:
        if self.kind == QC:
            return True
        if self.kind == RC:
            return False
        return self.q % 4 == 1

    @property
    def two_is_square(self) -> bool:
        if self.kind != FQ:
            return True
        return self.q % 8 in (1, 7)

    @classmethod
    def parse(cls, spec: Union[str, dict, Field]) -> Field:
        """Accept ``"qc"``, ``"rc"``, ``"fq:<q>"`` or a field record."""
        if isinstance(spec, Field):
            return spec
        if isinstance(spec, dict):
            kind = spec.get("kind")
            if kind == FQ:
                q = spec.get("q")
                if not isinstance(q, int) or isinstance(q, bool):
                    raise ValidationError("finite field needs an integer q", "field.q")
                return cls.finite(q)
            return cls(kind) if kind in (QC, RC) else cls(str(kind))
        if isinstance(spec, str):
            s = spec.strip().lower()
            if s in (QC, RC):
                return cls(s)
            if s.startswith("fq:"):
                try:
                    q = int(s[3:])
                except ValueError:
                    raise ValidationError(f"bad field {spec!r}", "field") from None
                return cls.finite(q)
        raise ValidationError(f"bad field {spec!r}", "field")

    def to_record(self) -> dict:
        return {"kind": self.kind, "q": self.q} if self.kind == FQ else {"kind": self.kind}

    def __str__(self) -> str:
        return f"fq:{self.q}" if self.kind == FQ else self.kind


_TOKENS = {QC: ("sq",), RC: ("+1", "-1"), FQ: ("sq", "nonsq")}


@dataclass(frozen=True)
class SquareClass:
    """An element of k*/k*^2, stored as a canonical token.

    Tokens: ``"sq"`` over a quadratically closed field, ``"+1"``/``"-1"`` over
    a real closed field, ``"sq"``/``"nonsq"`` over a finite field.
    """

    field: Field
    token: str

    def __post_init__(self):
        if self.token not in _TOKENS[self.field.kind]:
            raise ValidationError(f"square class {self.token!r} not valid over {self.field}")

    @property
    def is_trivial(self) -> bool:
        return self.token in ("sq", "+1")

    def __mul__(self, other: SquareClass) -> SquareClass:
        _same_field(self.field, other.field)
        trivial, other_token = _TOKENS[self.field.kind][0], _TOKENS[self.field.kind][-1]
        return SquareClass(self.field, trivial if self.is_trivial == other.is_trivial else other_token)

    @classmethod
    def one(cls, field: Field) -> SquareClass:
        return cls(field, _TOKENS[field.kind][0])

    @classmethod
    def nonsquare(cls, field: Field) -> SquareClass:
        if field.kind == QC:
            raise WrongField("a quadratically closed field has no non-square")
        return cls(field, _TOKENS[field.kind][1])


def square_class(a: int, field: Field) -> SquareClass:
    """Square class of the nonzero integer ``a`` viewed in ``field``.

    Over F_q with q = p^e the integer is read in the prime field.
    """
    if field.kind == QC:
        if a == 0:
            raise ValidationError("<0> is not a unit")
        return SquareClass(field, "sq")
    if field.kind == RC:
        if a == 0:
            raise ValidationError("<0> is not a unit")
        return SquareClass(field, "+1" if a > 0 else "-1")
    p = field.characteristic
    r = a % p
    if r == 0:
        raise ValidationError(f"{a} vanishes in F_{field.q}")
    if field.degree % 2 == 0:
        # F_p* is contained in the squares of F_{p^2}.
        return SquareClass(field, "sq")
    return SquareClass(field, "sq" if pow(r, (p - 1) // 2, p) == 1 else "nonsq")


def _same_field(a: Field, b: Field) -> None:
    if a != b:
        raise WrongField(f"mixing fields {a} and {b}")


@dataclass(frozen=True)
class GwElement:
    """Element of GW(k) in canonical form.

    ``aux`` holds the signature over a real closed field, the disc bit over a
    finite field, and is 0 over a quadratically closed field.
    """

    field: Field
    rank: int
    aux: int = 0

    def __post_init__(self):
        kind = self.field.kind
        if kind == QC and self.aux != 0:
            raise ValidationError("quadratically closed GW elements carry only a rank")
        if kind == RC and (self.rank - self.aux) % 2:
            raise ValidationError(f"rank {self.rank} and signature {self.aux} differ in parity")
        if kind == FQ and self.aux not in (0, 1):
            raise ValidationError("disc bit must be 0 or 1")

    # constructors

    @classmethod
    def zero(cls, field: Field) -> GwElement:
        return cls(field, 0, 0)

    @classmethod
    def one(cls, field: Field) -> GwElement:
        return cls(field, 1, 1 if field.kind == RC else 0)

    @classmethod
    def from_class(cls, c: SquareClass) -> GwElement:
        """The one-dimensional form ``<c>``."""
        kind = c.field.kind
        if kind == QC:
            return cls(c.field, 1)
        if kind == RC:
            return cls(c.field, 1, 1 if c.is_trivial else -1)
        return cls(c.field, 1, 0 if c.is_trivial else 1)

    @classmethod
    def bracket(cls, a: int, field: Field) -> GwElement:
        return cls.from_class(square_class(a, field))

    # invariants

    @property
    def sig(self) -> int:
        if self.field.kind != RC:
            raise WrongField("signature is only defined over a real closed field")
        return self.aux

    @property
    def disc_bit(self) -> int:
        if self.field.kind != FQ:
            raise WrongField("disc bit is only defined over a finite field")
        return self.aux

    def is_zero(self) -> bool:
        return self.rank == 0 and self.aux == 0

    def is_unit(self) -> bool:
        """True iff the element is ``±<a>`` for a square class ``a``."""
        if abs(self.rank) != 1:
            return False
        return abs(self.aux) == 1 if self.field.kind == RC else True

    def inverse(self) -> GwElement:
        if not self.is_unit():
            raise ValueError(f"{self} is not a unit")
        # (±<a>)^2 = <a^2> = <1>
        return self

    # ring structure

    def _coerce(self, other) -> GwElement:
        if isinstance(other, GwElement):
            _same_field(self.field, other.field)
            return other
        if isinstance(other, int):
            return GwElement.one(self.field) * other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.field.kind == FQ:
            return GwElement(self.field, self.rank + other.rank, self.aux ^ other.aux)
        return GwElement(self.field, self.rank + other.rank, self.aux + other.aux)

    __radd__ = __add__

    def __neg__(self) -> GwElement:
        # over F_q the group is Z + Z/2 via (rank, disc bit), so the bit is kept
        if self.field.kind == FQ:
            return GwElement(self.field, -self.rank, self.aux)
        return GwElement(self.field, -self.rank, -self.aux)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            if self.field.kind == FQ:
                return GwElement(self.field, self.rank * other, self.aux * other % 2)
            return GwElement(self.field, self.rank * other, self.aux * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        kind = self.field.kind
        r = self.rank * other.rank
        if kind == QC:
            return GwElement(self.field, r)
        if kind == RC:
            return GwElement(self.field, r, self.aux * other.aux)
        # det(x y) = det(x)^rank(y) det(y)^rank(x)
        return GwElement(self.field, r, (self.rank * other.aux + other.rank * self.aux) % 2)

    __rmul__ = __mul__

    # serialization

    def to_record(self) -> dict:
        rec: dict = {"field": self.field.to_record(), "rank": self.rank}
        if self.field.kind == RC:
            rec["sig"] = self.aux
        elif self.field.kind == FQ:
            rec["disc_bit"] = self.aux
        return rec

    @classmethod
    def from_record(cls, rec: dict, field: Field | None = None) -> GwElement:
        f = Field.parse(rec["field"]) if "field" in rec else field
        if f is None:
            raise ValidationError("GW element record without a field")
        if field is not None:
            _same_field(f, field)
        rank = rec.get("rank")
        if not isinstance(rank, int):
            raise ValidationError("rank must be an integer", "rank")
        aux = 0
        if f.kind == RC:
            aux = rec.get("sig")
            if not isinstance(aux, int):
                raise ValidationError("real closed element needs an integer sig", "sig")
        elif f.kind == FQ:
            aux = rec.get("disc_bit")
            if aux not in (0, 1):
                raise ValidationError("finite field element needs disc_bit 0 or 1", "disc_bit")
        return cls(f, rank, aux)

    def __str__(self) -> str:
        kind = self.field.kind
        if self.is_zero():
            return "0"
        if kind == QC:
            return _combo([(self.rank, "<1>")])
        if kind == RC:
            if self.aux == 0:
                return _combo([(self.rank // 2, "H")])
            plus, minus = (self.rank + self.aux) // 2, (self.rank - self.aux) // 2
            return _combo([(plus, "<1>"), (minus, "<-1>")])
        if self.aux == 0:
            return _combo([(self.rank, "<1>")])
        return _combo([(self.rank - 1, "<1>"), (1, "<u>")])


def _combo(terms: Sequence[tuple[int, str]]) -> str:
    out = ""
    for coeff, sym in terms:
        if coeff == 0:
            continue
        sign = "-" if coeff < 0 else "+"
        mag = "" if abs(coeff) == 1 else str(abs(coeff))
        if not out:
            out = ("-" if sign == "-" else "") + mag + sym
        else:
            out += f" {sign} {mag}{sym}"
    return out or "0"


def hyperbolic(field: Field) -> GwElement:
    """The hyperbolic plane H = <1> + <-1>."""
    return GwElement.one(field) + GwElement.bracket(-1, field)


def n_epsilon(n: int, field: Field) -> GwElement:
    """The quadratic integer n_eps = sum_{i=1}^{n} <(-1)^(i+1)>."""
    if n < 0:
        raise ValidationError(f"n_eps needs n >= 0, got {n}")
    return hyperbolic(field) * (n // 2) + GwElement.one(field) * (n % 2)


def euler_class_P1_bundle(d: int, field: Field) -> GwElement:
    """Euler class of O(d) on P^1 for even ``d``: (d/2) H.

    Odd degrees are rejected; such a bundle is not orientable and the
    quadratic degree is not defined.
    """
    if d % 2:
        raise OddDegree(f"O({d}) on P^1 is not orientable; odd degree has no quadratic Euler class")
    return hyperbolic(field) * (d // 2)


RATIONAL = "rational"


@dataclass(frozen=True)
class EtaleAlgebra:
    """Finite etale k-algebra as a product of k's and quadratic extensions.

    ``factors`` holds ``"rational"`` or the :class:`SquareClass` ``d`` of a
    factor k(sqrt d).
    """

    field: Field
    factors: tuple = ()

    def __post_init__(self):
        for i, fac in enumerate(self.factors):
            if fac == RATIONAL:
                continue
            if not isinstance(fac, SquareClass):
                raise ValidationError(f"bad etale factor {fac!r}", f"factors[{i}]")
            _same_field(self.field, fac.field)
            if fac.is_trivial:
                raise ValidationError(
                    "a quadratic factor with square d splits; write it as two rational factors",
                    f"factors[{i}]",
                )

    @classmethod
    def rational(cls, field: Field, copies: int = 1) -> EtaleAlgebra:
        return cls(field, (RATIONAL,) * copies)

    @classmethod
    def quadratic(cls, d: SquareClass) -> EtaleAlgebra:
        return cls(d.field, (d,))

    @property
    def degree(self) -> int:
        return sum(1 if f == RATIONAL else 2 for f in self.factors)

    def is_rational(self) -> bool:
        return all(f == RATIONAL for f in self.factors)

    def __mul__(self, other: EtaleAlgebra) -> EtaleAlgebra:
        _same_field(self.field, other.field)
        return EtaleAlgebra(self.field, self.factors + other.factors)


def trace_form_class(B: EtaleAlgebra) -> GwElement:
    """Class of (x, y) -> Tr(xy).

    A rational factor gives <1>; k(sqrt d) has Gram matrix diag(2, 2d) in the
    basis {1, sqrt d}.
    """
    k = B.field
    total = GwElement.zero(k)
    two = square_class(2, k)
    for fac in B.factors:
        if fac == RATIONAL:
            total = total + GwElement.one(k)
        else:
            total = total + GwElement.from_class(two) + GwElement.from_class(two * fac)
    return total


def quadratic_intersection_degree(
    points: Iterable[tuple[int, EtaleAlgebra]], field: Field | None = None
) -> GwElement:
    """Sum over intersection points of (m_x)_eps * tau_x.

    ``points`` are ``(multiplicity, residue algebra)`` pairs; an empty list
    means the curves are disjoint and needs ``field`` to know the ring.
    """
    total = GwElement.zero(field) if field is not None else None
    for m, B in points:
        if m < 1:
            raise ValidationError(f"intersection multiplicity must be >= 1, got {m}")
        term = n_epsilon(m, B.field) * trace_form_class(B)
        total = term if total is None else total + term
    if total is None:
        raise ValidationError("empty point list needs an explicit field")
    return total
