"""Command-line front end: ``motinf {plumbing,arrangement,gw,cech}``.

Every run produces a :class:`RunReport`. ``--format record`` prints it as
canonical JSON; ``--format text`` prints aligned tables. Exit codes: 0 on
success, 2 for invalid input, 3 for unsupported features (odd weights in the
quadratic pipeline, non-rational points in the homology path).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

from . import __version__
from .arrangement import (
    Arrangement,
    compact_support_type,
    homotopy_type,
    homotopy_type_at_infinity,
    normal_crossing_homotopy_type,
    stratum_table,
)
from .complexes import (
    Stratum,
    TateComplex,
    complex_homology,
    euler_characteristics,
    homology_euler_characteristics,
    ordered_cech_complex,
    total_motive,
)
from .errors import MotinfError, ValidationError
from .expr import matrix_from_record, parse_gw
from .gw import FQ, RC, Field
from .gw_matrix import format_matrix, gw_diagonalize
from .plumbing import PlumbingGraph, euler_characteristic_check, homology_at_infinity

DEFAULT_GW_FIELD = "rc"
ORDER_CHECKS = 5


@dataclass
class RunReport:
    tool_version: str
    input_digest: str
    subcommand: str
    result: dict
    warnings: list[str] = dc_field(default_factory=list)
    text: str = ""

    def to_record(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "input_digest": self.input_digest,
            "subcommand": self.subcommand,
            "result": self.result,
            "warnings": list(self.warnings),
        }

    def render(self, fmt: str) -> str:
        if fmt == "record":
            return canonical_json(self.to_record(), indent=2)
        lines = [f"motinf {self.tool_version}  {self.subcommand}  input {self.input_digest[:16]}", "", self.text]
        if self.warnings:
            lines += ["", "warnings:"] + [f"  - {w}" for w in self.warnings]
        return "\n".join(lines).rstrip() + "\n"


def canonical_json(obj, indent: int | None = None) -> str:
    if indent is None:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return json.dumps(obj, sort_keys=True, indent=indent, ensure_ascii=False)


def input_digest(subcommand: str, payload, flags: dict) -> str:
    blob = canonical_json({"subcommand": subcommand, "input": payload, "flags": flags})
    return hashlib.sha256(blob.encode()).hexdigest()


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read input: {exc.strerror}", path) from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON ({exc.msg}, line {exc.lineno} column {exc.colno})", path) from None


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    fmt = lambda r: "  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip()  # noqa: E731
    return "\n".join([fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows])


def _int_matrix(a: Sequence[Sequence[int]]) -> str:
    return format_matrix([[str(x) for x in row] for row in a])


def _field_flag(value: str | None) -> Field | None:
    return None if value is None else Field.parse(value)


# plumbing


def _plumbing_payload(G: PlumbingGraph, rank_only: bool) -> tuple[dict, list[str], str]:
    res = homology_at_infinity(G, rank_only=rank_only)
    table = res.table()
    result = {
        "field": str(G.field),
        "rank_only": rank_only,
        "vertices": [v.name for v in G.vertices],
        "incidence": res.incidence,
        "mu": None if res.mu is None else [[str(e) for e in row] for row in res.mu.to_rows()],
        "mu_rank": res.mu_rank,
        "snf_incidence": list(res.snf_boundary.divisors),
        "snf_mu_rank": list(res.snf_mu.divisors),
        "diagonalization": None if res.diagonalization is None else res.diagonalization.summary(),
        "boundary_homology": [str(h) for h in res.boundary_homology],
        "homology": {f"H_{i}": h for i, h in table},
        "homology_records": [h.to_record() for h in res.H],
        "euler_characteristic_ok": euler_characteristic_check(G, res),
    }
    warnings = list(res.warnings)
    if not result["euler_characteristic_ok"]:
        warnings.append("euler characteristic mismatch in the at-infinity sequence")

    parts = [f"field {G.field}, {len(G.vertices)} vertices, {len(res.incidence)} intersection points", ""]
    parts += ["incidence N (points x vertices):", _int_matrix(res.incidence) if res.incidence else "[]", ""]
    if res.mu is not None:
        parts += ["quadratic Mumford matrix:", str(res.mu), ""]
    parts += ["rank Mumford matrix:", _int_matrix(res.mu_rank), ""]
    if res.diagonalization is not None:
        s = res.diagonalization.summary()
        diag = ", ".join(s["diagonal"]) or "-"
        parts.append(f"diagonalization: diag({diag})")
        if s["residual_block"] is not None:
            parts.append("residual block:\n" + format_matrix(s["residual_block"]))
        parts.append(
            f"certificate: {s['left_ops']} row ops, {s['right_ops']} column ops, "
            f"replays {'yes' if s['certificate_replays'] else 'NO'}"
        )
        parts.append("")
    parts.append("SNF of rank matrix: " + " ".join(str(x) for x in res.snf_mu.divisors))
    parts.append("boundary homology D_X: " + ", ".join(f"H_{i} = {h}" for i, h in enumerate(result["boundary_homology"])))
    parts += ["", _table(["i", "H_i at infinity"], [[str(i), h] for i, h in table])]
    return result, warnings, "\n".join(parts)


def cmd_plumbing(path: str, field: str | None = None, rank_only: bool = False, seed: int | None = None) -> RunReport:
    rec = _read_json(path)
    G = PlumbingGraph.from_record(rec, _field_flag(field))
    result, warnings, text = _plumbing_payload(G, rank_only)
    if seed is not None:
        rng = random.Random(seed)
        agree = True
        for _ in range(ORDER_CHECKS):
            perm = list(range(len(G.vertices)))
            rng.shuffle(perm)
            other = homology_at_infinity(G.permuted(perm), rank_only=rank_only)
            agree &= [str(h) for h in other.H] == list(result["homology"].values())
        result["order_check"] = {"seed": seed, "permutations": ORDER_CHECKS, "agree": agree}
        text += f"\n\norder check (seed {seed}): {ORDER_CHECKS} vertex permutations, {'agree' if agree else 'DISAGREE'}"
        if not agree:
            warnings.append("vertex permutation changed the homology table")
    flags = {"field": field, "rank_only": rank_only, "seed": seed}
    return RunReport(__version__, input_digest("plumbing", rec, flags), "plumbing", result, warnings, text)


# arrangement


def _arrangement_payload(A: Arrangement) -> tuple[dict, str]:
    table = stratum_table(A)
    pi, pic, pinf = homotopy_type(A, table), compact_support_type(A, table), homotopy_type_at_infinity(A, table)
    result = {
        "dim": A.dim,
        "stratum_table": table.to_record(),
        "homotopy_type": str(pi),
        "compact_support_type": str(pic),
        "homotopy_type_at_infinity": str(pinf),
        "records": {
            "homotopy_type": pi.to_record(),
            "compact_support_type": pic.to_record(),
            "homotopy_type_at_infinity": pinf.to_record(),
        },
    }
    if table.nc_flag:
        result["normal_crossing_form_agrees"] = normal_crossing_homotopy_type(table) == pi
    rows = [["{" + ",".join(str(j) for j in r.J) + "}", str(r.n), str(r.c)] for r in table.rows]
    parts = [
        f"dimension {A.dim}, {len(A.hyperplanes)} hyperplanes",
        "",
        _table(["J", "n_J", "c_J"], rows),
        "",
        f"normal crossing: {'yes' if table.nc_flag else 'no'}"
        + (f", m = {table.m_profile}" if table.nc_flag else ""),
        "",
        _table(
            ["object", "motive"],
            [["Pi", str(pi)], ["Pi^c", str(pic)], ["Pi^inf", str(pinf)]],
        ),
    ]
    return result, "\n".join(parts)


def cmd_arrangement(path: str, field: str | None = None, rank_only: bool = False, seed: int | None = None) -> RunReport:
    rec = _read_json(path)
    A = Arrangement.from_record(rec)
    result, text = _arrangement_payload(A)
    warnings = []
    if field is not None:
        warnings.append(f"--field {field} ignored: arrangements are computed over Q")
    if seed is not None and A.hyperplanes:
        rng = random.Random(seed)
        agree = True
        for _ in range(ORDER_CHECKS):
            hs = list(A.hyperplanes)
            rng.shuffle(hs)
            B = Arrangement(A.dim, tuple(hs))
            agree &= str(homotopy_type_at_infinity(B)) == result["homotopy_type_at_infinity"]
        result["order_check"] = {"seed": seed, "permutations": ORDER_CHECKS, "agree": agree}
        text += f"\n\norder check (seed {seed}): {ORDER_CHECKS} hyperplane shuffles, {'agree' if agree else 'DISAGREE'}"
        if not agree:
            warnings.append("hyperplane order changed the motive at infinity")
    flags = {"field": field, "seed": seed}
    return RunReport(__version__, input_digest("arrangement", rec, flags), "arrangement", result, warnings, text)


# gw


def _element_result(value) -> dict:
    out = {"value": str(value), "record": value.to_record(), "rank": value.rank}
    if value.field.kind == RC:
        out["sig"] = value.sig
    elif value.field.kind == FQ:
        out["disc_bit"] = value.disc_bit
    return out


def cmd_gw(
    expression: str | None = None,
    matrix: str | None = None,
    field: str | None = None,
    rank_only: bool = False,
    seed: int | None = None,
) -> RunReport:
    if (expression is None) == (matrix is None):
        raise ValidationError("give exactly one of an expression or --matrix FILE")
    warnings: list[str] = []
    if expression is not None:
        F = Field.parse(field or DEFAULT_GW_FIELD)
        value = parse_gw(expression, F)
        result = {"field": str(F), "expression": expression, **_element_result(value)}
        invariants = [["value", str(value)], ["rank", str(value.rank)]]
        if F.kind == RC:
            invariants.append(["signature", str(value.sig)])
        elif F.kind == FQ:
            invariants.append(["disc bit", str(value.disc_bit)])
        text = f"{expression}  over {F}\n\n" + _table(["invariant", "value"], invariants)
        payload = {"expression": expression}
    else:
        rec = _read_json(matrix)
        M = matrix_from_record(rec, _field_flag(field))
        D = gw_diagonalize(M)
        warnings.extend(D.notes)
        result = {
            "field": str(M.field),
            "matrix": [[str(e) for e in row] for row in M.to_rows()],
            "summary": D.summary(),
            "certificate": D.to_record(),
        }
        s = D.summary()
        text = "\n".join(
            [
                f"{M.rows}x{M.cols} matrix over {M.field}:",
                str(M),
                "",
                f"diagonal: {', '.join(s['diagonal']) or '-'}",
                "residual block: " + ("none" if s["residual_block"] is None else "\n" + format_matrix(s["residual_block"])),
                f"rank SNF: {' '.join(str(x) for x in s['rank_snf'])}",
            ]
            + ([f"signature SNF: {' '.join(str(x) for x in s['signature_snf'])}"] if s["signature_snf"] else [])
            + [f"certificate: {s['left_ops']} row ops, {s['right_ops']} column ops, replays {'yes' if s['certificate_replays'] else 'NO'}"]
        )
        payload = {"matrix": rec}
    flags = {"field": field, "seed": seed}
    return RunReport(__version__, input_digest("gw", payload, flags), "gw", result, warnings, text)


# cech


def _subset(value, path: str) -> tuple:
    if not isinstance(value, list) or not value:
        raise ValidationError("subset must be a non-empty list", path)
    if any(isinstance(x, bool) or not isinstance(x, (int, str)) for x in value):
        raise ValidationError("subset members must be integers or strings", path)
    return tuple(value)


def cech_complex_from_record(rec: dict) -> TateComplex:
    """Either a literal complex record or ``{"strata": [...], "order": [...], "faces": [...]}``."""
    if not isinstance(rec, dict):
        raise ValidationError("cech record must be an object")
    if "terms" in rec:
        return TateComplex.from_record(rec)
    strata_rec = rec.get("strata")
    if not isinstance(strata_rec, list):
        raise ValidationError("strata must be a list", "strata")
    strata = {}
    for k, s in enumerate(strata_rec):
        if not isinstance(s, dict):
            raise ValidationError("stratum must be an object", f"strata[{k}]")
        J = frozenset(_subset(s.get("J"), f"strata[{k}].J"))
        if J in strata:
            raise ValidationError("repeated subset", f"strata[{k}].J")
        strata[J] = {key: v for key, v in s.items() if key != "J"}
    faces = {}
    for k, f in enumerate(rec.get("faces", [])):
        if not isinstance(f, dict) or not isinstance(f.get("matrix"), list):
            raise ValidationError("face needs K, J and matrix", f"faces[{k}]")
        K, J = _subset(f.get("K"), f"faces[{k}].K"), _subset(f.get("J"), f"faces[{k}].J")
        faces[(frozenset(K), frozenset(J))] = f["matrix"]
    parsed = {}
    for k, (J, s) in enumerate(strata.items()):
        try:
            parsed[J] = Stratum.parse(s)
        except ValidationError as exc:
            raise ValidationError(str(exc), f"strata[{k}]") from None
    return ordered_cech_complex(parsed, rec.get("order"), faces)


def cmd_cech(path: str, field: str | None = None, rank_only: bool = False, seed: int | None = None) -> RunReport:
    rec = _read_json(path)
    C = cech_complex_from_record(rec)
    H = complex_homology(C)
    chi_c, chi_h = euler_characteristics(C), homology_euler_characteristics(H)
    warnings = []
    if field is not None:
        warnings.append(f"--field {field} ignored: Cech homology is integral")
    if chi_c != chi_h:
        warnings.append("euler characteristic not conserved in some twist block")
    key = lambda qp: f"({qp[0]},{qp[1]})"  # noqa: E731
    result = {
        "complex": C.to_record(),
        "homology": [str(h) for h in H],
        "homology_records": [h.to_record() for h in H],
        "total": str(total_motive(H)),
        "euler": {"chain": {key(k): v for k, v in chi_c.items()}, "homology": {key(k): v for k, v in chi_h.items()}},
        "euler_conserved": chi_c == chi_h,
    }
    rows = [[str(n), str(len(t)), str(h)] for n, (t, h) in enumerate(zip(C.terms, H))]
    text = "\n".join(
        [
            _table(["n", "rank C_n", "H_n"], rows),
            "",
            f"total: {result['total']}",
            "euler characteristic per (q, p): "
            + (", ".join(f"{key(k)}: {v}" for k, v in chi_c.items()) or "all zero")
            + ("  (conserved)" if chi_c == chi_h else "  (NOT conserved)"),
        ]
    )
    flags = {"field": field, "seed": seed}
    return RunReport(__version__, input_digest("cech", rec, flags), "cech", result, warnings, text)


# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "record"), default="text")
    common.add_argument("--field", help="qc, rc or fq:<q>; overrides the input record's field")
    common.add_argument("--rank-only", action="store_true", help="classical Mumford mode (odd weights allowed)")
    common.add_argument("--seed", type=int, help="replay seed for the order-invariance check")

    parser = argparse.ArgumentParser(prog="motinf", description="Exact motivic invariants at infinity.")
    parser.add_argument("--version", action="version", version=f"motinf {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in (
        ("plumbing", "homology motives at infinity of a plumbing graph"),
        ("arrangement", "motivic decomposition of a hyperplane arrangement complement"),
        ("cech", "homology of an ordered Cech complex"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("input", help="JSON record, or - for stdin")
    g = sub.add_parser("gw", parents=[common], help="evaluate a GW expression or diagonalize a GW matrix")
    g.add_argument("expression", nargs="?")
    g.add_argument("--matrix", metavar="FILE")
    return parser


_COMMANDS: dict[str, Callable[..., RunReport]] = {
    "plumbing": cmd_plumbing,
    "arrangement": cmd_arrangement,
    "cech": cmd_cech,
}


def run(argv: Sequence[str] | None = None) -> RunReport:
    return _dispatch(build_parser().parse_args(argv))


def _dispatch(args: argparse.Namespace) -> RunReport:
    flags = {"field": args.field, "rank_only": args.rank_only, "seed": args.seed}
    if args.subcommand == "gw":
        return cmd_gw(args.expression, args.matrix, **flags)
    return _COMMANDS[args.subcommand](args.input, **flags)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = _dispatch(args)
    except MotinfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    sys.stdout.write(report.render(args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
