"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line (printed in the pytest terminal
summary by conftest.py). Random inputs use pinned seeds so every run checks
the same instances. Run directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import random
import time
from collections import Counter
from math import comb

from motinf import (
    Arrangement,
    Field,
    GwElement,
    TateComplex,
    complex_homology,
    compact_support_type,
    coordinate_arrangement,
    danielewski_graph,
    euler_characteristics,
    gw_diagonalize,
    homology_at_infinity,
    homology_euler_characteristics,
    homotopy_type,
    hyperbolic,
    incidence_matrix,
    mumford_matrix,
    normal_crossing_homotopy_type,
    ordered_cech_complex,
    smith_normal_form,
    stratum_table,
    three_lines_graph,
)
from motinf.cli import main
from motinf.gw_matrix import rank_realization
from oracles import bareiss_rank, det, diagonal_form_class, matmul

RESULTS: list[str] = []
RC = Field.real_closed()
SEED = 20240601
DANIELEWSKI_BUDGET_S = 1.0
GW_CHECKS = 10_000
SNF_MATRICES = 1_000
ARRANGEMENTS = 200
PERMUTATIONS = 100
FINITE_FIELDS = {3: (3, 1), 5: (5, 1), 7: (7, 1), 9: (3, 2), 25: (5, 2), 27: (3, 3)}


def record(n: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {n} [{'PASS' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_1_danielewski_family():
    start = time.perf_counter()
    tables = {n: [str(h) for h in homology_at_infinity(danielewski_graph(n, RC)).H] for n in range(1, 9)}
    elapsed = time.perf_counter() - start
    bad = [n for n, t in tables.items() if t != ["1", f"(1/{2 * n})(1)", "0", "1(2)"]]
    record(1, "Danielewski n=1..8 homology at infinity", not bad and elapsed < DANIELEWSKI_BUDGET_S,
           f"mismatches {bad}, {elapsed:.3f}s (budget {DANIELEWSKI_BUDGET_S}s)")


def test_criterion_2_quadratic_refinement():
    problems = []
    for n in range(1, 9):
        mu = mumford_matrix(danielewski_graph(n, RC))
        D = gw_diagonalize(mu)
        units = D.diagonal[: D.unit_count]
        rest = list(D.diagonal[D.unit_count:])
        if D.residual_block is not None:
            rest += [e for row in D.residual_block.to_rows() for e in row if not e.is_zero()]
        if not D.verify():
            problems.append(f"n={n}: certificate does not replay")
        if len(units) != 2 * n or any(u != GwElement.one(RC) for u in units):
            problems.append(f"n={n}: {len(units)} unit entries")
        if len(rest) != 1 or (rest[0].rank, rest[0].sig) != (2 * n, 0):
            problems.append(f"n={n}: residual {[str(e) for e in rest]}")
        if D.rank_snf != (1,) * (2 * n) + (2 * n,):
            problems.append(f"n={n}: rank SNF {D.rank_snf}")
        nH, plain = hyperbolic(RC) * n, GwElement.one(RC) * (2 * n)
        if not (nH.rank == plain.rank and nH.sig == 0 and plain.sig == 2 * n and nH != plain):
            problems.append(f"n={n}: signature channel does not separate nH from 2n<1>")
    record(2, "quadratic refinement diag(1,...,1,nH)", not problems, "; ".join(problems) or "n=1..8")


def test_criterion_3_three_lines():
    G = three_lines_graph(RC)
    res = homology_at_infinity(G)
    one, zero = GwElement.one(RC), GwElement.zero(RC)
    checks = {
        "mu": res.mu.to_rows() == [[zero, one, one], [one, zero, one], [one, one, zero]],
        "N ~ diag(1,1,0)": smith_normal_form(incidence_matrix(G)).divisors == (1, 1, 0),
        "mu_rank ~ diag(1,1,2)": res.snf_mu.divisors == (1, 1, 2),
        "H table": [str(h) for h in res.H] == ["1", "1 + (1/2)(1)", "1(2)", "1(2)"],
        "split flag": res.H[1].split_assumed,
    }
    failed = [k for k, ok in checks.items() if not ok]
    record(3, "three lines", not failed, f"failed {failed}" if failed else "all five checks")


def test_criterion_4_affine_space(tmp_path, capsys):
    bad = []
    for d in range(1, 7):
        path = tmp_path / f"a{d}.json"
        path.write_text(json.dumps({"dim": d, "hyperplanes": []}))
        code = main(["arrangement", str(path), "--format", "record"])
        out = json.loads(capsys.readouterr().out)
        if code != 0 or out["result"]["homotopy_type_at_infinity"] != f"1 + 1({d})[{2 * d - 1}]":
            bad.append(d)
    record(4, "affine space Pi^inf = 1 + 1(d)[2d-1]", not bad, f"failing d {bad}" if bad else "d=1..6")


def _random_arrangement(rng: random.Random) -> Arrangement:
    d = rng.randint(1, 4)
    rows = []
    for _ in range(rng.randint(0, 6)):
        row = [rng.randint(-3, 3) for _ in range(d + 1)]
        if not any(row[:-1]):
            continue
        try:
            Arrangement.from_rows(d, rows + [row])
        except ValueError:
            continue
        rows.append(row)
    return Arrangement.from_rows(d, rows)


def test_criterion_5_arrangement_consistency():
    rng = random.Random(SEED)
    failures, nc = [], 0
    for k in range(ARRANGEMENTS):
        A = _random_arrangement(rng)
        t = stratum_table(A)
        pi, pic = homotopy_type(A, t), compact_support_type(A, t)
        dual = Counter()
        for (q, p), m in pi.multiset().items():
            dual[(A.dim - q, 2 * (A.dim - q) + 2 * q - p)] += m
        if Counter(pic.multiset()) != dual:
            failures.append(f"duality #{k}")
        if t.nc_flag:
            nc += 1
            if normal_crossing_homotopy_type(t) != pi:
                failures.append(f"closed form #{k}")
    for d in range(1, 5):
        if homotopy_type(coordinate_arrangement(d)).multiset() != {(n, n): comb(d, n) for n in range(d + 1)}:
            failures.append(f"Kunneth d={d}")
    record(5, "arrangement duality / NC closed form / Kunneth", not failures,
           f"{ARRANGEMENTS} arrangements ({nc} normal crossing); failures {failures[:5]}")


def _random_element(rng: random.Random, F: Field) -> GwElement:
    if F.kind == "qc":
        return GwElement(F, rng.randint(-20, 20))
    if F.kind == "rc":
        a, b = rng.randint(-10, 10), rng.randint(-10, 10)
        return GwElement(F, a + b, a - b)
    return GwElement(F, rng.randint(-20, 20), rng.randint(0, 1))


def test_criterion_6_gw_ring_soundness():
    rng = random.Random(SEED)
    fields = [Field.quadratically_closed(), RC] + [Field.finite(q) for q in FINITE_FIELDS]
    failures = Counter()
    for F in fields:
        one, H = GwElement.one(F), hyperbolic(F)
        for _ in range(GW_CHECKS):
            x, y, z = (_random_element(rng, F) for _ in range(3))
            ok = (
                x + y == y + x and x * y == y * x
                and (x + y) + z == x + (y + z) and (x * y) * z == x * (y * z)
                and x * (y + z) == x * y + x * z and x * one == x
                and H * x == H * x.rank
            )
            if not ok:
                failures[str(F)] += 1
        if F.kind != "fq":
            continue
        p, e = FINITE_FIELDS[F.q]
        done = 0
        while done < GW_CHECKS:
            a, b = rng.randint(1, p - 1), rng.randint(1, p - 1)
            if (a + b) % p == 0:
                continue
            done += 1
            lhs = GwElement.bracket(a, F) + GwElement.bracket(b, F)
            rhs = GwElement.bracket(a + b, F) + GwElement.bracket(a * b * (a + b), F)
            oracle = diagonal_form_class([(1, a + b), (1, a * b * (a + b))], p, e)
            if not (lhs == rhs and (lhs.rank, lhs.disc_bit) == oracle):
                failures[f"chain {F}"] += 1
    record(6, "GW ring axioms, chain relation, H-absorption", not failures,
           f"{GW_CHECKS} checks x {len(fields)} fields; failures {dict(failures)}")


def test_criterion_7_snf_soundness():
    rng = random.Random(SEED)
    failures = []
    for k in range(SNF_MATRICES):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        A = [[rng.randint(-9, 9) if rng.random() < 0.7 else 0 for _ in range(n)] for _ in range(m)]
        res = smith_normal_form(A)
        nz = [d for d in res.divisors if d]
        ok = (
            matmul(matmul(res.U, A), res.V) == res.S
            and abs(det(res.U)) == 1 and abs(det(res.V)) == 1
            and all(b % a == 0 for a, b in zip(nz, nz[1:]))
            and res.rank == bareiss_rank(A)
        )
        if not ok:
            failures.append(k)
    record(7, "SNF U*A*V=S, unimodular, divisibility, rank", not failures,
           f"{SNF_MATRICES} matrices; failing {failures[:5]}")


def _random_strata(rng: random.Random) -> dict:
    V = rng.randint(1, 6)
    strata = {(v,): "P1" for v in range(V)}
    for i in range(V):
        for j in range(i + 1, V):
            if rng.random() < 0.5:
                strata[(i, j)] = "point"
    for i in range(V):
        for j in range(i + 1, V):
            for k in range(j + 1, V):
                if all(f in strata for f in ((i, j), (i, k), (j, k))) and rng.random() < 0.3:
                    strata[(i, j, k)] = "point"
    return strata


def test_criterion_8_cech_engine():
    rng = random.Random(SEED)
    failures = []
    for k in range(200):
        C = ordered_cech_complex(_random_strata(rng))
        for n in range(2, C.length):
            if any(any(row) for row in matmul(C.d(n - 1), C.d(n))):
                failures.append(f"d o d #{k}")
        if euler_characteristics(C) != homology_euler_characteristics(complex_homology(C)):
            failures.append(f"euler #{k}")
    tri = {(0,): "P1", (1,): "P1", (2,): "P1", (0, 1): "point", (0, 2): "point", (1, 2): "point"}
    H = complex_homology(ordered_cech_complex(tri))
    if [str(h) for h in H] != ["1 + 3*1(1)[2]", "1"]:
        failures.append(f"triangle {[str(h) for h in H]}")
    literal = TateComplex.from_record({"terms": [[{"q": 0}], [{"q": 0}]], "differentials": [[[0]]]})
    if [str(h) for h in complex_homology(literal)] != ["1", "1"]:
        failures.append("zero differential")
    record(8, "Cech d o d = 0, triangle, Euler per twist", not failures, f"200 complexes; failures {failures[:5]}")


def test_criterion_9_determinism(tmp_path, capsys):
    rng = random.Random(SEED)
    graphs = [danielewski_graph(n, RC) for n in range(1, 9)] + [three_lines_graph(RC)]
    failures = []
    for k in range(PERMUTATIONS):
        G = graphs[k % len(graphs)]
        perm = list(range(len(G.vertices)))
        rng.shuffle(perm)
        if [str(h) for h in homology_at_infinity(G.permuted(perm)).H] != [
            str(h) for h in homology_at_infinity(G).H
        ]:
            failures.append(f"permutation #{k}")
    for G in graphs:
        path = tmp_path / "g.json"
        path.write_text(json.dumps(G.to_record()))
        outs = []
        for _ in range(2):
            main(["plumbing", str(path), "--format", "record"])
            outs.append(capsys.readouterr().out)
        if outs[0] != outs[1]:
            failures.append(f"repeat {len(G.vertices)} vertices")
    record(9, "determinism and vertex-order invariance", not failures,
           f"{PERMUTATIONS} permutations, {len(graphs)} repeated CLI runs; failures {failures[:5]}")


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q", "-s"]))
