import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motinf import cokernel, smith_normal_form
from motinf.snf import identity, kernel_rank
from oracles import bareiss_rank, det, matmul


@st.composite
def int_matrices(draw, max_dim=8, bound=20):
    m, n = draw(st.integers(1, max_dim)), draw(st.integers(1, max_dim))
    return [[draw(st.integers(-bound, bound)) for _ in range(n)] for _ in range(m)]


def check_snf(A):
    m, n = len(A), len(A[0])
    res = smith_normal_form(A)
    assert matmul(matmul(res.U, A), res.V) == res.S
    assert abs(det(res.U)) == 1 and abs(det(res.V)) == 1
    for i in range(m):
        for j in range(n):
            if i != j:
                assert res.S[i][j] == 0
    d = res.divisors
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert list(d[: len(nz)]) == nz, "nonzero divisors come first"
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert res.rank == bareiss_rank(A)
    return res


def test_triangle_incidence():
    assert smith_normal_form([[1, 1, 0], [-1, 0, 1], [0, -1, -1]]).divisors == (1, 1, 0)


def test_identity_and_coprime_diagonal():
    assert smith_normal_form(identity(4)).divisors == (1, 1, 1, 1)
    assert smith_normal_form([[2, 0], [0, 3]]).divisors == (1, 6)
    assert smith_normal_form([[2, 0], [0, 4]]).divisors == (2, 4)


def test_cokernels():
    assert cokernel([[0, 1, 1], [1, 0, 1], [1, 1, 0]]) == (0, [2])
    assert cokernel([[0]]) == (1, [])
    assert kernel_rank([[0]]) == 1
    assert cokernel([[1, -1]]) == (0, [])
    assert kernel_rank([[1, -1]]) == 1


def test_empty_shapes():
    res = smith_normal_form([], (0, 3))
    assert res.divisors == () and res.rank == 0
    assert cokernel([[], []], (2, 0)) == (2, [])
    assert kernel_rank([], (0, 3)) == 3


def test_large_entries_stay_exact():
    big = 10**30
    res = check_snf([[big, big + 1], [big - 1, big]])
    assert res.divisors == (1, 1)


@settings(max_examples=300, deadline=None)
@given(A=int_matrices())
def test_random_matrices(A):
    check_snf(A)


@settings(max_examples=100, deadline=None)
@given(A=int_matrices(max_dim=5, bound=3))
def test_cokernel_matches_divisors(A):
    res = smith_normal_form(A)
    free, torsion = cokernel(A)
    assert free == len(A) - bareiss_rank(A)
    assert torsion == [d for d in res.divisors if d > 1]
    assert kernel_rank(A) == len(A[0]) - bareiss_rank(A)


@pytest.mark.parametrize("n", range(1, 9))
def test_determinant_is_product_of_divisors(n):
    # tridiagonal -2 / 1 matrix of the A_n chain has |det| = n + 1
    A = [[-2 if i == j else 1 if abs(i - j) == 1 else 0 for j in range(n)] for i in range(n)]
    res = check_snf(A)
    prod = 1
    for d in res.divisors:
        prod *= d
    assert prod == abs(det(A)) == n + 1
