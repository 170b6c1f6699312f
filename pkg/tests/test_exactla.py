from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.matrices import DomainMatrix

from p1k import exactla as la
from p1k._kernels import rref_mod_p
from p1k.errors import DimensionMismatch
from p1k.exactla import GF, QQ, Mat


def _sym(a):
    return sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in a.tolist()])


def _random_q(rng, m, n, r, denom=False):
    """m x n rational matrix of rank <= r built as a product."""
    A = rng.integers(-4, 5, size=(m, r))
    B = rng.integers(-4, 5, size=(r, n))
    M = (A @ B).astype(object)
    if denom:
        d = rng.integers(1, 6, size=(m, 1))
        M = np.vectorize(lambda x, y: Fraction(int(x), int(y)), otypes=[object])(M, d)
    return QQ.array(M)


# --- worked examples --------------------------------------------------------


def test_rank_examples():
    assert la.mat_rank(Mat.identity(QQ, 3)) == 3
    assert la.mat_rank(Mat.zeros(GF(5), 2, 2)) == 0
    assert la.mat_rank(Mat.from_rows(QQ, [[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert la.mat_kernel(Mat.identity(QQ, 3)).shape == (3, 0)
    K = la.mat_kernel(Mat.from_rows(QQ, [[1, -1]]))
    assert K.shape == (2, 1) and K[0, 0] == K[1, 0] != 0
    K = la.mat_kernel(Mat.from_rows(QQ, [[1, 2], [2, 4]]))
    assert K.shape == (2, 1) and K[0, 0] == -2 * K[1, 0]


def test_solve_examples():
    I = Mat.identity(QQ, 3)
    assert la.mat_solve(I, [1, Fraction(1, 2), -3]) == Mat.column(QQ, [1, Fraction(1, 2), -3])
    x = la.mat_solve(Mat.from_rows(QQ, [[1, -1]]), [0])
    assert x is not None and x[0, 0] == x[1, 0]
    assert la.mat_solve(Mat.from_rows(QQ, [[1, 2], [2, 4]]), [1, 3]) is None


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        la.mat_solve(Mat.identity(QQ, 2), [1, 2, 3])


def test_mat_is_immutable():
    M = Mat.identity(QQ, 2)
    with pytest.raises(AttributeError):
        M.data = None
    with pytest.raises(ValueError):
        M.data[0, 0] = 5


def test_mat_arithmetic_mod_p():
    F = GF(7)
    A = Mat.from_rows(F, [[3, 5], [6, 1]])
    assert (A + A) == A.scale(2)
    assert (A - A).is_zero()
    assert (A @ Mat.identity(F, 2)) == A
    assert A.T[0, 1] == 6
    assert (-A)[0, 0] == 4


def test_field_mismatch():
    with pytest.raises(DimensionMismatch):
        Mat.identity(QQ, 2) @ Mat.identity(GF(3), 2)


def test_parse_field():
    assert la.parse_field("Q") is QQ
    assert la.parse_field("Fp:13") == GF(13)
    with pytest.raises(ValueError):
        la.parse_field("Fp:12")
    with pytest.raises(ValueError):
        la.parse_field("R")


def test_fraction_entries_mod_p():
    assert GF(7)(Fraction(1, 3)) == 5


# --- sympy oracle over Q ------------------------------------------------------


@pytest.mark.parametrize("seed", range(40))
def test_rank_kernel_against_sympy(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 9)), int(rng.integers(1, 9))
    a = _random_q(rng, m, n, int(rng.integers(0, min(m, n) + 1)), denom=seed % 2 == 1)
    S = _sym(a)
    assert la.rank(QQ, a) == S.rank()
    K = la.kernel(QQ, a)
    assert K.shape == (n, n - S.rank())
    assert not np.any(la.matmul(QQ, a, K) != 0)
    assert la.rank(QQ, K) == K.shape[1]


@pytest.mark.parametrize("seed", range(20))
def test_solve_against_sympy(seed):
    rng = np.random.default_rng(100 + seed)
    m, n = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    a = _random_q(rng, m, n, int(rng.integers(0, min(m, n) + 1)), denom=True)
    b = QQ.array(rng.integers(-3, 4, size=m))
    x = la.solve(QQ, a, b)
    consistent = _sym(a).rank() == _sym(np.concatenate([a, b.reshape(-1, 1)], axis=1)).rank()
    assert (x is not None) == consistent
    if x is not None:
        assert np.all(la.matmul(QQ, a, x.reshape(-1, 1)).reshape(-1) == b)


def test_large_entries_exact():
    # entries beyond int64 force the multi-prime path
    big = 10**30 + 7
    a = QQ.array([[big, 1, 0], [2 * big, 2, 0], [1, Fraction(1, big), 3]])
    assert la.rank(QQ, a) == _sym(a).rank() == 2
    K = la.kernel(QQ, a)
    assert K.shape == (3, 1) and not np.any(la.matmul(QQ, a, K) != 0)


def test_medium_rank_deficient():
    rng = np.random.default_rng(5)
    a = _random_q(rng, 30, 40, 20)
    assert la.rank(QQ, a) == 20
    assert la.kernel(QQ, a).shape == (40, 20)


# --- F_p oracle ---------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3, 7, 2147483647])
@pytest.mark.parametrize("seed", range(5))
def test_rank_mod_p_against_sympy(p, seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 8)), int(rng.integers(1, 8))
    a = rng.integers(0, min(p, 50), size=(m, n)).astype(np.int64)
    dm = DomainMatrix([[sympy.GF(p)(int(x)) for x in row] for row in a], (m, n), sympy.GF(p))
    F = GF(p)
    assert la.rank(F, a) == dm.rank()
    K = la.kernel(F, a)
    assert K.shape == (n, n - dm.rank())
    assert not np.any(la.matmul(F, a, K) % p)


# --- kernel backends ------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 9),
    st.integers(1, 9),
    st.sampled_from([2, 5, 65521, 2147483629]),
    st.integers(0, 2**32 - 1),
)
def test_numba_and_numpy_agree(m, n, p, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(m, n), dtype=np.int64)
    if seed % 3 == 0:
        a[:, : n // 2] = 0
    R1, p1 = rref_mod_p(a, p, backend="numba")
    R2, p2 = rref_mod_p(a, p, backend="numpy")
    assert np.array_equal(R1, R2) and np.array_equal(p1, p2)


def test_rref_leaves_input_untouched():
    a = np.array([[2, 4], [1, 3]], dtype=np.int64)
    rref_mod_p(a, 5)
    assert a.tolist() == [[2, 4], [1, 3]]


def test_unknown_backend():
    with pytest.raises(ValueError):
        rref_mod_p(np.eye(2, dtype=np.int64), 5, backend="cuda")


# --- properties ---------------------------------------------------------------

small_q = st.lists(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=3, max_size=3), min_size=1, max_size=4)


@settings(max_examples=80, deadline=None)
@given(small_q)
def test_rank_nullity(rows):
    a = QQ.array(rows)
    K = la.kernel(QQ, a)
    assert la.rank(QQ, a) + K.shape[1] == a.shape[1]
    assert la.rank(QQ, a) == la.rank(QQ, a.T.copy())


@settings(max_examples=60, deadline=None)
@given(small_q, st.integers(0, 10**6))
def test_rank_invariant_under_row_operations(rows, seed):
    a = QQ.array(rows)
    rng = np.random.default_rng(seed)
    m = a.shape[0]
    E = QQ.array(np.eye(m, dtype=np.int64))
    if m > 1:
        E[0, m - 1] = int(rng.integers(-3, 4))
    assert la.rank(QQ, la.matmul(QQ, E, a)) == la.rank(QQ, a)
