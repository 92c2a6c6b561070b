from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from relaus.linalg import (
    GF,
    QQ,
    FieldMismatchError,
    FieldSpec,
    Matrix,
    RowCoordinates,
    block_diag,
    hstack,
    kernel_basis,
    left_kernel,
    row_basis,
    rref,
    scalar_str,
    solve,
    solve_left,
    span_contains,
    vstack,
)

small = st.integers(min_value=-4, max_value=4)


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [draw(st.lists(small, min_size=c, max_size=c)) for _ in range(r)]


fields = st.sampled_from([QQ, GF(2), GF(3), GF(7)])


def _p(fld):
    return None if fld.is_rational else fld.p


@given(int_matrices(), fields)
def test_rank_matches_fraction_oracle(rows, fld):
    m = Matrix.from_rows(fld, rows)
    assert m.rank() == oracles.rank([[v % fld.p if fld.p else Fraction(v) for v in r] for r in rows], _p(fld))


@given(int_matrices(), fields)
def test_kernel_is_kernel_and_full(rows, fld):
    m = Matrix.from_rows(fld, rows)
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert k.cols == m.cols - m.rank()
    assert k.rank() == k.cols


@given(int_matrices(), fields)
def test_left_kernel(rows, fld):
    m = Matrix.from_rows(fld, rows)
    k = left_kernel(m)
    assert (k @ m).is_zero()
    assert k.rows == m.rows - m.rank()


@given(int_matrices(), fields)
def test_rref_is_idempotent_and_spans(rows, fld):
    m = Matrix.from_rows(fld, rows)
    red, rank, piv = rref(m)
    assert rref(red)[0] == red
    assert rank == len(piv) == m.rank()
    b = row_basis(m)
    assert all(span_contains(b, m.row(i)) for i in range(m.rows))


@given(int_matrices(), int_matrices(), fields)
def test_solve_consistency(a_rows, x_rows, fld):
    a = Matrix.from_rows(fld, a_rows)
    if len(x_rows) != a.cols:
        x_rows = (x_rows * a.cols)[: a.cols]
    x = Matrix.from_rows(fld, x_rows)
    b = a @ x
    sol = solve(a, b)
    assert sol is not None and a @ sol == b
    sol_l = solve_left(a.T, b.T)
    assert sol_l is not None and sol_l @ a.T == b.T


def test_solve_inconsistent():
    a = Matrix.from_rows(QQ, [[1, 0], [0, 0]])
    b = Matrix.from_rows(QQ, [[0], [1]])
    assert solve(a, b) is None


@given(int_matrices(4, 4), fields)
def test_inverse(rows, fld):
    n = min(len(rows), len(rows[0]))
    m = Matrix.from_rows(fld, [r[:n] for r in rows[:n]])
    if m.is_invertible():
        assert m @ m.inverse() == Matrix.identity(fld, n)
    else:
        assert m.rank() < n


@given(int_matrices(), fields)
def test_row_coordinates_roundtrip(rows, fld):
    b = row_basis(Matrix.from_rows(fld, rows))
    if b.rows == 0:
        return
    rc = RowCoordinates(b)
    v = Matrix.from_rows(fld, [[1] * b.rows]) @ b
    assert rc.coords(v) @ b == v


def test_row_coordinates_rejects_outside_span():
    rc = RowCoordinates(Matrix.from_rows(QQ, [[1, 0, 0]]))
    with pytest.raises(ValueError):
        rc.coords(Matrix.from_rows(QQ, [[0, 1, 0]]))


def test_scalars_and_strings():
    assert QQ.scalar("-3/4") == QQ.scalar(Fraction(-3, 4))
    assert scalar_str(QQ.scalar("6/8")) == "3/4"
    assert int(GF(5).scalar("1/2")) == 3
    with pytest.raises(ZeroDivisionError):
        GF(3).scalar("1/3")


def test_field_validation():
    with pytest.raises(ValueError):
        FieldSpec("prime", 4)
    with pytest.raises(ValueError):
        FieldSpec("rational", 3)
    with pytest.raises(FieldMismatchError):
        Matrix.identity(QQ, 2) @ Matrix.identity(GF(2), 2)


def test_stacking_shapes():
    a = Matrix.from_rows(QQ, [[1, 2]])
    b = Matrix.from_rows(QQ, [[3, 4]])
    assert vstack(QQ, [a, b]).shape == (2, 2)
    assert hstack(QQ, [a, b]).shape == (1, 4)
    assert block_diag(QQ, [a, b]).shape == (2, 4)
    assert vstack(QQ, [], cols=3).shape == (0, 3)
    assert Matrix.zeros(QQ, 0, 3).rank() == 0


@given(int_matrices(3, 3), int_matrices(3, 3), fields)
def test_matmul_matches_oracle(a_rows, b_rows, fld):
    n = len(a_rows[0])
    b_rows = (b_rows * n)[:n]
    a = Matrix.from_rows(fld, a_rows)
    b = Matrix.from_rows(fld, b_rows)
    p = _p(fld)
    want = oracles.matmul([[Fraction(v) for v in r] for r in a_rows], [[Fraction(v) for v in r] for r in b_rows])
    if p:
        want = [[int(v) % p for v in r] for r in want]
    assert oracles.rows_of(a @ b, p) == want


def test_charpoly_and_poly_eval():
    m = Matrix.from_rows(QQ, [[0, 1], [0, 0]])
    f = m.charpoly()
    assert m.poly_eval(f).is_zero()
