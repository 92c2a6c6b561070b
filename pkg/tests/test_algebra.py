import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relaus.algebra import (
    AlgebraPresentation,
    Arrow,
    PresentationError,
    build_algebra,
    linear_a,
    semisimple,
    truncated_polynomial,
)
from relaus.linalg import GF, QQ, Matrix


def commutative_square(fld=QQ):
    return AlgebraPresentation(
        fld,
        ["1", "2", "3", "4"],
        [Arrow("a", "1", "2"), Arrow("b", "2", "4"), Arrow("c", "1", "3"), Arrow("d", "3", "4")],
        [[(1, ("a", "b")), (-1, ("c", "d"))]],
        nilpotency_bound=3,
    )


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_truncated_polynomial_dims(n):
    a = build_algebra(truncated_polynomial(n, QQ))
    assert a.dim == n
    a.check_associative()
    a.check_unit()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_linear_a_dims(n):
    a = build_algebra(linear_a(n, QQ))
    assert a.dim == n * (n + 1) // 2
    a.check_idempotents()


def test_commutative_square():
    a = build_algebra(commutative_square())
    # 4 trivial paths, 4 arrows, ab = cd
    assert a.dim == 9
    a.check_associative()
    assert [pd.module.dim for pd in a.projective_data] == [4, 2, 2, 1]


def test_prime_field_build():
    a = build_algebra(commutative_square(GF(3)))
    assert a.dim == 9
    a.check_associative()


def test_opposite_is_involutive():
    a = build_algebra(linear_a(3, QQ))
    op = a.opposite()
    assert op.opposite() is a
    assert op.dim == a.dim
    op.check_associative()
    # projectives of the opposite are the duals of the injectives: dims swap ends of the quiver
    assert sorted(pd.module.dim for pd in op.projective_data) == sorted(pd.module.dim for pd in a.projective_data)
    assert [pd.module.dim for pd in op.projective_data] == [1, 2, 3]


def test_regular_module_decomposes_into_projectives():
    a = build_algebra(linear_a(3, QQ))
    assert sum(pd.module.dim for pd in a.projective_data) == a.dim
    a.regular_module.check()


def test_path_algebra_without_relations_accepted():
    a = build_algebra(AlgebraPresentation(QQ, ["1", "2"], [Arrow("a", "1", "2")], [], nilpotency_bound=2))
    assert a.dim == 3


@pytest.mark.parametrize(
    "pres, msg",
    [
        (AlgebraPresentation(QQ, ["1"], [Arrow("x", "1", "1")], [], nilpotency_bound=2), "not admissible"),
        (AlgebraPresentation(QQ, ["1", "1"], [], [], nilpotency_bound=1), "duplicate vertex"),
        (AlgebraPresentation(QQ, ["1"], [Arrow("x", "1", "2")], [], nilpotency_bound=1), "undeclared endpoint"),
        (
            AlgebraPresentation(QQ, ["1", "2"], [Arrow("a", "1", "2"), Arrow("b", "1", "2")], [[(1, ("a", "b"))]], 2),
            "not composable",
        ),
        (AlgebraPresentation(QQ, ["1"], [Arrow("x", "1", "1")], [[(1, ("x",))]], 2), "length < 2"),
        (AlgebraPresentation(QQ, ["1"], [Arrow("x", "1", "1")], [[(1, ("y", "y"))]], 2), "unknown arrow"),
        (AlgebraPresentation(QQ, ["1"], [Arrow("x", "1", "1")], [[(1, ("x", "x"))]], 0), "nilpotency_bound"),
    ],
)
def test_presentation_errors(pres, msg):
    with pytest.raises(PresentationError, match=msg):
        build_algebra(pres)


@given(st.integers(1, 5), st.sampled_from([QQ, GF(2), GF(5)]))
def test_structure_constants_match_path_concatenation(n, fld):
    # x^i * x^j = x^{i+j} (or 0)
    a = build_algebra(truncated_polynomial(n, fld))
    for i, j in itertools.product(range(n), repeat=2):
        row = a.product_row(i, j)
        want = [0] * n
        if i + j < n:
            want[i + j] = 1
        assert row == Matrix.from_rows(fld, [want])


def test_semisimple():
    a = build_algebra(semisimple(3, QQ))
    assert a.dim == 3
    assert len(a.projective_data) == 3
