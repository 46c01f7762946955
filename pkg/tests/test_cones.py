import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from logdiv.cones import strict_witness
from logdiv.exact import RationalMatrix


def stiemke_certificate(rows, box=4):
    """y with A^T y >= 0 and A^T y != 0; proves {Ax = 0, x > 0} is empty."""
    ncols = len(rows[0])
    for y in itertools.product(range(-box, box + 1), repeat=len(rows)):
        combo = [sum(y[i] * rows[i][j] for i in range(len(rows))) for j in range(ncols)]
        if all(c >= 0 for c in combo) and any(combo):
            return y
    return None


def test_simple_feasible():
    A = RationalMatrix([[1, -1, 0], [0, 1, -1]])
    x = strict_witness(A, [0, 1, 2])
    assert x is not None and x[0] == x[1] == x[2] > 0


def test_simple_infeasible():
    assert strict_witness(RationalMatrix([[1, 1]]), [0, 1]) is None
    assert strict_witness(RationalMatrix([[1, 0]]), [0]) is None


def test_partial_positivity():
    # x0 + x1 = 0 with only x0 > 0 forces x1 < 0, which is allowed
    x = strict_witness(RationalMatrix([[1, 1]]), [0])
    assert x[0] > 0 and x[0] + x[1] == 0


def test_no_equations():
    x = strict_witness(RationalMatrix([], ncols=3), [0, 1, 2])
    assert all(v > 0 for v in x)


def test_zero_kernel():
    assert strict_witness(RationalMatrix.identity(2), [0]) is None
    assert strict_witness(RationalMatrix.identity(2), []) == (0, 0)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 2).flatmap(
        lambda r: st.integers(2, 4).flatmap(
            lambda c: st.lists(st.lists(st.integers(-2, 2), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )
)
def test_theorem_of_the_alternative(rows):
    A = RationalMatrix(rows)
    x = strict_witness(A, range(A.ncols))
    if x is None:
        assert stiemke_certificate(rows) is not None
    else:
        assert all(v > 0 for v in x) and not any(A.matvec(x))
        assert stiemke_certificate(rows) is None
