import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copperbolt.lattice import SingularBasis, determinant, gram_schmidt, is_lll_reduced, lll_reduce
from copperbolt.polyint import integer_roots, row_to_poly

FIG_BASIS = [
    [16803551, 0, 0, 0],
    [2830, 10, 0, 0],
    [0, 28300, 100, 0],
    [0, 0, 283000, 1000],
]


def sq(v):
    return sum(x * x for x in v)


def shortest_by_enumeration(basis, radius):
    best = None
    for coeffs in itertools.product(range(-radius, radius + 1), repeat=len(basis)):
        if any(coeffs):
            v = [sum(c * row[j] for c, row in zip(coeffs, basis)) for j in range(len(basis[0]))]
            if best is None or sq(v) < best:
                best = sq(v)
    return best


def random_basis(rng, dim, bound=1000):
    while True:
        b = [[rng.randint(-bound, bound) for _ in range(dim)] for _ in range(dim)]
        if determinant(b):
            return b


def test_identity_is_fixed():
    eye = [[int(i == j) for j in range(4)] for i in range(4)]
    out = lll_reduce(eye)
    assert sorted(tuple(abs(x) for x in r) for r in out) == sorted(tuple(r) for r in eye)
    assert is_lll_reduced(eye)


def test_coppersmith_example_reduction():
    out = lll_reduce(FIG_BASIS)
    assert out[0] == [105, -1200, 800, 1000]
    assert 7 in integer_roots(row_to_poly(out[0], 10), 10)
    assert is_lll_reduced(out)
    assert abs(determinant(out)) == abs(determinant(FIG_BASIS))


def test_two_dim_reaches_lambda1():
    b = [[201, 37], [1648, 297]]
    out = lll_reduce(b)
    assert sq(out[0]) == shortest_by_enumeration(b, 50)


def test_size_reduction_violation_detected():
    check = is_lll_reduced([[1, 0], [1000000, 1]])
    assert not check
    assert check.size_violations == [(1, 0, Fraction(1000000))]


def test_lovasz_violation_detected():
    check = is_lll_reduced([[10, 0], [0, 1]])
    assert not check and check.lovasz_violations == [1]
    assert is_lll_reduced([[10, 0], [0, 1]], delta=Fraction(3, 4)).ok is False


def test_singular_basis_rejected():
    with pytest.raises(SingularBasis):
        lll_reduce([[1, 2], [2, 4]])
    with pytest.raises(SingularBasis):
        gram_schmidt([[0, 0], [1, 1]])


def test_bad_delta_rejected():
    with pytest.raises(ValueError):
        lll_reduce([[1, 0], [0, 1]], delta=Fraction(1, 4))
    with pytest.raises(ValueError):
        lll_reduce([[1, 0], [0, 1]], delta=2)


def test_determinant_examples():
    assert determinant([[2, 0], [0, 3]]) == 6
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2], [2, 4]]) == 0
    assert determinant(FIG_BASIS) == 16803551 * 10 * 100 * 1000


@pytest.mark.parametrize("delta", [Fraction(3, 4), Fraction(99, 100)])
def test_random_bases(delta):
    rng = random.Random(int(delta * 100))
    for _ in range(150):
        b = random_basis(rng, rng.randint(2, 5))
        out = lll_reduce(b, delta)
        assert is_lll_reduced(out, delta)
        assert abs(determinant(out)) == abs(determinant(b))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=3), st.integers(min_value=0, max_value=2**31))
def test_first_vector_bound(dim, seed):
    rng = random.Random(seed)
    b = random_basis(rng, dim, 60)
    out = lll_reduce(b)
    lam1_sq = shortest_by_enumeration(out, 3 if dim == 3 else 6)
    assert sq(out[0]) <= 2 ** (dim - 1) * lam1_sq


def test_row_operations_are_unimodular():
    # every output row is an integer combination of the input rows
    rng = random.Random(4)
    b = random_basis(rng, 3)
    out = lll_reduce(b)
    det_b = determinant(b)
    for row in out:
        for j in range(3):
            m = [list(r) for r in b]
            m[j] = row
            assert determinant(m) % det_b == 0
