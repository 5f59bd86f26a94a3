import pytest
from hypothesis import given, strategies as st

from cyclic_ia.errors import DimensionError, IndexAssignmentError, RingMismatchError
from cyclic_ia.ring import Offset, ParamVector, RingSize, ShiftMatrix, minor_of, offset_combine, offset_sum

R5 = RingSize(5)


def test_offset_combine_wraps():
    assert offset_combine(R5.offset(4), R5.offset(3), +1) == R5.offset(2)
    assert offset_combine(R5.offset(2), R5.offset(2), -1) == R5.zero
    # d_31 * x^{p_31}: W31 lands in slot 0 of r_3
    assert (R5.offset(4) + R5.offset(1)).k == 0


def test_offset_is_canonical():
    assert Offset(-1, R5).k == 4
    assert Offset(12, R5).k == 2
    assert str(Offset(7, R5)) == 'x^2'


def test_mismatched_rings_never_combine():
    with pytest.raises(RingMismatchError):
        R5.offset(1) + RingSize(7).offset(1)


def test_ring_size_must_be_positive():
    with pytest.raises(DimensionError):
        RingSize(0)


@given(n=st.integers(1, 12), a=st.integers(-50, 50), b=st.integers(-50, 50), c=st.integers(-50, 50))
def test_offset_group_laws(n, a, b, c):
    ring = RingSize(n)
    x, y, z = ring.offset(a), ring.offset(b), ring.offset(c)
    assert x + y == y + x
    assert (x + y) + z == x + (y + z)
    assert x + ring.zero == x
    assert x - x == ring.zero
    assert Offset(x.k, ring) == x
    assert offset_sum([x, y, z], ring) == x + y + z


def test_minor_on_worked_channel(worked_D):
    m = minor_of(worked_D, (1, 3), (1, 3))
    assert (m.pos_exponent.k, m.neg_exponent.k) == (0, 3)
    assert not m.is_zero()
    assert str(m) == '1-x^3'
    assert str(minor_of(worked_D, (1, 2), (1, 2))) == '1-x^3'


def test_minor_of_constant_channel_is_zero():
    D = ShiftMatrix.from_exponents([[0, 0, 0]] * 3, 5)
    for rows in ((1, 2), (1, 3), (2, 3)):
        for cols in ((1, 2), (2, 3)):
            assert minor_of(D, rows, cols).is_zero()


def test_minor_rejects_repeated_indices(worked_D):
    with pytest.raises(IndexAssignmentError):
        minor_of(worked_D, (1, 1), (1, 2))
    with pytest.raises(IndexAssignmentError):
        minor_of(worked_D, (1, 2), (3, 3))
    with pytest.raises(DimensionError):
        minor_of(worked_D, (1, 4), (1, 2))


exps = st.lists(st.lists(st.integers(0, 10), min_size=3, max_size=3), min_size=3, max_size=3)


@given(rows=exps, n=st.integers(2, 11),
       pick=st.permutations([1, 2, 3]), cols=st.permutations([1, 2, 3]))
def test_minor_symmetries(rows, n, pick, cols):
    D = ShiftMatrix.from_exponents(rows, n)
    i, k = pick[:2]
    j, l = cols[:2]
    m = minor_of(D, (i, k), (j, l))
    assert m.is_zero() == minor_of(D, (k, i), (l, j)).is_zero()
    assert minor_of(D, (k, i), (j, l)) == m.swapped()
    assert minor_of(D, (i, k), (l, j)) == m.swapped()


def test_shift_matrix_normalization(worked_D):
    D = worked_D.row_scaled(2, 3).row_scaled(3, 1)
    assert not D.is_normalized()
    assert D.normalized() == worked_D
    assert worked_D.is_normalized()


def test_shift_matrix_must_be_square():
    with pytest.raises(DimensionError):
        ShiftMatrix.from_exponents([[0, 1, 2], [0, 1, 2]], 5)


def test_param_vector_tx_order(worked_p):
    assert worked_p.tx_order() == (0, 2, 4, 2, 0, 3, 1, 0, 2)
    # receiver-major storage: row j, column i is p_ji
    assert worked_p.exponents() == ((0, 2, 1), (2, 0, 0), (4, 3, 2))
    assert worked_p.exponent(3, 1) == 4


def test_param_vector_shift(worked_p):
    shifted = worked_p.shifted(-4)
    assert shifted.tx_order() == tuple((v - 4) % 5 for v in worked_p.tx_order())
    assert worked_p.shifted(3).normalized() == worked_p


def test_param_vector_from_mapping_requires_all():
    with pytest.raises(DimensionError):
        ParamVector.from_mapping({(1, 1): 0}, 5)
