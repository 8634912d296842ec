import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eaqturbo.symplectic import (
    DimensionError,
    PauliOperator,
    SymplecticMatrix,
    apply_many,
    decimal_to_pauli,
    pauli_to_decimal,
    sample_symplectic,
    symplectic_product,
)

from conftest import paulis


def all_sp2():
    """Every 2x2 symplectic matrix over GF(2), found by brute force."""
    found = []
    for rows in itertools.product(range(4), repeat=2):
        m = SymplecticMatrix(1, rows)
        if m.is_symplectic():
            found.append(m)
    return found


def test_decimal_convention():
    # ZXYZ -> [1011|0110] -> 182
    p = PauliOperator.from_string("ZXYZ")
    assert (p.z, p.x) == (0b1011, 0b0110)
    assert pauli_to_decimal(p) == 182
    assert str(decimal_to_pauli(182, 4)) == "ZXYZ"


def test_weight_and_codes():
    p = PauliOperator.from_string("IXZYI")
    assert p.weight == 3
    assert p.codes() == [0, 1, 2, 3, 0]
    assert PauliOperator.from_codes(p.codes()) == p


def test_bad_bits_rejected():
    with pytest.raises(DimensionError):
        PauliOperator(2, 4, 0)
    with pytest.raises(DimensionError):
        PauliOperator.identity(2) ^ PauliOperator.identity(3)


def test_symplectic_product_single_qubit():
    X, Z, Y = (PauliOperator.from_string(c) for c in "XZY")
    assert symplectic_product(X, Z) == 1
    assert symplectic_product(X, Y) == 1
    assert symplectic_product(Y, Y) == 0
    assert symplectic_product(PauliOperator.from_string("XX"), PauliOperator.from_string("ZZ")) == 0


@given(paulis(4), paulis(4))
def test_symplectic_product_symmetric(a, b):
    assert symplectic_product(a, b) == symplectic_product(b, a)


def test_sp2_has_six_elements():
    assert len(all_sp2()) == 6


def test_sample_symplectic_uniform_on_sp2():
    rng = np.random.default_rng(7)
    counts = Counter(sample_symplectic(1, rng).rows for _ in range(6000))
    assert set(counts) == {m.rows for m in all_sp2()}
    # each of the six should land near 1000; 5 sigma is about 145
    assert all(abs(c - 1000) < 150 for c in counts.values())


@pytest.mark.parametrize("N", [1, 2, 3, 5, 8])
def test_sampled_matrices_are_symplectic(N):
    rng = np.random.default_rng(N)
    for _ in range(20):
        assert sample_symplectic(N, rng).is_symplectic()


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.data())
def test_inverse_undoes_apply(seed, N, data):
    m = sample_symplectic(N, np.random.default_rng(seed))
    p = data.draw(paulis(N))
    assert m.inverse().apply(m.apply(p)) == p
    assert m.apply(m.inverse().apply(p)) == p


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.data())
def test_apply_preserves_commutation(seed, N, data):
    m = sample_symplectic(N, np.random.default_rng(seed))
    a, b = data.draw(paulis(N)), data.draw(paulis(N))
    assert symplectic_product(m.apply(a), m.apply(b)) == symplectic_product(a, b)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_compose_order(seed, N):
    rng = np.random.default_rng(seed)
    a, b = sample_symplectic(N, rng), sample_symplectic(N, rng)
    ab = a.compose(b)
    for d in range(4**N):
        assert ab.apply_decimal(d) == b.apply_decimal(a.apply_decimal(d))
    assert ab.is_symplectic()
    assert a.compose(a.inverse()) == SymplecticMatrix.identity(N)


def test_apply_many_matches_scalar():
    m = sample_symplectic(4, np.random.default_rng(3))
    d = np.arange(4**4)
    assert apply_many(m, d).tolist() == [m.apply_decimal(int(v)) for v in d]
    assert np.array_equal(m.table, apply_many(m, d))


def test_violations_report_pairs():
    m = SymplecticMatrix(1, (2, 2))  # Z and Z commute, should anticommute
    assert m.violations() == [(0, 1)]
    assert not m.is_symplectic()
