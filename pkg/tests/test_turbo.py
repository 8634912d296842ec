from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eaqturbo.encoder import ResourceSignature, bundled
from eaqturbo.symplectic import DimensionError, PauliOperator
from eaqturbo.turbo import (
    Interleaver,
    TurboCode,
    build_turbo,
    min_distance_scaling,
    stream_length,
    turbo_encode_error,
    turbo_invert,
)

from conftest import paulis, random_encoder


@given(st.integers(1, 40), st.integers(0, 2**32 - 1), st.data())
def test_interleaver_round_trip(n, seed, data):
    il = Interleaver.random(n, np.random.default_rng(seed))
    p = data.draw(paulis(n))
    assert il.invert(il.apply(p)) == p
    a = np.arange(n)
    assert np.array_equal(il.invert_array(il.apply_array(a)), a)
    # qubit j lands on perm[j]
    assert il.apply_array(a)[list(il.perm)].tolist() == a.tolist()


def test_interleaver_rejects_non_permutation():
    with pytest.raises(ValueError):
        Interleaver((0, 0, 1))
    with pytest.raises(DimensionError):
        Interleaver.identity(3).apply(PauliOperator.identity(4))


def test_self_concatenation_sizes():
    e = bundled("PTO1REA")
    code = build_turbo(e, e, 3)
    assert stream_length(e, 3) == 12
    assert code.frames_inner == 12
    assert code.num_qubits == 39
    assert code.logical_qubits == 3


@pytest.mark.parametrize("outer,inner,Q", [
    ("PTO1R", "PTO1R", Fraction(1, 9)),
    ("PTO3R", "PTO3R", Fraction(1, 4)),
    ("PTO1REA", "PTO1REA", Fraction(1, 9)),
])
def test_quantum_rates(outer, inner, Q):
    code = build_turbo(bundled(outer), bundled(inner), 10)
    assert code.quantum_rate == Q


def test_fully_assisted_entanglement_rate():
    e = bundled("PTO1REA")
    assert build_turbo(e, e, 10).asymptotic_entanglement_rate == Fraction(8, 9)
    # with tails the finite block uses slightly fewer ebits per channel qubit
    code = build_turbo(e, e, 3)
    assert code.entanglement_rate == Fraction(2 * 3 + 2 * 12, 3 * 12)
    assert code.ebits == 30


def test_mixed_entanglement_rates():
    ea, r = bundled("PTO1REA"), bundled("PTO1R")
    assert build_turbo(r, ea, 10).asymptotic_entanglement_rate == Fraction(6, 9)
    assert build_turbo(ea, r, 10).asymptotic_entanglement_rate == Fraction(2, 9)


def test_bad_pairings():
    with pytest.raises(ValueError):
        build_turbo(bundled("PTO1R"), bundled("WH2"), 2)  # 9 qubits do not fill pairs
    with pytest.raises(ValueError):
        build_turbo(bundled("PTO1R"), bundled("PTO1R"), 0)
    cbit_inner = random_encoder(ResourceSignature(1, 1, 0, 0, 1), 0)
    with pytest.raises(ValueError):
        build_turbo(bundled("PTO1R"), cbit_inner, 2)


@pytest.mark.parametrize("d,want", [(8, Fraction(3, 4)), (3, Fraction(1, 3)),
                                    (6, Fraction(2, 3)), (7, Fraction(5, 7))])
def test_min_distance_scaling(d, want):
    assert min_distance_scaling(d) == want


def test_min_distance_scaling_rejects_small():
    with pytest.raises(ValueError):
        min_distance_scaling(1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.data())
def test_invert_recovers_encoded_content(seed, data):
    """Push known leg content through both encoders, then invert."""
    outer, inner = bundled("PTO1REA"), bundled("WH1")
    code = build_turbo(outer, inner, 2, np.random.default_rng(seed))
    o, i = outer.sig, inner.sig
    outer_in = data.draw(paulis(code.frames_outer * o.n + o.m))
    extra = data.draw(paulis(code.frames_inner * (i.n - i.kq) + i.m))
    err = turbo_encode_error(code, outer_in, extra)
    inv = turbo_invert(code, err)
    # outer logical legs sit in the first slot of every outer frame
    want = [outer_in.slice(t * o.n, t * o.n + 1) for t in range(code.frames_outer)]
    assert [lab.qubits for lab in inv.labels] == want
    assert np.array_equal(turbo_invert(code, np.array(err.codes())).label_indices, inv.label_indices)


def test_identity_error_inverts_to_nothing():
    e = bundled("PTO1REA")
    code = build_turbo(e, e, 4, np.random.default_rng(0))
    inv = turbo_invert(code, PauliOperator.identity(code.num_qubits))
    assert inv.syndrome.inner.is_trivial() and inv.syndrome.outer.is_trivial()
    assert not inv.label_indices.any() and inv.outer_error.weight == 0


def test_wrong_error_length():
    e = bundled("PTO1REA")
    code = build_turbo(e, e, 2)
    with pytest.raises(DimensionError):
        turbo_invert(code, PauliOperator.identity(code.num_qubits + 1))


def test_interleaver_size_checked():
    e = bundled("PTO1REA")
    with pytest.raises(DimensionError):
        TurboCode(e, e, 2, Interleaver.identity(5))


def _frames_that_fit(outer, inner):
    return next(T for T in range(1, 64) if stream_length(outer, T) % inner.sig.kq == 0)


@pytest.mark.parametrize("outer,inner,Q,E", [
    ("PTO1R", "WH3", Fraction(1, 4), Fraction(1, 4)),
    ("PTO3R", "WH2", Fraction(1, 3), Fraction(1, 3)),
    ("PTO3R", "WH7", Fraction(1, 4), Fraction(1, 4)),
    ("PTO3R", "WH4", Fraction(2, 5), Fraction(1, 5)),
    ("PTO3R", "WH8", Fraction(3, 7), Fraction(1, 7)),
    ("PTO3R", "WH9", Fraction(4, 9), Fraction(1, 9)),
])
def test_combination_rates(outer, inner, Q, E):
    o, i = bundled(outer), bundled(inner)
    code = build_turbo(o, i, _frames_that_fit(o, i))
    assert code.quantum_rate == Q
    # an unassisted outer code leaves only the inner ebits, exact at any length
    assert code.entanglement_rate == E == code.asymptotic_entanglement_rate
