from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eaqturbo.encoder import ResourceSignature, bundled
from eaqturbo.spectrum import (
    PUBLISHED,
    SpectrumConfig,
    SpectrumError,
    WeightPolynomial,
    distance_spectrum,
    enumerate_paths,
    free_distance,
    spectrum_oracle,
    weight_adjacency,
)
from eaqturbo.state_diagram import build_state_diagram

from conftest import random_encoder

SMALL = [ResourceSignature(1, 1, 0, 1), ResourceSignature(1, 1, 1, 0),
         ResourceSignature(2, 1, 1, 1), ResourceSignature(2, 1, 0, 1),
         ResourceSignature(1, 1, 0, 0, 1, 1), ResourceSignature(2, 1, 2)]


def test_polynomial_arithmetic():
    a = WeightPolynomial.monomial(1, 4, 2)
    b = WeightPolynomial.monomial(2, 4)
    assert (a + b).coeffs == [0, 2, 1, 0, 0]
    # products are truncated at the degree cap
    assert (a * b).coeffs == [0, 0, 0, 2, 0]
    assert (b * b * b).coeffs == [0] * 5
    assert str(WeightPolynomial.zero(3)) == "0"


def test_weight_adjacency_counts_edges():
    d = build_state_diagram(bundled("WH1"))
    A = weight_adjacency(d, 4)
    assert len(A) == 4
    total = sum(sum(p.coeffs) for row in A for p in row)
    assert 0 < total <= d.num_edges


def test_config_validation():
    with pytest.raises(ValueError):
        SpectrumConfig(W=-1)
    with pytest.raises(ValueError):
        SpectrumConfig(W=5, max_length=0)


def test_first_encoder_low_weights():
    d = build_state_diagram(bundled("WH1"))
    assert distance_spectrum(d, 6).coefficients() == [0, 0, 0, 2, 5, 6, 23]
    assert free_distance(d) == 3


@settings(max_examples=25, deadline=None)
@given(st.integers(0, len(SMALL) - 1), st.integers(0, 2**32 - 1), st.booleans())
def test_matrix_route_matches_oracle(k, seed, positive):
    d = build_state_diagram(random_encoder(SMALL[k], seed))
    W = 6
    got = distance_spectrum(d, SpectrumConfig(W=W, positive_logical=positive))
    assert got.coefficients() == spectrum_oracle(d, W, positive_logical=positive).coefficients()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1), st.integers(0, 2**32 - 1), st.booleans(), st.integers(1, 6))
def test_capped_series_matches_explicit_paths(k, seed, positive, L):
    d = build_state_diagram(random_encoder(SMALL[k], seed))
    cfg = SpectrumConfig(W=5, positive_logical=positive, max_length=L)
    want = enumerate_paths(d, 5, positive_logical=positive, max_length=L)
    assert distance_spectrum(d, cfg).coefficients() == want.coefficients()


def test_explicit_paths_match_full_series_on_bundled():
    d = build_state_diagram(bundled("WH1"))
    assert enumerate_paths(d, 7).coefficients() == distance_spectrum(d, 7).coefficients()


def test_published_convention_agrees_on_free_distance():
    for name in ["WH1", "WH2", "WH5", "WH6", "PTO1R", "PTO1REA"]:
        d = build_state_diagram(bundled(name))
        strict = distance_spectrum(d, 10).free_distance
        loose = distance_spectrum(d, PUBLISHED).free_distance
        assert strict == loose


def test_conventions_differ_for_an_ancilla_encoder():
    # paths with no logical weight only exist when some input leg is silent
    d = build_state_diagram(bundled("WH5"))
    strict = distance_spectrum(d, 6).coefficients()
    loose = distance_spectrum(d, replace(PUBLISHED, W=6)).coefficients()
    assert strict[:6] == loose[:6] and strict[6] < loose[6]


def test_oracle_guards_size():
    d = build_state_diagram(bundled("PTO1R"))
    with pytest.raises(SpectrumError):
        spectrum_oracle(d, 10, max_states=10)
    with pytest.raises(SpectrumError):
        enumerate_paths(d, 10, max_paths=10)


def test_free_distance_none_beyond_cap():
    d = build_state_diagram(bundled("PTO1REA"))
    assert free_distance(d, 5) is None
    assert distance_spectrum(d, 5).coefficients() == [0] * 6
