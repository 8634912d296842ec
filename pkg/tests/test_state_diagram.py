import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eaqturbo.encoder import ResourceSignature, bundled, substitute_resources
from eaqturbo.state_diagram import (
    DiagramTooLarge,
    analyze,
    build_state_diagram,
    describe_edges,
    expected_edge_count,
    strongly_connected_components,
    zero_cycle_edges,
    zero_cycle_vertices,
)

from conftest import random_encoder

SMALL = [ResourceSignature(1, 1, 0, 1), ResourceSignature(2, 1, 1, 1),
         ResourceSignature(1, 1, 1, 0, 1, 1), ResourceSignature(2, 2, 0, 0, 1),
         ResourceSignature(1, 2, 0, 0, 0, 1)]


@pytest.mark.parametrize("sig", SMALL, ids=str)
def test_edge_count_and_out_degree(sig):
    d = build_state_diagram(random_encoder(sig, 1))
    assert d.num_edges == expected_edge_count(sig)
    deg = np.bincount(d.src, minlength=d.num_vertices)
    assert (deg == d.num_edges // d.num_vertices).all()


def test_edge_count_formula():
    # 4^m memory, 4^kq logical, 2^a ancilla Z, 1 ebit choice, 4^kc cbit, 4^g gauge
    sig = ResourceSignature(2, 1, 1, 1, 1, 1)
    assert expected_edge_count(sig) == 16 * 4 * 2 * 4 * 4


def test_first_encoder_diagram():
    d = build_state_diagram(bundled("WH1"))
    assert d.num_vertices == 4 and d.num_edges == 16
    weights = [e.phys_weight for v in range(4) for e in d.edges_from(v)]
    assert len(weights) == 16 and min(weights) == 0


def nx_graph(d, mask):
    g = nx.MultiDiGraph()
    g.add_nodes_from(range(d.num_vertices))
    g.add_edges_from(zip(d.src[mask].tolist(), d.dst[mask].tolist()))
    return g


@settings(max_examples=30, deadline=None)
@given(st.integers(0, len(SMALL) - 1), st.integers(0, 2**32 - 1))
def test_scc_matches_networkx(k, seed):
    d = build_state_diagram(random_encoder(SMALL[k], seed))
    for mask in (np.ones(d.num_edges, bool), d.phys_weight == 0):
        comp = strongly_connected_components(d.num_vertices, d.src[mask], d.dst[mask])
        ours = {}
        for v, c in enumerate(comp.tolist()):
            ours.setdefault(c, set()).add(v)
        theirs = [set(c) for c in nx.strongly_connected_components(nx_graph(d, mask))]
        assert sorted(map(sorted, ours.values())) == sorted(map(sorted, theirs))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, len(SMALL) - 1), st.integers(0, 2**32 - 1))
def test_zero_cycle_vertices_match_networkx(k, seed):
    d = build_state_diagram(random_encoder(SMALL[k], seed))
    g = nx_graph(d, d.phys_weight == 0)
    want = set()
    for comp in nx.strongly_connected_components(g):
        v = next(iter(comp))
        if len(comp) > 1 or g.has_edge(v, v):
            want |= comp
    assert zero_cycle_vertices(d) == frozenset(want)
    # every kept zero-cycle edge stays inside the zero-cycle set
    zc = zero_cycle_edges(d)
    assert all(int(s) in want and int(t) in want for s, t in zip(d.src[zc], d.dst[zc]))


def test_identity_memory_is_zero_cycle_vertex():
    for name in ["WH1", "PTO1R", "PTO1REA", "WH5"]:
        assert 0 in zero_cycle_vertices(build_state_diagram(bundled(name)))


def test_catastrophic_witness_is_zero_weight_cycle():
    anc = substitute_resources(bundled("FIG2"), ResourceSignature(1, 1, 1, 0))
    d = build_state_diagram(anc)
    rep = analyze(d)
    assert not rep.non_catastrophic
    cyc = rep.witness["catastrophic_cycle"]
    assert d.src[cyc[0]] == d.dst[cyc[-1]]
    assert all(d.phys_weight[i] == 0 for i in cyc)
    assert any(d.log_weight[i] > 0 for i in cyc)
    assert "-->" in describe_edges(d, cyc)


def test_finite_response_witness():
    d = build_state_diagram(bundled("FIG2"))
    rep = analyze(d)
    assert rep.non_catastrophic and not rep.recursive
    path = rep.witness["finite_response"]
    assert d.log_weight[path[0]] == 1
    assert int(d.dst[path[-1]]) in rep.zero_cycle_vertices


def test_ancilla_relabeling_self_loop_at_memory_z():
    anc = substitute_resources(bundled("FIG2"), ResourceSignature(1, 1, 1, 0))
    d = build_state_diagram(anc)
    z = 2  # memory Z as a decimal
    loops = np.flatnonzero((d.src == z) & (d.dst == z) & (d.phys_weight == 0) & (d.log_weight > 0))
    assert loops.size
    assert analyze(build_state_diagram(bundled("FIG2"))).non_catastrophic


def test_recursive_implies_quasi_recursive():
    for name in ["WH1", "WH2", "WH5", "PTO1R", "PTO3R", "FIG2"]:
        rep = analyze(build_state_diagram(bundled(name)))
        assert rep.quasi_recursive or not rep.recursive


def test_too_large_diagram_refused():
    with pytest.raises(DiagramTooLarge):
        build_state_diagram(bundled("WH10"), max_edges=1000)
