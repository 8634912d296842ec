"""State diagrams of convolutional encoders and the properties read off them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .encoder import ConvolutionalEncoder, ResourceSignature
from .symplectic import PauliOperator, apply_many, decimal_to_pauli

MAX_EDGES = 1 << 24


class DiagramTooLarge(MemoryError):
    pass


class Edge(NamedTuple):
    src: int
    dst: int
    logical: int
    physical: int
    phys_weight: int
    log_weight: int
    decorated: bool


@dataclass(frozen=True, eq=False)
class StateDiagram:
    """Directed multigraph on the ``4**m`` memory Paulis, one edge per admissible input.

    Vertices are memory Paulis indexed by their decimal label.  Edge arrays are
    parallel; ``logical`` holds the label ``(L_q : L_c^x)`` as a decimal over
    ``k_q + k_c`` qubits and ``decorated`` marks edges whose ancilla-Z, cbit-Z
    or gauge inputs are not the identity.
    """

    sig: ResourceSignature
    src: np.ndarray
    dst: np.ndarray
    logical: np.ndarray
    physical: np.ndarray
    phys_weight: np.ndarray
    log_weight: np.ndarray
    decorated: np.ndarray

    @property
    def m(self) -> int:
        return self.sig.m

    @property
    def num_vertices(self) -> int:
        return 4**self.sig.m

    @property
    def num_edges(self) -> int:
        return len(self.src)

    def vertex(self, v: int) -> PauliOperator:
        return decimal_to_pauli(int(v), self.sig.m)

    def edge(self, i: int) -> Edge:
        return Edge(int(self.src[i]), int(self.dst[i]), int(self.logical[i]),
                    int(self.physical[i]), int(self.phys_weight[i]),
                    int(self.log_weight[i]), bool(self.decorated[i]))

    def edges_from(self, v: int) -> list[Edge]:
        return [self.edge(i) for i in np.flatnonzero(self.src == v)]

    def logical_pauli(self, label: int) -> tuple[PauliOperator, int]:
        """Split a logical label into the logical-qubit Pauli and the cbit X pattern."""
        kq, kc = self.sig.kq, self.sig.kc
        p = decimal_to_pauli(int(label), kq + kc)
        return p.slice(0, kq), p.slice(kq, kq + kc).x

    def physical_pauli(self, i: int) -> PauliOperator:
        return decimal_to_pauli(int(self.physical[i]), self.sig.n)


def expected_edge_count(sig: ResourceSignature) -> int:
    return 4**sig.m * 4**sig.kq * 2**sig.a * 4**sig.kc * 4**sig.g


def _embed(leg: np.ndarray, width: int, offset: int, N: int) -> np.ndarray:
    z = leg >> width
    x = leg & ((1 << width) - 1)
    shift = N - offset - width
    return ((z << shift) << N) | (x << shift)


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


def build_state_diagram(enc: ConvolutionalEncoder, max_edges: int = MAX_EDGES) -> StateDiagram:
    sig = enc.sig
    total = expected_edge_count(sig)
    if total > max_edges:
        raise DiagramTooLarge(f"{total} edges exceed the budget of {max_edges}")
    N, n, m = sig.N, sig.n, sig.m
    off = sig.offsets()

    mem = np.arange(4**m, dtype=np.int64)
    log = np.arange(4**sig.kq, dtype=np.int64)
    anc = np.arange(2**sig.a, dtype=np.int64) << sig.a  # Z-only
    cb = np.arange(4**sig.kc, dtype=np.int64)
    gg = np.arange(4**sig.g, dtype=np.int64)

    def image(leg, name):
        lo, hi = off[name]
        return apply_many(enc.seed, _embed(leg, hi - lo, lo, N))

    shape = (len(mem), len(log), len(anc), len(cb), len(gg))
    parts = [image(mem, "memory"), image(log, "logical"), image(anc, "ancilla"),
             image(cb, "cbit"), image(gg, "gauge")]
    out = np.zeros(shape, dtype=np.int64)
    for axis, part in enumerate(parts):
        view = [1] * 5
        view[axis] = -1
        out ^= part.reshape(view)
    out = out.ravel()

    grid = np.meshgrid(mem, log, np.arange(2**sig.a), cb, gg, indexing="ij")
    M, L, S, C, G = (g.ravel() for g in grid)

    mask_n = (1 << n) - 1
    oz, ox = out >> N, out & ((1 << N) - 1)
    dst = ((oz >> n) << m) | (ox >> n)
    pz, px = oz & mask_n, ox & mask_n
    physical = (pz << n) | px

    kq, kc = sig.kq, sig.kc
    lz, lx = L >> kq, L & ((1 << kq) - 1)
    cz, cx = C >> kc, C & ((1 << kc) - 1)
    width = kq + kc
    logical = ((lz << kc) << width) | (lx << kc) | cx

    return StateDiagram(
        sig=sig,
        src=M.astype(np.int32),
        dst=dst.astype(np.int32),
        logical=logical,
        physical=physical,
        phys_weight=_popcount(pz | px).astype(np.int16),
        log_weight=(_popcount(lz | lx) + _popcount(cx)).astype(np.int16),
        decorated=(S != 0) | (cz != 0) | (G != 0),
    )


def strongly_connected_components(num_vertices: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Component label per vertex (iterative Tarjan, linear time)."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    order = np.argsort(src, kind="stable")
    targets = dst[order]
    starts = np.searchsorted(src[order], np.arange(num_vertices + 1))

    index = np.full(num_vertices, -1, dtype=np.int64)
    low = np.zeros(num_vertices, dtype=np.int64)
    on_stack = np.zeros(num_vertices, dtype=bool)
    labels = np.full(num_vertices, -1, dtype=np.int64)
    stack: list[int] = []
    counter = 0
    n_comp = 0

    for root in range(num_vertices):
        if index[root] >= 0:
            continue
        work = [(root, starts[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, ptr = work[-1]
            end = starts[v + 1]
            advanced = False
            while ptr < end:
                w = int(targets[ptr])
                ptr += 1
                if index[w] < 0:
                    work[-1] = (v, ptr)
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, starts[w]))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    labels[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return labels


def _cycle_info(num_vertices: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(vertices on some cycle, edges lying on some cycle) for the given edge subset."""
    labels = strongly_connected_components(num_vertices, src, dst)
    sizes = np.bincount(labels, minlength=labels.max() + 1 if num_vertices else 0)
    cyclic_comp = sizes > 1
    loops = src[src == dst]
    cyclic_comp[labels[loops]] = True
    on_cycle_vertex = cyclic_comp[labels]
    on_cycle_edge = labels[src] == labels[dst]
    return on_cycle_vertex, on_cycle_edge


def _zero_cycle(d: StateDiagram) -> tuple[np.ndarray, np.ndarray]:
    cached = d.__dict__.get("_zero_cycle")
    if cached is None:
        zp = d.phys_weight == 0
        verts, sub_edges = _cycle_info(d.num_vertices, d.src[zp], d.dst[zp])
        edges = np.zeros(d.num_edges, dtype=bool)
        edges[np.flatnonzero(zp)[sub_edges]] = True
        cached = (verts, edges)
        object.__setattr__(d, "_zero_cycle", cached)
    return cached


def zero_cycle_vertices(d: StateDiagram) -> frozenset[int]:
    verts, _ = _zero_cycle(d)
    return frozenset(int(v) for v in np.flatnonzero(verts))


def zero_cycle_edges(d: StateDiagram) -> np.ndarray:
    """Boolean mask of edges lying on a zero physical-weight cycle."""
    return _zero_cycle(d)[1]


def _path(d: StateDiagram, allowed: np.ndarray, start: int, goal) -> list[int]:
    """Edge indices of a shortest path start -> goal(v) using allowed edges (BFS)."""
    idx = np.flatnonzero(allowed)
    adj: dict[int, list[int]] = {}
    for i in idx:
        adj.setdefault(int(d.src[i]), []).append(int(i))
    prev: dict[int, int | None] = {start: None}
    q = deque([start])
    while q:
        v = q.popleft()
        if goal(v):
            out = []
            while prev[v] is not None:
                e = prev[v]
                out.append(e)
                v = int(d.src[e])
            return out[::-1]
        for e in adj.get(v, ()):
            w = int(d.dst[e])
            if w not in prev:
                prev[w] = e
                q.append(w)
    return []


def check_non_catastrophic(d: StateDiagram) -> tuple[bool, list[int] | None]:
    """Witness is a list of edge indices forming a zero physical-weight cycle with logical weight."""
    on_cycle = zero_cycle_edges(d)
    bad = np.flatnonzero(on_cycle & (d.log_weight > 0))
    if len(bad) == 0:
        return True, None
    e = int(bad[0])
    back = _path(d, on_cycle, int(d.dst[e]), lambda v: v == int(d.src[e]))
    return False, [e] + back


def _reaches(num_vertices: int, src: np.ndarray, dst: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Vertices from which some target vertex is reachable along the given edges."""
    radj: dict[int, list[int]] = {}
    for s, t in zip(src.tolist(), dst.tolist()):
        radj.setdefault(t, []).append(s)
    seen = targets.copy()
    q = deque(np.flatnonzero(targets).tolist())
    while q:
        v = q.popleft()
        for u in radj.get(v, ()):
            if not seen[u]:
                seen[u] = True
                q.append(u)
    return seen


def _finite_response(d: StateDiagram, continuation: np.ndarray, first: np.ndarray):
    """First edges whose continuation can settle into a zero physical-weight cycle."""
    V = d.num_vertices
    zero = continuation & (d.phys_weight == 0)
    cyc_verts, _ = _cycle_info(V, d.src[zero], d.dst[zero])
    can_stop = _reaches(V, d.src[continuation], d.dst[continuation], cyc_verts)
    hits = np.flatnonzero(first & can_stop[d.dst])
    return hits, cyc_verts


def _recursion_test(d: StateDiagram, undecorated_only: bool):
    zverts, zedges = _zero_cycle(d)
    base = ~d.decorated if undecorated_only else np.ones(d.num_edges, dtype=bool)
    continuation = base & (d.log_weight == 0)
    first = base & (d.log_weight == 1) & zverts[d.src] & ~zedges
    hits, cyc = _finite_response(d, continuation, first)
    if len(hits) == 0:
        return True, None
    e = int(hits[0])
    tail = _path(d, continuation, int(d.dst[e]), lambda v: bool(cyc[v]))
    return False, [e] + tail


def check_recursive(d: StateDiagram) -> tuple[bool, bool, list[int] | None]:
    """(recursive, quasi_recursive, witness).

    A weight-one logical edge leaving a zero-cycle vertex (and not itself on a
    zero physical-weight cycle) must never be continued, through zero logical
    weight edges, into a zero physical-weight cycle.  The quasi test only
    considers undecorated edges.  The witness is the offending path.
    """
    quasi, qwit = _recursion_test(d, undecorated_only=True)
    full, fwit = _recursion_test(d, undecorated_only=False)
    recursive = full and quasi
    return recursive, quasi, (qwit or fwit)


@dataclass(frozen=True)
class PropertyReport:
    non_catastrophic: bool
    quasi_recursive: bool
    recursive: bool
    zero_cycle_vertices: frozenset[int]
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        assert not self.recursive or self.quasi_recursive


def analyze(d: StateDiagram) -> PropertyReport:
    nc, nc_wit = check_non_catastrophic(d)
    rec, quasi, r_wit = check_recursive(d)
    witness = {}
    if nc_wit:
        witness["catastrophic_cycle"] = nc_wit
    if r_wit:
        witness["finite_response"] = r_wit
    return PropertyReport(nc, quasi, rec, zero_cycle_vertices(d), witness)


def describe_edges(d: StateDiagram, edges: list[int]) -> str:
    parts = []
    for i in edges:
        e = d.edge(i)
        lq, lc = d.logical_pauli(e.logical)
        label = str(lq) + (format(lc, f"0{d.sig.kc}b") if d.sig.kc else "")
        parts.append(f"{d.vertex(e.src)} --({label or '-'}, {d.physical_pauli(i)})--> {d.vertex(e.dst)}")
    return "; ".join(parts)
