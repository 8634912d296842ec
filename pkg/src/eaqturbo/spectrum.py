"""Distance spectra from degree-truncated weight adjacency matrices."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .state_diagram import StateDiagram, zero_cycle_edges, zero_cycle_vertices

# float64 sums of nonnegative integers stay exact below 2**53
_EXACT_LIMIT = float(2**52)


class SpectrumError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectrumConfig:
    """How paths are counted.

    ``positive_logical`` keeps only paths with some logical content; turning it
    off also counts paths whose physical operator is a pure stabilizer
    (ancilla Z decorations only).  ``max_length`` caps the number of edges,
    i.e. the sum ``A + A^2 + ... + A^L`` instead of the full series.
    """

    W: int = 10
    positive_logical: bool = True
    max_length: int | None = None

    def __post_init__(self):
        if self.W < 1:
            raise ValueError("truncation degree must be >= 1")
        if self.max_length is not None and self.max_length < 1:
            raise ValueError("max_length must be >= 1")


# Reproduces the published tables: every admissible path, at most 28 edges.
PUBLISHED = SpectrumConfig(W=10, positive_logical=False, max_length=28)


@dataclass
class WeightPolynomial:
    """Counting polynomial truncated above degree ``W``; exact integer coefficients."""

    coeffs: list[int]

    @property
    def W(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, W: int) -> "WeightPolynomial":
        return cls([0] * (W + 1))

    @classmethod
    def monomial(cls, w: int, W: int, count: int = 1) -> "WeightPolynomial":
        c = [0] * (W + 1)
        if w <= W:
            c[w] = count
        return cls(c)

    def __add__(self, other: "WeightPolynomial") -> "WeightPolynomial":
        W = min(self.W, other.W)
        return WeightPolynomial([self.coeffs[i] + other.coeffs[i] for i in range(W + 1)])

    def __mul__(self, other: "WeightPolynomial") -> "WeightPolynomial":
        W = min(self.W, other.W)
        out = [0] * (W + 1)
        for i, a in enumerate(self.coeffs[:W + 1]):
            if a:
                for j in range(W + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return WeightPolynomial(out)

    def __eq__(self, other):
        return isinstance(other, WeightPolynomial) and self.coeffs == other.coeffs

    def __str__(self) -> str:
        terms = [(f"{c}" if c != 1 or w == 0 else "") + (f"x^{w}" if w else "")
                 for w, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


@dataclass
class DistanceSpectrum:
    W: int
    F: dict[int, int] = field(default_factory=dict)

    @property
    def free_distance(self) -> int | None:
        for w in range(self.W + 1):
            if self.F.get(w, 0) > 0:
                return w
        return None

    def coefficients(self) -> list[int]:
        return [self.F.get(w, 0) for w in range(self.W + 1)]

    def as_polynomial(self) -> WeightPolynomial:
        return WeightPolynomial(self.coefficients())


def _coefficient_stack(d: StateDiagram, W: int, keep: np.ndarray) -> np.ndarray:
    """Array ``A[w, i, j]`` counting kept edges i -> j of physical weight w."""
    V = d.num_vertices
    sel = keep & (d.phys_weight <= W)
    key = (d.phys_weight[sel].astype(np.int64) * V + d.src[sel]) * V + d.dst[sel]
    counts = np.bincount(key, minlength=(W + 1) * V * V)
    return counts.reshape(W + 1, V, V).astype(np.int64)


def weight_adjacency(d: StateDiagram, W: int) -> list[list[WeightPolynomial]]:
    """Polynomial matrix of the diagram, leaving out edges on zero physical-weight cycles."""
    A = _coefficient_stack(d, W, ~zero_cycle_edges(d))
    V = d.num_vertices
    return [[WeightPolynomial([int(A[w, i, j]) for w in range(W + 1)]) for j in range(V)]
            for i in range(V)]


def _matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return a.dot(b)
    out = a.astype(np.float64) @ b.astype(np.float64)
    if out.size and out.max() >= _EXACT_LIMIT:
        return a.astype(object).dot(b.astype(object))
    return np.rint(out).astype(np.int64)


def _path_series(A: np.ndarray) -> list[np.ndarray]:
    """Coefficients of ``sum_{i>=1} A(x)^i`` up to the truncation degree.

    With ``N(x) = (I - A(x))^{-1}``: ``N_0 = sum_k A_0^k`` (finite because the
    degree-zero part is nilpotent once zero-weight cycles are removed) and
    ``N_d = N_0 sum_{j=1..d} A_j N_{d-j}``.
    """
    W = A.shape[0] - 1
    V = A.shape[1]
    eye = np.eye(V, dtype=np.int64)
    n0 = eye.copy()
    power = A[0]
    steps = 0
    while power.any():
        n0 = n0 + power
        power = _matmul(power, A[0])
        steps += 1
        if steps > V * (W + 1):
            raise SpectrumError("zero-weight paths do not terminate")
    series = [n0]
    for deg in range(1, W + 1):
        acc = np.zeros((V, V), dtype=np.int64)
        for j in range(1, deg + 1):
            if A[j].any():
                acc = acc + _matmul(A[j], series[deg - j])
        series.append(_matmul(n0, acc))
    series[0] = series[0] - eye
    return series


def _capped_series(A: np.ndarray, L: int) -> list[np.ndarray]:
    """Coefficients of ``A + A^2 + ... + A^L`` up to the truncation degree."""
    W = A.shape[0] - 1
    power = [A[w].copy() for w in range(W + 1)]
    total = [p.copy() for p in power]
    for _ in range(2, L + 1):
        nxt = [np.zeros_like(A[0]) for _ in range(W + 1)]
        for a in range(W + 1):
            if not power[a].any():
                continue
            for b in range(W + 1 - a):
                if A[b].any():
                    nxt[a + b] = nxt[a + b] + _matmul(power[a], A[b])
        power = nxt
        if not any(p.any() for p in power):
            break
        total = [t + p for t, p in zip(total, power)]
    return total


def _series(A: np.ndarray, max_length: int | None) -> list[np.ndarray]:
    return _path_series(A) if max_length is None else _capped_series(A, max_length)


def distance_spectrum(d: StateDiagram, W: int | SpectrumConfig = 10) -> DistanceSpectrum:
    """``F(w)``: admissible paths of physical weight ``w`` and positive logical weight
    that start and end in zero-cycle memory states.

    Pass a ``SpectrumConfig`` instead of ``W`` for the other counting rules.
    """
    cfg = W if isinstance(W, SpectrumConfig) else SpectrumConfig(W=W)
    W = cfg.W
    keep = ~zero_cycle_edges(d)
    zs = sorted(zero_cycle_vertices(d))
    B = _series(_coefficient_stack(d, W, keep), cfg.max_length)
    totals = [int(B[w][np.ix_(zs, zs)].sum()) for w in range(W + 1)]
    if cfg.positive_logical:
        B0 = _series(_coefficient_stack(d, W, keep & (d.log_weight == 0)), cfg.max_length)
        totals = [t - int(B0[w][np.ix_(zs, zs)].sum()) for w, t in enumerate(totals)]
    return DistanceSpectrum(W, {w: t for w, t in enumerate(totals) if t})


def free_distance(d: StateDiagram, W: int = 10) -> int | None:
    return distance_spectrum(d, W).free_distance


def spectrum_oracle(d: StateDiagram, W: int, max_states: int = 2_000_000,
                    positive_logical: bool = True) -> DistanceSpectrum:
    """Depth-first path counting over the edge list, independent of the matrix route.

    Parallel edges with the same endpoints, weight and logical flag are grouped;
    the recursion is memoized on (vertex, remaining weight) and tracks whether
    a positive logical weight edge has been used.
    """
    if d.num_vertices * (W + 1) > max_states:
        raise SpectrumError("diagram too large for the oracle")
    keep = ~zero_cycle_edges(d) & (d.phys_weight <= W)
    key = np.stack([d.src[keep], d.dst[keep], d.phys_weight[keep],
                    (d.log_weight[keep] > 0).astype(np.int64)], axis=1).astype(np.int64)
    groups, counts = np.unique(key, axis=0, return_counts=True)
    out_edges: dict[int, list[tuple[int, int, int, int]]] = {}
    for (s, t, w, lp), c in zip(groups.tolist(), counts.tolist()):
        out_edges.setdefault(s, []).append((t, w, lp, c))
    zset = zero_cycle_vertices(d)

    @lru_cache(maxsize=None)
    def walk(v: int, budget: int) -> tuple[tuple[int, int], ...]:
        # entry w: (paths with no logical weight, paths with some), ending in a zero-cycle state
        res = [[0, 0] for _ in range(budget + 1)]
        if v in zset:
            res[0][0] += 1
        for t, w, lp, c in out_edges.get(v, ()):
            if w > budget:
                continue
            sub = walk(t, budget - w)
            for ww, (p0, p1) in enumerate(sub):
                if lp:
                    res[ww + w][1] += c * (p0 + p1)
                else:
                    res[ww + w][0] += c * p0
                    res[ww + w][1] += c * p1
        return tuple((a, b) for a, b in res)

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * d.num_vertices * (W + 2) + 1000))
    try:
        F: dict[int, int] = {}
        for z in zset:
            for w, (p0, p1) in enumerate(walk(z, W)):
                # the empty path is not a path
                count = p1 if positive_logical else p0 + p1 - (w == 0)
                if count:
                    F[w] = F.get(w, 0) + count
    finally:
        sys.setrecursionlimit(limit)
    return DistanceSpectrum(W, F)


def enumerate_paths(d: StateDiagram, W: int, max_paths: int = 5_000_000,
                    positive_logical: bool = True,
                    max_length: int | None = None) -> DistanceSpectrum:
    """Explicit one-path-at-a-time enumeration; only for very small diagrams."""
    keep = ~zero_cycle_edges(d) & (d.phys_weight <= W)
    idx = np.flatnonzero(keep)
    adj: dict[int, list[tuple[int, int, bool]]] = {}
    for i in idx:
        adj.setdefault(int(d.src[i]), []).append(
            (int(d.dst[i]), int(d.phys_weight[i]), bool(d.log_weight[i] > 0)))
    zset = zero_cycle_vertices(d)
    F: dict[int, int] = {}
    visited = 0
    for z in zset:
        stack = [(z, 0, False, 0)]
        while stack:
            v, w, has_log, length = stack.pop()
            visited += 1
            if visited > max_paths:
                raise SpectrumError("path budget exceeded")
            if length and (has_log or not positive_logical) and v in zset:
                F[w] = F.get(w, 0) + 1
            if max_length is not None and length >= max_length:
                continue
            for t, ew, lp in adj.get(v, ()):
                if w + ew <= W:
                    stack.append((t, w + ew, has_log or lp, length + 1))
    return DistanceSpectrum(W, F)
