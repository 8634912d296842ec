"""Phase-free Pauli operators and binary symplectic matrices over GF(2).

A Pauli operator on ``n`` qubits is stored as two ``n``-bit integers ``z`` and
``x``.  Qubit ``i`` (0-based) sits at bit position ``n - 1 - i`` so that the
concatenation ``[z_1 .. z_n | x_1 .. x_n]`` read as one binary number is the
decimal label used for encoder files (``ZIX -> 33``, ``ZXYZ -> 182``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

# single-qubit codes, (z << 1) | x
I, X, Z, Y = 0, 1, 2, 3
PAULI_CHARS = "IXZY"


class DimensionError(ValueError):
    pass


def _mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class PauliOperator:
    n: int
    z: int = 0
    x: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError("negative qubit count")
        if self.z >> self.n or self.x >> self.n or self.z < 0 or self.x < 0:
            raise DimensionError(f"bit vectors do not fit in {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @classmethod
    def from_string(cls, s: str) -> "PauliOperator":
        n = len(s)
        z = x = 0
        for i, ch in enumerate(s.upper()):
            code = PAULI_CHARS.index(ch)
            bit = 1 << (n - 1 - i)
            if code & 2:
                z |= bit
            if code & 1:
                x |= bit
        return cls(n, z, x)

    @classmethod
    def from_codes(cls, codes) -> "PauliOperator":
        codes = [int(c) for c in codes]
        n = len(codes)
        z = x = 0
        for i, c in enumerate(codes):
            bit = 1 << (n - 1 - i)
            if c & 2:
                z |= bit
            if c & 1:
                x |= bit
        return cls(n, z, x)

    @classmethod
    def single(cls, n: int, qubit: int, code: int) -> "PauliOperator":
        codes = [I] * n
        codes[qubit] = code
        return cls.from_codes(codes)

    @property
    def weight(self) -> int:
        return (self.z | self.x).bit_count()

    @property
    def decimal(self) -> int:
        return (self.z << self.n) | self.x

    def codes(self) -> list[int]:
        n = self.n
        return [
            (((self.z >> (n - 1 - i)) & 1) << 1) | ((self.x >> (n - 1 - i)) & 1)
            for i in range(n)
        ]

    def __xor__(self, other: "PauliOperator") -> "PauliOperator":
        if self.n != other.n:
            raise DimensionError(f"{self.n} vs {other.n} qubits")
        return PauliOperator(self.n, self.z ^ other.z, self.x ^ other.x)

    __add__ = __xor__

    def concat(self, *others: "PauliOperator") -> "PauliOperator":
        """Tensor product ``self : other : ...`` with ``self`` on the first qubits."""
        n, z, x = self.n, self.z, self.x
        for o in others:
            n += o.n
            z = (z << o.n) | o.z
            x = (x << o.n) | o.x
        return PauliOperator(n, z, x)

    def slice(self, start: int, stop: int) -> "PauliOperator":
        """Restriction to qubits ``start .. stop - 1``."""
        if not 0 <= start <= stop <= self.n:
            raise DimensionError(f"bad qubit range [{start}, {stop}) for n={self.n}")
        shift = self.n - stop
        m = _mask(stop - start)
        return PauliOperator(stop - start, (self.z >> shift) & m, (self.x >> shift) & m)

    def z_part(self) -> "PauliOperator":
        return PauliOperator(self.n, self.z, 0)

    def x_part(self) -> "PauliOperator":
        return PauliOperator(self.n, 0, self.x)

    def __str__(self) -> str:
        return "".join(PAULI_CHARS[c] for c in self.codes())

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    """1 iff ``a`` and ``b`` anticommute."""
    if a.n != b.n:
        raise DimensionError(f"{a.n} vs {b.n} qubits")
    return ((a.z & b.x).bit_count() + (a.x & b.z).bit_count()) & 1


def _sp(u: int, v: int, n: int) -> int:
    # symplectic product of packed [z|x] integers
    m = _mask(n)
    return ((((u >> n) & v) & m).bit_count() + ((u & m) & (v >> n)).bit_count()) & 1


def pauli_to_decimal(p: PauliOperator) -> int:
    return p.decimal


def decimal_to_pauli(d: int, n: int) -> PauliOperator:
    if d < 0 or d >= 4**n:
        raise DimensionError(f"decimal {d} out of range for {n} qubits")
    return PauliOperator(n, d >> n, d & _mask(n))


@dataclass(frozen=True)
class SymplecticMatrix:
    """Row ``i < N`` is the image of ``Z_{i+1}``; row ``N + i`` the image of ``X_{i+1}``.

    Rows are stored as packed ``[z|x]`` decimals.  Pauli operators act as row
    vectors: the image of ``p`` is the XOR of the rows selected by its bits.
    """

    N: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != 2 * self.N:
            raise DimensionError(f"expected {2 * self.N} rows, got {len(self.rows)}")
        for r in self.rows:
            if r < 0 or r >= 4**self.N:
                raise DimensionError(f"row {r} out of range for N={self.N}")

    @classmethod
    def identity(cls, N: int) -> "SymplecticMatrix":
        return cls(N, tuple(1 << (2 * N - 1 - i) for i in range(2 * N)))

    def row(self, i: int) -> PauliOperator:
        return decimal_to_pauli(self.rows[i], self.N)

    def violations(self) -> list[tuple[int, int]]:
        """Row pairs whose symplectic product differs from that of the input basis."""
        N = self.N
        bad = []
        for i in range(2 * N):
            for j in range(i + 1, 2 * N):
                want = 1 if j == i + N else 0
                if _sp(self.rows[i], self.rows[j], N) != want:
                    bad.append((i, j))
        return bad

    def is_symplectic(self) -> bool:
        return not self.violations()

    def apply_decimal(self, d: int) -> int:
        out = 0
        rows = self.rows
        top = 2 * self.N - 1
        while d:
            low = d & -d
            out ^= rows[top - (low.bit_length() - 1)]
            d ^= low
        return out

    def apply(self, p: PauliOperator) -> PauliOperator:
        if p.n != self.N:
            raise DimensionError(f"operator on {p.n} qubits, matrix on {self.N}")
        return decimal_to_pauli(self.apply_decimal(p.decimal), self.N)

    def inverse(self) -> "SymplecticMatrix":
        # M^-1 = L M^T L with L the z/x swap
        N = self.N
        cols = []
        for j in range(2 * N):
            bit = 2 * N - 1 - j
            col = 0
            for i, r in enumerate(self.rows):
                if (r >> bit) & 1:
                    col |= 1 << (2 * N - 1 - i)
            cols.append(col)
        # transpose row j = column j; conjugating by L swaps z/x halves on both sides
        m = _mask(N)
        swapped = [((c & m) << N) | (c >> N) for c in cols]
        return SymplecticMatrix(N, tuple(swapped[N:] + swapped[:N]))

    def compose(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        """Matrix for ``p -> other.apply(self.apply(p))``."""
        return SymplecticMatrix(self.N, tuple(other.apply_decimal(r) for r in self.rows))

    @cached_property
    def table(self) -> np.ndarray:
        """Images of every input decimal ``0 .. 4**N - 1`` (small N only)."""
        if self.N > 12:
            raise MemoryError(f"dense table for N={self.N} is too large")
        return apply_many(self, np.arange(4**self.N, dtype=np.int64))


def apply_many(m: SymplecticMatrix, decimals: np.ndarray) -> np.ndarray:
    """Vectorized ``apply_decimal`` over an integer array."""
    decimals = np.asarray(decimals, dtype=np.int64)
    out = np.zeros_like(decimals)
    top = 2 * m.N - 1
    for bit in range(2 * m.N):
        sel = ((decimals >> bit) & 1).astype(bool)
        out[sel] ^= m.rows[top - bit]
    return out


def _random_vector(basis: list[int], rng: np.random.Generator) -> int:
    bits = rng.integers(0, 2, size=len(basis))
    v = 0
    for b, keep in zip(basis, bits):
        if keep:
            v ^= b
    return v


def _independent(vectors: list[int]) -> list[int]:
    basis: list[int] = []
    pivots: list[int] = []
    for v in vectors:
        w = v
        for b, p in zip(basis, pivots):
            if (w >> p) & 1:
                w ^= b
        if w:
            basis.append(w)
            pivots.append(w.bit_length() - 1)
    return basis


def sample_symplectic(N: int, rng: np.random.Generator) -> SymplecticMatrix:
    """Uniform element of Sp(2N, 2) by symplectic basis completion.

    For each qubit in turn pick the image of ``Z_i`` uniformly among nonzero
    vectors of the current symplectic complement, then the image of ``X_i``
    uniformly among complement vectors that anticommute with it.  Every step has
    a fixed number of choices, so the product is uniform on the group.
    """
    if N < 1:
        raise DimensionError("N must be >= 1")
    basis = [1 << b for b in range(2 * N)]
    zs, xs = [], []
    for _ in range(N):
        while True:
            u = _random_vector(basis, rng)
            if u:
                break
        while True:
            v = _random_vector(basis, rng)
            if _sp(u, v, N) == 1:
                break
        zs.append(u)
        xs.append(v)
        projected = [b ^ (_sp(b, v, N) * u) ^ (_sp(b, u, N) * v) for b in basis]
        basis = _independent(projected)
    return SymplecticMatrix(N, tuple(zs + xs))
