"""Convolutional seed transformations with typed input legs.

Input legs of one frame, in order: memory, logical qubits, ancillas, ebits
(Alice's halves), cbits, gauge qubits.  Output: memory, physical qubits.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .symplectic import (
    DimensionError,
    PauliOperator,
    SymplecticMatrix,
    decimal_to_pauli,
)

DATA_DIR = Path(__file__).parent / "data"


class InvalidEncoderError(ValueError):
    pass


class EncoderFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ResourceSignature:
    m: int
    kq: int = 0
    a: int = 0
    c: int = 0
    kc: int = 0
    g: int = 0

    def __post_init__(self):
        if min(self.m, self.kq, self.a, self.c, self.kc, self.g) < 0:
            raise ValueError(f"negative leg count in {self}")
        if self.n < 1:
            raise ValueError("a frame needs at least one physical qubit")

    @property
    def n(self) -> int:
        return self.kq + self.a + self.c + self.kc + self.g

    @property
    def N(self) -> int:
        return self.m + self.n

    def offsets(self) -> dict[str, tuple[int, int]]:
        """Qubit ranges of each input leg inside the N-qubit seed input."""
        out = {}
        pos = 0
        for name, width in (("memory", self.m), ("logical", self.kq), ("ancilla", self.a),
                            ("ebit", self.c), ("cbit", self.kc), ("gauge", self.g)):
            out[name] = (pos, pos + width)
            pos += width
        return out

    def __str__(self) -> str:
        return f"{self.m} {self.kq} {self.a} {self.c} {self.kc} {self.g}"


@dataclass(frozen=True)
class LogicalLabel:
    """Logical content of one frame: a Pauli on the logical qubits and the X pattern on cbits."""

    qubits: PauliOperator
    cbits: int = 0
    kc: int = 0

    @property
    def decimal(self) -> int:
        n = self.qubits.n + self.kc
        return ((self.qubits.z << self.kc) << n) | (self.qubits.x << self.kc) | self.cbits

    @property
    def weight(self) -> int:
        return self.qubits.weight + self.cbits.bit_count()

    @property
    def index(self) -> int:
        """Dense index in ``range(4**k_q * 2**k_c)``; same ordering as ``decimal``."""
        return (self.qubits.decimal << self.kc) | self.cbits

    @classmethod
    def from_index(cls, index: int, kq: int, kc: int = 0) -> "LogicalLabel":
        return cls(decimal_to_pauli(index >> kc, kq), index & ((1 << kc) - 1), kc)

    def __str__(self) -> str:
        if not self.kc:
            return str(self.qubits)
        return f"{self.qubits}:{self.cbits:0{self.kc}b}"


@dataclass(frozen=True)
class LegDecomposition:
    """Pull-back of one frame's error onto the input legs."""

    logical: PauliOperator
    ancilla: PauliOperator
    ebit: PauliOperator
    cbit: PauliOperator
    gauge: PauliOperator


@dataclass(frozen=True)
class StreamDecomposition:
    initial_memory: PauliOperator
    frames: tuple[LegDecomposition, ...]


@dataclass(frozen=True)
class SyndromeRecord:
    """Measured outcomes for a stream.

    ``initial`` holds the X detections on the initial memory qubits (they start
    in ``|0>``), ``s`` the ancilla X detections per frame and ``e_x``/``e_z``
    the Bell-measurement outcomes per frame.
    """

    initial: np.ndarray
    s: np.ndarray
    e_x: np.ndarray
    e_z: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, SyndromeRecord):
            return NotImplemented
        return all(np.array_equal(getattr(self, f), getattr(other, f))
                   for f in ("initial", "s", "e_x", "e_z"))

    def is_trivial(self) -> bool:
        return not (self.initial.any() or self.s.any() or self.e_x.any() or self.e_z.any())

    @property
    def frames(self) -> int:
        return self.s.shape[0]


def _bits(value: int, width: int) -> list[int]:
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


@dataclass(frozen=True)
class ConvolutionalEncoder:
    sig: ResourceSignature
    seed: SymplecticMatrix
    name: str = ""

    def __post_init__(self):
        if self.seed.N != self.sig.N:
            raise InvalidEncoderError(
                f"seed acts on {self.seed.N} qubits but signature needs {self.sig.N}")

    @property
    def inverse_seed(self) -> SymplecticMatrix:
        return _inverse_cached(self.seed)

    def decimals(self) -> list[int]:
        return list(self.seed.rows)

    def frame_input(self, memory: PauliOperator, legs: PauliOperator) -> PauliOperator:
        return memory.concat(legs)

    def split_input(self, p: PauliOperator) -> tuple[PauliOperator, LegDecomposition]:
        o = self.sig.offsets()
        return p.slice(*o["memory"]), LegDecomposition(
            logical=p.slice(*o["logical"]), ancilla=p.slice(*o["ancilla"]),
            ebit=p.slice(*o["ebit"]), cbit=p.slice(*o["cbit"]), gauge=p.slice(*o["gauge"]))

    def split_output(self, p: PauliOperator) -> tuple[PauliOperator, PauliOperator]:
        m = self.sig.m
        return p.slice(0, m), p.slice(m, p.n)


_INVERSES: dict[SymplecticMatrix, SymplecticMatrix] = {}


def _inverse_cached(m: SymplecticMatrix) -> SymplecticMatrix:
    inv = _INVERSES.get(m)
    if inv is None:
        inv = _INVERSES[m] = m.inverse()
    return inv


def load_encoder(sig: ResourceSignature, decimals: Sequence[int], name: str = "") -> ConvolutionalEncoder:
    N = sig.N
    decimals = [int(d) for d in decimals]
    if len(decimals) != 2 * N:
        raise InvalidEncoderError(f"expected {2 * N} row values for N={N}, got {len(decimals)}")
    for i, d in enumerate(decimals):
        if d < 0 or d >= 4**N:
            raise InvalidEncoderError(f"row {i + 1} value {d} out of range [0, {4**N})")
    seed = SymplecticMatrix(N, tuple(decimals))
    bad = seed.violations()
    if bad:
        i, j = bad[0]
        raise InvalidEncoderError(
            f"rows {i + 1} and {j + 1} violate the symplectic form ({len(bad)} bad pairs)")
    return ConvolutionalEncoder(sig, seed, name)


def parse_encoder_text(text: str, name: str = "") -> ConvolutionalEncoder:
    """Header ``m k_q a c k_c g`` followed by the 2N row decimals.

    ``#`` starts a comment; values may be split across lines and separated by
    whitespace or commas.  Braces are ignored so table rows paste in directly.
    """
    tokens: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        for tok in line.replace(",", " ").replace("{", " ").replace("}", " ").split():
            tokens.append((lineno, tok))
    values = []
    for lineno, tok in tokens:
        try:
            values.append(int(tok))
        except ValueError:
            raise EncoderFormatError(f"line {lineno}: cannot parse {tok!r} as an integer") from None
    if len(values) < 6:
        raise EncoderFormatError("missing header 'm k_q a c k_c g'")
    try:
        sig = ResourceSignature(*values[:6])
    except ValueError as e:
        raise EncoderFormatError(f"bad header: {e}") from None
    return load_encoder(sig, values[6:], name)


def read_encoder(path) -> ConvolutionalEncoder:
    path = Path(path)
    return parse_encoder_text(path.read_text(), name=path.stem)


def format_encoder(enc: ConvolutionalEncoder) -> str:
    lines = [f"# {enc.name}" if enc.name else "# encoder", "# m k_q a c k_c g", str(enc.sig)]
    rows = enc.decimals()
    for i in range(0, len(rows), 6):
        lines.append(" ".join(str(r) for r in rows[i:i + 6]))
    return "\n".join(lines) + "\n"


def bundled(name: str) -> ConvolutionalEncoder:
    """Encoder shipped in the package data directory, e.g. ``bundled("PTO1R")``."""
    path = DATA_DIR / f"{name}.enc"
    if not path.exists():
        raise FileNotFoundError(f"no bundled encoder named {name!r}")
    return read_encoder(path)


def bundled_names() -> list[str]:
    return sorted(p.stem for p in DATA_DIR.glob("*.enc"))


def encode_stream(enc: ConvolutionalEncoder, frames: Sequence[PauliOperator],
                  initial_memory: PauliOperator | None = None
                  ) -> tuple[list[PauliOperator], PauliOperator]:
    """Thread memory through repeated seed applications.

    Each frame input is a Pauli on the ``n`` non-memory legs in leg order.
    Returns the physical output of every frame and the final memory.
    """
    sig = enc.sig
    mem = initial_memory if initial_memory is not None else PauliOperator.identity(sig.m)
    if mem.n != sig.m:
        raise DimensionError(f"memory has {mem.n} qubits, encoder needs {sig.m}")
    out = []
    for t, f in enumerate(frames):
        if f.n != sig.n:
            raise DimensionError(f"frame {t} has {f.n} qubits, expected {sig.n}")
        image = enc.seed.apply(mem.concat(f))
        mem, phys = enc.split_output(image)
        out.append(phys)
    return out, mem


def split_frames(p: PauliOperator, n: int, tail: int = 0) -> tuple[list[PauliOperator], PauliOperator]:
    """Cut a flat stream into frames of ``n`` qubits plus a ``tail`` of trailing qubits."""
    body = p.n - tail
    if body < 0 or body % n:
        raise DimensionError(f"{p.n} qubits do not split into frames of {n} plus tail {tail}")
    frames = [p.slice(i, i + n) for i in range(0, body, n)]
    return frames, p.slice(body, p.n)


def invert_stream(enc: ConvolutionalEncoder, physical: Sequence[PauliOperator],
                  final_memory: PauliOperator | None = None) -> StreamDecomposition:
    """Push a physical error back through the inverse encoder, last frame first.

    ``final_memory`` is the error on the transmitted final memory qubits
    (identity when omitted).  The returned initial memory is the pull-back onto
    the memory qubits before the first frame.
    """
    sig = enc.sig
    inv = enc.inverse_seed
    mem = final_memory if final_memory is not None else PauliOperator.identity(sig.m)
    if mem.n != sig.m:
        raise DimensionError(f"final memory has {mem.n} qubits, encoder needs {sig.m}")
    frames: list[LegDecomposition] = []
    for t in range(len(physical) - 1, -1, -1):
        p = physical[t]
        if p.n != sig.n:
            raise DimensionError(f"frame {t} has {p.n} physical qubits, expected {sig.n}")
        mem, legs = enc.split_input(inv.apply(mem.concat(p)))
        frames.append(legs)
    frames.reverse()
    return StreamDecomposition(mem, tuple(frames))


def invert_stream_codes(enc: ConvolutionalEncoder, physical: np.ndarray,
                        final_memory: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Array version of ``invert_stream`` on per-qubit codes ``(z << 1) | x``.

    ``physical`` has shape ``(T, n)``.  Returns the input-leg codes of every
    frame, shape ``(T, n)`` in leg order, and the initial memory codes.
    """
    sig = enc.sig
    N, m, n = sig.N, sig.m, sig.n
    physical = np.asarray(physical, dtype=np.int64)
    if physical.ndim != 2 or physical.shape[1] != n:
        raise DimensionError(f"expected frames of {n} physical qubits, got shape {physical.shape}")
    T = physical.shape[0]
    w = np.int64(1) << np.arange(n - 1, -1, -1, dtype=np.int64)
    pz = ((physical >> 1) * w).sum(1).tolist()
    px = ((physical & 1) * w).sum(1).tolist()
    if final_memory is None:
        mz = mx = 0
    else:
        fm = np.asarray(final_memory, dtype=np.int64)
        if fm.shape != (m,):
            raise DimensionError(f"final memory needs {m} codes")
        wm = np.int64(1) << np.arange(m - 1, -1, -1, dtype=np.int64)
        mz, mx = int(((fm >> 1) * wm).sum()), int(((fm & 1) * wm).sum())
    inv = enc.inverse_seed
    lookup = inv.table.tolist() if N <= 10 else None
    mask_N = (1 << N) - 1
    outs = [0] * T
    for t in range(T - 1, -1, -1):
        d = (((mz << n) | pz[t]) << N) | (mx << n) | px[t]
        o = lookup[d] if lookup is not None else inv.apply_decimal(d)
        outs[t] = o
        z, x = o >> N, o & mask_N
        mz, mx = z >> n, x >> n
    shifts = np.arange(N - 1, -1, -1, dtype=np.int64)
    o = np.array(outs, dtype=np.int64).reshape(T, 1) if T else np.zeros((0, 1), np.int64)
    codes = (((o >> (shifts + N)) & 1) << 1) | ((o >> shifts) & 1)
    mshift = np.arange(m - 1, -1, -1, dtype=np.int64)
    initial = (((mz >> mshift) & 1) << 1) | ((mx >> mshift) & 1)
    return codes[:, m:], initial


def syndrome_from_codes(enc: ConvolutionalEncoder, legs: np.ndarray, initial: np.ndarray) -> SyndromeRecord:
    o = enc.sig.offsets()
    m0 = enc.sig.m
    anc = legs[:, o["ancilla"][0] - m0:o["ancilla"][1] - m0]
    ebit = legs[:, o["ebit"][0] - m0:o["ebit"][1] - m0]
    return SyndromeRecord((initial & 1).astype(np.uint8), (anc & 1).astype(np.uint8),
                          (ebit & 1).astype(np.uint8), (ebit >> 1).astype(np.uint8))


def label_indices_from_codes(enc: ConvolutionalEncoder, legs: np.ndarray) -> np.ndarray:
    """Dense logical label index per frame (see ``LogicalLabel.index``)."""
    sig = enc.sig
    o = sig.offsets()
    m0 = sig.m
    lq = legs[:, o["logical"][0] - m0:o["logical"][1] - m0]
    cb = legs[:, o["cbit"][0] - m0:o["cbit"][1] - m0] & 1
    idx = np.zeros(len(legs), dtype=np.int64)
    for i in range(sig.kq):
        idx |= (lq[:, i] >> 1) << (2 * sig.kq - 1 - i)
        idx |= (lq[:, i] & 1) << (sig.kq - 1 - i)
    idx <<= sig.kc
    for i in range(sig.kc):
        idx |= cb[:, i] << (sig.kc - 1 - i)
    return idx


def syndrome_of(enc: ConvolutionalEncoder, decomp: StreamDecomposition) -> SyndromeRecord:
    sig = enc.sig
    T = len(decomp.frames)
    s = np.zeros((T, sig.a), dtype=np.uint8)
    ex = np.zeros((T, sig.c), dtype=np.uint8)
    ez = np.zeros((T, sig.c), dtype=np.uint8)
    for t, f in enumerate(decomp.frames):
        s[t] = _bits(f.ancilla.x, sig.a)
        ex[t] = _bits(f.ebit.x, sig.c)
        ez[t] = _bits(f.ebit.z, sig.c)
    initial = np.array(_bits(decomp.initial_memory.x, sig.m), dtype=np.uint8)
    return SyndromeRecord(initial, s, ex, ez)


def logical_of(enc: ConvolutionalEncoder, decomp: StreamDecomposition) -> list[LogicalLabel]:
    """Drops ancilla Z, ebit, cbit Z and gauge content."""
    kc = enc.sig.kc
    return [LogicalLabel(f.logical, f.cbit.x, kc) for f in decomp.frames]


def substitute_resources(enc: ConvolutionalEncoder, new: ResourceSignature,
                         name: str | None = None) -> ConvolutionalEncoder:
    """Relabel leg types on the same seed transformation.

    The memory size and the per-frame qubit count must be unchanged.
    """
    if new.m != enc.sig.m or new.n != enc.sig.n:
        raise ValueError(f"cannot relabel {enc.sig} as {new}: leg totals differ")
    return replace(enc, sig=new, name=enc.name if name is None else name)
