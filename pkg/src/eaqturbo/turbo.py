"""Serial concatenation of two convolutional encoders through a qubit interleaver.

Each stream is closed by sending the final memory through the channel as ``m``
tail qubits, so an encoder running ``T`` frames occupies ``T*n + m`` qubits.
The outer stream (tail included) is interleaved and fed to the inner encoder's
logical legs, which fixes the number of inner frames.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .encoder import (
    ConvolutionalEncoder,
    LogicalLabel,
    SyndromeRecord,
    encode_stream,
    invert_stream_codes,
    label_indices_from_codes,
    split_frames,
    syndrome_from_codes,
)
from .symplectic import DimensionError, PauliOperator


@dataclass(frozen=True)
class Interleaver:
    """Qubit ``j`` of the input lands on position ``perm[j]`` of the output."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("interleaver is not a permutation")

    @property
    def size(self) -> int:
        return len(self.perm)

    @classmethod
    def random(cls, size: int, rng: np.random.Generator) -> "Interleaver":
        return cls(tuple(int(i) for i in rng.permutation(size)))

    @classmethod
    def identity(cls, size: int) -> "Interleaver":
        return cls(tuple(range(size)))

    def _check(self, n: int):
        if n != self.size:
            raise DimensionError(f"interleaver acts on {self.size} qubits, got {n}")

    def apply(self, p: PauliOperator) -> PauliOperator:
        self._check(p.n)
        return PauliOperator.from_codes(self.apply_array(np.array(p.codes())))

    def invert(self, p: PauliOperator) -> PauliOperator:
        self._check(p.n)
        return PauliOperator.from_codes(self.invert_array(np.array(p.codes())))

    def apply_array(self, a: np.ndarray) -> np.ndarray:
        """Permute the leading axis (per-qubit codes or distributions)."""
        self._check(len(a))
        out = np.empty_like(a)
        out[list(self.perm)] = a
        return out

    def invert_array(self, a: np.ndarray) -> np.ndarray:
        self._check(len(a))
        return a[list(self.perm)]


def stream_length(enc: ConvolutionalEncoder, frames: int) -> int:
    return frames * enc.sig.n + enc.sig.m


@dataclass(frozen=True)
class TurboCode:
    outer: ConvolutionalEncoder
    inner: ConvolutionalEncoder
    frames_outer: int
    interleaver: Interleaver

    def __post_init__(self):
        if self.inner.sig.kq < 1:
            raise ValueError("inner encoder needs logical qubit legs")
        if self.inner.sig.kc:
            raise ValueError("inner encoder cannot carry cbits: its logical legs hold outer qubits")
        if self.interleaver.size != self.outer_length:
            raise DimensionError(
                f"interleaver size {self.interleaver.size} != outer stream {self.outer_length}")
        if self.outer_length % self.inner.sig.kq:
            raise ValueError(
                f"outer stream of {self.outer_length} qubits does not fill "
                f"inner frames of {self.inner.sig.kq} logical qubits")

    @property
    def outer_length(self) -> int:
        return stream_length(self.outer, self.frames_outer)

    @property
    def frames_inner(self) -> int:
        return self.outer_length // self.inner.sig.kq

    @property
    def num_qubits(self) -> int:
        return stream_length(self.inner, self.frames_inner)

    @property
    def logical_qubits(self) -> int:
        return self.frames_outer * self.outer.sig.kq

    @property
    def quantum_rate(self) -> Fraction:
        o, i = self.outer.sig, self.inner.sig
        return Fraction(o.kq, o.n) * Fraction(i.kq, i.n)

    @property
    def entanglement_rate(self) -> Fraction:
        o, i = self.outer.sig, self.inner.sig
        return Fraction(o.c * self.frames_outer + i.c * self.frames_inner, i.n * self.frames_inner)

    @property
    def asymptotic_entanglement_rate(self) -> Fraction:
        o, i = self.outer.sig, self.inner.sig
        return Fraction(o.c * i.kq, o.n * i.n) + Fraction(i.c, i.n)

    @property
    def ebits(self) -> int:
        return self.outer.sig.c * self.frames_outer + self.inner.sig.c * self.frames_inner

    def with_interleaver(self, interleaver: Interleaver) -> "TurboCode":
        return TurboCode(self.outer, self.inner, self.frames_outer, interleaver)


def build_turbo(outer: ConvolutionalEncoder, inner: ConvolutionalEncoder, frames_outer: int,
                rng: np.random.Generator | None = None) -> TurboCode:
    if frames_outer < 1:
        raise ValueError("need at least one outer frame")
    size = stream_length(outer, frames_outer)
    if inner.sig.kq and size % inner.sig.kq:
        raise ValueError(
            f"{frames_outer} outer frames give {size} qubits, not a multiple of "
            f"the inner encoder's {inner.sig.kq} logical qubits")
    il = Interleaver.random(size, rng) if rng is not None else Interleaver.identity(size)
    return TurboCode(outer, inner, frames_outer, il)


@dataclass(frozen=True)
class TurboSyndrome:
    inner: SyndromeRecord
    outer: SyndromeRecord


@dataclass(frozen=True)
class TurboInversion:
    syndrome: TurboSyndrome
    label_indices: np.ndarray
    # per-qubit codes on the outer physical stream (inner logical legs, de-interleaved)
    outer_codes: np.ndarray
    kq: int
    kc: int

    @property
    def labels(self) -> tuple[LogicalLabel, ...]:
        return tuple(LogicalLabel.from_index(int(i), self.kq, self.kc) for i in self.label_indices)

    @property
    def outer_error(self) -> PauliOperator:
        return PauliOperator.from_codes(self.outer_codes)


def turbo_invert(code: TurboCode, error) -> TurboInversion:
    """Syndromes of both stages and the outer logical label of a physical error.

    ``error`` is a ``PauliOperator`` or an array of per-qubit codes.
    """
    codes = np.array(error.codes() if isinstance(error, PauliOperator) else error, dtype=np.int64)
    if codes.shape != (code.num_qubits,):
        raise DimensionError(f"error on {codes.shape} qubits, code has {code.num_qubits}")
    inner, outer = code.inner, code.outer
    i, o = inner.sig, outer.sig
    body = code.frames_inner * i.n
    legs_in, init_in = invert_stream_codes(inner, codes[:body].reshape(-1, i.n), codes[body:])
    stream = legs_in[:, :i.kq].reshape(-1)
    outer_codes = code.interleaver.invert_array(stream)
    body = code.frames_outer * o.n
    legs_out, init_out = invert_stream_codes(outer, outer_codes[:body].reshape(-1, o.n),
                                             outer_codes[body:])
    return TurboInversion(
        TurboSyndrome(syndrome_from_codes(inner, legs_in, init_in),
                      syndrome_from_codes(outer, legs_out, init_out)),
        label_indices_from_codes(outer, legs_out),
        outer_codes, o.kq, o.kc,
    )


def turbo_encode_error(code: TurboCode, outer_input: PauliOperator,
                       inner_extra: PauliOperator | None = None) -> PauliOperator:
    """Physical operator produced by pushing leg content through both encoders.

    ``outer_input`` covers the outer legs of every frame followed by the outer
    initial memory; ``inner_extra`` likewise covers the inner non-logical legs of
    every frame followed by the inner initial memory.  Used to build errors with
    known decompositions.
    """
    o, i = code.outer.sig, code.inner.sig
    if outer_input.n != code.frames_outer * o.n + o.m:
        raise DimensionError("outer input has the wrong length")
    frames, mem = split_frames(outer_input, o.n, tail=o.m)
    phys, final = encode_stream(code.outer, frames, mem)
    stream = code.interleaver.apply(PauliOperator.identity(0).concat(*phys, final))
    aux_n = i.n - i.kq
    if inner_extra is None:
        inner_extra = PauliOperator.identity(code.frames_inner * aux_n + i.m)
    if inner_extra.n != code.frames_inner * aux_n + i.m:
        raise DimensionError("inner extra input has the wrong length")
    extra, mem = split_frames(inner_extra, aux_n, tail=i.m) if aux_n else (
        [PauliOperator.identity(0)] * code.frames_inner, inner_extra)
    legs = [stream.slice(t * i.kq, (t + 1) * i.kq).concat(extra[t]) for t in range(code.frames_inner)]
    phys, final = encode_stream(code.inner, legs, mem)
    return PauliOperator.identity(0).concat(*phys, final)


def min_distance_scaling(d_free: int) -> Fraction:
    """Exponent of the typical minimum-distance growth ``N**((d - 2)/d)``."""
    if d_free < 2:
        raise ValueError("outer free distance must be at least 2")
    return Fraction(d_free - 2, d_free)
