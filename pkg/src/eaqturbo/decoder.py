"""Soft-input soft-output trellis decoding and the iterative turbo decoder.

The hidden chain is the memory pull-back ``M_t`` of the error.  A transition at
frame ``t`` is a full seed input ``(M_t, legs)`` whose measured part (ancilla X
bits and Bell outcomes) agrees with the syndrome; it emits the physical frame
and the next memory through the seed.  The initial memory starts in ``|0>`` so
only its X part is seen; the final memory is read from the tail qubits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from .channel import ChannelModel, depolarizing
from .encoder import ConvolutionalEncoder, SyndromeRecord
from .symplectic import apply_many
from .turbo import TurboCode, TurboSyndrome

MAX_SEED_QUBITS = 10


class DecodeFailure(RuntimeError):
    """The syndrome has zero likelihood under the supplied priors."""


@dataclass(frozen=True)
class DecoderConfig:
    max_iterations: int = 12

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


def qubit_codes(decimals: np.ndarray, n: int) -> np.ndarray:
    """Per-qubit codes ``(z << 1) | x`` of packed ``[z|x]`` decimals, shape ``(..., n)``."""
    decimals = np.asarray(decimals, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    x = (decimals[..., None] >> shifts) & 1
    z = (decimals[..., None] >> (shifts + n)) & 1
    return (z << 1) | x


def _pack(codes: np.ndarray) -> np.ndarray:
    """Inverse of ``qubit_codes`` along the last axis."""
    codes = np.asarray(codes, dtype=np.int64)
    n = codes.shape[-1]
    weights = np.int64(1) << np.arange(n - 1, -1, -1, dtype=np.int64)
    return (((codes >> 1) * weights).sum(-1) << n) | ((codes & 1) * weights).sum(-1)


def _bits_to_int(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape[-1] == 0:
        return np.zeros(bits.shape[:-1], dtype=np.int64)
    return (bits * (np.int64(1) << np.arange(bits.shape[-1] - 1, -1, -1))).sum(-1)


class Trellis:
    """Transition tables of one encoder, grouped by syndrome key."""

    def __init__(self, enc: ConvolutionalEncoder, soft_ebits: bool = False):
        sig = enc.sig
        if sig.N > MAX_SEED_QUBITS:
            raise ValueError(f"seed on {sig.N} qubits is too large to tabulate")
        self.enc = enc
        self.soft_ebits = soft_ebits
        N, m, n = sig.N, sig.m, sig.n
        o = sig.offsets()
        inputs = np.arange(4**N, dtype=np.int64)
        cin = qubit_codes(inputs, N)
        cout = qubit_codes(apply_many(enc.seed, inputs), N)
        self.S = 4**m
        self.src = _pack(cin[:, :m]) if m else np.zeros(len(inputs), np.int64)
        self.dst = _pack(cout[:, :m]) if m else np.zeros(len(inputs), np.int64)
        self.phys = cout[:, m:]
        lq = cin[:, slice(*o["logical"])]
        cb = cin[:, slice(*o["cbit"])] & 1
        self.nlab = 4**sig.kq * 2**sig.kc
        self.label = (_pack(lq) << sig.kc) | _bits_to_int(cb) if sig.kq else _bits_to_int(cb)
        self.ebit = cin[:, slice(*o["ebit"])]
        anc_x = cin[:, slice(*o["ancilla"])] & 1
        key = _bits_to_int(anc_x)
        if not soft_ebits:
            for j in range(sig.c):
                key = key * 4 + self.ebit[:, j]
        self.key_bits = sig.a + (0 if soft_ebits else 2 * sig.c)
        order = np.argsort(key, kind="stable")
        self.groups = order.reshape(2**self.key_bits, -1)
        # per-qubit code table of the memory states, for the tail
        self.mem_codes = qubit_codes(np.arange(self.S), m) if m else np.zeros((1, 0), np.int64)

    def frame_keys(self, syn: SyndromeRecord) -> np.ndarray:
        key = _bits_to_int(syn.s) if self.enc.sig.a else np.zeros(syn.frames, np.int64)
        if not self.soft_ebits:
            for j in range(self.enc.sig.c):
                key = key * 4 + ((syn.e_z[:, j].astype(np.int64) << 1) | syn.e_x[:, j])
        return key


@lru_cache(maxsize=64)
def trellis_for(enc: ConvolutionalEncoder, soft_ebits: bool = False) -> Trellis:
    return Trellis(enc, soft_ebits)


@dataclass
class SisoOutput:
    logical_post: np.ndarray   # (T, nlab)
    logical_ext: np.ndarray
    phys_post: np.ndarray      # (T*n + m, 4)
    phys_ext: np.ndarray


def _normalize_rows(a: np.ndarray) -> np.ndarray:
    s = a.sum(axis=-1, keepdims=True)
    if np.any(s <= 0):
        raise DecodeFailure("a distribution vanished")
    return a / s


def _extrinsic(post: np.ndarray, prior: np.ndarray) -> np.ndarray:
    ext = np.divide(post, prior, out=np.zeros_like(post), where=prior > 0)
    return _normalize_rows(ext)


def _log(a: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(a)


@njit(cache=True)
def _siso_kernel(idx, src_tab, dst_tab, phys_tab, label_tab, ebit_tab, lp, llab, lb, obs,
                 alpha0, end, S, nlab):
    """Scaled forward-backward.  Returns (status, label posterior, frame qubit
    posterior, final memory posterior); status is -1 on success, otherwise the
    frame where every path died."""
    T, G = idx.shape
    n = phys_tab.shape[1]
    c = obs.shape[1]
    gamma = np.empty((T, G))
    for t in range(T):
        top = -np.inf
        for g in range(G):
            v = idx[t, g]
            x = llab[t, label_tab[v]]
            for q in range(n):
                x += lp[t, q, phys_tab[v, q]]
            for j in range(c):
                x += lb[ebit_tab[v, j] ^ obs[t, j]]
            gamma[t, g] = x
            if x > top:
                top = x
        if top == -np.inf:
            return t, np.zeros((T, nlab)), np.zeros((T * n, 4)), np.zeros(S)
        for g in range(G):
            gamma[t, g] = np.exp(gamma[t, g] - top)

    alpha = np.zeros((T + 1, S))
    tot = alpha0.sum()
    for k in range(S):
        alpha[0, k] = alpha0[k] / tot
    for t in range(T):
        for g in range(G):
            v = idx[t, g]
            alpha[t + 1, dst_tab[v]] += alpha[t, src_tab[v]] * gamma[t, g]
        tot = alpha[t + 1].sum()
        if tot <= 0.0:
            return t, np.zeros((T, nlab)), np.zeros((T * n, 4)), np.zeros(S)
        alpha[t + 1] /= tot

    beta = np.zeros((T + 1, S))
    tot = end.sum()
    if tot <= 0.0:
        return T, np.zeros((T, nlab)), np.zeros((T * n, 4)), np.zeros(S)
    beta[T] = end / tot
    for t in range(T - 1, -1, -1):
        for g in range(G):
            v = idx[t, g]
            beta[t, src_tab[v]] += gamma[t, g] * beta[t + 1, dst_tab[v]]
        tot = beta[t].sum()
        if tot <= 0.0:
            return t, np.zeros((T, nlab)), np.zeros((T * n, 4)), np.zeros(S)
        beta[t] /= tot

    lab_post = np.zeros((T, nlab))
    phys_post = np.zeros((T * n, 4))
    w = np.empty(G)
    for t in range(T):
        tot = 0.0
        for g in range(G):
            v = idx[t, g]
            w[g] = alpha[t, src_tab[v]] * gamma[t, g] * beta[t + 1, dst_tab[v]]
            tot += w[g]
        if tot <= 0.0:
            return t, lab_post, phys_post, np.zeros(S)
        for g in range(G):
            v = idx[t, g]
            x = w[g] / tot
            lab_post[t, label_tab[v]] += x
            for q in range(n):
                phys_post[t * n + q, phys_tab[v, q]] += x
    fin = alpha[T] * end
    tot = fin.sum()
    if tot <= 0.0:
        return T, lab_post, phys_post, fin
    return -1, lab_post, phys_post, fin / tot


def siso_decode(enc: ConvolutionalEncoder, syn: SyndromeRecord, phys_prior: np.ndarray,
                logical_prior: np.ndarray | None = None, p_ebit: float = 0.0) -> SisoOutput:
    """Forward-backward over one encoder's stream.

    ``phys_prior`` has one row per channel qubit of the stream (frames then the
    ``m`` tail qubits) over codes I, X, Z, Y.  ``logical_prior`` has one row per
    frame over dense logical label indices; uniform when omitted.  With
    ``p_ebit > 0`` the Bell outcomes become soft evidence.
    """
    sig = enc.sig
    T = syn.frames
    m, n = sig.m, sig.n
    phys_prior = np.asarray(phys_prior, dtype=np.float64)
    if phys_prior.shape != (T * n + m, 4):
        raise ValueError(f"physical prior shape {phys_prior.shape} != {(T * n + m, 4)}")
    tr = trellis_for(enc, p_ebit > 0 and sig.c > 0)
    if logical_prior is None:
        logical_prior = np.full((T, tr.nlab), 1.0 / tr.nlab)
    logical_prior = np.asarray(logical_prior, dtype=np.float64)
    if logical_prior.shape != (T, tr.nlab):
        raise ValueError(f"logical prior shape {logical_prior.shape} != {(T, tr.nlab)}")

    idx = tr.groups[tr.frame_keys(syn)]                      # (T, G)
    lp = _log(phys_prior[:T * n].reshape(T, n, 4))
    if tr.soft_ebits:
        lb = _log(depolarizing(p_ebit))
        obs = (syn.e_z.astype(np.int64) << 1) | syn.e_x
        ebit = tr.ebit
    else:
        lb = np.zeros(4)
        obs = np.zeros((T, 0), np.int64)
        ebit = np.zeros((len(tr.src), 0), np.int64)
    alpha0 = ((np.arange(tr.S) & ((1 << m) - 1)) == (int(_bits_to_int(syn.initial)) if m else 0))
    end = np.prod(phys_prior[T * n:][np.arange(m), tr.mem_codes], axis=1) if m else np.ones(1)
    status, lab_post, phys_post, fin = _siso_kernel(
        idx, tr.src, tr.dst, tr.phys, tr.label, ebit, lp, _log(logical_prior), lb, obs,
        alpha0.astype(np.float64), end, tr.S, tr.nlab)
    if status >= 0:
        raise DecodeFailure(f"no consistent path through frame {status}")
    if m:
        tail_post = np.stack([np.bincount(tr.mem_codes[:, q], fin, minlength=4) for q in range(m)])
        phys_post = np.vstack([phys_post, tail_post])
    lab_post = _normalize_rows(lab_post)
    phys_post = _normalize_rows(phys_post)
    return SisoOutput(lab_post, _extrinsic(lab_post, logical_prior),
                      phys_post, _extrinsic(phys_post, phys_prior))


def label_marginals(dist: np.ndarray, kq: int) -> np.ndarray:
    """Per-qubit marginals of distributions over ``k_q``-qubit Paulis, shape ``(T*k_q, 4)``."""
    codes = qubit_codes(np.arange(4**kq), kq)              # (nlab, kq)
    onehot = np.eye(4)[codes]                               # (nlab, kq, 4)
    return np.einsum("tl,lqc->tqc", dist, onehot).reshape(-1, 4)


def product_prior(per_qubit: np.ndarray, kq: int) -> np.ndarray:
    """Factorized distribution over ``k_q``-qubit Paulis from per-qubit rows."""
    q = per_qubit.reshape(-1, kq, 4)
    codes = qubit_codes(np.arange(4**kq), kq)
    out = np.ones((q.shape[0], 4**kq))
    for i in range(kq):
        out *= q[:, i, codes[:, i]]
    return _normalize_rows(out)


@dataclass
class DecodeResult:
    labels: np.ndarray          # dense outer label index per frame
    iterations: int
    converged: bool
    confidence: np.ndarray      # max posterior per frame
    failed: bool = False


def turbo_decode(code: TurboCode, syn: TurboSyndrome, model: ChannelModel,
                 config: DecoderConfig = DecoderConfig()) -> DecodeResult:
    """Inner first, no damping; stop when the outer hard decision repeats."""
    kq = code.inner.sig.kq
    chan = np.tile(model.pauli_probs(), (code.num_qubits, 1))
    inner_prior = np.full((code.frames_inner, 4**kq), 1.0 / 4**kq)
    prev = None
    for it in range(1, config.max_iterations + 1):
        inn = siso_decode(code.inner, syn.inner, chan, inner_prior, model.p_ebit)
        outer_prior = code.interleaver.invert_array(label_marginals(inn.logical_ext, kq))
        out = siso_decode(code.outer, syn.outer, outer_prior, None, model.p_ebit)
        # argmax keeps the first maximum: ties go to the smallest label
        hard = np.argmax(out.logical_post, axis=1)
        conf = out.logical_post.max(axis=1)
        if prev is not None and np.array_equal(hard, prev):
            return DecodeResult(hard, it, True, conf)
        prev = hard
        inner_prior = product_prior(code.interleaver.apply_array(out.phys_ext), kq)
    return DecodeResult(prev, config.max_iterations, False, conf)


def judge(result: DecodeResult, true_labels) -> bool:
    if result.failed:
        return False
    return bool(np.array_equal(np.asarray(result.labels), np.asarray(true_labels)))
