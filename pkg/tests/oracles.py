"""Brute-force reference computations shared by the tests."""

import itertools

import numpy as np

from eaqturbo.channel import depolarizing
from eaqturbo.encoder import invert_stream, logical_of, split_frames, syndrome_of
from eaqturbo.symplectic import PauliOperator


def bayes_oracle(enc, syn, phys_prior, logical_prior, p_ebit=0.0):
    """Brute force over every error on the stream: condition on the syndrome,
    weight by the priors, and marginalize."""
    sig = enc.sig
    T = syn.frames
    L = T * sig.n + sig.m
    pe = depolarizing(p_ebit)
    soft = p_ebit > 0 and sig.c > 0
    lab_post = np.zeros_like(logical_prior)
    phys_post = np.zeros((L, 4))
    for codes in itertools.product(range(4), repeat=L):
        frames, tail = split_frames(PauliOperator.from_codes(codes), sig.n, tail=sig.m)
        dec = invert_stream(enc, frames, tail)
        s = syndrome_of(enc, dec)
        if not (np.array_equal(s.initial, syn.initial) and np.array_equal(s.s, syn.s)):
            continue
        w = np.prod(phys_prior[np.arange(L), codes])
        if soft:
            true = (s.e_z.astype(int) << 1) | s.e_x
            seen = (syn.e_z.astype(int) << 1) | syn.e_x
            w *= np.prod(pe[true ^ seen])
        elif not (np.array_equal(s.e_x, syn.e_x) and np.array_equal(s.e_z, syn.e_z)):
            continue
        labels = [lab.index for lab in logical_of(enc, dec)]
        w *= np.prod(logical_prior[np.arange(T), labels])
        if w == 0:
            continue
        lab_post[np.arange(T), labels] += w
        phys_post[np.arange(L), codes] += w
    return (lab_post / lab_post.sum(1, keepdims=True),
            phys_post / phys_post.sum(1, keepdims=True))
