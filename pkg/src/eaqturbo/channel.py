"""Depolarizing noise and hashing-bound noise limits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect
from scipy.stats import binomtest

from .symplectic import PauliOperator

LOG2_3 = math.log2(3)


@dataclass(frozen=True)
class ChannelModel:
    """Depolarizing parameter ``p`` on every channel qubit and ``p_ebit`` on Bob's ebit halves."""

    p: float
    p_ebit: float = 0.0

    def __post_init__(self):
        for name in ("p", "p_ebit"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability")

    def pauli_probs(self) -> np.ndarray:
        """Distribution over codes I, X, Z, Y."""
        return depolarizing(self.p)

    def ebit_probs(self) -> np.ndarray:
        return depolarizing(self.p_ebit)


def depolarizing(p: float) -> np.ndarray:
    return np.array([1.0 - p, p / 3, p / 3, p / 3])


def sample_codes(p: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. single-qubit Pauli codes: I w.p. ``1 - p``, X, Z, Y w.p. ``p/3`` each."""
    hit = rng.random(size) < p
    codes = np.zeros(size, dtype=np.int64)
    codes[hit] = rng.integers(1, 4, size=int(hit.sum()))
    return codes


def sample_error(model: ChannelModel, n: int, rng: np.random.Generator) -> PauliOperator:
    return PauliOperator.from_codes(sample_codes(model.p, n, rng))


def sample_ebit_error(model: ChannelModel, c_total: int, rng: np.random.Generator) -> np.ndarray:
    """Codes of the Paulis hitting Bob's halves of ``c_total`` ebits.

    On a Bell pair a Pauli on Bob's half acts like the same Pauli on Alice's
    half, so it flips the Bell outcome ``(e_x, e_z)`` by its own ``(x, z)`` bits.
    """
    return sample_codes(model.p_ebit, c_total, rng)


def flip_bell_outcomes(e_x: np.ndarray, e_z: np.ndarray, bob: np.ndarray):
    bob = np.asarray(bob).reshape(e_x.shape)
    return e_x ^ (bob & 1).astype(e_x.dtype), e_z ^ (bob >> 1).astype(e_z.dtype)


def H2(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def _entropy(p: float) -> float:
    # entropy of the depolarizing distribution
    return H2(p) + p * LOG2_3


def _check(p: float):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")


def hashing_q(p: float) -> float:
    _check(p)
    return 1.0 - _entropy(p)


def hashing_ea(p: float) -> float:
    _check(p)
    return 1.0 - 0.5 * _entropy(p)


def father_ebit_rate(p: float) -> float:
    _check(p)
    return 0.5 * _entropy(p)


def noise_limit(rate: float, assisted: bool = False, tol: float = 1e-6) -> float:
    """Largest ``p`` at which the hashing rate still reaches ``rate``.

    Both bounds fall monotonically on ``[0, 3/4]``, so plain bisection works there.
    """
    if not 0.0 < rate < 1.0:
        raise ValueError(f"rate {rate} must lie in (0, 1)")
    f = hashing_ea if assisted else hashing_q
    if f(0.75) >= rate:
        return 0.75
    return float(bisect(lambda p: f(p) - rate, 0.0, 0.75, xtol=tol / 4))


def wilson_interval(failures: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a failure fraction."""
    if trials <= 0:
        return 0.0, 1.0
    ci = binomtest(failures, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)
