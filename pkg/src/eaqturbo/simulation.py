"""Monte Carlo word error rate campaigns for turbo codes."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import ChannelModel, flip_bell_outcomes, sample_codes, sample_ebit_error, wilson_interval
from .decoder import DecodeFailure, DecoderConfig, judge, turbo_decode
from .encoder import ConvolutionalEncoder, SyndromeRecord
from .turbo import TurboSyndrome, build_turbo, turbo_invert

CSV_COLUMNS = ("p", "p_ebit", "logical_qubits", "trials", "failures", "wer",
               "wilson_lo", "wilson_hi", "mean_iters", "seconds")


@dataclass(frozen=True)
class SimulationConfig:
    outer: str
    inner: str
    frames_outer: int
    ps: tuple[float, ...]
    p_ebit: float = 0.0
    seed: int = 0
    min_failures: int = 100
    max_trials: int = 1_000_000
    workers: int = 1
    batch: int = 32
    max_iterations: int = 12
    output: str | None = None

    def __post_init__(self):
        if self.min_failures < 1:
            raise ValueError("min_failures must be >= 1")
        if self.max_trials < 1:
            raise ValueError("max_trials must be >= 1")
        if self.frames_outer < 1:
            raise ValueError("frames_outer must be >= 1")
        if self.workers < 1 or self.batch < 1:
            raise ValueError("workers and batch must be >= 1")
        for p in (*self.ps, self.p_ebit):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")


@dataclass
class CellResult:
    p: float
    p_ebit: float
    logical_qubits: int
    trials: int
    failures: int
    mean_iters: float
    seconds: float

    @property
    def wer(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    @property
    def wilson(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials)

    def row(self, timing: bool = True) -> list[str]:
        lo, hi = self.wilson
        return [repr(self.p), repr(self.p_ebit), str(self.logical_qubits), str(self.trials),
                str(self.failures), repr(self.wer), f"{lo:.6g}", f"{hi:.6g}",
                f"{self.mean_iters:.4f}", f"{self.seconds if timing else 0.0:.3f}"]


@dataclass
class SimulationResult:
    config: SimulationConfig
    cells: list[CellResult] = field(default_factory=list)


def _noisy_syndrome(syn: SyndromeRecord, model: ChannelModel, rng) -> SyndromeRecord:
    if not syn.e_x.size or model.p_ebit == 0:
        return syn
    bob = sample_ebit_error(model, syn.e_x.size, rng)
    ex, ez = flip_bell_outcomes(syn.e_x, syn.e_z, bob)
    return SyndromeRecord(syn.initial, syn.s, ex, ez)


def run_trial(outer: ConvolutionalEncoder, inner: ConvolutionalEncoder, frames_outer: int,
              model: ChannelModel, rng: np.random.Generator,
              decoder: DecoderConfig = DecoderConfig()) -> tuple[bool, int]:
    """One run: fresh interleaver, channel error, syndromes, decode, judge.

    Returns (failed, iterations).  A decoder failure counts as a failed trial.
    """
    code = build_turbo(outer, inner, frames_outer, rng)
    err = sample_codes(model.p, code.num_qubits, rng)
    inv = turbo_invert(code, err)
    syn = TurboSyndrome(_noisy_syndrome(inv.syndrome.inner, model, rng),
                        _noisy_syndrome(inv.syndrome.outer, model, rng))
    try:
        res = turbo_decode(code, syn, model, decoder)
    except DecodeFailure:
        return True, decoder.max_iterations
    return not judge(res, inv.label_indices), res.iterations


def trial_rng(seed: int, cell: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, cell, trial]))


def _run_batch(args) -> list[tuple[bool, int]]:
    outer, inner, frames, p, p_ebit, seed, cell, start, stop, max_iter = args
    model = ChannelModel(p, p_ebit)
    dec = DecoderConfig(max_iter)
    return [run_trial(outer, inner, frames, model, trial_rng(seed, cell, t), dec)
            for t in range(start, stop)]


def run_cell(outer, inner, cfg: SimulationConfig, cell: int, p: float, pool=None) -> CellResult:
    """Trials in fixed batches; the stopping trial is found in trial order so the
    result does not depend on how batches were scheduled."""
    t0 = time.perf_counter()
    failures = trials = iters = 0
    next_start = 0
    while trials < cfg.max_trials and failures < cfg.min_failures:
        jobs = []
        for _ in range(cfg.workers if pool else 1):
            if next_start >= cfg.max_trials:
                break
            stop = min(next_start + cfg.batch, cfg.max_trials)
            jobs.append((outer, inner, cfg.frames_outer, p, cfg.p_ebit, cfg.seed, cell,
                         next_start, stop, cfg.max_iterations))
            next_start = stop
        results = pool.map(_run_batch, jobs) if pool else map(_run_batch, jobs)
        for batch in results:
            for failed, it in batch:
                if trials >= cfg.max_trials or failures >= cfg.min_failures:
                    break
                trials += 1
                failures += failed
                iters += it
    probe = build_turbo(outer, inner, cfg.frames_outer)
    return CellResult(p, cfg.p_ebit, probe.logical_qubits, trials, failures,
                      iters / trials if trials else 0.0, time.perf_counter() - t0)


def simulate(cfg: SimulationConfig, outer: ConvolutionalEncoder,
             inner: ConvolutionalEncoder) -> SimulationResult:
    build_turbo(outer, inner, cfg.frames_outer)  # fail early on a bad pairing
    result = SimulationResult(cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            for cell, p in enumerate(cfg.ps):
                result.cells.append(run_cell(outer, inner, cfg, cell, p, pool))
    else:
        for cell, p in enumerate(cfg.ps):
            result.cells.append(run_cell(outer, inner, cfg, cell, p))
    return result


def config_record(cfg: SimulationConfig) -> dict:
    d = asdict(cfg)
    d["ps"] = list(cfg.ps)
    return d
