"""WER against noise on Bob's ebit halves at a fixed channel rate.

Each combination reuses one master seed across ebit rates, so the channel
errors are the same in every cell and only the ebit noise changes.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from eaqturbo.cli import version_string, write_csv
from eaqturbo.encoder import bundled
from eaqturbo.simulation import SimulationConfig, SimulationResult, simulate


@dataclass(frozen=True)
class Combination:
    outer: str
    inner: str
    p: float


COMBINATIONS = (
    Combination("PTO3R", "PTO3REA", 0.14),
    Combination("PTO3REA", "PTO3R", 0.07),
    Combination("PTO3REA", "PTO3REA", 0.19),
)
EBIT_RATES = (0.0, 1e-5, 1e-4, 1e-3, 1e-2)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/ebit_noise")
    ap.add_argument("--frames", type=int, default=100)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--min-failures", type=int, default=100)
    ap.add_argument("--max-trials", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=5)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for combo in COMBINATIONS:
        outer, inner = bundled(combo.outer), bundled(combo.inner)
        cells = []
        for pe in EBIT_RATES:
            cfg = SimulationConfig(combo.outer, combo.inner, args.frames, (combo.p,), p_ebit=pe,
                                   seed=args.seed, min_failures=args.min_failures,
                                   max_trials=args.max_trials, workers=args.workers)
            cell = simulate(cfg, outer, inner).cells[0]
            cells.append(cell)
            print(f"outer={combo.outer} inner={combo.inner} p={combo.p} p_ebit={pe}: "
                  f"{cell.failures}/{cell.trials} wer={cell.wer:.3g}", flush=True)
        res = SimulationResult(cfg, cells)
        with (out / f"{combo.outer}_{combo.inner}.csv").open("w") as fh:
            write_csv(res, fh, version_string())


if __name__ == "__main__":
    main()
