"""Word error rate against depolarizing rate for the self-concatenated turbo codes.

Writes one CSV per (outer, inner, size) into --out.  The defaults cover the four
PTO1 combinations at 100 and 200 logical qubits; expect hours on one core.

    python scripts/threshold_campaign.py --out runs/threshold --workers 8
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from eaqturbo.cli import version_string, write_csv
from eaqturbo.encoder import bundled
from eaqturbo.simulation import SimulationConfig, simulate


@dataclass
class Campaign:
    outer: str
    inner: str
    ps: tuple[float, ...]
    sizes: tuple[int, ...] = (100, 200)


@dataclass
class Plan:
    campaigns: list[Campaign] = field(default_factory=lambda: [
        Campaign("PTO1R", "PTO1R", (0.06, 0.07, 0.08, 0.09, 0.10, 0.11, 0.12)),
        Campaign("PTO1REA", "PTO1REA", (0.25, 0.28, 0.30, 0.32, 0.34, 0.36, 0.38)),
        Campaign("PTO1R", "PTO1REA", (0.20, 0.22, 0.24, 0.26, 0.28, 0.30)),
        Campaign("PTO1REA", "PTO1R", (0.10, 0.12, 0.14, 0.16, 0.18)),
        Campaign("PTO3R", "PTO3R", (0.05, 0.06, 0.07, 0.08, 0.09)),
        Campaign("PTO3REA", "PTO3REA", (0.15, 0.17, 0.19, 0.21, 0.23)),
    ])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/threshold")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--min-failures", type=int, default=100)
    ap.add_argument("--max-trials", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--only", help="comma-separated outer/inner pairs, e.g. PTO1REA/PTO1REA")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    wanted = set(args.only.split(",")) if args.only else None
    for camp in Plan().campaigns:
        if wanted and f"{camp.outer}/{camp.inner}" not in wanted:
            continue
        outer, inner = bundled(camp.outer), bundled(camp.inner)
        for size in camp.sizes:
            cfg = SimulationConfig(camp.outer, camp.inner, size // outer.sig.kq, camp.ps,
                                   seed=args.seed, min_failures=args.min_failures,
                                   max_trials=args.max_trials, workers=args.workers)
            res = simulate(cfg, outer, inner)
            path = out / f"{camp.outer}_{camp.inner}_{size}.csv"
            with path.open("w") as fh:
                write_csv(res, fh, version_string())
            for c in res.cells:
                print(f"{camp.outer}/{camp.inner} k={size} p={c.p}: "
                      f"{c.failures}/{c.trials} wer={c.wer:.3g}", flush=True)


if __name__ == "__main__":
    main()
