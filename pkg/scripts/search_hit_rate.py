"""How often a uniformly random seed is recursive and non-catastrophic.

Without an ebit leg no encoder should ever qualify; with one the rate is small
but clearly positive.
"""

from __future__ import annotations

import argparse

import numpy as np

from eaqturbo.channel import wilson_interval
from eaqturbo.encoder import ResourceSignature, load_encoder
from eaqturbo.state_diagram import analyze, build_state_diagram
from eaqturbo.symplectic import sample_symplectic

SIGNATURES = [
    ResourceSignature(1, 1, 0, 1), ResourceSignature(2, 1, 0, 1), ResourceSignature(2, 1, 1, 1),
    ResourceSignature(1, 1, 1), ResourceSignature(2, 1, 1), ResourceSignature(3, 1, 2),
    ResourceSignature(1, 1, 0, 0, 1), ResourceSignature(2, 1, 0, 0, 1, 1),
    ResourceSignature(2, 1, 1, 0, 0, 1),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print("m kq a c kc g  hits/samples  rate  95% interval")
    for sig in SIGNATURES:
        hits = 0
        for _ in range(args.count):
            rep = analyze(build_state_diagram(load_encoder(sig, sample_symplectic(sig.N, rng).rows)))
            hits += rep.recursive and rep.non_catastrophic
        lo, hi = wilson_interval(hits, args.count)
        print(f"{sig}  {hits}/{args.count}  {hits / args.count:.4f}  [{lo:.4f}, {hi:.4f}]")


if __name__ == "__main__":
    main()
