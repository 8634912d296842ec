"""Property flags, free distances and distance spectra of the bundled encoders."""

from __future__ import annotations

import argparse
import time
from dataclasses import replace

from eaqturbo.encoder import bundled, bundled_names
from eaqturbo.spectrum import PUBLISHED, SpectrumConfig, distance_spectrum
from eaqturbo.state_diagram import analyze, build_state_diagram

# spectra of the PTO encoders are usually quoted to higher weight
DEFAULT_W = {"PTO1R": 12, "PTO3R": 12, "PTO1REA": 19, "PTO3REA": 19}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", help="bundled encoder names (default: all)")
    ap.add_argument("--W", type=int, help="weight cap for every encoder")
    ap.add_argument("--strict", action="store_true",
                    help="count only paths with positive logical weight, of any length")
    args = ap.parse_args()

    for name in args.names or bundled_names():
        t0 = time.perf_counter()
        enc = bundled(name)
        d = build_state_diagram(enc)
        rep = analyze(d)
        W = args.W or DEFAULT_W.get(name, 10)
        cfg = SpectrumConfig(W=W) if args.strict else replace(PUBLISHED, W=W)
        # the largest diagrams are fine for flags but slow for deep spectra
        spec = distance_spectrum(d, cfg) if d.num_edges <= 1 << 20 else None
        flags = (f"nc={int(rep.non_catastrophic)} quasi={int(rep.quasi_recursive)} "
                 f"rec={int(rep.recursive)}")
        line = f"{name:8s} [{enc.sig}] {flags}"
        if spec is not None:
            line += f" dfree={spec.free_distance} F={spec.coefficients()}"
        print(f"{line}  ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
