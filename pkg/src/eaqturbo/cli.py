"""Command line: analyze, search, bounds, simulate.

Exit status 0 on success, 1 on usage errors, 2 when an encoder cannot be loaded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .channel import noise_limit
from .encoder import (
    ConvolutionalEncoder,
    EncoderFormatError,
    InvalidEncoderError,
    ResourceSignature,
    bundled,
    bundled_names,
    format_encoder,
    load_encoder,
    read_encoder,
)
from .simulation import CSV_COLUMNS, SimulationConfig, config_record, simulate
from .spectrum import SpectrumConfig, distance_spectrum
from .state_diagram import DiagramTooLarge, analyze, build_state_diagram
from .symplectic import decimal_to_pauli, sample_symplectic

EXIT_USAGE = 1
EXIT_ENCODER = 2


class UsageError(Exception):
    pass


class EncoderLoadError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def version_string() -> str:
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"],
                             cwd=Path(__file__).parent, capture_output=True, text=True, timeout=5)
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+g{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def resolve_encoder(ref: str) -> ConvolutionalEncoder:
    """A path to an encoder file, or the name of a bundled encoder."""
    path = Path(ref)
    try:
        if path.exists():
            return read_encoder(path)
        if ref in bundled_names():
            return bundled(ref)
    except (InvalidEncoderError, EncoderFormatError, OSError) as e:
        raise EncoderLoadError(f"{ref}: {e}") from None
    raise EncoderLoadError(f"{ref}: no such file or bundled encoder")


def _yes(b: bool) -> str:
    return "yes" if b else "no"


def analysis_record(enc: ConvolutionalEncoder, W: int | None = None,
                    spectrum_cfg: SpectrumConfig | None = None) -> dict:
    d = build_state_diagram(enc)
    rep = analyze(d)
    cfg = spectrum_cfg or SpectrumConfig(W=W or 10)
    spec = distance_spectrum(d, cfg)
    return {
        "encoder": enc.name,
        "signature": {k: getattr(enc.sig, k) for k in ("m", "kq", "a", "c", "kc", "g")},
        "non_catastrophic": rep.non_catastrophic,
        "quasi_recursive": rep.quasi_recursive,
        "recursive": rep.recursive,
        "zero_cycle_vertices": [str(decimal_to_pauli(v, enc.sig.m)) or "I"
                                for v in sorted(rep.zero_cycle_vertices)],
        "free_distance": spec.free_distance,
        "spectrum_W": cfg.W,
        "spectrum": spec.coefficients(),
    }


def cmd_analyze(args, out) -> int:
    enc = resolve_encoder(args.encoder)
    cfg = SpectrumConfig(W=args.spectrum or 10, positive_logical=not args.all_paths,
                         max_length=args.max_length)
    rec = analysis_record(enc, spectrum_cfg=cfg)
    s = rec["signature"]
    print(f"encoder: {rec['encoder'] or args.encoder}", file=out)
    print("signature: " + " ".join(f"{k}={v}" for k, v in s.items()), file=out)
    print(f"non-catastrophic: {_yes(rec['non_catastrophic'])}", file=out)
    print(f"quasi-recursive: {_yes(rec['quasi_recursive'])}", file=out)
    print(f"recursive: {_yes(rec['recursive'])}", file=out)
    print(f"zero-cycle vertices: {' '.join(rec['zero_cycle_vertices']) or '-'}", file=out)
    fd = rec["free_distance"]
    print(f"free distance: {fd if fd is not None else f'> {cfg.W}'}", file=out)
    print("record: " + json.dumps(rec), file=out)
    if args.spectrum:
        print("w,count", file=out)
        for w, c in enumerate(rec["spectrum"]):
            print(f"{w},{c}", file=out)
    return 0


def cmd_search(args, out) -> int:
    try:
        sig = ResourceSignature(args.m, args.kq, args.a, args.c, args.kc, args.g)
    except ValueError as e:
        raise UsageError(str(e)) from None
    wanted = {w.strip() for w in args.require.split(",") if w.strip()}
    known = {"recursive", "non-catastrophic", "quasi-recursive", "catastrophic", "non-recursive"}
    if wanted - known:
        raise UsageError(f"unknown filter(s): {', '.join(sorted(wanted - known))}")
    rng = np.random.default_rng(args.seed)
    outdir = Path(args.output_dir) if args.output_dir else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    hits = 0
    for i in range(args.count):
        seed = sample_symplectic(sig.N, rng)
        enc = load_encoder(sig, seed.rows, name=f"search-{args.seed}-{i}")
        try:
            rep = analyze(build_state_diagram(enc))
        except DiagramTooLarge as e:
            raise UsageError(str(e)) from None
        flags = {
            "recursive": rep.recursive,
            "non-recursive": not rep.recursive,
            "quasi-recursive": rep.quasi_recursive,
            "non-catastrophic": rep.non_catastrophic,
            "catastrophic": not rep.non_catastrophic,
        }
        if all(flags[w] for w in wanted):
            hits += 1
            print(f"hit {i}: {' '.join(str(r) for r in seed.rows)}", file=out)
            if outdir:
                (outdir / f"{enc.name}.enc").write_text(
                    format_encoder(enc) + f"# recursive={rep.recursive} "
                    f"non_catastrophic={rep.non_catastrophic} quasi={rep.quasi_recursive}\n")
    rate = hits / args.count if args.count else 0.0
    print(f"samples: {args.count} hits: {hits} hit rate: {rate:.6g}", file=out)
    return 0


def _rate(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rate: {text!r}") from None


def cmd_bounds(args, out) -> int:
    try:
        p = noise_limit(args.rate, assisted=args.assisted)
    except ValueError as e:
        raise UsageError(str(e)) from None
    kind = "entanglement-assisted" if args.assisted else "unassisted"
    print(f"rate {args.rate:.6g} ({kind}) noise limit p = {p:.5f}", file=out)
    return 0


def _probabilities(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad probability list {text!r}") from None


def write_csv(result, stream, version: str, timing: bool = True):
    stream.write(f"# eaqturbo simulate {version}\n")
    stream.write("# config: " + json.dumps(config_record(result.config), sort_keys=True) + "\n")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for cell in result.cells:
        w.writerow(cell.row(timing))


def cmd_simulate(args, out) -> int:
    outer = resolve_encoder(args.outer)
    inner = resolve_encoder(args.inner)
    try:
        cfg = SimulationConfig(
            outer=args.outer, inner=args.inner, frames_outer=args.frames, ps=args.p,
            p_ebit=args.p_ebit, seed=args.seed, min_failures=args.min_failures,
            max_trials=args.max_trials, workers=args.workers, batch=args.batch,
            max_iterations=args.max_iterations, output=args.output)
        result = simulate(cfg, outer, inner)
    except ValueError as e:
        raise UsageError(str(e)) from None
    buf = io.StringIO()
    write_csv(result, buf, version_string(), timing=not args.deterministic)
    if args.output:
        Path(args.output).write_text(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="eaqturbo", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="state-diagram properties and distance spectrum")
    a.add_argument("encoder", help="encoder file or bundled encoder name")
    a.add_argument("--spectrum", type=int, metavar="W", help="print F(w) for w <= W")
    a.add_argument("--all-paths", action="store_true",
                   help="also count paths with zero logical weight")
    a.add_argument("--max-length", type=int, metavar="L", help="count paths of at most L edges")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("search", help="sample random encoders and filter by properties")
    for leg in ("m", "kq", "a", "c", "kc", "g"):
        s.add_argument(f"--{leg}", type=int, default=0)
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--require", default="recursive,non-catastrophic")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output-dir")
    s.set_defaults(func=cmd_search)

    b = sub.add_parser("bounds", help="hashing-bound noise limit for a rate")
    b.add_argument("--rate", type=_rate, required=True)
    b.add_argument("--assisted", action="store_true")
    b.set_defaults(func=cmd_bounds)

    m = sub.add_parser("simulate", help="Monte Carlo word error rate of a turbo code")
    m.add_argument("--outer", required=True)
    m.add_argument("--inner", required=True)
    m.add_argument("--frames", type=int, required=True, help="outer frames per block")
    m.add_argument("--p", type=_probabilities, required=True, help="comma-separated list")
    m.add_argument("--p-ebit", type=float, default=0.0)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--min-failures", type=int, default=100)
    m.add_argument("--max-trials", type=int, default=1_000_000)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--batch", type=int, default=32)
    m.add_argument("--max-iterations", type=int, default=12)
    m.add_argument("--output")
    m.add_argument("--deterministic", action="store_true",
                   help="write 0 in the seconds column so reruns compare byte for byte")
    m.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except EncoderLoadError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ENCODER
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
