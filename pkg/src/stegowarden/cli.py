"""Command-line front end: embed, extract, attack, analyze, experiment.

Signals travel as whitespace-separated floats in text files, or as PGM images
(paths ending in .pgm are lifted to mean-centered pixel signals).  Messages
are strings of 0/1 characters.  Exit code 0 on success; any validation
failure prints a diagnostic and exits nonzero.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .analysis import KLD_BINS, build_histogram, default_epsilon, kld
from .errors import ParameterError, PgmFormatError
from .experiments import PRESETS, make_preset, parse_specfile, run_and_write
from .images import image_to_signal, load_pgm, save_pgm, signal_to_image
from .schemes import SchemeSpec
from .scs import ScsParams, delta_for_dwr
from .signals import Key, empirical_power, linear_to_db, random_bits
from .spread import SpreadParams, StScsParams
from .tcq import TcqParams, build_trellis
from .warden import AttackParams, awgn_attack


def _read_signal(path):
    """Returns (signal, image_context) where image_context is None for text files."""
    if str(path).lower().endswith(".pgm"):
        img = load_pgm(path)
        sig, mean = image_to_signal(img)
        return sig, (img.width, img.height, mean)
    sig = np.loadtxt(path, dtype=np.float64).ravel()
    return sig, None


def _write_signal(sig, path, image_context):
    if str(path).lower().endswith(".pgm"):
        if image_context is None:
            raise ParameterError("cannot write a .pgm output for a text-signal input")
        w, h, mean = image_context
        save_pgm(signal_to_image(sig, w, h, mean), path)
    else:
        np.savetxt(path, sig, fmt="%.12g")


def _read_bits(path):
    text = open(path).read()
    chars = [c for c in text if not c.isspace()]
    if not all(c in "01" for c in chars):
        raise ParameterError(f"{path}: message files contain only 0/1 characters")
    return np.array([int(c) for c in chars], dtype=np.uint8)


def _write_bits(bits, path):
    with open(path, "w") as fh:
        fh.write("".join(str(int(b)) for b in bits) + "\n")


def _scheme_params(args, sigma_s: float):
    """Build concrete parameters from CLI flags; delta may come from --delta or --dwr-db."""
    key = Key(args.seed)
    if args.delta is not None:
        delta = args.delta
    elif args.dwr_db is not None:
        dwr = args.dwr_db - (10.0 * math.log10(args.tau) if args.scheme == "stscs" else 0.0)
        delta = delta_for_dwr(dwr, sigma_s, args.alpha)
    else:
        raise ParameterError("give either --delta or --dwr-db")
    dithered = not args.no_dither
    if args.scheme == "scs":
        return ScsParams(alpha=args.alpha, delta=delta, key=key.child("scs"), dithered=dithered)
    if args.scheme == "tcq":
        return TcqParams(alpha=args.alpha, delta=delta, trellis=build_trellis(args.r))
    return StScsParams(
        spread=SpreadParams(tau=args.tau, key=key.child("spread")),
        scs=ScsParams(alpha=args.alpha, delta=delta, key=key.child("scs"), dithered=dithered),
    )


def _spec_for(args) -> SchemeSpec:
    return SchemeSpec(name=args.scheme, alpha=args.alpha, dwr_db=args.dwr_db or 13.0,
                      tau=args.tau, r=args.r, dithered=not args.no_dither)


def _add_scheme_flags(p):
    p.add_argument("--scheme", required=True, choices=("scs", "tcq", "stscs"))
    p.add_argument("--alpha", type=float, default=0.5, help="Costa factor in (0, 1]")
    p.add_argument("--delta", type=float, default=None, help="quantizer step (overrides --dwr-db)")
    p.add_argument("--dwr-db", type=float, default=None,
                   help="derive the step from this host-domain DWR and the input's measured power")
    p.add_argument("--tau", type=int, default=2, help="spreading factor (stscs)")
    p.add_argument("--r", type=int, default=6, help="trellis state bits (tcq)")
    p.add_argument("--seed", type=int, default=0, help="key seed")
    p.add_argument("--no-dither", action="store_true",
                   help="disable the keyed SCS dither (density analyses)")


def _cmd_embed(args) -> int:
    s, ctx = _read_signal(args.host)
    sigma_s = float(np.sqrt(empirical_power(s))) if s.std() > 0 else 1.0
    params = _scheme_params(args, sigma_s)
    spec = _spec_for(args)
    n_bits = spec.n_bits(s.size)
    if args.bits is not None:
        bits = _read_bits(args.bits)
        if bits.size != n_bits:
            raise ParameterError(f"message must carry {n_bits} bits for this host")
    else:
        bits = random_bits(Key(args.seed), n_bits)
        if args.bits_out:
            _write_bits(bits, args.bits_out)
    x = spec.embed(s, bits, params)
    _write_signal(x, args.out, ctx)
    sigma_w2 = empirical_power(x - s)
    delta = params.scs.delta if args.scheme == "stscs" else params.delta
    print(f"embedded {n_bits} bits with {args.scheme}")
    print(f"delta = {delta:.12g}")
    print(f"measured watermark power = {sigma_w2:.6g}")
    print(f"measured DWR = {linear_to_db(empirical_power(s) / sigma_w2):.3f} dB")
    return 0


def _cmd_extract(args) -> int:
    y, _ = _read_signal(args.stego)
    sigma_s = float(np.sqrt(empirical_power(y))) if y.std() > 0 else 1.0
    params = _scheme_params(args, sigma_s)
    spec = _spec_for(args)
    bits = spec.extract(y, params)
    if args.out:
        _write_bits(bits, args.out)
    else:
        print("".join(str(int(b)) for b in bits))
    return 0


def _cmd_attack(args) -> int:
    x, ctx = _read_signal(args.stego)
    if args.watermark_power is not None:
        power = args.watermark_power
    elif args.reference is not None:
        ref, _ = _read_signal(args.reference)
        if ref.size != x.size:
            raise ParameterError("reference and stego signals differ in length")
        power = empirical_power(x - ref)
    else:
        raise ParameterError("give --watermark-power or --reference")
    y = awgn_attack(x, power, AttackParams(wnr_db=args.wnr_db, key=Key(args.seed).child("attack")))
    _write_signal(y, args.out, ctx)
    print(f"added AWGN at WNR = {args.wnr_db} dB (noise power {power * 10 ** (-args.wnr_db / 10):.6g})")
    return 0


def _cmd_analyze(args) -> int:
    stego, _ = _read_signal(args.stego)
    cover, _ = _read_signal(args.cover)
    if args.lo is not None and args.hi is not None:
        lo, hi = args.lo, args.hi
    else:
        sigma = float(np.sqrt(empirical_power(cover)))
        lo, hi = -args.sigmas * sigma, args.sigmas * sigma
    eps = args.epsilon if args.epsilon is not None else default_epsilon(stego.size)
    report = kld(
        build_histogram(stego, lo, hi, args.bins),
        build_histogram(cover, lo, hi, args.bins),
        eps,
    )
    print(f"kld_bits = {report.kld_bits:.6g}")
    print(f"bins = {report.bins}  epsilon = {report.epsilon:.6g}  support = [{lo:.6g}, {hi:.6g})")
    print(f"cover power = {empirical_power(cover):.6g}  stego power = {empirical_power(stego):.6g}")
    diff = stego - cover if stego.size == cover.size else None
    if diff is not None and np.any(diff):
        print(f"measured DWR = {linear_to_db(empirical_power(cover) / empirical_power(diff)):.3f} dB")
    return 0


def _cmd_experiment(args) -> int:
    if args.target in PRESETS:
        spec = make_preset(args.target, seed=args.seed, out=args.out, images_dir=args.images_dir)
    else:
        spec = parse_specfile(args.target)
        overrides = {}
        if args.seed_given:
            overrides["seed"] = args.seed
        if args.out_given:
            overrides["out"] = args.out
        if args.images_dir is not None:
            overrides["images_dir"] = args.images_dir
        if overrides:
            import dataclasses

            spec = dataclasses.replace(spec, **overrides)
    written = run_and_write(spec, jobs=args.jobs, plot=args.plot)
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="stegowarden",
        description="Embed, attack, extract and statistically analyze "
                    "quantization-based stego-systems under an AWGN warden.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a message into a host signal or PGM image")
    _add_scheme_flags(p)
    p.add_argument("--host", required=True, help="host signal (.txt floats or .pgm)")
    p.add_argument("--bits", default=None, help="message file of 0/1 characters")
    p.add_argument("--bits-out", default=None, help="where to save generated random bits")
    p.add_argument("--out", required=True, help="stego output path")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("extract", help="recover the message from a (possibly attacked) signal")
    _add_scheme_flags(p)
    p.add_argument("--stego", required=True)
    p.add_argument("--out", default=None, help="write bits here instead of stdout")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("attack", help="add white Gaussian noise at a chosen WNR")
    p.add_argument("--stego", required=True)
    p.add_argument("--wnr-db", type=float, required=True, help="watermark-to-noise ratio in dB (inf = no-op)")
    p.add_argument("--watermark-power", type=float, default=None)
    p.add_argument("--reference", default=None, help="measure watermark power against this host")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_attack)

    p = sub.add_parser("analyze", help="KL detectability of a stego signal against a cover")
    p.add_argument("--stego", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--bins", type=int, default=KLD_BINS)
    p.add_argument("--sigmas", type=float, default=5.0, help="half-support in cover standard deviations")
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("experiment", help="run a preset or spec-file sweep to CSV")
    p.add_argument("target", help="preset name (" + ", ".join(sorted(PRESETS)) + ") or a spec file")
    p.add_argument("--out", default="experiment.csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--plot", action="store_true", help="also write an SVG line chart")
    p.add_argument("--images-dir", default=None, help="PGM directory for the images preset")
    p.set_defaults(func=_cmd_experiment)
    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "experiment":
        args.seed_given = any(a == "--seed" or a.startswith("--seed=") for a in argv)
        args.out_given = any(a == "--out" or a.startswith("--out=") for a in argv)
    try:
        return args.func(args)
    except (ParameterError, PgmFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
