"""Command-line interface.

    erspolar encode --n 5 --k 15 --message 1,2,3,...
    erspolar decode --n 5 --k 15 --obs frames.txt --snr 6 --list 8
    erspolar transform-info --n 5 --k 16 --perm greedy
    erspolar profile --n 5 --rate 0.5 --snr 11 --method mc --frames 100000
    erspolar bound --n 4 5 6 7 8 --rate 0.25 0.5 --snr 11
    erspolar fer --n 5 --k 15 --snr 6 --list 64 --min-errors 100
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import analysis
from .decoder import LLR_MAX, sc_decode_batch, scl_decode_batch
from .ers_code import code_new, encode_poly
from .galois import FieldError, field_new
from .sim import CSV_FIELDS, ChannelConfig, DecoderSpec, StopRule, observations_to_llr, run_fer
from .transform import Permutation, make_permutation, pivot_profile, pretransform

PERM_ALIASES = {"greedy": "greedy_search", "natural": "natural_locator", "bitrev": "bit_reversal"}


class UsageError(Exception):
    pass


def _int(text: str) -> int:
    return int(text, 0)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, nargs="+", help="field exponent (N = 2^n); several for `bound`")
    p.add_argument("--k", type=int, nargs="+", help="code dimension")
    p.add_argument("--perm", default="natural_locator",
                   help="identity | bit_reversal | natural_locator | greedy | path to a JSON array")
    p.add_argument("--prim-poly", type=_int, default=None, help="primitive polynomial mask, e.g. 0b100101")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", choices=["csv", "json"], default=None)
    p.add_argument("--llr-max", type=float, default=LLR_MAX)
    p.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")
    p.add_argument("--iterations", type=int, default=2000, help="greedy permutation search budget")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="erspolar", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", parents=[common], help="message -> codeword")
    p.add_argument("--message", help="comma/space separated symbols or a JSON list")
    p.add_argument("--random", action="store_true", help="draw a random message from --seed")

    p = sub.add_parser("decode", parents=[common], help="observations file -> messages")
    p.add_argument("--obs", required=True, help="one frame per line, N*n reals ('-' for stdin)")
    p.add_argument("--snr", type=float, required=True, help="Eb/N0 in dB used for the LLR scale")
    p.add_argument("--list", type=int, default=1, help="list size; 1 with --decoder sc is plain SC")
    p.add_argument("--decoder", choices=["sc", "scl"], default=None)

    p = sub.add_parser("transform-info", parents=[common], help="pivot profile and frozen classes")
    p.add_argument("--snr", type=float, default=11.0, help="SNR of the GA profile steering greedy search")
    p.add_argument("--save-perm", help="write the permutation as a JSON array")

    p = sub.add_parser("profile", parents=[common], help="subchannel error probabilities")
    p.add_argument("--snr", type=float, required=True)
    p.add_argument("--rate", type=float, help="code rate (default K/N)")
    p.add_argument("--method", choices=["ga", "mc"], default="ga")
    p.add_argument("--frames", type=int, default=10**5)

    p = sub.add_parser("bound", parents=[common], help="SC lower-bound grid (CSV)")
    p.add_argument("--rate", type=float, nargs="+", default=[0.25, 0.5])
    p.add_argument("--snr", type=float, nargs="+", default=[analysis.REFERENCE_SNR_DB])
    p.add_argument("--method", choices=["ga", "mc"], default="ga")
    p.add_argument("--frames", type=int, default=None,
                   help="MC genie frames (default 1e6 for N <= 64, 1e5 above)")

    p = sub.add_parser("fer", parents=[common], help="frame error rate sweep")
    p.add_argument("--snr", type=float, nargs="+", required=True)
    p.add_argument("--list", type=int, nargs="+", default=[1])
    p.add_argument("--decoder", choices=["sc", "scl"], default=None)
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--max-frames", type=int, default=10**7)
    return parser


def _one(values, name: str, default=None):
    if values is None:
        if default is None:
            raise UsageError(f"--{name} is required")
        return default
    if len(values) != 1:
        raise UsageError(f"--{name} takes a single value for this command")
    return values[0]


def _field(args):
    n = _one(args.n, "n")
    try:
        return field_new(n, args.prim_poly)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def _permutation(args, code, snr_db: float = 11.0):
    spec = PERM_ALIASES.get(args.perm, args.perm)
    if os.path.exists(args.perm):
        with open(args.perm) as fh:
            return Permutation(np.array(json.load(fh)), "custom")
    if spec == "greedy_search":
        prof = analysis.ga_profile(code.N, snr_db, code.rate)
        return make_permutation(code.N, spec, code=code, profile=prof,
                                iterations=args.iterations, seed=args.seed)
    try:
        return make_permutation(code.N, spec, code=code, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _code(args):
    gf = _field(args)
    K = _one(args.k, "k")
    if not 1 <= K <= gf.size:
        raise UsageError(f"--k must lie in 1..{gf.size}")
    return code_new(gf, K)


def _hex(symbols, n: int) -> str:
    width = (n + 3) // 4
    return " ".join(format(int(s), f"0{width}x") for s in symbols)


def _parse_symbols(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("["):
        return [int(v) for v in json.loads(text)]
    return [int(v, 0) for v in text.replace(",", " ").split()]


def _write_rows(rows, fields, out, stream):
    if out == "json":
        json.dump(rows, stream, indent=2)
        stream.write("\n")
        return
    writer = csv.DictWriter(stream, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r)


# ------------------------------------------------------------- commands

def cmd_encode(args, out):
    code = _code(args)
    if args.random:
        msg = np.random.default_rng(args.seed).integers(0, code.N, size=code.K)
    elif args.message:
        msg = np.array(_parse_symbols(args.message))
    else:
        raise UsageError("give --message or --random")
    if len(msg) != code.K or msg.min() < 0 or msg.max() >= code.N:
        raise UsageError(f"message must have K={code.K} symbols in 0..{code.N - 1}")
    C = encode_poly(code, msg)
    if args.out == "json":
        json.dump({"N": code.N, "K": code.K, "message": msg.tolist(), "codeword": C.tolist()}, out)
        out.write("\n")
    else:
        out.write(_hex(C, code.n) + "\n")


def cmd_decode(args, out):
    code = _code(args)
    perm = _permutation(args, code)
    pt = pretransform(code, perm)
    text = sys.stdin.read() if args.obs == "-" else open(args.obs).read()
    frames = [list(map(float, line.split())) for line in text.splitlines() if line.strip()]
    width = code.N * code.n
    for k, f in enumerate(frames):
        if len(f) != width:
            raise UsageError(f"frame {k} has {len(f)} values, expected N*n = {width}")
    y = np.array(frames).reshape(-1, code.N, code.n)
    cfg = ChannelConfig(args.snr, code.rate, args.seed, args.llr_max)
    llr = observations_to_llr(y, cfg, pt)
    kind = args.decoder or ("sc" if args.list == 1 else "scl")
    if kind == "sc":
        _, F, _ = sc_decode_batch(pt, llr)
    else:
        _, F, _, _ = scl_decode_batch(pt, llr, args.list)
    if args.out == "json":
        json.dump([row.tolist() for row in F], out)
        out.write("\n")
    else:
        for row in F:
            out.write(_hex(row, code.n) + "\n")


def cmd_transform_info(args, out):
    code = _code(args)
    perm = _permutation(args, code, args.snr)
    pt = pretransform(code, perm)
    prof = pivot_profile(pt)
    if args.save_perm:
        with open(args.save_perm, "w") as fh:
            fh.write(perm.to_json())
    if args.out == "json":
        json.dump({**pt.to_dict(), "pivot_profile": prof}, out)
        out.write("\n")
        return
    out.write(f"code: ({code.N}, {code.K}) over GF(2^{code.n}), prim_poly={code.field.prim_poly:#b}\n")
    out.write(f"permutation: {perm.strategy} digest={perm.digest()} map={perm.to_json()}\n")
    out.write(f"pivots A: {list(pt.A)}\n")
    out.write(f"D (a={prof['a']}): {prof['D']}\n")
    out.write(f"D covered by non-static positions: {not prof['D_static']}; "
              f"D positions carrying information: {prof['D_in_A']}/{len(prof['D'])}\n")
    out.write(f"classes: {prof['counts']}\n")
    out.write("index,class,tau\n")
    for i in range(code.N):
        out.write(f"{i},{pt.frozen_class[i]},{int(pt.tau[i])}\n")


def cmd_profile(args, out):
    n = _one(args.n, "n")
    N = 1 << n
    if args.rate is not None:
        rate = args.rate
    else:
        rate = _one(args.k, "k") / N
    if args.method == "ga":
        prof = analysis.ga_profile(N, args.snr, rate)
    else:
        prof = analysis.mc_profile(N, args.snr, rate, args.frames, seed=args.seed,
                                   threads=args.threads, llr_max=args.llr_max)
    if args.out == "csv":
        out.write("index,pe\n")
        for i, p in enumerate(prof.pe):
            out.write(f"{i},{p:.6e}\n")
    else:
        out.write(prof.to_json() + "\n")


def cmd_bound(args, out):
    if args.n is None:
        raise UsageError("--n is required")
    lengths = [1 << n for n in args.n]
    rows = analysis.bound_grid(lengths, args.rate, args.snr, method=args.method,
                               frames=args.frames, seed=args.seed, threads=args.threads)
    for r in rows:
        r["bound"] = float(f"{r['bound']:.6e}")
    _write_rows(rows, ["snr_db", "N", "K", "rate", "a", "method", "frames", "bound"], args.out or "csv", out)


def cmd_fer(args, out):
    code = _code(args)
    pt = pretransform(code, _permutation(args, code))
    rows = []
    for snr in args.snr:
        for L in args.list:
            kind = args.decoder or ("sc" if L == 1 else "scl")
            res = run_fer(code, pt, DecoderSpec(kind, L),
                          ChannelConfig(snr, code.rate, args.seed, args.llr_max),
                          StopRule(args.min_errors, args.max_frames), threads=args.threads)
            rows.append(res.to_dict() if (args.out or "json") == "json" else res.row())
    if (args.out or "json") == "json":
        json.dump(rows if len(rows) > 1 else rows[0], out, indent=2)
        out.write("\n")
    else:
        _write_rows(rows, CSV_FIELDS, "csv", out)


COMMANDS = {
    "encode": cmd_encode,
    "decode": cmd_decode,
    "transform-info": cmd_transform_info,
    "profile": cmd_profile,
    "bound": cmd_bound,
    "fer": cmd_fer,
}


def main(argv=None, out=None) -> int:
    parser = build_parser()
    out = out or sys.stdout
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        parser.print_usage(sys.stderr)
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout (used by tests and scripts)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
