"""Mean per-frame operation counts of SCL(L) on length-32 codes at 6 dB.

    python3 scripts/op_counts.py --list 64 --frames 512
"""

import argparse
import csv
import sys

from erspolar import code_new, field_new, make_permutation, pretransform
from erspolar.sim import ChannelConfig, DecoderSpec, StopRule, run_fer

REFERENCE = {7: (5.23e3, 5.77e4), 15: (1.20e4, 8.90e4), 25: (5.35e3, 8.05e4)}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, nargs="+", default=[7, 11, 15, 21, 25])
    ap.add_argument("--list", type=int, default=64)
    ap.add_argument("--snr", type=float, default=6.0)
    ap.add_argument("--frames", type=int, default=512)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    gf = field_new(5)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["K", "L", "frames", "errors", "fer", "gf_ops", "flops", "ref_gf_ops", "ref_flops"])
    for K in args.k:
        code = code_new(gf, K)
        pt = pretransform(code, make_permutation(32, "natural_locator", code=code))
        res = run_fer(code, pt, DecoderSpec("scl" if args.list > 1 else "sc", args.list),
                      ChannelConfig(args.snr, K / 32, seed=args.seed),
                      StopRule(min_errors=10**9, max_frames=args.frames))
        ref = REFERENCE.get(K, ("", ""))
        w.writerow([K, args.list, res.frames, res.frame_errors, f"{res.fer:.3e}",
                    f"{res.gf_ops_mean:.4g}", f"{res.flops_mean:.4g}", ref[0], ref[1]])


if __name__ == "__main__":
    main()
