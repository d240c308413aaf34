"""FER of SC and SCL over SNR and list size for one eRS code.

    python3 scripts/fer_sweep.py --k 15 --snr 4 5 6 --list 1 8 64 --min-errors 100
"""

import argparse
import csv
import sys

from erspolar import code_new, field_new, make_permutation, pretransform
from erspolar.sim import CSV_FIELDS, ChannelConfig, DecoderSpec, StopRule, run_fer


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--k", type=int, default=15)
    ap.add_argument("--snr", type=float, nargs="+", default=[4.0, 5.0, 6.0])
    ap.add_argument("--list", type=int, nargs="+", default=[1, 2, 4, 8, 16, 32, 64])
    ap.add_argument("--min-errors", type=int, default=100)
    ap.add_argument("--max-frames", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    code = code_new(field_new(args.n), args.k)
    pt = pretransform(code, make_permutation(code.N, "natural_locator", code=code))
    w = csv.DictWriter(sys.stdout, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for snr in args.snr:
        for L in args.list:
            dec = DecoderSpec("sc" if L == 1 else "scl", L)
            res = run_fer(code, pt, dec, ChannelConfig(snr, code.rate, seed=args.seed),
                          StopRule(args.min_errors, args.max_frames), threads=args.threads)
            w.writerow(res.row())
            sys.stdout.flush()


if __name__ == "__main__":
    main()
