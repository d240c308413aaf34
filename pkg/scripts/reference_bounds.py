"""Reproduce the SC lower-bound table at 11 dB with both profile methods.

    python3 scripts/reference_bounds.py --frames 1000000 > bounds.csv
"""

import argparse
import csv
import sys

from erspolar.analysis import REFERENCE_BOUNDS, REFERENCE_SNR_DB, bound_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--frames", type=int, default=10**6, help="genie frames per MC cell")
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--skip-mc", action="store_true")
    args = ap.parse_args()

    lengths, rates = [16, 32, 64, 128, 256], [0.25, 0.5]
    ga = {(r["N"], r["rate"]): r["bound"] for r in bound_grid(lengths, rates, [REFERENCE_SNR_DB])}
    mc = {}
    if not args.skip_mc:
        rows = bound_grid(lengths, rates, [REFERENCE_SNR_DB], method="mc", frames=args.frames,
                          seed=args.seed, threads=args.threads)
        mc = {(r["N"], r["rate"]): r["bound"] for r in rows}
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["N", "rate", "reference", "ga", "ga_ratio", "mc", "mc_rel_err"])
    for key in sorted(ga, key=lambda k: (k[1], k[0])):
        ref = REFERENCE_BOUNDS[key]
        m = mc.get(key)
        w.writerow([key[0], key[1], f"{ref:.3e}", f"{ga[key]:.3e}", f"{ga[key] / ref:.3f}",
                    "" if m is None else f"{m:.3e}", "" if m is None else f"{(m - ref) / ref:+.3f}"])


if __name__ == "__main__":
    main()
