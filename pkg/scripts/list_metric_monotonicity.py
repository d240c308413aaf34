"""Per-frame behaviour of the final SCL path metric as the list grows.

Decodes the same noisy frames with every list size and counts frames whose
selected metric got larger when L doubled, next to the frame-error counts.

    python3 scripts/list_metric_monotonicity.py --frames 2000
"""

import argparse
import math

import numpy as np

from erspolar import code_new, field_new, make_permutation, pretransform
from erspolar.decoder import scl_decode_batch
from erspolar.ers_code import encode_matrix
from erspolar.sim import ChannelConfig, frame_message, frame_noise, observations_to_llr


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=15)
    ap.add_argument("--snr", type=float, default=6.0)
    ap.add_argument("--frames", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=8)
    args = ap.parse_args()

    gf = field_new(5)
    code = code_new(gf, args.k)
    pt = pretransform(code, make_permutation(32, "natural_locator", code=code))
    cfg = ChannelConfig(args.snr, code.rate, seed=args.seed)
    msgs = np.array([frame_message(code, cfg, f) for f in range(args.frames)])
    y = 1.0 - 2.0 * gf.to_bits(encode_matrix(code, msgs))
    y += math.sqrt(cfg.noise_var) * np.array([frame_noise(cfg, f, (32, 5)) for f in range(args.frames)])
    llr = observations_to_llr(y, cfg, pt)

    prev = None
    print("L,frame_errors,metric_up_vs_prev,metric_down_vs_prev,max_increase")
    for L in (1, 2, 4, 8, 16, 32, 64):
        _, F, metric, _ = scl_decode_batch(pt, llr, L)
        errors = int(np.any(F != msgs, axis=1).sum())
        if prev is None:
            print(f"{L},{errors},,,")
        else:
            d = metric - prev
            up = d > 1e-9
            print(f"{L},{errors},{int(up.sum())},{int((d < -1e-9).sum())},{d.max() if up.any() else 0:.3f}")
        prev = metric


if __name__ == "__main__":
    main()
