"""Empirical bin-decoding error against block length and rate margin."""

import argparse
import math

from gaussmaurer import PAPER_THRESHOLDS, snr_nnr_to_params, soft_rate_lower_bound
from gaussmaurer.protocol import reconciliation_error


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--snr", type=float, default=5.0)
    ap.add_argument("--nnr", type=float, default=10.0)
    ap.add_argument("--lengths", default="8,12,16,20")
    ap.add_argument("--gammas", default="0.05,0.1,0.3")
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--decoder", default="ml", choices=["ml", "typicality"])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    p = snr_nnr_to_params(args.snr, args.nnr)
    rep = soft_rate_lower_bound(p, PAPER_THRESHOLDS)
    print("length,gamma,errors,trials,error_rate,stderr")
    for g in (float(v) for v in args.gammas.split(",")):
        for n in (int(v) for v in args.lengths.split(",")):
            e, tr = reconciliation_error(n, p, PAPER_THRESHOLDS, g, args.trials, seed=args.seed + n,
                                         report=rep, decoder=args.decoder)
            r = e / tr
            print(f"{n},{g:g},{e},{tr},{r:.5f},{math.sqrt(r * (1 - r) / tr):.5f}")


if __name__ == "__main__":
    main()
