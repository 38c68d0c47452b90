"""Leftover-hash bound and entropy floor on a grid of tiny-n configurations."""

import argparse
import itertools

from gaussmaurer import Thresholds, estimate_security, snr_nnr_to_params
from gaussmaurer.binning import SwCode


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--z-samples", type=int, default=1000)
    ap.add_argument("--f-samples", type=int, default=100)
    ap.add_argument("--no-messages", action="store_true", help="publish no bin indices")
    args = ap.parse_args()
    codes = (SwCode(1, 0), SwCode(1, 0)) if args.no_messages else None
    print("n,snr_db,nnr,delta_mean,delta_stderr,bound_rhs,exact_entropy,entropy_floor,bound_ok,floor_ok")
    for n, snr, nnr in itertools.product((2, 3), (0.0, 5.0), (1.0, 10.0)):
        e = estimate_security(n, snr_nnr_to_params(snr, nnr), Thresholds((1.0,)), codes=codes,
                              z_samples=args.z_samples, f_samples=args.f_samples, seed=n)
        print(f"{n},{snr:g},{nnr:g},{e.delta_mean:.5f},{e.delta_stderr:.5f},{e.bound_rhs:.5f},"
              f"{e.exact_entropy:.5f},{e.entropy_floor:.5f},{e.lemma4_ok},{e.lemma3_ok}")


if __name__ == "__main__":
    main()
