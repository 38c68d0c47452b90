"""Gap between the soft-decision rate and the best hard-decision baseline.

For every SNR and NNR on the grid, prints the soft rate, the best repetition
baseline in both BSC conversion modes and whether soft decisions win.
"""

import argparse
import itertools

from gaussmaurer import PAPER_THRESHOLDS, optimal_block_length, snr_nnr_to_params, soft_rate_lower_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--snr", default="1,5,7")
    ap.add_argument("--nnr", default="0.5,1,2,5,10")
    ap.add_argument("--nmax", type=int, default=10)
    args = ap.parse_args()
    snrs = [float(v) for v in args.snr.split(",")]
    nnrs = [float(v) for v in args.nnr.split(",")]
    print(f"{'snr':>5} {'nnr':>5} {'soft':>9} {'hard':>9} {'N':>3} {'hard(p)':>9} {'N':>3} win")
    wins = 0
    for snr, nnr in itertools.product(snrs, nnrs):
        p = snr_nnr_to_params(snr, nnr)
        soft = soft_rate_lower_bound(p, PAPER_THRESHOLDS).soft_rate
        ex = optimal_block_length(p, args.nmax, "exact")
        pa = optimal_block_length(p, args.nmax, "paper")
        win = soft >= max(ex.best_rate, pa.best_rate) - 1e-9
        wins += win
        print(f"{snr:5g} {nnr:5g} {soft:9.5f} {ex.best_rate:9.5f} {ex.best_n:3d} "
              f"{pa.best_rate:9.5f} {pa.best_n:3d} {'yes' if win else 'NO'}")
    print(f"soft decisions win at {wins}/{len(snrs) * len(nnrs)} points")


if __name__ == "__main__":
    main()
