"""Soft-decision and hard-decision key rates over an SNR sweep for several NNR values.

Writes one CSV row per (snr_db, nnr) point, ready for a line plot of rate
against SNR with one curve per NNR.
"""

import argparse
import csv
import sys
from dataclasses import dataclass, field

import numpy as np

from gaussmaurer import PAPER_THRESHOLDS, Thresholds, optimal_block_length, snr_nnr_to_params, soft_rate_lower_bound


@dataclass
class Config:
    snr_start: float = -10.0
    snr_stop: float = 25.0
    snr_step: float = 1.0
    nnr: list = field(default_factory=lambda: [0.5, 1.0, 2.0, 5.0, 10.0])
    thresholds: tuple = PAPER_THRESHOLDS.a
    nmax: int = 10
    mode: str = "exact"


def run(cfg: Config, out):
    t = Thresholds(tuple(cfg.thresholds))
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["snr_db", "nnr", "rate_soft", "rate_hard_best", "best_block_len", "keep_fraction"])
    for snr in np.arange(cfg.snr_start, cfg.snr_stop + cfg.snr_step / 2, cfg.snr_step):
        for nnr in cfg.nnr:
            p = snr_nnr_to_params(float(snr), nnr)
            rep = soft_rate_lower_bound(p, t)
            base = optimal_block_length(p, cfg.nmax, cfg.mode)
            w.writerow([f"{snr:g}", f"{nnr:g}", f"{rep.soft_rate:.10g}", f"{base.best_rate:.10g}",
                        base.best_n, f"{rep.keep_fraction:.6g}"])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--snr", default="-10:25:1", help="start:stop:step in dB")
    ap.add_argument("--nnr", default="0.5,1,2,5,10")
    ap.add_argument("--mode", default="exact", choices=["exact", "paper"])
    ap.add_argument("--out", default="-")
    args = ap.parse_args()
    start, stop, step = (float(v) for v in args.snr.split(":"))
    cfg = Config(start, stop, step, [float(v) for v in args.nnr.split(",")], mode=args.mode)
    if args.out == "-":
        run(cfg, sys.stdout)
    else:
        with open(args.out, "w") as fh:
            run(cfg, fh)


if __name__ == "__main__":
    main()
