"""Command-line front end.

Subcommands ``rate-sweep``, ``compare``, ``simulate`` and ``security-check``
write CSV (or a JSON run log) and exit with 0 on success, 2 on invalid
configuration, 3 on numerical failure and 4 when a request exceeds the
exhaustive-enumeration limits.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .baseline import optimal_block_length
from .binning import SwCode
from .entropy import TAIL_MASS, soft_rate_lower_bound
from .errors import CapacityError, NumericalError, ParameterError
from .model import snr_nnr_to_params
from .protocol import run_protocol
from .quantizer import PAPER_THRESHOLDS, Thresholds, parse_thresholds
from .security import estimate_security

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CAPACITY = 0, 2, 3, 4
MODE_ALIASES = {"exact": "exact", "paper-erfc": "paper", "paper": "paper"}


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    snr_db: tuple = (1.0, 7.0, 2.0)
    nnr: list = field(default_factory=lambda: [0.5, 1.0, 2.0, 5.0, 10.0])
    thresholds: list = field(default_factory=lambda: list(PAPER_THRESHOLDS.a))
    nmax: int = 10
    mode: str = "exact"
    out: str | None = None
    seed: int = 0
    #: explicit SNR values; overrides the range when set
    snr_points: list | None = None

    def validate(self):
        start, stop, step = self.snr_db
        if not all(math.isfinite(v) for v in self.snr_db):
            raise ConfigError("snr_db range must be finite")
        if not step > 0:
            raise ConfigError("snr step must be positive")
        if stop < start:
            raise ConfigError("snr stop must not be below start")
        if self.snr_points is not None and (not self.snr_points
                                            or not all(math.isfinite(v) for v in self.snr_points)):
            raise ConfigError("snr point list must be non-empty and finite")
        if not self.nnr:
            raise ConfigError("nnr list is empty")
        if any(not (v > 0 and math.isfinite(v)) for v in self.nnr):
            raise ConfigError("nnr entries must be positive")
        if self.nmax < 1:
            raise ConfigError("nmax must be >= 1")
        if self.mode not in MODE_ALIASES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        Thresholds(tuple(self.thresholds))
        return self

    def snr_grid(self) -> list[float]:
        if self.snr_points is not None:
            return sorted(float(v) for v in self.snr_points)
        start, stop, step = self.snr_db
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(count)]

    def digest(self) -> str:
        blob = json.dumps({k: v for k, v in asdict(self).items() if k != "out" and v is not None}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _parse_snr(text):
    """``"5"`` -> (5, 5, 1); ``"1:7:2"`` -> (1, 7, 2)."""
    if isinstance(text, (int, float)):
        return (float(text), float(text), 1.0)
    if isinstance(text, (list, tuple)):
        if len(text) != 3:
            raise ConfigError("snr_db range needs [start, stop, step]")
        return tuple(float(v) for v in text)
    parts = str(text).split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"cannot parse snr {text!r}") from exc
    if len(vals) == 1:
        return (vals[0], vals[0], 1.0)
    if len(vals) == 3:
        return tuple(vals)
    raise ConfigError(f"snr must be a value or start:stop:step, got {text!r}")


def _parse_list(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    text = str(text).strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse list {text!r}") from exc


def _thresholds(value) -> Thresholds:
    if isinstance(value, Thresholds):
        return value
    if isinstance(value, (list, tuple)):
        return Thresholds(tuple(float(v) for v in value))
    return parse_thresholds(str(value))


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float) and v == 0.0:
        return "0"
    return f"{float(v):.12g}"


def _write_csv(path, comment: str, header, rows):
    buf = io.StringIO()
    buf.write(f"# {comment}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def _comment(config_digest: str, mode: str) -> str:
    return f"config_hash={config_digest} mode={mode} tail_mass={TAIL_MASS:.3e}"


def _rate_row(snr, nnr, t: Thresholds, nmax, mode):
    params = snr_nnr_to_params(snr, nnr)
    report = soft_rate_lower_bound(params, t)
    base = optimal_block_length(params, nmax, mode)
    return report, [snr, nnr, report.soft_rate, base.rate_n1, base.best_rate, base.best_n]


RATE_HEADER = ["snr_db", "nnr", "rate_soft", "rate_hard_n1", "rate_hard_best", "best_block_len"]


def cmd_rate_sweep(cfg: SweepConfig, report_path: str | None = None) -> str:
    cfg.validate()
    mode = MODE_ALIASES[cfg.mode]
    t = _thresholds(cfg.thresholds)
    rows, reports = [], []
    for snr in cfg.snr_grid():
        for nnr in sorted(cfg.nnr):
            rep, row = _rate_row(snr, nnr, t, cfg.nmax, mode)
            rows.append(row)
            reports.append(dict(snr_db=snr, nnr=nnr, **rep.to_dict()))
    if report_path:
        with open(report_path, "w") as fh:
            json.dump(reports, fh, indent=1, sort_keys=True)
    return _write_csv(cfg.out, _comment(cfg.digest(), mode), RATE_HEADER, rows)


def cmd_compare(cfg: SweepConfig):
    """Soft-versus-hard rows at one SNR and the fraction of NNR points where soft wins."""
    cfg.validate()
    mode = MODE_ALIASES[cfg.mode]
    t = _thresholds(cfg.thresholds)
    snr = cfg.snr_db[0]
    rows = []
    for nnr in sorted(cfg.nnr):
        _, row = _rate_row(snr, nnr, t, cfg.nmax, mode)
        rows.append(row + [row[2] >= row[4] - 1e-9])
    wins = sum(r[-1] for r in rows)
    text = _write_csv(cfg.out, _comment(cfg.digest(), mode), RATE_HEADER + ["soft_ge_hard"], rows)
    fraction = wins / len(rows)
    return text, fraction, f"verdict: soft >= hard at {wins}/{len(rows)} NNR points (fraction={fraction:.6g})"


def cmd_simulate(n, snr_db, nnr, t: Thresholds, gamma, delta, trials, seed, out=None, decoder="ml"):
    params = snr_nnr_to_params(snr_db, nnr)
    if n < 1 or trials < 0:
        raise ConfigError("n must be >= 1 and trials >= 0")
    report = soft_rate_lower_bound(params, t)
    runs = []
    for k in range(trials):
        tr = run_protocol(n, params, t, gamma=gamma, delta=delta, seed=seed * 1_000_003 + k,
                          report=report, decoder=decoder)
        runs.append(tr)
    keyed = [r for r in runs if r.outcome == "ok"]
    summary = {"trials": trials}
    if runs:
        summary.update({
            "keyed_runs": len(keyed),
            "disagreements": sum(not r.agree for r in keyed),
            "error_rate": (sum(not r.agree for r in keyed) / len(keyed)) if keyed else 0.0,
            "kept_fraction": float(np.mean([(r.keep_x.sum() + r.keep_y.sum()) / n for r in runs])),
            "key_rate": float(np.mean([r.key_rate for r in runs])),
            "theory_rate": report.soft_rate,
        })
    log = {
        "config": {"n": n, "snr_db": snr_db, "nnr": nnr, "thresholds": list(t.a), "gamma": gamma,
                   "delta": delta, "trials": trials, "seed": seed, "decoder": decoder},
        "summary": summary,
        "runs": [r.to_dict() for r in runs],
    }
    text = json.dumps(log, sort_keys=True, indent=1)
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text + "\n")
    return summary, text


SECURITY_HEADER = ["n", "alpha", "delta_mean", "delta_stderr", "bound_rhs", "entropy_floor",
                   "exact_conditional_entropy"]


def cmd_security_check(n, snr_db, nnr, t: Thresholds, out_len, z_samples, f_samples, seed,
                       delta=0.05, alpha=None, gamma=0.1, bins=None, out=None):
    params = snr_nnr_to_params(snr_db, nnr)
    codes = None
    if bins is not None:
        codes = (SwCode(int(bins[0]), seed + 1), SwCode(int(bins[1]), seed + 2))
    est = estimate_security(n, params, t, out_len=out_len, codes=codes, z_samples=z_samples,
                            f_samples=f_samples, seed=seed, delta=delta, alpha=alpha, gamma=gamma)
    row = est.as_row()
    digest = hashlib.sha256(json.dumps([n, snr_db, nnr, list(t.a), out_len, z_samples, f_samples,
                                        seed, delta, alpha, gamma, bins]).encode()).hexdigest()[:16]
    text = _write_csv(out, _comment(digest, "exact"), SECURITY_HEADER, [[row[k] for k in SECURITY_HEADER]])
    verdict = "PASS" if est.lemma4_ok else "FAIL"
    return est, text, verdict


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with option values; flags override it")
    common.add_argument("--snr-db", dest="snr_db", help="value, start:stop:step or comma list, in dB")
    common.add_argument("--nnr", help="comma-separated noise-to-noise ratios")
    common.add_argument("--thresholds", help="comma-separated a_1,...,a_K (empty for K=0)")
    common.add_argument("--mode", choices=["exact", "paper-erfc"], help="BSC conversion formula")
    common.add_argument("--nmax", type=int, help="largest repetition block length")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output path (default stdout)")

    p = argparse.ArgumentParser(prog="gaussmaurer", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    rs = sub.add_parser("rate-sweep", parents=[common], help="soft and hard key rates over an SNR x NNR grid")
    rs.add_argument("--report-json", help="also write per-cell entropies and labels as JSON")
    sub.add_parser("compare", parents=[common], help="soft versus hard rates at one SNR")
    sim = sub.add_parser("simulate", parents=[common], help="Monte-Carlo protocol runs")
    sim.add_argument("--n", type=int)
    sim.add_argument("--gamma", type=float, help="bin-rate margin, bits per kept symbol")
    sim.add_argument("--delta", type=float, help="key-length slack, bits per symbol")
    sim.add_argument("--trials", type=int)
    sim.add_argument("--decoder", choices=["ml", "typicality"])
    sec = sub.add_parser("security-check", parents=[common], help="exact tiny-n leftover-hash check")
    sec.add_argument("--n", type=int)
    sec.add_argument("--out-len", dest="out_len", type=int)
    sec.add_argument("--z-samples", dest="z_samples", type=int)
    sec.add_argument("--f-samples", dest="f_samples", type=int)
    sec.add_argument("--delta", type=float)
    sec.add_argument("--alpha", type=float)
    sec.add_argument("--gamma", type=float)
    sec.add_argument("--bins", help="bin counts for Alice and Bob, e.g. 1,1")
    return p


DEFAULTS = {
    "rate-sweep": {"snr_db": "1:7:2", "nnr": "0.5,1,2,5,10", "thresholds": "0.3333333333333333,0.6666666666666666,1",
                   "mode": "exact", "nmax": 10, "seed": 0},
    "compare": {"snr_db": "5", "nnr": "0.5,1,2,5,10", "thresholds": "0.3333333333333333,0.6666666666666666,1",
                "mode": "exact", "nmax": 10, "seed": 0},
    "simulate": {"snr_db": "5", "nnr": "10", "thresholds": "0.3333333333333333,0.6666666666666666,1",
                 "n": 24, "gamma": 0.1, "delta": 0.01, "trials": 100, "seed": 0, "decoder": "ml"},
    "security-check": {"snr_db": "0", "nnr": "1", "thresholds": "1", "n": 2, "out_len": 1,
                       "z_samples": 1000, "f_samples": 100, "seed": 0, "delta": 0.05, "alpha": None,
                       "gamma": 0.1, "bins": None},
}


def _merge(args) -> dict:
    opts = dict(DEFAULTS[args.command])
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
        opts.update({k.replace("-", "_"): v for k, v in loaded.items()})
    for k, v in vars(args).items():
        if k not in ("command", "config") and v is not None:
            opts[k] = v
    return opts


def _sweep_config(o) -> SweepConfig:
    snr, points = o["snr_db"], None
    if isinstance(snr, str) and "," in snr:
        points = _parse_list(snr)
        snr = (min(points), max(points), 1.0) if points else (0.0, 0.0, 1.0)
    return SweepConfig(snr_db=_parse_snr(snr), nnr=_parse_list(o["nnr"]),
                       thresholds=list(_thresholds(o["thresholds"]).a), nmax=int(o["nmax"]),
                       mode=o["mode"], out=o.get("out"), seed=int(o.get("seed", 0)), snr_points=points)


def _single_snr(o) -> float:
    lo, hi, _ = _parse_snr(o["snr_db"])
    if lo != hi:
        raise ConfigError("this command takes a single SNR value")
    return lo


def _single_nnr(o) -> float:
    vals = _parse_list(o["nnr"])
    if len(vals) != 1:
        raise ConfigError("this command takes a single NNR value")
    return vals[0]


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        o = _merge(args)
        if args.command == "rate-sweep":
            cmd_rate_sweep(_sweep_config(o), o.get("report_json"))
        elif args.command == "compare":
            cfg = _sweep_config(o)
            if cfg.snr_db[0] != cfg.snr_db[1]:
                raise ConfigError("compare takes a single SNR value")
            _, _, verdict = cmd_compare(cfg)
            print(verdict, file=sys.stderr if cfg.out in (None, "-") else sys.stdout)
        elif args.command == "simulate":
            summary, text = cmd_simulate(int(o["n"]), _single_snr(o), _single_nnr(o),
                                         _thresholds(o["thresholds"]), float(o["gamma"]),
                                         float(o["delta"]), int(o["trials"]), int(o["seed"]),
                                         o.get("out"), o["decoder"])
            if o.get("out") in (None, "-"):
                print(text)
            else:
                print(json.dumps(summary, sort_keys=True))
        elif args.command == "security-check":
            bins = _parse_list(o["bins"]) if o.get("bins") not in (None, "") else None
            if bins is not None and len(bins) != 2:
                raise ConfigError("--bins takes two counts")
            alpha = None if o.get("alpha") is None else float(o["alpha"])
            est, _, verdict = cmd_security_check(
                int(o["n"]), _single_snr(o), _single_nnr(o), _thresholds(o["thresholds"]),
                int(o["out_len"]), int(o["z_samples"]), int(o["f_samples"]), int(o["seed"]),
                float(o["delta"]), alpha, float(o["gamma"]), bins, o.get("out"))
            margin = est.bound_rhs + 3 * est.delta_stderr - est.delta_mean
            print(f"verdict: {verdict} (margin={margin:.6g})",
                  file=sys.stderr if o.get("out") in (None, "-") else sys.stdout)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, ArithmeticError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
