"""Command-line front end.

Subcommands:

* ``simulate``  build a synthetic portfolio dataset and write it as CSV;
* ``value``     compute the valuation ladder, combination and beta sweep
                for a dataset;
* ``bid``       tabulate equilibrium bids across auction settings;
* ``report``    turn produced artifacts into plot-ready CSV series.

A JSON config file supplies defaults (sections ``simulate``, ``valuation``
and ``bid``); explicit flags override file values. Every report embeds the
resolved configuration. Exit codes: 0 success, 2 validation/usage error,
1 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

from . import reports
from .numerics import ConvergenceError
from .simulate import SeedRanges, PortfolioTimeSeries, build_portfolio_dataset, \
    dataset_params
from .valuation import ValuationParams


class ValidationFailure(Exception):
    """Bad user input: config, flags, or malformed artifacts."""


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise ValidationFailure(f"config file not found: {p}")
    try:
        with open(p, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationFailure(f"config {p} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ValidationFailure(f"config {p} must hold a JSON object")
    return cfg


def _seed_ranges(cfg: dict, args) -> SeedRanges:
    section = dict(cfg.get("simulate", {}))
    if "seed" in cfg and "seed" not in section:
        section["seed"] = cfg["seed"]
    for flag, key in (("seed", "seed"), ("securities", "n_securities"),
                      ("days", "n_days")):
        v = getattr(args, flag, None)
        if v is not None:
            section[key] = v
    valid = {f.name for f in dataclasses.fields(SeedRanges)}
    unknown = set(section) - valid
    if unknown:
        raise ValidationFailure(f"unknown simulate config keys: {sorted(unknown)}")
    section = {k: tuple(v) if isinstance(v, list) else v
               for k, v in section.items()}
    try:
        return SeedRanges(**section)
    except (TypeError, ValueError) as exc:
        raise ValidationFailure(f"bad simulate config: {exc}") from None


def _valuation_params(cfg: dict, args) -> ValuationParams:
    section = dict(cfg.get("valuation", {}))
    for flag, key in (("beta", "discount_beta"), ("cost", "transaction_cost"),
                      ("delta", "delta_override")):
        v = getattr(args, flag, None)
        if v is not None:
            section[key] = v
    if isinstance(section.get("window"), list):
        section["window"] = tuple(section["window"])
    try:
        return ValuationParams(**section)
    except (TypeError, ValueError) as exc:
        raise ValidationFailure(f"bad valuation config: {exc}") from None


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv_rows(path: Path, rows: list[dict]) -> None:
    if not rows:
        raise ValidationFailure(f"nothing to write to {path}")
    fieldnames = []
    for row in rows:
        for key in row:
            if key not in fieldnames:
                fieldnames.append(key)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    ranges = _seed_ranges(cfg, args)
    out = _out_dir(args)
    ts = build_portfolio_dataset(ranges)
    dataset_path = out / "dataset.csv"
    ts.to_csv(dataset_path)
    summary = reports.simulation_summary(dataset_params(ranges))
    _write_csv_rows(out / "simulation_summary.csv", summary)
    _write_json(out / "simulate.config.json",
                {"simulate": dataclasses.asdict(ranges)})
    print(f"dataset: {ts.n_securities} securities x {ts.n_days} days "
          f"-> {dataset_path}")
    print(f"{'parameter':<16} {'min':>12} {'mean':>12} {'max':>12}")
    for row in summary:
        print(f"{row['parameter']:<16} {row['min']:>12.4f} "
              f"{row['mean']:>12.4f} {row['max']:>12.4f}")
    return 0


def cmd_value(args) -> int:
    cfg = _load_config(args.config)
    params = _valuation_params(cfg, args)
    dataset = Path(args.dataset)
    if not dataset.exists():
        raise ValidationFailure(f"dataset not found: {dataset}")
    try:
        ts = PortfolioTimeSeries.from_csv(dataset)
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from None
    out = _out_dir(args)
    resolved = {"dataset": str(dataset),
                "valuation": dataclasses.asdict(params)}
    payload = reports.valuation_report(ts, params, resolved)
    _write_json(out / "valuation.json", payload)
    _write_csv_rows(out / "beta_sweep.csv", payload["beta_sweep"])
    daily_rows = [dict(day=t, **{name: payload["daily_series"][name][t]
                                 for name in payload["daily_series"]})
                  for t in range(ts.n_days)]
    _write_csv_rows(out / "valuation_daily.csv", daily_rows)
    if args.format == "csv":
        _write_csv_rows(out / "valuation.csv", [
            {"name": name, **fields}
            for name, fields in payload["valuations"].items()])
    print(f"pecking_order_ok: {payload['pecking_order_ok']}")
    for name, fields in payload["valuations"].items():
        print(f"{name:<16} {fields['basis_points']:>10.2f} bps")
    print(f"{'combined':<16} {payload['combined']['basis_points']:>10.2f} bps")
    return 0


def _bid_kwargs(cfg: dict, args) -> dict:
    section = dict(cfg.get("bid", {}))
    for flag in ("m", "omega", "reserve", "mu", "sigma", "alpha", "xi",
                 "signal"):
        v = getattr(args, flag, None)
        if v is not None:
            section[flag] = v
    if args.m_list is not None:
        section["m_list"] = args.m_list
    if isinstance(section.get("m_list"), list):
        section["m_list"] = tuple(section["m_list"])
    section.pop("x", None)
    return section


def cmd_bid(args) -> int:
    cfg = _load_config(args.config)
    if args.x is not None:
        x = args.x
    elif args.valuation is not None:
        path = Path(args.valuation)
        if not path.exists():
            raise ValidationFailure(f"valuation report not found: {path}")
        with open(path, encoding="utf-8") as fh:
            report = json.load(fh)
        try:
            x = report["combined"]["annualized_fraction"]
        except KeyError:
            raise ValidationFailure(
                f"{path} does not look like a valuation report") from None
    elif "x" in cfg.get("bid", {}):
        x = cfg["bid"]["x"]
    else:
        raise ValidationFailure("provide a valuation via --x or --valuation")
    if x <= 0:
        raise ValidationFailure(f"valuation must be positive, got {x}")
    kwargs = _bid_kwargs(cfg, args)
    try:
        payload = reports.bid_report(x, config={"bid": {"x": x, **kwargs}},
                                     **kwargs)
    except (TypeError, ValueError) as exc:
        raise ValidationFailure(f"bad bid parameters: {exc}") from None
    out = _out_dir(args)
    _write_json(out / "bids.json", payload)
    if args.format == "csv":
        _write_csv_rows(out / "bids.csv", payload["rows"])
    for row in payload["rows"]:
        bid = "below reserve" if row.get("note") == "below_reserve" else row["bid"]
        bid = "below screening" if row.get("note") == "below_screening" else bid
        print(f"{row['setting']:<28} m={row['m']:<4} x={row['x']:<10.6g} "
              f"bid={bid}")
    return 0


def cmd_report(args) -> int:
    if not args.artifacts:
        raise ValidationFailure("no artifacts given; pass dataset/valuation/"
                                "bid outputs produced by the other commands")
    out = _out_dir(args)
    missing = [a for a in args.artifacts if not Path(a).exists()]
    if missing:
        raise ValidationFailure(f"missing artifacts: {missing}")
    produced = []
    for artifact in map(Path, args.artifacts):
        if artifact.suffix == ".csv":
            ts = PortfolioTimeSeries.from_csv(artifact)
            params = ValuationParams()
            payload = reports.valuation_report(ts, params,
                                               {"dataset": str(artifact)})
            rows = [dict(day=t, **{n: payload["daily_series"][n][t]
                                   for n in payload["daily_series"]})
                    for t in range(ts.n_days)]
            _write_csv_rows(out / "valuation_daily_series.csv", rows)
            _write_csv_rows(out / "beta_sweep.csv", payload["beta_sweep"])
            produced += ["valuation_daily_series.csv", "beta_sweep.csv"]
        else:
            with open(artifact, encoding="utf-8") as fh:
                payload = json.load(fh)
            if "daily_series" in payload:
                n_days = len(next(iter(payload["daily_series"].values())))
                rows = [dict(day=t, **{n: payload["daily_series"][n][t]
                                       for n in payload["daily_series"]})
                        for t in range(n_days)]
                _write_csv_rows(out / "valuation_daily_series.csv", rows)
                _write_csv_rows(out / "beta_sweep.csv", payload["beta_sweep"])
                produced += ["valuation_daily_series.csv", "beta_sweep.csv"]
            elif "rows" in payload:
                x = payload["x"]
                bid_cfg = payload.get("config", {}).get("bid", {})
                table = reports.bid_vs_m_table(
                    x, omega=bid_cfg.get("omega", 1.0),
                    mu=bid_cfg.get("mu"), sigma=bid_cfg.get("sigma", 0.5))
                _write_csv_rows(out / "bid_vs_m.csv", table)
                curve = reports.bid_curve_table(
                    bid_cfg.get("m", 5), omega=bid_cfg.get("omega", 1.0),
                    reserve=bid_cfg.get("reserve", 0.0))
                _write_csv_rows(out / "bid_curve.csv", curve)
                produced += ["bid_vs_m.csv", "bid_curve.csv"]
            else:
                raise ValidationFailure(
                    f"unrecognized artifact {artifact}")
    for name in dict.fromkeys(produced):
        print(f"wrote {out / name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exclusives",
        description="Exclusive-auction valuation and bidding toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p_sim = sub.add_parser("simulate", help="generate a synthetic dataset")
    common(p_sim)
    p_sim.add_argument("--seed", type=int)
    p_sim.add_argument("--securities", type=int)
    p_sim.add_argument("--days", type=int)
    p_sim.set_defaults(fn=cmd_simulate)

    p_val = sub.add_parser("value", help="compute the valuation ladder")
    common(p_val)
    p_val.add_argument("--dataset", required=True)
    p_val.add_argument("--beta", type=float)
    p_val.add_argument("--cost", type=float)
    p_val.add_argument("--delta", type=float)
    p_val.set_defaults(fn=cmd_value)

    p_bid = sub.add_parser("bid", help="tabulate equilibrium bids")
    common(p_bid)
    p_bid.add_argument("--x", type=float, help="valuation as a fraction")
    p_bid.add_argument("--valuation", help="valuation.json to read x from")
    p_bid.add_argument("--m", type=int)
    p_bid.add_argument("--m-list", type=int, nargs="+")
    p_bid.add_argument("--omega", type=float)
    p_bid.add_argument("--reserve", type=float)
    p_bid.add_argument("--mu", type=float)
    p_bid.add_argument("--sigma", type=float)
    p_bid.add_argument("--alpha", type=float)
    p_bid.add_argument("--xi", type=float)
    p_bid.add_argument("--signal", type=float)
    p_bid.set_defaults(fn=cmd_bid)

    p_rep = sub.add_parser("report", help="emit plot-data CSV bundles")
    common(p_rep)
    p_rep.add_argument("artifacts", nargs="*")
    p_rep.set_defaults(fn=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ConvergenceError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
