"""Command-line frontend: ``bounds``, ``pair`` and ``simulate``.

Exit codes: 0 on success, 2 on usage, configuration or domain errors.
SINRs in every file are dB; rates are bits/s/Hz.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .bounds import feasible_region
from .errors import ConfigError, PairLabError
from .netsim import SimConfig, run_experiment, normalize_algorithms
from .pairing import SplitPolicy, evaluate_plan, run_algorithm, sort_users
from .rates import DEFAULT_DR_TABLE, DrTable, UserChannel, db_to_linear, linear_to_db
from .sweeps import SWEEP_COLUMNS, alpha_sweep, beta_sweep

log = logging.getLogger("noma_pairlab")

TOOL = "noma-pairlab"
USERS_COLUMNS = ("n_users", "algorithm", "mean_asr", "std_asr", "realizations", "seed")
BOUNDS_FIELDS = (
    "gamma_s_db", "gamma_w_db", "alpha_s", "beta",
    "alpha_upper", "alpha_lower_positivity", "alpha_lower_strong",
    "beta_upper_star", "beta_upper_at_alpha", "msd", "pairable",
)


class UsageError(PairLabError):
    pass


# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class RunConfig:
    """Everything ``simulate`` reads from a config file."""

    sim: SimConfig
    users_per_bs: tuple = (8, 16, 32)  # empty -> PPP users over the whole network
    sweeps: tuple = ("users", "alpha", "beta")
    algorithms: tuple = ("aup", "nf", "ucgd", "oma")
    pair_gamma_s_db: float = 10.48
    pair_gamma_w_db: float = 4.69
    sweep_alpha: float = 0.32  # fixed split for the beta sweep
    sweep_beta: float = 0.02  # fixed residual for the alpha sweep
    alpha_points: int = 199
    beta_points: int = 201


def _split_list(text):
    return [t.strip() for t in text.replace(";", ",").split(",") if t.strip()]


def parse_dr_table(text: str) -> DrTable:
    """``thr_db:rate, thr_db:rate, ...``"""
    try:
        entries = [tuple(float(x) for x in item.split(":")) for item in _split_list(text)]
    except ValueError:
        raise ConfigError(f"malformed dr_table {text!r}") from None
    if any(len(e) != 2 for e in entries):
        raise ConfigError(f"malformed dr_table {text!r}")
    return DrTable.from_db(entries)


def _num(key, raw, kind):
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind.__name__}") from None


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def parse_config_text(text: str) -> RunConfig:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",))
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    raw = dict(parser["run"])

    sim_kw, run_kw = {}, {}
    sim_types = {f.name: f.type for f in fields(SimConfig)}
    for key, value in raw.items():
        if key == "split_policy":
            sim_kw[key] = SplitPolicy.parse(value)
        elif key == "dr_table":
            sim_kw[key] = parse_dr_table(value)
        elif key == "rate_model":
            sim_kw[key] = value.strip().lower()
        elif key == "redraw_geometry":
            if value.strip().lower() not in _BOOL:
                raise ConfigError(f"redraw_geometry: expected a boolean, got {value!r}")
            sim_kw[key] = _BOOL[value.strip().lower()]
        elif key in ("realizations", "seed"):
            sim_kw[key] = _num(key, value, int)
        elif key == "users_per_bs":
            run_kw[key] = tuple(_num(key, v, int) for v in _split_list(value))
        elif key in ("sweeps", "algorithms"):
            run_kw[key] = tuple(v.lower() for v in _split_list(value))
        elif key in ("alpha_points", "beta_points"):
            run_kw[key] = _num(key, value, int)
        elif key in ("pair_gamma_s_db", "pair_gamma_w_db", "sweep_alpha", "sweep_beta"):
            run_kw[key] = _num(key, value, float)
        elif key in sim_types:
            sim_kw[key] = _num(key, value, float)
        else:
            raise ConfigError(f"unknown config key {key!r}")

    cfg = RunConfig(sim=SimConfig(**sim_kw), **run_kw)
    validate_run_config(cfg)
    return cfg


def validate_run_config(cfg: RunConfig):
    cfg.sim.validate()
    bad = set(cfg.sweeps) - {"users", "alpha", "beta"}
    if bad:
        raise ConfigError(f"unknown sweeps {sorted(bad)}")
    if any(n <= 0 for n in cfg.users_per_bs):
        raise ConfigError("users_per_bs entries must be positive")
    if cfg.pair_gamma_s_db < cfg.pair_gamma_w_db:
        raise ConfigError("pair_gamma_s_db must be >= pair_gamma_w_db")
    if not 0 < cfg.sweep_alpha < 1 or not 0 <= cfg.sweep_beta <= 1:
        raise ConfigError("sweep_alpha must lie in (0, 1) and sweep_beta in [0, 1]")
    if cfg.alpha_points < 2 or cfg.beta_points < 2:
        raise ConfigError("sweeps need at least 2 points")
    normalize_algorithms(cfg.algorithms)


def resolved_config(cfg: RunConfig) -> dict:
    sim = {f.name: getattr(cfg.sim, f.name) for f in fields(SimConfig)}
    sim["split_policy"] = str(cfg.sim.split_policy)
    sim["dr_table"] = [[float(linear_to_db(t)), r] for t, r in zip(cfg.sim.dr_table.thresholds, cfg.sim.dr_table.rates)]
    sim.pop("users_per_bs")
    out = {f.name: getattr(cfg, f.name) for f in fields(RunConfig) if f.name != "sim"}
    out = {k: list(v) if isinstance(v, tuple) else v for k, v in out.items()}
    return {**sim, **out}


def manifest(cfg: RunConfig, files: Sequence[str]) -> dict:
    return {
        "tool": TOOL,
        "version": __version__,
        "seed": cfg.sim.seed,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "units": {"sinr": "dB", "rate": "bits/s/Hz"},
        "config": resolved_config(cfg),
        "files": list(files),
    }


# ---------------------------------------------------------------- users file


def read_users(path) -> List[UserChannel]:
    """``user_id,gamma_db`` per line; ``#`` comments and blank lines ignored."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read users file: {exc}") from None
    users, seen = [], set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2 or not parts[0]:
            raise ConfigError(f"{path}:{lineno}: expected 'user_id,gamma_db', got {line!r}")
        try:
            g_db = float(parts[1])
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: bad SINR {parts[1]!r}") from None
        if not np.isfinite(g_db):
            raise ConfigError(f"{path}:{lineno}: SINR must be finite")
        if parts[0] in seen:
            raise ConfigError(f"{path}:{lineno}: duplicate user id {parts[0]!r}")
        seen.add(parts[0])
        users.append(UserChannel.from_db(parts[0], g_db))
    return users


# ---------------------------------------------------------------- output


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return str(x)


def _csv(rows, header, comment=None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def bounds_report(gamma_s, gamma_w, alpha_s=None, beta=0.0) -> dict:
    region = feasible_region(gamma_s, gamma_w, alpha_s, beta)
    d = region.as_dict()
    d["gamma_s_db"] = float(linear_to_db(gamma_s))
    d["gamma_w_db"] = float(linear_to_db(gamma_w))
    return {k: d[k] for k in BOUNDS_FIELDS}


def plan_report(plan, report, algorithm, beta, policy) -> dict:
    return {
        "algorithm": algorithm,
        "beta": beta,
        "rate_model": report.rate_model,
        "split_policy": str(policy),
        "pairs": [
            {
                "weak": p.weak.user_id,
                "strong": p.strong.user_id,
                "gamma_weak_db": p.weak.gamma_db,
                "gamma_strong_db": p.strong.gamma_db,
                "alpha_s": p.split.alpha_s,
                "rate_weak": report.rates[p.weak.user_id],
                "rate_strong": report.rates[p.strong.user_id],
                "oma_rate_weak": report.oma_rates[p.weak.user_id],
                "oma_rate_strong": report.oma_rates[p.strong.user_id],
            }
            for p in plan.pairs
        ],
        "singles": [
            {"user": u.user_id, "gamma_db": u.gamma_db, "rate": report.rates[u.user_id]}
            for u in plan.singles
        ],
        "total_rate": report.total,
        "total_oma_rate": report.total_oma,
    }


def plan_csv(plan, report) -> str:
    rows = []
    for p in plan.pairs:
        for me, other, role in ((p.weak, p.strong, "weak"), (p.strong, p.weak, "strong")):
            rows.append((me.user_id, me.gamma_db, role, other.user_id, p.split.alpha_s,
                         report.rates[me.user_id], report.oma_rates[me.user_id]))
    for u in plan.singles:
        rows.append((u.user_id, u.gamma_db, "oma", "", None, report.rates[u.user_id], report.oma_rates[u.user_id]))
    rows.append(("TOTAL", None, "total", "", None, report.total, report.total_oma))
    return _csv(rows, ("user_id", "gamma_db", "role", "partner", "alpha_s", "rate", "oma_rate"),
                comment="gamma in dB; rates in bits/s/Hz")


# ---------------------------------------------------------------- commands


def _gamma(args, which):
    lin = getattr(args, f"gamma_{which}_linear")
    if lin is not None:
        return lin
    return float(db_to_linear(getattr(args, f"gamma_{which}_db")))


def cmd_bounds(args) -> int:
    rep = bounds_report(_gamma(args, "s"), _gamma(args, "w"), args.alpha, args.beta)
    if args.format == "json":
        print(json.dumps(rep, indent=2))
    else:
        sys.stdout.write(_csv([[rep[k] for k in BOUNDS_FIELDS]], BOUNDS_FIELDS))
    return 0


def cmd_pair(args) -> int:
    users = read_users(args.input)
    policy = SplitPolicy.parse(args.split)
    plan = run_algorithm(args.algorithm, users, args.beta, policy)
    report = evaluate_plan(plan, args.beta, args.rate_model)
    if args.format == "json":
        print(json.dumps(plan_report(plan, report, args.algorithm, args.beta, policy), indent=2))
    else:
        sys.stdout.write(plan_csv(plan, report))
    return 0


def users_sweep_rows(cfg: RunConfig, algorithms) -> list:
    rows = []
    counts = cfg.users_per_bs or (None,)
    for n in counts:
        stats = run_experiment(replace(cfg.sim, users_per_bs=n), algorithms)
        for alg in algorithms:
            s = stats[alg]
            n_col = n if n is not None else round(s.mean_users, 6)
            rows.append((n_col, alg, s.mean_asr, s.std_asr, s.realizations, s.seed))
    return rows


def link_sweep_rows(cfg: RunConfig, var: str) -> list:
    gs, gw = db_to_linear(cfg.pair_gamma_s_db), db_to_linear(cfg.pair_gamma_w_db)
    sim = cfg.sim
    if var == "alpha":
        grid = np.linspace(0.0, 1.0, cfg.alpha_points + 2)[1:-1]
        rows = alpha_sweep(gs, gw, cfg.sweep_beta, grid, sim.rate_model, sim.dr_table)
    else:
        grid = np.linspace(0.0, 1.0, cfg.beta_points)
        rows = beta_sweep(gs, gw, cfg.sweep_alpha, grid, sim.rate_model, sim.dr_table)
    return [r.as_tuple() for r in rows]


SWEEP_FILES = {"users": "asr_vs_users.csv", "alpha": "alpha_sweep.csv", "beta": "beta_sweep.csv"}


def simulate(cfg: RunConfig, out_dir, algorithms=None) -> List[Path]:
    algs = normalize_algorithms(algorithms if algorithms is not None else cfg.algorithms)
    cfg = replace(cfg, algorithms=tuple(algs))
    validate_run_config(cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = [SWEEP_FILES[s] for s in cfg.sweeps]
    # the manifest goes first so no CSV ever exists without one
    (out / "manifest.json").write_text(json.dumps(manifest(cfg, names), indent=2) + "\n")
    written = [out / "manifest.json"]
    for sweep in cfg.sweeps:
        if sweep == "users":
            text = _csv(users_sweep_rows(cfg, algs), USERS_COLUMNS, comment="mean_asr/std_asr in bits/s/Hz")
        else:
            text = _csv(link_sweep_rows(cfg, sweep), SWEEP_COLUMNS,
                        comment=f"gamma_s={cfg.pair_gamma_s_db} dB gamma_w={cfg.pair_gamma_w_db} dB; rates in bits/s/Hz")
        path = out / SWEEP_FILES[sweep]
        path.write_text(text)
        written.append(path)
        log.info("wrote %s", path)
    return written


def cmd_simulate(args) -> int:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    cfg = parse_config_text(text)
    algs = None
    if args.algorithms is not None:
        algs = _split_list(args.algorithms)
    for path in simulate(cfg, args.out, algs):
        print(path)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=TOOL, description="Downlink NOMA pairing under imperfect SIC.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="power-split and SIC bounds for one user pair")
    for which, name in (("s", "strong"), ("w", "weak")):
        g = b.add_mutually_exclusive_group(required=True)
        g.add_argument(f"--gamma-{which}-db", type=float, help=f"{name} user OMA SINR in dB")
        g.add_argument(f"--gamma-{which}-linear", type=float, help=f"{name} user OMA SINR, linear")
    b.add_argument("--alpha", type=float, default=None, help="strong-user power fraction")
    b.add_argument("--beta", type=float, default=0.0, help="SIC residual fraction")
    b.add_argument("--format", choices=("json", "csv"), default="json")
    b.set_defaults(func=cmd_bounds)

    q = sub.add_parser("pair", help="pair the users of one cell and report rates")
    q.add_argument("--input", required=True, help="users file, one 'user_id,gamma_db' per line")
    q.add_argument("--beta", type=float, default=0.0)
    q.add_argument("--algorithm", choices=("aup", "nf", "ucgd", "oma"), default="aup")
    q.add_argument("--split", default="grid:101", help="'midpoint' or 'grid:<n>'")
    q.add_argument("--rate-model", choices=("lr", "dr"), default="lr")
    q.add_argument("--format", choices=("json", "csv"), default="json")
    q.set_defaults(func=cmd_pair)

    s = sub.add_parser("simulate", help="Monte-Carlo network experiment and link sweeps")
    s.add_argument("--config", required=True, help="flat 'key = value' config file")
    s.add_argument("--algorithms", default=None, help="comma list from aup,nf,ucgd,oma")
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PairLabError as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
