"""Command-line shell: classification, region reports, grid scans, directional
distribution sampling, separability runs with ensemble export, and reference
tables, with a resumable JSONL result cache.

Exit codes: 0 success, 2 malformed flags or values, 3 unwritable output,
4 corrupt cache (the message names the offending line).

Float formatting: CSV cells carry 17 significant digits; JSON numbers use the
shortest representation that round-trips the double exactly.  Output files
never contain timestamps, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import asdict, replace
from typing import Optional

import numpy as np

from .geometry import (
    classify,
    is_ppt,
    limit_triangle,
    region_triangle,
    triangle_area,
    area_fraction,
)
from .isostate import (
    FIDUCIAL_CAP,
    RELATIVE_RANK_BOUNDS,
    Point,
    edge_relative_rank_bounds,
    entropy,
    invariant_state,
    is_physical,
    purity,
    relative_rank,
    state_rank,
)
from .qrep import q_density, q_min, q_positive
from .separability import (
    SEPARABLE_THRESHOLD,
    PointRecord,
    SolverConfig,
    derive_seed,
    grid_axes,
    nearest_separable,
    scan_point,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNWRITABLE = 3
EXIT_CACHE = 4

CACHE_ENV = "ISOQUDIT_CACHE"

# Comparison baselines the reports print next to computed values.
REFERENCE_AREA_FRACTIONS = {16: 0.837}
REFERENCE_SEPARABLE_FRACTION = {16: 0.85}
REFERENCE_ENSEMBLE_TERMS = ((2, 50), (4, 100), (10, 300), (16, 600))
# Near-boundary separable points exercise realistically sized ensembles.
# (-0.3, -0.6) is NPT at two_s=2, so that row gets a point of its own.
ENSEMBLE_TABLE_POINTS = {
    2: Point(-0.125, -0.25),
    4: Point(-0.3, -0.6),
    10: Point(-0.3, -0.6),
    16: Point(-0.3, -0.6),
}

CSV_COLUMNS = ("two_s", "alpha", "beta", "physical", "ppt", "separable",
               "d_hs", "sigma", "classification", "seed")


def fnum(x: float) -> str:
    return format(float(x), ".17g")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fnum(value)
    return str(value)


def _emit_json(doc: dict, stream) -> None:
    stream.write(json.dumps(doc, indent=2))
    stream.write("\n")


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8"), True
    except OSError as exc:
        raise _Unwritable(f"cannot write {path}: {exc}") from exc


class _Unwritable(Exception):
    pass


class _CorruptCache(Exception):
    pass


# -- config file ---------------------------------------------------------

# key -> converter; keys may use dashes or underscores in the file
_CONFIG_KEYS = {
    "alpha": float,
    "beta": float,
    "two_s": int,
    "cap": int,
    "grid": int,
    "mode": str,
    "seed": int,
    "format": str,
    "samples": int,
    "threshold": float,
    "metric": str,
    "max_outer": int,
    "inner_restarts": int,
    "tol_converge": float,
    "prune_below": float,
    "reweight_every": int,
    "cap_terms": int,
    "budget_seconds": float,
    "out": str,
    "cache": str,
}


def _load_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{i}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{i}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_KEYS[key](val.strip())
        except ValueError as exc:
            raise ValueError(f"{path}:{i}: bad value for {key}: {exc}") from exc
    return values


def _merge(args: argparse.Namespace, parser_defaults: dict) -> argparse.Namespace:
    """Precedence: explicit flags > config file > built-in defaults."""
    if not getattr(args, "config", None):
        return args
    file_values = _load_config_file(args.config)
    for key, value in file_values.items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) == parser_defaults.get(key):
            setattr(args, key, value)
    return args


def _require(args, *names: str) -> Optional[str]:
    """Names of flags that are still unset after the config merge, if any.

    Mandatory values may come from flags or the config file, so their absence
    is only detectable here, not by the parser.
    """
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        return f"missing required value(s): {flags} (flag or config file)"
    return None


def _solver_config(args) -> SolverConfig:
    kwargs = {}
    for field in ("max_outer", "inner_restarts", "tol_converge", "prune_below",
                  "reweight_every", "cap_terms"):
        value = getattr(args, field, None)
        if value is not None:
            kwargs[field] = value
    kwargs["rng_seed"] = getattr(args, "seed", 0) or 0
    return SolverConfig(**kwargs)


# -- classify -------------------------------------------------------------

def cmd_classify(args) -> int:
    problem = _require(args, "alpha", "beta")
    if problem:
        return _fail_usage(problem)
    point = Point(args.alpha, args.beta)
    cap = args.cap
    c = classify(point, cap_two_s=cap)
    listing_top = args.two_s if args.two_s is not None else cap
    per_spin = []
    for t in range(2, listing_top + 1):
        phys = is_physical(t, point)
        per_spin.append({
            "two_s": t,
            "physical": phys,
            "ppt": is_ppt(t, point) if phys else None,
        })
    eval_two_s = args.two_s if args.two_s is not None else c.sigma
    detail = None
    if eval_two_s is not None and is_physical(eval_two_s, point):
        detail = {
            "two_s": eval_two_s,
            "rank": state_rank(eval_two_s, point),
            "relative_rank": relative_rank(eval_two_s, point),
            "purity": purity(eval_two_s, point),
            "entropy": entropy(eval_two_s, point),
        }
    doc = {
        "alpha": point.alpha,
        "beta": point.beta,
        "classification": c.kind.value,
        "sigma_two_s": c.sigma,
        "sigma_s": c.sigma / 2 if c.sigma is not None else None,
        "ppt_at_sigma": c.ppt_at_sigma,
        "q_positive": q_positive(point),
        "state": detail,
        "per_spin": per_spin,
    }
    _emit_json(doc, sys.stdout)
    return EXIT_OK


# -- region ---------------------------------------------------------------

def cmd_region(args) -> int:
    if args.limit == (args.two_s is not None):
        return _fail_usage("pass exactly one of --limit and --two-s")
    tri = limit_triangle() if args.limit else region_triangle(args.two_s)
    doc = {
        "two_s": tri.two_s,
        "limit": args.limit,
        "vertices": [[v.alpha, v.beta] for v in tri.vertices],
        "edges": [list(e) for e in tri.edges],
        "area": triangle_area(tri),
        "area_fraction": 1.0 if args.limit else area_fraction(args.two_s),
    }
    if not args.limit and args.two_s in REFERENCE_AREA_FRACTIONS:
        doc["reference_area_fraction"] = REFERENCE_AREA_FRACTIONS[args.two_s]
    _emit_json(doc, sys.stdout)
    return EXIT_OK


# -- qfunc ----------------------------------------------------------------

def cmd_qfunc(args) -> int:
    problem = _require(args, "alpha", "beta", "samples")
    if problem:
        return _fail_usage(problem)
    if args.samples < 2:
        return _fail_usage(f"--samples must be at least 2, got {args.samples}")
    point = Point(args.alpha, args.beta)
    thetas = np.linspace(0.0, math.pi, args.samples)
    values = q_density(point, thetas)
    header = (f"# isoqudit qfunc alpha={fnum(point.alpha)} beta={fnum(point.beta)} "
              f"samples={args.samples} q_positive={_cell(q_positive(point))} "
              f"q_min={fnum(q_min(point))}")
    try:
        stream, owned = _open_out(args.out)
    except _Unwritable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNWRITABLE
    try:
        stream.write(header + "\n")
        stream.write("theta,f\n")
        for theta, f in zip(thetas, np.atleast_1d(values)):
            stream.write(f"{fnum(theta)},{fnum(f)}\n")
    finally:
        if owned:
            stream.close()
    return EXIT_OK


# -- scan -----------------------------------------------------------------

def _scan_config_hash(two_s, mode, threshold, metric, cfg: SolverConfig) -> str:
    payload = json.dumps({
        "two_s": two_s,
        "mode": mode,
        "threshold": threshold,
        "metric": metric,
        "solver": cfg.describe(),
    }, sort_keys=True)
    return hashlib.blake2b(payload.encode(), digest_size=8).hexdigest()


def _record_key(two_s: int, alpha: float, beta: float, config_hash: str) -> tuple:
    return (int(two_s), fnum(alpha), fnum(beta), config_hash)


def _load_cache(path: str, config_hash: str) -> dict:
    # last writer wins on duplicate keys; other configs' records are kept but unused
    records = {}
    if not os.path.exists(path):
        return records
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
                key = _record_key(entry["two_s"], entry["alpha"], entry["beta"],
                                  entry["config_hash"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise _CorruptCache(f"corrupt cache {path} at line {i}: {exc}") from exc
            if entry["config_hash"] == config_hash:
                records[key] = entry
    return records


def _record_to_entry(rec: PointRecord, config_hash: str) -> dict:
    entry = asdict(rec)
    entry["config_hash"] = config_hash
    return entry


def _entry_to_record(entry: dict) -> PointRecord:
    fields = {k: entry[k] for k in PointRecord.__dataclass_fields__}
    return PointRecord(**fields)


def _scan_summary(records: list) -> dict:
    n_physical = sum(r.physical for r in records)
    n_ppt = sum(bool(r.ppt) for r in records)
    n_separable = sum(r.separable is True for r in records)
    n_entangled = sum(r.physical and r.separable is False for r in records)
    n_indeterminate = sum(r.physical and bool(r.ppt) and r.separable is None
                          for r in records)
    return {
        "points": len(records),
        "physical": n_physical,
        "ppt": n_ppt,
        "separable": n_separable,
        "entangled": n_entangled,
        "indeterminate": n_indeterminate,
        "fraction_ppt": n_ppt / n_physical if n_physical else None,
        "fraction_separable": n_separable / n_physical if n_physical else None,
        "fraction_indeterminate": n_indeterminate / n_physical if n_physical else None,
    }


def cmd_scan(args) -> int:
    problem = _require(args, "two_s", "grid", "out")
    if problem:
        return _fail_usage(problem)
    if args.grid < 2:
        return _fail_usage(f"--grid must be at least 2, got {args.grid}")
    if args.mode not in ("ppt", "separability", "classify"):
        return _fail_usage(f"--mode must be ppt, separability or classify, got {args.mode!r}")
    if args.format not in ("csv", "json"):
        return _fail_usage(f"--format must be csv or json, got {args.format!r}")
    cfg = _solver_config(args)
    config_hash = _scan_config_hash(args.two_s, args.mode, args.threshold,
                                    args.metric, cfg)
    cache_path = args.cache or os.environ.get(CACHE_ENV) or None

    cached = {}
    if cache_path:
        try:
            cached = _load_cache(cache_path, config_hash)
        except _CorruptCache as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CACHE

    alphas, betas = grid_axes(args.two_s, args.grid)
    records = []
    fresh = []
    for alpha in alphas:
        for beta in betas:
            key = _record_key(args.two_s, float(alpha), float(beta), config_hash)
            if key in cached:
                records.append(_entry_to_record(cached[key]))
                continue
            rec = scan_point(args.two_s, Point(float(alpha), float(beta)),
                             args.mode, cfg, args.threshold, args.metric)
            records.append(rec)
            fresh.append(rec)

    if cache_path and fresh:
        try:
            with open(cache_path, "a", encoding="utf-8") as fh:
                for rec in fresh:
                    fh.write(json.dumps(_record_to_entry(rec, config_hash)) + "\n")
        except OSError as exc:
            print(f"error: cannot write cache {cache_path}: {exc}", file=sys.stderr)
            return EXIT_UNWRITABLE

    meta = {
        "two_s": args.two_s,
        "grid": args.grid,
        "mode": args.mode,
        "seed": cfg.rng_seed,
        "threshold": args.threshold,
        "metric": args.metric,
        "alpha_range": [float(alphas[0]), float(alphas[-1])],
        "beta_range": [float(betas[0]), float(betas[-1])],
        "config_hash": config_hash,
    }
    try:
        stream, owned = _open_out(args.out)
    except _Unwritable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNWRITABLE
    try:
        if args.format == "csv":
            stream.write(f"# isoqudit scan two_s={meta['two_s']} grid={meta['grid']} "
                         f"mode={meta['mode']} seed={meta['seed']} "
                         f"threshold={fnum(meta['threshold'])} metric={meta['metric']}\n")
            stream.write(f"# alpha_range=[{fnum(meta['alpha_range'][0])},"
                         f"{fnum(meta['alpha_range'][1])}] "
                         f"beta_range=[{fnum(meta['beta_range'][0])},"
                         f"{fnum(meta['beta_range'][1])}] "
                         f"config_hash={meta['config_hash']}\n")
            stream.write(",".join(CSV_COLUMNS) + "\n")
            for rec in records:
                row = [_cell(getattr(rec, col)) for col in CSV_COLUMNS]
                stream.write(",".join(row) + "\n")
        else:
            _emit_json({"meta": meta, "records": [asdict(r) for r in records]}, stream)
    finally:
        if owned:
            stream.close()

    summary = _scan_summary(records)
    summary["cached_points"] = len(records) - len(fresh)
    print(json.dumps({"scan": meta, "summary": summary}, indent=2))
    return EXIT_OK


# -- separability ---------------------------------------------------------

def _complex_pairs(rows: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in rows]


def cmd_separability(args) -> int:
    problem = _require(args, "two_s", "alpha", "beta")
    if problem:
        return _fail_usage(problem)
    point = Point(args.alpha, args.beta)
    if not is_physical(args.two_s, point):
        return _fail_usage(
            f"two_s={args.two_s}, point=({args.alpha}, {args.beta}) is not a physical state")
    base = _solver_config(args)
    seed = derive_seed(base.rng_seed, args.two_s, point.alpha, point.beta)
    cfg = replace(base, rng_seed=seed)
    result = nearest_separable(invariant_state(args.two_s, point), cfg)
    d = result.d_hs if args.metric == "hs" else result.d_trace
    ppt = is_ppt(args.two_s, point)
    separable: Optional[bool]
    if not ppt:
        separable = False
    elif d <= args.threshold:
        separable = True
    elif result.converged:
        separable = False
    else:
        separable = None
    doc = {
        "two_s": args.two_s,
        "alpha": point.alpha,
        "beta": point.beta,
        "d_hs": result.d_hs,
        "d_trace": result.d_trace,
        "ppt": ppt,
        "separable": separable,
        "threshold": args.threshold,
        "metric": args.metric,
        "iterations": result.iterations,
        "converged": result.converged,
        "weights": [float(w) for w in result.ensemble.weights],
        "factors_a": _complex_pairs(result.ensemble.factors_a),
        "factors_b": _complex_pairs(result.ensemble.factors_b),
        "config": cfg.describe(),
        "seed": seed,
    }
    try:
        stream, owned = _open_out(args.out)
    except _Unwritable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNWRITABLE
    try:
        _emit_json(doc, stream)
    finally:
        if owned:
            stream.close()
    return EXIT_OK


# -- tables ---------------------------------------------------------------

def cmd_tables(args) -> int:
    bounds_rows = []
    for t in range(2, 17, 2):
        lo, hi = edge_relative_rank_bounds(t)
        bounds_rows.append({"two_s": t, "s": t / 2, "lower": lo, "upper": hi})
    ensembles = []
    incomplete = False
    start = time.monotonic()
    cfg = _solver_config(args)
    for t, reference in REFERENCE_ENSEMBLE_TERMS:
        if args.budget_seconds is not None and time.monotonic() - start >= args.budget_seconds:
            ensembles.append({"two_s": t, "dims": [3, t + 1],
                              "reference_terms": reference, "complete": False})
            incomplete = True
            continue
        point = ENSEMBLE_TABLE_POINTS[t]
        seed = derive_seed(cfg.rng_seed, t, point.alpha, point.beta)
        result = nearest_separable(invariant_state(t, point), replace(cfg, rng_seed=seed))
        terms = len(result.ensemble)
        ensembles.append({
            "two_s": t,
            "dims": [3, t + 1],
            "point": [point.alpha, point.beta],
            "terms": terms,
            "reference_terms": reference,
            "within_factor_10": bool(reference / 10 <= terms <= reference * 10),
            "d_hs": result.d_hs,
            "converged": result.converged,
            "complete": True,
        })
    doc = {
        "edge_relative_rank_bounds": bounds_rows,
        "universal_relative_rank_bounds": {"lower": RELATIVE_RANK_BOUNDS[0],
                                           "upper": RELATIVE_RANK_BOUNDS[1]},
        "ensemble_sizes": ensembles,
        "incomplete": incomplete,
    }
    _emit_json(doc, sys.stdout)
    return EXIT_OK


# -- parser ---------------------------------------------------------------

def _add_solver_flags(sub) -> None:
    sub.add_argument("--seed", type=int, default=0, help="master RNG seed")
    sub.add_argument("--threshold", type=float, default=SEPARABLE_THRESHOLD,
                     help="separability distance threshold")
    sub.add_argument("--metric", choices=("hs", "trace"), default="hs")
    sub.add_argument("--max-outer", dest="max_outer", type=int, default=None)
    sub.add_argument("--inner-restarts", dest="inner_restarts", type=int, default=None)
    sub.add_argument("--tol-converge", dest="tol_converge", type=float, default=None)
    sub.add_argument("--prune-below", dest="prune_below", type=float, default=None)
    sub.add_argument("--reweight-every", dest="reweight_every", type=int, default=None)
    sub.add_argument("--cap-terms", dest="cap_terms", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoqudit",
        description="Rotation-invariant 3xN bipartite states: classification, "
                    "geometry, scans, and separability certificates.")
    subs = parser.add_subparsers(dest="command", required=True)

    # mandatory values are checked after the config-file merge, so every flag
    # is optional to the parser itself
    p = subs.add_parser("classify", help="classify a parameter point")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--two-s", dest="two_s", type=int, default=None)
    p.add_argument("--cap", type=int, default=FIDUCIAL_CAP,
                   help="largest two_s scanned for the fiducial spin")
    p.add_argument("--config", default=None, help="key=value config file")
    p.set_defaults(func=cmd_classify)

    p = subs.add_parser("region", help="physical triangle for a spin, or the limit")
    p.add_argument("--two-s", dest="two_s", type=int, default=None)
    p.add_argument("--limit", action="store_true")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_region)

    p = subs.add_parser("scan", help="grid scan over the bounding box of a region")
    p.add_argument("--two-s", dest="two_s", type=int, default=None)
    p.add_argument("--grid", type=int, default=None, help="points per axis")
    p.add_argument("--mode", choices=("ppt", "separability", "classify"),
                   default="separability")
    p.add_argument("--out", default=None, help="output file path")
    p.add_argument("--cache", default=None,
                   help=f"JSONL cache path (default ${CACHE_ENV})")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", default=None)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_scan)

    p = subs.add_parser("qfunc", help="sample the directional distribution")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_qfunc)

    p = subs.add_parser("separability",
                        help="nearest-separable search with ensemble export")
    p.add_argument("--two-s", dest="two_s", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--config", default=None)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_separability)

    p = subs.add_parser("tables", help="rank-bound tables and ensemble sizes")
    p.add_argument("--budget-seconds", dest="budget_seconds", type=float, default=None)
    p.add_argument("--config", default=None)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_tables)

    return parser


_PARSER_DEFAULTS = {
    "two_s": None, "cap": FIDUCIAL_CAP, "grid": None, "mode": "separability",
    "out": None, "cache": None, "format": "csv", "samples": None,
    "seed": 0, "threshold": SEPARABLE_THRESHOLD, "metric": "hs",
    "max_outer": None, "inner_restarts": None, "tol_converge": None,
    "prune_below": None, "reweight_every": None, "cap_terms": None,
    "budget_seconds": None, "alpha": None, "beta": None, "limit": False,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge(args, _PARSER_DEFAULTS)
    except ValueError as exc:
        return _fail_usage(str(exc))
    try:
        return args.func(args)
    except ValueError as exc:
        return _fail_usage(str(exc))


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
