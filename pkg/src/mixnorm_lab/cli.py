"""Command-line runner: invariant suites, audits, experiments, norms.

Subcommands
-----------
check-invariants   run the library's invariant suite, exit 0 iff all pass
audit SYMBOL       audit a multiplier expression (all three conditions)
experiment         boundedness/equivalence experiment on a bump ensemble
norm               space norms of a serialized or generated function

Reports are deterministic for a fixed config and seed: the JSON body carries
no timestamps (wall-clock time lives in the separate ``meta`` field, which is
excluded from the determinism contract).  Exit codes: 0 success, 1 check or
experiment failure, 2 usage/configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from .checks import run_invariant_suite
from .config import ConfigError, ExperimentConfig, load_config
from .ensembles import draw_bump_fields, realize
from .littlewood_paley import ResolutionError, TransitionProfile, build_family, max_resolved_level
from .mixed_grid import load_grid_function
from .multipliers import (
    EXPLORATORY,
    THEOREM_CERTIFIED,
    ConditionReport,
    MultiplierSpec,
    SingularSymbolError,
    admissible,
    boundedness_experiment,
    condition_constant,
    lifting_multiplier,
    smoothness_threshold,
)
from .spaces import (
    BESOV,
    GEN_SOBOLEV,
    SOBOLEV,
    TRIEBEL_LIZORKIN,
    SpaceParams,
    besov_norm,
    gen_sobolev_norm,
    sobolev_norm,
    tl_norm,
)
from .symbols import SymbolSyntaxError, parse_symbol

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _emit(report: dict, rows: list | None, args) -> None:
    """Write the JSON report (or CSV rows with --format csv) to --out/stdout."""
    if args.format == "csv" and rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf)
        for row in rows:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        body = dict(report)
        body["schema"] = SCHEMA_VERSION
        body = _jsonable(body)
        body["meta"] = {"timestamp": time.strftime("%Y-%m-%dT%H:%M:%S")}
        text = json.dumps(body, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _condition_report_dict(rep: ConditionReport) -> dict:
    by_level = {str(j): rep.by_level(j) for j in range(rep.j_max + 1)}
    return {
        "mode": rep.mode,
        "alpha": rep.alpha,
        "N": rep.smoothness,
        "t": None if rep.t is None else list(rep.t),
        "geometry": rep.geometry,
        "j_max": rep.j_max,
        "resolution": rep.resolution,
        "constant": rep.constant,
        "by_level": by_level,
    }


# ---------------------------------------------------------------------------
# shared setup
# ---------------------------------------------------------------------------

def _family_for(cfg: ExperimentConfig, dims=None, extents=None, J=None):
    dims = dims or cfg.dims
    extents = extents or cfg.extents
    freq_ext = tuple(math.pi * N / (2.0 * L) for N, L in zip(dims, extents))
    if J is None:
        J = cfg.J if cfg.J is not None else max_resolved_level(cfg.a, freq_ext)
    return build_family(cfg.a, J, dims, freq_ext,
                        profile=TransitionProfile(cfg.plateau, cfg.support))


def _ensemble_for(cfg: ExperimentConfig, fam, dims=None, extents=None, count=None):
    rng = np.random.default_rng(cfg.seed)
    dims = dims or cfg.dims
    extents = extents or cfg.extents
    fields = draw_bump_fields(rng, cfg.n, extents, count or cfg.count,
                              bumps=cfg.bumps, a=cfg.a, level=max(fam.J - 2, 0))
    return [realize(f, dims, extents, a=cfg.a, level=fam.J - 1) for f in fields]


def _space_params(cfg: ExperimentConfig) -> SpaceParams:
    return SpaceParams(s=cfg.s, p=cfg.p, q=cfg.q, a=cfg.a, kind=cfg.kind,
                       alpha=cfg.alpha)


def _symbol_from(cfg: ExperimentConfig, expression: str | None) -> MultiplierSpec:
    if expression is None or expression.strip() in ("", "lifting"):
        return lifting_multiplier(cfg.alpha, cfg.a, smoothness=cfg.smoothness)
    m = parse_symbol(expression, cfg.n, cfg.a, alpha=cfg.alpha,
                     smoothness=cfg.smoothness)
    return m


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_check_invariants(cfg: ExperimentConfig, args) -> int:
    checks = run_invariant_suite(cfg)
    passed = all(c["passed"] for c in checks)
    report = {
        "command": "check-invariants",
        "config": cfg.as_dict(),
        "checks": checks,
        "passed": passed,
    }
    rows = [["name", "passed"]] + [[c["name"], c["passed"]] for c in checks]
    _emit(report, rows, args)
    return 0 if passed else 1


def cmd_audit(cfg: ExperimentConfig, args) -> int:
    m = _symbol_from(cfg, args.symbol)
    reports = {}
    for mode in ("Linf", "L2", "Lmixed"):
        rep = condition_constant(
            m, mode, cfg.a, J_audit=cfg.j_max,
            t=cfg.t if mode == "Lmixed" else None,
            geometry=cfg.geometry, resolution=cfg.resolution, refine=cfg.refine,
        )
        reports[mode] = rep
    n_min = smoothness_threshold(cfg.p, cfg.q, cfg.t,
                                 cfg.kind if cfg.kind in (TRIEBEL_LIZORKIN, BESOV)
                                 else TRIEBEL_LIZORKIN)
    ok_t, _ = admissible(cfg.t)
    certified = (
        ok_t and reports["Lmixed"].finite() and m.smoothness >= n_min
    )
    report = {
        "command": "audit",
        "config": cfg.as_dict(),
        "symbol": m.name,
        "conditions": {k: _condition_report_dict(v) for k, v in reports.items()},
        "N_min": n_min,
        "gate": THEOREM_CERTIFIED if certified else EXPLORATORY,
    }
    rows = [["mode", "gamma", "j", "localized"]]
    for mode, rep in reports.items():
        for (gamma, j), v in sorted(rep.localized.items()):
            rows.append([mode, "".join(str(g) for g in gamma), j, repr(v)])
    _emit(report, rows, args)
    return 0


def cmd_experiment(cfg: ExperimentConfig, args) -> int:
    prm = _space_params(cfg)
    m = _symbol_from(cfg, getattr(args, "symbol", None))
    fam = _family_for(cfg)
    ensemble = _ensemble_for(cfg, fam)

    audit = condition_constant(
        m, "Lmixed", cfg.a, J_audit=cfg.j_max, t=cfg.t,
        geometry=cfg.geometry, resolution=cfg.resolution, refine=cfg.refine,
    )
    forward = boundedness_experiment(m, prm, fam, ensemble, certification=audit)

    # truncation sanity: flag members whose tail indicator exceeds 5%
    tail_flags = []
    if prm.kind in (TRIEBEL_LIZORKIN, BESOV):
        norm_fn = tl_norm if prm.kind == TRIEBEL_LIZORKIN else besov_norm
        src = prm.shifted(m.alpha) if hasattr(prm, "shifted") else prm
        for f in ensemble:
            value, tail = norm_fn(f, src, fam, return_tail=True)
            tail_flags.append(bool(value > 0 and tail > 0.05 * value))

    report = {
        "command": "experiment",
        "config": cfg.as_dict(),
        "symbol": m.name,
        "forward": forward.as_dict(),
        "tail_flags": tail_flags,
        "condition_by_level": {str(j): audit.by_level(j) for j in range(audit.j_max + 1)},
        "A_mixed": audit.constant,
    }

    if cfg.equivalence:
        m_inv = lifting_multiplier(-cfg.alpha, cfg.a, smoothness=cfg.smoothness) \
            if m.name.startswith("bracket(xi)^") else None
        if m_inv is not None:
            # two-sided run through the inverse lifting with orders swapped
            prm_down = SpaceParams(s=prm.s + cfg.alpha, p=prm.p, q=prm.q,
                                   a=prm.a, kind=prm.kind, alpha=-cfg.alpha)
            backward = boundedness_experiment(m_inv, prm_down, fam, ensemble)
            report["backward"] = backward.as_dict()

    if cfg.resolutions:
        stability = []
        for res in cfg.resolutions:
            dims = (int(res),) * cfg.n
            # pin J so the truncated norms are comparable across resolutions
            fam_r = _family_for(cfg, dims=dims, J=fam.J)
            ens_r = _ensemble_for(cfg, fam_r, dims=dims)
            rep_r = boundedness_experiment(m, prm, fam_r, ens_r)
            stability.append({"dims": list(dims), "sup_ratio": rep_r.sup_ratio})
        report["stability"] = stability

    rows = [["member", "ratio", "skipped"]]
    for i, (r, sk) in enumerate(zip(forward.ratios, forward.skipped)):
        rows.append([i, repr(r), sk])
    rows.append([])
    rows.append(["j", "localized_constant"])
    for j in range(audit.j_max + 1):
        rows.append([j, repr(audit.by_level(j))])
    _emit(report, rows, args)
    return 0


def cmd_norm(cfg: ExperimentConfig, args) -> int:
    if cfg.norm_input:
        try:
            f = load_grid_function(cfg.norm_input)
        except (ValueError, OSError) as exc:
            raise ConfigError(f"cannot load grid function {cfg.norm_input!r}: {exc}")
        fam = _family_for(cfg, dims=f.dims, extents=f.extents)
    else:
        fam = _family_for(cfg)
        f = _ensemble_for(cfg, fam, count=1)[0]

    entries = []
    for kind in cfg.norm_kinds:
        prm = SpaceParams(s=cfg.s, p=cfg.p, q=cfg.q, a=cfg.a, kind=kind,
                          alpha=cfg.alpha)
        tail = None
        if kind == TRIEBEL_LIZORKIN:
            value, tail = tl_norm(f, prm, fam, return_tail=True)
        elif kind == BESOV:
            value, tail = besov_norm(f, prm, fam, return_tail=True)
        elif kind == GEN_SOBOLEV:
            value = gen_sobolev_norm(f, cfg.s, cfg.p, cfg.a)
        elif kind == SOBOLEV:
            orders = [cfg.s / ak for ak in cfg.a]
            if any(abs(v - round(v)) > 1e-9 or round(v) < 0 for v in orders):
                raise ConfigError(
                    f"s={cfg.s} is not an integer multiple of every anisotropy entry; "
                    "classical-Sobolev norm refused"
                )
            value = sobolev_norm(f, [int(round(v)) for v in orders], cfg.p)
        else:
            raise ConfigError(f"unknown norm kind {kind!r}")
        entries.append({
            "kind": kind,
            "params": {"s": cfg.s, "p": list(cfg.p), "q": cfg.q, "a": list(cfg.a)},
            "value": value,
            "tail_indicator": tail,
        })

    report = {
        "command": "norm",
        "config": cfg.as_dict(),
        "norms": entries,
    }
    rows = [["kind", "value", "tail_indicator"]]
    rows += [[e["kind"], repr(e["value"]), e["tail_indicator"]] for e in entries]
    _emit(report, rows, args)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixnorm-lab",
        description="Anisotropic mixed-norm analysis: invariant checks, "
                    "multiplier audits, and boundedness experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="INI config file")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=None, help="override [run] seed")

    p_check = sub.add_parser("check-invariants", help="run the invariant suite")
    common(p_check)

    p_audit = sub.add_parser("audit", help="audit a multiplier symbol")
    p_audit.add_argument("symbol", help="expression, e.g. 'bracket(xi)^2' or '1'")
    common(p_audit)

    p_exp = sub.add_parser("experiment", help="boundedness/equivalence experiment")
    p_exp.add_argument("symbol", nargs="?", default=None,
                       help="optional expression; default: lifting bracket^alpha")
    common(p_exp)

    p_norm = sub.add_parser("norm", help="compute space norms")
    common(p_norm)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, seed_override=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "check-invariants":
            return cmd_check_invariants(cfg, args)
        if args.command == "audit":
            return cmd_audit(cfg, args)
        if args.command == "experiment":
            return cmd_experiment(cfg, args)
        if args.command == "norm":
            return cmd_norm(cfg, args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SymbolSyntaxError, SingularSymbolError) as exc:
        print(f"symbol error: {exc}", file=sys.stderr)
        return 1
    except (ResolutionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
