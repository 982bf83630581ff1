"""Config-driven invariant suite: every check returns a machine-readable row.

The suite re-verifies, at desk scale, the inequalities and identities the
library is built on: dilation scaling of the quasi-norm, exactness of the
discrete mixed Hoelder inequality, the normalized Hausdorff-Young bound,
the partition of unity of the Littlewood-Paley family, monotonicity of the
probability-normalized shell norms, agreement of the two maximal kernels,
and transform roundtrip/Plancherel identities.
"""

from __future__ import annotations

import math

import numpy as np

from .anisotropy import aniso_dilate, aniso_norm
from .config import ExperimentConfig
from .ensembles import draw_bump_fields, realize
from .littlewood_paley import TransitionProfile, build_family, partition_residual
from .maximal import MaximalParams, _fiber_max_brute, _fiber_max_fast, iterated_max
from .mixed_grid import (
    GridFunction,
    dft_forward,
    dft_inverse,
    hausdorff_young_check,
    holder_check,
    mixed_power_mean,
    sample,
)
from .multipliers import admissible, audit_grid

__all__ = ["run_invariant_suite", "normalized_chain_values"]


def _check(name, passed, **detail):
    return {"name": name, "passed": bool(passed), "detail": detail}


def _scaling_check(rng):
    worst = 0.0
    for n in (1, 2, 3):
        a = 1.0 + rng.random(n) * 2.0
        x = rng.normal(size=(400, n)) * 10.0 ** rng.uniform(-2, 2, size=(400, 1))
        lam = np.exp(rng.uniform(-2.5, 2.5, size=400))
        left = aniso_norm(x * np.power(lam[:, None], a), a)
        right = lam * aniso_norm(x, a)
        worst = max(worst, float(np.max(np.abs(left - right) / right)))
    return _check("aniso-scaling", worst <= 1e-9, max_rel_err=worst)


def _euclid_check(rng):
    x = rng.normal(size=(500, 3)) * 5.0
    a = np.ones(3)
    err = np.max(
        np.abs(aniso_norm(x, a) - np.linalg.norm(x, axis=-1))
        / np.linalg.norm(x, axis=-1)
    )
    return _check("aniso-euclid-degeneration", err <= 1e-9, max_rel_err=float(err))


def _holder_check_suite(rng):
    worst = 0.0
    for p in ((1.0, 2.0), (3.0, 1.5), (math.inf, 1.0)):
        for _ in range(20):
            f = GridFunction(rng.normal(size=(24, 24)) + 1j * rng.normal(size=(24, 24)),
                             (2.0, 3.0))
            g = GridFunction(rng.normal(size=(24, 24)) + 1j * rng.normal(size=(24, 24)),
                             (2.0, 3.0))
            ratio, degenerate = holder_check(f, g, p)
            if not degenerate:
                worst = max(worst, ratio)
    return _check("mixed-holder", worst <= 1.0 + 1e-12, max_ratio=worst)


def _hausdorff_young_suite(cfg, rng):
    ok_t, _ = admissible(cfg.t)
    if not ok_t:
        return _check("hausdorff-young", False,
                      error=f"configured t={list(cfg.t)} is not admissible")
    try:
        f = sample(lambda x, y: np.exp(-(x**2 + y**2) / 2.0) * (1 + 0.3j),
                   (64, 64), (10.0, 10.0))
        vectors = [(2.0, 2.0), (2.0, 1.5), (2.0, 1.0)]
        if cfg.n == 2:
            vectors.append(tuple(cfg.t))
        worst = max(hausdorff_young_check(f, t) for t in vectors)
        return _check("hausdorff-young", worst <= 1.01, max_ratio=worst)
    except ValueError as exc:
        return _check("hausdorff-young", False, error=str(exc))


def _partition_check(cfg):
    dims = (128,) * cfg.n
    J = min(cfg.J or 4, 4)
    ext = tuple(2.0 ** (J * ak) * 2.5 for ak in cfg.a)
    fam = build_family(cfg.a, J, dims, ext,
                       profile=TransitionProfile(cfg.plateau, cfg.support))
    res = partition_residual(fam)
    return _check("partition-residual", res <= 1e-12, residual=res, J=fam.J)


def normalized_chain_values(vals_masked: np.ndarray, t, r) -> list:
    """The four probability-normalized shell power means, in chain order."""
    n = vals_masked.ndim
    return [
        mixed_power_mean(vals_masked, (1.0,) * n),
        mixed_power_mean(vals_masked, t),
        mixed_power_mean(vals_masked, r),
        mixed_power_mean(vals_masked, (2.0,) * n),
    ]


def _draw_admissible_pair(rng, n):
    r = np.sort(rng.uniform(1.0, 2.0, size=n))[::-1]
    t = 1.0 + (r - 1.0) * rng.random(n)
    t = np.minimum.accumulate(t)  # enforce non-increasing order
    return tuple(t), tuple(r)


def _chain_check(cfg, rng):
    worst = -math.inf
    for j in range(0, min(4, cfg.j_max) + 1):
        pts, _, mask = audit_grid(j, cfg.a, cfg.geometry, resolution=32)
        for _ in range(6):
            freq = rng.uniform(-2.0, 2.0, size=cfg.n) / (2.0 ** (j * np.asarray(cfg.a)))
            vals = np.abs(
                np.cos(np.tensordot(pts, freq, axes=([-1], [0])))
                + 0.5 * rng.random()
            )
            masked = np.where(mask, vals, 0.0)
            t, r = _draw_admissible_pair(rng, cfg.n)
            chain = normalized_chain_values(masked, t, r)
            for lo, hi in zip(chain, chain[1:]):
                worst = max(worst, (lo - hi) / max(hi, 1e-300))
    return _check("shell-chain-monotone", worst <= 1e-9, max_violation=worst)


def _maximal_check(rng):
    ok = True
    for _ in range(15):
        N = int(rng.integers(16, 512))
        f = rng.random(N)
        if not np.array_equal(_fiber_max_fast(f), _fiber_max_brute(f)):
            ok = False
    g = GridFunction(rng.random((16, 16)), (2.0, 2.0))
    prm = MaximalParams((1.5, 2.0))
    diff = np.max(np.abs(
        iterated_max(g, prm, method="fast").values
        - iterated_max(g, prm, method="brute").values
    ))
    return _check("maximal-oracle", ok and diff <= 1e-12, iterated_diff=float(diff))


def _roundtrip_check(rng):
    f = GridFunction(rng.normal(size=(48, 32)) + 1j * rng.normal(size=(48, 32)),
                     (4.0, 6.0))
    F = dft_forward(f)
    back = dft_inverse(F)
    rel = float(np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values)))
    lhs = float(np.sum(np.abs(f.values) ** 2) * np.prod(f.spacing))
    rhs = float((2 * math.pi) ** (-2) * np.sum(np.abs(F.values) ** 2) * np.prod(F.spacing))
    plancherel = abs(lhs - rhs) / lhs
    return _check("dft-roundtrip", rel <= 1e-12 and plancherel <= 1e-10,
                  roundtrip_rel=rel, plancherel_rel=plancherel)


def run_invariant_suite(cfg: ExperimentConfig) -> list:
    """Run every invariant check; returns a list of pass/fail rows."""
    rng = np.random.default_rng(cfg.seed)
    checks = [
        _scaling_check(rng),
        _euclid_check(rng),
        _holder_check_suite(rng),
        _hausdorff_young_suite(cfg, rng),
        _partition_check(cfg),
        _chain_check(cfg, rng),
        _maximal_check(rng),
        _roundtrip_check(rng),
    ]
    return checks
