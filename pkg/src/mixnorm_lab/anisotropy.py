"""Anisotropic geometry: dilations, the quasi-homogeneous norm, and the bracket.

An anisotropy vector ``a = (a_1, ..., a_n)`` with entries >= 1 defines the
dilation ``lam**a x = (lam**a_1 x_1, ..., lam**a_n x_n)``.  The induced
quasi-homogeneous norm ``|x|_a`` is the unique ``lam0 > 0`` with
``|lam0**(-a) x|_2 = 1`` (and ``|0|_a = 0``).  It is 1-homogeneous under the
anisotropic dilation and reduces to the Euclidean norm for ``a = (1, ..., 1)``.

All functions are pure and accept either a single point (shape ``(n,)``) or a
batch of points (shape ``(..., n)``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "AnisotropyVector",
    "as_anisotropy",
    "aniso_dilate",
    "aniso_norm",
    "bracket",
    "euclid_comparison",
]

# Exponents are clipped before exponentiation: only the sign of the bisection
# residual matters, so saturating at exp(+-_EXP_CLIP) is safe.
_EXP_CLIP = 700.0


@dataclass(frozen=True)
class AnisotropyVector:
    """Dilation exponents ``a`` with the derived quantities ``a_m, a_M, nu``.

    ``nu = a_1 + ... + a_n`` is the homogeneous dimension: the Jacobian of the
    dilation ``x -> lam**a x`` is ``lam**nu``.
    """

    a: tuple

    def __post_init__(self):
        entries = tuple(float(v) for v in np.atleast_1d(np.asarray(self.a, dtype=float)))
        if len(entries) == 0:
            raise ValueError("anisotropy vector must have at least one entry")
        if any(not np.isfinite(v) or v < 1.0 for v in entries):
            raise ValueError(f"anisotropy entries must be finite and >= 1, got {entries}")
        object.__setattr__(self, "a", entries)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def a_m(self) -> float:
        return min(self.a)

    @property
    def a_M(self) -> float:
        return max(self.a)

    @property
    def nu(self) -> float:
        return float(sum(self.a))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.a, dtype=float)

    def is_isotropic(self) -> bool:
        return all(v == 1.0 for v in self.a)

    def __iter__(self):
        return iter(self.a)

    def __len__(self):
        return len(self.a)


def as_anisotropy(a) -> AnisotropyVector:
    """Coerce a sequence (or AnisotropyVector) to an AnisotropyVector."""
    if isinstance(a, AnisotropyVector):
        return a
    return AnisotropyVector(a)


def aniso_dilate(lam: float, a, x) -> np.ndarray:
    """Componentwise dilation ``(lam**a_1 x_1, ..., lam**a_n x_n)``.

    ``lam`` must be positive; ``lam = 1`` is the identity.
    """
    if not np.isfinite(lam) or lam <= 0.0:
        raise ValueError(f"dilation parameter must be positive, got {lam}")
    av = as_anisotropy(a)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != av.n:
        raise ValueError(f"point dimension {x.shape[-1]} != anisotropy dimension {av.n}")
    return x * float(lam) ** av.array


def aniso_norm(x, a, tol: float = 1e-12):
    """Quasi-homogeneous norm ``|x|_a``: the root of ``|lam**(-a) x|_2 = 1``.

    The map ``lam -> |lam**(-a) x|_2`` is continuous and strictly decreasing on
    ``(0, inf)`` for ``x != 0``, so the root is found by bracket-and-bisect.
    The analytic seed ``max_k |x_k|**(1/a_k)`` starts the bracket at
    ``[seed/2, 2*seed]`` (grown further if needed), and bisection runs to
    relative tolerance ``tol`` on ``lam``.  The residual is evaluated through
    logarithms of ``|x_k|``, which keeps the computation stable for
    arbitrarily large or small coordinates.

    Parameters
    ----------
    x : array_like, shape (..., n) or (n,)
        Point(s); the last axis is the coordinate axis.
    a : AnisotropyVector or sequence
    tol : float
        Relative tolerance on the returned root.

    Returns
    -------
    float or ndarray
        ``|x|_a`` per point; exactly 0.0 for the zero point.
    """
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    av = as_anisotropy(a)
    x = np.asarray(x, dtype=float)
    scalar_input = x.ndim == 1
    pts = np.atleast_2d(x)
    if pts.shape[-1] != av.n:
        raise ValueError(f"point dimension {pts.shape[-1]} != anisotropy dimension {av.n}")

    aa = av.array
    with np.errstate(divide="ignore"):
        logx2 = 2.0 * np.log(np.abs(pts))  # -inf rows/entries encode zeros
    nonzero = np.any(np.isfinite(logx2), axis=-1)

    out = np.zeros(pts.shape[:-1], dtype=float)
    if np.any(nonzero):
        lx2 = logx2[nonzero]
        # mu = log(lam); residual sign of sum_k exp(2 log|x_k| - 2 a_k mu) - 1
        seed = np.max(lx2 / (2.0 * aa), axis=-1)
        lo = seed - np.log(2.0)
        hi = seed + np.log(2.0)

        def above_one(mu):
            e = np.clip(lx2 - 2.0 * aa * mu[..., None], -np.inf, _EXP_CLIP)
            return np.sum(np.exp(e), axis=-1) >= 1.0

        # Grow the bracket where the seed guess does not straddle the root.
        step = np.log(2.0)
        for _ in range(200):
            bad_lo = ~above_one(lo)
            bad_hi = above_one(hi)
            if not (bad_lo.any() or bad_hi.any()):
                break
            lo = np.where(bad_lo, lo - step, lo)
            hi = np.where(bad_hi, hi + step, hi)
        else:  # pragma: no cover - the residual is strictly monotone
            raise RuntimeError("failed to bracket the anisotropic norm root")

        # |mu_err| <= tol gives relative error ~tol on lam = exp(mu).
        n_iter = int(np.ceil(np.log2(max((hi - lo).max(), tol) / tol))) + 2
        for _ in range(n_iter):
            mid = 0.5 * (lo + hi)
            big = above_one(mid)
            lo = np.where(big, mid, lo)
            hi = np.where(big, hi, mid)
        out[nonzero] = np.exp(0.5 * (lo + hi))

    return float(out[0]) if scalar_input else out.reshape(x.shape[:-1])


def bracket(x, a, tol: float = 1e-12):
    """Anisotropic bracket ``<x> = |(1, x)|_{(1, a)}``; always >= 1.

    The extra unit coordinate forces the root above 1, which makes the bracket
    a smooth, everywhere-positive substitute for ``1 + |x|_a``.
    """
    av = as_anisotropy(a)
    x = np.asarray(x, dtype=float)
    ones = np.ones(x.shape[:-1] + (1,), dtype=float)
    ext = np.concatenate([ones, x], axis=-1)
    ext_a = AnisotropyVector((1.0,) + av.a)
    res = aniso_norm(ext, ext_a, tol=tol)
    # lam0 >= 1 holds exactly (the unit coordinate needs lam >= 1); clamp the
    # bisection slack so downstream powers never see values below 1.
    return float(np.maximum(res, 1.0)) if np.ndim(res) == 0 else np.maximum(res, 1.0)


def euclid_comparison(a, samples):
    """Empirical constants linking anisotropic and Euclidean growth.

    Over the given sample points, returns the largest ``c1`` and smallest
    ``c2`` such that ``c1 (1+|x|_a)**a_m <= 1+|x| <= c2 (1+|x|_a)**a_M``
    holds for every sample.  The constants are estimates over the samples,
    not proven bounds.  Both ratios equal 1 at the origin, so sample sets
    containing it always satisfy ``c1 <= 1 <= c2``.
    """
    av = as_anisotropy(a)
    pts = np.atleast_2d(np.asarray(samples, dtype=float))
    if pts.size == 0:
        raise ValueError("sample set must be nonempty")
    if pts.shape[-1] != av.n:
        raise ValueError(f"sample dimension {pts.shape[-1]} != anisotropy dimension {av.n}")
    eucl = 1.0 + np.sqrt(np.sum(pts**2, axis=-1))
    base = 1.0 + aniso_norm(pts, av)
    c1 = float(np.min(eucl / base**av.a_m))
    c2 = float(np.max(eucl / base**av.a_M))
    return c1, c2
