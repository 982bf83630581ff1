"""Anisotropic Littlewood-Paley families on frequency grids.

The family is built by telescoping a smooth plateau cutoff: with ``Theta``
equal to 1 on ``[-1,1]^n`` and supported in ``[-2,2]^n`` (a tensor product of
1-D ``exp(-1/x)`` transitions), set

    phi0_hat(xi)   = Theta(xi)
    phi_hat(xi)    = Theta(xi) - Theta(2^a xi)
    phi_hat_j(xi)  = phi_hat(2^(-j a) xi),  j = 1..J

so that ``phi0_hat + sum_j phi_hat_j = Theta(2^(-J a) xi)`` exactly.  The
partition of unity is therefore exact on the covered set
``{Theta(2^(-J a) xi) = 1}``, every block is real with values in [0, 1], and
the level-j support sits inside the dilated shell
``2^(j a) ([-2,2]^n minus prod_k (-2^(-a_k), 2^(-a_k)))``, which reduces to
the classical punctured box for the isotropic anisotropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .anisotropy import AnisotropyVector, as_anisotropy
from .mixed_grid import FREQUENCY, GridFunction, dft_forward, dft_inverse

__all__ = [
    "ResolutionError",
    "TransitionProfile",
    "LPFamily",
    "build_family",
    "lp_block",
    "partition_residual",
    "max_resolved_level",
]

# phi_hat >= LOWER_BOUND on the published middle sub-shell
# {max_k |2^(-j a_k) xi_k| <= 1} minus {all |2^(-j a_k) xi_k| < (3/2) 2^(-a_k)};
# the transition is symmetric, so theta(3/2) = 1/2 exactly.
LOWER_BOUND = 0.5


class ResolutionError(ValueError):
    """The frequency grid does not resolve the requested decomposition level."""


def _smoothstep(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, exp(-1/t) blend between.

    Evaluation is clamped away from the singular endpoints of exp(-1/t).
    """
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    lo = t <= 1e-12
    hi = t >= 1.0 - 1e-12
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    out[mid] = a / (a + b)
    return out


@dataclass(frozen=True)
class TransitionProfile:
    """1-D plateau profile: 1 on [-plateau, plateau], 0 outside [-support, support]."""

    plateau: float = 1.0
    support: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.plateau < self.support:
            raise ValueError("need 0 < plateau < support")

    def __call__(self, u: np.ndarray) -> np.ndarray:
        u = np.abs(np.asarray(u, dtype=float))
        t = (u - self.plateau) / (self.support - self.plateau)
        return 1.0 - _smoothstep(t)


def _theta(coords, a_scale, profile: TransitionProfile) -> np.ndarray:
    """Tensor-product cutoff Theta(2^(-s a) xi) on an open coordinate mesh."""
    n = len(coords)
    out = 1.0
    for k in range(n):
        shp = [1] * n
        shp[k] = coords[k].size
        out = out * profile(coords[k] * a_scale[k]).reshape(shp)
    return np.asarray(out)


@dataclass(frozen=True)
class LPFamily:
    """Sampled Littlewood-Paley system on a frequency grid.

    ``phi_hat[j]`` holds the level-j block (index 0 is the low-pass), all
    real-valued in ``[0, 1]``.  ``covered`` marks frequencies where the
    partition of unity is exact; ``overlap`` is the smallest M such that
    blocks further than M levels apart have disjoint (sampled) supports.
    """

    a: AnisotropyVector
    J: int
    dims: tuple
    extents: tuple
    profile: TransitionProfile
    phi_hat: tuple = field(repr=False)
    covered: np.ndarray = field(repr=False, compare=False)
    overlap: int = 1

    @property
    def phi0_hat(self) -> np.ndarray:
        return self.phi_hat[0]

    def coords(self) -> list:
        return [
            -L + np.arange(N) * (2.0 * L / N)
            for L, N in zip(self.extents, self.dims)
        ]

    def support_outer(self, j: int) -> np.ndarray:
        """Per-axis half-width of the closed box containing supp(phi_hat_j)."""
        a = self.a.array
        return self.profile.support * 2.0 ** (j * a)

    def support_inner(self, j: int) -> np.ndarray:
        """Per-axis half-width of the open hole free of supp(phi_hat_j) (j >= 1)."""
        a = self.a.array
        return self.profile.plateau * 2.0 ** ((j - 1) * a)

    def block_grid(self, j: int) -> GridFunction:
        return GridFunction(self.phi_hat[j], self.extents, FREQUENCY)

    def matches(self, F: GridFunction) -> bool:
        return F.dims == self.dims and np.allclose(F.extents, self.extents, rtol=1e-12)


def max_resolved_level(a, extents) -> int:
    """Largest J whose level-J support box fits inside the frequency extents."""
    av = as_anisotropy(a)
    ext = np.atleast_1d(np.asarray(extents, dtype=float))
    with np.errstate(divide="ignore"):
        levels = (np.log2(ext / 2.0)) / av.array
    return int(np.floor(levels.min()))


def build_family(a, J, dims, extents, profile: TransitionProfile | None = None,
                 allow_truncation: bool = False) -> LPFamily:
    """Sample the telescoped family on the frequency grid ``(dims, extents)``.

    ``J`` is the number of band-pass levels (``J=None`` picks the largest level
    the grid resolves).  Unless ``allow_truncation``, the grid must contain the
    level-J support box; otherwise a :class:`ResolutionError` lists the
    required extents.
    """
    av = as_anisotropy(a)
    prof = profile or TransitionProfile()
    dims = tuple(int(d) for d in np.atleast_1d(dims))
    ext = tuple(float(e) for e in np.atleast_1d(extents))
    if len(dims) != av.n or len(ext) != av.n:
        raise ValueError("dims/extents dimension mismatch with anisotropy")

    if J is None:
        J = max_resolved_level(av, ext)
    J = int(J)
    if J < 1:
        raise ResolutionError(
            f"need J >= 1; grid extents {ext} resolve no band-pass level"
        )
    required = prof.support * 2.0 ** (J * av.array)
    if not allow_truncation and np.any(required > np.asarray(ext) * (1 + 1e-12)):
        raise ResolutionError(
            f"frequency extents {ext} do not resolve level {J}; "
            f"need at least {tuple(float(r) for r in required)} per axis"
        )

    coords = [
        -L + np.arange(N) * (2.0 * L / N) for L, N in zip(ext, dims)
    ]
    aa = av.array
    # theta_j = Theta(2^(-j a) xi); blocks are consecutive differences
    theta_prev = _theta(coords, 2.0 ** (0.0 * aa), prof)
    blocks = [theta_prev]
    for j in range(1, J + 1):
        theta_j = _theta(coords, 2.0 ** (-j * aa), prof)
        blocks.append(theta_j - theta_prev)
        theta_prev = theta_j
    covered = theta_prev == 1.0

    overlap = _support_overlap(blocks)
    return LPFamily(
        a=av, J=J, dims=dims, extents=ext, profile=prof,
        phi_hat=tuple(b for b in blocks), covered=covered, overlap=overlap,
    )


def _support_overlap(blocks) -> int:
    """Smallest M with disjoint sampled supports beyond M levels apart."""
    nz = [b != 0.0 for b in blocks]
    M = 1
    for j in range(len(blocks)):
        for k in range(j + 1, len(blocks)):
            if np.any(nz[j] & nz[k]):
                M = max(M, k - j)
    return M


def lp_block(f: GridFunction, j: int, fam: LPFamily) -> GridFunction:
    """Frequency-localized piece ``phi_j * f`` via multiplication by phi_hat_j.

    The output is exactly band-limited: frequency samples outside the sampled
    support of ``phi_hat_j`` vanish identically.
    """
    if not 0 <= j <= fam.J:
        raise ValueError(f"level {j} outside family range 0..{fam.J}")
    if f.space_tag != "physical":
        raise ValueError("lp_block expects a physical-space GridFunction")
    F = dft_forward(f)
    if not fam.matches(F):
        raise ValueError("family grid does not match the function's dual grid")
    return dft_inverse(F.with_values(F.values * fam.phi_hat[j]))


def partition_residual(fam: LPFamily) -> float:
    """Max of ``|1 - sum_j phi_hat_j|`` over the covered frequency set."""
    total = np.zeros(fam.dims)
    for b in fam.phi_hat:
        total = total + b
    if not np.any(fam.covered):
        return 0.0
    return float(np.max(np.abs(1.0 - total[fam.covered])))
