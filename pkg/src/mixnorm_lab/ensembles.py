"""Reproducible test-function ensembles: anisotropic Gaussian bump fields.

Members are described analytically (centers, widths, phases drawn from a
seeded generator, independent of any grid), evaluated on the requested grid,
then band-limited by a plateau filter below a chosen decomposition level.
Because the description is grid-free, the same seed yields the same
underlying functions across resolutions, which is what the resolution
stability experiments compare.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .anisotropy import as_anisotropy
from .littlewood_paley import TransitionProfile
from .mixed_grid import GridFunction, dft_forward, dft_inverse, sample

__all__ = ["BumpField", "draw_bump_fields", "realize", "band_limit", "make_ensemble"]


@dataclass(frozen=True)
class BumpField:
    """Sum of modulated anisotropic Gaussians; a grid-free field description."""

    centers: tuple   # (bumps, n)
    widths: tuple    # (bumps, n) per-axis standard deviations
    amps: tuple      # (bumps,) complex amplitudes
    freqs: tuple     # (bumps, n) modulation frequencies

    def __call__(self, *mesh):
        total = 0.0
        for c, w, A, om in zip(self.centers, self.widths, self.amps, self.freqs):
            expo = 0.0
            phase = 0.0
            for k, x in enumerate(mesh):
                expo = expo + ((x - c[k]) / w[k]) ** 2
                phase = phase + om[k] * x
            total = total + A * np.exp(-0.5 * expo) * np.exp(1j * phase)
        return total


def draw_bump_fields(rng, n, extents, count, bumps=3, a=None, level=None,
                     margin=0.35):
    """Draw ``count`` field descriptions inside the box of the given extents.

    Per bump a dyadic scale ``u <= level`` is drawn; its spectrum then sits
    inside the level-u frequency box ``2^(u a) [-1, 1]^n`` (modulation up to
    half the box, spectral width a sixth of it), which keeps the tail of a
    Littlewood-Paley expansion truncated above ``level + 1`` negligible while
    still exercising every shell.  Centers stay within ``margin * L`` so
    samples decay well inside the grid boundary; physical widths are clamped
    to a third of the extents.
    """
    ext = np.atleast_1d(np.asarray(extents, dtype=float))
    aa = as_anisotropy(a).array if a is not None else np.ones(n)
    top = int(level) if level is not None else 0
    fields = []
    for _ in range(count):
        centers, widths, amps, freqs = [], [], [], []
        for _ in range(bumps):
            u = int(rng.integers(0, top + 1)) if top > 0 else 0
            box = 2.0 ** (u * aa)
            centers.append(tuple(rng.uniform(-margin, margin, size=n) * ext))
            widths.append(tuple(np.minimum(6.0 / box, ext / 3.0)))
            amps.append(complex(rng.normal(), rng.normal()))
            freqs.append(tuple(rng.uniform(-0.5, 0.5, size=n) * box))
        fields.append(BumpField(tuple(centers), tuple(widths), tuple(amps), tuple(freqs)))
    return fields


def band_limit(f: GridFunction, a, level: int,
               profile: TransitionProfile | None = None) -> GridFunction:
    """Keep frequencies below the given level: multiply by the plateau cutoff.

    The filtered transform is supported in ``2^(level a) [-2, 2]^n`` and the
    full Littlewood-Paley reconstruction up to ``J >= level + 1`` is exact.
    """
    prof = profile or TransitionProfile()
    av = as_anisotropy(a)
    F = dft_forward(f)
    cut = np.ones(F.dims)
    for k in range(F.ndim):
        xi = F.axis_coords(k).reshape([-1 if i == k else 1 for i in range(F.ndim)])
        cut = cut * prof(xi * 2.0 ** (-level * av.array[k]))
    return dft_inverse(F.with_values(F.values * cut))


def realize(field: BumpField, dims, extents, a=None, level=None) -> GridFunction:
    """Evaluate a field on a grid, optionally band-limiting below a level."""
    f = sample(field, dims, extents)
    if a is not None and level is not None:
        f = band_limit(f, a, level)
    return f


def make_ensemble(rng, count, dims, extents, a, J, bumps=3) -> list:
    """Ensemble band-limited below level ``J - 1`` on the given grid."""
    n = len(np.atleast_1d(dims))
    fields = draw_bump_fields(rng, n, extents, count, bumps=bumps, a=a,
                              level=max(J - 2, 0))
    return [realize(fld, dims, extents, a=a, level=J - 1) for fld in fields]
