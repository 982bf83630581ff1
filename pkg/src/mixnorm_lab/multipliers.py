"""Fourier multiplier symbols, shell condition constants, and experiments.

A multiplier acts by ``T_m f = F^-1[m(xi) F f]`` under the normalized inverse,
so ``m = 1`` is the identity.  The audited conditions measure weighted symbol
derivatives either pointwise (``Linf``) or through mixed shell norms
(``L2``/``Lmixed``):

    localized(gamma, j) = 2^(-j alpha) 2^(j a.gamma) 2^(-j a.(1/t))
                          * || d^gamma m ||_{L^t(R_j)}

with the supremum over multi-indices ``|gamma| <= N`` and levels
``j = 0..J_audit`` returned as the condition constant.  ``L2`` is ``Lmixed``
at ``t = (2,...,2)`` through the identical code path.

Audits run on per-shell cell-centered grids whose resolution is a multiple of
8, so the dyadic shell boundaries align with quadrature cells and shell
measures are exact.  Three shell geometries are supported:

    punctured -- ``2^(j a) ([-2,2]^n minus (-1/2,1/2)^n)`` for every j >= 0
    paper     -- as above for j >= 1, but a solid box ``2^a [-2,2]^n`` at j=0
    enlarged  -- the support boxes of the telescoped Littlewood-Paley family

``punctured`` is the default: it makes the localized values of ``m = 1``
level-independent, which is what the shipped oracles pin down.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .anisotropy import AnisotropyVector, aniso_norm, as_anisotropy, bracket
from .littlewood_paley import LPFamily
from .mixed_grid import (
    ExponentVector,
    FREQUENCY,
    GridFunction,
    Region,
    as_exponents,
    conjugate,
    dft_forward,
    dft_inverse,
    full_region,
    iterated_norm,
    mixed_norm,
    rect_region,
    shell_region,
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

__all__ = [
    "SingularSymbolError",
    "MultiplierSpec",
    "ConditionReport",
    "DiagnosticProfile",
    "ExperimentReport",
    "identity_symbol",
    "modulation_symbol",
    "lifting_multiplier",
    "sobolev_symbol",
    "apply_multiplier",
    "admissible",
    "mu_exponents",
    "smoothness_threshold",
    "condition_constant",
    "audit_grid",
    "audit_shell",
    "multi_indices",
    "localized_profile",
    "boundedness_experiment",
    "THEOREM_CERTIFIED",
    "EXPLORATORY",
]

THEOREM_CERTIFIED = "theorem-certified"
EXPLORATORY = "exploratory"

GEOMETRIES = ("punctured", "paper", "enlarged")


class SingularSymbolError(ValueError):
    """A symbol evaluated non-finite (or blew up) on an audited shell."""


# ---------------------------------------------------------------------------
# Symbols
# ---------------------------------------------------------------------------

@dataclass
class MultiplierSpec:
    """A symbol ``m(xi)`` with derivative access and its audit budget.

    ``symbol`` maps points of shape ``(..., n)`` to complex values ``(...)``.
    Derivatives come from ``derivatives[gamma]`` evaluators when supplied
    (analytic mode) or scale-aware central finite differences otherwise, with
    per-axis step ``2^(j a_k) * fd_scale`` on shell j.
    """

    symbol: object
    alpha: float = 0.0
    smoothness: int = 3
    derivatives: dict | None = None
    fd_scale: float = 1e-4
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.smoothness < 1:
            raise ValueError("smoothness budget must be a positive integer")
        if self.fd_scale <= 0:
            raise ValueError("finite-difference step scale must be positive")

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(self.symbol(pts), dtype=np.complex128)


# central stencils (offset, coefficient); error O(h^2) each
_STENCILS = {
    1: ((-1, 1), (-0.5, 0.5)),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
}


def multi_indices(n: int, max_order: int):
    """All multi-indices gamma with |gamma| <= max_order, graded order."""
    out = []
    for total in range(max_order + 1):
        for c in itertools.combinations_with_replacement(range(n), total):
            g = [0] * n
            for k in c:
                g[k] += 1
            out.append(tuple(g))
    return sorted(set(out), key=lambda g: (sum(g), g))


def symbol_derivative(m: MultiplierSpec, gamma, pts: np.ndarray, steps) -> np.ndarray:
    """Evaluate ``d^gamma m`` at ``pts``; FD steps are per-axis scalars."""
    gamma = tuple(int(v) for v in gamma)
    if all(g == 0 for g in gamma):
        return m(pts)
    if m.derivatives is not None:
        fn = m.derivatives.get(gamma)
        if fn is None:
            raise ValueError(f"analytic derivative {gamma} unavailable for {m.name!r}")
        return np.asarray(fn(pts), dtype=np.complex128)
    if any(g > max(_STENCILS) for g in gamma):
        raise ValueError(f"finite differences support per-axis order <= {max(_STENCILS)}")
    steps = np.atleast_1d(np.asarray(steps, dtype=float))
    axes = [k for k, g in enumerate(gamma) if g > 0]
    offset_sets = [_STENCILS[gamma[k]][0] for k in axes]
    coeff_sets = [_STENCILS[gamma[k]][1] for k in axes]
    acc = np.zeros(pts.shape[:-1], dtype=np.complex128)
    for combo in itertools.product(*(range(len(o)) for o in offset_sets)):
        shifted = np.array(pts, dtype=float)
        coeff = 1.0
        for which, k in enumerate(axes):
            shifted[..., k] += offset_sets[which][combo[which]] * steps[k]
            coeff *= coeff_sets[which][combo[which]]
        acc += coeff * m(shifted)
    scale = np.prod([steps[k] ** gamma[k] for k in axes])
    return acc / scale


def identity_symbol(alpha: float = 0.0, smoothness: int = 3) -> MultiplierSpec:
    """``m = 1`` with exact (vanishing) derivatives."""

    def sym(pts):
        return np.ones(pts.shape[:-1], dtype=np.complex128)

    class _Zeros(dict):
        def get(self, gamma, default=None):
            if all(g == 0 for g in gamma):
                return sym
            return lambda pts: np.zeros(pts.shape[:-1], dtype=np.complex128)

    return MultiplierSpec(sym, alpha=alpha, smoothness=smoothness,
                          derivatives=_Zeros(), name="1")


def modulation_symbol(shift, smoothness: int = 3) -> MultiplierSpec:
    """``m(xi) = exp(-i xi.v)``: translation of the function by ``v``."""
    v = np.atleast_1d(np.asarray(shift, dtype=float))

    def sym(pts):
        return np.exp(-1j * np.tensordot(pts, v, axes=([-1], [0])))

    class _Analytic(dict):
        def get(self, gamma, default=None):
            fac = np.prod([(-1j * v[k]) ** g for k, g in enumerate(gamma)])
            return lambda pts: fac * sym(pts)

    return MultiplierSpec(sym, alpha=0.0, smoothness=smoothness,
                          derivatives=_Analytic(), name=f"exp(-i xi.{tuple(v)})")


def lifting_multiplier(alpha: float, a, smoothness: int = 3) -> MultiplierSpec:
    """The bracket power ``m_alpha(xi) = <xi>^alpha`` (finite-difference mode).

    The bracket is evaluated by bisection to near machine precision so that
    high-order finite differences stay usable.
    """
    av = as_anisotropy(a)

    def sym(pts):
        return bracket(pts, av, tol=1e-15) ** alpha + 0j

    return MultiplierSpec(sym, alpha=float(alpha), smoothness=smoothness,
                          name=f"bracket(xi)^{alpha}")


def sobolev_symbol(s: float, a, smoothness: int = 3) -> MultiplierSpec:
    """Rational lifting symbol ``(1 + |xi|_a^2)^(s/2)`` (finite differences)."""
    av = as_anisotropy(a)

    def sym(pts):
        return (1.0 + aniso_norm(pts, av, tol=1e-15) ** 2) ** (s / 2.0) + 0j

    return MultiplierSpec(sym, alpha=float(s), smoothness=smoothness,
                          name=f"(1+|xi|_a^2)^({s}/2)")


# ---------------------------------------------------------------------------
# Operator application
# ---------------------------------------------------------------------------

def _frequency_mesh(F: GridFunction) -> np.ndarray:
    return F.coord_mesh()


def apply_multiplier(m: MultiplierSpec, f: GridFunction) -> GridFunction:
    """``T_m f`` by forward transform, symbol multiplication, inverse transform.

    Symbol samples per frequency grid are cached on the spec.  Non-finite
    symbol values raise :class:`SingularSymbolError` naming an offending
    frequency.
    """
    F = dft_forward(f)
    key = (F.dims, F.extents)
    vals = m._cache.get(key)
    if vals is None:
        vals = m(_frequency_mesh(F))
        bad = ~np.isfinite(vals)
        if np.any(bad):
            idx = tuple(int(v) for v in np.argwhere(bad)[0])
            xi = tuple(float(F.axis_coords(k)[idx[k]]) for k in range(F.ndim))
            raise SingularSymbolError(
                f"symbol {m.name!r} is non-finite at xi={xi}"
            )
        m._cache[key] = vals
    return dft_inverse(F.with_values(F.values * vals))


# ---------------------------------------------------------------------------
# Exponent bookkeeping
# ---------------------------------------------------------------------------

def admissible(t) -> tuple:
    """Whether ``1 <= t_n <= ... <= t_1 <= 2``; returns ``(flag, sum 1/t_k)``."""
    tv = as_exponents(t)
    ent = tv.entries
    ok = all(1.0 <= v <= 2.0 for v in ent) and all(
        ent[k] >= ent[k + 1] for k in range(len(ent) - 1)
    )
    return ok, tv.recip_sum()


def mu_exponents(p, q: float, kind: str) -> tuple:
    """Aggregation exponents ``mu_j`` and their reciprocal sum ``mu``.

    ``mu_j = min(p_1, ..., p_j, q)`` for Triebel-Lizorkin; Besov drops q.
    """
    pv = as_exponents(p)
    if kind == TRIEBEL_LIZORKIN:
        mus = tuple(min(min(pv.entries[: j + 1]), q) for j in range(pv.n))
    elif kind == BESOV:
        mus = tuple(min(pv.entries[: j + 1]) for j in range(pv.n))
    else:
        raise ValueError(f"kind must be Besov or Triebel-Lizorkin, got {kind!r}")
    mu = float(sum(1.0 / v for v in mus))
    return mus, mu


def smoothness_threshold(p, q: float, t, kind: str = TRIEBEL_LIZORKIN) -> int:
    """Smallest integer strictly greater than ``mu + t``."""
    ok, t_sum = admissible(t)
    if not ok:
        raise ValueError(f"exponent vector {tuple(as_exponents(t))} is not admissible")
    _, mu = mu_exponents(p, q, kind)
    return int(math.floor(mu + t_sum)) + 1


# ---------------------------------------------------------------------------
# Shell audits
# ---------------------------------------------------------------------------

def audit_shell(j: int, a, geometry: str = "punctured") -> tuple:
    """Outer half-widths and Region of the level-j audit shell."""
    av = as_anisotropy(a)
    if geometry not in GEOMETRIES:
        raise ValueError(f"geometry must be one of {GEOMETRIES}, got {geometry!r}")
    if j < 0:
        raise ValueError("audit levels start at 0")
    aa = av.array
    scale = 2.0 ** (j * aa)
    if geometry == "punctured":
        outer = 2.0 * scale
        return outer, shell_region(outer=outer, inner=0.5 * scale)
    if geometry == "paper":
        if j == 0:
            outer = 2.0 * 2.0**aa
            return outer, rect_region([(-h, h) for h in outer])
        outer = 2.0 * scale
        return outer, shell_region(outer=outer, inner=0.5 * scale)
    # enlarged: support geometry of the telescoped family
    if j == 0:
        outer = 2.0 * np.ones_like(aa)
        return outer, rect_region([(-h, h) for h in outer])
    outer = 2.0 * scale
    inner = 2.0 ** ((j - 1) * aa)
    return outer, shell_region(outer=outer, inner=inner)


def audit_grid(j: int, a, geometry: str = "punctured", resolution: int = 128) -> tuple:
    """Cell-centered quadrature covering the level-j shell box.

    Returns ``(pts, weights, mask)``: mesh points of shape ``res^n x n``
    (cell centers of the solid outer box), per-axis quadrature weights, and
    the boolean shell mask.  Resolutions divisible by 8 make the dyadic shell
    boundaries fall on cell edges, so masked quadrature measures are exact.
    """
    av = as_anisotropy(a)
    if resolution < 8 or resolution % 8:
        raise ValueError("audit resolution must be a positive multiple of 8")
    outer, region = audit_shell(j, av, geometry)
    coords = [
        -A + (np.arange(resolution) + 0.5) * (2.0 * A / resolution) for A in outer
    ]
    mesh = np.stack(np.meshgrid(*coords, indexing="ij"), axis=-1)
    weights = [2.0 * A / resolution for A in outer]
    mask = region.contains(mesh)
    return mesh, weights, mask


@dataclass(frozen=True)
class ConditionReport:
    """Audited localized values and their supremum for one condition mode."""

    mode: str
    alpha: float
    smoothness: int
    a: AnisotropyVector
    t: tuple | None
    geometry: str
    j_max: int
    resolution: int
    localized: dict = field(repr=False)
    constant: float = math.inf

    def recompute_constant(self) -> float:
        return max(self.localized.values())

    def by_level(self, j: int) -> float:
        return max(v for (g, jj), v in self.localized.items() if jj == j)

    def finite(self) -> bool:
        return math.isfinite(self.constant)


def _probe_singularities(m: MultiplierSpec, pts: np.ndarray, region: Region | None):
    """Evaluate on axis-zeroed copies of the mesh; singular symbols blow up there."""
    n = pts.shape[-1]
    for k in range(n):
        proj = np.array(pts)
        proj[..., k] = 0.0
        flat = proj.reshape(-1, n)
        if region is not None:
            keep = region.contains(flat)
            if not np.any(keep):
                continue
            flat = flat[keep]
        vals = m(flat)
        bad = ~np.isfinite(vals)
        if np.any(bad):
            xi = tuple(float(v) for v in flat[np.argwhere(bad)[0][0]])
            raise SingularSymbolError(f"symbol {m.name!r} is singular near xi={xi}")


def _linf_localized(m, gamma, pts, steps, alpha, av):
    w_exp = -alpha + float(np.dot(av.array, gamma))
    vals = symbol_derivative(m, gamma, pts, steps)
    weight = (1.0 + aniso_norm(pts, av)) ** w_exp
    return weight * np.abs(vals)


def condition_constant(
    m: MultiplierSpec,
    mode: str,
    a,
    J_audit: int = 6,
    t=None,
    geometry: str = "punctured",
    resolution: int = 128,
    refine: bool = True,
) -> ConditionReport:
    """Audit one of the three multiplier conditions on shells ``j = 0..J_audit``.

    ``Linf`` takes the weighted sup of ``|d^gamma m|`` over solid audit boxes
    (plus one dyadic refinement pass near the grid argmax; the result is a
    lower bound of the true sup).  ``Lmixed`` takes prefactored mixed shell
    norms for an admissible ``t``; ``L2`` is ``Lmixed`` at ``t = (2,...,2)``.
    The truncation at ``J_audit`` approximates the supremum over all levels.
    """
    av = as_anisotropy(a)
    if J_audit < 0:
        raise ValueError("J_audit must be >= 0")
    if mode == "L2":
        tv = as_exponents(2.0, av.n)
    elif mode == "Lmixed":
        if t is None:
            raise ValueError("Lmixed mode needs an exponent vector t")
        tv = as_exponents(t, av.n)
        ok, _ = admissible(tv)
        if not ok:
            raise ValueError(f"t={tuple(tv)} is not admissible")
    elif mode == "Linf":
        tv = None
    else:
        raise ValueError(f"mode must be 'Linf', 'L2' or 'Lmixed', got {mode!r}")

    gammas = multi_indices(av.n, m.smoothness)
    localized = {}
    for j in range(J_audit + 1):
        pts, weights, mask = audit_grid(j, av, geometry, resolution)
        _, region = audit_shell(j, av, geometry)
        steps = 2.0 ** (j * av.array) * m.fd_scale
        _probe_singularities(m, pts, None if mode == "Linf" else region)
        for gamma in gammas:
            if mode == "Linf":
                field_vals = _linf_localized(m, gamma, pts, steps, m.alpha, av)
                if not np.all(np.isfinite(field_vals)):
                    idx = tuple(int(v) for v in np.argwhere(~np.isfinite(field_vals))[0])
                    raise SingularSymbolError(
                        f"symbol {m.name!r} audit is non-finite at xi="
                        f"{tuple(float(v) for v in pts[idx])}"
                    )
                value = float(np.max(field_vals))
                if refine:
                    idx = np.unravel_index(np.argmax(field_vals), field_vals.shape)
                    center = pts[idx]
                    h = np.array([w for w in weights])
                    offs = np.stack(np.meshgrid(
                        *[np.linspace(-h[k] / 2, h[k] / 2, 5) for k in range(av.n)],
                        indexing="ij"), axis=-1)
                    local = center + offs
                    value = max(value, float(np.max(
                        _linf_localized(m, gamma, local, steps, m.alpha, av)
                    )))
            else:
                vals = symbol_derivative(m, gamma, pts, steps)
                if not np.all(np.isfinite(vals)):
                    idx = tuple(int(v) for v in np.argwhere(~np.isfinite(vals))[0])
                    raise SingularSymbolError(
                        f"symbol {m.name!r} derivative {gamma} is non-finite at xi="
                        f"{tuple(float(v) for v in pts[idx])}"
                    )
                restricted = np.where(mask, np.abs(vals), 0.0)
                norm = iterated_norm(restricted, tv, weights)
                pref = 2.0 ** (
                    -j * m.alpha
                    + j * float(np.dot(av.array, gamma))
                    - j * float(np.dot(av.array, [1.0 / v for v in tv]))
                )
                value = pref * norm
            localized[(gamma, j)] = float(value)

    constant = max(localized.values())
    return ConditionReport(
        mode=mode, alpha=m.alpha, smoothness=m.smoothness, a=av,
        t=None if tv is None else tuple(tv), geometry=geometry,
        j_max=J_audit, resolution=resolution,
        localized=localized, constant=float(constant),
    )


# ---------------------------------------------------------------------------
# Proof-profile diagnostics
# ---------------------------------------------------------------------------

def _shift_zero(arr: np.ndarray, axis: int, k: int) -> np.ndarray:
    """Shift with zero fill (data vanishes near edges by construction)."""
    out = np.zeros_like(arr)
    src = [slice(None)] * arr.ndim
    dst = [slice(None)] * arr.ndim
    if k == 0:
        return arr.copy()
    if k > 0:
        src[axis] = slice(0, arr.shape[axis] - k)
        dst[axis] = slice(k, None)
    else:
        src[axis] = slice(-k, None)
        dst[axis] = slice(0, arr.shape[axis] + k)
    out[tuple(dst)] = arr[tuple(src)]
    return out


def _grid_partial(vals: np.ndarray, gamma, spacing) -> np.ndarray:
    """Central finite differences of gridded samples, zero-filled boundaries."""
    out = np.array(vals, dtype=np.complex128)
    for axis, g in enumerate(gamma):
        if g == 0:
            continue
        offs, coeffs = _STENCILS[g]
        acc = np.zeros_like(out)
        for o, c in zip(offs, coeffs):
            # sample at x + o*h lives o cells "later": shift data by -o
            acc += c * _shift_zero(out, axis, -o)
        out = acc / spacing[axis] ** g
    return out


@dataclass(frozen=True)
class DiagnosticProfile:
    """Numerical by-products of the single-level operator estimate.

    Records the localized symbol ``m_(j)``, its rescaling ``g_(j)``, the
    weighted transform integral I, the per-derivative transform norms
    I_gamma, and the exponent bookkeeping (eps, N_k, r_k).
    """

    j: int
    eps: float
    N_parts: tuple
    r: tuple
    m_loc: GridFunction = field(repr=False)
    g: GridFunction = field(repr=False)
    I: float = 0.0
    I_gamma: dict = field(default_factory=dict, repr=False)
    c_empirical: float = 0.0
    scaling_check: tuple = (0.0, 0.0)


def localized_profile(
    m: MultiplierSpec,
    j: int,
    fam: LPFamily,
    t,
    p,
    q: float,
    eps: float | None = None,
    kind: str = TRIEBEL_LIZORKIN,
) -> DiagnosticProfile:
    """Build the level-j proof profile of ``m`` against the family ``fam``.

    ``m_(j)(xi) = 2^(-j alpha) m(xi) sum_{|k-j| <= M} phi_hat_k(xi)`` on the
    family grid; ``g_(j)`` is its anisotropic rescaling onto the unit-scale
    grid.  I integrates ``|F^-1 g_(j)|`` against the product weight
    ``prod (1+|x_k|)^(1/r_k)``; ``I_gamma = ||F(d^gamma g_(j))||_t'``.  The
    inequality ``I <= c * sum I_gamma`` is recorded through its empirical c.
    """
    av = fam.a
    tv = as_exponents(t, av.n)
    ok, t_sum = admissible(tv)
    if not ok:
        raise ValueError(f"t={tuple(tv)} is not admissible")
    if j < 0:
        raise ValueError("level must be >= 0")
    M = fam.overlap
    if j + M > fam.J:
        raise ValueError(
            f"level {j} needs blocks up to {j + M}, family only has J={fam.J}"
        )
    mus, mu = mu_exponents(p, q, kind)
    if eps is None:
        eps = (m.smoothness - mu - t_sum) / (2.0 * av.n)
        if eps <= 0:
            raise ValueError(
                f"smoothness budget {m.smoothness} does not exceed mu+t={mu + t_sum:.3f}"
            )
    inv_r = tuple(1.0 / mu_k + eps for mu_k in mus)
    N_parts = tuple(ir + (1.0 / t_k + eps) for ir, t_k in zip(inv_r, tv))
    r = tuple(1.0 / ir for ir in inv_r)

    # localized symbol on the family grid
    mesh = np.stack(np.meshgrid(*fam.coords(), indexing="ij"), axis=-1)
    window = np.zeros(fam.dims)
    for k in range(max(0, j - M), min(fam.J, j + M) + 1):
        window = window + fam.phi_hat[k]
    sym_vals = m(mesh)
    m_loc_vals = 2.0 ** (-j * m.alpha) * sym_vals * window
    m_loc = GridFunction(m_loc_vals, fam.extents, FREQUENCY)

    # g_(j): same samples on the grid shrunk by 2^(-j a)
    g_ext = tuple(E * 2.0 ** (-j * ak) for E, ak in zip(fam.extents, av.array))
    g = GridFunction(m_loc_vals, g_ext, FREQUENCY)

    inv = dft_inverse(g)
    xw = 1.0
    for k in range(av.n):
        x = inv.axis_coords(k).reshape([-1 if i == k else 1 for i in range(av.n)])
        xw = xw * (1.0 + np.abs(x)) ** (1.0 / r[k])
    I = float(np.sum(np.abs(inv.values) * xw) * np.prod(inv.spacing))

    t_conj = conjugate(tv)
    I_gamma = {}
    g_phys = GridFunction(g.values, g.extents, "physical")
    for gamma in multi_indices(av.n, m.smoothness):
        dg = _grid_partial(g.values, gamma, g.spacing)
        transformed = dft_forward(g_phys.with_values(dg))
        I_gamma[gamma] = mixed_norm(transformed, t_conj)
    total = sum(I_gamma.values())
    c_emp = I / total if total > 0 else math.inf

    # change-of-variables bookkeeping at gamma = 0:
    # ||m_(j)(2^(j a) .)||_t computed on the shrunk grid must equal
    # 2^(-j a.(1/t)) times the norm on the family grid.
    lhs = mixed_norm(g, tv)
    rhs = 2.0 ** (-j * float(np.dot(av.array, [1.0 / v for v in tv]))) * mixed_norm(
        m_loc, tv
    )
    return DiagnosticProfile(
        j=j, eps=float(eps), N_parts=N_parts, r=r, m_loc=m_loc, g=g,
        I=I, I_gamma=I_gamma, c_empirical=float(c_emp), scaling_check=(lhs, rhs),
    )


# ---------------------------------------------------------------------------
# Boundedness experiments
# ---------------------------------------------------------------------------

def _space_norm(f: GridFunction, prm: SpaceParams, fam: LPFamily) -> float:
    if prm.kind == TRIEBEL_LIZORKIN:
        return tl_norm(f, prm, fam)
    if prm.kind == BESOV:
        return besov_norm(f, prm, fam)
    if prm.kind == GEN_SOBOLEV:
        return gen_sobolev_norm(f, prm.s, prm.p, prm.a)
    if prm.kind == SOBOLEV:
        k = _integer_orders(prm.s, prm.a)
        return sobolev_norm(f, k, prm.p)
    raise ValueError(f"unknown space kind {prm.kind!r}")


def _integer_orders(s: float, a: AnisotropyVector) -> tuple:
    k = [s / ak for ak in a.array]
    rounded = [round(v) for v in k]
    if any(abs(v - r) > 1e-9 or r < 0 for v, r in zip(k, rounded)):
        raise ValueError(
            f"order {s} is not a nonnegative integer multiple of every a_k={tuple(a)}; "
            "classical-Sobolev comparison refused"
        )
    return tuple(int(r) for r in rounded)


@dataclass(frozen=True)
class ExperimentReport:
    """Per-member operator-norm ratios and the gate verdict."""

    kind: str
    target_order: float
    source_order: float
    ratios: tuple
    skipped: tuple
    sup_ratio: float
    label: str

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "target_order": self.target_order,
            "source_order": self.source_order,
            "ratios": list(self.ratios),
            "skipped": list(self.skipped),
            "sup_ratio": self.sup_ratio,
            "label": self.label,
        }


def boundedness_experiment(
    m: MultiplierSpec,
    prm: SpaceParams,
    fam: LPFamily | None,
    ensemble,
    certification: ConditionReport | None = None,
) -> ExperimentReport:
    """Measure ``||T_m f||_(order s) / ||f||_(order s+alpha)`` per member.

    Members with vanishing source norm are skipped (flagged).  The report is
    labeled theorem-certified only when a finite mixed-condition audit is
    supplied whose admissible t and the space parameters put the symbol's
    smoothness budget at or above the required threshold; otherwise it is
    exploratory.
    """
    if len(ensemble) == 0:
        raise ValueError("ensemble must be nonempty")
    source = prm.shifted(m.alpha)
    ratios = []
    skipped = []
    for f in ensemble:
        den = _space_norm(f, source, fam)
        if den == 0.0:
            ratios.append(math.nan)
            skipped.append(True)
            continue
        num = _space_norm(apply_multiplier(m, f), prm, fam)
        ratios.append(float(num / den))
        skipped.append(False)
    finite = [v for v in ratios if not math.isnan(v)]
    sup_ratio = max(finite) if finite else math.nan

    label = EXPLORATORY
    if certification is not None and certification.mode == "Lmixed":
        ok, _ = admissible(certification.t)
        # Sobolev kinds ride on the q = 2 identification for the threshold.
        if prm.kind in (TRIEBEL_LIZORKIN, BESOV):
            kind_mu, q_mu = prm.kind, prm.q
        else:
            kind_mu, q_mu = TRIEBEL_LIZORKIN, 2.0
        if (
            ok
            and certification.finite()
            and m.smoothness >= smoothness_threshold(prm.p, q_mu, certification.t, kind_mu)
        ):
            label = THEOREM_CERTIFIED
    return ExperimentReport(
        kind=prm.kind, target_order=prm.s, source_order=prm.s + m.alpha,
        ratios=tuple(ratios), skipped=tuple(skipped),
        sup_ratio=float(sup_ratio), label=label,
    )
