import numpy as np
import pytest

from mixnorm_lab.littlewood_paley import (
    LPFamily,
    ResolutionError,
    TransitionProfile,
    build_family,
    lp_block,
    max_resolved_level,
    partition_residual,
)
from mixnorm_lab.mixed_grid import GridFunction, dft_forward, dft_inverse, sample


def _family(a, J, dims=None, margin=2.5):
    a = np.atleast_1d(np.asarray(a, float))
    dims = dims or (96,) * len(a)
    ext = tuple(margin * 2.0 ** (J * ak) for ak in a)
    return build_family(tuple(a), J, dims, ext)


@pytest.mark.parametrize("a", [(1.0,), (2.0,), (1.0, 1.0), (1.0, 2.0)])
@pytest.mark.parametrize("J", [3, 4])
def test_partition_residual_exact(a, J):
    fam = _family(a, J)
    assert partition_residual(fam) <= 1e-12
    assert np.any(fam.covered)


def test_partition_covered_grows_with_J():
    frac = []
    for J in (2, 3, 4):
        fam = _family((1.0,), J, dims=(512,), margin=2.5 * 2.0 ** (4 - J))
        frac.append(fam.covered.mean())
    assert frac[0] < frac[1] < frac[2]


def test_blocks_between_zero_and_one():
    fam = _family((1.0, 2.0), 3)
    for b in fam.phi_hat:
        assert np.all(b >= 0.0) and np.all(b <= 1.0)
        assert np.max(np.abs(b.imag)) == 0.0 if np.iscomplexobj(b) else True


def test_support_certificate_exact_on_grid():
    fam = _family((1.0, 2.0), 3, dims=(128, 128))
    coords = fam.coords()
    for j in range(1, fam.J + 1):
        outer = fam.support_outer(j)
        inner = fam.support_inner(j)
        nz = fam.phi_hat[j] != 0.0
        ax = np.abs(coords[0])[:, None]
        ay = np.abs(coords[1])[None, :]
        inside_outer = (ax <= outer[0]) & (ay <= outer[1])
        inside_hole = (ax < inner[0]) & (ay < inner[1])
        assert not np.any(nz & ~inside_outer)
        assert not np.any(nz & inside_hole)


def test_isotropic_support_matches_punctured_box():
    # a = 1: support box [-2,2]^n minus (-1/2,1/2)^n after level dilation
    fam = _family((1.0,), 4, dims=(1024,))
    xi = fam.coords()[0]
    for j in range(1, 5):
        nz = fam.phi_hat[j] != 0.0
        assert not np.any(nz & (np.abs(xi) > 2.0 * 2.0**j))
        assert not np.any(nz & (np.abs(xi) < 0.5 * 2.0**j))


def test_lower_bound_certificate():
    # phi_hat_j >= 1/2 on the published middle sub-shell
    fam = _family((1.0, 2.0), 3, dims=(160, 160))
    coords = fam.coords()
    a = fam.a.array
    for j in range(1, fam.J + 1):
        sx = np.abs(coords[0])[:, None] * 2.0 ** (-j * a[0])
        sy = np.abs(coords[1])[None, :] * 2.0 ** (-j * a[1])
        plateau = (sx <= 1.0) & (sy <= 1.0)
        outside = ~((sx < 1.5 * 2.0 ** (-a[0])) & (sy < 1.5 * 2.0 ** (-a[1])))
        sub_shell = plateau & outside
        assert np.any(sub_shell)
        assert np.min(fam.phi_hat[j][sub_shell]) >= 0.5 - 1e-12


def test_overlap_radius_is_one():
    for a in ((1.0,), (1.0, 2.0)):
        fam = _family(a, 4)
        assert fam.overlap == 1
        # brute-force: blocks two levels apart never share support
        for j in range(fam.J + 1):
            for k in range(j + 2, fam.J + 1):
                assert np.max(np.abs(fam.phi_hat[j] * fam.phi_hat[k])) == 0.0


def test_window_identity_on_covered_support():
    # sum_{|k-j|<=M} phi_hat_k == 1 wherever phi_hat_j != 0 on the covered set
    fam = _family((1.0, 2.0), 4)
    total = sum(fam.phi_hat)
    for j in range(fam.J + 1):
        window = np.zeros(fam.dims)
        for k in range(max(0, j - fam.overlap), min(fam.J, j + fam.overlap) + 1):
            window = window + fam.phi_hat[k]
        where = (fam.phi_hat[j] != 0.0) & fam.covered
        if np.any(where):
            assert np.max(np.abs(window[where] - 1.0)) <= 1e-12


def test_dilation_consistency_resampled():
    # sampled phi_hat_j must match an independent evaluation of the dilated
    # level-1 profile at common grid points
    fam = _family((1.0, 2.0), 3, dims=(64, 64))
    prof = fam.profile
    a = fam.a.array
    coords = fam.coords()
    for j in range(1, fam.J + 1):
        sx = coords[0][:, None] * 2.0 ** (-j * a[0])
        sy = coords[1][None, :] * 2.0 ** (-j * a[1])
        theta_j = prof(sx) * prof(sy)
        theta_prev = prof(sx * 2.0 ** a[0]) * prof(sy * 2.0 ** a[1])
        assert np.max(np.abs(fam.phi_hat[j] - (theta_j - theta_prev))) <= 1e-12


def test_handcrafted_family_violates_partition():
    fam = _family((1.0,), 3, dims=(256,))
    narrow = build_family((1.0,), 3, (256,), fam.extents,
                          profile=TransitionProfile(plateau=0.8))
    # blocks from the narrow profile, covered set from the standard one:
    broken = LPFamily(
        a=fam.a, J=fam.J, dims=fam.dims, extents=fam.extents,
        profile=fam.profile, phi_hat=narrow.phi_hat, covered=fam.covered,
        overlap=fam.overlap,
    )
    assert partition_residual(broken) > 1e-3


def test_resolution_error_lists_requirements():
    with pytest.raises(ResolutionError) as err:
        build_family((1.0, 2.0), 4, (32, 32), (10.0, 10.0))
    assert "need at least" in str(err.value)
    # truncation opt-in builds anyway
    fam = build_family((1.0, 2.0), 4, (32, 32), (10.0, 10.0), allow_truncation=True)
    assert fam.J == 4


def test_auto_level_selection():
    assert max_resolved_level((1.0,), (40.0,)) == 4
    fam = build_family((1.0,), None, (128,), (40.0,))
    assert fam.J == 4


def test_lp_block_zero_function():
    fam = _family((1.0,), 3, dims=(64,))
    f = GridFunction(np.zeros(64), (np.pi * 64 / (2 * fam.extents[0]),))
    out = lp_block(f, 1, fam)
    assert np.max(np.abs(out.values)) == 0.0


def test_lp_block_disjoint_levels_vanish():
    # f with transform well inside level j0: blocks |k - j0| > M vanish
    a = (1.0,)
    J = 4
    dims = (512,)
    ext = (2.5 * 2.0**J,)
    fam = build_family(a, J, dims, ext)
    L = np.pi * dims[0] / (2 * ext[0])
    j0 = 2
    center = 1.5 * 2.0**j0  # between plateau edge 2^j0 and support edge 2*2^(j0-1)... sits in band
    f = sample(lambda x: np.exp(-((x) ** 2) / (2 * (8 / center) ** 2)) * np.exp(1j * center * x),
               dims, (L,))
    # make it exactly band-limited to the deep interior by masking its transform
    F = dft_forward(f)
    xi = F.axis_coords(0)
    keep = (np.abs(xi) >= 2.0 ** (j0 - 1) * 1.3) & (np.abs(xi) <= 2.0**j0 * 1.9)
    fb = dft_inverse(F.with_values(np.where(keep, F.values, 0.0)))
    norms = [np.max(np.abs(lp_block(fb, k, fam).values)) for k in range(J + 1)]
    peak = max(norms)
    for k in range(J + 1):
        if abs(k - j0) > fam.overlap:
            assert norms[k] <= 1e-12 * peak


def test_lp_block_reconstruction_band_limited():
    a = (1.0, 1.0)
    J = 3
    dims = (64, 64)
    ext = (2.5 * 2.0**J,) * 2
    fam = build_family(a, J, dims, ext)
    L = tuple(np.pi * d / (2 * e) for d, e in zip(dims, ext))
    f = sample(lambda x, y: np.exp(-(x**2 + y**2) / 2) * np.exp(2j * x), dims, L)
    # band-limit below level J-1 with the family's own plateau
    F = dft_forward(f)
    cut = np.ones(dims)
    for k in range(2):
        xi = F.axis_coords(k).reshape([-1 if i == k else 1 for i in range(2)])
        cut = cut * fam.profile(xi * 2.0 ** (-(J - 1) * fam.a.array[k]))
    fb = dft_inverse(F.with_values(F.values * cut))
    rec = np.zeros(dims, complex)
    for j in range(J + 1):
        rec += lp_block(fb, j, fam).values
    rel = np.max(np.abs(rec - fb.values)) / np.max(np.abs(fb.values))
    assert rel <= 1e-6


def test_lp_block_band_limited_output_exact():
    fam = _family((1.0,), 3, dims=(128,))
    L = np.pi * 128 / (2 * fam.extents[0])
    rng = np.random.default_rng(3)
    f = GridFunction(rng.normal(size=128), (L,))
    out = lp_block(f, 2, fam)
    OUT = dft_forward(out)
    outside = fam.phi_hat[2] == 0.0
    assert np.max(np.abs(OUT.values[outside])) <= 1e-12 * np.max(np.abs(OUT.values))


def test_lp_block_level_range_error():
    fam = _family((1.0,), 2, dims=(64,))
    L = np.pi * 64 / (2 * fam.extents[0])
    f = GridFunction(np.ones(64), (L,))
    with pytest.raises(ValueError):
        lp_block(f, 3, fam)
    with pytest.raises(ValueError):
        lp_block(f, -1, fam)
