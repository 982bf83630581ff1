import math

import numpy as np
import pytest

from mixnorm_lab.mixed_grid import (
    FREQUENCY,
    GridFunction,
    as_exponents,
    conjugate,
    dft_forward,
    dft_inverse,
    hausdorff_young_check,
    holder_check,
    load_grid_function,
    mask_region,
    mixed_norm,
    mixed_power_mean,
    rect_region,
    rect_shell,
    sample,
    save_grid_function,
    shell_cubes,
)
from mixnorm_lab.multipliers import audit_grid


# ---------------------------------------------------------------------------
# container invariants
# ---------------------------------------------------------------------------

def test_grid_function_validation():
    with pytest.raises(ValueError):
        GridFunction(np.zeros((1, 4)), (1.0, 1.0))  # dims >= 2
    with pytest.raises(ValueError):
        GridFunction(np.zeros((4, 4)), (1.0, -1.0))  # positive extents
    with pytest.raises(ValueError):
        GridFunction(np.zeros((4, 4)), (1.0,))  # rank mismatch
    with pytest.raises(ValueError):
        GridFunction(np.zeros((4,)), (1.0,), "momentum")  # unknown tag


def test_grid_function_immutable_and_coords():
    g = GridFunction(np.ones((4, 8)), (2.0, 4.0))
    with pytest.raises(ValueError):
        g.values[0, 0] = 5.0
    x = g.axis_coords(1)
    assert x[0] == -4.0 and len(x) == 8
    assert g.spacing == (1.0, 1.0)


# ---------------------------------------------------------------------------
# mixed norms
# ---------------------------------------------------------------------------

def test_mixed_norm_indicator_unit_square():
    # indicator of [0,1]^2 under p=(1,2): inner L1 integral leaves an
    # indicator in x2, outer L2 then gives 1
    f = sample(lambda x, y: ((x >= 0) & (x < 1) & (y >= 0) & (y < 1)).astype(float),
               (256, 256), (2.0, 2.0))
    assert mixed_norm(f, (1.0, 2.0)) == pytest.approx(1.0, rel=1e-12)


def test_mixed_norm_separable_factorization():
    u = sample(lambda x: np.exp(-(x**2)), (64,), (6.0,))
    v = sample(lambda y: 1.0 / (1.0 + y**2), (48,), (5.0,))
    fv = u.values[:, None] * v.values[None, :]
    f = GridFunction(fv, (6.0, 5.0))
    for p in ((1.0, 2.0), (2.5, 1.0), (math.inf, 3.0)):
        lhs = mixed_norm(f, p)
        rhs = mixed_norm(u, (p[0],)) * mixed_norm(v, (p[1],))
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_mixed_norm_scalar_exponent_matches_lp_riemann():
    rng = np.random.default_rng(5)
    f = GridFunction(rng.normal(size=(32, 20)) + 1j * rng.normal(size=(32, 20)),
                     (3.0, 2.0))
    for p in (0.5, 1.0, 2.0, 3.5):
        direct = (np.sum(np.abs(f.values) ** p) * np.prod(f.spacing)) ** (1 / p)
        assert mixed_norm(f, (p, p)) == pytest.approx(direct, rel=1e-12)


def test_mixed_norm_infinity_axis():
    f = sample(lambda x, y: np.exp(-np.abs(y)) * (1 + x * 0), (16, 64), (1.0, 8.0))
    # sup in x1 then L1 in x2 equals integral of exp(-|y|)
    got = mixed_norm(f, (math.inf, 1.0))
    ref = np.sum(np.exp(-np.abs(f.axis_coords(1)))) * f.spacing[1]
    assert got == pytest.approx(ref, rel=1e-12)


def test_mixed_norm_region_additivity_disjoint_masks():
    rng = np.random.default_rng(9)
    f = GridFunction(rng.normal(size=(24, 24)), (2.0, 2.0))
    m1 = np.zeros((24, 24), dtype=bool)
    m1[:12] = True
    m2 = ~m1
    p = 1.7
    whole = mixed_norm(f, (p, p)) ** p
    parts = (
        mixed_norm(f, (p, p), mask_region(m1)) ** p
        + mixed_norm(f, (p, p), mask_region(m2)) ** p
    )
    assert whole == pytest.approx(parts, rel=1e-12)


def test_mixed_norm_rejects_bad_exponents_and_masks():
    f = GridFunction(np.ones((4, 4)), (1.0, 1.0))
    with pytest.raises(ValueError):
        mixed_norm(f, (0.0, 1.0))
    with pytest.raises(ValueError):
        mixed_norm(f, (-2.0, 1.0))
    with pytest.raises(ValueError):
        mixed_norm(f, (1.0, 1.0), mask_region(np.ones((3, 3), dtype=bool)))


# ---------------------------------------------------------------------------
# conjugation
# ---------------------------------------------------------------------------

def test_conjugate_examples():
    assert conjugate((2.0, 2.0)).entries == (2.0, 2.0)
    assert conjugate((1.0, 2.0)).entries == (math.inf, 2.0)
    got = conjugate((4.0 / 3.0, 1.5))
    assert got.entries[0] == pytest.approx(4.0, rel=1e-12)
    assert got.entries[1] == pytest.approx(3.0, rel=1e-12)


def test_conjugate_involution():
    rng = np.random.default_rng(2)
    p = tuple(1.0 + 9.0 * rng.random(4))
    back = conjugate(conjugate(p))
    assert np.allclose(back.entries, p, rtol=1e-12)
    assert conjugate(conjugate((1.0, math.inf))).entries == (1.0, math.inf)


def test_conjugate_rejects_below_one():
    with pytest.raises(ValueError):
        conjugate((0.9,))


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def test_dft_gaussian_closed_form():
    f = sample(lambda x: np.exp(-(x**2) / 2), (512,), (16.0,))
    F = dft_forward(f)
    xi = F.axis_coords(0)
    want = np.sqrt(2 * np.pi) * np.exp(-(xi**2) / 2)
    window = np.abs(xi) <= 8.0
    assert np.max(np.abs(F.values - want)[window]) <= 1e-6


def test_dft_roundtrip_identity():
    rng = np.random.default_rng(21)
    for dims, ext in (((64,), (5.0,)), ((33, 18), (4.0, 7.0)), ((256, 256), (8.0, 8.0))):
        z = rng.normal(size=dims) + 1j * rng.normal(size=dims)
        f = GridFunction(z, ext)
        back = dft_inverse(dft_forward(f))
        rel = np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values))
        assert rel <= 1e-12


def test_dft_plancherel():
    rng = np.random.default_rng(22)
    f = GridFunction(rng.normal(size=(40, 24)) + 1j * rng.normal(size=(40, 24)),
                     (3.0, 9.0))
    F = dft_forward(f)
    lhs = np.sum(np.abs(f.values) ** 2) * np.prod(f.spacing)
    rhs = (2 * np.pi) ** (-2) * np.sum(np.abs(F.values) ** 2) * np.prod(F.spacing)
    assert abs(lhs - rhs) / lhs <= 1e-10


def test_dft_space_tag_errors():
    f = GridFunction(np.ones((8,)), (1.0,), FREQUENCY)
    with pytest.raises(ValueError):
        dft_forward(f)
    g = GridFunction(np.ones((8,)), (1.0,))
    with pytest.raises(ValueError):
        dft_inverse(g)


# ---------------------------------------------------------------------------
# classical inequalities
# ---------------------------------------------------------------------------

def test_holder_equality_alignment():
    rng = np.random.default_rng(31)
    p = 3.0
    f = GridFunction(rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32)),
                     (2.0, 2.0))
    g = f.with_values(np.abs(f.values) ** (p - 1) * np.exp(1j * np.angle(f.values)))
    ratio, degenerate = holder_check(f, g, (p, p))
    assert not degenerate
    assert ratio == pytest.approx(1.0, abs=1e-12)


def test_holder_random_never_exceeds_one():
    rng = np.random.default_rng(33)
    for _ in range(50):
        f = GridFunction(rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16)),
                         (1.0, 2.0))
        g = GridFunction(rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16)),
                         (1.0, 2.0))
        ratio, _ = holder_check(f, g, (1.0, 2.0))
        assert ratio <= 1.0 + 1e-12


def test_holder_zero_flagged():
    f = GridFunction(np.zeros((8, 8)), (1.0, 1.0))
    g = GridFunction(np.ones((8, 8)), (1.0, 1.0))
    ratio, degenerate = holder_check(f, g, (2.0, 2.0))
    assert ratio == 0.0 and degenerate


def test_hausdorff_young_plancherel_constant():
    # raw ratio at t=(2,2) equals (2 pi)^(n/2) under the unnormalized forward
    f = sample(lambda x, y: np.exp(-(x**2 + y**2) / 2), (64, 64), (10.0, 10.0))
    normalized = hausdorff_young_check(f, (2.0, 2.0))
    raw = normalized * (2 * np.pi) ** (2 - 1.0)
    assert raw == pytest.approx((2 * np.pi) ** 1.0, rel=1e-10)
    assert normalized == pytest.approx(1.0, rel=1e-10)


def test_hausdorff_young_gaussian_admissible():
    f = sample(lambda x, y: np.exp(-(x**2 + 0.5 * y**2) / 2) * (1 + 0.2j),
               (128, 128), (12.0, 12.0))
    for t in ((2.0, 2.0), (2.0, 1.5), (2.0, 1.0)):
        assert hausdorff_young_check(f, t) <= 1.01


def test_hausdorff_young_rejects_inadmissible():
    f = sample(lambda x, y: np.exp(-(x**2 + y**2)), (32, 32), (4.0, 4.0))
    with pytest.raises(ValueError):
        hausdorff_young_check(f, (1.0, 2.0))


# ---------------------------------------------------------------------------
# shells and cubes
# ---------------------------------------------------------------------------

def test_rect_shell_negative_level_empty():
    r = rect_shell(-3, (1.0, 2.0))
    assert r.kind == "empty"
    assert not r.contains(np.zeros((1, 2)))[0]


def test_rect_shell_level_one_1d():
    r = rect_shell(1, (1.0,))
    assert r.contains(np.array([[3.0]]))[0]
    assert r.contains(np.array([[1.0]]))[0]      # inner boundary belongs
    assert not r.contains(np.array([[0.5]]))[0]  # open hole
    assert not r.contains(np.array([[4.5]]))[0]


def test_rect_shell_level_one_anisotropic():
    r = rect_shell(1, (1.0, 2.0))
    assert np.allclose(r.outer, (4.0, 8.0))
    assert np.allclose(r.inner, (1.0, 2.0))
    assert r.contains(np.array([[3.0, 5.0]]))[0]
    assert not r.contains(np.array([[0.5, 1.0]]))[0]


def test_rect_shell_level_zero_solid_box():
    r = rect_shell(0, (1.0, 2.0))
    assert r.kind == "rect"
    assert r.contains(np.array([[0.0, 0.0]]))[0]
    assert r.contains(np.array([[4.0, 8.0]]))[0]
    assert not r.contains(np.array([[4.5, 0.0]]))[0]


def test_shell_cube_counts():
    assert len(shell_cubes(1, (1.0,))) == 6
    assert len(shell_cubes(1, (1.0, 2.0))) == 60
    assert len(shell_cubes(2, (1.0, 1.0, 1.0))) == 2**9 - 2**3
    with pytest.raises(ValueError):
        shell_cubes(0, (1.0,))


def test_shell_cubes_tile_the_shell():
    # cube union must reproduce the shell mask on an aligned grid
    a = (1.0, 2.0)
    j = 1
    shell = rect_shell(j, a)
    g = GridFunction(np.ones((64, 64)), (4.0, 8.0), FREQUENCY)
    shell_mask = shell.to_mask(g)
    union = np.zeros_like(shell_mask)
    for q in shell_cubes(j, a):
        union |= q.to_mask(g)
    assert np.array_equal(shell_mask, shell_mask & union)


def test_shell_cubes_two_sided_norm_estimate():
    # || f ||_{L^p(R_j)} <= sum_mu || f ||_{L^p(Q_mu)} <= k_n || f ||_{L^p(R_j)}
    rng = np.random.default_rng(41)
    a = (1.0, 1.0)
    j = 1
    g = GridFunction(rng.random((64, 64)) + 0.1, (4.0, 4.0), FREQUENCY)
    p = (1.0, 2.0)
    shell = rect_shell(j, a)
    whole = mixed_norm(g, p, shell)
    parts = sum(mixed_norm(g, p, q) for q in shell_cubes(j, a))
    k_n = len(shell_cubes(j, a))
    assert whole <= parts * (1 + 1e-9)
    assert parts <= k_n * whole * (1 + 1e-9)


def test_shell_norm_scaling_law():
    # ||1||_{L^t(R_j)} = c 2^(j a.(1/t)) with c the level-0 norm, j = 0..4
    a = (1.0, 2.0)
    t = (2.0, 1.5)
    vals = []
    for j in range(5):
        pts, weights, mask = audit_grid(j, a, "punctured", resolution=64)
        ones = np.where(mask, 1.0, 0.0)
        from mixnorm_lab.mixed_grid import iterated_norm

        vals.append(iterated_norm(ones, t, weights))
    c = vals[0]
    for j, v in enumerate(vals):
        scale = 2.0 ** (j * (1.0 / t[0] * a[0] + 1.0 / t[1] * a[1]))
        assert v == pytest.approx(c * scale, rel=1e-2)


def test_normalized_chain_monotone_including_endpoints():
    # probability-normalized power means are monotone along 1 <= t <= r <= 2
    rng = np.random.default_rng(43)
    for j in range(4):
        pts, _, mask = audit_grid(j, (1.0, 2.0), "punctured", resolution=32)
        vals = np.where(mask, np.abs(np.sin(pts[..., 0]) + 0.3 + rng.random()), 0.0)
        t = (1.8, 1.2)
        r = (2.0, 1.6)
        chain = [
            mixed_power_mean(vals, (1.0, 1.0)),
            mixed_power_mean(vals, t),
            mixed_power_mean(vals, r),
            mixed_power_mean(vals, (2.0, 2.0)),
        ]
        for lo, hi in zip(chain, chain[1:]):
            assert lo <= hi * (1 + 1e-9)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("fmt", ["bin", "csv"])
def test_serialization_roundtrip_bit_exact(tmp_path, fmt):
    rng = np.random.default_rng(47)
    f = GridFunction(rng.normal(size=(12, 9)) + 1j * rng.normal(size=(12, 9)),
                     (1.5, 2.25), FREQUENCY)
    base = str(tmp_path / "field")
    save_grid_function(f, base, fmt=fmt)
    g = load_grid_function(base)
    assert np.array_equal(f.values, g.values)
    assert f.extents == g.extents
    assert g.space_tag == FREQUENCY


def test_serialization_rejects_corrupt_descriptor(tmp_path):
    f = GridFunction(np.ones((4, 4)), (1.0, 1.0))
    base = str(tmp_path / "field")
    save_grid_function(f, base)
    with open(base + ".meta", "w") as fh:
        fh.write("dims: 4,4\n")  # missing required keys
    with pytest.raises(ValueError):
        load_grid_function(base)
    with open(base + ".meta", "w") as fh:
        fh.write("format: bin\ndims: 9,9\nextents: 1,1\nspace_tag: physical\n")
    with pytest.raises(ValueError):
        load_grid_function(base)
