"""End-to-end acceptance checks, one test per criterion.

Run with -v for a one-line pass/fail report per criterion.
"""

import json
import time

import numpy as np
import pytest

from zlab.blowup import AnsatzSpec, ansatz_norm, blowup_norm_trace
from zlab.cli import main
from zlab.counterexamples import (
    counterexample_c1,
    counterexample_c2,
    duhamel_lower_bound_1,
    duhamel_lower_bound_2,
)
from zlab.cutoffs import beta_a_j, dyadic_scales, psi_n
from zlab.grids import FrequencyGrid, SpaceTimeField, SpaceTimeGrid, SpatialField
from zlab.ground_state import ground_state, radial_mass
from zlab.localize import localize_map
from zlab.projectors import project_dyadic
from zlab.solver import (
    SolverConfig,
    free_schrodinger,
    reduce_data,
    solve_nls,
    solve_reduced,
    solve_speed,
)
from zlab.trilinear import (
    TileSpec,
    check_bilinear_strichartz,
    check_regime,
    fit_exponent,
    trilinear_I,
    trilinear_I_direct,
)


def _gauss_data(half_period, points, amplitude=1.0):
    g = FrequencyGrid(half_period, points)
    x1, x2 = g.x_mesh()
    u0 = SpatialField.from_physical(
        g, amplitude * np.exp(-(x1 ** 2 + x2 ** 2) / 4.0) * (1.0 + 0.3j)
    )
    n0 = SpatialField.from_physical(
        g, 0.5 * amplitude * np.exp(-((x1 - 2.0) ** 2 + x2 ** 2) / 6.0)
    )
    n1 = SpatialField.from_physical(
        g, 0.2 * amplitude * np.exp(-(x1 ** 2 + (x2 + 1.0) ** 2) / 5.0)
    )
    return g, u0, n0, n1


def test_01_partition_of_unity_radial_and_angular_below_1e12_everywhere():
    start = time.monotonic()
    rng = np.random.default_rng(0)
    r = rng.uniform(0.0, 2.0 ** 16, 10 ** 5)
    total = sum(psi_n(n, r) for n in dyadic_scales(2 ** 17))
    assert np.max(np.abs(total - 1.0)) <= 1e-12
    theta = rng.uniform(-np.pi, np.pi, 10 ** 5)
    for a in (4, 16, 64):
        total = sum(beta_a_j(a, j, theta) for j in range(a))
        assert np.max(np.abs(total - 1.0)) <= 1e-12
    assert time.monotonic() - start < 5.0


def test_02_dyadic_projector_support_reconstruction_frame_bounds_100_fields():
    start = time.monotonic()
    grid = FrequencyGrid(4.0, 64)
    bands = grid.dyadic_bands()
    absxi = grid.abs_xi()
    for seed in range(100):
        rng = np.random.default_rng(seed)
        u = SpatialField(
            grid,
            rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64)),
        )
        pieces = [project_dyadic(u, n) for n in bands]
        for n, p in zip(bands, pieces):
            # the lowest band is a low-pass and owns everything down to DC
            outside = absxi > 2.0 * n if n == 1 else (absxi < n / 2.0) | (absxi > 2.0 * n)
            assert np.all(p.values[outside] == 0.0)
        total = sum(p.values for p in pieces)
        assert np.max(np.abs(total - u.values)) <= 1e-12 * np.max(np.abs(u.values))
        sq = sum(p.l2_norm() ** 2 for p in pieces)
        ref = u.l2_norm() ** 2
        assert 0.5 * ref - 1e-9 <= sq <= ref + 1e-9
    assert time.monotonic() - start < 10.0


def test_03_trilinear_fast_correlation_matches_direct_summation_20_instances():
    start = time.monotonic()
    st = SpaceTimeGrid(FrequencyGrid(2.0, 8), 1.0, 8)
    shape = (8, 8, 8)
    for seed in range(20):
        rng = np.random.default_rng(seed)
        f, g1, g2 = (
            SpaceTimeField(
                st, rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            )
            for _ in range(3)
        )
        fast = trilinear_I(f, g1, g2)
        slow = trilinear_I_direct(f, g1, g2)
        assert abs(fast - slow) <= 1e-10 * max(1.0, abs(slow))
    assert time.monotonic() - start < 30.0


_REGIME_POINTS = [
    ("TransLowMod", TileSpec(N=64, N1=256, N2=256, A=64, j1=0, j2=16)),
    ("TransLowMod", TileSpec(N=64, N1=256, N2=256, A=64, j1=0, j2=16, L=4, L2=4)),
    ("TransHighMod", TileSpec(N=64, N1=256, N2=256, L=64, A=64, j1=0, j2=16)),
    ("TransHighMod", TileSpec(N=128, N1=256, N2=256, L1=64, A=256, j1=0, j2=24)),
    ("ParallelHH", TileSpec(N=16, N1=64, N2=64, A=64, j1=0, j2=8)),
    ("ParallelHH", TileSpec(N=32, N1=128, N2=128, A=128, j1=0, j2=12, L=16)),
    ("HighLow", TileSpec(N=8, N1=2, N2=8, L2=64)),
    ("HighLow", TileSpec(N=8, N1=8, N2=2, L1=64)),
    ("SmallWave", TileSpec(N=1, N1=4, N2=4)),
    ("SmallWave", TileSpec(N=2, N1=8, N2=8, L=16)),
]

_BILINEAR_POINTS = [
    ("SchSch", TileSpec(N1=4, N2=4)),
    ("SchSch", TileSpec(N1=4, N2=8, L1=2)),
    ("WaveSchCube", TileSpec(N1=16, cube_side=1.0)),
    ("WaveSchCube", TileSpec(N1=16, cube_side=4.0)),
    ("WaveSchAnnulus", TileSpec(N=2, N1=8)),
    ("WaveSchAnnulus", TileSpec(N=8, N1=8, L=4)),
]


def test_04_estimate_ratios_finite_and_stable_under_lattice_refinement():
    start = time.monotonic()
    seeds = range(25)
    for regime, spec in _REGIME_POINTS:
        r1 = check_regime(spec, regime, seeds, refine=1)
        r2 = check_regime(spec, regime, seeds, refine=2)
        assert np.isfinite(r1.max_ratio) and r1.max_ratio > 0, (regime, spec)
        factor = r2.max_ratio / r1.max_ratio
        assert 0.5 <= factor <= 2.0, (regime, spec, factor)
    for case, spec in _BILINEAR_POINTS:
        r1 = check_bilinear_strichartz(spec, case, seeds, refine=1)
        r2 = check_bilinear_strichartz(spec, case, seeds, refine=2)
        assert np.isfinite(r1.max_ratio) and r1.max_ratio > 0, (case, spec)
        factor = r2.max_ratio / r1.max_ratio
        assert 0.5 <= factor <= 2.0, (case, spec, factor)
    assert time.monotonic() - start < 600.0


def test_05_sharpness_construction_slopes_reach_predicted_exponents():
    start = time.monotonic()
    sizes = [16, 32, 64, 128, 256]
    b = 5.0 / 12.0
    cases = []
    for sigma in (-1.0, -0.5):
        # predicted growth -ell - 1/2: exponents 0 and 1/2
        cases.append((counterexample_c1, sigma, 0.0, -0.5, 0.0))
        cases.append((counterexample_c1, sigma, 0.0, -1.0, 0.5))
        # predicted growth ell - 2k + 1/2: exponents 0 and 1/2
        cases.append((counterexample_c2, sigma, 0.0, -0.5, 0.0))
        cases.append((counterexample_c2, sigma, 0.0, 0.0, 0.5))
    for fn, sigma, k, ell, predicted in cases:
        points = [(n, fn(n, sigma, k, ell, b, b, b)) for n in sizes]
        slope, _ = fit_exponent(points)
        assert slope >= predicted - 0.15, (fn.__name__, sigma, k, ell, slope)
    assert time.monotonic() - start < 120.0


def test_06_duhamel_iterate_lower_bound_slopes_match_normalization():
    start = time.monotonic()
    sizes = [32, 64, 128, 256, 512]
    # values are pre-divided by the predicted power of N, so sharpness means
    # the normalized log-log slope does not fall below -0.15
    for fn, pairs in (
        (duhamel_lower_bound_1, [(0.0, -0.5), (0.5, -1.0)]),
        (duhamel_lower_bound_2, [(0.0, -0.5), (0.5, 0.0)]),
    ):
        for k, ell in pairs:
            points = [(n, fn(n, 1.0, k, ell, 0.5)) for n in sizes]
            slope, _ = fit_exponent(points)
            assert slope >= -0.15, (fn.__name__, k, ell, slope)
    assert time.monotonic() - start < 120.0


def test_07_frequency_interval_map_containment_and_multiplicity():
    start = time.monotonic()
    for n1, a in ((64.0, 8.0), (256.0, 8.0), (256.0, 16.0)):
        report = localize_map(n1, a, mesh=1e-3)
        assert report.violations == 0, (n1, a)
        assert report.max_multiplicity <= 100, (n1, a)
    assert time.monotonic() - start < 60.0


def test_08_solver_mass_conservation_strang_order_and_linear_exactness():
    start = time.monotonic()
    g, u0, n0, n1 = _gauss_data(16.0, 256)
    u, v = reduce_data(u0, n0, n1)

    # relative L2 mass drift over T = 0.1 at dt = 1e-4
    traj = solve_reduced(SolverConfig(g, 1e-4, snapshot_every=100), u, v, 0.1)
    mass = traj.diagnostics_array()[:, 1]
    assert np.max(np.abs(mass - mass[0])) / mass[0] <= 1e-6

    # Strang convergence order: halving dt divides the error by ~4
    T = 0.1

    def endpoint(dt):
        return solve_reduced(SolverConfig(g, dt, snapshot_every=10 ** 9), u, v, T)

    ref = endpoint(T / 640).snapshots[-1]
    e1 = np.max(np.abs(endpoint(T / 40).snapshots[-1].u.values - ref.u.values))
    e2 = np.max(np.abs(endpoint(T / 80).snapshots[-1].u.values - ref.u.values))
    assert 3.5 <= e1 / e2 <= 4.5

    # a single Fourier mode with zero wave field follows the free flow exactly
    x1, _ = g.x_mesh()
    xi = g.xi_1d()
    mode = SpatialField.from_physical(g, 0.5 * np.exp(1j * xi[3] * x1))
    zero = SpatialField(g, np.zeros_like(mode.values))
    out = solve_reduced(
        SolverConfig(g, 1e-3, snapshot_every=10 ** 9), mode, zero, 0.1
    ).snapshots[-1]
    exact = free_schrodinger(mode, 0.1)
    scale = np.max(np.abs(exact.values))
    assert np.max(np.abs(out.u.values - exact.values)) <= 1e-12 * scale
    assert time.monotonic() - start < 300.0


@pytest.fixture(scope="module")
def soliton():
    return ground_state(FrequencyGrid(4.0, 128), tol=1e-10)


def test_09_blowup_family_concentrates_at_inverse_sqrt_rate(soliton):
    start = time.monotonic()
    qp = soliton.to_physical().real
    spec = AnsatzSpec(
        omega=2.0,
        theta=0.0,
        T_blow=4.0,
        profileP=soliton,
        profileN=SpatialField.from_physical(soliton.grid, -qp ** 2),
    )
    taus = np.geomspace(1e-3, 1e-1, 9) * spec.omega
    times = spec.T_blow - taus
    vals = [ansatz_norm(spec, t, -0.5, "n", homogeneous=True) for t in times]
    slope, _ = fit_exponent(zip(taus, vals))
    assert abs(slope + 0.5) <= 0.05
    mass = blowup_norm_trace(spec, times)[:, 3]
    assert np.ptp(mass) / mass[0] <= 1e-6
    assert time.monotonic() - start < 60.0


def test_10_ground_state_residual_and_mass_vs_shooting_oracle(soliton):
    start = time.monotonic()
    g = soliton.grid
    qp = soliton.to_physical().real
    cube = SpatialField.from_physical(g, qp ** 3)
    resid = (1.0 + g.abs_xi() ** 2) * soliton.values - cube.values
    residual = float(np.sqrt(np.sum(np.abs(resid) ** 2)) * g.dxi)
    assert residual <= 1e-8
    mass = soliton.l2_norm() ** 2
    oracle = radial_mass()
    assert abs(mass - oracle) <= 1e-3 * oracle
    assert time.monotonic() - start < 60.0


def test_11_subsonic_runs_approach_cubic_nls_monotonically():
    start = time.monotonic()
    g, u0, _, _ = _gauss_data(16.0, 256)
    T, dt = 0.05, 1e-3
    u_nls = solve_nls(SolverConfig(g, dt, snapshot_every=10 ** 9), u0, T).snapshots[-1].u
    up = u0.to_physical()
    n0 = SpatialField.from_physical(g, -np.abs(up) ** 2)
    n1 = SpatialField(g, np.zeros_like(u0.values))
    dists = []
    for lam in (1, 2, 4, 8):
        cfg = SolverConfig(g, dt, wave_speed=float(lam), snapshot_every=10 ** 9)
        u_lam = solve_speed(cfg, u0, n0, n1, T).snapshots[-1].u
        dists.append(
            float(np.sqrt(np.sum(np.abs(u_lam.values - u_nls.values) ** 2)) * g.dxi)
        )
    assert all(a > b for a, b in zip(dists, dists[1:])), dists
    assert time.monotonic() - start < 300.0


def test_12_same_seed_repeat_runs_emit_byte_identical_csvs(tmp_path):
    commands = [
        ["counterexample", "--lemma", "c1", "--n-max", "64"],
        ["localize-check", "--n1", "64", "--a", "8"],
        ["estimate-sweep", "--seeds", "3"],
        ["lifespan"],
    ]
    for i, argv in enumerate(commands):
        d1, d2 = tmp_path / f"a{i}", tmp_path / f"b{i}"
        for d in (d1, d2):
            assert main(argv + ["--seed", "11", "--out", str(d)]) == 0
        csvs = sorted(p.name for p in d1.iterdir() if p.suffix == ".csv")
        assert csvs, argv
        for name in csvs:
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes(), (argv, name)
        m1 = json.loads((d1 / "manifest.json").read_text())
        assert all(c["pass"] for c in m1["checks"]), argv
