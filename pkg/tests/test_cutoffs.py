import numpy as np
import pytest

from zlab.cutoffs import beta_a_j, beta_j, dyadic_scales, psi, psi_n, sector_support


def test_psi_plateau_and_support():
    r = np.linspace(-1.0, 1.0, 41)
    assert np.max(np.abs(psi(r) - 1.0)) == 0.0
    r = np.array([-3.0, -2.0, 2.0, 2.5, 10.0])
    assert np.max(np.abs(psi(r))) == 0.0
    mid = psi(np.linspace(1.0, 2.0, 101))
    assert np.all(mid >= 0.0) and np.all(mid <= 1.0)


def test_psi_even():
    r = np.linspace(0.0, 3.0, 301)
    assert np.allclose(psi(r), psi(-r), rtol=0, atol=0)


def test_psi_n_support():
    r = np.linspace(0.0, 40.0, 2001)
    vals = psi_n(8, r)
    assert np.all(vals[(r < 4.0) | (r > 16.0)] == 0.0)
    assert np.all(vals[(r >= 8.0 - 1e-9) & (r <= 8.0 + 1e-9)] > 0.99)


def test_psi_n_partition_of_unity():
    r = np.linspace(0.0, 500.0, 10001)
    total = sum(psi_n(n, r) for n in dyadic_scales(2048))
    assert np.max(np.abs(total - 1.0)) <= 1e-12


def test_psi_n_rejects_non_dyadic():
    with pytest.raises(ValueError):
        psi_n(3, 1.0)
    with pytest.raises(ValueError):
        psi_n(0, 1.0)


def test_beta_j_partition():
    s = np.linspace(-5.0, 5.0, 1001)
    total = sum(beta_j(j, s) for j in range(-8, 9))
    assert np.max(np.abs(total - 1.0)) <= 1e-12


def test_beta_a_j_partition_and_seam():
    theta = np.linspace(-np.pi, np.pi, 4001)
    for a in (4, 16):
        total = sum(beta_a_j(a, j, theta) for j in range(a))
        assert np.max(np.abs(total - 1.0)) <= 1e-12


def test_beta_a_j_antipodal():
    theta = np.linspace(-np.pi, np.pi, 101)
    for j in (0, 3, 7):
        assert np.allclose(
            beta_a_j(8, j, theta), beta_a_j(8, j, theta + np.pi), atol=1e-12
        )


def test_sector_support_contains_cutoff():
    theta = np.linspace(-np.pi, np.pi, 2001)
    for j in (0, 5, 12):
        vals = beta_a_j(16, j, theta)
        mask = sector_support(16, j, theta)
        assert np.all(vals[~mask] == 0.0)


def test_dyadic_scales():
    assert dyadic_scales(1) == [1]
    assert dyadic_scales(16) == [1, 2, 4, 8, 16]
    assert dyadic_scales(20) == [1, 2, 4, 8, 16]
