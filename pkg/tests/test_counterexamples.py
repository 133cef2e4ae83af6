import math

import numpy as np
import pytest

from zlab.counterexamples import (
    BoxSpec,
    CharacteristicField,
    WeightSpec,
    box_norm,
    box_product_norm,
    counterexample_c1,
    counterexample_c2,
    duhamel_lower_bound_1,
    duhamel_lower_bound_2,
    trilinear_I_boxes,
)


def test_box_spec_validation():
    with pytest.raises(ValueError):
        BoxSpec((0.0, 0.0), (1.0,))
    with pytest.raises(ValueError):
        BoxSpec((0.0,), (-1.0,))
    b = BoxSpec((1.0, 2.0, 3.0), (2.0, 2.0, 2.0))
    assert b.reflected().center == (-1.0, -2.0, -3.0)
    assert b.interval(2) == (2.0, 4.0)


def test_characteristic_field_validation():
    with pytest.raises(ValueError):
        CharacteristicField([])
    b2 = BoxSpec((0.0, 0.0), (1.0, 1.0))
    b3 = BoxSpec((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        CharacteristicField([(b2, 1.0), (b3, 1.0)])


def test_weight_spec_validation():
    with pytest.raises(ValueError):
        WeightSpec("X", 0.0, 0.0)
    w = WeightSpec("S", 0.0, 0.0)
    assert w(1.0, 0.0, 0.0) == 1.0


def test_box_norm_flat_weight_is_volume():
    b = BoxSpec((3.0, -1.0, 2.0), (2.0, 0.5, 4.0))
    f = CharacteristicField([(b, 2.0)])
    val = box_norm(f, WeightSpec("S", 0.0, 0.0))
    assert np.isclose(val, 2.0 * math.sqrt(2.0 * 0.5 * 4.0), rtol=1e-12)


def test_box_norm_weighted_oracle():
    # single box against a dense Riemann quadrature of the same integral
    b = BoxSpec((2.0, 1.0, -3.0), (1.0, 1.0, 2.0))
    f = CharacteristicField([(b, 1.0)])
    w = WeightSpec("S", 0.5, -0.25)
    val = box_norm(f, w)
    n = 120
    xs = [np.linspace(*b.interval(i), 2 * n + 1) for i in range(3)]
    from scipy.integrate import simpson
    integ = w(xs[0][:, None, None], xs[1][None, :, None], xs[2][None, None, :])
    acc = simpson(simpson(simpson(integ, x=xs[2]), x=xs[1]), x=xs[0])
    assert np.isclose(val, math.sqrt(acc), rtol=1e-8)


def test_box_product_norm_matches_numeric_convolution():
    # flat weight: ||chi_1 * chi_2||_2 for unit cubes, oracle by 1D trapezoid
    b1 = BoxSpec((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    b2 = BoxSpec((0.5, 0.0, 0.0), (1.0, 1.0, 1.0))
    g1 = CharacteristicField([(b1, 1.0)])
    g2 = CharacteristicField([(b2, 1.0)])
    val = box_product_norm(g1, g2, WeightSpec("S", 0.0, 0.0))
    # 1D: int (1 - |x|)^2 dx over [-1, 1] = 2/3 per axis
    assert np.isclose(val, (2.0 / 3.0) ** 1.5, rtol=1e-10)


def test_box_product_norm_conjugate_reflects():
    b1 = BoxSpec((1.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    b2 = BoxSpec((1.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    g1 = CharacteristicField([(b1, 1.0)])
    g2 = CharacteristicField([(b2, 1.0)])
    w = WeightSpec("S", 0.0, 0.0)
    # g1 * reflected(g2) centers at 0; same flat-weight mass either way
    plain = box_product_norm(g1, g2, w)
    conj = box_product_norm(g1, g2, w, conjugate_second=True)
    assert np.isclose(plain, conj, rtol=1e-10)


def test_trilinear_boxes_flat_weight_oracle():
    # f covering the full correlation support: I = int (g1 corr g2) = vol1*vol2
    g1 = CharacteristicField([(BoxSpec((0.0, 0.0, 0.0), (1.0, 1.0, 1.0)), 1.0)])
    g2 = CharacteristicField([(BoxSpec((0.2, -0.1, 0.3), (0.5, 0.5, 0.5)), 1.0)])
    f = CharacteristicField([(BoxSpec((-0.2, 0.1, -0.3), (4.0, 4.0, 4.0)), 1.0)])
    val = trilinear_I_boxes(f, g1, g2)
    assert np.isclose(val.real, 1.0 * 0.125, rtol=1e-10)
    assert abs(val.imag) <= 1e-12
    with pytest.raises(ValueError):
        trilinear_I_boxes(
            CharacteristicField([(BoxSpec((0.0, 0.0), (1.0, 1.0)), 1.0)]), g1, g2
        )


def test_counterexample_validation():
    with pytest.raises(ValueError):
        counterexample_c1(8, -0.5, 0.0, -0.5, 0.4, 0.4, 0.4)
    with pytest.raises(ValueError):
        counterexample_c2(32, 0.5, 0.0, -0.5, 0.4, 0.4, 0.4)


def test_counterexample_values_finite_positive():
    for fn in (counterexample_c1, counterexample_c2):
        v = fn(16, -1.0, 0.0, -0.5, 5.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0)
        assert np.isfinite(v) and v > 0


def test_duhamel_lower_bound_validation():
    with pytest.raises(ValueError):
        duhamel_lower_bound_1(16, 2.0, 0.0, -0.5, 0.5)
    with pytest.raises(ValueError):
        duhamel_lower_bound_1(16, 1.0, 0.0, -0.5, 2.0)
    with pytest.raises(ValueError):
        duhamel_lower_bound_1(4, 1.0, 0.0, -0.5, 0.5)
    with pytest.raises(ValueError):
        duhamel_lower_bound_2(4, 1.0, 0.0, -0.5, 0.5)


def test_duhamel_lower_bound_zero_at_t0():
    assert duhamel_lower_bound_1(16, 1.0, 0.0, -0.5, 0.0) >= 0.0
    v = duhamel_lower_bound_1(16, 1.0, 0.0, -0.5, 0.5)
    assert v > duhamel_lower_bound_1(16, 1.0, 0.0, -0.5, 0.0)
    assert np.isfinite(duhamel_lower_bound_2(16, 1.0, 0.0, -0.5, 0.5))
