import numpy as np

from gossipcert.rng import uniform_row, uniforms


def test_repeatable():
    a = uniforms(123, np.arange(100), 7, 4)
    b = uniforms(123, np.arange(100), 7, 4)
    np.testing.assert_array_equal(a, b)


def test_batching_irrelevant():
    # drawing streams one at a time matches the batched draw exactly
    batched = uniforms(9, np.arange(50), 3, 2)
    single = np.vstack([uniforms(9, [k], 3, 2) for k in range(50)])
    np.testing.assert_array_equal(batched, single)


def test_distinct_across_axes():
    base = uniforms(1, [0], 0, 1)
    assert uniforms(2, [0], 0, 1) != base
    assert uniforms(1, [1], 0, 1) != base
    assert uniforms(1, [0], 1, 1) != base


def test_range_and_rough_uniformity():
    u = uniforms(5, np.arange(2000), 0, 8).ravel()
    assert np.all((u >= 0.0) & (u < 1.0))
    assert abs(u.mean() - 0.5) < 0.01
    assert abs(u.var() - 1.0 / 12.0) < 0.005


def test_uniform_row_matches():
    np.testing.assert_array_equal(uniform_row(4, 2, 6, 3),
                                  uniforms(4, [2], 6, 3)[0])
