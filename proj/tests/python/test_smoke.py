import numpy as np
import pytest

import sparseproj as sp

EXAMPLE = np.array(
    [
        [1, 2, 14, 9, -14, 9, -1, 5, -11, 7],
        [8, 2, -6, -13, -24, -13, -6, 1, 4, -11],
        [-3, -2, 3, -1, -6, 3, 18, -2, -2, -19],
    ],
    dtype=float,
)


def test_spar_extremes():
    assert sp.spar(np.array([0.0, 0.0, 5.0])) == pytest.approx(1.0)
    assert sp.spar(np.ones(4)) == pytest.approx(0.0)
    assert sp.spar_weighted(np.array([1.0, 2.0]), np.ones(2)) == pytest.approx(sp.spar(np.array([1.0, 2.0])))


def test_worked_example_projection():
    assert sp.average_sparsity(EXAMPLE) == pytest.approx(0.3303, abs=1e-4)
    r = sp.project(EXAMPLE, 0.8)
    assert r.iterations == 4
    assert r.achieved_sparsity == pytest.approx(0.8, abs=1e-4)
    y = r.as_rows()
    assert y.shape == EXAMPLE.shape
    assert y[1, 4] == pytest.approx(-27.37, abs=0.01)
    assert np.all(y * EXAMPLE >= 0)


def test_discontinuity_is_reported():
    r = sp.project(EXAMPLE, 0.9)
    assert r.discontinuous
    lo, hi = r.sparsity_band
    assert lo == pytest.approx(0.8736, abs=1e-3)
    assert hi == pytest.approx(0.9375, abs=1e-3)


def test_columns_and_weights():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((20, 6))
    r = sp.project(a, 0.7, axis="cols")
    assert sp.average_sparsity(r.as_columns(), axis="cols") == pytest.approx(0.7, abs=1e-4)
    w = sp.project_weighted(a, np.ones(20), 0.7, axis="cols")
    assert np.allclose(w.as_columns(), r.as_columns(), atol=1e-9)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        sp.project(EXAMPLE, 1.5)
    with pytest.raises(ValueError):
        sp.project(EXAMPLE, 0.5, axis="diagonal")
    with pytest.raises(ValueError):
        sp.nmf(np.ones((4, 4)), 2, variant="nope")


def test_nmf_on_synthetic_data():
    y, x_true, h_true, true_s = sp.synthetic_nmf(30, 40, 4, 11)
    assert np.allclose(y, x_true @ h_true)
    r = sp.nmf(y, 4, variant="psnmf", s=true_s, iters=100, seed=1)
    assert len(r.error_trace) == 100
    assert r.best_error == min(r.error_trace)
    assert abs(r.sparsity_trace[-1] - true_s) <= 1e-4
    again = sp.nmf(y, 4, variant="psnmf", s=true_s, iters=100, seed=1)
    assert np.array_equal(r.X, again.X)


def test_weighted_nmf_with_radial_map():
    y, *_ = sp.synthetic_nmf(30, 20, 3, 5)
    w = sp.radial_weights(6, 5, 2.0)
    r = sp.nmf(y, 3, variant="wsnmf", s=0.5, iters=20, weights=w.reshape(-1, 1))
    assert r.X.shape == (30, 3)
    assert np.all(r.X >= 0)
