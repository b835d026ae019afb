import numpy as np
import pytest

from presstop.filters import (
    ProjectionParams,
    apply_density_filter,
    backproject_sensitivities,
    cone_stencil,
    continuation_step,
    grayness_measure,
    make_kernel,
    project,
    project_derivative,
)


def dense_filter_matrix(nelx, nely, rmin):
    """Explicit weight matrix over element centres (zero outside the domain)."""
    n = nelx * nely
    ij = [(r, c) for r in range(nely) for c in range(nelx)]
    w = np.zeros((n, n))
    for a, (r1, c1) in enumerate(ij):
        for b, (r2, c2) in enumerate(ij):
            w[a, b] = max(0.0, rmin - np.hypot(r1 - r2, c1 - c2))
    return w


@pytest.mark.parametrize("rmin", [1.0, 1.5, 2.4, 3.0])
def test_filter_matches_dense_oracle(rmin, rng):
    nelx, nely = 7, 5
    x = rng.random((nely, nelx))
    w = dense_filter_matrix(nelx, nely, rmin)
    hs_all = w.sum(axis=1)
    k = make_kernel(rmin, nelx, nely)
    expected = (w @ x.reshape(-1)) / hs_all
    np.testing.assert_allclose(apply_density_filter(x, k).reshape(-1), expected, rtol=1e-13)
    np.testing.assert_allclose(k.hs.reshape(-1), hs_all, rtol=1e-13)


def test_backprojection_is_filter_transpose(rng):
    nelx, nely, rmin = 6, 4, 2.4
    w = dense_filter_matrix(nelx, nely, rmin)
    k = make_kernel(rmin, nelx, nely)
    jac = w / w.sum(axis=1)[:, None]            # d xtilde / d x
    s = rng.standard_normal((nely, nelx))
    np.testing.assert_allclose(backproject_sensitivities(s, k.hs, k).reshape(-1),
                               jac.T @ s.reshape(-1), rtol=1e-12)


def test_uniform_field_preserved():
    k = make_kernel(2.4, 10, 6)
    np.testing.assert_allclose(apply_density_filter(np.full((6, 10), 0.3), k), 0.3, rtol=1e-14)


def test_stencil_shape():
    assert cone_stencil(2.4).shape == (5, 5)
    assert cone_stencil(1.0).shape == (1, 1)
    assert cone_stencil(6.0).shape == (11, 11)
    with pytest.raises(ValueError):
        cone_stencil(0)


def test_shape_and_divisor_checks():
    k = make_kernel(1.5, 4, 3)
    with pytest.raises(ValueError):
        apply_density_filter(np.zeros((4, 3)), k)
    with pytest.raises(ValueError):
        backproject_sensitivities(np.zeros((3, 4)), np.zeros((3, 4)), k)


def test_projection_identities():
    p = ProjectionParams(beta=8.0)
    assert project(0.0, p) == pytest.approx(0.0, abs=1e-15)
    assert project(1.0, p) == pytest.approx(1.0, abs=1e-15)
    assert project(0.5, p) == pytest.approx(0.5, abs=1e-15)
    # small beta tends to the identity map
    x = np.linspace(0, 1, 11)
    np.testing.assert_allclose(project(x, ProjectionParams(beta=1e-6)), x, atol=1e-10)
    fd = (project(x + 1e-7, p) - project(x - 1e-7, p)) / 2e-7
    np.testing.assert_allclose(project_derivative(x, p), fd, rtol=1e-6)


def test_continuation_schedule():
    p = ProjectionParams(beta=1.0, betamax=256.0)
    betas = []
    for loop in range(1, 251):
        p = continuation_step(loop, p)
        betas.append(p.beta)
    assert betas[23] == 1.0 and betas[24] == 2.0
    # inclusive guard lets the last doubling reach 2 * betamax
    assert betas[-1] == 512.0
    assert betas[224] == 512.0 and betas[223] == 256.0
    with pytest.raises(ValueError):
        continuation_step(0, p)


def test_grayness():
    assert grayness_measure(np.array([0.0, 1.0])) == 0.0
    assert grayness_measure(np.full(4, 0.5)) == pytest.approx(100.0)
