"""Lattice covariant calculus: adjointness, Green operators, splittings."""

import numpy as np
import pytest

from prequant import hodge


@pytest.fixture(scope="module")
def grid():
    return hodge.LatticeGrid(6, 2)


@pytest.fixture(scope="module")
def data(grid):
    rng = np.random.default_rng(7)
    return {
        "A": grid.random_oneform(rng, scale=0.4),
        "xi0": grid.random_scalar(rng, interior=True),
        "xi_any": grid.random_scalar(rng),
        "a": grid.random_oneform(rng),
        "b": grid.random_oneform(rng),
    }


def test_adjointness_dirichlet(grid, data):
    lhs = grid.ip_oneform(hodge.d_A(data["A"], data["xi0"], grid), data["a"])
    rhs = grid.ip_scalar(data["xi0"],
                         hodge.d_A_star(data["A"], data["a"], grid,
                                        dirichlet=True))
    assert abs(lhs - rhs) < 1e-12


def test_adjointness_full(grid, data):
    lhs = grid.ip_oneform(hodge.d_A(data["A"], data["xi_any"], grid),
                          data["a"])
    rhs = grid.ip_scalar(data["xi_any"],
                         hodge.d_A_star(data["A"], data["a"], grid))
    assert abs(lhs - rhs) < 1e-12


def test_dirichlet_green_inverts_laplacian(grid, data):
    f = hodge.laplacian(data["A"], data["xi0"], grid, dirichlet=True)
    res = hodge.dirichlet_green(data["A"], f, grid)
    assert res.residual < 1e-8
    err = grid.norm_scalar(res.solution - data["xi0"])
    assert err / grid.norm_scalar(data["xi0"]) < 1e-8


def test_dirichlet_green_rejects_boundary_support(grid, data):
    bad = data["xi_any"] * grid.boundary_mask()[..., None, None]
    with pytest.raises(ValueError):
        hodge.dirichlet_green(data["A"], bad, grid)


def test_decompose0_orthogonal_and_complete(grid, data):
    xi, h, info = hodge.decompose0(data["A"], data["a"], grid)
    assert info["orthogonality"] < 1e-7
    assert info["d_star_residual"] < 1e-7
    recon = hodge.d_A(data["A"], xi, grid) + h
    assert grid.norm_oneform(recon - data["a"]) < 1e-7


def test_decompose0_kills_pure_gradient(grid, data):
    g = hodge.d_A(data["A"], data["xi0"], grid)
    _, h, _ = hodge.decompose0(data["A"], g, grid)
    assert grid.norm_oneform(h) / grid.norm_oneform(g) < 1e-7


def test_full_decomposition_idempotent(grid, data):
    xi, eta, c, info = hodge.decompose_full(data["A"], data["a"], grid)
    assert info["orthogonality"] < 1e-7
    _, _, c3, _ = hodge.decompose_full(data["A"], c, grid)
    assert grid.norm_oneform(c3 - c) / grid.norm_oneform(c) < 1e-7


def test_neumann_projects_constants_at_zero_connection(grid, data):
    A0 = grid.zeros_oneform()
    r = hodge.neumann_green(A0, data["xi_any"], grid)
    assert r.converged
    assert r.projection_norm > 0.0
    # solution is orthogonal to the constant kernel
    for mode in hodge._constant_modes(grid):
        assert abs(grid.ip_scalar(r.solution, mode)) < 1e-9


def test_curvature_form_antisymmetric(grid, data):
    faa = hodge.curvature_form_F0(data["A"], data["a"], data["a"], grid)
    assert grid.norm_scalar(faa) < 1e-12
    fab = hodge.curvature_form_F0(data["A"], data["a"], data["b"], grid)
    fba = hodge.curvature_form_F0(data["A"], data["b"], data["a"], grid)
    assert grid.norm_scalar(fab + fba) < 1e-9


def test_trace_pairing_vanishes_on_traceless(grid, data):
    assert abs(hodge.phi_pairing(data["A"], data["a"], data["b"],
                                 grid)) < 1e-10


def test_flat_curl_of_gradient_exact_zero(grid, data):
    A0 = grid.zeros_oneform()
    curl = hodge.covariant_curl(A0, hodge.d_A(A0, data["xi0"], grid), grid)
    assert np.max(np.abs(curl)) < 1e-13


def test_serialization_roundtrip(grid, data):
    for name, kind in (("a", "oneform"), ("xi_any", "scalar")):
        buf = hodge.serialize_field(data[name])
        back = hodge.deserialize_field(buf, grid, kind)
        assert np.array_equal(back, data[name])


def test_serialization_is_deterministic(grid, data):
    assert hodge.serialize_field(data["a"]) == hodge.serialize_field(
        data["a"])
