"""Charts, quadrature, matrix utilities."""

import numpy as np

from prequant import geometry as geo


def test_su_basis_antihermitian_traceless():
    T = geo.su_basis(3)
    assert T.shape == (8, 3, 3)
    for t in T:
        assert np.allclose(t + t.conj().T, 0, atol=1e-14)
        assert abs(np.trace(t)) < 1e-14


def test_expm_matches_rotation():
    th = 0.3
    X = np.array([[0.0, -th], [th, 0.0]])
    R = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    assert np.allclose(geo.expm(X[None])[0], R, atol=1e-14)


def test_expm_unitary_on_su3():
    rng = np.random.default_rng(0)
    T = geo.su_basis(3)
    X = np.einsum("a,aij->ij", rng.normal(size=8), T)
    U = geo.expm(X[None])[0]
    assert np.allclose(U @ U.conj().T, np.eye(3), atol=1e-12)


def test_gauss_points_integrate_polynomials_exactly():
    chart = geo.S3_CHART
    U, W = geo.gauss_points(chart, 6)
    vals = np.prod(U ** 2, axis=0)
    expect = 1.0
    for lo, hi in chart.bounds:
        expect *= (hi ** 3 - lo ** 3) / 3.0
    assert abs(geo.integrate_scalar(vals, W) - expect) < 1e-12 * abs(expect)


def test_s3_chart_embeds_to_unit_sphere():
    U, _ = geo.gauss_points(geo.S3_CHART, 4)
    x = geo.S3_CHART.embed(U)
    assert np.allclose((x ** 2).sum(axis=0), 1.0, atol=1e-12)


def test_s4_hemispheres_cover_unit_sphere_with_signs():
    for chart, sign in ((geo.S4_SOUTH, -1), (geo.S4_NORTH, +1)):
        U, _ = geo.gauss_points(chart, 4)
        x = chart.embed(U)
        assert x.shape[0] == 5
        assert np.allclose((x ** 2).sum(axis=0), 1.0, atol=1e-12)
        assert np.all(sign * x[4] >= -1e-12)
    assert geo.S4_SOUTH.orientation == +1
    assert geo.S4_NORTH.orientation == -1


def test_disc_chart_stays_in_unit_ball():
    U, _ = geo.gauss_points(geo.DISC_CHART, 4)
    x = geo.DISC_CHART.embed(U)
    assert x.shape[0] == 4
    assert np.all((x ** 2).sum(axis=0) <= 1.0 + 1e-12)


def test_fd_partials_fourth_order():
    U, _ = geo.gauss_points(geo.S3_CHART, 3)

    def f(u):
        return (np.sin(u[0]) * np.cos(u[1]) + u[2] ** 3)[..., None, None]

    d = geo.fd_partials(f, U)
    expect0 = np.cos(U[0]) * np.cos(U[1])
    assert np.allclose(d[0, ..., 0, 0], expect0, atol=1e-9)
    expect2 = 3 * U[2] ** 2
    assert np.allclose(d[2, ..., 0, 0], expect2, atol=1e-9)


def test_integrate_traced_words_graded_cyclicity():
    # under the trace, rotating a 1-form letter past a degree-2 block keeps
    # the sign, and past a single 1-form flips it
    chart = geo.S3_CHART
    U, W = geo.gauss_points(chart, 4)
    T = geo.su_basis(3)
    env = {"a": np.einsum("kB,aij->kBij", U, T[:3]),
           "b": np.einsum("kB,aij->kBij", U ** 2, T[2:5]),
           "c": np.einsum("kB,aij->kBij", np.roll(U, 1, axis=0), T[4:7])}

    def I(word, sign=1):
        return geo.integrate_traced_words([(word, sign)], env, W,
                                          chart.orientation)

    lhs = I(("a", "b", "c"))
    scale = max(abs(lhs), 1.0)
    assert abs(I(("b", "c", "a")) - lhs) < 1e-10 * scale
    assert abs(I(("c", "a", "b")) - lhs) < 1e-10 * scale
