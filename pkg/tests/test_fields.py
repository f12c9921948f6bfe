"""The named analytic field catalog and its boundary conditions."""

import numpy as np

from prequant import fields, gauge
from prequant import geometry as geo


def test_catalog_names_nonempty():
    names = fields.names()
    assert "s3.g1" in names and "s4.A1" in names and "d0.h1" in names


def test_s3_maps_are_identity_at_basepoint():
    p0 = gauge.BASEPOINT_DISC[:, None]
    for name in ("s3.g1", "s3.g2", "s3.g3"):
        g = fields.gauge_map(name)
        v = g.values(geo.DISC_CHART, p0)
        assert np.allclose(v[0], np.eye(3), atol=1e-12)


def test_hemisphere_maps_are_identity_on_equator():
    rng = np.random.default_rng(2)
    B = 16
    # the equator of the north chart is psi = pi/2 (first parameter 1 after
    # the cone rescale used by the chart box)
    U = np.vstack([np.ones(B), rng.uniform(0.3, 2.8, (2, B)),
                   rng.uniform(0.0, 6.2, B)[None]])
    for name in ("d0.h1", "d0.h2", "d0.h3"):
        h = fields.gauge_map(name)
        v = h.values(geo.S4_NORTH, U)
        assert np.abs(v - np.eye(3)).max() < 1e-10


def test_gauge_map_values_unitary():
    U, _ = geo.gauss_points(geo.S3_CHART, 3)
    g = fields.gauge_map("s3.g2")
    v = g.values(geo.S3_CHART, U)
    assert np.allclose(v @ v.conj().transpose(0, 2, 1), np.eye(3), atol=1e-12)


def test_oneform_components_shape_and_antihermitian():
    A = fields.oneform("d.A1")
    U, _ = geo.gauss_points(geo.DISC_CHART, 3)
    a = A.components(geo.DISC_CHART, U)
    assert a.shape == (4, U.shape[1], 3, 3)
    assert np.allclose(a + a.conj().transpose(0, 1, 3, 2), 0, atol=1e-12)


def test_scalar_field_traceless_antihermitian():
    xi = fields.scalar_field("d.xi1")
    U, _ = geo.gauss_points(geo.DISC_CHART, 3)
    v = xi(geo.DISC_CHART, U)
    assert np.allclose(np.trace(v, axis1=-2, axis2=-1), 0, atol=1e-12)
    assert np.allclose(v + v.conj().transpose(0, 2, 1), 0, atol=1e-12)


def test_dim5_field_restricts_to_equator():
    # evaluating a 5-dim catalog entry on a 4-dim chart sets the extra
    # coordinate to zero, so equator-vanishing entries restrict to zero
    y = fields.scalar_field("d0.y1")
    U, _ = geo.gauss_points(geo.S3_CHART, 3)
    v = y(geo.S3_CHART, U)
    assert np.abs(v).max() < 1e-14


def test_pure_gauge_ambient_is_flat():
    A = fields.pure_gauge_ambient("s3.g1")
    rng = np.random.default_rng(4)
    U = np.stack([rng.uniform(0.2, 0.8, 6), rng.uniform(0.5, 2.5, 6),
                  rng.uniform(0.5, 2.5, 6), rng.uniform(0.5, 5.5, 6)])
    F = A.curvature(geo.DISC_CHART, U)
    assert np.abs(F).max() < 1e-6
