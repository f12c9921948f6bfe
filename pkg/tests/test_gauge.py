"""Gauge maps, the right action on connections, and parallel transport."""

import numpy as np
import pytest

from prequant import cli, fields, gauge
from prequant import geometry as geo


def _targets(rng, B=8):
    return np.stack([
        rng.uniform(0.15, 0.9, B),
        rng.uniform(0.3, np.pi - 0.3, B),
        rng.uniform(0.3, np.pi - 0.3, B),
        rng.uniform(0.2, 2 * np.pi - 0.2, B),
    ])


def test_pure_gauge_connection_components():
    f = fields.gauge_map("s3.g1")
    A = f.pure_gauge()
    U, _ = geo.gauss_points(geo.DISC_CHART, 3)
    a = A.components(geo.DISC_CHART, U)
    v = f.values(geo.DISC_CHART, U)
    dv = geo.fd_partials(lambda V: f.values(geo.DISC_CHART, V), U)
    expect = np.einsum("Bij,kBjl->kBil", np.linalg.inv(v), dv)
    assert np.abs(a - expect).max() < 1e-8


def test_gauge_action_composes():
    f = fields.gauge_map("s3.g1")
    g = fields.gauge_map("s3.g2")
    A = fields.oneform("d.A1")
    U, _ = geo.gauss_points(geo.DISC_CHART, 3)
    lhs = gauge.gauge_act(g, gauge.gauge_act(f, A)).components(
        geo.DISC_CHART, U)
    rhs = gauge.gauge_act(f * g, A).components(geo.DISC_CHART, U)
    assert np.abs(lhs - rhs).max() < 1e-8


def test_inverse_map_cancels():
    f = fields.gauge_map("s3.g3")
    prod = f * gauge.InverseGaugeMap(f)
    U, _ = geo.gauss_points(geo.S3_CHART, 3)
    assert np.abs(prod.values(geo.S3_CHART, U) - np.eye(3)).max() < 1e-12


def test_glued_map_seam_is_continuous():
    f = fields.gauge_map("s4.g1")
    gl = gauge.glue_maps(f, f)
    assert gl.boundary_mismatch() < 1e-10


def test_glue_rejects_mismatched_seam():
    f = fields.gauge_map("s4.g1")
    g = fields.gauge_map("s4.g2")
    with pytest.raises(ValueError):
        gauge.glue_maps(f, g)


def test_transport_recovers_generating_map():
    rng = np.random.default_rng(3)
    targets = _targets(rng)
    f = fields.gauge_map("s3.g1")
    A = f.pure_gauge()
    fa = gauge.reconstruct_gauge(A, geo.DISC_CHART, targets, n_steps=96)
    fv = f.values(geo.DISC_CHART, targets)
    assert np.abs(fa - fv).max() < 1e-5


def test_transport_path_independence_and_equivariance():
    cfg = cli.RunConfig(suite="holonomy")
    results = cli.run_holonomy(cfg)
    for r in results:
        assert r["passed"], (r["identity_id"], r["residual"])


def test_transport_rejects_curved_connection():
    A = fields.oneform("d.A1")
    rng = np.random.default_rng(5)
    with pytest.raises(ValueError):
        gauge.reconstruct_gauge(A, geo.DISC_CHART, _targets(rng), n_steps=16)


def test_cone_extension_restricts_to_boundary_map():
    f = fields.gauge_map("s4.g1")
    cone = gauge.ConeExtension(f)
    # at the cone boundary (first parameter 1) the extension agrees with f
    rng = np.random.default_rng(6)
    B = 8
    U4 = np.vstack([rng.uniform(0.1, 0.9, B)[None],
                    rng.uniform(0.3, np.pi - 0.3, (2, B)),
                    rng.uniform(0.3, 2 * np.pi - 0.3, B)[None]])
    U5 = np.vstack([np.ones(B), U4])
    got = cone.values(geo.BALL5_SOUTH, U5)
    want = f.values(geo.S4_SOUTH, U4)
    assert np.abs(got - want).max() < 1e-10
    # at the cone tip (first parameter 0) it collapses to the identity
    U0 = np.vstack([np.zeros(B), U4])
    assert np.abs(cone.values(geo.BALL5_SOUTH, U0) - np.eye(3)).max() < 1e-12
