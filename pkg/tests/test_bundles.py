"""Group-law, line-bundle, and pairing structure built on the functionals."""

import numpy as np
import pytest

from prequant import bundles as bd, fields, functionals as fn, gauge


@pytest.fixture(scope="module")
def ws():
    return fn.Workspace(order4=8, order5=5)


@pytest.fixture(scope="module")
def maps():
    return {n: fields.gauge_map(n) for n in
            ("s3.g1", "s3.g2", "s3.g3", "d0.h1", "d0.h2")}


@pytest.fixture(scope="module")
def probes():
    zero = gauge.AmbientConnection(
        lambda x: np.zeros(x.shape + (3, 3), dtype=complex), name="zero")
    return (zero, fields.oneform("s3.B1"), fields.oneform("s3.B2"))


def test_phase_distance():
    assert bd.phase_distance(1.0, 1.0) == 0.0
    assert abs(bd.phase_distance(1.0, np.exp(0.2j)) - 0.2 / (2 * np.pi)) \
        < 1e-12
    # insensitive to a full winding
    a = np.exp(1j * 0.3)
    assert bd.phase_distance(a, a * np.exp(2j * np.pi)) < 1e-12


def test_extension_identity_and_inverse(ws, maps, probes):
    x = bd.ext_element(maps["s3.g1"])
    e = bd.ext_identity()
    B = probes[1]
    assert abs(bd.ext_mul(e, x, ws).lam(B) - x.lam(B)) < 1e-12
    assert abs(bd.ext_mul(x, e, ws).lam(B) - x.lam(B)) < 1e-12
    xi = bd.ext_inverse(x, ws)
    prod = bd.ext_mul(x, xi, ws)
    assert max(abs(prod.lam(A) - 1.0) for A in probes) < 1e-12


def test_extension_associativity_cheap(ws, maps, probes):
    x = bd.ext_element(maps["s3.g1"])
    y = bd.ext_element(maps["s3.g2"])
    z = bd.ext_element(maps["s3.g3"])
    r = bd.ext_assoc_residual(x, y, z, probes, ws)
    assert r < 1e-3


def test_extension_action_unitary_and_equivariant(ws, maps):
    x = bd.ext_element(maps["s3.g1"])
    s = bd.line_element(maps["s3.g3"])
    acted = bd.ext_act(x, s, ws)
    assert abs(abs(acted.fiber) - 1.0) < 1e-12
    assert bd.ext_act_equivariance_residual(x, s, ws) < 1e-8


def test_normal_conjugation_constant_multiplier(ws, maps, probes):
    x = bd.ext_element(maps["s3.g1"])
    out = bd.normal_conjugation_residual(x, maps["d0.h1"], probes[:2], ws)
    assert out["constancy"] < 1e-10
    assert out["residual"] < 1e-10


def test_line_equivalence_certificate(ws, maps):
    s = bd.line_element(maps["s3.g3"], 1.0, "D")
    acted = bd.line_act(maps["d0.h2"], s, ws)
    out = bd.line_equiv_certified(s, acted, maps["d0.h2"], ws)
    assert out["residual"] < 1e-8


def test_line_equivalence_negative_control(ws, maps):
    s = bd.line_element(maps["s3.g3"], 1.0, "D")
    acted = bd.line_act(maps["d0.h2"], s, ws)
    bad = bd.LineElement(acted.gen, acted.fiber * np.exp(0.3j), "D")
    out = bd.line_equiv_certified(s, bad, maps["d0.h2"], ws)
    assert out["residual"] > 0.01


def test_line_equivalence_requires_equator_trivial(ws, maps):
    s = bd.line_element(maps["s3.g3"], 1.0, "D")
    with pytest.raises(ValueError):
        bd.line_equiv_certified(s, s, maps["s3.g1"] * maps["s3.g2"], ws)


def test_wz_identity_element(ws, maps):
    e = bd.wz_identity()
    assert abs(e.fiber - 1.0) < 1e-12
    # multiplying by the identity keeps the fiber of the other factor
    f = maps["s3.g1"] * maps["s3.g2"]
    x = bd.wz_d(f, f * maps["d0.h1"], ws)
    prod = bd.wz_mul(x, e, ws)
    assert bd.phase_distance(prod.fiber, x.fiber) < 1e-10


def test_tensor_pair_assoc_is_componentwise_max(ws, maps, probes):
    x = bd.ext_element(maps["s3.g1"])
    y = bd.ext_element(maps["s3.g2"])
    z = bd.ext_element(maps["s3.g3"])
    out = bd.ext_pair_assoc_residual((x, x), (y, y), (z, z),
                                     (probes, probes), ws)
    single = bd.ext_assoc_residual(x, y, z, probes, ws)
    assert abs(out["combined"] - single) < 1e-15


def test_horizontality_scale_constant(maps):
    ws = fn.Workspace(order4=10, order5=5)
    base = fields.gauge_map("s4.cs1").pure_gauge()
    out = bd.horizontality_check(base, fields.scalar_field("d0.y1"), ws,
                                 order=10)
    # the 2*pi normalization fits; the pi normalization is the control
    assert out["residual_2pi"] < 1e-3
    assert out["residual_pi"] > 0.1
