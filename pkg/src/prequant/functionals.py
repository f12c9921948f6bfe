"""Numeric evaluation of the action functionals and the symplectic data.

Everything is driven by the exact symbolic trace expressions from
:mod:`prequant.algebra`: a cochain body is compiled against per-chart field
data (gauge-map values/derivatives, connection components, curvature) and
integrated as a top-degree form.  The single normalization constant

    K = i / (24 pi^3)

multiplies every 4-D/5-D cochain integral; the 5-disc functional and the
two-argument circle-valued cocycles are all K times an integral of one of
the descent cochains, which is what makes the identities hold numerically
with no per-formula constant juggling.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import algebra as alg
from . import geometry as geo
from .gauge import Connection, GaugeMap, LinearComboConnection, gauge_act

__all__ = [
    "K_NORM",
    "ModZValue",
    "mod_z",
    "Workspace",
    "c5",
    "gamma_pw",
    "big_gamma",
    "theta",
    "big_gamma_disc",
    "theta_disc",
    "cs_s4",
    "cs_gradient_form",
    "moment",
    "omega",
    "theta_conn",
    "mickelsson_cocycle",
    "beta_disc",
    "covariant_scalar_derivative",
    "infinitesimal_symplectic_check",
]

K_NORM = 1j / (24 * np.pi ** 3)

DEFAULT_ORDER4 = 8
DEFAULT_ORDER5 = 5


class ModZValue(NamedTuple):
    value: float
    integer_distance: float


def mod_z(x: float) -> ModZValue:
    x = float(np.real(x))
    return ModZValue(x, abs(x - round(x)))


class Workspace:
    """Shared quadrature grids and cached field data for one suite run.

    Caching is keyed by object identity, chart, and order; the cached
    object is kept alive in the value so identity keys stay valid.
    """

    def __init__(self, order4: int = DEFAULT_ORDER4, order5: int = DEFAULT_ORDER5):
        self.order4 = order4
        self.order5 = order5
        self._pts: dict = {}
        self._data: dict = {}
        self._cones: dict = {}

    def pts(self, chart: geo.Chart, order: int):
        key = (chart.name, order)
        if key not in self._pts:
            self._pts[key] = geo.gauss_points(chart, order)
        return self._pts[key]

    def _memo(self, tag, obj, chart, order, thunk):
        key = (tag, id(obj), chart.name, order)
        if key not in self._data:
            self._data[key] = (obj, thunk())
        return self._data[key][1]

    def cone_of(self, gmap: GaugeMap, profile=None):
        key = (id(gmap), id(profile) if profile is not None else None)
        if key not in self._cones:
            self._cones[key] = (gmap, profile, gmap.cone(profile))
        return self._cones[key][2]

    def gdata(self, gmap: GaugeMap, chart, order):
        U, _ = self.pts(chart, order)
        return self._memo("g", gmap, chart, order, lambda: gmap.data(chart, U))

    def comps(self, A: Connection, chart, order):
        U, _ = self.pts(chart, order)
        return self._memo("a", A, chart, order, lambda: A.components(chart, U))

    def curv(self, A: Connection, chart, order):
        U, _ = self.pts(chart, order)
        return self._memo("f", A, chart, order, lambda: A.curvature(chart, U))


def _build_env(ws: Workspace, expr: alg.TraceExpr, chart, order,
               slot_maps: dict | None = None, A: Connection | None = None,
               extra: dict | None = None) -> dict:
    env = dict(extra or {})
    needed = {let for word, _ in expr.items() for let in word
              if isinstance(let, alg.Letter)}
    for let in needed:
        if let.kind == "A":
            env[let] = ws.comps(A, chart, order)
        elif let.kind == "F":
            env[let] = ws.curv(A, chart, order)
        else:
            g, gi, dg = ws.gdata(slot_maps[let.slot], chart, order)
            env[let] = {"G": g, "Gi": gi, "DG": dg}[let.kind]
    return env


def cochain_integral(ws: Workspace, expr: alg.TraceExpr, charts, order,
                     slot_maps: dict | None = None, A: Connection | None = None,
                     extra: dict | None = None) -> complex:
    """K * integral of a traced cochain body over the given charts."""
    total = 0.0 + 0.0j
    for chart in charts:
        _, W = ws.pts(chart, order)
        env = _build_env(ws, expr, chart, order, slot_maps, A, extra)
        total += geo.integrate_traced_words(expr.items(), env, W,
                                            chart.orientation)
    return K_NORM * total


# region shorthands: D = south hemisphere alone, D' = north alone
_REGIONS = {
    "D": (geo.S4_SOUTH,),
    "D'": (geo.S4_NORTH,),
    "S4": geo.S4_REGION,
}

_C12 = alg.c12_4d(1).body
_C11 = alg.c11_4d(1).body
_C21 = alg.c21_4d(1, 2).body
_C20 = alg.c20_4d(1, 2).body


# ---------------------------------------------------------------------------
# 5-disc functional and the group 2-cocycle on maps
# ---------------------------------------------------------------------------


def c5(gmap: GaugeMap, ws: Workspace, order: int | None = None,
       profile=None) -> complex:
    """(i/240 pi^3) * int_{5-disc} Tr(dg g^{-1})^5 of a cone extension."""
    order = order or ws.order5
    cone = ws.cone_of(gmap, profile)
    return cochain_integral(ws, _C12, geo.BALL5_REGION, order, {1: cone})


def gamma_pw(f: GaugeMap, g: GaugeMap, ws: Workspace,
             order: int | None = None) -> complex:
    """Product defect: c5(f g) - c5(f) - c5(g) mod Z."""
    order = order or ws.order4
    return cochain_integral(ws, _C21, geo.S4_REGION, order, {1: f, 2: g})


def big_gamma(g: GaugeMap, A: Connection, ws: Workspace,
              order4: int | None = None, order5: int | None = None) -> complex:
    """Gamma(g, A): the log of the circle cocycle on the sphere."""
    part1 = cochain_integral(ws, _C11, geo.S4_REGION, order4 or ws.order4,
                             {1: g}, A=A)
    return part1 + c5(g, ws, order5)


def theta(g: GaugeMap, A: Connection, ws: Workspace, **kw) -> complex:
    return np.exp(2j * np.pi * big_gamma(g, A, ws, **kw))


def big_gamma_disc(g: GaugeMap, A: Connection, ws: Workspace,
                   region: str = "D", order4: int | None = None,
                   order5: int | None = None) -> complex:
    """Gamma restricted to one hemisphere, for g trivial on the equator.

    The 5-disc part extends g by the identity over the other hemisphere.
    """
    from .gauge import ConstantGaugeMap, GluedGaugeMap

    order4 = order4 or ws.order4
    part1 = cochain_integral(ws, _C11, _REGIONS[region], order4, {1: g}, A=A)
    key = ("glue1", id(g), region)
    if key not in ws._cones:
        one = ConstantGaugeMap()
        glued = (GluedGaugeMap(g, one, check=False) if region == "D"
                 else GluedGaugeMap(one, g, check=False))
        ws._cones[key] = (g, None, glued)
    return part1 + c5(ws._cones[key][2], ws, order5)


def theta_disc(g, A, ws, region="D", **kw) -> complex:
    return np.exp(2j * np.pi * big_gamma_disc(g, A, ws, region=region, **kw))


# ---------------------------------------------------------------------------
# Chern-Simons on the sphere
# ---------------------------------------------------------------------------


def cs_s4(A: Connection, ws: Workspace, order: int | None = None) -> complex:
    """CS of a flat sphere connection, via its generating map.

    Flat connections enter the suites as explicit pure-gauge objects, so the
    generating map is read off rather than re-solved from holonomy.
    """
    from .gauge import PureGaugeConnection

    if not isinstance(A, PureGaugeConnection):
        raise TypeError("cs_s4 expects an explicit pure-gauge connection")
    return c5(A.f, ws, order)


def cs_gradient_form(A: Connection, a, ws: Workspace,
                     order: int | None = None) -> complex:
    """(i/48 pi^3) int_{S^4} Tr[A^3 a]: the exterior derivative of CS."""
    order = order or ws.order4
    LA = alg.A()
    expr = [((LA, LA, LA, "a"), 1)]
    total = 0.0 + 0.0j
    for chart in geo.S4_REGION:
        U, W = ws.pts(chart, order)
        env = {LA: ws.comps(A, chart, order), "a": a.components(chart, U)}
        total += geo.integrate_traced_words(expr, env, W, chart.orientation)
    return (K_NORM / 2) * total


# ---------------------------------------------------------------------------
# moment map and symplectic structure on the 4-manifold with boundary
# ---------------------------------------------------------------------------


def moment(A: Connection, xi_fn, ws: Workspace, order: int | None = None,
           chart: geo.Chart = geo.DISC_CHART) -> complex:
    """Phi^xi(A) = (1/8 pi^3) int_M Tr(F F xi)."""
    order = order or ws.order4
    U, W = ws.pts(chart, order)
    F = ws.curv(A, chart, order)
    xi = xi_fn(chart, U)
    expr = [((alg.F(), alg.F(), "xi"), 1)]
    I = geo.integrate_traced_words(expr, {alg.F(): F, "xi": xi}, W,
                                   chart.orientation)
    return I / (8 * np.pi ** 3)


def omega(A: Connection, a, b, ws: Workspace, order: int | None = None,
          chart: geo.Chart = geo.DISC_CHART,
          boundary: geo.Chart = geo.S3_CHART) -> dict:
    """Symplectic form: bulk term, boundary term, and the (identically
    vanishing) trace of the curvature correction.

    omega0 = (1/8 pi^3)  int_M  Tr[(ab - ba) F]
    omega' = -(1/24 pi^3) int_dM Tr[(ab - ba) A]
    The remaining correction is the integral of the trace of a traceless
    field, hence exactly zero; it is reported as 0.0 for completeness.
    """
    order = order or ws.order4
    U, W = ws.pts(chart, order)
    F = ws.curv(A, chart, order)
    env = {"a": a.components(chart, U), "b": b.components(chart, U),
           alg.F(): F}
    expr = [(("a", "b", alg.F()), 1), (("b", "a", alg.F()), -1)]
    w0 = geo.integrate_traced_words(expr, env, W, chart.orientation) / (8 * np.pi ** 3)

    Ub, Wb = ws.pts(boundary, order)
    envb = {"a": a.components(boundary, Ub), "b": b.components(boundary, Ub),
            "A": A.components(boundary, Ub)}
    exprb = [(("a", "b", "A"), 1), (("b", "a", "A"), -1)]
    wp = -geo.integrate_traced_words(exprb, envb, Wb, boundary.orientation) / (
        24 * np.pi ** 3
    )
    return {"omega0": w0, "omega_prime": wp, "phi": 0.0, "total": w0 + wp}


def covariant_scalar_derivative(A: Connection, xi_fn):
    """d_A xi = d xi + [A, xi] as a tangent-field object."""

    class _Tangent(Connection):
        def components(self, chart, U):
            dxi = geo.fd_partials(lambda V: xi_fn(chart, V), U)
            a = A.components(chart, U)
            xi = xi_fn(chart, U)
            return dxi + a @ xi - np.einsum("buk,ibkv->ibuv", xi, a)

    return _Tangent()


def moment_derivative_check(A: Connection, a, xi_fn, ws: Workspace,
                            order: int | None = None, h: float = 1e-3) -> dict:
    """FD derivative of Phi^xi at A along a, against omega_A(a, d_A xi)."""
    vals = {}
    for c in (-2, -1, 1, 2):
        At = LinearComboConnection(A, [a], [c * h])
        vals[c] = moment(At, xi_fn, ws, order)
    fd = (vals[-2] - 8 * vals[-1] + 8 * vals[1] - vals[2]) / (12 * h)
    dxi = covariant_scalar_derivative(A, xi_fn)
    w = omega(A, a, dxi, ws, order)["total"]
    return {"fd": fd, "omega": w,
            "rel_err": abs(fd - w) / max(abs(w), 1e-30)}


def omega_closedness_check(A: Connection, tangents, ws: Workspace,
                           order: int | None = None, h: float = 1e-3) -> dict:
    """FD exterior derivative of the pulled-back 2-form on a 3-parameter
    affine family A + sum t_i a_i (constant coordinate vector fields)."""
    a1, a2, a3 = tangents

    def w_at(coeffs, x, y):
        At = LinearComboConnection(A, list(tangents), list(coeffs))
        return omega(At, x, y, ws, order)["total"]

    def partial(i, x, y):
        vals = []
        for c in (-2, -1, 1, 2):
            t = [0.0, 0.0, 0.0]
            t[i] = c * h
            vals.append(w_at(t, x, y))
        return (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)

    d1 = partial(0, a2, a3)
    d2 = partial(1, a1, a3)
    d3 = partial(2, a1, a2)
    resid = d1 - d2 + d3
    scale = max(abs(w_at([0, 0, 0], a2, a3)), abs(w_at([0, 0, 0], a1, a3)),
                abs(w_at([0, 0, 0], a1, a2)), 1e-30)
    return {"residual": abs(resid), "scale": scale,
            "normalized": abs(resid) / scale}


def infinitesimal_symplectic_check(A: Connection, a, b, xi_fn, ws: Workspace,
                                   order: int | None = None,
                                   boundary: geo.Chart = geo.S3_CHART) -> float:
    """Boundary obstruction to the infinitesimal symmetry: for flat A and
    covariantly closed tangents it is the integral of an exact form over the
    closed boundary, hence ~0."""
    order = order or ws.order4
    Ub, Wb = ws.pts(boundary, order)
    dxi = covariant_scalar_derivative(A, xi_fn)
    env = {"a": a.components(boundary, Ub), "b": b.components(boundary, Ub),
           "c": dxi.components(boundary, Ub)}
    expr = [(("a", "b", "c"), 1), (("b", "a", "c"), -1)]
    I = geo.integrate_traced_words(expr, env, Wb, boundary.orientation)
    return abs(I) / (12 * np.pi ** 3)


# ---------------------------------------------------------------------------
# hemisphere pairing and the abelian-extension cocycle
# ---------------------------------------------------------------------------


def theta_conn(A: Connection, a, ws: Workspace, region: str = "D",
               order: int | None = None) -> complex:
    """theta_A(a) = (i/48 pi^3) int_D Tr[A^3 a] on one hemisphere."""
    order = order or ws.order4
    LA = alg.A()
    expr = [((LA, LA, LA, "a"), 1)]
    total = 0.0 + 0.0j
    for chart in _REGIONS[region]:
        U, W = ws.pts(chart, order)
        env = {LA: ws.comps(A, chart, order), "a": a.components(chart, U)}
        total += geo.integrate_traced_words(expr, env, W, chart.orientation)
    return (K_NORM / 2) * total


def mickelsson_cocycle(f: GaugeMap, g: GaugeMap, A: Connection, ws: Workspace,
                       region: str = "D", order: int | None = None,
                       boundary: geo.Chart = geo.S3_CHART) -> complex:
    """gamma_D(f, g; A): boundary 3-form piece plus hemisphere 4-form piece."""
    order = order or ws.order4
    part_bulk = cochain_integral(ws, _C21, _REGIONS[region], order,
                                 {1: f, 2: g})
    part_bdry = 0.0 + 0.0j
    _, Wb = ws.pts(boundary, order)
    env = _build_env(ws, _C20, boundary, order, {1: f, 2: g}, A=A)
    part_bdry = K_NORM * geo.integrate_traced_words(
        _C20.items(), env, Wb, boundary.orientation
    )
    return part_bulk + part_bdry


def beta_disc(f: GaugeMap, A: Connection, ws: Workspace, region: str = "D",
              order: int | None = None) -> complex:
    """beta_D(f, A) = K int_D c^{1,1}(f; A); its coboundary is gamma_D."""
    order = order or ws.order4
    return cochain_integral(ws, _C11, _REGIONS[region], order, {1: f}, A=A)
