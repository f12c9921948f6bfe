"""Connections, gauge maps, gauge action, parallel transport, and gluing.

Conventions (fixed once, used everywhere):
  * gauge action        g.A = g^{-1} A g + g^{-1} dg
  * pure gauge          A_f = f^{-1} df           (flat)
  * transport ODE       k'(t) = k(t) . A(gamma'(t)),  k(0) = I
With these, transport of A_f along any path from the basepoint gives
f(p0)^{-1} f(x), the reconstruction round-trip ||A - f_A^{-1} d f_A|| -> 0,
and equivariance f_{g.A} = f_A . g holds exactly (for g(p0) = I).  The three
properties are mutually consistent only for this right-sided set.
"""

from __future__ import annotations

import numpy as np

from . import geometry as geo

__all__ = [
    "GaugeMap",
    "ExpGaugeMap",
    "ProductGaugeMap",
    "InverseGaugeMap",
    "ConstantGaugeMap",
    "GluedGaugeMap",
    "ConeExtension",
    "Connection",
    "AmbientConnection",
    "PureGaugeConnection",
    "GaugeActedConnection",
    "LinearComboConnection",
    "GluedConnection",
    "gauge_act",
    "glue_maps",
    "glue_connections",
    "parallel_transport",
    "reconstruct_gauge",
    "BASEPOINT_S3",
    "BASEPOINT_DISC",
]

# basepoint: S^3 angles (pi/2, pi/2, 0) -> embedding (1, 0, 0, 0)
BASEPOINT_S3 = np.array([np.pi / 2, np.pi / 2, 0.0])
BASEPOINT_DISC = np.array([1.0, np.pi / 2, np.pi / 2, 0.0])


class ChartMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# gauge maps
# ---------------------------------------------------------------------------


class GaugeMap:
    """Group-valued field evaluated chartwise; subclasses fix the rule."""

    n = 3

    def values(self, chart: geo.Chart, U: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def data(self, chart, U):
        """(g, g^{-1}, dg) with dg by 4th-order differences in chart coords."""
        g = self.values(chart, U)
        gi = np.linalg.inv(g)
        dg = geo.fd_partials(lambda V: self.values(chart, V), U)
        return g, gi, dg

    # combinators ------------------------------------------------------
    def __mul__(self, other: "GaugeMap") -> "GaugeMap":
        return ProductGaugeMap(self, other)

    def inverse(self) -> "GaugeMap":
        return InverseGaugeMap(self)

    def cone(self, profile=None) -> "GaugeMap":
        """Extension to the 5-ball cone over this map's 4-D domain.

        ``profile`` is an optional reparametrization s -> sigma(s) with
        sigma(0)=0, sigma(1)=1; different profiles give different disc
        extensions of the same boundary map.
        """
        return ConeExtension(self, profile)

    def pure_gauge(self) -> "Connection":
        return PureGaugeConnection(self)


class ExpGaugeMap(GaugeMap):
    """g = exp(X) for an anti-Hermitian algebra field X given chartwise.

    The cone extension replaces X by s*X, which interpolates from the
    identity at the cone tip to g on the boundary slice.
    """

    def __init__(self, x_fn, name: str = ""):
        self.x_fn = x_fn  # (chart, U) -> (B, n, n)
        self.name = name

    def algebra_field(self, chart, U):
        return self.x_fn(chart, U)

    def values(self, chart, U):
        return geo.expm(self.x_fn(chart, U))


class ConstantGaugeMap(GaugeMap):
    def __init__(self, n: int = 3):
        self.n = n

    def values(self, chart, U):
        B = U.shape[1]
        return np.broadcast_to(np.eye(self.n, dtype=complex), (B, self.n, self.n)).copy()

    def cone(self, profile=None):
        return self


class ProductGaugeMap(GaugeMap):
    def __init__(self, a: GaugeMap, b: GaugeMap):
        self.a, self.b = a, b

    def values(self, chart, U):
        return self.a.values(chart, U) @ self.b.values(chart, U)

    def cone(self, profile=None):
        # an extension of a product is the product of extensions
        return ProductGaugeMap(self.a.cone(profile), self.b.cone(profile))


class InverseGaugeMap(GaugeMap):
    def __init__(self, a: GaugeMap):
        self.a = a

    def values(self, chart, U):
        return np.linalg.inv(self.a.values(chart, U))

    def cone(self, profile=None):
        return InverseGaugeMap(self.a.cone(profile))


class ConeExtension(GaugeMap):
    """Map on the 5-ball charts: the first coordinate scales the exponent
    (ExpGaugeMap base) so the r=1 slice restricts to the base map."""

    def __init__(self, base: ExpGaugeMap, profile=None):
        if not isinstance(base, ExpGaugeMap):
            raise TypeError("cone extension needs an exponential base map")
        self.base = base
        self.profile = profile

    def _split(self, chart, U):
        inner = {"B5.south": geo.S4_SOUTH, "B5.north": geo.S4_NORTH}[chart.name]
        return inner, U[0], U[1:]

    def values(self, chart, U):
        inner, s, U4 = self._split(chart, U)
        if self.profile is not None:
            s = self.profile(s)
        X = self.base.x_fn(inner, U4)
        return geo.expm(s[:, None, None] * X)


class GluedGaugeMap(GaugeMap):
    """Piecewise map on the two-hemisphere sphere model (or its 5-ball cone)."""

    def __init__(self, south: GaugeMap, north: GaugeMap, check: bool = True,
                 match_tol: float = 1e-8):
        self.south, self.north = south, north
        if check:
            res = self.boundary_mismatch()
            if res > match_tol:
                raise ChartMismatch(f"seam mismatch {res:.3e} exceeds {match_tol}")

    def boundary_mismatch(self, n_probe: int = 24) -> float:
        rng = np.random.default_rng(7)
        ang = rng.uniform([0, 0, 0], [np.pi, np.pi, 2 * np.pi], size=(n_probe, 3)).T
        U = np.vstack([np.ones(n_probe), ang])
        a = self.south.values(geo.S4_SOUTH, U)
        b = self.north.values(geo.S4_NORTH, U)
        return float(np.abs(a - b).max())

    def _pick(self, chart):
        if chart.name.endswith("south"):
            return self.south
        if chart.name.endswith("north"):
            return self.north
        raise ChartMismatch(f"glued map has no data on chart {chart.name}")

    def values(self, chart, U):
        return self._pick(chart).values(chart, U)

    def cone(self, profile=None):
        return GluedGaugeMap(self.south.cone(profile), self.north.cone(profile),
                             check=False)


def glue_maps(south: GaugeMap, north: GaugeMap, check: bool = True) -> GluedGaugeMap:
    return GluedGaugeMap(south, north, check=check)


# ---------------------------------------------------------------------------
# connections
# ---------------------------------------------------------------------------


class Connection:
    n = 3
    flat_hint = False

    def components(self, chart: geo.Chart, U: np.ndarray) -> np.ndarray:
        """Chart components (m, B, n, n)."""
        raise NotImplementedError

    def curvature(self, chart, U):
        """F_ij = d_i A_j - d_j A_i + [A_i, A_j]; generic FD route."""
        a = self.components(chart, U)
        da = geo.fd_partials(lambda V: self.components(chart, V), U)
        F = da - np.swapaxes(da, 0, 1)
        F = F + np.einsum("ibuk,jbkv->ijbuv", a, a) \
              - np.einsum("jbuk,ibkv->ijbuv", a, a)
        return F


class AmbientConnection(Connection):
    """1-form given by its components in the ambient embedding coordinates."""

    def __init__(self, ambient_fn, name: str = ""):
        self.ambient_fn = ambient_fn  # (k, B) -> (k, B, n, n)
        self.name = name

    def components(self, chart, U):
        return geo.pullback_oneform(self.ambient_fn, chart, U)

    def curvature(self, chart, U):
        return geo.curvature(self.ambient_fn, chart, U)


class PureGaugeConnection(Connection):
    """A = f^{-1} df; exactly flat, so curvature is returned as zero."""

    flat_hint = True

    def __init__(self, f: GaugeMap):
        self.f = f

    def components(self, chart, U):
        g, gi, dg = self.f.data(chart, U)
        return np.einsum("buk,ibkv->ibuv", gi, dg)

    def curvature(self, chart, U):
        m, B = U.shape
        return np.zeros((m, m, B, self.n, self.n), dtype=complex)


class GaugeActedConnection(Connection):
    """g.A = g^{-1} A g + g^{-1} dg; curvature transforms by conjugation."""

    def __init__(self, g: GaugeMap, base: Connection):
        self.g, self.base = g, base
        self.flat_hint = base.flat_hint

    def components(self, chart, U):
        g, gi, dg = self.g.data(chart, U)
        a = self.base.components(chart, U)
        return np.einsum("buk,ibkl,blv->ibuv", gi, a, g) + np.einsum(
            "buk,ibkv->ibuv", gi, dg
        )

    def curvature(self, chart, U):
        g = self.g.values(chart, U)
        gi = np.linalg.inv(g)
        F = self.base.curvature(chart, U)
        return np.einsum("buk,ijbkl,blv->ijbuv", gi, F, g)


class LinearComboConnection(Connection):
    """A0 + sum_i t_i a_i with connection-like leading term (for families)."""

    def __init__(self, base: Connection, tangents, coeffs):
        self.base, self.tangents = base, list(tangents)
        self.coeffs = list(coeffs)

    def components(self, chart, U):
        out = self.base.components(chart, U)
        for c, a in zip(self.coeffs, self.tangents):
            if c != 0:
                out = out + c * a.components(chart, U)
        return out


class GluedConnection(Connection):
    def __init__(self, south: Connection, north: Connection, check: bool = True,
                 match_tol: float = 1e-8):
        self.south, self.north = south, north
        self.flat_hint = south.flat_hint and north.flat_hint
        if check and self.boundary_mismatch() > match_tol:
            raise ChartMismatch("connection seam mismatch")

    def boundary_mismatch(self, n_probe: int = 24) -> float:
        rng = np.random.default_rng(11)
        ang = rng.uniform([0, 0, 0], [np.pi, np.pi, 2 * np.pi], size=(n_probe, 3)).T
        U = np.vstack([np.ones(n_probe), ang])
        # compare angular components only: the radial coordinate is chart
        # plumbing, the three angles are shared boundary coordinates
        a = self.south.components(geo.S4_SOUTH, U)[1:]
        b = self.north.components(geo.S4_NORTH, U)[1:]
        return float(np.abs(a - b).max())

    def _pick(self, chart):
        if chart.name.endswith("south"):
            return self.south
        if chart.name.endswith("north"):
            return self.north
        raise ChartMismatch(f"glued connection has no data on chart {chart.name}")

    def components(self, chart, U):
        return self._pick(chart).components(chart, U)

    def curvature(self, chart, U):
        return self._pick(chart).curvature(chart, U)


def gauge_act(g: GaugeMap, A: Connection) -> Connection:
    return GaugeActedConnection(g, A)


def glue_connections(south, north, check: bool = True) -> GluedConnection:
    return GluedConnection(south, north, check=check)


# ---------------------------------------------------------------------------
# parallel transport and holonomy reconstruction
# ---------------------------------------------------------------------------


def _unitarize(k):
    """Project onto the unitary group via the Hermitian square root."""
    h = geo.dagger(k) @ k
    w, v = np.linalg.eigh(h)
    inv_sqrt = (v * (1.0 / np.sqrt(np.clip(w, 1e-30, None))[:, None, :])) @ geo.dagger(v)
    return k @ inv_sqrt


def parallel_transport(A: Connection, chart: geo.Chart, path, n_steps: int = 64,
                       reproject: bool = True) -> np.ndarray:
    """Transport k' = k . A(gamma') with RK4; ``path(t)`` gives (m, B) coords.

    Returns the endpoint transports of shape (B, n, n).
    """
    ts = np.linspace(0.0, 1.0, n_steps + 1)
    h = ts[1] - ts[0]
    eps = 1e-6

    def rhs(t, k):
        u = path(t)
        du = (path(min(t + eps, 1.0)) - path(max(t - eps, 0.0))) / (
            min(t + eps, 1.0) - max(t - eps, 0.0)
        )
        a = A.components(chart, u)  # (m, B, n, n)
        M = np.einsum("ib,ibuv->buv", du, a)
        return k @ M

    B = path(0.0).shape[1]
    n = A.n
    k = np.broadcast_to(np.eye(n, dtype=complex), (B, n, n)).copy()
    for t in ts[:-1]:
        k1 = rhs(t, k)
        k2 = rhs(t + h / 2, k + h / 2 * k1)
        k3 = rhs(t + h / 2, k + h / 2 * k2)
        k4 = rhs(t + h, k + h * k3)
        k = k + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if reproject:
            k = _unitarize(k)
    return k


def straight_path(p0: np.ndarray, targets: np.ndarray):
    """Family of straight chart-coordinate segments p0 -> targets (m, B)."""

    def path(t):
        return p0[:, None] + t * (targets - p0[:, None])

    return path


def reconstruct_gauge(A: Connection, chart: geo.Chart, targets: np.ndarray,
                      p0: np.ndarray | None = None, n_steps: int = 64,
                      flat_tol: float = 1e-6) -> np.ndarray:
    """f_A at the target points by radial transport from the basepoint.

    For flat A this is path independent and satisfies A = f_A^{-1} d f_A.
    """
    if p0 is None:
        p0 = BASEPOINT_DISC if chart.dim == 4 else BASEPOINT_S3
    if not A.flat_hint:
        F = A.curvature(chart, targets)
        res = float(np.abs(F).max())
        if res > flat_tol:
            raise ValueError(f"connection not flat: curvature residual {res:.3e}")
    return parallel_transport(A, chart, straight_path(p0, targets), n_steps)


def reconstruction_roundtrip(A: Connection, chart: geo.Chart, targets: np.ndarray,
                             n_steps: int = 64, h: float = 1e-3) -> float:
    """max ||A - f_A^{-1} d f_A|| over the target points (FD in chart coords)."""
    m = targets.shape[0]
    stencil = [targets]
    for i in range(m):
        for c in (-2, -1, 1, 2):
            t = targets.copy()
            t[i] = t[i] + c * h
            stencil.append(t)
    allpts = np.concatenate(stencil, axis=1)
    f = reconstruct_gauge(A, chart, allpts, n_steps=n_steps)
    B = targets.shape[1]
    f0 = f[:B]
    worst = 0.0
    a = A.components(chart, targets)
    fi = np.linalg.inv(f0)
    for i in range(m):
        blocks = [f[(1 + 4 * i + j) * B:(2 + 4 * i + j) * B] for j in range(4)]
        df = (blocks[0] - 8 * blocks[1] + 8 * blocks[2] - blocks[3]) / (12 * h)
        recon = fi @ df
        worst = max(worst, float(np.abs(recon - a[i]).max()))
    return worst
