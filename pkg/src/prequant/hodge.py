"""Discrete covariant Hodge theory on a uniform 4-D grid.

Fields live over the unit 4-cube [0, 1]^4 sampled on n vertices per axis
with spacing h = 1/(n-1):

  * scalars   -- one anti-Hermitian traceless N x N matrix per vertex,
                 array shape (n, n, n, n, N, N);
  * one-forms -- one matrix per *link*; ``a[mu, x]`` sits on the edge
                 from vertex x to x + e_mu, array shape
                 (4, n, n, n, n, N, N).  Slots with x_mu = n-1 point out
                 of the grid and are kept identically zero.

The covariant differential is the forward difference plus the commutator
with the link connection, evaluated against the average of the two
endpoint values:

    (d_A xi)[mu, x] = (xi[x+mu] - xi[x]) / h
                      + [A[mu, x], (xi[x] + xi[x+mu]) / 2].

Its adjoint is *derived* from d_A and the inner product
< X, Y > = -h^4 sum Tr(X Y) (positive definite on anti-Hermitian
matrices), not discretized separately, so summation by parts holds to
rounding:

    (d_A* a)[y] = sum_mu [ (a[mu, y-mu] - a[mu, y]) / h
                           - ([A[mu,y], a[mu,y]]
                              + [A[mu,y-mu], a[mu,y-mu]]) / 2 ],

with out-of-range link values read as zero.  Restricting the output to
interior vertices gives the Dirichlet adjoint; keeping every vertex
gives the weak-Neumann one.  The covariant Laplacian is d_A* d_A in
either flavor, inverted by matrix-free conjugate gradients.

Serialization layout (for regression snapshots): fields are written as
a flat little-endian complex128 buffer -- for one-forms the axis index
varies slowest, then the four vertex coordinates in row-major order,
then the N x N matrix entries row-major.  Each complex entry is a pair
of little-endian 64-bit floats (real, imaginary).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import geometry as geo

__all__ = [
    "LatticeGrid",
    "CGResult",
    "d_A",
    "d_A_star",
    "laplacian",
    "cg_solve",
    "dirichlet_green",
    "neumann_green",
    "k_solve",
    "decompose0",
    "decompose_full",
    "covariant_curl",
    "curvature_form_F0",
    "phi_pairing",
    "serialize_field",
    "deserialize_field",
]


# --------------------------------------------------------------------------
# grid and field constructors
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeGrid:
    """Uniform vertex grid on [0, 1]^4 with su(N)-valued fields."""

    n: int
    N: int = 2

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("grid needs at least 4 vertices per axis")
        if self.N < 2:
            raise ValueError("matrix fields need N >= 2")

    @property
    def h(self) -> float:
        return 1.0 / (self.n - 1)

    @property
    def shape_scalar(self):
        return (self.n,) * 4 + (self.N, self.N)

    @property
    def shape_oneform(self):
        return (4,) + (self.n,) * 4 + (self.N, self.N)

    def boundary_mask(self) -> np.ndarray:
        """Boolean (n,n,n,n) mask, True exactly on the outer vertex shell."""
        mask = np.zeros((self.n,) * 4, dtype=bool)
        for ax in range(4):
            idx = [slice(None)] * 4
            idx[ax] = 0
            mask[tuple(idx)] = True
            idx[ax] = self.n - 1
            mask[tuple(idx)] = True
        return mask

    def interior_mask(self) -> np.ndarray:
        return ~self.boundary_mask()

    def link_mask(self) -> np.ndarray:
        """Boolean (4,n,n,n,n) mask of links that stay inside the grid."""
        mask = np.ones((4,) + (self.n,) * 4, dtype=bool)
        for mu in range(4):
            idx = [mu] + [slice(None)] * 4
            idx[1 + mu] = self.n - 1
            mask[tuple(idx)] = False
        return mask

    def zeros_scalar(self) -> np.ndarray:
        return np.zeros(self.shape_scalar, dtype=complex)

    def zeros_oneform(self) -> np.ndarray:
        return np.zeros(self.shape_oneform, dtype=complex)

    def vertex_coords(self) -> np.ndarray:
        """Vertex positions, shape (4, n, n, n, n)."""
        axes = [np.linspace(0.0, 1.0, self.n)] * 4
        return np.stack(np.meshgrid(*axes, indexing="ij"))

    def random_scalar(self, rng: np.random.Generator, *,
                      interior: bool = False, scale: float = 1.0) -> np.ndarray:
        """Random su(N)-valued vertex field; optionally zero on the shell."""
        basis = geo.su_basis(self.N)
        coef = rng.standard_normal(((self.n,) * 4) + (len(basis),)) * scale
        out = np.einsum("...a,aij->...ij", coef, basis)
        if interior:
            out[self.boundary_mask()] = 0.0
        return out

    def random_oneform(self, rng: np.random.Generator, *,
                       scale: float = 1.0) -> np.ndarray:
        """Random su(N)-valued link field, zero on outgoing boundary links."""
        basis = geo.su_basis(self.N)
        coef = rng.standard_normal((4,) + ((self.n,) * 4) + (len(basis),)) * scale
        out = np.einsum("...a,aij->...ij", coef, basis)
        out[~self.link_mask()] = 0.0
        return out

    def sample_oneform(self, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Sample a continuum 1-form at link midpoints.

        ``fn(points)`` maps (4, B) positions to (4, B, N, N) per-axis
        components; the mu-component at the midpoint of each mu-link is
        kept.
        """
        x = self.vertex_coords()
        out = self.zeros_oneform()
        for mu in range(4):
            mid = x.copy()
            mid[mu] += 0.5 * self.h
            vals = fn(mid.reshape(4, -1))[mu].reshape((self.n,) * 4 + (self.N, self.N))
            out[mu] = vals
        out[~self.link_mask()] = 0.0
        return out

    # ---- inner products ---------------------------------------------------

    def ip_scalar(self, x: np.ndarray, y: np.ndarray) -> float:
        """< x, y > = -h^4 sum_v Tr(x y); real for anti-Hermitian fields."""
        return float(-np.einsum("...ij,...ji->...", x, y).sum().real * self.h ** 4)

    def ip_oneform(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(-np.einsum("...ij,...ji->...", a, b).sum().real * self.h ** 4)

    def norm_scalar(self, x: np.ndarray) -> float:
        return float(np.sqrt(max(self.ip_scalar(x, x), 0.0)))

    def norm_oneform(self, a: np.ndarray) -> float:
        return float(np.sqrt(max(self.ip_oneform(a, a), 0.0)))


def _comm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def _shift_minus(arr: np.ndarray, ax: int) -> np.ndarray:
    """arr evaluated at y - e_mu, zero where that falls off the grid."""
    out = np.zeros_like(arr)
    src = [slice(None)] * arr.ndim
    dst = [slice(None)] * arr.ndim
    src[ax] = slice(None, -1)
    dst[ax] = slice(1, None)
    out[tuple(dst)] = arr[tuple(src)]
    return out


# --------------------------------------------------------------------------
# covariant differential, adjoint, Laplacian
# --------------------------------------------------------------------------

def d_A(A: np.ndarray, xi: np.ndarray, grid: LatticeGrid) -> np.ndarray:
    """Forward covariant difference of a vertex field onto links."""
    if xi.shape != grid.shape_scalar or A.shape != grid.shape_oneform:
        raise ValueError("field shapes do not match the grid")
    out = grid.zeros_oneform()
    h = grid.h
    for mu in range(4):
        sl_lo = [slice(None)] * 4
        sl_hi = [slice(None)] * 4
        sl_lo[mu] = slice(None, -1)
        sl_hi[mu] = slice(1, None)
        lo, hi = tuple(sl_lo), tuple(sl_hi)
        avg = 0.5 * (xi[lo] + xi[hi])
        out[mu][lo] = (xi[hi] - xi[lo]) / h + _comm(A[mu][lo], avg)
    return out


def d_A_star(A: np.ndarray, a: np.ndarray, grid: LatticeGrid, *,
             dirichlet: bool = False) -> np.ndarray:
    """Exact adjoint of ``d_A`` under the grid inner products.

    With ``dirichlet=True`` the result is restricted to interior
    vertices (adjoint on boundary-vanishing scalars); otherwise every
    vertex is kept (weak Neumann).
    """
    if a.shape != grid.shape_oneform:
        raise ValueError("field shapes do not match the grid")
    h = grid.h
    out = grid.zeros_scalar()
    for mu in range(4):
        here = a[mu]
        prev = _shift_minus(a[mu], mu)
        A_here = A[mu]
        A_prev = _shift_minus(A[mu], mu)
        out += (prev - here) / h
        out -= 0.5 * (_comm(A_here, here) + _comm(A_prev, prev))
    if dirichlet:
        out[grid.boundary_mask()] = 0.0
    return out


def laplacian(A: np.ndarray, xi: np.ndarray, grid: LatticeGrid, *,
              dirichlet: bool = True) -> np.ndarray:
    """Covariant Laplacian d_A* d_A (Dirichlet or weak-Neumann flavor)."""
    return d_A_star(A, d_A(A, xi, grid), grid, dirichlet=dirichlet)


# --------------------------------------------------------------------------
# conjugate gradients (matrix-free)
# --------------------------------------------------------------------------

@dataclass
class CGResult:
    solution: np.ndarray
    residual: float
    iterations: int
    converged: bool
    projection_norm: float = 0.0


def cg_solve(apply_op, rhs: np.ndarray, grid: LatticeGrid, *,
             tol: float = 1e-12, maxiter: int = 20000) -> CGResult:
    """Conjugate gradients for a self-adjoint positive operator.

    ``apply_op`` maps a scalar field to a scalar field; convergence is
    measured as ||op x - rhs|| / ||rhs|| in the grid norm.
    """
    ip, norm = grid.ip_scalar, grid.norm_scalar
    rhs_norm = norm(rhs)
    if rhs_norm == 0.0:
        return CGResult(np.zeros_like(rhs), 0.0, 0, True)
    x = np.zeros_like(rhs)
    r = rhs.copy()
    p = r.copy()
    rr = ip(r, r)
    for it in range(1, maxiter + 1):
        op_p = apply_op(p)
        denom = ip(p, op_p)
        if denom <= 0.0:
            break
        alpha = rr / denom
        x = x + alpha * p
        r = r - alpha * op_p
        rr_new = ip(r, r)
        if np.sqrt(rr_new) / rhs_norm < tol:
            return CGResult(x, np.sqrt(rr_new) / rhs_norm, it, True)
        p = r + (rr_new / rr) * p
        rr = rr_new
    return CGResult(x, np.sqrt(max(rr, 0.0)) / rhs_norm, maxiter, False)


def dirichlet_green(A: np.ndarray, f: np.ndarray, grid: LatticeGrid, *,
                    tol: float = 1e-12, maxiter: int = 20000) -> CGResult:
    """Solve d_A* d_A xi = f with xi = 0 on the boundary shell.

    ``f`` must be supported on interior vertices.
    """
    bnd = grid.boundary_mask()
    if np.any(np.abs(f[bnd]) > 0):
        raise ValueError("Dirichlet right-hand side must vanish on the boundary")

    def op(xi):
        out = laplacian(A, xi, grid, dirichlet=True)
        return out

    res = cg_solve(op, f, grid, tol=tol, maxiter=maxiter)
    if not res.converged:
        raise RuntimeError(
            f"Dirichlet CG stalled at residual {res.residual:.3e} "
            f"after {res.iterations} iterations")
    return res


def _constant_modes(grid: LatticeGrid) -> np.ndarray:
    """Orthonormal constant su(N) vertex fields, shape (N^2-1, ...)."""
    basis = geo.su_basis(grid.N)
    modes = []
    ones = np.ones((grid.n,) * 4)
    for t in basis:
        m = ones[..., None, None] * t
        m = m / grid.norm_scalar(m)
        modes.append(m)
    return np.stack(modes)


def neumann_green(A: np.ndarray, f: np.ndarray, grid: LatticeGrid, *,
                  tol: float = 1e-12, maxiter: int = 20000) -> CGResult:
    """Solve the weak-Neumann problem d_A* d_A eta = f on all vertices.

    The weak-Neumann Laplacian annihilates covariantly constant fields;
    for A = 0 those are exactly the constant su(N) fields, and the
    corresponding component of ``f`` is projected out and reported in
    ``projection_norm``.  For nonzero A the discrete operator is
    generically positive definite and no projection is applied.
    """
    rhs = f.copy()
    proj = 0.0
    if grid.norm_oneform(A) == 0.0:
        for mode in _constant_modes(grid):
            c = grid.ip_scalar(mode, rhs)
            proj += c * c
            rhs = rhs - c * mode
    proj = float(np.sqrt(proj))

    def op(eta):
        return laplacian(A, eta, grid, dirichlet=False)

    res = cg_solve(op, rhs, grid, tol=tol, maxiter=maxiter)
    if not res.converged:
        raise RuntimeError(
            f"Neumann CG stalled at residual {res.residual:.3e} "
            f"after {res.iterations} iterations")
    res.projection_norm = proj
    return res


def k_solve(A: np.ndarray, v: np.ndarray, grid: LatticeGrid, *,
            tol: float = 1e-12, maxiter: int = 20000) -> CGResult:
    """Solve d_A* d_A g = d_A* v with the weak-Neumann adjoint.

    This is the discrete form of matching the covariant normal
    derivative of g to the normal component of v on the boundary: the
    full-grid adjoint carries the boundary flux terms.
    """
    rhs = d_A_star(A, v, grid, dirichlet=False)
    return neumann_green(A, rhs, grid, tol=tol, maxiter=maxiter)


# --------------------------------------------------------------------------
# orthogonal decompositions
# --------------------------------------------------------------------------

def decompose0(A: np.ndarray, a: np.ndarray, grid: LatticeGrid, *,
               tol: float = 1e-12):
    """Split a = d_A xi + horizontal, xi vanishing on the boundary.

    Returns ``(xi, horiz, info)`` where info holds solver and
    orthogonality residuals: ``d_star_residual`` is the interior
    codifferential norm of the horizontal part relative to that of
    ``a``; ``orthogonality`` is |< d_A xi, horiz >| over the product of
    norms.
    """
    rhs = d_A_star(A, a, grid, dirichlet=True)
    res = dirichlet_green(A, rhs, grid, tol=tol)
    xi = res.solution
    grad = d_A(A, xi, grid)
    horiz = a - grad
    norm_a = grid.norm_oneform(a)
    norm_grad = grid.norm_oneform(grad)
    norm_h = grid.norm_oneform(horiz)
    d_star_h = grid.norm_scalar(d_A_star(A, horiz, grid, dirichlet=True))
    d_star_a = grid.norm_scalar(rhs)
    info = {
        "cg": res,
        "d_star_residual": d_star_h / max(d_star_a, norm_a, 1e-300),
        "orthogonality": abs(grid.ip_oneform(grad, horiz))
        / max(norm_grad * norm_h, 1e-300),
    }
    return xi, horiz, info


def decompose_full(A: np.ndarray, a: np.ndarray, grid: LatticeGrid, *,
                   tol: float = 1e-12):
    """Full splitting a = d_A(xi + eta) + c.

    ``xi`` solves the Dirichlet problem (vanishes on the shell), ``eta``
    the weak-Neumann one for the remainder, and ``c`` has vanishing
    full-grid codifferential.  Returns ``(xi, eta, c, info)``.
    """
    xi, v, info0 = decompose0(A, a, grid, tol=tol)
    res = k_solve(A, v, grid, tol=tol)
    eta = res.solution
    grad_eta = d_A(A, eta, grid)
    c = v - grad_eta
    grad_full = d_A(A, xi + eta, grid)
    norm_a = grid.norm_oneform(a)
    norm_c = grid.norm_oneform(c)
    norm_g = grid.norm_oneform(grad_full)
    info = {
        "cg_dirichlet": info0["cg"],
        "cg_neumann": res,
        "projection_norm": res.projection_norm,
        "d_star_residual": grid.norm_scalar(
            d_A_star(A, c, grid, dirichlet=False)) / max(norm_a / grid.h, 1e-300),
        "orthogonality": abs(grid.ip_oneform(grad_full, c))
        / max(norm_g * norm_c, 1e-300),
    }
    return xi, eta, c, info


# --------------------------------------------------------------------------
# curvature of the connection on the orbit space
# --------------------------------------------------------------------------

def covariant_curl(A: np.ndarray, a: np.ndarray, grid: LatticeGrid) -> np.ndarray:
    """Discrete covariant exterior derivative of a link field.

    Returns the antisymmetric plaquette array, shape
    (4, 4, n, n, n, n, N, N); entry (mu, nu) approximates
    (d_A a)_{mu nu} at the lower corner of each plaquette, zero on
    plaquettes leaving the grid.
    """
    h = grid.h
    out = np.zeros((4, 4) + (grid.n,) * 4 + (grid.N, grid.N), dtype=complex)
    for mu in range(4):
        for nu in range(mu + 1, 4):
            def fwd(arr, ax):
                res = np.zeros_like(arr)
                src = [slice(None)] * arr.ndim
                dst = [slice(None)] * arr.ndim
                src[ax] = slice(1, None)
                dst[ax] = slice(None, -1)
                res[tuple(dst)] = arr[tuple(src)]
                return res

            diff = (fwd(a[nu], mu) - a[nu]) / h - (fwd(a[mu], nu) - a[mu]) / h
            cross = _comm(A[mu], a[nu]) - _comm(A[nu], a[mu])
            plaq = diff + cross
            # zero out plaquettes whose far edges leave the grid
            for ax in (mu, nu):
                idx = [slice(None)] * plaq.ndim
                idx[ax] = grid.n - 1
                plaq[tuple(idx)] = 0.0
            out[mu, nu] = plaq
            out[nu, mu] = -plaq
    return out


def curvature_form_F0(A: np.ndarray, a: np.ndarray, b: np.ndarray,
                      grid: LatticeGrid, *, tol: float = 1e-12) -> np.ndarray:
    """Scalar curvature component G_A(*[a, *b]) of the orbit connection.

    The density *[a, *b] is the link-averaged sum of commutators of the
    matching components, pushed to vertices; the Dirichlet Green
    operator is then applied to its interior part.
    """
    rho = grid.zeros_scalar()
    for mu in range(4):
        here = _comm(a[mu], b[mu])
        rho += 0.5 * (here + _shift_minus(here, mu))
    rho[grid.boundary_mask()] = 0.0
    return dirichlet_green(A, rho, grid, tol=tol).solution


def phi_pairing(A: np.ndarray, a: np.ndarray, b: np.ndarray,
                grid: LatticeGrid, *, tol: float = 1e-12) -> float:
    """Volume integral of Tr F0(a, b); vanishes since F0 is traceless."""
    f0 = curvature_form_F0(A, a, b, grid, tol=tol)
    return float(np.einsum("...ii->...", f0).sum().real * grid.h ** 4)


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def serialize_field(field: np.ndarray) -> bytes:
    """Flat little-endian complex128 buffer, row-major index order."""
    return np.ascontiguousarray(field).astype("<c16").tobytes()


def deserialize_field(buf: bytes, grid: LatticeGrid, kind: str) -> np.ndarray:
    """Inverse of :func:`serialize_field`; kind is 'scalar' or 'oneform'."""
    shape = {"scalar": grid.shape_scalar, "oneform": grid.shape_oneform}[kind]
    flat = np.frombuffer(buf, dtype="<c16")
    expected = int(np.prod(shape))
    if flat.size != expected:
        raise ValueError(f"buffer holds {flat.size} entries, expected {expected}")
    return flat.reshape(shape).astype(complex)
