"""Charts, quadrature, and numeric evaluation of traced differential forms.

The sphere S^3 is covered by a single angular box, the disc D (a hemisphere
of S^4) by a polar cone over that box, S^4 by two such discs with opposite
orientations, and the 5-disc by a cone over S^4.  Differential forms built
from matrix-valued fields are integrated chartwise: a trace word of letters
with assigned form degrees is contracted against the Levi-Civita symbol by
an explicit permutation sum, then fed to a tensor-product Gauss-Legendre
rule.  All derivatives are 4th-order central differences in chart
coordinates, which is exact to ~1e-12 for the smooth trigonometric fields
used throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

FD_STEP = 1e-3


# ---------------------------------------------------------------------------
# batched linear algebra helpers
# ---------------------------------------------------------------------------


def expm(X: np.ndarray, terms: int = 18) -> np.ndarray:
    """Matrix exponential over the leading batch axes (scaling and squaring
    with a truncated Taylor series; adequate for the bounded fields here)."""
    X = np.asarray(X, dtype=complex)
    norm = np.abs(X).sum(axis=-1).max() if X.size else 0.0
    s = max(0, int(np.ceil(np.log2(max(norm, 1e-30)))) + 1) if norm > 0.5 else 0
    Y = X / (2 ** s)
    n = X.shape[-1]
    out = np.broadcast_to(np.eye(n, dtype=complex), X.shape).copy()
    term = out.copy()
    for k in range(1, terms + 1):
        term = term @ Y / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def dagger(X: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(X, -1, -2))


def su_basis(n: int) -> np.ndarray:
    """Anti-Hermitian traceless basis i*T_a of su(n), generalized Gell-Mann.

    Returns shape (n*n-1, n, n); entries are anti-Hermitian so that
    exp of real combinations is unitary.
    """
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = 1
            m[j, i] = -1
            mats.append(m)  # real antisymmetric
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = 1j
            m[j, i] = 1j
            mats.append(m)
    for k in range(1, n):
        m = np.zeros((n, n), dtype=complex)
        for i in range(k):
            m[i, i] = 1j
        m[k, k] = -1j * k
        mats.append(m / np.sqrt(k * (k + 1) / 2))
    return np.stack(mats)


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Chart:
    """A coordinate box with an embedding and an orientation sign."""

    name: str
    bounds: tuple  # ((lo, hi), ...) per coordinate
    embed: Callable  # (m, B) -> (k, B) ambient coordinates
    orientation: int = 1

    @property
    def dim(self) -> int:
        return len(self.bounds)


def _s3_embed(u):
    t1, t2, t3 = u
    return np.stack(
        [
            np.sin(t1) * np.sin(t2) * np.cos(t3),
            np.sin(t1) * np.sin(t2) * np.sin(t3),
            np.sin(t1) * np.cos(t2),
            np.cos(t1),
        ]
    )


def _disc_embed(u):
    """4-disc as {r * n(angles)} in R^4."""
    r = u[0]
    return r[None, :] * _s3_embed(u[1:])


def _s4_embed_south(u):
    """Hemisphere psi in [pi/2, pi], r=1 at the equator, r=0 at the pole."""
    r = u[0]
    psi = np.pi - r * (np.pi / 2)
    n = _s3_embed(u[1:])
    return np.concatenate([np.sin(psi)[None, :] * n, np.cos(psi)[None, :]])


def _s4_embed_north(u):
    r = u[0]
    psi = r * (np.pi / 2)
    n = _s3_embed(u[1:])
    return np.concatenate([np.sin(psi)[None, :] * n, np.cos(psi)[None, :]])


_S3_BOUNDS = ((0.0, np.pi), (0.0, np.pi), (0.0, 2 * np.pi))
_CONE = ((0.0, 1.0),) + _S3_BOUNDS

S3_CHART = Chart("S3", _S3_BOUNDS, _s3_embed, +1)
DISC_CHART = Chart("D", _CONE, _disc_embed, +1)
# the two hemispheres of S^4; opposite orientations make their union closed
S4_SOUTH = Chart("S4.south", _CONE, _s4_embed_south, +1)
S4_NORTH = Chart("S4.north", _CONE, _s4_embed_north, -1)


def _ball5_embed(which):
    inner = _s4_embed_south if which == "south" else _s4_embed_north

    def emb(u):
        s = u[0]
        return s[None, :] * inner(u[1:])

    return emb


_CONE5 = ((0.0, 1.0),) + _CONE
BALL5_SOUTH = Chart("B5.south", _CONE5, _ball5_embed("south"), +1)
BALL5_NORTH = Chart("B5.north", _CONE5, _ball5_embed("north"), -1)

S4_REGION = (S4_SOUTH, S4_NORTH)
BALL5_REGION = (BALL5_SOUTH, BALL5_NORTH)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


def gauss_points(chart: Chart, order: int):
    """Tensor-product Gauss-Legendre nodes/weights on the chart box.

    Returns ``(U, W)`` with ``U`` of shape (dim, B) and ``W`` of shape (B,).
    """
    xs, ws = [], []
    for lo, hi in chart.bounds:
        x, w = np.polynomial.legendre.leggauss(order)
        xs.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
        ws.append(0.5 * (hi - lo) * w)
    grids = np.meshgrid(*xs, indexing="ij")
    U = np.stack([g.ravel() for g in grids])
    W = np.ones(U.shape[1])
    wgrids = np.meshgrid(*ws, indexing="ij")
    for wg in wgrids:
        W = W * wg.ravel()
    return U, W


def fd_partials(func: Callable, U: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """4th-order central differences of func(U) along each chart coordinate.

    func maps (m, B) -> array with leading batch axis B (possibly with
    trailing matrix axes); result has shape (m,) + func(U).shape.
    """
    m = U.shape[0]
    outs = []
    for i in range(m):
        shifted = []
        for c in (-2, -1, 1, 2):
            Uc = U.copy()
            Uc[i] = Uc[i] + c * h
            shifted.append(func(Uc))
        f_m2, f_m1, f_p1, f_p2 = shifted
        outs.append((f_m2 - 8 * f_m1 + 8 * f_p1 - f_p2) / (12 * h))
    return np.stack(outs)


# ---------------------------------------------------------------------------
# fields on charts
# ---------------------------------------------------------------------------


def pullback_oneform(ambient_form: Callable, chart: Chart, U: np.ndarray):
    """Chart components of an ambient 1-form: a_i = (dx_mu/du_i) a_mu.

    ``ambient_form`` maps ambient points (k, B) to components (k, B, n, n).
    """
    X = chart.embed(U)
    amb = ambient_form(X)  # (k, B, n, n)
    jac = fd_partials(chart.embed, U)  # (m, k, B)
    return np.einsum("ikb,kbuv->ibuv", jac, amb)


def curvature(ambient_form: Callable, chart: Chart, U: np.ndarray):
    """F_ij = d_i a_j - d_j a_i + [a_i, a_j] in chart coordinates."""
    a = pullback_oneform(ambient_form, chart, U)  # (m,B,n,n)
    da = fd_partials(lambda V: pullback_oneform(ambient_form, chart, V), U)
    # da[i, j] = d_i a_j, shape (m, m, B, n, n)
    F = da - np.swapaxes(da, 0, 1)
    F = F + np.einsum("ibuk,jbkv->ijbuv", a, a) - np.einsum("jbuk,ibkv->ijbuv", a, a)
    return F


def chart_gauge_data(gmap: Callable, chart: Chart, U: np.ndarray):
    """Values, inverses, and exterior-derivative components of a gauge map.

    ``gmap`` maps chart points (m, B) of this chart to unitaries (B, n, n);
    returns (g, g^{-1}, dg) with dg of shape (m, B, n, n).
    """
    g = gmap(U)
    gi = np.linalg.inv(g)
    dg = fd_partials(gmap, U)
    return g, gi, dg


# ---------------------------------------------------------------------------
# traced-form evaluation: permutation-sum Levi-Civita contraction
# ---------------------------------------------------------------------------


def _perm_sign(p) -> int:
    sign, p = 1, list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def integrate_traced_words(words, env: dict, W: np.ndarray,
                           orientation: int = 1) -> complex:
    """Integrate a sum of traced letter words as a top-degree form.

    ``words`` is an iterable of (word, coeff) with word a tuple of letters;
    ``env`` maps each letter to its chart data:
      degree 0 -> (B, n, n); degree 1 -> (m, B, n, n);
      degree 2 -> (m, m, B, n, n), antisymmetric in the coordinate pair.
    Each degree-2 letter carries the usual 1/2 in the wedge expansion.
    """
    total = 0.0 + 0.0j
    for word, coeff in words:
        degs = []
        for let in word:
            val = env[let]
            degs.append(val.ndim - 3)
        m = sum(degs)
        nF = sum(1 for d in degs if d == 2)
        acc = None
        for perm in itertools.permutations(range(m)):
            sgn = _perm_sign(perm)
            pos = 0
            prod = None
            for let, d in zip(word, degs):
                val = env[let]
                if d == 0:
                    mat = val
                elif d == 1:
                    mat = val[perm[pos]]
                else:
                    mat = val[perm[pos], perm[pos + 1]]
                pos += d
                prod = mat if prod is None else prod @ mat
            if prod is None:
                continue
            acc = sgn * prod if acc is None else acc + sgn * prod
        scalar = np.trace(acc, axis1=-2, axis2=-1)
        total += float(coeff) * (0.5 ** nF) * np.sum(W * scalar)
    return orientation * total


def integrate_scalar(values: np.ndarray, W: np.ndarray) -> complex:
    return np.sum(W * values)
