"""Named analytic test fields, loaded from the shipped catalog.

The catalog (``data/field_catalog.txt``) lists group-valued maps,
algebra-valued scalars, and matrix-valued 1-forms by name.  Every entry is
an expression in the ambient embedding coordinates ``x1..xk``, so one entry
can be evaluated on any chart of matching ambient dimension (for instance
the same map restricted to either hemisphere of the sphere).
"""

from __future__ import annotations

import configparser
from importlib import resources

import numpy as np

from . import geometry as geo
from .gauge import AmbientConnection, ExpGaugeMap

__all__ = [
    "catalog",
    "names",
    "gauge_map",
    "oneform",
    "scalar_field",
    "pure_gauge_ambient",
]

_SU3 = geo.su_basis(3)

_NAMESPACE = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "pi": np.pi}


def _compile(expr: str, dim: int):
    code = compile(expr, "<field catalog>", "eval")

    def fn(x):
        # coordinates beyond the chart's ambient dimension read as zero:
        # a field on S^4 restricted to the equatorial S^3 sees x5 = 0
        loc = {f"x{i + 1}": (x[i] if i < x.shape[0] else 0.0)
               for i in range(max(dim, x.shape[0]))}
        val = eval(code, dict(_NAMESPACE), loc)
        return np.broadcast_to(val, x.shape[1:]).astype(float)

    return fn


_CACHE: dict | None = None


def catalog() -> dict:
    """Parsed catalog: name -> {kind, dim, entries}."""
    global _CACHE
    if _CACHE is None:
        cp = configparser.ConfigParser(interpolation=None)
        text = resources.files("prequant.data").joinpath("field_catalog.txt").read_text()
        cp.read_string(text)
        out = {}
        for sec in cp.sections():
            items = dict(cp.items(sec))
            kind = items.pop("kind")
            dim = int(items.pop("dim"))
            out[sec] = {"kind": kind, "dim": dim, "entries": items}
        _CACHE = out
    return _CACHE


def names(kind: str | None = None, dim: int | None = None):
    return sorted(
        n for n, s in catalog().items()
        if (kind is None or s["kind"] == kind) and (dim is None or s["dim"] == dim)
    )


def _algebra_evaluator(spec):
    """Ambient-coordinate evaluator x (k,B) -> (B, 3, 3), from x.<a> keys."""
    parts = [(int(k.split(".")[1]), _compile(v, spec["dim"]))
             for k, v in spec["entries"].items()]

    def fn(x):
        out = np.zeros(x.shape[1:] + (3, 3), dtype=complex)
        for a, f in parts:
            out += f(x)[..., None, None] * _SU3[a]
        return out

    return fn


def gauge_map(name: str) -> ExpGaugeMap:
    spec = catalog()[name]
    if spec["kind"] != "gauge":
        raise ValueError(f"{name} is not group-valued")
    ev = _algebra_evaluator(spec)
    return ExpGaugeMap(lambda chart, U: ev(chart.embed(U)), name=name)


def scalar_field(name: str):
    """Algebra-valued scalar as a chartwise evaluator (chart, U) -> (B,n,n)."""
    spec = catalog()[name]
    if spec["kind"] != "scalar":
        raise ValueError(f"{name} is not scalar")
    ev = _algebra_evaluator(spec)
    return lambda chart, U: ev(chart.embed(U))


def oneform(name: str) -> AmbientConnection:
    spec = catalog()[name]
    if spec["kind"] != "oneform":
        raise ValueError(f"{name} is not a 1-form")
    dim = spec["dim"]
    rows = []
    for k, v in spec["entries"].items():
        a = int(k.split(".")[1])
        comps = [s.strip() for s in v.split("|")]
        if len(comps) != dim:
            raise ValueError(f"{name}/{k}: expected {dim} components")
        rows.append((a, [_compile(c, dim) for c in comps]))

    def amb(x):
        # restriction to a lower-dimensional chart drops the trailing
        # components; extension to a higher-dimensional one pads with zeros
        k, B = x.shape
        out = np.zeros((k, B, 3, 3), dtype=complex)
        for a, fns in rows:
            for mu, f in enumerate(fns):
                if mu < k:
                    out[mu] += f(x)[:, None, None] * _SU3[a]
        return out

    return AmbientConnection(amb, name=name)


def pure_gauge_ambient(name: str, h: float = geo.FD_STEP) -> AmbientConnection:
    """A = g^{-1} dg of a catalog map, differentiated in ambient coordinates.

    Unlike the exactly-flat pure-gauge class, this goes through the generic
    curvature pipeline, so flatness shows up as a small numeric residual —
    useful as an honest "flat sample" for the functional suites.
    """
    spec = catalog()[name]
    ev = _algebra_evaluator(spec)

    def amb(x):
        g = geo.expm(ev(x))
        gi = np.linalg.inv(g)
        comps = []
        for mu in range(x.shape[0]):
            sh = []
            for c in (-2, -1, 1, 2):
                xc = x.copy()
                xc[mu] = xc[mu] + c * h
                sh.append(geo.expm(ev(xc)))
            dg = (sh[0] - 8 * sh[1] + 8 * sh[2] - sh[3]) / (12 * h)
            comps.append(gi @ dg)
        return np.stack(comps)

    return AmbientConnection(amb, name=f"puregauge({name})")
