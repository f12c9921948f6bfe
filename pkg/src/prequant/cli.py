"""Command-line driver: run named verification suites, emit JSON reports.

Each suite evaluates a fixed battery of numerical identities on catalogued
analytic test fields and reports one residual per identity.  Reports are
validated against the bundled JSON schema and are byte-identical across
runs with the same configuration (timings are off by default because wall
times are not reproducible).
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import sys
import time
from importlib import resources

import numpy as np
from jsonschema import validate as _validate_schema

from . import algebra as alg
from . import bundles as bd
from . import fields
from . import functionals as fn
from . import gauge
from . import geometry as geo
from . import hodge

SCHEMA_VERSION = "1.0"


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclasses.dataclass
class RunConfig:
    """Resolved knobs for a verification run."""

    suite: str = "all"
    seed: int = 7
    quad_order: int | None = None   # override the per-check quadrature orders
    fd_step: float | None = None    # override the per-check FD step
    lattice_n: int = 8              # hodge lattice sites per axis
    matrix_n: int = 2               # hodge matrix size
    tolerance: float | None = None  # override every per-check tolerance
    record_timings: bool = False
    report: str | None = None

    def echo(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "quad_order": self.quad_order,
            "fd_step": self.fd_step,
            "lattice_n": self.lattice_n,
            "matrix_n": self.matrix_n,
            "tolerance": self.tolerance,
            "record_timings": self.record_timings,
        }

    def orders(self, o4: int, o5: int) -> tuple[int, int]:
        if self.quad_order is not None:
            return self.quad_order, max(5, self.quad_order // 2 + 2)
        return o4, o5

    def step(self, h: float) -> float:
        return h if self.fd_step is None else self.fd_step


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.mark = time.perf_counter()

    def lap(self):
        now = time.perf_counter()
        ms = (now - self.mark) * 1000.0
        self.mark = now
        return round(ms, 3) if self.enabled else None


def _result(cfg: RunConfig, timer: _Timer, identity_id: str, statement: str,
            residual: float, tolerance: float, refinement_delta=None) -> dict:
    tol = tolerance if cfg.tolerance is None else cfg.tolerance
    residual = float(residual)
    return {
        "identity_id": identity_id,
        "statement": statement,
        "residual": residual,
        "tolerance": tol,
        "refinement_delta": (None if refinement_delta is None
                             else float(refinement_delta)),
        "passed": bool(residual <= tol),
        "wall_time_ms": timer.lap(),
    }


# ---------------------------------------------------------------------------
# suite runners
# ---------------------------------------------------------------------------


def run_symbolic_descent(cfg: RunConfig) -> list[dict]:
    timer = _Timer(cfg.record_timings)
    out = []
    for item in alg.verify_descent_suite():
        residual = 0.0 if item["passed"] else 1.0
        out.append(_result(
            cfg, timer, "descent/" + item["identity_id"],
            "symbolic identity reduces to the zero normal form exactly",
            residual, 0.0))
    return out


_COCYCLE_TRIPLES = (("s4.g1", "s4.g2", "s4.A1"), ("s4.g2", "s4.g3", "s4.A1"),
                    ("s4.g1", "s4.g3", "s4.A2"), ("s4.g3", "s4.g4", "s4.A2"),
                    ("s4.g2", "s4.g4", "s4.A1"))


def _cocycle_residual(g, h, A, ws) -> float:
    gh = g * h
    gA = gauge.gauge_act(g, A)
    return abs(fn.theta(g, A, ws) * fn.theta(h, gA, ws) - fn.theta(gh, A, ws))


def run_cocycle(cfg: RunConfig) -> list[dict]:
    timer = _Timer(cfg.record_timings)
    ws = fn.Workspace(*cfg.orders(8, 5))
    ws_fine = fn.Workspace(*cfg.orders(10, 6))
    out = []
    for i, (gn, hn, An) in enumerate(_COCYCLE_TRIPLES):
        g, h = fields.gauge_map(gn), fields.gauge_map(hn)
        A = fields.oneform(An)
        r = _cocycle_residual(g, h, A, ws)
        delta = None
        if i == 0:
            r_fine = _cocycle_residual(g, h, A, ws_fine)
            delta = r - r_fine
        out.append(_result(
            cfg, timer, f"cocycle/triple-{i + 1}",
            "unit-circle multiplier composes under successive gauge "
            f"transformations ({gn}, {hn} at {An})",
            r, 1e-4, refinement_delta=delta))
    return out


_PW_PAIRS = ((("s4.g1", "s4.g2"), ("s4.g3",)),
             (("s4.g3", "s4.g4"), ("s4.g5",)),
             (("s4.g2", "s4.g5"), ("s4.g1", "s4.g4")))


def _prod(names):
    m = fields.gauge_map(names[0])
    for n in names[1:]:
        m = m * fields.gauge_map(n)
    return m


def run_polyakov_wiegmann(cfg: RunConfig) -> list[dict]:
    timer = _Timer(cfg.record_timings)
    ws = fn.Workspace(*cfg.orders(10, 7))
    out = []
    for i, (fns, gns) in enumerate(_PW_PAIRS):
        f, g = _prod(fns), _prod(gns)
        res = (fn.c5(f * g, ws) - fn.c5(f, ws) - fn.c5(g, ws)
               - fn.gamma_pw(f, g, ws))
        dist = abs(res - np.round(res.real))
        out.append(_result(
            cfg, timer, f"polyakov-wiegmann/pair-{i + 1}",
            "product defect of the five-dimensional winding functional "
            "matches the boundary cross term up to an integer "
            f"({'*'.join(fns)} with {'*'.join(gns)})",
            dist, 1e-4))
    f = _prod(_PW_PAIRS[0][0])
    amb = fn.c5(f, ws) - fn.c5(f, ws, profile=lambda s: s * s)
    out.append(_result(
        cfg, timer, "polyakov-wiegmann/extension-ambiguity",
        "changing the radial extension profile shifts the winding "
        "functional by an integer",
        abs(amb - np.round(amb.real)), 1e-4))
    return out


def run_moment_map(cfg: RunConfig) -> list[dict]:
    timer = _Timer(cfg.record_timings)
    ws = fn.Workspace(order4=cfg.orders(14, 5)[0])
    pairs = (("d.A1", "d.a1", "d.xi1"), ("d.A2", "d.a2", "d.xi2"))
    out = []
    for i, (An, an, xn) in enumerate(pairs):
        chk = fn.moment_derivative_check(
            fields.oneform(An), fields.oneform(an), fields.scalar_field(xn),
            ws, h=cfg.step(1e-3))
        out.append(_result(
            cfg, timer, f"moment-map/derivative-{i + 1}",
            "directional derivative of the moment functional equals the "
            f"symplectic pairing with the covariant gradient ({An}, {an}, "
            f"{xn})",
            chk["rel_err"], 1e-3))
    flat = fields.gauge_map("s3.g1").pure_gauge()
    phi = abs(fn.moment(flat, fields.scalar_field("d.xi1"), ws,
                        order=cfg.orders(8, 5)[0]))
    out.append(_result(
        cfg, timer, "moment-map/flat-vanishing",
        "the moment functional vanishes on a curvature-free connection",
        phi, 1e-6))
    return out


def _cs_anchor_check(ws: fn.Workspace, hstep: float) -> float:
    """FD derivative of the 4-sphere functional along a gauge family versus
    the closed-form cubic boundary pairing; returns the relative error."""
    base = fields.gauge_map("s4.cs1")
    eta = fields.scalar_field("s4.eta1")
    conns = {}

    def conn_at(t: float):
        if t not in conns:
            sc = gauge.ExpGaugeMap(lambda ch, U, t=t: t * eta(ch, U))
            conns[t] = (base * sc).pure_gauge()
        return conns[t]

    class _TangentFD(gauge.Connection):
        def components(self, chart, U):
            cs = [conn_at(c * hstep).components(chart, U)
                  for c in (-2, -1, 1, 2)]
            return (cs[0] - 8 * cs[1] + 8 * cs[2] - cs[3]) / (12 * hstep)

    vals = {c: fn.cs_s4(conn_at(c * hstep), ws) for c in (-2, -1, 1, 2)}
    fd = (vals[-2] - 8 * vals[-1] + 8 * vals[1] - vals[2]) / (12 * hstep)
    an = fn.cs_gradient_form(conn_at(0.0), _TangentFD(), ws)
    return abs(fd - an) / max(abs(an), 1e-30)


def run_closedness(cfg: RunConfig) -> list[dict]:
    timer = _Timer(cfg.record_timings)
    ws = fn.Workspace(order4=cfg.orders(8, 5)[0])
    ws_omega = fn.Workspace(order4=cfg.orders(12, 5)[0])
    A = fields.oneform("d.A1")
    tangents = tuple(fields.oneform(n) for n in ("d.a1", "d.a2", "d.a3"))
    chk = fn.omega_closedness_check(A, tangents, ws_omega, h=cfg.step(1e-2))
    out = [_result(
        cfg, timer, "closedness/omega",
        "FD exterior derivative of the symplectic 2-form vanishes on an "
        "affine 3-parameter family",
        chk["normalized"], 1e-3)]
    flat = fields.gauge_map("s3.g1").pure_gauge()
    xi1 = fields.scalar_field("d.xi1")
    a = fn.covariant_scalar_derivative(flat, xi1)
    b = fn.covariant_scalar_derivative(flat, fields.scalar_field("d.xi2"))
    obs = fn.infinitesimal_symplectic_check(flat, a, b, xi1, ws)
    out.append(_result(
        cfg, timer, "closedness/infinitesimal-symmetry",
        "boundary obstruction to the infinitesimal gauge symmetry vanishes "
        "for a flat connection and covariantly exact tangents",
        obs, 1e-3))
    ws_cs = fn.Workspace(*cfg.orders(14, 9))
    out.append(_result(
        cfg, timer, "closedness/gradient-anchor",
        "FD derivative of the 4-sphere functional along a gauge family "
        "matches the cubic pairing with the tangent",
        _cs_anchor_check(ws_cs, cfg.step(1e-2)), 1e-3))
    return out


def run_holonomy(cfg: RunConfig) -> list[dict]:
    timer = _Timer(cfg.record_timings)
    rng = np.random.default_rng(cfg.seed)
    B = 12
    targets = np.stack([
        rng.uniform(0.15, 0.9, B),
        rng.uniform(0.3, np.pi - 0.3, B),
        rng.uniform(0.3, np.pi - 0.3, B),
        rng.uniform(0.2, 2 * np.pi - 0.2, B),
    ])
    mid = np.stack([
        rng.uniform(0.2, 0.8, B),
        rng.uniform(0.5, np.pi - 0.5, B),
        rng.uniform(0.5, np.pi - 0.5, B),
        rng.uniform(0.5, 2 * np.pi - 0.5, B),
    ])
    f = fields.gauge_map("s3.g1")
    A = f.pure_gauge()
    n_steps = 96
    fa = gauge.reconstruct_gauge(A, geo.DISC_CHART, targets, n_steps=n_steps)
    fv = f.values(geo.DISC_CHART, targets)
    out = [_result(
        cfg, timer, "holonomy/reconstruction",
        "transport of a pure-gauge connection recovers the generating map "
        "pointwise",
        float(np.abs(fa - fv).max()), 1e-5)]
    rt = gauge.reconstruction_roundtrip(A, geo.DISC_CHART, targets,
                                        n_steps=n_steps, h=cfg.step(1e-3))
    out.append(_result(
        cfg, timer, "holonomy/round-trip",
        "logarithmic derivative of the reconstructed map returns the "
        "connection",
        rt, 1e-5))
    p0 = gauge.BASEPOINT_DISC

    def bent(t):
        t = np.asarray(t)
        leg1 = p0[:, None] + (2 * t) * (mid - p0[:, None])
        leg2 = mid + (2 * t - 1) * (targets - mid)
        return np.where(t < 0.5, leg1, leg2)

    fb = gauge.parallel_transport(A, geo.DISC_CHART, bent,
                                  n_steps=2 * n_steps)
    out.append(_result(
        cfg, timer, "holonomy/path-independence",
        "transport of a flat connection agrees along straight and bent "
        "paths",
        float(np.abs(fa - fb).max()), 1e-5))
    g = fields.gauge_map("s3.g2")
    Ag = gauge.gauge_act(g, A)
    fag = gauge.reconstruct_gauge(Ag, geo.DISC_CHART, targets,
                                  n_steps=n_steps, flat_tol=1e-5)
    gv = g.values(geo.DISC_CHART, targets)
    out.append(_result(
        cfg, timer, "holonomy/equivariance",
        "transport intertwines the right gauge action on connections with "
        "right multiplication of maps",
        float(np.abs(fag - fa @ gv).max()), 1e-5))
    return out


def run_hodge(cfg: RunConfig) -> list[dict]:
    timer = _Timer(cfg.record_timings)
    rng = np.random.default_rng(cfg.seed)
    grid = hodge.LatticeGrid(cfg.lattice_n, cfg.matrix_n)
    A = grid.random_oneform(rng, scale=0.4)
    xi0 = grid.random_scalar(rng, interior=True)
    a = grid.random_oneform(rng)
    out = []

    lhs = grid.ip_oneform(hodge.d_A(A, xi0, grid), a)
    rhs = grid.ip_scalar(xi0, hodge.d_A_star(A, a, grid, dirichlet=True))
    out.append(_result(
        cfg, timer, "hodge/adjointness",
        "covariant divergence is the exact inner-product adjoint of the "
        "covariant gradient",
        abs(lhs - rhs), 1e-10))

    rhs0 = hodge.laplacian(A, xi0, grid, dirichlet=True)
    res = hodge.dirichlet_green(A, rhs0, grid)
    out.append(_result(
        cfg, timer, "hodge/green-residual",
        "interior inverse of the covariant Laplacian converges",
        res.residual, 1e-8))
    out.append(_result(
        cfg, timer, "hodge/green-roundtrip",
        "forward Laplacian followed by its interior inverse recovers the "
        "input scalar",
        grid.norm_scalar(res.solution - xi0) / grid.norm_scalar(xi0), 1e-8))

    xi, h, info = hodge.decompose0(A, a, grid)
    out.append(_result(
        cfg, timer, "hodge/decomposition-orthogonality",
        "gradient and divergence-free parts of a 1-form are orthogonal",
        info["orthogonality"], 1e-7))
    grad = hodge.d_A(A, xi0, grid)
    _, h2, _ = hodge.decompose0(A, grad, grid)
    out.append(_result(
        cfg, timer, "hodge/pure-gradient",
        "a pure covariant gradient has no divergence-free component",
        grid.norm_oneform(h2) / grid.norm_oneform(grad), 1e-7))

    _, eta, c, infof = hodge.decompose_full(A, a, grid)
    out.append(_result(
        cfg, timer, "hodge/full-orthogonality",
        "three-way splitting with the boundary-flux part stays orthogonal",
        infof["orthogonality"], 1e-7))
    _, _, c3, _ = hodge.decompose_full(A, c, grid)
    out.append(_result(
        cfg, timer, "hodge/idempotence",
        "re-splitting the third component returns it unchanged",
        grid.norm_oneform(c3 - c) / grid.norm_oneform(c), 1e-7))

    b = grid.random_oneform(rng)
    f0aa = hodge.curvature_form_F0(A, a, a, grid)
    out.append(_result(
        cfg, timer, "hodge/curvature-antisymmetry",
        "lattice curvature 2-form vanishes on repeated arguments",
        grid.norm_scalar(f0aa), 1e-12))
    out.append(_result(
        cfg, timer, "hodge/trace-pairing",
        "plain trace pairing of traceless fields vanishes",
        abs(hodge.phi_pairing(A, a, b, grid)), 1e-6))

    A0 = grid.zeros_oneform()
    curl = hodge.covariant_curl(A0, hodge.d_A(A0, xi0, grid), grid)
    out.append(_result(
        cfg, timer, "hodge/flat-curl-of-gradient",
        "at zero connection the lattice curl of a gradient is exactly zero",
        float(np.max(np.abs(curl))), 1e-12))

    buf = hodge.serialize_field(a)
    back = hodge.deserialize_field(buf, grid, "oneform")
    out.append(_result(
        cfg, timer, "hodge/serialization",
        "field serialization round-trips bit-exactly",
        float(np.max(np.abs(back - a))), 0.0))
    return out


def _zero_connection():
    return gauge.AmbientConnection(
        lambda x: np.zeros(x.shape + (3, 3), dtype=complex), name="zero")


def run_extension(cfg: RunConfig) -> list[dict]:
    timer = _Timer(cfg.record_timings)
    ws = fn.Workspace(order4=cfg.orders(10, 5)[0])
    ws_hi = fn.Workspace(order4=cfg.orders(14, 5)[0])
    f = fields.gauge_map("s3.g1")
    g = fields.gauge_map("s3.g2")
    k = fields.gauge_map("s3.g3")
    probes = (_zero_connection(), fields.oneform("s3.B1"),
              fields.oneform("s3.B2"))
    x, y, z = bd.ext_element(f), bd.ext_element(g), bd.ext_element(k)
    out = []

    e = bd.ext_identity()
    B1 = probes[1]
    rid = max(abs(bd.ext_mul(e, y, ws).lam(B1) - y.lam(B1)),
              abs(bd.ext_mul(y, e, ws).lam(B1) - y.lam(B1)))
    out.append(_result(
        cfg, timer, "extension/identity-law",
        "the extension identity element acts neutrally on both sides",
        rid, 1e-12))
    xi = bd.ext_inverse(x, ws)
    rinv = max(abs(bd.ext_mul(x, xi, ws).lam(A) - 1.0) for A in probes)
    out.append(_result(
        cfg, timer, "extension/inverse-law",
        "the constructed inverse multiplies to the identity on all probes",
        rinv, 1e-12))
    out.append(_result(
        cfg, timer, "extension/associativity",
        "triple products in the extended group agree in both bracketings",
        bd.ext_assoc_residual(x, y, z, probes, ws_hi), 1e-4))
    s = bd.line_element(k)
    out.append(_result(
        cfg, timer, "extension/action-compatibility",
        "acting by a product equals acting in sequence on the line element",
        bd.ext_action_compat_residual(x, y, s, ws), 1e-4))
    out.append(_result(
        cfg, timer, "extension/equivariance",
        "the base of the acted element is the gauge-transformed base",
        bd.ext_act_equivariance_residual(x, s, ws), 1e-8))
    out.append(_result(
        cfg, timer, "extension/unitarity",
        "acting preserves the modulus of the fiber",
        abs(abs(bd.ext_act(x, s, ws).fiber) - 1.0), 1e-12))
    h0 = fields.gauge_map("d0.h1")
    conj = bd.normal_conjugation_residual(x, h0, probes[:2], ws)
    out.append(_result(
        cfg, timer, "extension/normal-constancy",
        "conjugating an equator-trivial element yields a "
        "connection-independent multiplier",
        conj["constancy"], 1e-12))
    out.append(_result(
        cfg, timer, "extension/normal-conjugation",
        "that multiplier is the expected winding phase of the conjugated "
        "map",
        conj["residual"], 1e-12))
    return out


def run_wzw_action(cfg: RunConfig) -> list[dict]:
    timer = _Timer(cfg.record_timings)
    ws = fn.Workspace(*cfg.orders(12, 7))
    f = _prod(("s3.g1", "s3.g2"))
    g = _prod(("s3.g2", "s3.g3"))
    h = _prod(("s3.g3", "s3.g1"))
    fp = f * fields.gauge_map("d0.h1")
    gp = g * fields.gauge_map("d0.h2")
    hp = h * fields.gauge_map("d0.h3")
    out = [_result(
        cfg, timer, "wzw-action/multiplicativity",
        "glued boundary elements multiply through the winding cross term",
        bd.wz_mul_residual(f, fp, g, gp, ws), 1e-4)]
    out.append(_result(
        cfg, timer, "wzw-action/section-equivariance-south",
        "the section over the south chart transforms by the predicted "
        "unit-circle multiplier",
        bd.wzw_action_residual(f, fp, h, hp, ws), 1e-4))
    out.append(_result(
        cfg, timer, "wzw-action/section-equivariance-north",
        "same check with the roles of the hemispheres exchanged and "
        "distinct data",
        bd.wzw_action_residual(gp, g, hp, h, ws, region="D'"), 1e-4))
    sD = bd.line_element(h, 1.0, "D")
    sDp = bd.line_element(hp, 1.0, "D'")
    pair0 = bd.cs_pair(sD, sDp, ws)
    h0 = fields.gauge_map("d0.h2")
    pair1 = bd.cs_pair(bd.line_act(h0, sD, ws), sDp, ws)
    out.append(_result(
        cfg, timer, "wzw-action/pairing-invariance",
        "the duality pairing of the two hemisphere lines is unchanged by "
        "an equator-trivial action",
        abs(pair1 - pair0), 1e-4))
    horiz = bd.horizontality_check(
        fields.gauge_map("s4.cs1").pure_gauge(), fields.scalar_field("d0.y1"),
        ws, order=cfg.orders(12, 7)[0], hstep=cfg.step(5e-2))
    out.append(_result(
        cfg, timer, "wzw-action/horizontality",
        "the log-derivative of the section equals i(2 pi) times the "
        "connection 1-form along a boundary-fixing family",
        horiz["residual_2pi"], 1e-4))
    return out


SUITES = {
    "symbolic-descent": ("exact symbolic descent identities",
                         run_symbolic_descent),
    "cocycle": ("composition law of the unit-circle gauge multiplier",
                run_cocycle),
    "polyakov-wiegmann": ("product defect of the winding functional",
                          run_polyakov_wiegmann),
    "moment-map": ("moment functional and its directional derivative",
                   run_moment_map),
    "closedness": ("closedness of the 2-form and gradient anchors",
                   run_closedness),
    "holonomy": ("parallel transport and gauge reconstruction",
                 run_holonomy),
    "hodge": ("lattice covariant Hodge decomposition",
              run_hodge),
    "extension": ("extended group law and its line-bundle action",
                  run_extension),
    "wzw-action": ("glued bundle elements, duality pairing, horizontality",
                   run_wzw_action),
}


# ---------------------------------------------------------------------------
# report assembly and entry point
# ---------------------------------------------------------------------------


def load_schema() -> dict:
    text = (resources.files("prequant") / "schema" /
            "report_schema.json").read_text()
    return json.loads(text)


def build_report(cfg: RunConfig) -> dict:
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    results = []
    for name in names:
        results.extend(SUITES[name][1](cfg))
    report = {
        "schema_version": SCHEMA_VERSION,
        "config_echo": cfg.echo(),
        "results": results,
    }
    _validate_schema(instance=report, schema=load_schema())
    return report


def render_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def list_suites() -> dict:
    return {name: {"description": desc} for name, (desc, _) in SUITES.items()}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="prequant-verify",
        description="Run numerical verification suites and emit a JSON "
                    "report.")
    p.add_argument("--suite", choices=list(SUITES) + ["all"], default=None,
                   help="suite to run (default: all)")
    p.add_argument("--config", help="INI file with a [verify] section whose "
                                    "keys mirror these flags")
    p.add_argument("--seed", type=int, default=None,
                   help="seed for the randomized probes (default: 7)")
    p.add_argument("--quad-order", type=int, default=None,
                   help="override the per-check quadrature orders")
    p.add_argument("--fd-step", type=float, default=None,
                   help="override the per-check finite-difference steps")
    p.add_argument("--lattice-n", type=int, default=None,
                   help="lattice sites per axis for the hodge suite "
                        "(default: 8)")
    p.add_argument("--matrix-n", type=int, default=None,
                   help="matrix size for the hodge suite (default: 2)")
    p.add_argument("--tolerance", type=float, default=None,
                   help="override every per-check tolerance")
    p.add_argument("--report", help="write the JSON report to this path")
    p.add_argument("--record-timings", action="store_true", default=None,
                   help="include wall times (makes reports non-reproducible)")
    p.add_argument("--list-suites", action="store_true",
                   help="print the suite catalog as JSON and exit")
    return p


_CONFIG_KEYS = {
    "suite": str,
    "seed": int,
    "quad_order": int,
    "fd_step": float,
    "lattice_n": int,
    "matrix_n": int,
    "tolerance": float,
    "record_timings": bool,
    "report": str,
}


def _load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    with open(path) as fh:
        parser.read_file(fh)
    if not parser.has_section("verify"):
        raise SystemExit(f"config file {path!r} has no [verify] section")
    out = {}
    for raw_key, raw in parser.items("verify"):
        key = raw_key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise SystemExit(f"unknown config key {raw_key!r}")
        conv = _CONFIG_KEYS[key]
        if conv is bool:
            out[key] = parser.getboolean("verify", raw_key)
        else:
            out[key] = conv(raw)
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        for key, value in _load_config_file(args.config).items():
            setattr(cfg, key, value)
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if cfg.suite != "all" and cfg.suite not in SUITES:
        raise SystemExit(f"unknown suite {cfg.suite!r}")
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.list_suites:
        print(json.dumps(list_suites(), indent=2, sort_keys=True))
        return 0
    cfg = resolve_config(args)
    report = build_report(cfg)
    text = render_report(report)
    if cfg.report:
        with open(cfg.report, "w") as fh:
            fh.write(text)
    n_fail = 0
    for r in report["results"]:
        status = "PASS" if r["passed"] else "FAIL"
        n_fail += not r["passed"]
        print(f"{status}  {r['identity_id']}: residual {r['residual']:.3e} "
              f"(tolerance {r['tolerance']:.3e})")
    print(f"{len(report['results']) - n_fail}/{len(report['results'])} "
          f"checks passed")
    return 0 if n_fail == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
