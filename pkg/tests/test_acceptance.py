"""Acceptance gate: one check per criterion, each printing a pass/fail line.

Heavy suite outputs are shared through module-scoped fixtures so each
expensive quadrature battery runs exactly once.
"""

import json
import random
import time

import numpy as np
import pytest

from prequant import algebra as alg
from prequant import cli, hodge


CFG = cli.RunConfig()


def _verdict(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _timed(runner):
    t0 = time.perf_counter()
    results = runner(CFG)
    return results, time.perf_counter() - t0


@pytest.fixture(scope="module")
def cocycle_results():
    return _timed(cli.run_cocycle)


@pytest.fixture(scope="module")
def pw_results():
    return _timed(cli.run_polyakov_wiegmann)


@pytest.fixture(scope="module")
def moment_results():
    return _timed(cli.run_moment_map)


@pytest.fixture(scope="module")
def closedness_results():
    return _timed(cli.run_closedness)


@pytest.fixture(scope="module")
def hodge_results():
    return _timed(cli.run_hodge)


@pytest.fixture(scope="module")
def extension_results():
    return _timed(cli.run_extension)


@pytest.fixture(scope="module")
def wzw_results():
    return _timed(cli.run_wzw_action)


@pytest.fixture(scope="module")
def holonomy_results():
    return _timed(cli.run_holonomy)


def _by_id(results, key):
    match = [r for r in results if r["identity_id"] == key]
    assert len(match) == 1, key
    return match[0]


def test_criterion_01_symbolic_descent():
    t0 = time.perf_counter()
    report = alg.verify_descent_suite()
    dt = time.perf_counter() - t0
    bad = [r["identity_id"] for r in report if not r["passed"]]
    ok = not bad and dt < 10.0
    _verdict("criterion-01 symbolic descent",
             ok, f"{len(report)} identities exactly zero in {dt:.2f}s "
                 f"(failures: {bad})")


def test_criterion_02_differential_property_suites():
    t0 = time.perf_counter()
    rng = random.Random(12345)
    worst = None
    for _ in range(700):
        e = alg.random_trace_expr(rng)
        if not alg.differential(alg.differential(e)).is_zero():
            worst = e
            break
    cob_bad = None
    for _ in range(300):
        body = alg.random_trace_expr(rng, n_slots=1)
        c = alg.Cochain(1, body)
        if not alg.coboundary(alg.coboundary(c)).body.is_zero():
            cob_bad = body
            break
    dt = time.perf_counter() - t0
    ok = worst is None and cob_bad is None and dt < 30.0
    _verdict("criterion-02 d.d=0 and delta.delta=0",
             ok, f"1000 seeded expressions in {dt:.2f}s")


def test_criterion_03_cocycle_composition(cocycle_results):
    results, dt = cocycle_results
    worst = max(r["residual"] for r in results)
    delta = _by_id(results, "cocycle/triple-1")["refinement_delta"]
    ok = (len(results) >= 5 and worst < 1e-4 and delta is not None
          and delta > 0 and dt < 300.0)
    _verdict("criterion-03 multiplier cocycle",
             ok, f"worst residual {worst:.3e} over {len(results)} triples, "
                 f"refinement delta {delta:.3e}, {dt:.1f}s")


def test_criterion_04_product_formula(pw_results):
    results, dt = pw_results
    pair_res = [r["residual"] for r in results
                if "pair" in r["identity_id"]]
    amb = _by_id(results, "polyakov-wiegmann/extension-ambiguity")
    worst = max(pair_res)
    ok = (len(pair_res) >= 3 and worst < 1e-4 and amb["residual"] < 1e-4
          and dt < 600.0)
    _verdict("criterion-04 winding product formula",
             ok, f"worst integer distance {worst:.3e} over {len(pair_res)} "
                 f"pairs, ambiguity {amb['residual']:.3e}, {dt:.1f}s")


def test_criterion_05_moment_derivative(moment_results):
    results, dt = moment_results
    rel = max(r["residual"] for r in results
              if "derivative" in r["identity_id"])
    flat = _by_id(results, "moment-map/flat-vanishing")["residual"]
    ok = rel < 1e-3 and flat < 1e-6
    _verdict("criterion-05 moment map derivative",
             ok, f"worst relative error {rel:.3e}, flat value {flat:.3e}, "
                 f"{dt:.1f}s")


def test_criterion_06_two_form_closedness(closedness_results):
    results, dt = closedness_results
    omega = _by_id(results, "closedness/omega")["residual"]
    grid = hodge.LatticeGrid(6, 2)
    rng = np.random.default_rng(CFG.seed)
    A = grid.random_oneform(rng, scale=0.4)
    a = grid.random_oneform(rng)
    b = grid.random_oneform(rng)
    phi = abs(hodge.phi_pairing(A, a, b, grid))
    faa = grid.norm_scalar(hodge.curvature_form_F0(A, a, a, grid))
    ok = omega < 1e-3 and phi < 1e-10 and faa < 1e-12
    _verdict("criterion-06 closedness",
             ok, f"2-form residual {omega:.3e} (relative), lattice pairing "
                 f"{phi:.3e}, repeated-argument curvature {faa:.3e}")


def test_criterion_07_gradient_anchor(closedness_results):
    results, _ = closedness_results
    rel = _by_id(results, "closedness/gradient-anchor")["residual"]
    ok = rel < 1e-3
    _verdict("criterion-07 gradient anchor",
             ok, f"FD vs cubic boundary pairing relative error {rel:.3e}")


def test_criterion_08_lattice_hodge(hodge_results):
    results, dt = hodge_results
    green = _by_id(results, "hodge/green-residual")["residual"]
    orth = max(_by_id(results, "hodge/decomposition-orthogonality")
               ["residual"],
               _by_id(results, "hodge/full-orthogonality")["residual"])
    pairing = _by_id(results, "hodge/trace-pairing")["residual"]
    all_ok = all(r["passed"] for r in results)
    ok = (green < 1e-8 and orth < 1e-7 and pairing < 1e-6 and all_ok
          and dt < 60.0)
    _verdict("criterion-08 lattice decomposition",
             ok, f"green {green:.3e}, orthogonality {orth:.3e}, pairing "
                 f"{pairing:.3e}, all {len(results)} checks in {dt:.1f}s")


def test_criterion_09_extension_group_law(extension_results, wzw_results):
    ext, dt = extension_results
    assoc = _by_id(ext, "extension/associativity")["residual"]
    compat = _by_id(ext, "extension/action-compatibility")["residual"]
    mult = _by_id(wzw_results[0], "wzw-action/multiplicativity")["residual"]
    ok = assoc < 1e-4 and compat < 1e-4 and mult < 1e-4
    _verdict("criterion-09 extension group law",
             ok, f"associativity {assoc:.3e}, action compatibility "
                 f"{compat:.3e}, multiplicativity {mult:.3e}, {dt:.1f}s")


def test_criterion_10_section_equivariance(wzw_results):
    results, dt = wzw_results
    south = _by_id(results, "wzw-action/section-equivariance-south")
    north = _by_id(results, "wzw-action/section-equivariance-north")
    ok = south["residual"] < 1e-4 and north["residual"] < 1e-4
    _verdict("criterion-10 section equivariance",
             ok, f"south {south['residual']:.3e}, north "
                 f"{north['residual']:.3e}, {dt:.1f}s")


def test_criterion_11_holonomy(holonomy_results):
    results, dt = holonomy_results
    worst = max(r["residual"] for r in results)
    ok = all(r["passed"] for r in results) and worst < 1e-5
    _verdict("criterion-11 transport reconstruction",
             ok, f"worst residual {worst:.3e} across {len(results)} checks, "
                 f"{dt:.1f}s")


def test_criterion_12_deterministic_reports(tmp_path, capsys):
    args = ["--suite", "hodge", "--seed", "31"]
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    c1 = cli.main([*args, "--report", str(p1)])
    c2 = cli.main([*args, "--report", str(p2)])
    capsys.readouterr()
    raw1, raw2 = p1.read_bytes(), p2.read_bytes()
    report = json.loads(raw1)
    ok = c1 == 0 and c2 == 0 and raw1 == raw2 and report["results"]
    _verdict("criterion-12 deterministic reports",
             bool(ok), f"{len(raw1)} bytes, byte-identical across runs")
