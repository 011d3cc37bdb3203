"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Criteria 8 and 9 drive the shipped desk-scale sweep configuration.
"""

import time
from pathlib import Path

import numpy as np
import pytest

import haprtr
from haprtr.config_io import read_config
from haprtr.experiment import records_to_csv, run_experiment
from haprtr.geometry import (
    TangentVector,
    dist,
    exp_map,
    geodesic,
    inner,
    project_tangent,
    random_tangent,
    random_unit,
    retract,
    transport,
)
from haprtr.objective import HaplotypeObjective
from haprtr.pipeline import generate_instance, hd_ambiguous, mec
from haprtr.trustregion import RtrConfig, rtr_minimize, solve_subproblem

from conftest import brute_force_mec_min, random_point_and_basis, unit_tangent

EPS = 1e-6
DESK_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "desk.cfg"


def report(number, ok, detail):
    print(f"CRITERION {number}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {number} failed: {detail}"


def test_criterion_1_gradient_correctness():
    budget = 10.0
    start = time.perf_counter()
    rng = np.random.default_rng(12345)
    step = 1e-6
    worst = 0.0
    for pair in range(100):
        inst = generate_instance(20, 15, 0.6, 0.2, seed=1000 + pair)
        obj = HaplotypeObjective(inst.reads, EPS)
        x = random_unit(15, rng)
        grad = obj.riemannian_grad(x)
        for _ in range(5):
            xi = unit_tangent(x, rng)
            fd = (obj.cost(geodesic(x, xi, step)) - obj.cost(geodesic(x, xi, -step))) / (2 * step)
            an = inner(grad, xi)
            worst = max(worst, abs(fd - an) / max(abs(an), 1e-8))
    elapsed = time.perf_counter() - start
    report(1, worst < 1e-5 and elapsed < budget, f"worst rel {worst:.2e}, {elapsed:.1f}s")


def test_criterion_2_hessian_correctness():
    budget = 10.0
    start = time.perf_counter()
    rng = np.random.default_rng(0)
    step = 1e-5
    worst_fd = 0.0
    worst_sym = 0.0
    for pair in range(50):
        inst = generate_instance(20, 15, 0.6, 0.2, seed=2000 + pair)
        obj = HaplotypeObjective(inst.reads, EPS)
        x = random_unit(15, rng)
        xi = unit_tangent(x, rng)
        hv = obj.hess_vec(x, xi)

        plus = exp_map(x, TangentVector(x, step * xi.dir))
        minus = exp_map(x, TangentVector(x, -step * xi.dir))
        fd = (
            transport(plus, x, obj.riemannian_grad(plus)).dir
            - transport(minus, x, obj.riemannian_grad(minus)).dir
        ) / (2 * step)
        worst_fd = max(worst_fd, np.linalg.norm(fd - hv.dir) / max(np.linalg.norm(hv.dir), 1e-8))

        eta = unit_tangent(x, rng)
        lhs = inner(hv, eta)
        rhs = inner(xi, obj.hess_vec(x, eta))
        worst_sym = max(worst_sym, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0))
    elapsed = time.perf_counter() - start
    report(
        2,
        worst_fd < 1e-4 and worst_sym < 1e-8 and elapsed < budget,
        f"worst fd rel {worst_fd:.2e}, worst symmetry {worst_sym:.2e}, {elapsed:.1f}s",
    )


def test_criterion_3_manifold_suite():
    budget = 5.0
    start = time.perf_counter()
    rng = np.random.default_rng(777)
    cases = 1000
    ok = True
    for _ in range(cases):
        n = int(rng.integers(2, 12))
        x = random_unit(n, rng)
        v = rng.standard_normal(n) * rng.uniform(0.1, 10.0)
        once = project_tangent(x, v)
        twice = project_tangent(x, once.dir)
        ok &= bool(np.allclose(once.dir, twice.dir, atol=1e-12))
        ok &= abs(float(x.coords @ once.dir)) <= 1e-10 * (1.0 + float(np.linalg.norm(v)))

        speed = random_tangent(x, rng)
        t = float(rng.uniform(0.0, 2.0))
        ok &= abs(float(np.linalg.norm(geodesic(x, speed, t).coords)) - 1.0) <= 1e-10

        xi = TangentVector(x, random_tangent(x, rng).dir * rng.uniform(0.0, 5.0))
        y = retract(x, xi)
        ok &= abs(float(np.linalg.norm(y.coords)) - 1.0) <= 1e-12
        ok &= dist(x, y) <= xi.norm + 1e-12

        z = random_unit(n, rng)
        moved = transport(x, z, xi)
        ok &= abs(moved.norm - xi.norm) <= 1e-10 * (1.0 + xi.norm)
        if not ok:
            break
    elapsed = time.perf_counter() - start
    report(3, ok and elapsed < budget, f"{cases} cases per property, {elapsed:.1f}s")


def test_criterion_4_subproblem_guarantee():
    budget = 5.0
    start = time.perf_counter()
    rng = np.random.default_rng(99)
    cfg = RtrConfig()
    ok = True
    detail = ""
    for k in range(200):
        n = int(rng.integers(4, 16))
        x, basis = random_point_and_basis(n, rng)
        sym = rng.standard_normal((n, n))
        sym = 0.5 * (sym + sym.T)
        if k % 3 == 0:
            sym -= 0.8 * np.abs(np.linalg.eigvalsh(sym)).max() * np.eye(n)
        projector = np.eye(n) - np.outer(x.coords, x.coords)
        B = projector @ sym @ projector

        def op(t, B=B, x=x):
            return TangentVector(x, B @ t.dir)

        g = random_tangent(x, rng)
        if k % 7 == 0:
            g = TangentVector(x, 10.0 * g.dir)
        delta = float(rng.uniform(0.05, 2.0))
        res = solve_subproblem(g, op, delta, cfg)

        h_norm = float(np.linalg.norm(basis.T @ B @ basis, 2))
        floor = 0.5 * g.norm * (min(delta, g.norm / h_norm) if h_norm > 0 else delta)
        norm_ok = float(np.linalg.norm(res.step.dir)) <= delta * (1.0 + 1e-12)
        decrease_ok = res.model_decrease >= floor * (1.0 - 1e-10) - 1e-12
        if not (norm_ok and decrease_ok):
            ok = False
            detail = f"case {k}: norm_ok={norm_ok} decrease_ok={decrease_ok}"
            break
    elapsed = time.perf_counter() - start
    report(4, ok and elapsed < budget, detail or f"200 subproblems, {elapsed:.1f}s")


def test_criterion_5_convergence():
    budget = 60.0
    start = time.perf_counter()
    cfg = RtrConfig()
    converged = 0
    monotone = 0
    fallback_ok = True
    for s in range(50):
        inst = generate_instance(50, 40, 0.5, 0.2, seed=5000 + s)
        obj = HaplotypeObjective(inst.reads, EPS)
        x0 = random_unit(40, np.random.default_rng(s))
        _, trace = rtr_minimize(obj.oracles(), x0, cfg)
        if trace.converged:
            converged += 1
        else:
            fallback_ok &= trace.final_grad_norm <= 1e-3
        costs = trace.accepted_costs()
        monotone += all(b <= a for a, b in zip(costs, costs[1:]))
    elapsed = time.perf_counter() - start
    report(
        5,
        converged >= 48 and monotone == 50 and fallback_ok and elapsed < budget,
        f"converged {converged}/50 (need >= 48), monotone {monotone}/50, {elapsed:.1f}s",
    )


def test_criterion_6_exact_recovery_noiseless():
    budget = 30.0
    start = time.perf_counter()
    hits = 0
    for s in range(100):
        inst = generate_instance(20, 10, 1.0, 0.0, seed=6000 + s)
        outcome = haprtr.solve_with_rtr(inst.reads, attempts=3, seed=s)
        hits += hd_ambiguous(outcome.haplotype, inst.truth) == 0
    elapsed = time.perf_counter() - start
    report(6, hits >= 95 and elapsed < budget, f"hd=0 in {hits}/100 runs, {elapsed:.1f}s")


def test_criterion_7_mec_oracle():
    budget = 60.0
    start = time.perf_counter()
    lower_bound_ok = 0
    near_optimal = 0
    for s in range(20):
        inst = generate_instance(30, 10, 0.7, 0.1, seed=7000 + s)
        optimum = brute_force_mec_min(inst.reads)
        lower_bound_ok += mec(inst.reads, inst.truth) >= optimum
        outcome = haprtr.solve_with_rtr(inst.reads, attempts=3, seed=s)
        near_optimal += outcome.mec <= optimum + 2
    elapsed = time.perf_counter() - start
    report(
        7,
        lower_bound_ok == 20 and near_optimal >= 16 and elapsed < budget,
        f"truth >= optimum {lower_bound_ok}/20, within 2 of optimum {near_optimal}/20, {elapsed:.1f}s",
    )


@pytest.fixture(scope="module")
def desk_sweep():
    cfg = read_config(DESK_CONFIG)
    start = time.perf_counter()
    records = run_experiment(cfg)
    elapsed = time.perf_counter() - start
    return cfg, records, elapsed


def test_criterion_8_ordering_analogue(desk_sweep):
    budget = 300.0
    cfg, records, elapsed = desk_sweep
    ordering = []
    for pd in cfg.pd_grid:
        means = {}
        for method in cfg.methods:
            values = [r.hd for r in records if r.method == method and r.pd == pd]
            means[method] = sum(values) / len(values)
        ordering.append((pd, means["rtr"], means["altmin"], means["rtr"] <= means["altmin"]))
    ok = all(flag for *_, flag in ordering) and elapsed < budget
    detail = "; ".join(f"pd={pd}: rtr {a:.2f} vs altmin {b:.2f}" for pd, a, b, _ in ordering)
    report(8, ok, f"{detail}, {elapsed:.1f}s")


def test_criterion_9_determinism(desk_sweep):
    cfg, records, _ = desk_sweep
    first = records_to_csv(records)
    second = records_to_csv(run_experiment(cfg))
    report(9, first == second, f"rerun CSV identical: {first == second}, {len(first)} bytes")
