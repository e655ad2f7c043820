"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured value
and the tolerance.  The lines are collected and repeated in the pytest
terminal summary; ``python3 tests/test_acceptance.py`` prints them directly.
"""

from __future__ import annotations

import itertools
import math
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import interior_points  # noqa: E402
from quasiyamabe import catalog, jets as J  # noqa: E402
from quasiyamabe.construct import (STATUS_COLLAPSE, integrate_profile, level_points,  # noqa: E402
                                   profile_to_instance, round_trip_report, sample_points,
                                   soliton_residual, theorem12_chain_check)
from quasiyamabe.curvature import curvature_pack  # noqa: E402
from quasiyamabe.fields import (evaluate_metric_jet, evaluate_scalar_jet, expression_scalar,  # noqa: E402
                                random_poly_metric, random_scalar)
from quasiyamabe.levelset import prop24_checks, prop25_checks  # noqa: E402
from quasiyamabe.quadrature import convergence_ladder, lemma31_quadrature_check  # noqa: E402
from quasiyamabe.soliton import (INFINITY, SolitonInstance, SolitonParams, d_tensor_array,  # noqa: E402
                                 d_traces, lemma21_residuals, prop22_residual,
                                 prop23_norm_check, soliton_report, theorem12_coefficient)

LINES: list[str] = []

GRID_N = (3, 4, 5)
GRID_M = (1.0, 2.0, -1.0, INFINITY)
GRID_RHO = (-1.0, 0.0, 1.0)
GRID_Q = (0.0, 0.5)
GRID_R_MAX = 1.5


def emit(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} | {detail}"
    LINES.append(line)
    print(line)


# -- criteria ------------------------------------------------------------------

def criterion_1():
    worst = 0.0
    for seed in range(5):
        spec = random_poly_metric(3, seed=100 + seed)
        cp = curvature_pack(evaluate_metric_jet(spec, interior_points(spec.box, 50, seed)))
        worst = max(worst, float(np.abs(cp.weyl).max()))
    return worst < 1e-9, f"max|W| = {worst:.2e} over 5 metrics x 50 points (tol 1e-9)"


def criterion_2():
    worst, samples = 0.0, 0
    for n in (3, 4, 5):
        for seed in range(3):
            inst = SolitonInstance(random_poly_metric(n, 10 * n + seed), random_scalar(n, 10 * n + seed),
                                   SolitonParams(2.0, 0.0))
            rep = prop23_norm_check(inst, interior_points(inst.box, 10, seed))
            worst = max(worst, rep.value)
            samples += 10
    return worst < 1e-9, f"relative diff = {worst:.2e} over {samples} samples in n = 3, 4, 5 (tol 1e-9)"


def criterion_3():
    anti, trace = 0.0, 0.0
    for n in (3, 4, 5):
        inst = SolitonInstance(random_poly_metric(n, n), random_scalar(n, n), SolitonParams(-1.0, 0.5))
        p = interior_points(inst.box, 30, n)
        d = d_tensor_array(inst.at(p))
        anti = max(anti, float(np.abs(d + np.swapaxes(d, -3, -2)).max()))
        t1, t2 = d_traces(inst, p)
        trace = max(trace, float(np.abs(t1).max()), float(np.abs(t2).max()))
    ok = anti == 0.0 and trace < 1e-11
    return ok, f"antisymmetry = {anti:.1e} (exact), traces = {trace:.2e} (tol 1e-11)"


def criterion_4():
    inst = catalog.build("HALF_STEADY")
    p = interior_points(inst.box, 20, 4)
    st = inst.at(p)
    reps = [soliton_report(inst, st), *lemma21_residuals(inst, st), prop22_residual(inst, st)]
    worst = max(r.value for r in reps)
    return worst < 1e-11, f"max of {len(reps)} residuals = {worst:.2e} at 20 points (tol 1e-11)"


@lru_cache(maxsize=None)
def grid_profile(n, m, rho, q):
    return integrate_profile(n, m, rho, q, GRID_R_MAX)


def _level_radii(pr, count=3):
    hi = pr.r_hi - (0.1 if pr.status == STATUS_COLLAPSE else 0.0)
    return np.linspace(0.15, hi - 0.05, count)


def criterion_5():
    rt = lv = weyl = 0.0
    statuses, regular_levels, no_levels = {}, 0, 0
    for n, m, rho, q in itertools.product(GRID_N, GRID_M, GRID_RHO, GRID_Q):
        pr = grid_profile(n, m, rho, q)
        statuses[pr.status] = statuses.get(pr.status, 0) + 1
        rt = max(rt, round_trip_report(pr, 20, seed=0).value)
        if q == 0.0:
            # f' vanishes identically; every point is critical, no level geometry
            no_levels += 1
            continue
        inst = profile_to_instance(pr)
        for k, r in enumerate(_level_radii(pr)):
            pts = level_points(pr, float(r), 8, seed=k)
            for rep in prop24_checks(inst, pts) + prop25_checks(inst, pts):
                if rep.name == "weyl_restricted":
                    weyl = max(weyl, rep.value)
                else:
                    lv = max(lv, rep.value)
            regular_levels += 1
    ok = rt < 1e-6 and lv < 1e-6 and weyl < 1e-6
    status = ", ".join(f"{k}: {v}" for k, v in sorted(statuses.items()))
    return ok, (f"72 profiles ({status}); round trip = {rt:.2e}, level spreads = {lv:.2e} "
                f"over {regular_levels} levels, n=4 restricted Weyl = {weyl:.2e} (tol 1e-6); "
                f"{no_levels} q=0 profiles have constant f")


def criterion_6():
    pr = integrate_profile(3, 1.0, 6.0, 0.0, 3.5, 1e-3)
    s = pr.grid <= 3.0
    phi_err = float(np.abs(pr.phi[s] - np.sin(pr.grid[s])).max())
    R_err = float(np.abs(pr.scalarR[s] - 6.0).max())
    inst = profile_to_instance(pr)
    pts = sample_points(pr, 20, seed=6, r_hi=3.0)
    R_engine = float(np.abs(inst.at(pts).cp.scalar - 6.0).max())
    ok = phi_err < 1e-8 and R_err < 1e-8 and pr.status == STATUS_COLLAPSE
    return ok, (f"|phi - sin r| = {phi_err:.2e}, |R - 6| = {R_err:.2e} on r <= 3 (tol 1e-8); "
                f"engine |R - 6| = {R_engine:.2e}; stops at r = {pr.r_hi:.3f} ({pr.status})")


def _sphere_field(text):
    return expression_scalar(text, 3, box=((0.0, math.pi), (0.0, math.pi), (-math.pi, math.pi)))


def criterion_7():
    f, u, v = _sphere_field("cos(x1)"), _sphere_field("sin(x1)*cos(x2)"), _sphere_field("cos(x1)")
    at48 = lemma31_quadrature_check(3, f, u, v, 2.0, 48)
    # the example integrands are odd under reflections, so measure the decay on a generic triple
    fg = _sphere_field("cos(x1) + 0.3*sin(x1)*cos(x2)")
    ug = _sphere_field("exp(0.5*cos(x1)) + sin(x1)*sin(x2)*cos(x3)")
    vg = _sphere_field("cos(x1)*cos(x1) + sin(x1)*cos(x2)")
    ladder = [max(vals) for _, vals in convergence_ladder(3, fg, ug, vg, 2.0, (4, 8, 16))]
    ratios = [ladder[i] / max(ladder[i + 1], 1e-300) for i in range(2)]
    ok = max(at48) < 1e-6 and min(ratios) >= 16.0
    return ok, (f"resolution 48: {at48[0]:.1e}, {at48[1]:.1e}, {at48[2]:.1e} (tol 1e-6); "
                f"generic errors at 4/8/16 = {ladder[0]:.1e}/{ladder[1]:.1e}/{ladder[2]:.1e}, "
                f"doubling ratios >= {min(ratios):.0f} (need 16)")


def criterion_8():
    worst = 0.0
    for n, m, rho, q in itertools.product(GRID_N, GRID_M, GRID_RHO, GRID_Q):
        worst = max(worst, theorem12_chain_check(grid_profile(n, m, rho, q)).value)
    coeffs = {n: theorem12_coefficient(n) for n in (3, 4, 5)}
    exact = coeffs == {3: 1 / 4, 4: 1 / 3, 5: 3 / 8}
    ok = worst < 1e-4 and exact
    return ok, (f"chain residual = {worst:.2e} over 72 profiles (tol 1e-4); "
                f"coefficients {coeffs[3]}, {coeffs[4]:.6f}, {coeffs[5]} (want 1/4, 1/3, 3/8)")


def _rk4_ratios():
    ratios = []
    for case in ((3, 1.0, 1.0, 0.5), (4, INFINITY, 1.0, 0.5), (5, 2.0, -1.0, 0.5)):
        ref = integrate_profile(*case, 1.2, 1.25e-4, strict=False)
        errs = []
        for h in (0.02, 0.01, 0.005):
            pr = integrate_profile(*case, 1.2, h, strict=False)
            idx = np.arange(1, len(pr.grid) + 1) * int(round(h / ref.h)) - 1
            errs.append(max(np.abs(pr.phi - ref.phi[idx]).max(), np.abs(pr.df - ref.df[idx]).max()))
        ratios += [errs[0] / errs[1], errs[1] / errs[2]]
    # round-trip residual with the Hermite knots held fixed
    rs = np.linspace(0.45, 1.2, 201)
    pts = np.tile([0.0, 1.2, 1.2, 0.4], (len(rs), 1))
    pts[:, 0] = rs
    res = []
    for h in (0.02, 0.01, 0.005):
        pr = integrate_profile(4, INFINITY, 1.0, 0.5, 1.6, h, strict=False)
        inst = profile_to_instance(pr, knot_stride=int(round(0.04 / h)))
        res.append(float(np.abs(soliton_residual(inst, pts)).max()))
    ratios += [res[0] / res[1], res[1] / res[2]]
    return ratios


def _ad_vs_fd():
    worst = 0.0
    spec = random_poly_metric(3, seed=9)
    pts = interior_points(spec.box, 100, 9)
    mj = evaluate_metric_jet(spec, pts)
    fd = J.fd_jet(lambda p: evaluate_metric_jet(spec, p).g, pts)
    for a, b in zip((mj.dg, mj.d2g, mj.d3g), fd[1:]):
        worst = max(worst, float(np.abs(a - b).max() / max(1.0, np.abs(b).max())))
    f = random_scalar(3, seed=9)
    sj = evaluate_scalar_jet(f, pts)
    fd = J.fd_jet(lambda p: evaluate_scalar_jet(f, p).value, pts)
    for a, b in zip((sj.grad, sj.hess, sj.third), fd[1:]):
        worst = max(worst, float(np.abs(a - b).max() / max(1.0, np.abs(b).max())))
    return worst


def criterion_9():
    ratios = _rk4_ratios()
    ad = _ad_vs_fd()
    ok = min(ratios) >= 8.0 and ad < 1e-5
    return ok, (f"RK4 halving ratios {', '.join(f'{r:.1f}' for r in ratios)} (need >= 8); "
                f"AD vs FD = {ad:.2e} at 100 points (tol 1e-5)")


CRITERIA = [
    (1, "Weyl tensor vanishes in dimension 3", criterion_1),
    (2, "|D|^2 direct vs adapted-frame formula", criterion_2),
    (3, "D-tensor antisymmetry and traces", criterion_3),
    (4, "HALF_STEADY closed-form soliton", criterion_4),
    (5, "constructed warped solitons round-trip", criterion_5),
    (6, "sphere recovery from the profile ODE", criterion_6),
    (7, "weighted-Laplacian quadrature identities", criterion_7),
    (8, "L(R - rho) chain along profiles", criterion_8),
    (9, "convergence orders", criterion_9),
]


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    emit(number, title, passed, f"{detail} [{time.perf_counter() - t0:.1f}s]")
    assert passed, detail


if __name__ == "__main__":
    failures = 0
    for number, title, fn in CRITERIA:
        t0 = time.perf_counter()
        passed, detail = fn()
        emit(number, title, passed, f"{detail} [{time.perf_counter() - t0:.1f}s]")
        failures += not passed
    sys.exit(1 if failures else 0)
