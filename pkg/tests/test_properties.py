"""Randomized properties over generated metrics, potentials and profiles."""

import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from quasiyamabe import jets as J
from quasiyamabe.construct import integrate_profile, soliton_ode_rhs, warped_scalar_curvature
from quasiyamabe.curvature import curvature_pack
from quasiyamabe.fields import (FieldSpec, evaluate_metric_jet, random_poly_metric, random_scalar,
                                warped_entries)
from quasiyamabe.soliton import (INFINITY, SolitonInstance, SolitonParams, d_traces, d_tensor,
                                 prop23_norm_check)

from conftest import interior_points

FAST = settings(max_examples=15, deadline=None,
                suppress_health_check=[HealthCheck.too_slow])
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
dims = st.sampled_from([3, 4, 5])


@FAST
@given(seed=seeds)
def test_weyl_vanishes_in_dimension_three(seed):
    mj = evaluate_metric_jet(random_poly_metric(3, seed), interior_points(((-1, 1),) * 3, 10, seed % 1000))
    assert np.abs(curvature_pack(mj).weyl).max() < 1e-9


@FAST
@given(seed=seeds, n=dims)
def test_riemann_symmetries(seed, n):
    mj = evaluate_metric_jet(random_poly_metric(n, seed), interior_points(((-1, 1),) * n, 5, 1))
    R = curvature_pack(mj).riemann
    assert np.allclose(R, -np.swapaxes(R, -4, -3), atol=1e-13)
    assert np.allclose(R, np.moveaxis(R, (-4, -3), (-2, -1)), atol=1e-13)
    bianchi = R + np.einsum("...ijkl->...iklj", R) + np.einsum("...ijkl->...iljk", R)
    assert np.abs(bianchi).max() < 1e-12


@FAST
@given(seed=seeds, n=dims, m=st.sampled_from([1.0, 2.0, -1.0, INFINITY]))
def test_d_tensor_structure_and_norm(seed, n, m):
    inst = SolitonInstance(random_poly_metric(n, seed), random_scalar(n, seed),
                           SolitonParams(m, 0.3))
    p = interior_points(inst.box, 6, seed % 997)
    D = d_tensor(inst, p).d
    assert np.array_equal(D, -np.swapaxes(D, -3, -2))
    t1, t2 = d_traces(inst, p)
    assert max(np.abs(t1).max(), np.abs(t2).max()) < 1e-11
    assert prop23_norm_check(inst, p).passed


@FAST
@given(a=st.floats(-0.3, 0.3), b=st.floats(0.0, 0.2), c=st.floats(-0.5, 0.5), n=dims)
def test_warped_scalar_curvature_matches_engine(a, b, c, n):
    def phi_jet(r):
        return r + a * r * r * r + b * J.sin(r) * r * r + 0.1 * J.exp(c * r)

    box = tuple([(0.3, 1.2)] + [(0.3, math.pi - 0.3)] * (n - 2) + [(-math.pi, math.pi)])
    metric = FieldSpec("catalog", "metric", n, box, {}, lambda xs: warped_entries(xs, phi_jet(xs[0])))
    p = interior_points(box, 8, 3)
    rj = phi_jet(J.Jet.variables(p[:, :1])[0])
    phi, dphi, d2phi = rj.val, rj.d1[..., 0], rj.d2[..., 0, 0]
    R = warped_scalar_curvature(n, phi, dphi, d2phi)
    cp = curvature_pack(evaluate_metric_jet(metric, p))
    assert np.abs(cp.scalar - R).max() < 1e-8 * (1 + np.abs(R).max())


@FAST
@given(x=st.floats(0.2, 3.0), p=st.floats(-2.5, 2.5))
def test_jet_identities(x, p):
    u = J.Jet.variables(np.array([[x, 0.5]]))
    v = u[0] * J.exp(u[1])
    back = J.exp(J.log(v))
    for a, b in zip((back.val, back.d1, back.d2, back.d3), (v.val, v.d1, v.d2, v.d3)):
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)
    w = J.power(v, p) * J.power(v, -p)
    assert np.allclose(w.val, 1.0) and np.abs(w.d3).max() < 1e-9 * (1 + x ** 3)
    s = J.sin(u[0]) ** 2 + J.cos(u[0]) ** 2
    assert np.abs(s.d1).max() < 1e-13 and np.abs(s.d3).max() < 1e-12


@settings(max_examples=8, deadline=None)
@given(n=dims, m=st.sampled_from([1.0, 2.0, -1.0, INFINITY]), rho=st.floats(-1.0, 1.0),
       q=st.floats(0.0, 0.5))
def test_profile_nodes_satisfy_reduced_equations(n, m, rho, q):
    pr = integrate_profile(n, m, rho, q, 0.5, 5e-4)
    assert np.all(pr.phi > 0)
    inv_m = 0.0 if math.isinf(m) else 1.0 / m
    hub = pr.dphi / pr.phi
    assert np.allclose(pr.scalarR - rho, hub * pr.df, atol=1e-9)
    assert np.allclose(pr.d2f - inv_m * pr.df ** 2, hub * pr.df, atol=1e-9)
    out = soliton_ode_rhs((pr.phi, pr.dphi, pr.fval, pr.df), n, m, rho)
    assert np.array_equal(out[1], pr.d2phi)
