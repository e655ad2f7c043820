"""Product Gauss-Legendre quadrature on round spheres and the weighted-operator integrals.

S^n is charted by nested angles ``chi_1..chi_{n-1}`` in [0, pi] and ``psi``
in [-pi, pi].  Each angle gets its own Gauss-Legendre rule; the volume
density is sqrt(det g) of the chart metric, which for the unit sphere is
``sin^{n-1} chi_1 sin^{n-2} chi_2 ... sin chi_{n-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import FieldSpec, evaluate_metric_jet, evaluate_scalar_jet, hyperspherical
from .curvature import covariant_hessian, curvature_pack

CHUNK = 8192


@dataclass(frozen=True)
class QuadratureGrid:
    nodes: list          # per-angle Gauss-Legendre nodes
    weights: list        # matching weights
    n: int
    radius: float = 1.0

    @classmethod
    def sphere(cls, n: int = 3, resolution: int = 48, radius: float = 1.0) -> "QuadratureGrid":
        x, w = np.polynomial.legendre.leggauss(resolution)
        nodes, weights = [], []
        for i in range(n):
            lo, hi = (0.0, math.pi) if i < n - 1 else (-math.pi, math.pi)
            nodes.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
            weights.append(0.5 * (hi - lo) * w)
        return cls(nodes, weights, n, radius)

    @property
    def size(self) -> int:
        return int(np.prod([len(x) for x in self.nodes]))

    def chunks(self, size: int = CHUNK):
        """Yield (points, product weights) in blocks of at most ``size`` nodes."""
        grids = np.meshgrid(*self.nodes, indexing="ij")
        wgrids = np.meshgrid(*self.weights, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        wts = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
        for s in range(0, len(pts), size):
            yield pts[s:s + size], wts[s:s + size]

    def jacobian(self, pts: np.ndarray) -> np.ndarray:
        """Closed-form volume density of the round chart."""
        jac = np.full(pts.shape[:-1], self.radius ** self.n)
        for i in range(self.n - 1):
            jac = jac * np.sin(pts[..., i]) ** (self.n - 1 - i)
        return jac

    def volume(self) -> float:
        return float(sum(np.sum(w * self.jacobian(p)) for p, w in self.chunks()))


def sphere_volume(n: int, radius: float = 1.0) -> float:
    return 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2) * radius ** n


def weighted_integrals(n: int, f: FieldSpec, u: FieldSpec, v: FieldSpec, m: float,
                       resolution: int = 48, radius: float = 1.0) -> dict:
    """Integrals of v L(u), u L(v), <grad u, grad v>, L(u) against e^{-f/m} dV."""
    grid = QuadratureGrid.sphere(n, resolution, radius)
    metric = hyperspherical(n, radius)
    inv_m = 0.0 if math.isinf(m) else 1.0 / m
    totals = dict.fromkeys(("vLu", "uLv", "grad", "Lu", "mass"), 0.0)
    for pts, w in grid.chunks():
        cp = curvature_pack(evaluate_metric_jet(metric, pts))
        sf = evaluate_scalar_jet(f, pts)
        su = evaluate_scalar_jet(u, pts)
        sv = evaluate_scalar_jet(v, pts)
        G = cp.ginv
        df_up = np.einsum("...ij,...j->...i", G, sf.grad)

        def L(sj):
            lap = np.einsum("...ij,...ij->...", G, covariant_hessian(sj, cp))
            return lap - inv_m * np.einsum("...i,...i->...", df_up, sj.grad)

        dmu = w * np.sqrt(np.linalg.det(cp.g)) * np.exp(-inv_m * sf.value)
        Lu, Lv = L(su), L(sv)
        totals["vLu"] += np.sum(dmu * sv.value * Lu)
        totals["uLv"] += np.sum(dmu * su.value * Lv)
        totals["grad"] += np.sum(dmu * np.einsum("...ij,...i,...j->...", G, su.grad, sv.grad))
        totals["Lu"] += np.sum(dmu * Lu)
        totals["mass"] += np.sum(dmu)
    return {k: float(x) for k, x in totals.items()}


def lemma31_quadrature_check(n: int, f: FieldSpec, u: FieldSpec, v: FieldSpec, m: float,
                             resolution: int = 48) -> tuple[float, float, float]:
    """(|int vLu - int uLv|, |int vLu + int <du, dv>|, |int Lu|) on the unit S^n."""
    t = weighted_integrals(n, f, u, v, m, resolution)
    return abs(t["vLu"] - t["uLv"]), abs(t["vLu"] + t["grad"]), abs(t["Lu"])


def convergence_ladder(n: int, f: FieldSpec, u: FieldSpec, v: FieldSpec, m: float,
                       resolutions=(4, 8, 16)) -> list[tuple[int, tuple[float, float, float]]]:
    return [(r, lemma31_quadrature_check(n, f, u, v, m, r)) for r in resolutions]
