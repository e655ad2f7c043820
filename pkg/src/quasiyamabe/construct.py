"""Rotationally symmetric solitons from the warped-product reduction.

On ``dr^2 + phi(r)^2 g_{S^{n-1}}`` with ``f = f(r)`` the soliton equation
splits into a radial and a spherical component.  Together with the warped
scalar curvature

    R = -2 (n-1) phi''/phi + (n-1)(n-2) (1 - phi'^2) / phi^2

they close into the first-order system integrated here:

    f''   = (phi'/phi) f' + f'^2 / m
    phi'' = [(n-1)(n-2)(1 - phi'^2)/phi^2 - rho - (phi'/phi) f'] phi / (2(n-1))

Profiles start at a smooth pole with ``phi ~ r`` and ``f' ~ q r``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import BPoly

from . import jets as J
from .errors import PhiNonPositive, ProfileTooShort, WrongDimension
from .fields import FieldSpec, warped_entries
from .soliton import (INFINITY, ResidualReport, SolitonInstance, SolitonParams,
                      report, soliton_residual, theorem12_coefficient)

EPS_START = 1e-6
BLOWUP_LIMIT = 1e8
ANGLE_MARGIN = 1e-3
START_GROWTH = 1.25  # geometric step ratio leaving EPS_START
GRADE_RADIUS = 0.1   # below this radius RK4 sub-steps are graded toward the pole
# The interpolant's second derivative inherits the RK4 global error through
# slope/value mismatch at the knots; 5e-4 keeps it near 1e-9 on the catalog.
DEFAULT_STEP = 5e-4

STATUS_OK = "ok"
STATUS_COLLAPSE = "phi_collapse"
STATUS_BLOWUP = "blowup"


def soliton_ode_rhs(state, n: int, m: float, rho: float):
    """Right side of the profile system for state (phi, phi', f, f')."""
    phi, dphi, _, df = (np.asarray(s, dtype=float) for s in state)
    if np.any(phi <= 0):
        raise PhiNonPositive("warping function is not positive")
    inv_m = 0.0 if math.isinf(m) else 1.0 / m
    hub = dphi / phi
    d2f = hub * df + inv_m * df * df
    d2phi = ((n - 1) * (n - 2) * (1.0 - dphi * dphi) / (phi * phi) - rho - hub * df) * phi / (2.0 * (n - 1))
    return dphi, d2phi, df, d2f


def warped_scalar_curvature(n: int, phi, dphi, d2phi):
    return -2.0 * (n - 1) * d2phi / phi + (n - 1) * (n - 2) * (1.0 - dphi * dphi) / (phi * phi)


@dataclass(frozen=True)
class Profile:
    grid: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    d2phi: np.ndarray
    fval: np.ndarray
    df: np.ndarray
    d2f: np.ndarray
    scalarR: np.ndarray
    n: int
    m: float
    rho: float
    q: float
    r_max: float
    h: float
    status: str = STATUS_OK
    interpolants: dict = field(default=None, compare=False, repr=False)

    @property
    def params(self) -> SolitonParams:
        return SolitonParams(self.m, self.rho)

    @property
    def r_lo(self) -> float:
        return max(10.0 * self.h, float(self.grid[0]))

    @property
    def r_hi(self) -> float:
        return float(self.grid[-1])

    def min_sectional_curvature(self) -> float:
        """Smallest sectional curvature of the warped metric along the profile.

        Radial planes have -phi''/phi, spherical planes (1 - phi'^2)/phi^2.
        """
        radial = -self.d2phi / self.phi
        spherical = (1.0 - self.dphi ** 2) / self.phi ** 2
        return float(min(radial.min(), spherical.min()))


def _rk4_step(y, r, dr, rhs):
    k1 = np.array(rhs(y, r))
    k2 = np.array(rhs(y + 0.5 * dr * k1, r + 0.5 * dr))
    k3 = np.array(rhs(y + 0.5 * dr * k2, r + 0.5 * dr))
    k4 = np.array(rhs(y + dr * k3, r + dr))
    return y + dr * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _graded_step(r: float, h: float) -> float:
    """Largest RK4 sub-step allowed at radius r.

    The right-hand side carries 1/phi ~ 1/r factors, so a step of size h at
    r ~ h has local error ~ h^5 / r^3 and uniform steps from the pole lose two
    orders.  Steps of at most h (r / GRADE_RADIUS)^(3/4), and never more
    than a fixed fraction of r, keep the accumulated error O(h^4).
    """
    if r >= GRADE_RADIUS:
        return h
    return min((START_GROWTH - 1.0) * r, h * (r / GRADE_RADIUS) ** 0.75)


def _advance(y, r: float, r_next: float, h: float, rhs):
    """RK4 from r to exactly r_next with graded sub-steps."""
    while r < r_next:
        dr = min(_graded_step(r, h), r_next - r)
        if r_next - (r + dr) < 1e-3 * dr:
            dr = r_next - r
        y = _rk4_step(y, r, dr, rhs)
        r += dr
    return y


def default_step(r_max: float) -> float:
    """DEFAULT_STEP, capped by the h <= 1e-3 r_max precondition."""
    return min(DEFAULT_STEP, 1e-3 * r_max)


def integrate_profile(n: int, m: float, rho: float, q: float, r_max: float,
                      h: float | None = None, strict: bool = True) -> Profile:
    """Classical RK4 from the pole, storing the state and its RHS at r_k = k h.

    The system is singular at r = 0, so near the pole each node interval is
    covered by graded sub-steps (see ``_graded_step``); from ``EPS_START`` the
    sub-steps first grow geometrically.
    Integration stops with a status when phi reaches zero or the state
    exceeds ``BLOWUP_LIMIT``; the profile is then truncated.
    """
    if n < 3:
        raise WrongDimension("n >= 3 required")
    if h is None:
        h = default_step(r_max)
    SolitonParams(m, rho)
    if strict and h > 1e-3 * r_max * (1 + 1e-12):
        raise ValueError("step must satisfy h <= 1e-3 * r_max")

    def rhs(y, r):
        dphi, d2phi, df, d2f = soliton_ode_rhs(y, n, m, rho)
        return dphi, d2phi, df, d2f

    y = np.array([EPS_START, 1.0, 0.0, q * EPS_START])
    y = _advance(y, EPS_START, h, h, rhs)

    count = int(math.floor(r_max / h + 1e-9))
    states, derivs = [], []
    status = STATUS_OK
    for k in range(1, count + 1):
        if k > 1:
            try:
                with np.errstate(over="ignore", invalid="ignore"):
                    y = _advance(y, (k - 1) * h, k * h, h, rhs)
            except PhiNonPositive:
                status = STATUS_COLLAPSE
                break
        if y[0] <= 0:
            status = STATUS_COLLAPSE
            break
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > BLOWUP_LIMIT:
            status = STATUS_BLOWUP
            break
        d = rhs(y, k * h)
        if not np.all(np.isfinite(d)) or np.max(np.abs(d)) > BLOWUP_LIMIT:
            status = STATUS_BLOWUP
            break
        states.append(y.copy())
        derivs.append(d)
    if not states:
        raise ProfileTooShort("integration stopped before the first node")
    s = np.array(states)
    d = np.array(derivs)
    grid = h * np.arange(1, len(s) + 1)
    R = warped_scalar_curvature(n, s[:, 0], s[:, 1], d[:, 1])
    return Profile(grid, s[:, 0], s[:, 1], d[:, 1], s[:, 2], s[:, 3], d[:, 3], R,
                   n, m, rho, q, r_max, h, status)


# -- profile interpolation and chart instances --------------------------------

class _Hermite:
    """Quintic Hermite interpolant through (value, first, second) derivatives."""

    def __init__(self, grid, y, dy, d2y):
        self.poly = BPoly.from_derivatives(grid, np.column_stack([y, dy, d2y]))
        self.derivs = [self.poly, self.poly.derivative(1), self.poly.derivative(2),
                       self.poly.derivative(3)]

    def __call__(self, r, nu: int = 0):
        return self.derivs[nu](r)

    def jet(self, r: J.Jet) -> J.Jet:
        v = np.asarray(r.val)
        return r.compose(*(d(v) for d in self.derivs))


KNOT_SPACING = 1e-2
SAMPLE_R_MIN = 0.1
# Curvature components along a deep nested angle are sums of terms of size
# cot^2 that cancel down to the size of the (tiny) metric entry, so rounding
# is amplified like 1/(sin^2 * g_min).  Sampled angles stay inside this band.
SAMPLE_ANGLE_MARGIN = 0.3


def default_knot_stride(h: float) -> int:
    """Every k-th node becomes a Hermite knot so that knots sit about 0.01 apart.

    The third derivative of a quintic Hermite piece amplifies rounding in the
    node values like 1/spacing^3, so using every node of a fine grid costs more
    than it gains.
    """
    return max(1, int(round(KNOT_SPACING / h)))


def interpolants(pr: Profile, knot_stride: int | None = None) -> dict:
    stride = default_knot_stride(pr.h) if knot_stride is None else int(knot_stride)
    if pr.interpolants is None:
        object.__setattr__(pr, "interpolants", {})
    cache = pr.interpolants
    if stride not in cache:
        # keep the last node as a knot so the full range stays covered
        idx = np.arange(len(pr.grid) - 1, -1, -stride)[::-1]
        if len(idx) < 2:
            raise ProfileTooShort("profile has fewer than two Hermite knots")
        cache[stride] = {
            "phi": _Hermite(pr.grid[idx], pr.phi[idx], pr.dphi[idx], pr.d2phi[idx]),
            "f": _Hermite(pr.grid[idx], pr.fval[idx], pr.df[idx], pr.d2f[idx]),
            "lo": float(pr.grid[idx[0]]),
        }
    return cache[stride]


def profile_box(pr: Profile, r_lo: float | None = None, r_hi: float | None = None,
                angle_margin: float = ANGLE_MARGIN) -> tuple:
    lo = pr.r_lo if r_lo is None else max(r_lo, pr.r_lo)
    hi = pr.r_hi if r_hi is None else min(r_hi, pr.r_hi)
    angles = [(angle_margin, math.pi - angle_margin)] * (pr.n - 2) + [(-math.pi, math.pi)]
    return tuple([(lo, hi)] + angles)


def profile_to_instance(pr: Profile, name: str = "", knot_stride: int | None = None) -> SolitonInstance:
    """Polar-chart instance: metric diag(1, phi^2, phi^2 sin^2 t1, ...) and f(r)."""
    interp = interpolants(pr, knot_stride)
    box = profile_box(pr, r_lo=interp["lo"])
    params = {"n": pr.n, "m": "INFINITY" if math.isinf(pr.m) else pr.m, "rho": pr.rho,
              "q": pr.q, "h": pr.h}
    metric = FieldSpec("profile", "metric", pr.n, box, params,
                       lambda xs: warped_entries(xs, interp["phi"].jet(xs[0])))
    potential = FieldSpec("profile", "scalar", pr.n, box, params,
                          lambda xs: interp["f"].jet(xs[0]))
    return SolitonInstance(metric, potential, pr.params,
                           name or f"WARP{pr.n}(m={params['m']}, rho={pr.rho}, q={pr.q})")


def sample_points(pr: Profile, count: int, seed: int = 0, r_lo: float | None = None,
                  r_hi: float | None = None) -> np.ndarray:
    """Random chart points away from the pole (r >= SAMPLE_R_MIN) and the angular singularities."""
    rng = np.random.default_rng(seed)
    box = np.asarray(profile_box(pr, SAMPLE_R_MIN if r_lo is None else r_lo, r_hi,
                                 SAMPLE_ANGLE_MARGIN))
    if box[0, 0] >= box[0, 1]:
        raise ProfileTooShort("profile does not reach the sampling range")
    return rng.uniform(box[:, 0], box[:, 1], size=(count, pr.n))


def level_points(pr: Profile, r: float, count: int = 8, seed: int = 0) -> np.ndarray:
    """Points on the level set {f = f(r)} obtained by varying the angles only."""
    rng = np.random.default_rng(seed)
    box = np.asarray(profile_box(pr, angle_margin=SAMPLE_ANGLE_MARGIN))
    pts = rng.uniform(box[:, 0], box[:, 1], size=(count, pr.n))
    pts[:, 0] = r
    return pts


def round_trip_report(pr: Profile, count: int = 20, seed: int = 0, tol: float = 1e-6,
                      r_lo: float | None = None, knot_stride: int | None = None,
                      r_hi: float | None = None) -> ResidualReport:
    """Soliton residual of the interpolated instance at random interior points.

    A collapsed profile closes up at a second pole, so by default its last
    SAMPLE_R_MIN of radius is kept out of the sample like the first pole.
    """
    inst = profile_to_instance(pr, knot_stride=knot_stride)
    if r_hi is None and pr.status == STATUS_COLLAPSE:
        r_hi = pr.r_hi - SAMPLE_R_MIN
    pts = sample_points(pr, count, seed, r_lo=r_lo, r_hi=r_hi)
    st = inst.at(pts)
    return report("round_trip_soliton_equation", soliton_residual(inst, st), pts, tol, 2)


def node_residuals(pr: Profile, angles=None) -> np.ndarray:
    """Engine soliton residual (max-abs) at every node inside the instance range, NaN below it."""
    inst = profile_to_instance(pr)
    out = np.full(pr.grid.shape, np.nan)
    sel = pr.grid >= inst.metric.box[0][0]
    if not np.any(sel):
        return out
    if angles is None:
        angles = [math.pi / 2 - 0.3] * (pr.n - 2) + [0.4]
    pts = np.tile(np.asarray([0.0] + list(angles)), (int(sel.sum()), 1))
    pts[:, 0] = pr.grid[sel]
    res = soliton_residual(inst, pts)
    out[sel] = np.abs(res).max(axis=(-1, -2))
    return out


# -- compact-case chain along the profile --------------------------------------

def theorem12_chain_check(pr: Profile, tol: float = 1e-4) -> ResidualReport:
    """Pointwise residual of the L(R - rho) identity using radial finite differences.

    L(R_rho) = R_rho'' + (n-1)(phi'/phi) R_rho' - (1/m) R_rho' f' is compared
    with [1/m - 1/(2(n-1))] R_rho' f' + (n/m) R_rho^2 - R_rho R/(n-1).
    """
    n, h = pr.n, pr.h
    inv_m = 0.0 if math.isinf(pr.m) else 1.0 / pr.m
    R = pr.scalarR
    sel = np.nonzero(pr.grid >= pr.r_lo)[0]
    sel = sel[(sel >= 1) & (sel <= len(R) - 2)]
    if len(sel) < 10:
        raise ProfileTooShort("fewer than 10 interior nodes")
    R_rho = R - pr.rho
    d1 = (R[sel + 1] - R[sel - 1]) / (2.0 * h)
    d2 = (R[sel + 1] - 2.0 * R[sel] + R[sel - 1]) / (h * h)
    hub = pr.dphi[sel] / pr.phi[sel]
    df = pr.df[sel]
    Rr = R_rho[sel]
    lhs = d2 + (n - 1) * hub * d1 - inv_m * d1 * df
    rhs = (inv_m - 1.0 / (2.0 * (n - 1))) * d1 * df + n * inv_m * Rr ** 2 - Rr * R[sel] / (n - 1)
    res = lhs - rhs
    pts = np.zeros((len(sel), n))
    pts[:, 0] = pr.grid[sel]
    return report("theorem12_chain", res, pts, tol, coefficient=theorem12_coefficient(n))


# -- CSV exchange ----------------------------------------------------------------

CSV_COLUMNS = ("r", "phi", "dphi", "d2phi", "f", "df", "d2f", "R", "residual_max")


def write_profile_csv(pr: Profile, path, residuals: np.ndarray | None = None) -> None:
    """One row per node, 17 significant digits; parameters go in leading '#' lines."""
    if residuals is None:
        residuals = node_residuals(pr)
    m = "INFINITY" if math.isinf(pr.m) else repr(float(pr.m))
    with open(path, "w", newline="") as fh:
        fh.write(f"# n={pr.n} m={m} rho={pr.rho!r} q={pr.q!r} r_max={pr.r_max!r} "
                 f"h={pr.h!r} status={pr.status}\n")
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        cols = (pr.grid, pr.phi, pr.dphi, pr.d2phi, pr.fval, pr.df, pr.d2f, pr.scalarR, residuals)
        for row in zip(*cols):
            w.writerow([f"{float(x):.17g}" for x in row])


def read_profile_csv(path) -> Profile:
    meta = {}
    rows = []
    with open(path, newline="") as fh:
        lines = [ln for ln in fh]
    body = []
    for ln in lines:
        if ln.startswith("#"):
            for tok in ln[1:].split():
                k, _, v = tok.partition("=")
                meta[k] = v
        elif ln.strip():
            body.append(ln)
    reader = csv.DictReader(body)
    for row in reader:
        rows.append([float(row[c]) for c in CSV_COLUMNS])
    a = np.array(rows)
    required = ("n", "m", "rho", "h")
    if any(k not in meta for k in required):
        raise ValueError(f"profile CSV header must define {', '.join(required)}")
    m = INFINITY if meta["m"].upper() in ("INFINITY", "INF") else float(meta["m"])
    return Profile(a[:, 0], a[:, 1], a[:, 2], a[:, 3], a[:, 4], a[:, 5], a[:, 6], a[:, 7],
                   int(meta["n"]), m, float(meta["rho"]), float(meta.get("q", "nan")),
                   float(meta.get("r_max", a[-1, 0])), float(meta["h"]),
                   meta.get("status", STATUS_OK))


def truncate(pr: Profile, r_hi: float) -> Profile:
    """Copy of ``pr`` restricted to nodes with r <= r_hi."""
    k = int(np.searchsorted(pr.grid, r_hi, side="right"))
    cut = {name: getattr(pr, name)[:k] for name in
           ("grid", "phi", "dphi", "d2phi", "fval", "df", "d2f", "scalarR")}
    return replace(pr, interpolants=None, **cut)
