"""Field specifications, the built-in catalog, and jet evaluation.

A :class:`FieldSpec` describes either a metric or a scalar field on a box in
a single chart.  Catalog entries and closed-form expressions are evaluated on
coordinate jets, which yields exact partials; black-box evaluators receive
plain coordinate arrays and fall back to central finite differences.
"""

from __future__ import annotations

import ast
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import jets as J
from .errors import ConfigError, OutOfDomain, OutOfProfileRange, WrongDimension
from .jets import Jet, MetricJet3, ScalarJet3, check_positive_definite, fd_jet

KINDS = ("catalog", "expression", "profile", "black-box")


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    rank: str  # "metric" or "scalar"
    dim: int
    box: tuple
    params: Mapping = field(default_factory=dict)
    evaluator: Callable | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.rank not in ("metric", "scalar"):
            raise ValueError(f"unknown field rank {self.rank!r}")
        if len(self.box) != self.dim:
            raise ValueError("domain box does not match dimension")

    def describe(self) -> dict:
        """JSON-friendly description (the evaluator itself is not serialized)."""
        return {"kind": self.kind, "rank": self.rank, "dim": self.dim,
                "box": [list(map(float, b)) for b in self.box],
                "params": {k: v for k, v in self.params.items() if _jsonable(v)}}


def _jsonable(v) -> bool:
    return isinstance(v, (int, float, str, bool, list, tuple, type(None)))


def default_box(n: int, lo: float = -1.0, hi: float = 1.0) -> tuple:
    return tuple((lo, hi) for _ in range(n))


def _check_points(spec: FieldSpec, p) -> np.ndarray:
    pts = np.asarray(p, dtype=float)
    if pts.ndim == 0 or pts.shape[-1] != spec.dim:
        raise WrongDimension(f"expected points with {spec.dim} coordinates, got shape {pts.shape}")
    if spec.dim < 3:
        raise WrongDimension("dimension must be at least 3")
    box = np.asarray(spec.box, dtype=float)
    if np.any(pts < box[:, 0]) or np.any(pts > box[:, 1]) or not np.all(np.isfinite(pts)):
        exc = OutOfProfileRange if spec.kind == "profile" else OutOfDomain
        raise exc(f"point outside domain box {spec.box}")
    return pts


def evaluate_metric_jet(spec: FieldSpec, p) -> MetricJet3:
    """Metric components and partials to order 3 at ``p`` (shape (..., n))."""
    if spec.rank != "metric":
        raise ValueError("field is not a metric")
    pts = _check_points(spec, p)
    n, batch = spec.dim, pts.shape[:-1]
    if spec.kind == "black-box":
        val, d1, d2, d3 = fd_jet(spec.evaluator, pts)
        sym = lambda a: 0.5 * (a + np.swapaxes(a, 0 + len(batch), 1 + len(batch)))
        mj = MetricJet3(sym(val), sym(d1), sym(d2), sym(d3))
    else:
        mj = MetricJet3.from_entries(spec.evaluator(Jet.variables(pts)), n, batch)
    check_positive_definite(mj.g)
    return mj


def evaluate_scalar_jet(spec: FieldSpec, p) -> ScalarJet3:
    """Value and coordinate partials to order 3 of a scalar field at ``p``."""
    if spec.rank != "scalar":
        raise ValueError("field is not a scalar")
    pts = _check_points(spec, p)
    n, batch = spec.dim, pts.shape[:-1]
    if spec.kind == "black-box":
        return ScalarJet3(*fd_jet(spec.evaluator, pts))
    return ScalarJet3.from_jet(spec.evaluator(Jet.variables(pts)), n, batch)


# -- closed-form expression grammar ----------------------------------------

_FUNCS = {"exp": J.exp, "ln": J.log, "sin": J.sin, "cos": J.cos,
          "sinh": J.sinh, "cosh": J.cosh, "pow": J.power}
_CONSTS = {"pi": math.pi, "e": math.e}


def compile_expression(text: str, dim: int, constants: Mapping[str, float] | None = None):
    """Compile ``text`` into a callable on coordinate jets.

    Grammar: numbers, coordinates ``x1..xn``, named constants, the binary
    operators ``+ - * / **``, unary minus, and the functions
    exp, ln, sin, cos, sinh, cosh, pow.
    """
    consts = dict(_CONSTS)
    consts.update(constants or {})
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc.msg}") from exc

    binops = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
              ast.Mult: lambda a, b: a * b, ast.Div: lambda a, b: a / b,
              ast.Pow: lambda a, b: J.power(a, b)}

    def build(node):
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            v = float(node.value)
            return lambda xs: v
        if isinstance(node, ast.Name):
            name = node.id
            if name.startswith("x") and name[1:].isdigit():
                k = int(name[1:])
                if not 1 <= k <= dim:
                    raise ConfigError(f"coordinate {name} out of range for dimension {dim}")
                return lambda xs: xs[k - 1]
            if name in consts:
                v = float(consts[name])
                return lambda xs: v
            raise ConfigError(f"unknown name {name!r} in expression")
        if isinstance(node, ast.BinOp) and type(node.op) in binops:
            op, lhs, rhs = binops[type(node.op)], build(node.left), build(node.right)
            return lambda xs: op(lhs(xs), rhs(xs))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            arg = build(node.operand)
            if isinstance(node.op, ast.USub):
                return lambda xs: -arg(xs)
            return arg
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and not node.keywords):
            fn = _FUNCS[node.func.id]
            args = [build(a) for a in node.args]
            if len(args) != (2 if node.func.id == "pow" else 1):
                raise ConfigError(f"wrong number of arguments to {node.func.id}")
            return lambda xs: fn(*(a(xs) for a in args))
        raise ConfigError(f"unsupported construct in expression {text!r}")

    return build(tree)


def expression_scalar(text: str, dim: int, box=None, constants=None) -> FieldSpec:
    fn = compile_expression(text, dim, constants)
    return FieldSpec("expression", "scalar", dim, box or default_box(dim),
                     {"expr": text, "constants": dict(constants or {})}, fn)


def expression_metric(dim: int, *, matrix=None, diag=None, conformal=None,
                      box=None, constants=None) -> FieldSpec:
    """Metric from expressions: a full ``matrix``, a ``diag`` list, or a ``conformal`` factor times the identity."""
    given = [x is not None for x in (matrix, diag, conformal)]
    if sum(given) != 1:
        raise ConfigError("give exactly one of matrix, diag, conformal")
    if matrix is not None:
        if len(matrix) != dim or any(len(row) != dim for row in matrix):
            raise ConfigError("metric matrix has the wrong shape")
        comp = [[compile_expression(str(matrix[i][j]), dim, constants) for j in range(dim)]
                for i in range(dim)]

        def fn(xs):
            return [[comp[min(i, j)][max(i, j)](xs) for j in range(dim)] for i in range(dim)]
        params = {"matrix": [[str(e) for e in row] for row in matrix]}
    elif diag is not None:
        if len(diag) != dim:
            raise ConfigError("metric diagonal has the wrong length")
        comp = [compile_expression(str(d), dim, constants) for d in diag]

        def fn(xs):
            return [[comp[i](xs) if i == j else 0.0 for j in range(dim)] for i in range(dim)]
        params = {"diag": [str(d) for d in diag]}
    else:
        factor = compile_expression(str(conformal), dim, constants)

        def fn(xs):
            c = factor(xs)
            return [[c if i == j else 0.0 for j in range(dim)] for i in range(dim)]
        params = {"conformal": str(conformal)}
    params["constants"] = dict(constants or {})
    return FieldSpec("expression", "metric", dim, box or default_box(dim), params, fn)


def black_box_metric(fn: Callable, dim: int, box=None, **params) -> FieldSpec:
    """Metric known only through ``fn(points) -> (..., n, n)``; partials by finite differences."""
    return FieldSpec("black-box", "metric", dim, box or default_box(dim), params, fn)


def black_box_scalar(fn: Callable, dim: int, box=None, **params) -> FieldSpec:
    return FieldSpec("black-box", "scalar", dim, box or default_box(dim), params, fn)


# -- catalog ---------------------------------------------------------------

def _diag(n, entries):
    return [[entries[i] if i == j else 0.0 for j in range(n)] for i in range(n)]


def _conformal(n, c):
    return _diag(n, [c] * n)


def flat(n: int = 3, box=None) -> FieldSpec:
    return FieldSpec("catalog", "metric", n, box or default_box(n), {"name": f"FLAT{n}"},
                     lambda xs: _conformal(n, 1.0))


def polar_flat3() -> FieldSpec:
    """Euclidean R^3 in spherical coordinates (r, theta, psi)."""
    box = ((0.1, 3.0), (0.1, math.pi - 0.1), (-math.pi, math.pi))

    def fn(xs):
        r, th, _ = xs
        r2 = r * r
        return _diag(3, [1.0, r2, r2 * J.sin(th) ** 2])
    return FieldSpec("catalog", "metric", 3, box, {"name": "POLAR3"}, fn)


def conformal_exp3() -> FieldSpec:
    """g = exp(2 x1) * identity on R^3."""
    return FieldSpec("catalog", "metric", 3, default_box(3), {"name": "CONF3"},
                     lambda xs: _conformal(3, J.exp(2.0 * xs[0])))


def conformal4(amplitude: float = 0.3) -> FieldSpec:
    """g = exp(2u) * identity on R^4 with u = a sin(x1) cos(x2)."""
    def fn(xs):
        u = amplitude * J.sin(xs[0]) * J.cos(xs[1])
        return _conformal(4, J.exp(2.0 * u))
    return FieldSpec("catalog", "metric", 4, default_box(4), {"name": "CONF4", "amplitude": amplitude}, fn)


def sphere(n: int = 3, radius: float = 1.0) -> FieldSpec:
    """Round sphere of the given radius in stereographic coordinates."""
    a2 = radius * radius

    def fn(xs):
        s = a2 + sum(x * x for x in xs)
        return _conformal(n, 4.0 * a2 * a2 / (s * s))
    return FieldSpec("catalog", "metric", n, default_box(n),
                     {"name": f"SPHERE{n}", "radius": radius}, fn)


def hyperbolic3() -> FieldSpec:
    """Upper half-space model, g = x3^-2 * identity."""
    box = ((-1.0, 1.0), (-1.0, 1.0), (0.5, 2.0))
    return FieldSpec("catalog", "metric", 3, box, {"name": "HYP3"},
                     lambda xs: _conformal(3, 1.0 / (xs[2] * xs[2])))


def product4() -> FieldSpec:
    """Unit S^2 (stereographic) times flat R^2; not conformally flat."""
    def fn(xs):
        s = 1.0 + xs[0] * xs[0] + xs[1] * xs[1]
        c = 4.0 / (s * s)
        return _diag(4, [c, c, 1.0, 1.0])
    return FieldSpec("catalog", "metric", 4, default_box(4), {"name": "PRODUCT4"}, fn)


def hyperspherical(n: int = 3, radius: float = 1.0) -> FieldSpec:
    """Round S^n in nested angles (chi_1..chi_{n-1} in (0, pi), psi in [-pi, pi])."""
    a2 = radius * radius
    box = tuple([(0.0, math.pi)] * (n - 1) + [(-math.pi, math.pi)])

    def fn(xs):
        entries = []
        w = a2
        for i in range(n):
            entries.append(w)
            if i < n - 1:
                w = w * J.sin(xs[i]) ** 2
        return _diag(n, entries)
    return FieldSpec("catalog", "metric", n, box, {"name": f"HSPHERE{n}", "radius": radius}, fn)


def warped_entries(xs, phi: Jet):
    """diag(1, phi^2, phi^2 sin^2 t1, phi^2 sin^2 t1 sin^2 t2, ...) in (r, t1, ..., psi)."""
    n = len(xs)
    entries = [1.0]
    w = phi * phi
    for i in range(1, n):
        entries.append(w)
        if i < n - 1:
            w = w * J.sin(xs[i]) ** 2
    return _diag(n, entries)


def _monomials(n: int):
    out = [()]
    for d in (1, 2, 3):
        out.extend(itertools.combinations_with_replacement(range(n), d))
    return out


def _monomial_jets(xs, monos):
    """Stacked (K, ...) jet arrays for the given monomials."""
    n = len(xs)
    batch = xs[0].batch
    cache = {(): Jet.constant(1.0, n, batch)}
    for m in monos:
        if m not in cache:
            cache[m] = cache[m[:-1]] * xs[m[-1]]
    js = [cache[m] for m in monos]
    return [np.stack([getattr(j, a) for j in js]) for a in ("val", "d1", "d2", "d3")]


def _poly_jet(coeffs, stacked):
    return Jet(*(np.tensordot(coeffs, arr, axes=1) for arr in stacked))


def random_poly_metric(n: int, seed: int = 0, eps: float = 0.05) -> FieldSpec:
    """g = identity + eps * A(x), A symmetric with cubic entries, coefficients U[-1, 1]."""
    monos = _monomials(n)
    rng = np.random.default_rng(seed)
    coeffs = {}
    for i in range(n):
        for j in range(i, n):
            coeffs[i, j] = rng.uniform(-1.0, 1.0, len(monos))

    def fn(xs):
        stacked = _monomial_jets(xs, monos)
        out = [[None] * n for _ in range(n)]
        for (i, j), c in coeffs.items():
            e = _poly_jet(eps * c, stacked) + (1.0 if i == j else 0.0)
            out[i][j] = out[j][i] = e
        return out
    return FieldSpec("catalog", "metric", n, default_box(n),
                     {"name": f"RANDOMPOLY{n}", "seed": seed, "eps": eps}, fn)


def random_scalar(n: int, seed: int = 0) -> FieldSpec:
    """Cubic polynomial plus sin and exp of random linear forms; generic f with nonzero third partials."""
    monos = _monomials(n)
    rng = np.random.default_rng(seed + 7919)
    c = rng.uniform(-1.0, 1.0, len(monos))
    a = rng.uniform(-1.0, 1.0, n)
    b = rng.uniform(-0.5, 0.5, n)

    def fn(xs):
        lin_a = sum(float(a[i]) * xs[i] for i in range(n))
        lin_b = sum(float(b[i]) * xs[i] for i in range(n))
        return _poly_jet(c, _monomial_jets(xs, monos)) + 0.5 * J.sin(lin_a) + 0.3 * J.exp(lin_b)
    return FieldSpec("catalog", "scalar", n, default_box(n),
                     {"name": f"RANDOMSCALAR{n}", "seed": seed}, fn)


def constant_scalar(n: int, c: float = 0.0, box=None) -> FieldSpec:
    return FieldSpec("catalog", "scalar", n, box or default_box(n), {"name": "CONST", "value": c},
                     lambda xs: c)


def coordinate_scalar(n: int, k: int = 1, box=None) -> FieldSpec:
    """The chart function x_k."""
    return FieldSpec("catalog", "scalar", n, box or default_box(n), {"name": f"x{k}"},
                     lambda xs: xs[k - 1])


def log_potential(m: float, n: int = 3, delta: float = 0.05) -> FieldSpec:
    """f = -m ln(1 + x1) on the half-box x1 > -1 + delta."""
    box = ((-1.0 + delta, 1.0),) + default_box(n - 1)
    return FieldSpec("catalog", "scalar", n, box, {"name": "LOGPOT", "m": m},
                     lambda xs: -m * J.log(1.0 + xs[0]))


METRIC_CATALOG = {
    "FLAT3": lambda: flat(3),
    "FLAT4": lambda: flat(4),
    "FLAT5": lambda: flat(5),
    "POLAR3": polar_flat3,
    "CONF3": conformal_exp3,
    "CONF4": conformal4,
    "SPHERE3": lambda: sphere(3),
    "SPHERE4": lambda: sphere(4),
    "HYP3": hyperbolic3,
    "PRODUCT4": product4,
    "RANDOMPOLY3": lambda: random_poly_metric(3),
    "RANDOMPOLY4": lambda: random_poly_metric(4),
    "RANDOMPOLY5": lambda: random_poly_metric(5),
}
