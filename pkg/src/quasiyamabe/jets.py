"""Order-3 forward-mode jets.

A :class:`Jet` carries the value of a scalar quantity together with all of its
partial derivatives of order one to three with respect to ``n`` chart
coordinates.  Arithmetic propagates the derivatives through the Leibniz rule
and elementary functions through the order-3 chain rule, so a closed-form
field evaluated on coordinate jets yields its exact partials up to rounding.
All arrays carry an arbitrary leading batch shape, which lets one call
evaluate a field at many points at once.

Layout conventions (batch axes ``...`` first):

* ``Jet.d1[..., i]``          = d_i u
* ``Jet.d2[..., i, j]``       = d_i d_j u
* ``Jet.d3[..., i, j, k]``    = d_i d_j d_k u
* ``MetricJet3.dg[..., i, j, k]`` = d_k g_ij, and likewise for ``d2g``/``d3g``
  with the derivative indices trailing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NotPositiveDefinite


def _sym3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Return ``a_i b_jk + a_j b_ik + a_k b_ij``."""
    t = a[..., :, None, None] * b[..., None, :, :]
    return t + t.swapaxes(-3, -2) + np.moveaxis(t, -3, -1)


def _outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., :, None] * b[..., None, :]


class Jet:
    """Truncated Taylor expansion (orders 0..3) of a scalar in n variables."""

    __slots__ = ("val", "d1", "d2", "d3")
    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init__(self, val, d1, d2, d3):
        self.val = val
        self.d1 = d1
        self.d2 = d2
        self.d3 = d3

    # -- construction -----------------------------------------------------
    @classmethod
    def variables(cls, points) -> list["Jet"]:
        """Coordinate jets x_1..x_n at ``points`` of shape (..., n)."""
        points = np.asarray(points, dtype=float)
        n = points.shape[-1]
        batch = points.shape[:-1]
        out = []
        for i in range(n):
            d1 = np.zeros(batch + (n,))
            d1[..., i] = 1.0
            out.append(cls(points[..., i].copy(), d1,
                           np.zeros(batch + (n, n)), np.zeros(batch + (n, n, n))))
        return out

    @classmethod
    def constant(cls, c, n: int, batch: tuple = ()) -> "Jet":
        c = np.broadcast_to(np.asarray(c, dtype=float), batch).copy()
        return cls(c, np.zeros(batch + (n,)), np.zeros(batch + (n, n)),
                   np.zeros(batch + (n, n, n)))

    @property
    def n(self) -> int:
        return self.d1.shape[-1]

    @property
    def batch(self) -> tuple:
        return np.shape(self.val)

    # -- composition with a unary function --------------------------------
    def compose(self, c0, c1, c2, c3) -> "Jet":
        """Apply phi given phi, phi', phi'', phi''' evaluated at ``self.val``."""
        c1_ = np.asarray(c1)[..., None]
        c2_ = np.asarray(c2)[..., None, None]
        u1 = self.d1
        d1 = c1_ * u1
        d2 = c2_ * _outer(u1, u1) + c1_[..., None] * self.d2
        d3 = (np.asarray(c3)[..., None, None, None] * _outer(u1, u1)[..., None] * u1[..., None, None, :]
              + c2_[..., None] * _sym3(u1, self.d2)
              + c1_[..., None, None] * self.d3)
        return Jet(np.asarray(c0) + 0.0 * self.val, d1, d2, d3)

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        return Jet(-self.val, -self.d1, -self.d2, -self.d3)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val + other.val, self.d1 + other.d1,
                       self.d2 + other.d2, self.d3 + other.d3)
        return Jet(self.val + other, self.d1, self.d2, self.d3)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            f, g = self, other
            fv, gv = np.asarray(f.val), np.asarray(g.val)
            val = fv * gv
            d1 = fv[..., None] * g.d1 + gv[..., None] * f.d1
            d2 = (fv[..., None, None] * g.d2 + gv[..., None, None] * f.d2
                  + _outer(f.d1, g.d1) + _outer(g.d1, f.d1))
            d3 = (fv[..., None, None, None] * g.d3 + gv[..., None, None, None] * f.d3
                  + _sym3(f.d1, g.d2) + _sym3(g.d1, f.d2))
            return Jet(val, d1, d2, d3)
        c = np.asarray(other, dtype=float)
        return Jet(self.val * c, self.d1 * c[..., None], self.d2 * c[..., None, None],
                   self.d3 * c[..., None, None, None])

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        v = np.asarray(self.val, dtype=float)
        inv = 1.0 / v
        return self.compose(inv, -inv**2, 2.0 * inv**3, -6.0 * inv**4)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, Jet):
            return exp(p * log(self))
        p = float(p)
        if p == int(p) and 0 <= p <= 4:
            out = Jet.constant(1.0, self.n, self.batch)
            for _ in range(int(p)):
                out = out * self
            return out
        v = np.asarray(self.val, dtype=float)
        return self.compose(v**p, p * v**(p - 1), p * (p - 1) * v**(p - 2),
                            p * (p - 1) * (p - 2) * v**(p - 3))

    def __rpow__(self, base):
        return exp(self * np.log(float(base)))

    def __repr__(self):
        return f"Jet(val={self.val!r}, n={self.n})"


# -- elementary functions (fall through to numpy for plain numbers) ---------

def exp(u):
    if not isinstance(u, Jet):
        return np.exp(u)
    e = np.exp(u.val)
    return u.compose(e, e, e, e)


def log(u):
    if not isinstance(u, Jet):
        return np.log(u)
    v = np.asarray(u.val, dtype=float)
    return u.compose(np.log(v), 1.0 / v, -1.0 / v**2, 2.0 / v**3)


def sin(u):
    if not isinstance(u, Jet):
        return np.sin(u)
    s, c = np.sin(u.val), np.cos(u.val)
    return u.compose(s, c, -s, -c)


def cos(u):
    if not isinstance(u, Jet):
        return np.cos(u)
    s, c = np.sin(u.val), np.cos(u.val)
    return u.compose(c, -s, -c, s)


def sinh(u):
    if not isinstance(u, Jet):
        return np.sinh(u)
    s, c = np.sinh(u.val), np.cosh(u.val)
    return u.compose(s, c, s, c)


def cosh(u):
    if not isinstance(u, Jet):
        return np.cosh(u)
    s, c = np.sinh(u.val), np.cosh(u.val)
    return u.compose(c, s, c, s)


def sqrt(u):
    if not isinstance(u, Jet):
        return np.sqrt(u)
    return u ** 0.5


def power(u, p):
    return u ** p


# -- jet containers -----------------------------------------------------------

@dataclass(frozen=True)
class ScalarJet3:
    """Value and coordinate partials (orders 1-3) of a scalar field."""

    value: np.ndarray
    grad: np.ndarray
    hess: np.ndarray
    third: np.ndarray

    @classmethod
    def from_jet(cls, u, n: int, batch: tuple) -> "ScalarJet3":
        if not isinstance(u, Jet):
            u = Jet.constant(u, n, batch)
        shape = batch
        return cls(np.broadcast_to(u.val, shape).astype(float),
                   np.broadcast_to(u.d1, shape + (n,)).astype(float),
                   np.broadcast_to(u.d2, shape + (n, n)).astype(float),
                   np.broadcast_to(u.d3, shape + (n, n, n)).astype(float))

    @property
    def dim(self) -> int:
        return self.grad.shape[-1]


@dataclass(frozen=True)
class MetricJet3:
    """Metric components with coordinate partials to order 3 (derivative axes last)."""

    g: np.ndarray
    dg: np.ndarray
    d2g: np.ndarray
    d3g: np.ndarray

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence], n: int, batch: tuple) -> "MetricJet3":
        g = np.zeros(batch + (n, n))
        dg = np.zeros(batch + (n, n, n))
        d2g = np.zeros(batch + (n, n, n, n))
        d3g = np.zeros(batch + (n, n, n, n, n))
        for i in range(n):
            for j in range(n):
                e = entries[i][j]
                if isinstance(e, Jet):
                    g[..., i, j] = e.val
                    dg[..., i, j, :] = e.d1
                    d2g[..., i, j, :, :] = e.d2
                    d3g[..., i, j, :, :, :] = e.d3
                else:
                    g[..., i, j] = e
        return cls(g, dg, d2g, d3g)

    @property
    def dim(self) -> int:
        return self.g.shape[-1]


def check_positive_definite(g: np.ndarray) -> None:
    """Raise NotPositiveDefinite unless every metric in the batch factors."""
    if not np.all(np.isfinite(g)):
        raise NotPositiveDefinite("metric has non-finite entries")
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("metric is not positive definite") from exc


def inverse_metric_jet(mj: MetricJet3) -> tuple[np.ndarray, np.ndarray]:
    """Return (g^{-1}, d_k g^{-1}) with ``dginv[..., i, j, k] = d_k g^{ij}``."""
    check_positive_definite(mj.g)
    ginv = np.linalg.inv(mj.g)
    ginv = 0.5 * (ginv + np.swapaxes(ginv, -1, -2))
    dginv = -np.einsum("...ia,...abk,...bj->...ijk", ginv, mj.dg, ginv)
    return ginv, dginv


# -- finite-difference jets for black-box evaluators -------------------------

FD_STEP_LOW = 1e-3   # orders 1 and 2
FD_STEP_THIRD = 1e-2  # order 3


def _central(fn: Callable, i: int, h: float) -> Callable:
    def d(x):
        e = np.zeros(x.shape[-1])
        e[i] = h
        return (fn(x + e) - fn(x - e)) / (2.0 * h)
    return d


def _fd_partial(fn: Callable, x: np.ndarray, idx: tuple, h: float, richardson: bool):
    def at(step):
        f = fn
        for i in idx:
            f = _central(f, i, step)
        return f(x)
    if not richardson:
        return at(h)
    return (4.0 * at(h / 2) - at(h)) / 3.0


def fd_jet(fn: Callable, points, h_low: float = FD_STEP_LOW, h_third: float = FD_STEP_THIRD,
           richardson: bool = True):
    """Central-difference partials of ``fn`` to order 3.

    ``fn`` maps an array of shape (..., n) to shape (...) + T.  Returns
    ``(value, d1, d2, d3)`` with derivative axes appended after T.  Orders one
    and two use step ``h_low``, order three ``h_third``; with ``richardson``
    each stencil is combined with its half-step counterpart, giving O(h^4).
    """
    x = np.asarray(points, dtype=float)
    n = x.shape[-1]
    val = np.asarray(fn(x), dtype=float)
    d1 = np.stack([_fd_partial(fn, x, (i,), h_low, richardson) for i in range(n)], axis=-1)
    d2 = np.zeros(val.shape + (n, n))
    d3 = np.zeros(val.shape + (n, n, n))
    for i in range(n):
        for j in range(i, n):
            v = _fd_partial(fn, x, (i, j), h_low, richardson)
            d2[..., i, j] = d2[..., j, i] = v
            for k in range(j, n):
                w = _fd_partial(fn, x, (i, j, k), h_third, richardson)
                for a, b, c in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
                    d3[..., a, b, c] = w
    return val, d1, d2, d3
