"""Quadrature for weakly singular kernel integrals.

Everything here evaluates integrals of the form

    K[f](x) = integral_0^x f(t) * (x - t)**(p - 1) dt,    0 < p < 1,

whose kernel blows up (integrably) at t = x.  The workhorse is a
Gauss-Jacobi rule that absorbs the kernel into the weight, so smooth f
converges spectrally and the rule is exact for polynomial f up to the
rule degree.  Node counts double from ``node_count`` until two successive
estimates agree to tolerance, capped at MAX_NODES.

For tabulated data there is a product-integration path: f is taken
piecewise linear on its own grid and the kernel moments of every cell are
integrated in closed form, which is exact for piecewise-linear f and
avoids sampling f anywhere but its own nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import ConvergenceError, DomainError, EvaluationError
from .functions import (
    PiecewisePowerSum,
    PowerSum,
    TabulatedFunction,
    _eval_terms,
    as_order,
)

__all__ = [
    "QuadratureConfig",
    "DEFAULT_CONFIG",
    "MAX_NODES",
    "singular_integral",
    "singular_integral_tabulated",
    "tabulated_derivative_kernel",
    "smooth_integral",
    "left_weighted_integral",
    "graded_mesh",
    "kernel_integral",
]

#: hard cap on nodes per rule during adaptive doubling
MAX_NODES = 4096


@dataclass(frozen=True)
class QuadratureConfig:
    """Tuning knobs for the adaptive singular quadrature.

    node_count
        starting rule size; doubled until convergence.
    graded_mesh_exponent
        clustering strength for :func:`graded_mesh`; ``None`` means pick
        2/p at the point of use.
    abs_tol, rel_tol
        doubling stops when successive estimates differ by at most
        ``max(abs_tol, rel_tol * |I|)``.
    """

    node_count: int = 64
    graded_mesh_exponent: float | None = None
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9

    def __post_init__(self):
        if not (isinstance(self.node_count, int) and self.node_count >= 2):
            raise DomainError(
                f"node_count must be an int >= 2, got {self.node_count!r}"
            )
        g = self.graded_mesh_exponent
        if g is not None and not (math.isfinite(g) and g >= 1.0):
            raise DomainError(f"graded_mesh_exponent must be >= 1, got {g!r}")
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise DomainError("tolerances must be positive")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=256)
def _jacobi_rule(n: int, alpha: float, beta: float):
    # scipy's recurrence warns (spuriously) for exponents near -1
    with np.errstate(invalid="ignore"):
        x, w = roots_jacobi(n, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=64)
def _legendre_rule(n: int):
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _sample(g: Callable, t: np.ndarray) -> np.ndarray:
    """Evaluate g at the nodes, tolerating scalar-only callables, and
    insist every sample is finite."""
    try:
        out = np.asarray(g(t), dtype=float)
    except (TypeError, ValueError):
        out = None
    if out is None or out.shape != t.shape:
        out = np.array([float(g(ti)) for ti in t])
    if not np.all(np.isfinite(out)):
        bad = float(t[~np.isfinite(out)][0])
        raise EvaluationError(
            f"integrand returned a non-finite value at t = {bad!r}", bad
        )
    return out


def _doubling(estimate: Callable[[int], float], cfg: QuadratureConfig) -> float:
    """Run estimate(n) for n = node_count, 2*node_count, ... until two
    successive values agree to tolerance.  At the MAX_NODES cap a mild
    shortfall returns the last estimate; disagreement two orders beyond
    tolerance raises ConvergenceError."""
    n = cfg.node_count
    prev = None
    while True:
        val = estimate(n)
        if prev is not None:
            err = abs(val - prev)
            tol = max(cfg.abs_tol, cfg.rel_tol * abs(val))
            if err <= tol:
                return val
            if n >= MAX_NODES:
                if err > 100.0 * tol:
                    raise ConvergenceError(
                        f"quadrature stalled at {n} nodes "
                        f"(last change {err:.3e}, tolerance {tol:.3e})"
                    )
                return val
        elif n >= MAX_NODES:
            return val
        prev = val
        n = min(2 * n, MAX_NODES)


def _order_like(p) -> float:
    return float(as_order(p))


def singular_integral(
    g: Callable,
    x: float,
    p,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    *,
    left_exponent: float = 0.0,
) -> float:
    """integral_0^x g(t) * t**left_exponent * (x - t)**(p - 1) dt.

    ``left_exponent`` (> -1) lets callers factor a known algebraic
    behaviour of the integrand at t = 0 into the weight; the remaining g
    should then be smooth for spectral convergence.  With the default 0
    this is the plain kernel integral of g.
    """
    p = _order_like(p)
    x = float(x)
    if x < 0.0:
        raise DomainError(f"upper limit must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    le = float(left_exponent)
    if not (math.isfinite(le) and le > -1.0):
        raise DomainError(f"left_exponent must be > -1, got {left_exponent!r}")

    # map [0, x] onto [-1, 1]; the Jacobi weight (1-xi)^(p-1) (1+xi)^le
    # soaks up both endpoint behaviours
    scale = (0.5 * x) ** (p + le)

    def estimate(n: int) -> float:
        xi, w = _jacobi_rule(n, p - 1.0, le)
        return scale * float(np.dot(w, _sample(g, x * (1.0 + xi) * 0.5)))

    return _doubling(estimate, cfg)


def smooth_integral(
    g: Callable,
    a: float,
    b: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Gauss-Legendre with doubling, for integrands that are regular on
    [a, b]."""
    a = float(a)
    b = float(b)
    if b <= a:
        return 0.0
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)

    def estimate(n: int) -> float:
        xi, w = _legendre_rule(n)
        return half * float(np.dot(w, _sample(g, mid + half * xi)))

    return _doubling(estimate, cfg)


def left_weighted_integral(
    g: Callable,
    b: float,
    left_exponent: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """integral_0^b g(t) * t**left_exponent dt, the algebraic endpoint
    factor absorbed into a Gauss-Jacobi weight (no singularity at b)."""
    b = float(b)
    if b <= 0.0:
        return 0.0
    le = float(left_exponent)
    if not (math.isfinite(le) and le > -1.0):
        raise DomainError(f"left_exponent must be > -1, got {left_exponent!r}")
    scale = (0.5 * b) ** (le + 1.0)

    def estimate(n: int) -> float:
        xi, w = _jacobi_rule(n, 0.0, le)
        return scale * float(np.dot(w, _sample(g, b * (1.0 + xi) * 0.5)))

    return _doubling(estimate, cfg)


def graded_mesh(
    x_max: float,
    points: int,
    exponent: float | None = None,
    *,
    p: float | None = None,
) -> np.ndarray:
    """Mesh on [0, x_max] clustered at 0: x_i = x_max * (i/(points-1))**q.

    With ``exponent=None`` the clustering strength defaults to 2/p for
    kernel exponent p (if given), else 2.
    """
    if points < 2:
        raise DomainError(f"need at least 2 mesh points, got {points!r}")
    if x_max <= 0.0:
        raise DomainError(f"x_max must be > 0, got {x_max!r}")
    if exponent is None:
        exponent = 2.0 / _order_like(p) if p is not None else 2.0
    if exponent < 1.0:
        raise DomainError(f"mesh exponent must be >= 1, got {exponent!r}")
    u = np.linspace(0.0, 1.0, points)
    return x_max * u**exponent


def _pow_diff(B: np.ndarray, A: np.ndarray, q: float) -> np.ndarray:
    """B**q - A**q for 0 <= A < B, stable when A is close to B."""
    out = np.empty_like(B)
    zero = A <= 0.0
    out[zero] = B[zero] ** q
    nz = ~zero
    if nz.any():
        out[nz] = -(B[nz] ** q) * np.expm1(q * (np.log(A[nz]) - np.log(B[nz])))
    return out


def singular_integral_tabulated(f: TabulatedFunction, x: float, p) -> float:
    """Product integration of the kernel integral for tabulated f.

    f is treated as piecewise linear between its own samples; each cell's
    kernel moments are integrated in closed form, so the only error is the
    linear interpolation of f itself.
    """
    p = _order_like(p)
    x = float(x)
    if x < 0.0 or x > f.x_max * (1.0 + 1e-12):
        raise DomainError(f"x = {x!r} outside tabulated range [0, {f.x_max!r}]")
    if x == 0.0:
        return 0.0
    x = min(x, f.x_max)
    inside = f.xs < x
    nodes = np.append(f.xs[inside], x)
    vals = np.append(f.values[inside], f(x))
    if nodes.size < 2:
        return 0.0
    a = nodes[:-1]
    b = nodes[1:]
    fa = vals[:-1]
    slope = (vals[1:] - fa) / (b - a)
    B = x - a
    A = np.maximum(x - b, 0.0)
    d0 = _pow_diff(B, A, p)
    d1 = _pow_diff(B, A, p + 1.0)
    m0 = d0 / p
    m1 = (B * d0) / p - d1 / (p + 1.0)  # moment of (t - a) over the cell
    return float(np.dot(fa, m0) + np.dot(slope, m1))


def tabulated_derivative_kernel(f: TabulatedFunction, x: float, p) -> float:
    """Kernel integral of the *derivative* of tabulated f:
    integral_0^x f'(t) (x-t)**(p-1) dt.

    Finite differencing the sampled values and then integrating loses the
    derivative mass near a steep left end (slopes of sqrt-like data are not
    representable on a uniform grid), so instead this differentiates the
    values-form integral in x:

        d/dx K[f](x) = K[f'](x) + f(0) * x**(p-1)

    K[f] comes from product integration (exact for the interpolant) and is
    smooth in x, so a second-order difference with a grid-sized step keeps
    the overall error at the level of the interpolation of f itself.
    """
    p = _order_like(p)
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"upper limit must be > 0, got {x!r}")
    xs = f.xs
    j = int(np.clip(np.searchsorted(xs, min(x, f.x_max)), 1, xs.size - 1))
    step = xs[j] - xs[j - 1]

    def J(a: float) -> float:
        return singular_integral_tabulated(f, a, p)

    if x - step >= 0.0 and x + step <= f.x_max:
        slope = (J(x + step) - J(x - step)) / (2.0 * step)
    elif x + step > f.x_max:
        if x - 2.0 * step >= 0.0:
            slope = (3.0 * J(x) - 4.0 * J(x - step) + J(x - 2.0 * step)) / (
                2.0 * step
            )
        else:
            slope = (J(x) - J(x - step)) / step
    else:
        if x + 2.0 * step <= f.x_max:
            slope = (-3.0 * J(x) + 4.0 * J(x + step) - J(x + 2.0 * step)) / (
                2.0 * step
            )
        else:
            slope = (J(x + step) - J(x)) / step
    return float(slope) - float(f.values[0]) * x ** (p - 1.0)


def _interior_span(
    terms, lo: float, hi: float, x: float, p: float, cfg: QuadratureConfig
) -> float:
    # A = (x-t)**p turns the kernel factor into dA/p exactly; the leftover
    # integrand stays mild in A even when x - hi is tiny
    a_hi = (x - hi) ** p
    a_lo = (x - lo) ** p
    inv_p = 1.0 / p
    return smooth_integral(
        lambda A: _eval_terms(terms, x - A**inv_p) / p, a_hi, a_lo, cfg
    )


def _piecewise_kernel(pieces, x: float, p: float, cfg: QuadratureConfig) -> float:
    """Kernel integral of a function given as raw (coef, exp) term lists
    on consecutive spans (lo, hi, terms) covering [0, x].

    The first span's terms may carry exponents in (-1, 0) (derivatives of
    fractional powers); those are factored into the quadrature weight.
    """
    total = 0.0
    for lo, hi, terms in pieces:
        if not terms:
            continue
        le = min(e for _, e in terms) if lo == 0.0 else 0.0
        if hi >= x:
            # the span carrying the kernel singularity at t = x
            if lo == 0.0:
                shifted = tuple((c, e - le) for c, e in terms)
                total += singular_integral(
                    lambda t: _eval_terms(shifted, t),
                    x, p, cfg, left_exponent=le,
                )
            else:
                total += singular_integral(
                    lambda u: _eval_terms(terms, lo + u), x - lo, p, cfg
                )
        elif le < 0.0:
            # interior first span with a genuine singularity at t = 0:
            # give each end its matching weighted rule
            mid = 0.5 * hi
            shifted = tuple((c, e - le) for c, e in terms)
            total += left_weighted_integral(
                lambda t: _eval_terms(shifted, t) * (x - t) ** (p - 1.0),
                mid, le, cfg,
            )
            total += _interior_span(terms, mid, hi, x, p, cfg)
        else:
            total += _interior_span(terms, lo, hi, x, p, cfg)
    return total


def kernel_integral(
    f,
    x: float,
    p,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Numerical K[f](x) = integral_0^x f(t) (x-t)**(p-1) dt for any
    supported representation of f (or a bare callable).

    Power sums factor their leading t**e behaviour into the Jacobi
    weight, piecewise inputs are split at their breakpoints, and tabulated
    data goes through product integration.
    """
    p = _order_like(p)
    x = float(x)
    if x < 0.0:
        raise DomainError(f"upper limit must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0

    if isinstance(f, PowerSum):
        return _piecewise_kernel([(0.0, x, f.terms)], x, p, cfg)

    if isinstance(f, PiecewisePowerSum):
        return _piecewise_kernel(
            ((lo, hi, seg.terms) for lo, hi, seg in f.pieces(x)), x, p, cfg
        )

    if isinstance(f, TabulatedFunction):
        return singular_integral_tabulated(f, x, p)

    if callable(f):
        return singular_integral(f, x, p, cfg)

    raise DomainError(f"unsupported integrand type {type(f).__name__}")
