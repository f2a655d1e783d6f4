"""Abel's integral equation, both directions.

The equation relates a descent-time function psi to the arc length s of
the curve producing it:

    psi(a) = integral_0^a s'(z) * (a - z)**(-n) dz,        0 < n < 1.

``forward`` evaluates that integral for known s.  Three independent
routes recover s from psi:

* ``solve_series``     -- exact coefficient map on power sums,
* ``solve_theorem``    -- the unit-interval closed form
                          s = (sin n pi / pi) x^n integral_0^1 psi(x t) (1-t)**(n-1) dt,
* ``solve_convolution``-- the convolution closed form
                          s = (sin n pi / pi) integral_0^x psi(a) (x-a)**(n-1) da,

plus ``solve_piecewise`` for the classical n = 1/2 treatment of
segment-wise psi, and a grid-sampling wrapper for the numeric routes.
The numeric routes never inspect psi's algebraic structure beyond its
leading power at 0 (a quadrature hint); cross-checking them against the
exact series map is the point of having three.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .functions import (
    FunctionSpec,
    Order,
    PiecewisePowerSum,
    PowerSum,
    TabulatedFunction,
    _eval_terms,
    as_order,
)
from .fracops import _gamma_ratio, caputo_derivative
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    kernel_integral,
    singular_integral,
)
from .special_functions import gamma, reflection_factor

__all__ = [
    "SolutionBackend",
    "AbelProblem",
    "ArcLengthSolution",
    "forward",
    "solve_series",
    "solve_convolution",
    "solve_theorem",
    "solve_piecewise",
    "solve_on_grid",
]


class SolutionBackend(enum.Enum):
    SERIES_1823 = "series"
    CONVOLUTION_1826 = "convolution"
    THEOREM_1823 = "theorem"
    NUMERIC_PRODUCT = "numeric"


def _check_finite_at_zero(psi) -> None:
    v = float(psi(0.0))
    if not math.isfinite(v):
        raise DomainError("psi must be finite at 0")


@dataclass(frozen=True)
class AbelProblem:
    """The data of one inversion problem: the time function psi and the
    kernel order n (1/2 for the tautochrone)."""

    psi: FunctionSpec
    n: Order = field(default_factory=lambda: Order(0.5))

    def __post_init__(self):
        object.__setattr__(self, "n", as_order(self.n))
        if not isinstance(
            self.psi, (PowerSum, PiecewisePowerSum, TabulatedFunction)
        ):
            raise DomainError(
                f"psi must be a function spec, got {type(self.psi).__name__}"
            )
        _check_finite_at_zero(self.psi)


@dataclass(frozen=True)
class ArcLengthSolution:
    """Arc length s(x) recovered from an AbelProblem, tagged with the
    backend that produced it.  s(0) = 0 always."""

    s: FunctionSpec
    backend: SolutionBackend

    def __post_init__(self):
        s0 = float(self.s(0.0))
        if abs(s0) > 1e-12:
            raise DomainError(f"arc length must vanish at 0, got s(0) = {s0!r}")

    def __call__(self, x):
        return self.s(x)


def forward(
    s,
    n,
    a: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """psi(a) = integral_0^a s'(z) (a-z)**(-n) dz for known arc length s.

    Equals Gamma(1-n) times the order-n derivative of s; a = 0 gives 0.
    """
    nn = float(as_order(n))
    a = float(a)
    if a < 0.0:
        raise DomainError(f"release height must be >= 0, got {a!r}")
    if a == 0.0:
        return 0.0
    return gamma(1.0 - nn) * caputo_derivative(s, nn, a, cfg, backend="quadrature")


def solve_series(problem: AbelProblem) -> ArcLengthSolution:
    """Exact inversion of a power-sum psi.

    Each term beta * a**k maps to
    beta * Gamma(k+1) / (Gamma(1-n) Gamma(n+k+1)) * x**(n+k).
    """
    if not isinstance(problem.psi, PowerSum):
        raise DomainError("series backend requires a PowerSum psi")
    n = float(problem.n)
    g1 = gamma(1.0 - n)
    terms = tuple(
        (c * _gamma_ratio(k + 1.0, n + k + 1.0) / g1, n + k)
        for c, k in problem.psi.terms
    )
    return ArcLengthSolution(PowerSum(terms), SolutionBackend.SERIES_1823)


def _psi_left_exponent(psi) -> float:
    """Leading power of psi at 0, used as a quadrature hint (0 when the
    structure is unknown)."""
    if isinstance(psi, PowerSum):
        return psi.min_exponent if psi.terms else 0.0
    return 0.0


def solve_convolution(
    problem: AbelProblem,
    x: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """s(x) by the convolution closed form
    (sin n pi / pi) * integral_0^x psi(a) (x-a)**(n-1) da.

    psi is treated as a black box evaluated at quadrature nodes (product
    integration on its own grid when tabulated); only its leading power
    at 0 is used as a weight hint.
    """
    x = float(x)
    if x < 0.0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    n = float(problem.n)
    psi = problem.psi
    if isinstance(psi, (PiecewisePowerSum, TabulatedFunction)):
        integral = kernel_integral(psi, x, n, cfg)
    else:
        le = _psi_left_exponent(psi)
        if le > 0.0:
            shifted = tuple((c, e - le) for c, e in psi.terms)
            integral = singular_integral(
                lambda t: _eval_terms(shifted, t), x, n, cfg, left_exponent=le
            )
        else:
            integral = singular_integral(psi, x, n, cfg)
    return reflection_factor(n) * integral


def solve_theorem(
    problem: AbelProblem,
    x: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """s(x) by the scaling closed form
    (sin n pi / pi) * x**n * integral_0^1 psi(x t) (1-t)**(n-1) dt.

    Same analytic content as the convolution form but integrated on the
    unit interval in the scaled variable, which places quadrature nodes
    differently; piecewise psi (whose breakpoints do not scale) is routed
    through its breakpoint-respecting path instead.
    """
    x = float(x)
    if x < 0.0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    n = float(problem.n)
    psi = problem.psi
    if isinstance(psi, PiecewisePowerSum):
        # scaled breakpoints would fall at b/x; equivalent and cleaner to
        # integrate in the unscaled variable with the breakpoint splits
        return solve_convolution(problem, x, cfg)
    le = _psi_left_exponent(psi)
    if le > 0.0:
        # psi(x t) / t**le evaluated via exponent shift; the stray x**(-le)
        # this introduces is multiplied back at the end
        shifted = tuple((c, e - le) for c, e in psi.terms)
        integral = x**le * singular_integral(
            lambda t: _eval_terms(shifted, x * t), 1.0, n, cfg, left_exponent=le
        )
    else:
        integral = singular_integral(lambda t: psi(x * t), 1.0, n, cfg)
    return reflection_factor(n) * x**n * integral


def solve_piecewise(
    problem: AbelProblem,
    x: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """s(x) for segment-wise psi at n = 1/2:

    pi * s(x) = sum_i integral over segment i of psi_i(a) / sqrt(x - a) da,

    only the final segment's upper limit being x.  Restricted to order
    1/2 (the classical treatment); a bare PowerSum is accepted as the
    single-segment case.
    """
    n = float(problem.n)
    if abs(n - 0.5) > 1e-12:
        raise DomainError(
            f"piecewise solving is implemented for order 1/2 only, got n = {n!r}"
        )
    x = float(x)
    if x < 0.0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    psi = problem.psi
    if isinstance(psi, PowerSum):
        psi = PiecewisePowerSum((), (psi,))
    if not isinstance(psi, PiecewisePowerSum):
        raise DomainError("piecewise backend requires piecewise or power-sum psi")
    return kernel_integral(psi, x, 0.5, cfg) / math.pi


def solve_on_grid(
    problem: AbelProblem,
    xs,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    backend: SolutionBackend = SolutionBackend.CONVOLUTION_1826,
) -> ArcLengthSolution:
    """Sample a pointwise backend onto a grid (which must start at 0) and
    wrap the result as a tabulated arc length."""
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or xs.size < 2 or xs[0] != 0.0 or np.any(np.diff(xs) <= 0):
        raise DomainError("grid must be 1-d, start at 0, strictly increasing")
    if backend == SolutionBackend.SERIES_1823:
        sol = solve_series(problem)
        values = sol.s(xs)
        return ArcLengthSolution(
            TabulatedFunction(xs, values), SolutionBackend.SERIES_1823
        )
    if backend == SolutionBackend.CONVOLUTION_1826:
        point = solve_convolution
    elif backend == SolutionBackend.THEOREM_1823:
        point = solve_theorem
    elif backend == SolutionBackend.NUMERIC_PRODUCT:
        return _solve_product(problem, xs, cfg)
    else:
        raise DomainError(f"unknown backend {backend!r}")
    values = np.array([point(problem, float(x), cfg) for x in xs])
    return ArcLengthSolution(TabulatedFunction(xs, values), backend)


def _solve_product(
    problem: AbelProblem, xs: np.ndarray, cfg: QuadratureConfig
) -> ArcLengthSolution:
    """Fully discrete route: psi as tabulated data (sampled onto a fine
    graded mesh if given in closed form), convolved by product
    integration."""
    n = float(problem.n)
    psi = problem.psi
    if not isinstance(psi, TabulatedFunction):
        # sample densely enough that the O(h^2) interpolation error of the
        # product rule stays below the numeric-backend tolerances
        fine = max(8 * (xs.size - 1) + 1, 2049)
        mesh = float(xs[-1]) * np.linspace(0.0, 1.0, fine) ** 2.0
        psi = TabulatedFunction(mesh, psi(mesh))
    rf = reflection_factor(n)
    values = np.array(
        [rf * kernel_integral(psi, float(x), n, cfg) for x in xs]
    )
    return ArcLengthSolution(
        TabulatedFunction(xs, values), SolutionBackend.NUMERIC_PRODUCT
    )
