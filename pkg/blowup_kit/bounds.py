"""Coefficient bounds for real polynomials on boxes.

For every real polynomial p of total degree <= k in m variables,

    max_α |c_α| <= R^k * sup_{|t_j| <= 1} |p(t)|.

`bound_constant` produces such an R by interpolation: with k + 1 nodes on
[-1, 1] the coefficient functionals of a one-variable polynomial are the rows
of the inverse Vandermonde matrix W, so |c_j| <= Λ * max_i |p(x_i)| where
Λ = max_j sum_i |W_ji|. Per-variable interpolation on the tensor node grid
gives Λ^m in m variables, hence

    R_1(k) = Λ^(1/max(k, 1)),   R_m(k) = R_1(k)^m.

Chebyshev polynomials give matching lower bounds: T_k has sup 1 on [-1, 1]
and leading coefficient 2^(k-1), so any valid R satisfies R^k >= 2^(k-1).
"""

import math
from dataclasses import dataclass, field
from enum import Enum, auto
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np
import sympy

from blowup_kit.loggers import make_standard_logger
from blowup_kit.series import MultiIndex, iter_monomials

__all__: Sequence[str] = (
    "BoundsError",
    "DimensionMismatch",
    "NonpositiveEps",
    "NodeFamily",
    "BoundMethod",
    "RealPoly",
    "BoundReport",
    "BoundCheck",
    "ChebyshevWitness",
    "ValidationSummary",
    "equispaced_nodes",
    "chebyshev_nodes",
    "interpolation_matrix",
    "interpolate_coefficients",
    "coefficient_functional_norm",
    "bound_constant",
    "verify_bound",
    "chebyshev_witness",
    "rescale_bound",
    "random_real_poly",
    "validate_bound",
)

logger = make_standard_logger(__name__)

Real = Union[Fraction, float]

# relative slack on R so that rounding in grid evaluation cannot eat a tight margin
R_INFLATION: float = 1e-12
# float-inverted Chebyshev nodes carry their own rounding in Λ
FLOAT_NODE_INFLATION: float = 1e-9


class BoundsError(Exception):
    """Base for failures of the coefficient-bound computations."""


@dataclass(frozen=True)
class DimensionMismatch(BoundsError):
    expected: Tuple[int, int]
    actual: Tuple[int, int]

    def __str__(self) -> str:
        return (
            f"Bound covers (m, k) = {self.expected} but polynomial has "
            f"(m, degree) = {self.actual}"
        )


@dataclass(frozen=True)
class NonpositiveEps(BoundsError):
    eps: float

    def __str__(self) -> str:
        return f"Box half-width must be positive, not {self.eps}"


class NodeFamily(Enum):
    equispaced, chebyshev = auto(), auto()


class BoundMethod(Enum):
    interpolation, chebyshev_witness = auto(), auto()


@dataclass(frozen=True)
class RealPoly:
    """sum_α c_α t^α with real (exact or float) coefficients and total degree <= `degree`."""

    m: int
    degree: int
    coefficients: Mapping[MultiIndex, Real]

    def __post_init__(self) -> None:
        if self.m < 1 or self.degree < 0:
            raise ValueError(f"Need m >= 1 and degree >= 0, found m={self.m}, degree={self.degree}")
        for alpha in self.coefficients:
            if len(alpha) != self.m or sum(alpha) > self.degree or min(alpha) < 0:
                raise ValueError(f"Exponent {alpha} does not fit m={self.m}, degree={self.degree}")

    def max_coefficient(self) -> float:
        return max((abs(float(c)) for c in self.coefficients.values()), default=0.0)

    def coefficient_tensor(self) -> np.ndarray:
        tensor = np.zeros((self.degree + 1,) * self.m, dtype=float)
        for alpha, c in self.coefficients.items():
            tensor[alpha] += float(c)
        return tensor

    def evaluate_on_grid(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Values on the tensor grid of the given per-axis points, shape (len(axes[0]), ...)."""
        if len(axes) != self.m:
            raise ValueError(f"Expecting {self.m} axes, found {len(axes)}")
        values = self.coefficient_tensor()
        # contract one exponent axis at a time against its power table
        for axis in axes:
            powers = np.vander(np.asarray(axis, dtype=float), self.degree + 1, increasing=True)
            values = np.einsum("e...,ie->...i", values, powers)
        return values


@dataclass(frozen=True)
class BoundReport:
    """A constant R with max|c_α| <= R^k sup_{|t_j| <= eps} |p| for (m, k) polynomials."""

    R: float
    k: int
    m: int
    method: BoundMethod
    nodes: NodeFamily
    eps: float = 1.0
    functional_norm: float = 1.0
    composition: str = ""
    node_values: Tuple[float, ...] = field(default=())


@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    margin: float
    max_coefficient: float
    grid_sup: float
    grid_points: int


@dataclass(frozen=True)
class ChebyshevWitness:
    poly: RealPoly
    lower_bound: float


@dataclass(frozen=True)
class ValidationSummary:
    trials: int
    violations: int
    min_margin: float


def equispaced_nodes(k: int) -> List[Fraction]:
    """k + 1 equally spaced points on [-1, 1]; the single node 0 when k = 0."""
    if k == 0:
        return [Fraction(0)]
    return [Fraction(-1) + Fraction(2 * i, k) for i in range(k + 1)]


def chebyshev_nodes(k: int) -> List[float]:
    """The k + 1 zeros of T_(k+1), in increasing order."""
    return sorted(math.cos((2 * i + 1) * math.pi / (2 * (k + 1))) for i in range(k + 1))


def interpolation_matrix(nodes: Sequence[Real]) -> Union[List[List[Fraction]], np.ndarray]:
    """Inverse Vandermonde: row j maps node values to the t^j coefficient.

    Rational nodes are inverted exactly with sympy and the product with the
    Vandermonde matrix is checked to be the identity exactly. Float nodes use numpy.
    """
    if all(isinstance(x, (int, Fraction)) for x in nodes):
        size = len(nodes)
        points = [Fraction(x) for x in nodes]
        rationals = [sympy.Rational(q.numerator, q.denominator) for q in points]
        vandermonde = sympy.Matrix(size, size, lambda i, j: rationals[i] ** j)
        inverse = vandermonde.inv()
        if inverse * vandermonde != sympy.eye(size):
            raise ArithmeticError("Exact Vandermonde inverse failed its identity check")
        return [
            [Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) for j in range(size)]
            for i in range(size)
        ]
    return np.linalg.inv(np.vander(np.asarray(nodes, dtype=float), len(nodes), increasing=True))


def interpolate_coefficients(values: Sequence[Real], nodes: Sequence[Real]) -> List[Real]:
    """Coefficients (constant term first) of the polynomial through (nodes, values)."""
    w = interpolation_matrix(nodes)
    if isinstance(w, np.ndarray):
        return [float(x) for x in w @ np.asarray(values, dtype=float)]
    return [sum((wij * Fraction(v) for wij, v in zip(row, values)), Fraction(0)) for row in w]


@lru_cache(maxsize=None)
def coefficient_functional_norm(k: int, nodes: NodeFamily = NodeFamily.equispaced) -> Real:
    """max_j sum_i |W_ji| for the degree-k interpolation matrix W (exact for equispaced nodes)."""
    family = equispaced_nodes(k) if nodes is NodeFamily.equispaced else chebyshev_nodes(k)
    w = interpolation_matrix(family)
    if isinstance(w, np.ndarray):
        return float(np.max(np.sum(np.abs(w), axis=1)))
    return max(sum((abs(x) for x in row), Fraction(0)) for row in w)


def _node_values(k: int, nodes: NodeFamily) -> Tuple[float, ...]:
    family = equispaced_nodes(k) if nodes is NodeFamily.equispaced else chebyshev_nodes(k)
    return tuple(float(x) for x in family)


def _one_variable_r(k: int, nodes: NodeFamily) -> float:
    lam = coefficient_functional_norm(k, nodes)
    return float(lam) ** (1.0 / max(k, 1))


def bound_constant(m: int, k: int, nodes: NodeFamily = NodeFamily.equispaced) -> BoundReport:
    """A valid R for polynomials of total degree <= k in m variables on the unit box.

    R_1 is the running maximum of Λ(j)^(1/max(j, 1)) over j <= k, so R is
    non-decreasing in k; R_m = R_1^m. For equispaced nodes R^k >= Λ(k)^m is then
    confirmed in exact rational arithmetic, nudging R upward if rounding fell short.
    """
    if m < 1 or k < 0:
        raise ValueError(f"Need m >= 1 and k >= 0, found m={m}, k={k}")
    r1 = max(_one_variable_r(j, nodes) for j in range(k + 1))
    slack = R_INFLATION if nodes is NodeFamily.equispaced else FLOAT_NODE_INFLATION
    r = (r1**m) * (1.0 + slack)
    lam = coefficient_functional_norm(k, nodes)
    if isinstance(lam, Fraction) and k > 0:
        while Fraction(r) ** k < lam**m:
            r = float(np.nextafter(r, math.inf))
    r = 1.0 if k == 0 else max(r, 1.0)
    composition = (
        "R_m = R_1^m with R_1 = max_(j<=k) Λ(j)^(1/max(j,1)); "
        "per-axis interpolation gives Λ(k)^m on the tensor node grid"
    )
    logger.debug(f"bound_constant(m={m}, k={k}, {nodes.name}) = {r} with Λ = {float(lam)}")
    return BoundReport(
        R=r,
        k=k,
        m=m,
        method=BoundMethod.interpolation,
        nodes=nodes,
        functional_norm=float(lam),
        composition=composition,
        node_values=_node_values(k, nodes),
    )


def _grid_axis(report: BoundReport, grid_density: int) -> np.ndarray:
    dense = np.linspace(-report.eps, report.eps, grid_density)
    scaled = report.eps * np.asarray(report.node_values or _node_values(report.k, report.nodes))
    return np.unique(np.concatenate([dense, scaled]))


def verify_bound(p: RealPoly, report: BoundReport, grid_density: int = 64) -> BoundCheck:
    """Compares max|c_α| with R^k times the sup of |p| over a grid of the box.

    The grid sup never exceeds the true sup, so a pass here is a pass for the true
    statement. Each grid axis also carries the (scaled) interpolation nodes, on
    which the interpolation argument guarantees a pass.

    :raises DimensionMismatch If p has another dimension or a larger degree than the report.
    """
    if p.m != report.m or p.degree > report.k:
        raise DimensionMismatch((report.m, report.k), (p.m, p.degree))
    top = p.max_coefficient()
    if top == 0.0:
        return BoundCheck(True, 0.0, 0.0, 0.0, 0)
    axis = _grid_axis(report, grid_density)
    values = p.evaluate_on_grid([axis] * p.m)
    sup = float(np.max(np.abs(values)))
    margin = report.R**report.k * sup - top
    return BoundCheck(margin >= 0.0, margin, top, sup, int(values.size))


def chebyshev_witness(k: int) -> ChebyshevWitness:
    """T_k from T_0 = 1, T_1 = t, T_(k+1) = 2 t T_k - T_(k-1), and max|coef|^(1/k)."""
    if k < 1:
        raise ValueError(f"Chebyshev witnesses need k >= 1, not {k}")
    previous, current = [1], [0, 1]
    for _ in range(1, k):
        shifted = [0] + [2 * c for c in current]
        padded = previous + [0] * (len(shifted) - len(previous))
        previous, current = current, [a - b for a, b in zip(shifted, padded)]
    coefficients: Dict[MultiIndex, Real] = {(j,): Fraction(c) for j, c in enumerate(current) if c != 0}
    lower = float(max(abs(c) for c in current)) ** (1.0 / k)
    return ChebyshevWitness(RealPoly(1, k, coefficients), lower)


def rescale_bound(report: BoundReport, eps: float) -> BoundReport:
    """The bound for sup over |t_j| <= eps: R_eps = max(R / eps, R).

    :raises NonpositiveEps If eps <= 0.
    """
    if not eps > 0:
        raise NonpositiveEps(eps)
    return BoundReport(
        R=max(report.R / eps, report.R),
        k=report.k,
        m=report.m,
        method=report.method,
        nodes=report.nodes,
        eps=report.eps * eps,
        functional_norm=report.functional_norm,
        composition=f"{report.composition}; rescaled by eps={eps}: R_eps = max(R/eps, R)",
        node_values=report.node_values,
    )


def random_real_poly(rng: np.random.Generator, m: int, k: int) -> RealPoly:
    """Coefficients uniform in [-1, 1] on every monomial of total degree <= k."""
    monomials = list(iter_monomials(m, k))
    values = rng.uniform(-1.0, 1.0, size=len(monomials))
    return RealPoly(m, k, {a: float(v) for a, v in zip(monomials, values)})


def validate_bound(
    report: BoundReport, trials: int, rng: np.random.Generator, grid_density: int = 64
) -> ValidationSummary:
    """Brute-force check of the report against `trials` random polynomials."""
    violations = 0
    min_margin = math.inf
    for _ in range(trials):
        check = verify_bound(random_real_poly(rng, report.m, report.k), report, grid_density)
        violations += 0 if check.passed else 1
        min_margin = min(min_margin, check.margin)
    logger.info(
        f"validated R={report.R:.6g} (m={report.m}, k={report.k}): "
        f"{violations} violations in {trials} trials"
    )
    return ValidationSummary(trials, violations, min_margin if trials else 0.0)
