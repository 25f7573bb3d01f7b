"""Holomorphic extension across the edge of a wedge, computed through blow-up charts.

A wedge is W = E + iC: E an open box in R^n, C the union of open circular
cones of half-angle `aperture` around finitely many generators (closed under
negation), localized to |Im| <= radius.

For every generator direction Y (one chart per pair ±Y) the pipeline

  1. takes boundary values along the cone directions and checks they agree,
  2. picks a rational frame A = [Y, c_1..c_m] and centre x0 of E, and lifts f
     to the blow-up chart through z -> x0 + A (z, s + z t),
  3. extends across the edge: exactly through the hypocomplex reconstruction
     when f is a germ, or by a least-squares germ fit when f is only sampled,
  4. maps the chart germ back to the ambient coordinates.

The per-chart germs must agree near x0.
"""

import math
from dataclasses import dataclass, field
from enum import Enum, auto
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from blowup_kit.engine import hypocomplex_reconstruct, pullback
from blowup_kit.loggers import make_standard_logger
from blowup_kit.series import (
    Mode,
    Series,
    ambient_variables,
    as_numpy_function,
    coerce,
    coefficient_norm,
    germ_variables,
    iter_monomials,
    sub,
    substitute,
    truncate,
)
from blowup_kit.timing import timer

__all__: Sequence[str] = (
    "WedgeError",
    "OutsideWedge",
    "LimitDiverged",
    "DirectionMismatch",
    "QuadratureUnderResolved",
    "BallTooLarge",
    "BoundaryMismatch",
    "FitUnderdetermined",
    "OverlapDisagreement",
    "WedgeSpec",
    "SampledFunction",
    "builtin_sample",
    "BUILTIN_SAMPLES",
    "EpsSequence",
    "DirectionalLimit",
    "BoundaryData",
    "BumpKind",
    "BumpSpec",
    "WeakResidual",
    "WedgeChart",
    "ChartData",
    "Extension",
    "WedgeSettings",
    "ExtensionReport",
    "edge_grid",
    "sample_wedge",
    "richardson_limit",
    "boundary_value",
    "bump",
    "weak_cr_residual",
    "make_chart",
    "germ_in_chart",
    "germ_to_ambient",
    "lift_to_blowup",
    "edge_extend",
    "full_eowt_demo",
)

logger = make_standard_logger(__name__)

Vector = Tuple[float, ...]
ChartFunction = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
"""Values at chart points: (z of shape (N,), s of shape (N, m), t of shape (N, m)) -> (N,)."""


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                               Errors                              #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


class WedgeError(Exception):
    """Base for failures of the wedge pipeline."""


@dataclass(frozen=True)
class OutsideWedge(WedgeError):
    index: int
    point: Tuple[complex, ...]

    def __str__(self) -> str:
        return f"Sample point #{self.index} {self.point} is not in the localized wedge"


@dataclass(frozen=True)
class LimitDiverged(WedgeError):
    direction: Vector
    contraction: float
    difference: float

    def __str__(self) -> str:
        return (
            f"Boundary limit along {self.direction} does not settle: last difference "
            f"{self.difference:.3g} with contraction ratio {self.contraction:.3g}"
        )


@dataclass(frozen=True)
class DirectionMismatch(WedgeError):
    left: Vector
    right: Vector
    difference: float

    def __str__(self) -> str:
        return (
            f"Boundary limits along {self.left} and {self.right} differ by {self.difference:.3g}"
        )


@dataclass(frozen=True)
class QuadratureUnderResolved(WedgeError):
    residuals: Tuple[float, ...]

    def __str__(self) -> str:
        return f"Weak residual does not decrease under refinement: {list(self.residuals)}"


@dataclass(frozen=True)
class BallTooLarge(WedgeError):
    direction: Vector
    ball_radius: float
    reason: str

    def __str__(self) -> str:
        return (
            f"Chart ball of radius {self.ball_radius} along {self.direction} "
            f"escapes the wedge: {self.reason}"
        )


@dataclass(frozen=True)
class BoundaryMismatch(WedgeError):
    difference: float

    def __str__(self) -> str:
        return f"The two sides have different boundary values (difference {self.difference:.3g})"


@dataclass(frozen=True)
class FitUnderdetermined(WedgeError):
    samples: int
    unknowns: int

    def __str__(self) -> str:
        return f"Germ fit needs {self.unknowns} independent samples, has rank/samples {self.samples}"


@dataclass(frozen=True)
class OverlapDisagreement(WedgeError):
    left: Vector
    right: Vector
    difference: float

    def __str__(self) -> str:
        return f"Extensions from charts {self.left} and {self.right} differ by {self.difference:.3g}"


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                        Wedges and sampling                        #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def _positive_half(v: Sequence[float]) -> bool:
    first = next((x for x in v if x != 0), 0)
    return first > 0


@dataclass(frozen=True)
class WedgeSpec:
    """E + iC with E = prod [lo, hi], C = cones of half-angle `aperture` around the generators."""

    n: int
    edge: Tuple[Tuple[float, float], ...]
    cone_generators: Tuple[Tuple[float, ...], ...]
    radius: float
    aperture: float = 0.3
    chart_radius: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"Wedge dimension must be at least 1, not {self.n}")
        if len(self.edge) != self.n or any(not lo < hi for lo, hi in self.edge):
            raise ValueError(f"Edge must be {self.n} intervals with lo < hi, found {self.edge}")
        if len(self.cone_generators) == 0:
            raise ValueError("Cone needs at least one generator")
        for g in self.cone_generators:
            if len(g) != self.n or all(x == 0 for x in g):
                raise ValueError(f"Generator {g} must be a nonzero vector of length {self.n}")
        for g in self.cone_generators:
            if not any(np.allclose(np.negative(g), h, rtol=0, atol=1e-12) for h in self.cone_generators):
                raise ValueError(f"Cone must be symmetric: -{g} is not a generator")
        if not self.radius > 0:
            raise ValueError(f"Localization radius must be positive, not {self.radius}")
        if not 0 < self.aperture < math.pi / 2:
            raise ValueError(f"Aperture must lie in (0, pi/2), not {self.aperture}")
        if self.chart_radius is not None and not self.chart_radius > 0:
            raise ValueError(f"Chart radius must be positive, not {self.chart_radius}")

    def center(self) -> Vector:
        return tuple((lo + hi) / 2 for lo, hi in self.edge)

    def unit_generators(self) -> List[np.ndarray]:
        return [np.asarray(g, dtype=float) / np.linalg.norm(g) for g in self.cone_generators]

    def positive_generators(self) -> List[Vector]:
        """One representative of every pair ±Y, sorted."""
        return sorted(tuple(float(x) for x in g) for g in self.cone_generators if _positive_half(g))

    def in_cone(self, y: np.ndarray) -> np.ndarray:
        """Row-wise membership of (N, n) imaginary parts in the open cone."""
        y = np.atleast_2d(y)
        norms = np.linalg.norm(y, axis=1)
        inside = np.zeros(y.shape[0], dtype=bool)
        for u in self.unit_generators():
            with np.errstate(invalid="ignore", divide="ignore"):
                cos = (y @ u) / norms
            inside |= (norms > 0) & (cos > math.cos(self.aperture))
        return inside

    def in_edge(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        lo = np.array([a for a, _ in self.edge])
        hi = np.array([b for _, b in self.edge])
        return np.all((x > lo) & (x < hi), axis=1)

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=complex))
        im = points.imag
        return (
            self.in_edge(points.real)
            & self.in_cone(im)
            & (np.linalg.norm(im, axis=1) <= self.radius * (1 + 1e-12))
        )


@dataclass(frozen=True)
class SampledFunction:
    """A function on the wedge: a germ series in z1..zn (analytic) or a vectorized callable (numeric)."""

    name: str
    germ: Optional[Series] = None
    evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self) -> None:
        if (self.germ is None) == (self.evaluator is None):
            raise ValueError("Provide exactly one of a germ or an evaluator")

    @property
    def analytic(self) -> bool:
        return self.germ is not None

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=complex))
        if self.germ is not None:
            return as_numpy_function(self.germ)(points)
        assert self.evaluator is not None
        return np.asarray(self.evaluator(points), dtype=complex)

    @staticmethod
    def from_germ(h: Series, name: str = "germ") -> "SampledFunction":
        return SampledFunction(name=name, germ=h)


def _rational(points: np.ndarray) -> np.ndarray:
    return 1.0 / (2.0 - np.sum(points, axis=1))


def _exponential(points: np.ndarray) -> np.ndarray:
    return np.exp(np.sum(points, axis=1))


def _direction_dependent(points: np.ndarray) -> np.ndarray:
    return np.where(points[:, 0].imag > 0, 1.0 + 0j, 0.0 + 0j)


BUILTIN_SAMPLES: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "rational": _rational,
    "exp": _exponential,
    "direction-dependent": _direction_dependent,
}
"""Named numeric test functions: 1/(2 - sum z), exp(sum z), and 1 on Im z1 > 0 else 0."""


def builtin_sample(name: str) -> SampledFunction:
    if name not in BUILTIN_SAMPLES:
        raise ValueError(f"Unknown sample '{name}', choose from {sorted(BUILTIN_SAMPLES)}")
    return SampledFunction(name=name, evaluator=BUILTIN_SAMPLES[name])


def edge_grid(w: WedgeSpec, per_axis: int = 5) -> np.ndarray:
    """Cell midpoints of a `per_axis`^n grid on E; an odd count includes the centre of E."""
    axes = [lo + (hi - lo) * (np.arange(per_axis) + 0.5) / per_axis for lo, hi in w.edge]
    return np.array(list(product(*axes)), dtype=float).reshape(-1, w.n)


def sample_wedge(f: SampledFunction, w: WedgeSpec, points: np.ndarray) -> np.ndarray:
    """f at the given complex points, every one of which must lie in the localized wedge.

    :raises OutsideWedge Naming the first point outside.
    """
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    inside = w.contains(points)
    if not np.all(inside):
        bad = int(np.argmin(inside))
        raise OutsideWedge(bad, tuple(complex(x) for x in points[bad]))
    return f(points)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                          Boundary values                          #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


@dataclass(frozen=True)
class EpsSequence:
    """eps_l = eps0 * ratio^l for l = 0..levels-1."""

    eps0: float = 1e-2
    ratio: float = 0.5
    levels: int = 6

    def __post_init__(self) -> None:
        if not (self.eps0 > 0 and 0 < self.ratio < 1 and self.levels >= 3):
            raise ValueError(f"Invalid eps sequence {self}: need eps0 > 0, 0 < ratio < 1, levels >= 3")

    def values(self) -> np.ndarray:
        return self.eps0 * self.ratio ** np.arange(self.levels)


def richardson_limit(eps: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Extrapolates to eps = 0 with the quadratic through the last three levels.

    `values` has one row per eps level.
    """
    e = np.asarray(eps, dtype=float)[-3:]
    v = np.asarray(values)[-3:]
    weights = np.array(
        [
            np.prod([(0.0 - e[j]) / (e[i] - e[j]) for j in range(3) if j != i])
            for i in range(3)
        ]
    )
    return np.tensordot(weights, v, axes=1)


@dataclass(frozen=True)
class DirectionalLimit:
    direction: Vector
    eps: Tuple[float, ...]
    limit: Tuple[complex, ...]
    last_difference: float
    contraction: float


@dataclass(frozen=True)
class BoundaryData:
    """Edge-grid limits along every checked direction and whether they agree."""

    grid: Tuple[Vector, ...]
    limit: Tuple[complex, ...]
    per_direction: Tuple[DirectionalLimit, ...]
    max_disagreement: float
    direction_independent: bool


def _check_directions(w: WedgeSpec) -> List[np.ndarray]:
    """The generators plus every pairwise midpoint direction that still lies in C."""
    units = [np.asarray(g, dtype=float) for g in sorted(w.cone_generators)]
    out = [u / np.linalg.norm(u) for u in units]
    for a in range(len(units)):
        for b in range(a + 1, len(units)):
            mid = out[a] + out[b]
            if np.linalg.norm(mid) < 1e-12:
                continue
            mid = mid / np.linalg.norm(mid)
            if w.in_cone(mid[None, :])[0] and not any(np.allclose(mid, u) for u in out):
                out.append(mid)
    return out


def _directional_limit(
    f: SampledFunction, w: WedgeSpec, grid: np.ndarray, y: np.ndarray, eps: EpsSequence, tau_bv: float
) -> DirectionalLimit:
    levels = eps.values()
    rows = [sample_wedge(f, w, grid + 1j * e * y[None, :]) for e in levels]
    values = np.array(rows)
    direction = tuple(float(x) for x in y)
    if not np.all(np.isfinite(values)):
        raise LimitDiverged(direction, math.inf, math.inf)
    diffs = np.max(np.abs(np.diff(values, axis=0)), axis=1)
    last, previous = float(diffs[-1]), float(diffs[-2])
    if previous > 0:
        contraction = last / previous
    else:
        contraction = 0.0 if last == 0 else math.inf
    if contraction >= 1.0 and last > tau_bv:
        raise LimitDiverged(direction, contraction, last)
    limit = richardson_limit(levels, values)
    logger.debug(f"direction {direction}: last difference {last:.3g}, contraction {contraction:.3g}")
    return DirectionalLimit(
        direction=direction,
        eps=tuple(float(e) for e in levels),
        limit=tuple(complex(x) for x in limit),
        last_difference=last,
        contraction=contraction,
    )


def boundary_value(
    f: SampledFunction,
    w: WedgeSpec,
    directions: Optional[Sequence[Sequence[float]]] = None,
    eps: EpsSequence = EpsSequence(),
    tau_bv: float = 1e-8,
    per_axis: int = 5,
) -> BoundaryData:
    """lim f(x + i eps Y) on an edge grid for each direction Y, by Richardson extrapolation.

    Defaults to every generator and every in-cone midpoint of two generators.

    :raises LimitDiverged If the eps-differences stop contracting above `tau_bv`.
    :raises DirectionMismatch If two directions' limits differ by more than `tau_bv`.
    """
    grid = edge_grid(w, per_axis)
    if directions is None:
        checked = _check_directions(w)
    else:
        checked = [np.asarray(d, dtype=float) / np.linalg.norm(d) for d in directions]
    limits = [_directional_limit(f, w, grid, y, eps, tau_bv) for y in checked]

    worst, pair = 0.0, (0, 0)
    for a in range(len(limits)):
        for b in range(a + 1, len(limits)):
            gap = float(np.max(np.abs(np.subtract(limits[a].limit, limits[b].limit))))
            if gap > worst:
                worst, pair = gap, (a, b)
    if worst > tau_bv:
        raise DirectionMismatch(limits[pair[0]].direction, limits[pair[1]].direction, worst)
    return BoundaryData(
        grid=tuple(tuple(float(x) for x in p) for p in grid),
        limit=limits[0].limit,
        per_direction=tuple(limits),
        max_disagreement=worst,
        direction_independent=True,
    )


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                     Weak boundary-value identity                  #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


class BumpKind(Enum):
    smooth, polynomial = auto(), auto()


@dataclass(frozen=True)
class BumpSpec:
    """phi(x, y) = psi((x - center) / radius) * psi(y / radius), supported in a square on the real axis."""

    center: float = 0.0
    radius: float = 1.0
    kind: BumpKind = BumpKind.smooth


def _psi(u: np.ndarray, kind: BumpKind) -> Tuple[np.ndarray, np.ndarray]:
    """Profile and its derivative on [-1, 1]; zero outside."""
    inside = np.abs(u) < 1
    value = np.zeros_like(u)
    slope = np.zeros_like(u)
    ui = u[inside]
    if kind is BumpKind.smooth:
        gap = 1.0 - ui**2
        value[inside] = np.exp(-1.0 / gap)
        slope[inside] = value[inside] * (-2.0 * ui / gap**2)
    else:
        gap = 1.0 - ui**2
        value[inside] = gap**4
        slope[inside] = -8.0 * ui * gap**3
    return value, slope


def bump(spec: BumpSpec, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(phi, d/dzbar phi) at the given points, with d/dzbar = (d/dx + i d/dy) / 2."""
    px, dpx = _psi((x - spec.center) / spec.radius, spec.kind)
    py, dpy = _psi(y / spec.radius, spec.kind)
    phi = px * py
    dzbar = 0.5 * (dpx * py + 1j * px * dpy) / spec.radius
    return phi, dzbar


@dataclass(frozen=True)
class WeakResidual:
    """|<f~, -d/dzbar phi> - (i/2) int (f0+ - f0-) phi(x, 0) dx| at increasing quadrature orders."""

    orders: Tuple[int, ...]
    residuals: Tuple[float, ...]
    observed_orders: Tuple[Optional[float], ...]

    @property
    def residual(self) -> float:
        return self.residuals[-1]


def _weak_residual_at(
    fplus: Optional[Callable[[np.ndarray], np.ndarray]],
    fminus: Optional[Callable[[np.ndarray], np.ndarray]],
    f0_plus: Optional[Callable[[np.ndarray], np.ndarray]],
    f0_minus: Optional[Callable[[np.ndarray], np.ndarray]],
    spec: BumpSpec,
    order: int,
) -> float:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    r = spec.radius
    xs = spec.center + r * nodes
    wx = r * weights
    # y-halves split at the edge so each side is smooth
    ys_up = 0.5 * r * (nodes + 1.0)
    ys_down = -ys_up
    wy = 0.5 * r * weights

    pairing = 0j
    for side, ys in ((fplus, ys_up), (fminus, ys_down)):
        if side is None:
            continue
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        _, dzbar = bump(spec, gx, gy)
        values = side((gx + 1j * gy).ravel()).reshape(gx.shape)
        pairing += -np.einsum("i,j,ij->", wx, wy, values * dzbar)

    phi_edge, _ = bump(spec, xs, np.zeros_like(xs))
    jump = np.zeros_like(xs, dtype=complex)
    if f0_plus is not None:
        jump += f0_plus(xs)
    if f0_minus is not None:
        jump -= f0_minus(xs)
    edge = 0.5j * np.sum(wx * jump * phi_edge)
    return float(abs(pairing - edge))


def weak_cr_residual(
    fplus: Optional[Callable[[np.ndarray], np.ndarray]],
    fminus: Optional[Callable[[np.ndarray], np.ndarray]],
    f0_plus: Optional[Callable[[np.ndarray], np.ndarray]],
    f0_minus: Optional[Callable[[np.ndarray], np.ndarray]],
    spec: BumpSpec = BumpSpec(),
    order: int = 64,
    floor: float = 1e-12,
) -> WeakResidual:
    """The defect in d/dzbar f~ = (i/2)(f0+ - f0-) delta(y) tested against one bump.

    f~ is `fplus` on y > 0 and `fminus` on y < 0; a missing side is zero. The
    one-sided identity has only `fplus`/`f0_plus`; the minus-sign variant only
    `fminus`/`f0_minus`. Integrals use tensor Gauss-Legendre rules at orders
    order/4, order/2 and order.

    :raises QuadratureUnderResolved If the finest residual is above `floor` and not
                                    below the previous one.
    """
    orders = (max(order // 4, 2), max(order // 2, 3), order)
    residuals = tuple(
        _weak_residual_at(fplus, fminus, f0_plus, f0_minus, spec, q) for q in orders
    )
    observed: List[Optional[float]] = []
    for (q1, r1), (q2, r2) in zip(zip(orders, residuals), zip(orders[1:], residuals[1:])):
        if r1 > floor and r2 > 0:
            observed.append(math.log(r1 / r2) / math.log(q2 / q1))
        else:
            observed.append(None)
    if residuals[-1] > floor and residuals[-1] >= residuals[-2]:
        raise QuadratureUnderResolved(residuals)
    return WeakResidual(orders, residuals, tuple(observed))


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                           Blow-up charts                          #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def _to_fraction(x: float) -> Fraction:
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class WedgeChart:
    """Ambient point x0 + A (z, s + z t) for chart coordinates (z, s, t)."""

    direction: Vector
    center: Tuple[Fraction, ...]
    frame: Tuple[Tuple[Fraction, ...], ...]
    inverse: Tuple[Tuple[Fraction, ...], ...]
    ball_radius: float

    @property
    def n(self) -> int:
        return len(self.center)

    def germ_coordinates(self, z: np.ndarray, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.column_stack([z, np.asarray(s) + z[:, None] * np.asarray(t)])

    def to_ambient(self, zeta: np.ndarray) -> np.ndarray:
        a = np.array(self.frame, dtype=float)
        x0 = np.array(self.center, dtype=float)
        return x0[None, :] + np.asarray(zeta, dtype=complex) @ a.T


def _frame_for(y: Sequence[Fraction]) -> Tuple[List[List[Fraction]], List[List[Fraction]]]:
    """A = [Y, c_1..c_m]: Y completed by unnormalized Gram-Schmidt on the other unit vectors."""
    n = len(y)
    pivot = max(range(n), key=lambda i: abs(y[i]))
    vectors = [sympy.Matrix([sympy.Rational(q.numerator, q.denominator) for q in y])]
    vectors += [sympy.Matrix([1 if j == i else 0 for j in range(n)]) for i in range(n) if i != pivot]
    columns = sympy.GramSchmidt(vectors, orthonormal=False)
    a = sympy.Matrix.hstack(*columns)
    inv = a.inv()

    def rows(m: sympy.Matrix) -> List[List[Fraction]]:
        return [[Fraction(int(m[i, j].p), int(m[i, j].q)) for j in range(n)] for i in range(n)]

    return rows(a), rows(inv)


def _ball_problem(
    w: WedgeSpec, center: np.ndarray, a: np.ndarray, y: np.ndarray, rho: float
) -> Optional[str]:
    m = w.n - 1
    unit = y / np.linalg.norm(y)
    for corner in product((-rho, rho), repeat=1 + 2 * m):
        re_z, s, t = corner[0], np.array(corner[1 : 1 + m]), np.array(corner[1 + m :])
        real = center + a @ np.concatenate([[re_z], s + re_z * t])
        if not w.in_edge(real[None, :])[0]:
            return f"real part {real} leaves the edge"
        v = a @ np.concatenate([[1.0], t])
        if np.arccos(min(1.0, float(v @ unit) / float(np.linalg.norm(v)))) >= w.aperture:
            return f"imaginary direction {v} leaves the cone"
        if rho * np.linalg.norm(v) > w.radius * (1 + 1e-12):
            return f"imaginary part {rho * np.linalg.norm(v):.3g} exceeds radius {w.radius}"
    return None


def make_chart(w: WedgeSpec, generator: Sequence[float], ball_radius: Optional[float] = None) -> WedgeChart:
    """Chart along `generator` at the centre of E.

    With an explicit `ball_radius` (or the spec's `chart_radius`) the ball is checked
    as given; otherwise the wedge radius is halved until the ball fits.

    :raises BallTooLarge If the requested ball escapes the localized wedge.
    """
    y = [_to_fraction(x) for x in generator]
    if not _positive_half(y):
        y = [-q for q in y]
    frame, inverse = _frame_for(y)
    center = tuple(_to_fraction(c) for c in w.center())
    a = np.array(frame, dtype=float)
    x0 = np.array(center, dtype=float)
    yv = np.array(y, dtype=float)
    direction = tuple(float(q) for q in y)

    requested = ball_radius if ball_radius is not None else w.chart_radius
    if requested is not None:
        problem = _ball_problem(w, x0, a, yv, requested)
        if problem is not None:
            raise BallTooLarge(direction, requested, problem)
        rho = requested
    else:
        rho = w.radius
        for _ in range(40):
            problem = _ball_problem(w, x0, a, yv, rho)
            if problem is None:
                break
            rho /= 2
        else:
            raise BallTooLarge(direction, rho, "no admissible ball radius found")
    logger.debug(f"chart along {direction}: ball radius {rho}")
    return WedgeChart(
        direction=direction,
        center=center,
        frame=tuple(tuple(r) for r in frame),
        inverse=tuple(tuple(r) for r in inverse),
        ball_radius=rho,
    )


def germ_in_chart(h: Series, chart: WedgeChart) -> Series:
    """g(z, w) = h(x0 + A (z, w)) as a germ series, by exact affine substitution."""
    n = chart.n
    gv = germ_variables(n - 1)
    d = h.truncation
    rules: Dict[str, Series] = {}
    for i, name in enumerate(ambient_variables(n)):
        terms = [((0,) * n, coerce(chart.center[i], h.mode))]
        for j in range(n):
            unit = tuple(1 if k == j else 0 for k in range(n))
            terms.append((unit, coerce(chart.frame[i][j], h.mode)))
        rules[name] = Series.from_terms(gv, d, h.mode, terms)
    return substitute(h, rules, d)


def germ_to_ambient(g: Series, chart: WedgeChart, truncation: Optional[int] = None) -> Series:
    """h(z) = g(A^-1 (z - x0)), truncated to `truncation` (default: g's)."""
    n = chart.n
    av = ambient_variables(n)
    d = g.truncation
    rules: Dict[str, Series] = {}
    for j, name in enumerate(germ_variables(n - 1)):
        terms = []
        shift = sum((chart.inverse[j][i] * chart.center[i] for i in range(n)), Fraction(0))
        terms.append(((0,) * n, coerce(-shift, g.mode)))
        for i in range(n):
            unit = tuple(1 if k == i else 0 for k in range(n))
            terms.append((unit, coerce(chart.inverse[j][i], g.mode)))
        rules[name] = Series.from_terms(av, d, g.mode, terms)
    h = substitute(g, rules, d)
    return h if truncation is None else truncate(h, min(truncation, h.truncation))


@dataclass(frozen=True)
class ChartData:
    """Chart-side data: f+ on {Im z > 0} and f- on {Im z < 0}.

    Analytic data are chart series; numeric data are callables on chart points.
    """

    chart: WedgeChart
    source_truncation: int
    plus: Optional[Series] = None
    minus: Optional[Series] = None
    plus_fn: Optional[ChartFunction] = None
    minus_fn: Optional[ChartFunction] = None

    @property
    def analytic(self) -> bool:
        return self.plus is not None


def lift_to_blowup(
    f: SampledFunction, w: WedgeSpec, chart: WedgeChart, truncation: int = 8
) -> ChartData:
    """Composes f with the blow-down of `chart`.

    Germs become chart series (the pullback of the chart germ, truncated at
    max(truncation, 2 deg, source truncation)); sampled functions become
    callables that evaluate f at the blown-down points, which must lie in W.

    :raises BallTooLarge If the chart ball does not fit the wedge.
    """
    _ = make_chart(w, chart.direction, chart.ball_radius)
    if f.germ is not None:
        g = germ_in_chart(f.germ, chart)
        d = max(truncation, 2 * max(g.degree(), 0), g.truncation)
        lifted = pullback(g, d)
        return ChartData(chart=chart, source_truncation=f.germ.truncation, plus=lifted, minus=lifted)

    def side(sign: float) -> ChartFunction:
        def values(z: np.ndarray, s: np.ndarray, t: np.ndarray) -> np.ndarray:
            z = np.asarray(z, dtype=complex)
            if np.any(sign * z.imag <= 0):
                raise ValueError("Chart samples must lie strictly on their own side of the edge")
            return sample_wedge(f, w, chart.to_ambient(chart.germ_coordinates(z, s, t)))

        return values

    return ChartData(chart=chart, source_truncation=0, plus_fn=side(1.0), minus_fn=side(-1.0))


@dataclass(frozen=True)
class Extension:
    """Ambient germ from one chart, with the fit's held-out error in numeric mode."""

    direction: Vector
    germ: Series
    chart_germ: Series
    ball_radius: float
    validation_error: Optional[float] = None


def _chart_samples(
    rng: np.random.Generator, rho: float, m: int, count: int, im_range: Tuple[float, float]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    re = rng.uniform(-rho, rho, size=count)
    im = rng.uniform(im_range[0] * rho, im_range[1] * rho, size=count)
    im *= np.where(rng.integers(0, 2, size=count) == 1, 1.0, -1.0)
    s = rng.uniform(-rho, rho, size=(count, m))
    t = rng.uniform(-rho, rho, size=(count, m))
    return re + 1j * im, s, t


def _chart_values(data: ChartData, z: np.ndarray, s: np.ndarray, t: np.ndarray) -> np.ndarray:
    assert data.plus_fn is not None and data.minus_fn is not None
    up = z.imag > 0
    out = np.empty(z.shape[0], dtype=complex)
    if np.any(up):
        out[up] = data.plus_fn(z[up], s[up], t[up])
    if np.any(~up):
        out[~up] = data.minus_fn(z[~up], s[~up], t[~up])
    return out


def _numeric_boundary_gap(data: ChartData, eps: EpsSequence) -> float:
    assert data.plus_fn is not None and data.minus_fn is not None
    m = data.chart.n - 1
    x = np.linspace(-0.5, 0.5, 5) * data.chart.ball_radius
    zeros = np.zeros((x.size, m))
    levels = eps.values() * data.chart.ball_radius
    up = np.array([data.plus_fn(x + 1j * e, zeros, zeros) for e in levels])
    down = np.array([data.minus_fn(x - 1j * e, zeros, zeros) for e in levels])
    return float(np.max(np.abs(richardson_limit(levels, up) - richardson_limit(levels, down))))


def _fit_germ(
    data: ChartData, degree: int, rng: np.random.Generator, oversampling: int
) -> Tuple[Series, float]:
    chart = data.chart
    m = chart.n - 1
    rho = chart.ball_radius
    monomials = list(iter_monomials(chart.n, degree))
    count = oversampling * len(monomials)
    if count < len(monomials):
        raise FitUnderdetermined(count, len(monomials))
    z, s, t = _chart_samples(rng, rho, m, count, (0.05, 1.0))
    values = _chart_values(data, z, s, t)
    zeta = chart.germ_coordinates(z, s, t)
    sigma = np.max(np.abs(zeta), axis=0)
    sigma[sigma == 0] = 1.0
    exps = np.array(monomials, dtype=int)
    design = np.prod((zeta / sigma)[:, None, :] ** exps[None, :, :], axis=2)
    solution, _, rank, _ = np.linalg.lstsq(design, values, rcond=None)
    if rank < len(monomials):
        raise FitUnderdetermined(int(rank), len(monomials))
    coefficients = solution / np.prod(sigma[None, :] ** exps, axis=1)
    g = Series.from_terms(
        germ_variables(m),
        degree,
        Mode.float,
        [(tuple(int(e) for e in alpha), complex(c)) for alpha, c in zip(monomials, coefficients)],
    )

    # held-out points near the edge
    hz, hs, ht = _chart_samples(rng, rho, m, 100, (1e-3, 0.1))
    expected = _chart_values(data, hz, hs, ht)
    fitted = as_numpy_function(g)(chart.germ_coordinates(hz, hs, ht))
    return g, float(np.max(np.abs(fitted - expected)))


@dataclass(frozen=True)
class WedgeSettings:
    truncation: int = 8
    tau_bv: float = 1e-8
    tau_glue: float = 1e-8
    quadrature_order: int = 64
    eps: EpsSequence = field(default_factory=EpsSequence)
    fit_degree: int = 12
    fit_oversampling: int = 4
    edge_points_per_axis: int = 5
    seed: int = 0


def edge_extend(
    data: ChartData,
    f0: Optional[BoundaryData] = None,
    settings: WedgeSettings = WedgeSettings(),
    rng: Optional[np.random.Generator] = None,
) -> Extension:
    """The holomorphic germ on the chart ball that restricts to f+ and f-.

    Analytic data must be one and the same chart series on both sides; it is
    then reconstructed exactly. Numeric data are fitted by a germ polynomial of
    degree `settings.fit_degree` on both half balls and validated on 100
    held-out points near the edge.

    :raises BoundaryMismatch If the sides disagree on the edge (or `f0` is not direction independent).
    :raises NotASolution If the analytic chart series is not a solution.
    :raises FitUnderdetermined If the samples cannot determine the requested degree.
    """
    if f0 is not None and not f0.direction_independent:
        raise BoundaryMismatch(f0.max_disagreement)
    chart = data.chart
    if data.analytic:
        assert data.plus is not None and data.minus is not None
        if data.plus != data.minus:
            raise BoundaryMismatch(float(coefficient_norm(sub(data.plus, data.minus))))
        g = hypocomplex_reconstruct(data.plus, settings.tau_bv)
        h = germ_to_ambient(g, chart, data.source_truncation)
        return Extension(chart.direction, h, g, chart.ball_radius)

    gap = _numeric_boundary_gap(data, settings.eps)
    if gap > settings.tau_bv:
        raise BoundaryMismatch(gap)
    generator = rng if rng is not None else np.random.default_rng(settings.seed)
    g, error = _fit_germ(data, settings.fit_degree, generator, settings.fit_oversampling)
    logger.info(f"chart {chart.direction}: degree {settings.fit_degree} fit, held-out error {error:.3g}")
    h = germ_to_ambient(g, chart, settings.fit_degree)
    return Extension(chart.direction, h, g, chart.ball_radius, error)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                             End to end                            #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


@dataclass(frozen=True)
class ExtensionReport:
    directions: Tuple[Vector, ...]
    boundary_status: str
    boundary_max_disagreement: float
    ball_radii: Tuple[float, ...]
    overlap_max_disagreement: float
    weak_cr_residuals: Tuple[float, ...]
    fit_errors: Tuple[Optional[float], ...]
    extensions: Tuple[Extension, ...]

    @property
    def germ(self) -> Series:
        return self.extensions[0].germ


SliceFunction = Callable[[np.ndarray], np.ndarray]


def _slice_functions(
    data: ChartData, eps: EpsSequence
) -> Tuple[SliceFunction, SliceFunction, SliceFunction, SliceFunction]:
    """f+, f- on the chart slice s = t = 0 as functions of z, then their boundary values on the real axis."""
    m = data.chart.n - 1
    if data.analytic:
        assert data.plus is not None and data.minus is not None

        def lift(fn: SliceFunction) -> SliceFunction:
            def on_slice(z: np.ndarray) -> np.ndarray:
                z = np.asarray(z, dtype=complex)
                cols = [z, np.conj(z)] + [np.zeros_like(z)] * (2 * m)
                return fn(np.column_stack(cols))

            return on_slice

        plus = lift(as_numpy_function(data.plus))
        minus = lift(as_numpy_function(data.minus))
        return plus, minus, plus, minus

    assert data.plus_fn is not None and data.minus_fn is not None
    levels = eps.values() * data.chart.ball_radius

    def side(fn: ChartFunction, sign: float) -> Tuple[SliceFunction, SliceFunction]:
        def on_slice(z: np.ndarray) -> np.ndarray:
            z = np.asarray(z, dtype=complex)
            zeros = np.zeros((z.size, m))
            return fn(z, zeros, zeros)

        def on_edge(x: np.ndarray) -> np.ndarray:
            rows = [on_slice(np.asarray(x, dtype=float) + sign * 1j * e) for e in levels]
            return richardson_limit(levels, np.array(rows))

        return on_slice, on_edge

    plus, plus_edge = side(data.plus_fn, 1.0)
    minus, minus_edge = side(data.minus_fn, -1.0)
    return plus, minus, plus_edge, minus_edge


def _overlap_points(w: WedgeSpec, radii: Sequence[float], rng: np.random.Generator) -> np.ndarray:
    rho = min(radii) / 4
    x0 = np.array(w.center(), dtype=float)
    re = rng.uniform(-rho, rho, size=(50, w.n))
    im = rng.uniform(-rho / 20, rho / 20, size=(50, w.n))
    return x0[None, :] + re + 1j * im


def full_eowt_demo(
    w: WedgeSpec, f: SampledFunction, settings: WedgeSettings = WedgeSettings()
) -> ExtensionReport:
    """Boundary values, one chart per generator pair, extension per chart, agreement on overlaps.

    Charts are processed in sorted direction order, so the returned germ does not
    depend on how the generators are listed.

    :raises DirectionMismatch If boundary values depend on the direction of approach.
    :raises OverlapDisagreement If two charts' germs differ by more than `tau_glue` near x0.
    """
    with timer(logger=logger, name="boundary_value"):
        f0 = boundary_value(
            f, w, eps=settings.eps, tau_bv=settings.tau_bv, per_axis=settings.edge_points_per_axis
        )
    extensions: List[Extension] = []
    residuals: List[float] = []
    with timer(logger=logger, name="extension"):
        for index, generator in enumerate(w.positive_generators()):
            chart = make_chart(w, generator)
            data = lift_to_blowup(f, w, chart, settings.truncation)
            rng = np.random.default_rng([settings.seed, index])
            extension = edge_extend(data, f0, settings, rng)
            extensions.append(extension)
            plus, minus, plus_edge, minus_edge = _slice_functions(data, settings.eps)
            weak = weak_cr_residual(
                plus,
                minus,
                plus_edge,
                minus_edge,
                BumpSpec(center=0.0, radius=chart.ball_radius / 2),
                settings.quadrature_order,
                floor=settings.tau_bv,
            )
            residuals.append(weak.residual)

    worst = 0.0
    radii = [e.ball_radius for e in extensions]
    points = _overlap_points(w, radii, np.random.default_rng(settings.seed))
    base = extensions[0]
    for other in extensions[1:]:
        if f.analytic and base.germ.mode is Mode.exact and other.germ == base.germ:
            continue
        gap = float(
            np.max(np.abs(as_numpy_function(base.germ)(points) - as_numpy_function(other.germ)(points)))
        )
        if gap > settings.tau_glue:
            raise OverlapDisagreement(base.direction, other.direction, gap)
        worst = max(worst, gap)

    return ExtensionReport(
        directions=tuple(e.direction for e in extensions),
        boundary_status="direction-independent",
        boundary_max_disagreement=f0.max_disagreement,
        ball_radii=tuple(e.ball_radius for e in extensions),
        overlap_max_disagreement=worst,
        weak_cr_residuals=tuple(residuals),
        fit_errors=tuple(e.validation_error for e in extensions),
        extensions=tuple(extensions),
    )

