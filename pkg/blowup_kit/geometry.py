"""Charts of the real blow-up of R^n in C^n and its involutive structure.

A chart for direction `d` has coordinates (z, s, t) with z complex and
s, t real of length m = n - 1. The blow-down puts z in slot d and
s_j + z*t_j in the remaining slots, in order. The exceptional hypersurface
is {Im z = 0} in every chart.

The structure bundle is spanned by the frame

    L0 = d/dzbar,    Lj = d/dt_j - z d/ds_j    (j = 1..m)

Frame fields are kept as coefficient series per coordinate slot, so
commutators are computed symbolically.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from blowup_kit.loggers import make_standard_logger
from blowup_kit.series import (
    Coefficient,
    ExactComplex,
    Mode,
    ModeMismatch,
    Series,
    VariableMismatch,
    add,
    chart_dimension,
    chart_variables,
    coefficient_magnitude,
    derive,
    mul,
    scale,
    truncate,
)

__all__: Sequence[str] = (
    "GeometryError",
    "OutsideChart",
    "AtInfinity",
    "RealLine",
    "Real",
    "Chart",
    "ChartPoint",
    "VectorField",
    "CommutatorResidual",
    "FlagPoint",
    "FlagReport",
    "blow_down",
    "chart_transition",
    "frame",
    "frame_for",
    "apply_field",
    "commutator",
    "check_involutivity",
    "rank_V_cap_Vbar",
    "flag_lift",
    "mu_projection",
    "line_in_plane",
    "plane_from_line",
    "same_plane",
    "random_chart_point",
    "flag_correspondence_check",
)

logger = make_standard_logger(__name__)

Real = Union[Fraction, float]


class GeometryError(Exception):
    """Base for failures of chart and flag computations."""


@dataclass(frozen=True)
class OutsideChart(GeometryError):
    source: int
    target: int

    def __str__(self) -> str:
        return (
            f"Point is outside the domain of chart {self.target}: its line has no "
            f"component along direction {self.target} (coming from chart {self.source})"
        )


@dataclass(frozen=True)
class AtInfinity(GeometryError):
    generator: Tuple[Coefficient, ...]

    def __str__(self) -> str:
        return f"Line generator {self.generator} has a zero first homogeneous coordinate"


@dataclass(frozen=True)
class RealLine(GeometryError):
    generator: Tuple[Coefficient, ...]

    def __str__(self) -> str:
        return f"Line generated by {self.generator} is real: its 2-plane is not unique"


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                          Charts and points                        #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


@dataclass(frozen=True)
class Chart:
    n: int
    direction: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"Ambient dimension must be at least 1, not {self.n}")
        if not 1 <= self.direction <= self.n:
            raise ValueError(f"Direction {self.direction} is not in 1..{self.n}")

    @property
    def m(self) -> int:
        return self.n - 1


@dataclass(frozen=True)
class ChartPoint:
    """(z, s, t): exact points use `ExactComplex` and `Fraction`, float points `complex` and `float`."""

    z: Coefficient
    s: Tuple[Real, ...]
    t: Tuple[Real, ...]

    def __post_init__(self) -> None:
        if len(self.s) != len(self.t):
            raise ValueError(f"s and t must have equal length: {len(self.s)} != {len(self.t)}")
        exact = isinstance(self.z, ExactComplex)
        for x in self.s + self.t:
            if exact and not isinstance(x, (int, Fraction)):
                raise ModeMismatch("exact", type(x).__name__)
            if not exact and isinstance(x, Fraction):
                raise ModeMismatch("float", "exact")
            if not exact and not np.isfinite(x):
                raise ValueError(f"Chart coordinates must be finite, found {x}")
        if not exact and not np.isfinite(self.z):
            raise ValueError(f"Chart coordinates must be finite, found {self.z}")

    @property
    def mode(self) -> Mode:
        return Mode.exact if isinstance(self.z, ExactComplex) else Mode.float

    @property
    def m(self) -> int:
        return len(self.s)

    def on_sigma(self) -> bool:
        return _imag(self.z) == 0


def _real(c: Coefficient) -> Real:
    return c.re if isinstance(c, ExactComplex) else c.real


def _imag(c: Coefficient) -> Real:
    return c.im if isinstance(c, ExactComplex) else c.imag


def _lift(x: Real, mode: Mode) -> Coefficient:
    return ExactComplex(x) if mode is Mode.exact else complex(x)


def blow_down(chart: Chart, p: ChartPoint) -> Tuple[Coefficient, ...]:
    """(z, s + z t) with z placed in slot `chart.direction` and s + z t filling the others in order."""
    if p.m != chart.m:
        raise ValueError(f"Point has {p.m} (s, t) pairs but chart has {chart.m}")
    rest = [_lift(s, p.mode) + p.z * t for s, t in zip(p.s, p.t)]
    return tuple(rest[: chart.direction - 1]) + (p.z,) + tuple(rest[chart.direction - 1 :])


def chart_transition(source: Chart, target: Chart, p: ChartPoint) -> ChartPoint:
    """Re-expresses `p` in the `target` chart so that both blow down to the same point.

    The real direction of the point's line is v with v_source = 1 and the t's
    elsewhere. The target chart needs v_target != 0; then t' = v / v_target,
    z' is the blown-down coordinate in the target slot and s'_j = Re w_j - Re z' t'_j.
    The formula is the same on and off the exceptional hypersurface.

    :raises OutsideChart If the line has no component along the target direction.
    """
    if source.n != target.n:
        raise ValueError(f"Charts live in different dimensions: {source.n} vs. {target.n}")
    if source == target:
        return p
    w = blow_down(source, p)
    v: List[Real] = list(p.t[: source.direction - 1]) + [1] + list(p.t[source.direction - 1 :])
    if p.mode is Mode.exact:
        v = [Fraction(x) for x in v]
    pivot = v[target.direction - 1]
    if pivot == 0:
        raise OutsideChart(source.direction, target.direction)
    others = [j for j in range(target.n) if j != target.direction - 1]
    z_new = w[target.direction - 1]
    t_new = tuple(v[j] / pivot for j in others)
    s_new = tuple(_real(w[j]) - _real(z_new) * tj for j, tj in zip(others, t_new))
    return ChartPoint(z_new, s_new, t_new)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                       Frame and involutivity                      #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


@dataclass(frozen=True)
class VectorField:
    """sum_k coefficients[k] * d/d(k) over the chart variables.

    Coefficient series are polynomials: they are re-truncated to the truncation of
    whatever series the field is applied to.
    """

    name: str
    variables: Tuple[str, ...]
    coefficients: Mapping[str, Series]

    def coefficient(self, var: str, like: Series) -> Series:
        c = self.coefficients.get(var)
        if c is None:
            return Series.zero(like.variables, like.truncation, like.mode)
        if c.mode is not like.mode:
            raise ModeMismatch(like.mode.name, c.mode.name)
        if c.truncation >= like.truncation:
            return truncate(c, like.truncation)
        return Series(c.variables, like.truncation, c.mode, c.terms)


def frame(m: int, truncation: int, mode: Mode) -> List[VectorField]:
    """[L0, L1, ..., Lm] on the chart variables of an (m+1)-dimensional blow-up."""
    cv = chart_variables(m)
    one = Series.constant(1, cv, truncation, mode)
    fields = [VectorField("L0", cv, {"zbar": one})]
    minus_z = scale(Series.variable("z", cv, truncation, mode), -1)
    for j in range(1, m + 1):
        fields.append(VectorField(f"L{j}", cv, {f"t{j}": one, f"s{j}": minus_z}))
    return fields


def frame_for(f: Series) -> List[VectorField]:
    """The frame laid out on `f`'s chart variables, truncation and mode."""
    return frame(chart_dimension(f), f.truncation, f.mode)


def apply_field(field: VectorField, f: Series) -> Series:
    """X f = sum_k X^k * df/dx_k at `f`'s truncation.

    :raises VariableMismatch If `f` is not a series in the field's variables.
    """
    if f.variables != field.variables:
        raise VariableMismatch(field.variables, f.variables)
    result = Series.zero(f.variables, f.truncation, f.mode)
    for var in field.variables:
        if var not in field.coefficients:
            continue
        result = add(result, mul(field.coefficient(var, f), derive(f, var)))
    return result


def commutator(x: VectorField, y: VectorField, truncation: int, mode: Mode) -> VectorField:
    """[X, Y] with coefficient X(Y^k) - Y(X^k) on every slot k."""
    if x.variables != y.variables:
        raise VariableMismatch(x.variables, y.variables)
    like = Series.zero(x.variables, truncation, mode)
    coefficients: Dict[str, Series] = {}
    for var in x.variables:
        yk = y.coefficient(var, like)
        xk = x.coefficient(var, like)
        c = add(apply_field(x, yk), scale(apply_field(y, xk), -1))
        if not c.is_zero():
            coefficients[var] = c
    return VectorField(f"[{x.name},{y.name}]", x.variables, coefficients)


@dataclass(frozen=True)
class CommutatorResidual:
    """[left, right] applied to every coordinate function; the structure is involutive iff all vanish."""

    left: str
    right: str
    residuals: Mapping[str, Series]

    def is_zero(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())


def check_involutivity(
    n: int, truncation: int = 2, mode: Mode = Mode.exact
) -> List[CommutatorResidual]:
    """Commutators of all frame pairs, each applied to every chart coordinate series.

    For n = 1 there is a single field and the list is empty.
    """
    if n < 1:
        raise ValueError(f"Ambient dimension must be at least 1, not {n}")
    fields = frame(n - 1, truncation, mode)
    if len(fields) < 2:
        return []
    cv = chart_variables(n - 1)
    coordinates = {v: Series.variable(v, cv, truncation, mode) for v in cv}
    out: List[CommutatorResidual] = []
    for a in range(len(fields)):
        for b in range(a + 1, len(fields)):
            bracket = commutator(fields[a], fields[b], truncation, mode)
            residuals = {v: apply_field(bracket, x) for v, x in coordinates.items()}
            out.append(CommutatorResidual(fields[a].name, fields[b].name, residuals))
            logger.debug(f"[{fields[a].name}, {fields[b].name}] vanishes: {out[-1].is_zero()}")
    return out


def _frame_rows(p: ChartPoint, conjugate: bool) -> List[List[Coefficient]]:
    """Coordinate vectors in the basis (d/dz, d/dzbar, d/ds_1.., d/dt_1..) of the frame at `p`.

    Conjugation swaps the d/dz and d/dzbar slots and conjugates every entry;
    d/ds and d/dt are real.
    """
    m = p.m
    zero, one = _lift(0, p.mode), _lift(1, p.mode)
    z = p.z.conjugate() if conjugate else p.z
    rows: List[List[Coefficient]] = []
    l0 = [zero] * (2 + 2 * m)
    l0[0 if conjugate else 1] = one
    rows.append(l0)
    for j in range(m):
        row = [zero] * (2 + 2 * m)
        row[2 + j] = -z
        row[2 + m + j] = one
        rows.append(row)
    return rows


def _exact_rank(rows: List[List[Coefficient]]) -> int:
    if not rows:
        return 0
    matrix = sympy.Matrix(
        [
            [
                sympy.Rational(c.re.numerator, c.re.denominator)
                + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)
                for c in row
                if isinstance(c, ExactComplex)
            ]
            for row in rows
        ]
    )
    return int(DomainMatrix.from_Matrix(matrix).convert_to(QQ_I).rank())


def _float_rank(rows: List[List[Coefficient]], threshold: float) -> int:
    if not rows:
        return 0
    matrix = np.array(rows, dtype=complex)
    sv = np.linalg.svd(matrix, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > threshold * sv[0]))


def _rank(rows: List[List[Coefficient]], mode: Mode, threshold: float) -> int:
    return _exact_rank(rows) if mode is Mode.exact else _float_rank(rows, threshold)


def rank_V_cap_Vbar(p: ChartPoint, n: Optional[int] = None, rank_threshold: float = 1e-10) -> int:
    """dim(V ∩ conj(V)) at `p`, as rank(A) + rank(B) - rank([A; B]).

    Exact points use exact linear algebra over the Gaussian rationals; float points
    use singular values with a threshold relative to the largest one.
    """
    if n is not None and n != p.m + 1:
        raise ValueError(f"Point has {p.m} (s, t) pairs, which does not fit n = {n}")
    a = _frame_rows(p, conjugate=False)
    b = _frame_rows(p, conjugate=True)
    return (
        _rank(a, p.mode, rank_threshold)
        + _rank(b, p.mode, rank_threshold)
        - _rank(a + b, p.mode, rank_threshold)
    )


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                        Flag correspondence                        #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


@dataclass(frozen=True)
class FlagPoint:
    """A complex line L in C^(n+1) inside the complexification of a real 2-plane P."""

    line: Tuple[Coefficient, ...]
    plane: Tuple[Tuple[Real, ...], Tuple[Real, ...]]

    @property
    def mode(self) -> Mode:
        return Mode.exact if isinstance(self.line[0], ExactComplex) else Mode.float


def flag_lift(p: ChartPoint, n: Optional[int] = None) -> FlagPoint:
    """L = span_C{(1, z, s + z t)} and P = span_R{(1, 0, s), (0, 1, t)}."""
    if n is not None and n != p.m + 1:
        raise ValueError(f"Point has {p.m} (s, t) pairs, which does not fit n = {n}")
    one = _lift(1, p.mode)
    line = (one, p.z) + tuple(_lift(s, p.mode) + p.z * t for s, t in zip(p.s, p.t))
    unit: Real = Fraction(1) if p.mode is Mode.exact else 1.0
    nil: Real = Fraction(0) if p.mode is Mode.exact else 0.0
    plane = ((unit, nil) + tuple(p.s), (nil, unit) + tuple(p.t))
    return FlagPoint(line, plane)


def mu_projection(fp: FlagPoint) -> Tuple[Coefficient, ...]:
    """Dehomogenizes the line's generator by its first coordinate.

    :raises AtInfinity If the first homogeneous coordinate is zero.
    """
    head = fp.line[0]
    if (head.is_zero() if isinstance(head, ExactComplex) else head == 0):
        raise AtInfinity(fp.line)
    return tuple(c / head for c in fp.line[1:])


def _real_rows(vectors: Sequence[Sequence[Real]], mode: Mode) -> List[List[Coefficient]]:
    return [[_lift(x, mode) for x in v] for v in vectors]


def line_in_plane(fp: FlagPoint, rank_threshold: float = 1e-10) -> bool:
    """Whether Re and Im of the line's generator both lie in span_R(P), i.e. L is inside P + iP."""
    xi = [_real(c) for c in fp.line]
    eta = [_imag(c) for c in fp.line]
    plane = list(fp.plane)
    base = _rank(_real_rows(plane, fp.mode), fp.mode, rank_threshold)
    full = _rank(_real_rows(plane + [xi, eta], fp.mode), fp.mode, rank_threshold)
    return base == 2 and full == 2


def plane_from_line(line: Sequence[Coefficient]) -> Tuple[Tuple[Real, ...], Tuple[Real, ...]]:
    """P = span{xi, eta} for L = span{xi + i eta}; the only 2-plane whose complexification holds L.

    :raises RealLine If xi and eta are dependent (L is a real line and P is not unique).
    """
    mode = Mode.exact if isinstance(line[0], ExactComplex) else Mode.float
    xi = tuple(_real(c) for c in line)
    eta = tuple(_imag(c) for c in line)
    if _rank(_real_rows([xi, eta], mode), mode, 1e-10) < 2:
        raise RealLine(tuple(line))
    return xi, eta


def same_plane(
    p: Sequence[Sequence[Real]], q: Sequence[Sequence[Real]], rank_threshold: float = 1e-10
) -> bool:
    mode = Mode.exact if all(isinstance(x, (int, Fraction)) for v in p for x in v) else Mode.float
    rp = _rank(_real_rows(p, mode), mode, rank_threshold)
    rq = _rank(_real_rows(q, mode), mode, rank_threshold)
    joint = _rank(_real_rows(list(p) + list(q), mode), mode, rank_threshold)
    return rp == 2 and rq == 2 and joint == 2


def _random_rational(rng: np.random.Generator, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 10)))
        if q != 0 or not nonzero:
            return q


def random_chart_point(
    rng: np.random.Generator, m: int, mode: Mode, on_sigma: bool = False
) -> ChartPoint:
    """A seeded sample point; `on_sigma` forces Im z = 0, otherwise Im z != 0."""
    if mode is Mode.exact:
        z = ExactComplex(_random_rational(rng), 0 if on_sigma else _random_rational(rng, nonzero=True))
        s = tuple(_random_rational(rng) for _ in range(m))
        t = tuple(_random_rational(rng) for _ in range(m))
        return ChartPoint(z, s, t)
    im = 0.0
    if not on_sigma:
        im = float(rng.uniform(0.1, 1.0)) * (1 if rng.integers(0, 2) else -1)
    return ChartPoint(
        complex(float(rng.uniform(-1, 1)), im),
        tuple(float(x) for x in rng.uniform(-1, 1, size=m)),
        tuple(float(x) for x in rng.uniform(-1, 1, size=m)),
    )


@dataclass(frozen=True)
class FlagReport:
    n: int
    samples: int
    max_discrepancy: Real
    lines_in_planes: bool
    planes_unique: bool


def flag_correspondence_check(
    n: int, samples: int, rng: np.random.Generator, mode: Mode = Mode.exact
) -> FlagReport:
    """Checks mu(flag_lift(p)) == blow_down(p) and L inside P + iP at random points.

    Points alternate between the exceptional hypersurface and its complement; off it,
    the plane rebuilt from the line must coincide with the lifted plane.
    """
    if n < 1 or samples < 1:
        raise ValueError(f"Need n >= 1 and samples >= 1, found n={n}, samples={samples}")
    chart = Chart(n, 1)
    worst: Real = Fraction(0) if mode is Mode.exact else 0.0
    inside = True
    unique = True
    for i in range(samples):
        p = random_chart_point(rng, n - 1, mode, on_sigma=(i % 2 == 1))
        fp = flag_lift(p)
        projected = mu_projection(fp)
        expected = blow_down(chart, p)
        for a, b in zip(projected, expected):
            worst = max(worst, coefficient_magnitude(a - b))
        inside = inside and line_in_plane(fp)
        if not p.on_sigma():
            unique = unique and same_plane(plane_from_line(fp.line), fp.plane)
    logger.info(f"flag check n={n}: {samples} samples, max discrepancy {worst}")
    return FlagReport(n, samples, worst, inside, unique)
