"""Solutions of the blow-up structure and their reconstruction as holomorphic germs.

A chart series f(z, zbar, s, t) with no zbar dependence is expanded as
f = sum_k a_k(s, t) z^k. It solves the structure iff

    d/dt_j a_0 = 0   and   d/dt_j a_k = d/ds_j a_(k-1)   for every j, k >= 1,

and then every layer is determined by b_k := a_k(s, 0):

    a_k = sum_{|α| <= k} t^α d_s^α b_(k-|α|) / α!.

Writing b_k = sum_α c_{k,α} s^α / α!, the germ h(z, w) = sum c_{k,α} z^k w^α / α!
pulls back to f under w = s + z t. The inhomogeneous system
d/dzbar f = 0, L_j f = v_j(s) is solved with all b_k fixed to zero.

All consistency checks compare only on degrees where both sides are fully
determined by the truncated input: degree <= D - k - 1 for layer k.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from blowup_kit.geometry import apply_field, frame_for
from blowup_kit.loggers import make_standard_logger
from blowup_kit.series import (
    Coefficient,
    ExactComplex,
    Mode,
    MultiIndex,
    Series,
    TruncationTooSmall,
    VariableMismatch,
    blowdown_rules,
    chart_dimension,
    chart_variables,
    coefficient_norm,
    derive,
    embed,
    extract_layer,
    germ_dimension,
    germ_variables,
    iter_monomials,
    multi_factorial,
    restrict_to_zero,
    s_variables,
    sub,
    substitute,
    t_variables,
    truncate,
)

__all__: Sequence[str] = (
    "EngineError",
    "NotASolution",
    "ZbarDependence",
    "UnsupportedInhomogeneity",
    "NotClosed",
    "NotPureS",
    "EmptySeries",
    "Norm",
    "SolutionReport",
    "LayerDecomposition",
    "BSequence",
    "OneForm",
    "CompatibilityReport",
    "Certificate",
    "ObstructionReport",
    "pullback",
    "verify_solution",
    "decompose_layers",
    "t_degree",
    "reconstruct_b",
    "poly_identity_residual",
    "assemble_germ",
    "germ_coefficients",
    "hypocomplex_reconstruct",
    "check_compatibility",
    "inhomogeneous_solve",
    "recover_inhomogeneity",
    "analyticity_certificate",
    "germ_growth_certificate",
    "obstruction_report",
)

logger = make_standard_logger(__name__)

Norm = Union[Fraction, float]


class EngineError(Exception):
    """Base for failures of the solution engine."""


@dataclass(frozen=True)
class NotASolution(EngineError):
    layer: int
    residual: Norm

    def __str__(self) -> str:
        return f"Layer recursion fails at layer {self.layer} with residual {self.residual}"


@dataclass(frozen=True)
class ZbarDependence(EngineError):
    degree: int

    def __str__(self) -> str:
        return f"Series depends on zbar (zbar-degree {self.degree})"


@dataclass(frozen=True)
class UnsupportedInhomogeneity(EngineError):
    def __str__(self) -> str:
        return "Only inhomogeneities with a vanishing d/dzbar component are supported"


@dataclass(frozen=True)
class NotClosed(EngineError):
    residuals: Mapping[str, Norm]

    def __str__(self) -> str:
        bad = {k: str(v) for k, v in self.residuals.items() if v != 0}
        return f"One-form is not closed: {bad}"


@dataclass(frozen=True)
class NotPureS(EngineError):
    component: int
    variables: Tuple[str, ...]

    def __str__(self) -> str:
        return f"L{self.component} f depends on {list(self.variables)}, not only on s"


@dataclass(frozen=True)
class EmptySeries(EngineError):
    def __str__(self) -> str:
        return "Cannot estimate growth of the zero series"


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                    Pullback and verification                      #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def pullback(h: Series, truncation: Optional[int] = None) -> Series:
    """h(z, s + z t) as a chart series, truncated at `truncation`.

    The default is `max(h.truncation, 2 * h.degree())`, which keeps every stored term
    of h; lossless round trips need `truncation >= 2 * h.degree()`.

    :raises TruncationTooSmall If `truncation` is below h.truncation.
    """
    m = germ_dimension(h)
    d = max(h.truncation, 2 * h.degree()) if truncation is None else truncation
    return substitute(h, blowdown_rules(m, d, h.mode), d)


@dataclass(frozen=True)
class SolutionReport:
    """Coefficient norm of every frame field applied to f, over degrees <= D - 1."""

    truncation: int
    residuals: Mapping[str, Norm]
    is_solution: bool


def verify_solution(f: Series, tolerance: float = 1e-10) -> SolutionReport:
    """Applies L0, L1, ..., Lm and reports each residual's coefficient norm.

    Exact series pass only with all residuals exactly zero; float series pass when
    every residual is below `tolerance`.
    """
    residuals: Dict[str, Norm] = {}
    for field in frame_for(f):
        r = truncate(apply_field(field, f), f.truncation - 1)
        residuals[field.name] = coefficient_norm(r)
    if f.mode is Mode.exact:
        ok = all(v == 0 for v in residuals.values())
    else:
        ok = all(v < tolerance for v in residuals.values())
    return SolutionReport(f.truncation, residuals, ok)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                   Hypocomplexity reconstruction                   #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


@dataclass(frozen=True)
class LayerDecomposition:
    """a_0..a_D in (s, t); a_k has truncation D - k."""

    m: int
    truncation: int
    mode: Mode
    layers: Tuple[Series, ...]


@dataclass(frozen=True)
class BSequence:
    """b_0..b_D in s; b_k has truncation D - k."""

    m: int
    truncation: int
    mode: Mode
    b: Tuple[Series, ...]


def decompose_layers(f: Series) -> LayerDecomposition:
    """:raises ZbarDependence If any stored term involves zbar."""
    m = chart_dimension(f)
    zbar_degree = f.degree_in(["zbar"])
    if zbar_degree > 0:
        raise ZbarDependence(zbar_degree)
    g = restrict_to_zero(f, ["zbar"])
    layers = tuple(extract_layer(g, "z", k) for k in range(f.truncation + 1))
    return LayerDecomposition(m, f.truncation, f.mode, layers)


def t_degree(a: Series) -> int:
    """Largest combined t-exponent of a layer; -1 for the zero layer."""
    return a.degree_in([v for v in a.variables if v.startswith("t")])


def _norm_upto(a: Series, degree: int) -> Norm:
    if degree < 0:
        return Fraction(0) if a.mode is Mode.exact else 0.0
    return coefficient_norm(truncate(a, degree))


def _is_zero_norm(value: Norm, mode: Mode, tolerance: float) -> bool:
    return value == 0 if mode is Mode.exact else value < tolerance


def _layer_from_b(layers: LayerDecomposition, b: Sequence[Series], k: int) -> Series:
    """sum_{|α| <= k} t^α d_s^α b_(k-|α|) / α! in the (s, t) variables at truncation D - k."""
    m, d = layers.m, layers.truncation
    st = s_variables(m) + t_variables(m)
    acc: Dict[MultiIndex, Coefficient] = {}
    for alpha in iter_monomials(m, k):
        source = b[k - sum(alpha)]
        for j, e in enumerate(alpha):
            for _ in range(e):
                source = derive(source, f"s{j + 1}")
        scale = multi_factorial(alpha)
        for gamma, c in source.terms.items():
            exp = tuple(gamma) + tuple(alpha)
            if sum(exp) > d - k:
                continue
            value = c / scale
            acc[exp] = acc[exp] + value if exp in acc else value
    return Series._trusted(st, d - k, layers.mode, acc)


def poly_identity_residual(layers: LayerDecomposition, b: BSequence) -> List[Norm]:
    """Per layer k, the norm of a_k minus its closed form in the b's, over degrees <= D - k."""
    out: List[Norm] = []
    for k, a in enumerate(layers.layers):
        out.append(coefficient_norm(sub(a, _layer_from_b(layers, b.b, k))))
    return out


def reconstruct_b(layers: LayerDecomposition, tolerance: float = 1e-10) -> BSequence:
    """Checks the layer recursion and returns b_k = a_k(s, 0).

    :raises NotASolution With the first layer whose recursion or closed form fails.
    """
    m = layers.m
    a = layers.layers
    for k, ak in enumerate(a):
        valid = layers.truncation - k - 1
        worst: Norm = Fraction(0) if layers.mode is Mode.exact else 0.0
        for j in range(1, m + 1):
            lhs = derive(ak, f"t{j}")
            residual = lhs if k == 0 else sub(lhs, derive(a[k - 1], f"s{j}"))
            worst = max(worst, _norm_upto(residual, valid))
        logger.debug(f"layer {k}: recursion residual {worst} on degrees <= {valid}")
        if not _is_zero_norm(worst, layers.mode, tolerance):
            raise NotASolution(k, worst)

    b = tuple(restrict_to_zero(ak, t_variables(m)) for ak in a)
    sequence = BSequence(m, layers.truncation, layers.mode, b)
    for k, r in enumerate(poly_identity_residual(layers, sequence)):
        if not _is_zero_norm(r, layers.mode, tolerance):
            raise NotASolution(k, r)
    return sequence


def germ_coefficients(b: BSequence) -> Dict[Tuple[int, MultiIndex], Coefficient]:
    """c_{k,α} = α! * (coefficient of s^α in b_k), for k + |α| <= D."""
    return {
        (k, alpha): c * multi_factorial(alpha)
        for k, bk in enumerate(b.b)
        for alpha, c in bk.terms.items()
    }


def assemble_germ(b: BSequence) -> Series:
    """h = sum c_{k,α} z^k w^α / α!, i.e. the s^α coefficient of b_k sits at z^k w^α."""
    terms = [((k,) + alpha, c) for k, bk in enumerate(b.b) for alpha, c in bk.terms.items()]
    return Series.from_terms(germ_variables(b.m), b.truncation, b.mode, terms)


def hypocomplex_reconstruct(f: Series, tolerance: float = 1e-10) -> Series:
    """The germ h with pullback(h) == f up to degree D, for a truncated solution f.

    :raises ZbarDependence If f involves zbar.
    :raises NotASolution If the layer recursion fails.
    """
    layers = decompose_layers(f)
    b = reconstruct_b(layers, tolerance)
    h = assemble_germ(b)
    logger.debug(f"reconstructed germ with {len(h.terms)} terms from truncation {f.truncation}")
    return h


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                      Inhomogeneous equations                      #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


@dataclass(frozen=True)
class OneForm:
    """v_1 ds_1 + ... + v_m ds_m with every v_j a series in (s_1..s_m)."""

    components: Tuple[Series, ...]

    def __post_init__(self) -> None:
        if len(self.components) == 0:
            raise ValueError("A one-form needs at least one component")
        expected = s_variables(self.m)
        for v in self.components:
            if v.variables != expected:
                raise VariableMismatch(expected, v.variables)
        if len({v.mode for v in self.components}) != 1:
            raise ValueError("One-form components must share a coefficient mode")

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def mode(self) -> Mode:
        return self.components[0].mode

    @property
    def truncation(self) -> int:
        return min(v.truncation for v in self.components)

    def degree(self) -> int:
        return max(v.degree() for v in self.components)


@dataclass(frozen=True)
class CompatibilityReport:
    """Norm of d_(s_j) v_k - d_(s_k) v_j per pair, keyed `"j,k"`."""

    residuals: Mapping[str, Norm]
    closed: bool


def check_compatibility(
    v: OneForm, u: Optional[Series] = None, tolerance: float = 1e-10
) -> CompatibilityReport:
    """Closedness of `v`, compared on degrees <= truncation - 1.

    :raises UnsupportedInhomogeneity If a nonzero d/dzbar right-hand side `u` is given.
    """
    if u is not None and not u.is_zero():
        raise UnsupportedInhomogeneity()
    residuals: Dict[str, Norm] = {}
    for j, k in combinations(range(1, v.m + 1), 2):
        r = sub(derive(v.components[k - 1], f"s{j}"), derive(v.components[j - 1], f"s{k}"))
        residuals[f"{j},{k}"] = _norm_upto(r, v.truncation - 1)
    closed = all(_is_zero_norm(x, v.mode, tolerance) for x in residuals.values())
    return CompatibilityReport(residuals, closed)


def _apply_frame(f: Series) -> List[Series]:
    return [apply_field(field, f) for field in frame_for(f)]


def _field_residuals(f: Series, v: OneForm) -> Dict[str, Norm]:
    """Norms of d/dzbar f and L_j f - v_j on degrees known for both sides."""
    out: Dict[str, Norm] = {}
    for field, image in zip(frame_for(f), _apply_frame(f)):
        if field.name == "L0":
            out[field.name] = _norm_upto(image, f.truncation - 1)
            continue
        vj = v.components[int(field.name[1:]) - 1]
        upto = min(f.truncation - 1, vj.truncation)
        if upto < 0:
            out[field.name] = _norm_upto(image, upto)
            continue
        target = embed(truncate(vj, upto), f.variables)
        out[field.name] = coefficient_norm(sub(truncate(image, upto), target))
    return out


def inhomogeneous_solve(
    v: OneForm, truncation: Optional[int] = None, tolerance: float = 1e-10
) -> Series:
    """The chart series f with d/dzbar f = 0 and L_j f = v_j, all b_k set to zero.

    a_k = sum_{|α| = k+1} t^α d_s^(α - e_j) v_j / α!, for any j with α_j > 0.
    The default truncation is the one-form's truncation plus one.

    :raises NotClosed If `v` is not closed.
    :raises TruncationTooSmall If `truncation < deg(v) + 1`.
    """
    m = v.m
    d = v.truncation + 1 if truncation is None else truncation
    if d < v.degree() + 1:
        raise TruncationTooSmall(d, v.degree() + 1)
    compatibility = check_compatibility(v, tolerance=tolerance)
    if not compatibility.closed:
        raise NotClosed(compatibility.residuals)

    terms: List[Tuple[MultiIndex, Coefficient]] = []
    for k in range(0, max(v.degree(), 0) + 1):
        for alpha in iter_monomials(m, k + 1):
            if sum(alpha) != k + 1:
                continue
            j = next(i for i, e in enumerate(alpha) if e > 0)
            source = v.components[j]
            for i, e in enumerate(alpha):
                for _ in range(e - (1 if i == j else 0)):
                    source = derive(source, f"s{i + 1}")
            factorial = multi_factorial(alpha)
            for gamma, c in source.terms.items():
                terms.append(((k, 0) + tuple(gamma) + tuple(alpha), c / factorial))
    f = Series.from_terms(chart_variables(m), d, v.mode, terms)

    for name, r in _field_residuals(f, v).items():
        if not _is_zero_norm(r, v.mode, tolerance):
            raise NotASolution(0 if name == "L0" else int(name[1:]), r)
    logger.debug(f"inhomogeneous solution with {len(f.terms)} terms at truncation {d}")
    return f


def recover_inhomogeneity(f: Series) -> OneForm:
    """v_j = L_j f on degrees <= D - 1, which must depend on s only.

    :raises ZbarDependence If f involves zbar.
    :raises NotPureS If some L_j f involves z, zbar or t.
    """
    m = chart_dimension(f)
    zbar_degree = f.degree_in(["zbar"])
    if zbar_degree > 0:
        raise ZbarDependence(zbar_degree)
    images = _apply_frame(f)
    non_s = ("z", "zbar") + t_variables(m)
    components: List[Series] = []
    for j in range(1, m + 1):
        lj = truncate(images[j], max(f.truncation - 1, 0))
        offending = tuple(x for x in non_s if lj.degree_in([x]) > 0)
        if offending:
            raise NotPureS(j, offending)
        components.append(restrict_to_zero(lj, non_s))
    return OneForm(tuple(components))


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                       Growth certificates                         #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


@dataclass(frozen=True)
class Certificate:
    """|coefficient at degree d| <= C * M^d over the stored terms.

    A root-test estimate from finitely many coefficients: it describes the data,
    it does not prove convergence.
    """

    C: float
    M: float
    max_degree: int


def _modulus(c: Coefficient) -> float:
    if isinstance(c, ExactComplex):
        return math.hypot(float(c.re), float(c.im))
    return abs(c)


def analyticity_certificate(g: Series) -> Certificate:
    """M = max over |α| >= 1 of |c_α|^(1/|α|) and C = |c_0|, or 1 when c_0 = 0.

    A constant g has M = 0 and C = |g|.

    :raises EmptySeries If g is the zero series.
    """
    if g.is_zero():
        raise EmptySeries()
    m_value = 0.0
    for alpha, c in g.terms.items():
        degree = sum(alpha)
        if degree >= 1:
            m_value = max(m_value, _modulus(c) ** (1.0 / degree))
    c0 = _modulus(g.coefficient((0,) * len(g.variables)))
    return Certificate(c0 if c0 > 0 else 1.0, m_value, g.degree())


def germ_growth_certificate(b: BSequence) -> Certificate:
    """The two-index estimate |d_s^α b_k(0)| / α! <= C M^(k + |α|) over all stored b_k terms.

    :raises EmptySeries If every b_k is zero.
    """
    if all(bk.is_zero() for bk in b.b):
        raise EmptySeries()
    m_value = 0.0
    top = 0
    for k, bk in enumerate(b.b):
        for alpha, c in bk.terms.items():
            degree = k + sum(alpha)
            top = max(top, degree)
            if degree >= 1:
                m_value = max(m_value, _modulus(c) ** (1.0 / degree))
    c0 = _modulus(b.b[0].coefficient((0,) * b.m))
    return Certificate(max(c0, 1.0), m_value, top)


@dataclass(frozen=True)
class ObstructionReport:
    compatibility: Mapping[str, Norm]
    truncation: int
    solution_residuals: Mapping[str, Norm]
    recovered_exactly: bool
    certificates: Tuple[Optional[Certificate], ...]


def obstruction_report(
    v: OneForm, truncation: Optional[int] = None, tolerance: float = 1e-10
) -> Tuple[ObstructionReport, Series]:
    """Closedness, the canonical solution, its recovery and per-component growth estimates.

    Zero components get no certificate.

    :raises NotClosed If `v` is not closed.
    """
    f = inhomogeneous_solve(v, truncation, tolerance)
    compatibility = check_compatibility(v, tolerance=tolerance)
    recovered = recover_inhomogeneity(f)
    matches = []
    for r, vj in zip(recovered.components, v.components):
        upto = min(f.truncation - 1, vj.truncation)
        matches.append(_is_zero_norm(_norm_upto(sub(r, vj), upto), v.mode, tolerance))
    certificates = tuple(
        None if vj.is_zero() else analyticity_certificate(vj) for vj in v.components
    )
    report = ObstructionReport(
        compatibility=compatibility.residuals,
        truncation=f.truncation,
        solution_residuals=_field_residuals(f, v),
        recovered_exactly=all(matches),
        certificates=certificates,
    )
    return report, f
