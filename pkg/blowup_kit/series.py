"""Truncated multivariate power series with complex coefficients.

Two coefficient modes exist and never mix:
  - `Mode.exact`: Gaussian rationals, see :class:`ExactComplex`.
  - `Mode.float`: binary64 Python `complex`.

A :class:`Series` is truncated by *total* degree: no stored term exceeds its
`truncation`, and no stored coefficient is zero. Equality is structural
(variables, truncation, mode and term map must all agree).

Series are immutable. Every operation returns a fresh value.
"""

import math
from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction
from functools import reduce
from types import MappingProxyType
from typing import (
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

__all__: Sequence[str] = (
    "Mode",
    "MultiIndex",
    "ExactComplex",
    "Coefficient",
    "Scalar",
    "Series",
    "SeriesError",
    "VariableMismatch",
    "ModeMismatch",
    "UnknownVariable",
    "TruncationTooSmall",
    "ArityMismatch",
    "DegreeOutOfRange",
    "total_degree",
    "multi_factorial",
    "graded_lex_key",
    "coerce",
    "coefficient_magnitude",
    "add",
    "sub",
    "mul",
    "scale",
    "derive",
    "substitute",
    "evaluate",
    "extract_layer",
    "truncate",
    "restrict_to_zero",
    "embed",
    "to_float",
    "as_numpy_function",
    "coefficient_norm",
    "chart_variables",
    "germ_variables",
    "ambient_variables",
    "s_variables",
    "t_variables",
    "blowdown_rules",
    "chart_dimension",
    "germ_dimension",
    "iter_monomials",
    "power",
)

MultiIndex = Tuple[int, ...]
"""Exponent vector: one non-negative entry per variable of the indexing series."""

# a multi-index factorial beyond this total degree is refused
MAX_FACTORIAL_DEGREE: int = 400


class Mode(Enum):
    exact, float = auto(), auto()


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                              Errors                               #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


class SeriesError(Exception):
    """Base for all failures of series arithmetic."""


@dataclass(frozen=True)
class VariableMismatch(SeriesError):
    left: Tuple[str, ...]
    right: Tuple[str, ...]

    def __str__(self) -> str:
        return f"Series variables differ: {list(self.left)} vs. {list(self.right)}"


@dataclass(frozen=True)
class ModeMismatch(SeriesError):
    left: str
    right: str

    def __str__(self) -> str:
        return f"Refusing to mix coefficient modes: '{self.left}' with '{self.right}'"


@dataclass(frozen=True)
class UnknownVariable(SeriesError):
    name: str
    variables: Tuple[str, ...]

    def __str__(self) -> str:
        return f"Variable '{self.name}' is not one of {list(self.variables)}"


@dataclass(frozen=True)
class TruncationTooSmall(SeriesError):
    requested: int
    required: int

    def __str__(self) -> str:
        return (
            f"Target truncation {self.requested} would lose terms: "
            f"need at least {self.required}"
        )


@dataclass(frozen=True)
class ArityMismatch(SeriesError):
    expected: int
    actual: int

    def __str__(self) -> str:
        return f"Expecting a point with {self.expected} entries, found {self.actual}"


@dataclass(frozen=True)
class DegreeOutOfRange(SeriesError):
    degree: int
    truncation: int

    def __str__(self) -> str:
        return f"Degree {self.degree} is outside of [0, {self.truncation}]"


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                           Coefficients                            #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


class ExactComplex:
    """A Gaussian rational `re + i*im` with `Fraction` parts.

    Arithmetic accepts `int`, `Fraction` and other `ExactComplex` operands.
    Binary floats and Python `complex` are rejected with :class:`ModeMismatch`.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0) -> None:
        if isinstance(re, float) or isinstance(im, float):
            raise ModeMismatch("exact", "float")
        self.re: Fraction = Fraction(re)
        self.im: Fraction = Fraction(im)

    @staticmethod
    def lift(value: "Scalar") -> "ExactComplex":
        if isinstance(value, ExactComplex):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return ExactComplex(value)
        raise ModeMismatch("exact", type(value).__name__)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __add__(self, other: "Scalar") -> "ExactComplex":
        o = ExactComplex.lift(other)
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: "Scalar") -> "ExactComplex":
        o = ExactComplex.lift(other)
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: "Scalar") -> "ExactComplex":
        return ExactComplex.lift(other) - self

    def __mul__(self, other: "Scalar") -> "ExactComplex":
        o = ExactComplex.lift(other)
        return ExactComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: "Scalar") -> "ExactComplex":
        o = ExactComplex.lift(other)
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("division by an exact zero")
        num = self * o.conjugate()
        return ExactComplex(num.re / norm, num.im / norm)

    def __rtruediv__(self, other: "Scalar") -> "ExactComplex":
        return ExactComplex.lift(other) / self

    def __neg__(self) -> "ExactComplex":
        return ExactComplex(-self.re, -self.im)

    def __pow__(self, exponent: int) -> "ExactComplex":
        if exponent < 0:
            return ExactComplex(1) / (self ** (-exponent))
        result = ExactComplex(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExactComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"ExactComplex({self.re}, {self.im})"


Coefficient = Union[ExactComplex, complex]
"""A stored coefficient: `ExactComplex` in exact mode, `complex` in float mode."""

Scalar = Union[int, Fraction, float, complex, ExactComplex]


def coerce(value: Scalar, mode: Mode) -> Coefficient:
    """Converts a scalar into a coefficient of `mode`, refusing silent promotion.

    Integers and fractions are exact and enter either mode. Floats and complex
    numbers never enter exact mode; exact complex numbers never enter float mode.
    """
    if mode is Mode.exact:
        return ExactComplex.lift(value)
    if isinstance(value, ExactComplex):
        raise ModeMismatch("float", "exact")
    return complex(value)


def _is_zero(c: Coefficient) -> bool:
    return c.is_zero() if isinstance(c, ExactComplex) else c == 0


def coefficient_magnitude(c: Coefficient) -> Union[Fraction, float]:
    """max(|re|, |im|): exact for exact coefficients."""
    if isinstance(c, ExactComplex):
        return max(abs(c.re), abs(c.im))
    return max(abs(c.real), abs(c.imag))


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                            Multi-indices                          #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def total_degree(alpha: MultiIndex) -> int:
    return sum(alpha)


def multi_factorial(alpha: MultiIndex) -> int:
    """α! = product of the entry factorials.

    :raises DegreeOutOfRange If |α| exceeds the guarded factorial range.
    """
    if total_degree(alpha) > MAX_FACTORIAL_DEGREE:
        raise DegreeOutOfRange(total_degree(alpha), MAX_FACTORIAL_DEGREE)
    return reduce(lambda acc, a: acc * math.factorial(a), alpha, 1)


def graded_lex_key(alpha: MultiIndex) -> Tuple[int, MultiIndex]:
    """Sort key for the canonical term order: total degree first, then lexicographic."""
    return total_degree(alpha), alpha


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                               Series                              #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


@dataclass(frozen=True, eq=False)
class Series:
    """A truncated formal power series.

    Construct through :meth:`from_terms`, :meth:`zero`, :meth:`constant`,
    :meth:`variable` or :meth:`monomial`: they drop zero coefficients and
    terms above the truncation. The raw constructor validates but does not
    normalize.
    """

    variables: Tuple[str, ...]
    truncation: int
    mode: Mode
    terms: Mapping[MultiIndex, Coefficient]

    def __post_init__(self) -> None:
        if self.truncation < 0:
            raise ValueError(f"Truncation must be non-negative, not {self.truncation}")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"Duplicate variable names: {list(self.variables)}")
        arity = len(self.variables)
        exact = self.mode is Mode.exact
        for alpha, c in self.terms.items():
            if len(alpha) != arity or any(a < 0 for a in alpha):
                raise ValueError(f"Exponent {alpha} does not index {list(self.variables)}")
            if total_degree(alpha) > self.truncation:
                raise ValueError(f"Term {alpha} exceeds truncation {self.truncation}")
            if exact != isinstance(c, ExactComplex):
                raise ModeMismatch(self.mode.name, type(c).__name__)
            if _is_zero(c):
                raise ValueError(f"Zero coefficient stored at {alpha}")
        if not isinstance(self.terms, MappingProxyType):
            object.__setattr__(self, "terms", MappingProxyType(dict(self.terms)))

    @staticmethod
    def from_terms(
        variables: Sequence[str],
        truncation: int,
        mode: Mode,
        terms: Iterable[Tuple[MultiIndex, Scalar]],
    ) -> "Series":
        """Sums repeated exponents, drops zeros and everything above `truncation`."""
        acc: Dict[MultiIndex, Coefficient] = {}
        for alpha, value in terms:
            alpha = tuple(alpha)
            if total_degree(alpha) > truncation:
                continue
            c = coerce(value, mode)
            acc[alpha] = acc[alpha] + c if alpha in acc else c
        return Series._trusted(tuple(variables), truncation, mode, acc)

    @staticmethod
    def _trusted(
        variables: Tuple[str, ...],
        truncation: int,
        mode: Mode,
        terms: Dict[MultiIndex, Coefficient],
    ) -> "Series":
        return Series(
            variables, truncation, mode, {a: c for a, c in terms.items() if not _is_zero(c)}
        )

    @staticmethod
    def zero(variables: Sequence[str], truncation: int, mode: Mode) -> "Series":
        return Series(tuple(variables), truncation, mode, {})

    @staticmethod
    def constant(
        value: Scalar, variables: Sequence[str], truncation: int, mode: Mode
    ) -> "Series":
        return Series.from_terms(variables, truncation, mode, [((0,) * len(variables), value)])

    @staticmethod
    def monomial(
        alpha: MultiIndex,
        value: Scalar,
        variables: Sequence[str],
        truncation: int,
        mode: Mode,
    ) -> "Series":
        return Series.from_terms(variables, truncation, mode, [(alpha, value)])

    @staticmethod
    def variable(name: str, variables: Sequence[str], truncation: int, mode: Mode) -> "Series":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariable(name, variables)
        alpha = tuple(1 if v == name else 0 for v in variables)
        return Series.monomial(alpha, 1, variables, truncation, mode)

    def index_of(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(name, self.variables)

    def coefficient(self, alpha: MultiIndex) -> Coefficient:
        c = self.terms.get(tuple(alpha))
        if c is not None:
            return c
        return ExactComplex(0) if self.mode is Mode.exact else complex(0)

    def is_zero(self) -> bool:
        return len(self.terms) == 0

    def degree(self) -> int:
        """Largest total degree of a stored term; -1 for the zero series."""
        return max((total_degree(a) for a in self.terms), default=-1)

    def degree_in(self, names: Iterable[str]) -> int:
        """Largest combined exponent of the named variables over stored terms."""
        idx = [self.index_of(n) for n in names]
        return max((sum(a[i] for i in idx) for a in self.terms), default=-1)

    def sorted_terms(self) -> List[Tuple[MultiIndex, Coefficient]]:
        return sorted(self.terms.items(), key=lambda kv: graded_lex_key(kv[0]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.truncation == other.truncation
            and self.mode is other.mode
            and dict(self.terms) == dict(other.terms)
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.truncation, self.mode, frozenset(self.terms.items())))

    def __add__(self, other: "Series") -> "Series":
        return add(self, other)

    def __sub__(self, other: "Series") -> "Series":
        return sub(self, other)

    def __mul__(self, other: "Series") -> "Series":
        return mul(self, other)

    def __neg__(self) -> "Series":
        return scale(self, -1)

    def __repr__(self) -> str:
        if self.is_zero():
            body = "0"
        else:
            body = " + ".join(f"({c})*{_monomial_str(a, self.variables)}" for a, c in self.sorted_terms())
        return f"Series[{','.join(self.variables)}; D={self.truncation}; {self.mode.name}]({body})"


def _monomial_str(alpha: MultiIndex, variables: Sequence[str]) -> str:
    parts = [v if e == 1 else f"{v}^{e}" for v, e in zip(variables, alpha) if e > 0]
    return "*".join(parts) if parts else "1"


def _check_compatible(a: Series, b: Series) -> None:
    if a.variables != b.variables:
        raise VariableMismatch(a.variables, b.variables)
    if a.mode is not b.mode:
        raise ModeMismatch(a.mode.name, b.mode.name)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                            Arithmetic                             #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def add(a: Series, b: Series) -> Series:
    """Termwise sum truncated to min(D_a, D_b).

    :raises VariableMismatch If the variable lists differ.
    :raises ModeMismatch If the coefficient modes differ.
    """
    _check_compatible(a, b)
    d = min(a.truncation, b.truncation)
    acc: Dict[MultiIndex, Coefficient] = {k: c for k, c in a.terms.items() if sum(k) <= d}
    for k, c in b.terms.items():
        if sum(k) <= d:
            acc[k] = acc[k] + c if k in acc else c
    return Series._trusted(a.variables, d, a.mode, acc)


def sub(a: Series, b: Series) -> Series:
    return add(a, scale(b, -1))


def scale(a: Series, factor: Scalar) -> Series:
    c = coerce(factor, a.mode)
    return Series._trusted(a.variables, a.truncation, a.mode, {k: v * c for k, v in a.terms.items()})


def mul(a: Series, b: Series) -> Series:
    """Cauchy product truncated to min(D_a, D_b)."""
    _check_compatible(a, b)
    d = min(a.truncation, b.truncation)
    acc: Dict[MultiIndex, Coefficient] = {}
    right = [(k, sum(k), c) for k, c in b.terms.items()]
    for ka, ca in a.terms.items():
        da = sum(ka)
        if da > d:
            continue
        for kb, db, cb in right:
            if da + db > d:
                continue
            k = tuple(x + y for x, y in zip(ka, kb))
            p = ca * cb
            acc[k] = acc[k] + p if k in acc else p
    return Series._trusted(a.variables, d, a.mode, acc)


def power(a: Series, exponent: int) -> Series:
    result = Series.constant(1, a.variables, a.truncation, a.mode)
    for _ in range(exponent):
        result = mul(result, a)
    return result


def derive(a: Series, var: str) -> Series:
    """Formal partial derivative in `var`.

    The truncation is kept at D: the degree-(D-1) part of the result is only
    as complete as the caller's knowledge of degree D in the input.

    :raises UnknownVariable If `var` is not a variable of `a`.
    """
    i = a.index_of(var)
    acc: Dict[MultiIndex, Coefficient] = {}
    for k, c in a.terms.items():
        e = k[i]
        if e == 0:
            continue
        acc[k[:i] + (e - 1,) + k[i + 1 :]] = c * e
    return Series._trusted(a.variables, a.truncation, a.mode, acc)


def truncate(a: Series, truncation: int) -> Series:
    """Drops terms of total degree above `truncation` (which may not exceed D)."""
    if truncation > a.truncation:
        raise TruncationTooSmall(a.truncation, truncation)
    if truncation < 0:
        return Series.zero(a.variables, 0, a.mode)
    return Series._trusted(
        a.variables, truncation, a.mode, {k: c for k, c in a.terms.items() if sum(k) <= truncation}
    )


def substitute(
    h: Series,
    rules: Mapping[str, Series],
    target_truncation: int,
) -> Series:
    """Replaces every variable of `h` by a series in a common target variable set.

    Every term of `h` is expanded and the result is truncated to
    `target_truncation`. Intermediate powers are truncated at the same degree,
    which never changes the final result when the rule series carry no
    constant term. With affine rules (constant terms present) the stored
    polynomial of `h` is substituted as-is.

    A degree-d monomial in `w := s + z*t` expands to degree up to 2d, so
    lossless polynomial round trips need `target_truncation >= 2 * h.degree()`.
    This guidance is not enforced.

    :raises TruncationTooSmall If `target_truncation < h.truncation`.
    :raises UnknownVariable If a variable of `h` has no rule.
    """
    if target_truncation < h.truncation:
        raise TruncationTooSmall(target_truncation, h.truncation)
    for v in h.variables:
        if v not in rules:
            raise UnknownVariable(v, tuple(rules))
    images = [rules[v] for v in h.variables]
    if not images:
        raise ValueError("Substitution needs at least one variable rule")
    target = images[0]
    for img in images[1:]:
        _check_compatible(target, img)
    if target.mode is not h.mode:
        raise ModeMismatch(h.mode.name, target.mode.name)
    for img in images:
        if img.truncation < target_truncation:
            raise TruncationTooSmall(img.truncation, target_truncation)
    lifted = [truncate(img, target_truncation) for img in images]

    cache: Dict[Tuple[int, int], Series] = {}

    def pow_of(i: int, e: int) -> Series:
        key = (i, e)
        if key not in cache:
            if e == 0:
                cache[key] = Series.constant(1, target.variables, target_truncation, h.mode)
            else:
                cache[key] = mul(pow_of(i, e - 1), lifted[i])
        return cache[key]

    result = Series.zero(target.variables, target_truncation, h.mode)
    for alpha, c in h.sorted_terms():
        term = Series.constant(c, target.variables, target_truncation, h.mode)
        for i, e in enumerate(alpha):
            if e > 0:
                term = mul(term, pow_of(i, e))
        result = add(result, term)
    return result


def evaluate(a: Series, point: Sequence[Scalar]) -> Coefficient:
    """Evaluates the stored polynomial at `point` by the naive monomial sum.

    :raises ArityMismatch If the point has the wrong number of entries.
    :raises ModeMismatch If an exact series meets a floating point entry.
    """
    if len(point) != len(a.variables):
        raise ArityMismatch(len(a.variables), len(point))
    xs = [coerce(p, a.mode) for p in point]
    total: Coefficient = coerce(0, a.mode)
    for alpha, c in a.terms.items():
        term = c
        for x, e in zip(xs, alpha):
            if e:
                term = term * (x**e)
        total = total + term
    return total


def extract_layer(f: Series, var: str, k: int) -> Series:
    """The coefficient of `var**k`, a series in the remaining variables with truncation D-k.

    :raises UnknownVariable If `var` is not a variable of `f`.
    :raises DegreeOutOfRange If `k` is negative or exceeds the truncation.
    """
    i = f.index_of(var)
    if k < 0 or k > f.truncation:
        raise DegreeOutOfRange(k, f.truncation)
    rest = f.variables[:i] + f.variables[i + 1 :]
    acc = {a[:i] + a[i + 1 :]: c for a, c in f.terms.items() if a[i] == k}
    return Series._trusted(rest, f.truncation - k, f.mode, acc)


def restrict_to_zero(a: Series, names: Iterable[str]) -> Series:
    """Sets the named variables to zero and removes them from the variable list."""
    idx = sorted({a.index_of(n) for n in names})
    keep = [i for i in range(len(a.variables)) if i not in idx]
    acc = {
        tuple(alpha[i] for i in keep): c
        for alpha, c in a.terms.items()
        if all(alpha[i] == 0 for i in idx)
    }
    return Series._trusted(tuple(a.variables[i] for i in keep), a.truncation, a.mode, acc)


def embed(a: Series, variables: Sequence[str]) -> Series:
    """Reinterprets `a` inside a larger ordered variable list containing all of its variables."""
    variables = tuple(variables)
    for v in a.variables:
        if v not in variables:
            raise UnknownVariable(v, variables)
    positions = [variables.index(v) for v in a.variables]
    acc: Dict[MultiIndex, Coefficient] = {}
    for alpha, c in a.terms.items():
        wide = [0] * len(variables)
        for p, e in zip(positions, alpha):
            wide[p] = e
        acc[tuple(wide)] = c
    return Series._trusted(variables, a.truncation, a.mode, acc)


def to_float(a: Series) -> Series:
    """Explicit conversion of an exact series to float mode."""
    if a.mode is Mode.float:
        return a
    acc: Dict[MultiIndex, Coefficient] = {
        k: c.to_complex() for k, c in a.terms.items() if isinstance(c, ExactComplex)
    }
    return Series._trusted(a.variables, a.truncation, Mode.float, acc)


def as_numpy_function(a: Series) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized float evaluator: maps an `(N, len(variables))` complex array to `(N,)` values."""
    f = to_float(a)
    exps = np.array([k for k, _ in f.sorted_terms()], dtype=int).reshape(-1, len(f.variables))
    coefs = np.array([c for _, c in f.sorted_terms()], dtype=complex)

    def apply(points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=complex).reshape(-1, len(f.variables))
        if len(coefs) == 0:
            return np.zeros(pts.shape[0], dtype=complex)
        # (N, T) monomial table
        table = np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)
        return table @ coefs

    return apply


def coefficient_norm(a: Series) -> Union[Fraction, float]:
    """max over stored coefficients of max(|re|, |im|); exact in exact mode."""
    zero: Union[Fraction, float] = Fraction(0) if a.mode is Mode.exact else 0.0
    return max((coefficient_magnitude(c) for c in a.terms.values()), default=zero)


def iter_monomials(n_vars: int, max_degree: int) -> Iterator[MultiIndex]:
    """All exponent vectors of `n_vars` entries with total degree at most `max_degree`."""
    if n_vars == 0:
        yield ()
        return
    for first in range(max_degree + 1):
        for rest in iter_monomials(n_vars - 1, max_degree - first):
            yield (first,) + rest


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                     Canonical variable layouts                    #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def s_variables(m: int) -> Tuple[str, ...]:
    return tuple(f"s{j}" for j in range(1, m + 1))


def t_variables(m: int) -> Tuple[str, ...]:
    return tuple(f"t{j}" for j in range(1, m + 1))


def chart_variables(m: int) -> Tuple[str, ...]:
    """(z, zbar, s1..sm, t1..tm): coordinates of a blow-up chart."""
    return ("z", "zbar") + s_variables(m) + t_variables(m)


def germ_variables(m: int) -> Tuple[str, ...]:
    """(z, w1..wm): coordinates of the blown-down space adapted to a chart."""
    return ("z",) + tuple(f"w{j}" for j in range(1, m + 1))


def ambient_variables(n: int) -> Tuple[str, ...]:
    """(z1..zn): standard coordinates of the ambient complex space."""
    return tuple(f"z{j}" for j in range(1, n + 1))


def blowdown_rules(m: int, truncation: int, mode: Mode) -> Dict[str, Series]:
    """z := z and w_j := s_j + z*t_j, as chart series."""
    cv = chart_variables(m)
    z = Series.variable("z", cv, truncation, mode)
    rules: Dict[str, Series] = {"z": z}
    for j in range(1, m + 1):
        s = Series.variable(f"s{j}", cv, truncation, mode)
        t = Series.variable(f"t{j}", cv, truncation, mode)
        rules[f"w{j}"] = add(s, mul(z, t))
    return rules


def chart_dimension(f: Series) -> int:
    """The number m of (s, t) pairs of a chart series.

    :raises VariableMismatch If `f` is not laid out as a chart series.
    """
    m = sum(1 for v in f.variables if v.startswith("s"))
    if f.variables != chart_variables(m):
        raise VariableMismatch(f.variables, chart_variables(m))
    return m


def germ_dimension(h: Series) -> int:
    """The number m of w-variables of a germ series."""
    m = len(h.variables) - 1
    if m < 0 or h.variables != germ_variables(m):
        raise VariableMismatch(h.variables, germ_variables(max(m, 0)))
    return m
