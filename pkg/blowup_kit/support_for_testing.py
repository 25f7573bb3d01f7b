"""THIS MODULE WILL *NEVER* BE PUBLISHED.

Seeded corpora and small fixtures shared by the test-suite. Excluded from the
build in pyproject.toml.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence

import numpy as np

from blowup_kit.engine import OneForm
from blowup_kit.loggers import LogLevelInt
from blowup_kit.series import (
    ExactComplex,
    Mode,
    Series,
    derive,
    germ_variables,
    iter_monomials,
    s_variables,
    truncate,
)
from blowup_kit.wedge import WedgeSpec

__all__: Sequence[str] = ()  # do not support wildcard imports


@dataclass
class MockLogger:
    internal: List[str] = field(default_factory=lambda: [])
    level: LogLevelInt = logging.DEBUG  # type: ignore

    def debug(self, x: str, **_) -> None:
        if self.level <= logging.DEBUG:
            self.internal.append(x)

    def info(self, x: str, **_) -> None:
        if self.level <= logging.INFO:
            self.internal.append(x)

    def warning(self, x: str, **_) -> None:
        if self.level <= logging.WARNING:
            self.internal.append(x)

    def error(self, x: str, **_) -> None:
        if self.level <= logging.ERROR:
            self.internal.append(x)

    def setLevel(self, level: LogLevelInt) -> None:
        self.level = level


def small_rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))


def random_germ(
    rng: np.random.Generator, n: int, degree: int, truncation: int = -1, density: float = 0.5
) -> Series:
    """Random germ polynomial in (z, w_1..w_(n-1)) with Gaussian-rational coefficients.

    Truncation defaults to 2 * degree, which is what a lossless pullback needs.
    """
    d = 2 * degree if truncation < 0 else truncation
    terms = []
    for alpha in iter_monomials(n, degree):
        if rng.uniform() < density:
            terms.append((alpha, ExactComplex(small_rational(rng), small_rational(rng))))
    return Series.from_terms(germ_variables(n - 1), d, Mode.exact, terms)


def random_s_polynomial(rng: np.random.Generator, m: int, degree: int, truncation: int) -> Series:
    terms = [
        (alpha, ExactComplex(small_rational(rng), small_rational(rng)))
        for alpha in iter_monomials(m, degree)
        if rng.uniform() < 0.6
    ]
    return Series.from_terms(s_variables(m), truncation, Mode.exact, terms)


def random_closed_one_form(rng: np.random.Generator, m: int, degree: int) -> OneForm:
    """The gradient of a random polynomial in s: closed by construction."""
    potential = random_s_polynomial(rng, m, degree + 1, degree + 1)
    return OneForm(
        tuple(truncate(derive(potential, s), degree) for s in s_variables(m))
    )


def symmetric_wedge(radius: float = 0.25, half_width: float = 0.5) -> WedgeSpec:
    """n = 2 wedge over a centred square, cone generators ±(1, 1) and ±(1, -1)."""
    return WedgeSpec(
        n=2,
        edge=((-half_width, half_width), (-half_width, half_width)),
        cone_generators=((1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)),
        radius=radius,
    )
