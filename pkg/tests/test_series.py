from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis.strategies import composite, fractions, integers, lists, tuples
from pytest import mark, raises

from blowup_kit.series import (
    ArityMismatch,
    DegreeOutOfRange,
    ExactComplex,
    Mode,
    ModeMismatch,
    Series,
    TruncationTooSmall,
    UnknownVariable,
    VariableMismatch,
    add,
    ambient_variables,
    as_numpy_function,
    blowdown_rules,
    chart_dimension,
    chart_variables,
    coefficient_norm,
    derive,
    embed,
    evaluate,
    extract_layer,
    germ_dimension,
    germ_variables,
    iter_monomials,
    mul,
    multi_factorial,
    power,
    restrict_to_zero,
    scale,
    sub,
    substitute,
    to_float,
    truncate,
)

XY = ("x", "y")


def exact(*terms, truncation=4, variables=XY) -> Series:
    return Series.from_terms(variables, truncation, Mode.exact, terms)


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                        Ring axioms (property)                     #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #

small = fractions(min_value=-5, max_value=5, max_denominator=4)


@composite
def series2(draw, truncation=4) -> Series:
    raw = draw(
        lists(
            tuples(integers(0, 3), integers(0, 3), small, small),
            max_size=6,
        )
    )
    return Series.from_terms(
        XY, truncation, Mode.exact, [((a, b), ExactComplex(re, im)) for a, b, re, im in raw]
    )


@settings(derandomize=True, max_examples=60, deadline=None)
@given(series2(), series2(), series2())
def test_ring_axioms(a, b, c):
    assert add(a, b) == add(b, a)
    assert mul(a, b) == mul(b, a)
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert sub(a, a).is_zero()


@settings(derandomize=True, max_examples=40, deadline=None)
@given(series2(), series2())
def test_leibniz_rule(a, b):
    # exact on degrees <= D - 1, the part derive can know
    lhs = truncate(derive(mul(a, b), "x"), 3)
    rhs = truncate(add(mul(derive(a, "x"), b), mul(a, derive(b, "x"))), 3)
    assert lhs == rhs


# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #
#                              Examples                             #
# # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # # #


def test_truncated_product():
    a = exact(((0, 0), 1), ((1, 0), 1), truncation=2)
    b = exact(((0, 0), 1), ((1, 0), -1), truncation=2)
    assert mul(a, b) == exact(((0, 0), 1), ((2, 0), -1), truncation=2)

    x = Series.variable("x", ("x",), 3, Mode.exact)
    geometric = exact(*[((k,), 1) for k in range(4)], truncation=3, variables=("x",))
    one_minus_x = sub(Series.constant(1, ("x",), 3, Mode.exact), x)
    assert mul(one_minus_x, geometric) == Series.constant(1, ("x",), 3, Mode.exact)


def test_product_takes_smaller_truncation():
    a = exact(((1, 0), 1), truncation=5)
    b = exact(((0, 1), 1), truncation=2)
    assert mul(a, b).truncation == 2
    assert add(a, b).truncation == 2


def test_zero_and_degree():
    z = Series.zero(XY, 3, Mode.exact)
    assert z.is_zero()
    assert z.degree() == -1
    assert exact(((1, 2), 3)).degree() == 3
    assert exact(((1, 0), 1), ((1, 0), -1)).is_zero()


def test_from_terms_drops_above_truncation():
    s = exact(((3, 3), 1), ((1, 0), 2), truncation=4)
    assert list(s.terms) == [(1, 0)]


def test_structural_equality():
    a = exact(((1, 0), 1), truncation=3)
    assert a == exact(((1, 0), 1), truncation=3)
    assert a != exact(((1, 0), 1), truncation=4)
    assert a != to_float(a)


def test_raw_constructor_validates():
    with raises(ValueError):
        Series(XY, 2, Mode.exact, {(3, 0): ExactComplex(1)})
    with raises(ValueError):
        Series(XY, 2, Mode.exact, {(1, 0): ExactComplex(0)})
    with raises(ModeMismatch):
        Series(XY, 2, Mode.exact, {(1, 0): 1.0 + 0j})
    with raises(ValueError):
        Series(("x", "x"), 2, Mode.exact, {})


def test_mismatches():
    with raises(VariableMismatch):
        add(exact(((1, 0), 1)), exact(((1,), 1), variables=("x",)))
    with raises(ModeMismatch):
        add(exact(((1, 0), 1)), to_float(exact(((1, 0), 1))))
    with raises(ModeMismatch):
        Series.constant(0.5, XY, 2, Mode.exact)
    with raises(ModeMismatch):
        ExactComplex(0.5)


def test_derive():
    s = exact(((3, 1), 2), ((0, 2), 1))
    assert derive(s, "x") == exact(((2, 1), 6))
    assert derive(s, "x").truncation == s.truncation
    assert derive(exact(((0, 0), 5)), "y").is_zero()
    with raises(UnknownVariable):
        derive(s, "q")


def test_power():
    x = Series.variable("x", XY, 6, Mode.exact)
    y = Series.variable("y", XY, 6, Mode.exact)
    cube = power(add(x, y), 3)
    assert cube.coefficient((2, 1)) == 3
    assert cube.coefficient((0, 3)) == 1
    assert power(x, 0) == Series.constant(1, XY, 6, Mode.exact)


def test_truncate_edges():
    s = exact(((1, 0), 1), ((2, 1), 1), truncation=4)
    assert truncate(s, 2) == exact(((1, 0), 1), truncation=2)
    assert truncate(s, -1) == Series.zero(XY, 0, Mode.exact)
    with raises(TruncationTooSmall):
        truncate(s, 5)


def test_substitute_identity_and_errors():
    s = exact(((1, 1), 3), ((0, 2), ExactComplex(0, 1)))
    rules = {v: Series.variable(v, XY, 4, Mode.exact) for v in XY}
    assert substitute(s, rules, 4) == s

    with raises(TruncationTooSmall):
        substitute(s, rules, 3)
    with raises(UnknownVariable):
        substitute(s, {"x": rules["x"]}, 4)
    short = {v: Series.variable(v, XY, 4, Mode.exact) for v in XY}
    with raises(TruncationTooSmall):
        substitute(s, short, 5)


def test_substitute_composition():
    # (u + v)^2 with u = x, v = x*y
    uv = ("u", "v")
    h = Series.from_terms(uv, 2, Mode.exact, [((2, 0), 1), ((1, 1), 2), ((0, 2), 1)])
    x = Series.variable("x", XY, 4, Mode.exact)
    y = Series.variable("y", XY, 4, Mode.exact)
    out = substitute(h, {"u": x, "v": mul(x, y)}, 4)
    assert out == exact(((2, 0), 1), ((2, 1), 2), ((2, 2), 1), truncation=4)


def test_evaluate():
    s = exact(((1, 1), 2), ((0, 0), 1))
    assert evaluate(s, [Fraction(1, 2), 3]) == ExactComplex(4)
    assert evaluate(s, [ExactComplex(0, 1), ExactComplex(0, 1)]) == ExactComplex(-1)
    with raises(ArityMismatch):
        evaluate(s, [1])
    with raises(ModeMismatch):
        evaluate(s, [0.5, 1])


def test_extract_layer():
    s = exact(((2, 1), 5), ((0, 3), 1), truncation=4)
    layer = extract_layer(s, "x", 2)
    assert layer.variables == ("y",)
    assert layer.truncation == 2
    assert layer == Series.from_terms(("y",), 2, Mode.exact, [((1,), 5)])
    assert extract_layer(s, "x", 4).is_zero()
    with raises(DegreeOutOfRange):
        extract_layer(s, "x", 5)
    with raises(DegreeOutOfRange):
        extract_layer(s, "x", -1)


def test_restrict_and_embed():
    s = exact(((1, 0), 2), ((1, 1), 3))
    r = restrict_to_zero(s, ["y"])
    assert r == Series.from_terms(("x",), 4, Mode.exact, [((1,), 2)])
    assert embed(r, ("w", "x")) == Series.from_terms(("w", "x"), 4, Mode.exact, [((0, 1), 2)])
    with raises(UnknownVariable):
        embed(r, ("w",))


def test_float_conversion_and_numpy():
    s = exact(((1, 1), Fraction(1, 2)), ((0, 0), ExactComplex(0, 1)))
    f = to_float(s)
    assert f.mode is Mode.float
    assert f.coefficient((1, 1)) == 0.5
    fn = as_numpy_function(s)
    pts = np.array([[2.0, 3.0], [1j, 1j]])
    np.testing.assert_allclose(fn(pts), [3.0 + 1j, -0.5 + 1j])
    assert as_numpy_function(Series.zero(XY, 1, Mode.exact))(pts).tolist() == [0, 0]


def test_coefficient_norm():
    assert coefficient_norm(exact(((1, 0), ExactComplex(Fraction(-3, 2), 1)))) == Fraction(3, 2)
    assert coefficient_norm(Series.zero(XY, 2, Mode.exact)) == Fraction(0)
    assert coefficient_norm(Series.zero(XY, 2, Mode.float)) == 0.0


def test_scale():
    s = exact(((1, 0), 2))
    assert scale(s, Fraction(1, 2)) == exact(((1, 0), 1))
    assert scale(s, 0).is_zero()


@mark.parametrize("n,d,count", [(1, 3, 4), (2, 2, 6), (3, 2, 10), (0, 5, 1)])
def test_iter_monomials(n, d, count):
    monomials = list(iter_monomials(n, d))
    assert len(monomials) == count
    assert len(set(monomials)) == count


def test_multi_factorial():
    assert multi_factorial((3, 0, 2)) == 12
    assert multi_factorial(()) == 1


def test_layouts():
    assert chart_variables(2) == ("z", "zbar", "s1", "s2", "t1", "t2")
    assert germ_variables(1) == ("z", "w1")
    assert ambient_variables(3) == ("z1", "z2", "z3")
    f = Series.zero(chart_variables(2), 2, Mode.exact)
    assert chart_dimension(f) == 2
    assert germ_dimension(Series.zero(germ_variables(3), 1, Mode.exact)) == 3
    with raises(VariableMismatch):
        chart_dimension(Series.zero(XY, 2, Mode.exact))
    with raises(VariableMismatch):
        germ_dimension(Series.zero(XY, 2, Mode.exact))


def test_blowdown_rules():
    rules = blowdown_rules(1, 3, Mode.exact)
    w = rules["w1"]
    assert w.coefficient((0, 0, 1, 0)) == 1
    assert w.coefficient((1, 0, 0, 1)) == 1
    assert len(w.terms) == 2


def test_exact_complex_arithmetic():
    i = ExactComplex(0, 1)
    assert i * i == -1
    assert (1 + i) / (1 - i) == i
    assert i**-1 == -i
    assert i.conjugate() == -i
    assert (Fraction(1, 2) + i).to_complex() == complex(0.5, 1)
    with raises(ZeroDivisionError):
        i / 0
    assert hash(ExactComplex(2)) == hash(ExactComplex(Fraction(4, 2)))
