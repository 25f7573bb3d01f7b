from fractions import Fraction

import numpy as np
from pytest import mark, param, raises

from blowup_kit.geometry import (
    AtInfinity,
    Chart,
    ChartPoint,
    FlagPoint,
    OutsideChart,
    RealLine,
    VectorField,
    apply_field,
    blow_down,
    chart_transition,
    check_involutivity,
    commutator,
    flag_correspondence_check,
    flag_lift,
    frame,
    line_in_plane,
    mu_projection,
    plane_from_line,
    random_chart_point,
    rank_V_cap_Vbar,
    same_plane,
)
from blowup_kit.series import (
    ExactComplex,
    Mode,
    ModeMismatch,
    Series,
    blowdown_rules,
    chart_variables,
)

I = ExactComplex(0, 1)


def test_chart_validation():
    with raises(ValueError):
        Chart(0, 1)
    with raises(ValueError):
        Chart(3, 4)
    with raises(ValueError):
        ChartPoint(I, (Fraction(1),), ())
    with raises(ModeMismatch):
        ChartPoint(I, (0.5,), (Fraction(1),))
    with raises(ValueError):
        ChartPoint(complex(float("nan"), 0), (0.0,), (0.0,))


def test_blow_down_places_z_in_the_chart_slot():
    p = ChartPoint(I, (Fraction(1), Fraction(2)), (Fraction(3), Fraction(4)))
    assert blow_down(Chart(3, 2), p) == (ExactComplex(1, 3), I, ExactComplex(2, 4))
    assert blow_down(Chart(3, 1), p) == (I, ExactComplex(1, 3), ExactComplex(2, 4))
    with raises(ValueError):
        blow_down(Chart(2, 1), p)


@mark.parametrize("on_sigma", [False, True])
def test_chart_transitions_agree(on_sigma):
    rng = np.random.default_rng(11)
    n = 4
    checked = 0
    for _ in range(30):
        p = random_chart_point(rng, n - 1, Mode.exact, on_sigma=on_sigma)
        for source, target in [(1, 2), (1, 3), (1, 4)]:
            src, tgt = Chart(n, source), Chart(n, target)
            if p.t[target - 2] == 0:
                with raises(OutsideChart):
                    chart_transition(src, tgt, p)
                continue
            q = chart_transition(src, tgt, p)
            assert blow_down(tgt, q) == blow_down(src, p)
            assert chart_transition(tgt, src, q) == p
            assert q.on_sigma() == p.on_sigma()
            checked += 1
    assert checked > 0


def test_chart_transition_outside():
    p = ChartPoint(ExactComplex(1, 1), (Fraction(0), Fraction(0)), (Fraction(0), Fraction(2)))
    with raises(OutsideChart) as e:
        chart_transition(Chart(3, 1), Chart(3, 2), p)
    assert e.value.target == 2
    assert chart_transition(Chart(3, 1), Chart(3, 1), p) is p


@mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_frame_is_involutive(n):
    residuals = check_involutivity(n)
    assert len(residuals) == n * (n - 1) // 2
    assert all(r.is_zero() for r in residuals)


def test_involutivity_in_float_mode():
    assert all(r.is_zero() for r in check_involutivity(3, mode=Mode.float))


def test_commutator_detects_non_involutive_pairs():
    cv = chart_variables(1)
    one = Series.constant(1, cv, 2, Mode.exact)
    d_dz = VectorField("Dz", cv, {"z": one})
    bracket = commutator(d_dz, frame(1, 2, Mode.exact)[1], 2, Mode.exact)
    assert set(bracket.coefficients) == {"s1"}
    assert bracket.coefficients["s1"] == Series.constant(-1, cv, 2, Mode.exact)


def test_frame_annihilates_blown_down_coordinates():
    rules = blowdown_rules(2, 4, Mode.exact)
    fields = frame(2, 4, Mode.exact)
    for field in fields:
        for w in rules.values():
            assert apply_field(field, w).is_zero()
    zbar = Series.variable("zbar", chart_variables(2), 4, Mode.exact)
    assert apply_field(fields[0], zbar) == Series.constant(1, chart_variables(2), 4, Mode.exact)


@mark.parametrize("n", [1, 2, 3, param(5, marks=mark.slow)])
def test_rank_exact(n):
    rng = np.random.default_rng(n)
    for _ in range(100):
        assert rank_V_cap_Vbar(random_chart_point(rng, n - 1, Mode.exact, on_sigma=True)) == n - 1
        assert rank_V_cap_Vbar(random_chart_point(rng, n - 1, Mode.exact, on_sigma=False)) == 0


def test_rank_float():
    rng = np.random.default_rng(3)
    assert rank_V_cap_Vbar(random_chart_point(rng, 3, Mode.float, on_sigma=True), n=4) == 3
    assert rank_V_cap_Vbar(random_chart_point(rng, 3, Mode.float, on_sigma=False), n=4) == 0
    with raises(ValueError):
        rank_V_cap_Vbar(random_chart_point(rng, 3, Mode.float), n=3)


def test_flag_lift_example():
    p = ChartPoint(ExactComplex(Fraction(1, 2), 1), (Fraction(3),), (Fraction(-1),))
    fp = flag_lift(p)
    assert fp.line == (ExactComplex(1), p.z, ExactComplex(Fraction(5, 2), -1))
    assert mu_projection(fp) == blow_down(Chart(2, 1), p)
    assert line_in_plane(fp)
    assert same_plane(plane_from_line(fp.line), fp.plane)


def test_flag_errors():
    plane = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    with raises(AtInfinity):
        mu_projection(FlagPoint((ExactComplex(0), I), plane))
    with raises(RealLine):
        plane_from_line((ExactComplex(1), ExactComplex(2)))


@mark.parametrize("n", [1, 2, 3, 4, param(5, marks=mark.slow)])
def test_flag_correspondence_exact(n):
    report = flag_correspondence_check(n, 50, np.random.default_rng(0))
    assert report.samples == 50
    assert report.max_discrepancy == Fraction(0)
    assert report.lines_in_planes
    assert report.planes_unique


def test_flag_correspondence_float():
    report = flag_correspondence_check(3, 20, np.random.default_rng(1), mode=Mode.float)
    assert report.max_discrepancy < 1e-12
    assert report.lines_in_planes
    assert report.planes_unique
    with raises(ValueError):
        flag_correspondence_check(3, 0, np.random.default_rng(1))
