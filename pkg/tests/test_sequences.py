from fractions import Fraction

import pytest

from canclen import (
    INF,
    ArithmeticTail,
    SemiArithmeticForm,
    check_step_bound,
    fit_semi_arithmetic,
    form_step_bounded,
    form_to_json,
    is_infinite,
    limit_tau,
    make_form,
    min_forms,
)


def random_form(rng, allow_inf=True, max_period=4):
    m = rng.randrange(1, max_period + 1)
    pre = []
    for _ in range(rng.randrange(0, 6)):
        if allow_inf and rng.random() < 0.15:
            pre.append(INF)
        else:
            pre.append(rng.randrange(0, 31))
    tails = []
    for _ in range(m):
        if allow_inf and rng.random() < 0.2:
            tails.append((INF, 0))
        else:
            tails.append((rng.randrange(0, 31), rng.randrange(0, 6)))
    window = rng.choice([None, rng.randrange(1, 10)])
    return make_form(tuple(pre), m, tails, window=window)


# ---------------------------------------------------------------------------
# the closed-form type


def test_tail_validation():
    with pytest.raises(ValueError):
        ArithmeticTail(INF, 1)
    with pytest.raises(ValueError):
        ArithmeticTail(2, -1)
    with pytest.raises(ValueError):
        ArithmeticTail(2.5, 1)
    assert ArithmeticTail(INF, 0).at(100) == INF
    assert ArithmeticTail(3, 2).at(4) == 11


def test_form_validation():
    with pytest.raises(ValueError):
        make_form((), 0, ())
    with pytest.raises(ValueError):
        make_form((), 2, ((0, 1),))
    with pytest.raises(ValueError):
        make_form((1.5,), 1, ((0, 1),))
    with pytest.raises(ValueError):
        make_form((0,), 1, ((0, 1),)).value(-1)


def test_form_value_layout():
    f = make_form((7, INF), 2, ((0, 3), (1, 0)))
    # indices 0,1 come from the explicit prefix; index k then reads class
    # k mod 2 at member k div 2, so class 0 is already at its second member
    assert f.values(8) == [7, INF, 3, 1, 6, 1, 9, 1]
    assert f.preperiod_length == 2
    assert not f.uniform
    g = make_form((), 2, ((0, 2), (1, 2)))
    assert g.uniform
    assert not make_form((), 1, ((INF, 0),)).uniform


def test_make_form_accepts_tail_objects():
    t = ArithmeticTail(5, 1)
    f = make_form((), 1, (t,))
    assert f.tails == (t,)


def test_limit_tau():
    assert limit_tau(make_form((), 2, ((0, 2), (1, 2)))) == 1
    assert limit_tau(make_form((9, 9), 1, ((4, 0),))) == 0
    assert limit_tau(make_form((), 4, tuple((i, 6) for i in range(4)))) == Fraction(3, 2)
    with pytest.raises(ValueError):
        limit_tau(make_form((), 2, ((0, 1), (0, 2))))
    with pytest.raises(ValueError):
        limit_tau(make_form((), 2, ((INF, 0), (0, 2))))


# ---------------------------------------------------------------------------
# pointwise minimum


def test_min_forms_is_pointwise_min(rng):
    for _ in range(200):
        a = random_form(rng)
        b = random_form(rng)
        merged = min_forms(a, b)
        for k in range(250):
            assert merged.value(k) == min(a.value(k), b.value(k)), (a, b, k)


def test_min_forms_window_combination():
    a = make_form((), 1, ((0, 1),), window=5)
    b = make_form((), 1, ((3, 1),), window=None)
    assert min_forms(a, b).window == 5
    b7 = make_form((), 1, ((3, 1),), window=7)
    assert min_forms(a, b7).window == 5
    none = make_form((), 1, ((3, 1),))
    assert min_forms(none, none).window is None


def test_min_forms_period_is_lcm():
    a = make_form((), 2, ((0, 2), (5, 2)))
    b = make_form((), 3, ((1, 3), (2, 3), (3, 3)))
    assert min_forms(a, b).period == 6


# ---------------------------------------------------------------------------
# fitting observed values


def test_fit_commutator_shape():
    # a_0 = 0 then 2*floor(k/2) + 2: one irregular head value, period two,
    # both classes growing by two
    values = [0] + [2 * (k // 2) + 2 for k in range(1, 40)]
    f = fit_semi_arithmetic(values)
    assert f is not None
    assert f.preperiod_length == 1
    assert f.period == 2
    assert {t.difference for t in f.tails} == {2}
    assert f.uniform
    assert limit_tau(f) == 1
    assert f.values(40) == values


def test_fit_round_trip(rng):
    for _ in range(120):
        src = random_form(rng)
        values = src.values(60)
        fitted = fit_semi_arithmetic(values)
        assert fitted is not None, (src, values)
        assert fitted.values(60) == values
        if fitted.period > 1:
            smaller = fit_semi_arithmetic(
                values, max_period=fitted.period - 1
            )
            assert smaller is None, (src, fitted)


def test_fit_constant_and_linear():
    assert fit_semi_arithmetic([5] * 40).period == 1
    f = fit_semi_arithmetic(list(range(0, 120, 3)))
    assert f.period == 1
    assert f.preperiod_length == 0
    assert f.tails[0].difference == 3


def test_fit_infinite_classes():
    values = [0 if k % 2 == 0 else INF for k in range(48)]
    f = fit_semi_arithmetic(values)
    assert f.period == 2
    assert is_infinite(f.value(101))
    assert f.value(100) == 0
    # a class mixing finite and infinite members cannot be explained
    broken = list(values)
    broken[40] = 7
    assert fit_semi_arithmetic(broken) is None


def test_fit_rejects_decreasing():
    assert fit_semi_arithmetic(list(range(40, 0, -1))) is None


def test_fit_window_precondition():
    with pytest.raises(ValueError):
        fit_semi_arithmetic([1, 2, 3], max_period=8)
    # scaling the demanded period down makes the same window acceptable
    assert fit_semi_arithmetic([0, 1, 2, 3, 4], max_period=1) is not None


def test_fit_reports_confirmed_window():
    values = [0] + [2 * (k // 2) + 2 for k in range(1, 40)]
    f = fit_semi_arithmetic(values)
    assert f.window is not None and f.window >= 3


# ---------------------------------------------------------------------------
# step bounds


def test_check_step_bound():
    assert check_step_bound([0, 2, 4], 2)
    assert not check_step_bound([0, 3], 2)
    assert check_step_bound([INF, 0, 1], 5)
    assert not check_step_bound([0, INF], 100)
    assert check_step_bound([], 0)


def test_form_step_bounded_matches_scan(rng):
    for _ in range(200):
        f = random_form(rng)
        step = rng.randrange(0, 7)
        assert form_step_bounded(f, step) == check_step_bound(
            f.values(401), step
        ), (f, step)


def test_form_step_bounded_late_violation():
    # classes drift apart slowly: the bound fails only far out
    f = make_form((), 2, ((0, 1), (0, 3)))
    assert not form_step_bounded(f, 10)
    g = make_form((), 2, ((0, 2), (1, 2)))
    assert form_step_bounded(g, 2)
    assert not form_step_bounded(g, 0)


# ---------------------------------------------------------------------------
# serialisation


def test_form_to_json():
    f = make_form((4, INF), 2, ((0, 2), (INF, 0)), window=6)
    out = form_to_json(f)
    assert out == {
        "preperiod": [4, "inf"],
        "period": 2,
        "residues": [
            {"intercept": 0, "difference": 2},
            {"intercept": "inf", "difference": 0},
        ],
        "window": 6,
        "uniform": False,
        "tau": None,
    }
    g = make_form((), 2, ((0, 1), (0, 1)))
    assert form_to_json(g)["tau"] == "1/2"
    assert form_to_json(g)["uniform"] is True
