import pytest

from canclen import (
    INF,
    BudgetExceeded,
    envelope_monoid,
    envelope_semilinear,
    is_infinite,
    linear,
    make_form,
    semilinear,
    shift_form,
)
from oracles import envelope_minplus

COORDS = ("k", "cost")


def random_steps(rng, count=None, coord=6):
    n = count if count is not None else rng.randrange(1, 5)
    return [
        (rng.randrange(0, coord + 1), rng.randrange(0, coord + 1))
        for _ in range(n)
    ]


# ---------------------------------------------------------------------------
# monoid envelopes


def test_envelope_frozen_pair():
    # oracle: forward min-plus relaxation
    f = envelope_monoid([(2, 3), (3, 4)])
    assert f.values(11) == [0, INF, 3, 4, 6, 7, 8, 10, 11, 12, 14]
    assert f.period == 3
    assert {t.difference for t in f.tails} == {4}


def test_envelope_frozen_sparse():
    # oracle: forward min-plus relaxation; representability holes persist
    # until the two step lengths start combining
    f = envelope_monoid([(5, 1), (6, 1)])
    assert f.values(13) == [
        0, INF, INF, INF, INF, 1, 1, INF, INF, INF, 2, 2, 2
    ]
    assert f.value(30) == 5
    assert f.value(31) == 6
    assert f.value(34) == 6
    assert is_infinite(f.value(19))
    assert not is_infinite(f.value(20))


def test_envelope_degenerate():
    f = envelope_monoid([])
    assert f.values(4) == [0, INF, INF, INF]
    g = envelope_monoid([(0, 3), (0, 0)])
    assert g.values(4) == [0, INF, INF, INF]
    h = envelope_monoid([(1, 0)])
    assert h.values(4) == [0, 0, 0, 0]


def test_envelope_rejects_negative():
    with pytest.raises(ValueError):
        envelope_monoid([(1, -1)])
    with pytest.raises(ValueError):
        envelope_monoid([(-1, 1)])


def test_envelope_certificate_window():
    f = envelope_monoid([(2, 3), (3, 4)])
    # the recorded window is the induction width: the largest step length
    assert f.window == 3


def test_envelope_matches_minplus_random(rng):
    for _ in range(60):
        steps = random_steps(rng)
        f = envelope_monoid(steps)
        expected = envelope_minplus([((0, 0), steps)], 200)
        assert f.values(201) == expected, steps
        assert f.window is not None


def test_envelope_growth_invariants(rng):
    # a_{k + x} <= a_k + y for every step (x, y) with x > 0
    for _ in range(30):
        steps = [(x, y) for x, y in random_steps(rng) if x > 0]
        if not steps:
            continue
        f = envelope_monoid(steps)
        for x, y in steps:
            for k in range(150):
                if not is_infinite(f.value(k)):
                    assert f.value(k + x) <= f.value(k) + y


def test_envelope_budget():
    with pytest.raises(BudgetExceeded) as info:
        envelope_monoid([(5, 1), (6, 1)], max_onset=3)
    assert info.value.stage == "envelope"


# ---------------------------------------------------------------------------
# shifts


def test_shift_form_frozen():
    base = envelope_monoid([(2, 0)])
    shifted = shift_form(base, 1, 1)
    # oracle: forward min-plus relaxation of offset (1,1) with step (2,0)
    assert shifted.values(9) == [INF, 1, INF, 1, INF, 1, INF, 1, INF]


def test_shift_form_matches_direct(rng):
    from test_sequences import random_form

    for _ in range(100):
        f = random_form(rng)
        dx, dy = rng.randrange(0, 7), rng.randrange(0, 7)
        shifted = shift_form(f, dx, dy)
        for k in range(200):
            if k < dx:
                assert is_infinite(shifted.value(k))
            else:
                src = f.value(k - dx)
                expected = INF if is_infinite(src) else src + dy
                assert shifted.value(k) == expected, (f, dx, dy, k)


def test_shift_form_rejects_negative():
    f = make_form((), 1, ((0, 1),))
    with pytest.raises(ValueError):
        shift_form(f, -1, 0)
    with pytest.raises(ValueError):
        shift_form(f, 0, -1)


# ---------------------------------------------------------------------------
# envelopes of semilinear sets


def test_envelope_semilinear_dimension_check():
    s = semilinear(("a", "b", "c"), [linear((0, 0, 0))])
    with pytest.raises(ValueError):
        envelope_semilinear(s)


def test_envelope_semilinear_empty():
    s = semilinear(COORDS, [])
    f = envelope_semilinear(s)
    assert all(is_infinite(f.value(k)) for k in range(10))


def test_envelope_semilinear_matches_minplus_random(rng):
    for _ in range(40):
        comps = []
        for _ in range(rng.randrange(1, 4)):
            off = (rng.randrange(0, 5), rng.randrange(0, 5))
            comps.append((off, random_steps(rng, coord=6)))
        s = semilinear(COORDS, [linear(o, g) for o, g in comps])
        plain = [(c.offset, c.generators) for c in s.components]
        f = envelope_semilinear(s)
        assert f.values(151) == envelope_minplus(plain, 150), plain
