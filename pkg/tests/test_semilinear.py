import pytest

from canclen import (
    BudgetExceeded,
    Letter,
    LinearSet,
    SemilinearSet,
    WorkMeter,
    free_group,
    frobenius_start,
    hilbert_basis,
    language_upto,
    linear,
    linear_map,
    minimal_solutions,
    parikh_cfg,
    parikh_nfa,
    parse_grammar_text,
    parse_word,
    semilinear,
    semilinear_to_json,
    sl_diagonal,
    sl_image,
    sl_intersect,
    sl_membership,
    sl_product,
    sl_union,
    sl_universe,
    subword_nfa,
    universal_coxeter,
    word_problem_grammar,
)
from oracles import (
    grammar_language,
    hilbert_exhaustive,
    representable_sums,
    semilinear_members,
)
from util import cfg_rules

XY = ("x", "y")


def S(coords, comps):
    return semilinear(coords, [linear(o, g) for o, g in comps])


def plain(s):
    return [(c.offset, c.generators) for c in s.components]


def random_semilinear(rng, dim, max_components=3, max_generators=3, coord=6):
    comps = []
    for _ in range(rng.randrange(1, max_components + 1)):
        off = tuple(rng.randrange(0, coord + 1) for _ in range(dim))
        gens = [
            tuple(rng.randrange(0, coord + 1) for _ in range(dim))
            for _ in range(rng.randrange(0, max_generators + 1))
        ]
        comps.append((off, gens))
    return S(tuple(f"c{i}" for i in range(dim)), comps)


# ---------------------------------------------------------------------------
# construction and canonical form


def test_linear_canonicalisation():
    c = linear((1, 0), [(0, 0), (2, 1), (1, 1), (2, 1)])
    assert c.offset == (1, 0)
    assert c.generators == ((1, 1), (2, 1))


def test_validation_errors():
    with pytest.raises(ValueError):
        LinearSet((-1, 0), ())
    with pytest.raises(ValueError):
        LinearSet((0, 0), ((1,),))
    with pytest.raises(ValueError):
        LinearSet((0,), ((-1,),))
    with pytest.raises(ValueError):
        SemilinearSet(("x", "x"), ())
    with pytest.raises(ValueError):
        semilinear(("x",), [linear((0, 0))])
    with pytest.raises(ValueError):
        sl_membership(S(XY, [((0, 0), [])]), (1,))


def test_describe_and_json():
    s = S(XY, [((1, 0), [(1, 1)])])
    assert "1, 1" in s.describe() or "(1, 1)" in s.describe()
    assert semilinear_to_json(s) == {
        "coords": ["x", "y"],
        "components": [{"offset": [1, 0], "generators": [[1, 1]]}],
    }
    empty = S(XY, [])
    assert empty.is_empty()
    assert "empty" in empty.describe()


# ---------------------------------------------------------------------------
# membership against the box oracle


def test_membership_matches_oracle(rng):
    for _ in range(40):
        dim = rng.randrange(1, 4)
        s = random_semilinear(rng, dim)
        bound = 12
        members = semilinear_members(plain(s), bound)
        for _ in range(120):
            v = tuple(rng.randrange(0, bound + 1) for _ in range(dim))
            assert sl_membership(s, v) == (v in members), (plain(s), v)


def test_union_product_diagonal_universe(rng):
    a = S(("x",), [((2,), [(3,)])])
    b = S(("x",), [((0,), [(5,)])])
    u = sl_union(a, b)
    for v in range(25):
        assert sl_membership(u, (v,)) == (
            sl_membership(a, (v,)) or sl_membership(b, (v,))
        )

    c = S(("y", "z"), [((1, 0), [(0, 1)])])
    p = sl_product(a, c)
    assert p.coords == ("x", "y", "z")
    for _ in range(80):
        v = tuple(rng.randrange(0, 9) for _ in range(3))
        assert sl_membership(p, v) == (
            sl_membership(a, v[:1]) and sl_membership(c, v[1:])
        )

    d = sl_diagonal(("p", "q", "r"))
    assert sl_membership(d, (4, 4, 4))
    assert not sl_membership(d, (4, 4, 5))

    univ = sl_universe(XY)
    for _ in range(20):
        v = (rng.randrange(0, 40), rng.randrange(0, 40))
        assert sl_membership(univ, v)


def test_union_requires_same_coords():
    with pytest.raises(ValueError):
        sl_union(S(("x",), [((0,), [])]), S(("y",), [((0,), [])]))
    with pytest.raises(ValueError):
        sl_product(S(XY, [((0, 0), [])]), S(("y",), [((0,), [])]))


# ---------------------------------------------------------------------------
# images


def test_image_forward_members(rng):
    for _ in range(25):
        s = random_semilinear(rng, 2)
        m = linear_map(s.coords, ("total", "doubled"), [(1, 1), (2, 0)])
        img = sl_image(m, s)
        for v in semilinear_members(plain(s), 8):
            assert sl_membership(img, m.apply(v))


def test_image_parity_example():
    # counts of trivial rank-one words map to their total length: the evens
    g = word_problem_grammar(free_group(1))
    counts = parikh_cfg(g)
    total = linear_map(counts.coords, ("len",), [(1, 1)])
    img = sl_image(total, counts)
    for n in range(30):
        assert sl_membership(img, (n,)) == (n % 2 == 0)


def test_image_negative_rejected():
    m = linear_map(XY, ("d",), [(1, -1)])
    ok = S(XY, [((3, 1), [(1, 1)])])
    assert sl_membership(sl_image(m, ok), (2,))
    bad_offset = S(XY, [((0, 1), [])])
    with pytest.raises(ValueError):
        sl_image(m, bad_offset)
    bad_generator = S(XY, [((5, 0), [(0, 1)])])
    with pytest.raises(ValueError):
        sl_image(m, bad_generator)


def test_linear_map_validation():
    with pytest.raises(ValueError):
        linear_map(XY, ("a",), [(1, 0), (0, 1)])
    with pytest.raises(ValueError):
        linear_map(XY, ("a",), [(1,)])
    with pytest.raises(ValueError):
        sl_image(linear_map(("z",), ("a",), [(1,)]), S(XY, [((0, 0), [])]))


# ---------------------------------------------------------------------------
# minimal solutions of linear systems


def test_hilbert_frozen():
    # oracle: box enumeration with componentwise-minimality filter
    assert hilbert_basis([(1, -1)]) == ((1, 1),)
    assert hilbert_basis([(1, 1, -2)]) == ((0, 2, 1), (1, 1, 1), (2, 0, 1))
    assert hilbert_basis([(2, -3)]) == ((3, 2),)
    assert hilbert_basis([(1, -1, 0), (0, 1, -1)]) == ((1, 1, 1),)
    assert hilbert_basis([], dim=2) == ((0, 1), (1, 0))


def test_hilbert_matches_oracle(rng):
    for _ in range(60):
        dim = rng.randrange(2, 5)
        nrows = rng.randrange(1, 3)
        rows = [
            tuple(rng.randrange(-3, 4) for _ in range(dim))
            for _ in range(nrows)
        ]
        basis = hilbert_basis(rows, dim)
        expected = hilbert_exhaustive(rows, dim, 10)
        got = {b for b in basis if all(x <= 10 for x in b)}
        assert got == expected, rows


def test_hilbert_validation_and_budget():
    with pytest.raises(ValueError):
        hilbert_basis([])
    with pytest.raises(ValueError):
        hilbert_basis([(1, 2), (1,)])
    with pytest.raises(BudgetExceeded) as info:
        hilbert_basis([(2, -3)], max_nodes=3)
    assert info.value.stage == "hilbert"


def test_minimal_solutions_frozen():
    particular, homogeneous = minimal_solutions([(1, -1)], [1], 2)
    assert particular == ((1, 0),)
    assert homogeneous == ((1, 1),)
    particular, homogeneous = minimal_solutions([(1,)], [3], 1)
    assert particular == ((3,),)
    assert homogeneous == ()
    particular, homogeneous = minimal_solutions([(1,)], [0], 1)
    assert particular == ((0,),)


def test_minimal_solutions_describe_solution_set(rng):
    # the returned pieces reassemble the full solution set inside a box
    for _ in range(30):
        dim = rng.randrange(1, 4)
        row = tuple(rng.randrange(-3, 4) for _ in range(dim))
        rhs = rng.randrange(0, 5)
        particular, homogeneous = minimal_solutions([row], [rhs], dim)
        comps = [(p, tuple(homogeneous)) for p in particular]
        members = semilinear_members(comps, 8)
        import itertools
        for v in itertools.product(range(9), repeat=dim):
            solves = sum(c * x for c, x in zip(row, v)) == rhs
            assert (v in members) == solves, (row, rhs, v)


# ---------------------------------------------------------------------------
# intersection


def test_intersect_frozen_multiples():
    evens = S(("x",), [((0,), [(2,)])])
    threes = S(("x",), [((0,), [(3,)])])
    meet = sl_intersect(evens, threes)
    for v in range(40):
        assert sl_membership(meet, (v,)) == (v % 6 == 0)


def test_intersect_matches_oracle(rng):
    for _ in range(35):
        dim = rng.randrange(1, 3)
        a = random_semilinear(rng, dim, max_components=2, max_generators=2)
        b = random_semilinear(rng, dim, max_components=2, max_generators=2)
        b = SemilinearSet(a.coords, b.components)
        meet = sl_intersect(a, b)
        bound = 20
        expected = (
            semilinear_members(plain(a), bound)
            & semilinear_members(plain(b), bound)
        )
        assert semilinear_members(plain(meet), bound) == expected


def test_intersect_requires_same_coords():
    with pytest.raises(ValueError):
        sl_intersect(S(("x",), [((0,), [])]), S(("y",), [((0,), [])]))


# ---------------------------------------------------------------------------
# representability thresholds


def test_frobenius_frozen():
    # oracle: reachability table over scaled steps
    assert frobenius_start([3, 5]) == 8
    assert frobenius_start([2, 4]) == 0
    assert frobenius_start([4, 6]) == 3
    assert frobenius_start([6, 10, 15]) == 30
    assert frobenius_start([5, 7]) == 24
    assert frobenius_start([1]) == 0
    assert frobenius_start([7]) == 0


def test_frobenius_tight_against_oracle(rng):
    import math
    for _ in range(50):
        steps = sorted({rng.randrange(1, 15)
                        for _ in range(rng.randrange(1, 4))})
        start = frobenius_start(steps)
        g = math.gcd(*steps)
        bound = start + 3 * max(steps)
        reach = representable_sums(steps, bound)
        for j in range(0, bound + 1):
            if j % g:
                continue
            if j >= start:
                assert reach[j], (steps, j)
        if start:
            assert start % g == 1 % g or not reach[start - 1]
            assert not reach[start - 1 - ((start - 1) % g)] or start == 0
            # the multiple of g just below the threshold is unreachable
            assert not reach[start - 1], steps


def test_frobenius_validation():
    with pytest.raises(ValueError):
        frobenius_start([])
    with pytest.raises(ValueError):
        frobenius_start([0, 2])
    with pytest.raises(ValueError):
        frobenius_start([-1])


# ---------------------------------------------------------------------------
# counting images of grammars and automata


def test_parikh_rank1_free():
    counts = parikh_cfg(word_problem_grammar(free_group(1)))
    labels = [l.token() for l in counts.coords]
    assert labels == ["a", "a^-1"]
    for i in range(8):
        for j in range(8):
            assert sl_membership(counts, (i, j)) == (i == j)


def test_parikh_rank1_coxeter():
    counts = parikh_cfg(word_problem_grammar(universal_coxeter(1)))
    for n in range(12):
        assert sl_membership(counts, (n,)) == (n % 2 == 0)


def test_parikh_matched_pairs():
    g = parse_grammar_text("S -> _ | a S b")
    counts = parikh_cfg(g)
    for i in range(8):
        for j in range(8):
            assert sl_membership(counts, (i, j)) == (i == j)


def test_parikh_empty_language():
    g = parse_grammar_text("S -> a S")
    counts = parikh_cfg(g)
    assert counts.is_empty()


def test_parikh_matches_enumeration_random(rng):
    a, b = Letter("a"), Letter("b")
    symbols = [a, b, "X", "Y"]
    for trial in range(40):
        rules = []
        for var in ("X", "Y"):
            for _ in range(rng.randrange(1, 4)):
                rhs = tuple(
                    rng.choice(symbols)
                    for _ in range(rng.randrange(0, 4))
                )
                rules.append((var, rhs))
        from canclen import make_cfg
        g = make_cfg({"X", "Y"}, {a, b}, rules, "X")
        counts = parikh_cfg(g, coords=(a, b))
        lang = grammar_language(cfg_rules(g), "X", 7)
        vectors = {
            (sum(1 for l in w if l == a), sum(1 for l in w if l == b))
            for w in lang
        }
        for i in range(8):
            for j in range(8):
                if i + j > 7:
                    continue
                assert sl_membership(counts, (i, j)) == ((i, j) in vectors), (
                    sorted(g.rules), (i, j)
                )


def test_parikh_coords_validation():
    g = parse_grammar_text("S -> a")
    with pytest.raises(ValueError):
        parikh_cfg(g, coords=())
    wider = parikh_cfg(g, coords=(Letter("a"), Letter("z")))
    assert sl_membership(wider, (1, 0))
    assert not sl_membership(wider, (1, 1))


def test_parikh_budget():
    g = word_problem_grammar(free_group(2))
    with pytest.raises(BudgetExceeded) as info:
        parikh_cfg(g, meter=WorkMeter(limit=5))
    assert info.value.stage == "parikh"
    meter = WorkMeter(limit=None)
    parikh_cfg(g, meter=meter)
    assert meter.used > 0


def test_parikh_nfa_subwords():
    w = parse_word("a b a")
    counts = parikh_nfa(subword_nfa(w))
    a, b = Letter("a"), Letter("b")
    idx = {c: i for i, c in enumerate(counts.coords)}
    for na in range(4):
        for nb in range(3):
            v = [0, 0]
            v[idx[a]] = na
            v[idx[b]] = nb
            assert sl_membership(counts, tuple(v)) == (na <= 2 and nb <= 1)


def test_work_meter():
    m = WorkMeter(limit=10, stage="probe")
    m.spend(4)
    m.spend(6)
    assert m.used == 10
    with pytest.raises(BudgetExceeded) as info:
        m.spend(1)
    assert info.value.stage == "probe"
    assert "11" in info.value.message
    unlimited = WorkMeter()
    unlimited.spend(10**9)
    assert unlimited.used == 10**9
