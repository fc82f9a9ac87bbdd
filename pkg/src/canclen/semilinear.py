"""Semilinear sets over tuples of natural numbers, and the operations on
them needed to turn grammars into counting information.

A :class:`LinearSet` is ``offset + N-span(generators)``; a
:class:`SemilinearSet` is a finite union of linear sets sharing one named
coordinate list.  The operations here are exact: union, Minkowski product,
coordinate-changing images under integer matrices, intersection (via
minimal Diophantine solutions), membership, and the extraction of the
letter-counting image of a context-free grammar or finite automaton.

The grammar extraction runs a Newton iteration over the semiring whose
elements are semilinear sets, with union as addition and Minkowski sum as
multiplication.  Addition is idempotent and multiplication commutative, so
the iteration reaches the least solution of the grammar's equation system
in at most one step per nonterminal; an extra step is run as a cheap
self-check, and the iteration also stops early as soon as it is
syntactically stationary (which certifies the fixpoint on its own).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .budget import BudgetExceeded, WorkMeter
from .grammar import Cfg, Nfa, make_cfg, prune_useless
from .words import Letter

Vector = tuple[int, ...]

# components kept per intermediate value before the Parikh stage gives up
COMPONENT_CAP = 4096


def coord_key(c: object):
    """Deterministic sort key for mixed Letter/str coordinate labels."""
    if isinstance(c, Letter):
        return (0,) + c.sort_key
    return (1, str(c))


def coord_label(c: object) -> str:
    return c.token() if isinstance(c, Letter) else str(c)


def _vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _vec_sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def _vec_zero(dim: int) -> Vector:
    return (0,) * dim


@dataclass(frozen=True)
class LinearSet:
    """All vectors ``offset + sum_i n_i * generators[i]`` with ``n_i`` in N."""

    offset: Vector
    generators: tuple[Vector, ...]

    def __post_init__(self):
        if any(x < 0 for x in self.offset):
            raise ValueError(f"negative offset coordinate in {self.offset}")
        dim = len(self.offset)
        for g in self.generators:
            if len(g) != dim:
                raise ValueError(f"generator {g} has dimension != {dim}")
            if any(x < 0 for x in g):
                raise ValueError(f"negative generator coordinate in {g}")

    @property
    def dim(self) -> int:
        return len(self.offset)


def linear(offset: Sequence[int], generators: Iterable[Sequence[int]] = ()) -> LinearSet:
    """Canonicalised constructor: drops zero generators, sorts, dedupes."""
    off = tuple(int(x) for x in offset)
    gens = {tuple(int(x) for x in g) for g in generators}
    gens = {g for g in gens if any(g)}
    return LinearSet(off, tuple(sorted(gens)))


@dataclass(frozen=True)
class SemilinearSet:
    """Finite union of linear sets over one named coordinate list."""

    coords: tuple
    components: tuple[LinearSet, ...]

    def __post_init__(self):
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("duplicate coordinate labels")
        for c in self.components:
            if c.dim != len(self.coords):
                raise ValueError(
                    f"component dimension {c.dim} != {len(self.coords)} coords"
                )

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_empty(self) -> bool:
        return not self.components

    def describe(self) -> str:
        labels = ", ".join(coord_label(c) for c in self.coords)
        if not self.components:
            return f"empty over ({labels})"
        parts = []
        for c in self.components:
            gens = " + ".join(f"N*{g}" for g in c.generators)
            parts.append(f"{c.offset}" + (f" + {gens}" if gens else ""))
        return f"over ({labels}): " + " | ".join(parts)


def semilinear(coords: Sequence, components: Iterable[LinearSet]) -> SemilinearSet:
    comps = sorted(set(components), key=lambda c: (c.offset, c.generators))
    return SemilinearSet(tuple(coords), tuple(comps))


class _FuelExhausted(Exception):
    """Internal: a fuel-capped membership descent ran out of nodes."""


def _combo_member(generators: Sequence[Vector], target: Vector,
                  fuel: list[int] | None = None) -> bool:
    """Is target an N-combination of the generators?  Memoised descent.

    ``fuel``, when given, is a one-element mutable node allowance shared
    across calls; exhausting it raises :class:`_FuelExhausted`.  Callers
    that pass fuel must treat that as "unknown", never as "no".
    """
    if not any(target):
        return True
    gens = [g for g in generators if all(x <= t for x, t in zip(g, target))]
    memo: dict[Vector, bool] = {}

    def rec(res: Vector) -> bool:
        if not any(res):
            return True
        hit = memo.get(res)
        if hit is not None:
            return hit
        if fuel is not None:
            fuel[0] -= 1
            if fuel[0] < 0:
                raise _FuelExhausted
        memo[res] = False
        for g in gens:
            nxt = tuple(r - x for r, x in zip(res, g))
            if min(nxt, default=0) >= 0 and rec(nxt):
                memo[res] = True
                break
        return memo[res]

    return rec(target)


def linear_member(c: LinearSet, v: Vector) -> bool:
    res = tuple(x - o for x, o in zip(v, c.offset))
    if any(r < 0 for r in res):
        return False
    return _combo_member(c.generators, res)


def sl_membership(s: SemilinearSet, v: Sequence[int]) -> bool:
    vec = tuple(int(x) for x in v)
    if len(vec) != s.dim:
        raise ValueError(f"vector dimension {len(vec)} != {s.dim}")
    return any(linear_member(c, vec) for c in s.components)


def sl_union(a: SemilinearSet, b: SemilinearSet) -> SemilinearSet:
    if a.coords != b.coords:
        raise ValueError("union requires identical coordinate lists")
    return semilinear(a.coords, a.components + b.components)


def sl_product(a: SemilinearSet, b: SemilinearSet) -> SemilinearSet:
    """Cartesian pairing into the disjoint union of the coordinate spaces."""
    overlap = set(a.coords) & set(b.coords)
    if overlap:
        raise ValueError(f"coordinate labels shared by both factors: {overlap}")
    comps = []
    for ca, cb in itertools.product(a.components, b.components):
        off = ca.offset + cb.offset
        gens = [g + _vec_zero(cb.dim) for g in ca.generators]
        gens += [_vec_zero(ca.dim) + g for g in cb.generators]
        comps.append(linear(off, gens))
    return semilinear(a.coords + b.coords, comps)


def sl_diagonal(coords: Sequence) -> SemilinearSet:
    """All constant vectors (k, k, ..., k) over the given coordinates."""
    dim = len(coords)
    return semilinear(coords, [linear(_vec_zero(dim), [(1,) * dim])])


def sl_universe(coords: Sequence) -> SemilinearSet:
    """All of N^coords: offset zero, one unit generator per coordinate."""
    dim = len(coords)
    units = [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    return semilinear(coords, [linear(_vec_zero(dim), units)])


def semilinear_to_json(s: SemilinearSet) -> dict:
    return {
        "coords": [coord_label(c) for c in s.coords],
        "components": [
            {"offset": list(c.offset),
             "generators": [list(g) for g in c.generators]}
            for c in s.components
        ],
    }


@dataclass(frozen=True)
class MonoidLinearMap:
    """Integer matrix sending one coordinate space into another.

    ``rows[i]`` gives the coefficients of target coordinate i as a linear
    form over the source coordinates.  Entries may be negative; images of
    actual set elements must come out nonnegative or the map is rejected
    for that set.
    """

    source: tuple
    target: tuple
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != len(self.target):
            raise ValueError("one matrix row per target coordinate required")
        for r in self.rows:
            if len(r) != len(self.source):
                raise ValueError("row length must match source coordinate count")

    def apply(self, v: Vector) -> Vector:
        return tuple(sum(c * x for c, x in zip(row, v)) for row in self.rows)


def linear_map(source: Sequence, target: Sequence,
               rows: Iterable[Sequence[int]]) -> MonoidLinearMap:
    return MonoidLinearMap(
        tuple(source), tuple(target),
        tuple(tuple(int(x) for x in r) for r in rows),
    )


def sl_image(m: MonoidLinearMap, s: SemilinearSet) -> SemilinearSet:
    if tuple(m.source) != s.coords:
        raise ValueError("map source coordinates do not match the set's")
    comps = []
    for c in s.components:
        off = m.apply(c.offset)
        if any(x < 0 for x in off):
            raise ValueError(
                f"image offset {off} of component {c.offset} has a negative "
                "coordinate; the map does not send this set into N^k"
            )
        gens = []
        for g in c.generators:
            img = m.apply(g)
            if any(x < 0 for x in img):
                raise ValueError(
                    f"image {img} of generator {g} (component offset "
                    f"{c.offset}) has a negative coordinate"
                )
            gens.append(img)
        comps.append(linear(off, gens))
    return semilinear(m.target, comps)


# ---------------------------------------------------------------------------
# minimal nonnegative solutions of integer linear systems


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def hilbert_basis(matrix: Sequence[Sequence[int]], dim: int | None = None,
                  max_nodes: int = 2_000_000) -> tuple[Vector, ...]:
    """Minimal nonzero solutions in N^dim of ``matrix @ x == 0``.

    Breadth-first completion from the unit vectors: a candidate t grows by
    e_i only when <A t, A e_i> < 0, and candidates dominating an already
    found solution are pruned.  Both restrictions preserve completeness.
    """
    rows = [tuple(int(x) for x in r) for r in matrix]
    if dim is None:
        if not rows:
            raise ValueError("dim is required when the system has no rows")
        dim = len(rows[0])
    if any(len(r) != dim for r in rows):
        raise ValueError("ragged system matrix")
    cols = [tuple(r[i] for r in rows) for i in range(dim)]

    units = []
    for i in range(dim):
        e = tuple(1 if j == i else 0 for j in range(dim))
        units.append((e, cols[i]))
    basis: list[Vector] = []
    frontier = units
    seen = {t for t, _ in units}
    nodes = len(units)
    while frontier:
        nxt = []
        for t, v in frontier:
            if not any(v):
                basis.append(t)
                continue
            for i in range(dim):
                if _dot(v, cols[i]) >= 0:
                    continue
                child = tuple(x + (1 if j == i else 0) for j, x in enumerate(t))
                if child in seen:
                    continue
                if any(all(x >= y for x, y in zip(child, b)) for b in basis):
                    continue
                seen.add(child)
                nxt.append((child, _vec_add(v, cols[i])))
                nodes += 1
                if nodes > max_nodes:
                    raise BudgetExceeded(
                        "hilbert", f"search exceeded {max_nodes} nodes"
                    )
        frontier = nxt
    basis = [
        b for b in basis
        if not any(o != b and all(x <= y for x, y in zip(o, b)) for o in basis)
    ]
    return tuple(sorted(basis))


def minimal_solutions(matrix: Sequence[Sequence[int]], rhs: Sequence[int],
                      dim: int, max_nodes: int = 2_000_000
                      ) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
    """Minimal solutions of ``matrix @ x == rhs`` over N^dim.

    Returns (particular, homogeneous): the full solution set is the union
    of p + N-span(homogeneous) over the particular solutions p.  Solved by
    homogenising with a slack coordinate clamped to 1.
    """
    rows = [tuple(r) + (-int(b),) for r, b in zip(matrix, rhs)]
    basis = hilbert_basis(rows, dim + 1, max_nodes=max_nodes)
    particular = tuple(t[:-1] for t in basis if t[-1] == 1)
    homogeneous = tuple(t[:-1] for t in basis if t[-1] == 0)
    return particular, homogeneous


def sl_intersect(a: SemilinearSet, b: SemilinearSet,
                 max_nodes: int = 2_000_000) -> SemilinearSet:
    """Exact intersection, componentwise via minimal Diophantine solutions.

    For components v + span(P) and w + span(Q) the lattice of coincidences
    P@lam - Q@mu = w - v is solved over N; each minimal particular solution
    contributes an offset and the homogeneous minimal solutions contribute
    the generators.
    """
    if a.coords != b.coords:
        raise ValueError("intersection requires identical coordinate lists")
    d = a.dim
    comps = []
    for ca, cb in itertools.product(a.components, b.components):
        p, q = ca.generators, cb.generators
        matrix = []
        rhs = []
        for r in range(d):
            matrix.append(
                tuple(g[r] for g in p) + tuple(-g[r] for g in q)
            )
            rhs.append(cb.offset[r] - ca.offset[r])
        particular, homogeneous = minimal_solutions(
            matrix, rhs, len(p) + len(q), max_nodes=max_nodes
        )
        if not particular:
            continue
        gens = []
        for h in homogeneous:
            g = _vec_zero(d)
            for coef, pg in zip(h[:len(p)], p):
                g = _vec_add(g, tuple(coef * x for x in pg))
            gens.append(g)
        for lam in particular:
            off = ca.offset
            for coef, pg in zip(lam[:len(p)], p):
                off = _vec_add(off, tuple(coef * x for x in pg))
            comps.append(linear(off, gens))
    return semilinear(a.coords, comps)


def frobenius_start(steps: Iterable[int]) -> int:
    """Least N such that every multiple of gcd(steps) at or beyond N is a
    nonnegative integer combination of the steps.

    The empty combination makes 0 always representable, so the answer is 0
    exactly when every multiple of the gcd is representable.
    """
    xs = sorted({int(x) for x in steps})
    if not xs or xs[0] <= 0:
        raise ValueError("steps must be positive integers")
    g = math.gcd(*xs)
    scaled = [x // g for x in xs]
    if scaled[0] == 1 and len(scaled) == 1:
        return 0
    # beyond bound all residues are covered (classical Frobenius bound)
    bound = max(scaled) * min(scaled) + max(scaled)
    reach = [False] * (bound + 1)
    reach[0] = True
    for j in range(1, bound + 1):
        reach[j] = any(x <= j and reach[j - x] for x in scaled)
    worst = -1
    for j in range(bound, -1, -1):
        if not reach[j]:
            worst = j
            break
    # least N: one past the largest non-representable multiple of g
    return g * worst + 1 if worst >= 0 else 0


# ---------------------------------------------------------------------------
# Parikh images via Newton iteration
#
# Internally a "value" is a sorted tuple of LinearSet components over a
# fixed coordinate list; the semiring operations below keep values
# canonical so that syntactic equality detects stationarity.


# descent nodes allowed per containment test during subsumption pruning
_SUBSUME_FUEL = 4096


def _contains(big: LinearSet, small: LinearSet,
              meter: WorkMeter | None) -> bool:
    """Conservative containment: True only when every vector of ``small``
    provably lies in ``big``.  Gives up (returns False) once the descent
    allowance is spent, so pruning stays cheap; a False here only costs a
    redundant component, never correctness.
    """
    if meter is not None:
        meter.spend(1)
    res = tuple(x - o for x, o in zip(small.offset, big.offset))
    if any(r < 0 for r in res):
        return False
    fuel = [_SUBSUME_FUEL]
    try:
        ok = _combo_member(big.generators, res, fuel) and all(
            _combo_member(big.generators, g, fuel) for g in small.generators
        )
    except _FuelExhausted:
        ok = False
    if meter is not None:
        used = _SUBSUME_FUEL - max(fuel[0], 0)
        if used >= 64:
            meter.spend(used // 64)
    return ok


def _norm_value(comps: Iterable[LinearSet], meter: WorkMeter | None,
                subsume: bool = True) -> tuple[LinearSet, ...]:
    out = sorted(set(comps), key=lambda c: (c.offset, c.generators))
    if meter is not None:
        meter.spend(len(out))
    if len(out) > COMPONENT_CAP:
        raise BudgetExceeded(
            "parikh", f"{len(out)} components exceed cap {COMPONENT_CAP}"
        )
    if subsume and len(out) > 1:
        kept: list[LinearSet] = []
        for c in out:
            absorbed = any(_contains(k, c, meter) for k in kept)
            if not absorbed:
                kept = [k for k in kept if not _contains(c, k, meter)]
                kept.append(c)
        out = sorted(kept, key=lambda c: (c.offset, c.generators))
    return tuple(out)


def _value_union(a, b, meter):
    if not a:
        return b
    if not b:
        return a
    return _norm_value(list(a) + list(b), meter)


def _value_product(a, b, meter):
    if not a or not b:
        return ()
    if meter is not None:
        # charge for the raw pairing up front, before building anything
        meter.spend(len(a) * len(b))
    comps = []
    for ca, cb in itertools.product(a, b):
        gens = set(ca.generators) | set(cb.generators)
        comps.append(LinearSet(_vec_add(ca.offset, cb.offset),
                               tuple(sorted(gens))))
    return _norm_value(comps, meter)


def _star_single(c: LinearSet, dim: int, meter) -> tuple[LinearSet, ...]:
    # (v + span P)* = {0} + (v + span(P + {v}))  [exact in the commutative case]
    zero = LinearSet(_vec_zero(dim), ())
    if not any(c.offset):
        base = linear(_vec_zero(dim), c.generators)
        return _norm_value([base], meter)
    grown = linear(c.offset, set(c.generators) | {c.offset})
    return _norm_value([zero, grown], meter)


def _value_star(a, dim: int, meter):
    result = (LinearSet(_vec_zero(dim), ()),)
    for c in a:
        result = _value_product(result, _star_single(c, dim, meter), meter)
    return result


def _eval_monomial(const: Vector, var_list, nu, meter):
    acc = (LinearSet(const, ()),)
    for v in var_list:
        acc = _value_product(acc, nu[v], meter)
        if not acc:
            return ()
    return acc


def parikh_cfg(g: Cfg, coords: Sequence | None = None,
               meter: WorkMeter | None = None) -> SemilinearSet:
    """Letter-counting image of the grammar's language, as a semilinear set.

    Each nonterminal's set of letter-count vectors satisfies the polynomial
    equation read off from its rules.  The least solution is computed by
    Newton iteration: repeatedly linearise the system at the current value
    and solve the linear part exactly (Gaussian elimination whose "inverse"
    is the Kleene star).  Over this idempotent commutative semiring the
    iteration is stationary after at most one round per nonterminal.
    """
    if coords is None:
        coords = tuple(sorted(g.terminals, key=coord_key))
    else:
        coords = tuple(coords)
        missing = set(g.terminals) - set(coords)
        if missing:
            raise ValueError(f"coords omit grammar terminals: {missing}")
    index = {c: i for i, c in enumerate(coords)}
    dim = len(coords)
    g = prune_useless(g)

    def count_vec(symbols) -> Vector:
        v = [0] * dim
        for s in symbols:
            v[index[s]] += 1
        return tuple(v)

    monomials: dict[object, list[tuple[Vector, tuple]]] = {
        v: [] for v in g.nonterminals
    }
    for lhs, rhs in g.rules:
        const = count_vec(s for s in rhs if s in g.terminals)
        var_list = tuple(sorted(
            (s for s in rhs if s in g.nonterminals),
            key=lambda s: repr(s),
        ))
        monomials[lhs].append((const, var_list))

    variables = sorted(g.nonterminals, key=lambda s: repr(s))
    nu = {v: () for v in variables}
    # round 0: constant monomials only
    for v in variables:
        comps = [LinearSet(const, ()) for const, vl in monomials[v] if not vl]
        nu[v] = _norm_value(comps, meter)

    rounds = len(variables) + 1
    for _ in range(rounds):
        f_at = {
            v: _norm_value(
                (c for const, vl in monomials[v]
                 for c in _eval_monomial(const, vl, nu, meter)),
                meter,
            )
            for v in variables
        }
        jac: dict[tuple[object, object], tuple] = {}
        for v in variables:
            for const, vl in monomials[v]:
                for b in dict.fromkeys(vl):
                    rest = list(vl)
                    rest.remove(b)
                    val = _eval_monomial(const, tuple(rest), nu, meter)
                    if not val:
                        continue
                    key = (v, b)
                    jac[key] = _value_union(jac.get(key, ()), val, meter)
        delta = _solve_linear(variables, jac, f_at, dim, meter)
        new_nu = {
            v: _value_union(nu[v], delta[v], meter) for v in variables
        }
        if new_nu == nu:
            break
        nu = new_nu
    return SemilinearSet(coords, nu[g.start])


def _solve_linear(variables, jac, rhs, dim, meter):
    """Least solution of Y_v = union_b jac[v,b] Y_b + rhs[v].

    Forward elimination in variable order with star for self-loops, then
    back substitution; all coefficient arithmetic is on canonical values.
    """
    coeff = dict(jac)
    vec = dict(rhs)
    n = len(variables)
    for i, v in enumerate(variables):
        self_loop = coeff.pop((v, v), None)
        if self_loop:
            s = _value_star(self_loop, dim, meter)
            vec[v] = _value_product(s, vec[v], meter)
            for b in variables[i + 1:]:
                c = coeff.get((v, b))
                if c:
                    coeff[(v, b)] = _value_product(s, c, meter)
        for w in variables[i + 1:]:
            c = coeff.pop((w, v), None)
            if not c:
                continue
            vec[w] = _value_union(vec[w], _value_product(c, vec[v], meter),
                                  meter)
            for b in variables[i + 1:]:
                cv = coeff.get((v, b))
                if cv:
                    coeff[(w, b)] = _value_union(
                        coeff.get((w, b), ()),
                        _value_product(c, cv, meter), meter
                    )
    for i in range(n - 1, -1, -1):
        v = variables[i]
        acc = vec[v]
        for b in variables[i + 1:]:
            c = coeff.get((v, b))
            if c:
                acc = _value_union(acc, _value_product(c, vec[b], meter),
                                   meter)
        vec[v] = acc
    return vec


def _nfa_to_cfg(a: Nfa) -> Cfg:
    """Right-linear grammar for the automaton's language."""
    var = {q: ("q", q) for q in a.states}
    start = "@A"
    rules = [(start, (var[q],)) for q in a.initial]
    for src, sym, dst in a.transitions:
        if sym is None:
            rules.append((var[src], (var[dst],)))
        else:
            rules.append((var[src], (sym, var[dst])))
    for q in a.accepting:
        rules.append((var[q], ()))
    return make_cfg(
        set(var.values()) | {start}, a.alphabet, rules, start
    )


def parikh_nfa(a: Nfa, coords: Sequence | None = None,
               meter: WorkMeter | None = None) -> SemilinearSet:
    """Letter-counting image of a finite automaton's language."""
    return parikh_cfg(_nfa_to_cfg(a), coords=coords, meter=meter)
