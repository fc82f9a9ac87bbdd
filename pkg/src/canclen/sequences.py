"""Eventually periodic-with-drift integer sequences.

A sequence a_0, a_1, ... is *semi-arithmetic* when beyond a finite
preperiod it splits along residue classes mod a period m into arithmetic
progressions: a_{mj+n} = c_n + d_n * j.  Values may be the formal infinity
(math.inf) on classes where the sequence is undefined/unreachable; such
classes carry difference 0 by convention.

This module provides the closed-form type, exact pointwise minima of two
forms, fitting a form to an observed window with minimality guarantees,
step-bound checks, and the rational limit a_k / k when it exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .words import INF

ExtInt = int | float  # int, or math.inf


def is_infinite(x: ExtInt) -> bool:
    return isinstance(x, float) and math.isinf(x)


def _ceil_div(a: int, b: int) -> int:
    if b <= 0:
        raise ValueError("positive divisor required")
    return -((-a) // b)


@dataclass(frozen=True)
class ArithmeticTail:
    """One residue class tail: value c + d*j at the j-th member."""

    intercept: ExtInt
    difference: int

    def __post_init__(self):
        if is_infinite(self.intercept):
            if self.difference != 0:
                raise ValueError("infinite class must have difference 0")
        elif not isinstance(self.intercept, int):
            raise ValueError(f"intercept must be int or inf: {self.intercept!r}")
        if self.difference < 0:
            raise ValueError("negative per-period growth is not allowed")

    def at(self, j: int) -> ExtInt:
        if is_infinite(self.intercept):
            return INF
        return self.intercept + self.difference * j


@dataclass(frozen=True)
class SemiArithmeticForm:
    """Closed form: explicit preperiod, then per-class arithmetic tails.

    ``value(k)`` reads ``preperiod[k]`` for k < len(preperiod) and
    ``tails[k % period].at(k // period)`` beyond.  ``window`` optionally
    records how many tail steps per class were confirmed against data.
    """

    preperiod: tuple[ExtInt, ...]
    period: int
    tails: tuple[ArithmeticTail, ...]
    window: int | None = None

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be >= 1")
        if len(self.tails) != self.period:
            raise ValueError("one tail per residue class required")
        for v in self.preperiod:
            if not isinstance(v, int) and not is_infinite(v):
                raise ValueError(f"preperiod entry must be int or inf: {v!r}")

    @property
    def preperiod_length(self) -> int:
        return len(self.preperiod)

    def value(self, k: int) -> ExtInt:
        if k < 0:
            raise ValueError("index must be nonnegative")
        if k < len(self.preperiod):
            return self.preperiod[k]
        return self.tails[k % self.period].at(k // self.period)

    def values(self, count: int) -> list[ExtInt]:
        return [self.value(k) for k in range(count)]

    @property
    def uniform(self) -> bool:
        """All classes eventually finite with one shared growth rate."""
        if any(is_infinite(t.intercept) for t in self.tails):
            return False
        return len({t.difference for t in self.tails}) == 1


def make_form(preperiod: Sequence[ExtInt], period: int,
              tails: Sequence[ArithmeticTail | tuple],
              window: int | None = None) -> SemiArithmeticForm:
    fixed = []
    for t in tails:
        if isinstance(t, ArithmeticTail):
            fixed.append(t)
        else:
            c, d = t
            fixed.append(ArithmeticTail(c, 0 if is_infinite(c) else int(d)))
    return SemiArithmeticForm(tuple(preperiod), period, tuple(fixed), window)


def limit_tau(form: SemiArithmeticForm) -> Fraction:
    """The limit of value(k)/k, as an exact rational."""
    if any(is_infinite(t.intercept) for t in form.tails):
        raise ValueError("no rational limit: some residue class stays infinite")
    diffs = {t.difference for t in form.tails}
    if len(diffs) > 1:
        raise ValueError(
            f"no rational limit: residue classes grow at different rates {sorted(diffs)}"
        )
    return Fraction(diffs.pop(), form.period)


def _class_line(form: SemiArithmeticForm, super_period: int, n: int):
    """Tail of class n mod super_period as (c, d), rebased so the j-th
    member sits at index super_period*j + n.  Requires period | super_period."""
    m = form.period
    base = form.tails[n % m]
    if is_infinite(base.intercept):
        return (INF, 0)
    shift = (n - (n % m)) // m
    c = base.intercept + base.difference * shift
    d = base.difference * (super_period // m)
    return (c, d)


def min_forms(a: SemiArithmeticForm, b: SemiArithmeticForm) -> SemiArithmeticForm:
    """Exact pointwise minimum of two forms."""
    big = math.lcm(a.period, b.period)
    t_min = max(a.preperiod_length, b.preperiod_length)
    tails = []
    class_start = []
    for n in range(big):
        j_min = max(0, _ceil_div(t_min - n, big))
        ca, da = _class_line(a, big, n)
        cb, db = _class_line(b, big, n)
        if is_infinite(ca) and is_infinite(cb):
            tails.append((INF, 0))
            j_star = j_min
        elif is_infinite(ca):
            tails.append((cb, db))
            j_star = j_min
        elif is_infinite(cb):
            tails.append((ca, da))
            j_star = j_min
        elif da == db:
            tails.append((min(ca, cb), da))
            j_star = j_min
        else:
            # lines cross at most once; winner is the shallower one
            (cw, dw), (cl, dl) = ((ca, da), (cb, db)) if da < db else ((cb, db), (ca, da))
            crossing = _ceil_div(cw - cl, dl - dw)
            tails.append((cw, dw))
            j_star = max(j_min, crossing)
        class_start.append(big * j_star + n)
    t_new = max([t_min] + class_start)
    pre = [min(a.value(k), b.value(k)) for k in range(t_new)]
    win = None
    if a.window is not None or b.window is not None:
        win = min(w for w in (a.window, b.window) if w is not None)
    return make_form(pre, big, tails, window=win)


def fit_semi_arithmetic(values: Sequence[ExtInt], max_period: int = 8,
                        min_tail_reps: int = 3) -> SemiArithmeticForm | None:
    """Fit the (period, preperiod)-lexicographically minimal form to data.

    Each residue class tail must be confirmed by at least min_tail_reps
    consecutive equal differences (so min_tail_reps+1 observed members),
    the differences must be nonnegative, and a class must be all finite or
    all infinite.  Returns None when no feasible (period, cut) explains the
    window; raises when the window is too short to confirm anything.
    """
    vals = [v if is_infinite(v) else int(v) for v in values]
    n_vals = len(vals)
    need = min_tail_reps + 1
    if n_vals < max_period * (min_tail_reps + 2):
        raise ValueError(
            f"window of {n_vals} values is too short for max_period="
            f"{max_period} with {min_tail_reps} confirming steps; "
            f"need {max_period * (min_tail_reps + 2)}"
        )
    for m in range(1, max_period + 1):
        if n_vals < m * need:
            break
        t_max = n_vals - m * need
        for t_cut in range(t_max + 1):
            tails = _try_fit(vals, m, t_cut, min_tail_reps)
            if tails is None:
                continue
            confirmed = min(
                len(range(t_cut + ((n - t_cut) % m), n_vals, m)) - 1
                for n in range(m)
            )
            return make_form(tuple(vals[:t_cut]), m, tails, window=confirmed)
    return None


def _try_fit(vals, m, t_cut, min_tail_reps):
    tails = []
    for n in range(m):
        first = t_cut + ((n - t_cut) % m)
        terms = vals[first::m]
        if len(terms) < min_tail_reps + 1:
            return None
        infinite = [is_infinite(v) for v in terms]
        if all(infinite):
            tails.append((INF, 0))
            continue
        if any(infinite):
            return None
        diffs = {b - a for a, b in zip(terms, terms[1:])}
        if len(diffs) != 1:
            return None
        d = diffs.pop()
        if d < 0:
            return None
        tails.append((terms[0] - d * (first // m), d))
    return tails


def check_step_bound(values: Sequence[ExtInt], step: int) -> bool:
    """Does a_{k+1} <= a_k + step hold throughout the window?

    An infinite a_k bounds nothing (holds trivially); a finite a_k followed
    by an infinite a_{k+1} violates the bound.
    """
    for prev, cur in zip(values, values[1:]):
        if is_infinite(prev):
            continue
        if is_infinite(cur) or cur > prev + step:
            return False
    return True


def form_step_bounded(form: SemiArithmeticForm, step: int) -> bool:
    """check_step_bound for the whole infinite sequence, decided exactly.

    Tail-vs-tail comparisons are linear in the class index, so violations
    beyond the explicitly scanned prefix are ruled out by slope analysis;
    the scan horizon is pushed past the last possible crossing.
    """
    m = form.period
    t_len = form.preperiod_length
    extra = 0
    for n in range(m):
        here = form.tails[n]
        if is_infinite(here.intercept):
            continue
        succ = form.tails[(n + 1) % m]
        if is_infinite(succ.intercept):
            return False
        c_next = succ.intercept + (succ.difference if n + 1 == m else 0)
        d_next = succ.difference
        if d_next > here.difference:
            return False
        if d_next < here.difference:
            last_bad = _ceil_div(
                c_next - here.intercept - step, here.difference - d_next
            )
            extra = max(extra, last_bad)
        elif c_next - here.intercept > step:
            return False
    horizon = t_len + m * (extra + 2)
    for k in range(max(horizon, 1)):
        prev, cur = form.value(k), form.value(k + 1)
        if is_infinite(prev):
            continue
        if is_infinite(cur) or cur > prev + step:
            return False
    return True


def form_to_json(form: SemiArithmeticForm) -> dict:
    def enc(v: ExtInt):
        return "inf" if is_infinite(v) else v

    tau: str | None
    try:
        tau = str(limit_tau(form))
    except ValueError:
        tau = None
    return {
        "preperiod": [enc(v) for v in form.preperiod],
        "period": form.period,
        "residues": [
            {"intercept": enc(t.intercept), "difference": t.difference}
            for t in form.tails
        ],
        "window": form.window,
        "uniform": form.uniform,
        "tau": tau,
    }
