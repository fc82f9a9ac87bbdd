"""Lower envelopes of two-dimensional semilinear sets.

A set of (index, cost) pairs induces the sequence a_k = min cost over
pairs with index k (min of nothing = infinity).  For a finitely generated
monoid of steps the sequence is eventually arithmetic along residue
classes of the most cost-efficient step's index length; the onset is found
by certificate: once a_{k+x1} = a_k + y1 holds on a window as wide as the
largest step, induction extends it to every later index.  Components of a
semilinear set are envelope'd individually, shifted by their offsets, and
combined by exact pointwise minimum.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .budget import BudgetExceeded
from .semilinear import SemilinearSet
from .sequences import (
    INF,
    SemiArithmeticForm,
    is_infinite,
    make_form,
    min_forms,
)


def envelope_monoid(steps: Iterable[Sequence[int]],
                    max_onset: int = 100_000) -> SemiArithmeticForm:
    """Envelope of the monoid generated by (index, cost) steps from (0, 0).

    Steps with index 0 never advance k, so they cannot lower any minimum
    and are dropped.  The result is exact for every k, not a fit.
    """
    pairs = sorted({(int(x), int(y)) for x, y in steps})
    for x, y in pairs:
        if x < 0 or y < 0:
            raise ValueError(f"negative step ({x}, {y})")
    pairs = [(x, y) for x, y in pairs if x > 0]
    if not pairs:
        # nothing advances the index: only (0, 0) is reachable, and the
        # empty certificate window already proves it
        return make_form((0,), 1, ((INF, 0),), window=0)

    x1, y1 = min(pairs, key=lambda p: (Fraction(p[1], p[0]), p[0]))
    width = max(x for x, _ in pairs)

    a: list = [0]

    def extend_to(length: int) -> None:
        while len(a) < length:
            k = len(a)
            best = INF
            for x, y in pairs:
                if x <= k and not is_infinite(a[k - x]):
                    cand = a[k - x] + y
                    if cand < best:
                        best = cand
            a.append(best)

    onset = 0
    while True:
        if onset > max_onset:
            raise BudgetExceeded(
                "envelope", f"no periodicity onset within {max_onset} indices"
            )
        extend_to(onset + width + x1)
        if all(a[k + x1] == a[k] + y1 for k in range(onset, onset + width)):
            break
        onset += 1

    tails = []
    for n in range(x1):
        k0 = onset + ((n - onset) % x1)
        v = a[k0]
        if is_infinite(v):
            tails.append((INF, 0))
        else:
            tails.append((v - y1 * (k0 // x1), y1))
    # window doubles as the certificate width: that many consecutive
    # indices from the onset were seen to satisfy a_{k+x1} = a_k + y1
    return make_form(tuple(a[:onset]), x1, tails, window=width)


def shift_form(form: SemiArithmeticForm, dx: int, dy: int) -> SemiArithmeticForm:
    """The form of k -> value(k - dx) + dy, infinite below dx."""
    if dx < 0 or dy < 0:
        raise ValueError("shift must be nonnegative")
    m = form.period
    pre = [INF] * dx + [
        v if is_infinite(v) else v + dy
        for v in (form.value(k) for k in range(form.preperiod_length))
    ]
    tails = []
    for n in range(m):
        n_src = (n - dx) % m
        t = form.tails[n_src]
        if is_infinite(t.intercept):
            tails.append((INF, 0))
        else:
            q = (n - dx - n_src) // m
            tails.append((t.intercept + t.difference * q + dy, t.difference))
    return make_form(tuple(pre), m, tails, window=form.window)


def envelope_semilinear(s: SemilinearSet,
                        max_onset: int = 100_000) -> SemiArithmeticForm:
    """Min cost at each index for a semilinear set of (index, cost) pairs."""
    if s.dim != 2:
        raise ValueError(
            f"envelope needs (index, cost) pairs; got {s.dim} coordinates"
        )
    acc = make_form((), 1, ((INF, 0),))
    for comp in s.components:
        base = envelope_monoid(comp.generators, max_onset=max_onset)
        shifted = shift_form(base, comp.offset[0], comp.offset[1])
        acc = min_forms(acc, shifted)
    return acc
