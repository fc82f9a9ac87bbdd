"""Stable-length analysis end to end: empirical route, symbolic route,
and the cross-check between them.

Empirical route: evaluate the norm of w1^k ... wn^k for k in a window by
dynamic programming, then fit a closed form to the observed values.

Symbolic route: build the regular language that enumerates all subword
choices of all powers (one fresh marker letter per input word counting its
exponent), pull the word-problem language back through the marker-erasing
projection, intersect, take the letter-counting image, constrain all
marker counts to be equal, map each solution to (exponent, letters
deleted), and read the norm sequence off the lower envelope.  Every stage
is exact; resource blowups surface as explicit budget failures naming the
stage.

A report pairs both routes.  The verdict is "certified" only when the
symbolic closed form reproduces every computed empirical value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .budget import BudgetExceeded, WorkMeter
from .envelope import envelope_semilinear
from .grammar import (
    Cfg,
    Nfa,
    deletion_distance,
    enumeration_nfa,
    erasing_hom,
    intersect_regular,
    inverse_hom,
    simplify_cfg,
    word_problem_grammar,
)
from .semilinear import (
    SemilinearSet,
    linear_map,
    parikh_cfg,
    semilinear_to_json,
    sl_diagonal,
    sl_image,
    sl_intersect,
    sl_product,
    sl_universe,
)
from .sequences import (
    SemiArithmeticForm,
    check_step_bound,
    fit_semi_arithmetic,
    form_to_json,
    is_infinite,
    limit_tau,
)
from .words import CUSTOM, NormQuery, cancellation_norm, power_word, word_text

DEFAULT_WINDOW = 40
DEFAULT_MAX_PERIOD = 8
DEFAULT_MIN_TAIL_REPS = 3


@dataclass(frozen=True)
class PipelineBudgets:
    """Hard caps for the symbolic stages, all per-invocation."""

    parikh_work: int = 1_000_000
    hilbert_nodes: int = 2_000_000
    envelope_onset: int = 100_000


@dataclass(frozen=True)
class EmpiricalResult:
    values: tuple
    step_bound: int
    step_bound_ok: bool
    fitted: SemiArithmeticForm | None
    slope_estimate: float | None
    max_period: int
    min_tail_reps: int


@dataclass(frozen=True)
class SymbolicResult:
    envelope: SemiArithmeticForm
    markers: tuple
    grammars: Mapping[str, Cfg]
    automaton: Nfa
    parikh: SemilinearSet
    constrained: SemilinearSet
    projected: SemilinearSet
    stage_sizes: Mapping[str, object]
    work_used: int


@dataclass(frozen=True)
class PipelineReport:
    query: NormQuery
    verdict: str  # certified | heuristic | mismatch
    tau: Fraction | None
    empirical: EmpiricalResult | None
    symbolic: SymbolicResult | None
    budget_failure: tuple[str, str] | None
    check_horizon: int | None

    def to_json(self) -> dict:
        def enc(v):
            return "inf" if is_infinite(v) else v

        p = self.query.presentation
        out = {
            "schema": 1,
            "group": p.spec(),
            "words": [word_text(w) for w in self.query.words],
            "verdict": self.verdict,
            "tau": None if self.tau is None else str(self.tau),
            "step_bound": self.query.step_bound,
            "check_horizon": self.check_horizon,
            "empirical": None,
            "symbolic": None,
            "budget": None,
        }
        if self.empirical is not None:
            e = self.empirical
            out["empirical"] = {
                "values": [enc(v) for v in e.values],
                "step_bound_ok": e.step_bound_ok,
                "fitted": None if e.fitted is None else form_to_json(e.fitted),
                "slope_estimate": e.slope_estimate,
                "max_period": e.max_period,
                "min_tail_reps": e.min_tail_reps,
            }
        if self.symbolic is not None:
            s = self.symbolic
            out["symbolic"] = {
                "envelope": form_to_json(s.envelope),
                "stages": dict(s.stage_sizes),
                "norm_pairs": semilinear_to_json(s.projected),
                "work": s.work_used,
            }
        if self.budget_failure is not None:
            stage, message = self.budget_failure
            out["budget"] = {"stage": stage, "message": message}
        return out

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        lines = ["k,norm"]
        values: Sequence = ()
        if self.empirical is not None:
            values = self.empirical.values
        elif self.symbolic is not None and self.check_horizon is not None:
            values = self.symbolic.envelope.values(self.check_horizon + 1)
        for k, v in enumerate(values):
            lines.append(f"{k},{'inf' if is_infinite(v) else v}")
        return "\n".join(lines) + "\n"


def exit_code_for(report: PipelineReport) -> int:
    if report.verdict == "mismatch":
        return 3
    if report.tau is None and report.budget_failure is not None:
        return 4
    return 0


def empirical_sequence(query: NormQuery, kmax: int) -> list:
    """Norm of the k-th power word for k = 0..kmax."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    p = query.presentation
    values = []
    for k in range(kmax + 1):
        w = power_word(query.words, k)
        if p.kind == CUSTOM:
            values.append(deletion_distance(p.grammar, w))
        else:
            values.append(cancellation_norm(p, w))
    return values


def _extend_sequence(query: NormQuery, values: list, upto: int) -> list:
    p = query.presentation
    for k in range(len(values), upto + 1):
        w = power_word(query.words, k)
        if p.kind == CUSTOM:
            values.append(deletion_distance(p.grammar, w))
        else:
            values.append(cancellation_norm(p, w))
    return values


def _slope_estimate(values: Sequence) -> float | None:
    pts = [(k, v) for k, v in enumerate(values) if not is_infinite(v)]
    if len(pts) < 2:
        return None
    n = len(pts)
    sx = sum(k for k, _ in pts)
    sy = sum(v for _, v in pts)
    sxx = sum(k * k for k, _ in pts)
    sxy = sum(k * v for k, v in pts)
    den = n * sxx - sx * sx
    if den == 0:
        return None
    return (n * sxy - sx * sy) / den


def _fit_clamped(values: Sequence, max_period: int, min_tail_reps: int):
    feasible = len(values) // (min_tail_reps + 2)
    eff = min(max_period, feasible)
    if eff < 1:
        return None, 0
    return fit_semi_arithmetic(values, eff, min_tail_reps), eff


def empirical_analysis(query: NormQuery, kmax: int = DEFAULT_WINDOW,
                       max_period: int = DEFAULT_MAX_PERIOD,
                       min_tail_reps: int = DEFAULT_MIN_TAIL_REPS
                       ) -> EmpiricalResult:
    values = empirical_sequence(query, kmax)
    bound = query.step_bound
    ok = check_step_bound(values, bound)
    if query.presentation.kind != CUSTOM:
        if not ok:
            raise RuntimeError(
                "norm sequence violated its one-step growth bound; "
                "this indicates a defect in the norm computation"
            )
        if any(is_infinite(v) for v in values):
            raise RuntimeError(
                "norm sequence has an infinite entry for a built-in group; "
                "this indicates a defect in the norm computation"
            )
    fitted, eff = _fit_clamped(values, max_period, min_tail_reps)
    return EmpiricalResult(
        values=tuple(values),
        step_bound=bound,
        step_bound_ok=ok,
        fitted=fitted,
        slope_estimate=_slope_estimate(values),
        max_period=eff,
        min_tail_reps=min_tail_reps,
    )


def _cost_projection(coords, markers, words):
    """Map letter/marker counts to (exponent, letters deleted)."""
    marker_index = {m: i for i, m in enumerate(markers)}
    lengths = [len(w) for w in words]
    k_row = tuple(1 if c == markers[0] else 0 for c in coords)
    cost_row = tuple(
        lengths[marker_index[c]] if c in marker_index else -1 for c in coords
    )
    return linear_map(coords, ("k", "cost"), (k_row, cost_row))


def symbolic_analysis(query: NormQuery,
                      budgets: PipelineBudgets = PipelineBudgets()
                      ) -> SymbolicResult:
    """Run the exact formal-language pipeline; raises BudgetExceeded."""
    p = query.presentation
    base = word_problem_grammar(p)
    automaton, markers = enumeration_nfa(query.words)
    erase_markers = erasing_hom(p.letters(), markers)
    preimage = inverse_hom(base, erase_markers)
    intersection = intersect_regular(preimage, automaton)
    small = simplify_cfg(intersection)

    meter = WorkMeter(limit=budgets.parikh_work, stage="parikh")
    counts = parikh_cfg(small, meter=meter)

    coords = counts.coords
    marker_set = set(markers)
    letter_coords = [c for c in coords if c not in marker_set]
    marker_coords = [c for c in coords if c in marker_set]
    ordered = letter_coords + marker_coords
    perm = linear_map(
        ordered, coords,
        [tuple(1 if o == c else 0 for o in ordered) for c in coords],
    )
    equal_markers = sl_image(
        perm,
        sl_product(sl_universe(letter_coords), sl_diagonal(marker_coords)),
    )
    constrained = sl_intersect(counts, equal_markers,
                               max_nodes=budgets.hilbert_nodes)
    projected = sl_image(
        _cost_projection(coords, markers, query.words), constrained
    )
    env = envelope_semilinear(projected, max_onset=budgets.envelope_onset)
    finite_growths = {
        t.difference for t in env.tails if not is_infinite(t.intercept)
    }
    if len(finite_growths) > 1:
        raise RuntimeError(
            "stable-length envelope shows unequal growth across residue "
            f"classes {sorted(finite_growths)}; this contradicts the "
            "guaranteed structure and indicates a defect in the pipeline"
        )
    stage_sizes = {
        "enumeration": automaton.size,
        "marker_preimage": preimage.size,
        "intersection": intersection.size,
        "simplified": small.size,
        "parikh": {"components": len(counts.components)},
        "constrained": {"components": len(constrained.components)},
        "cost_image": {"components": len(projected.components)},
        "work": meter.used,
    }
    return SymbolicResult(
        envelope=env,
        markers=markers,
        grammars={
            "marker_preimage": preimage,
            "intersection": intersection,
            "simplified": small,
        },
        automaton=automaton,
        parikh=counts,
        constrained=constrained,
        projected=projected,
        stage_sizes=stage_sizes,
        work_used=meter.used,
    )


def _symbolic_tau(env: SemiArithmeticForm) -> Fraction | None:
    try:
        return limit_tau(env)
    except ValueError:
        return None


def empirical_tau(query: NormQuery, kmax: int = DEFAULT_WINDOW,
                  max_period: int = DEFAULT_MAX_PERIOD,
                  min_tail_reps: int = DEFAULT_MIN_TAIL_REPS
                  ) -> PipelineReport:
    emp = empirical_analysis(query, kmax, max_period, min_tail_reps)
    tau = None
    if emp.fitted is not None and emp.fitted.uniform:
        tau = limit_tau(emp.fitted)
    return PipelineReport(
        query=query,
        verdict="heuristic",
        tau=tau,
        empirical=emp,
        symbolic=None,
        budget_failure=None,
        check_horizon=kmax,
    )


def symbolic_tau(query: NormQuery,
                 budgets: PipelineBudgets = PipelineBudgets()
                 ) -> PipelineReport:
    try:
        sym = symbolic_analysis(query, budgets)
    except BudgetExceeded as exc:
        return PipelineReport(
            query=query,
            verdict="heuristic",
            tau=None,
            empirical=None,
            symbolic=None,
            budget_failure=(exc.stage, exc.message),
            check_horizon=None,
        )
    return PipelineReport(
        query=query,
        verdict="heuristic",
        tau=_symbolic_tau(sym.envelope),
        empirical=None,
        symbolic=sym,
        budget_failure=None,
        check_horizon=None,
    )


def compare_form_to_values(form: SemiArithmeticForm,
                           values: Sequence, horizon: int) -> bool:
    return all(form.value(k) == values[k] for k in range(horizon + 1))


def cross_check(query: NormQuery, kmax: int | None = None,
                budgets: PipelineBudgets = PipelineBudgets(),
                max_period: int = DEFAULT_MAX_PERIOD,
                min_tail_reps: int = DEFAULT_MIN_TAIL_REPS
                ) -> PipelineReport:
    """Run both routes and compare them value by value.

    The horizon defaults to 2*m*(min_tail_reps+2) for the fitted period m
    (at least 12), so it covers the preperiod plus several full periods.
    """
    budget_failure = None
    sym = None
    try:
        sym = symbolic_analysis(query, budgets)
    except BudgetExceeded as exc:
        budget_failure = (exc.stage, exc.message)

    window = kmax if kmax is not None else DEFAULT_WINDOW
    emp = empirical_analysis(query, window, max_period, min_tail_reps)
    if kmax is not None:
        horizon = kmax
    else:
        if emp.fitted is not None:
            m = emp.fitted.period
        elif sym is not None:
            m = sym.envelope.period
        else:
            m = 1
        horizon = max(12, 2 * m * (min_tail_reps + 2))
    values = _extend_sequence(query, list(emp.values), horizon)
    emp = EmpiricalResult(
        values=tuple(values),
        step_bound=emp.step_bound,
        step_bound_ok=emp.step_bound_ok,
        fitted=emp.fitted,
        slope_estimate=emp.slope_estimate,
        max_period=emp.max_period,
        min_tail_reps=emp.min_tail_reps,
    )

    if sym is None:
        tau = None
        if emp.fitted is not None and emp.fitted.uniform:
            tau = limit_tau(emp.fitted)
        return PipelineReport(
            query=query,
            verdict="heuristic",
            tau=tau,
            empirical=emp,
            symbolic=None,
            budget_failure=budget_failure,
            check_horizon=horizon,
        )

    if compare_form_to_values(sym.envelope, values, horizon):
        return PipelineReport(
            query=query,
            verdict="certified",
            tau=_symbolic_tau(sym.envelope),
            empirical=emp,
            symbolic=sym,
            budget_failure=None,
            check_horizon=horizon,
        )
    return PipelineReport(
        query=query,
        verdict="mismatch",
        tau=None,
        empirical=emp,
        symbolic=sym,
        budget_failure=None,
        check_horizon=horizon,
    )
