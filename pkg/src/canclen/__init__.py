"""Cancellation norms and rational stable lengths on free and universal
Coxeter groups: exact word-level dynamic programming, formal-language and
semilinear-set machinery, and the closed forms of norm growth sequences.
"""

from .budget import BudgetExceeded, WorkMeter
from .envelope import envelope_monoid, envelope_semilinear, shift_form
from .grammar import (
    Cfg,
    Nfa,
    StringHom,
    cfg_image,
    custom_presentation,
    cyk_membership,
    default_markers,
    deletion_distance,
    enumeration_nfa,
    erasing_hom,
    hom,
    intersect_regular,
    inverse_hom,
    language_upto,
    make_cfg,
    nfa_accepts,
    nfa_language_upto,
    parse_grammar_text,
    project,
    prune_useless,
    simplify_cfg,
    subword_nfa,
    to_cnf,
    word_problem_grammar,
)
from .pipeline import (
    EmpiricalResult,
    PipelineBudgets,
    PipelineReport,
    SymbolicResult,
    compare_form_to_values,
    cross_check,
    empirical_analysis,
    empirical_sequence,
    empirical_tau,
    exit_code_for,
    symbolic_analysis,
    symbolic_tau,
)
from .semilinear import (
    LinearSet,
    MonoidLinearMap,
    SemilinearSet,
    frobenius_start,
    hilbert_basis,
    linear,
    linear_map,
    minimal_solutions,
    parikh_cfg,
    parikh_nfa,
    semilinear,
    semilinear_to_json,
    sl_diagonal,
    sl_image,
    sl_intersect,
    sl_membership,
    sl_product,
    sl_union,
    sl_universe,
)
from .sequences import (
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
from .words import (
    Letter,
    NormQuery,
    Presentation,
    brute_force_norm,
    cancellation_norm,
    free_group,
    free_reduce,
    is_reduced,
    norm_witness,
    parse_letter,
    parse_word,
    power_word,
    turn_lower_bound,
    turn_quasimorphism,
    universal_coxeter,
    word_text,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
