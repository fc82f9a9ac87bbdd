"""Command-line front end.

Commands: ``norm`` (norm of single words), ``seq`` (the k-indexed norm
table), ``tau`` (stable length via the empirical and/or symbolic route),
and ``grammar check`` (validate a grammar file and optionally test a
word).  Exit codes: 0 success, 2 input/parse errors, 3 when the two
routes disagree, 4 when budgets were exhausted with no result.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .grammar import (
    custom_presentation,
    cyk_membership,
    deletion_distance,
    parse_grammar_text,
)
from .pipeline import (
    DEFAULT_MAX_PERIOD,
    DEFAULT_MIN_TAIL_REPS,
    DEFAULT_WINDOW,
    PipelineBudgets,
    cross_check,
    empirical_sequence,
    empirical_tau,
    exit_code_for,
    symbolic_tau,
)
from .sequences import is_infinite
from .words import (
    CUSTOM,
    UNIVERSAL_COXETER,
    NormQuery,
    Presentation,
    cancellation_norm,
    free_group,
    parse_word,
    universal_coxeter,
    word_text,
)


class CliError(Exception):
    """User-input problem; reported on stderr with exit code 2."""


def load_presentation(spec_text: str) -> Presentation:
    kind, sep, arg = spec_text.partition(":")
    if not sep or not arg:
        raise CliError(
            f"group must look like free:2, coxeter:3, or custom:FILE "
            f"(got {spec_text!r})"
        )
    if kind == "free":
        try:
            rank = int(arg)
        except ValueError:
            raise CliError(f"free rank must be an integer (got {arg!r})")
        return free_group(rank)
    if kind == "coxeter":
        try:
            rank = int(arg)
        except ValueError:
            raise CliError(f"coxeter rank must be an integer (got {arg!r})")
        return universal_coxeter(rank)
    if kind == "custom":
        path = Path(arg)
        try:
            text = path.read_text()
        except OSError as exc:
            raise CliError(f"cannot read grammar file {arg!r}: {exc}")
        return custom_presentation(parse_grammar_text(text))
    raise CliError(f"unknown group kind {kind!r}")


def parse_cli_word(p: Presentation, text: str):
    # rank-1 Coxeter convenience: the bare token `s` means s1
    if p.kind == UNIVERSAL_COXETER and p.generators == ("s1",):
        text = " ".join("s1" if t == "s" else t for t in text.split())
    w = parse_word(text, gens=set(p.generators))
    p.validate_word(w)
    return w


def gather_words(args, p: Presentation) -> list:
    texts: list[str] = []
    if getattr(args, "word", None):
        texts.extend(args.word)
    if getattr(args, "words", None):
        texts.extend(t.strip() for t in args.words.split(",") if t.strip())
    if not texts:
        raise CliError("no input words; use --word or --words")
    return [parse_cli_word(p, t) for t in texts]


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _enc(v):
    return "inf" if is_infinite(v) else v


def cmd_norm(args) -> int:
    p = load_presentation(args.group)
    words = gather_words(args, p)
    results = []
    for w in words:
        if p.kind == CUSTOM:
            value = deletion_distance(p.grammar, w)
        else:
            value = cancellation_norm(p, w)
        results.append((w, value))
    if args.format == "json":
        _emit(args, json.dumps({
            "schema": 1,
            "group": p.spec(),
            "results": [
                {"word": word_text(w), "norm": _enc(v)} for w, v in results
            ],
        }, sort_keys=True, indent=2))
    elif args.format == "csv":
        lines = ["word,norm"]
        lines += [f"{word_text(w)},{_enc(v)}" for w, v in results]
        _emit(args, "\n".join(lines))
    else:
        _emit(args, "\n".join(str(_enc(v)) for _, v in results))
    return 0


def cmd_seq(args) -> int:
    p = load_presentation(args.group)
    words = gather_words(args, p)
    query = NormQuery(p, tuple(words))
    values = empirical_sequence(query, args.kmax)
    if args.format == "json":
        _emit(args, json.dumps({
            "schema": 1,
            "group": p.spec(),
            "words": [word_text(w) for w in words],
            "values": [_enc(v) for v in values],
        }, sort_keys=True, indent=2))
    elif args.format == "csv":
        lines = ["k,norm"] + [f"{k},{_enc(v)}" for k, v in enumerate(values)]
        _emit(args, "\n".join(lines))
    else:
        width = len(str(args.kmax))
        lines = [f"{k:>{width}}  {_enc(v)}" for k, v in enumerate(values)]
        _emit(args, "\n".join(lines))
    return 0


def _budgets_from(args) -> PipelineBudgets:
    if getattr(args, "budget_trees", None):
        return PipelineBudgets(parikh_work=args.budget_trees)
    return PipelineBudgets()


def _tau_pretty(report) -> str:
    lines = [f"verdict: {report.verdict}"]
    lines.append(
        "tau: " + ("undetermined" if report.tau is None else str(report.tau))
    )
    if report.check_horizon is not None:
        lines.append(f"checked k <= {report.check_horizon}")
    if report.symbolic is not None:
        env = report.symbolic.envelope
        lines.append(
            f"closed form: period {env.period}, preperiod "
            f"{env.preperiod_length}, growth per period "
            f"{sorted({t.difference for t in env.tails})}"
        )
        for stage, size in report.symbolic.stage_sizes.items():
            lines.append(f"  stage {stage}: {size}")
    if report.empirical is not None:
        e = report.empirical
        shown = ", ".join(str(_enc(v)) for v in e.values[:13])
        lines.append(f"empirical values: {shown}{'...' if len(e.values) > 13 else ''}")
        if e.fitted is None:
            lines.append("empirical fit: none")
        else:
            f = e.fitted
            lines.append(
                f"empirical fit: period {f.period}, preperiod "
                f"{f.preperiod_length}, confirmed steps {f.window}"
            )
    if report.budget_failure is not None:
        stage, message = report.budget_failure
        lines.append(f"budget exceeded at stage {stage}: {message}")
    return "\n".join(lines)


def cmd_tau(args) -> int:
    p = load_presentation(args.group)
    words = gather_words(args, p)
    query = NormQuery(p, tuple(words))
    budgets = _budgets_from(args)
    if args.method == "empirical":
        report = empirical_tau(
            query, args.kmax or DEFAULT_WINDOW,
            args.max_period, args.min_tail_reps,
        )
    elif args.method == "symbolic":
        report = symbolic_tau(query, budgets)
    else:
        report = cross_check(
            query, kmax=args.kmax, budgets=budgets,
            max_period=args.max_period, min_tail_reps=args.min_tail_reps,
        )
    if args.format == "json":
        _emit(args, report.to_json_text())
    elif args.format == "csv":
        _emit(args, report.to_csv())
    else:
        _emit(args, _tau_pretty(report))
    return exit_code_for(report)


def cmd_grammar_check(args) -> int:
    path = Path(args.file)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CliError(f"cannot read grammar file {args.file!r}: {exc}")
    g = parse_grammar_text(text)
    info = {
        "schema": 1,
        "variables": len(g.nonterminals),
        "rules": len(g.rules),
        "terminals": sorted(t.token() for t in g.terminals),
        "empty_word_accepted": cyk_membership(g, ()),
    }
    if args.word is not None:
        w = parse_word(args.word, gens={t.gen for t in g.terminals})
        info["word"] = word_text(w)
        info["member"] = cyk_membership(g, w)
        info["deletion_distance"] = _enc(deletion_distance(g, w))
    if args.format == "json":
        _emit(args, json.dumps(info, sort_keys=True, indent=2))
    else:
        _emit(args, "\n".join(f"{k}: {v}" for k, v in info.items()
                              if k != "schema"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="canclen",
        description=(
            "Cancellation norms and rational stable lengths on free and "
            "universal Coxeter groups."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, kmax_default=None):
        sp.add_argument("--group", required=True,
                        help="free:<rank>, coxeter:<n>, or custom:<grammar-file>")
        sp.add_argument("--word", action="append",
                        help="one word (repeatable); tokens like: a b^-1 a^-1")
        sp.add_argument("--words",
                        help="comma-separated list of words")
        sp.add_argument("--format", choices=("pretty", "json", "csv"),
                        default="pretty")
        sp.add_argument("--out", help="write output to this file")
        if kmax_default is not None:
            sp.add_argument("--kmax", type=int, default=kmax_default,
                            help="largest exponent k")

    p_norm = sub.add_parser("norm", help="norm of each input word")
    add_common(p_norm)
    p_norm.set_defaults(func=cmd_norm)

    p_seq = sub.add_parser("seq", help="table of norms of the k-th powers")
    add_common(p_seq, kmax_default=12)
    p_seq.set_defaults(func=cmd_seq)

    p_tau = sub.add_parser("tau", help="stable length (limit of norm/k)")
    add_common(p_tau)
    p_tau.add_argument("--kmax", type=int, default=None,
                       help="cross-check horizon / empirical window")
    p_tau.add_argument("--method", choices=("both", "empirical", "symbolic"),
                       default="both")
    p_tau.add_argument("--max-period", type=int, default=DEFAULT_MAX_PERIOD)
    p_tau.add_argument("--min-tail-reps", type=int,
                       default=DEFAULT_MIN_TAIL_REPS)
    p_tau.add_argument("--budget-trees", type=int, default=None,
                       help="cap on symbolic counting work")
    p_tau.set_defaults(func=cmd_tau)

    p_gram = sub.add_parser("grammar", help="grammar-file utilities")
    gram_sub = p_gram.add_subparsers(dest="grammar_command", required=True)
    p_check = gram_sub.add_parser("check", help="validate a grammar file")
    p_check.add_argument("file", help="grammar file in the rule DSL")
    p_check.add_argument("--word", help="test this word against the grammar")
    p_check.add_argument("--format", choices=("pretty", "json"),
                         default="pretty")
    p_check.add_argument("--out", help="write output to this file")
    p_check.set_defaults(func=cmd_grammar_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
