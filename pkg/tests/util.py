"""Shared helpers for the test suite: conversions between library types
and the plain-tuple formats the oracle implementations use, random word
and set generators, and an in-process CLI runner."""

from __future__ import annotations

import contextlib
import io

from canclen import Letter, cli, free_reduce, is_reduced


def to_pairs(w):
    """Library word -> list of (generator, sign) pairs for the oracles."""
    return [(l.gen, l.sign) for l in w]


def make_word(pairs):
    """(generator, sign) pairs -> library word."""
    return tuple(Letter(g, s) for g, s in pairs)


def cfg_rules(g):
    """Library grammar -> the dict form the naive fixpoint oracle eats.

    Every nonterminal appears as a key (possibly with no alternatives) so
    the oracle can tell variables and terminals apart.
    """
    rules = {v: [] for v in g.nonterminals}
    for lhs, rhs in g.rules:
        rules[lhs].append(tuple(rhs))
    return rules


def random_word(rng, p, length):
    """Uniformly random word of exactly the given length."""
    letters = p.letters()
    return tuple(rng.choice(letters) for _ in range(length))


def random_reduced_word(rng, p, length):
    """Random word with no adjacent cancelling pair (empty if length 0)."""
    letters = p.letters()
    out = []
    while len(out) < length:
        choices = [l for l in letters if not out or not p.cancels(out[-1], l)]
        out.append(rng.choice(choices))
    w = tuple(out)
    assert is_reduced(p, w) and free_reduce(p, w) == w
    return w


def run_cli(argv):
    """Invoke the CLI entry point in-process; returns (code, out, err)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(list(argv))
    return code, out.getvalue(), err.getvalue()
