#!/usr/bin/env python3
"""Norm tables for three worked families of words in the free group on a, b.

Families:
  powers      (a^n b^m)^k        -- norm grows exactly like k(n+m)
  commutator  [a, b]^k           -- norm 2*floor(k/2) + 2, stable slope 1
  conjugate   (a^m b a^-m)^k b^-k -- norm 2*min(m, k), stable slope 0

For each family the script prints the measured norms, the expected closed
form, and the fitted description of the sequence with its limit slope.
"""

import argparse
import sys

from canclen import (
    NormQuery,
    cancellation_norm,
    empirical_analysis,
    empirical_tau,
    free_group,
    parse_word,
    power_word,
)

F2 = free_group(2)


def show_fit(query, kmax):
    rep = empirical_tau(query, kmax=kmax)
    emp = empirical_analysis(query, kmax)
    form = emp.fitted
    if form is None:
        print("  no closed form fitted")
        return
    print(
        f"  fitted: preperiod {form.preperiod_length}, period {form.period}, "
        f"per-class growth {[t.difference for t in form.tails]}, "
        f"confirmed steps {form.window}"
    )
    print(f"  limit of norm/k: {rep.tau}")


def family_powers(kmax):
    print("== (a^n b^m)^k for n, m in {1, 2, 3} ==")
    header = "  n m | " + " ".join(f"{k:>3}" for k in range(1, kmax + 1))
    print(header)
    print("  " + "-" * (len(header) - 2))
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            base = parse_word(" ".join(["a"] * n + ["b"] * m))
            norms = [
                cancellation_norm(F2, power_word((base,), k))
                for k in range(1, kmax + 1)
            ]
            assert norms == [k * (n + m) for k in range(1, kmax + 1)]
            print(f"  {n} {m} | " + " ".join(f"{v:>3}" for v in norms))
    print("  every entry equals k(n+m)\n")


def family_commutator(kmax):
    print("== [a, b]^k ==")
    q = NormQuery(F2, (parse_word("a b a^-1 b^-1"),))
    emp = empirical_analysis(q, kmax)
    print("   k    | " + " ".join(f"{k:>3}" for k in range(kmax + 1)))
    print("   norm | " + " ".join(f"{v:>3}" for v in emp.values))
    assert all(emp.values[k] == 2 * (k // 2) + 2 for k in range(1, kmax + 1))
    print("  every entry (k >= 1) equals 2*floor(k/2) + 2")
    show_fit(q, max(kmax, 40))
    print()


def family_conjugate(kmax):
    print("== (a^m b a^-m)^k b^-k ==")
    for m in range(1, 6):
        u = parse_word(" ".join(["a"] * m + ["b"] + ["a^-1"] * m))
        q = NormQuery(F2, (u, parse_word("b^-1")))
        norms = [
            cancellation_norm(F2, power_word(q.words, k))
            for k in range(1, kmax + 1)
        ]
        assert norms == [2 * min(m, k) for k in range(1, kmax + 1)]
        print(f"  m={m}: " + " ".join(f"{v:>2}" for v in norms))
        show_fit(q, 40)
    print("  every entry equals 2*min(m, k)\n")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kmax", type=int, default=20,
                        help="largest exponent shown in the tables")
    parser.add_argument("--family", default="all",
                        choices=("powers", "commutator", "conjugate", "all"))
    args = parser.parse_args(argv)
    if args.family in ("powers", "all"):
        family_powers(args.kmax)
    if args.family in ("commutator", "all"):
        family_commutator(args.kmax)
    if args.family in ("conjugate", "all"):
        family_conjugate(args.kmax)
    return 0


if __name__ == "__main__":
    sys.exit(main())
