"""Signed generator words over free and universal Coxeter presentations.

Letters, words, presentations and norm queries, the interval dynamic
program computing the cancellation length (the minimum number of letters
to delete so that the rest multiplies to the identity), an exhaustive
oracle for it, and the lattice-turn quasimorphism that lower-bounds the
norm in rank two.
"""
from __future__ import annotations

import itertools
import math
import string
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

FREE = "free"
UNIVERSAL_COXETER = "coxeter"
CUSTOM = "custom"

INF = math.inf

_GEN_CHARS = set(string.ascii_letters + string.digits + "_#")


@dataclass(frozen=True)
class Letter:
    """A group generator or its formal inverse."""

    gen: str
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {self.sign!r}")
        if not self.gen or not set(self.gen) <= _GEN_CHARS:
            raise ValueError(f"bad generator name {self.gen!r}")

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)

    def token(self) -> str:
        return self.gen + ("^-1" if self.sign < 0 else "")

    @property
    def sort_key(self):
        return (self.gen, 0 if self.sign > 0 else 1)

    def __repr__(self):
        return f"Letter({self.token()!r})"


Word = tuple  # tuple of Letter


def parse_letter(token: str) -> Letter:
    if token.endswith("^-1"):
        return Letter(token[:-3], -1)
    if token.endswith("^1"):
        return Letter(token[:-2], 1)
    return Letter(token, 1)


def parse_word(text: str, gens: Optional[Iterable[str]] = None) -> Word:
    """Parse a whitespace separated word, e.g. ``"a b^-1 a"``.

    The token ``e`` denotes the empty word and is dropped, unless ``gens``
    is given and contains a generator literally named ``e``.
    """
    known = set(gens) if gens is not None else None
    letters = []
    for token in text.split():
        if token == "e" and (known is None or "e" not in known):
            continue
        letters.append(parse_letter(token))
    return tuple(letters)


def word_text(w: Word) -> str:
    return " ".join(l.token() for l in w) if w else "e"


@dataclass(frozen=True)
class Presentation:
    """A marked group: free, universal Coxeter, or a custom language.

    ``generators`` lists generator names.  For the custom kind ``grammar``
    holds a context-free grammar whose language plays the role of the
    words representing the identity; the other kinds derive that grammar
    from the group structure.
    """

    kind: str
    generators: tuple
    grammar: object = None

    def __post_init__(self):
        if self.kind not in (FREE, UNIVERSAL_COXETER, CUSTOM):
            raise ValueError(f"unknown presentation kind {self.kind!r}")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        if self.kind == CUSTOM and self.grammar is None:
            raise ValueError("custom presentation needs a grammar")

    def letters(self) -> tuple:
        """The letter alphabet: signed for free, positive for Coxeter."""
        if self.kind == FREE:
            out = []
            for g in self.generators:
                out.append(Letter(g, 1))
                out.append(Letter(g, -1))
            return tuple(out)
        if self.kind == UNIVERSAL_COXETER:
            return tuple(Letter(g, 1) for g in self.generators)
        terms = sorted(self.grammar.terminals, key=lambda l: l.sort_key)
        return tuple(terms)

    def validate_word(self, w: Word) -> None:
        alphabet = set(self.letters())
        for l in w:
            if l not in alphabet:
                raise ValueError(f"letter {l.token()!r} is not in the alphabet")

    def cancels(self, a: Letter, b: Letter) -> bool:
        """Whether the two-letter word ``a b`` multiplies to the identity."""
        if self.kind == FREE:
            return a.gen == b.gen and a.sign == -b.sign
        if self.kind == UNIVERSAL_COXETER:
            return a == b
        raise ValueError("cancellation is undefined for custom presentations")

    def spec(self) -> str:
        if self.kind == CUSTOM:
            return "custom"
        return f"{self.kind}:{len(self.generators)}"


_ALPHA = string.ascii_lowercase


def free_group(rank: int) -> Presentation:
    if not 1 <= rank <= 26:
        raise ValueError("free rank must be between 1 and 26")
    return Presentation(FREE, tuple(_ALPHA[:rank]))


def universal_coxeter(n: int) -> Presentation:
    if n < 1:
        raise ValueError("need at least one involution")
    return Presentation(UNIVERSAL_COXETER, tuple(f"s{i}" for i in range(1, n + 1)))


@dataclass(frozen=True)
class NormQuery:
    """A tuple of words whose k-th powers are measured, in a fixed group."""

    presentation: Presentation
    words: tuple

    def __post_init__(self):
        if not self.words:
            raise ValueError("need at least one word")
        for w in self.words:
            self.presentation.validate_word(w)

    @property
    def step_bound(self) -> int:
        # one extra power of every word costs at most this many deletions
        return sum(len(w) for w in self.words)


def free_reduce(p: Presentation, w: Word) -> Word:
    """Iteratively cancel adjacent trivial pairs; confluent, order free."""
    if p.kind == CUSTOM:
        raise ValueError("free reduction is undefined for custom presentations")
    stack = []
    for l in w:
        if stack and p.cancels(stack[-1], l):
            stack.pop()
        else:
            stack.append(l)
    return tuple(stack)


def is_reduced(p: Presentation, w: Word) -> bool:
    return all(not p.cancels(w[i], w[i + 1]) for i in range(len(w) - 1))


def power_word(words: Sequence[Word], k: int) -> Word:
    """The literal concatenation w1^k w2^k ... without any reduction."""
    if k < 0:
        raise ValueError("power must be nonnegative")
    out = []
    for w in words:
        out.extend(w * k)
    return tuple(out)


def _partner_table(p: Presentation, w: Word):
    """Integer codes plus, per position, the code a matching partner needs."""
    codes = {}
    code = []
    need = []
    for l in w:
        if l not in codes:
            codes[l] = len(codes)
        code.append(codes[l])
        mate = l if p.kind == UNIVERSAL_COXETER else l.inverse()
        need.append(codes.setdefault(mate, len(codes)))
    return code, need


def cancellation_norm(p: Presentation, w: Word):
    """Minimum number of deletions leaving a word that represents 1.

    Interval dynamic program: a surviving word is trivial exactly when its
    positions admit a noncrossing perfect matching of cancelling pairs, so
    on each interval either the first letter is deleted or it is matched
    with a later cancelling letter, splitting the interval.
    """
    if p.kind == CUSTOM:
        raise ValueError("use deletion_distance for custom presentations")
    p.validate_word(w)
    n = len(w)
    if n == 0:
        return 0
    code, need = _partner_table(p, w)
    match = [[q for q in range(i + 1, n) if code[q] == need[i]] for i in range(n)]
    # c[i][j] = cost of the slice w[i:j]
    c = [[0] * (n + 1) for _ in range(n + 1)]
    for span in range(1, n + 1):
        for i in range(n - span + 1):
            j = i + span
            row_next = c[i + 1]
            best = row_next[j] + 1
            for q in match[i]:
                if q >= j:
                    break
                v = row_next[q] + c[q + 1][j]
                if v < best:
                    best = v
            c[i][j] = best
    return c[0][n]


def norm_witness(p: Presentation, w: Word):
    """The norm together with positions of a maximal surviving subword."""
    if p.kind == CUSTOM:
        raise ValueError("use deletion_distance for custom presentations")
    n = len(w)
    if n == 0:
        return 0, ()
    code, need = _partner_table(p, w)
    match = [[q for q in range(i + 1, n) if code[q] == need[i]] for i in range(n)]
    c = [[0] * (n + 1) for _ in range(n + 1)]
    for span in range(1, n + 1):
        for i in range(n - span + 1):
            j = i + span
            row_next = c[i + 1]
            best = row_next[j] + 1
            for q in match[i]:
                if q >= j:
                    break
                v = row_next[q] + c[q + 1][j]
                if v < best:
                    best = v
            c[i][j] = best
    kept = []

    def walk(i, j):
        while i < j:
            if c[i][j] == c[i + 1][j] + 1:
                i += 1
                continue
            for q in match[i]:
                if q >= j:
                    break
                if c[i][j] == c[i + 1][q] + c[q + 1][j]:
                    kept.append(i)
                    kept.append(q)
                    walk(i + 1, q)
                    i = q + 1
                    break
            else:  # pragma: no cover - the table always explains itself
                raise AssertionError("inconsistent cost table")

    walk(0, n)
    kept.sort()
    return c[0][n], tuple(kept)


def brute_force_norm(p: Presentation, w: Word, cap: int = 16):
    """Scan all subwords; only for cross-checking, refuses long inputs."""
    if len(w) > cap:
        raise ValueError(f"word of length {len(w)} exceeds the brute-force cap {cap}")
    if p.kind == CUSTOM:
        raise ValueError("use deletion_distance for custom presentations")
    n = len(w)
    best = n
    for mask in range(1 << n):
        sub = tuple(w[i] for i in range(n) if mask >> i & 1)
        if not free_reduce(p, sub):
            best = min(best, n - len(sub))
    return best


_AXES = {1: (1, 0), -1: (-1, 0)}


def _steps(w: Word):
    gens = sorted({l.gen for l in w})
    if len(gens) > 2:
        raise ValueError("turn quasimorphism needs a rank-two alphabet")
    axis = {g: i for i, g in enumerate(gens)}
    out = []
    for l in w:
        d = [0, 0]
        d[axis[l.gen]] = l.sign
        out.append(tuple(d))
    return out


def turn_quasimorphism(w: Word) -> int:
    """Left turns minus right turns along the abelianized prefix path.

    Defined on freely reduced words in at most two generators; each letter
    moves one lattice step, and reducedness rules out reversals, so every
    interior vertex turns left, turns right, or goes straight.
    """
    for i in range(len(w) - 1):
        if w[i + 1] == w[i].inverse():
            raise ValueError("turn quasimorphism needs a freely reduced word")
    steps = _steps(w)
    total = 0
    for (ux, uy), (vx, vy) in zip(steps, steps[1:]):
        total += ux * vy - uy * vx
    return total


def turn_lower_bound(w: Word) -> int:
    """ceil((|turns| + 2) / 4), a norm lower bound for nonempty reduced words."""
    t = abs(turn_quasimorphism(w))
    return -((t + 2) // -4)
