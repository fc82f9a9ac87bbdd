"""Context-free grammars, finite automata, and the constructions on them.

Word-problem grammars for free and universal Coxeter groups, Chomsky
normal form, CYK membership, deletion distance by min-plus parsing,
subword and enumeration automata, homomorphisms with images and
preimages, and the product construction intersecting a grammar with an
automaton.  Everything is immutable; constructions return new values.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .words import (
    CUSTOM,
    FREE,
    INF,
    UNIVERSAL_COXETER,
    Letter,
    Presentation,
    Word,
    parse_letter,
)


def _skey(sym) -> str:
    # stable sort key for mixed symbol types (strings, tuples, Letters)
    return repr(sym)


def _rule_key(rule):
    lhs, rhs = rule
    return (_skey(lhs), tuple(_skey(s) for s in rhs))


@dataclass(frozen=True)
class Cfg:
    """A context-free grammar; right sides mix nonterminals and terminals."""

    nonterminals: frozenset
    terminals: frozenset
    rules: tuple
    start: object

    def __post_init__(self):
        if self.nonterminals & self.terminals:
            raise ValueError("nonterminals and terminals overlap")
        if self.start not in self.nonterminals:
            raise ValueError("start symbol is not a nonterminal")
        for lhs, rhs in self.rules:
            if lhs not in self.nonterminals:
                raise ValueError(f"rule head {lhs!r} is not a nonterminal")
            for sym in rhs:
                if sym not in self.nonterminals and sym not in self.terminals:
                    raise ValueError(f"undeclared symbol {sym!r}")

    def rule_set(self) -> frozenset:
        return frozenset(self.rules)

    @property
    def size(self):
        return {"variables": len(self.nonterminals), "rules": len(self.rules)}


def make_cfg(nonterminals, terminals, rules, start) -> Cfg:
    """Normalize rule order and drop duplicates before freezing."""
    seen = sorted(set((lhs, tuple(rhs)) for lhs, rhs in rules), key=_rule_key)
    return Cfg(frozenset(nonterminals), frozenset(terminals), tuple(seen), start)


def word_problem_grammar(p: Presentation) -> Cfg:
    """The grammar of all words representing the identity."""
    if p.kind == CUSTOM:
        return p.grammar
    t = "T"
    rules = [(t, ()), (t, (t, t))]
    if p.kind == FREE:
        for g in p.generators:
            pos, neg = Letter(g, 1), Letter(g, -1)
            rules.append((t, (pos, t, neg)))
            rules.append((t, (neg, t, pos)))
    else:
        for g in p.generators:
            s = Letter(g, 1)
            rules.append((t, (s, t, s)))
    return make_cfg({t}, set(p.letters()), rules, t)


def _fresh(used: set, base: str) -> str:
    name = base
    while name in used:
        name += "'"
    used.add(name)
    return name


def to_cnf(g: Cfg) -> Cfg:
    """Chomsky normal form: a fresh start, then epsilon and unit rule
    elimination, then terminal lifting and binarization.  Only the start
    may derive the empty word."""
    used = set(g.nonterminals) | set(g.terminals)
    rules = set((lhs, tuple(rhs)) for lhs, rhs in g.rules)
    start = _fresh(used, "@S")
    rules.add((start, (g.start,)))
    nonterms = set(g.nonterminals) | {start}

    # nullable closure
    nullable = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            if lhs not in nullable and all(s in nullable for s in rhs):
                nullable.add(lhs)
                changed = True

    # epsilon elimination: all variants dropping nullable occurrences
    out = set()
    for lhs, rhs in sorted(rules, key=_rule_key):
        options = [((s,), ()) if s in nullable else ((s,),) for s in rhs]
        for picks in itertools.product(*options):
            new = tuple(s for part in picks for s in part)
            if new:
                out.add((lhs, new))
    if g.start in nullable:
        out.add((start, ()))
    rules = out

    # unit closure
    unit = {a: {a} for a in nonterms}
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            if len(rhs) == 1 and rhs[0] in nonterms:
                for tgt in unit[rhs[0]]:
                    if tgt not in unit[lhs]:
                        unit[lhs].add(tgt)
                        changed = True
    out = set()
    for a in nonterms:
        for b in unit[a]:
            for lhs, rhs in rules:
                if lhs != b:
                    continue
                if len(rhs) == 1 and rhs[0] in nonterms:
                    continue
                if rhs == () and a != start:
                    continue
                out.add((a, rhs))
    rules = out

    # lift terminals out of long right sides
    pre = {}
    for t in sorted(g.terminals, key=_skey):
        pre[t] = None
    out = set()
    for lhs, rhs in sorted(rules, key=_rule_key):
        if len(rhs) < 2:
            out.add((lhs, rhs))
            continue
        new = []
        for s in rhs:
            if s in g.terminals:
                if pre[s] is None:
                    pre[s] = _fresh(used, "@t" + str(len([v for v in pre.values() if v])))
                    nonterms.add(pre[s])
                    out.add((pre[s], (s,)))
                new.append(pre[s])
            else:
                new.append(s)
        out.add((lhs, tuple(new)))
    rules = out

    # binarize
    out = set()
    counter = 0
    for lhs, rhs in sorted(rules, key=_rule_key):
        while len(rhs) > 2:
            helper = _fresh(used, f"@b{counter}")
            counter += 1
            nonterms.add(helper)
            out.add((lhs, (rhs[0], helper)))
            lhs, rhs = helper, rhs[1:]
        out.add((lhs, rhs))

    return prune_useless(make_cfg(nonterms, g.terminals, out, start))


def prune_useless(g: Cfg) -> Cfg:
    """Drop nonterminals that derive no terminal word or are unreachable."""
    productive = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in g.rules:
            if lhs in productive:
                continue
            if all(s in g.terminals or s in productive for s in rhs):
                productive.add(lhs)
                changed = True
    keep = [
        (lhs, rhs)
        for lhs, rhs in g.rules
        if lhs in productive and all(s in g.terminals or s in productive for s in rhs)
    ]
    reachable = {g.start}
    frontier = [g.start]
    by_lhs = {}
    for lhs, rhs in keep:
        by_lhs.setdefault(lhs, []).append(rhs)
    while frontier:
        a = frontier.pop()
        for rhs in by_lhs.get(a, ()):
            for s in rhs:
                if s not in g.terminals and s not in reachable:
                    reachable.add(s)
                    frontier.append(s)
    rules = [(l, r) for l, r in keep if l in reachable]
    return make_cfg(reachable, g.terminals, rules, g.start)


@functools.lru_cache(maxsize=256)
def _cnf_cached(g: Cfg) -> Cfg:
    return to_cnf(g)


def _cnf_tables(g: Cfg):
    cn = _cnf_cached(g)
    term = {}
    binary = []
    nullable = False
    for lhs, rhs in cn.rules:
        if rhs == ():
            nullable = True
        elif len(rhs) == 1:
            term.setdefault(rhs[0], set()).add(lhs)
        else:
            binary.append((lhs, rhs[0], rhs[1]))
    return cn, term, binary, nullable


def cyk_membership(g: Cfg, w: Word) -> bool:
    cn, term, binary, nullable = _cnf_tables(g)
    n = len(w)
    if n == 0:
        return nullable
    chart = [[set() for _ in range(n + 1)] for _ in range(n + 1)]
    for i, t in enumerate(w):
        chart[i][i + 1] = set(term.get(t, ()))
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span
            cell = chart[i][j]
            for q in range(i + 1, j):
                left, right = chart[i][q], chart[q][j]
                if not left or not right:
                    continue
                for a, b, c in binary:
                    if b in left and c in right:
                        cell.add(a)
    return cn.start in chart[0][n]


def deletion_distance(g: Cfg, w: Word):
    """Minimum deletions so the remaining subword lies in the language.

    Min-plus CYK: the chart entry for a cost of a span and a nonterminal
    also admits unary moves skipping the first or last position at cost
    one, which is enough to charge every deleted position somewhere.
    Returns inf when no subword, the empty one included, is in the
    language.
    """
    cn, term, binary, nullable = _cnf_tables(g)
    n = len(w)
    if n == 0:
        return 0 if nullable else INF
    chart = [[{} for _ in range(n + 1)] for _ in range(n + 1)]
    for span in range(1, n + 1):
        for i in range(n - span + 1):
            j = i + span
            cell = chart[i][j]
            if span == 1:
                for a in term.get(w[i], ()):
                    cell[a] = 0
                continue
            for a, cost in chart[i + 1][j].items():
                cell[a] = min(cell.get(a, INF), cost + 1)
            for a, cost in chart[i][j - 1].items():
                if cost + 1 < cell.get(a, INF):
                    cell[a] = cost + 1
            for q in range(i + 1, j):
                left, right = chart[i][q], chart[q][j]
                if not left or not right:
                    continue
                for a, b, c in binary:
                    lb = left.get(b)
                    if lb is None:
                        continue
                    rc = right.get(c)
                    if rc is None:
                        continue
                    if lb + rc < cell.get(a, INF):
                        cell[a] = lb + rc
    best = chart[0][n].get(cn.start, INF)
    if nullable:
        best = min(best, n)
    return best


def language_upto(g: Cfg, n: int) -> set:
    """All words of length at most n, by a length-indexed normal-form DP."""
    cn, term, binary, nullable = _cnf_tables(g)
    words = {a: [set() for _ in range(n + 1)] for a in cn.nonterminals}
    for t, heads in term.items():
        for a in heads:
            if n >= 1:
                words[a][1].add((t,))
    for span in range(2, n + 1):
        for a, b, c in binary:
            tgt = words[a][span]
            for k in range(1, span):
                for u in words[b][k]:
                    for v in words[c][span - k]:
                        tgt.add(u + v)
    out = set()
    if nullable:
        out.add(())
    for span in range(1, n + 1):
        out |= words[cn.start][span]
    return out


# ---------------------------------------------------------------------------
# finite automata


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic finite automaton; a None label is an epsilon move."""

    states: frozenset
    alphabet: frozenset
    transitions: frozenset
    initial: frozenset
    accepting: frozenset

    def __post_init__(self):
        for src, sym, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError("transition endpoint outside the state set")
            if sym is not None and sym not in self.alphabet:
                raise ValueError(f"transition label {sym!r} outside the alphabet")
        if not self.initial <= self.states or not self.accepting <= self.states:
            raise ValueError("initial or accepting states outside the state set")

    @property
    def size(self):
        return {"states": len(self.states), "transitions": len(self.transitions)}


@functools.lru_cache(maxsize=256)
def _nfa_maps(a: Nfa):
    eps = {}
    step = {}
    for src, sym, dst in a.transitions:
        if sym is None:
            eps.setdefault(src, set()).add(dst)
        else:
            step.setdefault((src, sym), set()).add(dst)
    return eps, step


def eps_closure(a: Nfa, states: Iterable) -> frozenset:
    eps, _ = _nfa_maps(a)
    seen = set(states)
    frontier = list(seen)
    while frontier:
        s = frontier.pop()
        for t in eps.get(s, ()):
            if t not in seen:
                seen.add(t)
                frontier.append(t)
    return frozenset(seen)


def nfa_step(a: Nfa, states: frozenset, sym) -> frozenset:
    _, step = _nfa_maps(a)
    out = set()
    for s in states:
        out |= step.get((s, sym), set())
    return eps_closure(a, out)


def nfa_accepts(a: Nfa, w: Word) -> bool:
    cur = eps_closure(a, a.initial)
    for sym in w:
        cur = nfa_step(a, cur, sym)
        if not cur:
            return False
    return bool(cur & a.accepting)


def nfa_language_upto(a: Nfa, n: int) -> set:
    out = set()
    start = eps_closure(a, a.initial)
    frontier = [((), start)]
    alphabet = sorted(a.alphabet, key=_skey)
    for _ in range(n + 1):
        nxt = []
        for w, states in frontier:
            if states & a.accepting:
                out.add(w)
            if len(w) == n:
                continue
            for sym in alphabet:
                succ = nfa_step(a, states, sym)
                if succ:
                    nxt.append((w + (sym,), succ))
        frontier = nxt
        if not frontier:
            break
    return out


def subword_nfa(w: Word) -> Nfa:
    """Accepts exactly the subwords (scattered subsequences) of w."""
    n = len(w)
    trans = set()
    for i, l in enumerate(w):
        trans.add((i, l, i + 1))
        trans.add((i, None, i + 1))
    return Nfa(
        frozenset(range(n + 1)),
        frozenset(w),
        frozenset(trans),
        frozenset({0}),
        frozenset({n}),
    )


def default_markers(n: int) -> tuple:
    return tuple(Letter(f"#y{i}") for i in range(1, n + 1))


def enumeration_nfa(words: Sequence[Word], markers: Optional[Sequence[Letter]] = None):
    """One automaton whose accepted words interleave, block by block,
    subwords of each input word with that block's marker letter.

    Block i accepts (subword-of-w_i then marker_i) repeated, and blocks
    are concatenated in order.  Returns the automaton and the markers.
    """
    if markers is None:
        markers = default_markers(len(words))
    markers = tuple(markers)
    if len(markers) != len(words):
        raise ValueError("need exactly one marker per word")
    if len(set(markers)) != len(markers):
        raise ValueError("marker letters must be distinct")
    base = set(itertools.chain.from_iterable(words))
    for y in markers:
        if y in base:
            raise ValueError(f"marker {y.token()!r} collides with a word letter")
    states = set()
    trans = set()
    for b, (w, y) in enumerate(zip(words, markers)):
        for i in range(len(w) + 1):
            states.add((b, i))
        for i, l in enumerate(w):
            trans.add(((b, i), l, (b, i + 1)))
            trans.add(((b, i), None, (b, i + 1)))
        trans.add(((b, len(w)), y, (b, 0)))
        if b + 1 < len(words):
            trans.add(((b, 0), None, (b + 1, 0)))
    alphabet = frozenset(base) | frozenset(markers)
    nfa = Nfa(
        frozenset(states),
        alphabet,
        frozenset(trans),
        frozenset({(0, 0)}),
        frozenset({(len(words) - 1, 0)}),
    )
    return nfa, markers


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class StringHom:
    """A monoid homomorphism between free monoids, given letterwise."""

    source: frozenset
    target: frozenset
    images: tuple  # sorted pairs (letter, image word)

    def __post_init__(self):
        if {l for l, _ in self.images} != set(self.source):
            raise ValueError("images must cover exactly the source alphabet")
        for _, u in self.images:
            for t in u:
                if t not in self.target:
                    raise ValueError(f"image letter {t.token()!r} outside the target")

    @functools.cached_property
    def _map(self):
        return dict(self.images)

    def image_of(self, letter: Letter) -> Word:
        return self._map[letter]

    def apply(self, w: Word) -> Word:
        out = []
        for l in w:
            if l not in self._map:
                raise ValueError(f"letter {l.token()!r} outside the source alphabet")
            out.extend(self._map[l])
        return tuple(out)


def hom(source, target, mapping: dict) -> StringHom:
    pairs = tuple(sorted(((l, tuple(u)) for l, u in mapping.items()), key=lambda p: p[0].sort_key))
    return StringHom(frozenset(source), frozenset(target), pairs)


def erasing_hom(keep, erase) -> StringHom:
    """Identity on ``keep``, empty image on ``erase``."""
    mapping = {l: (l,) for l in keep}
    mapping.update({l: () for l in erase})
    return hom(set(keep) | set(erase), set(keep), mapping)


def project(h: StringHom, w: Word) -> Word:
    return h.apply(w)


def cfg_image(g: Cfg, h: StringHom) -> Cfg:
    """Grammar for the homomorphic image of the language."""
    if not g.terminals <= h.source:
        raise ValueError("grammar terminals must lie in the source alphabet")
    rules = []
    for lhs, rhs in g.rules:
        new = []
        for s in rhs:
            if s in g.terminals:
                new.extend(h.image_of(s))
            else:
                new.append(s)
        rules.append((lhs, tuple(new)))
    return make_cfg(g.nonterminals, h.target, rules, g.start)


def _inverse_hom_alphabetic(g: Cfg, h: StringHom) -> Cfg:
    # every image has length <= 1: insert junk loops and letter classes
    erased = sorted((x for x in h.source if len(h.image_of(x)) == 0), key=lambda l: l.sort_key)
    classes = {}
    for x in sorted(h.source, key=lambda l: l.sort_key):
        u = h.image_of(x)
        if len(u) == 1:
            classes.setdefault(u[0], []).append(x)
    used = set(g.nonterminals) | set(map(_skey, g.nonterminals))
    junk = _fresh(used, "@J")
    start = _fresh(used, "@P")
    pre = {t: _fresh(used, "@c" + str(i)) for i, t in enumerate(sorted(classes, key=_skey))}
    nonterms = set(g.nonterminals) | {junk, start} | set(pre.values())
    rules = [(start, (junk, g.start)), (junk, ())]
    for x in erased:
        rules.append((junk, (x, junk)))
    for t, var in pre.items():
        for x in classes[t]:
            rules.append((var, (x,)))
    for lhs, rhs in g.rules:
        new = []
        ok = True
        for s in rhs:
            if s in g.terminals:
                if s not in pre:
                    ok = False  # no source letter maps onto this terminal
                    break
                new.append(pre[s])
                new.append(junk)
            else:
                new.append(s)
        if ok:
            rules.append((lhs, tuple(new)))
    return prune_useless(make_cfg(nonterms, h.source, rules, start))


def inverse_hom(g: Cfg, h: StringHom) -> Cfg:
    """Grammar for the preimage of the language under the homomorphism.

    Letter-to-letter-or-empty maps get a direct construction.  Longer
    images go through tagging: a regular language of tagged image blocks
    is intersected with the preimage under the erasure of tags, and the
    result is projected back onto the tags.
    """
    if not g.terminals <= h.target:
        raise ValueError("grammar terminals must lie in the target alphabet")
    src = sorted(h.source, key=lambda l: l.sort_key)
    if all(len(h.image_of(x)) <= 1 for x in src):
        return _inverse_hom_alphabetic(g, h)

    tags = {x: Letter(f"#z{i}") for i, x in enumerate(src)}
    if set(tags.values()) & (set(h.source) | set(h.target)):
        raise ValueError("tag alphabet collides with the homomorphism alphabets")
    # regular language of blocks: tag then its image, repeated
    states = {0}
    trans = set()
    for x in src:
        u = h.image_of(x)
        if not u:
            trans.add((0, tags[x], 0))
            continue
        entry = (x, "tag")
        states.add(entry)
        trans.add((0, tags[x], entry))
        prev = entry
        for i, t in enumerate(u):
            nxt = 0 if i == len(u) - 1 else (x, i)
            if nxt != 0:
                states.add(nxt)
            trans.add((prev, t, nxt))
            prev = nxt
    alphabet = frozenset(tags.values()) | frozenset(h.target)
    blocks = Nfa(frozenset(states), alphabet, frozenset(trans), frozenset({0}), frozenset({0}))
    widen = erasing_hom(h.target, tags.values())  # erase tags, keep image letters
    tagged = intersect_regular(_inverse_hom_alphabetic(g, widen), blocks)
    back = hom(alphabet, h.source, {**{t: () for t in h.target}, **{tags[x]: (x,) for x in src}})
    return prune_useless(cfg_image(tagged, back))


# ---------------------------------------------------------------------------
# intersection with a regular language


def intersect_regular(g: Cfg, a: Nfa) -> Cfg:
    """Product grammar for the intersection with the automaton's language.

    Runs on the normal form and only materializes state-nonterminal-state
    triples that are actually derivable, then prunes unreachable ones.
    """
    cn, term, binary, nullable = _cnf_tables(g)
    by_first = {}
    by_second = {}
    for rule in binary:
        _, b, c = rule
        by_first.setdefault(b, []).append(rule)
        by_second.setdefault(c, []).append(rule)

    eff = {}
    for p in a.states:
        cl = eps_closure(a, {p})
        for sym in a.alphabet:
            out = set()
            for s in cl:
                out |= _nfa_maps(a)[1].get((s, sym), set())
            if out:
                eff[(p, sym)] = out
    accepts_eps = bool(eps_closure(a, a.initial) & a.accepting)
    accepting = {p for p in a.states if eps_closure(a, {p}) & a.accepting}

    triples = set()
    rules = []
    left_index = {}  # (mid, var) -> ends, for triples (mid, var, end)
    end_index = {}  # (mid, var) -> starts, for triples (start, var, mid)
    worklist = []

    def add(triple, rhs):
        rules.append((triple, rhs))
        if triple not in triples:
            triples.add(triple)
            p, var, q = triple
            left_index.setdefault((p, var), set()).add(q)
            end_index.setdefault((q, var), set()).add(p)
            worklist.append(triple)

    for (p, sym), dsts in sorted(eff.items(), key=lambda kv: (_skey(kv[0][0]), _skey(kv[0][1]))):
        for head in sorted(term.get(sym, ()), key=_skey):
            for q in sorted(dsts, key=_skey):
                add((p, head, q), (sym,))

    while worklist:
        p, var, q = worklist.pop()
        for rule in by_first.get(var, ()):
            head, _, c = rule
            for r in sorted(left_index.get((q, c), ()), key=_skey):
                add((p, head, r), ((p, var, q), (q, c, r)))
        for rule in by_second.get(var, ()):
            head, b, _ = rule
            for o in sorted(end_index.get((p, b), ()), key=_skey):
                add((o, head, q), ((o, b, p), (p, var, q)))

    used = set(map(_skey, triples))
    start = _fresh(used, "@S")
    for i in sorted(a.initial, key=_skey):
        for f in sorted(accepting, key=_skey):
            if (i, cn.start, f) in triples:
                rules.append((start, ((i, cn.start, f),)))
    if nullable and accepts_eps:
        rules.append((start, ()))
    nonterms = triples | {start}
    g_out = make_cfg(nonterms, set(g.terminals) | set(a.alphabet), rules, start)
    return prune_useless(g_out)


# ---------------------------------------------------------------------------
# grammar simplification


def _collapse_units(g: Cfg) -> Cfg:
    unit = {a: {a} for a in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for lhs, rhs in g.rules:
            if len(rhs) == 1 and rhs[0] in g.nonterminals:
                for t in unit[rhs[0]]:
                    if t not in unit[lhs]:
                        unit[lhs].add(t)
                        changed = True
    rules = set()
    for a in g.nonterminals:
        for b in unit[a]:
            for lhs, rhs in g.rules:
                if lhs != b:
                    continue
                if len(rhs) == 1 and rhs[0] in g.nonterminals:
                    continue
                rules.add((a, rhs))
    return make_cfg(g.nonterminals, g.terminals, rules, g.start)


def _inline_single_use(g: Cfg) -> Cfg:
    occurrences = {}
    for lhs, rhs in g.rules:
        for i, s in enumerate(rhs):
            if s in g.nonterminals:
                occurrences.setdefault(s, []).append((lhs, rhs, i))
    for a in sorted(g.nonterminals, key=_skey):
        if a == g.start or len(occurrences.get(a, [])) != 1:
            continue
        alts = [rhs for lhs, rhs in g.rules if lhs == a]
        if len(alts) > 4 or any(a in rhs for rhs in alts):
            continue
        (host_lhs, host_rhs, i) = occurrences[a][0]
        if host_lhs == a:
            continue
        rules = []
        for lhs, rhs in g.rules:
            if lhs == a:
                continue
            if lhs == host_lhs and rhs == host_rhs:
                for alt in alts:
                    rules.append((lhs, rhs[:i] + alt + rhs[i + 1 :]))
            else:
                rules.append((lhs, rhs))
        nonterms = set(g.nonterminals) - {a}
        return make_cfg(nonterms, g.terminals, rules, g.start)
    return g


def _merge_equivalent(g: Cfg) -> Cfg:
    order = sorted(g.nonterminals, key=_skey)
    block = {a: 0 for a in order}
    while True:
        sigs = {}
        for a in order:
            sig = frozenset(
                tuple(("t", _skey(s)) if s in g.terminals else ("v", block[s]) for s in rhs)
                for lhs, rhs in g.rules
                if lhs == a
            )
            sigs[a] = (block[a], sig)
        fresh = {}
        new_block = {}
        for a in order:
            key = sigs[a]
            if key not in fresh:
                fresh[key] = len(fresh)
            new_block[a] = fresh[key]
        if new_block == block:
            break
        block = new_block
    rep = {}
    for a in order:
        rep.setdefault(block[a], a)
    rename = {a: rep[block[a]] for a in order}
    rules = set()
    for lhs, rhs in g.rules:
        rules.add((rename[lhs], tuple(rename.get(s, s) for s in rhs)))
    return make_cfg(set(rename.values()), g.terminals, rules, rename[g.start])


def simplify_cfg(g: Cfg, rounds: int = 10) -> Cfg:
    """Language-preserving shrinking: prune, fold unit chains, inline
    nonterminals used once, merge nonterminals with identical behavior."""
    for _ in range(rounds):
        before = g
        g = prune_useless(g)
        g = _collapse_units(g)
        g = prune_useless(g)
        g = _inline_single_use(g)
        g = _merge_equivalent(g)
        if g.rule_set() == before.rule_set() and g.nonterminals == before.nonterminals:
            break
    return g


# ---------------------------------------------------------------------------
# grammar text format


def parse_grammar_text(text: str) -> Cfg:
    """Parse ``Var -> sym sym | sym`` lines; ``_`` is the empty word,
    the first head is the start symbol, and lines starting with ``#``
    are comments.  Tokens never seen as a head are terminal letters."""
    heads = []
    raw = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "->" not in stripped:
            raise ValueError(f"line {lineno}: expected 'Var -> ...'")
        lhs, _, rest = stripped.partition("->")
        lhs = lhs.strip()
        if not lhs or len(lhs.split()) != 1:
            raise ValueError(f"line {lineno}: bad rule head {lhs!r}")
        if lhs not in heads:
            heads.append(lhs)
        for alt in rest.split("|"):
            raw.append((lineno, lhs, alt.split()))
    if not heads:
        raise ValueError("no rules found")
    variables = set(heads)
    rules = []
    terminals = set()
    for lineno, lhs, tokens in raw:
        if tokens == ["_"]:
            rules.append((lhs, ()))
            continue
        rhs = []
        for tok in tokens:
            if tok == "_":
                raise ValueError(f"line {lineno}: '_' must stand alone")
            if tok in variables:
                rhs.append(tok)
            else:
                try:
                    letter = parse_letter(tok)
                except ValueError as exc:
                    raise ValueError(f"line {lineno}: bad terminal {tok!r}: {exc}")
                terminals.add(letter)
                rhs.append(letter)
        rules.append((lhs, tuple(rhs)))
    return make_cfg(variables, terminals, rules, heads[0])


def custom_presentation(g: Cfg) -> Presentation:
    gens = tuple(sorted({t.gen for t in g.terminals}))
    return Presentation(CUSTOM, gens, g)
