"""Finite automata over arbitrary ordered alphabets.

States are dense integers. Transitions map (state, symbol) to a frozenset of
targets, so one class covers both NFAs and DFAs. Every operation that returns
a "minimal" automaton returns the canonical complete minimal DFA: states are
numbered in breadth-first order from the initial state, exploring letters in
alphabet order, which makes language equality a structural comparison.
"""

from __future__ import annotations

from collections import deque
from itertools import product
from typing import Hashable, Iterable, Sequence

import networkx as nx

Symbol = Hashable


class AlphabetMismatch(ValueError):
    pass


class EmptyLanguage(ValueError):
    pass


class DecompositionFailed(ValueError):
    pass


class Fsa:
    __slots__ = ("alphabet", "n", "delta", "initial", "finals", "_index")

    def __init__(self, alphabet: Sequence[Symbol], n: int, delta: dict, initial: Iterable[int], finals: Iterable[int]):
        self.alphabet = tuple(alphabet)
        self._index = {a: i for i, a in enumerate(self.alphabet)}
        if len(self._index) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        self.n = n
        clean = {}
        for (s, a), targets in delta.items():
            if a not in self._index:
                raise ValueError(f"unknown symbol {a!r}")
            if not 0 <= s < n:
                raise ValueError(f"unknown state {s}")
            t = frozenset(targets) if not isinstance(targets, int) else frozenset((targets,))
            if any(not 0 <= q < n for q in t):
                raise ValueError("transition to an unknown state")
            if t:
                clean[(s, a)] = t
        self.delta = clean
        self.initial = frozenset(initial)
        self.finals = frozenset(finals)

    # basic queries -------------------------------------------------------
    @property
    def states(self) -> range:
        return range(self.n)

    def symbol_index(self, a) -> int:
        return self._index[a]

    def succ(self, s: int, a) -> frozenset:
        return self.delta.get((s, a), frozenset())

    def step(self, s: int, a):
        """Target of a deterministic transition, or None."""
        t = self.delta.get((s, a))
        if not t:
            return None
        return next(iter(t))

    @property
    def deterministic(self) -> bool:
        return len(self.initial) <= 1 and all(len(t) <= 1 for t in self.delta.values())

    def is_complete(self) -> bool:
        return all((s, a) in self.delta for s in range(self.n) for a in self.alphabet)

    def run(self, word) -> frozenset:
        cur = self.initial
        for a in word:
            nxt = set()
            for s in cur:
                nxt |= self.succ(s, a)
            cur = frozenset(nxt)
            if not cur:
                break
        return cur

    def accepts(self, word) -> bool:
        return bool(self.run(word) & self.finals)

    def __contains__(self, word) -> bool:
        return self.accepts(word)

    def edges(self):
        for (s, a), ts in sorted(self.delta.items(), key=lambda kv: (kv[0][0], self._index[kv[0][1]])):
            for t in sorted(ts):
                yield s, a, t

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        for s, _, t in self.edges():
            g.add_edge(s, t)
        return g

    def words(self, max_len: int) -> set:
        """All accepted words of length <= max_len (brute force over reachable subsets)."""
        out = set()
        frontier = [((), self.initial)]
        for _ in range(max_len + 1):
            nxt = []
            for w, cur in frontier:
                if cur & self.finals:
                    out.add(w)
                for a in self.alphabet:
                    t = frozenset().union(*(self.succ(s, a) for s in cur)) if cur else frozenset()
                    if t:
                        nxt.append((w + (a,), t))
            frontier = nxt
        return out

    def __eq__(self, other):
        if not isinstance(other, Fsa):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.n == other.n
            and self.delta == other.delta
            and self.initial == other.initial
            and self.finals == other.finals
        )

    def __hash__(self):
        return hash((self.alphabet, self.n, frozenset(self.delta.items()), self.initial, self.finals))

    def __repr__(self):
        return f"Fsa(states={self.n}, alphabet={list(self.alphabet)!r}, initial={sorted(self.initial)}, finals={sorted(self.finals)})"

    def to_dot(self, label=str) -> str:
        lines = ["digraph fsa {", "  rankdir=LR;"]
        for s in range(self.n):
            shape = "doublecircle" if s in self.finals else "circle"
            pen = ' penwidth=3' if s in self.initial else ""
            lines.append(f'  q{s} [shape={shape}{pen}];')
        for s, a, t in self.edges():
            lines.append(f'  q{s} -> q{t} [label="{label(a)}"];')
        lines.append("}")
        return "\n".join(lines)


# constructors ----------------------------------------------------------------

def empty(alphabet) -> Fsa:
    """Canonical automaton of the empty language: one non-final state with a self-loop sink."""
    return Fsa(alphabet, 1, {(0, a): {0} for a in alphabet}, {0}, ())


def universal(alphabet) -> Fsa:
    return Fsa(alphabet, 1, {(0, a): {0} for a in alphabet}, {0}, {0})


def from_words(words, alphabet) -> Fsa:
    """Trie automaton of a finite set of words."""
    delta: dict = {}
    finals = set()
    nodes = {(): 0}
    for w in words:
        w = tuple(w)
        for i in range(len(w)):
            if w[: i + 1] not in nodes:
                nodes[w[: i + 1]] = len(nodes)
            delta.setdefault((nodes[w[:i]], w[i]), set()).add(nodes[w[: i + 1]])
        finals.add(nodes[w])
    return minimize(Fsa(alphabet, len(nodes), delta, {0}, finals))


def from_regex(pattern: str, alphabet=None) -> Fsa:
    """Minimal DFA of a regular expression over single-character symbols.

    Supports concatenation, ``|``, ``*``, ``+``, ``?``, parentheses and
    ``e`` for the empty word. ``alphabet`` defaults to the characters "0", "1"
    mapped to the integers 0 and 1.
    """
    if alphabet is None:
        alphabet = (0, 1)
    sym = {str(a): a for a in alphabet}
    parser = _RegexParser(pattern, sym)
    nfa = parser.parse()
    return minimize(_eps_to_fsa(alphabet, *nfa))


class _RegexParser:
    # Thompson construction with epsilon edges labelled None
    def __init__(self, text: str, sym: dict):
        self.text = text.replace(" ", "")
        self.pos = 0
        self.sym = sym
        self.n = 0
        self.edges: list = []

    def new(self) -> int:
        self.n += 1
        return self.n - 1

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self):
        s, t = self.alt()
        if self.pos != len(self.text):
            raise ValueError(f"unexpected {self.peek()!r} in regex at {self.pos}")
        return self.n, self.edges, s, t

    def alt(self):
        s, t = self.cat()
        while self.peek() == "|":
            self.pos += 1
            s2, t2 = self.cat()
            ns, nt = self.new(), self.new()
            self.edges += [(ns, None, s), (ns, None, s2), (t, None, nt), (t2, None, nt)]
            s, t = ns, nt
        return s, t

    def cat(self):
        s = t = self.new()
        while self.peek() not in (None, "|", ")"):
            s2, t2 = self.star()
            self.edges.append((t, None, s2))
            t = t2
        return s, t

    def star(self):
        s, t = self.atom()
        while self.peek() in ("*", "+", "?"):
            op = self.text[self.pos]
            self.pos += 1
            ns, nt = self.new(), self.new()
            self.edges += [(ns, None, s), (t, None, nt)]
            if op in "*?":
                self.edges.append((ns, None, nt))
            if op in "*+":
                self.edges.append((t, None, s))
            s, t = ns, nt
        return s, t

    def atom(self):
        c = self.peek()
        if c == "(":
            self.pos += 1
            s, t = self.alt()
            if self.peek() != ")":
                raise ValueError("unbalanced parenthesis in regex")
            self.pos += 1
            return s, t
        self.pos += 1
        s, t = self.new(), self.new()
        if c == "e":
            self.edges.append((s, None, t))
        elif c in self.sym:
            self.edges.append((s, self.sym[c], t))
        else:
            raise ValueError(f"unknown regex symbol {c!r}")
        return s, t


def _eps_to_fsa(alphabet, n, edges, start, end) -> Fsa:
    eps = [[] for _ in range(n)]
    for s, a, t in edges:
        if a is None:
            eps[s].append(t)
    closure = []
    for q in range(n):
        seen = {q}
        stack = [q]
        while stack:
            v = stack.pop()
            for w in eps[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        closure.append(seen)
    delta: dict = {}
    for q in range(n):
        for p in closure[q]:
            for s, a, t in edges:
                if s == p and a is not None:
                    delta.setdefault((q, a), set()).update(closure[t])
    finals = {q for q in range(n) if end in closure[q]}
    return Fsa(alphabet, n, delta, {start}, finals)


# determinization and minimization ---------------------------------------------

def determinize(a: Fsa) -> Fsa:
    """Complete DFA by subset construction (the empty subset becomes the sink)."""
    start = a.initial
    index = {start: 0}
    order = [start]
    delta = {}
    i = 0
    while i < len(order):
        cur = order[i]
        for sym in a.alphabet:
            t = frozenset().union(*(a.succ(s, sym) for s in cur)) if cur else frozenset()
            if t not in index:
                index[t] = len(order)
                order.append(t)
            delta[(i, sym)] = {index[t]}
        i += 1
    finals = {index[s] for s in order if s & a.finals}
    return Fsa(a.alphabet, len(order), delta, {0}, finals)


def _hopcroft(d: Fsa) -> list[int]:
    """Block id of every state of a complete DFA under language equivalence."""
    n = d.n
    finals = set(d.finals)
    others = set(range(n)) - finals
    partition = [b for b in (finals, others) if b]
    inverse = {}
    for s in range(n):
        for sym in d.alphabet:
            t = d.step(s, sym)
            inverse.setdefault((t, sym), set()).add(s)
    work = [min(partition, key=len)] if len(partition) == 2 else list(partition)
    work = [set(b) for b in work]
    while work:
        splitter = work.pop()
        for sym in d.alphabet:
            x = set()
            for t in splitter:
                x |= inverse.get((t, sym), set())
            if not x:
                continue
            new_partition = []
            for y in partition:
                inter = y & x
                diff = y - x
                if inter and diff:
                    new_partition += [inter, diff]
                    if y in work:
                        work.remove(y)
                        work += [inter, diff]
                    else:
                        work.append(inter if len(inter) <= len(diff) else diff)
                else:
                    new_partition.append(y)
            partition = new_partition
    block = [0] * n
    for i, b in enumerate(partition):
        for s in b:
            block[s] = i
    return block


def _canonical(d: Fsa) -> Fsa:
    """Renumber the accessible part of a complete DFA in BFS order."""
    (start,) = d.initial
    index = {start: 0}
    queue = deque([start])
    delta = {}
    while queue:
        s = queue.popleft()
        for sym in d.alphabet:
            t = d.step(s, sym)
            if t not in index:
                index[t] = len(index)
                queue.append(t)
            delta[(index[s], sym)] = {index[t]}
    finals = {index[s] for s in index if s in d.finals}
    return Fsa(d.alphabet, len(index), delta, {0}, finals)


def minimize(a: Fsa) -> Fsa:
    """Canonical complete minimal DFA of the language of ``a`` (Hopcroft)."""
    d = _canonical(determinize(a))
    block = _hopcroft(d)
    nb = max(block) + 1
    delta = {}
    for s in range(d.n):
        for sym in d.alphabet:
            delta[(block[s], sym)] = {block[d.step(s, sym)]}
    q = Fsa(d.alphabet, nb, delta, {block[0]}, {block[s] for s in d.finals})
    return _canonical(q)


determinize_minimize = minimize


def equivalent(a: Fsa, b: Fsa) -> bool:
    _check_alphabets(a, b)
    return minimize(a) == minimize(b)


def _check_alphabets(a: Fsa, b: Fsa):
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"{a.alphabet!r} != {b.alphabet!r}")


# boolean operations -------------------------------------------------------------

def combine(kind: str, a: Fsa, b: Fsa | None = None) -> Fsa:
    if kind == "complement":
        d = minimize(a)
        return minimize(Fsa(d.alphabet, d.n, d.delta, d.initial, set(range(d.n)) - d.finals))
    if b is None:
        raise ValueError(f"{kind} needs two automata")
    _check_alphabets(a, b)
    da, db = minimize(a), minimize(b)
    keep = {
        "union": lambda x, y: x or y,
        "intersection": lambda x, y: x and y,
        "difference": lambda x, y: x and not y,
    }[kind]
    pairs = list(product(range(da.n), range(db.n)))
    idx = {p: i for i, p in enumerate(pairs)}
    delta = {}
    for (p, q), i in idx.items():
        for sym in da.alphabet:
            delta[(i, sym)] = {idx[(da.step(p, sym), db.step(q, sym))]}
    finals = {i for (p, q), i in idx.items() if keep(p in da.finals, q in db.finals)}
    start = idx[(next(iter(da.initial)), next(iter(db.initial)))]
    return minimize(Fsa(da.alphabet, len(pairs), delta, {start}, finals))


def union(a, b):
    return combine("union", a, b)


def intersection(a, b):
    return combine("intersection", a, b)


def difference(a, b):
    return combine("difference", a, b)


def complement(a):
    return combine("complement", a)


def union_all(automata, alphabet) -> Fsa:
    out = empty(alphabet)
    for x in automata:
        out = union(out, x)
    return out


def concat(a: Fsa, b: Fsa) -> Fsa:
    _check_alphabets(a, b)
    off = a.n
    delta: dict = {}
    for (s, sym), ts in a.delta.items():
        delta.setdefault((s, sym), set()).update(ts)
    for (s, sym), ts in b.delta.items():
        delta.setdefault((s + off, sym), set()).update(t + off for t in ts)
    # a final state of ``a`` also behaves like each initial state of ``b``
    for f in a.finals:
        for i in b.initial:
            for sym in b.alphabet:
                delta.setdefault((f, sym), set()).update(t + off for t in b.succ(i, sym))
    finals = {f + off for f in b.finals}
    if b.initial & b.finals:
        finals |= set(a.finals)
    return minimize(Fsa(a.alphabet, a.n + b.n, delta, a.initial, finals))


def star_all(alphabet) -> Fsa:
    return universal(alphabet)


def mirror(a: Fsa) -> Fsa:
    delta: dict = {}
    for s, sym, t in a.edges():
        delta.setdefault((t, sym), set()).add(s)
    return minimize(Fsa(a.alphabet, a.n, delta, a.finals, a.initial))


# trimming and prefix operations ----------------------------------------------------

def accessible(a: Fsa) -> set:
    seen = set(a.initial)
    stack = list(a.initial)
    while stack:
        s = stack.pop()
        for sym in a.alphabet:
            for t in a.succ(s, sym):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    return seen


def coaccessible(a: Fsa) -> set:
    rev: dict = {}
    for s, _, t in a.edges():
        rev.setdefault(t, set()).add(s)
    seen = set(a.finals)
    stack = list(a.finals)
    while stack:
        s = stack.pop()
        for p in rev.get(s, ()):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def restrict(a: Fsa, keep: set, finals=None) -> Fsa:
    """Sub-automaton on the states ``keep`` (renumbered), optionally with new finals."""
    order = sorted(keep)
    idx = {s: i for i, s in enumerate(order)}
    delta = {}
    for (s, sym), ts in a.delta.items():
        if s in idx:
            t2 = {idx[t] for t in ts if t in idx}
            if t2:
                delta[(idx[s], sym)] = t2
    fin = a.finals if finals is None else finals
    return Fsa(
        a.alphabet,
        len(order),
        delta,
        {idx[s] for s in a.initial if s in idx},
        {idx[s] for s in fin if s in idx},
    )


def trim(a: Fsa) -> Fsa:
    """Keep only states lying on some initial-to-final path."""
    return restrict(a, accessible(a) & coaccessible(a))


def is_empty(a: Fsa) -> bool:
    return not (accessible(a) & a.finals)


def prefix_closure(a: Fsa) -> Fsa:
    t = trim(a)
    return minimize(Fsa(t.alphabet, t.n, t.delta, t.initial, range(t.n)))


def is_prefix_stable(a: Fsa) -> bool:
    return equivalent(prefix_closure(a), a)


def _reach_cycle(a: Fsa) -> set:
    """States of ``a`` from which some cycle is reachable."""
    g = a.graph()
    cyc = set()
    for comp in nx.strongly_connected_components(g):
        v = next(iter(comp))
        if len(comp) > 1 or g.has_edge(v, v):
            cyc |= comp
    rev = g.reverse(copy=False)
    out = set(cyc)
    for v in cyc:
        out |= nx.descendants(rev, v)
    return out


def prune_inf(a: Fsa) -> Fsa:
    """Words that are prefixes of arbitrarily long words of the language.

    For a prefix-stable language this drops exactly the words that cannot be
    extended indefinitely; the limit set is unchanged.
    """
    t = trim(a)
    keep = _reach_cycle(t)
    r = restrict(t, keep, finals=keep)
    return minimize(r)


def live_states(d: Fsa) -> set:
    """States of a DFA from which infinitely many accepted words can be read."""
    t = coaccessible(d)
    sub = restrict(d, t)
    back = sorted(t)
    return {back[s] for s in _reach_cycle(sub)}


def lex_extremal(a: Fsa, which: str = "min") -> Fsa:
    """Prefixes of the lexicographically extremal infinite word of the limit set.

    The greedy walk takes the smallest (or largest) letter leading to a state
    with infinite continuations, until a state repeats.
    """
    d = minimize(prune_inf(a))
    live = live_states(d)
    (s,) = d.initial
    if s not in live:
        raise EmptyLanguage("language has no infinite continuation")
    order = d.alphabet if which == "min" else tuple(reversed(d.alphabet))
    path_states = [s]
    letters = []
    seen = {s: 0}
    while True:
        nxt = None
        for sym in order:
            t = d.step(s, sym)
            if t is not None and t in live:
                nxt = (sym, t)
                break
        sym, t = nxt
        letters.append(sym)
        if t in seen:
            loop_start = seen[t]
            break
        seen[t] = len(path_states)
        path_states.append(t)
        s = t
    k = len(path_states)
    delta = {(i, letters[i]): {i + 1} for i in range(k - 1)}
    delta[(k - 1, letters[-1])] = {loop_start}
    return minimize(Fsa(d.alphabet, k, delta, {0}, range(k)))


def lasso_word(a: Fsa, which: str = "min"):
    """(u, v) with the extremal infinite word equal to u v^omega."""
    d = minimize(prune_inf(a))
    live = live_states(d)
    (s,) = d.initial
    order = d.alphabet if which == "min" else tuple(reversed(d.alphabet))
    seen = {s: 0}
    word = []
    while True:
        for sym in order:
            t = d.step(s, sym)
            if t is not None and t in live:
                break
        word.append(sym)
        if t in seen:
            i = seen[t]
            return tuple(word[:i]), tuple(word[i:])
        seen[t] = len(word)
        s = t


# two-letter relations -----------------------------------------------------------------

REL_ALPHABET = ((0, 0), (0, 1), (1, 0), (1, 1))


def relations_automaton() -> Fsa:
    """Pairs of equal-length binary words whose cylinders intersect.

    State 0 is the central state, 1 is entered on (0,1) and then loops on (1,0),
    2 is entered on (1,0) and then loops on (0,1). All states are final.
    """
    delta = {
        (0, (0, 0)): {0},
        (0, (1, 1)): {0},
        (0, (0, 1)): {1},
        (1, (1, 0)): {1},
        (0, (1, 0)): {2},
        (2, (0, 1)): {2},
    }
    return Fsa(REL_ALPHABET, 3, delta, {0}, {0, 1, 2})


def relations_product(a: Fsa, b: Fsa) -> Fsa:
    """Synchronous product of two binary automata intersected with the relations automaton."""
    rel = relations_automaton()
    da, db = minimize(a), minimize(b)
    idx: dict = {}
    start = (next(iter(da.initial)), next(iter(db.initial)), 0)
    idx[start] = 0
    queue = deque([start])
    delta = {}
    while queue:
        st = queue.popleft()
        p, q, r = st
        for sym in REL_ALPHABET:
            r2 = rel.step(r, sym)
            if r2 is None:
                continue
            t = (da.step(p, sym[0]), db.step(q, sym[1]), r2)
            if t not in idx:
                idx[t] = len(idx)
                queue.append(t)
            delta[(idx[st], sym)] = {idx[t]}
    finals = {i for (p, q, r), i in idx.items() if p in da.finals and q in db.finals}
    return minimize(Fsa(REL_ALPHABET, len(idx), delta, {0}, finals))


def project(p: Fsa, coord: int, alphabet=(0, 1)) -> Fsa:
    delta: dict = {}
    for (s, sym), ts in p.delta.items():
        delta.setdefault((s, sym[coord]), set()).update(ts)
    return minimize(Fsa(alphabet, p.n, delta, p.initial, p.finals))


def project_first(p: Fsa, alphabet=(0, 1)) -> Fsa:
    return project(p, 0, alphabet)


# decompositions ------------------------------------------------------------------------

def universal_state(d: Fsa):
    """State of a minimal complete DFA whose residual is the full language, or None."""
    for s in range(d.n):
        if s in d.finals and all(d.step(s, sym) == s for sym in d.alphabet):
            return s
    return None


def _cut(d: Fsa, cut: set, finals: set) -> Fsa:
    delta = {k: v for k, v in d.delta.items() if k[0] not in cut}
    return minimize(Fsa(d.alphabet, d.n, delta, d.initial, finals))


def decompose_ab(a: Fsa) -> tuple[Fsa, Fsa]:
    """Split L = A Sigma^* u B where A reaches the full-residual state and B avoids it."""
    d = minimize(a)
    u = universal_state(d)
    if u is None:
        return empty(d.alphabet), d
    A = _cut(d, {u}, {u})
    B = difference(d, concat(A, universal(d.alphabet)))
    return A, B


def residual(d: Fsa, s: int) -> Fsa:
    return minimize(Fsa(d.alphabet, d.n, d.delta, {s}, d.finals))


def residual_decomposition(di: Fsa, targets: dict) -> dict:
    """Languages W_J with pref(union W_J T_J) = di, cut at states whose residual is T_J."""
    d = minimize(di)
    residuals = [residual(d, s) for s in range(d.n)]
    hits: dict = {}
    for name, target in targets.items():
        mt = minimize(target)
        states = [s for s in range(d.n) if residuals[s] == mt]
        if len(states) > 1:
            raise DecompositionFailed(f"several states share the residual of {name!r}")
        hits[name] = states
    cut = {s for ss in hits.values() for s in ss}
    # every live state must reach a cut state
    g = d.graph()
    live = coaccessible(d)
    for s in live:
        if not (({s} | nx.descendants(g, s)) & cut):
            raise DecompositionFailed(f"state {s} cannot reach any target residual")
    out = {}
    for name, ss in hits.items():
        out[name] = _cut(d, cut, set(ss))
    rebuilt = empty(d.alphabet)
    for name, w in out.items():
        rebuilt = union(rebuilt, concat(w, targets[name]))
    if not equivalent(prefix_closure(rebuilt), d):
        raise DecompositionFailed("residual decomposition does not rebuild the language")
    return out


def is_finite(a: Fsa) -> bool:
    t = trim(a)
    return not _reach_cycle(t)


def nontrivial_sccs(d: Fsa) -> list[set]:
    """Strongly connected components carrying at least one edge."""
    g = d.graph()
    out = []
    for comp in nx.strongly_connected_components(g):
        v = next(iter(comp))
        if len(comp) > 1 or g.has_edge(v, v):
            out.append(set(comp))
    return sorted(out, key=min)
