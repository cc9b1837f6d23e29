"""The localization K[W^-1] as a presented category, and its comparison with Ho.

Words are tuples of generator ids in diagrammatic order: ``(f, g)`` is
``g∘f``.  Generator ``m < n`` is the K morphism ``m``; generator
``n + k`` is the formal inverse of the k-th weak equivalence.

:func:`saturate` runs a length-bounded coset enumeration per source
object: cosets are classes of words starting at that object, a new coset is
only defined for a word of length ≤ L, and relations are scanned at every
coset until nothing changes.  The result is ``exact`` when the table is
complete and every relation holds at every coset; the classes are then in
bijection with the hom-sets of K[W^-1].  :func:`saturate_words` is the
literal version (all words of length ≤ L, union-find over single
rewrites) and is kept as an independent check for small inputs.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .category import validate_category
from .errors import BoundTooLargeForBudget
from .fcatfile import CategoryBlock, identity_name
from .ho import quotient
from .model import (
    cf_objects,
    cofibrant_replacement,
    fibrant_replacement,
    is_cofibrant,
    is_fibrant,
)

EXACT = "exact"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Generator:
    name: str
    dom: int
    cod: int
    morphism: int
    inverse: bool = False


@dataclass(frozen=True)
class Relation:
    lhs: tuple
    rhs: tuple
    tag: str


@dataclass
class PresentedCategory:
    base: object = field(repr=False)
    weq: tuple
    generators: list
    relations: list

    def word_dom(self, word, start):
        return start if not word else self.generators[word[0]].dom

    def word_name(self, word):
        if not word:
            return None
        return "*".join(self.generators[g].name for g in reversed(word))


def present(K, W):
    """Generators: every morphism of K plus a formal inverse per ``w ∈ W``."""
    weq = tuple(sorted(int(w) for w in W))
    n = K.n_morphisms
    gens = [Generator(K.names[m], int(K.dom[m]), int(K.cod[m]), m) for m in range(n)]
    for w in weq:
        gens.append(Generator(K.names[w] + "~", int(K.cod[w]), int(K.dom[w]), w, True))
    rels = [Relation((x,), (), "identity") for x in range(K.n_objects)]
    T = K.table
    for g in range(n):
        for f in np.flatnonzero(T[g] >= 0):
            rels.append(Relation((int(f), g), (int(T[g, f]),), "compose"))
    for k, w in enumerate(weq):
        bar = n + k
        rels.append(Relation((w, bar), (), "inverse-left"))
        rels.append(Relation((bar, w), (), "inverse-right"))
    return PresentedCategory(K, weq, gens, rels)


# coset enumeration

class _Groups:
    """Relations of one shape, bucketed by the object they start at."""

    def __init__(self, P):
        gens = P.generators
        self.unit = {}  # (x,) -> ()
        self.pair = {}  # (x, y) -> ()
        self.triple = {}  # (x, y) -> (z,)
        buckets = {"unit": {}, "pair": {}, "triple": {}}
        for idx, rel in enumerate(P.relations):
            start = gens[rel.lhs[0]].dom
            if len(rel.lhs) == 1 and not rel.rhs:
                buckets["unit"].setdefault(start, []).append((rel.lhs[0], idx))
            elif len(rel.lhs) == 2 and not rel.rhs:
                buckets["pair"].setdefault(start, []).append((*rel.lhs, idx))
            elif len(rel.lhs) == 2 and len(rel.rhs) == 1:
                buckets["triple"].setdefault(start, []).append((*rel.lhs, rel.rhs[0], idx))
            else:
                raise ValueError(f"unsupported relation shape {rel}")
        for name, bucket in buckets.items():
            target = getattr(self, name)
            for b, rows in bucket.items():
                target[b] = np.array(rows, dtype=np.int64).T


class _Enumerator:
    def __init__(self, P, groups, source, bound, budget):
        self.P = P
        self.G = len(P.generators)
        self.groups = groups
        self.source = source
        self.bound = bound
        self.budget = budget
        self.gens_from = {}
        for i, g in enumerate(P.generators):
            self.gens_from.setdefault(g.dom, []).append(i)
        self.gens_from = {b: np.array(v, dtype=np.int64) for b, v in self.gens_from.items()}
        self.T = np.full((64, self.G), -1, dtype=np.int64)
        self.cod = []
        self.rep = []
        self.parent = []
        self.events = []
        self.changed = False
        self._new(source, ())

    # bookkeeping

    def _new(self, cod, rep):
        idx = len(self.cod)
        if idx >= self.budget:
            raise BoundTooLargeForBudget(
                f"more than {self.budget} cosets from object {self.source} at bound {self.bound}"
            )
        if idx >= len(self.T):
            grown = np.full((2 * len(self.T), self.G), -1, dtype=np.int64)
            grown[: len(self.T)] = self.T
            self.T = grown
        self.cod.append(cod)
        self.rep.append(rep)
        self.parent.append(idx)
        return idx

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def alive(self):
        return [i for i in range(len(self.cod)) if self.parent[i] == i]

    def _merge(self, pairs, tags):
        queue = deque(zip(pairs, tags))
        merged = False
        while queue:
            (a, b), tag = queue.popleft()
            a, b = self.find(int(a)), self.find(int(b))
            if a == b:
                continue
            if (len(self.rep[b]), self.rep[b]) < (len(self.rep[a]), self.rep[a]):
                self.rep[a] = self.rep[b]
            if b < a:
                a, b = b, a
                self.rep[a] = min(self.rep[a], self.rep[b], key=lambda w: (len(w), w))
            self.parent[b] = a
            merged = True
            self.events.append((a, b, tag))
            ra, rb = self.T[a], self.T[b]
            only_b = (ra < 0) & (rb >= 0)
            ra[only_b] = rb[only_b]
            for g in np.flatnonzero((ra >= 0) & (rb >= 0) & (ra != rb)):
                queue.append(((ra[g], rb[g]), tag))
        if merged:
            self._normalize()
            self.changed = True

    def _normalize(self):
        n = len(self.cod)
        root = np.array([self.find(i) for i in range(n)], dtype=np.int64)
        T = self.T[:n]
        mask = T >= 0
        T[mask] = root[T[mask]]

    # scanning

    def _deduce(self, rows, cols, values, tags):
        """Set undefined entries; conflicting deductions become coincidences."""
        if len(rows) == 0:
            return
        self.T[rows, cols] = values
        back = self.T[rows, cols]
        clash = back != values
        self.changed = True
        if np.any(clash):
            self._merge(list(zip(back[clash], values[clash])), list(tags[clash]))

    def scan(self, S):
        """Scan every relation at the cosets ``S`` (all with the same codomain)."""
        S = np.asarray(S, dtype=np.int64)
        b = self.cod[S[0]]
        T = self.T
        g = self.groups
        if b in g.unit:
            X, idx = g.unit[b]
            t = T[S[:, None], X[None, :]]
            s = np.broadcast_to(S[:, None], t.shape)
            und = t < 0
            self._deduce(s[und], np.broadcast_to(X, t.shape)[und], s[und],
                         np.broadcast_to(idx, t.shape)[und])
            diff = (t >= 0) & (t != s)
            if np.any(diff):
                self._merge(list(zip(t[diff], s[diff])),
                            list(np.broadcast_to(idx, t.shape)[diff]))
        for kind in ("pair", "triple"):
            table = getattr(g, kind)
            if b not in table:
                continue
            if kind == "pair":
                X, Y, idx = table[b]
                Z = None
            else:
                X, Y, Z, idx = table[b]
            S = np.array([self.find(int(x)) for x in S], dtype=np.int64)
            T = self.T
            t1 = T[S[:, None], X[None, :]]
            defined = t1 >= 0
            Yb = np.broadcast_to(Y, t1.shape)
            t2 = np.full(t1.shape, -1, dtype=np.int64)
            t2[defined] = T[t1[defined], Yb[defined]]
            if Z is None:
                r = np.broadcast_to(S[:, None], t1.shape)
            else:
                r = T[S[:, None], Z[None, :]]
            I = np.broadcast_to(idx, t1.shape)
            fwd = defined & (t2 < 0) & (r >= 0)
            self._deduce(t1[fwd], Yb[fwd], r[fwd], I[fwd])
            if Z is not None:
                back = defined & (t2 >= 0) & (r < 0)
                Sb = np.broadcast_to(S[:, None], t1.shape)
                self._deduce(Sb[back], np.broadcast_to(Z, t1.shape)[back], t2[back], I[back])
            clash = defined & (t2 >= 0) & (r >= 0) & (t2 != r)
            if np.any(clash):
                self._merge(list(zip(t2[clash], r[clash])), list(I[clash]))

    def close(self, chunk=16):
        """Scan all live cosets until a whole pass changes nothing."""
        while True:
            self.changed = False
            by_cod = {}
            for s in self.alive():
                by_cod.setdefault(self.cod[s], []).append(s)
            for cosets in by_cod.values():
                for i in range(0, len(cosets), chunk):
                    block = [c for c in cosets[i:i + chunk] if self.find(c) == c]
                    if block:
                        self.scan(block)
            if not self.changed:
                return

    def incomplete(self):
        out = []
        for s in self.alive():
            gens = self.gens_from.get(self.cod[s])
            if gens is not None and np.any(self.T[s, gens] < 0):
                out.append(s)
        return out

    def run(self):
        for depth in range(self.bound):
            self.close()
            pending = [s for s in self.incomplete() if len(self.rep[s]) <= depth]
            if not pending and not self.incomplete():
                break
            for s in pending:
                if self.find(s) != s:
                    continue
                for gen in self.gens_from[self.cod[s]]:
                    if self.T[s, gen] < 0:
                        t = self._new(self.P.generators[gen].cod, self.rep[s] + (int(gen),))
                        self.T[s, gen] = t
        self.close()
        return not self.incomplete()


@dataclass
class SourceTable:
    """Classes of words starting at one object, renumbered in shortlex order."""

    source: int
    table: np.ndarray
    cod: list
    reps: list

    def trace(self, start, word):
        c = start
        for g in word:
            c = int(self.table[c, g])
            if c < 0:
                return None
        return c


@dataclass
class WordQuotient:
    presentation: PresentedCategory = field(repr=False)
    bound: int
    status: str
    tables: dict
    events: int = 0

    @property
    def exact(self):
        return self.status == EXACT

    def classes(self, a, b):
        t = self.tables[a]
        return [t.reps[c] for c in range(len(t.cod)) if t.cod[c] == b]

    def counts(self):
        K = self.presentation.base
        return {(a, b): len(self.classes(a, b))
                for a in range(K.n_objects) for b in range(K.n_objects)}

    def class_of(self, word, start):
        """Local class id of ``word`` read from ``start``, or ``None``."""
        return self.tables[start].trace(0, word)

    def compose_classes(self, a, u, v_word):
        return self.tables[a].trace(u, v_word)

    def is_invertible(self, a, u):
        """Does class ``u`` (in the table of ``a``) have a two-sided inverse?"""
        t = self.tables[a]
        b = t.cod[u]
        tb = self.tables[b]
        for v in range(len(tb.cod)):
            if tb.cod[v] != a:
                continue
            if t.trace(u, tb.reps[v]) == 0 and tb.trace(v, t.reps[u]) == 0:
                return True
        return False

    def to_category(self, name=None):
        """K[W^-1] as a :class:`FiniteCategory`; only meaningful when exact."""
        P = self.presentation
        K = P.base
        block = CategoryBlock(name or (f"Loc_{K.name}" if K.name else "Loc"),
                              objects=list(K.objects))
        label = {}
        for a, t in self.tables.items():
            for c, word in enumerate(t.reps):
                if not word:
                    label[a, c] = identity_name(K.objects[a])
                else:
                    label[a, c] = P.word_name(word)
                    block.arrows.append((label[a, c], K.objects[a], K.objects[t.cod[c]]))
        for a, t in self.tables.items():
            for u, uw in enumerate(t.reps):
                if not uw:
                    continue
                b = t.cod[u]
                tb = self.tables[b]
                for v, vw in enumerate(tb.reps):
                    if not vw:
                        continue
                    block.composes.append((label[b, v], label[a, u], label[a, t.trace(u, vw)]))
        return validate_category(block)


def _bfs_reps(P, enum):
    """Renumber live cosets by the shortlex-least word reaching them."""
    alive = enum.alive()
    index, reps, order = {0: 0}, [()], [0]
    queue = deque([0])
    gens_from = enum.gens_from
    while queue:
        c = queue.popleft()
        for gen in gens_from.get(enum.cod[c], ()):
            t = int(enum.T[c, gen])
            if t < 0:
                continue
            t = enum.find(t)
            if t not in index:
                index[t] = len(order)
                order.append(t)
                reps.append(reps[index[c]] + (int(gen),))
                queue.append(t)
    for c in alive:
        if c not in index:
            index[c] = len(order)
            order.append(c)
            reps.append(enum.rep[c])
    remap = np.full(len(enum.cod) + 1, -1, dtype=np.int64)
    for c in range(len(enum.cod)):
        remap[c] = index.get(enum.find(c), -1)
    table = enum.T[order]
    table = np.where(table >= 0, remap[table], -1)
    return SourceTable(enum.source, table, [enum.cod[c] for c in order], reps)


def saturate(P, bound, budget=50_000):
    """Bounded coset enumeration of ``P``; see the module docstring."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    groups = _Groups(P)
    tables, complete, events = {}, True, 0
    for a in range(P.base.n_objects):
        enum = _Enumerator(P, groups, a, bound, budget)
        complete &= enum.run()
        events += len(enum.events)
        tables[a] = _bfs_reps(P, enum)
    return WordQuotient(P, bound, EXACT if complete else INCONCLUSIVE, tables, events)


# literal word saturation

def _rewrite_rules(P):
    K = P.base
    n0 = K.n_objects
    rules = set()
    for rel in P.relations:
        lhs = tuple(g for g in rel.lhs if g >= n0)
        rhs = tuple(g for g in rel.rhs if g >= n0)
        if lhs != rhs:
            if (len(lhs), lhs) < (len(rhs), rhs):
                lhs, rhs = rhs, lhs
            rules.add((lhs, rhs))
    return sorted(rules)


def _enumerate_words(P, bound, max_words):
    K = P.base
    n0 = K.n_objects
    gens_from = {}
    for i, g in enumerate(P.generators):
        if i >= n0:
            gens_from.setdefault(g.dom, []).append(i)
    words = [(a, ()) for a in range(K.n_objects)]
    frontier = list(words)
    for _ in range(bound):
        nxt = []
        for a, w in frontier:
            end = P.generators[w[-1]].cod if w else a
            for g in gens_from.get(end, ()):
                nxt.append((a, w + (g,)))
        words.extend(nxt)
        frontier = nxt
        if len(words) > max_words:
            raise BoundTooLargeForBudget(f"more than {max_words} words at bound {bound}")
    return words


@dataclass
class WordPartition:
    bound: int
    find: dict
    members: dict  # root -> sorted words

    def classes(self, a, b, P):
        out = []
        for ws in self.members.values():
            x, w = ws[0]
            end = P.generators[w[-1]].cod if w else x
            if x == a and end == b:
                out.append(ws)
        return sorted(out, key=lambda ws: (len(ws[0][1]), ws[0][1]))


def _partition(P, bound, max_words):
    words = _enumerate_words(P, bound, max_words)
    rules = _rewrite_rules(P)
    parent = {w: w for w in words}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for a, w in words:
        for lhs, rhs in rules:
            k = len(lhs)
            for i in range(len(w) - k + 1):
                if w[i:i + k] == lhs:
                    other = (a, w[:i] + rhs + w[i + k:])
                    x, y = find((a, w)), find(other)
                    if x != y:
                        parent[max(x, y, key=_wkey)] = min(x, y, key=_wkey)
    members = {}
    for w in words:
        members.setdefault(find(w), []).append(w)
    for ws in members.values():
        ws.sort(key=_wkey)
    return WordPartition(bound, {w: find(w) for w in words}, members)


def _wkey(w):
    return (len(w[1]), w[1])


@dataclass
class WordSaturation:
    presentation: PresentedCategory = field(repr=False)
    bound: int
    status: str
    partition: WordPartition

    def counts(self):
        K = self.presentation.base
        return {(a, b): len(self.partition.classes(a, b, self.presentation))
                for a in range(K.n_objects) for b in range(K.n_objects)}


def saturate_words(P, bound, max_words=200_000):
    """All composable words of length ≤ ``bound`` modulo single rewrites.

    Exact iff the partition at ``bound + 1`` is in canonical bijection with
    the one at ``bound`` and products of representatives reduce into it.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    here = _partition(P, bound, max_words)
    nxt = _partition(P, bound + 1, max_words)
    ok = True
    # no merges: distinct classes at bound stay distinct at bound + 1
    roots = {}
    for w, r in here.find.items():
        roots.setdefault(nxt.find[w], set()).add(r)
    if any(len(v) > 1 for v in roots.values()):
        ok = False
    # no new classes: every class at bound + 1 contains a short word
    if ok and any(len(ws[0][1]) > bound for ws in nxt.members.values()):
        ok = False
    if ok:
        rules = _rewrite_rules(P)
        reps = [ws[0] for ws in here.members.values()]
        by_start = {}
        for a, w in reps:
            by_start.setdefault(a, []).append((a, w))
        for a, u in reps:
            end = P.generators[u[-1]].cod if u else a
            for _, v in by_start.get(end, ()):
                if _reduce_into(u + v, bound, rules) is None:
                    ok = False
                    break
            if not ok:
                break
    return WordSaturation(P, bound, EXACT if ok else INCONCLUSIVE, here)


def _reduce_into(word, bound, rules):
    """Some reduct of ``word`` with length ≤ ``bound``, or ``None``."""
    seen, queue = {word}, deque([word])
    while queue:
        w = queue.popleft()
        if len(w) <= bound:
            return w
        for lhs, rhs in rules:
            k = len(lhs)
            for i in range(len(w) - k + 1):
                if w[i:i + k] == lhs:
                    r = w[:i] + rhs + w[i + k:]
                    if r not in seen:
                        seen.add(r)
                        queue.append(r)
    return None


# comparison with Ho

@dataclass
class Comparison:
    verdict: str  # Equivalent | NotEquivalent | Inconclusive
    witness: dict = None
    checks: dict = field(default_factory=dict)

    @property
    def equivalent(self):
        return self.verdict == "Equivalent"


def localize(M, bound):
    return saturate(present(M.base, M.weq), bound)


def compare(M, bound, loc=None):
    """Check that J: Ho → K[W^-1], [f] ↦ class of f, is an equivalence."""
    K = M.base
    H = quotient(M)
    loc = loc or localize(M, bound)
    if not loc.exact:
        return Comparison("Inconclusive", {"reason": f"saturation inconclusive at bound {bound}"})
    objs = cf_objects(M)
    checks = {}

    def J(m):
        return loc.class_of((int(m),), int(K.dom[m]))

    # well defined
    for q, members in H.classes.items():
        images = {J(m) for m in members}
        if len(images) != 1:
            return Comparison("NotEquivalent",
                              {"check": "well-defined", "class": [K.names[m] for m in members]},
                              checks)
    checks["well-defined"] = True
    # full and faithful
    for a in objs:
        for b in objs:
            ho_classes = [ms for ms in H.classes.values()
                          if K.dom[ms[0]] == a and K.cod[ms[0]] == b]
            images = {J(ms[0]) for ms in ho_classes}
            loc_count = len(loc.classes(a, b))
            if len(images) != len(ho_classes):
                return Comparison("NotEquivalent",
                                  {"check": "faithful", "objects": [K.objects[a], K.objects[b]]},
                                  checks)
            if len(images) != loc_count:
                return Comparison("NotEquivalent",
                                  {"check": "full", "objects": [K.objects[a], K.objects[b]],
                                   "ho": len(images), "loc": loc_count}, checks)
    checks["fully-faithful"] = True
    # essentially surjective through replacements
    chains = {}
    for x in range(K.n_objects):
        q, _, p = cofibrant_replacement(M, x)
        r, j, _ = fibrant_replacement(M, q)
        if not (is_cofibrant(M, r) and is_fibrant(M, r)):
            return Comparison("NotEquivalent",
                              {"check": "essentially-surjective", "object": K.objects[x],
                               "reason": "replacement is not fibrant-cofibrant"}, checks)
        for w in (p, j):
            if w not in M.weq or not loc.is_invertible(int(K.dom[w]), J(w)):
                return Comparison("NotEquivalent",
                                  {"check": "essentially-surjective", "object": K.objects[x],
                                   "morphism": K.names[w]}, checks)
        chains[K.objects[x]] = [K.names[p], K.names[j], K.objects[r]]
    checks["essentially-surjective"] = True
    return Comparison("Equivalent", {"replacements": chains}, checks)
