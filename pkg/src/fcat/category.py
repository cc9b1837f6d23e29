"""Finite categories with explicit composition tables.

Morphisms are dense integer ids: the identity of object ``i`` is morphism
``i``, declared arrows follow in declaration order.  Composition is stored
as an ``n x n`` array ``table`` with ``table[g, f] == g∘f`` and ``-1`` where
``dom(g) != cod(f)``.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product as _cartesian

import numpy as np

from .errors import CategoryError, NoMediator, NotACone
from .fcatfile import CategoryBlock, identity_name, split_identity


@dataclass(frozen=True)
class Violation:
    """One broken category law, e.g. ``Violation("AssocViolation", ("h", "g", "f"))``."""

    kind: str
    args: tuple

    def __str__(self):
        return f"{self.kind}({', '.join(map(str, self.args))})"


class FiniteCategory:
    """A validated finite category.  Treat instances as immutable."""

    def __init__(self, objects, names, dom, cod, table, name=None):
        self.name = name
        self.objects = tuple(objects)
        self.names = tuple(names)
        self.dom = np.asarray(dom, dtype=np.int64)
        self.cod = np.asarray(cod, dtype=np.int64)
        self.table = np.asarray(table, dtype=np.int64)
        self.table.setflags(write=False)
        self.dom.setflags(write=False)
        self.cod.setflags(write=False)
        self._index = {n: i for i, n in enumerate(self.names)}
        self._obj_index = {o: i for i, o in enumerate(self.objects)}
        self._cache = {}

    # basic accessors

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return len(self.names)

    def identity(self, obj):
        return int(obj)

    def is_identity(self, m):
        return m < self.n_objects

    def morphism(self, name):
        return self._index[name]

    def obj(self, name):
        return self._obj_index[name]

    def compose(self, *ms):
        """``compose(h, g, f) == h∘g∘f``."""
        result = ms[-1]
        for g in reversed(ms[:-1]):
            r = int(self.table[g, result])
            if r < 0:
                raise ValueError(f"{self.names[g]} . {self.names[result]} is not composable")
            result = r
        return int(result)

    @cached_property
    def _homs(self):
        homs = {}
        for a in range(self.n_objects):
            for b in range(self.n_objects):
                homs[a, b] = np.flatnonzero((self.dom == a) & (self.cod == b))
        return homs

    def hom(self, a, b):
        return self._homs[a, b]

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteCategory{label}: {self.n_objects} objects, {self.n_morphisms} morphisms>"

    def __eq__(self, other):
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.names == other.names
            and np.array_equal(self.dom, other.dom)
            and np.array_equal(self.cod, other.cod)
            and np.array_equal(self.table, other.table)
        )

    __hash__ = object.__hash__

    @cached_property
    def op(self):
        dual = opposite(self)
        dual.__dict__["op"] = self
        return dual

    def to_block(self, name=None):
        """Raw description suitable for :func:`fcat.fcatfile.dumps`."""
        n0 = self.n_objects
        block = CategoryBlock(name or self.name or "C", objects=list(self.objects))
        for m in range(n0, self.n_morphisms):
            block.arrows.append(
                (self.names[m], self.objects[self.dom[m]], self.objects[self.cod[m]])
            )
        for g in range(n0, self.n_morphisms):
            for f in np.flatnonzero(self.table[g] >= 0):
                if f < n0:
                    continue
                block.composes.append((self.names[g], self.names[f], self.names[self.table[g, f]]))
        return block


def validate_category(raw, name=None):
    """Build a :class:`FiniteCategory` from a raw :class:`CategoryBlock`.

    Raises :class:`CategoryError` carrying every violated law.
    """
    violations = []
    objects = list(raw.objects)
    obj_index = {}
    for o in objects:
        if o in obj_index:
            violations.append(Violation("DuplicateName", (o,)))
        obj_index.setdefault(o, len(obj_index))
    objects = list(obj_index)
    n0 = len(objects)
    names = [identity_name(o) for o in objects]
    dom = list(range(n0))
    cod = list(range(n0))
    index = {nm: i for i, nm in enumerate(names)}
    for a, d, c in raw.arrows:
        if a in index:
            violations.append(Violation("DuplicateName", (a,)))
            continue
        if d not in obj_index or c not in obj_index:
            violations.append(Violation("DanglingReference", (d if d not in obj_index else c,)))
            continue
        index[a] = len(names)
        names.append(a)
        dom.append(obj_index[d])
        cod.append(obj_index[c])
    n = len(names)
    dom = np.array(dom, dtype=np.int64)
    cod = np.array(cod, dtype=np.int64)
    table = np.full((n, n), -1, dtype=np.int64)
    composable = dom[:, None] == cod[None, :]
    # identity laws are implicit: id∘f = f = f∘id
    for f in range(n):
        table[cod[f], f] = f
        table[f, dom[f]] = f

    declared = {}
    for g, f, h in raw.composes:
        missing = [x for x in (g, f, h) if x not in index]
        if missing:
            violations.extend(Violation("DanglingReference", (x,)) for x in missing)
            continue
        gi, fi, hi = index[g], index[f], index[h]
        if dom[gi] != cod[fi] or dom[hi] != dom[fi] or cod[hi] != cod[gi]:
            violations.append(Violation("TypingViolation", (g, f, h)))
            continue
        if (gi, fi) in declared:
            if declared[gi, fi] != hi:
                violations.append(Violation("DuplicateComposite", (g, f)))
            continue
        declared[gi, fi] = hi
        if gi < n0 or fi < n0:
            other = fi if gi < n0 else gi
            if hi != other:
                violations.append(Violation("IdentityViolation", (names[other],)))
            continue
        table[gi, fi] = hi

    for g in range(n0, n):
        for f in np.flatnonzero(composable[g]):
            if f >= n0 and table[g, f] < 0:
                violations.append(Violation("MissingComposite", (names[g], names[f])))

    if not violations:
        violations.extend(_associativity_violations(table, dom, cod, names))
    if violations:
        raise CategoryError(violations)
    return FiniteCategory(objects, names, dom, cod, table, name=name or raw.name)


def _associativity_violations(table, dom, cod, names):
    out = []
    n = len(names)
    for g in range(n):
        fs = np.flatnonzero(cod == dom[g])
        hs = np.flatnonzero(dom == cod[g])
        if len(fs) == 0 or len(hs) == 0:
            continue
        gf = table[g, fs]
        hg = table[hs, g]
        left = table[hg[:, None], fs[None, :]]
        right = table[hs[:, None], gf[None, :]]
        for hi, fi in np.argwhere(left != right):
            out.append(Violation("AssocViolation", (names[hs[hi]], names[g], names[fs[fi]])))
    return out


def opposite(K):
    """The opposite category: same ids, dom/cod swapped, transposed table."""
    return FiniteCategory(
        K.objects, K.names, K.cod, K.dom, K.table.T.copy(),
        name=f"{K.name}^op" if K.name else None,
    )


def initial_terminal(K):
    """``(initial, terminal)`` object ids; either may be ``None``."""
    initial = terminal = None
    n = K.n_objects
    for x in range(n):
        if initial is None and all(len(K.hom(x, y)) == 1 for y in range(n)):
            initial = x
        if terminal is None and all(len(K.hom(y, x)) == 1 for y in range(n)):
            terminal = x
    return initial, terminal


@dataclass(frozen=True)
class ProductWitness:
    obj: int
    p0: int
    p1: int


@dataclass(frozen=True)
class CoproductWitness:
    obj: int
    i0: int
    i1: int


def is_product(K, p, a, b):
    """True iff ``(a: p→x, b: p→y)`` satisfies the product universal property."""
    x, y = int(K.cod[a]), int(K.cod[b])
    n = K.n_morphisms
    for z in range(K.n_objects):
        H = K.hom(z, p)
        if len(H) != len(K.hom(z, x)) * len(K.hom(z, y)):
            return False
        codes = K.table[a, H] * n + K.table[b, H]
        if len(np.unique(codes)) != len(H):
            return False
    return True


def binary_product(K, x, y):
    """Canonical product witness of ``x`` and ``y`` or ``None``.

    Candidates are tried by object index, then projection indices, and each
    one is checked against every cone by enumeration.
    """
    key = ("product", x, y)
    if key in K._cache:
        return K._cache[key]
    result = None
    for p in range(K.n_objects):
        if any(
            len(K.hom(z, p)) != len(K.hom(z, x)) * len(K.hom(z, y))
            for z in range(K.n_objects)
        ):
            continue
        for a, b in _cartesian(K.hom(p, x), K.hom(p, y)):
            if is_product(K, p, int(a), int(b)):
                result = ProductWitness(p, int(a), int(b))
                break
        if result is not None:
            break
    K._cache[key] = result
    return result


def binary_coproduct(K, x, y):
    pw = binary_product(K.op, x, y)
    if pw is None:
        return None
    return CoproductWitness(pw.obj, pw.p0, pw.p1)


def pair(K, pw, u, v):
    """The mediating morphism ``<u, v>: z → pw.obj``."""
    x, y = K.cod[pw.p0], K.cod[pw.p1]
    if K.dom[u] != K.dom[v] or K.cod[u] != x or K.cod[v] != y:
        raise NotACone(f"({K.names[u]}, {K.names[v]}) is not a cone over the product")
    H = K.hom(int(K.dom[u]), pw.obj)
    hits = H[(K.table[pw.p0, H] == u) & (K.table[pw.p1, H] == v)]
    if len(hits) != 1:
        raise NoMediator(f"{len(hits)} mediators for ({K.names[u]}, {K.names[v]})")
    return int(hits[0])


def copair(K, cw, u, v):
    """The mediating morphism ``[u, v]: cw.obj → z``."""
    try:
        return pair(K.op, ProductWitness(cw.obj, cw.i0, cw.i1), u, v)
    except NotACone:
        raise NotACone(
            f"({K.names[u]}, {K.names[v]}) is not a cocone under the coproduct"
        ) from None


def diagonal(K, pw):
    y = int(K.cod[pw.p0])
    return pair(K, pw, y, y)


def fold(K, cw):
    x = int(K.dom[cw.i0])
    return copair(K, cw, x, x)


def all_pairs_products(K):
    """True iff every ordered pair of objects has a binary product."""
    return all(
        binary_product(K, x, y) is not None
        for x in range(K.n_objects)
        for y in range(K.n_objects)
    )


def is_iso(K, f):
    a, b = int(K.dom[f]), int(K.cod[f])
    G = K.hom(b, a)
    return bool(np.any((K.table[G, f] == a) & (K.table[f, G] == b)))


def inverse(K, f):
    a, b = int(K.dom[f]), int(K.cod[f])
    G = K.hom(b, a)
    hits = G[(K.table[G, f] == a) & (K.table[f, G] == b)]
    return int(hits[0]) if len(hits) else None


def isomorphisms(K):
    key = ("isos",)
    if key not in K._cache:
        K._cache[key] = frozenset(m for m in range(K.n_morphisms) if is_iso(K, m))
    return K._cache[key]


def _sections(K, a, x):
    """Arrays ``(I, R)`` of all ``i: a→x``, ``r: x→a`` with ``r∘i = id_a``."""
    key = ("sections", a, x)
    if key not in K._cache:
        I, R = [], []
        back = K.hom(x, a)
        for i in K.hom(a, x):
            rs = back[K.table[back, i] == a]
            I.extend([int(i)] * len(rs))
            R.extend(int(r) for r in rs)
        K._cache[key] = (np.array(I, dtype=np.int64), np.array(R, dtype=np.int64))
    return K._cache[key]


def retract_witness(K, f, g):
    """``(i, r, j, s)`` exhibiting ``f`` as a retract of ``g``, or ``None``.

    The two squares are ``g∘i = j∘f`` and ``f∘r = s∘g`` with ``r∘i = id`` and
    ``s∘j = id``.
    """
    A, B = int(K.dom[f]), int(K.cod[f])
    X, Y = int(K.dom[g]), int(K.cod[g])
    I, R = _sections(K, A, X)
    J, S = _sections(K, B, Y)
    if len(I) == 0 or len(J) == 0:
        return None
    top = K.table[g, I][:, None] == K.table[J, f][None, :]
    bottom = K.table[f, R][:, None] == K.table[S, g][None, :]
    hits = np.argwhere(top & bottom)
    if len(hits) == 0:
        return None
    a, b = hits[0]
    return int(I[a]), int(R[a]), int(J[b]), int(S[b])


def is_retract(K, f, g):
    """True iff ``f`` is a retract of ``g`` in the arrow category."""
    return retract_witness(K, f, g) is not None


def restrict(K, objs):
    """Full subcategory on ``objs`` plus the ids of the kept morphisms."""
    keep_obj = sorted({int(o) for o in objs})
    obj_map = {o: i for i, o in enumerate(keep_obj)}
    ids = [obj for obj in keep_obj]
    ids += [
        m for m in range(K.n_objects, K.n_morphisms)
        if K.dom[m] in obj_map and K.cod[m] in obj_map
    ]
    ids = np.array(ids, dtype=np.int64)
    remap = np.full(K.n_morphisms + 1, -1, dtype=np.int64)
    remap[ids] = np.arange(len(ids))
    sub = K.table[np.ix_(ids, ids)]
    table = remap[sub]  # -1 maps to remap[-1] == -1
    sub_cat = FiniteCategory(
        [K.objects[o] for o in keep_obj],
        [K.names[m] for m in ids],
        [obj_map[int(K.dom[m])] for m in ids],
        [obj_map[int(K.cod[m])] for m in ids],
        table,
        name=K.name,
    )
    return sub_cat, ids


def full_subcategory(K, objs):
    return restrict(K, objs)[0]


def check_laws(K):
    """Re-verify identity and associativity laws of an existing category."""
    out = []
    for f in range(K.n_morphisms):
        if K.table[K.cod[f], f] != f or K.table[f, K.dom[f]] != f:
            out.append(Violation("IdentityViolation", (K.names[f],)))
    composable = K.dom[:, None] == K.cod[None, :]
    if np.any(composable != (K.table >= 0)):
        out.append(Violation("MissingComposite", ("?", "?")))
        return out
    out.extend(_associativity_violations(K.table, K.dom, K.cod, K.names))
    return out


def from_spec(objects, arrows, composes=(), name=None):
    """Convenience constructor from plain Python lists."""
    return validate_category(
        CategoryBlock(name or "C", list(objects), [tuple(a) for a in arrows],
                      [tuple(c) for c in composes]),
        name=name,
    )


__all__ = [
    "CoproductWitness",
    "FiniteCategory",
    "ProductWitness",
    "Violation",
    "all_pairs_products",
    "binary_coproduct",
    "binary_product",
    "check_laws",
    "copair",
    "diagonal",
    "fold",
    "from_spec",
    "full_subcategory",
    "initial_terminal",
    "inverse",
    "is_iso",
    "is_product",
    "is_retract",
    "isomorphisms",
    "opposite",
    "pair",
    "restrict",
    "retract_witness",
    "split_identity",
    "validate_category",
]
