"""Model structures (W, C, F) on finite categories and their axioms."""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as _cartesian

import numpy as np

from .category import (
    binary_product,
    initial_terminal,
    isomorphisms,
    restrict,
    retract_witness,
)
from .errors import CapExceeded, NoFactorization, NoInitial, NoTerminal, UnknownName
from .fcatfile import ALL

COF_TRIVFIB = "cof-then-trivfib"
TRIVCOF_FIB = "trivcof-then-fib"


class ModelStructure:
    """Three morphism classes over a :class:`FiniteCategory`.

    Identities are inserted into every class.
    """

    def __init__(self, base, weq, cof, fib, name=None):
        ids = set(range(base.n_objects))
        self.base = base
        self.name = name
        self.weq = frozenset(int(m) for m in weq) | ids
        self.cof = frozenset(int(m) for m in cof) | ids
        self.fib = frozenset(int(m) for m in fib) | ids
        n = base.n_morphisms
        for cls in (self.weq, self.cof, self.fib):
            if any(m < 0 or m >= n for m in cls):
                raise ValueError("class member outside the base category")
        self._cache = {}

    def mask(self, cls):
        m = np.zeros(self.base.n_morphisms, dtype=bool)
        m[list(cls)] = True
        return m

    @cached_property
    def W(self):
        return self.mask(self.weq)

    @cached_property
    def C(self):
        return self.mask(self.cof)

    @cached_property
    def F(self):
        return self.mask(self.fib)

    @cached_property
    def dual(self):
        """The swapped structure (W, F, C) on the opposite category."""
        d = ModelStructure(self.base.op, self.weq, self.fib, self.cof,
                           name=f"{self.name}^op" if self.name else None)
        d.__dict__["dual"] = self
        return d

    def key(self):
        n0 = self.base.n_objects
        return tuple(tuple(sorted(m for m in cls if m >= n0))
                     for cls in (self.weq, self.cof, self.fib))

    def __eq__(self, other):
        if not isinstance(other, ModelStructure):
            return NotImplemented
        return self.base == other.base and self.key() == other.key()

    __hash__ = object.__hash__

    def describe(self):
        K = self.base
        return {
            k: [K.names[m] for m in sorted(cls) if m >= K.n_objects]
            for k, cls in zip(("weq", "cof", "fib"), (self.weq, self.cof, self.fib))
        }

    def __repr__(self):
        d = self.describe()
        return f"ModelStructure(W={d['weq']}, C={d['cof']}, F={d['fib']})"


def trivial_structure(K):
    everything = range(K.n_morphisms)
    return ModelStructure(K, isomorphisms(K), everything, everything, name="trivial")


def from_block(K, block):
    """Model structure from a parsed :class:`ModelBlock`."""
    classes = []
    for key in ("weq", "cof", "fib"):
        members = block.classes.get(key, [])
        if ALL in members:
            classes.append(range(K.n_morphisms))
            continue
        ids = []
        for name in members:
            try:
                ids.append(K.morphism(name))
            except KeyError:
                raise UnknownName(f"unknown arrow {name!r} in model {block.name!r}") from None
        classes.append(ids)
    return ModelStructure(K, *classes, name=block.name)


# lifting

@dataclass(frozen=True)
class LiftingProblem:
    """Commuting square ``p∘u == v∘i`` awaiting a diagonal ``h: B → X``."""

    base: object = field(repr=False)
    i: int
    p: int
    u: int
    v: int

    def __post_init__(self):
        K = self.base
        i, p, u, v = self.i, self.p, self.u, self.v
        if not (K.dom[u] == K.dom[i] and K.cod[u] == K.dom[p]
                and K.dom[v] == K.cod[i] and K.cod[v] == K.cod[p]):
            raise ValueError("lifting problem is ill-typed")
        if K.table[p, u] != K.table[v, i]:
            raise ValueError("lifting square does not commute")


def has_lift(problem):
    """Least ``h`` with ``h∘i = u`` and ``p∘h = v``, or ``None``."""
    K = problem.base
    H = K.hom(int(K.cod[problem.i]), int(K.dom[problem.p]))
    ok = (K.table[H, problem.i] == problem.u) & (K.table[problem.p, H] == problem.v)
    hits = H[ok]
    return int(hits[0]) if len(hits) else None


def lifts(K, i, p):
    """True iff ``i`` has the left lifting property against ``p``.

    Counts commuting squares and compares with the image of
    ``h ↦ (h∘i, p∘h)``; the image always lies inside the squares.
    """
    key = ("lifts", i, p)
    cached = K._cache.get(key)
    if cached is not None:
        return cached
    A, B = int(K.dom[i]), int(K.cod[i])
    X, Y = int(K.dom[p]), int(K.cod[p])
    U, V, H = K.hom(A, X), K.hom(B, Y), K.hom(B, X)
    n = K.n_morphisms
    if len(U) == 0 or len(V) == 0:
        result = True
    else:
        pu = np.bincount(K.table[p, U], minlength=n)
        vi = np.bincount(K.table[V, i], minlength=n)
        squares = int(np.dot(pu, vi))
        if len(H) == 0:
            result = squares == 0
        else:
            image = np.unique(K.table[H, i] * n + K.table[p, H])
            result = len(image) == squares
    K._cache[key] = result
    return result


def failing_square(K, i, p):
    """Least commuting square ``(u, v)`` with no lift, or ``None``."""
    A, B = int(K.dom[i]), int(K.cod[i])
    X, Y = int(K.dom[p]), int(K.cod[p])
    V = K.hom(B, Y)
    for u in K.hom(A, X):
        vs = V[K.table[V, i] == K.table[p, u]]
        for v in vs:
            if has_lift(LiftingProblem(K, i, p, int(u), int(v))) is None:
                return int(u), int(v)
    return None


# factorization

def _mode_classes(M, mode):
    if mode == COF_TRIVFIB:
        return M.C, M.F & M.W
    if mode == TRIVCOF_FIB:
        return M.C & M.W, M.F
    raise ValueError(f"unknown factorization mode {mode!r}")


def factorizations(M, f, mode):
    """All ``(i, p, middle)`` with ``p∘i == f``, ordered by middle, i, p."""
    K = M.base
    left, right = _mode_classes(M, mode)
    a, b = int(K.dom[f]), int(K.cod[f])
    out = []
    for c in range(K.n_objects):
        Is = K.hom(a, c)
        Is = Is[left[Is]]
        Ps = K.hom(c, b)
        Ps = Ps[right[Ps]]
        if len(Is) == 0 or len(Ps) == 0:
            continue
        hits = np.argwhere(K.table[Ps[None, :], Is[:, None]] == f)
        out.extend((int(Is[x]), int(Ps[y]), c) for x, y in hits)
    return out


def first_factorization(M, f, mode):
    K = M.base
    left, right = _mode_classes(M, mode)
    a, b = int(K.dom[f]), int(K.cod[f])
    for c in range(K.n_objects):
        Is = K.hom(a, c)
        Is = Is[left[Is]]
        Ps = K.hom(c, b)
        Ps = Ps[right[Ps]]
        if len(Is) == 0 or len(Ps) == 0:
            continue
        hits = np.argwhere(K.table[Ps[None, :], Is[:, None]] == f)
        if len(hits):
            x, y = hits[0]
            return int(Is[x]), int(Ps[y]), c
    return None


# axioms

@dataclass
class AxiomCheck:
    name: str
    passed: bool
    counterexample: tuple = None
    failures: int = 0


@dataclass
class AxiomReport:
    checks: list

    @property
    def valid(self):
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self, K):
        def render(x):
            if isinstance(x, tuple):
                return [render(y) for y in x]
            if isinstance(x, str):
                return x
            return K.names[x]

        return {
            "verdict": "valid" if self.valid else "invalid",
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "failures": c.failures,
                    "counterexample": None if c.counterexample is None
                    else render(c.counterexample),
                }
                for c in self.checks
            ],
        }


def _two_out_of_three(M):
    K = M.base
    W = M.W.astype(np.int64)
    T = K.table
    ok = T >= 0
    gf = np.where(ok, T, 0)
    count = W[:, None] + W[None, :] + W[gf]
    bad = np.argwhere(ok & (count == 2))
    ce = None if len(bad) == 0 else (int(bad[0][0]), int(bad[0][1]))
    return AxiomCheck("two-out-of-three", len(bad) == 0, ce, len(bad))


def _retract_closure(M, label, cls_mask):
    K = M.base
    members = np.flatnonzero(cls_mask)
    outside = np.flatnonzero(~cls_mask)
    first, failures = None, 0
    for f in outside:
        for g in members:
            w = retract_witness(K, int(f), int(g))
            if w is not None:
                failures += 1
                if first is None:
                    first = (int(f), int(g))
                break
    return AxiomCheck(f"retract:{label}", failures == 0, first, failures)


def _lifting(M, label, left_mask, right_mask):
    K = M.base
    first, failures = None, 0
    rights = np.flatnonzero(right_mask)
    for i in np.flatnonzero(left_mask):
        for p in rights:
            if not lifts(K, int(i), int(p)):
                failures += 1
                if first is None:
                    u, v = failing_square(K, int(i), int(p))
                    first = (int(i), int(p), u, v)
    return AxiomCheck(f"lifting:{label}", failures == 0, first, failures)


def _factorization(M, label, mode):
    first, failures = None, 0
    for f in range(M.base.n_morphisms):
        if first_factorization(M, f, mode) is None:
            failures += 1
            if first is None:
                first = (f,)
    return AxiomCheck(f"factorization:{label}", failures == 0, first, failures)


def check_axioms(M):
    """Exhaustively check the closed-model axioms; never raises."""
    key = "axioms"
    if key in M._cache:
        return M._cache[key]
    checks = [
        _two_out_of_three(M),
        _retract_closure(M, "W", M.W),
        _retract_closure(M, "C", M.C),
        _retract_closure(M, "F", M.F),
        _lifting(M, "C/F∩W", M.C, M.F & M.W),
        _lifting(M, "C∩W/F", M.C & M.W, M.F),
        _factorization(M, "C/F∩W", COF_TRIVFIB),
        _factorization(M, "C∩W/F", TRIVCOF_FIB),
    ]
    report = M._cache[key] = AxiomReport(checks)
    return report


# enumeration

def enumerate_model_structures(K, cap=12):
    """Every model structure on ``K`` in lexicographic order of (W, C, F)."""
    n = K.n_morphisms
    if n > cap:
        raise CapExceeded(f"{n} morphisms exceeds the enumeration cap of {cap}")
    n0 = K.n_objects
    free = list(range(n0, n))
    ids = (1 << n0) - 1
    T = K.table

    def bits(s):
        return [m for m in range(n) if s >> m & 1]

    def retract_closed(s):
        inside = bits(s)
        return not any(
            retract_witness(K, f, g) is not None
            for f in range(n) if not s >> f & 1
            for g in inside
        )

    subsets = []
    for choice in _cartesian((0, 1), repeat=len(free)):
        s = ids
        for m, c in zip(free, choice):
            if c:
                s |= 1 << m
        subsets.append(s)
    closed = [s for s in subsets if retract_closed(s)]

    def two_of_three(s):
        for g in range(n):
            for f in np.flatnonzero(T[g] >= 0):
                c = (s >> g & 1) + (s >> int(f) & 1) + (s >> int(T[g, f]) & 1)
                if c == 2:
                    return False
        return True

    weqs = [s for s in closed if two_of_three(s)]
    llp = [0] * n  # llp[i]: bitmask of p with i ⧄ p
    for i in range(n):
        for p in range(n):
            if lifts(K, i, p):
                llp[i] |= 1 << p
    facts = [
        [(i, p) for i in range(n) for p in range(n) if T[p, i] == f]
        for f in range(n)
    ]

    def rlp(s):
        out = (1 << n) - 1
        for i in bits(s):
            out &= llp[i]
        return out

    found = []
    for W in weqs:
        for C in closed:
            r_cw = rlp(C & W)
            r_c = rlp(C)
            for F in closed:
                if F & ~r_cw or (F & W) & ~r_c:
                    continue
                ok = all(
                    any((C & W) >> i & 1 and F >> p & 1 for i, p in fs)
                    and any(C >> i & 1 and (F & W) >> p & 1 for i, p in fs)
                    for fs in facts
                )
                if ok:
                    found.append(ModelStructure(K, bits(W), bits(C), bits(F)))
    found.sort(key=ModelStructure.key)
    for idx, M in enumerate(found, start=1):
        M.name = f"E{idx}"
    return found


# fibrant and cofibrant objects

def _unique(K, a, b):
    return int(K.hom(a, b)[0])


def fibrant_cofibrant(M):
    """``(fibrant, cofibrant, K_cf)`` with ``K_cf`` the full subcategory."""
    K = M.base
    initial, terminal = initial_terminal(K)
    if initial is None:
        raise NoInitial("category has no initial object")
    if terminal is None:
        raise NoTerminal("category has no terminal object")
    fibrant = [x for x in range(K.n_objects) if _unique(K, x, terminal) in M.fib]
    cofibrant = [x for x in range(K.n_objects) if _unique(K, initial, x) in M.cof]
    both = [x for x in fibrant if x in cofibrant]
    return fibrant, cofibrant, restrict(K, both)[0]


def cf_objects(M):
    fibrant, cofibrant, _ = fibrant_cofibrant(M)
    return [x for x in fibrant if x in cofibrant]


def is_fibrant(M, y):
    _, terminal = initial_terminal(M.base)
    if terminal is None:
        raise NoTerminal("category has no terminal object")
    return _unique(M.base, y, terminal) in M.fib


def is_cofibrant(M, x):
    initial, _ = initial_terminal(M.base)
    if initial is None:
        raise NoInitial("category has no initial object")
    return _unique(M.base, initial, x) in M.cof


def cofibrant_replacement(M, x):
    """``(Qx, i: initial → Qx in C, p: Qx → x in F∩W)``."""
    initial, _ = initial_terminal(M.base)
    if initial is None:
        raise NoInitial("category has no initial object")
    found = first_factorization(M, _unique(M.base, initial, x), COF_TRIVFIB)
    if found is None:
        raise NoFactorization(f"no cofibrant replacement of {M.base.objects[x]}")
    i, p, q = found
    return q, i, p


def fibrant_replacement(M, x):
    """``(Rx, j: x → Rx in C∩W, q: Rx → terminal in F)``."""
    _, terminal = initial_terminal(M.base)
    if terminal is None:
        raise NoTerminal("category has no terminal object")
    found = first_factorization(M, _unique(M.base, x, terminal), TRIVCOF_FIB)
    if found is None:
        raise NoFactorization(f"no fibrant replacement of {M.base.objects[x]}")
    j, q, r = found
    return r, j, q


def projection_fibration_check(M):
    """Violations ``(y, projection)`` of "fibrant y ⇒ projections of y×y in F"."""
    K = M.base
    fibrant, _, _ = fibrant_cofibrant(M)
    violations = []
    checked = []
    for y in fibrant:
        pw = binary_product(K, y, y)
        if pw is None:
            continue
        checked.append(y)
        for proj in (pw.p0, pw.p1):
            if proj not in M.fib:
                violations.append((y, proj))
    return {"checked": checked, "violations": violations, "passed": not violations}
