"""The homotopy category Ho(K) = K_cf/~ and its projection functor."""

from dataclasses import dataclass, field

import numpy as np

from .category import (
    binary_coproduct,
    binary_product,
    initial_terminal,
    is_iso,
    isomorphisms,
    restrict,
    validate_category,
)
from .errors import NotACongruence
from .fcatfile import ALL, CategoryBlock, FcatDocument, ModelBlock, identity_name
from .homotopy import homotopy_on_Kcf
from .model import cf_objects


@dataclass
class CongruenceVerdict:
    congruence: bool
    counterexample: tuple = None
    reason: str = None


def check_congruence(M, relation=None):
    """Is ~ an equivalence on each hom-set of K_cf, compatible with composition?"""
    rel = relation or homotopy_on_Kcf(M)
    K = M.base
    T = K.table
    objs = rel.objects
    for x in objs:
        for y in objs:
            H = [int(m) for m in K.hom(x, y)]
            for a in H:
                if not rel.related(a, a):
                    return CongruenceVerdict(False, (a,), "not reflexive")
                for b in H:
                    if not rel.related(a, b):
                        continue
                    if not rel.related(b, a):
                        return CongruenceVerdict(False, (a, b), "not symmetric")
                    for c in H:
                        if rel.related(b, c) and not rel.related(a, c):
                            return CongruenceVerdict(False, (a, b, c), "not transitive")
    for (a, b) in _related_pairs(rel):
        x, y = int(K.dom[a]), int(K.cod[a])
        for z in objs:
            for th in K.hom(y, z):
                th = int(th)
                if not rel.related(int(T[th, a]), int(T[th, b])):
                    return CongruenceVerdict(False, (a, b, th), "not left compatible")
            for th in K.hom(z, x):
                th = int(th)
                if not rel.related(int(T[a, th]), int(T[b, th])):
                    return CongruenceVerdict(False, (a, b, th), "not right compatible")
    return CongruenceVerdict(True)


def _related_pairs(rel):
    for a, b in rel.pairs:
        if a != b and rel.related(a, b):
            yield a, b


@dataclass
class HoCategory:
    """Quotient of K_cf by ~.

    ``projection`` maps a K morphism id (between fibrant-cofibrant objects)
    to the id of its class in ``quotient``; ``classes`` maps each quotient
    morphism id to the sorted K ids in its class.  Class names are the
    names of their least member.
    """

    model: object = field(repr=False)
    base: object
    base_ids: np.ndarray
    quotient: object
    classes: dict
    projection: dict

    def project(self, m):
        return self.projection[int(m)]


def quotient(M):
    """Build Ho(K) = K_cf/~ and re-validate it as a category."""
    if "ho" in M._cache:
        return M._cache["ho"]
    rel = homotopy_on_Kcf(M)
    verdict = check_congruence(M, rel)
    if not verdict.congruence:
        raise NotACongruence(f"{verdict.reason}: {verdict.counterexample}")
    K = M.base
    objs = rel.objects
    sub, ids = restrict(K, objs)
    rep = {}
    for x in objs:
        for y in objs:
            for cls in rel.classes(x, y):
                for m in cls:
                    rep[m] = cls[0]
    reps = sorted(set(rep.values()))
    block = CategoryBlock(K.name or "Ho", objects=[K.objects[o] for o in objs])
    name = {}
    for r in reps:
        if K.is_identity(r):
            name[r] = identity_name(K.objects[r])
        else:
            name[r] = K.names[r]
            block.arrows.append((K.names[r], K.objects[K.dom[r]], K.objects[K.cod[r]]))
    T = K.table
    for g in reps:
        if K.is_identity(g):
            continue
        for f in reps:
            if K.is_identity(f) or T[g, f] < 0:
                continue
            block.composes.append((name[g], name[f], name[rep[int(T[g, f])]]))
    Q = validate_category(block, name=f"Ho({K.name})" if K.name else "Ho")
    projection = {m: Q.morphism(name[r]) for m, r in rep.items()}
    classes = {}
    for m, q in projection.items():
        classes.setdefault(q, []).append(m)
    classes = {q: sorted(v) for q, v in classes.items()}
    H = HoCategory(M, sub, ids, Q, classes, projection)
    M._cache["ho"] = H
    return H


def projection_is_functor(H):
    K, Q = H.model.base, H.quotient
    T = K.table
    ks = sorted(H.projection)
    kset = set(ks)
    for m in ks:
        if K.is_identity(m) and not Q.is_identity(H.projection[m]):
            return False
    for g in ks:
        for f in np.flatnonzero(T[g] >= 0):
            f = int(f)
            if f not in kset:
                continue
            if H.projection[int(T[g, f])] != Q.table[H.projection[g], H.projection[f]]:
                return False
    return True


def weak_equivalences_invert(H):
    """Weak equivalences between fibrant-cofibrant objects that fail to become isos."""
    Q = H.quotient
    return [m for m in sorted(H.projection)
            if m in H.model.weq and not is_iso(Q, H.projection[m])]


def inheritance_report(H):
    """Which limits of the kind Ho is expected to inherit survive into Ho.

    Reported, never asserted: initial/terminal objects and the binary
    (co)products of fibrant-cofibrant objects that exist in K.
    """
    K, Q = H.model.base, H.quotient
    objs = cf_objects(H.model)
    k_init, k_term = initial_terminal(K)
    q_init, q_term = initial_terminal(Q)
    report = {
        "initial": {"in_K": K.objects[k_init] if k_init is not None else None,
                    "in_Ho": Q.objects[q_init] if q_init is not None else None},
        "terminal": {"in_K": K.objects[k_term] if k_term is not None else None,
                     "in_Ho": Q.objects[q_term] if q_term is not None else None},
        "products": [],
        "coproducts": [],
    }
    qpos = {o: i for i, o in enumerate(objs)}
    for kind, finder in (("products", binary_product), ("coproducts", binary_coproduct)):
        for i, x in enumerate(objs):
            for y in objs[i:]:
                w = finder(K, x, y)
                if w is None:
                    continue
                qw = finder(Q, qpos[x], qpos[y])
                report[kind].append({
                    "pair": [K.objects[x], K.objects[y]],
                    "in_K": K.objects[w.obj],
                    "in_Ho": Q.objects[qw.obj] if qw is not None else None,
                })
    return report


def emit_for_iteration(H, model_name=None):
    """Standalone document for Ho plus the inheritance report.

    The document carries Ho and its trivial model block so the whole
    pipeline can be re-run on it.
    """
    Q = H.quotient
    cat_name = _safe(Q.name or "Ho")
    block = Q.to_block(cat_name)
    isos = [Q.names[m] for m in sorted(isomorphisms(Q)) if not Q.is_identity(m)]
    model = ModelBlock(model_name or "trivial", cat_name,
                       {"weq": isos, "cof": [ALL], "fib": [ALL]})
    return FcatDocument([block], [model]), inheritance_report(H)


def _safe(name):
    out = "".join(ch if ch.isalnum() or ch in "_'~^+" else "_" for ch in name)
    return out.strip("_") or "Ho"
