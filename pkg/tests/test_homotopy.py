from dataclasses import replace

import oracles
import pytest
from conftest import SMALL, corpus_doc, corpus_models

from fcat.category import validate_category
from fcat.errors import InvalidStructure, NoProduct, NotCofibrant, NotFibrant
from fcat.homotopy import (
    all_left_witnesses,
    cylinder_as_path,
    homotopy_on_Kcf,
    left_homotopic,
    lemma_suite,
    relation_table,
    right_homotopic,
    swap_cylinder,
    transitivity_composite,
    transitivity_composite_dual,
)
from fcat.model import (
    ModelStructure,
    enumerate_model_structures,
    is_cofibrant,
    is_fibrant,
)


def _structures(filename):
    """Corpus models plus every enumerated structure, and all their duals."""
    out = [M for _, _, M in corpus_models(filename)]
    K = out[0].base
    if K.n_morphisms <= 12:
        out += enumerate_model_structures(K)
    return out + [M.dual for M in out]


def _oracle_cat(M):
    C = oracles.from_block(M.base.to_block())
    return C


@pytest.mark.parametrize("filename", SMALL)
def test_relations_match_definition(filename):
    for M in _structures(filename):
        K = M.base
        C = _oracle_cat(M)
        W, Co, F = ({K.names[m] for m in cls} for cls in (M.weq, M.cof, M.fib))
        left, right = relation_table(M, "left"), relation_table(M, "right")
        for (a, b), rel in left.items():
            assert rel == oracles.left_homotopic(C, W, Co, K.names[a], K.names[b])
        for (a, b), rel in right.items():
            assert rel == oracles.right_homotopic(C, W, F, K.names[a], K.names[b])


def test_finset3_has_proper_homotopies():
    M = {b.name: M for b, _, M in corpus_models("finset3.fcat")}["E5"]
    K = M.base
    a, b = K.morphism("m12_0"), K.morphism("m12_1")
    w = left_homotopic(M, a, b)
    assert w is not None and w.problems(M) == []
    assert K.objects[w.coproduct.obj] == "2"
    with pytest.raises(NoProduct):
        right_homotopic(M, a, b)
    assert swap_cylinder(M, w).alpha == b


def test_tampered_witness_is_rejected():
    M = {b.name: M for b, _, M in corpus_models("finset3.fcat")}["E5"]
    K = M.base
    w = left_homotopic(M, K.morphism("m12_0"), K.morphism("m12_1"))
    bad = replace(w, omega=K.morphism("id(2)") if K.names[w.omega] != "id(2)" else K.morphism("m22_00"))
    assert bad.problems(M)
    assert cylinder_as_path(w).problems(M.dual) == []


def test_right_needs_product(finset_trivial):
    K = finset_trivial.base
    f = K.morphism("m44_0000")
    with pytest.raises(NoProduct):
        right_homotopic(finset_trivial, f, f)


def test_finset_relation_is_equality(finset_trivial):
    rel = homotopy_on_Kcf(finset_trivial)
    K = finset_trivial.base
    assert rel.objects == list(range(K.n_objects))
    assert rel.undetermined == [(K.obj("4"), K.obj("4"))]
    assert len(rel.pairs) == 555
    for a, b in rel.pairs:
        assert rel.related(a, b) == (a == b)


@pytest.mark.parametrize("filename", SMALL)
def test_lemma_suite_on_corpus(filename):
    for M in _structures(filename):
        report = lemma_suite(M)
        assert report.passed, report.to_json(M.base)


def test_lemma_suite_exercises_nontrivial_cases():
    checked = {}
    for M in _structures("finset3.fcat"):
        for c in lemma_suite(M).checks:
            checked[c.name] = checked.get(c.name, 0) + c.checked
    assert all(n > 0 for n in checked.values()), checked


def test_lemma_suite_refuses_invalid():
    K = validate_category(corpus_doc("two.fcat").category())
    with pytest.raises(InvalidStructure):
        lemma_suite(ModelStructure(K, [K.morphism("f")], [], []))


def _triples(M):
    K = M.base
    left, right = relation_table(M, "left"), relation_table(M, "right")
    for (a, b), lab in left.items():
        if not lab:
            continue
        for g in K.hom(int(K.dom[a]), int(K.cod[a])):
            if right.get((b, int(g))):
                yield a, b, int(g)


def _finset_structures():
    return [M for b, _, M in corpus_models("finset.fcat") if b.name != "trivial"]


@pytest.fixture(scope="module")
def finset_contract():
    out = _finset_structures()
    return out + [M.dual for M in out]


def test_finset_contract_matches_definition(finset_contract):
    # a sample of hom-sets where both (co)products exist
    for M in finset_contract:
        K = M.base
        C = _oracle_cat(M)
        W, Co, F = ({K.names[m] for m in cls} for cls in (M.weq, M.cof, M.fib))
        for x, y in (("1", "2"), ("2", "1"), ("2", "2")):
            H = [int(m) for m in K.hom(K.obj(x), K.obj(y))]
            for a in H:
                for b in H:
                    na, nb = K.names[a], K.names[b]
                    assert (left_homotopic(M, a, b) is not None) == oracles.left_homotopic(C, W, Co, na, nb)
                    assert (right_homotopic(M, a, b) is not None) == oracles.right_homotopic(C, W, F, na, nb)


def test_transitivity_trace_steps(finset_contract):
    hits = 0
    for M in _structures("finset3.fcat") + finset_contract:
        K = M.base
        for a, b, g in _triples(M):
            wl, wr = left_homotopic(M, a, b), right_homotopic(M, b, g)
            if not is_fibrant(M, int(K.cod[a])):
                with pytest.raises(NotFibrant):
                    transitivity_composite(M, wl, wr)
                continue
            t = transitivity_composite(M, wl, wr, trace=True)
            pw = wr.product
            assert t.eps0 == K.compose(pw.p0, wr.eps)
            assert t.eps1 == K.compose(pw.p1, wr.eps)
            assert K.compose(t.delta, wl.mu) == t.mediator
            assert K.compose(t.eps0, t.delta) == wl.omega
            assert t.witness.omega == K.compose(t.eps1, t.delta)
            assert t.witness in set(all_left_witnesses(M, a, g))
            hits += a != g
    assert hits > 0


def test_transitivity_dual_half(finset_contract):
    hits = 0
    for M in _structures("finset3.fcat") + finset_contract:
        K = M.base
        for a, b, g in _triples(M):
            wl, wr = left_homotopic(M, a, b), right_homotopic(M, b, g)
            if not is_cofibrant(M, int(K.dom[a])):
                with pytest.raises(NotCofibrant):
                    transitivity_composite_dual(M, wl, wr)
                continue
            w = transitivity_composite_dual(M, wl, wr)
            assert (w.alpha, w.beta) == (a, g) and w.problems(M) == []
            hits += a != g
    assert hits > 0
