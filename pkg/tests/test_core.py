import random

import pytest
from hypothesis import given, strategies as st

from injlog.core import (
    Category,
    CategoryError,
    MorphismSet,
    MorphismSetError,
    semantic_consequence,
    verify_pushout_square,
    wide_pushout,
)
from injlog.graphs import Graph, GraphCategory, GraphHom, loop_point
from injlog.lattice import (
    LatticeCategory,
    presentation_from_pairs,
    random_hypotheses,
    random_lattice,
)


def chain3() -> LatticeCategory:
    return LatticeCategory(
        presentation_from_pairs("chain", ["0", "1", "2"], [("0", "1"), ("1", "2")])
    )


def diamond() -> LatticeCategory:
    return LatticeCategory(
        presentation_from_pairs(
            "diamond",
            ["0", "a", "b", "1"],
            [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
    )


def test_morphism_set_keeps_declaration_order():
    cat = chain3()
    h = MorphismSet.of([("q", cat.mor("1", "2")), ("p", cat.mor("0", "1"))])
    assert h.names() == ["q", "p"]
    assert h.get("p") == cat.mor("0", "1")
    assert h.get("absent") is None
    assert len(h) == 2


def test_morphism_set_rejects_duplicate_names():
    cat = chain3()
    with pytest.raises(MorphismSetError):
        MorphismSet.of([("p", cat.mor("0", "1")), ("p", cat.mor("1", "2"))])


def test_morphism_set_rejects_mixed_categories():
    cat = chain3()
    g = GraphCategory()
    m = g.mor(GraphHom.identity(loop_point()))
    with pytest.raises(MorphismSetError):
        MorphismSet.of([("p", cat.mor("0", "1")), ("m", m)])


def test_wide_pushout_of_diamond_legs_is_join():
    cat = diamond()
    mors = [cat.mor("0", "a"), cat.mor("0", "b")]
    res = wide_pushout(cat, mors)
    assert res.composite == cat.mor("0", "1")
    assert res.apex == cat.obj("1")
    for inj, m in zip(res.injections, mors):
        assert cat.compose(inj, m) == res.composite


def test_wide_pushout_single_morphism_is_identity_injection():
    cat = chain3()
    m = cat.mor("0", "2")
    res = wide_pushout(cat, [m])
    assert res.composite == m
    assert res.injections == (cat.identity(cat.obj("2")),)


@given(st.integers(0, 10**6), st.integers(1, 4))
def test_wide_pushout_injections_close_the_fan(seed, count):
    rng = random.Random(seed)
    cat = random_lattice(rng, max_size=6)
    dom = rng.choice(cat.objects())
    cods = [m for m in cat.all_morphisms() if m.dom == dom]
    mors = [rng.choice(cods) for _ in range(count)]
    res = wide_pushout(cat, mors)
    for inj, m in zip(res.injections, mors):
        assert cat.compose(inj, m) == res.composite


def test_semantic_consequence_exact_labels():
    cat = diamond()
    h = MorphismSet.of([("p", cat.mor("0", "a"))])
    holds = semantic_consequence(
        cat, h, cat.mor("0", "a"), cat.search_universe(), exact=True
    )
    assert holds.holds and holds.label() == "holds"
    refuted = semantic_consequence(
        cat, h, cat.mor("0", "b"), cat.search_universe(), exact=True
    )
    assert not refuted.holds
    assert refuted.label() == "counterexample"
    assert refuted.counterexample == cat.obj("a")


def test_semantic_consequence_bounded_label():
    g = GraphCategory()
    goal = g.mor(GraphHom.identity(loop_point()))
    verdict = semantic_consequence(
        g, MorphismSet.of([]), goal, g.universe(2), exact=False, bound=2
    )
    assert verdict.holds
    assert verdict.label() == "holds-up-to(2)"


def test_pushout_square_commutes_and_is_universal_on_lattice():
    cat = diamond()
    h, f = cat.mor("0", "a"), cat.mor("0", "b")
    h_prime, f_prime = cat.pushout(h, f)
    assert cat.compose(h_prime, f) == cat.compose(f_prime, h)
    report = verify_pushout_square(cat, h, f, cat.search_universe())
    assert report.verified
    assert report.failing_witness is None


def test_pushout_square_universal_on_graphs():
    g = GraphCategory()
    node = Graph.of(1)
    edge = Graph.of(2, [(0, 1)])
    h = g.mor(GraphHom(node, edge, (0,)))
    f = g.mor(GraphHom(node, loop_point(), (0,)))
    report = verify_pushout_square(g, h, f, g.universe(3))
    assert report.verified


@given(st.integers(0, 10**6))
def test_pushout_square_universal_on_random_lattices(seed):
    rng = random.Random(seed)
    cat = random_lattice(rng, max_size=5)
    mors = cat.all_morphisms()
    h = rng.choice(mors)
    candidates = [m for m in mors if m.dom == h.dom]
    f = rng.choice(candidates)
    assert verify_pushout_square(cat, h, f, cat.search_universe()).verified


def test_find_factorization_prefers_canonical_order():
    cat = chain3()
    assert cat.find_factorization(cat.mor("0", "1"), cat.mor("0", "2")) == cat.mor(
        "1", "2"
    )
    assert cat.find_factorization(cat.mor("0", "2"), cat.mor("0", "1")) is None


def test_find_factorization_needs_common_domain():
    cat = chain3()
    with pytest.raises(CategoryError):
        cat.find_factorization(cat.mor("1", "2"), cat.mor("0", "1"))


def test_generic_injectivity_agrees_with_lattice_shortcut():
    cat = diamond()
    for x in cat.objects():
        for h in cat.all_morphisms():
            fast = cat.is_injective(x, h)
            slow = Category.is_injective(cat, x, h)
            assert fast.holds == slow.holds
            if not fast.holds:
                assert fast.counterexample == slow.counterexample


@given(st.integers(0, 10**6))
def test_generic_injectivity_agrees_on_random_lattices(seed):
    rng = random.Random(seed)
    cat = random_lattice(rng, max_size=6)
    hyps = random_hypotheses(rng, cat, max_count=4)
    x = rng.choice(cat.objects())
    for h in hyps.morphisms():
        assert cat.is_injective(x, h).holds == Category.is_injective(cat, x, h).holds


def test_count_homs_respects_cap():
    g = GraphCategory()
    a = g.obj(Graph.of(1))
    x = g.obj(Graph.of(3, [(i, j) for i in range(3) for j in range(3)]))
    assert g.count_homs(a, x) == 3
    assert g.count_homs(a, x, cap=2) == 2


def test_object_size_and_labels():
    cat = chain3()
    assert cat.object_size(cat.obj("1")) == 1
    assert cat.object_label(cat.obj("1")) == "1"
    assert cat.morphism_label(cat.mor("0", "2")) == "0->2"
    g = GraphCategory()
    assert g.object_size(g.obj(Graph.of(3))) == 3
