import random

import pytest
from hypothesis import given, settings, strategies as st

from injlog.core import MorphismSet
from injlog.graphs import GraphCategory, GraphHom, clique, empty_graph, loop_point
from injlog.lattice import LatticeCategory, presentation_from_pairs, random_hypotheses, random_lattice
from injlog.proofs import Cancel, Identity, check_proof, saturate
from injlog.reflection import (
    consequence_via_reflection,
    reflect,
    reflection_proof,
    round_proof,
    trace_to_text,
    verify_weak_reflection,
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


def test_diamond_reflection_reaches_the_least_injective_upper_bound():
    cat = diamond()
    h = MorphismSet.of([("p", cat.mor("0", "a"))])
    trace = reflect(cat, h, cat.obj("0"))
    assert trace.converged
    assert len(trace.rounds) == 1
    assert trace.apex == cat.obj("a")
    assert trace.reflection == cat.mor("0", "a")
    assert verify_weak_reflection(cat, h, trace, cat.search_universe()).verified


def test_reflection_of_an_already_injective_start_is_the_identity():
    cat = diamond()
    h = MorphismSet.of([("p", cat.mor("0", "a"))])
    trace = reflect(cat, h, cat.obj("1"))
    assert trace.converged
    assert trace.rounds == ()
    assert trace.reflection == cat.identity(cat.obj("1"))


def test_round_and_reflection_proofs_recheck():
    cat = diamond()
    h = MorphismSet.of([("p", cat.mor("0", "a"))])
    trace = reflect(cat, h, cat.obj("0"))
    for rnd in trace.rounds:
        assert check_proof(cat, h, round_proof(rnd)) == rnd.connecting
    assert check_proof(cat, h, reflection_proof(trace)) == trace.reflection


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_lattice_reflection_is_the_meet_of_injectives_above(seed):
    rng = random.Random(seed)
    cat = random_lattice(rng, max_size=7)
    h = random_hypotheses(rng, cat, max_count=5)
    start = rng.choice(cat.objects())
    trace = reflect(cat, h, start)
    assert trace.converged
    above = [
        x.index
        for x in cat.injectives(h)
        if cat.p.leq[start.index, x.index]
    ]
    # the meet of injectives above start, computed independently
    meet = above[0]
    for i in above[1:]:
        meet = cat.p.meet[meet, i]
    assert trace.apex.index == meet
    assert verify_weak_reflection(cat, h, trace, cat.search_universe()).verified
    assert check_proof(cat, h, reflection_proof(trace)) == trace.reflection


def test_graph_reflection_of_the_empty_graph_attaches_the_clique():
    g = GraphCategory()
    h = MorphismSet.of([("c3", g.mor(GraphHom(empty_graph(), clique(3), ())))])
    trace = reflect(g, h, g.obj(empty_graph()), max_rounds=8)
    assert trace.converged
    assert len(trace.rounds) == 1
    assert g.graph_of(trace.apex) == clique(3)
    assert verify_weak_reflection(g, h, trace, g.universe(3)).verified
    for rnd in trace.rounds:
        assert check_proof(g, h, round_proof(rnd)) == rnd.connecting


def test_non_converged_trace_is_reported_and_fails_verification():
    g = GraphCategory()
    h = MorphismSet.of([("c3", g.mor(GraphHom(empty_graph(), clique(3), ())))])
    trace = reflect(g, h, g.obj(empty_graph()), max_rounds=0)
    assert not trace.converged
    assert trace.rounds == ()
    report = verify_weak_reflection(g, h, trace, g.universe(3))
    assert not report.verified
    assert report.failing_witness.detail == "apex not injective for a hypothesis"


def test_consequence_via_reflection_derives_the_transported_goal():
    cat = diamond()
    h = MorphismSet.of([("p", cat.mor("0", "a"))])
    out = consequence_via_reflection(cat, h, cat.mor("b", "1"))
    assert out.status == "derived"
    assert check_proof(cat, h, out.proof) == cat.mor("b", "1")


def test_consequence_via_reflection_refutes_on_a_closed_category():
    cat = diamond()
    h = MorphismSet.of([("p", cat.mor("0", "a"))])
    out = consequence_via_reflection(cat, h, cat.mor("0", "b"))
    assert out.status == "not-consequence"
    assert out.proof is None


def test_consequence_via_reflection_uses_cancellation_for_proper_goals():
    cat = chain3()
    h = MorphismSet.of([("h", cat.mor("0", "2"))])
    out = consequence_via_reflection(cat, h, cat.mor("0", "1"))
    assert out.status == "derived"
    assert isinstance(out.proof, Cancel)
    assert check_proof(cat, h, out.proof) == cat.mor("0", "1")


def test_consequence_via_reflection_identity_goal_with_no_hypotheses():
    cat = chain3()
    out = consequence_via_reflection(cat, MorphismSet.of([]), cat.identity(cat.obj("2")))
    assert out.status == "derived"
    assert out.proof == Identity(cat.obj("2"))


def test_consequence_via_reflection_stays_inconclusive_on_open_graphs():
    g = GraphCategory()
    h = MorphismSet.of([("c3", g.mor(GraphHom(empty_graph(), clique(3), ())))])
    goal = g.mor(GraphHom(empty_graph(), loop_point(), ()))
    out = consequence_via_reflection(g, h, goal)
    assert out.status == "inconclusive"
    derived = consequence_via_reflection(g, h, h.get("c3"))
    assert derived.status == "derived"
    assert check_proof(g, h, derived.proof) == h.get("c3")


@given(st.integers(0, 10**6))
@settings(max_examples=20)
def test_reflection_route_agrees_with_saturation(seed):
    rng = random.Random(seed)
    cat = random_lattice(rng, max_size=6)
    h = random_hypotheses(rng, cat, max_count=4)
    derived = set(saturate(cat, h).derived)
    for goal in cat.all_morphisms():
        out = consequence_via_reflection(cat, h, goal)
        if goal in derived:
            assert out.status == "derived"
            assert check_proof(cat, h, out.proof) == goal
        else:
            assert out.status == "not-consequence"


def test_trace_rendering_is_stable():
    cat = diamond()
    h = MorphismSet.of([("p", cat.mor("0", "a"))])
    trace = reflect(cat, h, cat.obj("0"))
    assert trace_to_text(cat, trace) == (
        "reflection-trace\n"
        "start 0\n"
        "converged true\n"
        "rounds 1\n"
        "round 1 squares 1 -> a\n"
        "  square p along 0->0\n"
        "reflection 0->a\n"
    )
