"""Weak reflections into the injectivity class of a hypothesis set.

Each round attaches every hypothesis along every map from its domain
into the current object, all at once: the pushed-out squares are glued
by one wide pushout.  On a complete lattice this converges to the meet
of the injective elements above the start; over graphs the rounds may
grow forever, so a round budget is mandatory and non-convergence is a
legitimate, explicitly reported outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Category,
    CoconeCheckReport,
    CoconeFailure,
    MorphismSet,
    MorRef,
    ObjRef,
    wide_pushout,
)
from .proofs import Cancel, Compose, Hyp, Identity, ProofTerm, Push, WidePushN


@dataclass(frozen=True)
class ReflectionRound:
    """One simultaneous attachment round.

    squares lists (hypothesis name, attaching map) in hypothesis order
    then canonical hom order; connecting is the wide pushout composite
    from the round's input object to its output object.
    """

    squares: tuple[tuple[str, MorRef], ...]
    connecting: MorRef


@dataclass(frozen=True)
class ReflectionTrace:
    start: ObjRef
    rounds: tuple[ReflectionRound, ...]
    converged: bool
    reflection: MorRef

    @property
    def apex(self) -> ObjRef:
        return self.reflection.cod


def reflect(
    cat: Category, hypotheses: MorphismSet, start: ObjRef, max_rounds: int = 16
) -> ReflectionTrace:
    """Iterate attachment rounds from start until the current object is
    injective for every hypothesis, or the round budget runs out."""
    cat.validate_for_colimits()
    current = start
    composite = cat.identity(start)
    rounds: list[ReflectionRound] = []

    def injective(x: ObjRef) -> bool:
        return all(cat.is_injective(x, m) for m in hypotheses.morphisms())

    for _ in range(max_rounds):
        if injective(current):
            return ReflectionTrace(start, tuple(rounds), True, composite)
        squares: list[tuple[str, MorRef]] = []
        pushed: list[MorRef] = []
        for name, h in hypotheses:
            for f in cat.enumerate_homs(h.dom, current):
                squares.append((name, f))
                pushed.append(cat.pushout(h, f)[0])
        wp = wide_pushout(cat, pushed)
        rounds.append(ReflectionRound(tuple(squares), wp.composite))
        composite = cat.compose(wp.composite, composite)
        current = wp.composite.cod
    return ReflectionTrace(start, tuple(rounds), injective(current), composite)


def round_proof(rnd: ReflectionRound) -> ProofTerm:
    """Derivation of the round's connecting morphism from the hypotheses."""
    return WidePushN(tuple(Push(Hyp(name), along=f) for name, f in rnd.squares))


def reflection_proof(trace: ReflectionTrace) -> ProofTerm:
    """Derivation of the full reflection morphism."""
    term: ProofTerm = Identity(trace.start)
    for k, rnd in enumerate(trace.rounds):
        term = round_proof(rnd) if k == 0 else Compose(round_proof(rnd), term)
    return term


def verify_weak_reflection(
    cat: Category, hypotheses: MorphismSet, trace: ReflectionTrace, universe
) -> CoconeCheckReport:
    """Check both weak reflection properties by enumeration.

    (i) the apex is injective for every hypothesis; (ii) every map from
    the start into an injective universe object factors through the
    reflection morphism.
    """
    apex = trace.apex
    for _, m in hypotheses:
        if not cat.is_injective(apex, m):
            return CoconeCheckReport(
                False, CoconeFailure(apex, "apex not injective for a hypothesis", (m,))
            )
    for x in universe:
        if not all(cat.is_injective(x, m) for m in hypotheses.morphisms()):
            continue
        for f in cat.enumerate_homs(trace.start, x):
            if cat.find_factorization(trace.reflection, f) is None:
                return CoconeCheckReport(
                    False, CoconeFailure(x, "no factorization through the reflection", (f,))
                )
    return CoconeCheckReport(True)


@dataclass(frozen=True)
class ReflectionConsequence:
    """Outcome of deriving a goal through the reflection route."""

    status: str  # "derived" | "not-consequence" | "inconclusive"
    proof: ProofTerm | None
    trace: ReflectionTrace
    factoring: MorRef | None


def consequence_via_reflection(
    cat: Category, hypotheses: MorphismSet, goal: MorRef, max_rounds: int = 16
) -> ReflectionConsequence:
    """Build the reflection of the goal's domain and cancel through it.

    If the reflection morphism factors as u . goal, the cancellation of
    the (provable) reflection morphism derives the goal.  On a finite
    closed category a missing factorization refutes the consequence; over
    an open universe it stays inconclusive, as does a non-converged
    reflection.
    """
    trace = reflect(cat, hypotheses, goal.dom, max_rounds)
    if not trace.converged:
        return ReflectionConsequence("inconclusive", None, trace, None)
    u = cat.find_factorization(goal, trace.reflection)
    if u is None:
        closed = cat.search_universe() is not None
        status = "not-consequence" if closed else "inconclusive"
        return ReflectionConsequence(status, None, trace, None)
    if goal == trace.reflection:
        return ReflectionConsequence("derived", reflection_proof(trace), trace, u)
    proof = Cancel(reflection_proof(trace), first=goal, rest=u)
    return ReflectionConsequence("derived", proof, trace, u)


def trace_to_text(cat: Category, trace: ReflectionTrace) -> str:
    """Line-oriented deterministic rendering, suitable for golden tests."""
    lines = [
        "reflection-trace",
        f"start {cat.object_label(trace.start)}",
        f"converged {'true' if trace.converged else 'false'}",
        f"rounds {len(trace.rounds)}",
    ]
    for k, rnd in enumerate(trace.rounds, start=1):
        lines.append(
            f"round {k} squares {len(rnd.squares)} "
            f"-> {cat.object_label(rnd.connecting.cod)}"
        )
        for name, f in rnd.squares:
            lines.append(f"  square {name} along {cat.morphism_label(f)}")
    lines.append(f"reflection {cat.morphism_label(trace.reflection)}")
    return "\n".join(lines) + "\n"
