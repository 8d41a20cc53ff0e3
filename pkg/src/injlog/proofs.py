"""Proof terms and the deduction engine.

The primitive rules are: identity (axiom), composition, cancellation
(from a derivation of rest . first conclude first), and pushout of a
derived morphism along an arbitrary morphism.  Checking recomputes every
canonical construction; nothing in a term is trusted.

Two macros elaborate into the primitives: CoprodN (finite coproduct of
morphisms, staged through pushouts along coproduct injections) and
WidePushN (wide pushout, staged through binary pushouts).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .core import Category, CategoryError, MorphismSet, MorRef, ObjRef, wide_pushout


class ProofError(Exception):
    pass


class UnresolvedHypothesis(ProofError):
    pass


class ComposabilityError(ProofError):
    pass


class CancelMismatch(ProofError):
    pass


class PushDomainMismatch(ProofError):
    pass


class MacroShapeError(ProofError):
    pass


@dataclass(frozen=True)
class Hyp:
    """Named hypothesis leaf."""

    name: str


@dataclass(frozen=True)
class Identity:
    """Identity axiom at an object."""

    obj: ObjRef


@dataclass(frozen=True)
class Compose:
    """Concludes outer composed after inner."""

    outer: "ProofTerm"
    inner: "ProofTerm"


@dataclass(frozen=True)
class Cancel:
    """From a derivation of rest . first, conclude first.

    Both factors are carried explicitly; the checker verifies the
    factorization equation on the nose.
    """

    whole: "ProofTerm"
    first: MorRef
    rest: MorRef


@dataclass(frozen=True)
class Push:
    """Concludes the canonical pushout of the sub-derivation along `along`."""

    proof: "ProofTerm"
    along: MorRef


@dataclass(frozen=True)
class CoprodN:
    """Macro: coproduct of the concluded morphisms."""

    parts: tuple["ProofTerm", ...]


@dataclass(frozen=True)
class WidePushN:
    """Macro: wide pushout composite of the concluded morphisms."""

    parts: tuple["ProofTerm", ...]


ProofTerm = Hyp | Identity | Compose | Cancel | Push | CoprodN | WidePushN

PRIMITIVE_TERMS = (Hyp, Identity, Compose, Cancel, Push)


def check_proof(cat: Category, hypotheses: MorphismSet, term: ProofTerm) -> MorRef:
    """Conclusion of the term, or a ProofError describing the first defect.

    Macros are elaborated to primitives before checking.
    """
    return _check(cat, hypotheses, elaborate_macro(cat, hypotheses, term))


def _check(cat: Category, hyps: MorphismSet, term: ProofTerm) -> MorRef:
    if isinstance(term, Hyp):
        m = hyps.get(term.name)
        if m is None:
            raise UnresolvedHypothesis(f"hypothesis {term.name!r} is not in the set")
        return m
    if isinstance(term, Identity):
        return cat.identity(term.obj)
    if isinstance(term, Compose):
        outer = _check(cat, hyps, term.outer)
        inner = _check(cat, hyps, term.inner)
        if inner.cod != outer.dom:
            raise ComposabilityError(
                f"cannot compose: inner ends at {cat.object_label(inner.cod)}, "
                f"outer starts at {cat.object_label(outer.dom)}"
            )
        return cat.compose(outer, inner)
    if isinstance(term, Cancel):
        whole = _check(cat, hyps, term.whole)
        if term.first.cod != term.rest.dom:
            raise CancelMismatch("claimed factors do not compose")
        try:
            recomposed = cat.compose(term.rest, term.first)
        except CategoryError as e:
            raise CancelMismatch(str(e)) from None
        if recomposed != whole:
            raise CancelMismatch(
                f"factorization equation fails: rest.first is "
                f"{cat.morphism_label(recomposed)}, derived {cat.morphism_label(whole)}"
            )
        return term.first
    if isinstance(term, Push):
        inner = _check(cat, hyps, term.proof)
        if term.along.dom != inner.dom:
            raise PushDomainMismatch(
                f"pushout attachment starts at {cat.object_label(term.along.dom)}, "
                f"derived morphism at {cat.object_label(inner.dom)}"
            )
        return cat.pushout(inner, term.along)[0]
    raise MacroShapeError(f"unelaborated macro {type(term).__name__} reached the checker")


def used_hypotheses(term: ProofTerm) -> list[str]:
    """Sorted names of the Hyp leaves."""
    names: set[str] = set()

    def walk(t: ProofTerm) -> None:
        if isinstance(t, Hyp):
            names.add(t.name)
        elif isinstance(t, Compose):
            walk(t.outer)
            walk(t.inner)
        elif isinstance(t, Cancel):
            walk(t.whole)
        elif isinstance(t, Push):
            walk(t.proof)
        elif isinstance(t, (CoprodN, WidePushN)):
            for p in t.parts:
                walk(p)

    walk(term)
    return sorted(names)


def elaborate_macro(cat: Category, hyps: MorphismSet, term: ProofTerm) -> ProofTerm:
    """Rewrite macros into primitive terms, bottom up."""
    if isinstance(term, (Hyp, Identity)):
        return term
    if isinstance(term, Compose):
        return Compose(
            elaborate_macro(cat, hyps, term.outer), elaborate_macro(cat, hyps, term.inner)
        )
    if isinstance(term, Cancel):
        return Cancel(elaborate_macro(cat, hyps, term.whole), term.first, term.rest)
    if isinstance(term, Push):
        return Push(elaborate_macro(cat, hyps, term.proof), term.along)
    if isinstance(term, WidePushN):
        return _elaborate_widepush(cat, hyps, term)
    if isinstance(term, CoprodN):
        return _elaborate_coprod(cat, hyps, term)
    raise MacroShapeError(f"unknown proof term {type(term).__name__}")


def _elaborate_widepush(cat: Category, hyps: MorphismSet, term: WidePushN) -> ProofTerm:
    if not term.parts:
        raise MacroShapeError("wide pushout macro needs at least one part")
    parts = [elaborate_macro(cat, hyps, p) for p in term.parts]
    concls = [_check(cat, hyps, p) for p in parts]
    dom = concls[0].dom
    for c in concls[1:]:
        if c.dom != dom:
            raise MacroShapeError("wide pushout parts must share a domain")
    cur = parts[0]
    for p, c in zip(parts[1:], concls[1:]):
        cur = Compose(Push(cur, along=c), p)
    return cur


def _elaborate_coprod(cat: Category, hyps: MorphismSet, term: CoprodN) -> ProofTerm:
    cat.validate_for_colimits()
    if not term.parts:
        initial, _ = cat.coproduct([])
        return Identity(initial)
    parts = [elaborate_macro(cat, hyps, p) for p in term.parts]
    if len(parts) == 1:
        return parts[0]
    concls = [_check(cat, hyps, p) for p in parts]
    canonical = cat.coproduct_morphism(concls)

    # Stage pushouts along the still-mixed coproduct injections.  tau maps
    # the true mixed coproduct onto the object the derivation has actually
    # built, absorbing any renumbering the pushout quotients introduce.
    n = len(parts)
    blocks = [c.dom for c in concls]
    mixed, injs = cat.coproduct(blocks)
    tau = cat.identity(mixed)
    cur: ProofTerm | None = None
    cur_concl: MorRef | None = None
    for j in range(n):
        along = cat.compose(tau, injs[j])
        step, glue = cat.pushout(concls[j], along)
        cur = Push(parts[j], along=along) if cur is None else Compose(Push(parts[j], along=along), cur)
        cur_concl = step if cur_concl is None else cat.compose(step, cur_concl)
        legs = [
            glue if i == j else cat.compose(step, cat.compose(tau, injs[i])) for i in range(n)
        ]
        blocks[j] = concls[j].cod
        _, injs = cat.coproduct(blocks)
        tau = cat.cotuple(legs, step.cod)
    assert cur is not None and cur_concl is not None
    if cur_concl == canonical:
        return cur
    if cat.compose(tau, canonical) != cur_concl:
        raise MacroShapeError("coproduct staging lost track of the renumbering")
    return Cancel(cur, first=canonical, rest=tau)


RULES = ("identity", "composition", "cancellation", "pushout")


@dataclass(frozen=True)
class SaturationResult:
    """Closure of a hypothesis set under the enabled rules, with one
    shallowest proof per derived morphism (breadth-first order)."""

    derived: tuple[MorRef, ...]
    provenance: dict[MorRef, ProofTerm]
    rounds: int
    rule_mask: frozenset[str]

    def has(self, m: MorRef) -> bool:
        return m in self.provenance


def saturate(
    cat: Category,
    hypotheses: MorphismSet,
    rule_mask: Sequence[str] = RULES,
) -> SaturationResult:
    """Least fixpoint of the enabled rules over a finite closed category.

    Only complete lattices are supported: the morphism universe must be
    finite and pushouts total.  Round k adds everything derivable in one
    step from rounds < k, so recorded proofs have minimal depth; within a
    round the rules run in RULES order over morphisms in canonical order.
    """
    mask = frozenset(rule_mask)
    unknown = mask - set(RULES)
    if unknown:
        raise ValueError(f"unknown rules: {sorted(unknown)}")
    cat.validate_for_colimits()
    universe = cat.search_universe()
    if universe is None:
        raise CategoryError("saturation needs a finite closed category")

    all_mors = [m for x in universe for m in _mors_from(cat, x, universe)]
    known: dict[MorRef, ProofTerm] = {}
    for name, m in hypotheses:
        known.setdefault(m, Hyp(name))
    if "identity" in mask:
        for x in universe:
            known.setdefault(cat.identity(x), Identity(x))

    rounds = 0
    while True:
        fresh: dict[MorRef, ProofTerm] = {}

        def offer(m: MorRef, term: ProofTerm) -> None:
            if m not in known and m not in fresh:
                fresh[m] = term

        mors = list(known)
        if "composition" in mask:
            for g in mors:
                for f in mors:
                    if f.cod == g.dom:
                        offer(cat.compose(g, f), Compose(known[g], known[f]))
        if "cancellation" in mask:
            for m in mors:
                for first, rest in _factorizations(cat, m, universe):
                    offer(first, Cancel(known[m], first=first, rest=rest))
        if "pushout" in mask:
            for h in mors:
                for f in all_mors:
                    if f.dom == h.dom:
                        offer(cat.pushout(h, f)[0], Push(known[h], along=f))
        if not fresh:
            break
        known.update(fresh)
        rounds += 1

    derived = tuple(sorted(known, key=lambda m: (m.dom.index, m.cod.index)))
    return SaturationResult(derived, known, rounds, mask)


def _mors_from(cat: Category, x: ObjRef, universe: Sequence[ObjRef]) -> list[MorRef]:
    return [m for y in universe for m in cat.enumerate_homs(x, y)]


def _factorizations(cat: Category, m: MorRef, universe: Sequence[ObjRef]):
    """All on-the-nose splittings m = rest . first, by intermediate object."""
    for mid in universe:
        for first in cat.enumerate_homs(m.dom, mid):
            for rest in cat.enumerate_homs(mid, m.cod):
                if cat.compose(rest, first) == m:
                    yield first, rest


@dataclass(frozen=True)
class ProveResult:
    status: str  # "found" | "refuted" | "inconclusive"
    proof: ProofTerm | None
    rounds_used: int

    def found(self) -> bool:
        return self.status == "found"


class _BudgetStop(Exception):
    pass


def prove(
    cat: Category,
    hypotheses: MorphismSet,
    goal: MorRef,
    *,
    node_cap: int = 12,
    depth_cap: int = 6,
    hom_cap: int = 4096,
    mor_cap: int = 2000,
) -> ProveResult:
    """Bounded forward search for a derivation of the goal.

    Depth grows round by round, so the first hit has minimal derivation
    depth; each round only recombines the previous round's additions
    with everything older.  New objects enter only through pushouts and
    are discarded above node_cap; attachment enumerations are skipped
    past hom_cap maps; the run stops once mor_cap morphisms are known.
    On a finite closed category reaching a fixpoint refutes the goal;
    otherwise exhaustion is inconclusive, since derivability over an
    open universe is only semi-decidable.
    """
    cat.validate_for_colimits()
    universe = cat.search_universe()
    closed = universe is not None

    in_play: list[ObjRef] = []

    def admit(obj: ObjRef) -> bool:
        if obj not in in_play and cat.object_size(obj) <= node_cap:
            in_play.append(obj)
            return True
        return False

    if closed:
        for x in universe:
            admit(x)
    for _, m in hypotheses:
        admit(m.dom)
        admit(m.cod)
    admit(goal.dom)
    admit(goal.cod)

    known: dict[MorRef, ProofTerm] = {}
    for name, m in hypotheses:
        known.setdefault(m, Hyp(name))
    for x in in_play:
        known.setdefault(cat.identity(x), Identity(x))
    if goal in known:
        return ProveResult("found", known[goal], 0)

    frontier = list(known)
    new_objects = list(in_play)

    for round_no in range(1, depth_cap + 1):
        fresh: dict[MorRef, ProofTerm] = {}

        def offer(m: MorRef, term: ProofTerm) -> None:
            if m not in known and m not in fresh:
                if len(known) + len(fresh) >= mor_cap:
                    raise _BudgetStop
                fresh[m] = term

        frontier_set = set(frontier)
        new_object_set = set(new_objects)
        mors = list(known)
        try:
            for g in mors:
                for f in mors:
                    if f.cod == g.dom and (g in frontier_set or f in frontier_set):
                        offer(cat.compose(g, f), Compose(known[g], known[f]))
            for m in mors:
                for mid in in_play:
                    if m not in frontier_set and mid not in new_object_set:
                        continue
                    if cat.count_homs(m.dom, mid, cap=hom_cap + 1) > hom_cap:
                        continue
                    for first in cat.enumerate_homs(m.dom, mid):
                        rest = cat.find_factorization(first, m)
                        if rest is not None:
                            offer(first, Cancel(known[m], first=first, rest=rest))
            for h in mors:
                for x in in_play:
                    if h not in frontier_set and x not in new_object_set:
                        continue
                    if cat.count_homs(h.dom, x, cap=hom_cap + 1) > hom_cap:
                        continue
                    for f in cat.enumerate_homs(h.dom, x):
                        h_prime, _ = cat.pushout(h, f)
                        if cat.object_size(h_prime.cod) <= node_cap:
                            offer(h_prime, Push(known[h], along=f))
        except _BudgetStop:
            return ProveResult("inconclusive", None, round_no)

        if not fresh:
            status = "refuted" if closed else "inconclusive"
            return ProveResult(status, None, round_no - 1)
        known.update(fresh)
        frontier = list(fresh)
        new_objects = []
        for m in fresh:
            for obj in (m.dom, m.cod):
                if admit(obj):
                    new_objects.append(obj)
                    ident = cat.identity(obj)
                    if ident not in known:
                        known[ident] = Identity(obj)
                        frontier.append(ident)
        if goal in known:
            return ProveResult("found", known[goal], round_no)

    return ProveResult("inconclusive", None, depth_cap)

