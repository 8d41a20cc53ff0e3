"""Category interface shared by the finite lattice and finite graph backends.

Objects and morphisms are referenced by value; all equality is on the nose.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Sequence


@dataclass(frozen=True)
class ObjRef:
    """Reference to an object of a presented category."""

    cat_id: str
    index: int


@dataclass(frozen=True)
class MorRef:
    """Reference to a morphism: endpoints plus a backend-specific payload.

    Lattice payload is the pair of element indices (a, b) with a <= b.
    Graph payload is a GraphHom.  Two refs are equal iff endpoints and
    payload are equal, so composites compare on the nose.
    """

    dom: ObjRef
    cod: ObjRef
    payload: Any


class MorphismSetError(ValueError):
    pass


@dataclass(frozen=True)
class MorphismSet:
    """Named, ordered set of hypothesis morphisms from one category."""

    entries: tuple[tuple[str, MorRef], ...]

    def __post_init__(self) -> None:
        seen = set()
        cats = set()
        for name, m in self.entries:
            if name in seen:
                raise MorphismSetError(f"duplicate hypothesis name {name!r}")
            seen.add(name)
            cats.add(m.dom.cat_id)
        if len(cats) > 1:
            raise MorphismSetError("hypotheses span more than one category")

    @staticmethod
    def of(pairs: Iterable[tuple[str, MorRef]]) -> "MorphismSet":
        return MorphismSet(tuple(pairs))

    def names(self) -> list[str]:
        return [name for name, _ in self.entries]

    def get(self, name: str) -> MorRef | None:
        for n, m in self.entries:
            if n == name:
                return m
        return None

    def morphisms(self) -> list[MorRef]:
        return [m for _, m in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, MorRef]]:
        return iter(self.entries)


@dataclass(frozen=True)
class InjectivityResult:
    """Outcome of one injectivity check; counterexample is a non-factorable map."""

    holds: bool
    counterexample: MorRef | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class ConsequenceVerdict:
    """Semantic consequence verdict; exact on lattices, bounded on graphs."""

    holds: bool
    counterexample: ObjRef | None
    exact: bool
    bound: int | None = None

    def label(self) -> str:
        if not self.holds:
            return "counterexample"
        if self.exact:
            return "holds"
        return f"holds-up-to({self.bound})"


@dataclass(frozen=True)
class CoconeFailure:
    at_object: ObjRef
    detail: str
    morphisms: tuple[MorRef, ...] = ()


@dataclass(frozen=True)
class CoconeCheckReport:
    verified: bool
    failing_witness: CoconeFailure | None = None

    def __bool__(self) -> bool:
        return self.verified


class CategoryError(ValueError):
    pass


class Category(ABC):
    """Finitely computable category: identities, composites, hom sets,
    pushouts, finite coproducts.  Deterministic: equal inputs give equal
    outputs, and hom enumeration follows a fixed canonical order."""

    cat_id: str

    @abstractmethod
    def identity(self, obj: ObjRef) -> MorRef: ...

    @abstractmethod
    def compose(self, g: MorRef, f: MorRef) -> MorRef:
        """g after f; raises CategoryError unless cod f = dom g on the nose."""

    @abstractmethod
    def enumerate_homs(self, a: ObjRef, x: ObjRef) -> list[MorRef]:
        """All morphisms a -> x in canonical order."""

    @abstractmethod
    def pushout(self, h: MorRef, f: MorRef) -> tuple[MorRef, MorRef]:
        """Canonical pushout of the span (h, f) sharing a domain.

        Returns (h_prime, f_prime): h_prime is the leg opposite h with
        domain cod f, f_prime the leg opposite f with domain cod h.
        The square commutes on the nose.
        """

    @abstractmethod
    def coproduct(self, objs: Sequence[ObjRef]) -> tuple[ObjRef, list[MorRef]]:
        """Finite coproduct with injections; empty input gives the initial object."""

    @abstractmethod
    def coproduct_morphism(self, mors: Sequence[MorRef]) -> MorRef:
        """The canonical morphism between coproducts acting blockwise."""

    @abstractmethod
    def cotuple(self, legs: Sequence[MorRef], target: ObjRef) -> MorRef:
        """Mediator out of the coproduct of the leg domains into target.

        Every leg must end at target; the result composed with the i-th
        canonical injection gives the i-th leg.
        """

    @abstractmethod
    def object_label(self, obj: ObjRef) -> str: ...

    @abstractmethod
    def morphism_label(self, m: MorRef) -> str: ...

    def count_homs(self, a: ObjRef, x: ObjRef, cap: int | None = None) -> int:
        """Hom set size, counting at most cap when given."""
        n = len(self.enumerate_homs(a, x))
        return n if cap is None else min(n, cap)

    def object_size(self, obj: ObjRef) -> int:
        """Growth measure used by search budgets; 1 unless overridden."""
        return 1

    def search_universe(self) -> list[ObjRef] | None:
        """All objects when the category is finite and closed, else None."""
        return None

    def validate_for_colimits(self) -> None:
        """Raise when pushouts/coproducts are unavailable (e.g. a poset
        that is not a complete lattice); no-op otherwise."""

    def find_factorization(self, h: MorRef, f: MorRef) -> MorRef | None:
        """First g with g after h = f, in canonical hom order; None if none.

        h: A -> B, f: A -> X; g ranges over homs B -> X.
        """
        if h.dom != f.dom:
            raise CategoryError("factorization query needs a common domain")
        for g in self.enumerate_homs(h.cod, f.cod):
            if self.compose(g, h) == f:
                return g
        return None

    def is_injective(self, x: ObjRef, h: MorRef) -> InjectivityResult:
        """Whether every map dom h -> x extends along h; first failure is
        reported in canonical hom order."""
        for f in self.enumerate_homs(h.dom, x):
            if self.find_factorization(h, f) is None:
                return InjectivityResult(False, f)
        return InjectivityResult(True)


@dataclass(frozen=True)
class WidePushoutResult:
    """Apex composite plus the injection from each cocone leg codomain."""

    composite: MorRef
    injections: tuple[MorRef, ...]

    @property
    def apex(self) -> ObjRef:
        return self.composite.cod


def wide_pushout(cat: Category, mors: Sequence[MorRef]) -> WidePushoutResult:
    """Canonical wide pushout of morphisms sharing a domain.

    Built by staging binary pushouts: fold each next leg into the running
    composite and recompose.  The one-element case is the morphism itself
    with an identity injection; the empty case is not defined (no domain
    to read off), callers pass at least one leg.
    """
    if not mors:
        raise CategoryError("wide pushout needs at least one morphism")
    dom = mors[0].dom
    for m in mors[1:]:
        if m.dom != dom:
            raise CategoryError("wide pushout legs must share a domain")
    composite = mors[0]
    injections: list[MorRef] = [cat.identity(mors[0].cod)]
    for m in mors[1:]:
        # pushout of the running composite along the next leg; the leg
        # opposite the composite becomes that leg's injection
        new_inj, connector = cat.pushout(composite, m)
        injections = [cat.compose(connector, k) for k in injections]
        injections.append(new_inj)
        composite = cat.compose(new_inj, m)
    return WidePushoutResult(composite, tuple(injections))


def semantic_consequence(
    cat: Category,
    hypotheses: MorphismSet,
    goal: MorRef,
    universe: Iterable[ObjRef],
    *,
    exact: bool,
    bound: int | None = None,
) -> ConsequenceVerdict:
    """Whether every universe object injective for all hypotheses is
    injective for the goal.  Exact iff the universe is the whole category
    (finite lattices); on graphs the verdict only covers the given bound."""
    for x in universe:
        if all(cat.is_injective(x, m) for m in hypotheses.morphisms()):
            if not cat.is_injective(x, goal):
                return ConsequenceVerdict(False, x, exact, bound)
    return ConsequenceVerdict(True, None, exact, bound)


def verify_pushout_square(
    cat: Category,
    h: MorRef,
    f: MorRef,
    universe: Iterable[ObjRef],
) -> CoconeCheckReport:
    """Check the universal property of the canonical pushout of (h, f) by
    enumerating cocones over the universe and demanding a unique mediator."""
    h_prime, f_prime = cat.pushout(h, f)
    apex = h_prime.cod
    for z in universe:
        for u in cat.enumerate_homs(h.cod, z):
            for v in cat.enumerate_homs(f.cod, z):
                if cat.compose(u, h) != cat.compose(v, f):
                    continue
                mediators = [
                    m
                    for m in cat.enumerate_homs(apex, z)
                    if cat.compose(m, f_prime) == u and cat.compose(m, h_prime) == v
                ]
                if len(mediators) != 1:
                    kind = "missing mediator" if not mediators else "mediator not unique"
                    return CoconeCheckReport(False, CoconeFailure(z, kind, (u, v)))
    return CoconeCheckReport(True)
