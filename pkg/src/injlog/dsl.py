"""Text format for lattices, graphs, morphisms, hypothesis sets, and proofs.

Grammar, line oriented, with ``#`` comments:

    lattice NAME { elements: e0 e1 ...; leq: a<b, c<d; }
    graph NAME { nodes: u v ...; edges: u->v, ...; }
    mor NAME : SRC -> DST { u |-> x, ... }      # graph morphism
    mor NAME : a -> b;                          # lattice morphism
    hset NAME { m1, m2 }
    proof NAME { (cancel (hyp h) f g) }

The leq relation is closed reflexively and transitively before validation.
Lattice elements may be written qualified as LAT.elem; unqualified names
must be unique across the declared lattices.

Proof bodies are s-expressions over the forms hyp, id, comp, cancel, push,
coprod, widepush.  Morphism arguments are declared names or the literals
(lmor a b) and (gmor SRC DST (i j ...)); graph positions accept a declared
name or (g N ((u v) ...)) with numeric nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Category, CategoryError, MorphismSet, MorRef, ObjRef
from .graphs import Graph, GraphCategory, GraphHom
from .lattice import LatticeCategory, LatticeError, presentation_from_pairs
from .proofs import (
    Cancel,
    Compose,
    CoprodN,
    Hyp,
    Identity,
    ProofTerm,
    Push,
    WidePushN,
)

__all__ = [
    "Diagnostic",
    "DslError",
    "Workspace",
    "parse",
    "parse_proof_text",
    "print_workspace",
    "proof_to_text",
]


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str
    hint: str = ""

    def render(self) -> str:
        text = f"line {self.line}, col {self.col}: {self.message}"
        if self.hint:
            text += f" (hint: {self.hint})"
        return text


class DslError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.render())
        self.diagnostic = diagnostic


def _fail(tok: "_Token | None", message: str, hint: str = "") -> "DslError":
    line, col = (tok.line, tok.col) if tok is not None else (0, 0)
    return DslError(Diagnostic(line, col, message, hint))


# ---------------------------------------------------------------------------
# tokens


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident", "eof", or the punctuation text itself
    text: str
    line: int
    col: int


_IDENT_CHARS = set(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_."
)
_SINGLE = set("{}();:,<")


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if source.startswith("|->", i):
            tokens.append(_Token("|->", "|->", line, col))
            i += 3
            col += 3
            continue
        if source.startswith("->", i):
            tokens.append(_Token("->", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in _SINGLE:
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch in _IDENT_CHARS:
            start = i
            start_col = col
            while i < n and source[i] in _IDENT_CHARS:
                i += 1
                col += 1
            tokens.append(_Token("ident", source[start:i], line, start_col))
            continue
        raise DslError(
            Diagnostic(
                line,
                col,
                f"unexpected character {ch!r}",
                "allowed: names, { } ( ) ; , : < -> |-> and # comments",
            )
        )
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# workspace


@dataclass
class LatticeDecl:
    name: str
    category: LatticeCategory
    line: int


@dataclass
class GraphDecl:
    name: str
    node_names: tuple[str, ...]
    graph: Graph
    obj: ObjRef
    line: int


@dataclass
class MorDecl:
    name: str
    ref: MorRef
    line: int


@dataclass
class HsetDecl:
    name: str
    morphisms: MorphismSet
    line: int


@dataclass
class ProofDecl:
    name: str
    term: ProofTerm
    line: int


@dataclass
class Workspace:
    """Named declarations parsed from one source text."""

    graph_category: GraphCategory = field(default_factory=GraphCategory)
    lattices: dict[str, LatticeDecl] = field(default_factory=dict)
    graphs: dict[str, GraphDecl] = field(default_factory=dict)
    morphisms: dict[str, MorDecl] = field(default_factory=dict)
    hsets: dict[str, HsetDecl] = field(default_factory=dict)
    proofs: dict[str, ProofDecl] = field(default_factory=dict)
    order: list[tuple[str, str]] = field(default_factory=list)

    def category_of(self, ref: MorRef | ObjRef) -> Category:
        cat_id = ref.cat_id if isinstance(ref, ObjRef) else ref.dom.cat_id
        if cat_id == self.graph_category.cat_id:
            return self.graph_category
        for decl in self.lattices.values():
            if decl.category.cat_id == cat_id:
                return decl.category
        raise KeyError(cat_id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Workspace):
            return NotImplemented
        if self.order != other.order:
            return False
        for name, decl in self.lattices.items():
            if name not in other.lattices:
                return False
            p, q = decl.category.p, other.lattices[name].category.p
            if p.elements != q.elements or not np.array_equal(p.leq, q.leq):
                return False
        if {n: (d.node_names, d.graph) for n, d in self.graphs.items()} != {
            n: (d.node_names, d.graph) for n, d in other.graphs.items()
        }:
            return False
        if {n: d.ref for n, d in self.morphisms.items()} != {
            n: d.ref for n, d in other.morphisms.items()
        }:
            return False
        if {n: d.morphisms.entries for n, d in self.hsets.items()} != {
            n: d.morphisms.entries for n, d in other.hsets.items()
        }:
            return False
        return {n: d.term for n, d in self.proofs.items()} == {
            n: d.term for n, d in other.proofs.items()
        }


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.ws = Workspace()

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, hint: str = "") -> _Token:
        tok = self.next()
        if tok.kind != kind:
            what = kind if kind != "ident" else "a name"
            raise _fail(tok, f"expected {what}, found {tok.text or 'end of input'!r}", hint)
        return tok

    def parse(self) -> Workspace:
        while self.peek().kind != "eof":
            tok = self.expect("ident", "declarations start with lattice, graph, mor, hset, or proof")
            if tok.text == "lattice":
                self.lattice_decl(tok)
            elif tok.text == "graph":
                self.graph_decl(tok)
            elif tok.text == "mor":
                self.mor_decl(tok)
            elif tok.text == "hset":
                self.hset_decl(tok)
            elif tok.text == "proof":
                self.proof_decl(tok)
            else:
                raise _fail(
                    tok,
                    f"unknown declaration {tok.text!r}",
                    "use lattice, graph, mor, hset, or proof",
                )
        return self.ws

    def fresh_name(self, tok: _Token) -> str:
        for table in (
            self.ws.lattices,
            self.ws.graphs,
            self.ws.morphisms,
            self.ws.hsets,
            self.ws.proofs,
        ):
            if tok.text in table:
                raise _fail(tok, f"name {tok.text!r} is already declared", "pick a fresh name")
        return tok.text

    def ident_list(self, stop: str) -> list[_Token]:
        toks = []
        while self.peek().kind == "ident":
            toks.append(self.next())
        self.expect(stop)
        return toks

    def lattice_decl(self, kw: _Token) -> None:
        name_tok = self.expect("ident")
        name = self.fresh_name(name_tok)
        self.expect("{")
        sect = self.expect("ident")
        if sect.text != "elements":
            raise _fail(sect, "expected 'elements' section", "lattice NAME { elements: ...; leq: ...; }")
        self.expect(":")
        elem_toks = self.ident_list(";")
        elements = [t.text for t in elem_toks]
        seen: set[str] = set()
        for t in elem_toks:
            if t.text in seen:
                raise _fail(t, f"duplicate element {t.text!r}")
            seen.add(t.text)
        pairs: list[tuple[str, str]] = []
        if self.peek().kind == "ident" and self.peek().text == "leq":
            self.next()
            self.expect(":")
            while self.peek().kind == "ident":
                a = self.next()
                self.expect("<", "write pairs as a<b")
                b = self.expect("ident")
                for t in (a, b):
                    if t.text not in seen:
                        raise _fail(t, f"unknown element {t.text!r} in leq", "declare it under elements")
                pairs.append((a.text, b.text))
                if self.peek().kind == ",":
                    self.next()
                else:
                    break
            self.expect(";")
        self.expect("}")
        try:
            presentation = presentation_from_pairs(name, elements, pairs)
        except LatticeError as err:
            raise _fail(kw, f"not a partial order: {err}", "check the leq pairs") from err
        self.ws.lattices[name] = LatticeDecl(name, LatticeCategory(presentation), kw.line)
        self.ws.order.append(("lattice", name))

    def graph_decl(self, kw: _Token) -> None:
        name_tok = self.expect("ident")
        name = self.fresh_name(name_tok)
        self.expect("{")
        sect = self.expect("ident")
        if sect.text != "nodes":
            raise _fail(sect, "expected 'nodes' section", "graph NAME { nodes: ...; edges: ...; }")
        self.expect(":")
        node_toks = self.ident_list(";")
        node_names = tuple(t.text for t in node_toks)
        index: dict[str, int] = {}
        for i, t in enumerate(node_toks):
            if t.text in index:
                raise _fail(t, f"duplicate node {t.text!r}")
            index[t.text] = i
        edges: list[tuple[int, int]] = []
        if self.peek().kind == "ident" and self.peek().text == "edges":
            self.next()
            self.expect(":")
            while self.peek().kind == "ident":
                a = self.next()
                self.expect("->", "write edges as u->v")
                b = self.expect("ident")
                for t in (a, b):
                    if t.text not in index:
                        raise _fail(t, f"unknown node {t.text!r} in edges", "declare it under nodes")
                edges.append((index[a.text], index[b.text]))
                if self.peek().kind == ",":
                    self.next()
                else:
                    break
            self.expect(";")
        self.expect("}")
        graph = Graph.of(len(node_names), edges)
        obj = self.ws.graph_category.obj(graph)
        self.ws.graphs[name] = GraphDecl(name, node_names, graph, obj, kw.line)
        self.ws.order.append(("graph", name))

    def resolve_element(self, tok: _Token) -> tuple[LatticeCategory, str]:
        if "." in tok.text:
            lat_name, _, elem = tok.text.partition(".")
            decl = self.ws.lattices.get(lat_name)
            if decl is None:
                raise _fail(tok, f"unknown lattice {lat_name!r}")
            if elem not in decl.category.p.elements:
                raise _fail(tok, f"lattice {lat_name!r} has no element {elem!r}")
            return decl.category, elem
        hits = [
            d.category
            for d in self.ws.lattices.values()
            if tok.text in d.category.p.elements
        ]
        if not hits:
            raise _fail(tok, f"unknown lattice element {tok.text!r}")
        if len(hits) > 1:
            raise _fail(
                tok,
                f"element {tok.text!r} appears in more than one lattice",
                f"qualify it, e.g. {hits[0].p.name}.{tok.text}",
            )
        return hits[0], tok.text

    def mor_decl(self, kw: _Token) -> None:
        name_tok = self.expect("ident")
        name = self.fresh_name(name_tok)
        self.expect(":")
        src = self.expect("ident")
        self.expect("->", "mor NAME : SRC -> DST")
        dst = self.expect("ident")
        if self.peek().kind == ";":
            self.next()
            ref = self.lattice_mor(src, dst)
        elif self.peek().kind == "{":
            ref = self.graph_mor(src, dst)
        else:
            raise _fail(
                self.peek(),
                "expected ';' or a '{ ... }' map",
                "lattice morphisms end with ';', graph morphisms map every node",
            )
        self.ws.morphisms[name] = MorDecl(name, ref, kw.line)
        self.ws.order.append(("mor", name))

    def lattice_mor(self, src: _Token, dst: _Token) -> MorRef:
        cat_a, a = self.resolve_element(src)
        cat_b, b = self.resolve_element(dst)
        if cat_a is not cat_b:
            raise _fail(dst, f"elements {src.text!r} and {dst.text!r} are in different lattices")
        try:
            return cat_a.mor(a, b)
        except CategoryError as err:
            raise _fail(
                src,
                f"no morphism {a} -> {b} in lattice {cat_a.p.name!r}",
                f"{a} is not below {b}",
            ) from err

    def graph_mor(self, src: _Token, dst: _Token) -> MorRef:
        sdecl = self.ws.graphs.get(src.text)
        ddecl = self.ws.graphs.get(dst.text)
        for tok, decl in ((src, sdecl), (dst, ddecl)):
            if decl is None:
                hint = ""
                if any(tok.text in d.category.p.elements for d in self.ws.lattices.values()):
                    hint = "lattice morphisms are written 'mor NAME : a -> b;'"
                raise _fail(tok, f"unknown graph {tok.text!r}", hint)
        self.expect("{")
        sindex = {n: i for i, n in enumerate(sdecl.node_names)}
        dindex = {n: i for i, n in enumerate(ddecl.node_names)}
        images: dict[int, tuple[int, _Token]] = {}
        while self.peek().kind == "ident":
            u = self.next()
            self.expect("|->", "write assignments as u |-> x")
            v = self.expect("ident")
            if u.text not in sindex:
                raise _fail(u, f"unknown node {u.text!r} in graph {src.text!r}")
            if v.text not in dindex:
                raise _fail(v, f"unknown node {v.text!r} in graph {dst.text!r}")
            if sindex[u.text] in images:
                raise _fail(u, f"node {u.text!r} is mapped twice")
            images[sindex[u.text]] = (dindex[v.text], u)
            if self.peek().kind == ",":
                self.next()
            else:
                break
        end = self.expect("}")
        missing = [n for n, i in sindex.items() if i not in images]
        if missing:
            raise _fail(
                end,
                f"total map required: node {missing[0]!r} has no image",
                f"add {missing[0]} |-> ...",
            )
        mapping = tuple(images[i][0] for i in range(len(sindex)))
        try:
            hom = GraphHom(sdecl.graph, ddecl.graph, mapping)
        except ValueError as err:
            raise _fail(src, str(err), "the map must send edges to edges") from err
        return self.ws.graph_category.mor(hom)

    def hset_decl(self, kw: _Token) -> None:
        name_tok = self.expect("ident")
        name = self.fresh_name(name_tok)
        self.expect("{")
        pairs: list[tuple[str, MorRef]] = []
        while self.peek().kind == "ident":
            m = self.next()
            decl = self.ws.morphisms.get(m.text)
            if decl is None:
                raise _fail(m, f"unknown morphism {m.text!r}", "declare it with mor first")
            pairs.append((m.text, decl.ref))
            if self.peek().kind == ",":
                self.next()
            else:
                break
        self.expect("}")
        try:
            hset = MorphismSet.of(pairs)
        except ValueError as err:
            raise _fail(kw, str(err), "an hset lives in a single category") from err
        self.ws.hsets[name] = HsetDecl(name, hset, kw.line)
        self.ws.order.append(("hset", name))

    def proof_decl(self, kw: _Token) -> None:
        name_tok = self.expect("ident")
        name = self.fresh_name(name_tok)
        self.expect("{")
        term = self.proof_term()
        self.expect("}")
        self.ws.proofs[name] = ProofDecl(name, term, kw.line)
        self.ws.order.append(("proof", name))

    def int_tok(self) -> int:
        tok = self.expect("ident")
        if not tok.text.isdigit():
            raise _fail(tok, f"expected a number, found {tok.text!r}")
        return int(tok.text)

    def graph_literal(self) -> Graph:
        self.expect("(")
        head = self.expect("ident")
        if head.text != "g":
            raise _fail(head, f"expected graph literal (g ...), found {head.text!r}")
        count = self.int_tok()
        self.expect("(")
        edges = []
        while self.peek().kind == "(":
            self.next()
            u = self.int_tok()
            v = self.int_tok()
            self.expect(")")
            edges.append((u, v))
        self.expect(")")
        self.expect(")")
        try:
            return Graph.of(count, edges)
        except ValueError as err:
            raise _fail(head, str(err)) from err

    def graph_operand(self) -> Graph:
        if self.peek().kind == "(":
            return self.graph_literal()
        tok = self.expect("ident")
        decl = self.ws.graphs.get(tok.text)
        if decl is None:
            raise _fail(tok, f"unknown graph {tok.text!r}")
        return decl.graph

    def object_operand(self) -> ObjRef:
        if self.peek().kind == "(":
            return self.ws.graph_category.obj(self.graph_literal())
        tok = self.expect("ident")
        decl = self.ws.graphs.get(tok.text)
        if decl is not None:
            return decl.obj
        cat, elem = self.resolve_element(tok)
        return cat.obj(elem)

    def morphism_operand(self) -> MorRef:
        if self.peek().kind != "(":
            tok = self.expect("ident")
            decl = self.ws.morphisms.get(tok.text)
            if decl is None:
                raise _fail(tok, f"unknown morphism {tok.text!r}")
            return decl.ref
        self.next()
        head = self.expect("ident")
        if head.text == "lmor":
            a = self.expect("ident")
            b = self.expect("ident")
            self.expect(")")
            return self.lattice_mor(a, b)
        if head.text == "gmor":
            src = self.graph_operand()
            dst = self.graph_operand()
            self.expect("(")
            mapping = []
            while self.peek().kind == "ident":
                mapping.append(self.int_tok())
            self.expect(")")
            self.expect(")")
            try:
                hom = GraphHom(src, dst, tuple(mapping))
            except ValueError as err:
                raise _fail(head, str(err)) from err
            return self.ws.graph_category.mor(hom)
        raise _fail(head, f"expected a morphism, found ({head.text} ...)", "use a name, (lmor a b), or (gmor ...)")

    def proof_term(self) -> ProofTerm:
        self.expect("(", "proof terms are s-expressions")
        head = self.expect("ident")
        if head.text == "hyp":
            name = self.expect("ident")
            self.expect(")")
            return Hyp(name.text)
        if head.text == "id":
            obj = self.object_operand()
            self.expect(")")
            return Identity(obj)
        if head.text == "comp":
            outer = self.proof_term()
            inner = self.proof_term()
            self.expect(")")
            return Compose(outer, inner)
        if head.text == "cancel":
            whole = self.proof_term()
            first = self.morphism_operand()
            rest = self.morphism_operand()
            self.expect(")")
            return Cancel(whole, first, rest)
        if head.text == "push":
            proof = self.proof_term()
            along = self.morphism_operand()
            self.expect(")")
            return Push(proof, along)
        if head.text in ("coprod", "widepush"):
            parts = []
            while self.peek().kind == "(":
                parts.append(self.proof_term())
            self.expect(")")
            form = CoprodN if head.text == "coprod" else WidePushN
            return form(tuple(parts))
        raise _fail(
            head,
            f"unknown proof form {head.text!r}",
            "use hyp, id, comp, cancel, push, coprod, or widepush",
        )


def parse(source: str) -> Workspace:
    """Parse a workspace; raises DslError with a positioned diagnostic."""
    return _Parser(source).parse()


def parse_proof_text(ws: Workspace, source: str) -> ProofTerm:
    """Parse a bare proof s-expression against an existing workspace."""
    parser = _Parser("")
    parser.tokens = _tokenize(source)
    parser.ws = ws
    term = parser.proof_term()
    parser.expect("eof")
    return term


# ---------------------------------------------------------------------------
# printing


def _element_text(ws: Workspace, cat: LatticeCategory, elem: str) -> str:
    hits = [d for d in ws.lattices.values() if elem in d.category.p.elements]
    if len(hits) == 1:
        return elem
    return f"{cat.p.name}.{elem}"


def _graph_name(ws: Workspace, graph: Graph) -> str | None:
    for decl in ws.graphs.values():
        if decl.graph == graph:
            return decl.name
    return None


def _graph_text(ws: Workspace, graph: Graph) -> str:
    name = _graph_name(ws, graph)
    if name is not None:
        return name
    edges = " ".join(f"({u} {v})" for u, v in graph.edge_list())
    return f"(g {graph.node_count} ({edges}))"


def _object_text(ws: Workspace, obj: ObjRef) -> str:
    cat = ws.category_of(obj)
    if isinstance(cat, GraphCategory):
        return _graph_text(ws, cat.graph_of(obj))
    return _element_text(ws, cat, cat.object_label(obj))


def _morphism_text(ws: Workspace, ref: MorRef) -> str:
    for decl in ws.morphisms.values():
        if decl.ref == ref:
            return decl.name
    cat = ws.category_of(ref)
    if isinstance(cat, GraphCategory):
        hom = cat.hom_of(ref)
        src = _graph_text(ws, hom.source)
        dst = _graph_text(ws, hom.target)
        mapping = " ".join(str(v) for v in hom.mapping)
        return f"(gmor {src} {dst} ({mapping}))"
    a = _element_text(ws, cat, cat.object_label(ref.dom))
    b = _element_text(ws, cat, cat.object_label(ref.cod))
    return f"(lmor {a} {b})"


def proof_to_text(ws: Workspace, term: ProofTerm) -> str:
    """Serialize a proof term; parse_proof_text inverts it."""
    if isinstance(term, Hyp):
        return f"(hyp {term.name})"
    if isinstance(term, Identity):
        return f"(id {_object_text(ws, term.obj)})"
    if isinstance(term, Compose):
        return f"(comp {proof_to_text(ws, term.outer)} {proof_to_text(ws, term.inner)})"
    if isinstance(term, Cancel):
        whole = proof_to_text(ws, term.whole)
        return f"(cancel {whole} {_morphism_text(ws, term.first)} {_morphism_text(ws, term.rest)})"
    if isinstance(term, Push):
        return f"(push {proof_to_text(ws, term.proof)} {_morphism_text(ws, term.along)})"
    if isinstance(term, (CoprodN, WidePushN)):
        head = "coprod" if isinstance(term, CoprodN) else "widepush"
        parts = " ".join(proof_to_text(ws, p) for p in term.parts)
        return f"({head} {parts})" if parts else f"({head})"
    raise TypeError(f"not a proof term: {term!r}")


def _lattice_lines(decl: LatticeDecl) -> list[str]:
    p = decl.category.p
    pairs = [
        f"{p.elements[a]}<{p.elements[b]}"
        for a in range(p.size)
        for b in range(p.size)
        if a != b and p.leq[a, b]
    ]
    lines = [f"lattice {decl.name} {{"]
    lines.append(f"  elements: {' '.join(p.elements)};")
    if pairs:
        lines.append(f"  leq: {', '.join(pairs)};")
    lines.append("}")
    return lines


def _graph_lines(decl: GraphDecl) -> list[str]:
    lines = [f"graph {decl.name} {{"]
    lines.append(f"  nodes: {' '.join(decl.node_names)};")
    edges = [
        f"{decl.node_names[u]}->{decl.node_names[v]}"
        for u, v in decl.graph.edge_list()
    ]
    if edges:
        lines.append(f"  edges: {', '.join(edges)};")
    lines.append("}")
    return lines


def _mor_lines(ws: Workspace, decl: MorDecl) -> list[str]:
    cat = ws.category_of(decl.ref)
    if isinstance(cat, GraphCategory):
        hom = cat.hom_of(decl.ref)
        src = _graph_name(ws, hom.source)
        dst = _graph_name(ws, hom.target)
        if src is None or dst is None:
            raise ValueError(f"morphism {decl.name!r} uses an undeclared graph")
        snames = ws.graphs[src].node_names
        dnames = ws.graphs[dst].node_names
        body = ", ".join(
            f"{snames[i]} |-> {dnames[v]}" for i, v in enumerate(hom.mapping)
        )
        body = f"{{ {body} }}" if body else "{ }"
        return [f"mor {decl.name} : {src} -> {dst} {body}"]
    a = _element_text(ws, cat, cat.object_label(decl.ref.dom))
    b = _element_text(ws, cat, cat.object_label(decl.ref.cod))
    return [f"mor {decl.name} : {a} -> {b};"]


def print_workspace(ws: Workspace) -> str:
    """Render a workspace back to source; parse inverts it."""
    chunks: list[str] = []
    for kind, name in ws.order:
        if kind == "lattice":
            chunks.append("\n".join(_lattice_lines(ws.lattices[name])))
        elif kind == "graph":
            chunks.append("\n".join(_graph_lines(ws.graphs[name])))
        elif kind == "mor":
            chunks.append("\n".join(_mor_lines(ws, ws.morphisms[name])))
        elif kind == "hset":
            decl = ws.hsets[name]
            body = ", ".join(decl.morphisms.names())
            body = f"{{ {body} }}" if body else "{ }"
            chunks.append(f"hset {name} {body}")
        elif kind == "proof":
            decl = ws.proofs[name]
            chunks.append(f"proof {name} {{ {proof_to_text(ws, decl.term)} }}")
    return "\n\n".join(chunks) + ("\n" if chunks else "")
