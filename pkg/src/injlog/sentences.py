"""Render graph morphisms as first-order sentences.

A graph X is injective with respect to h: A -> B exactly when X satisfies
the sentence produced here: universally quantified source nodes, the source
edges as premise, and existentially quantified fresh target nodes with the
target edges (and any node identifications forced by h) as conclusion.
"""

from __future__ import annotations

from .graphs import GraphHom

__all__ = ["render_regular_sentence"]


def _conjunction(atoms: list[str]) -> str:
    if not atoms:
        return "true"
    return " ∧ ".join(atoms)


def render_regular_sentence(h: GraphHom) -> str:
    """Return the sentence whose models are the graphs injective w.r.t. h.

    Source nodes become x0, x1, ... in node order.  Target nodes outside the
    image become y0, y1, ... in node order.  A target node in the image is
    named by its least preimage; a source node that is not the least preimage
    of its image contributes an equation instead.
    """
    src, tgt = h.source, h.target

    xs = [f"x{i}" for i in range(src.node_count)]
    least_pre: dict[int, int] = {}
    for i, b in enumerate(h.mapping):
        if b not in least_pre:
            least_pre[b] = i

    ys: dict[int, str] = {}
    for b in range(tgt.node_count):
        if b not in least_pre:
            ys[b] = f"y{len(ys)}"

    def term(b: int) -> str:
        if b in least_pre:
            return xs[least_pre[b]]
        return ys[b]

    premise = _conjunction([f"E({xs[u]},{xs[v]})" for u, v in src.edge_list()])

    atoms = [f"E({term(u)},{term(v)})" for u, v in tgt.edge_list()]
    atoms += [
        f"{xs[i]} = {xs[least_pre[b]]}"
        for i, b in enumerate(h.mapping)
        if least_pre[b] != i
    ]
    conclusion = _conjunction(atoms)
    if ys:
        bound = " ".join(f"∃{y}" for y in ys.values())
        conclusion = f"{bound} ( {conclusion} )"

    body = f"( {premise} → {conclusion} )"
    if xs:
        return " ".join(f"∀{x}" for x in xs) + " " + body
    return body
