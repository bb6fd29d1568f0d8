"""Diagram normalization and equality.

Exactly three rewrite rules are applied, each strictly decreasing the
node count, so normalization always terminates:

* identity elimination -- explicit identity nodes are spliced out;
* snake elimination -- a cup feeding a cap over a single wire is
  yanked straight, in either chirality;
* swap involution -- two stacked swaps on the same wire pair cancel.

Spiders are evaluated, never rewritten.  Equality defaults to the
syntactic check (compare canonical normal forms); the probabilistic
semantic check via tensor evaluation is opt-in.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import diagram as dg
from .diagram import CAP, CUP, IDENTITY, SWAP, Diagram, validate
from .errors import InvalidDiagram, ShapeMismatch

__all__ = ["NormalForm", "normalize", "equal"]


@dataclass(frozen=True)
class NormalForm:
    diagram: Diagram
    rewrite_trace: tuple[tuple[str, tuple[int, ...]], ...]


def normalize(d: Diagram) -> NormalForm:
    """Apply the rewrite rules to exhaustion, then renumber canonically.

    The rule scheduling is deterministic (first redex in canonical node
    order), and since the rules have no overlapping redexes the result
    is confluent: normalizing a normal form is a no-op.
    """
    problems = validate(d)
    if problems:
        raise InvalidDiagram("; ".join(str(v) for v in problems))

    nodes: dict[int, dg.Generator] = dict(enumerate(d.nodes))
    wires: set[tuple[int, int, int, int]] = set(d.wires)
    trace: list[tuple[str, tuple[int, ...]]] = []

    while True:
        step = _find_redex(nodes, wires, d)
        if step is None:
            break
        trace.append(step)

    # rebuild with dense ids, then canonical renumbering
    remap = {old: new for new, old in enumerate(sorted(nodes))}
    packed = Diagram(
        dom=d.dom,
        cod=d.cod,
        nodes=tuple(nodes[i] for i in sorted(nodes)),
        wires=tuple(sorted((remap.get(sn, sn), sp, remap.get(dn, dn), dp)
                           for sn, sp, dn, dp in wires)),
        doubled=d.doubled,
    )
    return NormalForm(packed.canonical(), tuple(trace))


def _find_redex(nodes, wires, original) -> tuple[str, tuple[int, ...]] | None:
    src = {(w[0], w[1]): w for w in wires}
    dst = {(w[2], w[3]): w for w in wires}

    def splice(removed: set, joins: list[tuple[tuple[int, int], tuple[int, int]]]):
        for w in removed:
            wires.discard(w)
        for (sn, sp), (dn, dp) in joins:
            wires.add((sn, sp, dn, dp))

    for i in sorted(nodes):
        gen = nodes[i]
        if gen.kind == IDENTITY:
            w_in = dst[(i, 0)]
            w_out = src[(i, 0)]
            splice({w_in, w_out}, [((w_in[0], w_in[1]), (w_out[2], w_out[3]))])
            del nodes[i]
            return ("identity", (i,))
        if gen.kind == CUP:
            w0 = src[(i, 0)]   # carries b^(z+1)
            w1 = src[(i, 1)]   # carries b^z
            # chirality 1: cup output 1 plugged into cap input 0
            j, jp = w1[2], w1[3]
            if j >= 0 and nodes.get(j) is not None and nodes[j].kind == CAP \
                    and jp == 0 and w0[2:] != (j, 1):
                w_other_in = dst[(j, 1)]
                splice({w0, w1, w_other_in},
                       [((w_other_in[0], w_other_in[1]), (w0[2], w0[3]))])
                del nodes[i], nodes[j]
                return ("snake", (i, j))
            # chirality 2: cup output 0 plugged into cap input 1
            j, jp = w0[2], w0[3]
            if j >= 0 and nodes.get(j) is not None and nodes[j].kind == CAP \
                    and jp == 1 and w1[2:] != (j, 0):
                w_other_in = dst[(j, 0)]
                splice({w0, w1, w_other_in},
                       [((w_other_in[0], w_other_in[1]), (w1[2], w1[3]))])
                del nodes[i], nodes[j]
                return ("snake", (i, j))
        if gen.kind == SWAP:
            w0 = src[(i, 0)]
            w1 = src[(i, 1)]
            j = w0[2]
            if j >= 0 and j != i and nodes.get(j) is not None \
                    and nodes[j].kind == SWAP \
                    and w0[2:] == (j, 0) and w1[2:] == (j, 1):
                a_in = dst[(i, 0)]
                b_in = dst[(i, 1)]
                a_out = src[(j, 0)]
                b_out = src[(j, 1)]
                splice({w0, w1, a_in, b_in, a_out, b_out},
                       [((a_in[0], a_in[1]), (a_out[2], a_out[3])),
                        ((b_in[0], b_in[1]), (b_out[2], b_out[3]))])
                del nodes[i], nodes[j]
                return ("swap-involution", (i, j))
    return None


def equal(d1: Diagram, d2: Diagram, mode: str = "syntactic", *,
          model=None, seed: int = 0, tolerance: float = 1e-9,
          up_to_scalar: bool = False) -> bool:
    """Decide diagram equality.

    ``syntactic`` compares canonical normal forms and is exact for the
    equations generated by yanking, identity and swap cancellation.
    ``semantic`` evaluates both diagrams under a tensor model (payloads
    for boxes absent from the model are drawn from a seeded generator
    shared between the two sides) and compares numerically, which is
    sound but probabilistic.
    """
    if (d1.dom, d1.cod) != (d2.dom, d2.cod):
        raise ShapeMismatch(
            f"open ports differ: {d1.dom}->{d1.cod} vs {d2.dom}->{d2.cod}")
    if mode == "syntactic":
        return normalize(d1).diagram == normalize(d2).diagram
    if mode == "semantic":
        from .tensors import Model, evaluate, random_payloads

        if model is None:
            bases = {t.base for d in (d1, d2)
                     for g in d.nodes for t in g.dom + g.cod}
            bases |= {t.base for t in d1.dom + d1.cod}
            model = Model(dims={b: 2 for b in sorted(bases)}, payloads={})
        model = random_payloads(model, (d1, d2), seed=seed)
        t1 = evaluate(d1, model)
        t2 = evaluate(d2, model)
        return t1.allclose(t2, tolerance=tolerance, up_to_scalar=up_to_scalar)
    raise ValueError(f"unknown mode {mode!r}")
