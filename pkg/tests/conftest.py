"""Shared helpers: random diagram/lexicon generators and brute-force oracles.

The oracles deliberately use different machinery than the package
(index loops instead of tensordot, adjacent-pair cancellation instead of
the span DP) so that agreement is evidence, not tautology.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from stringcalc import diagram as dg
from stringcalc.diagram import BOX, CAP, CUP, IDENTITY, IN, OUT, SPIDER, SWAP, Diagram
from stringcalc.tensors import Model, double_array
from stringcalc.types import WireType

BASES = ("a", "b")


# -- random diagrams ---------------------------------------------------------


def random_types(rng, n, zlo=-1, zhi=1):
    return tuple(WireType(rng.choice(BASES), int(rng.integers(zlo, zhi + 1)))
                 for _ in range(n))


def random_diagram(rng, max_nodes=12, max_width=5):
    """A random well-formed diagram built as a stack of random layers."""
    d = dg.identity(random_types(rng, int(rng.integers(0, 4))))
    name_pool = [f"g{k}" for k in range(6)]
    while len(d.nodes) < max_nodes and rng.random() < 0.85:
        cod = d.cod
        op = rng.choice(["box", "cup", "cap", "swap", "idnode", "spider"])
        if op == "box":
            i = int(rng.integers(0, len(cod) + 1))
            k = int(rng.integers(0, min(2, len(cod) - i) + 1))
            box = dg.make_generator(str(rng.choice(name_pool)),
                                    cod[i:i + k],
                                    random_types(rng, int(rng.integers(0, 3))))
            layer = dg.identity(cod[:i]) @ box @ dg.identity(cod[i + k:])
        elif op == "cup":
            if len(cod) + 2 > max_width:
                continue
            i = int(rng.integers(0, len(cod) + 1))
            c = dg.cup(str(rng.choice(BASES)), int(rng.integers(-1, 2)))
            layer = dg.identity(cod[:i]) @ c @ dg.identity(cod[i:])
        elif op == "cap":
            pairs = [i for i in range(len(cod) - 1)
                     if cod[i].base == cod[i + 1].base
                     and cod[i + 1].z == cod[i].z + 1]
            if not pairs:
                continue
            i = int(rng.choice(pairs))
            c = dg.cap(cod[i].base, cod[i].z)
            layer = dg.identity(cod[:i]) @ c @ dg.identity(cod[i + 2:])
        elif op == "swap":
            if len(cod) < 2:
                continue
            i = int(rng.integers(0, len(cod) - 1))
            layer = dg.identity(cod[:i]) @ dg.swap(cod[i], cod[i + 1]) \
                @ dg.identity(cod[i + 2:])
        elif op == "idnode":
            if not cod:
                continue
            i = int(rng.integers(0, len(cod)))
            layer = dg.identity(cod[:i]) @ dg.identity_node(cod[i]) \
                @ dg.identity(cod[i + 1:])
        else:  # spider
            plain = [i for i in range(len(cod)) if cod[i].z == 0]
            runs = [i for i in plain
                    if i + 1 < len(cod) and cod[i + 1] == cod[i]
                    and cod[i].z == 0]
            if rng.random() < 0.5 and runs:
                i = int(rng.choice(runs))
                k = 2
            elif plain:
                i = int(rng.choice(plain))
                k = 1
            else:
                continue
            m = int(rng.integers(0, 3))
            if k + m == 0 or len(cod) - k + m > max_width:
                continue
            sp = dg.spider(cod[i].base, k, m)
            layer = dg.identity(cod[:i]) @ sp @ dg.identity(cod[i + k:])
        d = d >> layer
    return d


def random_morphism(rng, dom, cod, tag):
    """A random diagram with the given boundary: decoration plus one box."""
    d = dg.identity(dom)
    if dom and rng.random() < 0.5:
        i = int(rng.integers(0, len(dom)))
        d = d >> (dg.identity(dom[:i]) @ dg.identity_node(dom[i])
                  @ dg.identity(dom[i + 1:]))
    mid = random_types(rng, int(rng.integers(0, 3)))
    d = d >> dg.make_generator(f"{tag}0", dom, mid)
    d = d >> dg.make_generator(f"{tag}1", mid, cod)
    return d


# -- brute-force tensor contraction oracle -----------------------------------


def _oracle_generator_array(gen, model: Model, thick: bool):
    dims = model.dims

    def wd(t):
        return dims[t.base] ** 2 if thick else dims[t.base]

    if gen.kind == BOX:
        ref = gen.payload or "box:" + repr(gen.signature())
        payload = model.payloads[ref]
        arr = payload.tensor.data * payload.tensor.scalar
        if thick and payload.kind == "pure":
            arr = double_array(arr)
        return arr
    if gen.kind in (CUP, CAP, IDENTITY):
        return np.eye(wd(gen.dom[0] if gen.dom else gen.cod[0]), dtype=complex)
    if gen.kind == SWAP:
        du, dv = wd(gen.dom[0]), wd(gen.dom[1])
        arr = np.zeros((du, dv, dv, du), dtype=complex)
        for i in range(du):
            for j in range(dv):
                arr[i, j, j, i] = 1.0
        return arr
    if gen.kind == SPIDER:
        legs = len(gen.dom) + len(gen.cod)
        w = wd(gen.dom[0] if gen.dom else gen.cod[0])
        arr = np.zeros((w,) * legs, dtype=complex)
        for i in range(w):
            arr[(i,) * legs] = 1.0
        return arr
    raise AssertionError(gen.kind)


def brute_force_evaluate(d: Diagram, model: Model) -> np.ndarray:
    """Sum over every joint wire-index assignment; exponential but exact."""
    thick = d.doubled or model.doubling == "thick"

    def wd(t):
        return model.dims[t.base] ** 2 if thick else model.dims[t.base]

    wires = list(d.wires)
    wire_dims = [wd(d.src_type(w[0], w[1])) for w in wires]
    arrays = [_oracle_generator_array(g, model, thick) for g in d.nodes]

    in_wire = {w[1]: k for k, w in enumerate(wires) if w[0] == IN}
    out_wire = {w[3]: k for k, w in enumerate(wires) if w[2] == OUT}
    bshape = tuple(wd(t) for t in d.dom) + tuple(wd(t) for t in d.cod)
    result = np.zeros(bshape, dtype=complex)
    for assignment in product(*[range(wd_) for wd_ in wire_dims]):
        value = 1.0 + 0.0j
        for n, gen in enumerate(d.nodes):
            idx = []
            for p in range(len(gen.dom)):
                (k,) = [k for k, w in enumerate(wires) if w[2:] == (n, p)]
                idx.append(assignment[k])
            for p in range(len(gen.cod)):
                (k,) = [k for k, w in enumerate(wires) if w[:2] == (n, p)]
                idx.append(assignment[k])
            value *= arrays[n][tuple(idx)]
            if value == 0:
                break
        if value == 0:
            continue
        pos = tuple(assignment[in_wire[p]] for p in range(len(d.dom))) + \
            tuple(assignment[out_wire[p]] for p in range(len(d.cod)))
        result[pos] += value
    return result


# -- brute-force pregroup reduction oracle -----------------------------------


def oracle_linksets(flat, target):
    """All non-crossing cancellations, by adjacent-pair rewriting."""
    target = tuple(target)
    results = set()
    seen = set()

    def go(items, links):
        key = (tuple(i for i, _ in items), links)
        if key in seen:
            return
        seen.add(key)
        if tuple(t for _, t in items) == target:
            results.add(links)
        for k in range(len(items) - 1):
            (i, a), (j, b) = items[k], items[k + 1]
            if a.base == b.base and b.z == a.z + 1:
                go(items[:k] + items[k + 2:], links | {(i, j)})

    go(tuple(enumerate(flat)), frozenset())
    return results
