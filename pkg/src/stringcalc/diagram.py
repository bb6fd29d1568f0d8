"""Typed string diagrams as immutable port-graphs.

A diagram is a set of generator nodes plus wires between ports.  A wire
endpoint is either a node port or a boundary port of the diagram itself,
so a bare identity wire is simply a boundary-to-boundary wire with no
node at all.  Sequential and parallel composition are pure functions
that glue or juxtapose port-graphs; associativity, unit laws and the
interchange law therefore hold on the nose (up to the canonical node
numbering used by structural equality) rather than as rewrite rules.

Wire encoding: a wire is a 4-tuple ``(sn, sp, dn, dp)``.  ``sn >= 0``
means output port ``sp`` of node ``sn``; ``sn == -1`` means boundary
input ``sp``.  ``dn >= 0`` means input port ``dp`` of node ``dn``;
``dn == -2`` means boundary output ``dp``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
import json

from .errors import InvalidDiagram, TypeMismatch, ZeroArity
from .types import TypeList, WireType, check_declared, parse_wiretype

__all__ = [
    "BOX", "CUP", "CAP", "SWAP", "SPIDER", "IDENTITY",
    "Generator", "Diagram", "Violation",
    "identity", "identity_node", "make_generator", "box",
    "bend", "cup", "cap", "swap", "spider", "permutation",
    "compose_seq", "compose_par",
    "validate", "diagram_to_json", "diagram_from_json",
]

BOX = "box"
CUP = "cup"
CAP = "cap"
SWAP = "swap"
SPIDER = "spider"
IDENTITY = "id"

IN = -1   # boundary-input pseudo node
OUT = -2  # boundary-output pseudo node

Wire = tuple[int, int, int, int]


@dataclass(frozen=True)
class Generator:
    """A single node: box, cup, cap, swap, spider or explicit identity."""

    kind: str
    dom: TypeList
    cod: TypeList
    name: str = ""
    payload: str | None = None

    def signature(self) -> tuple:
        return (
            self.kind,
            self.name,
            tuple(str(t) for t in self.dom),
            tuple(str(t) for t in self.cod),
            self.payload,
        )


@dataclass(frozen=True, eq=False)
class Diagram:
    """An acyclic port-graph with ordered open inputs and outputs."""

    dom: TypeList
    cod: TypeList
    nodes: tuple[Generator, ...]
    wires: tuple[Wire, ...]
    doubled: bool = False

    # -- composition ---------------------------------------------------

    def then(self, other: "Diagram") -> "Diagram":
        return compose_seq(self, other)

    def tensor(self, other: "Diagram") -> "Diagram":
        return compose_par(self, other)

    __rshift__ = then
    __matmul__ = tensor

    # -- wire lookup ---------------------------------------------------

    @cached_property
    def _src_map(self) -> dict[tuple[int, int], Wire]:
        return {(w[0], w[1]): w for w in self.wires}

    @cached_property
    def _dst_map(self) -> dict[tuple[int, int], Wire]:
        return {(w[2], w[3]): w for w in self.wires}

    def src_type(self, sn: int, sp: int) -> WireType:
        return self.dom[sp] if sn == IN else self.nodes[sn].cod[sp]

    def dst_type(self, dn: int, dp: int) -> WireType:
        return self.cod[dp] if dn == OUT else self.nodes[dn].dom[dp]

    # -- structural equality -------------------------------------------

    @cached_property
    def canonical_key(self) -> tuple:
        order = canonical_order(self)
        pos = {node: i for i, node in enumerate(order)}

        def remap(n: int) -> int:
            return n if n < 0 else pos[n]

        wires = tuple(sorted((remap(sn), sp, remap(dn), dp)
                             for sn, sp, dn, dp in self.wires))
        return (
            tuple(str(t) for t in self.dom),
            tuple(str(t) for t in self.cod),
            tuple(self.nodes[i].signature() for i in order),
            wires,
            self.doubled,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.canonical_key == other.canonical_key

    def __hash__(self) -> int:
        return hash(self.canonical_key)

    def canonical(self) -> "Diagram":
        """The same diagram with nodes renumbered in canonical order."""
        order = canonical_order(self)
        pos = {node: i for i, node in enumerate(order)}

        def remap(n: int) -> int:
            return n if n < 0 else pos[n]

        return Diagram(
            dom=self.dom,
            cod=self.cod,
            nodes=tuple(self.nodes[i] for i in order),
            wires=tuple(sorted((remap(sn), sp, remap(dn), dp)
                               for sn, sp, dn, dp in self.wires)),
            doubled=self.doubled,
        )

    def __repr__(self) -> str:
        return (f"Diagram(dom={[str(t) for t in self.dom]}, "
                f"cod={[str(t) for t in self.cod]}, nodes={len(self.nodes)})")


# -- constructors -------------------------------------------------------


def identity(types: TypeList) -> Diagram:
    """Node-less identity: each wire runs straight through."""
    types = tuple(types)
    return Diagram(types, types, (),
                   tuple((IN, k, OUT, k) for k in range(len(types))))


def identity_node(t: WireType) -> Diagram:
    """An explicit identity generator on one wire (removed by normalize)."""
    gen = Generator(IDENTITY, (t,), (t,))
    return Diagram((t,), (t,), (gen,), ((IN, 0, 0, 0), (0, 0, OUT, 0)))


def make_generator(name: str, dom: TypeList, cod: TypeList,
                   payload: str | None = None, table=None) -> Diagram:
    """A single-box diagram ``dom -> cod``.

    States have an empty ``dom``, effects an empty ``cod``.
    """
    if not name:
        raise ValueError("generator name must be nonempty")
    dom, cod = tuple(dom), tuple(cod)
    check_declared(dom + cod, table)
    gen = Generator(BOX, dom, cod, name=name, payload=payload)
    wires = tuple((IN, k, 0, k) for k in range(len(dom))) + \
        tuple((0, k, OUT, k) for k in range(len(cod)))
    return Diagram(dom, cod, (gen,), wires)


box = make_generator


def bend(base: str, z: int, direction: str, table=None) -> Diagram:
    """A cup state ``[] -> [b^(z+1), b^z]`` or cap effect ``[b^z, b^(z+1)] -> []``.

    The orientation is the one that makes the snake composed from one
    cup and one cap type-check on the wire ``b^z``.
    """
    check_declared((WireType(base),), table)
    lo, hi = WireType(base, z), WireType(base, z + 1)
    if direction == "cup":
        gen = Generator(CUP, (), (hi, lo))
        return Diagram((), (hi, lo), (gen,), ((0, 0, OUT, 0), (0, 1, OUT, 1)))
    if direction == "cap":
        gen = Generator(CAP, (lo, hi), ())
        return Diagram((lo, hi), (), (gen,), ((IN, 0, 0, 0), (IN, 1, 0, 1)))
    raise ValueError(f"direction must be 'cup' or 'cap', got {direction!r}")


def cup(base: str, z: int = 0, table=None) -> Diagram:
    return bend(base, z, "cup", table)


def cap(base: str, z: int = 0, table=None) -> Diagram:
    return bend(base, z, "cap", table)


def swap(u: WireType, v: WireType) -> Diagram:
    gen = Generator(SWAP, (u, v), (v, u))
    return Diagram((u, v), (v, u), (gen,),
                   ((IN, 0, 0, 0), (IN, 1, 0, 1), (0, 0, OUT, 0), (0, 1, OUT, 1)))


def spider(base: str, n_in: int, m_out: int, table=None) -> Diagram:
    """A Frobenius spider with ``n_in + m_out`` legs of type ``base^0``."""
    check_declared((WireType(base),), table)
    if n_in + m_out < 1:
        raise ZeroArity("a spider needs at least one leg")
    t = WireType(base)
    gen = Generator(SPIDER, (t,) * n_in, (t,) * m_out)
    wires = tuple((IN, k, 0, k) for k in range(n_in)) + \
        tuple((0, k, OUT, k) for k in range(m_out))
    return Diagram((t,) * n_in, (t,) * m_out, (gen,), wires)


def permutation(types: TypeList, perm: list[int]) -> Diagram:
    """A diagram of swaps sending input ``i`` to output ``perm[i]``.

    Built from adjacent transpositions, bubble-sort style.
    """
    types = tuple(types)
    if sorted(perm) != list(range(len(types))):
        raise ValueError(f"not a permutation: {perm!r}")
    current = list(range(len(types)))  # current[j] = original index at slot j
    d = identity(types)
    changed = True
    while changed:
        changed = False
        for j in range(len(current) - 1):
            a, b = current[j], current[j + 1]
            if perm[a] > perm[b]:
                layer_types = tuple(types[i] for i in current)
                layer = identity(layer_types[:j]) @ \
                    swap(layer_types[j], layer_types[j + 1]) @ \
                    identity(layer_types[j + 2:])
                d = d >> layer
                current[j], current[j + 1] = b, a
                changed = True
    return d


# -- composition ---------------------------------------------------------


def compose_seq(f: Diagram, g: Diagram) -> Diagram:
    """Glue ``f``'s outputs to ``g``'s inputs."""
    if f.doubled != g.doubled:
        raise TypeMismatch("cannot compose a doubled with a plain diagram")
    if f.cod != g.dom:
        for k, (a, b) in enumerate(zip(f.cod, g.dom)):
            if a != b:
                raise TypeMismatch(
                    f"port {k}: {a} (output of first) != {b} (input of second)")
        raise TypeMismatch(
            f"arity mismatch: {len(f.cod)} outputs vs {len(g.dom)} inputs")
    shift = len(f.nodes)

    def shift_g(n: int) -> int:
        return n if n < 0 else n + shift

    wires: list[Wire] = []
    # f wires not ending on the boundary output survive unchanged
    glue_src: dict[int, tuple[int, int]] = {}
    for sn, sp, dn, dp in f.wires:
        if dn == OUT:
            glue_src[dp] = (sn, sp)
        else:
            wires.append((sn, sp, dn, dp))
    for sn, sp, dn, dp in g.wires:
        if sn == IN:
            xsn, xsp = glue_src[sp]
            wires.append((xsn, xsp, shift_g(dn), dp))
        else:
            wires.append((sn + shift, sp, shift_g(dn), dp))
    return Diagram(f.dom, g.cod, f.nodes + g.nodes, tuple(sorted(wires)),
                   doubled=f.doubled)


def compose_par(f: Diagram, g: Diagram) -> Diagram:
    """Juxtapose two diagrams; open port lists concatenate."""
    if f.doubled != g.doubled:
        raise TypeMismatch("cannot juxtapose a doubled with a plain diagram")
    shift = len(f.nodes)
    din, dout = len(f.dom), len(f.cod)

    def remap(n: int, p: int, is_src: bool) -> tuple[int, int]:
        if n == IN:
            return n, p + din
        if n == OUT:
            return n, p + dout
        return n + shift, p

    wires = list(f.wires)
    for sn, sp, dn, dp in g.wires:
        (sn, sp) = remap(sn, sp, True)
        (dn, dp) = remap(dn, dp, False)
        wires.append((sn, sp, dn, dp))
    return Diagram(f.dom + g.dom, f.cod + g.cod, f.nodes + g.nodes,
                   tuple(sorted(wires)), doubled=f.doubled)


# -- validation ----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def validate(d: Diagram) -> list[Violation]:
    """Check the port-graph invariants; an empty list means well-formed."""
    found: list[Violation] = []
    src_seen: dict[tuple[int, int], int] = {}
    dst_seen: dict[tuple[int, int], int] = {}
    for w in d.wires:
        sn, sp, dn, dp = w
        src_seen[(sn, sp)] = src_seen.get((sn, sp), 0) + 1
        dst_seen[(dn, dp)] = dst_seen.get((dn, dp), 0) + 1
        if sn != IN and not (0 <= sn < len(d.nodes) and 0 <= sp < len(d.nodes[sn].cod)):
            found.append(Violation("BadEndpoint", f"wire {w} has no source port"))
            continue
        if dn != OUT and not (0 <= dn < len(d.nodes) and 0 <= dp < len(d.nodes[dn].dom)):
            found.append(Violation("BadEndpoint", f"wire {w} has no target port"))
            continue
        if sn == IN and not sp < len(d.dom):
            found.append(Violation("BadEndpoint", f"wire {w} exceeds input boundary"))
            continue
        if dn == OUT and not dp < len(d.cod):
            found.append(Violation("BadEndpoint", f"wire {w} exceeds output boundary"))
            continue
        a, b = d.src_type(sn, sp), d.dst_type(dn, dp)
        if a != b:
            found.append(Violation("TypeMismatch", f"wire {w} joins {a} to {b}"))
    for (ep, count) in list(src_seen.items()) + list(dst_seen.items()):
        if count > 1:
            found.append(Violation("PortReuse", f"port {ep} used {count} times"))
    for k in range(len(d.dom)):
        if (IN, k) not in src_seen:
            found.append(Violation("OpenPortUnused", f"boundary input {k} unused"))
    for k in range(len(d.cod)):
        if (OUT, k) not in dst_seen:
            found.append(Violation("OpenPortUnused", f"boundary output {k} unused"))
    for i, gen in enumerate(d.nodes):
        for p in range(len(gen.dom)):
            if (i, p) not in dst_seen:
                found.append(Violation("PortUnused", f"input port ({i}, {p}) unused"))
        for p in range(len(gen.cod)):
            if (i, p) not in src_seen:
                found.append(Violation("PortUnused", f"output port ({i}, {p}) unused"))
    if _has_cycle(d):
        found.append(Violation("Cycle", "port-graph has a directed cycle"))
    return found


def _has_cycle(d: Diagram) -> bool:
    succ: dict[int, set[int]] = {i: set() for i in range(len(d.nodes))}
    indeg = {i: 0 for i in range(len(d.nodes))}
    for sn, _, dn, _ in d.wires:
        if sn >= 0 and dn >= 0 and dn not in succ[sn]:
            succ[sn].add(dn)
            indeg[dn] += 1
    queue = deque(i for i, k in indeg.items() if k == 0)
    seen = 0
    while queue:
        i = queue.popleft()
        seen += 1
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    return seen != len(d.nodes)


# -- canonical ordering --------------------------------------------------


def canonical_order(d: Diagram) -> list[int]:
    """A node order that depends only on diagram structure.

    Nodes reachable from the boundary are numbered by a breadth-first
    traversal anchored at the ordered open ports; disconnected (scalar)
    components are ordered by their minimal encoding over all choices of
    traversal root.
    """
    seen: set[int] = set()
    order: list[int] = []
    queue: deque[int] = deque()

    def discover(n: int) -> None:
        if n >= 0 and n not in seen:
            seen.add(n)
            order.append(n)
            queue.append(n)

    for k in range(len(d.dom)):
        discover(d._src_map[(IN, k)][2])
    for k in range(len(d.cod)):
        discover(d._dst_map[(OUT, k)][0])
    _expand(d, queue, discover)

    rest = [i for i in range(len(d.nodes)) if i not in seen]
    if rest:
        bests = [min(_component_order(d, root, comp) for root in comp)
                 for comp in _components(d, rest)]
        for _, comp_order in sorted(bests):
            order.extend(comp_order)
    return order


def _expand(d: Diagram, queue: deque, discover) -> None:
    while queue:
        i = queue.popleft()
        gen = d.nodes[i]
        for p in range(len(gen.dom)):
            discover(d._dst_map[(i, p)][0])
        for p in range(len(gen.cod)):
            discover(d._src_map[(i, p)][2])


def _components(d: Diagram, rest: list[int]) -> list[list[int]]:
    rest_set = set(rest)
    neighbours: dict[int, set[int]] = {i: set() for i in rest}
    for sn, _, dn, _ in d.wires:
        if sn in rest_set and dn in rest_set:
            neighbours[sn].add(dn)
            neighbours[dn].add(sn)
    comps = []
    todo = set(rest)
    while todo:
        root = min(todo)
        comp = []
        stack = [root]
        todo.discard(root)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in neighbours[i]:
                if j in todo:
                    todo.discard(j)
                    stack.append(j)
        comps.append(comp)
    return comps


def _component_order(d: Diagram, root: int, comp: list[int]) -> tuple[tuple, list[int]]:
    comp_set = set(comp)
    seen: set[int] = set()
    order: list[int] = []
    queue: deque[int] = deque()

    def discover(n: int) -> None:
        if n in comp_set and n not in seen:
            seen.add(n)
            order.append(n)
            queue.append(n)

    discover(root)
    _expand(d, queue, discover)
    pos = {n: i for i, n in enumerate(order)}
    wires = tuple(sorted((pos[sn], sp, pos[dn], dp)
                         for sn, sp, dn, dp in d.wires
                         if sn in comp_set and dn in comp_set))
    key = (tuple(d.nodes[i].signature() for i in order), wires)
    return (key, order)


# -- JSON serialization ---------------------------------------------------


def diagram_to_json(d: Diagram) -> dict:
    """Serialize as a plain dict; `json.dumps` of this round-trips."""
    bases = sorted({t.base for g in d.nodes for t in g.dom + g.cod}
                   | {t.base for t in d.dom + d.cod})
    nodes = []
    for i, g in enumerate(d.nodes):
        entry = {
            "id": i,
            "kind": g.kind,
            "name": g.name,
            "dom": [str(t) for t in g.dom],
            "cod": [str(t) for t in g.cod],
        }
        if g.payload is not None:
            entry["payload"] = g.payload
        if g.kind == SPIDER:
            entry["spider"] = [len(g.dom), len(g.cod)]
        nodes.append(entry)
    return {
        "types": {b: True for b in bases},
        "nodes": nodes,
        "edges": [list(w) for w in d.wires],
        "inputs": [str(t) for t in d.dom],
        "outputs": [str(t) for t in d.cod],
        "doubled": d.doubled,
    }


def diagram_from_json(data: dict) -> Diagram:
    """Inverse of :func:`diagram_to_json`; validates the result."""
    nodes = []
    for entry in sorted(data.get("nodes", []), key=lambda e: e["id"]):
        nodes.append(Generator(
            kind=entry["kind"],
            dom=tuple(parse_wiretype(t) for t in entry["dom"]),
            cod=tuple(parse_wiretype(t) for t in entry["cod"]),
            name=entry.get("name", ""),
            payload=entry.get("payload"),
        ))
    d = Diagram(
        dom=tuple(parse_wiretype(t) for t in data.get("inputs", [])),
        cod=tuple(parse_wiretype(t) for t in data.get("outputs", [])),
        nodes=tuple(nodes),
        wires=tuple(sorted(tuple(w) for w in data.get("edges", []))),
        doubled=bool(data.get("doubled", False)),
    )
    table = set(data.get("types", {}))
    if table:
        for g in d.nodes:
            check_declared(g.dom + g.cod, table)
        check_declared(d.dom + d.cod, table)
    problems = validate(d)
    if problems:
        raise InvalidDiagram("; ".join(str(v) for v in problems))
    return d


def dumps(d: Diagram) -> str:
    return json.dumps(diagram_to_json(d), indent=2, sort_keys=True)


def loads(text: str) -> Diagram:
    return diagram_from_json(json.loads(text))
