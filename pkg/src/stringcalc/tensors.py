"""Tensor semantics: diagrams evaluated as dense complex contractions.

A model assigns a dimension to every base symbol and a payload array to
every box reference.  Cups and caps evaluate to identity matrices,
swaps to index transpositions and spiders to the generalized Kronecker
delta (one iff all legs carry the same index).  Contraction order is
chosen greedily by smallest intermediate tensor; the result does not
depend on the order.

Thick-wire (density-matrix) semantics pairs every wire with a conjugate
copy: wire dimensions square, pure payloads become ``T (x) conj(T)``
with the paired axes interleaved, and structural generators double
componentwise (which leaves them deltas, now over the squared index).
Payloads flagged ``mixed`` already live on thick wires and are used
unchanged.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .diagram import (BOX, CAP, CUP, IDENTITY, IN, OUT, SPIDER, SWAP,
                      Diagram, validate)
from .errors import (DimensionMismatch, InvalidDiagram, MissingPayload,
                     NotHermitian, NotSquare, ShapeMismatch, ZeroNorm)

__all__ = [
    "Tensor", "Payload", "Model",
    "evaluate", "double", "entropy", "similarity",
    "tensor_to_json", "tensor_from_json", "random_payloads",
]


@dataclass(frozen=True)
class Tensor:
    """A dense complex multi-array with an explicit scalar factor."""

    shape: tuple[int, ...]
    data: np.ndarray
    scalar: complex = 1.0 + 0.0j

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=complex).reshape(self.shape)
        object.__setattr__(self, "data", arr)
        if self.scalar != self.scalar:  # NaN guard
            raise ValueError("scalar must not be NaN")

    @classmethod
    def from_array(cls, array, scalar: complex = 1.0 + 0.0j) -> "Tensor":
        arr = np.asarray(array, dtype=complex)
        return cls(arr.shape, arr, scalar)

    def to_array(self) -> np.ndarray:
        return self.scalar * self.data

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_array()))

    def allclose(self, other: "Tensor", tolerance: float = 1e-9,
                 up_to_scalar: bool = False) -> bool:
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")
        a, b = self.to_array(), other.to_array()
        if up_to_scalar:
            na, nb = np.linalg.norm(a), np.linalg.norm(b)
            if na < tolerance or nb < tolerance:
                return na < tolerance and nb < tolerance
            # align the global phase via the largest entry of a
            idx = np.unravel_index(np.argmax(np.abs(a)), a.shape) if a.shape else ()
            phase = (b[idx] / a[idx]) if abs(a[idx]) > 0 else 1.0
            return np.allclose(a * phase, b, atol=tolerance * max(nb, 1.0))
        scale = max(np.linalg.norm(a), np.linalg.norm(b), 1.0)
        return bool(np.linalg.norm(a - b) <= tolerance * scale)


@dataclass(frozen=True)
class Payload:
    """A named tensor for a box, tagged pure or mixed."""

    tensor: Tensor
    kind: str = "pure"  # "pure" | "mixed"


@dataclass(frozen=True)
class Model:
    """Dimension table plus payload store; `doubling` selects semantics."""

    dims: dict[str, int]
    payloads: dict[str, Payload] = field(default_factory=dict)
    doubling: str = "thin"  # "thin" | "thick"


def double(d: Diagram) -> Diagram:
    """Mark a diagram for thick-wire (density-matrix) evaluation."""
    problems = validate(d)
    if problems:
        raise InvalidDiagram("; ".join(str(v) for v in problems))
    return replace(d, doubled=True)


def double_array(a: np.ndarray) -> np.ndarray:
    """``T -> T (x) conj(T)`` with paired axes interleaved and merged."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return a * np.conj(a)
    b = np.multiply.outer(a, a.conj())
    k = a.ndim
    perm = [x for i in range(k) for x in (i, k + i)]
    return b.transpose(perm).reshape([s * s for s in a.shape])


def evaluate(d: Diagram, model: Model) -> Tensor:
    """Contract a diagram to a tensor over its open ports (inputs first)."""
    problems = validate(d)
    if problems:
        raise InvalidDiagram("; ".join(str(v) for v in problems))
    thick = d.doubled or model.doubling == "thick"

    def wdim(base: str) -> int:
        try:
            dim = model.dims[base]
        except KeyError:
            raise DimensionMismatch(f"base {base!r} has no dimension") from None
        return dim * dim if thick else dim

    # one integer label per wire; boundary ports keep their labels open
    label_dim: dict[int, int] = {}
    node_labels: dict[tuple[int, int, str], int] = {}
    in_labels: list[tuple[int, int]] = []
    out_labels: list[tuple[int, int]] = []
    parts: list[tuple[list[int], np.ndarray]] = []
    next_label = len(d.wires)
    for lbl, (sn, sp, dn, dp) in enumerate(d.wires):
        wd = wdim(d.src_type(sn, sp).base)
        label_dim[lbl] = wd
        if sn == IN and dn == OUT:
            # a bare through-wire is an identity tensor with two open legs
            other = next_label
            next_label += 1
            label_dim[other] = wd
            in_labels.append((sp, lbl))
            out_labels.append((dp, other))
            parts.append(([lbl, other], np.eye(wd, dtype=complex)))
            continue
        if sn == IN:
            in_labels.append((sp, lbl))
        else:
            node_labels[(sn, sp, "out")] = lbl
        if dn == OUT:
            out_labels.append((dp, lbl))
        else:
            node_labels[(dn, dp, "in")] = lbl
    boundary = [lbl for _, lbl in sorted(in_labels)] + \
               [lbl for _, lbl in sorted(out_labels)]

    scalar = 1.0 + 0.0j
    for i, gen in enumerate(d.nodes):
        arr, s = _generator_array(gen, model, thick)
        scalar *= s
        labels = [node_labels[(i, p, "in")] for p in range(len(gen.dom))] + \
                 [node_labels[(i, p, "out")] for p in range(len(gen.cod))]
        if arr.shape != tuple(label_dim[l] for l in labels):
            raise DimensionMismatch(
                f"payload for node {i} ({gen.name or gen.kind}) has shape "
                f"{arr.shape}, expected {tuple(label_dim[l] for l in labels)}")
        parts.append(_self_trace(labels, arr))

    result_labels, result = _contract_greedy(parts, set(boundary))
    perm = [result_labels.index(l) for l in boundary]
    result = result.transpose(perm) if perm else result.reshape(())
    return Tensor(result.shape, result, scalar)


def _generator_array(gen, model: Model, thick: bool) -> tuple[np.ndarray, complex]:
    if gen.kind == BOX:
        ref = gen.payload or "box:" + repr(gen.signature())
        if ref not in model.payloads:
            raise MissingPayload(
                f"box {gen.name!r} has no payload ({gen.payload!r})")
        payload = model.payloads[ref]
        arr, s = payload.tensor.data, payload.tensor.scalar
        if thick and payload.kind == "pure":
            return double_array(arr), s * np.conj(s)
        if not thick and payload.kind == "mixed":
            raise DimensionMismatch(
                f"mixed payload {gen.payload!r} needs thick-wire semantics")
        return arr, s
    dim = model.dims[gen.dom[0].base] if gen.dom else model.dims[gen.cod[0].base]
    wd = dim * dim if thick else dim
    if gen.kind in (CUP, CAP, IDENTITY):
        return np.eye(wd, dtype=complex), 1.0 + 0.0j
    if gen.kind == SWAP:
        du = model.dims[gen.dom[0].base]
        dv = model.dims[gen.dom[1].base]
        if thick:
            du, dv = du * du, dv * dv
        arr = np.einsum("il,jk->ijkl",
                        np.eye(du, dtype=complex), np.eye(dv, dtype=complex))
        return arr, 1.0 + 0.0j
    if gen.kind == SPIDER:
        legs = len(gen.dom) + len(gen.cod)
        arr = np.zeros((wd,) * legs, dtype=complex)
        for i in range(wd):
            arr[(i,) * legs] = 1.0
        return arr, 1.0 + 0.0j
    raise ValueError(f"unknown generator kind {gen.kind!r}")


def _self_trace(labels: list[int], arr: np.ndarray) -> tuple[list[int], np.ndarray]:
    """Trace out any label appearing twice on the same tensor."""
    while True:
        dup = None
        for k, l in enumerate(labels):
            if l in labels[k + 1:]:
                dup = (k, k + 1 + labels[k + 1:].index(l))
                break
        if dup is None:
            return labels, arr
        a, b = dup
        arr = np.trace(arr, axis1=a, axis2=b)
        labels = [l for k, l in enumerate(labels) if k not in (a, b)]


def _contract_greedy(parts, keep: set[int]) -> tuple[list[int], np.ndarray]:
    if not parts:
        return [], np.array(1.0 + 0.0j)
    parts = list(parts)
    while len(parts) > 1:
        best = None
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                shared = set(parts[i][0]) & set(parts[j][0])
                if not shared:
                    continue
                out_size = 1
                for k, l in enumerate(parts[i][0]):
                    if l not in shared:
                        out_size *= parts[i][1].shape[k]
                for k, l in enumerate(parts[j][0]):
                    if l not in shared:
                        out_size *= parts[j][1].shape[k]
                if best is None or out_size < best[0]:
                    best = (out_size, i, j)
        if best is None:
            # disconnected: outer-product the two smallest parts
            parts.sort(key=lambda p: p[1].size)
            (la, a), (lb, b) = parts[0], parts[1]
            merged = np.multiply.outer(a, b).reshape(a.shape + b.shape)
            parts = [(la + lb, merged)] + parts[2:]
            continue
        _, i, j = best
        la, a = parts[i]
        lb, b = parts[j]
        shared = [l for l in la if l in lb]
        ax_a = [la.index(l) for l in shared]
        ax_b = [lb.index(l) for l in shared]
        merged = np.tensordot(a, b, axes=(ax_a, ax_b))
        labels = [l for l in la if l not in shared] + \
                 [l for l in lb if l not in shared]
        parts = [p for k, p in enumerate(parts) if k not in (i, j)]
        parts.append(_self_trace(labels, merged))
    labels, arr = parts[0]
    # trace never leaves duplicates; any non-kept label left would be a bug
    assert all(l in keep for l in labels), "internal label escaped contraction"
    return labels, arr


# -- derived quantities ----------------------------------------------------


def as_density_matrix(t: Tensor) -> np.ndarray:
    """Reshape a tensor to the square matrix it represents.

    Rank-2 square tensors are used directly.  Otherwise every axis must
    be a perfect square (a thick wire): each axis splits into its ket
    and bra half and the halves are grouped.
    """
    arr = t.to_array()
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        return arr
    halves = []
    for s in arr.shape:
        root = math.isqrt(s)
        if root * root != s:
            raise NotSquare(f"axis of size {s} is not a squared wire")
        halves.append(root)
    if not halves:
        raise NotSquare("scalar tensor has no matrix form")
    split = arr.reshape([x for h in halves for x in (h, h)])
    k = len(halves)
    perm = [2 * i for i in range(k)] + [2 * i + 1 for i in range(k)]
    side = int(np.prod(halves))
    return split.transpose(perm).reshape(side, side)


def entropy(t: Tensor, hermitian_tol: float = 1e-9,
            eigenvalue_floor: float = 1e-12) -> float:
    """Von Neumann entropy (base 2) of a tensor read as a density matrix.

    The matrix is normalized to unit trace; eigenvalues below the floor
    are treated as exact zeros.
    """
    rho = as_density_matrix(t)
    scale = max(np.linalg.norm(rho), 1.0)
    if np.linalg.norm(rho - rho.conj().T) > hermitian_tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    trace = np.trace(rho).real
    if trace <= 0:
        raise ValueError("density matrix must have positive trace")
    eigs = np.linalg.eigvalsh(rho) / trace
    eigs = eigs[eigs > eigenvalue_floor]
    return float(-np.sum(eigs * np.log2(eigs)))


def similarity(t1: Tensor, t2: Tensor, kind: str = "cosine") -> float:
    """Compare two tensors of equal shape.

    ``cosine`` is ``|<t1, t2>| / (||t1|| ||t2||)``; ``normalized-overlap``
    reads both as density matrices and returns
    ``Tr(rho1 rho2) / (Tr rho1 * Tr rho2)``.
    """
    if t1.shape != t2.shape:
        raise ShapeMismatch(f"{t1.shape} vs {t2.shape}")
    if kind == "cosine":
        a, b = t1.to_array().ravel(), t2.to_array().ravel()
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        if na == 0 or nb == 0:
            raise ZeroNorm("cosine similarity of a zero tensor")
        return float(abs(np.vdot(a, b)) / (na * nb))
    if kind == "normalized-overlap":
        r1, r2 = as_density_matrix(t1), as_density_matrix(t2)
        tr1, tr2 = np.trace(r1).real, np.trace(r2).real
        if tr1 == 0 or tr2 == 0:
            raise ZeroNorm("overlap of a traceless tensor")
        return float(np.trace(r1 @ r2).real / (tr1 * tr2))
    raise ValueError(f"unknown similarity kind {kind!r}")


# -- serialization ---------------------------------------------------------


def tensor_to_json(t: Tensor) -> dict:
    flat = t.data.ravel()
    return {
        "shape": list(t.shape),
        "data": [[float(x.real), float(x.imag)] for x in flat],
        "scalar": [float(t.scalar.real), float(t.scalar.imag)],
    }


def tensor_from_json(data: dict) -> Tensor:
    shape = tuple(int(s) for s in data["shape"])
    flat = np.array([complex(re, im) for re, im in data["data"]], dtype=complex)
    sc = data.get("scalar", [1.0, 0.0])
    return Tensor(shape, flat.reshape(shape), complex(sc[0], sc[1]))


# -- payload helpers -------------------------------------------------------


def random_payloads(model: Model, diagrams, seed: int = 0) -> Model:
    """Fill in missing box payloads with seeded random complex arrays.

    The same reference (or, failing that, the same box signature) gets
    the same array, so shared boxes across diagrams stay equal.
    """
    payloads = dict(model.payloads)
    for d in diagrams:
        for gen in d.nodes:
            if gen.kind != BOX:
                continue
            ref = gen.payload or "box:" + repr(gen.signature())
            if ref in payloads:
                continue
            shape = tuple(model.dims[t.base] for t in gen.dom + gen.cod)
            digest = hashlib.sha256(
                repr((seed, gen.name, shape)).encode()).digest()
            rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
            arr = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            payloads[ref] = Payload(Tensor.from_array(arr))
    return replace(model, payloads=payloads)
