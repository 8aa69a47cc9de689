"""Edge-flip errors: injection, semantic classification, ZX distance and
detector error matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gf2
from .diagram import X, Z, ZXDiagram, DiagramError
from .interpret import LinearMap, equal_up_to_scalar, interpret
from .webs import PauliWeb, classify, web_basis

_FLIP_KINDS = ("X", "Z", "Y")  # Y = X and Z on the same edge


@dataclass(frozen=True)
class EdgeFlip:
    edge: int
    kind: str  # X or Z

    def __post_init__(self):
        if self.kind not in ("X", "Z"):
            raise ValueError(f"flip kind must be X or Z, got {self.kind!r}")


@dataclass(frozen=True)
class ErrorSet:
    flips: frozenset[EdgeFlip]

    @classmethod
    def of(cls, *flips: tuple[int, str]) -> "ErrorSet":
        out: set[EdgeFlip] = set()
        for edge, kind in flips:
            if kind == "Y":
                out.add(EdgeFlip(edge, "X"))
                out.add(EdgeFlip(edge, "Z"))
            else:
                out.add(EdgeFlip(edge, kind))
        return cls(frozenset(out))

    def weight(self) -> int:
        """Edges touched; an X and Z flip on one edge is a single Y location."""
        return len({f.edge for f in self.flips})

    def by_edge(self) -> dict[int, str]:
        kinds: dict[int, set[str]] = {}
        for f in self.flips:
            kinds.setdefault(f.edge, set()).add(f.kind)
        return {e: ("Y" if len(k) == 2 else next(iter(k))) for e, k in kinds.items()}

    def to_text(self, d: ZXDiagram) -> str:
        lines = []
        for eid, kind in sorted(self.by_edge().items()):
            u, v = d.edges[eid]
            lines.append(f"flip {u} {v} {kind}")
        return "\n".join(lines) + ("\n" if lines else "")


def apply_error(d: ZXDiagram, e: ErrorSet) -> ZXDiagram:
    """Insert a pi spider per flip: X flips insert X-pi, Z flips insert Z-pi;
    on a doubly flipped edge the X spider sits first, which only changes the
    scalar."""
    out = d.copy()
    for eid, kind in sorted(e.by_edge().items()):
        if eid not in out.edges:
            raise DiagramError(f"unknown edge {eid}")
        if kind in ("X", "Y"):
            _, eid, _ = out.split_edge(eid, X, 2)
        if kind in ("Z", "Y"):
            out.split_edge(eid, Z, 2)
    return out


def classify_error(d: ZXDiagram, e: ErrorSet, tol: float = 1e-9, *,
                   base: LinearMap | None = None, **budget) -> str:
    """'trivial' | 'detectable' | 'live' by dense interpretation."""
    if base is None:
        base = interpret(d, **budget)
    faulty = interpret(apply_error(d, e), **budget)
    if faulty.is_zero():
        return "detectable"
    if not base.is_zero() and equal_up_to_scalar(faulty, base, tol):
        return "trivial"
    return "live"


def enumerate_errors(edge_ids: list[int], weight: int):
    """All errors of exactly `weight` touched edges, in lexicographic order
    over edge subsets, then flip kinds (X < Z < Y per edge)."""
    for subset in itertools.combinations(sorted(edge_ids), weight):
        for kinds in itertools.product(_FLIP_KINDS, repeat=weight):
            yield ErrorSet.of(*zip(subset, kinds))


def zx_distance(d: ZXDiagram, w_max: int, *, edges: list[int] | None = None,
                tol: float = 1e-9, **budget) -> tuple[int | None, ErrorSet | None]:
    """Least weight of a live (non-trivial, undetectable) error, up to w_max.

    Errors are enumerated over `edges` (all edges by default) by increasing
    weight; returns (weight, witness) or (None, None) when every error up to
    w_max is trivial or detectable.
    """
    pool = sorted(d.edges) if edges is None else sorted(edges)
    base = interpret(d, **budget)
    for w in range(1, w_max + 1):
        for err in enumerate_errors(pool, w):
            if classify_error(d, err, tol, base=base, **budget) == "live":
                return w, err
    return None, None


def distance_report(d: ZXDiagram, w_max: int, **kw) -> str:
    w, witness = zx_distance(d, w_max, **kw)
    if w is None:
        return f"distance >{w_max}\n"
    return f"distance {w}\n" + witness.to_text(d)


@dataclass
class DetectorErrorMatrix:
    """One row per detecting region over 2n internal-edge flip bits.

    Columns [0, n) are X flips and [n, 2n) are Z flips on the diagram's
    internal edges in sorted order; a Z-highlighted (green) edge detects X
    flips and an X-highlighted edge detects Z flips.
    """

    matrix: np.ndarray
    edge_order: list[int]

    def error_vector(self, e: ErrorSet) -> np.ndarray:
        n = len(self.edge_order)
        pos = {eid: i for i, eid in enumerate(self.edge_order)}
        v = np.zeros(2 * n, dtype=np.uint8)
        for f in e.flips:
            if f.edge not in pos:
                continue  # boundary flips carry no syndrome bits
            v[pos[f.edge] + (0 if f.kind == "X" else n)] = 1
        return v

    def syndrome(self, e: ErrorSet) -> np.ndarray:
        if self.matrix.size == 0:
            return np.zeros(self.matrix.shape[0], dtype=np.uint8)
        return (self.matrix @ self.error_vector(e)) & 1

    def nullspace_dimension(self) -> int:
        return 2 * len(self.edge_order) - gf2.rank(self.matrix)


def detector_matrix(d: ZXDiagram, regions: list[PauliWeb]) -> DetectorErrorMatrix:
    basis = web_basis(d)
    for w in regions:
        if classify(d, w, basis).tag != "detecting":
            raise DiagramError("non-detecting region supplied")
    edge_order = d.internal_edges()
    n = len(edge_order)
    pos = {eid: i for i, eid in enumerate(edge_order)}
    mat = np.zeros((len(regions), 2 * n), dtype=np.uint8)
    for i, w in enumerate(regions):
        for eid, colour in w.highlights.items():
            if eid not in pos:
                raise DiagramError("detecting region touches a boundary edge")
            if colour in ("Z", "Y"):
                mat[i, pos[eid]] = 1  # green highlight detects X flips
            if colour in ("X", "Y"):
                mat[i, n + pos[eid]] = 1  # red highlight detects Z flips
    return DetectorErrorMatrix(mat, edge_order)


def detecting_regions(d: ZXDiagram) -> list[PauliWeb]:
    """Independent detecting regions: basis of the no-boundary-edge subspace."""
    from .webs import WebSystem, web_system, _boundary_split  # local import

    sys = web_system(d)
    basis = web_basis(d)
    if not basis:
        return []
    in_edges, out_edges = _boundary_split(d)
    nedges = len(sys.edge_order)
    epos = {e: i for i, e in enumerate(sys.edge_order)}
    cols = []
    for e in sorted(in_edges | out_edges):
        cols.extend([epos[e], nedges + epos[e]])
    bm = np.array([sys.vector_of(w) for w in basis], dtype=np.uint8)
    if cols:
        combos = gf2.nullspace(bm[:, cols].T)
        if combos.size == 0:
            return []
        vecs = gf2.row_basis((combos @ bm) & 1)
    else:
        vecs = gf2.row_basis(bm)
    return [sys.web_of(v) for v in vecs if np.any(v)]
