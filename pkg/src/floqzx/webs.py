"""Pauli webs: edge highlightings satisfying the per-spider parity rules.

A web assigns Z (green), X (red) or Y (both) to a subset of edges.  The rules
are linear over F2 in two bits per edge, so the set of webs of a diagram is
the nullspace of a constraint matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .diagram import B, H, X, Z, ZXDiagram, DiagramError

_COLOURS = ("Z", "X", "Y")
_BITS = {"Z": (1, 0), "X": (0, 1), "Y": (1, 1)}
_FROM_BITS = {(1, 0): "Z", (0, 1): "X", (1, 1): "Y"}


@dataclass(frozen=True)
class PauliWeb:
    """Mapping from edge id to highlight colour."""

    highlights: dict[int, str]

    def __post_init__(self):
        for e, c in self.highlights.items():
            if c not in _COLOURS:
                raise ValueError(f"bad colour {c!r} on edge {e}")

    def colour(self, eid: int) -> str | None:
        return self.highlights.get(eid)

    def edges(self) -> list[int]:
        return sorted(self.highlights)

    def product(self, other: "PauliWeb") -> "PauliWeb":
        """Symmetric-difference product (Z and X bits xor independently)."""
        out: dict[int, str] = {}
        for e in set(self.highlights) | set(other.highlights):
            z1, x1 = _BITS.get(self.highlights.get(e), (0, 0))
            z2, x2 = _BITS.get(other.highlights.get(e), (0, 0))
            bits = (z1 ^ z2, x1 ^ x2)
            if bits != (0, 0):
                out[e] = _FROM_BITS[bits]
        return PauliWeb(out)

    def is_empty(self) -> bool:
        return not self.highlights

    def to_text(self, d: ZXDiagram) -> str:
        lines = []
        for eid in self.edges():
            u, v = d.edges[eid]
            lines.append(f"hl {u} {v} {self.highlights[eid]}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, d: ZXDiagram, text: str) -> "PauliWeb":
        hl: dict[int, str] = {}
        used: set[int] = set()
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            _, su, sv, col = line.split()
            u, v = int(su), int(sv)
            cands = [e for e, uv in sorted(d.edges.items())
                     if set(uv) == {u, v} and e not in used]
            if not cands:
                raise DiagramError(f"no unused edge between {u} and {v}")
            used.add(cands[0])
            hl[cands[0]] = col
        return cls(hl)


@dataclass(frozen=True)
class WebClass:
    tag: str  # detecting | stabilising | co-stabilising | logical | mixed-trivial


@dataclass
class WebSystem:
    """F2 constraint system; columns are [z-bit per edge] + [x-bit per edge]."""

    matrix: np.ndarray
    edge_order: list[int]

    def columns(self) -> int:
        return 2 * len(self.edge_order)

    def vector_of(self, w: PauliWeb) -> np.ndarray:
        n = len(self.edge_order)
        pos = {e: i for i, e in enumerate(self.edge_order)}
        v = np.zeros(2 * n, dtype=np.uint8)
        for e, c in w.highlights.items():
            if e not in pos:
                raise DiagramError(f"web references unknown edge {e}")
            zb, xb = _BITS[c]
            v[pos[e]] = zb
            v[n + pos[e]] = xb
        return v

    def web_of(self, vec: np.ndarray) -> PauliWeb:
        n = len(self.edge_order)
        hl = {}
        for i, e in enumerate(self.edge_order):
            bits = (int(vec[i]) & 1, int(vec[n + i]) & 1)
            if bits != (0, 0):
                hl[e] = _FROM_BITS[bits]
        return PauliWeb(hl)

    def satisfies(self, w: PauliWeb) -> bool:
        if self.matrix.size == 0:
            return True
        return not np.any((self.matrix @ self.vector_of(w)) & 1)


def web_system(d: ZXDiagram) -> WebSystem:
    """Linearised per-spider web rules.

    For a spider of its own colour C with opposite colour O:
      - k*pi phase: parity of own-colour bits is even; opposite-colour bits
        are pairwise equal (all or none).
      - +-pi/2 phase: opposite bits pairwise equal and own parity equals the
        opposite value.
    Hadamard boxes swap colours between their two legs; boundaries add nothing.
    """
    edge_order = sorted(d.edges)
    pos = {e: i for i, e in enumerate(edge_order)}
    n = len(edge_order)
    rows: list[np.ndarray] = []

    def new_row():
        return np.zeros(2 * n, dtype=np.uint8)

    def col(eid: int, colour: str) -> int:
        return pos[eid] if colour == "Z" else n + pos[eid]

    for vid in sorted(d.vertices):
        kind, phase = d.vertices[vid]
        inc = d.incident(vid)
        if kind == B:
            continue
        if kind == H:
            (e1, _), (e2, _) = inc
            for ca, cb in (("Z", "X"), ("X", "Z")):
                r = new_row()
                r[col(e1, ca)] ^= 1
                r[col(e2, cb)] ^= 1
                rows.append(r)
            continue
        own = "Z" if kind == Z else "X"
        opp = "X" if kind == Z else "Z"
        legs = [e for e, _ in inc]
        if not legs:
            continue
        for e in legs[1:]:  # opposite colour: all-or-none
            r = new_row()
            r[col(legs[0], opp)] ^= 1
            r[col(e, opp)] ^= 1
            rows.append(r)
        r = new_row()  # own-colour parity
        for e in legs:
            r[col(e, own)] ^= 1
        if phase % 2 == 1:  # +-pi/2: own parity equals opposite value
            r[col(legs[0], opp)] ^= 1
        rows.append(r)

    mat = np.array(rows, dtype=np.uint8) if rows else np.zeros((0, 2 * n), dtype=np.uint8)
    return WebSystem(mat, edge_order)


def web_basis(d: ZXDiagram) -> list[PauliWeb]:
    """Basis of the web solution space under the symmetric-difference product."""
    sys = web_system(d)
    null = gf2.nullspace(sys.matrix) if sys.matrix.size else np.eye(sys.columns(), dtype=np.uint8)
    if sys.matrix.size == 0 and sys.columns() == 0:
        return []
    return [sys.web_of(v) for v in null]


def _boundary_split(d: ZXDiagram) -> tuple[set[int], set[int]]:
    in_edges, out_edges = set(), set()
    for vid in d.inputs:
        for eid, _ in d.incident(vid):
            in_edges.add(eid)
    for vid in d.outputs:
        for eid, _ in d.incident(vid):
            out_edges.add(eid)
    return in_edges, out_edges


def _subspace(sys: WebSystem, basis: list[PauliWeb], forbidden_cols: list[int]) -> np.ndarray:
    """Basis (rows) of the sub-space of span(basis) vanishing on given columns."""
    if not basis:
        return np.zeros((0, sys.columns()), dtype=np.uint8)
    bm = np.array([sys.vector_of(w) for w in basis], dtype=np.uint8)
    if not forbidden_cols:
        return gf2.row_basis(bm)
    restr = bm[:, forbidden_cols]
    combos = gf2.nullspace(restr.T)
    if combos.size == 0:
        return np.zeros((0, sys.columns()), dtype=np.uint8)
    return gf2.row_basis((combos @ bm) & 1)


def classify(d: ZXDiagram, w: PauliWeb, basis: list[PauliWeb]) -> WebClass:
    """Classify a web by its boundary highlights and span membership."""
    sys = web_system(d)
    if not sys.satisfies(w):
        raise DiagramError("highlighting violates the web rules")
    if w.is_empty():
        return WebClass("mixed-trivial")
    in_edges, out_edges = _boundary_split(d)
    touched = set(w.highlights)
    if not touched & (in_edges | out_edges):
        return WebClass("detecting")
    if not touched & in_edges:
        return WebClass("stabilising")
    if not touched & out_edges:
        return WebClass("co-stabilising")
    n = len(sys.edge_order)
    pos = {e: i for i, e in enumerate(sys.edge_order)}
    in_cols = [pos[e] for e in sorted(in_edges)] + [n + pos[e] for e in sorted(in_edges)]
    out_cols = [pos[e] for e in sorted(out_edges)] + [n + pos[e] for e in sorted(out_edges)]
    stab = _subspace(sys, basis, in_cols)
    costab = _subspace(sys, basis, out_cols)
    span = gf2.subspace_sum(stab, costab)
    if gf2.in_rowspan(span, sys.vector_of(w)):
        return WebClass("mixed-trivial")
    return WebClass("logical")


def boundary_pauli(d: ZXDiagram, w: PauliWeb, side: str) -> str:
    """Pauli letter per boundary qubit read off the highlighted boundary edges."""
    verts = d.inputs if side == "in" else d.outputs
    letters = []
    for vid in verts:
        (eid, _), = d.incident(vid)
        letters.append(w.highlights.get(eid, "I"))
    return "".join(letters)


def fire(d: ZXDiagram, spider: int, w: PauliWeb) -> ZXDiagram:
    """Insert pi spiders of the highlighted colour on every covered leg of
    `spider`; X before Z on Y-highlighted legs."""
    inc = d.incident(spider)
    covered = [(eid, w.highlights[eid]) for eid, _ in inc if eid in w.highlights]
    if not covered:
        raise DiagramError(f"spider {spider} is not covered by the web")
    out = d.copy()
    for eid, colour in covered:
        # split near the spider's end so insertions stack deterministically
        if colour in ("X", "Y"):
            _, e1, _ = _split_towards(out, eid, spider, X)
            eid = e1
        if colour in ("Z", "Y"):
            _split_towards(out, eid, spider, Z)
    return out


def _split_towards(d: ZXDiagram, eid: int, vid: int, kind: str) -> tuple[int, int, int]:
    u, v = d.edges[eid]
    d.remove_edge(eid)
    w = d.add_vertex(kind, 2)  # pi phase
    e_far = d.add_edge(u if u != vid else v, w)
    e_near = d.add_edge(w, vid)
    return w, e_far, e_near
