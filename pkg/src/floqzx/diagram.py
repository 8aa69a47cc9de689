"""Open-graph representation of Clifford-fragment ZX diagrams.

Vertices are typed Z/X spiders, two-legged Hadamard boxes and degree-one
boundary nodes; phases are quarter turns (k * pi/2) stored mod 4.  Edges form
a multiset, since parallel edges are distinct error locations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Z, X, H, B = "Z", "X", "H", "B"
KINDS = (Z, X, H, B)

OPPOSITE = {Z: X, X: Z}


def normalise_phase(quarter_turns: int) -> int:
    return int(quarter_turns) % 4


class DiagramError(ValueError):
    """Structurally invalid diagram or reference to a missing element."""


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


class ZXDiagram:
    """Mutable while being built; treated as an immutable value afterwards.

    All rewrite-style operations in this package copy the diagram instead of
    mutating a shared one.
    """

    def __init__(self) -> None:
        self.vertices: dict[int, tuple[str, int]] = {}
        self.edges: dict[int, tuple[int, int]] = {}
        self.inputs: list[int] = []
        self.outputs: list[int] = []
        self._next_v = 0
        self._next_e = 0

    # -- construction -----------------------------------------------------

    def add_vertex(self, kind: str, phase: int = 0, vid: int | None = None) -> int:
        if kind not in KINDS:
            raise DiagramError(f"unknown vertex kind {kind!r}")
        if vid is None:
            vid = self._next_v
        if vid in self.vertices:
            raise DiagramError(f"vertex id {vid} already used")
        self.vertices[vid] = (kind, normalise_phase(phase))
        self._next_v = max(self._next_v, vid + 1)
        return vid

    def add_edge(self, u: int, v: int, eid: int | None = None) -> int:
        if u not in self.vertices or v not in self.vertices:
            raise DiagramError(f"edge ({u},{v}) references missing vertex")
        if u == v:
            raise DiagramError(f"self-loop on vertex {u}")
        if eid is None:
            eid = self._next_e
        if eid in self.edges:
            raise DiagramError(f"edge id {eid} already used")
        self.edges[eid] = (u, v)
        self._next_e = max(self._next_e, eid + 1)
        return eid

    def add_boundary(self, side: str) -> int:
        vid = self.add_vertex(B)
        (self.inputs if side == "in" else self.outputs).append(vid)
        return vid

    def remove_edge(self, eid: int) -> None:
        del self.edges[eid]

    def remove_vertex(self, vid: int) -> None:
        if any(vid in uv for uv in self.edges.values()):
            raise DiagramError(f"vertex {vid} still has incident edges")
        del self.vertices[vid]
        if vid in self.inputs:
            self.inputs.remove(vid)
        if vid in self.outputs:
            self.outputs.remove(vid)

    def copy(self) -> "ZXDiagram":
        d = ZXDiagram()
        d.vertices = dict(self.vertices)
        d.edges = dict(self.edges)
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d._next_v = self._next_v
        d._next_e = self._next_e
        return d

    # -- queries -----------------------------------------------------------

    def kind(self, vid: int) -> str:
        return self.vertices[vid][0]

    def phase(self, vid: int) -> int:
        return self.vertices[vid][1]

    def set_phase(self, vid: int, phase: int) -> None:
        self.vertices[vid] = (self.vertices[vid][0], normalise_phase(phase))

    def incident(self, vid: int) -> list[tuple[int, int]]:
        """Sorted (edge id, other endpoint) pairs at vid."""
        out = []
        for eid, (u, v) in self.edges.items():
            if u == vid:
                out.append((eid, v))
            elif v == vid:
                out.append((eid, u))
        out.sort()
        return out

    def degree(self, vid: int) -> int:
        return sum(1 for uv in self.edges.values() if vid in uv)

    def boundary(self) -> list[int]:
        return self.inputs + self.outputs

    def boundary_edges(self) -> list[int]:
        bset = set(self.boundary())
        return sorted(e for e, (u, v) in self.edges.items() if u in bset or v in bset)

    def internal_edges(self) -> list[int]:
        bset = set(self.boundary())
        return sorted(e for e, (u, v) in self.edges.items() if u not in bset and v not in bset)

    def spiders(self) -> list[int]:
        return sorted(v for v, (k, _) in self.vertices.items() if k in (Z, X))

    def other_end(self, eid: int, vid: int) -> int:
        u, v = self.edges[eid]
        if u == vid:
            return v
        if v == vid:
            return u
        raise DiagramError(f"vertex {vid} not on edge {eid}")

    # -- validation (report-based, per the structural invariants) ----------

    def validate(self) -> ValidationReport:
        violations: list[str] = []
        for vid, (kind, phase) in sorted(self.vertices.items()):
            if kind == H and self.degree(vid) != 2:
                violations.append(f"Hadamard degree != 2 at vertex {vid}")
            if kind == B and self.degree(vid) != 1:
                violations.append(f"boundary degree != 1 at vertex {vid}")
            if kind in (H, B) and phase != 0:
                violations.append(f"{kind} vertex {vid} carries nonzero phase")
        bset = {v for v, (k, _) in self.vertices.items() if k == B}
        declared = self.inputs + self.outputs
        if set(declared) != bset or len(declared) != len(set(declared)):
            violations.append("inputs/outputs do not partition the B vertices")
        for eid, (u, v) in sorted(self.edges.items()):
            if u not in self.vertices or v not in self.vertices:
                violations.append(f"edge {eid} references missing vertex")
            elif u == v:
                violations.append(f"self-loop at vertex {u}")
        return ValidationReport(not violations, violations)

    # -- surgery helpers ---------------------------------------------------

    def split_edge(self, eid: int, kind: str, phase: int = 0) -> tuple[int, int, int]:
        """Insert a fresh vertex on edge eid (in place).

        The original edge (u, v) is replaced by (u, w) and (w, v); returns
        (w, eid_u_side, eid_v_side).
        """
        u, v = self.edges[eid]
        self.remove_edge(eid)
        w = self.add_vertex(kind, phase)
        e1 = self.add_edge(u, w)
        e2 = self.add_edge(w, v)
        return w, e1, e2

    def colour_flipped(self) -> "ZXDiagram":
        """Swap Z and X on every spider (Hadamard conjugation of all wires)."""
        d = self.copy()
        for vid, (kind, phase) in self.vertices.items():
            if kind in OPPOSITE:
                d.vertices[vid] = (OPPOSITE[kind], phase)
        return d

    def relabelled(self, vmap: dict[int, int], emap: dict[int, int]) -> "ZXDiagram":
        """Rename vertices/edges; used to check that only connectivity matters."""
        d = ZXDiagram()
        for vid, data in self.vertices.items():
            d.vertices[vmap[vid]] = data
        for eid, (u, v) in self.edges.items():
            d.edges[emap[eid]] = (vmap[u], vmap[v])
        d.inputs = [vmap[v] for v in self.inputs]
        d.outputs = [vmap[v] for v in self.outputs]
        d._next_v = max(d.vertices, default=-1) + 1
        d._next_e = max(d.edges, default=-1) + 1
        return d

    # -- structured text format --------------------------------------------

    def to_text(self) -> str:
        lines = []
        for vid in sorted(self.vertices):
            kind, phase = self.vertices[vid]
            lines.append(f"node {vid} {kind} {phase}")
        for eid in sorted(self.edges):
            u, v = self.edges[eid]
            lines.append(f"edge {u} {v}")
        if self.inputs:
            lines.append("in " + " ".join(str(v) for v in self.inputs))
        if self.outputs:
            lines.append("out " + " ".join(str(v) for v in self.outputs))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ZXDiagram":
        d = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if parts[0] == "node":
                    d.add_vertex(parts[2], int(parts[3]), vid=int(parts[1]))
                elif parts[0] == "edge":
                    d.add_edge(int(parts[1]), int(parts[2]))
                elif parts[0] == "in":
                    d.inputs.extend(int(p) for p in parts[1:])
                elif parts[0] == "out":
                    d.outputs.extend(int(p) for p in parts[1:])
                else:
                    raise DiagramError(f"unknown record {parts[0]!r}")
            except (IndexError, ValueError) as exc:
                raise DiagramError(f"line {lineno}: {raw!r}: {exc}") from exc
        return d

    def __repr__(self) -> str:
        return (f"ZXDiagram({len(self.vertices)} vertices, {len(self.edges)} edges, "
                f"{len(self.inputs)}->{len(self.outputs)})")


# -- small builders used across the package and in tests -------------------


def wire_diagram(n: int = 1) -> ZXDiagram:
    """n bare wires, input i connected straight to output i."""
    d = ZXDiagram()
    for _ in range(n):
        a = d.add_boundary("in")
    for i in range(n):
        b = d.add_boundary("out")
    for i in range(n):
        d.add_edge(d.inputs[i], d.outputs[i])
    return d


def single_spider(kind: str, phase: int, n_in: int, n_out: int) -> ZXDiagram:
    d = ZXDiagram()
    s = d.add_vertex(kind, phase)
    for _ in range(n_in):
        b = d.add_boundary("in")
        d.add_edge(b, s)
    for _ in range(n_out):
        b = d.add_boundary("out")
        d.add_edge(s, b)
    return d


def compose(first: ZXDiagram, second: ZXDiagram) -> ZXDiagram:
    """Sequential composition: run `first`, then `second`.

    first.outputs are glued to second.inputs positionally.
    """
    if len(first.outputs) != len(second.inputs):
        raise DiagramError("arity mismatch in composition")
    d = first.copy()
    vmap: dict[int, int] = {}
    glue = dict(zip(second.inputs, first.outputs))
    for vid, (kind, phase) in sorted(second.vertices.items()):
        if vid in glue:
            continue
        vmap[vid] = d.add_vertex(kind, phase)
    for eid in sorted(second.edges):
        u, v = second.edges[eid]
        nu = vmap.get(u)
        nv = vmap.get(v)
        if nu is None:  # u was one of second's inputs: reroute through the glue
            mid = glue[u]
            (peid, other), = [iv for iv in d.incident(mid)]
            d.remove_edge(peid)
            nu = other
            d.outputs.remove(mid)
            del d.vertices[mid]
        if nv is None:
            mid = glue[v]
            (peid, other), = [iv for iv in d.incident(mid)]
            d.remove_edge(peid)
            nv = other
            d.outputs.remove(mid)
            del d.vertices[mid]
        d.add_edge(nu, nv)
    d.outputs = [vmap[v] for v in second.outputs]
    return d
