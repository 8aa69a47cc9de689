"""Measurement-circuit flow: verification, well-covering, degree reduction
and circuit extraction.

A flow is a set of edge-disjoint directed paths plus a partial order given as
DAG covering relations.  Degree reduction rewrites high-degree spiders with
the distance-preserving library rules while carrying the paths through each
rewrite; the resulting degree-at-most-3 diagram extracts directly into
low-weight Clifford and measurement form.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .circuit import Circuit, Op
from .diagram import B, H, OPPOSITE, X, Z, ZXDiagram, DiagramError


@dataclass(frozen=True)
class Path:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        if len(self.edges) != max(len(self.vertices) - 1, 0):
            raise DiagramError("path edge/vertex counts inconsistent")

    def start(self) -> int:
        return self.vertices[0]

    def end(self) -> int:
        return self.vertices[-1]


@dataclass
class MCFlow:
    paths: list[Path]
    dag: dict[int, set[int]] = field(default_factory=dict)

    def with_path_edges(self) -> dict[int, set[int]]:
        """DAG successors including every path edge."""
        succ: dict[int, set[int]] = {v: set(s) for v, s in self.dag.items()}
        for p in self.paths:
            for a, b in zip(p.vertices, p.vertices[1:]):
                succ.setdefault(a, set()).add(b)
        return succ

    def reachability(self) -> dict[int, frozenset[int]]:
        succ = self.with_path_edges()
        order: list[int] = []
        seen: set[int] = set()
        nodes = sorted(set(succ) | {w for s in succ.values() for w in s})

        def visit(v, stack):
            if v in stack:
                raise DiagramError("partial order contains a cycle")
            if v in seen:
                return
            stack.add(v)
            for w in sorted(succ.get(v, ())):
                visit(w, stack)
            stack.discard(v)
            seen.add(v)
            order.append(v)

        for v in nodes:
            visit(v, set())
        desc: dict[int, frozenset[int]] = {}
        for v in order:  # reverse topological
            acc: set[int] = set()
            for w in succ.get(v, ()):
                acc.add(w)
                acc |= desc[w]
            desc[v] = frozenset(acc)
        return desc

    def leq(self, a: int, b: int, reach: dict[int, frozenset[int]] | None = None) -> bool:
        if a == b:
            return True
        if reach is None:
            reach = self.reachability()
        return b in reach.get(a, frozenset())

    def edge_cover(self) -> dict[int, list[int]]:
        cover: dict[int, list[int]] = {}
        for i, p in enumerate(self.paths):
            for e in p.edges:
                cover.setdefault(e, []).append(i)
        return cover

    def path_through(self, vid: int) -> list[tuple[int, int]]:
        """(path index, position) pairs for every visit of vid."""
        out = []
        for i, p in enumerate(self.paths):
            for j, v in enumerate(p.vertices):
                if v == vid:
                    out.append((i, j))
        return out


@dataclass
class FlowReport:
    conditions: dict[str, list[str]]

    @property
    def ok(self) -> bool:
        return all(not v for v in self.conditions.values())

    def passed(self, *names: str) -> bool:
        return all(not self.conditions.get(n) for n in names)

    def __str__(self) -> str:
        lines = []
        for name in sorted(self.conditions):
            wit = self.conditions[name]
            lines.append(f"{name}: " + ("pass" if not wit else "FAIL " + "; ".join(wit[:4])))
        return "\n".join(lines)


def verify_flow(d: ZXDiagram, flow: MCFlow) -> FlowReport:
    """Check O1, O2, P1-P3 and (P4) well-coveredness with witnesses."""
    conds: dict[str, list[str]] = {k: [] for k in ("paths", "O1", "O2", "P1", "P2", "P3", "P4")}

    for i, p in enumerate(flow.paths):
        if len(set(p.vertices)) != len(p.vertices):
            conds["paths"].append(f"path {i} repeats a vertex")
        for j, e in enumerate(p.edges):
            if e not in d.edges or set(d.edges[e]) != {p.vertices[j], p.vertices[j + 1]}:
                conds["paths"].append(f"path {i} edge {e} does not join its vertices")
        for v in p.vertices:
            if v not in d.vertices:
                conds["paths"].append(f"path {i} visits unknown vertex {v}")
    if conds["paths"]:
        return FlowReport(conds)

    reach = flow.reachability()
    covered_into: dict[int, set[int]] = {}  # y -> set of z with z->y in some path
    for p in flow.paths:
        for a, b in zip(p.vertices, p.vertices[1:]):
            covered_into.setdefault(b, set()).add(a)

    for i, p in enumerate(flow.paths):
        for a, b in zip(p.vertices, p.vertices[1:]):
            if not flow.leq(a, b, reach):
                conds["O1"].append(f"path {i}: {a}->{b} violates the order")
            for _, z in d.incident(b):
                if z in covered_into.get(b, ()):
                    continue
                if not flow.leq(a, z, reach):
                    conds["O2"].append(f"edge {a}->{b}: neighbour {z} unordered")

    cover = flow.edge_cover()
    for e, ps in cover.items():
        if len(ps) > 1:
            conds["P3"].append(f"edge {e} covered by paths {ps}")

    for vid in sorted(d.vertices):
        kind, _ = d.vertices[vid]
        inc = d.incident(vid)
        if kind in (B, H):
            fully = any(vid in p.vertices and all(e in p.edges for e, _ in inc)
                        for p in flow.paths)
            if not fully:
                conds["P1"].append(f"{kind} vertex {vid} not fully covered")
        if kind in (Z, X):
            uncov = [e for e, _ in inc if e not in cover]
            if len(uncov) > 1:
                conds["P2"].append(f"spider {vid} has uncovered edges {uncov}")

    for i, p in enumerate(flow.paths):
        for v in (p.start(), p.end()):
            if d.vertices.get(v, ("?", 0))[0] in (Z, X) and d.degree(v) > 1:
                conds["P4"].append(f"path {i} ends at spider {v} of degree {d.degree(v)}")
    return FlowReport(conds)


def make_well_covered(d: ZXDiagram, flow: MCFlow,
                      audit: list | None = None) -> tuple[ZXDiagram, MCFlow]:
    """Move path endpoints onto fresh degree-1 spiders by unfusing pendants."""
    rep = verify_flow(d, flow)
    if not rep.passed("paths", "O1", "O2", "P1", "P2", "P3"):
        raise DiagramError("flow invalid before well-covering:\n" + str(rep))
    d = d.copy()
    paths = list(flow.paths)
    dag = {v: set(s) for v, s in flow.dag.items()}
    for i, p in enumerate(paths):
        verts, edges = list(p.vertices), list(p.edges)
        for endpos in (0, -1):
            v = verts[endpos]
            kind = d.vertices[v][0]
            if kind not in (Z, X) or d.degree(v) <= 1:
                continue
            pend = d.add_vertex(kind, 0)
            eid = d.add_edge(v, pend)
            if audit is not None:
                audit.append(("r_fuse", {"at": v, "pendant": pend}))
            if endpos == 0:
                verts.insert(0, pend)
                edges.insert(0, eid)
                dag.setdefault(pend, set()).add(v)
            else:
                verts.append(pend)
                edges.append(eid)
                dag.setdefault(v, set()).add(pend)
        paths[i] = Path(tuple(verts), tuple(edges))
    out = MCFlow(paths, dag)
    rep = verify_flow(d, out)
    if not rep.ok:
        raise DiagramError("well-covering failed to produce a valid flow:\n" + str(rep))
    return d, out


def f_overhead(n: int) -> int:
    """Extra qubit paths to express a degree-n spider with degree <= 3."""
    if n % 2 != 0 or n < 4:
        raise DiagramError("f(n) needs even n >= 4")
    extra = 0
    while n != 4:
        if n % 4 == 0:
            n //= 2
        else:
            extra += 1
            n += 2
    return extra


def g_overhead(n: int) -> int:
    """Weight-two Paulis used to express a degree-n spider with degree <= 3."""
    if n % 2 != 0 or n < 4:
        raise DiagramError("g(n) needs even n >= 4")
    if n == 4:
        return 2
    if n % 4 == 0:
        return n + 2 * g_overhead(n // 2)
    return g_overhead(n + 2)


@dataclass
class _Segment:
    path: int
    pos: int  # index of the spider within the path
    in_edge: int
    out_edge: int
    prev: int
    next: int


def _segments_at(d: ZXDiagram, flow: MCFlow, vid: int) -> list[_Segment]:
    segs = []
    for i, p in enumerate(flow.paths):
        for j, v in enumerate(p.vertices):
            if v != vid:
                continue
            if j == 0 or j == len(p.vertices) - 1:
                raise DiagramError(f"path {i} ends at high-degree spider {vid}")
            segs.append(_Segment(i, j, p.edges[j - 1], p.edges[j],
                                 p.vertices[j - 1], p.vertices[j + 1]))
    return segs


def _rewire_dag(dag: dict[int, set[int]], old: int, entries: list[int], exits: list[int]) -> None:
    preds = [u for u, s in dag.items() if old in s]
    succs = list(dag.pop(old, set()))
    for u in preds:
        dag[u].discard(old)
        dag[u].update(entries)
    for w in exits:
        dag.setdefault(w, set()).update(succs)


def _replace_in_path(paths: list[Path], seg: _Segment, new_vertices: list[int],
                     new_edges: list[int]) -> None:
    p = paths[seg.path]
    verts = list(p.vertices)
    edges = list(p.edges)
    verts[seg.pos:seg.pos + 1] = new_vertices
    edges[seg.pos - 1:seg.pos + 1] = new_edges
    paths[seg.path] = Path(tuple(verts), tuple(edges))


def _reattach_leg(d: ZXDiagram, leg_edge: int, old: int, new: int) -> int:
    other = d.other_end(leg_edge, old)
    d.remove_edge(leg_edge)
    return d.add_edge(other, new)


def _reduce_spider(d: ZXDiagram, paths: list[Path], dag: dict[int, set[int]],
                   vid: int, flow: MCFlow, audit: list | None) -> None:
    """One macro-step on a degree>3 spider: r_4, or (pad +) r_{n+} / r_n."""
    kind, phase = d.vertices[vid]
    if phase != 0:
        raise DiagramError(f"degree reduction needs phase-0 spiders, got {phase} at {vid}")
    segs = _segments_at(d, flow, vid)
    cover = flow.edge_cover()
    uncovered = [e for e, _ in d.incident(vid) if e not in cover]
    if len(uncovered) > 1:
        raise DiagramError(f"spider {vid} violates P2")

    if d.degree(vid) == 4 and not uncovered:
        # r_4: cycle T_in1 - T_out1 - T_out2 - T_in2, paths cover the two
        # first-to-second edges; the remaining pair extracts as two parity ops
        (s1, s2) = segs
        t = {name: d.add_vertex(kind, 0) for name in ("a_in", "a_out", "b_in", "b_out")}
        e1 = _reattach_leg(d, s1.in_edge, vid, t["a_in"])
        e2 = _reattach_leg(d, s1.out_edge, vid, t["a_out"])
        e3 = _reattach_leg(d, s2.in_edge, vid, t["b_in"])
        e4 = _reattach_leg(d, s2.out_edge, vid, t["b_out"])
        c1 = d.add_edge(t["a_in"], t["a_out"])
        c2 = d.add_edge(t["b_in"], t["b_out"])
        d.add_edge(t["a_in"], t["b_in"])    # uncovered: early parity op
        d.add_edge(t["a_out"], t["b_out"])  # uncovered: late parity op
        d.remove_vertex(vid)
        _replace_in_path(paths, s1, [t["a_in"], t["a_out"]], [e1, c1, e2])
        _replace_in_path(paths, s2, [t["b_in"], t["b_out"]], [e3, c2, e4])
        _rewire_dag(dag, vid, [t["a_in"], t["b_in"]], [t["a_out"], t["b_out"]])
        dag.setdefault(t["a_in"], set()).add(t["b_out"])
        dag.setdefault(t["b_in"], set()).add(t["a_out"])
        # the early parity op needs each entry ordered after the other
        # path's predecessor
        dag.setdefault(s1.prev, set()).add(t["b_in"])
        dag.setdefault(s2.prev, set()).add(t["a_in"])
        if audit is not None:
            audit.append(("r_4", {"at": vid, "new_vertices": sorted(t.values())}))
        return

    if len(segs) % 2 == 1:
        # pad with two pendants and a fresh path so segments pair up
        p1 = d.add_vertex(kind, 0)
        p2 = d.add_vertex(kind, 0)
        ea = d.add_edge(p1, vid)
        eb = d.add_edge(vid, p2)
        paths.append(Path((p1, vid, p2), (ea, eb)))
        dag.setdefault(p1, set()).add(vid)
        dag.setdefault(vid, set()).add(p2)
        if audit is not None:
            audit.append(("r_fuse pad", {"at": vid, "new_vertices": [p1, p2]}))
        return

    # r_{n+} (no uncovered leg) or r_n (one uncovered leg hangs off centre B)
    a = d.add_vertex(kind, 0)
    b = d.add_vertex(kind, 0)
    entries, exits = [], []
    for j in range(0, len(segs), 2):
        sp, sq = segs[j], segs[j + 1]
        o_in = d.add_vertex(kind, 0)
        o_out = d.add_vertex(kind, 0)
        entries.append(o_in)
        exits.append(o_out)
        ein_p = _reattach_leg(d, sp.in_edge, vid, o_in)
        ein_q = _reattach_leg(d, sq.in_edge, vid, o_in)
        eout_p = _reattach_leg(d, sp.out_edge, vid, o_out)
        eout_q = _reattach_leg(d, sq.out_edge, vid, o_out)
        pa1 = d.add_edge(o_in, a)
        pa2 = d.add_edge(a, o_out)
        pb1 = d.add_edge(o_in, b)
        pb2 = d.add_edge(b, o_out)
        _replace_in_path(paths, sp, [o_in, a, o_out], [ein_p, pa1, pa2, eout_p])
        _replace_in_path(paths, sq, [o_in, b, o_out], [ein_q, pb1, pb2, eout_q])
    name = "r_n+"
    if uncovered:
        _reattach_leg(d, uncovered[0], vid, b)
        name = "r_n"
    d.remove_vertex(vid)
    _rewire_dag(dag, vid, entries, exits)
    if audit is not None:
        audit.append((name, {"at": vid, "n": 2 * len(segs),
                             "new_vertices": [a, b] + entries + exits}))


def reduce_degree(d: ZXDiagram, flow: MCFlow,
                  audit: list | None = None) -> tuple[ZXDiagram, MCFlow]:
    """Rewrite every spider to degree <= 3, carrying the flow through.

    Applies r_4 to degree-4 spiders and the recursive gadget rewrites to
    higher degrees, padding with a pendant pair (one extra path) when the
    through-paths cannot be paired; re-verifies the flow afterwards.
    """
    rep = verify_flow(d, flow)
    if not rep.ok:
        raise DiagramError("flow invalid before degree reduction:\n" + str(rep))
    d = d.copy()
    paths = list(flow.paths)
    dag = {v: set(s) for v, s in flow.dag.items()}
    while True:
        flow = MCFlow(paths, dag)
        big = [v for v in d.spiders() if d.degree(v) > 3]
        if not big:
            break
        target = max(big, key=lambda v: (d.degree(v), -v))
        _reduce_spider(d, paths, dag, target, flow, audit)
    out = MCFlow(paths, dag)
    rep = verify_flow(d, out)
    if not rep.ok:
        raise DiagramError("degree reduction broke the flow:\n" + str(rep))
    return d, out


# -- circuit extraction ------------------------------------------------------


_PHASE_GATE = {Z: {1: "S", 2: "Z", 3: "Sdg"}, X: {1: "SX", 2: "X", 3: "SXdg"}}


def extract_circuit(d: ZXDiagram, flow: MCFlow
                    ) -> tuple[Circuit, dict[int, int], list[list[int]]]:
    """Extract a low-weight Clifford and measurement circuit.

    One qubit per path, with reuse when path lifetimes do not overlap; input
    paths keep the input position as their qubit index.  Returns the circuit,
    the path-to-qubit assignment and, per op, the diagram vertices it came
    from.
    """
    rep = verify_flow(d, flow)
    if not rep.ok:
        raise DiagramError("flow invalid for extraction:\n" + str(rep))
    maxdeg = max((d.degree(v) for v in d.spiders()), default=0)
    if maxdeg > 3:
        raise DiagramError(f"extraction needs degree <= 3, found {maxdeg}")

    cover = flow.edge_cover()
    on_path: dict[int, list[tuple[int, int]]] = {}
    for i, p in enumerate(flow.paths):
        for j, v in enumerate(p.vertices):
            on_path.setdefault(v, []).append((i, j))

    events: list[dict] = []  # op factories anchored to path positions

    def add_event(anchors: list[tuple[int, int]], maker, verts: list[int]) -> None:
        events.append({"anchors": anchors, "maker": maker,
                       "verts": verts, "index": len(events)})

    for i, p in enumerate(flow.paths):
        for j, v in enumerate(p.vertices):
            kind, phase = d.vertices[v]
            if kind == B:
                continue
            deg = d.degree(v)
            anchors = [(i, j)]
            if deg == 1 and kind in (Z, X):
                if j == 0:
                    basis = "Z" if kind == X else "X"
                    add_event(anchors, lambda q, basis=basis, ph=phase, k=kind: _prep_ops(q, basis, ph, k), [v])
                elif j == len(p.vertices) - 1:
                    basis = "Z" if kind == X else "X"
                    add_event(anchors, lambda q, basis=basis, ph=phase, k=kind: _destroy_ops(q, basis, ph, k), [v])
                else:
                    raise DiagramError(f"degree-1 spider {v} mid-path")
            elif kind == H:
                add_event(anchors, lambda q: [Op("C", (q,), name="H")], [v])
            elif deg == 2:
                if phase:
                    add_event(anchors, lambda q, k=kind, ph=phase: [Op("C", (q,), name=_PHASE_GATE[k][ph])], [v])
            elif deg == 3:
                if phase:
                    raise DiagramError(f"phased degree-3 spider {v} is not extractable")
            else:
                raise DiagramError(f"unexpected spider arrangement at {v}")

    emitted_edges: set[int] = set()
    for eid in sorted(d.edges):
        if eid in cover or eid in emitted_edges:
            continue
        u, w = d.edges[eid]
        ku, kw = d.kind(u), d.kind(w)
        if B in (ku, kw):
            raise DiagramError(f"boundary edge {eid} uncovered")
        du, dw = d.degree(u), d.degree(w)
        emitted_edges.add(eid)
        if du == 1 and dw == 1:
            continue  # disconnected scalar pair
        if du == 1 or dw == 1:
            spider, pend = (w, u) if du == 1 else (u, w)
            if d.phase(pend) != 0:
                raise DiagramError(f"phased pendant {pend} is not extractable")
            if d.kind(pend) == d.kind(spider):
                continue  # fuses to nothing: identity
            basis = "Z" if d.kind(spider) == Z else "X"
            anchors = on_path[spider]
            add_event(list(anchors), lambda q, basis=basis: [Op(f"M1{basis}", (q,))], [spider, pend])
        else:
            if d.phase(u) or d.phase(w):
                raise DiagramError("phased interacting spiders are not extractable")
            au, aw = on_path[u][0], on_path[w][0]
            if ku == kw:
                basis = "Z" if ku == Z else "X"
                add_event([au, aw], lambda qu, qw, basis=basis: [Op(f"M2{basis}", (qu, qw))], [u, w])
            else:
                ctrl, tgt = (au, aw) if ku == Z else (aw, au)
                add_event([ctrl, tgt], lambda qc, qt: [Op("CX", (qc, qt))], [u, w])

    # dependency order: per-path chains between event anchors
    by_anchor: dict[tuple[int, int], list[int]] = {}
    for ev in events:
        for a in ev["anchors"]:
            by_anchor.setdefault(a, []).append(ev["index"])
    deps: dict[int, set[int]] = {ev["index"]: set() for ev in events}
    for i, p in enumerate(flow.paths):
        prev_events: list[int] = []
        for j in range(len(p.vertices)):
            here = sorted(by_anchor.get((i, j), []))
            for idx in here:
                deps[idx].update(prev_events)
            if here:
                prev_events = here
    order: list[int] = []
    ready = [idx for idx in sorted(deps) if not deps[idx]]
    heapq.heapify(ready)
    placed: set[int] = set()
    pending = dict(deps)
    while ready:
        idx = heapq.heappop(ready)
        order.append(idx)
        placed.add(idx)
        for k in sorted(pending):
            if idx in pending[k] and k not in placed:
                pending[k] = pending[k] - {idx}
                if not pending[k]:
                    heapq.heappush(ready, k)
                    del pending[k]
    if len(order) != len(events):
        raise DiagramError("cyclic op dependencies during extraction")

    # qubit assignment: inputs keep their position; others reuse greedily
    start_of = {idx: pos for pos, idx in enumerate(order)}
    qubit_of: dict[int, int] = {}
    input_pos = {v: k for k, v in enumerate(d.inputs)}
    for i, p in enumerate(flow.paths):
        if p.start() in input_pos:
            qubit_of[i] = input_pos[p.start()]
    n_data = len(d.inputs)
    lifetimes = []
    for i, p in enumerate(flow.paths):
        if i in qubit_of:
            continue
        evs = [start_of[idx] for idx in range(len(events))
               if any(a[0] == i for a in events[idx]["anchors"])]
        lifetimes.append((min(evs, default=0), max(evs, default=0), i))
    free: list[int] = []
    next_q = n_data
    active: list[tuple[int, int]] = []  # (end, qubit)
    for s, e, i in sorted(lifetimes):
        # free qubits whose lifetime ended strictly before s
        keep = []
        for en, q in active:
            if en < s:
                heapq.heappush(free, q)
            else:
                keep.append((en, q))
        active = keep
        if free:
            q = heapq.heappop(free)
        else:
            q = next_q
            next_q += 1
        qubit_of[i] = q
        active.append((e, q))

    ops: list[Op] = []
    op_vertices: list[list[int]] = []
    for idx in order:
        ev = events[idx]
        qs = [qubit_of[a[0]] for a in ev["anchors"]]
        made = ev["maker"](*qs)
        ops.extend(made)
        op_vertices.extend([list(ev["verts"])] * len(made))
    circ = Circuit(next_q, ops)
    return circ, qubit_of, op_vertices


def _prep_ops(q: int, basis: str, phase: int, kind: str) -> list[Op]:
    ops = [Op(f"P{basis}", (q,))]
    if phase:
        ops.append(Op("C", (q,), name=_PHASE_GATE[kind][phase]))
    return ops


def _destroy_ops(q: int, basis: str, phase: int, kind: str) -> list[Op]:
    ops = []
    if phase:
        ops.append(Op("C", (q,), name=_PHASE_GATE[kind][phase]))
    ops.append(Op(f"D{basis}", (q,)))
    return ops
