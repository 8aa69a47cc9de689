"""Matching and applying rewrite rules, and certifying distance preservation.

`verify_distance_preserving` enumerates right-hand-side errors by increasing
weight.  Errors with odd overlap against a detecting region are discharged by
the detector error matrix (the detecting-region theorem makes this sound);
the survivors are compared semantically against a lazily built table of
left-hand-side errors, using an exact up-to-scalar canonical form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .diagram import B, ZXDiagram, DiagramError
from .errors import (ErrorSet, apply_error, detecting_regions, detector_matrix,
                     enumerate_errors)
from .interpret import (apply_boundary_paulis, canonical_key,
                        equal_up_to_scalar, interpret)
from .rules import RewriteRule


@dataclass
class Embedding:
    """Occurrence of a pattern inside a host diagram.

    vmap sends every non-boundary pattern vertex to a host vertex, emap sends
    every pattern edge to a host edge, and battach records, per pattern
    boundary vertex, the host-side context vertex its leg attaches to.
    """

    pattern: ZXDiagram
    vmap: dict[int, int]
    emap: dict[int, int]
    battach: dict[int, tuple[int, int]]  # pattern B vertex -> (context vertex, host edge)

    def signature(self) -> tuple:
        return (tuple(sorted(self.vmap.items())),
                tuple(sorted(self.emap.items())))


def check_embedding(host: ZXDiagram, emb: Embedding) -> None:
    """Raise if the embedding is stale or not a full open subdiagram."""
    pat = emb.pattern
    internal = [v for v in pat.vertices if pat.kind(v) != B]
    matched_v = set(emb.vmap.values())
    if len(matched_v) != len(internal):
        raise DiagramError("vertex map is not injective or incomplete")
    for pv in internal:
        hv = emb.vmap.get(pv)
        if hv not in host.vertices or host.vertices[hv] != pat.vertices[pv]:
            raise DiagramError(f"vertex {pv} does not match host {hv}")
    if len(set(emb.emap.values())) != len(pat.edges) or set(emb.emap) != set(pat.edges):
        raise DiagramError("edge map is not a bijection from pattern edges")
    for pe, he in emb.emap.items():
        if he not in host.edges:
            raise DiagramError(f"host edge {he} vanished")
        pu, pv = pat.edges[pe]
        ends = set(host.edges[he])
        for p_end in (pu, pv):
            if pat.kind(p_end) == B:
                ctx, ce = emb.battach[p_end]
                if ce != he or ctx not in ends:
                    raise DiagramError("boundary attachment inconsistent")
                if ctx in matched_v:
                    raise DiagramError("boundary leg is not open")
            else:
                if emb.vmap[p_end] not in ends:
                    raise DiagramError("edge endpoints do not correspond")
    # fullness: every host edge at a matched vertex is the image of a pattern edge
    image = set(emb.emap.values())
    for hv in matched_v:
        for he, _ in host.incident(hv):
            if he not in image:
                raise DiagramError(f"host edge {he} at matched vertex {hv} not covered")


def substitute(host: ZXDiagram, emb: Embedding, replacement: ZXDiagram,
               boundary_map: dict[int, int] | None = None) -> tuple[ZXDiagram, dict[int, int]]:
    """Replace the matched fragment, preserving the boundary wiring.

    boundary_map sends pattern boundary vertices to replacement boundary
    vertices (positional by default).  Returns the new diagram and the map
    from replacement vertices to fresh host vertices.
    """
    pat = emb.pattern
    pb, rb = pat.boundary(), replacement.boundary()
    if boundary_map is None:
        if len(pb) != len(rb):
            raise DiagramError("replacement boundary arity differs from pattern")
        boundary_map = dict(zip(pb, rb))
    check_embedding(host, emb)
    inv_bmap = {r: p for p, r in boundary_map.items()}

    out = host.copy()
    for he in emb.emap.values():
        out.remove_edge(he)
    for hv in emb.vmap.values():
        out.remove_vertex(hv)

    rmap: dict[int, int] = {}
    for rv in sorted(replacement.vertices):
        if replacement.kind(rv) == B:
            continue
        kind, phase = replacement.vertices[rv]
        rmap[rv] = out.add_vertex(kind, phase)

    def attach_point(rv: int) -> int:
        if replacement.kind(rv) == B:
            ctx, _ = emb.battach[inv_bmap[rv]]
            return ctx
        return rmap[rv]

    for re_ in sorted(replacement.edges):
        ru, rv = replacement.edges[re_]
        out.add_edge(attach_point(ru), attach_point(rv))
    return out, rmap


# -- matching ----------------------------------------------------------------


def _automorphism_boundary_perms(d: ZXDiagram) -> set[tuple[int, ...]]:
    """Boundary-position permutations induced by graph automorphisms of d."""
    blist = d.boundary()
    perms: set[tuple[int, ...]] = set()
    for emb in _embeddings(d, d, cap=20000):
        perm = []
        ok = True
        for bv in blist:
            ctx, he = emb.battach[bv]
            # the image boundary vertex is the endpoint of he of kind B
            u, v = d.edges[he]
            img = u if d.kind(u) == B else v
            if d.kind(img) != B:
                ok = False
                break
            perm.append(blist.index(img))
        if ok and len(set(perm)) == len(perm):
            perms.add(tuple(perm))
    return perms


def rule_symmetry_group(r: RewriteRule) -> set[tuple[int, ...]]:
    """Permutations of lhs boundary positions that are symmetries of the rule."""
    lb, rb = r.lhs.boundary(), r.rhs.boundary()
    lperms = _automorphism_boundary_perms(r.lhs)
    rperms = _automorphism_boundary_perms(r.rhs)
    to_r = {lb.index(p): rb.index(q) for p, q in r.boundary_map.items()}
    group = set()
    for perm in lperms:
        induced = tuple(to_r[perm[lb.index(p)]] for p in lb)
        # express as permutation on rhs positions: position to_r[i] -> induced[i]
        rp = [0] * len(rb)
        for i in range(len(lb)):
            rp[to_r[i]] = induced[i]
        if tuple(rp) in rperms:
            group.add(perm)
    return group


def _embeddings(pattern: ZXDiagram, host: ZXDiagram, cap: int = 100000):
    """All embeddings of pattern into host (kind, phase, degree respected,
    boundary legs open).  Deterministic order; may be quotiented by callers."""
    internal = sorted(v for v in pattern.vertices if pattern.kind(v) != B)
    host_by_sig: dict[tuple, list[int]] = {}
    for hv in sorted(host.vertices):
        if host.kind(hv) == B:
            continue
        host_by_sig.setdefault((host.vertices[hv], host.degree(hv)), []).append(hv)

    wire_edges = [e for e, (u, v) in sorted(pattern.edges.items())
                  if pattern.kind(u) == B and pattern.kind(v) == B]
    results = []

    def emit(vmap):
        matched = set(vmap.values())
        # edge groups between matched internal vertices
        groups: dict[tuple[int, int], list[int]] = {}
        blegs: dict[int, list[int]] = {v: [] for v in internal}
        for pe, (pu, pv) in sorted(pattern.edges.items()):
            ku, kv = pattern.kind(pu), pattern.kind(pv)
            if ku != B and kv != B:
                key = tuple(sorted((vmap[pu], vmap[pv])))
                groups.setdefault(key, []).append(pe)
            elif ku == B and kv == B:
                continue
            else:
                inner = pv if ku == B else pu
                blegs[inner].append(pe)
        host_groups: dict[tuple[int, int], list[int]] = {}
        host_open: dict[int, list[int]] = {vmap[v]: [] for v in internal}
        for he, (hu, hv) in sorted(host.edges.items()):
            inside_u, inside_v = hu in matched, hv in matched
            if inside_u and inside_v:
                host_groups.setdefault(tuple(sorted((hu, hv))), []).append(he)
            elif inside_u:
                host_open[hu].append(he)
            elif inside_v:
                host_open[hv].append(he)
        if set(groups) != set(host_groups):
            return
        if any(len(groups[k]) != len(host_groups[k]) for k in groups):
            return
        for v in internal:
            if len(blegs[v]) != len(host_open[vmap[v]]):
                return
        # enumerate parallel-edge and boundary-leg bijections
        group_keys = sorted(groups)
        leg_keys = [v for v in internal if blegs[v]]

        def assignments(idx, emap, battach):
            if idx < len(group_keys):
                key = group_keys[idx]
                for perm in itertools.permutations(host_groups[key]):
                    em2 = dict(emap)
                    for pe, he in zip(groups[key], perm):
                        em2[pe] = he
                    yield from assignments(idx + 1, em2, battach)
                return
            j = idx - len(group_keys)
            if j < len(leg_keys):
                v = leg_keys[j]
                for perm in itertools.permutations(host_open[vmap[v]]):
                    em2 = dict(emap)
                    ba2 = dict(battach)
                    good = True
                    for pe, he in zip(blegs[v], perm):
                        em2[pe] = he
                        pu, pv = pattern.edges[pe]
                        bvert = pu if pattern.kind(pu) == B else pv
                        ctx = host.other_end(he, vmap[v])
                        if ctx in matched:
                            good = False
                            break
                        ba2[bvert] = (ctx, he)
                    if good:
                        yield from assignments(idx + 1, em2, ba2)
                return
            # wire components (pattern edges between two boundary vertices)
            used = set(emap.values())
            def wires(k, em, ba):
                if k == len(wire_edges):
                    yield Embedding(pattern, dict(vmap), dict(em), dict(ba))
                    return
                pe = wire_edges[k]
                pu, pv = pattern.edges[pe]
                for he in sorted(host.edges):
                    if he in used or he in em.values():
                        continue
                    hu, hv = host.edges[he]
                    if hu in matched or hv in matched:
                        continue
                    for cu, cv in ((hu, hv), (hv, hu)):
                        em2 = dict(em)
                        em2[pe] = he
                        ba2 = dict(ba)
                        ba2[pu] = (cu, he)
                        ba2[pv] = (cv, he)
                        yield from wires(k + 1, em2, ba2)
            yield from wires(0, emap, battach)

        results.extend(assignments(0, {}, {}))

    def backtrack(i, vmap):
        if len(results) >= cap:
            return
        if i == len(internal):
            emit(vmap)
            return
        pv = internal[i]
        sig = (pattern.vertices[pv], pattern.degree(pv))
        for hv in host_by_sig.get(sig, []):
            if hv in vmap.values():
                continue
            # adjacency consistency with already placed pattern vertices
            ok = True
            for pe, (pu, pw) in pattern.edges.items():
                if pv not in (pu, pw):
                    continue
                other = pw if pu == pv else pu
                if pattern.kind(other) == B or other not in vmap:
                    continue
                want = tuple(sorted((hv, vmap[other])))
                have = sum(1 for (hu2, hv2) in host.edges.values()
                           if tuple(sorted((hu2, hv2))) == want)
                need = sum(1 for (a, b) in pattern.edges.values()
                           if tuple(sorted((a, b))) == tuple(sorted((pv, other))))
                if have < need:
                    ok = False
                    break
            if ok:
                vmap[pv] = hv
                backtrack(i + 1, vmap)
                del vmap[pv]

    backtrack(0, {})
    return results


def find_matches(d: ZXDiagram, r: RewriteRule) -> list[Embedding]:
    """Embeddings of r.lhs into d, deduplicated by the rule's symmetries.

    Matches that differ only by a permutation of lhs legs extending to an
    automorphism of both rule sides rewrite to isomorphic results, so one
    representative per class is returned, in deterministic order.
    """
    embs = _embeddings(r.lhs, d)
    group = rule_symmetry_group(r)
    blist = r.lhs.boundary()
    seen: set[tuple] = set()
    out = []
    for emb in embs:
        keys = []
        for perm in group:
            att = tuple(emb.battach[blist[perm[i]]][1] for i in range(len(blist)))
            keys.append((tuple(sorted(emb.vmap.values())), att))
        key = min(keys) if keys else emb.signature()
        if key in seen:
            continue
        seen.add(key)
        out.append(emb)
    return out


def apply(d: ZXDiagram, r: RewriteRule, emb: Embedding) -> ZXDiagram:
    """Apply the rule at a matched occurrence of its lhs."""
    new, _ = substitute(d, emb, r.rhs, dict(r.boundary_map))
    return new


def verify_semantics(r: RewriteRule, tol: float = 1e-9, **budget) -> bool:
    return equal_up_to_scalar(interpret(r.lhs, **budget), interpret(r.rhs, **budget), tol)


@dataclass
class PreservationReport:
    verdict: str  # preserving | non-decreasing-only | refuted
    witness: ErrorSet | None = None
    witness_side: str | None = None  # which side carries the witness error
    equivalent: ErrorSet | None = None  # cheapest matching error on the other side
    stats: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict == "preserving"


class _ErrorTable:
    """Lazily built map from canonical interpretation to min error weight."""

    def __init__(self, d: ZXDiagram, tol: float):
        self.d = d
        self.edges = sorted(d.edges)
        self.table: dict[tuple, tuple[int, ErrorSet]] = {}
        self.filled_to = -1
        self.base = interpret(d)
        self._leg_of: dict[int, tuple[str, int]] = {}
        for pos, vid in enumerate(d.inputs):
            (eid, _), = d.incident(vid)
            self._leg_of[eid] = ("in", pos)
        for pos, vid in enumerate(d.outputs):
            (eid, _), = d.incident(vid)
            self._leg_of[eid] = ("out", pos)

    def _interp(self, err: ErrorSet):
        by_edge = err.by_edge()
        if all(e in self._leg_of for e in by_edge):
            outs = {p: k for e, k in by_edge.items()
                    for s, p in [self._leg_of[e]] if s == "out"}
            ins = {p: k for e, k in by_edge.items()
                   for s, p in [self._leg_of[e]] if s == "in"}
            return apply_boundary_paulis(self.base, outs, ins)
        return interpret(apply_error(self.d, err), validate=False)

    def fill_to(self, weight: int) -> None:
        weight = min(weight, len(self.edges))
        while self.filled_to < weight:
            w = self.filled_to + 1
            errs = [ErrorSet(frozenset())] if w == 0 else enumerate_errors(self.edges, w)
            for err in errs:
                key = canonical_key(self._interp(err))
                if key not in self.table:
                    self.table[key] = (w, err)
            self.filled_to = w

    def lookup(self, key: tuple, max_weight: int) -> tuple[int, ErrorSet] | None:
        # extend the table only while the key is missing: matches usually
        # appear at much lower weight than the budget allows
        while True:
            hit = self.table.get(key)
            if hit is not None:
                return hit if hit[0] <= max_weight else None
            if self.filled_to >= min(max_weight, len(self.edges)):
                return None
            self.fill_to(self.filled_to + 1)

    def cheapest(self, key: tuple) -> tuple[int, ErrorSet] | None:
        self.fill_to(len(self.edges))
        return self.table.get(key)


def _direction_check(src: ZXDiagram, dst: ZXDiagram, tol: float):
    """Check every error on dst's internal edges against errors on src.

    Returns (ok, witness, equivalent, stats).  dst plays the role of the
    rewritten side: each internal error must be detectable or matched by a
    src error of no greater weight.
    """
    internal = dst.internal_edges()
    regions = detecting_regions(dst)
    pmat = detector_matrix(dst, regions)
    base = interpret(dst)
    if base.is_zero():
        raise DiagramError("rewrite side interprets to zero; cannot certify")
    table = _ErrorTable(src, tol)
    stats = {"candidates": 0, "syndrome_filtered": 0, "semantic_zero": 0, "matched": 0}
    for w in range(1, len(internal) + 1):
        for err in enumerate_errors(internal, w):
            stats["candidates"] += 1
            if np.any(pmat.syndrome(err)):
                stats["syndrome_filtered"] += 1  # detectable by the theorem
                continue
            faulty = interpret(apply_error(dst, err), validate=False)
            if faulty.is_zero():
                stats["semantic_zero"] += 1
                continue
            hit = table.lookup(canonical_key(faulty), w)
            if hit is None:
                cheap = table.cheapest(canonical_key(faulty))
                return False, err, (cheap[1] if cheap else None), stats
            stats["matched"] += 1
    return True, None, None, stats


def verify_distance_preserving(r: RewriteRule, tol: float = 1e-9,
                               max_internal: int = 10) -> PreservationReport:
    """Certify or refute distance preservation of a rule by enumeration.

    Forward direction: every error on rhs internal edges is detectable or has
    an lhs error of no greater weight with the same interpretation; the
    inverse direction swaps the sides.  Preserving needs both, refuted
    reports the minimal-weight irreparable witness.
    """
    for side, dd in (("rhs", r.rhs), ("lhs", r.lhs)):
        if len(dd.internal_edges()) > max_internal:
            raise DiagramError(f"{side} has too many internal edges for enumeration")
    if not verify_semantics(r, tol):
        raise DiagramError(f"rule {r.name} is not semantically sound")
    fwd_ok, fwd_wit, fwd_eq, fwd_stats = _direction_check(r.lhs, r.rhs, tol)
    if not fwd_ok:
        return PreservationReport("refuted", fwd_wit, "rhs", fwd_eq, {"forward": fwd_stats})
    inv_ok, inv_wit, inv_eq, inv_stats = _direction_check(r.rhs, r.lhs, tol)
    if not inv_ok:
        return PreservationReport("non-decreasing-only", inv_wit, "lhs", inv_eq,
                                  {"forward": fwd_stats, "inverse": inv_stats})
    return PreservationReport("preserving", stats={"forward": fwd_stats, "inverse": inv_stats})
