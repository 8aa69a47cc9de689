"""The named rewrite rule library.

Rule shapes are reconstructed from the structural data stated with each
theorem (spider counts, leg counts, internal-edge counts); every constructor
is gated by a dense semantic equality check, so a wrong reconstruction fails
loudly at build time.  Rules are stated for green spiders; `colour_flipped`
gives the red forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import B, H, X, Z, OPPOSITE, ZXDiagram, DiagramError, single_spider
from .interpret import equal_up_to_scalar, interpret


@dataclass
class RewriteRule:
    name: str
    lhs: ZXDiagram
    rhs: ZXDiagram
    boundary_map: dict[int, int]  # lhs boundary vertex -> rhs boundary vertex
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        lb, rb = self.lhs.boundary(), self.rhs.boundary()
        if len(lb) != len(rb):
            raise DiagramError("rule boundary arities differ")
        if set(self.boundary_map) != set(lb) or set(self.boundary_map.values()) != set(rb):
            raise DiagramError("boundary map is not a bijection of the boundaries")

    def check_semantics(self, tol: float = 1e-9, max_boundary: int = 16) -> bool:
        if len(self.lhs.boundary()) > max_boundary:
            return True  # outside the dense budget; trusted to the verifier suite
        return equal_up_to_scalar(interpret(self.lhs), interpret(self.rhs), tol)

    def inverse(self) -> "RewriteRule":
        return RewriteRule(self.name + "^-1", self.rhs, self.lhs,
                           {v: k for k, v in self.boundary_map.items()}, dict(self.params))

    def colour_flipped(self) -> "RewriteRule":
        return RewriteRule(self.name, self.lhs.colour_flipped(), self.rhs.colour_flipped(),
                           dict(self.boundary_map), dict(self.params))


def _finish(name: str, lhs: ZXDiagram, rhs: ZXDiagram, params: dict, check: bool = True) -> RewriteRule:
    bmap = dict(zip(lhs.boundary(), rhs.boundary()))
    rule = RewriteRule(name, lhs, rhs, bmap, params)
    if check and not rule.check_semantics():
        raise DiagramError(f"reconstruction of {name} fails the semantic gate")
    return rule


def r_elim() -> RewriteRule:
    """Degree-2 phase-0 spider equals the bare wire; no internal edges."""
    lhs = single_spider(Z, 0, 0, 2)
    rhs = ZXDiagram()
    b1 = rhs.add_boundary("out")
    b2 = rhs.add_boundary("out")
    rhs.add_edge(b1, b2)
    return _finish("r_elim", lhs, rhs, {})


def r_fuse(n: int = 3) -> RewriteRule:
    """Unfuse a degree-1 phase-0 spider from an n-legged spider.

    The pendant absorbs opposite-colour flips on the single internal edge,
    which is what makes the rewrite distance-preserving.
    """
    if n < 1:
        raise DiagramError("r_fuse needs n >= 1")
    lhs = single_spider(Z, 0, 0, n)
    rhs = single_spider(Z, 0, 0, n)
    s = rhs.spiders()[0]
    p = rhs.add_vertex(Z, 0)
    rhs.add_edge(s, p)
    return _finish("r_fuse", lhs, rhs, {"n": n})


def _cycle_rhs(n_legs: int, cycle_positions: list[int]) -> ZXDiagram:
    """Cycle of degree-3 spiders, one boundary leg each, wired in the given
    cyclic order of leg positions."""
    rhs = ZXDiagram()
    spiders = []
    for _ in range(n_legs):
        b = rhs.add_boundary("out")
        s = rhs.add_vertex(Z, 0)
        rhs.add_edge(b, s)
        spiders.append(s)
    ordered = [spiders[i] for i in cycle_positions]
    for i in range(len(ordered)):
        rhs.add_edge(ordered[i], ordered[(i + 1) % len(ordered)])
    return rhs


def r_4() -> RewriteRule:
    """Four-legged spider as a 4-cycle of three-legged spiders.

    The cycle is the diagram's single green detecting region.  Legs 1,2 and
    legs 3,4 sit on cycle-adjacent spiders so a flow's two through-paths can
    cover the cycle (legs pair (1,2) and (3,4)).
    """
    lhs = single_spider(Z, 0, 0, 4)
    rhs = _cycle_rhs(4, [0, 1, 3, 2])
    return _finish("r_4", lhs, rhs, {})


def r_5() -> RewriteRule:
    """Five-legged spider as a 5-cycle of three-legged spiders."""
    lhs = single_spider(Z, 0, 0, 5)
    rhs = _cycle_rhs(5, [0, 1, 2, 3, 4])
    return _finish("r_5", lhs, rhs, {})


def _gadget_rhs(n: int, extra_leg_on_b: bool) -> ZXDiagram:
    """Two centre spiders plus n/2 four-legged gadgets, each gadget wired to
    both centres; boundary legs pair (2i-1, 2i) on gadget i."""
    rhs = ZXDiagram()
    a = rhs.add_vertex(Z, 0)
    b = rhs.add_vertex(Z, 0)
    for _ in range(n // 2):
        o = rhs.add_vertex(Z, 0)
        b1 = rhs.add_boundary("out")
        b2 = rhs.add_boundary("out")
        rhs.add_edge(b1, o)
        rhs.add_edge(b2, o)
        rhs.add_edge(o, a)
        rhs.add_edge(o, b)
    if extra_leg_on_b:
        bx = rhs.add_boundary("out")
        rhs.add_edge(bx, b)
    return rhs


def r_n_plus(n: int) -> RewriteRule:
    """n-legged spider from two n/2-legged centres and n/2 four-legged
    gadgets; the n gadget-to-centre edges are the internal error locations."""
    if n % 2 != 0 or n < 2:
        raise DiagramError("r_{n+} needs even n >= 2")
    lhs = single_spider(Z, 0, 0, n)
    rhs = _gadget_rhs(n, extra_leg_on_b=False)
    return _finish("r_n+", lhs, rhs, {"n": n})


def r_n(n: int) -> RewriteRule:
    """(n+1)-legged spider from an n/2-legged centre, an (n/2+1)-legged
    centre and n/2 four-legged gadgets (even n)."""
    if n % 2 != 0 or n < 2:
        raise DiagramError("r_n needs even n >= 2")
    lhs = single_spider(Z, 0, 0, n + 1)
    rhs = _gadget_rhs(n, extra_leg_on_b=True)
    return _finish("r_n", lhs, rhs, {"n": n})


def measure_prepare_merge(measure_basis: str = "Z", prepare_basis: str = "Z") -> RewriteRule:
    """Merge a destructive measurement followed by a fresh preparation into
    two chained weight-1 measurements on a continuous wire.

    The LHS is the disconnected effect/state pair; a Z-basis pair interprets
    proportionally to |0><0|.  The RHS chains the two weight-1 measurement
    gadgets (wire spider with an opposite-colour pendant).
    """
    if measure_basis not in ("Z", "X") or prepare_basis not in ("Z", "X"):
        raise DiagramError("bases must be Z or X")
    effect_kind = X if measure_basis == "Z" else Z   # <0| is the red state
    state_kind = X if prepare_basis == "Z" else Z
    lhs = ZXDiagram()
    bi = lhs.add_boundary("in")
    bo = lhs.add_boundary("out")
    m = lhs.add_vertex(effect_kind, 0)
    p = lhs.add_vertex(state_kind, 0)
    lhs.add_edge(bi, m)
    lhs.add_edge(p, bo)

    rhs = ZXDiagram()
    ri = rhs.add_boundary("in")
    ro = rhs.add_boundary("out")
    a = rhs.add_vertex(Z if measure_basis == "Z" else X, 0)
    b = rhs.add_vertex(Z if prepare_basis == "Z" else X, 0)
    pa = rhs.add_vertex(OPPOSITE[rhs.kind(a)], 0)
    pb = rhs.add_vertex(OPPOSITE[rhs.kind(b)], 0)
    rhs.add_edge(ri, a)
    rhs.add_edge(a, b)
    rhs.add_edge(b, ro)
    rhs.add_edge(a, pa)
    rhs.add_edge(b, pb)
    name = "r_Pauli-1" if (measure_basis, prepare_basis) == ("Z", "Z") \
        else f"r_Pauli-1[{measure_basis}{prepare_basis}]"
    return _finish(name, lhs, rhs, {"measure": measure_basis, "prepare": prepare_basis})


def r_pauli_1() -> RewriteRule:
    """Two consecutive weight-one Z measurements for a measure/prepare pair."""
    return measure_prepare_merge("Z", "Z")


def r_naive() -> RewriteRule:
    """Deliberately non-preserving specimen: the measurement spider as an
    ancilla chain of CNOT targets capped by |0> and <0|."""
    lhs = single_spider(X, 0, 0, 4)
    rhs = ZXDiagram()
    cap_in = rhs.add_vertex(X, 0)
    prev = cap_in
    for _ in range(4):
        t = rhs.add_vertex(X, 0)
        b = rhs.add_boundary("out")
        rhs.add_edge(b, t)
        rhs.add_edge(prev, t)
        prev = t
    cap_out = rhs.add_vertex(X, 0)
    rhs.add_edge(prev, cap_out)
    return _finish("r_naive", lhs, rhs, {})


_CATALOGUE = {
    "r_elim": lambda n=None: r_elim(),
    "r_fuse": lambda n=None: r_fuse(3 if n is None else n),
    "r_4": lambda n=None: r_4(),
    "r_5": lambda n=None: r_5(),
    "r_n+": lambda n=None: r_n_plus(8 if n is None else n),
    "r_n": lambda n=None: r_n(8 if n is None else n),
    "r_Pauli-1": lambda n=None: r_pauli_1(),
    "r_naive": lambda n=None: r_naive(),
}

RULE_NAMES = tuple(_CATALOGUE)


def rule(name: str, n: int | None = None) -> RewriteRule:
    """Instantiate a library rule by name (with leg parameter where it applies)."""
    if name not in _CATALOGUE:
        raise DiagramError(f"unknown rule {name!r}; have {', '.join(RULE_NAMES)}")
    return _CATALOGUE[name](n)


def catalogue_summary() -> list[dict]:
    out = []
    for name in RULE_NAMES:
        r = rule(name)
        out.append({
            "name": name,
            "params": r.params,
            "lhs_internal_edges": len(r.lhs.internal_edges()),
            "rhs_internal_edges": len(r.rhs.internal_edges()),
            "boundary_legs": len(r.lhs.boundary()),
        })
    return out
