"""End-to-end Floquetification of stabiliser codes.

The measurement circuit of a code is written out for two rounds with every
measurement in its distance-preserving decomposed form, the gadget wires of
consecutive measurements are joined by merging each destructive-measure /
prepare pair into two weight-1 measurements, the central spiders are reduced
to degree three, and one period of the extracted circuit becomes the body of
a periodic schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .circuit import Circuit, Op
from .diagram import B, OPPOSITE, X, Z, ZXDiagram, DiagramError
from .flow import MCFlow, Path, extract_circuit, reduce_degree, verify_flow
from .synth import Wires, build_fragment, normalise_pauli
from .tableau import (PauliString, PostselectionZero, StabiliserTableau,
                      pauli_candidates)


@dataclass
class StabiliserCode:
    n: int
    generators: list[PauliString]

    def __post_init__(self):
        for i, g in enumerate(self.generators):
            if g.n != self.n:
                raise DiagramError(f"generator {i} has wrong length")
            if g.is_identity():
                raise DiagramError(f"generator {i} is the identity")
        for i in range(len(self.generators)):
            for j in range(i + 1, len(self.generators)):
                if not self.generators[i].commutes(self.generators[j]):
                    raise DiagramError(f"generators {i} and {j} anticommute")
        from . import gf2
        import numpy as np

        t = StabiliserTableau(self.n)
        t.gens = list(self.generators)
        mat = t.unsigned_matrix()
        if gf2.rank(mat) != len(self.generators):
            raise DiagramError("generators are not independent")

    @property
    def max_weight(self) -> int:
        return max((g.weight() for g in self.generators), default=0)

    def letter_strings(self) -> list[str]:
        return [g.letters() for g in self.generators]


def parse_code(text: str) -> StabiliserCode:
    """Code file: line 1 `n <N>`, then one generator Pauli string per line."""
    n = None
    gens: list[PauliString] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            parts = line.split()
            if parts[0] != "n" or len(parts) != 2:
                raise DiagramError(f"line {lineno}: expected 'n <N>'")
            n = int(parts[1])
            continue
        if len(line) != n:
            raise DiagramError(f"line {lineno}: generator length != {n}")
        gens.append(PauliString.from_letters(line))
    if n is None:
        raise DiagramError("empty code file")
    return StabiliserCode(n, gens)


def build_measurement_circuit(code: StabiliserCode, rounds: int) -> ZXDiagram:
    """Sequential generator fragments per round, open at both ends."""
    if rounds < 1:
        raise DiagramError("rounds must be >= 1")
    d = ZXDiagram()
    w = Wires(d, code.n)
    for _ in range(rounds):
        for g in code.letter_strings():
            letters = {i: c for i, c in enumerate(g) if c != "I"}
            build_fragment(w, letters)
    w.close()
    return d


def established_window(code: StabiliserCode, guard_rounds: int = 1
                       ) -> tuple[ZXDiagram, list[int]]:
    """Measurement-circuit diagram with establishing and detecting guard
    rounds; returns the diagram and the edge ids of the middle round, the
    window over which errors model single-round faults of the running code."""
    d = ZXDiagram()
    w = Wires(d, code.n)
    gens = code.letter_strings()

    def one_round():
        for g in gens:
            build_fragment(w, {i: c for i, c in enumerate(g) if c != "I"})

    for _ in range(guard_rounds):
        one_round()
    before = set(d.edges)
    one_round()
    window = sorted(set(d.edges) - before)
    for _ in range(guard_rounds):
        one_round()
    w.close()
    return d, window


# -- periodic schedules ------------------------------------------------------


@dataclass
class PeriodicSchedule:
    qubits: int
    prologue: list[Op] = field(default_factory=list)
    body: list[Op] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"qubits {self.qubits}", "prologue:"]
        lines += [op.to_text() for op in self.prologue]
        lines.append("body:")
        lines += [op.to_text() for op in self.body]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PeriodicSchedule":
        qubits = None
        section = None
        prologue: list[Op] = []
        body: list[Op] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("qubits"):
                qubits = int(line.split()[1])
            elif line == "prologue:":
                section = prologue
            elif line == "body:":
                section = body
            else:
                if section is None:
                    raise DiagramError("op line outside prologue/body")
                section.append(Op.from_text(line))
        if qubits is None:
            raise DiagramError("schedule missing qubit count")
        return cls(qubits, prologue, body)


def reorder(s: PeriodicSchedule) -> PeriodicSchedule:
    """Move the body's first op into the prologue and rotate the body."""
    if not s.body:
        raise DiagramError("cannot reorder an empty body")
    first = s.body[0]
    return PeriodicSchedule(s.qubits, s.prologue + [first], s.body[1:] + [first])


def unroll(s: PeriodicSchedule, k: int) -> PeriodicSchedule:
    if k < 1:
        raise DiagramError("unroll needs k >= 1")
    return PeriodicSchedule(s.qubits, list(s.prologue), list(s.body) * k)


def _relabel_op(op: Op, perm: dict[int, int]) -> Op:
    return Op(op.kind, tuple(perm.get(q, q) for q in op.qubits), op.name,
              op.pauli and "".join(op.pauli[_inv(perm).get(i, i)] for i in range(len(op.pauli))))


def _inv(perm: dict[int, int]) -> dict[int, int]:
    return {v: k for k, v in perm.items()}


def _perm_order(perm: dict[int, int]) -> int:
    order = 1
    seen = set()
    for start in perm:
        if start in seen:
            continue
        length = 0
        q = start
        while True:
            seen.add(q)
            q = perm[q]
            length += 1
            if q == start:
                break
        order = order * length // math.gcd(order, length)
    return order


def remove_swaps(s: PeriodicSchedule) -> PeriodicSchedule:
    """Absorb SWAPs into a relabelling, unroll by the permutation's order and
    keep the minimal repeating sub-period."""
    pending: dict[int, int] = {q: q for q in range(s.qubits)}
    flat: list[Op] = []
    for op in s.body:
        if op.kind == "SWAP":
            a, b = op.qubits
            tau = {a: b, b: a}
            pending = {q: tau.get(v, v) for q, v in pending.items()}
        else:
            flat.append(_relabel_op(op, pending))
    if all(pending[q] == q for q in pending):
        return PeriodicSchedule(s.qubits, list(s.prologue), flat)
    k = _perm_order(pending)
    unrolled: list[Op] = []
    power = {q: q for q in pending}
    for _ in range(k):
        unrolled.extend(_relabel_op(op, power) for op in flat)
        power = {q: pending[power[q]] for q in power}
    # minimal repeating sub-period
    total = len(unrolled)
    for sub in range(1, total + 1):
        if total % sub == 0 and unrolled == unrolled[:sub] * (total // sub):
            unrolled = unrolled[:sub]
            break
    return PeriodicSchedule(s.qubits, list(s.prologue), unrolled)


def apply_op(t: StabiliserTableau, op: Op) -> None:
    k = op.kind
    if k in ("PZ", "PX", "DZ", "DX", "M1Z", "M1X"):
        t.measure(PauliString.single(t.n, op.qubits[0], k[-1]))
    elif k in ("M2Z", "M2X"):
        letters = {q: k[-1] for q in op.qubits}
        t.measure(PauliString.from_letters(
            "".join(letters.get(i, "I") for i in range(t.n))))
    elif k == "C":
        t.apply_gate(op.name, op.qubits[0])
    elif k == "CX":
        t.apply_cx(*op.qubits)
    elif k == "SWAP":
        t.apply_swap(*op.qubits)
    elif k == "M":
        pauli = op.pauli + "I" * (t.n - len(op.pauli))
        t.measure(PauliString.from_letters(pauli))
    else:
        raise DiagramError(f"cannot simulate op {op}")


def simulate(s: PeriodicSchedule, rounds: int = 3
             ) -> tuple[list[StabiliserTableau], int | None]:
    """Tableau after every op of `rounds` periods, plus the establishment
    step: the first op count after which |S_t| stays constant for a full
    period."""
    if rounds < 2:
        raise DiagramError("simulate needs at least two periods")
    t = StabiliserTableau(s.qubits)
    sizes: list[int] = []
    tabs: list[StabiliserTableau] = []
    for op in s.prologue:
        apply_op(t, op)
    tabs.append(t.copy())
    sizes.append(t.size())
    for _ in range(rounds):
        for op in s.body:
            apply_op(t, op)
            tabs.append(t.copy())
            sizes.append(t.size())
    period = len(s.body)
    established = None
    for i in range(len(sizes)):
        if i + period < len(sizes) and all(sizes[j] == sizes[i]
                                           for j in range(i, i + period + 1)):
            established = i
            break
    return tabs, established


# -- brute-force distance of a periodic schedule ------------------------------


def _op_measurement(op: Op, n: int) -> PauliString | None:
    k = op.kind
    if k in ("PZ", "PX", "DZ", "DX", "M1Z", "M1X"):
        return PauliString.single(n, op.qubits[0], k[-1])
    if k in ("M2Z", "M2X"):
        letters = {q: k[-1] for q in op.qubits}
        return PauliString.from_letters("".join(letters.get(i, "I") for i in range(n)))
    if k == "M":
        return PauliString.from_letters(op.pauli + "I" * (n - len(op.pauli)))
    return None


def _conjugate_by_op(p: PauliString, op: Op) -> PauliString:
    from .tableau import conjugate_cx, conjugate_gate, conjugate_swap

    if op.kind == "C":
        return conjugate_gate(p, op.name, op.qubits[0])
    if op.kind == "CX":
        return conjugate_cx(p, *op.qubits)
    if op.kind == "SWAP":
        return conjugate_swap(p, *op.qubits)
    raise DiagramError(f"op {op} is not a unitary")


def _error_outcome(snapshot: StabiliserTableau, future: list[Op],
                   p: PauliString) -> str:
    """Fate of a Pauli inserted into the stream: 'detected' when it flips a
    later forced outcome, else 'trivial' or 'live'.

    The error frame is carried through the reference tableau: a random
    anticommuting measurement replaces a pivot stabiliser g0, and the frame
    picks up g0 (the flipped branch equals g0 times the kept branch); the
    surviving frame is trivial iff it ends inside the stabiliser group.
    """
    ref = snapshot.copy()
    e = p
    for op in future:
        m = _op_measurement(op, ref.n)
        if m is None:
            e = _conjugate_by_op(e, op)
            apply_op(ref, op)
            continue
        status, pivot = ref.measure(m)
        if not e.commutes(m):
            if status == "deterministic":
                return "detected"
            if status == "extended":
                raise DiagramError("fresh random measurement after establishment")
            e = e.mul(pivot)
    return "trivial" if ref.contains_unsigned(e) else "live"


def schedule_distance(s: PeriodicSchedule, w_max: int | None = None,
                      check_periods: int = 4
                      ) -> tuple[int | None, tuple[PauliString, int] | None]:
    """Minimum weight of a single-time-step Pauli error, inserted anywhere in
    one post-establishment period, that never contradicts a later forced
    measurement outcome and does not end as a stabiliser.

    Detectability is judged against the actual future op stream (a flipped
    outcome of a deterministic measurement), not against N(S_t) alone, which
    would miss errors caught only by later re-measurement.
    """
    tabs, established = simulate(s, rounds=check_periods + 2)
    if established is None:
        raise DiagramError("schedule did not establish")
    period = len(s.body)
    if not any(g for g in tabs[established].gens):
        return None, None  # no stabilisers: distance undefined, report > n
    cap = w_max if w_max is not None else s.qubits
    stream = list(s.body) * (check_periods + 2)
    for w in range(1, cap + 1):
        for offset in range(period):
            t_idx = established + offset
            snapshot = tabs[t_idx]
            future = stream[t_idx:t_idx + check_periods * period]
            for p in pauli_candidates(s.qubits, w):
                if p.weight() != w:
                    continue
                if snapshot.contains_unsigned(p):
                    continue  # trivial from the start
                if _error_outcome(snapshot, future, p) == "live":
                    return w, (p, t_idx)
    return None, None


@dataclass
class CodeParams:
    n: int
    k: int
    d: int | None
    establishment: int | None
    ancilla_overhead: int | None = None

    def distance_text(self) -> str:
        return str(self.d) if self.d is not None else f">{self.n}"


def code_params(s: PeriodicSchedule, w_max: int | None = None) -> CodeParams:
    tabs, established = simulate(s)
    if established is None:
        raise DiagramError("schedule not established within the simulated window")
    size = tabs[established].size()
    d, _ = schedule_distance(s, w_max=w_max)
    return CodeParams(s.qubits, s.qubits - size, d, established)


def code_schedule(code: StabiliserCode) -> PeriodicSchedule:
    """The original code's schedule: one general measurement per generator."""
    body = [Op("M", tuple(i for i, c in enumerate(g) if c != "I"), pauli=g)
            for g in code.letter_strings()]
    return PeriodicSchedule(code.n, [], body)


# -- the Floquetification pipeline --------------------------------------------


@dataclass
class FloquetResult:
    schedule: PeriodicSchedule
    params: CodeParams
    audit: list


def floquetify(code: StabiliserCode, distance_cap: int | None = None) -> FloquetResult:
    """Algorithm: write out two rounds of decomposed measurements, merge every
    destructive-measure/prepare junction on the reused gadget wires, reduce
    spider degrees, extract, and keep one period as the schedule body."""
    if not code.generators:
        empty = PeriodicSchedule(code.n, [], [])
        tabs = StabiliserTableau(code.n)
        return FloquetResult(empty, CodeParams(code.n, code.n, None, 0, 0), [])

    audit: list = []
    d = ZXDiagram()
    w = Wires(d, code.n)
    gens = code.letter_strings()
    frags = []  # (round, layout)
    vertex_round: dict[int, int] = {}
    for rnd in (1, 2):
        for g in gens:
            letters = {i: c for i, c in enumerate(g) if c != "I"}
            lay = build_fragment(w, letters)
            audit.append(("decompose", {"round": rnd, "generator": g}))
            frags.append((rnd, lay))
            for v in lay.vertices:
                vertex_round[v] = rnd
    data_paths = w.close()

    # chain gadget slot i through all fragments that use it, merging each
    # junction into two weight-1 measurements (measure then prepare basis)
    slots = max(len(lay.gadget_cores) for _, lay in frags)
    gadget_paths: list[Path] = []
    dag: dict[int, set[int]] = {}
    for rnd, lay in frags:
        for a, b in lay.dag_edges:
            dag.setdefault(a, set()).add(b)
    for slot in range(slots):
        chain_v: list[int] = []
        chain_e: list[int] = []
        users = [(rnd, lay) for rnd, lay in frags if slot < len(lay.gadget_cores)]
        for idx, (rnd, lay) in enumerate(users):
            core, core_edges = lay.gadget_cores[slot]
            if idx == 0:
                start = d.add_vertex(d.kind(core[0]), 0)
                eid = d.add_edge(start, core[0])
                vertex_round[start] = 0  # prologue preparation
                chain_v.append(start)
                chain_e.append(eid)
                audit.append(("r_fuse", {"pendant": start, "at": core[0]}))
            else:
                # merge junction: previous chain end u -> A -> B -> core start
                u = chain_v[-1]
                mbasis = "Z" if d.kind(u) == X else "X"
                pbasis = "Z" if d.kind(core[0]) == X else "X"
                a = d.add_vertex(Z if mbasis == "Z" else X, 0)
                bvert = d.add_vertex(Z if pbasis == "Z" else X, 0)
                pa = d.add_vertex(OPPOSITE[d.kind(a)], 0)
                pb = d.add_vertex(OPPOSITE[d.kind(bvert)], 0)
                prev_round = vertex_round[u]
                for v in (a, bvert, pa, pb):
                    vertex_round[v] = prev_round
                e1 = d.add_edge(u, a)
                e2 = d.add_edge(a, bvert)
                e3 = d.add_edge(bvert, core[0])
                d.add_edge(a, pa)
                d.add_edge(bvert, pb)
                dag.setdefault(a, set()).add(pa)
                dag.setdefault(bvert, set()).add(pb)
                chain_v.extend([a, bvert])
                chain_e.extend([e1, e2, e3])
                audit.append(("r_Pauli-1", {"measure": mbasis, "prepare": pbasis,
                                            "junction": (u, core[0])}))
            chain_v.extend(core)
            chain_e.extend(core_edges)
        end = d.add_vertex(d.kind(chain_v[-1]), 0)
        eid = d.add_edge(chain_v[-1], end)
        vertex_round[end] = 3  # trailing measurement, discarded with round 2
        chain_v.append(end)
        chain_e.append(eid)
        audit.append(("r_fuse", {"pendant": end, "at": chain_v[-2]}))
        gadget_paths.append(Path(tuple(chain_v), tuple(chain_e)))

    flow = MCFlow(data_paths + gadget_paths, dag)
    rep = verify_flow(d, flow)
    if not rep.ok:
        raise DiagramError("floquetify flow invalid before reduction:\n" + str(rep))
    reduce_audit: list = []
    d, flow = reduce_degree(d, flow, audit=reduce_audit)
    # vertices created by degree reduction inherit the round of the spider
    # they replaced
    for _, info in reduce_audit:
        tag = vertex_round.get(info["at"])
        if tag is not None:
            for v in info.get("new_vertices", ()):
                vertex_round[v] = tag
    audit.extend(reduce_audit)
    circ, qubit_of, op_vertices = extract_circuit(d, flow)

    # slice the body: round-1 ops (junction chains tagged with their earlier
    # round); round-0 preps form the prologue
    op_rounds = []
    for verts in op_vertices:
        tags = [vertex_round[v] for v in verts if v in vertex_round]
        op_rounds.append(max(tags) if tags else 2)
    prologue = [op for op, r in zip(circ.ops, op_rounds) if r == 0]
    body = [op for op, r in zip(circ.ops, op_rounds) if r == 1]
    for op in prologue:
        if op.kind not in ("PZ", "PX"):
            raise DiagramError(f"unexpected prologue op {op}")
    for op in body:
        if op.kind in ("PZ", "PX", "DZ", "DX"):
            raise DiagramError(f"preparation or destructive measurement {op} in body")
    sched = remove_swaps(PeriodicSchedule(circ.n_qubits, prologue, body))

    params = code_params(sched, w_max=distance_cap)
    m = code.max_weight
    params.ancilla_overhead = sched.qubits - code.n
    expected = math.ceil(m / 2)
    pads = sum(1 for kind, _ in audit if kind == "r_fuse pad")
    if params.ancilla_overhead != expected + pads:
        raise DiagramError(
            f"ancilla overhead {params.ancilla_overhead} != ceil(m/2)+pads {expected + pads}")
    return FloquetResult(sched, params, audit)
