"""Circuits in low-weight Clifford and measurement form.

Gate set: single-qubit preparations and destructive measurements, single
qubit Cliffords, CNOT, weight-1 and weight-2 Z/X parity measurements and
SWAP (a wiring permutation).  A general Pauli measurement op `M` is kept for
describing the schedules of unrewritten codes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import H as HBOX
from .diagram import X, Z, ZXDiagram, DiagramError

_ONE_QUBIT = ("PZ", "PX", "DZ", "DX", "C", "M1Z", "M1X")
_TWO_QUBIT = ("CX", "M2Z", "M2X", "SWAP")
GATE_NAMES = ("I", "S", "Z", "Sdg", "SX", "X", "SXdg", "H")


@dataclass(frozen=True)
class Op:
    kind: str
    qubits: tuple[int, ...]
    name: str | None = None   # for C
    pauli: str | None = None  # for M

    def weight(self) -> int:
        if self.kind == "M":
            return sum(1 for c in self.pauli if c != "I")
        return len(self.qubits)

    def to_text(self) -> str:
        if self.kind == "C":
            return f"C {self.qubits[0]} {self.name}"
        if self.kind == "M":
            return f"M {self.pauli}"
        return f"{self.kind} " + " ".join(str(q) for q in self.qubits)

    @classmethod
    def from_text(cls, line: str) -> "Op":
        parts = line.split()
        kind = parts[0]
        if kind == "C":
            if parts[2] not in GATE_NAMES:
                raise DiagramError(f"unknown gate name {parts[2]!r}")
            return cls("C", (int(parts[1]),), name=parts[2])
        if kind == "M":
            return cls("M", tuple(i for i, c in enumerate(parts[1]) if c != "I"),
                       pauli=parts[1])
        if kind in _ONE_QUBIT:
            return cls(kind, (int(parts[1]),))
        if kind in _TWO_QUBIT:
            return cls(kind, (int(parts[1]), int(parts[2])))
        raise DiagramError(f"unknown op {kind!r}")


@dataclass
class Circuit:
    n_qubits: int
    ops: list[Op] = field(default_factory=list)

    def validate(self, alive_at_start: set[int] | None = None) -> None:
        """Preparation starts a wire, destructive measurement ends one."""
        alive = set(range(self.n_qubits)) if alive_at_start is None else set(alive_at_start)
        for op in self.ops:
            for q in op.qubits:
                if not 0 <= q < self.n_qubits:
                    raise DiagramError(f"qubit {q} out of range in {op}")
            if op.kind in ("PZ", "PX"):
                if op.qubits[0] in alive:
                    raise DiagramError(f"preparation on live wire {op.qubits[0]}")
                alive.add(op.qubits[0])
            elif op.kind in ("DZ", "DX"):
                if op.qubits[0] not in alive:
                    raise DiagramError(f"measurement of dead wire {op.qubits[0]}")
                alive.remove(op.qubits[0])
            else:
                for q in op.qubits:
                    if q not in alive:
                        raise DiagramError(f"op {op} on dead wire {q}")

    def to_text(self) -> str:
        return "".join(op.to_text() + "\n" for op in self.ops)

    @classmethod
    def from_text(cls, n_qubits: int, text: str) -> "Circuit":
        ops = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            ops.append(Op.from_text(line))
        return cls(n_qubits, ops)


_GATE_VERTEX = {
    "S": (Z, 1), "Z": (Z, 2), "Sdg": (Z, 3),
    "SX": (X, 1), "X": (X, 2), "SXdg": (X, 3),
}


class DiagramBuilder:
    """Grow a ZX diagram op by op, tracking each live wire's dangling end."""

    def __init__(self, live_inputs: list[int]):
        self.d = ZXDiagram()
        self.last: dict[int, int] = {}
        for q in live_inputs:
            self.last[q] = self.d.add_boundary("in")

    def _extend(self, q: int, vid: int) -> None:
        if q not in self.last:
            raise DiagramError(f"wire {q} is not live")
        self.d.add_edge(self.last[q], vid)
        self.last[q] = vid

    def prepare(self, q: int, basis: str) -> None:
        if q in self.last:
            raise DiagramError(f"wire {q} already live")
        self.last[q] = self.d.add_vertex(X if basis == "Z" else Z, 0)

    def destroy(self, q: int, basis: str) -> None:
        v = self.d.add_vertex(X if basis == "Z" else Z, 0)
        self._extend(q, v)
        del self.last[q]

    def gate(self, q: int, name: str) -> None:
        if name == "I":
            return
        if name == "H":
            v = self.d.add_vertex(HBOX, 0)
        else:
            kind, phase = _GATE_VERTEX[name]
            v = self.d.add_vertex(kind, phase)
        self._extend(q, v)

    def cx(self, ctrl: int, tgt: int) -> None:
        g = self.d.add_vertex(Z, 0)
        r = self.d.add_vertex(X, 0)
        self.d.add_edge(g, r)
        self._extend(ctrl, g)
        self._extend(tgt, r)

    def parity(self, qubits: tuple[int, ...], basis: str) -> None:
        kind = Z if basis == "Z" else X
        if len(qubits) == 1:
            w = self.d.add_vertex(kind, 0)
            p = self.d.add_vertex(X if kind == Z else Z, 0)
            self.d.add_edge(w, p)
            self._extend(qubits[0], w)
        else:
            ws = [self.d.add_vertex(kind, 0) for _ in qubits]
            self.d.add_edge(ws[0], ws[1])
            for q, w in zip(qubits, ws):
                self._extend(q, w)

    def measure_pauli(self, letters: dict[int, str]) -> None:
        """Fragment for a general Pauli measurement, post-selected on k=0.

        A uniform-X support is colour-normalised (red wire spiders, green
        centre); otherwise wires carry green spiders with H/S dressings for
        X/Y letters and the centre is red.
        """
        support = sorted(letters)
        if not support:
            return
        if all(letters[q] == "X" for q in support):
            centre = self.d.add_vertex(Z, 0)
            for q in support:
                w = self.d.add_vertex(X, 0)
                self._extend(q, w)
                self.d.add_edge(w, centre)
            return
        centre = self.d.add_vertex(X, 0)
        for q in support:
            letter = letters[q]
            if letter == "X":
                self.gate(q, "H")
            elif letter == "Y":
                self.gate(q, "Sdg")
                self.gate(q, "H")
            w = self.d.add_vertex(Z, 0)
            self._extend(q, w)
            self.d.add_edge(w, centre)
            if letter == "X":
                self.gate(q, "H")
            elif letter == "Y":
                self.gate(q, "H")
                self.gate(q, "S")

    def apply(self, op: Op) -> None:
        k = op.kind
        if k in ("PZ", "PX"):
            self.prepare(op.qubits[0], k[1])
        elif k in ("DZ", "DX"):
            self.destroy(op.qubits[0], k[1])
        elif k == "C":
            self.gate(op.qubits[0], op.name)
        elif k == "CX":
            self.cx(*op.qubits)
        elif k in ("M1Z", "M1X", "M2Z", "M2X"):
            self.parity(op.qubits, k[-1])
        elif k == "SWAP":
            a, b = op.qubits
            self.last[a], self.last[b] = self.last.get(b), self.last.get(a)
            for q in (a, b):
                if self.last[q] is None:
                    del self.last[q]
        elif k == "M":
            self.measure_pauli({i: c for i, c in enumerate(op.pauli) if c != "I"})
        else:
            raise DiagramError(f"cannot build diagram for op {op}")

    def finish(self) -> ZXDiagram:
        for q in sorted(self.last):
            b = self.d.add_boundary("out")
            self.d.add_edge(self.last[q], b)
        return self.d


def circuit_to_diagram(c: Circuit, live_inputs: list[int] | None = None) -> ZXDiagram:
    """Interpret a circuit as a ZX diagram (open wires for live qubits)."""
    if live_inputs is None:
        # wires whose first use is a preparation start dead
        first_use: dict[int, str] = {}
        for op in c.ops:
            for q in op.qubits:
                first_use.setdefault(q, op.kind)
        live_inputs = [q for q in range(c.n_qubits)
                       if first_use.get(q) not in ("PZ", "PX")]
    b = DiagramBuilder(live_inputs)
    for op in c.ops:
        b.apply(op)
    return b.finish()
