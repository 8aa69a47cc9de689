"""Signed Pauli strings and the instantaneous stabiliser group of a circuit.

Paulis are stored as i^phase * prod_q X_q^{x_q} Z_q^{z_q} with x, z bitmasks
and a global phase mod 4 (so the letter Y carries a stored phase of 1).  The
group starts empty: the identity circuit stabilises nothing.  Unitaries
conjugate the generators; a post-selected measurement extends the group,
leaves it alone, or replaces an anticommuting generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .diagram import DiagramError


class PostselectionZero(RuntimeError):
    """A forced-outcome measurement contradicts the group: the k=0 branch
    has amplitude zero."""


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int
    z: int
    phase: int = 0  # power of i, mod 4

    @classmethod
    def from_letters(cls, letters: str, sign: int = 1) -> "PauliString":
        x = z = 0
        phase = 0 if sign == 1 else 2
        for i, c in enumerate(letters):
            if c == "X":
                x |= 1 << i
            elif c == "Z":
                z |= 1 << i
            elif c == "Y":
                x |= 1 << i
                z |= 1 << i
                phase += 1  # Y = i XZ
            elif c != "I":
                raise DiagramError(f"bad Pauli letter {c!r}")
        return cls(len(letters), x, z, phase % 4)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        return cls.from_letters("".join(letter if i == qubit else "I" for i in range(n)))

    def letters(self) -> str:
        return "".join("IXZY"[((self.x >> i) & 1) + 2 * ((self.z >> i) & 1)]
                       for i in range(self.n))

    def sign(self) -> int:
        """+1 or -1 for Hermitian strings (phase and Y count must agree)."""
        ys = bin(self.x & self.z).count("1")
        residue = (self.phase - ys) % 4
        if residue == 0:
            return 1
        if residue == 2:
            return -1
        raise DiagramError("non-Hermitian phase on Pauli string")

    def weight(self) -> int:
        return bin(self.x | self.z).count("1")

    def commutes(self, other: "PauliString") -> bool:
        anti = bin(self.x & other.z).count("1") + bin(self.z & other.x).count("1")
        return anti % 2 == 0

    def mul(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise DiagramError("length mismatch")
        # moving this string's Z block past the other's X block
        flips = bin(self.z & other.x).count("1")
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z,
                           (self.phase + other.phase + 2 * flips) % 4)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0


# images of X and Z under conjugation, as (x, z, phase) one-qubit strings
_GATE_IMAGES = {
    "H": ((0, 1, 0), (1, 0, 0)),
    "S": ((1, 1, 1), (0, 1, 0)),
    "Sdg": ((1, 1, 3), (0, 1, 0)),
    "Z": ((1, 0, 2), (0, 1, 0)),
    "X": ((1, 0, 0), (0, 1, 2)),
    "SX": ((1, 0, 0), (1, 1, 3)),
    "SXdg": ((1, 0, 0), (1, 1, 1)),
    "I": ((1, 0, 0), (0, 1, 0)),
}


def conjugate_gate(p: PauliString, gate: str, qubit: int) -> PauliString:
    if gate not in _GATE_IMAGES:
        raise DiagramError(f"unknown gate {gate!r}")
    xb, zb = (p.x >> qubit) & 1, (p.z >> qubit) & 1
    if not xb and not zb:
        return p
    img_x, img_z = (PauliString(1, *_GATE_IMAGES[gate][0]),
                    PauliString(1, *_GATE_IMAGES[gate][1]))
    local = PauliString(1, 0, 0, 0)
    if xb:
        local = local.mul(img_x)
    if zb:
        local = local.mul(img_z)
    x = (p.x & ~(1 << qubit)) | (local.x << qubit)
    z = (p.z & ~(1 << qubit)) | (local.z << qubit)
    return PauliString(p.n, x, z, (p.phase + local.phase) % 4)


def conjugate_cx(p: PauliString, ctrl: int, tgt: int) -> PauliString:
    """CX images: Xc -> XcXt and Zt -> ZcZt; in XZ storage no phase moves."""
    xc, zt = (p.x >> ctrl) & 1, (p.z >> tgt) & 1
    x = p.x ^ (xc << tgt)
    z = p.z ^ (zt << ctrl)
    return PauliString(p.n, x, z, p.phase)


def conjugate_swap(p: PauliString, a: int, b: int) -> PauliString:
    def swapped(v: int) -> int:
        ba, bb = (v >> a) & 1, (v >> b) & 1
        return v & ~(1 << a) & ~(1 << b) | (bb << a) | (ba << b)

    return PauliString(p.n, swapped(p.x), swapped(p.z), p.phase)


def _lead(p: PauliString) -> int | None:
    key = (p.x << p.n) | p.z
    return key.bit_length() - 1 if key else None


def _bit(p: PauliString, lead: int) -> bool:
    key = (p.x << p.n) | p.z
    return (key >> lead) & 1 == 1


class StabiliserTableau:
    """Generators of the instantaneous stabiliser group S_t."""

    def __init__(self, n: int):
        self.n = n
        self.gens: list[PauliString] = []

    def copy(self) -> "StabiliserTableau":
        t = StabiliserTableau(self.n)
        t.gens = list(self.gens)
        return t

    def size(self) -> int:
        return len(self.gens)

    def _echelon(self) -> list[tuple[int, PauliString]]:
        ech: list[tuple[int, PauliString]] = []
        for g in self.gens:
            cur = g
            for lead, h in ech:
                if _bit(cur, lead):
                    cur = cur.mul(h)
            l = _lead(cur)
            if l is not None:
                ech.append((l, cur))
        return ech

    def reduce(self, p: PauliString) -> PauliString:
        for lead, h in self._echelon():
            if _bit(p, lead):
                p = p.mul(h)
        return p

    def membership(self, p: PauliString) -> str:
        """'plus' / 'minus' when p is in the group up to sign, else 'no'."""
        r = self.reduce(p)
        if not r.is_identity():
            return "no"
        return "plus" if r.phase % 4 == 0 else "minus"

    def contains_unsigned(self, p: PauliString) -> bool:
        return self.reduce(p).is_identity()

    def in_normaliser(self, p: PauliString) -> bool:
        return all(p.commutes(g) for g in self.gens)

    def measure(self, p: PauliString) -> tuple[str, PauliString | None]:
        """Post-selected (k=0) measurement update.

        Returns ('deterministic', None) when the outcome was fixed,
        ('extended', None) when an independent commuting operator joins the
        group, or ('random', pivot) when the anticommuting generator `pivot`
        is replaced.  Raises PostselectionZero when the outcome is forced
        to -1.
        """
        anti = [i for i, g in enumerate(self.gens) if not g.commutes(p)]
        if not anti:
            m = self.membership(p)
            if m == "plus":
                return "deterministic", None
            if m == "minus":
                raise PostselectionZero(f"measurement of {p.letters()} forced to -1")
            self.gens.append(p)
            return "extended", None
        g0 = self.gens[anti[0]]
        for i in anti[1:]:
            self.gens[i] = self.gens[i].mul(g0)
        self.gens[anti[0]] = p
        return "random", g0

    def apply_gate(self, gate: str, qubit: int) -> None:
        self.gens = [conjugate_gate(g, gate, qubit) for g in self.gens]

    def apply_cx(self, ctrl: int, tgt: int) -> None:
        self.gens = [conjugate_cx(g, ctrl, tgt) for g in self.gens]

    def apply_swap(self, a: int, b: int) -> None:
        self.gens = [conjugate_swap(g, a, b) for g in self.gens]

    def unsigned_matrix(self):
        import numpy as np

        rows = np.zeros((len(self.gens), 2 * self.n), dtype=np.uint8)
        for i, g in enumerate(self.gens):
            for q in range(self.n):
                rows[i, q] = (g.x >> q) & 1
                rows[i, self.n + q] = (g.z >> q) & 1
        return rows


def pauli_candidates(n: int, max_weight: int):
    """All non-identity Paulis up to max_weight, by increasing weight."""
    for w in range(1, max_weight + 1):
        for support in itertools.combinations(range(n), w):
            for letters in itertools.product("XZY", repeat=w):
                chosen = dict(zip(support, letters))
                yield PauliString.from_letters(
                    "".join(chosen.get(i, "I") for i in range(n)))
