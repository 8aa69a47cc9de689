import numpy as np
import pytest

from floqzx import LinearMap, ZXDiagram

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron(*mats):
    out = np.array([[1]], dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def pauli_matrix(letters: str) -> np.ndarray:
    return kron(*(PAULI[c] for c in letters))


def projector(letters: str) -> LinearMap:
    """Dense (I + P)/2 as a LinearMap, qubit 0 most significant."""
    n = len(letters)
    mat = (np.eye(2 ** n) + pauli_matrix(letters)) / 2
    return LinearMap(mat.astype(complex), 0, n, n)


def as_map(mat: np.ndarray, out_arity: int, in_arity: int) -> LinearMap:
    return LinearMap(np.asarray(mat, dtype=complex), 0, out_arity, in_arity)


def zz_measurement(n_qubits: int = 2, qubits=(0, 1)) -> ZXDiagram:
    """One weight-2 Z parity measurement fragment on open wires."""
    from floqzx.synth import Wires, build_fragment

    d = ZXDiagram()
    w = Wires(d, n_qubits)
    build_fragment(w, {q: "Z" for q in qubits})
    w.close()
    return d


@pytest.fixture
def code_422():
    from floqzx import parse_code

    return parse_code("n 4\nXXXX\nZZZZ\n")


@pytest.fixture
def code_513():
    from floqzx import parse_code

    return parse_code("n 5\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n")
