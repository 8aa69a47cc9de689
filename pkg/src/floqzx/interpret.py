"""Dense interpretation of ZX diagrams as linear maps.

Spider tensors are rescaled so every entry is a Gaussian integer, with the
global power of sqrt(2) tracked separately.  Sums and products of integers in
double precision are exact below 2**52, so the contraction result does not
depend on contraction order and zero maps are recognised exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagram import B, H, X, Z, ZXDiagram, DiagramError

_I_POW = np.array([1, 1j, -1, -1j], dtype=np.complex128)


class BudgetExceeded(RuntimeError):
    """Contraction would exceed the configured size budget."""


@dataclass
class LinearMap:
    """2^out x 2^in matrix stored as exact integers times 2**(sqrt2_pow/2).

    Row index bits follow the diagram's output order (first output is the
    most significant bit), column bits follow the input order.
    """

    ints: np.ndarray
    sqrt2_pow: int
    out_arity: int
    in_arity: int

    @property
    def entries(self) -> np.ndarray:
        return self.ints * (2.0 ** (self.sqrt2_pow / 2.0))

    def is_zero(self) -> bool:
        return not np.any(self.ints)

    def __repr__(self) -> str:
        return f"LinearMap({self.out_arity}<-{self.in_arity}, sqrt2_pow={self.sqrt2_pow})"


def _spider_tensor(kind: str, phase: int, degree: int) -> tuple[np.ndarray, int]:
    """Exact integer tensor for one generator, plus its sqrt(2) power."""
    w = _I_POW[phase % 4]
    if kind == Z:
        t = np.zeros((2,) * degree, dtype=np.complex128)
        t[(0,) * degree] += 1
        t[(1,) * degree] += w
        return t, 0
    if kind == X:
        idx = np.indices((2,) * degree).sum(axis=0) % 2 if degree else np.zeros((), dtype=int)
        t = 1 + w * np.where(idx % 2 == 0, 1, -1).astype(np.complex128)
        return t.reshape((2,) * degree), -degree
    if kind == H:
        return np.array([[1, 1], [1, -1]], dtype=np.complex128), -1
    raise DiagramError(f"no tensor for vertex kind {kind}")


def interpret(d: ZXDiagram, *, max_boundary: int = 16,
              max_intermediate: int = 1 << 22, validate: bool = True) -> LinearMap:
    """Contract the diagram's spider tensors into a LinearMap.

    The scalar is carried exactly; callers compare maps with
    :func:`equal_up_to_scalar`.
    """
    adjacency: dict[int, list[tuple[int, int]]] = {v: [] for v in d.vertices}
    for eid, (u, v) in d.edges.items():
        adjacency[u].append((eid, v))
        adjacency[v].append((eid, u))
    for lst in adjacency.values():
        lst.sort()
    if validate:
        report = d.validate()
        if not report.ok:
            raise DiagramError("invalid diagram: " + "; ".join(report.violations))
    n_in, n_out = len(d.inputs), len(d.outputs)
    if n_in + n_out > max_boundary:
        raise BudgetExceeded(f"{n_in + n_out} boundary legs exceed budget {max_boundary}")

    bset = set(d.boundary())
    open_pos: dict[tuple, tuple[str, int]] = {}
    tensors: list[tuple[np.ndarray, list[tuple]]] = []
    sqrt2_pow = 0

    # Edge labels; an edge between two boundaries becomes an explicit identity
    # tensor so each label stays open on exactly one side.
    side_label: dict[tuple[int, int], tuple] = {}
    for eid in sorted(d.edges):
        u, v = d.edges[eid]
        if u in bset and v in bset:
            la, lb = ("e", eid, 0), ("e", eid, 1)
            tensors.append((np.eye(2, dtype=np.complex128), [la, lb]))
            side_label[(eid, u)] = la
            side_label[(eid, v)] = lb
        else:
            side_label[(eid, u)] = side_label[(eid, v)] = ("e", eid)

    for pos, vid in enumerate(d.inputs):
        (eid, _), = adjacency[vid]
        open_pos[side_label[(eid, vid)]] = ("in", pos)
    for pos, vid in enumerate(d.outputs):
        (eid, _), = adjacency[vid]
        open_pos[side_label[(eid, vid)]] = ("out", pos)

    for vid in sorted(d.vertices):
        kind, phase = d.vertices[vid]
        if kind == B:
            continue
        inc = adjacency[vid]
        t, p = _spider_tensor(kind, phase, len(inc))
        sqrt2_pow += p
        tensors.append((t, [side_label[(eid, vid)] for eid, _ in inc]))

    result = _contract_all(tensors, max_intermediate)
    if result is None:
        mat = np.ones((1, 1), dtype=np.complex128)
        order: list[tuple] = []
        pow_adjust = 0
    else:
        mat, order, pow_adjust = result
    sqrt2_pow += pow_adjust

    # Arrange open axes as (outputs..., inputs...) and flatten.
    want = ([l for l, _ in sorted(((lab, open_pos[lab]) for lab in order),
                                  key=lambda t: (t[1][0] != "out", t[1][1]))])
    perm = [order.index(lab) for lab in want]
    mat = np.transpose(mat, perm) if perm else mat
    mat = mat.reshape(2 ** n_out, 2 ** n_in)
    # canonicalise the 2-power split so the representation is independent of
    # contraction order (intermediate rescaling depends on it)
    mat, halvings = _factor_out_twos(mat)
    sqrt2_pow += 2 * halvings
    _check_exact(mat)
    return LinearMap(mat, sqrt2_pow, n_out, n_in)


def _factor_out_twos(mat: np.ndarray) -> tuple[np.ndarray, int]:
    """Divide out the largest common power of two (entries stay integers)."""
    if not np.any(mat):
        return mat, 0
    halvings = 0
    while True:
        re = mat.real
        im = mat.imag
        if np.all(re % 2 == 0) and np.all(im % 2 == 0):
            mat = mat / 2
            halvings += 1
        else:
            return mat, halvings


def _contract_all(tensors, max_intermediate):
    if not tensors:
        return None
    pool: dict[int, tuple[np.ndarray, list[tuple]]] = dict(enumerate(tensors))
    next_id = len(tensors)
    pow_adjust = 0
    label_home: dict[tuple, set[int]] = {}
    for i, (_, labs) in pool.items():
        for lab in labs:
            label_home.setdefault(lab, set()).add(i)

    while True:
        pairs = {tuple(sorted(hom)) for hom in label_home.values() if len(hom) == 2}
        if not pairs:
            break
        best = None
        for i, j in pairs:
            li, lj = pool[i][1], pool[j][1]
            s = sum(1 for lab in li if lab in set(lj))
            key = (2 ** (len(li) + len(lj) - 2 * s), i, j)
            if best is None or key < best:
                best = key
        size, i, j = best
        if size > max_intermediate:
            raise BudgetExceeded(f"intermediate tensor of {size} entries exceeds budget")
        ti, li = pool.pop(i)
        tj, lj = pool.pop(j)
        lj_set = set(lj)
        sh = [lab for lab in li if lab in lj_set]
        tk = np.tensordot(ti, tj, axes=([li.index(l) for l in sh], [lj.index(l) for l in sh]))
        lk = [lab for lab in li + lj if lab not in sh]
        if tk.size and max(np.max(np.abs(tk.real)), np.max(np.abs(tk.imag))) > 2 ** 40:
            tk, halvings = _factor_out_twos(tk)
            pow_adjust += 2 * halvings
        k = next_id
        next_id += 1
        pool[k] = (tk, lk)
        for lab in sh:
            del label_home[lab]
        for lab in lk:
            home = label_home[lab]
            home.discard(i)
            home.discard(j)
            home.add(k)

    # outer product of disconnected components, deterministic order
    keys = sorted(pool)
    mat, order = pool[keys[0]]
    for k in keys[1:]:
        t, labs = pool[k]
        if mat.size * t.size > max_intermediate:
            raise BudgetExceeded("outer product exceeds budget")
        mat = np.tensordot(mat, t, axes=0)
        order = order + labs
        if mat.size and max(np.max(np.abs(mat.real)), np.max(np.abs(mat.imag))) > 2 ** 40:
            mat, halvings = _factor_out_twos(mat)
            pow_adjust += 2 * halvings
    return mat, list(order), pow_adjust


def _check_exact(mat: np.ndarray) -> None:
    m = float(np.max(np.abs(mat.real)) if mat.size else 0.0)
    m = max(m, float(np.max(np.abs(mat.imag)) if mat.size else 0.0))
    if m >= 2 ** 52:
        raise BudgetExceeded("integer contraction values too large for exact floats")


def equal_up_to_scalar(a: LinearMap, b: LinearMap, tol: float = 1e-9) -> bool:
    """True iff a = c*b for some nonzero scalar c, or both are the zero map.

    Matrices are normalised by their largest entry before the max-norm test,
    so `tol` is relative to the largest magnitude.
    """
    if (a.out_arity, a.in_arity) != (b.out_arity, b.in_arity):
        raise ValueError("arity mismatch")
    az, bz = a.is_zero(), b.is_zero()
    if az or bz:
        return az and bz
    an = a.ints / np.max(np.abs(a.ints))
    bn = b.ints / np.max(np.abs(b.ints))
    c = np.vdot(bn, an) / np.vdot(bn, bn)
    if abs(c) <= tol:
        return False
    return bool(np.max(np.abs(an - c * bn)) <= tol)


_PAULI_2x2 = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "Y": np.array([[0, 1], [-1, 0]], dtype=np.complex128),  # ZX, i.e. Y up to scalar
}


def apply_boundary_paulis(a: LinearMap, out_flips: dict[int, str],
                          in_flips: dict[int, str]) -> LinearMap:
    """Map with X/Z/Y flips applied on boundary legs (exact, up to scalar).

    Equivalent to inserting the corresponding pi spiders on the boundary
    edges of the interpreted diagram, which is much cheaper than
    re-contracting.
    """
    t = a.ints.reshape((2,) * (a.out_arity + a.in_arity))
    for pos, kind in sorted(out_flips.items()):
        t = np.moveaxis(np.tensordot(_PAULI_2x2[kind], t, axes=([1], [pos])), 0, pos)
    for pos, kind in sorted(in_flips.items()):
        ax = a.out_arity + pos
        # flips on the input side multiply the map from the right
        t = np.moveaxis(np.tensordot(_PAULI_2x2[kind].T, t, axes=([0], [ax])), 0, ax)
    return LinearMap(t.reshape(a.ints.shape), a.sqrt2_pow, a.out_arity, a.in_arity)


def canonical_key(a: LinearMap) -> tuple:
    """Exact hashable form of a map modulo nonzero scalar.

    Multiplying by the conjugate of the first nonzero entry and dividing by
    the integer content yields a canonical Gaussian-integer matrix; two maps
    are scalar multiples iff their keys are equal.
    """
    flat = a.ints.ravel()
    re = np.rint(flat.real).astype(np.int64)
    im = np.rint(flat.imag).astype(np.int64)
    nz = np.nonzero(re | im)[0]
    if nz.size == 0:
        return ("zero", a.ints.shape)
    if max(int(np.max(np.abs(re))), int(np.max(np.abs(im)))) >= 1 << 30:
        return _canonical_key_big(a.ints.shape, re.tolist(), im.tolist())
    zr, zi = int(re[nz[0]]), int(im[nz[0]])
    # (x + iy) * conj(zr + i zi), exact in int64 below 2**62
    xr = re * zr + im * zi
    xi = im * zr - re * zi
    g = int(np.gcd.reduce(np.concatenate([np.abs(xr), np.abs(xi)])))
    xr //= g
    xi //= g
    return (a.ints.shape, xr.tobytes(), xi.tobytes())


def _canonical_key_big(shape, re, im) -> tuple:
    first = next(k for k in range(len(re)) if re[k] or im[k])
    zr, zi = re[first], im[first]
    out = [(x * zr + y * zi, y * zr - x * zi) for x, y in zip(re, im)]
    g = 0
    for x, y in out:
        g = math.gcd(g, abs(x))
        g = math.gcd(g, abs(y))
    out = [(x // g, y // g) for x, y in out]
    if all(abs(x) < (1 << 62) and abs(y) < (1 << 62) for x, y in out):
        xr = np.array([x for x, _ in out], dtype=np.int64)
        xi = np.array([y for _, y in out], dtype=np.int64)
        return (shape, xr.tobytes(), xi.tobytes())
    return (shape, tuple(out))
