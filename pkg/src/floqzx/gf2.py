"""Dense GF(2) linear algebra on numpy uint8 matrices."""

from __future__ import annotations

import numpy as np


def asmatrix(rows, n_cols: int | None = None) -> np.ndarray:
    """Coerce a list of 0/1 rows into a uint8 matrix (0 x n allowed)."""
    if isinstance(rows, np.ndarray):
        m = (rows.astype(np.uint8) & 1).reshape(rows.shape if rows.ndim == 2 else (len(rows) and 1 or 0, -1))
        return m
    if not rows:
        return np.zeros((0, n_cols or 0), dtype=np.uint8)
    return np.array(rows, dtype=np.uint8) & 1


def rref(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2). Returns (R, pivot_columns)."""
    m = (mat.astype(np.uint8) & 1).copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        elim = np.nonzero(m[:, c])[0]
        for i in elim:
            if i != r:
                m[i, :] ^= m[r, :]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(mat: np.ndarray) -> int:
    if mat.size == 0:
        return 0
    return len(rref(mat)[1])


def nullspace(mat: np.ndarray) -> np.ndarray:
    """Basis of the right nullspace, one vector per row, deterministic order."""
    rows, cols = mat.shape if mat.size or mat.ndim == 2 else (0, 0)
    if cols == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    r, pivots = rref(mat)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for j, pc in enumerate(pivots):
            basis[i, pc] = r[j, fc]
    return basis


def solve(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    """One solution of mat @ x = rhs over GF(2), or None if inconsistent."""
    rows, cols = mat.shape
    aug = np.concatenate([mat & 1, (rhs & 1).reshape(-1, 1)], axis=1).astype(np.uint8)
    r, pivots = rref(aug)
    for i in range(len(pivots)):
        if pivots[i] == cols:
            return None
    x = np.zeros(cols, dtype=np.uint8)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols]
    return x


def in_rowspan(rows_mat: np.ndarray, vec: np.ndarray) -> bool:
    """Whether vec lies in the GF(2) span of the rows of rows_mat."""
    if rows_mat.size == 0:
        return not np.any(vec & 1)
    base = rank(rows_mat)
    aug = np.vstack([rows_mat, vec.reshape(1, -1)])
    return rank(aug) == base


def row_basis(mat: np.ndarray) -> np.ndarray:
    """Independent subset of rows spanning the row space (in RREF form)."""
    r, pivots = rref(mat)
    return r[: len(pivots), :]


def subspace_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Basis of span(a) + span(b)."""
    if a.size == 0:
        return row_basis(b)
    if b.size == 0:
        return row_basis(a)
    return row_basis(np.vstack([a, b]))
