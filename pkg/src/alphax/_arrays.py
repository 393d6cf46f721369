"""Row-set helpers for integer simplex arrays of shape (m, k)."""

from __future__ import annotations

import numpy as np


def empty_rows(k: int) -> np.ndarray:
    return np.empty((0, k), dtype=np.int64)


def unique_rows(a: np.ndarray) -> np.ndarray:
    """Lexicographically sorted, duplicate-free copy of the rows of a."""
    if a.shape[0] == 0:
        return a.copy()
    return np.unique(a, axis=0)


def _row_view(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    return a.view([("", np.int64)] * a.shape[1]).ravel()


def rows_in(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean mask: which rows of a occur among the rows of b."""
    if a.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if b.shape[0] == 0:
        return np.zeros(a.shape[0], dtype=bool)
    return np.isin(_row_view(a), _row_view(b))


def faces_of(simplices: np.ndarray) -> np.ndarray:
    """All (k-1)-vertex facets of sorted rows; rows stay sorted. Not deduped."""
    m, k = simplices.shape
    if m == 0 or k == 1:
        return empty_rows(max(k - 1, 1))
    cols = list(range(k))
    parts = [simplices[:, cols[:drop] + cols[drop + 1:]] for drop in range(k)]
    return np.concatenate(parts, axis=0)


def lexsort_rows(a: np.ndarray) -> np.ndarray:
    """Row-lexicographic sort permutation."""
    if a.shape[0] == 0:
        return np.empty(0, dtype=np.int64)
    return np.lexsort(tuple(a[:, c] for c in range(a.shape[1] - 1, -1, -1)))
