"""Vectorised "is this pattern in A - A" tests.

A pattern is a table of candidate rows; each row lists the ℓ difference
vectors that must all lie in A - A.  Rows are kept in the caller's search
order, so the first satisfied row is the canonical witness.
"""
from __future__ import annotations

import numpy as np

from .grid import Box, DiffSet


class DifferencePattern:
    def __init__(self, box: Box, vectors: np.ndarray, labels: np.ndarray):
        vectors = np.asarray(vectors, dtype=np.int64)
        if vectors.ndim != 3 or vectors.shape[2] != box.d:
            raise ValueError("pattern vectors must have shape (rows, ell, d)")
        self.box = box
        self.vectors = vectors
        self.labels = np.asarray(labels)
        # A vector with a coordinate beyond n-1 is never a difference.
        self.valid = np.all(np.abs(vectors) <= box.n - 1, axis=(1, 2))
        shifted = np.where(self.valid[:, None, None], vectors + (box.n - 1), 0)
        self.codes = shifted @ box._powers(box.diff_side)

    def __len__(self) -> int:
        return int(self.vectors.shape[0])

    def matches_mask(self, mask: np.ndarray) -> np.ndarray:
        """Row satisfaction against a flat boolean difference-box mask."""
        if len(self) == 0:
            return np.zeros(0, dtype=bool)
        return self.valid & np.all(mask[self.codes], axis=1)

    def matches(self, ds: DiffSet) -> np.ndarray:
        if ds.mask is not None:
            return self.matches_mask(ds.mask)
        if len(self) == 0:
            return np.zeros(0, dtype=bool)
        return self.valid & np.all(ds.contains_indices(self.codes), axis=1)

    def first(self, ds: DiffSet) -> int:
        hit = self.matches(ds)
        return int(np.argmax(hit)) if hit.any() else -1

    def present_in_mask(self, mask: np.ndarray) -> bool:
        return bool(self.matches_mask(mask).any())

    @classmethod
    def dilates(cls, box: Box, vectors: np.ndarray, r_values=None) -> "DifferencePattern":
        """Rows r·v_1..r·v_ℓ for each r (default: every r with r·s <= n-1)."""
        vectors = np.asarray(vectors, dtype=np.int64)
        if r_values is None:
            s = int(np.abs(vectors).max())
            r_values = np.arange(1, (box.n - 1) // s + 1, dtype=np.int64)
        r_values = np.asarray(r_values, dtype=np.int64)
        return cls(box, r_values[:, None, None] * vectors[None, :, :], r_values)
