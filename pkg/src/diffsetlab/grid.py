"""Subsets of the lattice box [1,N]^d and their difference and sum sets.

Points are indexed row-major (first coordinate most significant, 0-based
digits), so sorting indices sorts points lexicographically.  Difference and
sum sets live on boxes of side 2N-1; the same mixed-radix encoding with base
2N-1 lets a pair difference (or sum) of embedded indices land directly on the
shifted index of the result, which is what both kernels exploit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np
from scipy.signal import fftconvolve

from .errors import BoxMismatch, IndexOverflow, PointOutOfBox

INDEX_LIMIT = 2**62
# Above this many cells a set is stored as a sorted index array only.
DENSE_CELL_LIMIT = 1 << 27
_PAIR_CHUNK = 1 << 21
FFT_ROUNDING_TOL = 0.25


def _as_point(p, d: int) -> tuple[int, ...]:
    if isinstance(p, (int, np.integer)):
        p = (int(p),)
    pt = tuple(int(x) for x in p)
    if len(pt) != d:
        raise ValueError(f"point {pt} does not have dimension {d}")
    return pt


@dataclass(frozen=True)
class Box:
    """The ambient box [1,n]^d."""

    n: int
    d: int = 1

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError(f"Box needs n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        if (2 * self.n - 1) ** self.d > INDEX_LIMIT:
            raise IndexOverflow(f"(2n-1)^d = {(2 * self.n - 1) ** self.d} exceeds the 63-bit index width")

    @property
    def cells(self) -> int:
        return self.n**self.d

    @property
    def diff_side(self) -> int:
        return 2 * self.n - 1

    def _powers(self, base: int) -> np.ndarray:
        return np.array([base ** (self.d - 1 - i) for i in range(self.d)], dtype=np.int64)

    def contains(self, point) -> bool:
        pt = _as_point(point, self.d)
        return all(1 <= x <= self.n for x in pt)

    def encode(self, point) -> int:
        pt = _as_point(point, self.d)
        if not all(1 <= x <= self.n for x in pt):
            raise PointOutOfBox(pt, self)
        idx = 0
        for x in pt:
            idx = idx * self.n + (x - 1)
        return idx

    def decode(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.cells:
            raise ValueError(f"index {index} outside box with {self.cells} cells")
        digits = []
        for _ in range(self.d):
            index, rem = divmod(index, self.n)
            digits.append(rem + 1)
        return tuple(reversed(digits))

    def encode_array(self, coords: np.ndarray) -> np.ndarray:
        """Row-major indices of a (k, d) array of 1-based coordinates (no bounds check)."""
        return (np.asarray(coords, dtype=np.int64) - 1) @ self._powers(self.n)

    def decode_array(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        out = np.empty((idx.size, self.d), dtype=np.int64)
        rest = idx.copy()
        for i in range(self.d - 1, -1, -1):
            rest, out[:, i] = np.divmod(rest, self.n)
        return out + 1

    def all_coords(self) -> np.ndarray:
        return self.decode_array(np.arange(self.cells, dtype=np.int64))


class GridSet:
    """An immutable subset of a Box.

    ``indices`` is the sorted array of row-major point indices.  A dense
    boolean ``mask`` over the box is built lazily when the box is small
    enough; larger boxes answer membership by binary search.
    """

    def __init__(self, box: Box, indices: np.ndarray):
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        idx.flags.writeable = False
        self.box = box
        self.indices = idx

    @classmethod
    def from_mask(cls, box: Box, mask: np.ndarray) -> "GridSet":
        return cls(box, np.flatnonzero(np.asarray(mask).ravel()))

    @classmethod
    def full(cls, box: Box) -> "GridSet":
        return cls(box, np.arange(box.cells, dtype=np.int64))

    @property
    def cardinality(self) -> int:
        return int(self.indices.size)

    def __len__(self) -> int:
        return self.cardinality

    @property
    def density(self) -> float:
        return self.cardinality / self.box.cells

    @cached_property
    def mask(self) -> np.ndarray | None:
        if self.box.cells > DENSE_CELL_LIMIT:
            return None
        m = np.zeros(self.box.cells, dtype=bool)
        m[self.indices] = True
        m.flags.writeable = False
        return m

    @cached_property
    def coords(self) -> np.ndarray:
        """(|A|, d) array of 1-based coordinates in lexicographic order."""
        c = self.box.decode_array(self.indices)
        c.flags.writeable = False
        return c

    @cached_property
    def embedded(self) -> np.ndarray:
        """Indices re-encoded in base 2n-1, the radix of the difference/sum boxes."""
        e = (self.coords - 1) @ self.box._powers(self.box.diff_side)
        e.flags.writeable = False
        return e

    def points(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.coords]

    def __iter__(self):
        return iter(self.points())

    def contains_indices(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if self.mask is not None:
            ok = (idx >= 0) & (idx < self.box.cells)
            out = np.zeros(idx.shape, dtype=bool)
            out[ok] = self.mask[idx[ok]]
            return out
        if self.indices.size == 0:
            return np.zeros(idx.shape, dtype=bool)
        pos = np.minimum(np.searchsorted(self.indices, idx), self.indices.size - 1)
        return self.indices[pos] == idx

    def contains_coords(self, coords: np.ndarray) -> np.ndarray:
        """Vectorised membership of a (k, d) coordinate array; out-of-box rows are False."""
        c = np.asarray(coords, dtype=np.int64).reshape(-1, self.box.d)
        inside = np.all((c >= 1) & (c <= self.box.n), axis=1)
        out = np.zeros(c.shape[0], dtype=bool)
        if inside.any():
            out[inside] = self.contains_indices(self.box.encode_array(c[inside]))
        return out

    def __contains__(self, point) -> bool:
        pt = _as_point(point, self.box.d)
        if not all(1 <= x <= self.box.n for x in pt):
            return False
        return bool(self.contains_indices(np.array([self.box.encode(pt)]))[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridSet):
            return NotImplemented
        return self.box == other.box and np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash((self.box, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"GridSet(n={self.box.n}, d={self.box.d}, |A|={self.cardinality})"


def make_grid_set(box: Box, points: Iterable) -> GridSet:
    """Build a GridSet from explicit points; duplicates collapse."""
    idx = []
    for p in points:
        pt = _as_point(p, box.d)
        if not all(1 <= x <= box.n for x in pt):
            raise PointOutOfBox(pt, box)
        idx.append(box.encode(pt))
    return GridSet(box, np.array(idx, dtype=np.int64))


class _ShiftedSet:
    """A subset of the box [lo, lo + 2n - 2]^d, stored like GridSet but with base 2n-1."""

    lo: int = 0
    kind = "set"

    def __init__(self, box: Box, mask: np.ndarray | None = None, indices: np.ndarray | None = None,
                 strategy: str = ""):
        self.box = box
        self.strategy = strategy
        if mask is not None:
            mask = np.asarray(mask, dtype=bool).ravel()
            mask.flags.writeable = False
        self.mask = mask
        if indices is None:
            indices = np.flatnonzero(mask)
        indices = np.asarray(indices, dtype=np.int64)
        indices.flags.writeable = False
        self.indices = indices

    @property
    def side(self) -> int:
        return self.box.diff_side

    @property
    def cardinality(self) -> int:
        return int(self.indices.size)

    def __len__(self) -> int:
        return self.cardinality

    def encode_array(self, coords: np.ndarray) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64).reshape(-1, self.box.d)
        return (c - self.lo) @ self.box._powers(self.side)

    def contains_indices(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if self.mask is not None:
            ok = (idx >= 0) & (idx < self.mask.size)
            out = np.zeros(idx.shape, dtype=bool)
            out[ok] = self.mask[idx[ok]]
            return out
        if self.indices.size == 0:
            return np.zeros(idx.shape, dtype=bool)
        pos = np.minimum(np.searchsorted(self.indices, idx), self.indices.size - 1)
        return self.indices[pos] == idx

    def contains_coords(self, coords: np.ndarray) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64).reshape(-1, self.box.d)
        inside = np.all((c >= self.lo) & (c <= self.lo + self.side - 1), axis=1)
        out = np.zeros(c.shape[0], dtype=bool)
        if inside.any():
            out[inside] = self.contains_indices(self.encode_array(c[inside]))
        return out

    def contains(self, x) -> bool:
        pt = _as_point(x, self.box.d)
        return bool(self.contains_coords(np.array([pt]))[0])

    __contains__ = contains

    def coords(self) -> np.ndarray:
        out = np.empty((self.indices.size, self.box.d), dtype=np.int64)
        rest = self.indices.copy()
        for i in range(self.box.d - 1, -1, -1):
            rest, out[:, i] = np.divmod(rest, self.side)
        return out + self.lo

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.coords()]

    def to_array(self) -> np.ndarray:
        """Dense d-dimensional boolean array; axis k covers coordinate lo..lo+2n-2."""
        if self.mask is None:
            raise MemoryError("set too large for a dense array")
        return self.mask.reshape((self.side,) * self.box.d)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.box.n}, d={self.box.d}, size={self.cardinality})"


class DiffSet(_ShiftedSet):
    """A - A as a subset of [-(n-1), n-1]^d."""

    kind = "difference"

    @property
    def lo(self) -> int:
        return -(self.box.n - 1)


class SumSet(_ShiftedSet):
    """A + B as a subset of [2, 2n]^d."""

    kind = "sum"
    lo = 2


def _prefer_fft(size_a: int, size_b: int, box: Box) -> bool:
    cells = box.cells
    return size_a * size_b > cells * math.log2(max(cells, 2))


def _pairwise(ea: np.ndarray, eb: np.ndarray, offset: int, sign: int, out_cells: int, dense: bool):
    mask = np.zeros(out_cells, dtype=bool) if dense else None
    parts = []
    step = max(1, _PAIR_CHUNK // max(eb.size, 1))
    for start in range(0, ea.size, step):
        block = ea[start:start + step, None] + sign * eb[None, :] + offset
        if dense:
            mask[block.ravel()] = True
        else:
            parts.append(np.unique(block))
    if dense:
        return mask, None
    idx = np.unique(np.concatenate(parts)) if parts else np.empty(0, dtype=np.int64)
    return None, idx


def _fft_counts(a: GridSet, b: GridSet, reverse_b: bool) -> np.ndarray:
    shape = (a.box.n,) * a.box.d
    fa = a.mask.reshape(shape).astype(np.float64)
    fb = b.mask.reshape(shape).astype(np.float64)
    if reverse_b:
        fb = fb[(slice(None, None, -1),) * a.box.d]
    raw = fftconvolve(fa, fb)
    counts = np.rint(raw)
    err = float(np.max(np.abs(raw - counts))) if raw.size else 0.0
    # Stricter than the 0.5 needed for exact rounding.
    assert err < FFT_ROUNDING_TOL, f"FFT rounding error {err} too large for exact counts"
    return counts.astype(np.int64)


def _check_strategy(strategy, dense):
    if strategy not in (None, "pairwise", "autocorrelation"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "autocorrelation" and not dense:
        raise ValueError("autocorrelation needs a dense result box")


def difference_set(a: GridSet, strategy: str | None = None) -> DiffSet:
    """Compute A - A.

    ``strategy`` forces ``"pairwise"`` (O(|A|^2)) or ``"autocorrelation"``
    (FFT, O(n^d log n^d)); by default the cheaper one is chosen.  Both give
    the identical set.
    """
    box = a.box
    out_cells = box.diff_side**box.d
    dense = out_cells <= DENSE_CELL_LIMIT and a.mask is not None
    _check_strategy(strategy, dense)
    if strategy is None:
        strategy = "autocorrelation" if dense and _prefer_fft(a.cardinality, a.cardinality, box) else "pairwise"
    if a.cardinality == 0:
        if dense:
            return DiffSet(box, mask=np.zeros(out_cells, dtype=bool), strategy=strategy)
        return DiffSet(box, indices=np.empty(0, dtype=np.int64), strategy=strategy)
    if strategy == "autocorrelation":
        counts = _fft_counts(a, a, reverse_b=True)
        return DiffSet(box, mask=counts.ravel() >= 1, strategy=strategy)
    offset = int((box.n - 1) * box._powers(box.diff_side).sum())
    mask, idx = _pairwise(a.embedded, a.embedded, offset, -1, out_cells, dense)
    return DiffSet(box, mask=mask, indices=idx, strategy=strategy)


def sum_set(a: GridSet, b: GridSet, strategy: str | None = None) -> SumSet:
    """Compute A + B as a subset of [2, 2n]^d."""
    if a.box != b.box:
        raise BoxMismatch(f"boxes differ: {a.box} vs {b.box}")
    box = a.box
    out_cells = box.diff_side**box.d
    dense = out_cells <= DENSE_CELL_LIMIT and a.mask is not None
    _check_strategy(strategy, dense)
    if strategy is None:
        strategy = "autocorrelation" if dense and _prefer_fft(a.cardinality, b.cardinality, box) else "pairwise"
    if a.cardinality == 0 or b.cardinality == 0:
        if dense:
            return SumSet(box, mask=np.zeros(out_cells, dtype=bool), strategy=strategy)
        return SumSet(box, indices=np.empty(0, dtype=np.int64), strategy=strategy)
    if strategy == "autocorrelation":
        counts = _fft_counts(a, b, reverse_b=False)
        return SumSet(box, mask=counts.ravel() >= 1, strategy=strategy)
    mask, idx = _pairwise(a.embedded, b.embedded, 0, 1, out_cells, dense)
    return SumSet(box, mask=mask, indices=idx, strategy=strategy)


def diff_membership(ds: DiffSet, x) -> bool:
    """True iff x lies in the difference set; out-of-range vectors give False."""
    return ds.contains(x)


def representation_counts(a: GridSet, b: GridSet) -> np.ndarray:
    """r(t) = #{(p, q) in A x B : p + q = t} as a dense array over [2, 2n]^d."""
    if a.box != b.box:
        raise BoxMismatch(f"boxes differ: {a.box} vs {b.box}")
    box = a.box
    shape = (box.diff_side,) * box.d
    if a.cardinality == 0 or b.cardinality == 0:
        return np.zeros(shape, dtype=np.int64)
    if _prefer_fft(a.cardinality, b.cardinality, box):
        return _fft_counts(a, b, reverse_b=False)
    flat = (a.embedded[:, None] + b.embedded[None, :]).ravel()
    return np.bincount(flat, minlength=box.diff_side**box.d).reshape(shape)
