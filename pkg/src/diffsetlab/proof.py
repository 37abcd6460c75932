"""Literal replay of the averaging (pigeonhole) arguments.

For a configuration v_1..v_ℓ and a shift tuple w = (w_1..w_ℓ) the fiber is

    R_w = { r in [1, r_max] : r v_j + w_j in A for every j },

with r_max = floor(N/s).  Any fiber holding two dilates r'' < r' gives
(r' - r'') v_j = (r' v_j + w_j) - (r'' v_j + w_j) in A - A.  The shifts range
over a covering collection W; summing fiber sizes over W counts every pair
(r, tuple in A^ℓ) exactly once, so sum_w |R_w| = |A|^ℓ r_max, and a fiber of
size two exists as soon as that total exceeds |W|.

Fibers are found by the dual enumeration: for each r and each ℓ-tuple of
points the unique shift w_j = a_j - r v_j is computed and collisions between
different r are detected.  Enumeration over W itself (odometer order) is kept
for double-counting checks on small instances.

``anchored=True`` (the default for :func:`literal_witness`) falls back to
fibers that also admit r'' = 0, i.e. w itself lying in A^ℓ.  Without it the
replay can only produce dilates up to r_max - 1, one short of what the direct
search reaches (A = {1, 4, 7, 10}, v = {1, 2, 3}: only r = 3 works).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dilates import Configuration, DilateWitness, _check_domain, projection_product
from .errors import BudgetExceeded, DomainTooSmall
from .grid import INDEX_LIMIT, Box, GridSet
from .poly import PolySystem, PolyWitness, eval_poly, poly_domain

DEFAULT_BUDGET = 10**8
_TUPLE_BLOCK = 1 << 18

ShiftTuple = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CoveringCollection:
    """Product of integer intervals ``intervals[j][i] = (lo, hi)`` for the shift coordinates <w_j, e_i>."""

    box: Box
    intervals: tuple[tuple[tuple[int, int], ...], ...]
    r_max: int
    config: Configuration | None = None

    @property
    def ell(self) -> int:
        return len(self.intervals)

    @property
    def lows(self) -> np.ndarray:
        return np.array([[lo for lo, _ in row] for row in self.intervals], dtype=np.int64)

    @property
    def highs(self) -> np.ndarray:
        return np.array([[hi for _, hi in row] for row in self.intervals], dtype=np.int64)

    @property
    def lengths(self) -> list[int]:
        return [hi - lo + 1 for row in self.intervals for lo, hi in row]

    @property
    def size(self) -> int:
        out = 1
        for n in self.lengths:
            out *= n
        return out

    def size_bound(self) -> Fraction:
        """N^{dℓ} prod_i prod_j (1 + |<v_j,e_i>|/s)."""
        return Fraction(self.box.n) ** (self.box.d * self.ell) * projection_product(self.config)

    def contains(self, w) -> bool:
        return all(lo <= x <= hi for row, wj in zip(self.intervals, w) for (lo, hi), x in zip(row, wj))

    def inside(self, w: np.ndarray) -> np.ndarray:
        """Row mask for an (M, ℓ, d) array of shifts."""
        return np.all((w >= self.lows) & (w <= self.highs), axis=(1, 2))

    def _radices(self) -> np.ndarray:
        if self.size > INDEX_LIMIT:
            raise BudgetExceeded(self.size, INDEX_LIMIT)
        lengths = self.lengths
        out = np.ones(len(lengths), dtype=np.int64)
        for k in range(len(lengths) - 2, -1, -1):
            out[k] = out[k + 1] * lengths[k + 1]
        return out

    def encode_array(self, w: np.ndarray) -> np.ndarray:
        """Odometer position of each shift (first coordinate of w_1 most significant)."""
        flat = (w - self.lows).reshape(w.shape[0], self.ell * self.box.d)
        return flat @ self._radices()

    def decode_array(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        lengths = self.lengths
        digits = np.empty((codes.size, len(lengths)), dtype=np.int64)
        rest = codes.copy()
        for k in range(len(lengths) - 1, -1, -1):
            rest, digits[:, k] = np.divmod(rest, lengths[k])
        return digits.reshape(codes.size, self.ell, self.box.d) + self.lows

    def decode(self, code: int) -> ShiftTuple:
        return _as_shift(self.decode_array(np.array([code]))[0])


@dataclass(frozen=True)
class FiberSet:
    w: ShiftTuple
    members: frozenset[int]


@dataclass(frozen=True)
class Census:
    total: int
    expected: int
    size: int
    best_w: ShiftTuple | None
    best_size: int
    r_max: int

    @property
    def identity_holds(self) -> bool:
        return self.total == self.expected


@dataclass(frozen=True)
class LiteralWitness:
    r1: int
    r2: int
    w: ShiftTuple
    witness: DilateWitness | PolyWitness
    anchored: bool = False

    def to_json(self) -> dict:
        out = {"r1": self.r1, "r2": self.r2, "w": [list(x) for x in self.w], "anchored": self.anchored}
        out.update(self.witness.to_json())
        return out


def _as_shift(arr: np.ndarray) -> ShiftTuple:
    return tuple(tuple(int(x) for x in row) for row in arr)


def build_covering(box: Box, c: Configuration) -> CoveringCollection:
    """Intervals [1 - r_max c, N - c] (c >= 0) or [1 - c, N - r_max c] (c < 0) per coordinate c = <v_j, e_i>."""
    if c.d != box.d:
        raise ValueError(f"configuration has dimension {c.d}, box has {box.d}")
    if box.n < c.s:
        raise DomainTooSmall(f"N={box.n} is smaller than s={c.s}")
    r_max = box.n // c.s
    n = box.n
    intervals = tuple(
        tuple((1 - r_max * x, n - x) if x >= 0 else (1 - x, n - r_max * x) for x in v) for v in c.vectors
    )
    return CoveringCollection(box, intervals, r_max, c)


def poly_covering(box: Box, ps: PolySystem, n0: int) -> CoveringCollection:
    """The shift box |<w_j, e_i>| <= 2N - 1, with dilates in [1, N0]."""
    side = 2 * box.n - 1
    return CoveringCollection(box, tuple(((-side, side),) * box.d for _ in range(ps.ell)), n0)


def iter_shifts(cov: CoveringCollection):
    """Lazily enumerate W in odometer order."""
    ranges = [range(lo, hi + 1) for row in cov.intervals for lo, hi in row]
    d = cov.box.d
    for flat in itertools.product(*ranges):
        yield tuple(flat[j * d:(j + 1) * d] for j in range(cov.ell))


def fiber(a: GridSet, c: Configuration, cov: CoveringCollection, w) -> FiberSet:
    """R_w by direct lookup of r v_j + w_j in A."""
    w = tuple(tuple(int(x) for x in ((wj,) if np.isscalar(wj) else wj)) for wj in w)
    if len(w) != cov.ell or not cov.contains(w):
        raise ValueError(f"shift {w} lies outside the covering collection")
    members = frozenset(
        r for r in range(1, cov.r_max + 1)
        if all(tuple(r * vi + wi for vi, wi in zip(v, wj)) in a for v, wj in zip(c.vectors, w))
    )
    return FiberSet(w, members)


def poly_fiber(a: GridSet, ps: PolySystem, cov: CoveringCollection, w) -> FiberSet:
    w = tuple(tuple(int(x) for x in ((wj,) if np.isscalar(wj) else wj)) for wj in w)
    if len(w) != cov.ell or not cov.contains(w):
        raise ValueError(f"shift {w} lies outside the covering collection")
    members = frozenset(
        r for r in range(1, cov.r_max + 1)
        if all(tuple(eval_poly(q, r) + wi for q, wi in zip(row, wj)) in a for row, wj in zip(ps.rows, w))
    )
    return FiberSet(w, members)


def _check_budget(needed: int, budget: int) -> None:
    if needed > budget:
        raise BudgetExceeded(needed, budget)


def _tuple_blocks(a: GridSet, ell: int):
    """(M, ℓ, d) blocks of all ℓ-tuples of points of A, lexicographic in point order."""
    size = a.cardinality
    total = size**ell
    shape = (size,) * ell
    for start in range(0, total, _TUPLE_BLOCK):
        flat = np.arange(start, min(total, start + _TUPLE_BLOCK), dtype=np.int64)
        idx = np.stack(np.unravel_index(flat, shape), axis=1)
        yield a.coords[idx]


def _shift_codes(a: GridSet, cov: CoveringCollection, offset: np.ndarray, require_inside: bool) -> np.ndarray:
    """Codes of w = tuple - offset over all tuples; shifts outside W are dropped or rejected."""
    parts = []
    for tuples in _tuple_blocks(a, cov.ell):
        w = tuples - offset[None, :, :]
        ok = cov.inside(w)
        if require_inside:
            assert ok.all(), "covering collection misses a shift"
        else:
            w = w[ok]
        parts.append(cov.encode_array(w))
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def _dual_census(a: GridSet, cov: CoveringCollection, offsets, expected: int, strict: bool) -> Census:
    uniq = np.empty(0, dtype=np.int64)
    counts = np.empty(0, dtype=np.int64)
    total = 0
    for offset in offsets:
        codes = _shift_codes(a, cov, offset, require_inside=strict)
        # Distinct tuples give distinct shifts for a fixed dilate.
        assert np.unique(codes).size == codes.size
        total += int(codes.size)
        merged, inv = np.unique(np.concatenate([uniq, codes]), return_inverse=True)
        counts = np.bincount(inv, weights=np.concatenate([counts, np.ones(codes.size, dtype=np.int64)]),
                             minlength=merged.size).astype(np.int64)
        uniq = merged
    if uniq.size:
        k = int(np.argmax(counts))
        best_w, best_size = cov.decode(int(uniq[k])), int(counts[k])
    else:
        best_w, best_size = None, 0
    assert int(counts.sum()) == total
    return Census(total, expected, cov.size, best_w, best_size, cov.r_max)


def averaging_census(a: GridSet, c: Configuration, budget: int = DEFAULT_BUDGET) -> Census:
    """sum over W of |R_w| by dual enumeration; equals |A|^ℓ floor(N/s) exactly."""
    _check_domain(a, c)
    cov = build_covering(a.box, c)
    _check_budget(a.cardinality**c.ell * cov.r_max, budget)
    offsets = (r * c.array for r in range(1, cov.r_max + 1))
    return _dual_census(a, cov, offsets, a.cardinality**c.ell * cov.r_max, strict=True)


def fiber_sizes(a: GridSet, c: Configuration, cov: CoveringCollection | None = None,
                budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """|R_w| for every w in W, in odometer order, computed directly from the definition."""
    cov = build_covering(a.box, c) if cov is None else cov
    _check_budget(cov.size * cov.r_max * c.ell, budget)
    vecs = c.array
    out = np.zeros(cov.size, dtype=np.int64)
    step = max(1, _TUPLE_BLOCK // max(cov.r_max, 1))
    for start in range(0, cov.size, step):
        codes = np.arange(start, min(cov.size, start + step), dtype=np.int64)
        w = cov.decode_array(codes)
        for r in range(1, cov.r_max + 1):
            pts = w + r * vecs[None, :, :]
            hit = a.contains_coords(pts.reshape(-1, a.box.d)).reshape(codes.size, c.ell)
            out[start:start + codes.size] += np.all(hit, axis=1)
    return out


def odometer_census(a: GridSet, c: Configuration, budget: int = DEFAULT_BUDGET) -> Census:
    _check_domain(a, c)
    cov = build_covering(a.box, c)
    sizes = fiber_sizes(a, c, cov, budget)
    k = int(np.argmax(sizes)) if sizes.size else 0
    best = cov.decode(k) if sizes.size and sizes[k] > 0 else None
    return Census(int(sizes.sum()), a.cardinality**c.ell * cov.r_max, cov.size, best,
                  int(sizes[k]) if sizes.size else 0, cov.r_max)


def _first_collision(a: GridSet, cov: CoveringCollection, steps):
    """Scan dilates in order; return (r1, r2, code) for the first shift met by two dilates."""
    seen = np.empty(0, dtype=np.int64)
    seen_r = np.empty(0, dtype=np.int64)
    for r, offset, strict in steps:
        codes = _shift_codes(a, cov, offset, require_inside=strict)
        if codes.size == 0:
            continue
        hit = np.isin(codes, seen)
        if hit.any():
            code = int(codes[hit].min())
            r2 = int(seen_r[np.searchsorted(seen, code)])
            return r, r2, code
        order = np.argsort(np.concatenate([seen, codes]), kind="stable")
        seen = np.concatenate([seen, codes])[order]
        seen_r = np.concatenate([seen_r, np.full(codes.size, r, dtype=np.int64)])[order]
    return None


def literal_witness(a: GridSet, c: Configuration, budget: int = DEFAULT_BUDGET,
                    anchored: bool = True) -> LiteralWitness | None:
    """A shift w whose fiber holds two dilates r'' < r', and the induced dilate r = r' - r''.

    Fibers over [1, r_max] are scanned first.  With ``anchored``, if none has
    two members the scan is repeated over [0, r_max]; see the module
    docstring.  Returns None iff every scanned fiber has at most one member.
    """
    _check_domain(a, c)
    cov = build_covering(a.box, c)
    tuples = a.cardinality**c.ell
    _check_budget(tuples * (2 * cov.r_max + 1 if anchored else cov.r_max), budget)
    if a.cardinality < 2:
        return None
    hit = _first_collision(a, cov, ((r, r * c.array, True) for r in range(1, cov.r_max + 1)))
    if hit is None and anchored:
        # r = 0 shifts are points of A^ℓ and need not lie in W; dilates >= 1 always do.
        hit = _first_collision(a, cov, ((r, r * c.array, r > 0) for r in range(0, cov.r_max + 1)))
    if hit is None:
        return None
    r1, r2, code = hit
    w = cov.decode(code)
    reals = tuple(
        (tuple(r1 * vi + wi for vi, wi in zip(v, wj)), tuple(r2 * vi + wi for vi, wi in zip(v, wj)))
        for v, wj in zip(c.vectors, w)
    )
    witness = DilateWitness(r1 - r2, c, reals)
    assert witness.verify(a)
    return LiteralWitness(r1, r2, w, witness, anchored=r2 == 0)


def literal_witness_poly(a: GridSet, ps: PolySystem, budget: int = DEFAULT_BUDGET) -> LiteralWitness | None:
    """Polynomial replay: fibers {r in [1, N0] : w_j + sum_i Q_ij(r) e_i in A}, shifts in the box |w| <= 2N-1."""
    n0 = poly_domain(ps, a.box)
    cov = poly_covering(a.box, ps, n0)
    _check_budget(a.cardinality**ps.ell * n0, budget)
    if a.cardinality < 2:
        return None
    vals = ps.values(np.arange(0, n0 + 1))
    hit = _first_collision(a, cov, ((r, vals[r], False) for r in range(1, n0 + 1)))
    if hit is None:
        return None
    r1, r2, code = hit
    w = np.array(cov.decode(code), dtype=np.int64)
    p = vals[r1] + w
    q = vals[r2] + w
    deltas = _as_shift(vals[r1] - vals[r2])
    witness = PolyWitness(r1, r2, ps, deltas, tuple(zip(_as_shift(p), _as_shift(q))))
    assert witness.verify(a)
    return LiteralWitness(r1, r2, _as_shift(w), witness)


def poly_census(a: GridSet, ps: PolySystem, budget: int = DEFAULT_BUDGET) -> Census:
    """sum over the shift box of fiber sizes; at most |A|^ℓ N0, with equality when no shift leaves the box."""
    n0 = poly_domain(ps, a.box)
    cov = poly_covering(a.box, ps, n0)
    _check_budget(a.cardinality**ps.ell * n0, budget)
    vals = ps.values(np.arange(0, n0 + 1))
    return _dual_census(a, cov, (vals[r] for r in range(1, n0 + 1)), a.cardinality**ps.ell * n0, strict=False)


def pigeonhole_condition(a: GridSet, c: Configuration) -> bool:
    """(|A|/N^d)^ℓ >= (2s/N) prod_i prod_j (1 + |<v_j,e_i>|/s), decided in exact arithmetic."""
    n, d = a.box.n, a.box.d
    lhs = Fraction(a.cardinality, n**d) ** c.ell
    return lhs >= Fraction(2 * c.s, n) * projection_product(c)
