"""Dilated configurations {r v_1, ..., r v_ℓ} inside difference sets.

The direct search intersects, over the configuration vectors, the sets of
dilates r for which r v_j is a difference; it is the fast path whose answers
the literal proof replay in :mod:`diffsetlab.proof` must agree with.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainTooSmall, InvalidConfiguration
from .grid import DiffSet, GridSet, difference_set

Point = tuple[int, ...]


@dataclass(frozen=True)
class Configuration:
    """An ordered list of nonzero integer vectors v_1..v_ℓ in Z^d."""

    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        vecs = tuple(
            (int(v),) if isinstance(v, (int, np.integer)) else tuple(int(x) for x in v) for v in self.vectors
        )
        object.__setattr__(self, "vectors", vecs)
        if not vecs:
            raise InvalidConfiguration("configuration needs at least one vector")
        dims = {len(v) for v in vecs}
        if len(dims) != 1 or 0 in dims:
            raise InvalidConfiguration(f"vectors must share one positive dimension, got {sorted(dims)}")
        for v in vecs:
            if not any(v):
                raise InvalidConfiguration("zero vector in configuration")

    @classmethod
    def parse(cls, text: str) -> "Configuration":
        """Parse ``"v1;v2;..."`` with each vector as comma-separated integers."""
        try:
            vecs = [tuple(int(x) for x in part.split(",")) for part in text.split(";") if part.strip()]
        except ValueError:
            raise InvalidConfiguration(f"malformed configuration {text!r}") from None
        return cls(tuple(vecs))

    @classmethod
    def progression(cls, ell: int) -> "Configuration":
        """{1, 2, ..., ℓ} in dimension one."""
        return cls(tuple((j,) for j in range(1, ell + 1)))

    @classmethod
    def corner(cls, d: int) -> "Configuration":
        """The standard basis e_1, ..., e_d."""
        return cls(tuple(tuple(int(i == j) for i in range(d)) for j in range(d)))

    @property
    def ell(self) -> int:
        return len(self.vectors)

    @property
    def d(self) -> int:
        return len(self.vectors[0])

    @property
    def s(self) -> int:
        return max(abs(x) for v in self.vectors for x in v)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.vectors, dtype=np.int64)

    def __str__(self) -> str:
        return ";".join(",".join(str(x) for x in v) for v in self.vectors)


@dataclass(frozen=True)
class DilateWitness:
    """r > 0 with realizer pairs (p_j, q_j) in A and p_j - q_j = r v_j."""

    r: int
    config: Configuration
    realizers: tuple[tuple[Point, Point], ...]

    def verify(self, a: GridSet) -> bool:
        if self.r <= 0 or len(self.realizers) != self.config.ell:
            return False
        for v, (p, q) in zip(self.config.vectors, self.realizers):
            if p not in a or q not in a:
                return False
            if any(pi - qi != self.r * vi for pi, qi, vi in zip(p, q, v)):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "found": True,
            "r": self.r,
            "config": [list(v) for v in self.config.vectors],
            "realizers": [{"p": list(p), "q": list(q)} for p, q in self.realizers],
        }


@dataclass(frozen=True)
class APWitness:
    """A symmetric progression {-ℓ·step, ..., ℓ·step} inside A - A."""

    r: int
    step: int
    terms: tuple[int, ...]
    witness: DilateWitness

    def to_json(self) -> dict:
        return {"found": True, "r": self.r, "step": self.step, "ap": list(self.terms),
                "realizers": self.witness.to_json()["realizers"]}


def realizer(a: GridSet, delta: Sequence[int]) -> tuple[Point, Point] | None:
    """Lexicographically smallest (q, p) in A x A with p - q = delta, returned as (p, q)."""
    delta = np.asarray(delta, dtype=np.int64)
    cand = a.coords + delta[None, :]
    hit = a.contains_coords(cand)
    if not hit.any():
        return None
    k = int(np.argmax(hit))
    p = tuple(int(x) for x in cand[k])
    q = tuple(int(x) for x in a.coords[k])
    return p, q


def _dilate_mask(ds: DiffSet, v: np.ndarray, r_hi: int) -> np.ndarray:
    """mask[r-1] is True iff r v lies in A - A, for r in [1, r_hi]."""
    rs = np.arange(1, r_hi + 1, dtype=np.int64)
    return ds.contains_coords(rs[:, None] * v[None, :])


def _vector(v, d: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=np.int64))
    if arr.shape != (d,):
        raise InvalidConfiguration(f"vector {tuple(arr)} does not have dimension {d}")
    if not arr.any():
        raise InvalidConfiguration("zero vector")
    return arr


def admissible_dilates(a: GridSet, v, ds: DiffSet | None = None) -> frozenset[int]:
    """{ r in [1, floor(N/||v||_inf)] : r v in A - A }."""
    vec = _vector(v, a.box.d)
    if a.cardinality == 0:
        return frozenset()
    ds = difference_set(a) if ds is None else ds
    r_hi = a.box.n // int(np.abs(vec).max())
    mask = _dilate_mask(ds, vec, r_hi)
    return frozenset(int(r) for r in np.flatnonzero(mask) + 1)


def _check_domain(a: GridSet, c: Configuration) -> None:
    if c.d != a.box.d:
        raise InvalidConfiguration(f"configuration has dimension {c.d}, set has {a.box.d}")
    if a.box.n < c.s:
        raise DomainTooSmall(f"N={a.box.n} is smaller than s={c.s}")


def find_dilate(a: GridSet, c: Configuration, ds: DiffSet | None = None) -> DilateWitness | None:
    """Smallest r > 0 with {r v_1, ..., r v_ℓ} ⊆ A - A, or None.

    Realizers are the lexicographically smallest pair for each r v_j.
    """
    _check_domain(a, c)
    if a.cardinality < 2:
        return None
    ds = difference_set(a) if ds is None else ds
    # r s <= N - 1 for any difference, so this cap loses nothing against floor(N/s).
    r_hi = (a.box.n - 1) // c.s
    if r_hi < 1:
        return None
    masks = sorted((_dilate_mask(ds, v, r_hi) for v in c.array), key=lambda m: int(m.sum()))
    common = masks[0].copy()
    for m in masks[1:]:
        if not common.any():
            break
        common &= m
    if not common.any():
        return None
    r = int(np.argmax(common)) + 1
    reals = tuple(realizer(a, r * v) for v in c.array)
    w = DilateWitness(r, c, reals)
    assert w.verify(a)
    return w


def _check_odd(m: int) -> int:
    if m < 3 or m % 2 == 0:
        raise ValueError(f"m must be an odd integer >= 3, got {m}")
    return (m - 1) // 2


def ap_in_diffset(a: GridSet, m: int, ds: DiffSet | None = None) -> APWitness | None:
    """A symmetric m-term progression in A - A (A one-dimensional), or None."""
    ell = _check_odd(m)
    if a.box.d != 1:
        raise ValueError("ap_in_diffset needs a one-dimensional set")
    w = find_dilate(a, Configuration.progression(ell), ds)
    if w is None:
        return None
    return APWitness(w.r, w.r, tuple(j * w.r for j in range(-ell, ell + 1)), w)


def projection_product(c: Configuration) -> Fraction:
    """prod_i prod_j (1 + |<v_j, e_i>| / s), exactly."""
    s = c.s
    out = Fraction(1)
    for v in c.vectors:
        for x in v:
            out *= 1 + Fraction(abs(x), s)
    return out


def threshold_constant(c: Configuration) -> float:
    """C_{ℓ,d} = (2s prod_i prod_j (1 + |<v_j,e_i>|/s))^{1/ℓ}."""
    return float(2 * c.s * projection_product(c)) ** (1.0 / c.ell)


def threshold_bound(c: Configuration) -> float:
    """The cruder bound 2^d (2s)^{1/ℓ} >= C_{ℓ,d}."""
    return 2.0**c.d * (2.0 * c.s) ** (1.0 / c.ell)


def ap_constant(ell):
    """C_ℓ = 2 (2ℓ)^{1/ℓ}; accepts scalars or numpy arrays."""
    ell = np.asarray(ell, dtype=np.float64)
    out = 2.0 * np.power(2.0 * ell, 1.0 / ell)
    return float(out) if out.ndim == 0 else out


def threshold_density(c: Configuration, n: int) -> float:
    return threshold_constant(c) * n ** (-1.0 / c.ell)


def ap_threshold_density(n: int, m: int) -> float:
    """4 N^{-2/(m-1)}, capped at 1."""
    _check_odd(m)
    return min(1.0, 4.0 * n ** (-2.0 / (m - 1)))
