"""Polynomial configurations in difference sets.

A PolySystem is an ℓ x d matrix of integer polynomials Q[j][i]; a witness is
a pair r' != r'' in [1, N0] with sum_i (Q_ij(r') - Q_ij(r'')) e_i in A - A for
every j.  Rank-one systems Q_ij = P_j <v_j, e_i> and the scalar case
(ℓ = d = 1) are built with the classmethods below.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dilates import APWitness, Configuration, DilateWitness, _check_odd, realizer
from .errors import DomainTooSmall, InvalidConfiguration
from .grid import Box, DiffSet, GridSet, difference_set
from .patterns import DifferencePattern

_INT64_SAFE = 2**62
_PAIR_ROWS = 1 << 18


@dataclass(frozen=True)
class IntPolynomial:
    """a_0 + a_1 r + ... + a_k r^k with integer coefficients (trailing zeros dropped)."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        try:
            return cls(tuple(int(x) for x in text.split(",") if x.strip()))
        except ValueError:
            raise InvalidConfiguration(f"malformed polynomial {text!r}") from None

    @classmethod
    def monomial(cls, k: int, coefficient: int = 1) -> "IntPolynomial":
        return cls((0,) * k + (coefficient,))

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def __call__(self, r: int) -> int:
        return eval_poly(self, r)

    def eval_array(self, rs: np.ndarray) -> np.ndarray:
        """int64 evaluation; raises OverflowError when the result could exceed 2^62."""
        rs = np.asarray(rs, dtype=np.int64)
        if not self.coefficients:
            return np.zeros(rs.shape, dtype=np.int64)
        top = int(np.abs(rs).max()) if rs.size else 0
        bound = sum(abs(c) * top**i for i, c in enumerate(self.coefficients))
        if bound >= _INT64_SAFE:
            raise OverflowError(f"{self} may overflow int64 at |r| = {top}")
        out = np.zeros(rs.shape, dtype=np.int64)
        for c in reversed(self.coefficients):
            out = out * rs + c
        return out

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coefficients) or "0"


def eval_poly(p: IntPolynomial, r: int) -> int:
    """Exact Horner evaluation (arbitrary precision, so it cannot overflow)."""
    out = 0
    for c in reversed(p.coefficients):
        out = out * r + c
    return out


@dataclass(frozen=True)
class PolySystem:
    """ℓ x d matrix of integer polynomials; ``rows[j][i]`` is Q_ij."""

    rows: tuple[tuple[IntPolynomial, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise InvalidConfiguration("polynomial system must be non-empty")
        if len({len(row) for row in self.rows}) != 1:
            raise InvalidConfiguration("every row of a polynomial system needs the same dimension")
        if self.k < 1:
            raise InvalidConfiguration("polynomial system needs degree >= 1")

    @classmethod
    def parse(cls, text: str) -> "PolySystem":
        """Rows separated by ``;``, entries within a row by ``|``, coefficients by ``,``.

        ``"0,0,1"`` is the scalar system r^2; ``"0,1|0;0|0,0,1"`` is the 2 x 2
        system (r, 0; 0, r^2).
        """
        rows = []
        for row in text.split(";"):
            if row.strip():
                rows.append(tuple(IntPolynomial.parse(e) for e in row.split("|")))
        return cls(tuple(rows))

    @classmethod
    def scalar(cls, p: IntPolynomial) -> "PolySystem":
        return cls(((p,),))

    @classmethod
    def rank_one(cls, polys: Sequence[IntPolynomial], config: Configuration) -> "PolySystem":
        """Q_ij = P_j <v_j, e_i>."""
        if len(polys) != config.ell:
            raise InvalidConfiguration(f"need {config.ell} polynomials, got {len(polys)}")
        rows = tuple(
            tuple(IntPolynomial(tuple(c * x for c in p.coefficients)) for x in v)
            for p, v in zip(polys, config.vectors)
        )
        return cls(rows)

    @property
    def ell(self) -> int:
        return len(self.rows)

    @property
    def d(self) -> int:
        return len(self.rows[0])

    @property
    def k(self) -> int:
        return max(q.degree for row in self.rows for q in row)

    @property
    def t(self) -> int:
        """Largest |leading coefficient| among the entries of top degree k."""
        k = self.k
        return max(abs(q.leading) for row in self.rows for q in row if q.degree == k)

    def values(self, rs: np.ndarray) -> np.ndarray:
        """(len(rs), ℓ, d) array of Q_ij(r)."""
        rs = np.asarray(rs, dtype=np.int64)
        out = np.empty((rs.size, self.ell, self.d), dtype=np.int64)
        for j, row in enumerate(self.rows):
            for i, q in enumerate(row):
                out[:, j, i] = q.eval_array(rs)
        return out

    def is_positive_on(self, n0: int) -> bool:
        """Every Q_ij takes values >= 1 on [1, n0]."""
        return bool(np.all(self.values(np.arange(1, n0 + 1)) >= 1))

    def __str__(self) -> str:
        return ";".join("|".join(str(q) for q in row) for row in self.rows)


@dataclass(frozen=True)
class PolyWitness:
    r1: int
    r2: int
    system: PolySystem
    differences: tuple[tuple[int, ...], ...]
    realizers: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def verify(self, a: GridSet) -> bool:
        if self.r1 == self.r2 or min(self.r1, self.r2) < 1:
            return False
        for row, delta, (p, q) in zip(self.system.rows, self.differences, self.realizers):
            expect = tuple(eval_poly(qq, self.r1) - eval_poly(qq, self.r2) for qq in row)
            if expect != tuple(delta):
                return False
            if p not in a or q not in a or tuple(x - y for x, y in zip(p, q)) != expect:
                return False
        return len(self.differences) == self.system.ell

    def to_json(self) -> dict:
        return {
            "found": True,
            "r1": self.r1,
            "r2": self.r2,
            "differences": [list(x) for x in self.differences],
            "realizers": [{"p": list(p), "q": list(q)} for p, q in self.realizers],
        }


def integer_root_domain(n: int, t: int, k: int) -> int:
    """Largest m >= 0 with m^k * t <= n, by binary search."""
    lo, hi = 0, 1
    while hi**k * t <= n:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**k * t <= n:
            lo = mid
        else:
            hi = mid
    return lo


def largeness_violation(ps: PolySystem, n: int, n0: int):
    """First (i, j, r) (1-based i, j) with |Q_ij(r)| > 2n for r in [1, n0], or None."""
    for j, row in enumerate(ps.rows):
        for i, q in enumerate(row):
            for r in range(1, n0 + 1):
                if abs(eval_poly(q, r)) > 2 * n:
                    return (i + 1, j + 1, r)
    return None


def poly_domain(ps: PolySystem, box: Box) -> int:
    """N0 = floor((N/t)^{1/k}); raises DomainTooSmall if N0 < 2 or some |Q_ij| exceeds 2N on [1, N0]."""
    if ps.d != box.d:
        raise InvalidConfiguration(f"system has dimension {ps.d}, box has {box.d}")
    n0 = integer_root_domain(box.n, ps.t, ps.k)
    if n0 < 2:
        raise DomainTooSmall(f"N0 = {n0} < 2 for N={box.n}, t={ps.t}, k={ps.k}")
    bad = largeness_violation(ps, box.n, n0)
    if bad is not None:
        i, j, r = bad
        raise DomainTooSmall(f"|Q_{i}{j}({r})| exceeds 2N = {2 * box.n}", violation=bad)
    return n0


def _pair_blocks(n0: int):
    """Yield (r1, r2) arrays in lexicographic (r', r'') order with r'' < r', in bounded blocks."""
    r1s, r2s, rows = [], [], 0
    for r1 in range(2, n0 + 1):
        r1s.append(np.full(r1 - 1, r1, dtype=np.int64))
        r2s.append(np.arange(1, r1, dtype=np.int64))
        rows += r1 - 1
        if rows >= _PAIR_ROWS:
            yield np.concatenate(r1s), np.concatenate(r2s)
            r1s, r2s, rows = [], [], 0
    if rows:
        yield np.concatenate(r1s), np.concatenate(r2s)


def find_poly_witness(a: GridSet, ps: PolySystem, ds: DiffSet | None = None) -> PolyWitness | None:
    """First pair (r', r''), r'' < r' in [1, N0], ordered by r' then r'', whose differences lie in A - A."""
    n0 = poly_domain(ps, a.box)
    if a.cardinality == 0:
        return None
    ds = difference_set(a) if ds is None else ds
    vals = ps.values(np.arange(0, n0 + 1))
    for r1s, r2s in _pair_blocks(n0):
        pattern = DifferencePattern(a.box, vals[r1s] - vals[r2s], np.stack([r1s, r2s], axis=1))
        k = pattern.first(ds)
        if k >= 0:
            r1, r2 = (int(x) for x in pattern.labels[k])
            deltas = tuple(tuple(int(x) for x in row) for row in pattern.vectors[k])
            reals = tuple(realizer(a, delta) for delta in deltas)
            w = PolyWitness(r1, r2, ps, deltas, reals)
            assert w.verify(a)
            return w
    return None


def square_difference_ap(a: GridSet, m: int, ds: DiffSet | None = None) -> APWitness | None:
    """Smallest r >= 1 with {j r^2 : 1 <= j <= ℓ} ⊆ A - A, as the symmetric m-term AP of step r^2."""
    ell = _check_odd(m)
    if a.box.d != 1:
        raise ValueError("square_difference_ap needs a one-dimensional set")
    if a.cardinality < 2:
        return None
    ds = difference_set(a) if ds is None else ds
    r_top = int(np.sqrt((a.box.n - 1) / ell)) + 1
    rs = np.array([r for r in range(1, r_top + 1) if ell * r * r <= a.box.n - 1], dtype=np.int64)
    config = Configuration.progression(ell)
    pattern = DifferencePattern.dilates(a.box, config.array, rs * rs)
    k = pattern.first(ds)
    if k < 0:
        return None
    r = int(rs[k])
    step = r * r
    reals = tuple(realizer(a, (j * step,)) for j in range(1, ell + 1))
    w = DilateWitness(step, config, reals)
    assert w.verify(a)
    return APWitness(r, step, tuple(j * step for j in range(-ell, ell + 1)), w)


def poly_threshold_constant(ps: PolySystem, positive: bool = False) -> float:
    """2^{1/ℓ} 4^d t^{1/(ℓk)}, with 4 replaced by 2 when every Q_ij is positive."""
    base = 2.0 if positive else 4.0
    return 2.0 ** (1.0 / ps.ell) * base**ps.d * float(ps.t) ** (1.0 / (ps.ell * ps.k))


def poly_threshold_density(ps: PolySystem, n: int, positive: bool = False) -> float:
    return poly_threshold_constant(ps, positive) * n ** (-1.0 / (ps.ell * ps.k))


def single_poly_constant(p: IntPolynomial) -> float:
    """4 |a_k|^{1/k} for a single polynomial of degree k."""
    if p.degree < 1:
        raise InvalidConfiguration("need a polynomial of degree >= 1")
    return 4.0 * abs(p.leading) ** (1.0 / p.degree)
