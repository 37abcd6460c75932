"""From difference sets to sumsets by averaging over translates.

For every t in [2, 2N]^d let D_t = B ∩ (t - A).  Each pair (a, b) is counted
by exactly one t, so sum_t |D_t| = |A||B| and some translate has
|D_t| >= |A||B| / (2N-1)^d.  Since D_t - D_t + t ⊆ A + B, a dilate found in
D_t - D_t becomes t ± r v_j in A + B.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dilates import Configuration, DilateWitness, _check_domain, _check_odd, find_dilate
from .errors import BoxMismatch
from .grid import GridSet, SumSet, representation_counts, sum_set

Point = tuple[int, ...]


@dataclass(frozen=True)
class TranslateScore:
    t: Point
    intersection: GridSet
    size: int
    census: int


@dataclass(frozen=True)
class SumsetWitness:
    """center ± r v_j in A + B for every j.

    ``method`` is ``"translate"`` when the witness came from a translate D_t
    (then ``translate == center``) and ``"direct"`` when it came from the
    exhaustive scan of A + B.
    """

    center: Point
    r: int
    config: Configuration
    method: str
    translate: Point | None = None
    translate_size: int = 0
    dilate: DilateWitness | None = None

    def verify(self, s: SumSet) -> bool:
        for v in self.config.vectors:
            for sign in (1, -1):
                if not s.contains(tuple(c + sign * self.r * x for c, x in zip(self.center, v))):
                    return False
        return self.r > 0

    def to_json(self) -> dict:
        return {
            "found": True,
            "t": list(self.center),
            "r": self.r,
            "method": self.method,
            "translate_size": self.translate_size,
        }


@dataclass(frozen=True)
class SumsetAP:
    t: int
    r: int
    terms: tuple[int, ...]
    witness: SumsetWitness

    def to_json(self) -> dict:
        out = self.witness.to_json()
        out.update({"t": self.t, "ap": list(self.terms)})
        return out


def _check_pair(a: GridSet, b: GridSet) -> None:
    if a.box != b.box:
        raise BoxMismatch(f"boxes differ: {a.box} vs {b.box}")
    if a.cardinality == 0 or b.cardinality == 0:
        raise ValueError("both sets must be non-empty")


def translate_intersection(a: GridSet, b: GridSet, t) -> GridSet:
    """D = B ∩ (t - A)."""
    t = np.atleast_1d(np.asarray(t, dtype=np.int64))
    keep = a.contains_coords(t[None, :] - b.coords)
    return GridSet(b.box, b.indices[keep])


def translate_counts(a: GridSet, b: GridSet) -> np.ndarray:
    """|B ∩ (t - A)| for every t, as a dense array over [2, 2N]^d."""
    return representation_counts(a, b)


def _t_of(flat_index: int, box) -> Point:
    side = box.diff_side
    digits = []
    for _ in range(box.d):
        flat_index, rem = divmod(flat_index, side)
        digits.append(rem + 2)
    return tuple(int(x) for x in reversed(digits))


def best_translate(a: GridSet, b: GridSet) -> TranslateScore:
    """The translate with the largest |B ∩ (t - A)| (ties: smallest t)."""
    _check_pair(a, b)
    counts = translate_counts(a, b).ravel()
    k = int(np.argmax(counts))
    t = _t_of(k, a.box)
    d = translate_intersection(a, b, t)
    assert d.cardinality == counts[k]
    return TranslateScore(t, d, int(counts[k]), int(counts.sum()))


def _shifted(arr: np.ndarray, u) -> np.ndarray:
    """out[x] = arr[x + u], False outside."""
    out = np.zeros_like(arr)
    src, dst = [], []
    for size, step in zip(arr.shape, u):
        step = int(step)
        if abs(step) >= size:
            return out
        if step >= 0:
            src.append(slice(step, size))
            dst.append(slice(0, size - step))
        else:
            src.append(slice(0, size + step))
            dst.append(slice(-step, size))
    out[tuple(dst)] = arr[tuple(src)]
    return out


def _direct_search(s: SumSet, c: Configuration, require_center: bool):
    arr = s.to_array()
    side = arr.shape[0]
    for r in range(1, (side - 1) // c.s + 1):
        ok = arr.copy() if require_center else np.ones_like(arr)
        for v in c.array:
            ok &= _shifted(arr, r * v) & _shifted(arr, -r * v)
            if not ok.any():
                break
        if ok.any():
            k = int(np.argmax(ok.ravel()))
            return _t_of(k, s.box), r
    return None


def config_in_sumset(a: GridSet, b: GridSet, c: Configuration, exhaustive: bool = True,
                     require_center: bool = False) -> SumsetWitness | None:
    """(t, r) with t ± r v_j in A + B for all j, or None.

    Translates are tried in decreasing order of |D_t|; the first is the one
    averaging guarantees.  With ``exhaustive`` the sumset itself is scanned
    last, which makes a None answer final.
    """
    _check_pair(a, b)
    _check_domain(a, c)
    s = sum_set(a, b)
    counts = translate_counts(a, b).ravel()
    order = np.argsort(-counts, kind="stable")
    for k in order:
        if counts[k] < 2:
            break
        t = _t_of(int(k), a.box)
        dset = translate_intersection(a, b, t)
        w = find_dilate(dset, c)
        if w is not None:
            out = SumsetWitness(t, w.r, c, "translate", t, dset.cardinality, w)
            assert out.verify(s) and (not require_center or s.contains(t))
            return out
    if exhaustive and s.mask is not None:
        hit = _direct_search(s, c, require_center)
        if hit is not None:
            out = SumsetWitness(hit[0], hit[1], c, "direct")
            assert out.verify(s)
            return out
    return None


def ap_in_sumset(a: GridSet, b: GridSet, m: int, exhaustive: bool = True) -> SumsetAP | None:
    """An m-term progression {t - ℓr, ..., t + ℓr} in A + B (one-dimensional sets)."""
    ell = _check_odd(m)
    if a.box.d != 1:
        raise ValueError("ap_in_sumset needs one-dimensional sets")
    w = config_in_sumset(a, b, Configuration.progression(ell), exhaustive, require_center=True)
    if w is None:
        return None
    t = w.center[0]
    return SumsetAP(t, w.r, tuple(t + j * w.r for j in range(-ell, ell + 1)), w)
