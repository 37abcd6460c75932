import numpy as np
import pytest

from diffsetlab import (Box, Configuration, GridSet, ap_in_sumset, best_translate, config_in_sumset,
                        make_grid_set, sum_set)
from diffsetlab.errors import BoxMismatch
from diffsetlab.sumset import _direct_search, translate_intersection

from _oracles import sums, sumset_config, translate_census

A124 = make_grid_set(Box(4), [1, 2, 4])


def test_best_translate_examples():
    a = make_grid_set(Box(3), [1, 3])
    sc = best_translate(a, a)
    assert sc.census == 4 and sc.t == (4,) and sc.size == 2
    assert [tuple(p) for p in sc.intersection.points()] == [(1,), (3,)]
    one = make_grid_set(Box(5), [1])
    sc = best_translate(one, one)
    assert sc.t == (2,) and sc.size == 1
    for n in (1, 2, 7, 20):
        full = GridSet.full(Box(n))
        assert best_translate(full, full).size >= n * n / (2 * n - 1)


def test_best_translate_errors():
    with pytest.raises(ValueError):
        best_translate(make_grid_set(Box(3), []), make_grid_set(Box(3), [1]))
    with pytest.raises(BoxMismatch):
        best_translate(make_grid_set(Box(3), [1]), make_grid_set(Box(4), [1]))


def test_translate_census_identity_and_containment():
    rng = np.random.default_rng(6)
    for n, d in [(6, 1), (9, 1), (4, 2), (3, 3)]:
        box = Box(n, d)
        for _ in range(10):
            a = GridSet(box, rng.choice(box.cells, int(rng.integers(1, box.cells + 1)), replace=False))
            b = GridSet(box, rng.choice(box.cells, int(rng.integers(1, box.cells + 1)), replace=False))
            sc = best_translate(a, b)
            pa, pb = [tuple(p) for p in a.points()], [tuple(p) for p in b.points()]
            assert sc.census == a.cardinality * b.cardinality == translate_census(pa, pb, n, d)
            assert sc.size * (2 * n - 1) ** d >= sc.census
            dp = [tuple(p) for p in sc.intersection.points()]
            ss = sums(pa, pb)
            for p in dp:
                assert p in pb and tuple(t - x for t, x in zip(sc.t, p)) in set(pa)
                for q in dp:
                    assert tuple(t + x - y for t, x, y in zip(sc.t, p, q)) in ss


def test_translate_intersection_matches_definition():
    a = make_grid_set(Box(6), [1, 2, 5])
    b = make_grid_set(Box(6), [2, 3, 4, 6])
    d = translate_intersection(a, b, (7,))
    assert [p[0] for p in d.points()] == [2, 6]


def test_config_in_sumset_examples():
    s = sum_set(A124, A124)
    w = config_in_sumset(A124, A124, Configuration.parse("1"))
    assert w.verify(s)
    one = make_grid_set(Box(4), [2])
    assert config_in_sumset(one, one, Configuration.parse("1")) is None
    for ell in (1, 2, 3):
        n = 2 * ell + 1
        full = GridSet.full(Box(n))
        w = config_in_sumset(full, full, Configuration.progression(ell))
        assert w.r == 1 and w.method == "translate"


def test_direct_fallback_completes_the_search():
    # every translate has |D_t| = 1, yet A + B = {2, 3, 4} holds 3 +- 1
    a = make_grid_set(Box(3), [1])
    b = make_grid_set(Box(3), [1, 2, 3])
    c = Configuration.parse("1")
    assert config_in_sumset(a, b, c, exhaustive=False) is None
    w = config_in_sumset(a, b, c)
    assert w.method == "direct" and w.center == (3,) and w.r == 1


def test_direct_search_matches_oracle():
    rng = np.random.default_rng(12)
    for spec, n in [("1", 7), ("1;2", 8), ("1,0;0,1", 4), ("2,-1", 4)]:
        c = Configuration.parse(spec)
        box = Box(n, c.d)
        for _ in range(12):
            a = GridSet(box, rng.choice(box.cells, int(rng.integers(1, 5)), replace=False))
            b = GridSet(box, rng.choice(box.cells, int(rng.integers(1, 5)), replace=False))
            pa, pb = [tuple(p) for p in a.points()], [tuple(p) for p in b.points()]
            vecs = [tuple(v) for v in c.vectors]
            for center in (False, True):
                expect = sumset_config(pa, pb, n, vecs, require_center=center)
                got = _direct_search(sum_set(a, b), c, center)
                assert got == expect
                w = config_in_sumset(a, b, c, require_center=center)
                assert (w is None) == (expect is None)


def test_ap_in_sumset_examples():
    w = ap_in_sumset(A124, A124, 3)
    s = sum_set(A124, A124)
    assert len(w.terms) == 3 and all(s.contains((x,)) for x in w.terms)
    assert w.terms[1] == w.t and w.terms[2] - w.terms[1] == w.r
    one = make_grid_set(Box(4), [1])
    assert ap_in_sumset(one, one, 3) is None
    with pytest.raises(ValueError):
        ap_in_sumset(A124, A124, 4)


def test_ap_in_sumset_at_threshold():
    # |A||B|/N^2 >= 8 N^{-2/(m-1)}
    rng = np.random.default_rng(13)
    for n in (32, 64, 128):
        for m in (3, 5):
            k = int(np.ceil(np.sqrt(8 * n ** (-2 / (m - 1))) * n))
            if k > n:
                continue
            for _ in range(20):
                a = GridSet(Box(n), rng.choice(n, k, replace=False))
                b = GridSet(Box(n), rng.choice(n, k, replace=False))
                assert a.cardinality * b.cardinality / n**2 >= 8 * n ** (-2 / (m - 1))
                w = ap_in_sumset(a, b, m)
                assert w is not None and w.witness.verify(sum_set(a, b))
