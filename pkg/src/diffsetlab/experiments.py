"""Seeded set generators, threshold sweeps and a heuristic extremal probe.

Every trial draws from its own counter-based (Philox) stream keyed by the
trial seed, so a TrialSpec alone reproduces its set bit for bit and trials
can run in any order or process.
"""
from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .dilates import (Configuration, ap_in_diffset, find_dilate, threshold_constant,
                      _check_odd)
from .errors import DiffsetlabError
from .grid import Box, GridSet
from .patterns import DifferencePattern
from .poly import PolySystem, find_poly_witness, poly_domain, poly_threshold_density, square_difference_ap
from .sumset import ap_in_sumset

KINDS = ("ap-diff", "ap-sum", "dilate", "poly", "square-ap")
GENERATORS = ("uniform-random", "greedy-avoider", "perturbed-structured")
CSV_COLUMNS = ("target", "N", "d", "density", "seed", "found", "r", "elapsed_ms")
DEFAULT_MULTIPLIERS = (0.25, 0.5, 1.0, 2.0)
FLIP_FRACTION = 0.1


@dataclass(frozen=True)
class Target:
    """The guarantee under test and its parameters."""

    kind: str
    m: int | None = None
    config: Configuration | None = None
    system: PolySystem | None = None
    positive: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown target {self.kind!r}; expected one of {KINDS}")
        if self.kind in ("ap-diff", "ap-sum", "square-ap"):
            if self.m is None:
                raise ValueError(f"target {self.kind} needs m")
            _check_odd(self.m)
        if self.kind == "dilate" and self.config is None:
            raise ValueError("target dilate needs a configuration")
        if self.kind == "poly" and self.system is None:
            raise ValueError("target poly needs a polynomial system")

    @property
    def d(self) -> int:
        if self.kind == "dilate":
            return self.config.d
        if self.kind == "poly":
            return self.system.d
        return 1

    @property
    def label(self) -> str:
        if self.kind == "dilate":
            return f"dilate[{self.config}]"
        if self.kind == "poly":
            return f"poly[{self.system}]" + ("+" if self.positive else "")
        return f"{self.kind}[m={self.m}]"

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "config": str(self.config) if self.config else None,
            "system": str(self.system) if self.system else None,
            "positive": self.positive,
        }

    def raw_threshold(self, n: int) -> float:
        """Density the guarantee asks of each set (uncapped); for ap-sum, of the product |A||B|/N^2."""
        if self.kind in ("ap-diff", "square-ap"):
            return 4.0 * n ** (-2.0 / (self.m - 1))
        if self.kind == "ap-sum":
            return 8.0 * n ** (-2.0 / (self.m - 1))
        if self.kind == "dilate":
            return threshold_constant(self.config) * n ** (-1.0 / self.config.ell)
        return poly_threshold_density(self.system, n, self.positive)

    def set_density(self, n: int, multiplier: float = 1.0) -> float:
        raw = multiplier * self.raw_threshold(n)
        if self.kind == "ap-sum":
            raw = math.sqrt(raw)
        return min(1.0, raw)

    def guaranteed(self) -> bool:
        """square-ap has no desk-scale density guarantee."""
        return self.kind != "square-ap"

    def hypothesis_holds(self, n: int, a: GridSet, b: GridSet | None = None) -> bool:
        if not self.guaranteed():
            return False
        cells = a.box.cells
        thr = self.raw_threshold(n) * (1 - 1e-12)
        if self.kind == "ap-sum":
            return a.cardinality * b.cardinality >= thr * cells * cells
        if self.kind == "dilate" and n < self.config.s:
            return False
        if self.kind == "poly":
            try:
                poly_domain(self.system, a.box)
            except DiffsetlabError:
                return False
        return a.cardinality >= thr * cells

    def pattern(self, box: Box) -> DifferencePattern:
        """Difference pattern the greedy avoider keeps out of A - A."""
        if self.kind in ("ap-diff", "ap-sum"):
            return DifferencePattern.dilates(box, Configuration.progression((self.m - 1) // 2).array)
        if self.kind == "square-ap":
            ell = (self.m - 1) // 2
            rs = np.array([r for r in range(1, box.n) if ell * r * r <= box.n - 1], dtype=np.int64)
            return DifferencePattern.dilates(box, Configuration.progression(ell).array, rs * rs)
        if self.kind == "dilate":
            return DifferencePattern.dilates(box, self.config.array)
        n0 = poly_domain(self.system, box)
        vals = self.system.values(np.arange(0, n0 + 1))
        r1, r2 = np.triu_indices(n0 + 1, k=1)
        keep = r1 >= 1
        r1, r2 = r1[keep], r2[keep]
        return DifferencePattern(box, vals[r2] - vals[r1], np.stack([r2, r1], axis=1))

    def find(self, a: GridSet, b: GridSet | None = None):
        """Run the matching finder; returns (found, r, summary)."""
        if self.kind == "ap-diff":
            w = ap_in_diffset(a, self.m)
            return (w is not None, w.r if w else None, w.to_json() if w else {})
        if self.kind == "square-ap":
            w = square_difference_ap(a, self.m)
            return (w is not None, w.r if w else None, w.to_json() if w else {})
        if self.kind == "dilate":
            w = find_dilate(a, self.config)
            return (w is not None, w.r if w else None, w.to_json() if w else {})
        if self.kind == "poly":
            w = find_poly_witness(a, self.system)
            return (w is not None, w.r1 if w else None, w.to_json() if w else {})
        w = ap_in_sumset(a, b, self.m)
        return (w is not None, w.r if w else None, w.to_json() if w else {})


@dataclass(frozen=True)
class TrialSpec:
    seed: int
    box: Box
    density: float
    generator: str
    target: Target
    trial_id: int = 0
    multiplier: float = 1.0

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")

    @property
    def size(self) -> int:
        return min(self.box.cells, math.ceil(self.density * self.box.cells))

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(np.random.SeedSequence(self.seed, spawn_key=(stream,))))


class _AvoiderState:
    """A growing set together with the multiset of its differences."""

    def __init__(self, box: Box, pattern: DifferencePattern):
        self.box = box
        self.pattern = pattern
        self.counts = np.zeros(box.diff_side**box.d, dtype=np.int32)
        self.offset = int((box.n - 1) * box._powers(box.diff_side).sum())
        self.members: list[int] = []
        self.emb: list[int] = []
        self._emb_of = box._powers(box.diff_side)

    def _embed(self, idx: int) -> int:
        return int((self.box.decode_array(np.array([idx]))[0] - 1) @ self._emb_of)

    def _codes(self, e: int) -> np.ndarray:
        others = np.asarray(self.emb, dtype=np.int64)
        return np.concatenate([[self.offset], e - others + self.offset, others - e + self.offset])

    def present(self) -> bool:
        p = self.pattern
        return len(p) > 0 and bool(np.any(p.valid & np.all(self.counts[p.codes] > 0, axis=1)))

    def try_add(self, idx: int) -> bool:
        e = self._embed(idx)
        codes = self._codes(e)
        np.add.at(self.counts, codes, 1)
        if self.present():
            np.add.at(self.counts, codes, -1)
            return False
        self.members.append(idx)
        self.emb.append(e)
        return True

    def force_add(self, idx: int) -> None:
        e = self._embed(idx)
        np.add.at(self.counts, self._codes(e), 1)
        self.members.append(idx)
        self.emb.append(e)

    def remove(self, idx: int) -> None:
        k = self.members.index(idx)
        self.members.pop(k)
        e = self.emb.pop(k)
        np.add.at(self.counts, self._codes(e), -1)

    def grid_set(self) -> GridSet:
        return GridSet(self.box, np.array(self.members, dtype=np.int64))


def _structured(rng: np.random.Generator, cells: int, size: int) -> np.ndarray:
    if rng.random() < 0.5:
        start = int(rng.integers(0, cells - size + 1))
        return np.arange(start, start + size, dtype=np.int64)
    cand = np.unique(np.round(np.geomspace(1, cells, 4 * size + 4)).astype(np.int64) - 1)
    cand = cand[cand < cells]
    if cand.size >= size:
        return cand[np.linspace(0, cand.size - 1, size).round().astype(np.int64)]
    rest = np.setdiff1d(np.arange(cells, dtype=np.int64), cand)
    return np.concatenate([cand, rng.choice(rest, size - cand.size, replace=False)])


def gen_set(spec: TrialSpec, stream: int = 0) -> GridSet:
    """Deterministic set of exactly ceil(density N^d) points for the given spec."""
    box = spec.box
    cells = box.cells
    if not 0 < spec.density <= 1 or spec.density * cells < 1:
        raise ValueError(f"density {spec.density} infeasible for {cells} cells")
    size = spec.size
    rng = spec.rng(stream)
    if size == cells:
        return GridSet.full(box)
    if spec.generator == "uniform-random":
        return GridSet(box, rng.choice(cells, size, replace=False))
    if spec.generator == "perturbed-structured":
        base = _structured(rng, cells, size)
        k = min(int(round(FLIP_FRACTION * size)), cells - size)
        if k:
            drop = rng.choice(base.size, k, replace=False)
            outside = np.setdiff1d(np.arange(cells, dtype=np.int64), base)
            base = np.concatenate([np.delete(base, drop), rng.choice(outside, k, replace=False)])
        return GridSet(box, base)
    state = _AvoiderState(box, spec.target.pattern(box))
    rejected = []
    for idx in rng.permutation(cells):
        if len(state.members) == size:
            break
        if not state.try_add(int(idx)):
            rejected.append(int(idx))
    short = size - len(state.members)
    members = state.members + rejected[:short]
    return GridSet(box, np.array(members, dtype=np.int64))


@dataclass
class TrialResult:
    spec: TrialSpec
    hypothesis_holds: bool
    found: bool
    r: int | None
    summary: dict
    elapsed_ms: float
    cardinality: int = 0
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.hypothesis_holds and not self.found

    def row(self) -> dict:
        s = self.spec
        return {
            "trial_id": s.trial_id,
            "target": s.target.label,
            "N": s.box.n,
            "d": s.box.d,
            "density": s.density,
            "multiplier": s.multiplier,
            "generator": s.generator,
            "seed": s.seed,
            "cardinality": self.cardinality,
            "hypothesis_holds": self.hypothesis_holds,
            "found": self.found,
            "r": self.r,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "error": self.error,
        }


def run_trial(spec: TrialSpec) -> TrialResult:
    start = time.perf_counter()
    try:
        a = gen_set(spec, 0)
        b = gen_set(spec, 1) if spec.target.kind == "ap-sum" else None
        hyp = spec.target.hypothesis_holds(spec.box.n, a, b)
        found, r, summary = spec.target.find(a, b)
        err = None
        size = a.cardinality
    except (DiffsetlabError, ValueError) as exc:
        hyp, found, r, summary, err, size = False, False, None, {}, f"{type(exc).__name__}: {exc}", 0
    elapsed = (time.perf_counter() - start) * 1000.0
    return TrialResult(spec, hyp, found, r, summary, elapsed, size, err)


@dataclass
class SweepReport:
    parameters: dict
    trials: list[TrialResult] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(t.failed for t in self.trials)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def cells(self) -> list[dict]:
        groups: dict[tuple, dict] = {}
        for t in self.trials:
            s = t.spec
            key = (s.target.label, s.box.n, s.box.d, s.multiplier, s.generator)
            g = groups.setdefault(key, {
                "target": key[0], "N": key[1], "d": key[2], "multiplier": key[3], "generator": key[4],
                "density": s.density, "trials": 0, "hypothesis_trials": 0, "found": 0, "failures": 0, "errors": 0,
            })
            g["trials"] += 1
            g["hypothesis_trials"] += t.hypothesis_holds
            g["found"] += t.found
            g["failures"] += t.failed
            g["errors"] += t.error is not None
        return list(groups.values())

    def to_json(self, include_trials: bool = True) -> dict:
        out = {
            "parameters": self.parameters,
            "n_trials": len(self.trials),
            "failures": self.failures,
            "passed": self.passed,
            "cells": self.cells(),
        }
        if include_trials:
            out["trials"] = [t.row() for t in self.trials]
        return out

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, extrasaction="ignore")
            writer.writeheader()
            for t in self.trials:
                writer.writerow(t.row())


def trial_seed(base_seed: int, trial_id: int) -> int:
    return int(np.random.SeedSequence(base_seed, spawn_key=(trial_id,)).generate_state(1, np.uint64)[0])


def worker_count(workers: int | None = None) -> int:
    cap = os.environ.get("DIFFSETLAB_THREADS")
    n = workers if workers is not None else (os.cpu_count() or 1)
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def build_trials(targets: Sequence[Target], ns: Iterable[int], multipliers: Sequence[float],
                 generators: dict[str, int], seed: int) -> list[TrialSpec]:
    specs = []
    for target in targets:
        for n in ns:
            box = Box(n, target.d)
            for mult in multipliers:
                density = target.set_density(n, mult)
                for gen, count in generators.items():
                    for _ in range(count):
                        tid = len(specs)
                        specs.append(TrialSpec(trial_seed(seed, tid), box, density, gen, target, tid, mult))
    return specs


def run_sweep(targets, ns: Iterable[int], multipliers: Sequence[float] = DEFAULT_MULTIPLIERS,
              trials: int | dict[str, int] = 100, seed: int = 0, workers: int | None = None) -> SweepReport:
    """Run every (target, N, multiplier, generator) cell; trials is a count or {generator: count}."""
    if isinstance(targets, Target):
        targets = [targets]
    generators = {"uniform-random": trials} if isinstance(trials, int) else dict(trials)
    for g in generators:
        if g not in GENERATORS:
            raise ValueError(f"unknown generator {g!r}")
    ns = list(ns)
    specs = build_trials(targets, ns, multipliers, generators, seed)
    params = {
        "targets": [t.describe() for t in targets],
        "N": ns,
        "multipliers": list(multipliers),
        "generators": generators,
        "seed": seed,
    }
    n_workers = worker_count(workers)
    if n_workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(n_workers) as pool:
            results = list(pool.map(run_trial, specs, chunksize=max(1, len(specs) // (8 * n_workers))))
    else:
        results = [run_trial(s) for s in specs]
    return SweepReport(params, results)


@dataclass(frozen=True)
class ProbeResult:
    best: GridSet
    density: float
    threshold: float
    restarts: int
    heuristic: bool = True

    def to_json(self) -> dict:
        return {"cardinality": self.best.cardinality, "density": self.density, "threshold": self.threshold,
                "restarts": self.restarts, "heuristic": True, "points": [list(p) for p in self.best.points()]}


def avoids(target: Target, a: GridSet) -> bool:
    """True when the target's difference pattern is absent from A - A."""
    if a.cardinality == 0:
        return True
    kind = "ap-diff" if target.kind == "ap-sum" else target.kind
    t = Target(kind, target.m, target.config, target.system, target.positive)
    return not t.find(a)[0]


def extremal_probe(box: Box, target: Target, restarts: int = 10, steps: int = 200, seed: int = 0) -> ProbeResult:
    """Largest avoiding set found by randomized greedy plus local search (no optimality claim)."""
    best = GridSet(box, np.empty(0, dtype=np.int64))
    pattern = target.pattern(box) if restarts > 0 else None
    for restart in range(restarts):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(restart,))))
        state = _AvoiderState(box, pattern)
        for idx in rng.permutation(box.cells):
            state.try_add(int(idx))
        for _ in range(steps):
            if not state.members or len(state.members) == box.cells:
                break
            out = state.members[int(rng.integers(len(state.members)))]
            state.remove(out)
            member = set(state.members)
            added = []
            for idx in rng.permutation(box.cells):
                idx = int(idx)
                if idx == out or idx in member:
                    continue
                if state.try_add(idx):
                    added.append(idx)
                    member.add(idx)
                    if len(added) == 2:
                        break
            if not added:
                state.force_add(out)
        cand = state.grid_set()
        if cand.cardinality > best.cardinality:
            best = cand
    assert avoids(target, best)
    thr = target.set_density(box.n) if target.guaranteed() else float("nan")
    return ProbeResult(best, best.density, thr, restarts)
