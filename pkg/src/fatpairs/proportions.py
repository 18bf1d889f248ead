"""Counting and probability: Gaussian coefficients, fat(e), and pair statistics.

Exact quantities are :class:`fractions.Fraction` end to end; floats appear only
in Monte Carlo estimates and their Wilson intervals.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Any

from .algebra import FieldSpec, count_irreducible
from .fatness import fat_test
from .groups import (
    ENUMERATION_CAP,
    CapExceededError,
    GL,
    GroupDescriptor,
    Sampler,
    SubspaceBasis,
    conjugacy_classes,
    enumerate_group,
    enumerate_subspaces,
    group_order,
    make_stream,
    stabilizer_elements,
)
from .modspin import is_irreducible, is_irreducible_exhaustive

#: Default cap on |G| for exact pair statistics.
PAIR_CAP = 2 * 10**4
CONFIDENCE = 0.99


def _q(spec) -> int:
    return spec.q if isinstance(spec, FieldSpec) else int(spec)


# -- Gaussian coefficients ---------------------------------------------------------------


def gaussian(d: int, w: int, spec) -> int:
    """Number of w-dimensional subspaces of F_q^d (product formula)."""
    if not 0 <= w <= d:
        raise ValueError(f"need 0 <= w <= d, got w={w}, d={d}")
    q = _q(spec)
    num = 1
    den = 1
    for i in range(d - w + 1, d + 1):
        num *= q**i - 1
    for i in range(1, w + 1):
        den *= q**i - 1
    g, r = divmod(num, den)
    assert r == 0
    return g


def gaussian_by_enumeration(d: int, w: int, spec: FieldSpec) -> int:
    """Count w-dimensional subspaces by listing their RREF bases."""
    return sum(1 for _ in enumerate_subspaces(spec, d, w))


def gaussian_pascal(d: int, w: int, spec) -> int:
    """q-Pascal recursion, independent of the product formula."""
    q = _q(spec)
    table = {(0, 0): 1}
    for n in range(1, d + 1):
        for k in range(0, n + 1):
            a = table.get((n - 1, k - 1), 0)
            b = table.get((n - 1, k), 0)
            table[(n, k)] = a + q**k * b
    return table.get((d, w), 0) if d > 0 else int(w == 0)


def inverse_gaussian_sum_check(d: int, spec) -> tuple[Fraction, Fraction, bool]:
    """Exact sum of 1/binom(d,i)_q for 1 <= i <= ceil(d/2)-1 against q^(1-d)."""
    if d < 3:
        raise ValueError("the inverse Gaussian sum bound needs d >= 3")
    q = _q(spec)
    top = -(-d // 2) - 1
    s = sum((Fraction(1, gaussian(d, i, q)) for i in range(1, top + 1)), Fraction(0))
    bound = Fraction(1, q ** (d - 1))
    return s, bound, s < bound


def ln2_interval(terms: int = 64) -> tuple[Fraction, Fraction]:
    """Rational enclosure of ln 2 from sum_{k>=1} 1/(k 2^k).

    The partial sum is a lower bound; the tail after n terms is below
    1/(n 2^n), which gives the upper bound.
    """
    lo = sum((Fraction(1, k * 2**k) for k in range(1, terms + 1)), Fraction(0))
    return lo, lo + Fraction(1, terms * 2**terms)


def harmonic_tail(d: int) -> Fraction:
    """sum of 1/i for ceil((d+1)/2) <= i <= d-1."""
    start = -(-(d + 1) // 2)
    return sum((Fraction(1, i) for i in range(start, d)), Fraction(0))


def harmonic_tail_check(d: int) -> tuple[Fraction, bool]:
    """Certified comparison harmonic_tail(d) < ln 2."""
    t = harmonic_tail(d)
    terms = 32
    while True:
        lo, hi = ln2_interval(terms)
        if t < lo:
            return t, True
        if t >= hi:
            return t, False
        terms *= 2


# -- fat(e) -------------------------------------------------------------------------


def fat_e(e: int, spec: FieldSpec, mode: str = "formula", cap: int = ENUMERATION_CAP) -> Fraction:
    """Proportion of elements of GL(e,q) with irreducible characteristic polynomial.

    ``formula``: each irreducible degree-e polynomial is the characteristic
    polynomial of exactly |GL(e,q)|/(q^e - 1) elements (the centralizer is a
    cyclic torus of order q^e - 1), giving N_e(q)/(q^e - 1).
    ``exhaustive``: count over an enumeration of GL(e,q).
    """
    if e < 1:
        raise ValueError("e must be >= 1")
    if mode == "formula":
        return Fraction(count_irreducible(e, spec), spec.q**e - 1)
    if mode == "exhaustive":
        if e < 2:
            raise ValueError("exhaustive fat(e) needs e >= 2")
        G = GL(e, spec)
        n = sum(1 for g in enumerate_group(G, cap=cap) if fat_test(g).e == e)
        return Fraction(n, group_order(G))
    raise ValueError(f"unknown mode {mode!r}")


def stabilizer_admits_fat(d: int, w: int, e: int) -> bool:
    return w <= d - e or w >= e


def fat_in_stabilizer(G: GroupDescriptor, W: SubspaceBasis, e: int, cap: int = ENUMERATION_CAP) -> Fraction:
    """Proportion of fat(d,q;e)-elements in the stabilizer G_W."""
    if not (G.d < 2 * e and e < G.d):
        raise ValueError(f"need d/2 < e < d, got e={e}, d={G.d}")
    total = 0
    fat = 0
    for g in stabilizer_elements(G, W, cap=cap):
        total += 1
        if fat_test(g).e == e:
            fat += 1
    return Fraction(fat, total)


# -- reports --------------------------------------------------------------------------


def wilson_interval(successes: int, n: int, confidence: float = CONFIDENCE) -> tuple[float, float]:
    if n <= 0:
        raise ValueError("Wilson interval needs n > 0")
    z = NormalDist().inv_cdf(1 - (1 - confidence) / 2)
    phat = successes / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    # the endpoints are exact at the extremes; rounding would leave a ~1e-19 residue
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == n else min(1.0, centre + half)
    return lo, hi


@dataclass
class ProportionReport:
    statistic: str
    method: str
    value: Fraction | None = None
    estimate: float | None = None
    ci: tuple[float, float] | None = None
    successes: int | None = None
    sample_size: int | None = None
    seed: int | None = None
    bound: Fraction | None = None
    relation: str = "<"  # "<" strict upper bound, "=" equality, "none" informational
    bound_source: str = ""
    group: str = ""
    cell: tuple[int, int] | None = None
    e: int | None = None

    @property
    def holds(self) -> bool | None:
        if self.relation == "none" or self.bound is None:
            return None
        if self.method == "exhaustive":
            if self.value is None:
                return None
            return self.value < self.bound if self.relation == "<" else self.value == self.bound
        if self.ci is None:
            return None
        # sampled: True when the interval confirms the bound, False when it
        # excludes it, None when the sample cannot decide
        lo, hi = self.ci
        if self.relation == "<":
            return True if hi < self.bound else False if lo >= self.bound else None
        return lo <= self.bound <= hi

    def to_dict(self) -> dict[str, Any]:
        if self.method == "exhaustive":
            value = None if self.value is None else {"num": self.value.numerator, "den": self.value.denominator}
        else:
            value = None if self.estimate is None else {
                "estimate": self.estimate,
                "ci_low": self.ci[0],
                "ci_high": self.ci[1],
            }
        out = {
            "statistic": self.statistic,
            "group": self.group,
            "value": value,
            "bound": None if self.bound is None else {"num": self.bound.numerator, "den": self.bound.denominator},
            "relation": self.relation,
            "bound_source": self.bound_source,
            "holds": self.holds,
            "method": self.method,
            "sample_size": self.sample_size,
            "seed": self.seed,
        }
        if self.cell is not None:
            out["cell"] = list(self.cell)
        if self.e is not None:
            out["e"] = self.e
        if self.successes is not None:
            out["count"] = self.successes
        return out


def fat_degrees(d: int) -> list[int]:
    return [e for e in range(d // 2 + 1, d + 1)]


def cell_bound(e1: int, e2: int, d: int, spec) -> Fraction:
    """2 fat(e1) fat(e2) q^(1-d)."""
    F = spec
    return 2 * fat_e(e1, F) * fat_e(e2, F) / F.q ** (d - 1)


def cell_bound_simple(e1: int, e2: int, d: int, spec) -> Fraction:
    """2/(e1 e2) q^(1-d)."""
    return Fraction(2, e1 * e2 * spec.q ** (d - 1))


@dataclass
class PairCounts:
    """Raw tallies behind the pair statistics (mergeable by addition)."""

    total_pairs: int = 0
    fat_pairs: Counter = field(default_factory=Counter)
    reducible: Counter = field(default_factory=Counter)
    reducibility_tests: int = 0

    def merge(self, other: "PairCounts") -> "PairCounts":
        return PairCounts(
            self.total_pairs + other.total_pairs,
            self.fat_pairs + other.fat_pairs,
            self.reducible + other.reducible,
            self.reducibility_tests + other.reducibility_tests,
        )


@dataclass
class PairStats:
    group: GroupDescriptor
    method: str
    counts: PairCounts
    element_counts: dict
    reports: list[ProportionReport]
    seed: int | None = None

    def report(self, statistic: str, cell: tuple[int, int] | None = None, e: int | None = None) -> ProportionReport:
        for r in self.reports:
            if r.statistic == statistic and r.cell == cell and r.e == e:
                return r
        raise KeyError((statistic, cell, e))

    @property
    def all_hold(self) -> bool:
        return all(r.holds is not False for r in self.reports)

    def to_dict(self):
        return {
            "group": self.group.name,
            "method": self.method,
            "seed": self.seed,
            "reports": [r.to_dict() for r in self.reports],
        }


# -- exact pair statistics ---------------------------------------------------------------


def _exact_worker(args):
    G, reps, fat2 = args
    counts = PairCounts()
    for g1, e1, size in reps:
        for g2, e2 in fat2:
            counts.reducibility_tests += 1
            if not is_irreducible_exhaustive([g1, g2]).irreducible:
                counts.reducible[(e1, e2)] += size
    return counts


def exact_pair_stats(G: GroupDescriptor, cap: int = PAIR_CAP, workers: int = 1) -> PairStats:
    """Exact red-and-fat, red-if-fat and per-cell statistics by enumeration.

    Every element is classified once.  For the pair loop, g1 runs over
    G-conjugacy class representatives (weighted by class size) and g2 over
    all fat elements: simultaneous conjugation preserves both fatness and
    reducibility, so the tallies are exact.
    """
    n = group_order(G)
    if n > cap:
        raise CapExceededError(f"|{G.name}| = {n} exceeds the pair cap {cap}")
    elements = list(enumerate_group(G, cap=max(cap, ENUMERATION_CAP)))
    degree = {g.rows: fat_test(g).e for g in elements}
    elem_counts = Counter(degree.values())
    fat2 = [(g, degree[g.rows]) for g in elements if degree[g.rows] is not None]
    classes = conjugacy_classes(G, elements)
    reps = [(g, degree[g.rows], size) for g, size in classes if degree[g.rows] is not None]

    if workers > 1:
        chunks = [(G, reps[i::workers], fat2) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_exact_worker, chunks))
    else:
        parts = [_exact_worker((G, reps, fat2))]
    counts = PairCounts()
    for part in parts:
        counts = counts.merge(part)
    counts.total_pairs = n * n
    for e1, c1 in elem_counts.items():
        for e2, c2 in elem_counts.items():
            if e1 is not None and e2 is not None:
                counts.fat_pairs[(e1, e2)] = c1 * c2
    return PairStats(G, "exhaustive", counts, dict(elem_counts), _exact_reports(G, counts, elem_counts, n))


def _exact_reports(G, counts: PairCounts, elem_counts, n) -> list[ProportionReport]:
    F, d = G.field, G.d
    qd = Fraction(1, F.q ** (d - 1))
    name = G.name
    reports = []
    for e in fat_degrees(d):
        r = ProportionReport(
            "fat_e", "exhaustive", value=Fraction(elem_counts.get(e, 0), n), sample_size=n,
            group=name, e=e, successes=elem_counts.get(e, 0),
        )
        if e < d:
            r.bound, r.relation, r.bound_source = fat_e(e, F), "=", "fat(G;e) = fat(e)"
        else:
            r.relation = "none"
        reports.append(r)
    n_fat = sum(counts.fat_pairs.values())
    n_red = sum(counts.reducible.values())
    reports.append(ProportionReport(
        "fat_overall", "exhaustive", value=Fraction(n_fat, n * n), sample_size=n * n,
        group=name, relation="none", successes=n_fat,
    ))
    reports.append(ProportionReport(
        "red_and_fat", "exhaustive", value=Fraction(n_red, n * n), sample_size=n * n,
        bound=qd, bound_source="red-and-fat(G) < q^(1-d)", group=name, successes=n_red,
    ))
    reports.append(ProportionReport(
        "red_if_fat", "exhaustive", value=Fraction(n_red, n_fat) if n_fat else None, sample_size=n_fat,
        bound=2 * qd, bound_source="red-if-fat(G) < 2 q^(1-d)", group=name, successes=n_red,
    ))
    for e1 in fat_degrees(d):
        for e2 in fat_degrees(d):
            red = counts.reducible.get((e1, e2), 0)
            r = ProportionReport(
                "red_and_fat_e1e2", "exhaustive", value=Fraction(red, n * n), sample_size=n * n,
                group=name, cell=(e1, e2), successes=red,
            )
            if max(e1, e2) == d:
                r.bound, r.relation, r.bound_source = Fraction(0), "=", "max(e1,e2) = d pairs are irreducible"
            else:
                r.bound, r.bound_source = cell_bound(e1, e2, d, F), "2 fat(e1) fat(e2) q^(1-d)"
            reports.append(r)
    return reports


# -- Monte Carlo ----------------------------------------------------------------------


def _mc_worker(args):
    G, n_pairs, seed, wid = args
    rng = make_stream(seed, wid)
    norton_rng = make_stream(seed, 10**6 + wid)
    sampler = Sampler(G, rng)
    counts = PairCounts(total_pairs=n_pairs)
    for _ in range(n_pairs):
        g1 = sampler.sample()
        g2 = sampler.sample()
        e1 = fat_test(g1).e
        if e1 is None:
            continue
        e2 = fat_test(g2).e
        if e2 is None:
            continue
        counts.fat_pairs[(e1, e2)] += 1
        counts.reducibility_tests += 1
        if not is_irreducible([g1, g2], rng=norton_rng).irreducible:
            counts.reducible[(e1, e2)] += 1
    return counts


def _split(n, workers):
    base, extra = divmod(n, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def mc_pair_stats(G: GroupDescriptor, n_pairs: int, seed: int, workers: int = 1, min_pairs: int = 1000) -> PairStats:
    """Monte Carlo estimates of the pair statistics with 99% Wilson intervals.

    Worker ``i`` draws its share of pairs from stream ``(seed, i)``, so results
    are reproducible for a fixed (seed, workers).  red-if-fat is the ratio of
    reducible fat pairs to fat pairs in the same sample.
    """
    if n_pairs < min_pairs:
        raise ValueError(f"Monte Carlo mode needs at least {min_pairs} pairs")
    jobs = [(G, k, seed, i) for i, k in enumerate(_split(n_pairs, workers))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_mc_worker, jobs))
    else:
        parts = [_mc_worker(jobs[0])]
    counts = PairCounts()
    for part in parts:
        counts = counts.merge(part)
    return PairStats(G, "monte_carlo", counts, {}, _mc_reports(G, counts, seed), seed=seed)


def _mc_report(stat, k, n, seed, group, **kw) -> ProportionReport:
    if n == 0:
        return ProportionReport(stat, "monte_carlo", sample_size=0, seed=seed, group=group, successes=k, **kw)
    return ProportionReport(
        stat, "monte_carlo", estimate=k / n, ci=wilson_interval(k, n), successes=k,
        sample_size=n, seed=seed, group=group, **kw,
    )


def _mc_reports(G, counts: PairCounts, seed) -> list[ProportionReport]:
    F, d = G.field, G.d
    qd = Fraction(1, F.q ** (d - 1))
    N = counts.total_pairs
    n_fat = sum(counts.fat_pairs.values())
    n_red = sum(counts.reducible.values())
    name = G.name
    reports = [
        _mc_report("fat_overall", n_fat, N, seed, name, relation="none"),
        _mc_report("red_and_fat", n_red, N, seed, name, bound=qd, bound_source="red-and-fat(G) < q^(1-d)"),
        _mc_report("red_if_fat", n_red, n_fat, seed, name, bound=2 * qd, bound_source="red-if-fat(G) < 2 q^(1-d)"),
    ]
    for e1 in fat_degrees(d):
        for e2 in fat_degrees(d):
            red = counts.reducible.get((e1, e2), 0)
            if max(e1, e2) == d:
                kw = dict(bound=Fraction(0), relation="=", bound_source="max(e1,e2) = d pairs are irreducible")
            else:
                kw = dict(bound=cell_bound(e1, e2, d, F), bound_source="2 fat(e1) fat(e2) q^(1-d)")
            reports.append(_mc_report("red_and_fat_e1e2", red, N, seed, name, cell=(e1, e2), **kw))
    return reports


# -- bounds table ---------------------------------------------------------------------


@dataclass
class BoundsTable:
    d: int
    q: int
    cells: list[dict]
    red_and_fat_bound: Fraction
    red_if_fat_bound: Fraction
    harmonic_tail: Fraction
    harmonic_tail_below_ln2: bool
    cell_sum_simple: Fraction

    def to_dict(self):
        def fr(x):
            return {"num": x.numerator, "den": x.denominator}

        return {
            "d": self.d,
            "q": self.q,
            "cells": [
                {
                    "e1": c["e1"],
                    "e2": c["e2"],
                    "fat_bound": fr(c["fat_bound"]),
                    "simple_bound": fr(c["simple_bound"]),
                    "ordered": c["ordered"],
                }
                for c in self.cells
            ],
            "red_and_fat_bound": fr(self.red_and_fat_bound),
            "red_if_fat_bound": fr(self.red_if_fat_bound),
            "harmonic_tail": fr(self.harmonic_tail),
            "harmonic_tail_float": float(self.harmonic_tail),
            "harmonic_tail_below_ln2": self.harmonic_tail_below_ln2,
            "cell_sum_simple": fr(self.cell_sum_simple),
            "cell_sum_simple_below_bound": self.cell_sum_simple < self.red_and_fat_bound,
        }


def bounds_table(d: int, spec: FieldSpec) -> BoundsTable:
    """Per-cell bounds 2 fat(e1) fat(e2) q^(1-d) < 2/(e1 e2) q^(1-d), plus aggregates."""
    if d < 3:
        raise ValueError("bounds need d >= 3")
    cells = []
    es = [e for e in fat_degrees(d) if e < d]
    for e1 in es:
        for e2 in es:
            a = cell_bound(e1, e2, d, spec)
            b = cell_bound_simple(e1, e2, d, spec)
            cells.append({"e1": e1, "e2": e2, "fat_bound": a, "simple_bound": b, "ordered": a < b})
    tail, ok = harmonic_tail_check(d)
    qd = Fraction(1, spec.q ** (d - 1))
    return BoundsTable(
        d, spec.q, cells, qd, 2 * qd, tail, ok,
        sum((c["simple_bound"] for c in cells), Fraction(0)),
    )
