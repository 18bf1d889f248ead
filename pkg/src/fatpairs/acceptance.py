"""Acceptance criteria as plain functions, shared by the test suite and ``verify``.

Each criterion returns a :class:`CriterionResult`; ``level="quick"`` shrinks
the sampled workloads (pair sweeps, module counts, Monte Carlo sizes) for
smoke runs, ``"desk"`` runs them at full size.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from scipy.stats import chi2

from .algebra import make_field, mat_mul
from .fatness import element_order, fat_test, is_ppd_by_order, ppd_test
from .groups import (
    GL,
    SL,
    Sampler,
    SubspaceBasis,
    enumerate_group,
    group_order,
    make_stream,
    parabolic_element,
    standard_subspace,
)
from .modspin import NortonBudgetExhausted, is_irreducible_exhaustive, is_irreducible_norton
from .proportions import (
    cell_bound_simple,
    exact_pair_stats,
    fat_e,
    fat_in_stabilizer,
    gaussian,
    gaussian_by_enumeration,
    gaussian_pascal,
    harmonic_tail_check,
    inverse_gaussian_sum_check,
    stabilizer_admits_fat,
    mc_pair_stats,
)
from .reduction import dichotomy_sweep, reduce_pair, classify_invariant_subspace

LEVELS = ("desk", "quick")


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    limit_seconds: float = 0.0

    @property
    def within_time(self) -> bool:
        return self.seconds < self.limit_seconds

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.1f}s / {self.limit_seconds:.0f}s)"

    def to_dict(self, timing: bool = False):
        out = {"number": self.number, "title": self.title, "passed": self.passed, "detail": self.detail}
        if timing:
            out["seconds"] = round(self.seconds, 3)
            out["limit_seconds"] = self.limit_seconds
        return out


def _check_level(level):
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")


@lru_cache(maxsize=None)
def _exact(kind: str, d: int, q: int):
    G = (GL if kind == "gl" else SL)(d, q)
    return exact_pair_stats(G)


def _overall_check(stats, d, q):
    qd = Fraction(1, q ** (d - 1))
    raf = stats.report("red_and_fat").value
    rif = stats.report("red_if_fat").value
    ok = raf < qd and rif < 2 * qd
    return ok, f"{stats.group.name}: red-and-fat={raf} < {qd}, red-if-fat={rif} < {2 * qd}"


def criterion_1(level="desk", seed=42):
    ok, detail = _overall_check(_exact("gl", 3, 2), 3, 2)
    return ok, detail


def criterion_2(level="desk", seed=42):
    oks, details = [], []
    for kind in ("gl", "sl"):
        ok, detail = _overall_check(_exact(kind, 3, 3), 3, 3)
        oks.append(ok)
        details.append(detail)
    return all(oks), "; ".join(details)


def criterion_3(level="desk", seed=42):
    bad = []
    n_cells = 0
    for kind, q in (("gl", 2), ("gl", 3), ("sl", 3)):
        S = _exact(kind, 3, q)
        F = S.group.field
        total = Fraction(0)
        for r in S.reports:
            if r.statistic != "red_and_fat_e1e2":
                continue
            n_cells += 1
            total += r.value
            e1, e2 = r.cell
            if max(e1, e2) < 3:
                simple = cell_bound_simple(e1, e2, 3, F)
                if not (r.value < r.bound <= simple):
                    bad.append((S.group.name, r.cell, r.value))
            elif r.value != 0:
                bad.append((S.group.name, r.cell, r.value))
        if total != S.report("red_and_fat").value:
            bad.append((S.group.name, "sum", total))
    return not bad, f"{n_cells} cells checked, violations: {bad or 'none'}"


def criterion_4(level="desk", seed=42):
    bad = []
    vals = []
    for e, q in ((2, 2), (2, 3), (3, 2), (2, 4), (3, 3)):
        F = make_field(*{4: (2, 2)}.get(q, (q, 1)))
        a = fat_e(e, F, "formula")
        b = fat_e(e, F, "exhaustive")
        vals.append(f"fat({e})|q={q}={a}")
        if a != b or not (Fraction(1, e + 1) <= a < Fraction(1, e)):
            bad.append((e, q, a, b))
    if fat_e(2, make_field(2)) != Fraction(1, 3):
        bad.append("fat(2)|q=2 != 1/3")
    return not bad, ", ".join(vals) + (f"; bad: {bad}" if bad else "")


def criterion_5(level="desk", seed=42):
    bad = []
    n = 0
    for d, q in ((3, 2), (3, 3), (4, 2)):
        G = GL(d, q)
        F = G.field
        for w in range(1, d):
            W = standard_subspace(F, d, w)
            for e in range(d // 2 + 1, d):
                got = fat_in_stabilizer(G, W, e)
                want = fat_e(e, F) if stabilizer_admits_fat(d, w, e) else Fraction(0)
                n += 1
                if got != want:
                    bad.append((G.name, w, e, got, want))
    return not bad, f"{n} (group, w, e) cases, mismatches: {bad or 'none'}"


def criterion_6(level="desk", seed=42):
    bad = []
    for q in (2, 3):
        F = make_field(q)
        for d in range(0, 5):
            for w in range(0, d + 1):
                if gaussian(d, w, F) != gaussian_by_enumeration(d, w, F):
                    bad.append(("enum", d, w, q))
    if gaussian(4, 2, make_field(2)) != 35:
        bad.append("binom(4,2)_2 != 35")
    for q in (2, 3, 4, 5):
        for d in range(0, 13):
            for w in range(0, d + 1):
                g = gaussian(d, w, q)
                if g != gaussian(d, d - w, q) or g != gaussian_pascal(d, w, q):
                    bad.append(("identity", d, w, q))
    return not bad, f"binom(4,2)_2={gaussian(4, 2, 2)}, failures: {bad or 'none'}"


def criterion_7(level="desk", seed=42):
    bad = []
    n = 0
    for q in (2, 3, 4, 5, 7, 8, 9):
        for d in range(3, 25):
            n += 1
            s, b, ok = inverse_gaussian_sum_check(d, q)
            if not ok:
                bad.append((d, q))
    for d in range(3, 65):
        _, ok = harmonic_tail_check(d)
        if not ok:
            bad.append(("tail", d))
    return not bad, f"{n} (d,q) sum checks and 62 tail checks, failures: {bad or 'none'}"


def stabilizer_fat_pair(F, d, rng, max_tries=10_000):
    """A fat pair inside the stabilizer of a random subspace of admissible dimension."""
    G = GL(d, F)
    sampler = Sampler(G, rng)
    P = sampler.sample()
    e = int(rng.integers(d // 2 + 1, d))
    ws = [w for w in range(1, d) if stabilizer_admits_fat(d, w, e)]
    w = ws[int(rng.integers(0, len(ws)))]
    pair = []
    for _ in range(max_tries):
        g = parabolic_element(F, d, w, rng, P)
        if fat_test(g).is_fat:
            pair.append(g)
            if len(pair) == 2:
                return pair[0], pair[1], SubspaceBasis.span(F, d, P.rows[:w])
    raise RuntimeError("no fat stabilizer elements found")


def _sweep_pair(g1, g2, full_sweep):
    cert = reduce_pair(g1, g2)
    ok = cert.ok and cert.n >= max(cert.e1, cert.e2) and 2 * max(cert.e1, cert.e2) > g1.d
    res = is_irreducible_exhaustive([g1, g2])
    if max(cert.e1, cert.e2) < g1.d:
        if res.witness is not None:
            ok = ok and classify_invariant_subspace(g1, g2, res.witness, U=(cert.U1, cert.U2)).holds
        if full_sweep:
            ok = ok and all(v.holds for v in dichotomy_sweep(g1, g2))
    return ok, res.irreducible, cert.n


def criterion_8(level="desk", seed=42):
    failures = 0
    n_red = 0
    ns = Counter()
    G = GL(3, 2)
    elements = [g for g in enumerate_group(G) if fat_test(g).is_fat]
    for g1 in elements:
        for g2 in elements:
            if is_irreducible_exhaustive([g1, g2]).irreducible:
                continue
            n_red += 1
            ok, _, n = _sweep_pair(g1, g2, full_sweep=True)
            ns[n] += 1
            failures += not ok
    detail = [f"GL(3,2): {n_red} reducible fat pairs, n={dict(ns)}"]
    target = 1000 if level == "desk" else 50
    for q in (2, 3):
        F = make_field(q)
        rng = make_stream(seed, 800 + q)
        done = 0
        while done < target:
            g1, g2, W = stabilizer_fat_pair(F, 4, rng)
            if is_irreducible_exhaustive([g1, g2]).irreducible:
                continue
            ok, _, _ = _sweep_pair(g1, g2, full_sweep=False)
            ok = ok and classify_invariant_subspace(g1, g2, W).holds
            failures += not ok
            done += 1
        detail.append(f"GL(4,{q}): {done} seeded pairs")
    return failures == 0, ", ".join(detail) + f"; failures={failures}"


def criterion_9(level="desk", seed=42):
    G = GL(3, 3)
    n_fat = n_ppd = 0
    gap_orders = Counter()
    bad = []
    order8 = 0
    for g in enumerate_group(G):
        fat = fat_test(g).e == 2
        ppd = ppd_test(g, 2).is_ppd
        if ppd != is_ppd_by_order(g, 2):
            bad.append(("ppd oracle", g.rows))
        if ppd and not fat:
            bad.append(("ppd not fat", g.rows))
        n_fat += fat
        n_ppd += ppd
        o = element_order(g)
        if fat and not ppd:
            gap_orders[o] += 1
        if o == 8:
            order8 += 1
            if not (fat and not ppd):
                bad.append(("order 8 outside gap", g.rows))
    ok = not bad and n_fat > n_ppd and gap_orders[8] == order8 > 0
    return ok, f"fat={n_fat}, ppd={n_ppd}, gap orders={dict(sorted(gap_orders.items()))}, order-8 elements={order8}; bad={bad[:3] or 'none'}"


def _random_module(rng):
    d = int(rng.integers(2, 6))
    q = int(rng.choice([2, 3]))
    F = make_field(q)
    kind = int(rng.integers(0, 4))
    if kind == 0:
        # generic pair: almost always irreducible
        s = Sampler(GL(d, F), rng)
        return [s.sample(), s.sample()]
    if kind == 1:
        # common invariant subspace
        P = Sampler(GL(d, F), rng).sample()
        w = int(rng.integers(1, d))
        return [parabolic_element(F, d, w, rng, P), parabolic_element(F, d, w, rng, P)]
    if kind == 2:
        # one element and a power of it: reducible unless its charpoly is irreducible
        g = Sampler(GL(d, F), rng).sample()
        return [g, mat_mul(g, g)]
    # block diagonal pair, a direct sum of two modules
    w = int(rng.integers(1, d))
    g1 = parabolic_element(F, d, w, rng)
    g2 = parabolic_element(F, d, w, rng)
    return [g1, mat_mul(g1, g2)]


def criterion_10(level="desk", seed=42):
    n = 1000 if level == "desk" else 200
    rng = make_stream(seed, 1000)
    norton_rng = make_stream(seed, 1001)
    disagree = exhausted = red = 0
    for _ in range(n):
        gens = _random_module(rng)
        truth = is_irreducible_exhaustive(gens).irreducible
        red += not truth
        try:
            res = is_irreducible_norton(gens, norton_rng)
        except NortonBudgetExhausted:
            exhausted += 1
            continue
        if res.irreducible != truth:
            disagree += 1
        elif not res.irreducible and not (0 < res.witness.dim < gens[0].d and res.witness.is_closed_under(gens)):
            disagree += 1
    ok = disagree == 0 and exhausted == 0
    return ok, f"{n} modules ({red} reducible), disagreements={disagree}, budget exhausted={exhausted}"


def criterion_11(level="desk", seed=42):
    n1, n2 = (200_000, 100_000) if level == "desk" else (20_000, 10_000)
    a = mc_pair_stats(GL(5, 2), n1, seed).report("red_and_fat")
    b = mc_pair_stats(GL(4, 3), n2, seed).report("red_if_fat")
    ok = a.ci[1] < Fraction(1, 16) and b.ci[1] < Fraction(2, 27)
    return ok, (
        f"GL(5,2) red-and-fat={a.estimate:.5f} upper={a.ci[1]:.5f} < 1/16; "
        f"GL(4,3) red-if-fat={b.estimate:.5f} upper={b.ci[1]:.5f} < 2/27"
    )


def criterion_12(level="desk", seed=42):
    G = GL(2, 2)
    s = Sampler(G, make_stream(seed, 1200))
    counts = Counter(s.sample().rows for _ in range(6000))
    n = group_order(G)
    expected = 6000 / n
    stat = sum((counts.get(g.rows, 0) - expected) ** 2 / expected for g in enumerate_group(G))
    pval = float(chi2.sf(stat, n - 1))
    H = SL(2, 3)
    s2 = Sampler(H, make_stream(seed, 1201))
    from .algebra import det

    dets = Counter(det(s2.sample()) for _ in range(10_000))
    ok = pval > 1e-6 and set(dets) == {1} and len(counts) == n
    return ok, f"GL(2,2) chi2={stat:.2f} p={pval:.3g} > 1e-6; SL(2,3) determinants={dict(dets)}"


CRITERIA = {
    1: ("exact overall bounds, GL(3,2)", criterion_1, 10),
    2: ("exact overall bounds, GL(3,3) and SL(3,3)", criterion_2, 300),
    3: ("per-cell bounds and cell sums", criterion_3, 300),
    4: ("fat(e) formula vs enumeration", criterion_4, 60),
    5: ("fat proportion in subspace stabilizers", criterion_5, 120),
    6: ("Gaussian coefficients", criterion_6, 30),
    7: ("subspace-count sum and harmonic tail", criterion_7, 5),
    8: ("reduction sweep", criterion_8, 600),
    9: ("ppd/fat gap in GL(3,3)", criterion_9, 60),
    10: ("Norton vs exhaustive oracle", criterion_10, 120),
    11: ("Monte Carlo consistency", criterion_11, 300),
    12: ("sampling uniformity", criterion_12, 10),
}


def run_criterion(number: int, level: str = "desk", seed: int = 42) -> CriterionResult:
    _check_level(level)
    title, fn, limit = CRITERIA[number]
    t0 = time.perf_counter()
    try:
        ok, detail = fn(level, seed)
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, title, bool(ok), detail, time.perf_counter() - t0, limit)


def run_all(level: str = "desk", seed: int = 42, numbers=None):
    for k in numbers or sorted(CRITERIA):
        yield run_criterion(k, level, seed)
