import json
import math
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fatpairs.algebra import make_field
from fatpairs.fatness import fat_test
from fatpairs.groups import GL, SL, GroupDescriptor, enumerate_group, standard_subspace
from fatpairs.modspin import is_irreducible_exhaustive
from fatpairs.proportions import (
    bounds_table,
    cell_bound,
    exact_pair_stats,
    fat_e,
    fat_in_stabilizer,
    gaussian,
    gaussian_by_enumeration,
    gaussian_pascal,
    harmonic_tail,
    harmonic_tail_check,
    inverse_gaussian_sum_check,
    ln2_interval,
    mc_pair_stats,
    stabilizer_admits_fat,
    wilson_interval,
)

F2, F3 = make_field(2), make_field(3)


def schema():
    return json.loads(resources.files("fatpairs").joinpath("data/report.schema.json").read_text())


def test_gaussian_examples():
    assert gaussian(4, 2, F2) == 35 == gaussian_by_enumeration(4, 2, F2)
    assert gaussian(3, 1, F2) == 7
    assert all(gaussian(d, 0, q) == 1 for d in range(6) for q in (2, 3, 4))


@given(st.integers(0, 14), st.data(), st.sampled_from([2, 3, 4, 5, 7, 8, 9]))
def test_gaussian_identities(d, data, q):
    w = data.draw(st.integers(0, d))
    g = gaussian(d, w, q)
    assert g == gaussian(d, d - w, q) == gaussian_pascal(d, w, q)
    if 0 < w < d:
        assert g == gaussian(d - 1, w - 1, q) + q**w * gaussian(d - 1, w, q)


def test_inverse_gaussian_sum_examples():
    assert inverse_gaussian_sum_check(3, 2) == (Fraction(1, 7), Fraction(1, 4), True)
    assert inverse_gaussian_sum_check(4, 2) == (Fraction(1, 15), Fraction(1, 8), True)
    s, b, ok = inverse_gaussian_sum_check(6, 3)
    assert ok and s == Fraction(1, gaussian(6, 1, 3)) + Fraction(1, gaussian(6, 2, 3))


def test_ln2_interval_brackets_log2():
    lo, hi = ln2_interval(40)
    assert lo < Fraction(math.log(2)) < hi
    assert hi - lo < Fraction(1, 2**40)


def test_harmonic_tail_examples():
    t, ok = harmonic_tail_check(10)
    assert t == sum(Fraction(1, i) for i in range(6, 10)) and ok
    assert t == Fraction(275, 504)  # 0.5456...
    assert all(harmonic_tail_check(d)[1] for d in range(3, 200))
    assert harmonic_tail(3) == Fraction(1, 2)


@pytest.mark.parametrize("e,q,val", [(2, 2, Fraction(1, 3)), (3, 2, Fraction(2, 7)), (2, 3, Fraction(3, 8))])
def test_fat_e_examples(e, q, val):
    F = make_field(q)
    assert fat_e(e, F) == val == fat_e(e, F, "exhaustive")
    assert Fraction(1, e + 1) <= val < Fraction(1, e)


@pytest.mark.parametrize("e", range(2, 12))
@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_fat_e_range(e, q):
    from fatpairs.algebra import parse_order

    F = make_field(*parse_order(str(q)))
    assert Fraction(1, e + 1) <= fat_e(e, F) < Fraction(1, e)


def test_fat_in_stabilizer_examples():
    G = GL(3, 2)
    assert fat_in_stabilizer(G, standard_subspace(F2, 3, 1), 2) == Fraction(1, 3)
    assert fat_in_stabilizer(G, standard_subspace(F2, 3, 2), 2) == Fraction(1, 3)
    assert fat_in_stabilizer(G, standard_subspace(F2, 3, 0), 2) == fat_e(2, F2)


def test_fat_in_stabilizer_inadmissible_is_zero():
    # w = 2 with e = 4: neither w <= 1 nor w >= 4
    assert not stabilizer_admits_fat(5, 2, 4)
    G = GL(4, 2)
    assert fat_in_stabilizer(G, standard_subspace(F2, 4, 2), 3) == 0


def brute_pair_stats(G):
    els = list(enumerate_group(G))
    deg = [fat_test(g).e for g in els]
    fat = [(g, e) for g, e in zip(els, deg) if e is not None]
    red = {}
    for g1, e1 in fat:
        for g2, e2 in fat:
            if not is_irreducible_exhaustive([g1, g2]).irreducible:
                red[(e1, e2)] = red.get((e1, e2), 0) + 1
    n = len(els)
    return Fraction(sum(red.values()), n * n), Fraction(sum(red.values()), len(fat) ** 2), red


def test_exact_gl32_matches_all_pairs():
    S = exact_pair_stats(GL(3, 2))
    raf, rif, red = brute_pair_stats(GL(3, 2))
    assert S.report("red_and_fat").value == raf == Fraction(1, 36)
    assert S.report("red_if_fat").value == rif
    for (e1, e2), k in red.items():
        assert S.report("red_and_fat_e1e2", cell=(e1, e2)).value == Fraction(k, 168 * 168)
    assert S.all_hold


@pytest.mark.parametrize("G", [GL(2, 3), SL(2, 3), GL(2, 4), GroupDescriptor(make_field(5), 2, 2)])
def test_exact_small_groups_match_all_pairs(G):
    S = exact_pair_stats(G)
    raf, rif, _ = brute_pair_stats(G)
    assert S.report("red_and_fat").value == raf
    assert S.report("red_if_fat").value == rif


def test_exact_cells_sum_and_bounds():
    S = exact_pair_stats(GL(3, 2))
    cells = [r for r in S.reports if r.statistic == "red_and_fat_e1e2"]
    assert sum(r.value for r in cells) == S.report("red_and_fat").value
    assert S.report("red_and_fat_e1e2", cell=(2, 2)).bound == Fraction(1, 18)
    for r in cells:
        if 3 in r.cell:
            assert r.value == 0
    assert S.report("red_and_fat").bound == Fraction(1, 4)
    assert S.report("red_if_fat").bound == Fraction(1, 2)


def test_exact_workers_agree():
    a = exact_pair_stats(GL(2, 5), workers=1).to_dict()
    b = exact_pair_stats(GL(2, 5), workers=2).to_dict()
    assert a == b


def test_exact_report_schema():
    S = exact_pair_stats(GL(3, 2))
    doc = {"command": "exact", **S.to_dict(), "all_hold": S.all_hold}
    jsonschema.validate(doc, schema())


def test_bounds_examples():
    T = bounds_table(3, F2)
    assert [(c["e1"], c["e2"]) for c in T.cells] == [(2, 2)]
    assert T.cells[0]["fat_bound"] == Fraction(1, 18) == cell_bound(2, 2, 3, F2)
    assert [(c["e1"], c["e2"]) for c in bounds_table(4, F3).cells] == [(3, 3)]
    T = bounds_table(10, F2)
    assert T.harmonic_tail_below_ln2 and all(c["ordered"] for c in T.cells)
    doc = {"command": "bounds", **T.to_dict()}
    jsonschema.validate(doc, schema())


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    z2 = 2.5758293035489004**2
    assert lo == 0 and abs(hi - z2 / (100 + z2)) < 1e-12
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi and abs((0.5 - lo) - (hi - 0.5)) < 1e-12


def test_mc_is_deterministic_and_valid():
    G = GL(3, 3)
    a = mc_pair_stats(G, 2000, seed=11).to_dict()
    b = mc_pair_stats(G, 2000, seed=11).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    c = mc_pair_stats(G, 2000, seed=11, workers=2).to_dict()
    d = mc_pair_stats(G, 2000, seed=11, workers=2).to_dict()
    assert c == d
    S = mc_pair_stats(G, 2000, seed=11)
    jsonschema.validate({"command": "mc", **S.to_dict(), "all_hold": S.all_hold}, schema())


def test_mc_agrees_with_exact_value():
    G = GL(3, 2)
    exact = exact_pair_stats(G).report("red_and_fat").value
    r = mc_pair_stats(G, 20_000, seed=5).report("red_and_fat")
    assert r.ci[0] <= exact <= r.ci[1]


def test_mc_needs_enough_pairs():
    with pytest.raises(ValueError):
        mc_pair_stats(GL(3, 2), 10, seed=1)
