import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fatpairs.algebra import PolyOverF, block_diag, charpoly, companion, identity, make_field, mat_inv, mat_mul
from fatpairs.fatness import (
    FatnessError,
    element_order,
    fat_degree,
    fat_test,
    is_ppd_by_order,
    ppd_test,
    primitive_prime_divisors,
)
from fatpairs.groups import GL, Sampler, enumerate_group

from helpers import all_monic, irreducible_by_trial

F2, F3 = make_field(2), make_field(3)


def order8_element():
    # x^2 + x + 2 is primitive over F_3: its roots have order 8
    return block_diag(identity(F3, 1), companion(PolyOverF(F3, (2, 1, 1))))


def trial_factor_degrees(f):
    """Degrees with multiplicity by repeated trial division (independent oracle)."""
    F = f.field
    out = []
    for n in range(1, f.degree + 1):
        for g in all_monic(F, n):
            if not irreducible_by_trial(g):
                continue
            m = 0
            while f.degree >= n and (f % g).is_zero:
                f = f // g
                m += 1
            if m:
                out.append((n, m))
    return sorted(out)


@pytest.mark.parametrize("pk,d", [((2, 1), 3), ((2, 1), 4), ((3, 1), 3), ((2, 2), 3), ((5, 1), 2)])
def test_companion_of_irreducible_is_fat_of_full_degree(pk, d):
    F = make_field(*pk)
    f = next(f for f in all_monic(F, d) if irreducible_by_trial(f))
    v = fat_test(companion(f))
    assert v.is_fat and v.e == d and v.factor == f


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_identity_is_not_fat(d):
    v = fat_test(identity(F3, d))
    assert not v.is_fat and v.e is None and v.factor_degree_profile == ((1, d),)


def test_order8_element():
    g = order8_element()
    assert element_order(g) == 8
    v = fat_test(g)
    assert v.is_fat and v.e == 2
    assert not ppd_test(g, 2).is_ppd


def test_singular_input_rejected():
    from fatpairs.algebra import zero_matrix

    with pytest.raises(FatnessError):
        fat_test(zero_matrix(F2, 3))


@pytest.mark.parametrize("q,e,want", [(2, 4, {5}), (2, 6, set()), (3, 2, set()), (2, 3, {7}), (3, 3, {13}), (5, 2, {3}), (2, 1, set()), (3, 1, {2})])
def test_primitive_prime_divisors(q, e, want):
    assert primitive_prime_divisors(q, e) == want


def test_ppd_brute_force_definition():
    for q in (2, 3, 4, 5):
        for e in range(1, 9):
            n = q**e - 1
            primes = [r for r in range(2, n + 1) if n % r == 0 and all(r % s for s in range(2, int(r**0.5) + 1))]
            want = {r for r in primes if all((q**j - 1) % r for j in range(1, e))}
            assert primitive_prime_divisors(q, e) == want


def test_ppd_examples():
    g = companion(PolyOverF(F2, (1, 1, 0, 0, 1)))  # x^4 + x + 1, primitive
    v = ppd_test(g, 4)
    assert v.is_ppd and v.witness_primes == (5,)
    assert element_order(g) == 15
    assert not ppd_test(identity(F2, 4), 4).is_ppd
    with pytest.raises(FatnessError):
        ppd_test(g, 2)


def test_gl42_ppd_elements_are_fat_and_match_order_oracle():
    n_ppd = 0
    for g in enumerate_group(GL(4, 2)):
        p = ppd_test(g, 3).is_ppd
        assert p == is_ppd_by_order(g, 3)
        if p:
            n_ppd += 1
            assert fat_degree(g) == 3
    assert n_ppd > 0


@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 3), (2, 4), (3, 3), (3, 4), (4, 3), (2, 5)]))
def test_fat_verdict_matches_trial_factorization(seed, qd):
    q, d = qd
    F = make_field(*{4: (2, 2)}.get(q, (q, 1)))
    g = Sampler(GL(d, F), np.random.default_rng(seed)).sample()
    prof = trial_factor_degrees(charpoly(g))
    v = fat_test(g)
    assert list(v.factor_degree_profile) == prof
    big = [n for n, _ in prof if 2 * n > d]
    assert v.e == (big[0] if big else None)
    assert len(big) <= 1


@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 3), (3, 3), (2, 4)]))
def test_fatness_is_conjugation_invariant(seed, qd):
    q, d = qd
    F = make_field(q)
    s = Sampler(GL(d, F), np.random.default_rng(seed))
    g, h = s.sample(), s.sample()
    assert fat_test(mat_mul(mat_mul(mat_inv(h), g), h)) == fat_test(g)


@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 4), (3, 3), (2, 5), (3, 4)]))
def test_ppd_matches_order_oracle_on_samples(seed, qd):
    q, d = qd
    F = make_field(q)
    g = Sampler(GL(d, F), np.random.default_rng(seed)).sample()
    for e in range(d // 2 + 1, d + 1):
        v = ppd_test(g, e)
        assert v.is_ppd == is_ppd_by_order(g, e)
        if v.is_ppd:
            assert fat_degree(g) == e
