from collections import Counter
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fatpairs.algebra import MatrixOverF, det, make_field, mat_inv, mat_mul
from fatpairs.groups import (
    GL,
    SL,
    CapExceededError,
    GroupDescriptor,
    GroupError,
    Sampler,
    SubspaceBasis,
    conjugacy_classes,
    enumerate_group,
    enumerate_subspaces,
    generators,
    gl_order,
    group_order,
    image_subspace,
    make_stream,
    parabolic_element,
    parse_group,
    stabilizer_elements,
    standard_subspace,
)
from fatpairs.proportions import gaussian

F2, F3, F4 = make_field(2), make_field(3), make_field(2, 2)


@pytest.mark.parametrize("G,n", [(GL(2, 2), 6), (GL(3, 2), 168), (SL(2, 3), 24), (GL(3, 3), 11232), (SL(2, 4), 60)])
def test_group_orders(G, n):
    assert group_order(G) == n


def test_sl_over_f2_is_gl():
    assert SL(3, 2) == GL(3, 2)


def test_descriptor_rejects_bad_index():
    with pytest.raises(GroupError):
        GroupDescriptor(F3, 2, 4)


@pytest.mark.parametrize("kind,name", [("gl", "GL(3,9)"), ("sl", "SL(3,9)"), ("detindex:2", "G_2(3,9)")])
def test_parse_group(kind, name):
    assert parse_group(kind, 3, "9=3^2").name == name


def _brute_elements(G):
    F, d = G.field, G.d
    out = []
    for entries in product(range(F.q), repeat=d * d):
        rows = tuple(tuple(entries[i * d:(i + 1) * d]) for i in range(d))
        g = MatrixOverF(F, d, rows)
        if G.contains(g):
            out.append(g)
    return out


@pytest.mark.parametrize("G", [GL(2, 2), SL(2, 2), GL(2, 3), SL(2, 3), GL(2, 4), SL(2, 4), GroupDescriptor(make_field(5), 2, 2)])
def test_enumeration_matches_brute_force(G):
    got = list(enumerate_group(G))
    assert len(got) == group_order(G)
    assert got == _brute_elements(G)  # same row-major lexicographic order


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_group(GL(3, 3))) == 11232
    assert [g.rows for g in enumerate_group(SL(2, 2))] == [g.rows for g in enumerate_group(GL(2, 2))]


def test_enumeration_cap():
    with pytest.raises(CapExceededError):
        next(enumerate_group(GL(4, 3)))


def test_stabilizer_examples():
    G = GL(3, 2)
    assert sum(1 for _ in stabilizer_elements(G, standard_subspace(F2, 3, 1))) == 24
    assert sum(1 for _ in stabilizer_elements(G, standard_subspace(F2, 3, 3))) == 168
    assert sum(1 for _ in stabilizer_elements(G, standard_subspace(F2, 3, 0))) == 168


@pytest.mark.parametrize("d,q", [(3, 2), (3, 3), (4, 2)])
def test_stabilizer_index_is_gaussian(d, q):
    G = GL(d, q)
    F = G.field
    for w in range(d + 1):
        n = sum(1 for _ in stabilizer_elements(G, standard_subspace(F, d, w)))
        assert group_order(G) == n * gaussian(d, w, F)


@pytest.mark.parametrize("d,q,w", [(3, 2, 1), (3, 2, 2), (3, 3, 1), (4, 2, 2)])
def test_gl_is_transitive_on_subspaces(d, q, w):
    F = make_field(q)
    W = standard_subspace(F, d, w)
    orbit = {image_subspace(W, g).rows for g in enumerate_group(GL(d, F))}
    assert orbit == {S.rows for S in enumerate_subspaces(F, d, w)}


def test_subspace_helpers():
    W = SubspaceBasis.span(F3, 3, [(1, 1, 0), (2, 2, 0), (0, 0, 1)])
    assert W.dim == 2
    assert W.contains((2, 2, 1)) and not W.contains((1, 0, 0))
    assert len(list(W.vectors())) == 9
    assert standard_subspace(F3, 3, 1).meets_trivially(standard_subspace(F3, 3, 1)) is False
    assert standard_subspace(F3, 3, 1) <= standard_subspace(F3, 3, 2)


@pytest.mark.parametrize("G", [GL(2, 3), SL(2, 3), GL(3, 2), GL(2, 4), SL(2, 5)])
def test_conjugacy_classes_match_brute_force(G):
    elements = list(enumerate_group(G))
    classes = conjugacy_classes(G, elements)
    assert sum(s for _, s in classes) == len(elements)
    # class sizes from the full conjugation action
    index = {g.rows: i for i, g in enumerate(elements)}
    inv = [mat_inv(h) for h in elements]
    for rep, size in classes:
        orbit = {mat_mul(mat_mul(hi, rep), h).rows for h, hi in zip(elements, inv)}
        assert len(orbit) == size
        assert min(index[r] for r in orbit) == index[rep.rows]


@pytest.mark.parametrize("G", [GL(2, 3), SL(2, 3), GL(3, 2), GroupDescriptor(make_field(5), 2, 2)])
def test_generators_lie_in_group(G):
    assert all(G.contains(g) for g in generators(G))


def _chi2_ok(counts, n_cells, n):
    from scipy.stats import chi2

    exp = n / n_cells
    stat = sum((c - exp) ** 2 / exp for c in counts) + (n_cells - len(counts)) * exp
    return chi2.sf(stat, n_cells - 1) > 1e-6


@pytest.mark.parametrize("G", [GL(2, 2), SL(2, 3), GL(2, 3), GroupDescriptor(make_field(5), 2, 2), SL(2, 4)])
def test_sampler_is_uniform(G):
    s = Sampler(G, make_stream(7, 0))
    n = 200 * group_order(G)
    counts = Counter(s.sample().rows for _ in range(n))
    assert all(G.contains(MatrixOverF(G.field, G.d, r)) for r in counts)
    assert _chi2_ok(list(counts.values()), group_order(G), n)


def test_sl_draws_have_determinant_one():
    s = Sampler(SL(2, 3), make_stream(3, 0))
    assert all(det(s.sample()) == 1 for _ in range(10_000))


def test_streams_are_reproducible_and_distinct():
    a = [Sampler(GL(3, 3), make_stream(5, 0)).sample().rows for _ in range(1)]
    b = [Sampler(GL(3, 3), make_stream(5, 0)).sample().rows for _ in range(1)]
    c = make_stream(5, 1).integers(0, 1 << 30, size=4).tolist()
    d = make_stream(5, 0).integers(0, 1 << 30, size=4).tolist()
    assert a == b and c != d


@given(st.integers(0, 2**32 - 1), st.sampled_from([(3, 1), (4, 1), (4, 2), (4, 3), (5, 2)]), st.sampled_from([2, 3, 4]))
def test_parabolic_elements_stabilize(seed, dw, q):
    d, w = dw
    F = make_field(*{4: (2, 2)}.get(q, (q, 1)))
    rng = np.random.default_rng(seed)
    Pm = Sampler(GL(d, F), rng).sample()
    g = parabolic_element(F, d, w, rng, Pm)
    assert det(g) != 0
    assert SubspaceBasis.span(F, d, Pm.rows[:w]).is_invariant(g)


def test_gl_order_formula():
    assert gl_order(3, 3) == 26 * 24 * 18
