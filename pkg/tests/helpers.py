"""Independent brute-force oracles used across the test modules."""

from itertools import permutations, product

from hypothesis import strategies as st

from fatpairs.algebra import MatrixOverF, PolyOverF, make_field

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


def field_strategy(fields=FIELDS):
    return st.sampled_from(fields).map(lambda pk: make_field(*pk))


def matrices(F, d, invertible=False):
    from fatpairs.algebra import det

    m = st.lists(
        st.lists(st.integers(0, F.q - 1), min_size=d, max_size=d), min_size=d, max_size=d
    ).map(lambda rows: MatrixOverF(F, d, tuple(tuple(r) for r in rows)))
    if invertible:
        m = m.filter(lambda A: det(A) != 0)
    return m


def polys(F, max_degree=6, monic=False):
    coeffs = st.lists(st.integers(0, F.q - 1), min_size=1, max_size=max_degree + 1)
    if monic:
        coeffs = coeffs.map(lambda c: c + [1])
    return coeffs.map(lambda c: PolyOverF(F, tuple(c)))


def _sign(perm):
    s = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, n = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        if n % 2 == 0:
            s = -s
    return s


def leibniz_charpoly(A):
    """det(xI - A) by the Leibniz expansion with polynomial entries."""
    F, d = A.field, A.d
    x = PolyOverF.x(F)
    M = [[(x if i == j else PolyOverF(F, (0,))) - PolyOverF(F, (A.rows[i][j],)) for j in range(d)] for i in range(d)]
    total = PolyOverF(F, (0,))
    for perm in permutations(range(d)):
        term = PolyOverF.one(F)
        for i in range(d):
            term = term * M[i][perm[i]]
        if _sign(perm) < 0:
            term = PolyOverF(F, (0,)) - term
        total = total + term
    return total


def leibniz_det(A):
    F, d = A.field, A.d
    total = 0
    for perm in permutations(range(d)):
        term = 1
        for i in range(d):
            term = F.mul(term, A.rows[i][perm[i]])
        total = F.add(total, term) if _sign(perm) > 0 else F.sub(total, term)
    return total


def all_monic(F, n):
    for tail in product(range(F.q), repeat=n):
        yield PolyOverF(F, tuple(tail) + (1,))


def irreducible_by_trial(f):
    """Trial division by every monic polynomial of degree 1..deg f // 2."""
    F = f.field
    n = f.degree
    if n < 1:
        return False
    for k in range(1, n // 2 + 1):
        for g in all_monic(F, k):
            if (f % g).is_zero:
                return False
    return True
