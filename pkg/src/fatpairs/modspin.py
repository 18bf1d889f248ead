"""Spinning vectors under generators and testing irreducibility of the module.

Matrices act on row vectors from the right.  The exhaustive test is the oracle
of record: a module is reducible iff some nonzero vector spins to a proper
subspace, and since scalar multiples spin to the same subspace one
representative per projective point suffices.  Norton's test is the fast path
for larger modules.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .algebra import FieldSpec, MatrixOverF, charpoly, eval_at_matrix, factor, kernel, left_kernel, rref, vec_mat
from .algebra.matrix import _axpy, mat_add, mat_mul, mat_scale, normalize, transpose
from .groups import SubspaceBasis

#: Projective-point count above which :func:`is_irreducible` switches to Norton's test.
NORTON_THRESHOLD = 10**3
#: Default cap for the exhaustive oracle.
ORACLE_CAP = 10**5
NORTON_WORD_BUDGET = 32


class ModspinError(ValueError):
    pass


class NortonBudgetExhausted(RuntimeError):
    """No random algebra element gave a usable factor; fall back to the oracle."""


def fingerprint(gens) -> str:
    h = hashlib.sha1()
    for g in gens:
        h.update(repr(g.rows).encode())
    return h.hexdigest()[:12]


@dataclass(frozen=True)
class SubmoduleBasis(SubspaceBasis):
    """RREF basis of a subspace closed under the generators it was spun from."""

    generators_fingerprint: str = field(default="", compare=False)

    def is_closed_under(self, gens) -> bool:
        return all(self.is_invariant(g) for g in gens)


class Echelon:
    """Incrementally grown basis kept in semi-echelon form (pivot entries are 1)."""

    __slots__ = ("F", "d", "rows", "pivots")

    def __init__(self, F: FieldSpec, d: int):
        self.F = F
        self.d = d
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, v):
        F = self.F
        v = list(v)
        if F.k == 1:
            p = F.p
            for r, pc in zip(self.rows, self.pivots):
                c = v[pc]
                if c:
                    c = p - c
                    v = [(a + c * b) % p for a, b in zip(v, r)]
            return v
        neg = F.neg
        for r, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c:
                v = _axpy(F, v, neg(c), r)
        return v

    def add(self, v):
        """Insert ``v``; return the new reduced row, or None if ``v`` was in the span."""
        v = self.reduce(v)
        for pc, c in enumerate(v):
            if c:
                if c != 1:
                    ci = self.F.inv(c)
                    v = [self.F.mul(x, ci) for x in v]
                self.rows.append(v)
                self.pivots.append(pc)
                return v
        return None

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def basis(self) -> tuple[tuple[int, ...], ...]:
        return tuple(rref(self.F, self.rows)[0]) if self.rows else ()


def _check_gens(gens, F=None, d=None):
    if not gens:
        raise ModspinError("at least one generator is required")
    F = F or gens[0].field
    d = d or gens[0].d
    for g in gens:
        if g.field != F or g.d != d:
            raise ModspinError("generators must share field and dimension")
    return F, d


def spin(seed_vectors, gens) -> SubmoduleBasis:
    """Smallest subspace containing the seeds and closed under every generator."""
    F, d = _check_gens(gens)
    ech = Echelon(F, d)
    queue = []
    for v in seed_vectors:
        if len(v) != d:
            raise ModspinError(f"seed vector of length {len(v)} in dimension {d}")
        r = ech.add(v)
        if r is not None:
            queue.append(r)
    while queue and ech.dim < d:
        v = queue.pop()
        for g in gens:
            r = ech.add(vec_mat(F, v, g.rows))
            if r is not None:
                queue.append(r)
    if ech.dim == d:
        rows = tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))
    else:
        rows = ech.basis()
    return SubmoduleBasis(F, d, rows, fingerprint(gens))


@lru_cache(maxsize=64)
def projective_points(F: FieldSpec, d: int):
    """Normalized representatives of the 1-dimensional subspaces, and their index.

    Ordered by pivot position, then by the remaining coordinates, so e_1 comes first.
    """
    pts = []
    for lead in range(d):
        for tail in product(range(F.q), repeat=d - lead - 1):
            pts.append((0,) * lead + (1,) + tail)
    return tuple(pts), {v: i for i, v in enumerate(pts)}


def n_projective_points(q: int, d: int) -> int:
    return (q**d - 1) // (q - 1)


@dataclass(frozen=True)
class IrreducibilityResult:
    irreducible: bool
    witness: SubmoduleBasis | None = None
    method: str = "exhaustive"

    def __bool__(self):
        return self.irreducible


def _orbits(F, d, gens):
    """Orbits of <gens> on projective points, each sorted by point index."""
    pts, index = projective_points(F, d)
    n = len(pts)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    q2 = F.q == 2
    for g in gens:
        grows = g.rows
        for i, v in enumerate(pts):
            w = vec_mat(F, v, grows)
            j = index[w if q2 else normalize(F, w)]
            a, b = find(i), find(j)
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    comps: dict[int, list[int]] = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return pts, sorted(comps.values(), key=lambda c: c[0])


def is_irreducible_exhaustive(gens, cap: int = ORACLE_CAP) -> IrreducibilityResult:
    """Exhaustive oracle: spin every projective point.

    Points in one orbit of <gens> have the same spin, and the spin of a point
    is the span of its orbit, so each orbit is checked by one rank
    computation.  A reducible verdict carries the first proper spin found (in
    point order) as an RREF witness.
    """
    F, d = _check_gens(gens)
    if n_projective_points(F.q, d) > cap:
        raise ModspinError(
            f"{n_projective_points(F.q, d)} projective points exceed the oracle cap {cap}"
        )
    pts, comps = _orbits(F, d, gens)
    for comp in comps:
        ech = Echelon(F, d)
        for i in comp:
            ech.add(pts[i])
            if ech.dim == d:
                break
        if ech.dim < d:
            return IrreducibilityResult(False, spin([pts[comp[0]]], gens), "exhaustive")
    return IrreducibilityResult(True, None, "exhaustive")


def is_irreducible_literal(gens) -> IrreducibilityResult:
    """Brute force over every proper nonzero subspace (tiny cases only)."""
    from .groups import enumerate_subspaces

    F, d = _check_gens(gens)
    for w in range(1, d):
        for W in enumerate_subspaces(F, d, w):
            if all(W.is_invariant(g) for g in gens):
                return IrreducibilityResult(
                    False, SubmoduleBasis(F, d, W.rows, fingerprint(gens)), "literal"
                )
    return IrreducibilityResult(True, None, "literal")


def random_word(gens, rng: np.random.Generator) -> MatrixOverF:
    """Sum of 1..4 products of 1..3 generators with uniform nonzero coefficients."""
    F = gens[0].field
    acc = None
    for _ in range(int(rng.integers(1, 5))):
        term = gens[int(rng.integers(0, len(gens)))]
        for _ in range(int(rng.integers(0, 3))):
            term = mat_mul(term, gens[int(rng.integers(0, len(gens)))])
        c = int(rng.integers(1, F.q))
        term = mat_scale(term, c) if c != 1 else term
        acc = term if acc is None else mat_add(acc, term)
    return acc


def annihilator(S: SubspaceBasis) -> tuple[tuple[int, ...], ...]:
    """RREF basis of {v : v . s = 0 for all s in S}."""
    if not S.rows:
        return tuple(tuple(1 if i == j else 0 for j in range(S.d)) for i in range(S.d))
    return tuple(kernel(S.field, S.rows))


def is_irreducible_norton(gens, rng: np.random.Generator, budget: int = NORTON_WORD_BUDGET) -> IrreducibilityResult:
    """Norton's irreducibility test on random algebra elements.

    For an algebra element A and an irreducible factor f of its characteristic
    polynomial, a kernel vector of f(A) spinning to a proper subspace proves
    reducibility.  If additionally nullity(f(A)) = deg f, irreducibility
    follows once a kernel vector spins to everything and a kernel vector of
    f(A^T) spins to everything under the transposed generators.  The generators
    themselves are tried first, then ``budget`` random words.
    """
    F, d = _check_gens(gens)
    gens_t = [transpose(g) for g in gens]
    for t in range(len(gens) + budget):
        A = gens[t] if t < len(gens) else random_word(gens, rng)
        factors = factor(charpoly(A), seed=t)
        factors.sort(key=lambda fm: len(fm[0].coeffs))
        for f, _ in factors:
            fA = eval_at_matrix(f, A)
            K = left_kernel(F, fA.rows)
            S = spin([K[0]], gens)
            if S.dim < d:
                return IrreducibilityResult(False, S, "norton")
            if len(K) != len(f.coeffs) - 1:
                continue
            KT = kernel(F, fA.rows)
            ST = spin([KT[0]], gens_t)
            if ST.dim < d:
                W = SubmoduleBasis(F, d, annihilator(ST), fingerprint(gens))
                return IrreducibilityResult(False, W, "norton")
            return IrreducibilityResult(True, None, "norton")
    raise NortonBudgetExhausted(f"no usable algebra element in {budget} random words")


def is_irreducible(gens, rng: np.random.Generator | None = None, cap: int = ORACLE_CAP) -> IrreducibilityResult:
    """Exhaustive oracle for small modules, Norton's test (with fallback) above."""
    F, d = _check_gens(gens)
    if n_projective_points(F.q, d) <= NORTON_THRESHOLD:
        return is_irreducible_exhaustive(gens, cap=cap)
    if rng is None:
        rng = np.random.default_rng(0)
    try:
        return is_irreducible_norton(gens, rng)
    except NortonBudgetExhausted:
        return is_irreducible_exhaustive(gens, cap=cap)


def is_reducible_pair(g1: MatrixOverF, g2: MatrixOverF) -> bool:
    return not is_irreducible_exhaustive([g1, g2]).irreducible


def invariant_subspaces(gens, proper: bool = True):
    """Every subspace invariant under all generators (enumerates all subspaces)."""
    from .groups import enumerate_subspaces

    F, d = _check_gens(gens)
    dims = range(1, d) if proper else range(0, d + 1)
    fp = fingerprint(gens)
    for w in dims:
        for W in enumerate_subspaces(F, d, w):
            if all(W.is_invariant(g) for g in gens):
                yield SubmoduleBasis(F, d, W.rows, fp)
