"""Groups G with SL(d,q) <= G <= GL(d,q), described by their determinant subgroup.

Such a G is determined by the subgroup det(G) of the cyclic group F_q^*; we
record its index ``m`` (m = 1 is GL, m = q - 1 is SL).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

from .algebra import FieldSpec, MatrixOverF, det, make_field, mat_inv, mat_mul, parse_order, rref, vec_mat
from .algebra.matrix import _axpy

#: Default cap on the number of group elements an enumeration may produce.
ENUMERATION_CAP = 10**5


class GroupError(ValueError):
    pass


class CapExceededError(GroupError):
    pass


@dataclass(frozen=True)
class GroupDescriptor:
    field: FieldSpec
    d: int
    det_subgroup_index: int = 1

    def __post_init__(self):
        if self.d < 2:
            raise GroupError("dimension must be >= 2")
        m = self.det_subgroup_index
        if m < 1 or (self.field.q - 1) % m:
            raise GroupError(f"index {m} does not divide q - 1 = {self.field.q - 1}")

    @property
    def q(self):
        return self.field.q

    @property
    def name(self):
        q = self.field.q
        m = self.det_subgroup_index
        if m == 1:
            return f"GL({self.d},{q})"
        if m == q - 1:
            return f"SL({self.d},{q})"
        return f"G_{m}({self.d},{q})"

    def contains(self, g: MatrixOverF) -> bool:
        D = det(g)
        return D != 0 and self.field.in_subgroup(D, self.det_subgroup_index)

    def __str__(self):
        return self.name


def GL(d: int, q_or_field, k: int | None = None) -> GroupDescriptor:
    return GroupDescriptor(_field(q_or_field, k), d, 1)


def SL(d: int, q_or_field, k: int | None = None) -> GroupDescriptor:
    F = _field(q_or_field, k)
    return GroupDescriptor(F, d, F.q - 1)


def _field(q_or_field, k=None) -> FieldSpec:
    if isinstance(q_or_field, FieldSpec):
        return q_or_field
    if k is not None:
        return make_field(q_or_field, k)
    p, kk = parse_order(str(q_or_field))
    return make_field(p, kk)


def parse_group(kind: str, d: int, q: str) -> GroupDescriptor:
    """Build a descriptor from CLI-style ``gl|sl|detindex:m``, ``d`` and ``q``."""
    F = _field(q)
    kind = kind.strip().lower()
    if kind == "gl":
        m = 1
    elif kind == "sl":
        m = F.q - 1
    elif kind.startswith("detindex:"):
        m = int(kind.split(":", 1)[1])
    else:
        raise GroupError(f"unknown group kind {kind!r}")
    return GroupDescriptor(F, d, m)


def gl_order(d: int, q: int) -> int:
    n = 1
    for i in range(d):
        n *= q**d - q**i
    return n


def group_order(G: GroupDescriptor) -> int:
    return gl_order(G.d, G.q) // G.det_subgroup_index


# -- sampling ----------------------------------------------------------------------


def make_stream(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Independent seeded generator for worker ``stream_id``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream_id,))))


class Sampler:
    """Uniform sampler for G, buffering raw draws from a numpy generator.

    GL elements come from rejection (d*d uniform entries, keep iff det != 0).
    For a proper det subgroup the first row is rescaled by lambda/det(g) with
    lambda uniform in the target subgroup; g -> D(det g)^-1 g is (q-1)-to-1
    onto SL, so the result is uniform on G.
    """

    def __init__(self, G: GroupDescriptor, rng: np.random.Generator, batch: int = 512):
        self.G = G
        self.rng = rng
        self.batch = batch
        self._buf: list = []
        self._pos = 0
        F = G.field
        self._sub = F.subgroup(G.det_subgroup_index) if G.det_subgroup_index > 1 else None
        self.attempts = 0

    def _raw(self):
        if self._pos >= len(self._buf):
            d, q = self.G.d, self.G.q
            self._buf = self.rng.integers(0, q, size=(self.batch, d, d)).tolist()
            self._pos = 0
        m = self._buf[self._pos]
        self._pos += 1
        return m

    def sample(self) -> MatrixOverF:
        G = self.G
        F, d = G.field, G.d
        while True:
            self.attempts += 1
            rows = tuple(tuple(r) for r in self._raw())
            g = MatrixOverF._trusted(F, d, rows)
            D = det(g)
            if D:
                break
        if self._sub is None:
            return g
        lam = self._sub[int(self.rng.integers(0, len(self._sub)))]
        c = F.mul(lam, F.inv(D))
        first = tuple(F.mul(c, x) for x in rows[0])
        return MatrixOverF._trusted(F, d, (first,) + rows[1:])


def sample_uniform(G: GroupDescriptor, rng: np.random.Generator) -> MatrixOverF:
    return Sampler(G, rng, batch=1).sample()


# -- subspaces -----------------------------------------------------------------------


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of F_q^d given by its canonical RREF basis."""

    field: FieldSpec
    d: int
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, F: FieldSpec, d: int, vectors) -> "SubspaceBasis":
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != d:
                raise GroupError(f"vector of length {len(v)} in dimension {d}")
        return cls(F, d, tuple(rref(F, vectors)[0]) if vectors else ())

    @property
    def w(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v) -> bool:
        return reduce_vector(self.field, self.rows, v) is None

    def is_invariant(self, g: MatrixOverF) -> bool:
        return all(self.contains(vec_mat(self.field, r, g.rows)) for r in self.rows)

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All vectors of the subspace (q**w of them), in coefficient-code order."""
        F, d = self.field, self.d
        for coeffs in product(range(F.q), repeat=self.w):
            v = [0] * d
            for c, r in zip(coeffs, self.rows):
                if c:
                    v = _axpy(F, v, c, r)
            yield tuple(v)

    def meets_trivially(self, other: "SubspaceBasis") -> bool:
        return len(rref(self.field, list(self.rows) + list(other.rows))[0]) == self.w + other.w

    def __le__(self, other: "SubspaceBasis") -> bool:
        return all(other.contains(r) for r in self.rows)


def reduce_vector(F: FieldSpec, rref_rows, v):
    """Reduce ``v`` against RREF rows; None if it lies in their span."""
    v = list(v)
    for r in rref_rows:
        pc = next(i for i, x in enumerate(r) if x)
        c = v[pc]
        if c:
            v = _axpy(F, v, F.neg(c), r)
    return None if not any(v) else v


def standard_subspace(F: FieldSpec, d: int, w: int) -> SubspaceBasis:
    """span{e_1, ..., e_w}."""
    return SubspaceBasis(F, d, tuple(tuple(1 if j == i else 0 for j in range(d)) for i in range(w)))


def enumerate_subspaces(F: FieldSpec, d: int, w: int) -> Iterator[SubspaceBasis]:
    """Every w-dimensional subspace, as RREF bases, via pivot patterns."""
    from itertools import combinations

    for pivots in combinations(range(d), w):
        free = [
            (i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, d) if j not in pivots
        ]
        for vals in product(range(F.q), repeat=len(free)):
            rows = [[0] * d for _ in range(w)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, j), x in zip(free, vals):
                rows[i][j] = x
            yield SubspaceBasis(F, d, tuple(tuple(r) for r in rows))


def image_subspace(W: SubspaceBasis, g: MatrixOverF) -> SubspaceBasis:
    return SubspaceBasis.span(W.field, W.d, [vec_mat(W.field, r, g.rows) for r in W.rows])


# -- enumeration ----------------------------------------------------------------------


def enumerate_group(G: GroupDescriptor, cap: int = ENUMERATION_CAP) -> Iterator[MatrixOverF]:
    """Every element of G exactly once, in row-major lexicographic order of codes.

    Rows are chosen by backtracking so that each new row avoids the span of
    the previous ones; elements of GL outside G are filtered by determinant.
    """
    if group_order(G) > cap:
        raise CapExceededError(
            f"|{G.name}| = {group_order(G)} exceeds the enumeration cap {cap}"
        )
    F, d = G.field, G.d
    m = G.det_subgroup_index
    all_vecs = list(product(range(F.q), repeat=d))

    def rec(prefix, span):
        if len(prefix) == d:
            g = MatrixOverF._trusted(F, d, tuple(prefix))
            if m == 1 or F.in_subgroup(det(g), m):
                yield g
            return
        for v in all_vecs:
            if v in span:
                continue
            prefix.append(v)
            if len(prefix) < d:
                new_span = set(span)
                for s in span:
                    for c in range(1, F.q):
                        new_span.add(tuple(_axpy(F, list(s), c, v)))
            else:
                new_span = span
            yield from rec(prefix, new_span)
            prefix.pop()

    yield from rec([], {tuple([0] * d)})


def stabilizer_elements(
    G: GroupDescriptor, W: SubspaceBasis, cap: int = ENUMERATION_CAP
) -> Iterator[MatrixOverF]:
    """Elements g of G with Wg = W (filtering an enumeration of G)."""
    for g in enumerate_group(G, cap=cap):
        if W.is_invariant(g):
            yield g


def generators(G: GroupDescriptor) -> list[MatrixOverF]:
    """Transvections I + a E_ij (a over an F_p-basis of F_q) and D(omega^m).

    The transvections generate SL(d,q); the diagonal element adds the
    determinant subgroup of index m.
    """
    F, d = G.field, G.d
    gens = []
    basis = [F.p**t for t in range(F.k)]
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            for a in basis:
                rows = [[1 if r == c else 0 for c in range(d)] for r in range(d)]
                rows[i][j] = a
                gens.append(MatrixOverF._trusted(F, d, tuple(tuple(r) for r in rows)))
    m = G.det_subgroup_index
    if m < F.q - 1:
        lam = F.pow(F.primitive, m)
        rows = [[1 if r == c else 0 for c in range(d)] for r in range(d)]
        rows[0][0] = lam
        gens.append(MatrixOverF._trusted(F, d, tuple(tuple(r) for r in rows)))
    return gens


def conjugacy_classes(
    G: GroupDescriptor, elements: list[MatrixOverF] | None = None
) -> list[tuple[MatrixOverF, int]]:
    """G-conjugacy classes as (first element in enumeration order, class size).

    Classes are orbits of G acting on itself by conjugation, computed by
    closing each element under conjugation by the generators.
    """
    if elements is None:
        elements = list(enumerate_group(G))
    index = {g.rows: i for i, g in enumerate(elements)}
    gens = [(h, mat_inv(h)) for h in generators(G)]
    seen = bytearray(len(elements))
    out = []
    for start, g0 in enumerate(elements):
        if seen[start]:
            continue
        seen[start] = 1
        stack = [g0]
        size = 1
        while stack:
            g = stack.pop()
            for h, hinv in gens:
                c = mat_mul(mat_mul(hinv, g), h)
                j = index[c.rows]
                if not seen[j]:
                    seen[j] = 1
                    size += 1
                    stack.append(c)
        out.append((g0, size))
    return out


def parabolic_element(F: FieldSpec, d: int, w: int, rng: np.random.Generator, P: MatrixOverF | None = None) -> MatrixOverF:
    """Uniform element of the stabilizer of span{e_1..e_w} P (P = identity if omitted).

    The standard stabilizer is block lower triangular [[A, 0], [C, B]] with
    A in GL(w), B in GL(d-w) and C arbitrary; conjugating by P moves it to
    the stabilizer of the row space of P's first w rows.
    """
    if not 0 < w < d:
        raise GroupError("need 0 < w < d")
    rows = [[0] * d for _ in range(d)]
    for off, n in ((0, w), (w, d - w)):
        B = Sampler(GroupDescriptor(F, max(n, 2), 1), rng, batch=8).sample() if n >= 2 else None
        for i in range(n):
            for j in range(n):
                rows[off + i][off + j] = B.rows[i][j] if B is not None else int(rng.integers(1, F.q))
    for i in range(w, d):
        for j in range(w):
            rows[i][j] = int(rng.integers(0, F.q))
    M = MatrixOverF._trusted(F, d, tuple(tuple(r) for r in rows))
    if P is None:
        return M
    return mat_mul(mat_mul(mat_inv(P), M), P)
