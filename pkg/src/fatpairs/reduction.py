"""From a fat pair to an irreducible fat pair on a composition factor.

For a fat(d,q;e1,e2)-pair (g1, g2) with U_i the e_i-dimensional irreducible
<g_i>-submodule, X is the submodule generated by U1 and U2 and Y is a
submodule of X maximal by inclusion among those meeting U1 and U2 trivially.
The pair induced on N = X/Y is irreducible and fat of the same degrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .algebra import MatrixOverF, eval_at_matrix, left_kernel, rref
from .algebra.matrix import _axpy
from .fatness import fat_test
from .groups import SubspaceBasis
from .modspin import SubmoduleBasis, fingerprint, invariant_subspaces, is_irreducible_exhaustive, spin

#: Largest X (in vectors) scanned exhaustively when building Y.
SCAN_CAP = 10**6
SAMPLED_SCAN = 4096


class ReductionError(ValueError):
    pass


def fat_submodule(g: MatrixOverF) -> SubmoduleBasis:
    """The unique irreducible <g>-submodule of dimension e > d/2: the null space of f(g)."""
    v = fat_test(g)
    if not v.is_fat:
        raise ReductionError("element is not fat")
    F, d = g.field, g.d
    rows = left_kernel(F, eval_at_matrix(v.factor, g).rows)
    if len(rows) != v.e:
        raise ReductionError(f"null space of the fat factor has dimension {len(rows)}, expected {v.e}")
    return SubmoduleBasis(F, d, tuple(rows), fingerprint([g]))


def coordinates(F, basis_rows, x):
    """Coefficients c with sum c_i basis_i = x (basis rows independent, x in their span)."""
    r = len(basis_rows)
    d = len(x)
    aug = [[basis_rows[i][j] for i in range(r)] + [x[j]] for j in range(d)]
    R, pivots = rref(F, aug)
    if pivots and pivots[-1] == r:
        raise ReductionError("vector is not in the span of the basis")
    c = [0] * r
    for row, pc in zip(R, pivots):
        c[pc] = row[r]
    return c


def restrict(g: MatrixOverF, basis_rows) -> MatrixOverF:
    """Matrix of g on the invariant subspace with the given basis."""
    F = g.field
    from .algebra import vec_mat

    rows = tuple(tuple(coordinates(F, basis_rows, vec_mat(F, b, g.rows))) for b in basis_rows)
    return MatrixOverF(F, len(basis_rows), rows)


def quotient_action(g: MatrixOverF, complement_rows, sub_rows) -> MatrixOverF:
    """Matrix of g on X/Y where X = span(complement + sub) and Y = span(sub)."""
    from .algebra import vec_mat

    F = g.field
    n = len(complement_rows)
    basis = list(complement_rows) + list(sub_rows)
    rows = tuple(tuple(coordinates(F, basis, vec_mat(F, t, g.rows))[:n]) for t in complement_rows)
    return MatrixOverF(F, n, rows)


@dataclass(frozen=True)
class DichotomyVerdict:
    case: str | None
    dim: int
    meets_trivially: tuple[bool, bool]
    contains: tuple[bool, bool]
    case_a: bool
    case_b: bool

    @property
    def holds(self) -> bool:
        return self.case_a != self.case_b


def classify_invariant_subspace(g1: MatrixOverF, g2: MatrixOverF, W: SubspaceBasis, U=None) -> DichotomyVerdict:
    """Classify a proper nonzero invariant subspace W of a fat pair.

    (a) W meets both U_i trivially and 1 <= dim W <= d - max(e1, e2); or
    (b) W contains both U_i and max(e1, e2) <= dim W <= d - 1.
    """
    d = g1.d
    if not (0 < W.dim < d):
        raise ReductionError("W must be a proper nonzero subspace")
    if not (W.is_invariant(g1) and W.is_invariant(g2)):
        raise ReductionError("W is not invariant under the pair")
    U1, U2 = U if U is not None else (fat_submodule(g1), fat_submodule(g2))
    emax = max(U1.dim, U2.dim)
    if emax >= d:
        raise ReductionError("the dichotomy needs both fat degrees below d")
    triv = (W.meets_trivially(U1), W.meets_trivially(U2))
    cont = (U1 <= W, U2 <= W)
    a = all(triv) and 1 <= W.dim <= d - emax
    b = all(cont) and emax <= W.dim <= d - 1
    case = "a" if a and not b else "b" if b and not a else None
    return DichotomyVerdict(case, W.dim, triv, cont, a, b)


@dataclass
class ReductionCertificate:
    e1: int
    e2: int
    U1: SubmoduleBasis
    U2: SubmoduleBasis
    X: SubmoduleBasis
    Y: SubmoduleBasis
    complement: tuple[tuple[int, ...], ...]
    induced_pair: tuple[MatrixOverF, MatrixOverF]
    maximality: str
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.X.dim - self.Y.dim

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict[str, Any]:
        def rows(S):
            return [list(r) for r in S.rows]

        return {
            "e1": self.e1,
            "e2": self.e2,
            "d": self.X.d,
            "n": self.n,
            "U1": rows(self.U1),
            "U2": rows(self.U2),
            "X": rows(self.X),
            "Y": rows(self.Y),
            "quotient_basis": [list(r) for r in self.complement],
            "induced_pair": [[list(r) for r in g.rows] for g in self.induced_pair],
            "maximality": self.maximality,
            "checks": dict(self.checks),
            "ok": self.ok,
        }


def _scan_order(X: SubmoduleBasis, cap: int, seed: int):
    F = X.field
    if F.q ** X.dim <= cap:
        return sorted(X.vectors()), "exhaustive"
    rng = np.random.default_rng(seed)
    vecs = [tuple(r) for r in X.rows]
    for _ in range(SAMPLED_SCAN):
        coeffs = rng.integers(0, F.q, size=X.dim).tolist()
        v = [0] * X.d
        for c, r in zip(coeffs, X.rows):
            if c:
                v = _axpy(F, v, c, r)
        vecs.append(tuple(v))
    return sorted(set(vecs)), "sampled"


def reduce_pair(g1: MatrixOverF, g2: MatrixOverF, scan_cap: int = SCAN_CAP, seed: int = 0) -> ReductionCertificate:
    """Build X, Y, N = X/Y and the induced pair, re-checking every property."""
    if g1.field != g2.field or g1.d != g2.d:
        raise ReductionError("pair must share field and dimension")
    F, d = g1.field, g1.d
    if d < 3:
        raise ReductionError("reduction needs d >= 3 (1 < d/2)")
    v1, v2 = fat_test(g1), fat_test(g2)
    if not (v1.is_fat and v2.is_fat):
        raise ReductionError("both elements must be fat")
    e1, e2 = v1.e, v2.e
    gens = [g1, g2]
    fp = fingerprint(gens)
    U1, U2 = fat_submodule(g1), fat_submodule(g2)
    X = spin(list(U1.rows) + list(U2.rows), gens)

    Y = SubmoduleBasis(F, d, (), fp)
    order, maximality = _scan_order(X, scan_cap, seed)
    while True:
        grew = False
        for v in order:
            if Y.contains(v):
                continue
            cand = spin(list(Y.rows) + [v], gens)
            if cand.meets_trivially(U1) and cand.meets_trivially(U2):
                Y = cand
                grew = True
        if not grew:
            break

    # quotient basis: extend Y by X's RREF rows in order
    complement = []
    span_rows = list(Y.rows)
    for r in X.rows:
        if len(rref(F, span_rows + [r])[0]) > len(span_rows):
            complement.append(r)
            span_rows.append(r)
    induced = (quotient_action(g1, complement, Y.rows), quotient_action(g2, complement, Y.rows))
    n = len(complement)

    checks: dict[str, bool] = {}
    checks["U_dims"] = U1.dim == e1 and U2.dim == e2
    checks["U_invariant"] = U1.is_invariant(g1) and U2.is_invariant(g2)
    checks["U_irreducible"] = all(
        is_irreducible_exhaustive([restrict(g, U.rows)]).irreducible for g, U in ((g1, U1), (g2, U2))
    )
    checks["X_closed"] = X.is_closed_under(gens) and U1 <= X and U2 <= X
    checks["Y_invariant"] = Y.is_closed_under(gens) and Y <= X
    checks["Y_meets_U_trivially"] = Y.meets_trivially(U1) and Y.meets_trivially(U2)
    # the last scan pass added nothing; re-check directly when X is small
    checks["Y_maximal"] = maximality == "sampled" or F.q ** X.dim > 4096 or check_maximality_parts(X, Y, U1, U2, gens)
    checks["n_bound"] = n >= max(e1, e2) and 2 * max(e1, e2) > d and n == X.dim - Y.dim
    checks["induced_irreducible"] = is_irreducible_exhaustive(list(induced)).irreducible
    checks["induced_fat_degrees"] = (fat_test(induced[0]).e, fat_test(induced[1]).e) == (e1, e2)
    if max(e1, e2) < d:
        dichotomy = True
        for W in (X, Y):
            if 0 < W.dim < d:
                dichotomy = dichotomy and classify_invariant_subspace(g1, g2, W, U=(U1, U2)).holds
        checks["dichotomy"] = dichotomy
    return ReductionCertificate(e1, e2, U1, U2, X, Y, tuple(complement), induced, maximality, checks)


def check_maximality_parts(X, Y, U1, U2, gens) -> bool:
    """Every v in X outside Y spins, together with Y, onto something meeting some U_i."""
    for v in X.vectors():
        if Y.contains(v):
            continue
        S = spin(list(Y.rows) + [v], gens)
        if S.meets_trivially(U1) and S.meets_trivially(U2):
            return False
    return True


def check_maximality(cert: ReductionCertificate, gens) -> bool:
    return check_maximality_parts(cert.X, cert.Y, cert.U1, cert.U2, gens)


def dichotomy_sweep(g1: MatrixOverF, g2: MatrixOverF) -> list[DichotomyVerdict]:
    """Apply the dichotomy to every proper nonzero invariant subspace of the pair."""
    U = (fat_submodule(g1), fat_submodule(g2))
    return [classify_invariant_subspace(g1, g2, W, U=U) for W in invariant_subspaces([g1, g2])]
