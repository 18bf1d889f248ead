"""Dense matrices over F_q.

Vectors are tuples of element codes and matrices act on row vectors from the
right, so ``vec_mat(v, A)`` is the natural action.  Most routines work on plain
row lists (any shape); :class:`MatrixOverF` is the square, hashable wrapper
used for group elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldSpec
from .poly import PolyOverF


class MatrixError(ValueError):
    pass


class SingularMatrixError(MatrixError, ZeroDivisionError):
    pass


@dataclass(frozen=True)
class MatrixOverF:
    field: FieldSpec
    d: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = self.rows
        if not isinstance(rows, tuple) or (rows and not isinstance(rows[0], tuple)):
            rows = tuple(tuple(r) for r in rows)
            object.__setattr__(self, "rows", rows)
        q = self.field.q
        if len(rows) != self.d or any(len(r) != self.d for r in rows):
            raise MatrixError(f"expected a {self.d}x{self.d} matrix")
        for r in rows:
            for x in r:
                if not (0 <= x < q):
                    raise MatrixError(f"entry {x} is not an element code of {self.field}")

    @classmethod
    def _trusted(cls, F, d, rows):
        m = object.__new__(cls)
        object.__setattr__(m, "field", F)
        object.__setattr__(m, "d", d)
        object.__setattr__(m, "rows", rows)
        return m

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __repr__(self):
        return f"MatrixOverF({self.field!r}, {[list(r) for r in self.rows]})"

    @property
    def T(self):
        return transpose(self)

    def entries(self):
        """Row-major flat tuple of entries."""
        return tuple(x for r in self.rows for x in r)


def _rows(A):
    return A.rows if isinstance(A, MatrixOverF) else A


def identity(F: FieldSpec, d: int) -> MatrixOverF:
    return MatrixOverF._trusted(F, d, tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)))


def zero_matrix(F: FieldSpec, d: int) -> MatrixOverF:
    return MatrixOverF._trusted(F, d, tuple((0,) * d for _ in range(d)))


def from_rows(F: FieldSpec, rows) -> MatrixOverF:
    rows = tuple(tuple(r) for r in rows)
    return MatrixOverF(F, len(rows), rows)


def companion(f: PolyOverF) -> MatrixOverF:
    """Companion matrix of a monic ``f`` for the row-vector action.

    Row i is e_{i+1} for i < n-1 and the last row holds the negated low
    coefficients, so e_0 is a cyclic vector and the characteristic polynomial
    is ``f``.
    """
    F = f.field
    if not f.is_monic or f.degree < 1:
        raise MatrixError("companion matrix needs a monic polynomial of degree >= 1")
    n = f.degree
    rows = []
    for i in range(n - 1):
        rows.append(tuple(1 if j == i + 1 else 0 for j in range(n)))
    rows.append(tuple(F.neg(c) for c in f.coeffs[:n]))
    return MatrixOverF._trusted(F, n, tuple(rows))


def block_diag(*blocks: MatrixOverF) -> MatrixOverF:
    F = blocks[0].field
    d = sum(b.d for b in blocks)
    rows = []
    off = 0
    for b in blocks:
        for r in b.rows:
            rows.append((0,) * off + tuple(r) + (0,) * (d - off - b.d))
        off += b.d
    return MatrixOverF._trusted(F, d, tuple(rows))


# -- vector primitives -------------------------------------------------------------------


def vec_mat(F: FieldSpec, v, rows) -> tuple[int, ...]:
    """Row vector ``v`` times the matrix with the given rows."""
    rows = _rows(rows)
    n = len(rows[0])
    if F.k == 1:
        p = F.p
        acc = [0] * n
        for c, row in zip(v, rows):
            if c:
                for j in range(n):
                    acc[j] += c * row[j]
        return tuple(x % p for x in acc)
    add, mul = F.add, F.mul
    acc = [0] * n
    for c, row in zip(v, rows):
        if c:
            if c == 1:
                acc = [add(a, b) for a, b in zip(acc, row)]
            else:
                acc = [add(a, mul(c, b)) for a, b in zip(acc, row)]
    return tuple(acc)


def _axpy(F, y, a, x):
    """y + a*x, elementwise."""
    if F.k == 1:
        p = F.p
        return [(s + a * t) % p for s, t in zip(y, x)]
    add, mul = F.add, F.mul
    return [add(s, mul(a, t)) for s, t in zip(y, x)]


def _scale(F, a, x):
    if F.k == 1:
        p = F.p
        return [(a * t) % p for t in x]
    mul = F.mul
    return [mul(a, t) for t in x]


def normalize(F: FieldSpec, v) -> tuple[int, ...]:
    """Scale ``v`` so its first nonzero entry is 1 (zero stays zero)."""
    for c in v:
        if c:
            if c == 1:
                return tuple(v)
            return tuple(_scale(F, F.inv(c), v))
    return tuple(v)


# -- products -------------------------------------------------------------------------


def mat_mul(A: MatrixOverF, B: MatrixOverF) -> MatrixOverF:
    if A.field != B.field or A.d != B.d:
        raise MatrixError("matrix product needs matching field and dimension")
    F = A.field
    Brows = B.rows
    return MatrixOverF._trusted(F, A.d, tuple(vec_mat(F, r, Brows) for r in A.rows))


def mat_add(A: MatrixOverF, B: MatrixOverF) -> MatrixOverF:
    F = A.field
    add = F.add
    return MatrixOverF._trusted(
        F, A.d, tuple(tuple(add(x, y) for x, y in zip(r, s)) for r, s in zip(A.rows, B.rows))
    )


def mat_scale(A: MatrixOverF, c: int) -> MatrixOverF:
    F = A.field
    return MatrixOverF._trusted(F, A.d, tuple(tuple(_scale(F, c, r)) for r in A.rows))


def transpose(A: MatrixOverF) -> MatrixOverF:
    return MatrixOverF._trusted(A.field, A.d, tuple(zip(*A.rows)))


def mat_pow(A: MatrixOverF, n: int) -> MatrixOverF:
    if n < 0:
        A, n = mat_inv(A), -n
    result = identity(A.field, A.d)
    base = A
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


def eval_at_matrix(f: PolyOverF, A: MatrixOverF) -> MatrixOverF:
    """``f(A)`` by Horner's rule."""
    if f.field != A.field:
        raise MatrixError("polynomial and matrix over different fields")
    F, d = A.field, A.d
    acc = zero_matrix(F, d)
    for c in reversed(f.coeffs):
        acc = mat_mul(acc, A)
        if c:
            rows = [list(r) for r in acc.rows]
            for i in range(d):
                rows[i][i] = F.add(rows[i][i], c)
            acc = MatrixOverF._trusted(F, d, tuple(tuple(r) for r in rows))
    return acc


# -- elimination ---------------------------------------------------------------------


def rref(F: FieldSpec, rows) -> tuple[list[tuple[int, ...]], list[int]]:
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    M = [list(r) for r in _rows(rows)]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(M)):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        lead = M[r][c]
        if lead != 1:
            M[r] = _scale(F, F.inv(lead), M[r])
        for i in range(len(M)):
            if i != r and M[i][c]:
                M[i] = _axpy(F, M[i], F.neg(M[i][c]), M[r])
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return [tuple(x) for x in M[:r]], pivots


def rank(F: FieldSpec, rows) -> int:
    return len(rref(F, rows)[1])


def det(A: MatrixOverF) -> int:
    F = A.field
    n = A.d
    M = [list(r) for r in A.rows]
    if F.k == 1:
        p = F.p
        result = 1
        for c in range(n):
            piv = None
            for i in range(c, n):
                if M[i][c]:
                    piv = i
                    break
            if piv is None:
                return 0
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                result = -result
            lead = M[c][c]
            result = (result * lead) % p
            inv = pow(lead, -1, p)
            rowc = M[c]
            for i in range(c + 1, n):
                u = M[i][c]
                if u:
                    u = (u * inv) % p
                    Mi = M[i]
                    for j in range(c + 1, n):
                        Mi[j] = (Mi[j] - u * rowc[j]) % p
        return result % p
    mul, sub, inv = F.mul, F.sub, F.inv
    result = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            result = F.neg(result)
        lead = M[c][c]
        result = mul(result, lead)
        li = inv(lead)
        for i in range(c + 1, n):
            u = M[i][c]
            if u:
                u = mul(u, li)
                M[i] = [sub(a, mul(u, b)) for a, b in zip(M[i], M[c])]
    return result


def mat_inv(A: MatrixOverF) -> MatrixOverF:
    F, n = A.field, A.d
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(A.rows)]
    R, pivots = rref(F, aug)
    if len(R) < n or pivots[n - 1] != n - 1:
        raise SingularMatrixError("matrix is singular")
    return MatrixOverF._trusted(F, n, tuple(tuple(r[n:]) for r in R))


def kernel(F: FieldSpec, rows) -> list[tuple[int, ...]]:
    """RREF basis of the right null space {x : A x = 0} (x a column vector)."""
    rows = _rows(rows)
    if not rows:
        return []
    ncols = len(rows[0])
    R, pivots = rref(F, rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for r, pc in zip(R, pivots):
            if r[f]:
                x[pc] = F.neg(r[f])
        basis.append(tuple(x))
    return rref(F, basis)[0] if basis else []


def left_kernel(F: FieldSpec, rows) -> list[tuple[int, ...]]:
    """RREF basis of {v : v A = 0}, the null space for the row-vector action."""
    rows = _rows(rows)
    return kernel(F, list(zip(*rows)))


def mat_op(op: str, A: MatrixOverF, B: MatrixOverF | None = None):
    """Dispatch a matrix operation by name."""
    F = A.field
    if op == "mul":
        return mat_mul(A, B)
    if op == "inv":
        return mat_inv(A)
    if op == "det":
        return det(A)
    if op == "rank":
        return rank(F, A.rows)
    if op == "rref":
        return rref(F, A.rows)[0]
    if op == "kernel":
        return kernel(F, A.rows)
    if op == "transpose":
        return transpose(A)
    raise MatrixError(f"unknown matrix operation {op!r}")


# -- characteristic polynomial ------------------------------------------------------------


def charpoly_coeffs(F: FieldSpec, rows) -> tuple[int, ...]:
    """Coefficients of det(xI - A), low degree first, via Hessenberg reduction."""
    H = [list(r) for r in rows]
    n = len(H)
    add, sub, mul = F.add, F.sub, F.mul
    for m in range(1, n - 1):
        piv = None
        for i in range(m, n):
            if H[i][m - 1]:
                piv = i
                break
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        t_inv = F.inv(H[m][m - 1])
        for i in range(m + 1, n):
            u = H[i][m - 1]
            if u:
                u = mul(u, t_inv)
                # row_i -= u * row_m, then col_m += u * col_i
                Hi, Hm = H[i], H[m]
                for j in range(n):
                    if Hm[j]:
                        Hi[j] = sub(Hi[j], mul(u, Hm[j]))
                for row in H:
                    if row[i]:
                        row[m] = add(row[m], mul(u, row[i]))
    # p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im * (h_{m,m-1} ... h_{i+1,i}) p_{i-1}
    polys = [[1]]
    for m in range(n):
        prev = polys[m]
        cur = [0] + prev  # x * p_{m-1}
        hmm = H[m][m]
        if hmm:
            for j, c in enumerate(prev):
                cur[j] = sub(cur[j], mul(hmm, c))
        t = 1
        for i in range(m - 1, -1, -1):
            t = mul(t, H[i + 1][i])
            if not t:
                break
            coef = mul(H[i][m], t)
            if coef:
                for j, c in enumerate(polys[i]):
                    cur[j] = sub(cur[j], mul(coef, c))
        polys.append(cur)
    return tuple(polys[n])


def charpoly(A: MatrixOverF) -> PolyOverF:
    """det(xI - A) as a monic polynomial of degree d."""
    return PolyOverF(A.field, charpoly_coeffs(A.field, A.rows))
