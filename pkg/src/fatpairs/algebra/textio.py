"""Plain-text matrix format.

::

    d p k
    [modulus coefficients, low first -- only when k >= 2]
    d lines of d element codes separated by single spaces

Rectangular bases (e.g. submodule witnesses) use the same layout with a
``w`` row count: header ``d p k w``.
"""

from __future__ import annotations

from .field import FieldSpec, make_field
from .matrix import MatrixOverF
from .poly import PolyOverF


class MatrixFormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _ints(text, lineno):
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise MatrixFormatError(f"expected integers, got {text.strip()!r}", lineno) from None


def _parse_block(lines, start):
    """Parse one matrix/basis block starting at index ``start`` of ``lines``.

    Returns (field, d, rows, next_index).
    """
    i = start
    lineno = i + 1
    header = _ints(lines[i], lineno)
    if len(header) not in (3, 4):
        raise MatrixFormatError("header must be 'd p k' or 'd p k w'", lineno)
    d, p, k = header[:3]
    nrows = header[3] if len(header) == 4 else d
    try:
        F = make_field(p, k)
    except ValueError as exc:
        raise MatrixFormatError(str(exc), lineno) from None
    i += 1
    if k >= 2:
        if i >= len(lines):
            raise MatrixFormatError("missing modulus line", i + 1)
        mod = tuple(_ints(lines[i], i + 1))
        if mod != F.modulus:
            raise MatrixFormatError(
                f"modulus {list(mod)} differs from the canonical {list(F.modulus)}", i + 1
            )
        i += 1
    rows = []
    for _ in range(nrows):
        if i >= len(lines):
            raise MatrixFormatError(f"expected {nrows} matrix rows, file ended", i + 1)
        row = _ints(lines[i], i + 1)
        if len(row) != d:
            raise MatrixFormatError(f"expected {d} entries, got {len(row)}", i + 1)
        for x in row:
            if not 0 <= x < F.q:
                raise MatrixFormatError(f"entry {x} is not an element code of GF({F.q})", i + 1)
        rows.append(tuple(row))
        i += 1
    return F, d, rows, i


def parse_matrices(text: str) -> list[MatrixOverF]:
    """Parse one or more square matrices separated by blank lines."""
    lines = text.splitlines()
    out = []
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        F, d, rows, i = _parse_block(lines, i)
        if len(rows) != d:
            raise MatrixFormatError("square matrix expected", i)
        out.append(MatrixOverF(F, d, tuple(rows)))
    return out


def parse_matrix(text: str) -> MatrixOverF:
    mats = parse_matrices(text)
    if len(mats) != 1:
        raise MatrixFormatError(f"expected exactly one matrix, found {len(mats)}")
    return mats[0]


def _header(F: FieldSpec, d: int, w: int | None = None) -> list[str]:
    head = f"{d} {F.p} {F.k}" + ("" if w is None else f" {w}")
    lines = [head]
    if F.k >= 2:
        lines.append(" ".join(map(str, F.modulus)))
    return lines


def format_matrix(A: MatrixOverF) -> str:
    lines = _header(A.field, A.d)
    lines += [" ".join(map(str, r)) for r in A.rows]
    return "\n".join(lines) + "\n"


def format_basis(F: FieldSpec, d: int, rows) -> str:
    lines = _header(F, d, len(rows))
    lines += [" ".join(map(str, r)) for r in rows]
    return "\n".join(lines) + "\n"


def parse_basis(text: str):
    """Inverse of :func:`format_basis`: (field, d, rows)."""
    lines = text.splitlines()
    F, d, rows, _ = _parse_block(lines, 0)
    return F, d, rows


def format_poly(f: PolyOverF) -> str:
    return " ".join(map(str, f.coeffs))


def parse_poly(F: FieldSpec, text: str) -> PolyOverF:
    return PolyOverF(F, tuple(int(t) for t in text.split()))
