"""Counting monic irreducible polynomials (necklace formula)."""

from sympy import factorint

from .field import FieldSpec


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def count_irreducible(e: int, spec: FieldSpec) -> int:
    """Number of monic irreducible polynomials of degree ``e`` over ``spec``."""
    if e < 1:
        raise ValueError("degree must be >= 1")
    q = spec.q
    total = sum(mobius(e // f) * q**f for f in range(1, e + 1) if e % f == 0)
    assert total % e == 0
    return total // e
