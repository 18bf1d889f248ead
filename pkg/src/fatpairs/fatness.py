"""Fat and ppd classification of elements of GL(d,q).

An element is fat of degree e when its characteristic polynomial has an
irreducible factor of degree e > d/2.  Such a factor is unique and occurs once,
so the squarefree + distinct-degree factorization exposes it directly: the
degree-e component *is* the factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from sympy import factorint

from .algebra import FieldSpec, MatrixOverF, PolyOverF, companion, factor_components, identity, mat_mul, mat_pow
from .algebra.matrix import charpoly_coeffs

#: Bit budget for factoring q^e - 1.
FACTOR_BITS = 256


class FatnessError(ValueError):
    pass


@dataclass(frozen=True)
class FatVerdict:
    is_fat: bool
    e: int | None
    factor_degree_profile: tuple[tuple[int, int], ...]
    factor: PolyOverF | None = None

    def to_dict(self):
        return {
            "is_fat": self.is_fat,
            "e": self.e,
            "profile": [list(t) for t in self.factor_degree_profile],
            "fat_factor": list(self.factor.coeffs) if self.factor is not None else None,
        }


@dataclass(frozen=True)
class PpdVerdict:
    is_ppd: bool
    e: int
    witness_primes: tuple[int, ...] = ()


@lru_cache(maxsize=1 << 16)
def _classify_charpoly(F: FieldSpec, coeffs: tuple[int, ...]) -> FatVerdict:
    d = len(coeffs) - 1
    f = PolyOverF(F, coeffs)
    profile = []
    fat = []
    for comp, i, m in factor_components(f):
        n = (len(comp.coeffs) - 1) // i
        profile.extend([(i, m)] * n)
        if 2 * i > d:
            fat.append((comp, i, m, n))
    profile = tuple(sorted(profile))
    if not fat:
        return FatVerdict(False, None, profile, None)
    # two factors of degree > d/2 cannot fit in degree d
    assert len(fat) == 1 and fat[0][2] == 1 and fat[0][3] == 1, fat
    comp, e, _, _ = fat[0]
    return FatVerdict(True, e, profile, comp)


def fat_test(g: MatrixOverF) -> FatVerdict:
    """Classify ``g`` as fat (with its degree e) or not."""
    coeffs = charpoly_coeffs(g.field, g.rows)
    if coeffs[0] == 0:
        raise FatnessError("fat_test needs an invertible matrix")
    return _classify_charpoly(g.field, coeffs)


def fat_degree(g: MatrixOverF) -> int | None:
    return fat_test(g).e


def _order_is(q: int, r: int, e: int) -> bool:
    """Whether the multiplicative order of q modulo r is exactly e."""
    if pow(q, e, r) != 1:
        return False
    return all(pow(q, e // s, r) != 1 for s in factorint(e))


@lru_cache(maxsize=None)
def primitive_prime_divisors(q: int, e: int) -> frozenset[int]:
    """Primes r dividing q^e - 1 but no q^j - 1 with j < e."""
    if e < 1:
        raise FatnessError("e must be positive")
    n = q**e - 1
    if n.bit_length() > FACTOR_BITS:
        raise FatnessError(f"q^e - 1 has {n.bit_length()} bits, over the {FACTOR_BITS}-bit budget")
    if n <= 1:
        return frozenset()
    return frozenset(int(r) for r in factorint(n) if q % r and _order_is(q, int(r), e))


def ppd_test(g: MatrixOverF, e: int) -> PpdVerdict:
    """Whether ``g`` is a ppd(d,q;e)-element, for d/2 < e <= d.

    Any ppd prime r of q^e - 1 with e > d/2 divides |g| exactly when it divides
    the order of g on its e-dimensional irreducible submodule, which acts like
    the companion matrix h of the fat factor; and r | |h| iff h^((q^e-1)/r) != 1.
    """
    F, d = g.field, g.d
    if not (d < 2 * e <= 2 * d):
        raise FatnessError(f"ppd_test needs d/2 < e <= d, got e={e}, d={d}")
    R = primitive_prime_divisors(F.q, e)
    v = fat_test(g)
    if not R or not v.is_fat or v.e != e:
        return PpdVerdict(False, e, ())
    h = companion(v.factor)
    one = identity(F, e)
    M = F.q**e - 1
    wit = tuple(sorted(r for r in R if mat_pow(h, M // r) != one))
    return PpdVerdict(bool(wit), e, wit)


def element_order(g: MatrixOverF, cap: int | None = None) -> int:
    """Multiplicative order by repeated multiplication (small groups only)."""
    one = identity(g.field, g.d)
    cap = cap or g.field.q ** (g.d * g.d)
    x = g
    n = 1
    while x != one:
        x = mat_mul(x, g)
        n += 1
        if n > cap:
            raise FatnessError("element order exceeds cap; is g invertible?")
    return n


def is_ppd_by_order(g: MatrixOverF, e: int) -> bool:
    """Definition-level ppd check from the element order (independent of fat_test)."""
    n = element_order(g)
    return any(n % r == 0 for r in primitive_prime_divisors(g.field.q, e))
