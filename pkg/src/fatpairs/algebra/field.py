"""Finite fields F_q = F_p[x]/(m(x)) with elements coded as integers.

An element with coefficient vector (c_0, ..., c_{k-1}) over F_p is coded as
sum(c_i * p**i), so codes run over range(q) and the prime subfield sits at
codes 0..p-1.  Arithmetic callables (``add``, ``mul``, ...) are chosen once at
construction, table-driven where the order is small enough.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from sympy import factorint, isprime

#: Largest field order accepted by :func:`make_field`.
MAX_ORDER = 1 << 32
#: Log/antilog multiplication tables are built up to this order.
LOG_TABLE_LIMIT = 1 << 16
#: Full addition tables are built up to this order (non-binary extensions).
ADD_TABLE_LIMIT = 1 << 8


class FieldError(ValueError):
    pass


def _digits(code, p, k):
    out = []
    for _ in range(k):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _undigits(digits, p):
    code = 0
    for c in reversed(digits):
        code = code * p + c
    return code


def _mulmod_digits(a, b, modulus, p):
    """Product of two digit vectors reduced by a monic ``modulus`` over F_p."""
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for top in range(len(prod) - 1, k - 1, -1):
        c = prod[top]
        if c:
            for j in range(k):
                prod[top - k + j] = (prod[top - k + j] - c * modulus[j]) % p
    return prod[:k]


class FieldSpec:
    """The field of order ``q = p**k``.

    Instances are immutable and cached per ``(p, k)``; build them with
    :func:`make_field`.
    """

    __slots__ = (
        "p", "k", "q", "modulus", "primitive", "add", "sub", "mul", "neg",
        "inv", "_log", "_exp",
    )

    def __init__(self, p: int, k: int, modulus: tuple[int, ...] | None):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "q", p**k)
        object.__setattr__(self, "modulus", modulus)
        self._build()

    def __setattr__(self, name, value):
        raise AttributeError("FieldSpec is immutable")

    def _set(self, **kw):
        for name, value in kw.items():
            object.__setattr__(self, name, value)

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __reduce__(self):
        return (make_field, (self.p, self.k))

    # -- construction of arithmetic ------------------------------------------------

    def _build(self):
        p, k, q = self.p, self.k, self.q
        if k == 1:
            self._set(
                add=lambda a, b: (a + b) % p,
                sub=lambda a, b: (a - b) % p,
                mul=lambda a, b: (a * b) % p,
                neg=lambda a: (-a) % p,
            )
            self._set(inv=self._inv_prime)
            self._set(_log=None, _exp=None)
            self._set(primitive=self._find_primitive())
            return

        if p == 2:
            self._set(add=lambda a, b: a ^ b, sub=lambda a, b: a ^ b, neg=lambda a: a)
        else:
            neg_table = [_undigits([(-c) % p for c in _digits(a, p, k)], p) for a in range(q)]

            def slow_add(a, b):
                da, db = _digits(a, p, k), _digits(b, p, k)
                return _undigits([(x + y) % p for x, y in zip(da, db)], p)

            if q <= ADD_TABLE_LIMIT:
                table = [[slow_add(a, b) for b in range(q)] for a in range(q)]
                add = lambda a, b: table[a][b]  # noqa: E731
                sub = lambda a, b: table[a][neg_table[b]]  # noqa: E731
            else:
                add = slow_add
                sub = lambda a, b: slow_add(a, neg_table[b])  # noqa: E731
            self._set(add=add, sub=sub, neg=neg_table.__getitem__)

        if q <= LOG_TABLE_LIMIT:
            self._set(_log=None, _exp=None)
            self._set(mul=self._slow_mul)
            g = self._find_primitive()
            exp = [0] * (2 * (q - 1))
            log = [0] * q
            x = 1
            for i in range(q - 1):
                exp[i] = x
                log[x] = i
                x = self._slow_mul(x, g)
            for i in range(q - 1, 2 * (q - 1)):
                exp[i] = exp[i - (q - 1)]

            def mul(a, b):
                if a == 0 or b == 0:
                    return 0
                return exp[log[a] + log[b]]

            def inv(a):
                if a == 0:
                    raise ZeroDivisionError("inverse of zero in a finite field")
                return exp[(q - 1 - log[a]) % (q - 1)]

            self._set(mul=mul, inv=inv, primitive=g, _log=log, _exp=exp)
        else:
            self._set(mul=self._slow_mul, inv=self._inv_pow, _log=None, _exp=None)
            self._set(primitive=self._find_primitive())

    def _inv_prime(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return pow(a, -1, self.p)

    def _inv_pow(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.pow(a, self.q - 2)

    def _slow_mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        p, k = self.p, self.k
        return _undigits(_mulmod_digits(_digits(a, p, k), _digits(b, p, k), self.modulus, p), p)

    def _find_primitive(self):
        q = self.q
        if q == 2:
            return 1
        primes = list(factorint(q - 1))
        for g in range(2, q):
            if all(self._pow_generic(g, (q - 1) // r) != 1 for r in primes):
                return g
        raise FieldError("no primitive element found")  # unreachable for a field

    def _pow_generic(self, a, n):
        result, base = 1, a
        while n:
            if n & 1:
                result = self._slow_mul(result, base) if self.k > 1 else (result * base) % self.p
            base = self._slow_mul(base, base) if self.k > 1 else (base * base) % self.p
            n >>= 1
        return result

    # -- public helpers -------------------------------------------------------------

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        if self._log is not None:
            if a == 0:
                return 1 if n == 0 else 0
            return self._exp[(self._log[a] * n) % (self.q - 1)]
        if self.k == 1:
            return pow(a, n, self.p)
        result, base = 1, a
        mul = self.mul
        while n:
            if n & 1:
                result = mul(result, base)
            base = mul(base, base)
            n >>= 1
        return result

    def frobenius_root(self, a: int) -> int:
        """The unique ``b`` with ``b**p == a``."""
        return self.pow(a, self.q // self.p)

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def in_subgroup(self, a: int, index: int) -> bool:
        """Whether nonzero ``a`` lies in the index-``index`` subgroup of F_q^*."""
        return self.pow(a, (self.q - 1) // index) == 1

    def subgroup(self, index: int) -> list[int]:
        """Elements of the unique subgroup of F_q^* with the given index."""
        step = self.pow(self.primitive, index)
        out, x = [], 1
        for _ in range((self.q - 1) // index):
            out.append(x)
            x = self.mul(x, step)
        return sorted(out)

    def digits(self, a: int) -> list[int]:
        return _digits(a, self.p, self.k)

    def from_digits(self, digits) -> int:
        return _undigits(list(digits), self.p)


def _is_irreducible_over_prime(coeffs, p):
    from .poly import PolyOverF, is_irreducible

    return is_irreducible(PolyOverF(make_field(p, 1), tuple(coeffs)))


@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over F_p.

    Coefficients are compared low degree first; the returned tuple includes
    the leading 1.
    """
    for low in product(range(p), repeat=k):
        if low[0] == 0:
            continue
        coeffs = low + (1,)
        if _is_irreducible_over_prime(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldSpec:
    """Build (or fetch from cache) the field of order ``p**k``."""
    if not isinstance(p, int) or not isinstance(k, int):
        raise FieldError("p and k must be integers")
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if p < 2 or not isprime(p):
        raise FieldError(f"characteristic must be prime, got {p}")
    if p**k > MAX_ORDER:
        raise FieldError(f"field order {p}^{k} exceeds the supported maximum {MAX_ORDER}")
    modulus = None if k == 1 else least_irreducible(p, k)
    return FieldSpec(p, k, modulus)


def parse_order(text: str) -> tuple[int, int]:
    """Parse ``"9"``, ``"3^2"`` or ``"9=3^2"`` into ``(p, k)``."""
    text = text.strip()
    if "=" in text:
        total, _, rest = text.partition("=")
        p, k = parse_order(rest)
        if p**k != int(total):
            raise FieldError(f"inconsistent field order {text!r}")
        return p, k
    if "^" in text:
        base, _, exp = text.partition("^")
        p, k = int(base), int(exp)
        if not isprime(p):
            raise FieldError(f"{p} is not prime")
        return p, k
    q = int(text)
    f = factorint(q) if q > 1 else {}
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    ((p, k),) = f.items()
    return int(p), int(k)


def ff_op(spec: FieldSpec, op: str, a: int, b: int | None = None) -> int:
    """Dispatch a single field operation by name."""
    for x in (a,) if op in ("neg", "inv", "pow") else (a, b):
        if not (isinstance(x, int) and 0 <= x < spec.q):
            raise FieldError(f"{x!r} is not an element code of {spec}")
    if op == "add":
        return spec.add(a, b)
    if op == "sub":
        return spec.sub(a, b)
    if op == "mul":
        return spec.mul(a, b)
    if op == "neg":
        return spec.neg(a)
    if op == "inv":
        return spec.inv(a)
    if op == "pow":
        return spec.pow(a, b)
    raise FieldError(f"unknown field operation {op!r}")
