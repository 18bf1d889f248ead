"""Univariate polynomials over F_q and their factorization.

Coefficients are stored low degree first with no trailing zeros; the zero
polynomial has an empty coefficient tuple.  The private ``_p*`` helpers work on
plain lists and do the actual arithmetic, :class:`PolyOverF` wraps them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import inf

from .field import FieldSpec


class PolyError(ValueError):
    pass


# -- raw list arithmetic ------------------------------------------------------------


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    add = F.add
    out = list(a)
    for i, x in enumerate(b):
        out[i] = add(out[i], x)
    return _trim(out)


def _psub(F, a, b):
    sub = F.sub
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(sub(x, y) if y else x)
    return _trim(out)


def _pscale(F, a, c):
    if c == 0:
        return []
    mul = F.mul
    return _trim([mul(x, c) for x in a])


def _pmul(F, a, b):
    if not a or not b:
        return []
    add, mul = F.add, F.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return _trim(out)


def _pdivmod(F, a, b):
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], rem
    sub, mul = F.sub, F.mul
    lead_inv = F.inv(b[-1])
    quo = [0] * (len(rem) - db)
    for top in range(len(rem) - 1, db - 1, -1):
        c = rem[top]
        if c:
            c = mul(c, lead_inv)
            quo[top - db] = c
            base = top - db
            for j in range(db + 1):
                if b[j]:
                    rem[base + j] = sub(rem[base + j], mul(c, b[j]))
    return _trim(quo), _trim(rem[:db])


def _pmod(F, a, b):
    return _pdivmod(F, a, b)[1]


def _pmonic(F, a):
    if not a or a[-1] == 1:
        return list(a)
    return _pscale(F, a, F.inv(a[-1]))


def _pgcd(F, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(F, a, b)
    return _pmonic(F, a)


def _pmulmod(F, a, b, m):
    return _pmod(F, _pmul(F, a, b), m)


def _ppowmod(F, a, n, m):
    result = [1]
    base = _pmod(F, a, m)
    while n:
        if n & 1:
            result = _pmulmod(F, result, base, m)
        n >>= 1
        if n:
            base = _pmulmod(F, base, base, m)
    return result


def _pderiv(F, a):
    p = F.p
    out = []
    for i in range(1, len(a)):
        c = a[i]
        n = i % p
        if c and n:
            s = 0
            for _ in range(n):
                s = F.add(s, c)
            out.append(s)
        else:
            out.append(0)
    return _trim(out)


# -- wrapper type --------------------------------------------------------------------


@dataclass(frozen=True)
class PolyOverF:
    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        if c and c[-1] == 0:
            object.__setattr__(self, "coeffs", tuple(_trim(c)))
        elif not isinstance(self.coeffs, tuple):
            object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_roots(cls, F, roots):
        out = [1]
        for r in roots:
            out = _pmul(F, out, [F.neg(r), 1])
        return cls(F, tuple(out))

    @classmethod
    def x(cls, F):
        return cls(F, (0, 1))

    @classmethod
    def one(cls, F):
        return cls(F, (1,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -inf

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _wrap(self, c):
        return PolyOverF(self.field, tuple(c))

    def _check(self, other):
        if not isinstance(other, PolyOverF):
            return NotImplemented
        if other.field != self.field:
            raise PolyError("polynomials over different fields")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._wrap(_padd(self.field, self.coeffs, other.coeffs))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._wrap(_psub(self.field, self.coeffs, other.coeffs))

    def __mul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._wrap(_pmul(self.field, self.coeffs, other.coeffs))

    def __divmod__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise PolyError("division by the zero polynomial")
        q, r = _pdivmod(self.field, self.coeffs, other.coeffs)
        return self._wrap(q), self._wrap(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n):
        out = [1]
        for _ in range(n):
            out = _pmul(self.field, out, self.coeffs)
        return self._wrap(out)

    def monic(self):
        return self._wrap(_pmonic(self.field, self.coeffs))

    def derivative(self):
        return self._wrap(_pderiv(self.field, self.coeffs))

    def __call__(self, a):
        """Evaluate at a field element."""
        add, mul = self.field.add, self.field.mul
        acc = 0
        for c in reversed(self.coeffs):
            acc = add(mul(acc, a), c)
        return acc

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)


def gcd(f: PolyOverF, g: PolyOverF) -> PolyOverF:
    """Monic gcd; ``gcd(f, 0) == monic(f)``."""
    f._check(g)
    return f._wrap(_pgcd(f.field, f.coeffs, g.coeffs))


def poly_op(op, f, g):
    """Dispatch ``add``/``mul``/``divmod``/``gcd``/``eval_at_matrix`` by name."""
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "divmod":
        return divmod(f, g)
    if op == "gcd":
        return gcd(f, g)
    if op == "eval_at_matrix":
        from .matrix import eval_at_matrix

        return eval_at_matrix(f, g)
    raise PolyError(f"unknown polynomial operation {op!r}")


# -- factorization ------------------------------------------------------------------


def _pth_root(F, a):
    p = F.p
    return [F.frobenius_root(a[i]) for i in range(0, len(a), p)]


def _squarefree(F, f):
    """Squarefree decomposition of monic ``f`` as a list of (part, multiplicity)."""
    out = []
    if len(f) <= 1:
        return out
    df = _pderiv(F, f)
    if df:
        c = _pgcd(F, f, df)
        w = _pdivmod(F, f, c)[0]
        i = 1
        while len(w) > 1:
            y = _pgcd(F, w, c)
            z = _pdivmod(F, w, y)[0]
            if len(z) > 1:
                out.append((z, i))
            i += 1
            w = y
            c = _pdivmod(F, c, y)[0]
        if len(c) > 1:
            for part, m in _squarefree(F, _pth_root(F, c)):
                out.append((part, m * F.p))
    else:
        for part, m in _squarefree(F, _pth_root(F, f)):
            out.append((part, m * F.p))
    merged = {}
    for part, m in out:
        merged[m] = _pmul(F, merged[m], part) if m in merged else part
    return [(merged[m], m) for m in sorted(merged)]


def _ddf(F, f):
    """Distinct-degree factorization of squarefree monic ``f``: list of (product, degree)."""
    out = []
    q = F.q
    rest = list(f)
    x = [0, 1]
    h = _pmod(F, x, rest) if len(rest) > 2 else x
    i = 1
    while len(rest) - 1 >= 2 * i:
        h = _ppowmod(F, h, q, rest)
        g = _pgcd(F, rest, _psub(F, h, x))
        if len(g) > 1:
            out.append((g, i))
            rest = _pdivmod(F, rest, g)[0]
            h = _pmod(F, h, rest)
        i += 1
    if len(rest) > 1:
        out.append((rest, len(rest) - 1))
    return out


def squarefree_decomposition(f: PolyOverF) -> list[tuple[PolyOverF, int]]:
    if f.is_zero:
        raise PolyError("cannot factor the zero polynomial")
    return [(f._wrap(a), m) for a, m in _squarefree(f.field, list(f.monic().coeffs))]


def distinct_degree_factorization(f: PolyOverF) -> list[tuple[PolyOverF, int]]:
    """DDF of a squarefree polynomial: (product of all degree-i factors, i)."""
    if f.is_zero:
        raise PolyError("cannot factor the zero polynomial")
    return [(f._wrap(a), i) for a, i in _ddf(f.field, list(f.monic().coeffs))]


def factor_components(f: PolyOverF) -> list[tuple[PolyOverF, int, int]]:
    """Squarefree + DDF: triples (component, factor degree, multiplicity).

    Each component is the product of the distinct monic irreducible factors of
    ``f`` having the given degree and multiplicity.
    """
    if f.is_zero:
        raise PolyError("cannot factor the zero polynomial")
    F = f.field
    out = []
    for part, m in _squarefree(F, list(f.monic().coeffs)):
        for comp, i in _ddf(F, part):
            out.append((f._wrap(comp), i, m))
    return out


def factor_degrees(f: PolyOverF) -> tuple[tuple[int, int], ...]:
    """Sorted multiset of (irreducible factor degree, multiplicity), expanded."""
    prof = []
    for comp, i, m in factor_components(f):
        prof.extend([(i, m)] * ((len(comp.coeffs) - 1) // i))
    return tuple(sorted(prof))


def _edf(F, f, i, rng):
    """Split squarefree monic ``f`` whose irreducible factors all have degree i."""
    n = len(f) - 1
    if n == i:
        return [f]
    q = F.q
    while True:
        a = _trim([rng.randrange(q) for _ in range(n)])
        if len(a) <= 1:
            continue
        if F.p == 2:
            # trace map a + a^2 + ... + a^(2^(k*i - 1))
            t = list(a)
            s = list(a)
            for _ in range(F.k * i - 1):
                s = _pmulmod(F, s, s, f)
                t = _padd(F, t, s)
            b = t
        else:
            b = _psub(F, _ppowmod(F, a, (q**i - 1) // 2, f), [1])
        g = _pgcd(F, f, b)
        if 1 < len(g) < len(f):
            h = _pdivmod(F, f, g)[0]
            return _edf(F, g, i, rng) + _edf(F, h, i, rng)


def factor(f: PolyOverF, seed: int = 0) -> list[tuple[PolyOverF, int]]:
    """Complete factorization into monic irreducibles with multiplicities.

    Equal-degree splitting is randomized (Cantor-Zassenhaus) with a seeded
    stream, so the result is deterministic.  Factors are sorted by
    (degree, coefficients).
    """
    F = f.field
    rng = random.Random(seed)
    out = []
    for comp, i, m in factor_components(f):
        for g in _edf(F, list(comp.coeffs), i, rng):
            out.append((f._wrap(g), m))
    out.sort(key=lambda t: (len(t[0].coeffs), t[0].coeffs[::-1]))
    return out


def poly_factor(f: PolyOverF, mode: str = "full", seed: int = 0):
    if mode == "degrees_only":
        return factor_degrees(f)
    if mode == "full":
        return factor(f, seed=seed)
    raise PolyError(f"unknown factorization mode {mode!r}")


def is_irreducible(f: PolyOverF) -> bool:
    """Irreducibility via the DDF: a single component of full degree."""
    if f.is_zero or f.degree < 1:
        return False
    comps = factor_components(f)
    return len(comps) == 1 and comps[0][2] == 1 and comps[0][1] == f.degree
