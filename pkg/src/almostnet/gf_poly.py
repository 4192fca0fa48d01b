"""Polynomials over the prime field GF(q).

A polynomial ``a_0 + a_1 x + ... + a_n x^n`` is stored as the tuple
``(a_0, a_1, ..., a_n)`` of integers in ``{0, ..., q-1}`` with ``a_n != 0``;
the zero polynomial is the empty tuple and has degree ``-inf``.

Field elements are plain ``int`` values reduced mod ``q``.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

NEG_INF = float("-inf")


class FieldError(ValueError):
    """Invalid modulus, mismatched fields or an impossible field operation."""


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality check (q is always small)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


def check_prime(q: int) -> int:
    if not isinstance(q, int) or not is_prime(q):
        raise FieldError(f"modulus must be a prime, got {q!r}")
    return q


def _strip(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Immutable polynomial over GF(q) in canonical (trailing-zero free) form."""

    __slots__ = ("q", "coeffs")

    def __init__(self, coeffs: Iterable[int], q: int, *, _trusted: bool = False):
        if _trusted:
            object.__setattr__(self, "q", q)
            object.__setattr__(self, "coeffs", coeffs)
            return
        check_prime(q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "coeffs", _strip([int(c) % q for c in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _make(cls, coeffs: list[int], q: int) -> "Poly":
        return cls(_strip(coeffs), q, _trusted=True)

    @classmethod
    def zero(cls, q: int) -> "Poly":
        return cls((), check_prime(q), _trusted=True)

    @classmethod
    def one(cls, q: int) -> "Poly":
        return cls((1,), check_prime(q), _trusted=True)

    @classmethod
    def monomial(cls, k: int, q: int, c: int = 1) -> "Poly":
        return cls([0] * k + [c], q)

    @classmethod
    def x(cls, q: int) -> "Poly":
        return cls.monomial(1, q)

    @classmethod
    def from_int(cls, code: int, q: int) -> "Poly":
        """Polynomial whose coefficient of x^i is the i-th base-q digit of ``code``."""
        coeffs = []
        while code:
            code, c = divmod(code, q)
            coeffs.append(c)
        return cls(coeffs, q)

    def to_int(self) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = v * self.q + c
        return v

    @classmethod
    def parse(cls, text: str, q: int) -> "Poly":
        """Parse the digit text form, constant coefficient first.

        For ``q <= 10`` the form is contiguous digits (``"11001"`` is
        ``1 + x + x^4`` over GF(2)); for larger ``q`` it is comma separated.
        """
        check_prime(q)
        text = text.strip()
        if not text:
            return cls.zero(q)
        parts = text.split(",") if (q > 10 or "," in text) else list(text)
        try:
            digits = [int(p) for p in parts]
        except ValueError:
            raise FieldError(f"malformed polynomial text {text!r}") from None
        if any(c < 0 or c >= q for c in digits):
            raise FieldError(f"digit out of range for q={q} in {text!r}")
        return cls(digits, q)

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        if self.q <= 10:
            return "".join(map(str, self.coeffs))
        return ",".join(map(str, self.coeffs))

    @property
    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def padded(self, length: int) -> tuple[int, ...]:
        """Coefficients ``a_0..a_{length-1}``; raises if the degree is too large."""
        if len(self.coeffs) > length:
            raise FieldError(f"degree {self.degree} does not fit in {length} coefficients")
        return self.coeffs + (0,) * (length - len(self.coeffs))

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise FieldError("zero polynomial has no monic associate")
        inv = pow(self.coeffs[-1], -1, self.q)
        return self.scale(inv)

    def scale(self, c: int) -> "Poly":
        q = self.q
        c %= q
        return Poly._make([a * c % q for a in self.coeffs], q)

    def truncate(self, k: int) -> "Poly":
        """Remainder mod x^k: keep coefficients of degree < k."""
        return Poly._make(list(self.coeffs[: max(k, 0)]), self.q)

    def zero_below(self, k: int) -> "Poly":
        """Set the coefficients of 1, x, ..., x^{k-1} to zero."""
        k = max(k, 0)
        if k >= len(self.coeffs):
            return Poly.zero(self.q)
        return Poly._make([0] * k + list(self.coeffs[k:]), self.q)

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return Poly((0,) * k + self.coeffs, self.q, _trusted=True)

    def _check(self, other) -> "Poly":
        if isinstance(other, int):
            return Poly([other], self.q)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.q != self.q:
            raise FieldError(f"field mismatch: GF({self.q}) vs GF({other.q})")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b, q = self.coeffs, other.coeffs, self.q
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % q
        return Poly._make(out, q)

    __radd__ = __add__

    def __neg__(self):
        q = self.q
        return Poly((tuple((q - c) % q for c in self.coeffs)), q, _trusted=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b, q = self.coeffs, other.coeffs, self.q
        if not a or not b:
            return Poly.zero(q)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return Poly._make([c % q for c in out], q)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise FieldError("negative exponent")
        result, base = Poly.one(self.q), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return poly_divmod(self, other)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.q == other.q and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _strip([other % self.q])
        return NotImplemented

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __lt__(self, other: "Poly") -> bool:
        # degree first, then coefficients from the top: the lexicographic order
        # with the constant coefficient least significant
        return (len(self.coeffs), self.coeffs[::-1]) < (len(other.coeffs), other.coeffs[::-1])

    def __call__(self, x):
        """Evaluate at ``x`` (a field element, or any number viewed over Z)."""
        v = 0
        for c in reversed(self.coeffs):
            v = v * x + c
        return v % self.q if isinstance(x, int) else v

    def __repr__(self):
        if not self.coeffs:
            return f"Poly(0, q={self.q})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i else (f"{c}" if i == 0 else f"{c}*{mono}"))
        return f"Poly({' + '.join(terms)}, q={self.q})"


def poly_divmod(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Return ``(quo, rem)`` with ``f = quo*g + rem`` and ``deg rem < deg g``."""
    if f.q != g.q:
        raise FieldError(f"field mismatch: GF({f.q}) vs GF({g.q})")
    if not g.coeffs:
        raise ZeroDivisionError("polynomial division by zero")
    q = f.q
    b = g.coeffs
    db = len(b) - 1
    rem = list(f.coeffs)
    if len(rem) <= db:
        return Poly.zero(q), f
    inv = pow(b[-1], -1, q)
    quo = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i] * inv % q
        if c:
            quo[i - db] = c
            off = i - db
            for j in range(db):
                rem[off + j] = (rem[off + j] - c * b[j]) % q
        rem[i] = 0
    return Poly._make(quo, q), Poly._make(rem[:db], q)


def ext_gcd(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended Euclid: ``(d, u, v)`` with ``u*f + v*g = d`` and ``d`` monic."""
    if f.q != g.q:
        raise FieldError(f"field mismatch: GF({f.q}) vs GF({g.q})")
    if f.is_zero() and g.is_zero():
        raise FieldError("gcd of two zero polynomials is undefined")
    q = f.q
    r0, r1 = f, g
    u0, u1 = Poly.one(q), Poly.zero(q)
    v0, v1 = Poly.zero(q), Poly.one(q)
    while not r1.is_zero():
        quo, rem = poly_divmod(r0, r1)
        r0, r1 = r1, rem
        u0, u1 = u1, u0 - quo * u1
        v0, v1 = v1, v0 - quo * v1
    inv = pow(r0.leading(), -1, q)
    return r0.scale(inv), u0.scale(inv), v0.scale(inv)


def gcd(f: Poly, g: Poly) -> Poly:
    while not g.is_zero():
        f, g = g, poly_divmod(f, g)[1]
    return f.monic()


def mul_mod(a: Poly, b: Poly, m: Poly) -> Poly:
    return poly_divmod(a * b, m)[1]


def pow_mod(base: Poly, e: int, m: Poly) -> Poly:
    result = poly_divmod(Poly.one(base.q), m)[1]
    base = poly_divmod(base, m)[1]
    while e:
        if e & 1:
            result = mul_mod(result, base, m)
        e >>= 1
        if e:
            base = mul_mod(base, base, m)
    return result


def _rabin_monic(f: tuple[int, ...], q: int) -> bool:
    # f monic of degree n >= 2 with f(0) != 0; works on raw lists for speed
    n = len(f) - 1
    neg = [(-c) % q for c in f[:n]]
    red = [neg]  # red[k] = x^(n+k) mod f
    for _ in range(n - 2):
        prev = red[-1]
        top = prev[-1]
        nxt = [0] + prev[:-1]
        if top:
            nxt = [(a + top * b) % q for a, b in zip(nxt, neg)]
        red.append(nxt)

    def mulmod(a, b):
        c = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    c[i + j] += ai * bj
        out = c[:n]
        for k in range(n, 2 * n - 1):
            ck = c[k] % q
            if ck:
                r = red[k - n]
                for j in range(n):
                    out[j] += ck * r[j]
        return [v % q for v in out]

    bits = bin(q)[3:]
    xpow = [0] * n
    xpow[1] = 1
    for _ in range(n // 2):
        r = xpow
        for bit in bits:
            r = mulmod(r, r)
            if bit == "1":
                r = mulmod(r, xpow)
        xpow = r
        a, b = list(f), list(xpow)
        b[1] = (b[1] - 1) % q
        while b and b[-1] == 0:
            b.pop()
        while b:
            inv = pow(b[-1], -1, q)
            db = len(b) - 1
            while len(a) - 1 >= db:
                c = a[-1] * inv % q
                off = len(a) - 1 - db
                if c:
                    for j in range(db):
                        a[off + j] = (a[off + j] - c * b[j]) % q
                a.pop()
                while a and a[-1] == 0:
                    a.pop()
            a, b = b, a
        if len(a) > 1:
            return False
    return True


def is_irreducible(f: Poly) -> bool:
    """Rabin-style test: ``gcd(f, x^(q^i) - x) = 1`` for ``1 <= i <= deg f / 2``.

    The powers ``x^(q^i) mod f`` come from repeated squaring.
    """
    if f.is_zero() or f.degree < 1:
        raise FieldError("irreducibility is only defined for non-constant polynomials")
    if f.degree == 1:
        return True
    f = f.monic()
    if f.coeffs[0] == 0:
        return False
    return _rabin_monic(f.coeffs, f.q)


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for positive integers")
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


@lru_cache(maxsize=None)
def count_irreducibles(q: int, t: int) -> int:
    """Number of monic irreducible polynomials of degree ``t`` over GF(q)."""
    check_prime(q)
    if t < 1:
        raise ValueError("degree must be positive")
    total = sum(mobius(i) * q ** (t // i) for i in range(1, t + 1) if t % i == 0)
    return total // t


def monic_polys(q: int, t: int) -> Iterator[Poly]:
    """All monic polynomials of degree ``t`` in lexicographic order
    (constant coefficient least significant)."""
    for low in itertools.product(range(q), repeat=t):
        yield Poly(low[::-1] + (1,), q, _trusted=True)


def _rootless_codes(q: int, t: int) -> np.ndarray:
    """Codes of monic degree-``t`` polynomials without a root in GF(q)."""
    codes = np.arange(q**t, dtype=np.int64)
    low = np.empty((t, codes.size), dtype=np.int64)
    rest = codes.copy()
    for j in range(t):
        low[j] = rest % q
        rest //= q
    ok = np.ones(codes.size, dtype=bool)
    for a in range(q):
        v = np.ones(codes.size, dtype=np.int64)  # Horner from the leading 1
        for j in range(t - 1, -1, -1):
            v = (v * a + low[j]) % q
        ok &= v != 0
    return codes[ok]


def irreducible_codes(q: int, t: int) -> np.ndarray:
    """All monic irreducibles of degree ``t`` as sorted codes ``sum_{i<t} a_i q^i``.

    Degrees 2 and 3 use the root test (a factorisation must contain a
    linear factor); higher degrees run Rabin's test on each candidate.
    """
    check_prime(q)
    if t < 1:
        raise FieldError(f"degree must be positive, got {t}")
    if t == 1:
        return np.arange(q, dtype=np.int64)
    if t <= 3:
        return _rootless_codes(q, t)
    weights = [q**i for i in range(t)]
    found = [
        sum(c * w for c, w in zip(f.coeffs, weights))
        for f in monic_polys(q, t)
        if f.coeffs[0] and _rabin_monic(f.coeffs, q)
    ]
    return np.array(found, dtype=np.int64)


def enumerate_irreducibles(q: int, t: int, count: int) -> list[Poly]:
    """The first ``count`` monic irreducibles of degree ``t`` in lexicographic order."""
    total = count_irreducibles(q, t)
    if count > total:
        raise FieldError(
            f"requested {count} irreducible polynomials of degree {t} over GF({q}), "
            f"only {total} exist"
        )
    found: list[Poly] = []
    if count <= 0:
        return found
    if t <= 3 and count * 4 > total:
        # most of the list is wanted: the vectorised scan is cheaper
        return [Poly.from_int(int(c) + q**t, q) for c in irreducible_codes(q, t)[:count]]
    for f in monic_polys(q, t):
        if is_irreducible(f):
            found.append(f)
            if len(found) == count:
                break
    return found


def crt_solve(residues: Sequence[Poly], moduli: Sequence[Poly]) -> Poly:
    """Unique ``f`` with ``deg f < sum(deg moduli)`` and ``f = residues[i] mod moduli[i]``."""
    if len(residues) != len(moduli):
        raise ValueError("residues and moduli differ in length")
    if not moduli:
        raise ValueError("at least one modulus is required")
    q = moduli[0].q
    f = poly_divmod(residues[0], moduli[0])[1]
    modulus = moduli[0]
    for r, m in zip(residues[1:], moduli[1:]):
        g, u, _ = ext_gcd(modulus, m)
        if g.degree != 0:
            raise FieldError(f"moduli are not coprime (common factor {g!r})")
        # f + modulus * u * (r - f) solves both congruences since u*modulus = 1 mod m
        lift = mul_mod(u, r - f, m)
        f = f + modulus * lift
        modulus = modulus * m
    return poly_divmod(f, modulus)[1] if modulus.degree > 0 else Poly.zero(q)


def product(polys: Iterable[Poly], q: int) -> Poly:
    out = Poly.one(q)
    for p in polys:
        out = out * p
    return out


class IrreducibleBasis:
    """``d`` distinct monic irreducibles of degree ``t``, one per coordinate."""

    __slots__ = ("q", "t", "polys")

    def __init__(self, polys: Sequence[Poly]):
        polys = tuple(polys)
        if not polys:
            raise FieldError("basis needs at least one polynomial")
        q, t = polys[0].q, polys[0].degree
        for p in polys:
            if p.q != q or p.degree != t:
                raise FieldError("basis polynomials must share field and degree")
            if not p.is_monic() or not is_irreducible(p):
                raise FieldError(f"{p!r} is not monic irreducible")
        if len(set(polys)) != len(polys):
            raise FieldError("basis polynomials must be distinct")
        self.q, self.t, self.polys = q, int(t), polys

    @classmethod
    def standard(cls, q: int, t: int, d: int) -> "IrreducibleBasis":
        return cls(enumerate_irreducibles(q, t, d))

    @property
    def d(self) -> int:
        return len(self.polys)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def __eq__(self, other):
        return isinstance(other, IrreducibleBasis) and self.polys == other.polys

    def __hash__(self):
        return hash(self.polys)

    def __repr__(self):
        return f"IrreducibleBasis(q={self.q}, t={self.t}, polys=[{', '.join(p.to_text() for p in self.polys)}])"
