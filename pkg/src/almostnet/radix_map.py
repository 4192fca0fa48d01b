"""Base-p expansions and the maps ``r_p``, ``r`` into exact base-q digit strings.

A polynomial ``f`` is expanded as ``f = f_0 + f_1 p + ... + f_l p^l`` with
every digit ``f_i`` of degree ``< t``.  Digit ``f_i`` contributes the block
``c_{i,0} c_{i,1} ... c_{i,t-1}`` (coefficient of ``x^0`` first, i.e. most
significant) to the base-q expansion ``r_p(f) = 0.C_0 C_1 ... C_l``.

The expansion is GF(q)-linear in ``f``, so ``r_p`` restricted to polynomials
of bounded degree is a linear map given by the digit strings of the
monomials ``x^j``; :func:`digit_columns` exposes that matrix for the bulk
kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .gf_poly import FieldError, IrreducibleBasis, Poly, poly_divmod

MAX_PACKED = 2**63


class PrecisionError(ValueError):
    """A digit string is too short for the requested operation."""


@dataclass(frozen=True)
class DigitString:
    """Base-q digits ``s_0 s_1 ...``; position ``j`` carries weight ``q^-(j+1)``."""

    digits: tuple[int, ...]
    q: int

    def __post_init__(self):
        if any(not 0 <= c < self.q for c in self.digits):
            raise FieldError(f"digit out of range for base {self.q}: {self.digits}")

    @classmethod
    def parse(cls, text: str, q: int) -> "DigitString":
        text = text.strip()
        if not text:
            return cls((), q)
        parts = text.split(",") if q > 10 else list(text)
        try:
            return cls(tuple(int(c) for c in parts), q)
        except ValueError:
            raise FieldError(f"malformed digit string {text!r}") from None

    def __str__(self) -> str:
        if self.q <= 10:
            return "".join(map(str, self.digits))
        return ",".join(map(str, self.digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def prefix(self, k: int) -> "DigitString":
        if k > len(self.digits):
            raise PrecisionError(f"need {k} digits, string has {len(self.digits)}")
        return DigitString(self.digits[:k], self.q)

    def startswith(self, other: "DigitString") -> bool:
        if len(other) > len(self):
            raise PrecisionError(
                f"prefix of length {len(other)} exceeds point precision {len(self)}"
            )
        return self.digits[: len(other)] == other.digits

    def value(self) -> Fraction:
        """Exact value of ``0.s_0 s_1 ...`` in base q."""
        v = 0
        for c in self.digits:
            v = v * self.q + c
        return Fraction(v, self.q ** len(self.digits))


def to_float(s: DigitString) -> float:
    return float(s.value())


@dataclass(frozen=True)
class DigitPoint:
    """A point of ``[0,1)^d`` as ``d`` digit strings of a common length."""

    coords: tuple[DigitString, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("a point needs at least one coordinate")
        lengths = {len(c) for c in self.coords}
        if len(lengths) != 1:
            raise ValueError(f"coordinate digit lengths differ: {sorted(lengths)}")

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def q(self) -> int:
        return self.coords[0].q

    @property
    def precision(self) -> int:
        return len(self.coords[0])

    def to_floats(self) -> tuple[float, ...]:
        return tuple(to_float(c) for c in self.coords)

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.coords)


@dataclass(frozen=True)
class Expansion:
    """Base-p digits ``f_0, ..., f_l`` (each a Poly of degree < deg p)."""

    digits: tuple[Poly, ...]
    base: Poly

    def reconstruct(self) -> Poly:
        out = Poly.zero(self.base.q)
        for f_i in reversed(self.digits):
            out = out * self.base + f_i
        return out

    def blocks(self) -> list[tuple[int, ...]]:
        t = int(self.base.degree)
        return [f_i.padded(t) for f_i in self.digits]


def expand_base_p(f: Poly, p: Poly) -> Expansion:
    if p.degree < 1:
        raise FieldError("base polynomial must have positive degree")
    digits = []
    while not f.is_zero():
        f, rem = poly_divmod(f, p)
        digits.append(rem)
    return Expansion(tuple(digits), p)


def coordinate_digits(f: Poly, p: Poly, D: int) -> DigitString:
    """First ``D`` base-q digits of ``r_p(f)``; ``D`` must be a multiple of ``deg p``."""
    t = int(p.degree)
    if D < 0 or D % t:
        raise ValueError(f"digit count {D} is not a multiple of t={t}")
    out: list[int] = []
    for block in expand_base_p(f, p).blocks():
        if len(out) >= D:
            break
        out.extend(block)
    out = out[:D]
    out.extend([0] * (D - len(out)))
    return DigitString(tuple(out), f.q)


def map_point(f: Poly, basis: IrreducibleBasis | Sequence[Poly], D: int) -> DigitPoint:
    return DigitPoint(tuple(coordinate_digits(f, p, D) for p in basis))


def block_to_poly(block: Sequence[int], q: int) -> Poly:
    """Inverse of the block rule: position ``j`` is the coefficient of ``x^j``."""
    return Poly(block, q)


def residue_from_prefix(prefix: Sequence[int], p: Poly) -> Poly:
    """``a' = sum_j f_j p^j`` for the basic polynomials read off ``prefix`` blockwise."""
    t = int(p.degree)
    if len(prefix) % t:
        raise ValueError(f"prefix length {len(prefix)} is not a multiple of t={t}")
    out = Poly.zero(p.q)
    for j in reversed(range(len(prefix) // t)):
        out = out * p + block_to_poly(prefix[j * t : (j + 1) * t], p.q)
    return out


def default_precision(n: int, d: int, t: int) -> int:
    """``t * ceil((n + d t) / t)``: enough digits for every polynomial of degree < n + dt."""
    return t * (-(-(n + d * t) // t))


# ---------------------------------------------------------------------------
# packed codes: the first D digits of a coordinate as one integer


def check_packable(q: int, D: int) -> None:
    if q**D > MAX_PACKED:
        raise PrecisionError(f"{D} base-{q} digits do not fit in a 64-bit code")


def pack_digits(digits: Sequence[int], q: int) -> int:
    v = 0
    for c in digits:
        v = v * q + c
    return v


def unpack_code(code: int, q: int, D: int) -> tuple[int, ...]:
    out = [0] * D
    for j in range(D - 1, -1, -1):
        code, out[j] = divmod(code, q)
    return tuple(out)


def digit_columns(basis: IrreducibleBasis | Sequence[Poly], n_coeffs: int, D: int) -> np.ndarray:
    """Digit strings of ``r_{p_i}(x^j)``: array of shape ``(d, n_coeffs, D)``, uint8.

    ``r_{p_i}(sum_j c_j x^j)`` has digits ``sum_j c_j cols[i, j] mod q``.
    """
    polys = list(basis)
    q = polys[0].q
    if q > 255:
        raise ValueError("bulk digit arrays support q <= 255")
    cols = np.zeros((len(polys), n_coeffs, D), dtype=np.uint8)
    for i, p in enumerate(polys):
        for j in range(n_coeffs):
            cols[i, j] = coordinate_digits(Poly.monomial(j, q), p, D).digits
    return cols


def apply_columns(coeffs: np.ndarray, cols: np.ndarray, q: int, chunk: int = 1 << 15) -> np.ndarray:
    """Digits of ``r`` for a batch of coefficient vectors.

    ``coeffs`` has shape ``(N, L)``; returns uint8 digits of shape ``(N, d, D)``.
    """
    coeffs = np.asarray(coeffs)
    N = coeffs.shape[0]
    d, L, D = cols.shape
    if coeffs.shape[1] != L:
        raise ValueError(f"coefficient width {coeffs.shape[1]} != column count {L}")
    # float matmul is exact here: entries stay below L*q^2 << 2^53
    flat = cols.astype(np.float64).transpose(1, 0, 2).reshape(L, d * D)
    out = np.empty((N, d, D), dtype=np.uint8)
    for lo in range(0, N, chunk):
        block = coeffs[lo : lo + chunk].astype(np.float64) @ flat
        out[lo : lo + chunk] = np.fmod(block, q).astype(np.uint8).reshape(-1, d, D)
    return out


def pack_digit_array(digits: np.ndarray, q: int) -> np.ndarray:
    """Pack the last axis of a uint8 digit array into uint64 codes (first digit most significant)."""
    check_packable(q, digits.shape[-1])
    codes = np.zeros(digits.shape[:-1], dtype=np.uint64)
    qq = np.uint64(q)
    for j in range(digits.shape[-1]):
        codes *= qq
        codes += digits[..., j].astype(np.uint64)
    return codes


def unpack_code_array(codes: np.ndarray, q: int, D: int) -> np.ndarray:
    codes = np.array(codes, dtype=np.uint64, copy=True)
    out = np.zeros(codes.shape + (D,), dtype=np.uint8)
    qq = np.uint64(q)
    for j in range(D - 1, -1, -1):
        out[..., j] = (codes % qq).astype(np.uint8)
        codes //= qq
    return out


def lex_coefficients(q: int, length: int) -> np.ndarray:
    """All coefficient vectors of length ``length`` in lexicographic order
    (row ``u`` holds the base-q digits of ``u``, constant coefficient first)."""
    count = q**length
    idx = np.arange(count, dtype=np.int64)
    out = np.zeros((count, length), dtype=np.uint8)
    for j in range(length):
        out[:, j] = idx % q
        idx //= q
    return out


def polys_to_coefficients(polys: Iterable[Poly], length: int) -> np.ndarray:
    return np.array([f.padded(length) for f in polys], dtype=np.uint8).reshape(-1, length)
