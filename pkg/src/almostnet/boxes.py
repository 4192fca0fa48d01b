"""Basic and canonical boxes and their polynomial fibers.

A basic box is stored as one digit prefix per coordinate: coordinate ``i``
spans ``[0.prefix_i, 0.prefix_i + q^-len(prefix_i))``.  A canonical box has
every prefix length a multiple of the block size ``t``; its preimage under
``r`` is a coset ``A + D*GF(q)[x]`` (see :func:`crt_structure`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gf_poly import IrreducibleBasis, Poly, crt_solve, poly_divmod, product
from .radix_map import (
    DigitPoint,
    DigitString,
    PrecisionError,
    apply_columns,
    coordinate_digits,
    lex_coefficients,
    residue_from_prefix,
)

FIBER_GUARD = 2**22


@dataclass(frozen=True)
class BasicBox:
    prefixes: tuple[DigitString, ...]

    def __post_init__(self):
        if not self.prefixes:
            raise ValueError("a box needs at least one coordinate")
        if len({p.q for p in self.prefixes}) != 1:
            raise ValueError("prefixes use different bases")

    @classmethod
    def from_digits(cls, prefixes: Sequence[Sequence[int]], q: int) -> "BasicBox":
        return cls(tuple(DigitString(tuple(p), q) for p in prefixes))

    @classmethod
    def unit(cls, d: int, q: int) -> "BasicBox":
        return cls.from_digits([()] * d, q)

    @classmethod
    def parse(cls, text: str, q: int) -> "BasicBox":
        """``"10x1x"`` is ``[1/2,3/4) x [1/2,1) x [0,1)`` for q=2."""
        return cls(tuple(DigitString.parse(part, q) for part in text.split("x")))

    def __str__(self) -> str:
        return "x".join(str(p) for p in self.prefixes)

    @property
    def q(self) -> int:
        return self.prefixes[0].q

    @property
    def d(self) -> int:
        return len(self.prefixes)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.prefixes)

    @property
    def log_volume(self) -> int:
        """``-log_q`` of the volume."""
        return sum(self.lengths)

    def contains_box(self, other: "BasicBox") -> bool:
        return all(
            len(a) <= len(b) and b.digits[: len(a)] == a.digits
            for a, b in zip(self.prefixes, other.prefixes)
        )


@dataclass(frozen=True)
class CanonicalBox:
    prefixes: tuple[DigitString, ...]
    t: int

    def __post_init__(self):
        for p in self.prefixes:
            if len(p) % self.t:
                raise ValueError(f"prefix length {len(p)} is not a multiple of t={self.t}")

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(len(p) // self.t for p in self.prefixes)

    @property
    def q(self) -> int:
        return self.prefixes[0].q

    @property
    def log_volume(self) -> int:
        return sum(len(p) for p in self.prefixes)

    def as_basic(self) -> BasicBox:
        return BasicBox(self.prefixes)


@dataclass(frozen=True)
class CrtStructure:
    """``r^-1(B) = A + D * GF(q)[x]`` with ``a'_i`` the per-coordinate residues."""

    A: Poly
    D: Poly
    residues: tuple[Poly, ...]

    def member(self, f: Poly) -> bool:
        return poly_divmod(f - self.A, self.D)[1].is_zero()

    def element(self, g: Poly) -> Poly:
        return self.A + g * self.D


@dataclass(frozen=True)
class BoxType:
    A_hat: Poly
    D_hat: Poly


def contains(box: BasicBox, pt: DigitPoint) -> bool:
    if box.d != pt.d:
        raise ValueError(f"box has {box.d} coordinates, point has {pt.d}")
    for prefix, coord in zip(box.prefixes, pt.coords):
        if len(prefix) > len(coord):
            raise PrecisionError(
                f"point carries {len(coord)} digits, box prefix needs {len(prefix)}"
            )
        if coord.digits[: len(prefix)] != prefix.digits:
            return False
    return True


def smallest_canonical_superbox(beta: BasicBox, t: int) -> CanonicalBox:
    return CanonicalBox(tuple(p.prefix(len(p) // t * t) for p in beta.prefixes), t)


def crt_structure(B: CanonicalBox, basis: IrreducibleBasis | Sequence[Poly]) -> CrtStructure:
    polys = list(basis)
    if len(polys) != len(B.prefixes):
        raise ValueError(f"basis has {len(polys)} polynomials, box has {len(B.prefixes)} coordinates")
    q = polys[0].q
    residues, moduli = [], []
    for prefix, p, k in zip(B.prefixes, polys, B.k):
        residues.append(residue_from_prefix(prefix.digits, p))
        moduli.append(p**k)
    D = product(moduli, q)
    A = crt_solve(residues, moduli)
    return CrtStructure(A, D, tuple(residues))


def box_type(B: CanonicalBox, S: CrtStructure, n: int, d: int, t: int) -> BoxType:
    """Zero the coefficients of ``x^0..x^(n-dt-1)`` in A and ``x^0..x^(n-3dt)`` in D."""
    lv = B.log_volume
    if not n - d * t + 1 <= lv <= n:
        raise ValueError(
            f"canonical box volume q^-{lv} outside the good-pair range "
            f"[q^-{n}, q^-{n - d * t + 1}]"
        )
    A_hat = S.A.zero_below(n - d * t)
    D_hat = S.D.zero_below(n - 3 * d * t + 1)
    return BoxType(A_hat, D_hat)


def fiber_selector(
    B: CanonicalBox,
    beta: BasicBox,
    basis: IrreducibleBasis | Sequence[Poly],
    degree_bound: int,
    S: CrtStructure | None = None,
) -> set[Poly]:
    """``{g : deg g < degree_bound, r(A + g D) in beta}`` by exhaustive enumeration."""
    polys = list(basis)
    q, t = polys[0].q, B.t
    if q**degree_bound > FIBER_GUARD:
        raise ValueError(f"enumeration of q^{degree_bound} polynomials exceeds the 2^22 guard")
    if not B.as_basic().contains_box(beta):
        raise ValueError("beta is not inside B")
    if S is None:
        S = crt_structure(B, polys)
    depth = max(beta.lengths)
    prec = max(t, -(-depth // t) * t)
    # r(A + gD) = r(A) + sum_j g_j r(x^j D), digitwise mod q
    base = np.array(
        [[coordinate_digits(S.A, p, prec).digits for p in polys]], dtype=np.int64
    )
    cols = np.zeros((len(polys), degree_bound, prec), dtype=np.uint8)
    for j in range(degree_bound):
        shifted = S.D.shift(j)
        for i, p in enumerate(polys):
            cols[i, j] = coordinate_digits(shifted, p, prec).digits
    gs = lex_coefficients(q, degree_bound)
    digits = (apply_columns(gs, cols, q).astype(np.int64) + base) % q
    mask = np.ones(len(gs), dtype=bool)
    for i, prefix in enumerate(beta.prefixes):
        if len(prefix):
            want = np.array(prefix.digits, dtype=np.int64)
            mask &= np.all(digits[:, i, : len(prefix)] == want, axis=1)
    return {Poly(gs[u], q) for u in np.flatnonzero(mask)}


def residue_member(f: Poly, S: CrtStructure) -> bool:
    return S.member(f)


def high_part(f: Poly, k: int) -> tuple[int, ...]:
    """Coefficients of degree ``>= k``: two polynomials lie in the same coset of
    ``P_{<k}`` iff their high parts agree."""
    return f.coeffs[k:] if len(f.coeffs) > k else ()


def digit_box_of(pt: DigitPoint, lengths: Sequence[int]) -> BasicBox:
    """The basic box with the given prefix lengths that contains ``pt``."""
    return BasicBox(tuple(c.prefix(k) for c, k in zip(pt.coords, lengths)))

