"""Packed storage for large point multisets.

Each coordinate's first ``D`` digits are stored as one unsigned 64-bit code
(first digit most significant), so a digit prefix of length ``k`` is
``code // q**(D - k)``.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from .radix_map import (
    DigitPoint,
    DigitString,
    PrecisionError,
    check_packable,
    pack_digits,
    unpack_code,
    unpack_code_array,
)


class PointSet:
    """A multiset of points of ``[0,1)^d`` with ``D`` exact base-q digits each."""

    __slots__ = ("codes", "q", "D")

    def __init__(self, codes: np.ndarray, q: int, D: int):
        check_packable(q, D)
        codes = np.ascontiguousarray(codes, dtype=np.uint64)
        if codes.ndim != 2:
            raise ValueError("codes must have shape (N, d)")
        self.codes, self.q, self.D = codes, q, D

    @classmethod
    def from_points(cls, points: Iterable[DigitPoint], q: int | None = None) -> "PointSet":
        rows, D, d = [], None, None
        for pt in points:
            if D is None:
                D, d, q = pt.precision, pt.d, pt.q if q is None else q
            elif pt.precision != D or pt.d != d or pt.q != q:
                raise ValueError("points differ in precision, dimension or base")
            rows.append([pack_digits(c.digits, q) for c in pt.coords])
        if D is None:
            raise ValueError("empty point stream")
        return cls(np.array(rows, dtype=np.uint64).reshape(-1, d), q, D)

    @classmethod
    def from_digits(cls, digits: np.ndarray, q: int) -> "PointSet":
        from .radix_map import pack_digit_array

        return cls(pack_digit_array(np.asarray(digits, dtype=np.uint8), q), q, digits.shape[-1])

    def __len__(self) -> int:
        return self.codes.shape[0]

    @property
    def d(self) -> int:
        return self.codes.shape[1]

    def point(self, i: int) -> DigitPoint:
        return DigitPoint(
            tuple(DigitString(unpack_code(int(c), self.q, self.D), self.q) for c in self.codes[i])
        )

    def __iter__(self) -> Iterator[DigitPoint]:
        for i in range(len(self)):
            yield self.point(i)

    def __getitem__(self, idx) -> "PointSet":
        return PointSet(self.codes[idx].reshape(-1, self.d), self.q, self.D)

    def digits(self) -> np.ndarray:
        """uint8 array of shape ``(N, d, D)``."""
        return unpack_code_array(self.codes, self.q, self.D)

    def to_floats(self) -> np.ndarray:
        return self.codes.astype(np.float64) / float(self.q**self.D)

    def require_precision(self, k: int) -> None:
        if k > self.D:
            raise PrecisionError(f"need {k} digits per coordinate, points carry {self.D}")

    def truncated(self, D: int) -> "PointSet":
        """Keep the first ``D`` digits of every coordinate."""
        self.require_precision(D)
        return PointSet(self.codes // np.uint64(self.q ** (self.D - D)), self.q, D)

    def concat(self, other: "PointSet") -> "PointSet":
        if (other.q, other.D, other.d) != (self.q, self.D, self.d):
            raise ValueError("point sets are incompatible")
        return PointSet(np.concatenate([self.codes, other.codes]), self.q, self.D)

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return (self.q, self.D) == (other.q, other.D) and np.array_equal(self.codes, other.codes)

    def __repr__(self):
        return f"PointSet(N={len(self)}, d={self.d}, q={self.q}, D={self.D})"


def as_pointset(points, q: int | None = None) -> PointSet:
    if isinstance(points, PointSet):
        return points
    return PointSet.from_points(points, q)
