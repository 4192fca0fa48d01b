"""Exponential-sum Gram certificate over digit features of a window box.

Points of the window ``[0, q^-(n-2k)) x [0,1)^(d-1)`` are described by
``X_1`` (the first digit of coordinate 1 after its ``n - 2k`` leading
zeros) and ``X_l`` (the first digit of coordinate ``l >= 2``).  For ``k``-subsets
``J`` of the coordinates the Gram matrix is

    A[J1, J2] = (1/s) * sum_v e_q(sum_{J1} X(v) - sum_{J2} X(v)),

with ``e_q(x) = exp(2 pi i x / q)``.  Each entry is assembled from an exact
integer histogram of the exponent mod ``q``.  For an ``(m, eps)``-almost net
every off-diagonal entry has modulus at most ``2 eps``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .points import as_pointset

EIG_THRESHOLD = 1e-6
OFFDIAG_SLACK = 1e-9
MAX_SUBSETS = 4096


@dataclass(frozen=True)
class WindowSample:
    k: int
    q: int
    n: int
    features: np.ndarray  # (s_count, d) uint8

    @property
    def s_count(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


def extract_window(points, q: int, d: int, n: int, k: int) -> WindowSample:
    if not 1 <= k <= d / 2:
        raise ValueError(f"k must satisfy 1 <= k <= d/2 = {d / 2}, got {k}")
    if n - 2 * k < 0:
        raise ValueError(f"n={n} is smaller than 2k={2 * k}")
    ps = as_pointset(points, q)
    if ps.d != d:
        raise ValueError(f"points have dimension {ps.d}, expected {d}")
    lead = n - 2 * k
    ps.require_precision(lead + 1)
    D = ps.D
    codes = ps.codes
    inside = codes[:, 0] < np.uint64(q ** (D - lead))
    sel = codes[inside]
    qq = np.uint64(q)
    feats = np.empty((sel.shape[0], d), dtype=np.uint8)
    feats[:, 0] = (sel[:, 0] // np.uint64(q ** (D - lead - 1))) % qq
    if d > 1:
        feats[:, 1:] = sel[:, 1:] // np.uint64(q ** (D - 1))
    return WindowSample(k, q, n, feats)


def subsets(d: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(d), k))


def residue_counts(w: WindowSample) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """``cnt[J1, J2, tau] = #{v : sum_{J1} X - sum_{J2} X = tau mod q}``."""
    subs = subsets(w.d, w.k)
    if len(subs) > MAX_SUBSETS:
        raise ValueError(f"C({w.d},{w.k}) = {len(subs)} subsets exceeds {MAX_SUBSETS}")
    q, P = w.q, len(subs)
    X = w.features.astype(np.int64)
    sums = np.stack([X[:, list(J)].sum(axis=1) % q for J in subs])  # (P, s)
    cnt = np.zeros((P, P, q), dtype=np.int64)
    offsets = (np.arange(P, dtype=np.int64) * q)[:, None]
    for a in range(P):
        tau = (sums[a][None, :] - sums) % q
        cnt[a] = np.bincount((tau + offsets).ravel(), minlength=P * q).reshape(P, q)
    return subs, cnt


def roots_of_unity(q: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(q) / q)


@dataclass
class GramCertificate:
    A: np.ndarray
    subsets: list[tuple[int, ...]]
    counts: np.ndarray
    q: int
    k: int
    s_count: int
    max_offdiag: float
    rank_estimate: int
    eigenvalues: np.ndarray
    eps_reference: float | None = None

    def entries_csv(self) -> str:
        lines = ["pair,J1,J2,real,imag,modulus"]
        P = len(self.subsets)
        for a in range(P):
            for b in range(P):
                z = self.A[a, b]
                j1 = "-".join(str(j + 1) for j in self.subsets[a])
                j2 = "-".join(str(j + 1) for j in self.subsets[b])
                lines.append(f"{a * P + b},{j1},{j2},{z.real!r},{z.imag!r},{abs(z)!r}")
        return "\n".join(lines) + "\n"


def gram_matrix(w: WindowSample, q: int | None = None) -> GramCertificate:
    q = w.q if q is None else q
    if w.s_count < 1:
        raise ValueError("window contains no points")
    subs, cnt = residue_counts(w)
    # exactly q complex multiplications per entry
    A = (cnt.astype(np.float64) @ roots_of_unity(q)) / w.s_count
    np.fill_diagonal(A, 1.0)
    P = len(subs)
    off = np.abs(A[~np.eye(P, dtype=bool)])
    max_off = float(off.max()) if off.size else 0.0
    eig = np.linalg.eigvalsh((A + A.conj()).real / 2)
    return GramCertificate(
        A=A,
        subsets=subs,
        counts=cnt,
        q=q,
        k=w.k,
        s_count=w.s_count,
        max_offdiag=max_off,
        rank_estimate=int(np.sum(eig > EIG_THRESHOLD)),
        eigenvalues=eig,
    )


@dataclass(frozen=True)
class CertificateResult:
    passed: bool
    max_offdiag: float
    bound: float
    rank_estimate: int
    precondition_ok: bool
    implied_rank_bound: int
    rank_consistent: bool | None

    def summary(self) -> str:
        lines = [
            f"passed={self.passed}",
            f"max_offdiag={self.max_offdiag!r}",
            f"bound={self.bound!r}",
            f"rank_estimate={self.rank_estimate}",
            f"precondition_2eps_ge_binom_inv_sqrt={self.precondition_ok}",
            f"floor_rank_over_2q2k={self.implied_rank_bound}",
        ]
        if self.rank_consistent is not None:
            lines.append(f"rank_consistent={self.rank_consistent}")
        return "\n".join(lines)


def certificate_check(c: GramCertificate, eps: float, m: float | None = None) -> CertificateResult:
    """Pass iff every off-diagonal modulus is at most ``2 eps`` (plus rounding slack).

    The rank line ``floor(rank / (2 q^2k)) <= (1 + eps) m`` is informational.
    """
    c.eps_reference = eps
    bound = 2 * eps + OFFDIAG_SLACK
    dim = len(c.subsets)
    implied = c.rank_estimate // (2 * c.q ** (2 * c.k))
    return CertificateResult(
        passed=c.max_offdiag <= bound,
        max_offdiag=c.max_offdiag,
        bound=bound,
        rank_estimate=c.rank_estimate,
        precondition_ok=2 * eps >= dim**-0.5,
        implied_rank_bound=implied,
        rank_consistent=None if m is None else implied <= (1 + eps) * m,
    )


def window_bounds_hold(c: GramCertificate, eps: float, m: float) -> bool:
    """Each residue class holds between ``q^(2k-1)(1 -+ eps) m`` points (off-diagonal pairs)."""
    P = len(c.subsets)
    scale = c.q ** (2 * c.k - 1) * m
    lo, hi = scale * (1 - eps) - 1e-9, scale * (1 + eps) + 1e-9
    for a in range(P):
        for b in range(P):
            if a != b and not np.all((c.counts[a, b] >= lo) & (c.counts[a, b] <= hi)):
                return False
    return True


def binom_inv_sqrt(d: int, k: int) -> float:
    return math.comb(d, k) ** -0.5
