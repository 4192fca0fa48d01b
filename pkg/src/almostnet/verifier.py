"""Exact verification of almost-net point sets.

Every basic box of volume ``q^-n`` is a choice of prefix lengths
``(k_1, ..., k_d)`` summing to ``n`` (a composition) together with one
digit prefix per coordinate.  For each composition the points are bucketed
by their concatenated prefix key, an integer below ``q^n``, so one pass
per composition counts all ``q^n`` cells at once.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .boxes import (
    BasicBox,
    CanonicalBox,
    box_type,
    contains,
    crt_structure,
    high_part,
    smallest_canonical_superbox,
)
from .generator import NetParams, generate_array, make_rng, thread_count, STREAM_BASELINE
from .gf_poly import IrreducibleBasis, Poly
from .points import PointSet, as_pointset
from .radix_map import (
    apply_columns,
    digit_columns,
    lex_coefficients,
    map_point,
    pack_digit_array,
    unpack_code,
)

SELFTEST_GUARD = 2**22


def compositions(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``n`` into ``d`` parts, in lexicographic order."""
    if d == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, d - 1):
            yield (first,) + rest


def n_compositions(n: int, d: int) -> int:
    return math.comb(n + d - 1, d - 1)


def cell_counts(points: PointSet, ks: Sequence[int]) -> np.ndarray:
    """Counts of all ``q^sum(ks)`` cells with prefix lengths ``ks``, indexed by prefix key."""
    points.require_precision(max(ks))
    counts = np.zeros(points.q ** sum(ks), dtype=np.int64)
    _kernels.prefix_counts(points.codes, points.q, points.D, list(ks), counts)
    return counts


def key_to_box(key: int, ks: Sequence[int], q: int) -> BasicBox:
    digits = unpack_code(key, q, sum(ks))
    prefixes, pos = [], 0
    for k in ks:
        prefixes.append(digits[pos : pos + k])
        pos += k
    return BasicBox.from_digits(prefixes, q)


@dataclass(frozen=True)
class VerifyReport:
    eps_obs: float
    min_count: int
    max_count: int
    worst_box: BasicBox
    boxes_checked: int
    compositions_checked: int
    empty_box_seen: bool

    def items(self):
        for f in fields(self):
            yield f.name, getattr(self, f.name)

    def to_text(self) -> str:
        return "\n".join(f"{k}={v}" for k, v in self.items())

    @staticmethod
    def csv_header() -> str:
        return ",".join(f.name for f in fields(VerifyReport))

    def to_csv_row(self) -> str:
        return ",".join(
            repr(v) if isinstance(v, float) else str(v) for _, v in self.items()
        )


def _scan(points: PointSet, ks: tuple[int, ...], m: float):
    counts = cell_counts(points, ks)
    lo_key = int(np.argmin(counts))
    hi_key = int(np.argmax(counts))
    lo, hi = int(counts[lo_key]), int(counts[hi_key])
    # worst cell of this composition; ties go to the smaller key
    dlo, dhi = abs(lo - m), abs(hi - m)
    if dlo > dhi or (dlo == dhi and lo_key < hi_key):
        worst = (dlo, lo_key)
    else:
        worst = (dhi, hi_key)
    return lo, hi, worst


def epsilon_observed(
    points,
    q: int,
    d: int,
    n: int,
    m: float,
    threads: int | None = None,
) -> VerifyReport:
    """Exact worst-case relative deviation over all basic boxes of volume ``q^-n``."""
    ps = as_pointset(points, q)
    if ps.q != q or ps.d != d:
        raise ValueError(f"points are base {ps.q}, dimension {ps.d}; expected {q}, {d}")
    ps.require_precision(n)
    expected = m * q**n
    if not math.isclose(len(ps), expected, rel_tol=1e-12, abs_tol=0.5):
        raise ValueError(f"point count {len(ps)} != m*q^n = {expected}")
    comps = list(compositions(n, d))
    threads = threads or thread_count()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda ks: _scan(ps, ks, m), comps))
    else:
        results = [_scan(ps, ks, m) for ks in comps]
    min_count = min(r[0] for r in results)
    max_count = max(r[1] for r in results)
    best = None
    for ks, (_, _, (dev, key)) in zip(comps, results):
        if best is None or dev > best[0]:
            best = (dev, ks, key)
    eps = max(abs(min_count / m - 1.0), abs(max_count / m - 1.0))
    return VerifyReport(
        eps_obs=eps,
        min_count=min_count,
        max_count=max_count,
        worst_box=key_to_box(best[2], best[1], q),
        boxes_checked=len(comps) * q**n,
        compositions_checked=len(comps),
        empty_box_seen=min_count == 0,
    )


@dataclass(frozen=True)
class NetCheck:
    ok: bool
    violation: BasicBox | None = None
    count: int | None = None

    def __bool__(self):
        return self.ok


def perfect_net_check(points, q: int, d: int, n: int, mu: int) -> NetCheck:
    """True iff every basic box of volume ``q^-n`` holds exactly ``mu`` points."""
    ps = as_pointset(points, q)
    if len(ps) != mu * q**n:
        raise ValueError(f"point count {len(ps)} != mu*q^n = {mu * q**n}")
    ps.require_precision(n)
    for ks in compositions(n, d):
        counts = cell_counts(ps, ks)
        bad = np.flatnonzero(counts != mu)
        if bad.size:
            key = int(bad[0])
            return NetCheck(False, key_to_box(key, ks, q), int(counts[key]))
    return NetCheck(True)


# ---------------------------------------------------------------------------
# structural self-tests


@dataclass
class SelfTestItem:
    name: str
    passed: bool
    detail: str


@dataclass
class SelfTestReport:
    items: list[SelfTestItem]

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)

    def to_text(self) -> str:
        return "\n".join(
            f"{'PASS' if i.passed else 'FAIL'} {i.name}: {i.detail}" for i in self.items
        )


def fiber_grid(q: int, basis: IrreducibleBasis, length: int, D: int) -> PointSet:
    """``r(P_{<length})`` for all polynomials of degree ``< length``."""
    cols = digit_columns(basis, length, D)
    digits = apply_columns(lex_coefficients(q, length), cols, q)
    return PointSet(pack_digit_array(digits, q), q, D)


def random_basic_box(rng: np.random.Generator, q: int, d: int, n: int) -> BasicBox:
    """Uniform random composition of ``n`` (stars and bars) with uniform digits."""
    cuts = np.sort(rng.choice(n + d - 1, size=d - 1, replace=False))
    bounds = [-1, *cuts.tolist(), n + d - 1]
    ks = [bounds[i + 1] - bounds[i] - 1 for i in range(d)]
    return BasicBox.from_digits([rng.integers(0, q, size=k).tolist() for k in ks], q)


def random_poly(rng: np.random.Generator, q: int, length: int) -> Poly:
    return Poly(rng.integers(0, q, size=length).tolist(), q)


def type_equivalence_trial(rng, basis: IrreducibleBasis, n: int) -> tuple[bool, bool]:
    """One random (good pair, h, g); returns the two membership verdicts."""
    q, t, d = basis.q, basis.t, basis.d
    dt = d * t
    beta = random_basic_box(rng, q, d, n)
    B = smallest_canonical_superbox(beta, t)
    S = crt_structure(B, basis)
    T = box_type(B, S, n, d, t)
    deg_D = int(S.D.degree)
    room = n + dt - deg_D
    if rng.random() < 0.5 and room > 0:
        # h hits the coset of A + gD with a random low part
        g = random_poly(rng, q, room)
        h = (S.A + g * S.D).zero_below(n - dt) + random_poly(rng, q, n - dt)
    else:
        g = random_poly(rng, q, int(rng.integers(0, 2 * dt + 1)))
        h = random_poly(rng, q, n + dt)
    lhs = high_part(T.A_hat + g * T.D_hat, n - dt) == high_part(h, n - dt)
    rhs = high_part(S.A + g * S.D, n - dt) == high_part(h, n - dt)
    return lhs, rhs


def crt_trial(rng, basis: IrreducibleBasis, max_blocks: int, length: int) -> tuple[bool, bool]:
    """One random (f, B): digit membership vs residue membership."""
    q, t, d = basis.q, basis.t, basis.d
    total = int(rng.integers(0, max_blocks + 1))
    cuts = np.sort(rng.integers(0, total + 1, size=d - 1)) if d > 1 else np.array([], dtype=int)
    bounds = [0, *cuts.tolist(), total]
    ks = [bounds[i + 1] - bounds[i] for i in range(d)]
    B = CanonicalBox(
        tuple(
            BasicBox.from_digits([rng.integers(0, q, size=k * t).tolist()], q).prefixes[0]
            for k in ks
        ),
        t,
    )
    S = crt_structure(B, basis)
    if rng.random() < 0.5:
        f = S.A + random_poly(rng, q, max(length - int(S.D.degree), 1)) * S.D
    else:
        f = random_poly(rng, q, length)
    pt = map_point(f, basis, t * (max(ks) + 1))
    return contains(B.as_basic(), pt), S.member(f)


def structural_selftest(params: NetParams, trials: int = 1000, seed: int | None = None) -> SelfTestReport:
    q, d, n, t = params.q, params.d, params.n, params.t
    dt = d * t
    if q ** (n + dt) > SELFTEST_GUARD:
        raise ValueError(f"q^(n+dt) = {q}^{n + dt} exceeds the 2^22 enumeration guard")
    if n < 3 * dt:
        raise ValueError(f"structural self-test needs n >= 3dt = {3 * dt}")
    basis = params.basis()
    rng = make_rng(params.seed if seed is None else seed, STREAM_BASELINE + 1)
    items = []

    grid = fiber_grid(q, basis, n + dt, params.D)
    check = perfect_net_check(grid, q, d, n, q**dt)
    items.append(
        SelfTestItem(
            "fiber-equidistribution",
            check.ok,
            f"r(P_<{n + dt}) has {q**dt} points in every volume q^-{n} box"
            if check.ok
            else f"box {check.violation} holds {check.count}",
        )
    )

    bad = sum(1 for _ in range(trials) if len(set(type_equivalence_trial(rng, basis, n))) != 1)
    items.append(SelfTestItem("type-equivalence", bad == 0, f"{bad} mismatches in {trials} tuples"))

    bad = sum(1 for _ in range(trials) if len(set(crt_trial(rng, basis, min(5, n // t), n + dt))) != 1)
    items.append(SelfTestItem("crt-membership", bad == 0, f"{bad} mismatches in {trials} pairs"))
    return SelfTestReport(items)


@dataclass(frozen=True)
class BaselineComparison:
    eps_net: float
    eps_iid: float

    @property
    def ratio(self) -> float:
        return self.eps_net / self.eps_iid if self.eps_iid else math.inf

    def to_text(self) -> str:
        return f"eps_net={self.eps_net}\neps_iid={self.eps_iid}\nratio={self.ratio}"


def iid_points(params: NetParams) -> PointSet:
    rng = make_rng(params.seed, STREAM_BASELINE)
    D = params.D
    codes = rng.integers(0, params.q**D, size=(params.n_points, params.d), dtype=np.uint64)
    return PointSet(codes, params.q, D)


def baseline_compare(params: NetParams, net: PointSet | None = None) -> BaselineComparison:
    net = generate_array(params) if net is None else net
    args = (params.q, params.d, params.n, params.m)
    eps_net = epsilon_observed(net, *args).eps_obs
    eps_iid = epsilon_observed(iid_points(params), *args).eps_obs
    return BaselineComparison(eps_net, eps_iid)
