"""Quick randomized property suites for the arithmetic layers, used by ``anet selftest``."""

from __future__ import annotations

import numpy as np

from .gf_poly import IrreducibleBasis, Poly, count_irreducibles, enumerate_irreducibles, monic_polys
from .radix_map import coordinate_digits, expand_base_p
from .verifier import SelfTestItem, random_poly


def brute_force_irreducibles(q: int, t: int) -> list[Poly]:
    """Monic degree-t polynomials that are not a product of two monic factors of lower degree."""
    reducible = set()
    for i in range(1, t // 2 + 1):
        for a in monic_polys(q, i):
            for b in monic_polys(q, t - i):
                reducible.add((a * b).coeffs)
    return [f for f in monic_polys(q, t) if f.coeffs not in reducible]


def ring_axioms(rng, q: int, trials: int = 200) -> SelfTestItem:
    bad = 0
    for _ in range(trials):
        f, g, h = (random_poly(rng, q, int(rng.integers(0, 12))) for _ in range(3))
        bad += (f + g) + h != f + (g + h)
        bad += f * (g + h) != f * g + f * h
        if not g.is_zero():
            quo, rem = divmod(f, g)
            bad += quo * g + rem != f or not rem.degree < g.degree
    return SelfTestItem("gf-ring-axioms", bad == 0, f"{bad} failures in {trials} triples")


def irreducible_scan(q: int, t: int) -> SelfTestItem:
    found = enumerate_irreducibles(q, t, count_irreducibles(q, t))
    brute = brute_force_irreducibles(q, t)
    ok = found == brute
    return SelfTestItem(
        "gf-irreducibles",
        ok,
        f"N({q},{t}) = {count_irreducibles(q, t)}, brute force {len(brute)}",
    )


def expansion_roundtrip(rng, basis: IrreducibleBasis, trials: int = 100) -> SelfTestItem:
    bad = 0
    for _ in range(trials):
        f = random_poly(rng, basis.q, int(rng.integers(0, 64)))
        for p in basis:
            bad += expand_base_p(f, p).reconstruct() != f
    return SelfTestItem("radix-reconstruction", bad == 0, f"{bad} failures in {trials} polynomials")


def residue_determinism(rng, basis: IrreducibleBasis, trials: int = 100) -> SelfTestItem:
    bad, t, q = 0, basis.t, basis.q
    for _ in range(trials):
        k = int(rng.integers(1, 4))
        f = random_poly(rng, q, int(rng.integers(0, 40)))
        g = random_poly(rng, q, int(rng.integers(0, 10)))
        for p in basis:
            a = coordinate_digits(f, p, k * t)
            b = coordinate_digits(f + p**k * g, p, k * t)
            bad += a != b
    return SelfTestItem("radix-residue-determinism", bad == 0, f"{bad} failures in {trials} pairs")


def arithmetic_suite(q: int, t: int, basis: IrreducibleBasis, seed: int = 0) -> list[SelfTestItem]:
    rng = np.random.default_rng(seed)
    scan_t = t
    while scan_t > 1 and q**scan_t > 4096:
        scan_t -= 1
    return [
        ring_axioms(rng, q),
        irreducible_scan(q, scan_t),
        expansion_roundtrip(rng, basis),
        residue_determinism(rng, basis),
    ]
