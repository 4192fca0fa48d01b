"""Independent brute-force oracles shared by the tests.

Nothing here calls into the code paths it is used to check.
"""

from fractions import Fraction
from itertools import product

import numpy as np


def conv_mod(a, b, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % q
    return out


def irreducible_codes(q, t, array=False):
    """Sorted codes sum_{i<t} c_i q^i of monic irreducible degree-t polynomials,
    by sieving out every product of two monic factors (numpy convolution)."""
    total = q**t
    reducible = np.zeros(total, dtype=bool)
    weights = q ** np.arange(t, dtype=np.int64)
    for i in range(1, t // 2 + 1):
        a = _monic_table(q, i)          # (q^i, i+1)
        b = _monic_table(q, t - i)      # (q^(t-i), t-i+1)
        prod = np.zeros((a.shape[0], b.shape[0], t + 1), dtype=np.int64)
        for u in range(i + 1):
            prod[:, :, u : u + t - i + 1] += a[:, None, u : u + 1] * b[None, :, :]
        prod %= q
        reducible[(prod[:, :, :t] @ weights).ravel()] = True
    codes = np.flatnonzero(~reducible)
    return codes if array else codes.tolist()


def _monic_table(q, deg):
    count = q**deg
    idx = np.arange(count, dtype=np.int64)
    out = np.zeros((count, deg + 1), dtype=np.int64)
    for j in range(deg):
        out[:, j] = idx % q
        idx //= q
    out[:, deg] = 1
    return out


def mobius_count(q, t):
    def mu(n):
        primes, k, m = 0, 2, n
        while k * k <= m:
            if m % k == 0:
                m //= k
                if m % k == 0:
                    return 0
                primes += 1
            k += 1
        if m > 1:
            primes += 1
        return (-1) ** primes

    return sum(mu(i) * q ** (t // i) for i in range(1, t + 1) if t % i == 0) // t


def has_root(coeffs, q):
    return any(sum(c * a**i for i, c in enumerate(coeffs)) % q == 0 for a in range(q))


def rp_formula(digit_polys, q, t):
    """(f_0(1/q) + f_1(1/q) q^-t + ...)/q with the base-p digits evaluated over Q."""
    total = Fraction(0)
    for i, coeffs in enumerate(digit_polys):
        val = sum(Fraction(c, q**j) for j, c in enumerate(coeffs))
        total += val / Fraction(q) ** (i * t)
    return total / q


def naive_combine(rh, rf, q):
    H, d, D = rh.shape
    F = rf.shape[0]
    out = np.zeros((H * F, d), dtype=np.uint64)
    for h in range(H):
        for f in range(F):
            for i in range(d):
                v = 0
                for j in range(D):
                    v = v * q + (int(rh[h, i, j]) + int(rf[f, i, j])) % q
                out[h * F + f, i] = v
    return out


def naive_counts(codes, q, D, ks):
    counts = np.zeros(q ** sum(ks), dtype=np.int64)
    for row in codes:
        key = 0
        for c, k in zip(row, ks):
            key = key * q**k + int(c) // q ** (D - k)
        counts[key] += 1
    return counts


def all_polys(q, length):
    return [list(c) for c in product(range(q), repeat=length)]


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def divmod_lists(f, g, q):
    f, g = _trim(f), _trim(g)
    inv = pow(g[-1], q - 2, q)
    quo = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g):
        c = f[-1] * inv % q
        s = len(f) - len(g)
        quo[s] = c
        for i, b in enumerate(g):
            f[s + i] = (f[s + i] - c * b) % q
        f = _trim(f)
    return quo, f


def digits_oracle(f, p, q, D):
    """First D base-q digits of r_p(f) by repeated list division; f, p are LSB-first lists."""
    t = len(p) - 1
    out = []
    while len(out) < D:
        f, rem = divmod_lists(f, p, q)
        out += rem + [0] * (t - len(rem))
    return out[:D]
