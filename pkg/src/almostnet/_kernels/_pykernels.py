"""Vectorised numpy implementations of the hot kernels (fallback backend)."""

import numpy as np

NAME = "numpy"

_CHUNK = 1 << 14


def _pack(digits, q):
    codes = np.zeros(digits.shape[:-1], dtype=np.uint64)
    qq = np.uint64(q)
    for j in range(digits.shape[-1]):
        codes *= qq
        codes += digits[..., j]
    return codes


def combine_translates(rh, rf, q, out):
    """``out[h*F + f, i]`` = packed digitwise sum mod q of ``rh[h, i]`` and ``rf[f, i]``."""
    H, d, D = rh.shape
    F = rf.shape[0]
    view = out.reshape(H, F, d)
    if q == 2:
        ph = _pack(rh, 2)
        pf = _pack(rf, 2)
        np.bitwise_xor(ph[:, None, :], pf[None, :, :], out=view)
        return out
    step = max(1, _CHUNK // max(F, 1))
    rf16 = rf.astype(np.uint16)[None]
    for start in range(0, H, step):
        block = rh[start : start + step].astype(np.uint16)[:, None] + rf16
        block %= q
        view[start : start + step] = _pack(block, q)
    return out


def _prefix_keys(codes, q, D, ks):
    if q == 2:
        key = np.zeros(codes.shape[0], dtype=np.uint64)
        for i, k in enumerate(ks):
            if k:
                key <<= np.uint64(k)
                key |= codes[:, i] >> np.uint64(D - k)
        return key
    key = np.zeros(codes.shape[0], dtype=np.uint64)
    for i, k in enumerate(ks):
        if k:
            key *= np.uint64(q**k)
            key += codes[:, i] // np.uint64(q ** (D - k))
    return key


def prefix_counts(codes, q, D, ks, counts):
    """Histogram of the concatenated prefix key over ``q**sum(ks)`` cells."""
    key = _prefix_keys(codes, q, D, ks)
    counts[:] = np.bincount(key.astype(np.intp), minlength=counts.shape[0])
    return counts
