"""Counter-based random streams.

Every evaluated pair owns a stream derived from ``(seed, src, dst, kind)``.
Draw ``c`` of a stream is ``mix64(key + (c + 1) * GAMMA)`` (the splitmix64
output function applied to a counter), so any draw can be produced without
touching any other pair's state. This is what makes the pair sweeps
independent of evaluation order and thread count.

The compiled kernels implement the same arithmetic in C; this module is the
reference and is used to derive the per-pair keys for both backends.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SALT = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)

# statistic-kind tags mixed into the pair keys
KIND_IDS = {"kendall": 1, "te": 2, "granger": 3, "spearman": 4, "pearson": 5}


def mix64(z):
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def pair_keys(seed, src, dst, kind):
    """Stream keys for one or many pairs (``src``/``dst`` may be arrays)."""
    if isinstance(kind, str):
        kind = KIND_IDS[kind]
    with np.errstate(over="ignore"):
        h = mix64(np.uint64(int(seed) & MASK64) ^ _SALT)
        for v in (src, dst, kind):
            h = mix64(h + GAMMA + np.asarray(v, dtype=np.int64).astype(np.uint64))
    return h


def draws(key, start, count):
    """Raw 64-bit draws ``start .. start+count-1`` of the stream ``key``."""
    counters = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(np.uint64(key) + counters * GAMMA)


def bounded(u, m):
    """Map 64-bit draws to ``[0, m)`` by a 32x32 multiply-shift."""
    u = np.asarray(u, dtype=np.uint64)
    m = np.asarray(m, dtype=np.uint64)
    return (((u >> np.uint64(32)) * m) >> np.uint64(32)).astype(np.int64)


def permutations(key, n, k, first=0):
    """Permutations ``first .. first+k-1`` of ``range(n)`` from one stream.

    Permutation ``q`` is the result of Fisher-Yates shuffling a fresh copy of
    the identity with draws ``q*(n-1) .. (q+1)*(n-1)-1``; applying it as
    ``values[perm]`` equals shuffling ``values`` in place with the same swaps.
    """
    perm = np.tile(np.arange(n, dtype=np.int64), (k, 1))
    if n < 2 or k == 0:
        return perm
    steps = n - 1
    u = draws(key, first * steps, k * steps).reshape(k, steps)
    j = bounded(u, np.arange(n, 1, -1, dtype=np.uint64))
    rows = np.arange(k)
    for step, i in enumerate(range(n - 1, 0, -1)):
        jj = j[:, step]
        held = perm[rows, i].copy()
        perm[rows, i] = perm[rows, jj]
        perm[rows, jj] = held
    return perm


def draws_used(n, n_permutations):
    """Stream draws consumed by a full permutation run on ``n`` observations."""
    return n_permutations * np.maximum(np.asarray(n) - 1, 0)
