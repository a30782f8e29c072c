"""Pure numpy/Python versions of the ``_kernels`` routines.

Same signatures, same outputs: the Kendall and transfer-entropy sweeps are
bitwise identical to the compiled ones because both consume the same random
streams, count in integers (Kendall) or read the same ``c*log2(c)`` table and
sum in the same order (transfer entropy). ``n_threads`` is accepted and
ignored.
"""

import heapq
import math

import numpy as np

from . import rng

BACKEND = "python"

FLAG_OK = 0
FLAG_SHORT = 1
FLAG_DEGENERATE = 2
FLAG_FLAT_NULL = 3

# bound on the (permutations x pairs-of-days) block materialised at once
_BLOCK = 4_000_000


def merge_inversions(values):
    a = [int(v) for v in values]
    n = len(a)
    inv = 0
    width = 1
    while width < n:
        out = []
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j = lo, mid
            while i < mid and j < hi:
                if a[j] < a[i]:
                    out.append(a[j])
                    inv += mid - i
                    j += 1
                else:
                    out.append(a[i])
                    i += 1
            out.extend(a[i:mid])
            out.extend(a[j:hi])
        a = out
        width *= 2
    return inv


def _tied_pairs(codes):
    counts = np.bincount(codes)
    return int((counts * (counts - 1) // 2).sum())


def _kendall_pair(x, y, key, n_perm, min_obs):
    n = len(x)
    res = [math.nan] * 4
    if n <= min_obs or n < 2:
        return res, [n, FLAG_SHORT, 0]
    _, xr = np.unique(x, return_inverse=True)
    _, yr = np.unique(y, return_inverse=True)
    xr = xr.astype(np.int64)
    yr = yr.astype(np.int64)
    P = n * (n - 1) // 2
    nx = P - _tied_pairs(xr)
    ny = P - _tied_pairs(yr)
    if nx == 0 or ny == 0:
        return res, [n, FLAG_DEGENERATE, 0]

    lo, hi = np.triu_indices(n, 1)
    sx = np.sign(xr[hi] - xr[lo])
    s0 = int(np.sign(yr[hi] - yr[lo]) @ sx)
    s1 = 0
    s2 = 0
    step = max(1, _BLOCK // max(P, 1))
    for q0 in range(0, n_perm, step):
        k = min(step, n_perm - q0)
        perms = rng.permutations(key, n, k, first=q0)
        yp = yr[perms]
        s = np.sign(yp[:, hi] - yp[:, lo]) @ sx
        s1 += int(s.sum())
        s2 += int((s * s).sum())

    denom = math.sqrt(float(nx) * float(ny))
    res[0] = float(s0) / denom
    res[1] = (float(s1) / float(n_perm)) / denom
    vnum = float(n_perm * s2 - s1 * s1)
    draws = rng.draws_used(n, n_perm)
    if vnum <= 0:
        res[2] = 0.0
        return res, [n, FLAG_FLAT_NULL, draws]
    res[2] = math.sqrt(vnum) / float(n_perm) / denom
    res[3] = float(n_perm * s0 - s1) / math.sqrt(vnum)
    return res, [n, FLAG_OK, draws]


def kendall_sweep(data, mask, pairs, keys, n_perm, min_obs, n_threads=1):
    data = np.asarray(data, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    res = np.full((len(pairs), 4), np.nan)
    ires = np.zeros((len(pairs), 3), dtype=np.int64)
    for p, (i, j) in enumerate(pairs):
        both = mask[i] & mask[j]
        res[p], ires[p] = _kendall_pair(data[i, both], data[j, both], keys[p], n_perm, min_obs)
    return res, ires


def _bin(values, lo, width, n_bins):
    b = ((values - lo) / width * n_bins).astype(np.int64)
    return np.minimum(b, n_bins - 1)


def _seqsum(values, axis=-1):
    """Left-to-right float sum (matches the compiled accumulation order)."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape[axis] == 0:
        return np.zeros(np.delete(values.shape, axis))
    return np.take(np.cumsum(values, axis=axis), -1, axis=axis)


def _te_null(byn, byc, bx_rows, n_bins, flog, s_y, s_yy):
    k, n = bx_rows.shape
    nb3 = n_bins ** 3
    nb2 = n_bins ** 2
    offs = np.arange(k)[:, None]
    c3 = np.bincount(((byn * n_bins + byc) * n_bins + bx_rows + offs * nb3).ravel(),
                     minlength=k * nb3).reshape(k, nb3)
    cyx = np.bincount((byc * n_bins + bx_rows + offs * nb2).ravel(),
                      minlength=k * nb2).reshape(k, nb2)
    s3 = _seqsum(flog[c3], axis=1)
    syx = _seqsum(flog[cyx], axis=1)
    te = (s3 + s_y - syx - s_yy) / float(n)
    return np.maximum(te, 0.0)


def _te_pair(yn, yc, xc, key, n_bins, n_perm, min_obs, flog):
    n = len(yn)
    res = [math.nan] * 4
    if n <= min_obs or n < 2:
        return res, [n, FLAG_SHORT, 0]
    lo_y = min(yn.min(), yc.min())
    hi_y = max(yn.max(), yc.max())
    lo_x, hi_x = xc.min(), xc.max()
    if hi_y == lo_y or hi_x == lo_x:
        return res, [n, FLAG_DEGENERATE, 0]
    wy = hi_y - lo_y
    wx = hi_x - lo_x
    byn = _bin(yn, lo_y, wy, n_bins)
    byc = _bin(yc, lo_y, wy, n_bins)
    bx = _bin(xc, lo_x, wx, n_bins)
    s_y = float(_seqsum(flog[np.bincount(byc, minlength=n_bins)]))
    s_yy = float(_seqsum(flog[np.bincount(byn * n_bins + byc, minlength=n_bins ** 2)]))

    stat = float(_te_null(byn, byc, bx[None, :], n_bins, flog, s_y, s_yy)[0])
    null = np.empty(n_perm)
    step = max(1, _BLOCK // max(n, 1))
    for q0 in range(0, n_perm, step):
        k = min(step, n_perm - q0)
        perms = rng.permutations(key, n, k, first=q0)
        null[q0:q0 + k] = _te_null(byn, byc, bx[perms], n_bins, flog, s_y, s_yy)

    draws = rng.draws_used(n, n_perm)
    mean = float(_seqsum(null)) / float(n_perm)
    res[0] = stat
    res[1] = mean
    if null.min() == null.max():
        res[2] = 0.0
        return res, [n, FLAG_FLAT_NULL, draws]
    d = null - mean
    res[2] = math.sqrt(float(_seqsum(d * d)) / float(n_perm))
    res[3] = (stat - mean) / res[2]
    return res, [n, FLAG_OK, draws]


def te_sweep(data, mask, consecutive, pairs, keys, n_bins, n_perm, min_obs, flog, n_threads=1):
    data = np.asarray(data, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    consecutive = np.asarray(consecutive, dtype=bool)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    flog = np.asarray(flog, dtype=np.float64)
    if n_bins < 2 or n_bins > 8:
        raise ValueError("n_bins must lie in [2, 8]")
    if len(flog) < data.shape[1] + 1:
        raise ValueError("log table too short for the panel length")
    res = np.full((len(pairs), 4), np.nan)
    ires = np.zeros((len(pairs), 3), dtype=np.int64)
    for p, (x, y) in enumerate(pairs):
        ok = consecutive & mask[y, :-1] & mask[y, 1:] & mask[x, :-1]
        t = np.flatnonzero(ok)
        res[p], ires[p] = _te_pair(data[y, t + 1], data[y, t], data[x, t], keys[p],
                                   n_bins, n_perm, min_obs, flog)
    return res, ires


def _brandes_source(s, n, adj, radj, eps):
    dist = [math.inf] * n
    sigma = [0.0] * n
    delta = [0.0] * n
    seen = [False] * n
    order = []
    dist[s] = 0.0
    sigma[s] = 1.0
    heap = [(0.0, s)]
    while heap:
        d, v = heapq.heappop(heap)
        if seen[v]:
            continue
        seen[v] = True
        order.append(v)
        for w, wt in adj[v]:
            if seen[w]:
                continue
            nd = d + wt
            if nd < dist[w]:
                dist[w] = nd
                sigma[w] = sigma[v]
                heapq.heappush(heap, (nd, w))
            elif nd == dist[w]:
                sigma[w] += sigma[v]

    closeness = 0.0
    for v in range(n):
        if v != s and seen[v]:
            closeness += 1.0 / max(dist[v], eps)

    row = [0.0] * n
    for w in reversed(order):
        for v, wt in radj[w]:
            if v != w and seen[v] and dist[v] + wt == dist[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
        if w != s:
            row[w] = delta[w]
    return row, closeness


def _csr_lists(indptr, indices, weights):
    return [list(zip(indices[indptr[v]:indptr[v + 1]].tolist(),
                     weights[indptr[v]:indptr[v + 1]].tolist()))
            for v in range(len(indptr) - 1)]


def brandes(indptr, indices, weights, rindptr, rindices, rweights, eps=1e-12, n_threads=1):
    n = len(indptr) - 1
    adj = _csr_lists(np.asarray(indptr), np.asarray(indices), np.asarray(weights, dtype=float))
    radj = _csr_lists(np.asarray(rindptr), np.asarray(rindices), np.asarray(rweights, dtype=float))
    bc = [0.0] * max(n, 0)
    cl = np.zeros(max(n, 0))
    for s in range(n):
        row, cl[s] = _brandes_source(s, n, adj, radj, eps)
        for v in range(n):
            bc[v] += row[v]
    return np.array(bc, dtype=float), cl
