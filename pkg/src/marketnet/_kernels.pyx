# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.

Permutation sweeps for Kendall tau and histogram transfer entropy over many
pairs of panel rows, and weighted Brandes centralities. ``_fallback`` holds a
numpy twin of every function here with the same signature; the sweeps agree
bit for bit (integer Kendall scores, shared log table, fixed summation order).
"""

import numpy as np

from cython.parallel cimport parallel, prange
from libc.math cimport INFINITY, NAN, sqrt
from libc.stdint cimport int16_t, int32_t, int64_t, uint8_t, uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset

cdef extern from *:
    """
    #include <stdint.h>
    #include <string.h>

    static inline uint64_t mn_mix64(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static inline uint64_t mn_draw(uint64_t key, uint64_t counter) {
        return mn_mix64(key + (counter + 1ULL) * 0x9E3779B97F4A7C15ULL);
    }

    static inline int64_t mn_bounded(uint64_t u, uint64_t m) {
        return (int64_t)(((u >> 32) * m) >> 32);
    }

    /* swap targets of one Fisher-Yates pass: j[i] for i = n-1 .. 1, from
       counters c0 .. c0+n-2; independent draws, so this loop vectorises */
    static void mn_fy_targets(uint64_t key, uint64_t c0, int64_t n, int32_t *j) {
        int64_t s;
        for (s = 0; s < n - 1; ++s) {
            uint64_t i = (uint64_t)(n - 1 - s);
            j[s] = (int32_t)mn_bounded(mn_draw(key, c0 + (uint64_t)s), i + 1ULL);
        }
    }

    static void mn_fy_apply(int32_t *a, const int32_t *j, int64_t n) {
        int64_t s;
        int32_t held;
        for (s = 0; s < n - 1; ++s) {
            int64_t i = n - 1 - s;
            held = a[i]; a[i] = a[j[s]]; a[j[s]] = held;
        }
    }

    /* stable ascending argsort, bottom-up merge */
    static void mn_argsort(const double *v, int64_t *idx, int64_t *tmp, int64_t n) {
        int64_t i, w, lo, mid, hi, a, b, k;
        int64_t *src = idx, *dst = tmp, *t;
        for (i = 0; i < n; ++i) idx[i] = i;
        for (w = 1; w < n; w *= 2) {
            for (lo = 0; lo < n; lo += 2 * w) {
                mid = lo + w < n ? lo + w : n;
                hi = lo + 2 * w < n ? lo + 2 * w : n;
                a = lo; b = mid; k = lo;
                while (a < mid && b < hi) dst[k++] = (v[src[b]] < v[src[a]]) ? src[b++] : src[a++];
                while (a < mid) dst[k++] = src[a++];
                while (b < hi) dst[k++] = src[b++];
            }
            t = src; src = dst; dst = t;
        }
        if (src != idx) memcpy(idx, src, (size_t)n * sizeof(int64_t));
    }

    /* sorts a ascending in place, returns the count of strict inversions */
    static int64_t mn_merge_inversions(int32_t *a, int32_t *tmp, int64_t n) {
        int64_t w, lo, mid, hi, i, j, k, inv = 0;
        int32_t *src = a, *dst = tmp, *t;
        for (w = 1; w < n; w *= 2) {
            for (lo = 0; lo < n; lo += 2 * w) {
                mid = lo + w < n ? lo + w : n;
                hi = lo + 2 * w < n ? lo + 2 * w : n;
                i = lo; j = mid; k = lo;
                while (i < mid && j < hi) {
                    if (src[j] < src[i]) { dst[k++] = src[j++]; inv += mid - i; }
                    else dst[k++] = src[i++];
                }
                while (i < mid) dst[k++] = src[i++];
                while (j < hi) dst[k++] = src[j++];
            }
            t = src; src = dst; dst = t;
        }
        if (src != a) memcpy(a, src, (size_t)n * sizeof(int32_t));
        return inv;
    }

    static int64_t mn_sorted_ties(const int32_t *a, int64_t n) {
        int64_t k, run = 1, ties = 0;
        for (k = 1; k < n; ++k) {
            if (a[k] == a[k - 1]) run++;
            else { ties += run * (run - 1) / 2; run = 1; }
        }
        return ties + run * (run - 1) / 2;
    }

    /* sum over a < b, b past a's x-tie group, of sign(z[b] - z[a]);
       int16 lanes, valid while n < 32768 */
    static int64_t mn_score_direct16(const int16_t *z, const int32_t *gend, int64_t n) {
        int64_t a, b, s = 0;
        for (a = 0; a < n; ++a) {
            const int16_t za = z[a];
            int16_t acc = 0;
            for (b = gend[a]; b < n; ++b) acc += (int16_t)((z[b] > za) - (z[b] < za));
            s += acc;
        }
        return s;
    }

    /* same score in O(n log n): whole-sequence score minus within-group scores */
    static int64_t mn_score_merge(const int32_t *z, const int32_t *gend, int64_t n,
                                  int64_t ties_y, int32_t *work, int32_t *tmp) {
        int64_t a, e, m, inv, total;
        memcpy(work, z, (size_t)n * sizeof(int32_t));
        inv = mn_merge_inversions(work, tmp, n);
        total = n * (n - 1) / 2 - ties_y - 2 * inv;
        a = 0;
        while (a < n) {
            e = gend[a];
            m = e - a;
            if (m >= 2) {
                memcpy(work, z + a, (size_t)m * sizeof(int32_t));
                inv = mn_merge_inversions(work, tmp, m);
                total -= m * (m - 1) / 2 - mn_sorted_ties(work, m) - 2 * inv;
            }
            a = e;
        }
        return total;
    }

    static inline double mn_int128_to_double(int64_t k, int64_t s1, int64_t s2) {
        __int128 v = (__int128)k * (__int128)s2 - (__int128)s1 * (__int128)s1;
        return (double)v;
    }

    static inline int mn_hless(double d1, int64_t v1, double d2, int64_t v2) {
        return d1 < d2 || (d1 == d2 && v1 < v2);
    }

    static void mn_hpush(double *hd, int64_t *hv, int64_t *size, double d, int64_t v) {
        int64_t i = (*size)++, p;
        while (i > 0) {
            p = (i - 1) / 2;
            if (!mn_hless(d, v, hd[p], hv[p])) break;
            hd[i] = hd[p]; hv[i] = hv[p]; i = p;
        }
        hd[i] = d; hv[i] = v;
    }

    static void mn_hpop(double *hd, int64_t *hv, int64_t *size, double *d, int64_t *v) {
        int64_t n = --(*size), i = 0, c;
        double ld;
        int64_t lv;
        *d = hd[0]; *v = hv[0];
        if (n == 0) return;
        ld = hd[n]; lv = hv[n];
        for (;;) {
            c = 2 * i + 1;
            if (c >= n) break;
            if (c + 1 < n && mn_hless(hd[c + 1], hv[c + 1], hd[c], hv[c])) c++;
            if (!mn_hless(hd[c], hv[c], ld, lv)) break;
            hd[i] = hd[c]; hv[i] = hv[c]; i = c;
        }
        hd[i] = ld; hv[i] = lv;
    }
    """
    uint64_t mn_draw(uint64_t key, uint64_t counter) nogil
    int64_t mn_bounded(uint64_t u, uint64_t m) nogil
    void mn_fy_targets(uint64_t key, uint64_t c0, int64_t n, int32_t *j) nogil
    void mn_fy_apply(int32_t *a, const int32_t *j, int64_t n) nogil
    void mn_argsort(const double *v, int64_t *idx, int64_t *tmp, int64_t n) nogil
    int64_t mn_merge_inversions(int32_t *a, int32_t *tmp, int64_t n) nogil
    int64_t mn_sorted_ties(const int32_t *a, int64_t n) nogil
    int64_t mn_score_direct16(const int16_t *z, const int32_t *gend, int64_t n) nogil
    int64_t mn_score_merge(const int32_t *z, const int32_t *gend, int64_t n,
                           int64_t ties_y, int32_t *work, int32_t *tmp) nogil
    double mn_int128_to_double(int64_t k, int64_t s1, int64_t s2) nogil
    void mn_hpush(double *hd, int64_t *hv, int64_t *size, double d, int64_t v) nogil
    void mn_hpop(double *hd, int64_t *hv, int64_t *size, double *d, int64_t *v) nogil

BACKEND = "compiled"

# per-pair outcome flags, mirrored in _fallback
cdef enum:
    FLAG_OK = 0
    FLAG_SHORT = 1
    FLAG_DEGENERATE = 2
    FLAG_FLAT_NULL = 3

# above this overlap the O(n^2) vectorised count loses to merge counting
cdef enum:
    DIRECT_MAX = 384


def merge_inversions(values):
    """Strict inversion count of an int sequence (sorts a private copy)."""
    cdef int32_t[::1] a = np.ascontiguousarray(values, dtype=np.int32).copy()
    cdef int32_t[::1] tmp = np.empty(max(a.shape[0], 1), dtype=np.int32)
    cdef int64_t inv
    with nogil:
        inv = mn_merge_inversions(&a[0] if a.shape[0] else NULL, &tmp[0], a.shape[0])
    return int(inv)


cdef void _kendall_pair(const double[:, ::1] data, const uint8_t[:, ::1] mask,
                        int64_t i, int64_t j, uint64_t key, int64_t n_perm, int64_t min_obs,
                        double *xv, double *yv, int64_t *ix, int64_t *itmp,
                        int32_t *yr, int32_t *xord, int32_t *gend, int32_t *z,
                        int32_t *yp, int32_t *work, int32_t *tmp32,
                        double *res, int64_t *ires) noexcept nogil:
    # res: stat, null_mean, null_std, z ; ires: n_obs, flag, draws
    cdef int64_t T = data.shape[1]
    cdef int64_t n = 0, t, k, q, r, run, start, m
    cdef int64_t ties_x = 0, ties_y = 0, P, nx, ny, s, s0, s1 = 0, s2 = 0, c = 0
    cdef double denom, vnum
    cdef bint direct
    cdef int16_t *z16

    res[0] = NAN; res[1] = NAN; res[2] = NAN; res[3] = NAN
    for t in range(T):
        if mask[i, t] and mask[j, t]:
            xv[n] = data[i, t]
            yv[n] = data[j, t]
            n += 1
    ires[0] = n
    ires[2] = 0
    if n <= min_obs or n < 2:
        ires[1] = FLAG_SHORT
        return

    mn_argsort(yv, ix, itmp, n)
    r = 0
    run = 1
    yr[ix[0]] = 0
    for k in range(1, n):
        if yv[ix[k]] != yv[ix[k - 1]]:
            r += 1
            ties_y += run * (run - 1) // 2
            run = 1
        else:
            run += 1
        yr[ix[k]] = <int32_t>r
    ties_y += run * (run - 1) // 2

    mn_argsort(xv, ix, itmp, n)
    start = 0
    for k in range(1, n + 1):
        if k == n or xv[ix[k]] != xv[ix[k - 1]]:
            m = k - start
            ties_x += m * (m - 1) // 2
            for q in range(start, k):
                gend[q] = <int32_t>k
            start = k
    for k in range(n):
        xord[k] = <int32_t>ix[k]

    P = n * (n - 1) // 2
    nx = P - ties_x
    ny = P - ties_y
    if nx == 0 or ny == 0:
        ires[1] = FLAG_DEGENERATE
        return

    direct = n <= DIRECT_MAX
    z16 = <int16_t *>work
    for k in range(n):
        z[k] = yr[xord[k]]
        z16[k] = <int16_t>z[k]
    if direct:
        s0 = mn_score_direct16(z16, gend, n)
    else:
        s0 = mn_score_merge(z, gend, n, ties_y, work, tmp32)

    for q in range(n_perm):
        memcpy(yp, yr, n * sizeof(int32_t))
        mn_fy_targets(key, c, n, tmp32)
        mn_fy_apply(yp, tmp32, n)
        c += n - 1
        if direct:
            for k in range(n):
                z16[k] = <int16_t>yp[xord[k]]
            s = mn_score_direct16(z16, gend, n)
        else:
            for k in range(n):
                z[k] = yp[xord[k]]
            s = mn_score_merge(z, gend, n, ties_y, work, tmp32)
        s1 += s
        s2 += s * s
    ires[2] = c

    denom = sqrt(<double>nx * <double>ny)
    res[0] = <double>s0 / denom
    res[1] = (<double>s1 / <double>n_perm) / denom
    vnum = mn_int128_to_double(n_perm, s1, s2)
    if vnum <= 0:
        res[2] = 0.0
        ires[1] = FLAG_FLAT_NULL
        return
    res[2] = sqrt(vnum) / <double>n_perm / denom
    res[3] = <double>(n_perm * s0 - s1) / sqrt(vnum)
    ires[1] = FLAG_OK


def kendall_sweep(const double[:, ::1] data, const uint8_t[:, ::1] mask,
                  const int64_t[:, ::1] pairs, const uint64_t[::1] keys,
                  int64_t n_perm, int64_t min_obs, int n_threads=1):
    """Permutation-validated Kendall tau-b for every row pair in ``pairs``.

    Returns ``(res, ires)``: ``res[p] = (stat, null_mean, null_std, z)`` and
    ``ires[p] = (n_obs, flag, draws)``.
    """
    cdef int64_t npairs = pairs.shape[0], T = data.shape[1], p
    res_arr = np.full((npairs, 4), np.nan)
    ires_arr = np.zeros((npairs, 3), dtype=np.int64)
    cdef double[:, ::1] res = res_arr
    cdef int64_t[:, ::1] ires = ires_arr
    cdef double *xv
    cdef double *yv
    cdef int64_t *ix
    cdef int64_t *itmp
    cdef int32_t *ibuf
    cdef int64_t L = T if T > 0 else 1
    if npairs == 0:
        return res_arr, ires_arr
    with nogil, parallel(num_threads=n_threads):
        xv = <double *>malloc(L * sizeof(double))
        yv = <double *>malloc(L * sizeof(double))
        ix = <int64_t *>malloc(L * sizeof(int64_t))
        itmp = <int64_t *>malloc(L * sizeof(int64_t))
        ibuf = <int32_t *>malloc(8 * L * sizeof(int32_t))
        for p in prange(npairs, schedule="dynamic", chunksize=16):
            _kendall_pair(data, mask, pairs[p, 0], pairs[p, 1], keys[p], n_perm, min_obs,
                          xv, yv, ix, itmp,
                          ibuf, ibuf + L, ibuf + 2 * L, ibuf + 3 * L,
                          ibuf + 4 * L, ibuf + 5 * L, ibuf + 6 * L,
                          &res[p, 0], &ires[p, 0])
        free(xv)
        free(yv)
        free(ix)
        free(itmp)
        free(ibuf)
    return res_arr, ires_arr


cdef double _te_from_counts(const int32_t *byn, const int32_t *byc, const int32_t *bx,
                            int64_t n, int64_t nb, int32_t *c3, int32_t *cyx,
                            const double *flog, double s_y, double s_yy) noexcept nogil:
    cdef int64_t k, cell
    cdef double s3 = 0.0, syx = 0.0, te
    memset(c3, 0, nb * nb * nb * sizeof(int32_t))
    memset(cyx, 0, nb * nb * sizeof(int32_t))
    for k in range(n):
        c3[(byn[k] * nb + byc[k]) * nb + bx[k]] += 1
        cyx[byc[k] * nb + bx[k]] += 1
    for cell in range(nb * nb * nb):
        s3 += flog[c3[cell]]
    for cell in range(nb * nb):
        syx += flog[cyx[cell]]
    te = (s3 + s_y - syx - s_yy) / <double>n
    if te < 0.0:
        te = 0.0
    return te


cdef void _te_pair(const double[:, ::1] data, const uint8_t[:, ::1] mask,
                   const uint8_t[::1] consecutive, int64_t x, int64_t y, uint64_t key,
                   int64_t nb, int64_t n_perm, int64_t min_obs, const double *flog,
                   double *yn, double *yc, double *xc,
                   int32_t *byn, int32_t *byc, int32_t *bx, int32_t *xp, int32_t *jbuf,
                   int32_t *c3, int32_t *cyx, double *null,
                   double *res, int64_t *ires) noexcept nogil:
    cdef int64_t T = data.shape[1]
    cdef int64_t n = 0, t, k, q, cell, c = 0
    cdef double lo_y, hi_y, lo_x, hi_x, wy, wx, s_y = 0.0, s_yy = 0.0
    cdef double stat, mean, acc, d, nmin, nmax
    cdef int32_t b
    cdef int32_t cy[8]
    cdef int32_t cyy[64]

    res[0] = NAN; res[1] = NAN; res[2] = NAN; res[3] = NAN
    for t in range(T - 1):
        if consecutive[t] and mask[y, t] and mask[y, t + 1] and mask[x, t]:
            yn[n] = data[y, t + 1]
            yc[n] = data[y, t]
            xc[n] = data[x, t]
            n += 1
    ires[0] = n
    ires[2] = 0
    if n <= min_obs or n < 2:
        ires[1] = FLAG_SHORT
        return

    lo_y = yn[0]; hi_y = yn[0]; lo_x = xc[0]; hi_x = xc[0]
    for k in range(n):
        if yn[k] < lo_y: lo_y = yn[k]
        if yn[k] > hi_y: hi_y = yn[k]
        if yc[k] < lo_y: lo_y = yc[k]
        if yc[k] > hi_y: hi_y = yc[k]
        if xc[k] < lo_x: lo_x = xc[k]
        if xc[k] > hi_x: hi_x = xc[k]
    if hi_y == lo_y or hi_x == lo_x:
        ires[1] = FLAG_DEGENERATE
        return
    wy = hi_y - lo_y
    wx = hi_x - lo_x
    for k in range(n):
        b = <int32_t>((yn[k] - lo_y) / wy * nb)
        byn[k] = b if b < nb else <int32_t>(nb - 1)
        b = <int32_t>((yc[k] - lo_y) / wy * nb)
        byc[k] = b if b < nb else <int32_t>(nb - 1)
        b = <int32_t>((xc[k] - lo_x) / wx * nb)
        bx[k] = b if b < nb else <int32_t>(nb - 1)

    memset(cy, 0, sizeof(cy))
    memset(cyy, 0, sizeof(cyy))
    for k in range(n):
        cy[byc[k]] += 1
        cyy[byn[k] * nb + byc[k]] += 1
    for cell in range(nb):
        s_y += flog[cy[cell]]
    for cell in range(nb * nb):
        s_yy += flog[cyy[cell]]

    stat = _te_from_counts(byn, byc, bx, n, nb, c3, cyx, flog, s_y, s_yy)
    for q in range(n_perm):
        memcpy(xp, bx, n * sizeof(int32_t))
        mn_fy_targets(key, c, n, jbuf)
        mn_fy_apply(xp, jbuf, n)
        c += n - 1
        null[q] = _te_from_counts(byn, byc, xp, n, nb, c3, cyx, flog, s_y, s_yy)
    ires[2] = c

    acc = 0.0
    nmin = null[0]
    nmax = null[0]
    for q in range(n_perm):
        acc += null[q]
        if null[q] < nmin: nmin = null[q]
        if null[q] > nmax: nmax = null[q]
    mean = acc / <double>n_perm
    res[0] = stat
    res[1] = mean
    if nmin == nmax:
        res[2] = 0.0
        ires[1] = FLAG_FLAT_NULL
        return
    acc = 0.0
    for q in range(n_perm):
        d = null[q] - mean
        acc += d * d
    res[2] = sqrt(acc / <double>n_perm)
    res[3] = (stat - mean) / res[2]
    ires[1] = FLAG_OK


def te_sweep(const double[:, ::1] data, const uint8_t[:, ::1] mask,
             const uint8_t[::1] consecutive, const int64_t[:, ::1] pairs,
             const uint64_t[::1] keys, int64_t n_bins, int64_t n_perm, int64_t min_obs,
             const double[::1] flog, int n_threads=1):
    """Permutation-validated lag-1 transfer entropy ``pairs[p,0] -> pairs[p,1]``.

    ``flog[c] = c*log2(c)``; it must cover every count up to the panel length.
    Output layout as in :func:`kendall_sweep`.
    """
    cdef int64_t npairs = pairs.shape[0], T = data.shape[1], p
    if n_bins < 2 or n_bins > 8:
        raise ValueError("n_bins must lie in [2, 8]")
    if flog.shape[0] < T + 1:
        raise ValueError("log table too short for the panel length")
    res_arr = np.full((npairs, 4), np.nan)
    ires_arr = np.zeros((npairs, 3), dtype=np.int64)
    cdef double[:, ::1] res = res_arr
    cdef int64_t[:, ::1] ires = ires_arr
    cdef int64_t L = T if T > 0 else 1
    cdef int64_t K = n_perm if n_perm > 0 else 1
    cdef double *dbuf
    cdef int32_t *ibuf
    cdef int32_t *cbuf
    if npairs == 0:
        return res_arr, ires_arr
    with nogil, parallel(num_threads=n_threads):
        dbuf = <double *>malloc((3 * L + K) * sizeof(double))
        ibuf = <int32_t *>malloc(5 * L * sizeof(int32_t))
        cbuf = <int32_t *>malloc((n_bins * n_bins * n_bins + n_bins * n_bins) * sizeof(int32_t))
        for p in prange(npairs, schedule="dynamic", chunksize=16):
            _te_pair(data, mask, consecutive, pairs[p, 0], pairs[p, 1], keys[p],
                     n_bins, n_perm, min_obs, &flog[0],
                     dbuf, dbuf + L, dbuf + 2 * L,
                     ibuf, ibuf + L, ibuf + 2 * L, ibuf + 3 * L, ibuf + 4 * L,
                     cbuf, cbuf + n_bins * n_bins * n_bins, dbuf + 3 * L,
                     &res[p, 0], &ires[p, 0])
        free(dbuf)
        free(ibuf)
        free(cbuf)
    return res_arr, ires_arr


cdef void _brandes_source(int64_t s, int64_t n,
                          const int64_t[::1] indptr, const int64_t[::1] indices,
                          const double[::1] weights,
                          const int64_t[::1] rindptr, const int64_t[::1] rindices,
                          const double[::1] rweights, double eps,
                          double *dist, double *sigma, double *delta, uint8_t *seen,
                          int64_t *order, double *hd, int64_t *hv,
                          double *row, double *closeness) noexcept nogil:
    cdef int64_t v, w, e, k, cnt = 0, hsize = 0
    cdef double d, nd, acc
    for v in range(n):
        dist[v] = INFINITY
        sigma[v] = 0.0
        delta[v] = 0.0
        seen[v] = 0
        row[v] = 0.0
    dist[s] = 0.0
    sigma[s] = 1.0
    mn_hpush(hd, hv, &hsize, 0.0, s)
    while hsize > 0:
        mn_hpop(hd, hv, &hsize, &d, &v)
        if seen[v]:
            continue
        seen[v] = 1
        order[cnt] = v
        cnt += 1
        for e in range(indptr[v], indptr[v + 1]):
            w = indices[e]
            if seen[w]:
                continue
            nd = d + weights[e]
            if nd < dist[w]:
                dist[w] = nd
                sigma[w] = sigma[v]
                mn_hpush(hd, hv, &hsize, nd, w)
            elif nd == dist[w]:
                sigma[w] += sigma[v]

    acc = 0.0
    for v in range(n):
        if v != s and seen[v]:
            d = dist[v]
            if d < eps:
                d = eps
            acc += 1.0 / d
    closeness[0] = acc

    for k in range(cnt - 1, -1, -1):
        w = order[k]
        for e in range(rindptr[w], rindptr[w + 1]):
            v = rindices[e]
            if v != w and seen[v] and dist[v] + rweights[e] == dist[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
        if w != s:
            row[w] = delta[w]


def brandes(const int64_t[::1] indptr, const int64_t[::1] indices, const double[::1] weights,
            const int64_t[::1] rindptr, const int64_t[::1] rindices, const double[::1] rweights,
            double eps=1e-12, int n_threads=1):
    """Raw ordered-pair betweenness and harmonic closeness of a CSR digraph.

    ``r*`` arrays are the transposed graph (pass the same arrays for a
    symmetric graph). Returns ``(betweenness, closeness)``.
    """
    cdef int64_t n = indptr.shape[0] - 1, nedges = indices.shape[0]
    cdef int64_t chunk = 64, c0, c1, s, r, v
    bc_arr = np.zeros(max(n, 0))
    cl_arr = np.zeros(max(n, 0))
    if n <= 0:
        return bc_arr, cl_arr
    rows_arr = np.zeros((chunk, n))
    cdef double[::1] bc = bc_arr
    cdef double[::1] cl = cl_arr
    cdef double[:, ::1] rows = rows_arr
    cdef double *dbuf
    cdef int64_t *ibuf
    cdef uint8_t *seen
    cdef int64_t hcap = nedges + n + 1
    c0 = 0
    while c0 < n:
        c1 = c0 + chunk if c0 + chunk < n else n
        with nogil, parallel(num_threads=n_threads):
            dbuf = <double *>malloc((3 * n + hcap) * sizeof(double))
            ibuf = <int64_t *>malloc((n + hcap) * sizeof(int64_t))
            seen = <uint8_t *>malloc(n * sizeof(uint8_t))
            for s in prange(c0, c1, schedule="dynamic"):
                _brandes_source(s, n, indptr, indices, weights, rindptr, rindices, rweights, eps,
                                dbuf, dbuf + n, dbuf + 2 * n, seen, ibuf,
                                dbuf + 3 * n, ibuf + n, &rows[s - c0, 0], &cl[s])
            free(dbuf)
            free(ibuf)
            free(seen)
        for r in range(c1 - c0):
            for v in range(n):
                bc[v] += rows[r, v]
        c0 = c1
    return bc_arr, cl_arr
