# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-point kernels.

Same synchronous-round semantics as the pure backend in pure.py (ranks
and round counts must match exactly); only the set representation
differs: flat uint8 membership arrays over a CSR successor structure.
"""

import numpy as np


def attractor_ranks(unsigned char[::1] exists, long long[::1] indptr,
                    int[::1] succ, unsigned char[::1] init):
    cdef Py_ssize_t n = exists.shape[0]
    rank_arr = np.full(n, -1, dtype=np.int32)
    inz_arr = np.zeros(n, dtype=np.uint8)
    pending_arr = np.empty(n, dtype=np.int64)
    remaining_arr = np.empty(n, dtype=np.int64)
    cdef int[::1] rank = rank_arr
    cdef unsigned char[::1] inz = inz_arr
    cdef long long[::1] pending = pending_arr
    cdef long long[::1] remaining = remaining_arr

    cdef Py_ssize_t n_remaining = 0, n_pending, i, j, s
    cdef int k = 0
    cdef bint ok
    for s in range(n):
        if init[s]:
            inz[s] = 1
            rank[s] = 0
        else:
            remaining[n_remaining] = s
            n_remaining += 1

    while n_remaining > 0:
        k += 1
        n_pending = 0
        for i in range(n_remaining):
            s = remaining[i]
            if exists[s]:
                ok = False
                for j in range(indptr[s], indptr[s + 1]):
                    if inz[succ[j]]:
                        ok = True
                        break
            else:
                ok = True
                for j in range(indptr[s], indptr[s + 1]):
                    if not inz[succ[j]]:
                        ok = False
                        break
            if ok:
                pending[n_pending] = s
                n_pending += 1
        if n_pending == 0:
            break
        for i in range(n_pending):
            s = pending[i]
            inz[s] = 1
            rank[s] = k
        n_pending = 0
        j = 0
        for i in range(n_remaining):
            s = remaining[i]
            if not inz[s]:
                remaining[j] = s
                j += 1
        n_remaining = j
    return rank_arr


def safe_region(unsigned char[::1] exists, long long[::1] indptr,
                int[::1] succ, unsigned char[::1] universe):
    cdef Py_ssize_t n = exists.shape[0]
    iny_arr = np.zeros(n, dtype=np.uint8)
    alive_arr = np.empty(n, dtype=np.int64)
    drop_arr = np.empty(n, dtype=np.int64)
    cdef unsigned char[::1] iny = iny_arr
    cdef long long[::1] alive = alive_arr
    cdef long long[::1] drop = drop_arr

    cdef Py_ssize_t n_alive = 0, n_drop, i, j, s
    cdef int rounds = 0
    cdef bint ok
    for s in range(n):
        if universe[s]:
            iny[s] = 1
            alive[n_alive] = s
            n_alive += 1

    while True:
        rounds += 1
        n_drop = 0
        for i in range(n_alive):
            s = alive[i]
            if exists[s]:
                ok = False
                for j in range(indptr[s], indptr[s + 1]):
                    if iny[succ[j]]:
                        ok = True
                        break
            else:
                ok = True
                for j in range(indptr[s], indptr[s + 1]):
                    if not iny[succ[j]]:
                        ok = False
                        break
            if not ok:
                drop[n_drop] = s
                n_drop += 1
        if n_drop == 0:
            break
        for i in range(n_drop):
            iny[drop[i]] = 0
        j = 0
        for i in range(n_alive):
            s = alive[i]
            if iny[s]:
                alive[j] = s
                j += 1
        n_alive = j
    return iny_arr, rounds
