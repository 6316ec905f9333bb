"""Pure-Python fixed-point kernels (bitset implementation).

Reference semantics for the compiled kernels: synchronous rounds, so the
per-state ranks and iteration counts are identical across backends. State
sets are Python ints used as bitsets; the word-level AND/OR work happens
in C inside the int implementation, which keeps this fallback usable on
mid-sized arenas.
"""

from __future__ import annotations

import numpy as np


def _succ_masks(indptr, succ) -> list[int]:
    n = len(indptr) - 1
    masks = [0] * n
    for s in range(n):
        m = 0
        for j in range(indptr[s], indptr[s + 1]):
            m |= 1 << int(succ[j])
        masks[s] = m
    return masks


def attractor_ranks(exists, indptr, succ, init):
    """Least fixed point of Z <- Z | pre_exists(Z) | pre_forall(Z).

    `exists[s]` selects the one-step quantifier for state s: existential
    (some successor already in Z) or universal (every successor in Z,
    vacuously true for states without successors). Returns an int32 array
    of ranks: the round at which each state entered, 0 for the seed set,
    -1 for states outside the fixed point.
    """
    n = len(exists)
    masks = _succ_masks(indptr, succ)
    rank = np.full(n, -1, dtype=np.int32)
    z = 0
    remaining = []
    for s in range(n):
        if init[s]:
            rank[s] = 0
            z |= 1 << s
        else:
            remaining.append(s)
    full = (1 << n) - 1
    k = 0
    while remaining:
        k += 1
        not_z = full ^ z
        added = []
        for s in remaining:
            m = masks[s]
            if exists[s]:
                if m & z:
                    added.append(s)
            elif m & not_z == 0:
                added.append(s)
        if not added:
            break
        for s in added:
            rank[s] = k
            z |= 1 << s
        remaining = [s for s in remaining if rank[s] < 0]
    return rank


def safe_region(exists, indptr, succ, universe):
    """Greatest subset Y of `universe` closed under the one-step rule.

    A state stays when its quantifier holds over successors *within Y*:
    existential states need some successor in Y, universal states need all
    of them there. Returns (uint8 membership mask, rounds), where rounds
    counts every sweep including the final one that found nothing to
    remove.
    """
    n = len(exists)
    masks = _succ_masks(indptr, succ)
    full = (1 << n) - 1
    y = 0
    alive = []
    for s in range(n):
        if universe[s]:
            y |= 1 << s
            alive.append(s)
    rounds = 0
    while True:
        rounds += 1
        not_y = full ^ y
        removed = 0
        kept = []
        for s in alive:
            m = masks[s]
            if exists[s]:
                ok = bool(m & y)
            else:
                ok = m & not_y == 0
            if ok:
                kept.append(s)
            else:
                removed |= 1 << s
        if not removed:
            break
        y ^= removed
        alive = kept
    out = np.zeros(n, dtype=np.uint8)
    for s in alive:
        out[s] = 1
    return out, rounds
