"""Backend selection for the fixed-point kernels.

The compiled extension is preferred when importable; the pure-Python
bitset implementation is the fallback. Set HYPERGAMES_KERNELS=pure to
force the fallback (used by the parity tests and the benchmark).
"""

from __future__ import annotations

import importlib
import os
from typing import Iterable, Sequence

import numpy as np

from . import pure as _pure

_fast = None
if os.environ.get("HYPERGAMES_KERNELS", "auto").lower() != "pure":
    try:
        _fast = importlib.import_module("._fast", __name__)
    except ImportError:
        _fast = None

BACKEND = "cython" if _fast is not None else "pure"


def csr_from_lists(succ_lists: Sequence[Iterable[int]]):
    """Flatten per-state successor lists into (indptr, succ) arrays."""
    indptr = np.zeros(len(succ_lists) + 1, dtype=np.int64)
    flat: list[int] = []
    for s, succs in enumerate(succ_lists):
        flat.extend(succs)
        indptr[s + 1] = len(flat)
    return indptr, np.asarray(flat, dtype=np.int32)


def _as_mask(n: int, members: Iterable[int]) -> np.ndarray:
    mask = np.zeros(n, dtype=np.uint8)
    for s in members:
        mask[s] = 1
    return mask


def attractor_ranks(exists, indptr, succ, init, backend: str | None = None):
    impl = _pick(backend)
    return impl.attractor_ranks(
        np.ascontiguousarray(exists, dtype=np.uint8),
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(succ, dtype=np.int32),
        np.ascontiguousarray(init, dtype=np.uint8),
    )


def safe_region(exists, indptr, succ, universe, backend: str | None = None):
    impl = _pick(backend)
    return impl.safe_region(
        np.ascontiguousarray(exists, dtype=np.uint8),
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(succ, dtype=np.int32),
        np.ascontiguousarray(universe, dtype=np.uint8),
    )


def _pick(backend: str | None):
    if backend in (None, "auto"):
        return _fast if _fast is not None else _pure
    if backend == "pure":
        return _pure
    if backend == "cython":
        if _fast is None:
            raise RuntimeError("compiled kernel backend is not available")
        return _fast
    raise ValueError(f"unknown kernel backend {backend!r}")


def mask_from_ids(n: int, members: Iterable[int]) -> np.ndarray:
    return _as_mask(n, members)
