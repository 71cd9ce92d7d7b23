"""Hot integer kernels: residue scans and hard-core configuration masks.

Every kernel has a numba-compiled loop version and a vectorised numpy
version.  The loop versions are used when numba imports and the
environment variable ``HCPADIC_DISABLE_NUMBA`` is unset (or "0"); set it
to "1" to force the numpy path.  Both paths return identical arrays.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

DISABLE_ENV = "HCPADIC_DISABLE_NUMBA"

# acc * r + c must stay below 2**63 in the int64 Horner loop.
MAX_MODULUS = 3_000_000_000
# configuration masks are int64 bit sets
MAX_MASK_BITS = 62

_CHUNK = 1 << 20


def _env_disabled() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = numba is not None and not _env_disabled()


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _njit(func):
    if numba is None:
        return func
    return numba.njit(cache=True, nogil=True)(func)


# -- polynomial residue scan -------------------------------------------------


# Horner is one long dependency chain per residue; running a block of
# residues side by side keeps the integer divider busy.
_BLOCK = 64


@_njit
def _root_scan_loop(coeffs, modulus, start, step, count):
    out = np.empty(count, dtype=np.int64)
    r = np.empty(_BLOCK, dtype=np.int64)
    acc = np.empty(_BLOCK, dtype=np.int64)
    n = 0
    deg = coeffs.shape[0] - 1
    for lo in range(0, count, _BLOCK):
        w = min(_BLOCK, count - lo)
        for b in range(w):
            r[b] = (start + (lo + b) * step) % modulus
            acc[b] = 0
        for j in range(deg, -1, -1):
            cj = coeffs[j]
            for b in range(w):
                acc[b] = (acc[b] * r[b] + cj) % modulus
        for b in range(w):
            if acc[b] == 0:
                out[n] = r[b]
                n += 1
    return out[:n]


def _root_scan_numpy(coeffs, modulus, start, step, count):
    found = []
    for lo in range(0, count, _CHUNK):
        idx = np.arange(lo, min(count, lo + _CHUNK), dtype=np.int64)
        r = (start + idx * step) % modulus
        acc = np.zeros_like(r)
        for c in coeffs[::-1]:
            acc = (acc * r + c) % modulus
        found.append(r[acc == 0])
    return np.concatenate(found) if found else np.empty(0, dtype=np.int64)


def _root_scan_python(coeffs, modulus, start, step, count):
    out = []
    for i in range(count):
        r = (start + i * step) % modulus
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * r + c) % modulus
        if acc == 0:
            out.append(r)
    return out


def root_scan(coeffs, modulus: int, start: int = 0, step: int = 1,
              count: int | None = None) -> list[int]:
    """Residues r = start + i*step (i < count) with F(r) ≡ 0 mod `modulus`.

    `coeffs` are integer coefficients, constant term first.
    """
    if count is None:
        count = modulus
    coeffs = [int(c) % modulus for c in coeffs]
    if modulus > MAX_MODULUS:
        return sorted(_root_scan_python(coeffs, modulus, start, step, count))
    arr = np.asarray(coeffs, dtype=np.int64)
    fn = _root_scan_loop if USE_NUMBA else _root_scan_numpy
    hits = fn(arr, np.int64(modulus), np.int64(start % modulus), np.int64(step), count)
    return sorted(int(x) for x in hits)


# -- admissible configuration masks ------------------------------------------


@_njit
def _admissible_masks_loop(parent, total):
    out = np.zeros(total, dtype=np.int64)
    size = 1
    for v in range(parent.shape[0]):
        par = parent[v]
        bit = np.int64(1) << v
        added = 0
        for i in range(size):
            m = out[i]
            if par < 0 or (m >> par) & 1 == 0:
                out[size + added] = m | bit
                added += 1
        size += added
    res = out[:size].copy()
    res.sort()
    return res


def _admissible_masks_numpy(parent, total):
    masks = np.zeros(1, dtype=np.int64)
    for v, par in enumerate(parent):
        bit = np.int64(1) << np.int64(v)
        if par < 0:
            ext = masks
        else:
            ext = masks[((masks >> np.int64(par)) & 1) == 0]
        masks = np.concatenate([masks, ext | bit])
    masks.sort()
    return masks


def admissible_masks(parent: np.ndarray, total: int) -> np.ndarray:
    """All hard-core admissible 0/1 assignments as sorted int64 bit masks.

    `parent[v]` is the parent of vertex v (-1 for the root) and parents
    precede children.  `total` is the exact number of admissible
    configurations, used to size the output buffer.
    """
    parent = np.asarray(parent, dtype=np.int64)
    if parent.shape[0] > MAX_MASK_BITS:
        raise ValueError(f"at most {MAX_MASK_BITS} vertices fit in a mask")
    fn = _admissible_masks_loop if USE_NUMBA else _admissible_masks_numpy
    return fn(parent, int(total))


# -- popcounts ---------------------------------------------------------------


@_njit
def _popcount_loop(masks, select):
    out = np.empty(masks.shape[0], dtype=np.int64)
    for i in range(masks.shape[0]):
        x = masks[i] & select
        c = 0
        while x:
            x &= x - 1
            c += 1
        out[i] = c
    return out


def _popcount_numpy(masks, select):
    return np.bitwise_count(masks & select).astype(np.int64)


def popcount(masks: np.ndarray, select: int = -1) -> np.ndarray:
    """Number of set bits of ``mask & select`` for each mask."""
    masks = np.asarray(masks, dtype=np.int64)
    fn = _popcount_loop if USE_NUMBA else _popcount_numpy
    return fn(masks, np.int64(select))


def warmup() -> None:
    """Trigger JIT compilation (or cache load) of every kernel."""
    root_scan([1, 1], 9, 1, 3, 3)
    admissible_masks(np.array([-1, 0, 0]), 5)
    popcount(np.array([3, 5], dtype=np.int64), 6)
