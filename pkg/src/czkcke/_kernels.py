"""Brute-force discrete-log kernels for small groups.

Two interchangeable implementations of the same exponent scan live here:
a numba-compiled scalar loop and a block-vectorised numpy version. The
numba path is used when numba imports cleanly and the environment variable
``CZKCKE_DISABLE_NUMBA`` is unset (or ``0``). Both only handle moduli below
2**31 so that products of two residues fit in an int64.
"""

import os

import numpy as np

SMALL_MODULUS_LIMIT = 1 << 31

_BLOCK = 1 << 16


def _numba_requested():
    flag = os.environ.get("CZKCKE_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


def dlog_scan_numpy(g, target, p, budget):
    """Return the least e < budget with g**e % p == target, or -1."""
    if budget <= 0:
        return -1
    block = min(budget, _BLOCK)
    table = np.empty(block, dtype=np.int64)
    table[0] = 1
    filled = 1
    while filled < block:
        step = min(filled, block - filled)
        table[filled:filled + step] = table[:step] * pow(g, filled, p) % p
        filled += step
    stride = pow(g, block, p)
    offset = 1
    for start in range(0, budget, block):
        n = min(block, budget - start)
        values = table[:n] * offset % p
        hits = np.flatnonzero(values == target)
        if hits.size:
            return start + int(hits[0])
        offset = offset * stride % p
    return -1


try:
    if not _numba_requested():
        raise ImportError("numba disabled by CZKCKE_DISABLE_NUMBA")
    from numba import njit

    @njit(cache=True, nogil=True)
    def _dlog_scan_jit(g, target, p, budget, block):
        # Same block layout as the numpy path: g^(start+i) = g^i * g^start, so the
        # multiplies inside a block are independent and pipeline well.
        table = np.empty(block, dtype=np.int64)
        acc = np.int64(1)
        for i in range(block):
            table[i] = acc
            acc = acc * g % p
        stride = acc
        offset = np.int64(1)
        start = 0
        while start < budget:
            n = min(block, budget - start)
            for i in range(n):
                if table[i] * offset % p == target:
                    return start + i
            offset = offset * stride % p
            start += block
        return -1

    def dlog_scan_numba(g, target, p, budget):
        if budget <= 0:
            return -1
        return int(_dlog_scan_jit(np.int64(g), np.int64(target), np.int64(p), np.int64(budget),
                                  min(budget, _BLOCK)))

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False
    dlog_scan_numba = None


if HAVE_NUMBA:
    BACKEND = "numba"
    dlog_scan = dlog_scan_numba
else:
    BACKEND = "numpy"
    dlog_scan = dlog_scan_numpy
