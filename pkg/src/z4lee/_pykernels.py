"""Numpy implementation of the codeword sweep kernel.

Used when the compiled extension is unavailable or when
``Z4LEE_BACKEND=python`` is set.  Output is bit-identical to the compiled
kernel.
"""

import numpy as np

HASH_PRIME = (1 << 31) - 1
LEE = np.array([0, 1, 2, 1], dtype=np.int64)

# rows of S times coefficients stay below 2^53, so float64 products are exact
_ROWS_PER_BATCH = 1 << 21


def sweep_block(tr_tab, log_tab, exp_tab, lmask, coords, hash_coef, a_lo, a_hi):
    """Lee weight and fingerprint of ``c(a + 2b)`` for ``a_lo <= a < a_hi``, all ``b``.

    Output index is ``(a - a_lo) * q + b``.  Fingerprints pack four linear
    hashes modulo ``2^31 - 1`` into two uint64 words.
    """
    q = lmask.shape[0]
    n = coords.shape[0]
    na = a_hi - a_lo
    weights = np.zeros(na * q, dtype=np.int64)
    fps = np.zeros((na * q, 2), dtype=np.uint64)
    if n == 0:
        return weights, fps

    parity = (np.bitwise_count(lmask[:, None] & coords[None, :]) & 1).astype(np.uint8)
    coef = hash_coef.T.astype(np.float64)
    lc = log_tab[coords]

    per = max(1, _ROWS_PER_BATCH // max(1, q * n))
    for start in range(a_lo, a_hi, per):
        stop = min(start + per, a_hi)
        a = np.arange(start, stop, dtype=np.int64)
        la = log_tab[a][:, None]
        zero = (la < 0) | (lc[None, :] < 0)
        prod = np.where(zero, 0, exp_tab[np.where(zero, 0, la + lc[None, :])])
        va = tr_tab[prod].astype(np.uint8)  # (batch, n)
        sym = (va[:, None, :] + 2 * parity[None, :, :]) & 3  # (batch, q, n)
        sym = sym.reshape(-1, n)
        lo = (start - a_lo) * q
        hi = (stop - a_lo) * q
        weights[lo:hi] = LEE[sym].sum(axis=1)
        h = (sym.astype(np.float64) @ coef).astype(np.uint64) % HASH_PRIME
        fps[lo:hi, 0] = (h[:, 0] << np.uint64(32)) | h[:, 1]
        fps[lo:hi, 1] = (h[:, 2] << np.uint64(32)) | h[:, 3]
    return weights, fps
