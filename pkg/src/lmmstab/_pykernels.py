"""Pure-Python/numpy implementations of the hot kernels.

Signatures and results match :mod:`lmmstab._ckernels` exactly; the
extension is preferred when it is importable.
"""
import numpy as np


def banded_matvec(coeffs, x):
    """y[i] = sum_{j=0..min(K, i)} coeffs[j] * x[i-j] (lower banded Toeplitz).

    ``x`` may be 1-D or 2-D; in the 2-D case every column is transformed.
    """
    c = np.asarray(coeffs, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = c[0] * x
    for j in range(1, min(len(c), x.shape[0] + 1)):
        if c[j] != 0.0:
            y[j:] += c[j] * x[:-j]
    return y


def banded_solve(coeffs, y, start=0):
    """Solve the lower banded Toeplitz system with first column ``coeffs``.

    Forward substitution, O(K n) per right-hand side column. Rows below
    ``start`` are identity rows: those entries of ``y`` are returned as is
    and act as fixed history for the rows after them.
    """
    c = np.asarray(coeffs, dtype=np.float64)
    x = np.array(y, dtype=np.float64, copy=True)
    c0 = c[0]
    K = len(c) - 1
    n = x.shape[0]
    for i in range(start, n):
        acc = x[i]
        for j in range(1, min(K, i) + 1):
            if c[j] != 0.0:
                acc = acc - c[j] * x[i - j]
        x[i] = acc / c0
    return x


def max_abs_prefix_sum(v):
    """max_l |v[0] + ... + v[l]|, 0.0 for an empty vector."""
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        return 0.0
    return float(np.max(np.abs(np.cumsum(v))))
