"""The k-infinity and k-Spijker norms and the exact linear stability constant.

Both norms split a vector of length k + n into a start block and an
interior block and add two block quantities:

    ||u||_kinf = max_{i<k} |u_i| + max_{i>=k} |u_i|
    ||u||_k$   = max_{i<k} |u_i| + h * max_l |u_k + ... + u_l|

The interior part of the Spijker norm equals ||E_n^{-1} u_n||_inf, so both
are "block-sum of sup norms" after an invertible change of variables on
the interior block, which is what makes the induced constant computable
exactly.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import EmptyBlock, SingularA, UsageError
from .methods import MultistepMethod
from .operators import OperatorBundle, TrajectoryVector, _check_cap, apply_A, make_bundle, solve_A


class Norm(str, enum.Enum):
    KINF = "KInf"
    KSPIJKER = "KSpijker"


@dataclass(frozen=True)
class NormPair:
    domain_norm: Norm = Norm.KINF
    range_norm: Norm = Norm.KINF

    def __post_init__(self):
        if self.domain_norm is not Norm.KINF:
            raise UsageError("only the k-infinity norm is supported on the domain side")
        if self.range_norm not in (Norm.KINF, Norm.KSPIJKER):
            raise UsageError(f"unsupported range norm {self.range_norm!r}")

    @property
    def label(self) -> str:
        return "inf-inf" if self.range_norm is Norm.KINF else "inf-spijker"

    @classmethod
    def parse(cls, text: str) -> "NormPair":
        t = text.strip().lower()
        if t in ("inf-inf", "kinf-kinf"):
            return INF_INF
        if t in ("inf-spijker", "kinf-kspijker", "inf-$"):
            return INF_SPIJKER
        raise UsageError(f"unknown norm pair {text!r}; use inf-inf or inf-spijker")


INF_INF = NormPair(Norm.KINF, Norm.KINF)
INF_SPIJKER = NormPair(Norm.KINF, Norm.KSPIJKER)


def _blocks(u, k=None):
    if isinstance(u, TrajectoryVector):
        return u.start, u.interior
    if k is None:
        raise UsageError("k is required when passing a plain array")
    u = np.asarray(u, dtype=float)
    return u[:k], u[k:]


def _block_max(v) -> float:
    return float(np.max(np.abs(v))) if len(v) else 0.0


def norm_kinf(u, k: int | None = None) -> float:
    start, interior = _blocks(u, k)
    if len(interior) == 0:
        raise EmptyBlock("interior block is empty")
    return _block_max(start) + _block_max(interior)


def spijker_seminorm(v, h: float) -> float:
    """h * max_l |v_1 + ... + v_l| for an interior block (complex allowed)."""
    if not h > 0:
        raise UsageError(f"h must be positive, got {h}")
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return h * float(np.max(np.abs(np.cumsum(v)), initial=0.0))
    return h * kernels.max_abs_prefix_sum(v.astype(float, copy=False))


def norm_kspijker(u, h: float, k: int | None = None) -> float:
    start, interior = _blocks(u, k)
    if len(interior) == 0:
        raise EmptyBlock("interior block is empty")
    return _block_max(start) + spijker_seminorm(interior, h)


def range_norm(pair: NormPair, y, k: int, h: float) -> float:
    if pair.range_norm is Norm.KINF:
        return norm_kinf(y, k)
    return norm_kspijker(y, h, k)


def stability_ratio(b: OperatorBundle, pair: NormPair, x) -> float:
    """||x||_kinf / ||A_N x||_range for one trajectory difference x (f = 0)."""
    return norm_kinf(x, b.k) / range_norm(pair, apply_A(b, x), b.k, b.h)


def transformed_inverse(b: OperatorBundle, pair: NormPair) -> np.ndarray:
    """Dense A_N^{-1} W^{-1}, W the range weight (identity, or E_n^{-1} on the interior).

    With z = W y the range norm becomes the plain block-sum of sup norms.
    """
    _check_cap(b)
    size, k, h = b.size, b.k, b.h
    W_inv = np.eye(size)
    if pair.range_norm is Norm.KSPIJKER:
        n = b.n
        W_inv[k:, k:] = (np.eye(n) - np.eye(n, k=-1)) / h
    M = solve_A(b, W_inv)
    if not np.all(np.isfinite(M)):
        raise SingularA("A_N could not be inverted")
    return M


@dataclass(frozen=True)
class ConstantDetail:
    value: float
    column_block: str
    top_row: int
    bottom_row: int
    sign: int
    maximizer: np.ndarray = field(repr=False)


def _block_sum_induced(M: np.ndarray, k: int) -> ConstantDetail:
    """Induced norm of M from (block-sum sup) to (block-sum sup), both split at k.

    The unit ball of the domain norm is the convex hull of the two unit
    cubes living on one block each, so the sup is taken at a sign vector
    supported on a single column block. For such a vector the output norm
    is max_{i<k, j>=k} |x_i| + |x_j| = max over (i, j, s) of
    |(M_i + s M_j) z|, whose sup over sign vectors z is the l1 norm of
    M_i + s M_j restricted to that column block.
    """
    size = M.shape[0]
    best = (-1.0, "", 0, 0, 1)
    for name, cols in (("start", slice(0, k)), ("interior", slice(k, size))):
        bottom = M[k:, cols]
        for i in range(k):
            top = M[i, cols]
            for s in (1, -1):
                sums = np.abs(bottom + s * top).sum(axis=1)
                j = int(np.argmax(sums))
                if sums[j] > best[0]:
                    best = (float(sums[j]), name, i, k + j, s)
    value, name, i, j, s = best
    cols = slice(0, k) if name == "start" else slice(k, size)
    pattern = np.sign(M[i, cols] + s * M[j, cols])
    pattern[pattern == 0] = 1.0
    z = np.zeros(size)
    z[cols] = pattern
    return ConstantDetail(value, name, i, j, s, z)


def stability_constant_detail(b: OperatorBundle, pair: NormPair) -> tuple[ConstantDetail, np.ndarray]:
    """Exact constant plus the trajectory difference x that attains it.

    ``x`` satisfies ||x||_kinf = value * ||A_N x||_range up to rounding.
    """
    M = transformed_inverse(b, pair)
    detail = _block_sum_induced(M, b.k)
    x = M @ detail.maximizer
    return detail, x


def stability_constant(b: OperatorBundle, pair: NormPair) -> float:
    """Smallest S with ||x||_kinf <= S ||A_N x||_range for every x (f = 0).

    Dense, O(k (k+n)^2); limited by the dense cap.
    """
    return _block_sum_induced(transformed_inverse(b, pair), b.k).value


@dataclass(frozen=True)
class StabilityConstantReport:
    method: str
    pair: NormPair
    rows: tuple[tuple[int, float], ...]

    def __post_init__(self):
        ns = [n for n, _ in self.rows]
        if ns != sorted(ns):
            raise UsageError("rows must be sorted by n")

    def values(self) -> dict[int, float]:
        return dict(self.rows)


def stability_constant_report(m: MultistepMethod, pair: NormPair, n_list, T: float = 1.0) -> StabilityConstantReport:
    rows = tuple((int(n), stability_constant(make_bundle(m, int(n), T), pair)) for n in sorted(n_list))
    return StabilityConstantReport(m.name, pair, rows)
