"""Discrete operator form of a multistep method.

For a grid with k start levels and n interior levels the method is the map

    F_N(u) = A_N u - B_N f(u) - c_N

on R^(k+n), where A_N = [[I, 0], [A_k, A_n]] carries alpha/h on its bands,
B_N = [[0, 0], [B_k, B_n]] carries beta, and c_N holds the start values
followed by zeros. Application is matrix-free; dense matrices exist for
the stability-constant oracle and for small-n checks.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .errors import SizeExceeded, UsageError
from .methods import GridSpec, MultistepMethod
from .roots import RootSet

DEFAULT_DENSE_CAP = 4096


def dense_cap() -> int:
    raw = os.environ.get("LMM_DENSE_CAP")
    if raw is None or raw == "":
        return DEFAULT_DENSE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"LMM_DENSE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise UsageError("LMM_DENSE_CAP must be positive")
    return cap


@dataclass(frozen=True)
class TrajectoryVector:
    """Values u_0 .. u_N split as (start block of length k, interior block)."""

    values: np.ndarray
    k: int

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if v.ndim != 1:
            raise UsageError("trajectory values must be one-dimensional")
        if not 0 <= self.k <= v.size:
            raise UsageError(f"split point k={self.k} outside 0..{v.size}")

    @property
    def start(self) -> np.ndarray:
        return self.values[: self.k]

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.k:]

    @property
    def n(self) -> int:
        return self.values.size - self.k

    def __len__(self):
        return self.values.size

    @classmethod
    def from_blocks(cls, start: Sequence[float], interior: Sequence[float]) -> "TrajectoryVector":
        start = np.asarray(start, dtype=float)
        return cls(np.concatenate([start, np.asarray(interior, dtype=float)]), start.size)


@dataclass(frozen=True)
class OperatorBundle:
    method: MultistepMethod
    grid: GridSpec
    start_values: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.grid.k != self.method.k:
            raise UsageError(f"grid k={self.grid.k} does not match method k={self.method.k}")
        sv = tuple(float(c) for c in self.start_values) or (0.0,) * self.method.k
        if len(sv) != self.method.k:
            raise UsageError(f"need {self.method.k} start values, got {len(sv)}")
        object.__setattr__(self, "start_values", sv)

    @property
    def k(self) -> int:
        return self.method.k

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def h(self) -> float:
        return self.grid.h

    @property
    def size(self) -> int:
        return self.grid.size

    def c_vector(self) -> np.ndarray:
        c = np.zeros(self.size)
        c[: self.k] = self.start_values
        return c


def make_bundle(m: MultistepMethod, n: int, T: float = 1.0, start_values=()) -> OperatorBundle:
    return OperatorBundle(m, GridSpec(m.k, n, T), tuple(start_values))


def eval_f(f: Callable[[float], float], u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return np.fromiter((f(float(x)) for x in u), dtype=float, count=u.size)


def apply_A(b: OperatorBundle, u) -> np.ndarray:
    """A_N u for a full trajectory, matrix-free."""
    u = np.asarray(u, dtype=float)
    out = kernels.banded_matvec(b.method.alpha, u) / b.h
    out[: b.k] = u[: b.k]
    return out


def apply_B(b: OperatorBundle, g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    out = kernels.banded_matvec(b.method.beta, g)
    out[: b.k] = 0.0
    return out


def apply_F(b: OperatorBundle, f: Callable[[float], float], u) -> TrajectoryVector:
    """F_N(u): start rows u_i - c^i, interior rows the scheme residual. O(kN)."""
    vals = u.values if isinstance(u, TrajectoryVector) else np.asarray(u, dtype=float)
    if vals.size != b.size:
        raise UsageError(f"trajectory length {vals.size} != k + n = {b.size}")
    out = apply_A(b, vals) - apply_B(b, eval_f(f, vals)) - b.c_vector()
    return TrajectoryVector(out, b.k)


def apply_A_interior(b: OperatorBundle, u_n) -> np.ndarray:
    """A_n u for an interior block (start block taken as zero)."""
    u_n = np.asarray(u_n, dtype=float)
    if u_n.shape[0] != b.n:
        raise UsageError(f"interior block length {u_n.shape[0]} != n = {b.n}")
    return kernels.banded_matvec(b.method.alpha, u_n) / b.h


def solve_A(b: OperatorBundle, y) -> np.ndarray:
    """A_N^{-1} y by forward substitution; ``y`` may hold several columns."""
    y = np.array(y, dtype=float)
    y[b.k:] *= b.h
    return kernels.banded_solve(b.method.alpha, y, start=b.k)


def _check_cap(b: OperatorBundle) -> None:
    cap = dense_cap()
    if b.size > cap:
        raise SizeExceeded(f"k + n = {b.size} exceeds dense_cap = {cap}")


def _banded_dense(size: int, coeffs, scale: float) -> np.ndarray:
    M = np.zeros((size, size))
    idx = np.arange(size)
    for j, c in enumerate(coeffs):
        if c != 0 and j < size:
            M[idx[j:], idx[j:] - j] = c * scale
    return M


def dense_A(b: OperatorBundle) -> np.ndarray:
    _check_cap(b)
    M = _banded_dense(b.size, b.method.alpha, 1.0 / b.h)
    M[: b.k, :] = 0.0
    M[np.arange(b.k), np.arange(b.k)] = 1.0
    return M


def dense_B(b: OperatorBundle) -> np.ndarray:
    _check_cap(b)
    M = _banded_dense(b.size, b.method.beta, 1.0)
    M[: b.k, :] = 0.0
    return M


def dense_blocks(b: OperatorBundle) -> dict[str, np.ndarray]:
    """The four named sub-blocks A_k, A_n, B_k, B_n."""
    A, B = dense_A(b), dense_B(b)
    k = b.k
    return {"A_k": A[k:, :k], "A_n": A[k:, k:], "B_k": B[k:, :k], "B_n": B[k:, k:]}


def apply_E(v, h: float) -> np.ndarray:
    """Forward differences divided by h (explicit Euler's linear part)."""
    v = np.asarray(v, dtype=float)
    out = v.copy()
    out[1:] -= v[:-1]
    return out / h


def apply_E_inv(v, h: float) -> np.ndarray:
    """h times the prefix sums of v."""
    return h * np.cumsum(np.asarray(v, dtype=float), axis=0)


def dense_E(n: int, h: float) -> np.ndarray:
    return (np.eye(n) - np.eye(n, k=-1)) / h


def dense_E_inv(n: int, h: float) -> np.ndarray:
    return h * np.tril(np.ones((n, n)))


def apply_H(v) -> np.ndarray:
    """Down-shift by one position (sub-diagonal ones); works on complex input."""
    v = np.asarray(v)
    out = np.zeros_like(v)
    out[1:] = v[:-1]
    return out


def dense_H(n: int) -> np.ndarray:
    return np.eye(n, k=-1)


def factor_product(b: OperatorBundle, rs: RootSet, u) -> np.ndarray:
    """alpha_0 * prod_i (I - xi_i H_n) u in complex arithmetic, right to left.

    Zero roots contribute identity factors and are skipped.
    """
    v = np.asarray(u, dtype=complex)
    for xi in reversed(rs.nonzero_roots):
        v = v - xi * apply_H(v)
    return rs.alpha[0] * v


def factorization_residual(b: OperatorBundle, rs: RootSet, u) -> float:
    """|| h A_n u - alpha_0 prod(I - xi_i H_n) u ||_inf."""
    u = np.asarray(u, dtype=float)
    lhs = kernels.banded_matvec(b.method.alpha, u)
    return float(np.max(np.abs(lhs - factor_product(b, rs, u)), initial=0.0))


def write_matrix_csv(M: np.ndarray, path) -> None:
    np.savetxt(path, M, delimiter=",", fmt="%.17g")
