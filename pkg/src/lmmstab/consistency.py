"""Defects of sampled exact solutions and observed consistency orders.

The defect of a scheme on a grid is F_N applied to the exact solution
sampled at the grid points; its norm going to zero like h**p is
consistency of order p in that norm.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import MissingExact, UsageError
from .methods import IVP, GridSpec, MultistepMethod
from .norms import Norm, norm_kinf, norm_kspijker
from .operators import OperatorBundle, TrajectoryVector, apply_F, eval_f

START_RULES = ("exact", "rk4")


@dataclass(frozen=True)
class Scheme:
    """Either a multistep method or the alternating explicit/implicit Euler scheme."""

    method: Optional[MultistepMethod] = None
    alternating: bool = False
    start_rule: str = "exact"

    def __post_init__(self):
        if (self.method is None) == (not self.alternating):
            raise UsageError("a scheme is either an LMM or the alternating Euler scheme")
        if self.start_rule not in START_RULES:
            raise UsageError(f"start_rule must be one of {START_RULES}")

    @classmethod
    def lmm(cls, m: MultistepMethod, start_rule: str = "exact") -> "Scheme":
        return cls(method=m, start_rule=start_rule)

    @classmethod
    def alternating_euler(cls) -> "Scheme":
        return cls(alternating=True)

    @property
    def k(self) -> int:
        return 1 if self.alternating else self.method.k

    @property
    def name(self) -> str:
        return "alt-euler" if self.alternating else self.method.name


def sample_exact(p: IVP, g: GridSpec) -> np.ndarray:
    if p.exact is None:
        raise MissingExact(f"problem {p.name!r} has no exact solution")
    return np.array([p.exact(t) for t in g.times()])


def _alternating_defect(p: IVP, g: GridSpec, u: np.ndarray) -> np.ndarray:
    # odd rows: explicit Euler, even rows: implicit Euler
    h = g.h
    fu = eval_f(p.f, u)
    out = np.empty_like(u)
    out[0] = u[0] - p.exact(0.0)
    i = np.arange(1, u.size)
    diff = (u[1:] - u[:-1]) / h
    out[1:] = np.where(i % 2 == 1, diff - fu[:-1], diff - fu[1:])
    return out


def defect(s: Scheme, p: IVP, g: GridSpec) -> TrajectoryVector:
    """F_N of the sampled exact solution; start values are the exact samples."""
    if g.k != s.k:
        raise UsageError(f"grid k={g.k} does not match scheme k={s.k}")
    u = sample_exact(p, g)
    if s.alternating:
        return TrajectoryVector(_alternating_defect(p, g, u), 1)
    b = OperatorBundle(s.method, g, tuple(u[: g.k]))
    return apply_F(b, p.f, u)


def loglog_slope(hs: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(values) against log(hs)."""
    x = np.log(np.asarray(hs, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


@dataclass(frozen=True)
class OrderEstimate:
    norm: Norm
    grid_sizes: tuple[int, ...]
    step_sizes: tuple[float, ...]
    defect_norms: tuple[float, ...]
    slope: float


def _check_grids(n_list) -> list[int]:
    ns = [int(n) for n in n_list]
    if len(ns) < 3:
        raise UsageError("need at least 3 grids to estimate an order")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise UsageError("grid sizes must be strictly increasing")
    return ns


def parse_norm(which) -> Norm:
    if isinstance(which, Norm):
        return which
    t = str(which).strip().lower()
    if t in ("inf", "kinf"):
        return Norm.KINF
    if t in ("spijker", "kspijker", "$"):
        return Norm.KSPIJKER
    raise UsageError(f"unknown norm {which!r}; use inf or spijker")


def defect_norm(d: TrajectoryVector, which: Norm, h: float) -> float:
    if which is Norm.KINF:
        return norm_kinf(d)
    return norm_kspijker(d, h)


def order_in_norm(s: Scheme, p: IVP, which, n_list) -> OrderEstimate:
    which = parse_norm(which)
    ns = _check_grids(n_list)
    hs, norms = [], []
    for n in ns:
        g = GridSpec(s.k, n, p.T)
        hs.append(g.h)
        norms.append(defect_norm(defect(s, p, g), which, g.h))
    if any(v <= 0 for v in norms):
        raise UsageError(f"{s.name}: defect vanishes on {p.name!r}; no order to estimate")
    return OrderEstimate(which, tuple(ns), tuple(hs), tuple(norms), loglog_slope(hs, norms))


def order_dominance_check(s: Scheme, p: IVP, n_list, slack: float = 0.1) -> bool:
    """Spijker-norm order is at least the sup-norm order (up to ``slack``)."""
    inf = order_in_norm(s, p, Norm.KINF, n_list)
    spj = order_in_norm(s, p, Norm.KSPIJKER, n_list)
    return spj.slope >= inf.slope - slack
