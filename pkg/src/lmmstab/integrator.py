"""Running multistep methods on scalar problems."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .consistency import START_RULES, loglog_slope
from .errors import NewtonDiverged, StartUnavailable, UsageError
from .methods import IVP, GridSpec, MultistepMethod
from .operators import OperatorBundle, TrajectoryVector, apply_F

SOLVE_TOL = 1e-12
MAX_NEWTON = 50
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class RunResult:
    method: str
    grid: GridSpec
    trajectory: TrajectoryVector
    newton_iters: tuple[int, ...]
    start_values: tuple[float, ...]

    @property
    def times(self) -> np.ndarray:
        return self.grid.times()

    @property
    def final(self) -> float:
        return float(self.trajectory.values[-1])


def rk4_start(p: IVP, h: float, count: int) -> list[float]:
    """u_0 .. u_{count-1} by the classical four-stage Runge-Kutta method."""
    f = p.f
    u = p.u0
    out = [u]
    for _ in range(count - 1):
        k1 = f(u)
        k2 = f(u + 0.5 * h * k1)
        k3 = f(u + 0.5 * h * k2)
        k4 = f(u + h * k3)
        u = u + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(u)
    return out


def start_values(p: IVP, g: GridSpec, start: str) -> list[float]:
    if start == "exact":
        if p.exact is None:
            raise StartUnavailable(f"problem {p.name!r} has no exact solution for an exact start")
        return [p.exact(i * g.h) for i in range(g.k)]
    if start == "rk4":
        return rk4_start(p, g.h, g.k)
    raise UsageError(f"start rule must be one of {START_RULES}, got {start!r}")


def _solve_implicit(g, u_guess: float, tol: float, max_iter: int):
    """Root of the scalar level equation g(u) = 0; returns (u, newton_iterations)."""
    u = u_guess
    r = g(u)
    for it in range(1, max_iter + 1):
        if abs(r) <= 0.5 * tol * (1.0 + abs(u)):
            return u, it - 1
        d = 1e-7 * (1.0 + abs(u))
        slope = (g(u + d) - g(u - d)) / (2 * d)
        if slope == 0 or not math.isfinite(slope):
            break
        step = r / slope
        lam = 1.0
        for _ in range(30):
            trial = u - lam * step
            rt = g(trial)
            if math.isfinite(rt) and abs(rt) < abs(r):
                break
            lam *= 0.5
        else:
            break
        if abs(lam * step) <= 4 * _EPS * (1.0 + abs(u)):
            return trial, it
        u, r = trial, rt
    if abs(r) <= 0.5 * tol * (1.0 + abs(u)):
        return u, max_iter
    return _bisect(g, u_guess, tol), max_iter


def _bisect(g, centre: float, tol: float) -> float:
    lo, hi = centre - 0.5, centre + 0.5
    glo, ghi = g(lo), g(hi)
    if not (math.isfinite(glo) and math.isfinite(ghi)) or glo * ghi > 0:
        raise NewtonDiverged(f"Newton failed and no sign change in [{lo:.6g}, {hi:.6g}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if abs(gm) <= 0.5 * tol * (1.0 + abs(mid)) or hi - lo <= 4 * _EPS * (1.0 + abs(mid)):
            return mid
        if (gm < 0) == (glo < 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def integrate(m: MultistepMethod, p: IVP, g: GridSpec, start: str = "exact",
              solve_tol: float = SOLVE_TOL, max_newton: int = MAX_NEWTON,
              start_override: Sequence[float] | None = None) -> RunResult:
    """March the method over the grid.

    Each new level solves alpha_0 u / h - beta_0 f(u) = (known history).
    Explicit methods do this directly; implicit ones use damped Newton with
    a central-difference derivative and fall back to bisection on a bracket
    of width one around the previous level.
    """
    if g.k != m.k:
        raise UsageError(f"grid k={g.k} does not match method k={m.k}")
    h, k = g.h, m.k
    alpha, beta = m.alpha, m.beta
    f = p.f
    c = list(start_override) if start_override is not None else start_values(p, g, start)
    if len(c) != k:
        raise UsageError(f"need {k} start values, got {len(c)}")
    u = np.empty(g.size)
    fu = np.empty(g.size)
    u[:k] = c
    for i in range(k):
        fu[i] = f(u[i])
    iters = []
    a0, b0 = alpha[0], beta[0]
    for i in range(k, g.size):
        known = 0.0
        for j in range(1, k + 1):
            known += beta[j] * fu[i - j] - alpha[j] * u[i - j] / h
        if b0 == 0:
            u[i] = h * known / a0
        else:
            def level(v, known=known):
                return a0 * v / h - b0 * f(v) - known

            u[i], it = _solve_implicit(level, u[i - 1], solve_tol, max_newton)
            iters.append(it)
        fu[i] = f(u[i])
    return RunResult(m.name, g, TrajectoryVector(u, k), tuple(iters), tuple(float(x) for x in c))


def run_residual(run: RunResult, m: MultistepMethod, p: IVP) -> float:
    """|| F_N(trajectory) ||_inf with the run's own start values."""
    b = OperatorBundle(m, run.grid, run.start_values)
    return float(np.max(np.abs(apply_F(b, p.f, run.trajectory).values)))


@dataclass(frozen=True)
class ConvergenceStudy:
    method: str
    start: str
    grid_sizes: tuple[int, ...]
    step_sizes: tuple[float, ...]
    errors: tuple[float, ...]
    slope: float


def convergence_study(m: MultistepMethod, p: IVP, n_list, start: str = "exact") -> ConvergenceStudy:
    """Error |u_N - u(T)| on refining grids and its log-log slope in h."""
    if p.exact is None:
        raise StartUnavailable("a convergence study needs the exact solution")
    ns = [int(n) for n in n_list]
    if len(ns) < 2:
        raise UsageError("need at least two grids")
    hs, errs = [], []
    for n in ns:
        g = GridSpec(m.k, n, p.T)
        run = integrate(m, p, g, start)
        hs.append(g.h)
        errs.append(abs(run.final - p.exact(p.T)))
    return ConvergenceStudy(m.name, start, tuple(ns), tuple(hs), tuple(errs), loglog_slope(hs, errs))


@dataclass(frozen=True)
class OscillationDemo:
    run: RunResult
    exact: np.ndarray = field(repr=False)
    envelope: np.ndarray = field(repr=False)
    parasitic_amplitude: float


def oscillation_demo(m: MultistepMethod, p: IVP, g: GridSpec, perturbation: float) -> OscillationDemo:
    """Two-step run with the second start value nudged by ``perturbation``.

    ``parasitic_amplitude`` is the largest half-difference of consecutive
    errors over the last quarter of the grid, which isolates the
    sign-alternating error mode.
    """
    if m.k != 2:
        raise UsageError("oscillation_demo needs a two-step method")
    if p.exact is None:
        raise StartUnavailable("oscillation_demo needs the exact solution")
    c = [p.exact(0.0), p.exact(g.h) + perturbation]
    run = integrate(m, p, g, start_override=c)
    exact = np.array([p.exact(t) for t in g.times()])
    err = run.trajectory.values - exact
    half_diff = np.abs(np.diff(err)) / 2
    tail = half_diff[(3 * half_diff.size) // 4:]
    return OscillationDemo(run, exact, np.abs(err), float(np.max(tail)))
