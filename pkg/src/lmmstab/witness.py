"""Explicit vectors that make the (k-inf, k-Spijker) stability ratio blow up.

Two constructions:

* :func:`spijker_witness` -- the classical one for the two-step midpoint
  rule, u = (0, 0, 1, -2, 3, -4, ...), with ||u||_2inf = n and image norm 1/2.
* :func:`weak_witness` -- works for any weakly stable method. Pick a
  boundary root xi != 1, build w in the "difference" variables w = E_n u
  (w_m = m (-1)^m for xi = -1, w_m = m cos(m phi) for xi = e^{i phi}),
  and map back with u = E_n^{-1} w. The factor (I - xi H_n) nearly
  annihilates w while ||u||_inf keeps growing.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotWeaklyStable, UsageError
from .methods import MultistepMethod
from .norms import spijker_seminorm
from .operators import TrajectoryVector, apply_A_interior, apply_E_inv, apply_H, make_bundle
from .roots import UNIT_TOL, RootSet, Verdict, classify


def spijker_witness(n: int) -> TrajectoryVector:
    """u_0 = u_1 = 0, u_l = (l - 1) (-1)^l for l = 2 .. n + 1."""
    if n < 2:
        raise UsageError(f"spijker_witness needs n >= 2, got {n}")
    l = np.arange(2, n + 2)
    return TrajectoryVector.from_blocks([0.0, 0.0], (l - 1) * (-1.0) ** l)


@dataclass(frozen=True)
class WitnessReport:
    method: str
    n: int
    xi2: complex
    case: str
    w: np.ndarray = field(repr=False)
    u_inf_norm: float
    image_spijker_norm: float
    ratio: float
    h: float


def select_boundary_root(rs: RootSet, unit_tol: float = UNIT_TOL) -> tuple[complex, str]:
    """-1 if it is a boundary root, otherwise the one with smallest positive argument."""
    others = [z for z in rs.roots if abs(abs(z) - 1) <= unit_tol and abs(z - 1) > unit_tol]
    if not others:
        raise NotWeaklyStable("no boundary root other than 1")
    for z in others:
        if abs(z + 1) <= unit_tol:
            return complex(-1.0, 0.0), "real"
    upper = [z for z in others if z.imag > 0]
    if not upper:
        raise NotWeaklyStable("boundary roots are not closed under conjugation")
    z = min(upper, key=cmath.phase)
    return z / abs(z), "complex"


def _check_weak(rs: RootSet, unit_tol: float) -> None:
    verdict = classify(rs, unit_tol).verdict
    if verdict is not Verdict.WEAKLY_STABLE:
        raise NotWeaklyStable(f"method is {verdict.value}, not WeaklyStable")


def cos_multiples(phi: float, m) -> np.ndarray:
    """cos(m * phi) for integer m with the product m * phi carried in two parts.

    phi is split so its high half has 26 bits; m * hi is then exact and the
    small remainder m * lo enters through the angle-addition formula. This
    keeps the error of cos(m phi) near eps instead of m * eps.
    """
    m = np.asarray(m, dtype=float)
    t = phi * 134217729.0  # 2**27 + 1
    hi = t - (t - phi)
    lo = phi - hi
    a, b = m * hi, m * lo
    return np.cos(a) * np.cos(b) - np.sin(a) * np.sin(b)


def witness_w(xi2: complex, case: str, n: int) -> np.ndarray:
    m = np.arange(1, n + 1)
    if case == "real":
        return m * (-1.0) ** m
    return m * cos_multiples(cmath.phase(xi2), m)


def weak_witness(m: MultistepMethod, rs: RootSet, n: int, T: float = 1.0,
                 unit_tol: float = UNIT_TOL) -> WitnessReport:
    _check_weak(rs, unit_tol)
    if n < m.k:
        raise UsageError(f"n must be at least k = {m.k}, got {n}")
    xi2, case = select_boundary_root(rs, unit_tol)
    b = make_bundle(m, n, T)
    w = witness_w(xi2, case, n)
    u_n = apply_E_inv(w, b.h)
    u_inf = float(np.max(np.abs(u_n)))
    image = spijker_seminorm(apply_A_interior(b, u_n), b.h)
    return WitnessReport(
        method=m.name, n=n, xi2=xi2, case=case, w=w,
        u_inf_norm=u_inf, image_spijker_norm=image, ratio=u_inf / image, h=b.h,
    )


def witness_trajectory(report: WitnessReport, k: int) -> TrajectoryVector:
    """The full trajectory (zero start block, interior E_n^{-1} w)."""
    return TrajectoryVector.from_blocks(np.zeros(k), apply_E_inv(report.w, report.h))


def closed_form_partial_sums(xi2: complex, case: str, n: int) -> np.ndarray:
    """sum_{m<=l} m xi^m = l xi^{l+1}/(xi-1) - (xi^{l+1} - xi)/(xi-1)^2, real part."""
    l = np.arange(1, n + 1)
    xi = complex(-1.0) if case == "real" else xi2
    p = xi ** (l + 1)
    s = l * p / (xi - 1) - (p - xi) / (xi - 1) ** 2
    return s.real


@dataclass(frozen=True)
class WitnessDiagnostics:
    case: str
    xi2: complex
    n: int
    h: float
    image_vector_check: float
    closed_form_check: float
    closed_form_entry_check: float
    w_spijker_norm: float
    reduced_image_norm: float
    reduced_image_bound: float
    lower_bound: float | None


def reduced_image(w: np.ndarray, xi2: complex, case: str) -> np.ndarray:
    """(I - xi H) w for xi = -1, or (I - 2 cos(phi) H + H^2) w for the pair."""
    Hw = apply_H(w)
    if case == "real":
        return w + Hw
    return w - 2 * math.cos(cmath.phase(xi2)) * Hw + apply_H(Hw)


def witness_diagnostics(m: MultistepMethod, rs: RootSet, n: int, T: float = 1.0,
                        unit_tol: float = UNIT_TOL) -> WitnessDiagnostics:
    _check_weak(rs, unit_tol)
    if n < m.k:
        raise UsageError(f"n must be at least k = {m.k}, got {n}")
    xi2, case = select_boundary_root(rs, unit_tol)
    h = make_bundle(m, n, T).h
    w = witness_w(xi2, case, n)
    img = reduced_image(w, xi2, case)
    idx = np.arange(1, n + 1)
    if case == "real":
        expected = (-1.0) ** idx
        bound = h
        lower = h * (n - 1) / 2
    else:
        phi = cmath.phase(xi2)
        expected = cos_multiples(phi, idx) - cos_multiples(phi, idx - 2)
        expected[0] = math.cos(phi)
        bound = 3 * h
        lower = None
    prefix = np.cumsum(w)
    closed = closed_form_partial_sums(xi2, case, n)
    w_norm = spijker_seminorm(w, h)
    closed_norm = h * float(np.max(np.abs(closed)))
    return WitnessDiagnostics(
        case=case, xi2=xi2, n=n, h=h,
        image_vector_check=float(np.max(np.abs(img - expected))),
        closed_form_check=abs(w_norm - closed_norm),
        closed_form_entry_check=float(np.max(np.abs(prefix - closed) / (1.0 + np.abs(prefix)))),
        w_spijker_norm=w_norm,
        reduced_image_norm=spijker_seminorm(img, h),
        reduced_image_bound=bound,
        lower_bound=lower,
    )


@dataclass(frozen=True)
class SweepReport:
    method: str
    xi2: complex
    case: str
    reports: tuple[WitnessReport, ...]

    @property
    def rows(self) -> tuple[tuple[int, float], ...]:
        return tuple((r.n, r.ratio) for r in self.reports)

    @property
    def monotone(self) -> bool:
        ratios = [r.ratio for r in self.reports]
        return all(b > a for a, b in zip(ratios, ratios[1:]))

    @property
    def min_w_spijker(self) -> float:
        """Smallest ||w||_$ over the sweep; a measured stand-in for the existence constant."""
        return min(r.u_inf_norm for r in self.reports)

    def summary(self) -> dict:
        return {
            "method": self.method,
            "xi2": [self.xi2.real, self.xi2.imag],
            "case": self.case,
            "monotone": self.monotone,
            "min_w_spijker": self.min_w_spijker,
        }


def ratio_sweep(m: MultistepMethod, rs: RootSet, n_list, T: float = 1.0,
                unit_tol: float = UNIT_TOL) -> SweepReport:
    ns = [int(n) for n in n_list]
    if not ns:
        raise UsageError("n_list is empty")
    reports = tuple(weak_witness(m, rs, n, T, unit_tol) for n in ns)
    return SweepReport(m.name, reports[0].xi2, reports[0].case, reports)
