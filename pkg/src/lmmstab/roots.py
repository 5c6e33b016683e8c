"""Roots of the first characteristic polynomial and root-condition verdicts."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence
from .methods import MultistepMethod

ROOT_TOL = 1e-10
UNIT_TOL = 1e-9
SIMPLE_TOL = 1e-7
MAX_ITER = 1000

# fixed irrational rotation of the initial guesses
_GUESS_ANGLE = 0.4 + math.sqrt(2) / 10
_EPS = np.finfo(float).eps


def _horner(coeffs, z):
    """p(z) and p'(z) for coefficients in descending powers."""
    p = 0j
    dp = 0j
    for c in coeffs:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _newton_terms(c, crev, absc, z):
    """(p/p', |p| at rounding floor?) for descending coefficients ``c``.

    For |z| > 1 everything is evaluated through the reversed polynomial
    q(w) = w^d p(1/w) at w = 1/z, which keeps huge roots finite.
    """
    d = len(c) - 1
    if abs(z) <= 1:
        p, dp = _horner(c, z)
        floor = 0.0
        for a in absc:
            floor = floor * abs(z) + a
        settled = abs(p) <= 4 * d * _EPS * floor
        if p == 0:
            return 0j, settled
        return (p / dp if dp != 0 else complex(_EPS, 0)), settled
    w = 1 / z
    q, dq = _horner(crev, w)
    floor = 0.0
    for a in reversed(absc):
        floor = floor * abs(w) + a
    settled = abs(q) <= 4 * d * _EPS * floor
    if q == 0:
        return 0j, settled
    denom = d - w * dq / q
    return (z / denom if denom != 0 else complex(_EPS, 0)), settled


def _initial_guesses(c):
    """Starting points on the circles of the Newton polygon of ``c``.

    Each edge of the upper convex hull of (i, log|a_i|), a_i the coefficient
    of z**i, gives a circle whose radius matches the modulus of as many roots
    as the edge is long. Widely spread root moduli then start close to
    their circles instead of all on one outer bound.
    """
    d = len(c) - 1
    pts = [(i, math.log(abs(c[d - i]))) for i in range(d + 1) if c[d - i] != 0]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (pt[0] - x1) * (y2 - y1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    guesses = []
    first = hull[0][0]
    for (i, yi), (j, yj) in zip(hull, hull[1:]):
        radius = math.exp((yi - yj) / (j - i))
        for m in range(j - i):
            angle = _GUESS_ANGLE + 2 * math.pi * m / (j - i) + 2 * math.pi * i / d
            guesses.append(radius * cmath.exp(1j * angle))
    # zero low-order coefficients (only when called directly): roots at the origin
    small = 0.5 * min((abs(g) for g in guesses), default=1.0)
    for m in range(first):
        guesses.append(small * cmath.exp(1j * (_GUESS_ANGLE + 2 * math.pi * m / max(first, 1))))
    return guesses


def aberth(coeffs, max_iter: int = MAX_ITER):
    """All roots of the polynomial with descending-power ``coeffs``.

    Aberth-Ehrlich simultaneous iteration from points on the Newton-polygon
    circles. Iterates until every residual sits at the rounding floor of the
    evaluation or the corrections stall (or ``max_iter``), so clustered
    roots are resolved as far as double precision allows rather than just
    to the caller's residual tolerance.
    Returns ``(roots, iterations)``.
    """
    c = [complex(x) for x in coeffs]
    d = len(c) - 1
    if d == 0:
        return np.zeros(0, dtype=complex), 0
    if d == 1:
        return np.array([-c[1] / c[0]]), 0
    z = _initial_guesses(c)
    absc = [abs(x) for x in c]
    crev = c[::-1]
    quiet = 0
    for it in range(1, max_iter + 1):
        biggest = 0.0
        settled = 0
        for i in range(d):
            ratio, ok = _newton_terms(c, crev, absc, z[i])
            settled += ok
            if ratio == 0:
                continue
            s = 0j
            for j in range(d):
                if j != i:
                    diff = z[i] - z[j]
                    if diff != 0:
                        s += 1.0 / diff
            denom = 1.0 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            z[i] -= w
            biggest = max(biggest, abs(w) / (1.0 + abs(z[i])))
        if settled == d:
            return np.array(z), it
        if biggest <= 4 * _EPS:
            quiet += 1
            if quiet >= 3:
                return np.array(z), it
        else:
            quiet = 0
    return np.array(z), max_iter


def _strip_zero_tail(alpha):
    a = list(alpha)
    zeros = 0
    while len(a) > 1 and a[-1] == 0:
        a.pop()
        zeros += 1
    return a, zeros


def _snap(z: complex, scale: float) -> complex:
    tol = 8 * _EPS * scale
    re, im = z.real, z.imag
    if abs(im) <= tol:
        im = 0.0
    if abs(re) <= tol:
        re = 0.0
    return complex(re, im)


def _residual(alpha, z: complex) -> float:
    # outside the unit disk this is the reversed polynomial's residual at 1/z
    if abs(z) <= 1:
        return abs(_horner(alpha, z)[0])
    return abs(_horner(alpha[::-1], 1 / z)[0])


def _sort_key(z: complex):
    arg = cmath.phase(z)
    if arg <= -math.pi + 1e-15:
        arg = math.pi
    return (0 if abs(z - 1) <= 1e-8 else 1, -round(abs(z), 9), round(arg, 12))


@dataclass(frozen=True)
class RootSet:
    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    reciprocal_roots: tuple[complex, ...]
    alpha: tuple[float, ...]
    iterations: int = 0

    @property
    def nonzero_roots(self) -> tuple[complex, ...]:
        return tuple(z for z in self.roots if z != 0)


def find_roots(m: MultistepMethod, root_tol: float = ROOT_TOL, max_iter: int = MAX_ITER) -> RootSet:
    """Roots of rho(z) = sum_j alpha[j] z**(k-j), sorted with xi_1 = 1 first.

    Trailing zero coefficients are removed and their zero roots appended
    explicitly. Residuals are ``|rho(xi)|`` on the closed unit disk and
    ``|rho(xi)| / |xi|**k`` outside it. Raises NoConvergence when a residual
    exceeds ``root_tol * (1 + max|alpha|)``.
    """
    stripped, zeros = _strip_zero_tail(m.alpha)
    found, iters = aberth(stripped, max_iter=max_iter)
    scale = 1.0 + max(abs(a) for a in m.alpha)
    roots = [_snap(complex(z), 1.0 + abs(z)) for z in found]
    roots.sort(key=_sort_key)
    roots.extend([0j] * zeros)
    residuals = tuple(_residual(m.alpha, z) for z in roots)
    bound = root_tol * scale
    bad = [r for r in residuals if not r <= bound]
    if bad:
        raise NoConvergence(
            f"{m.name}: root residual {max(bad):.3e} exceeds {bound:.3e} after {iters} iterations"
        )
    return RootSet(
        roots=tuple(roots),
        residuals=residuals,
        reciprocal_roots=tuple(1.0 / z for z in roots if z != 0),
        alpha=tuple(m.alpha),
        iterations=iters,
    )


def reconstruct(rs: RootSet) -> np.ndarray:
    """alpha[0] * prod(z - xi_i), as real descending-power coefficients."""
    poly = np.array([1.0 + 0j])
    for z in rs.roots:
        poly = np.convolve(poly, np.array([1.0, -z]))
    return (rs.alpha[0] * poly).real


class Verdict(str, enum.Enum):
    STRONGLY_STABLE = "StronglyStable"
    WEAKLY_STABLE = "WeaklyStable"
    ROOT_CONDITION_VIOLATED = "RootConditionViolated"


@dataclass(frozen=True)
class StabilityClass:
    verdict: Verdict
    boundary_roots: tuple[complex, ...]
    simplicity_ok: bool
    reason: str = ""


def _is_simple(rs: RootSet, idx: int, simple_tol: float) -> bool:
    z = rs.roots[idx]
    others = [w for j, w in enumerate(rs.roots) if j != idx]
    if others and min(abs(z - w) for w in others) <= simple_tol:
        return False
    dp = abs(_horner(rs.alpha, z)[1])
    return dp > simple_tol * sum(abs(a) for a in rs.alpha)


def classify(rs: RootSet, unit_tol: float = UNIT_TOL, simple_tol: float = SIMPLE_TOL) -> StabilityClass:
    """Strong / weak / violated verdict for a root set."""
    outside = [z for z in rs.roots if abs(z) > 1 + unit_tol]
    boundary_idx = [i for i, z in enumerate(rs.roots) if abs(abs(z) - 1) <= unit_tol]
    boundary = tuple(rs.roots[i] for i in boundary_idx)
    simple = all(_is_simple(rs, i, simple_tol) for i in boundary_idx)

    def violated(reason):
        return StabilityClass(Verdict.ROOT_CONDITION_VIOLATED, boundary, simple, reason)

    near = [i for i, z in enumerate(rs.roots) if abs(abs(z) - 1) <= 1e-4]
    if not all(_is_simple(rs, i, simple_tol) for i in near):
        return violated("repeated root on the unit circle")
    if outside:
        return violated(f"root of modulus {max(abs(z) for z in outside):.6g} outside the unit disk")
    if not any(abs(z - 1) <= unit_tol for z in boundary):
        return violated("1 is not a root of rho")
    if not simple:
        return violated("repeated root on the unit circle")
    if len(boundary) == 1:
        return StabilityClass(Verdict.STRONGLY_STABLE, boundary, simple)
    return StabilityClass(Verdict.WEAKLY_STABLE, boundary, simple)


def classify_method(m: MultistepMethod, root_tol: float = ROOT_TOL, unit_tol: float = UNIT_TOL,
                    simple_tol: float = SIMPLE_TOL) -> tuple[RootSet, StabilityClass]:
    rs = find_roots(m, root_tol)
    return rs, classify(rs, unit_tol, simple_tol)
