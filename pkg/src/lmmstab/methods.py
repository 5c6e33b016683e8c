"""Linear multistep methods, the built-in catalog, and the scalar IVP type.

A k-step method advances a scalar autonomous problem ``u' = f(u)`` by

    (1/h) * sum_j alpha[j] * u[i-j] = sum_j beta[j] * f(u[i-j]),   j = 0..k

Index ``j = 0`` is the newest time level. Coefficients are kept exactly as
given, with no normalisation of ``alpha[0]``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from .errors import LengthMismatch, UsageError, ZeroLeadingAlpha


@dataclass(frozen=True)
class MultistepMethod:
    name: str
    alpha: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        if len(self.alpha) == 0 or len(self.beta) == 0:
            raise LengthMismatch(f"{self.name}: coefficient lists must be non-empty")
        if len(self.alpha) != len(self.beta):
            raise LengthMismatch(
                f"{self.name}: len(alpha)={len(self.alpha)} != len(beta)={len(self.beta)}"
            )
        if len(self.alpha) < 2:
            raise LengthMismatch(f"{self.name}: need k >= 1, i.e. at least two coefficients")
        if self.alpha[0] == 0:
            raise ZeroLeadingAlpha(f"{self.name}: alpha[0] must be non-zero")
        for c in self.alpha + self.beta:
            if not math.isfinite(c):
                raise UsageError(f"{self.name}: non-finite coefficient {c!r}")

    @property
    def k(self) -> int:
        return len(self.alpha) - 1

    @property
    def explicit(self) -> bool:
        return self.beta[0] == 0

    def to_dict(self) -> dict:
        return {"name": self.name, "alpha": list(self.alpha), "beta": list(self.beta)}

    @classmethod
    def from_dict(cls, d: dict) -> "MultistepMethod":
        try:
            return make_method(d["name"], d["alpha"], d["beta"])
        except KeyError as exc:
            raise UsageError(f"method document is missing field {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "MultistepMethod":
        return cls.from_dict(json.loads(text))


def make_method(name: str, alpha: Sequence[float], beta: Sequence[float]) -> MultistepMethod:
    """Validate and build a method; raises ZeroLeadingAlpha / LengthMismatch."""
    return MultistepMethod(
        name=str(name),
        alpha=tuple(float(a) for a in alpha),
        beta=tuple(float(b) for b in beta),
    )


def load_method(path: str | Path) -> MultistepMethod:
    return MultistepMethod.from_json(Path(path).read_text())


def save_method(m: MultistepMethod, path: str | Path) -> None:
    Path(path).write_text(m.to_json() + "\n")


_CATALOG = (
    ("midpoint", (0.5, 0.0, -0.5), (0.0, 1.0, 0.0)),
    ("euler", (1.0, -1.0), (0.0, 1.0)),
    ("implicit-euler", (1.0, -1.0), (1.0, 0.0)),
    ("trapezoidal", (1.0, -1.0), (0.5, 0.5)),
    ("AB2", (1.0, -1.0, 0.0), (0.0, 1.5, -0.5)),
    ("BDF2", (1.5, -2.0, 0.5), (1.0, 0.0, 0.0)),
    ("milne", (1.0, 0.0, -1.0), (1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0)),
)

# classical orders, used by convergence tests and the CLI summary
CLASSICAL_ORDER = {
    "midpoint": 2,
    "euler": 1,
    "implicit-euler": 1,
    "trapezoidal": 2,
    "AB2": 2,
    "BDF2": 2,
    "milne": 4,
}


def catalog() -> list[MultistepMethod]:
    return [make_method(name, a, b) for name, a, b in _CATALOG]


def get_method(name: str) -> MultistepMethod:
    for m in catalog():
        if m.name.lower() == name.lower():
            return m
    known = ", ".join(n for n, _, _ in _CATALOG)
    raise UsageError(f"unknown method {name!r}; known: {known}")


def rho_eval(m: MultistepMethod, z: complex) -> complex:
    """First characteristic polynomial sum_j alpha[j] z**(k-j), by Horner."""
    acc = 0j
    for a in m.alpha:
        acc = acc * z + a
    return acc


def rho_prime_eval(m: MultistepMethod, z: complex) -> complex:
    k = m.k
    acc = 0j
    for j, a in enumerate(m.alpha[:-1]):
        acc = acc * z + (k - j) * a
    return acc


@dataclass(frozen=True)
class IVP:
    """Scalar autonomous problem u' = f(u), u(0) = u0 on [0, T]."""

    f: Callable[[float], float]
    u0: float
    T: float
    exact: Optional[Callable[[float], float]] = field(default=None, compare=False)
    lipschitz_hint: Optional[float] = None
    name: str = "ivp"

    def __post_init__(self):
        if not self.T > 0:
            raise UsageError(f"horizon T must be positive, got {self.T}")
        if self.exact is not None and abs(self.exact(0.0) - self.u0) > 1e-12:
            raise UsageError("exact(0) does not match u0")
        if self.lipschitz_hint is not None and not self.lipschitz_hint > 0:
            raise UsageError("lipschitz_hint must be positive")


def growth(T: float = 1.0, u0: float = 1.0) -> IVP:
    return IVP(lambda u: u, u0, T, exact=lambda t: u0 * math.exp(t), lipschitz_hint=1.0, name="growth")


def decay(T: float = 1.0, u0: float = 1.0) -> IVP:
    return IVP(lambda u: -u, u0, T, exact=lambda t: u0 * math.exp(-t), lipschitz_hint=1.0, name="decay")


def constant_rate(c: float = 1.0, T: float = 1.0, u0: float = 0.0) -> IVP:
    return IVP(lambda u: c, u0, T, exact=lambda t: u0 + c * t, name="constant")


def at_rest(T: float = 1.0, u0: float = 1.0) -> IVP:
    return IVP(lambda u: 0.0, u0, T, exact=lambda t: u0, name="rest")


PROBLEMS = {"growth": growth, "decay": decay, "constant": constant_rate, "rest": at_rest}


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid with k start levels and n interior levels, N = k + n - 1."""

    k: int
    n: int
    T: float = 1.0

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise UsageError(f"grid needs k >= 1 and n >= 1, got k={self.k}, n={self.n}")
        if not self.T > 0:
            raise UsageError(f"horizon T must be positive, got {self.T}")

    @property
    def N(self) -> int:
        return self.k + self.n - 1

    @property
    def h(self) -> float:
        return self.T / self.N

    @property
    def size(self) -> int:
        return self.k + self.n

    def times(self):
        import numpy as np

        return np.arange(self.size) * self.h

    @classmethod
    def for_method(cls, m: MultistepMethod, n: int, T: float = 1.0) -> "GridSpec":
        return cls(m.k, n, T)
