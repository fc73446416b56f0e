"""Closed-form success probability and the fixed-success noise threshold.

Under per-qubit depolarizing noise of rate ``p`` the success probability is
``(alpha + beta)^n`` with ``alpha = (1-p)^3`` and ``beta = p(p^2-3p+3)/2``.
Expanding the polynomials gives ``alpha + beta = (1 + (1-p)^3) / 2``, which
makes the threshold invertible in closed form; bisection remains the primary
solver and the closed form is a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

DEFAULT_TARGET = 2.0 / 3.0

BISECT_XTOL = 1e-12
# solver stops two decades inside the residual guarantee
BISECT_FTOL = 1e-12
RESIDUAL_TOL = 1e-10
MAX_BISECT_ITER = 200


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"error probability must lie in [0, 1], got {p}")
    return p


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"qubit count must be a positive integer, got {n}")
    return int(n)


def alpha(p: float) -> float:
    return (1.0 - p) ** 3


def beta(p: float) -> float:
    return p * (p * p - 3.0 * p + 3.0) / 2.0


@dataclass(frozen=True)
class NoiseParams:
    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", _check_p(self.p))

    @property
    def alpha(self) -> float:
        return alpha(self.p)

    @property
    def beta(self) -> float:
        return beta(self.p)

    @property
    def qubit_factor(self) -> float:
        """Per-qubit probability of reading the correct bit."""
        return self.alpha + self.beta


class SuccessProbability(NamedTuple):
    prob: float
    log2_prob: float


def success_probability(n: int, p: float) -> SuccessProbability:
    n = _check_n(n)
    base = NoiseParams(p).qubit_factor
    log_base = math.log(base)
    return SuccessProbability(math.exp(n * log_base), n * log_base / math.log(2.0))


@dataclass(frozen=True)
class ThresholdResult:
    n: int
    p_star: float
    target: float
    residual: float
    iterations: int


def _check_target(n: int, target: float) -> float:
    target = float(target)
    floor = 0.5**n
    if not floor < target < 1.0:
        raise ValueError(
            f"target {target} unreachable for n={n}: must lie strictly between 2^-n={floor:g} and 1"
        )
    return target


def bisect_decreasing(f, lo: float, hi: float, xtol: float, ftol: float, max_iter: int):
    """Root of a strictly decreasing ``f`` with ``f(lo) > 0 > f(hi)``.

    Stops once the bracket is narrower than ``xtol`` and ``|f(mid)| <= ftol``,
    or after ``max_iter`` halvings. Returns ``(root, iterations)``.
    """
    f_lo, f_hi = f(lo), f(hi)
    if not f_lo > 0.0 > f_hi:
        raise ValueError(f"root not bracketed: f({lo})={f_lo}, f({hi})={f_hi}")
    mid = 0.5 * (lo + hi)
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # bracket collapsed to adjacent floats
            return mid, it
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid, it
        if f_mid > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= xtol and abs(f_mid) <= ftol:
            return mid, it
    return mid, max_iter


def threshold_p(n: int, target: float = DEFAULT_TARGET) -> ThresholdResult:
    """Largest depolarizing rate keeping the success probability at ``target``."""
    n = _check_n(n)
    target = _check_target(n, target)

    def excess(p: float) -> float:
        return NoiseParams(p).qubit_factor ** n - target

    p_star, iterations = bisect_decreasing(excess, 0.0, 1.0, BISECT_XTOL, BISECT_FTOL, MAX_BISECT_ITER)
    residual = abs(excess(p_star))
    if residual > RESIDUAL_TOL:
        raise ArithmeticError(f"bisection residual {residual:.3e} exceeds {RESIDUAL_TOL:g} for n={n}")
    return ThresholdResult(n, p_star, target, residual, iterations)


def threshold_closed_form(n: int, target: float = DEFAULT_TARGET) -> float:
    """Exact inverse ``1 - (2 target^(1/n) - 1)^(1/3)``, evaluated without cancellation."""
    n = _check_n(n)
    target = _check_target(n, target)
    # 2 t^(1/n) - 1 = 1 + y with y = 2 expm1(ln t / n)
    y = 2.0 * math.expm1(math.log(target) / n)
    return -math.expm1(math.log1p(y) / 3.0)


def threshold_small_p_approx(n: int, target: float = DEFAULT_TARGET) -> float:
    """First-order threshold ``(2/3)(1 - target^(1/n))`` from ``alpha + beta ~ 1 - 3p/2``.

    For ``target = 2/3`` this is the textbook asymptote; other targets use
    the same expansion and are an extension.
    """
    n = _check_n(n)
    return (2.0 / 3.0) * -math.expm1(math.log(target) / n)
