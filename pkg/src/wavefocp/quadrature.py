"""Low-level numerics: gamma, Gauss rules, composite quadrature, dense solves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi


class SingularMatrixError(ValueError):
    """Raised when a pivot falls below the singularity threshold."""

    def __init__(self, message: str, pivot: float):
        super().__init__(message)
        self.pivot = pivot


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights on an interval; weights already absorb any kernel weight."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def gamma(x: float) -> float:
    """Gamma function for positive real arguments."""
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"gamma requires finite x > 0, got {x!r}")
    return math.gamma(x)


def gauss_legendre(n: int, a: float, b: float) -> QuadratureRule:
    """n-point Gauss-Legendre rule mapped to [a, b]."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    x, w = _legendre_reference(n)
    half = 0.5 * (b - a)
    return QuadratureRule(nodes=a + half * (x + 1.0), weights=half * w, order=n)


@lru_cache(maxsize=None)
def _legendre_reference(n: int) -> tuple[np.ndarray, np.ndarray]:
    return leggauss(n)


@lru_cache(maxsize=None)
def _jacobi_reference(n: int, exponent: float) -> tuple[np.ndarray, np.ndarray]:
    return roots_jacobi(n, exponent, 0.0)


def gauss_jacobi_right(n: int, a: float, b: float, exponent: float) -> QuadratureRule:
    """Rule for integrals of (b - t)^exponent * f(t) over [a, b].

    The weight (b - t)^exponent is folded into the returned weights, so
    ``rule.integrate(f)`` approximates the weighted integral; exact for
    polynomial f up to degree 2n - 1.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if exponent <= -1.0:
        raise ValueError(f"need exponent > -1, got {exponent}")
    x, w = _jacobi_reference(n, exponent)
    half = 0.5 * (b - a)
    # (b - t) = half * (1 - x) under t = a + half * (x + 1)
    return QuadratureRule(
        nodes=a + half * (x + 1.0),
        weights=(half ** (exponent + 1.0)) * w,
        order=n,
    )


def integrate_piecewise(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float],
    points_per_segment: int = 32,
) -> float:
    """Composite Gauss-Legendre over [0, 1] split at the given breakpoints."""
    bp = np.asarray(breakpoints, dtype=float)
    if bp.size < 2 or bp[0] != 0.0 or bp[-1] != 1.0:
        raise ValueError("breakpoints must start at 0 and end at 1")
    if np.any(np.diff(bp) <= 0.0):
        raise ValueError("breakpoints must be strictly increasing")
    if np.any(bp < 0.0) or np.any(bp > 1.0):
        raise ValueError("breakpoints must lie in [0, 1]")
    total = 0.0
    for lo, hi in zip(bp[:-1], bp[1:]):
        rule = gauss_legendre(points_per_segment, lo, hi)
        total += rule.integrate(f)
    return total


def graded_breakpoints(
    base: Sequence[float], levels: int = 16, ratio: float = 0.2
) -> np.ndarray:
    """Refine a breakpoint list geometrically toward every base breakpoint.

    Integrands here are piecewise powers of zeta with unbounded derivatives
    at segment endpoints; geometric grading restores fast convergence of the
    per-segment Gauss rules.
    """
    base = np.asarray(base, dtype=float)
    pts = [base]
    for lo, hi in zip(base[:-1], base[1:]):
        width = hi - lo
        offs = width * ratio ** np.arange(1, levels + 1)
        pts.append(lo + offs)
        pts.append(hi - offs)
    out = np.unique(np.concatenate(pts))
    return out[(out >= base[0]) & (out <= base[-1])]


def condition_estimate(A: np.ndarray) -> float:
    """1-norm condition number estimate."""
    A = np.asarray(A, dtype=float)
    try:
        return float(np.linalg.cond(A, 1))
    except np.linalg.LinAlgError:
        return float("inf")


_PIVOT_RTOL = 1e-14


def solve_linear(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Partial-pivoted dense solve with an explicit singularity check."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    if b.shape[0] != A.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b has {b.shape[0]} rows")
    lu, piv = scipy.linalg.lu_factor(A)
    pivots = np.abs(np.diag(lu))
    threshold = _PIVOT_RTOL * np.linalg.norm(A, np.inf)
    if pivots.min() < threshold:
        raise SingularMatrixError(
            f"matrix numerically singular: pivot {pivots.min():.3e} "
            f"below threshold {threshold:.3e}",
            pivot=float(pivots.min()),
        )
    return scipy.linalg.lu_solve((lu, piv), b)


def solve_spd(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cholesky solve for SPD matrices, falling back to the pivoted path."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    try:
        c, low = scipy.linalg.cho_factor(A)
    except scipy.linalg.LinAlgError:
        return solve_linear(A, b)
    return scipy.linalg.cho_solve((c, low), b)
