"""Riemann-Liouville integral and Caputo derivative reference oracles.

These operate on black-box callables and are deliberately independent of
the wavelet machinery, so they can validate solver output.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .quadrature import gamma, gauss_jacobi_right, gauss_legendre, graded_breakpoints

_DEFAULT_POINTS = 32


def _validate_order(mu: float) -> None:
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"need 0 < mu <= 1, got {mu}")


def _weighted_integral(
    f: Callable[[np.ndarray], np.ndarray],
    exponent: float,
    zeta: float,
    breakpoints: Sequence[float] | None,
    n_points: int,
    merge_fraction: float = 0.0,
) -> float:
    """Integral of (zeta - tau)^exponent * f(tau) over [0, zeta].

    The segment touching zeta uses a Gauss-Jacobi rule that absorbs the
    endpoint singularity; earlier segments evaluate the (there finite)
    kernel directly under Gauss-Legendre. Breakpoints within
    merge_fraction * zeta of the upper limit are absorbed into the Jacobi
    segment: a Gauss-Legendre segment ending just below zeta would see a
    near-singular kernel it cannot resolve.
    """
    cutoff = (1.0 - merge_fraction) * zeta
    cuts = [0.0, zeta]
    if breakpoints is not None:
        cuts.extend(b for b in breakpoints if 0.0 < b < zeta and b <= cutoff)
    cuts = sorted(set(cuts))
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi == zeta:
            rule = gauss_jacobi_right(n_points, lo, hi, exponent)
            total += rule.integrate(f)
        else:
            rule = gauss_legendre(n_points, lo, hi)
            total += float(
                np.dot(rule.weights * (zeta - rule.nodes) ** exponent, f(rule.nodes))
            )
    return total


def rl_integral(
    f: Callable[[np.ndarray], np.ndarray],
    mu: float,
    zeta: float,
    breakpoints: Sequence[float] | None = None,
    n_points: int = _DEFAULT_POINTS,
    merge_fraction: float = 0.0,
) -> float:
    """Riemann-Liouville integral of order mu of f at zeta."""
    _validate_order(mu)
    if zeta <= 0.0:
        raise ValueError(f"need zeta > 0, got {zeta}")
    return (
        _weighted_integral(f, mu - 1.0, zeta, breakpoints, n_points, merge_fraction)
        / gamma(mu)
    )


def caputo_derivative(
    f: Callable[[np.ndarray], np.ndarray],
    f_prime: Callable[[np.ndarray], np.ndarray],
    mu: float,
    zeta: float,
    breakpoints: Sequence[float] | None = None,
    n_points: int = _DEFAULT_POINTS,
    merge_fraction: float = 0.0,
) -> float:
    """Caputo derivative of order mu at zeta; f_prime must be supplied.

    For mu = 1 this is f_prime(zeta) exactly.
    """
    _validate_order(mu)
    if zeta <= 0.0:
        raise ValueError(f"need zeta > 0, got {zeta}")
    if mu == 1.0:
        return float(np.asarray(f_prime(zeta)).reshape(-1)[0])
    weighted = _weighted_integral(
        f_prime, -mu, zeta, breakpoints, n_points, merge_fraction
    )
    return weighted / gamma(1.0 - mu)


def check_inversion_identity(
    f: Callable[[np.ndarray], np.ndarray],
    f_prime: Callable[[np.ndarray], np.ndarray],
    mu: float,
    grid: Sequence[float],
    n_points: int = _DEFAULT_POINTS,
) -> float:
    """Max-abs residual of I^mu(D^mu f)(z) - (f(z) - f(0)) over the grid."""
    _validate_order(mu)
    f0 = float(np.asarray(f(0.0)).reshape(-1)[0])
    # Both integrands can have algebraic singularities at tau = 0 (e.g.
    # f' ~ tau^(mu-1)); geometric grading toward the origin restores the
    # per-segment Gauss convergence.
    graded = graded_breakpoints([0.0, 1.0], levels=18)

    def dmu(tau: np.ndarray) -> np.ndarray:
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        return np.array(
            [
                caputo_derivative(
                    f, f_prime, mu, t, breakpoints=graded,
                    n_points=n_points, merge_fraction=0.5,
                )
                if t > 0.0
                else 0.0
                for t in tau
            ]
        )

    worst = 0.0
    for z in grid:
        if z <= 0.0:
            continue
        lhs = rl_integral(
            dmu, mu, float(z), breakpoints=graded,
            n_points=n_points, merge_fraction=0.5,
        )
        worst = max(worst, abs(lhs - (float(np.asarray(f(z)).reshape(-1)[0]) - f0)))
    return worst


def finite_difference_derivative(
    f: Callable[[float], float], h: float = 1e-4
) -> Callable[[np.ndarray], np.ndarray]:
    """5-point central difference with one Richardson step, for black-box f.

    The stencil shifts to stay inside [0, 1] near the endpoints.
    """

    def five_point(x: float, step: float) -> float:
        lo = max(0.0, x - 2 * step)
        if lo + 4 * step > 1.0:
            lo = 1.0 - 4 * step
        t = np.array([lo, lo + step, lo + 2 * step, lo + 3 * step, lo + 4 * step])
        # 5-point derivative at x from the (possibly shifted) stencil via
        # Lagrange differentiation weights.
        w = np.zeros(5)
        for i in range(5):
            for j in range(5):
                if j == i:
                    continue
                prod = 1.0
                for l in range(5):
                    if l in (i, j):
                        continue
                    prod *= (x - t[l]) / (t[i] - t[l])
                w[i] += prod / (t[i] - t[j])
        return float(np.dot(w, [f(ti) for ti in t]))

    def deriv(x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array(
            [
                (4.0 * five_point(xi, h / 2) - five_point(xi, h)) / 3.0
                for xi in xs
            ]
        )
        return out if np.ndim(x) else float(out[0])

    return deriv
