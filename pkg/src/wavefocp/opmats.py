"""Gram, integration, and product operational matrices for the wavelet basis.

Gram and triple-product entries are exact monomial integrals; the
integration matrices are least-squares projections of the (fractionally)
integrated basis functions, solved against the Gram matrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import betainc

from .basis import (
    WaveletParams,
    eval_basis_many,
    monomial_coefficients,
    support_interval,
)
from .quadrature import (
    condition_estimate,
    gamma,
    gauss_legendre,
    graded_breakpoints,
    solve_spd,
)

_COND_WARN_LIMIT = 1e12


def _power_integral(p: float, lo: float, hi: float) -> float:
    """Integral of zeta**p over [lo, hi] for p > -1."""
    return (hi ** (p + 1.0) - lo ** (p + 1.0)) / (p + 1.0)


def gram_matrix(params: WaveletParams) -> np.ndarray:
    """D(mu) = integral of Psi Psi^T over [0, 1], by exact monomial integration."""
    D = np.zeros((params.m_hat, params.m_hat))
    for n in range(1, params.n_blocks + 1):
        lo, hi = support_interval(params, n)
        coefs = [monomial_coefficients(params, n, m) for m in range(params.M)]
        for m1 in range(params.M):
            for m2 in range(m1, params.M):
                total = 0.0
                for s1, c1 in enumerate(coefs[m1]):
                    for s2, c2 in enumerate(coefs[m2]):
                        total += c1 * c2 * _power_integral(
                            params.mu * (s1 + s2), lo, hi
                        )
                i, j = params.flat_index(n, m1), params.flat_index(n, m2)
                D[i, j] = D[j, i] = total
    return D


def triple_product_tensor(params: WaveletParams) -> np.ndarray:
    """T[i, j, l] = integral of psi_i psi_j psi_l; zero across distinct blocks."""
    T = np.zeros((params.m_hat, params.m_hat, params.m_hat))
    for n in range(1, params.n_blocks + 1):
        lo, hi = support_interval(params, n)
        coefs = [monomial_coefficients(params, n, m) for m in range(params.M)]
        base = (n - 1) * params.M
        for m1 in range(params.M):
            for m2 in range(m1, params.M):
                for m3 in range(m2, params.M):
                    total = 0.0
                    for s1, c1 in enumerate(coefs[m1]):
                        for s2, c2 in enumerate(coefs[m2]):
                            for s3, c3 in enumerate(coefs[m3]):
                                total += c1 * c2 * c3 * _power_integral(
                                    params.mu * (s1 + s2 + s3), lo, hi
                                )
                    for a, b, c in {
                        (m1, m2, m3), (m1, m3, m2), (m2, m1, m3),
                        (m2, m3, m1), (m3, m1, m2), (m3, m2, m1),
                    }:
                        T[base + a, base + b, base + c] = total
    return T


def quadrature_nodes(
    params: WaveletParams,
    extra_breakpoints: Sequence[float] = (),
    points_per_segment: int = 32,
) -> tuple[np.ndarray, np.ndarray]:
    """Graded composite Gauss-Legendre nodes/weights over [0, 1].

    Segments split at every wavelet subinterval boundary (plus any extra
    breakpoints), geometrically refined toward the segment endpoints.
    """
    base = np.unique(np.concatenate([params.breakpoints(), np.asarray(extra_breakpoints, dtype=float)]))
    if base[0] < 0.0 or base[-1] > 1.0:
        raise ValueError("breakpoints must lie in [0, 1]")
    pieces = graded_breakpoints(base)
    nodes, weights = [], []
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        rule = gauss_legendre(points_per_segment, lo, hi)
        nodes.append(rule.nodes)
        weights.append(rule.weights)
    return np.concatenate(nodes), np.concatenate(weights)


def inner_products(
    f: Callable[[np.ndarray], np.ndarray],
    params: WaveletParams,
    extra_breakpoints: Sequence[float] = (),
) -> np.ndarray:
    """Vector of integrals of f * psi_j over [0, 1]."""
    nodes, weights = quadrature_nodes(params, extra_breakpoints)
    basis_vals = eval_basis_many(params, nodes)
    fv = np.asarray(f(nodes), dtype=float)
    if fv.ndim == 0:
        fv = np.full(nodes.shape, float(fv))
    return basis_vals @ (weights * fv)


def rl_integral_of_wavelet(
    params: WaveletParams, i: int, order: float, zeta: np.ndarray
) -> np.ndarray:
    """Riemann-Liouville integral of order `order` of basis function i.

    Closed form via the regularized incomplete beta function:
    the wavelet is a sum of powers zeta**(mu*s) on [lo, hi), and
    int_lo^up (z - t)^(order-1) t^q dt
        = z^(q+order) B(q+1, order) [I_{up/z} - I_{lo/z}](q+1, order).
    """
    if not 0.0 < order <= 1.0:
        raise ValueError(f"need 0 < order <= 1, got {order}")
    zeta = np.asarray(zeta, dtype=float)
    n = params.block_of_index(i)
    m = params.degree_of_index(i)
    lo, hi = support_interval(params, n)
    coefs = monomial_coefficients(params, n, m)
    out = np.zeros_like(zeta)
    active = zeta > lo
    z = zeta[active]
    up = np.minimum(z, hi)
    acc = np.zeros_like(z)
    for s, c in enumerate(coefs):
        q = params.mu * s
        beta_qo = gamma(q + 1.0) * gamma(order) / gamma(q + 1.0 + order)
        frac = betainc(q + 1.0, order, up / z)
        if lo > 0.0:
            frac = frac - betainc(q + 1.0, order, lo / z)
        acc += c * z ** (q + order) * beta_qo * frac
    out[active] = acc / gamma(order)
    return out


@dataclass(frozen=True)
class OperationalMatrices:
    """Immutable bundle of the matrices a solve needs."""

    params: WaveletParams
    frac_order: float
    D: np.ndarray
    P1: np.ndarray
    Pmu: np.ndarray
    triple: np.ndarray
    cond_D: float

    def solve_D(self, rhs: np.ndarray) -> np.ndarray:
        """Solve D x = rhs (D is SPD)."""
        return solve_spd(self.D, rhs)


def project(
    f: Callable[[np.ndarray], np.ndarray],
    params: WaveletParams,
    mats: OperationalMatrices,
    extra_breakpoints: Sequence[float] = (),
) -> np.ndarray:
    """Least-squares coefficients of f in the wavelet basis."""
    return mats.solve_D(inner_products(f, params, extra_breakpoints))


def _integrate_power_against_wavelet(
    params: WaveletParams, j: int, p: float, alpha: float, beta: float
) -> float:
    """Exact integral of zeta**p * psi_j(zeta) over [alpha, beta] (clipped to support)."""
    n = params.block_of_index(j)
    m = params.degree_of_index(j)
    lo, hi = support_interval(params, n)
    a, b = max(alpha, lo), min(beta, hi)
    if a >= b:
        return 0.0
    coefs = monomial_coefficients(params, n, m)
    return sum(
        c * _power_integral(p + params.mu * s, a, b) for s, c in enumerate(coefs)
    )


def integration_matrix_first_order(
    params: WaveletParams, mats: OperationalMatrices
) -> np.ndarray:
    """P1: row i projects the running integral of psi_i back onto the basis.

    Antiderivatives are exact (piecewise powers of zeta), as are the
    projection inner products, so the only approximation is the
    least-squares truncation itself.
    """
    m_hat = params.m_hat
    B = np.zeros((m_hat, m_hat))
    for i in range(m_hat):
        n_i = params.block_of_index(i)
        m_i = params.degree_of_index(i)
        lo_i, hi_i = support_interval(params, n_i)
        coefs = monomial_coefficients(params, n_i, m_i)
        # F(z) = sum_s c_s z**(mu*s+1)/(mu*s+1); running integral is
        # 0 before lo_i, F(z) - F(lo_i) inside, F(hi_i) - F(lo_i) after.
        def F(z: float) -> float:
            return sum(
                c * z ** (params.mu * s + 1.0) / (params.mu * s + 1.0)
                for s, c in enumerate(coefs)
            )

        F_lo, F_hi = F(lo_i), F(hi_i)
        for j in range(m_hat):
            n_j = params.block_of_index(j)
            if n_j < n_i:
                continue
            val = 0.0
            if n_j == n_i:
                for s, c in enumerate(coefs):
                    p = params.mu * s + 1.0
                    val += (c / p) * _integrate_power_against_wavelet(
                        params, j, p, lo_i, hi_i
                    )
                val -= F_lo * _integrate_power_against_wavelet(
                    params, j, 0.0, lo_i, hi_i
                )
            else:
                val = (F_hi - F_lo) * _integrate_power_against_wavelet(
                    params, j, 0.0, 0.0, 1.0
                )
            B[i, j] = val
    return mats.solve_D(B.T).T


def integration_matrix_fractional(
    params: WaveletParams, mats: OperationalMatrices, order: float | None = None
) -> np.ndarray:
    """P^mu of the stated order: projection of the RL integral of each psi_i."""
    order = params.mu if order is None else order
    nodes, weights = quadrature_nodes(params)
    basis_vals = eval_basis_many(params, nodes)
    rl_vals = np.vstack(
        [rl_integral_of_wavelet(params, i, order, nodes) for i in range(params.m_hat)]
    )
    B = (rl_vals * weights) @ basis_vals.T
    return mats.solve_D(B.T).T


def product_matrix(c: np.ndarray, mats: OperationalMatrices) -> np.ndarray:
    """Matrix C~ with Psi Psi^T c ~= C~ Psi; linear in c."""
    c = np.asarray(c, dtype=float)
    if c.shape != (mats.params.m_hat,):
        raise ValueError(f"coefficient vector must have length {mats.params.m_hat}")
    G = np.einsum("ijl,j->il", mats.triple, c)
    return mats.solve_D(G.T).T


def build_operational_matrices(
    params: WaveletParams, frac_order: float | None = None
) -> OperationalMatrices:
    """Construct the full bundle for the given basis and integration order."""
    frac_order = params.mu if frac_order is None else frac_order
    D = gram_matrix(params)
    cond_D = condition_estimate(D)
    if cond_D > _COND_WARN_LIMIT:
        warnings.warn(
            f"Gram matrix condition estimate {cond_D:.2e} exceeds "
            f"{_COND_WARN_LIMIT:.0e}; results may lose accuracy",
            stacklevel=2,
        )
    triple = triple_product_tensor(params)
    shell = OperationalMatrices(
        params=params, frac_order=frac_order, D=D,
        P1=np.empty(0), Pmu=np.empty(0), triple=triple, cond_D=cond_D,
    )
    P1 = integration_matrix_first_order(params, shell)
    Pmu = integration_matrix_fractional(params, shell, frac_order)
    return OperationalMatrices(
        params=params, frac_order=frac_order, D=D,
        P1=P1, Pmu=Pmu, triple=triple, cond_D=cond_D,
    )


def basis_moment_vector(params: WaveletParams) -> np.ndarray:
    """Exact integrals of each psi_j over [0, 1]."""
    return np.array(
        [
            _integrate_power_against_wavelet(params, j, 0.0, 0.0, 1.0)
            for j in range(params.m_hat)
        ]
    )
