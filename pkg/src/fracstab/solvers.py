"""Two independent time-steppers for D^alpha x = A x + f(x), alpha in (1, 2).

``solve_pc``: fractional Adams-Bashforth-Moulton on the equivalent Volterra
equation x(t) = x0 + x1 t + I^alpha [A x + f(x)], with product-rectangle
predictor weights and product-trapezoidal corrector weights, one corrector
pass per step.

``solve_voc``: stepping of the variation-of-constants representation
x(t) = E_{a,1}(t^a A) x0 + t E_{a,2}(t^a A) x1
      + integral_0^t (t-s)^{a-1} E_{a,a}((t-s)^a A) f(x(s)) ds.
The memory integral uses product quadrature against piecewise-linear
interpolants of f(x(s)); the weakly singular kernel moments are exact,
through the antiderivative identities
  d/du [u^{a m + a}   E^(m)_{a,a+1}(lam u^a)] = u^{a m + a - 1} E^(m)_{a,a}(lam u^a)
  d/du [u^{a m + a+1} E^(m)_{a,a+2}(lam u^a)] = u^{a m + a}     E^(m)_{a,a+1}(lam u^a)
applied per spectral block, so no quadrature error is committed against the
kernel itself.  Cross-agreement of the two methods is the core trust check.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma as gamma_fn

from .errors import Blowup, StepTooLarge
from .matrix_ml import SpectralDecomposition, decompose
from .mittag_leffler import ml_values_accurate
from .systems import InitialData, SystemSpec, Trajectory

BLOWUP_THRESHOLD = 1e12
MAX_STEPS = 10_000_000
_MAX_BLOCK = 4


def _grid(h: float, t_end: float):
    if t_end == 0.0:
        return np.array([0.0])
    if not 0.0 < h <= t_end:
        raise ValueError(f"need 0 < h <= t_end, got h={h}, t_end={t_end}")
    n = int(round(t_end / h))
    if n > MAX_STEPS:
        raise ValueError(f"t_end/h = {t_end / h:.3g} exceeds {MAX_STEPS}")
    return np.arange(n + 1) * h


def _check_state(x, t, x_pred=None):
    norm = float(np.abs(x).max())
    if not np.isfinite(norm) or norm > BLOWUP_THRESHOLD:
        raise Blowup(f"state norm {norm:.3g} at t={t:.6g}", escape_time=t)
    if x_pred is not None:
        resid = float(np.abs(x - x_pred).max())
        if resid > 1e6 * (1.0 + norm):
            raise StepTooLarge(
                f"corrector moved {resid:.3g} at t={t:.6g}; reduce the step"
            )


def solve_pc(s: SystemSpec, init: InitialData, h: float, t_end: float) -> Trajectory:
    """Fractional Adams predictor-corrector on a uniform grid."""
    times = _grid(h, t_end)
    n_steps = len(times) - 1
    alpha = s.order.alpha
    d = s.dim
    if init.x0.shape[0] != d:
        raise ValueError("initial data dimension mismatch")

    x = np.empty((n_steps + 1, d))
    g = np.empty((n_steps + 1, d))
    x[0] = init.x0
    g[0] = s.rhs(init.x0)
    if n_steps == 0:
        return Trajectory(times, x, "predictor_corrector", h)

    k = np.arange(n_steps + 2, dtype=float)
    ka = k**alpha
    ka1 = k ** (alpha + 1.0)
    # predictor: b_k = (k+1)^a - k^a, applied to g_{n-k}
    b = ka[1:] - ka[:-1]
    # corrector inner weights: d_k = (k+2)^{a+1} - 2(k+1)^{a+1} + k^{a+1}
    dw = ka1[2:] + ka1[:-2] - 2.0 * ka1[1:-1]
    cb = h**alpha / gamma_fn(alpha + 1.0)
    cc = h**alpha / gamma_fn(alpha + 2.0)

    for n in range(n_steps):
        t_next = times[n + 1]
        free = init.x0 + init.x1 * t_next
        pred = free + cb * (b[n::-1] @ g[: n + 1])
        gp = s.rhs(pred)
        a0 = float(n) ** (alpha + 1.0) - (n - alpha) * float(n + 1) ** alpha
        mem = a0 * g[0] + gp
        if n >= 1:
            mem = mem + dw[n - 1 :: -1] @ g[1 : n + 1]
        x[n + 1] = free + cc * mem
        _check_state(x[n + 1], t_next, pred)
        g[n + 1] = s.rhs(x[n + 1])
    return Trajectory(times, x, "predictor_corrector", h)


def _block_series_matrices(
    D: SpectralDecomposition, alpha: float, beta: float, u: np.ndarray
) -> np.ndarray:
    """(len(u), d, d) array of sum_m u^{a m}/m! E^(m)_{a,beta}(lam u^a) N^m
    per block, before the outer similarity transform."""
    ua = u**alpha
    out = np.zeros((len(u), D.dim, D.dim), dtype=complex)
    for b in D.blocks:
        z = b.eigenvalue * ua
        acc = np.zeros((len(u), b.size, b.size), dtype=complex)
        Npow = np.eye(b.size, dtype=complex)
        fact = 1.0
        cap = min(b.size, _MAX_BLOCK)
        for m in range(cap):
            dv = ml_values_accurate(alpha, beta, z, order=m)
            acc += (ua**m / fact)[:, None, None] * dv[:, None, None] * Npow[None, :, :]
            Npow = Npow @ b.offdiag
            fact *= m + 1
        sl = slice(b.start, b.start + b.size)
        out[:, sl, sl] = acc
    return out


def _conjugate_real(D: SpectralDecomposition, stack: np.ndarray) -> np.ndarray:
    full = np.einsum("ij,njk,kl->nil", D.transform, stack, D.transform_inv)
    return full.real.copy()


def _free_terms(D, alpha, times, x0, x1) -> np.ndarray:
    """E_{a,1}(t^a A) x0 + t E_{a,2}(t^a A) x1 along the grid."""
    E1 = _conjugate_real(D, _block_series_matrices(D, alpha, 1.0, times))
    E2 = _conjugate_real(D, _block_series_matrices(D, alpha, 2.0, times))
    return np.einsum("nij,j->ni", E1, x0) + times[:, None] * np.einsum(
        "nij,j->ni", E2, x1
    )


def _kernel_panel_weights(D, alpha, h, n_panels):
    """Exact piecewise-linear product-quadrature weights for the memory kernel.

    Over panel k (u in [k h, (k+1) h], u = t - s) the kernel
    K(u) = u^{a-1} E_{a,a}(u^a A) is integrated exactly against the linear
    interpolant of the integrand values at the panel ends:
      P0_k = int K,   P1_k = int (u - k h)/h * K.
    Returns (W_new, W[k] for k=1..n_panels, P1) where W_new weights the value
    at the new time, W[k] the value k panels back, and P1[n-1] the value at
    s = 0 for a history of n panels.
    """
    u = np.arange(n_panels + 1) * h
    phi0 = _conjugate_real(
        D, u[:, None, None] ** alpha * _block_series_matrices(D, alpha, alpha + 1.0, u)
    )
    phi1 = _conjugate_real(
        D,
        u[:, None, None] ** (alpha + 1.0)
        * _block_series_matrices(D, alpha, alpha + 2.0, u),
    )
    p0 = phi0[1:] - phi0[:-1]
    p1 = phi0[1:] - (phi1[1:] - phi1[:-1]) / h
    w_new = p0[0] - p1[0]
    # W[k] multiplies the integrand value k panels behind the new time
    w = np.empty_like(p0)
    w[0] = w_new
    w[1:] = p1[:-1] + p0[1:] - p1[1:]
    return w_new, w, p1


def solve_voc(s: SystemSpec, init: InitialData, h: float, t_end: float) -> Trajectory:
    """Variation-of-constants stepping with exact kernel moments.

    With f = 0 the result equals the closed-form free term to rounding.  The
    nonlinear value at each new time is resolved by one predictor (previous
    value) plus one corrector substitution, mirroring solve_pc.
    """
    times = _grid(h, t_end)
    n_steps = len(times) - 1
    alpha = s.order.alpha
    d = s.dim
    if init.x0.shape[0] != d:
        raise ValueError("initial data dimension mismatch")

    D = decompose(s.A)
    x = np.empty((n_steps + 1, d))
    x[0] = init.x0
    free = _free_terms(D, alpha, times, init.x0, init.x1)
    if n_steps == 0:
        return Trajectory(times, x, "voc_quadrature", h)

    if s.f.is_zero:
        x[:] = free
        norms = np.abs(x).max(axis=1)
        bad = ~np.isfinite(norms) | (norms > BLOWUP_THRESHOLD)
        if bad.any():
            i = int(np.argmax(bad))
            raise Blowup(
                f"state norm {norms[i]:.3g} at t={times[i]:.6g}", escape_time=times[i]
            )
        return Trajectory(times, x, "voc_quadrature", h)

    w_new, w, p1 = _kernel_panel_weights(D, alpha, h, n_steps)
    g = np.empty((n_steps + 1, d))
    g[0] = s.f(init.x0)
    for n in range(1, n_steps + 1):
        acc = free[n].astype(float).copy()
        if n >= 2:
            # sum_{k=1}^{n-1} W_k g_{n-k}  plus the boundary value at s = 0
            acc += np.einsum("kij,kj->i", w[1:n], g[n - 1 : 0 : -1])
            acc += p1[n - 1] @ g[0]
        elif n == 1:
            acc += p1[0] @ g[0]
        pred = acc + w_new @ g[n - 1]
        x[n] = acc + w_new @ s.f(pred)
        _check_state(x[n], times[n], pred)
        g[n] = s.f(x[n])
    return Trajectory(times, x, "voc_quadrature", h)
