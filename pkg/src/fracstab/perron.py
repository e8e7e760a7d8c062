"""Quantitative constants of the contraction proof and the fixed-point iteration.

For a stable spectrum the construction produces the ledger
(C, M, t0, gamma, epsilon, q, delta): C bounds the absolute kernel integral
sup_t int_0^t |u^{a-1} E_{a,a}(lam u^a)| du over the eigenvalues, gamma scales
nilpotent couplings so gamma*C < 1/2, epsilon is the largest ball radius with
contraction factor q = C * l_h(epsilon) below the target, and
delta = epsilon (1 - q) / (sup|E_{a,1}| + sup t|E_{a,2}|)
admits initial data whose fixed-point iteration stays in the epsilon-ball.

The kernel quadrature works in the variable x = u^a (the substitution
absorbs u^{a-1} exactly, leaving the entire function E_{a,a}(lam x)); its
signed version has the closed form int_0^inf = -1/lam, which is asserted
internally before the absolute integral is trusted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractionFailed,
    DivergedIterate,
    FracstabError,
    HypothesisFailed,
    SectorViolation,
)
from .matrix_ml import SpectralDecomposition, decompose, gamma_scale
from .mittag_leffler import ml_values_accurate as _ml_quad
from .stability import ASYMPTOTICALLY_STABLE, INSIDE, FractionalOrder, classify, sector_test
from .systems import InitialData, SystemSpec, Trajectory

DEFAULT_T_MAX = 200.0
DEFAULT_PANEL_H = 0.25
Q_TARGET = 0.9
SUP_GRID_POINTS = 2048
SUP_GRID_T_MAX = 1e3
SUP_SAFETY = 1.05
TAIL_SAFETY = 1.25

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(16)


def _require_in_sector(order: FractionalOrder, lam: complex) -> None:
    margin, verdict = sector_test(lam, order)
    if verdict != INSIDE:
        raise SectorViolation(
            f"lambda = {lam:.6g} has sector margin {margin:.3e}; the kernel "
            "integral may diverge"
        )


def _panel_edges(alpha: float, t_max: float, h: float) -> np.ndarray:
    """Panel edges in x = u^a: uniform in u through the transient, geometric
    beyond (the kernel's oscillation period in x grows with x)."""
    u_lin = min(4.0, t_max)
    edges = list(np.arange(0.0, u_lin + 0.5 * h, h))
    u = edges[-1]
    while u < t_max:
        u = min(u * 1.2, t_max)
        edges.append(u)
    if edges[-1] < t_max:
        edges.append(t_max)
    return np.asarray(edges) ** alpha


def _bisect_zeros(alpha, lam, lo, hi, iters=60):
    """Vectorized bisection for zeros of x -> Re E_{a,a}(lam x) on brackets."""
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    slo = np.sign(_ml_quad(alpha, alpha, lam * lo).real)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        sm = np.sign(_ml_quad(alpha, alpha, lam * mid).real)
        same = sm == slo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _gauss_nodes(a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid[:, None] + half[:, None] * _GAUSS_X[None, :], half


def _kernel_quadrature(order: FractionalOrder, lam: complex, t_max: float, h: float):
    """(signed, absolute) values of int_0^{t_max} u^{a-1} E_{a,a}(lam u^a) du.

    Composite Gauss in x = u^a; for real lam the integrand is real and panels
    straddling a sign change are split at bisected zeros so the absolute
    integral carries no kink error.
    """
    alpha = order.alpha
    edges = _panel_edges(alpha, t_max, h)
    a, b = edges[:-1], edges[1:]
    nodes, half = _gauss_nodes(a, b)
    vals = _ml_quad(alpha, alpha, lam * nodes.ravel()).reshape(nodes.shape)
    panel_signed = (vals @ _GAUSS_W) * half
    real_case = abs(complex(lam).imag) == 0.0

    if not real_case:
        panel_abs = (np.abs(vals) @ _GAUSS_W) * half
        return panel_signed.sum() / alpha, panel_abs.sum() / alpha

    signs = np.sign(vals.real)
    mixed = np.abs(signs.sum(axis=1)) != signs.shape[1]
    panel_abs = np.abs(panel_signed.real).astype(float)

    if mixed.any():
        # bracket each sign change between adjacent nodes, bisect, re-Gauss
        for p in np.nonzero(mixed)[0]:
            xs = np.concatenate(([a[p]], nodes[p], [b[p]]))
            vs = _ml_quad(alpha, alpha, lam * xs).real
            s = np.sign(vs)
            flips = np.nonzero(s[:-1] * s[1:] < 0)[0]
            zeros = _bisect_zeros(alpha, lam, xs[flips], xs[flips + 1])
            pieces = np.concatenate(([a[p]], np.sort(zeros), [b[p]]))
            sn, sh = _gauss_nodes(pieces[:-1], pieces[1:])
            sv = _ml_quad(alpha, alpha, lam * sn.ravel()).reshape(sn.shape).real
            sub = (sv @ _GAUSS_W) * sh
            panel_signed[p] = sub.sum()
            panel_abs[p] = np.abs(sub).sum()
    return complex(panel_signed.sum()) / alpha, float(panel_abs.sum()) / alpha


def kernel_integral_signed(
    order: FractionalOrder,
    lam: complex,
    t_max: float = DEFAULT_T_MAX,
    h: float = DEFAULT_PANEL_H,
) -> complex:
    """Quadrature of the signed kernel integral over [0, inf).

    The exact value is -1/lam (antiderivative E_{a,1}(lam u^a)/lam), which
    makes this the calibration oracle for the quadrature machinery.  The tail
    beyond t_max is the antiderivative evaluated there.
    """
    _require_in_sector(order, lam)
    if not (t_max > 0 and h > 0):
        raise ValueError("t_max and h must be positive")
    signed, _ = _kernel_quadrature(order, lam, t_max, h)
    tail = -_ml_quad(order.alpha, 1.0, lam * t_max**order.alpha)[0] / lam
    return complex(signed + tail)


def algebraic_tail_fit(
    order: FractionalOrder, lam: complex, t_grid
) -> tuple[float, float]:
    """Fit (M, t0) with |t^{a-1} E_{a,a}(lam t^a)| < M / t^{a+1} for t > t0.

    M is 1.25x the grid maximum of the scaled product (25% safety margin),
    t0 the grid minimum; callers property-check the bound on finer grids.
    """
    _require_in_sector(order, lam)
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or len(t) < 2 or (np.diff(t) <= 0).any() or t[0] < 1.0:
        raise ValueError("t_grid must be increasing with min >= 1")
    alpha = order.alpha
    vals = _ml_quad(alpha, alpha, lam * t**alpha)
    prod = t ** (alpha - 1.0) * np.abs(vals) * t ** (alpha + 1.0)
    return TAIL_SAFETY * float(prod.max()), float(t[0])


def kernel_integral_sup(
    order: FractionalOrder,
    lam: complex,
    t_max: float = DEFAULT_T_MAX,
    h: float = DEFAULT_PANEL_H,
) -> float:
    """C(alpha, lam): the absolute kernel integral plus its algebraic tail bound.

    The integrand is nonnegative, so the sup over t equals the full-line
    integral: quadrature over [0, t_max] plus M/(alpha t_max^alpha) from the
    fitted tail bound.  Before the absolute value is trusted, the signed
    integral must reproduce -1/lam to 1e-5 relative; a violation means the
    quadrature or the evaluator is broken and raises.
    """
    _require_in_sector(order, lam)
    if not (t_max > 0 and h > 0):
        raise ValueError("t_max and h must be positive")
    alpha = order.alpha
    signed, absolute = _kernel_quadrature(order, lam, t_max, h)
    tail_signed = -_ml_quad(alpha, 1.0, lam * t_max**alpha)[0] / lam
    exact = -1.0 / lam
    if abs(signed + tail_signed - exact) > 1e-5 * abs(exact):
        raise FracstabError(
            f"kernel quadrature failed its signed calibration at lam={lam:.6g}: "
            f"{signed + tail_signed:.10g} vs {exact:.10g}"
        )
    M, _ = algebraic_tail_fit(
        order, lam, np.logspace(np.log10(max(1.0, t_max / 20.0)), np.log10(10.0 * t_max), 200)
    )
    return float(absolute + M / (alpha * t_max**alpha))


def _scalar_sup(order: FractionalOrder, lam: complex, beta: float, weight_t: bool) -> float:
    """sup_t |E_{a,beta}(lam t^a)| (weighted by t when asked) via a log grid
    on (0, 1e3] plus endpoints; decay beyond the grid is algebraic, covered
    by the 1.05 safety factor."""
    t = np.concatenate(([0.0], np.logspace(-3.0, np.log10(SUP_GRID_T_MAX), SUP_GRID_POINTS)))
    vals = np.abs(_ml_quad(order.alpha, beta, lam * t**order.alpha))
    if weight_t:
        vals = t * vals
    return SUP_SAFETY * float(vals.max())


def _distinct_eigenvalues(D: SpectralDecomposition) -> list[complex]:
    """Block eigenvalues, conjugate pairs collapsed (their kernel integrals
    and sups coincide for real systems)."""
    out: list[complex] = []
    for b in D.blocks:
        lam = complex(b.eigenvalue)
        if any(abs(lam - o) < 1e-14 or abs(np.conj(lam) - o) < 1e-14 for o in out):
            continue
        out.append(lam)
    return out


@dataclass(frozen=True)
class PerronConstants:
    """Quantitative ledger of the contraction construction."""

    C: float
    M: float
    t0: float
    gamma: float
    epsilon: float
    q: float
    delta: float
    E1_sup: float
    tE2_sup: float

    def to_dict(self) -> dict:
        return {
            "C": self.C,
            "M": self.M,
            "t0": self.t0,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "q": self.q,
            "delta": self.delta,
            "E1_sup": self.E1_sup,
            "tE2_sup": self.tE2_sup,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _transformed_pieces(s: SystemSpec, gamma: float):
    """Gamma-scaled decomposition plus the Lipschitz data of the transformed
    nonlinearity h(y) = N y + (TP)^{-1} f(TP y)."""
    Dg = gamma_scale(decompose(s.A), gamma)
    TP = Dg.transform
    TPinv = Dg.transform_inv
    N = Dg.block_matrix() - np.diag(Dg.eigenvalues)
    ell_N = float(np.abs(N).sum(axis=1).max())
    k_plus = float(np.abs(TP).sum(axis=1).max())
    k_minus = float(np.abs(TPinv).sum(axis=1).max())
    return Dg, N, ell_N, k_plus, k_minus


def _lipschitz_h(s: SystemSpec, ell_N, k_plus, k_minus, r: float) -> float:
    if s.f.is_zero:
        return ell_N
    return ell_N + k_minus * k_plus * s.f.lipschitz_bound(k_plus * r)


def build_constants(
    s: SystemSpec,
    t_max: float = DEFAULT_T_MAX,
    h: float = DEFAULT_PANEL_H,
    q_target: float = Q_TARGET,
) -> PerronConstants:
    """Construct the contraction ledger for a spectrally stable system.

    epsilon is chosen by bisection as the largest radius in (0, 1] keeping
    q = C * l_h(epsilon) at or below q_target, which makes delta as large
    (and the downstream checks as demanding) as the construction allows.
    """
    report = classify(s.A, s.order)
    if report.overall != ASYMPTOTICALLY_STABLE:
        raise HypothesisFailed(
            f"spectrum is not strictly inside the sector (overall: {report.overall})"
        )
    D = decompose(s.A)
    lams = _distinct_eigenvalues(D)
    C = max(kernel_integral_sup(s.order, lam, t_max, h) for lam in lams)
    gamma = min(0.4 / C, 1.0)
    _, _, ell_N, k_plus, k_minus = _transformed_pieces(s, gamma)

    def q_of(r):
        return C * _lipschitz_h(s, ell_N, k_plus, k_minus, r)

    eps_floor = 1e-12
    if q_of(eps_floor) > q_target:
        raise ContractionFailed(
            f"q = C*l_h = {q_of(eps_floor):.6g} > {q_target} already at radius "
            f"{eps_floor:.0e} (C = {C:.6g}, nilpotent part {ell_N:.6g})"
        )
    if q_of(1.0) <= q_target:
        epsilon = 1.0
    else:
        lo, hi = eps_floor, 1.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if q_of(mid) <= q_target:
                lo = mid
            else:
                hi = mid
        epsilon = lo
    q = q_of(epsilon)

    E1 = max(_scalar_sup(s.order, lam, 1.0, weight_t=False) for lam in lams)
    tE2 = max(_scalar_sup(s.order, lam, 2.0, weight_t=True) for lam in lams)
    delta = epsilon * (1.0 - q) / (E1 + tE2)

    fit_grid = np.logspace(0.0, 3.0, 256)
    fits = [algebraic_tail_fit(s.order, lam, fit_grid) for lam in lams]
    M = max(f[0] for f in fits)
    t0 = fits[0][1]
    return PerronConstants(C, M, t0, gamma, epsilon, q, delta, E1, tE2)


class PerronOperator:
    """Discretized fixed-point operator on grid functions in y-coordinates.

    xi -> free + int_0^t (t-s)^{a-1} E_{a,a}(lam_i (t-s)^a) h_i(xi(s)) ds
    per coordinate, with the same exact panel moments as the solver and
    piecewise-linear interpolation of h(xi).
    """

    def __init__(self, s: SystemSpec, init: InitialData, pc: PerronConstants,
                 h: float, t_end: float):
        if init.x0.shape[0] != s.dim:
            raise ValueError("initial data dimension mismatch")
        alpha = s.order.alpha
        self.spec = s
        self.pc = pc
        self.step = float(h)
        Dg, N, _, _, _ = _transformed_pieces(s, pc.gamma)
        self.TP = Dg.transform
        self.TPinv = Dg.transform_inv
        self.N = N
        self.lams = Dg.eigenvalues
        y0 = self.TPinv @ init.x0
        y1 = self.TPinv @ init.x1
        if max(np.abs(y0).max(), np.abs(y1).max()) > pc.delta * (1.0 + 1e-9):
            raise ValueError(
                "initial data exceeds the admissible radius delta in "
                "transformed coordinates"
            )

        if t_end == 0.0:
            self.times = np.array([0.0])
        else:
            if not 0.0 < h <= t_end:
                raise ValueError("need 0 < h <= t_end")
            self.times = np.arange(int(round(t_end / h)) + 1) * h
        n = len(self.times) - 1
        ta = self.times**alpha

        d = s.dim
        self.free = np.zeros((n + 1, d), dtype=complex)
        self.weights = np.zeros((d, n + 1), dtype=complex)
        self.p1 = np.zeros((d, max(n, 1)), dtype=complex)
        u = np.arange(n + 2) * h
        ua = u**alpha
        for c in range(d):
            lam = self.lams[c]
            e1 = _ml_quad(alpha, 1.0, lam * ta)
            e2 = _ml_quad(alpha, 2.0, lam * ta)
            self.free[:, c] = e1 * y0[c] + self.times * e2 * y1[c]
            if n == 0:
                continue
            phi0 = ua * _ml_quad(alpha, alpha + 1.0, lam * ua)
            phi1 = u * ua * _ml_quad(alpha, alpha + 2.0, lam * ua)
            p0 = phi0[1:] - phi0[:-1]
            p1 = phi0[1:] - (phi1[1:] - phi1[:-1]) / h
            self.weights[c, 0] = p0[0] - p1[0]
            self.weights[c, 1:] = p1[:n] + p0[1 : n + 1] - p1[1 : n + 1]
            self.p1[c] = p1[:n]

    def h_map(self, xi: np.ndarray) -> np.ndarray:
        """Transformed nonlinearity along the grid: N xi + (TP)^{-1} f(TP xi)."""
        out = xi @ self.N.T
        if not self.spec.f.is_zero:
            out = out + self.spec.f(xi @ self.TP.T) @ self.TPinv.T
        return out

    def apply(self, xi: np.ndarray) -> np.ndarray:
        n = len(self.times) - 1
        if n == 0:
            return self.free.copy()
        hv = self.h_map(xi)
        out = self.free.copy()
        for c in range(self.spec.dim):
            conv = np.convolve(self.weights[c], hv[:, c])[: n + 1]
            # the value at s = 0 carries the boundary weight P1[n-1], not W[n]
            corr = np.zeros(n + 1, dtype=complex)
            corr[1:] = (self.p1[c] - self.weights[c, 1:]) * hv[0, c]
            conv = conv + corr
            conv[0] = 0.0
            out[:, c] += conv
        return out

    def to_states(self, xi: np.ndarray) -> np.ndarray:
        return (xi @ self.TP.T).real.copy()


def _run_perron(s, init, pc, h, t_end, iters):
    if iters < 1:
        raise ValueError("iters must be >= 1")
    op = PerronOperator(s, init, pc, h, t_end)
    xi = op.free.copy()
    distances = []
    for _ in range(iters):
        nxt = op.apply(xi)
        distances.append(float(np.abs(nxt - xi).max()))
        xi = nxt
        if np.abs(xi).max() > 2.0 * pc.epsilon:
            raise DivergedIterate(
                f"iterate sup norm {np.abs(xi).max():.3g} escaped twice the "
                f"contraction radius {pc.epsilon:.3g}"
            )
    traj = Trajectory(op.times, op.to_states(xi), "perron_iteration", op.step if t_end else 0.0)
    return traj, np.asarray(distances)


def iterate_perron(
    s: SystemSpec,
    init: InitialData,
    pc: PerronConstants,
    h: float,
    t_end: float,
    iters: int,
) -> Trajectory:
    """Apply the discretized operator iters times from the affine free term,
    returning the final iterate mapped back to original coordinates."""
    traj, _ = _run_perron(s, init, pc, h, t_end, iters)
    return traj


def contraction_distances(
    s: SystemSpec,
    init: InitialData,
    pc: PerronConstants,
    h: float,
    t_end: float,
    iters: int,
) -> np.ndarray:
    """Successive sup-distances ||xi_{k+1} - xi_k||_inf of the iteration;
    their ratios witness the contraction factor."""
    _, distances = _run_perron(s, init, pc, h, t_end, iters)
    return distances
