"""Numerical refutation of exponential decay bounds for Mittag-Leffler tails.

For alpha in (1, 2), lambda > 0 and beta in {1, alpha, 2}, the quantity
|E_{alpha,beta}(-lambda t^alpha)| decays only algebraically: the scaled
product |E| * t^p (p = alpha for beta in {1, 2}, p = 2 alpha for beta =
alpha, where a Gamma pole kills the leading tail term) stabilizes to a
positive constant.  Consequently a positive N with |E| > N / t^p exists, and
|E| eventually dominates exp(-lambda t) by an ever-growing factor.  Any
argument assuming |E| <= const * exp(-lambda t) is therefore unsound; this
module measures N, the onset times, and the margin curves.

E oscillates through zero at moderate t, so the lower-bound constant is
fitted on the final decade of the grid (where the product has settled) and
the onset time t_star is the first grid point from which the bound holds all
the way out, which automatically lands past the last sign change.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import Unstabilized
from .mittag_leffler import ml_values_accurate

GRID_POINTS_PER_DECADE = 512
DEFAULT_T_MAX = 1e3
STABILIZATION_OSCILLATION = 0.5
_EXP_FLOOR_ARG = 700.0


def _validate(alpha: float, lam: float, beta: float, t_max: float):
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (1, 2), got {alpha}")
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if not t_max >= 100.0:
        raise ValueError(f"t_max must be at least 100, got {t_max}")
    if not any(abs(beta - b) < 1e-12 for b in (1.0, alpha, 2.0)):
        raise ValueError(f"beta must be one of 1, alpha, 2; got {beta}")


def _grid(t_max: float) -> np.ndarray:
    n = int(math.ceil(GRID_POINTS_PER_DECADE * math.log10(t_max))) + 1
    return np.logspace(0.0, math.log10(t_max), n)


def _abs_ml(alpha: float, lam: float, beta: float, t: np.ndarray) -> np.ndarray:
    return np.abs(ml_values_accurate(alpha, beta, -lam * t**alpha))


def decay_exponent(alpha: float, beta: float) -> float:
    """Power p of the algebraic envelope: 2*alpha when the leading tail term
    sits on a Gamma pole (beta = alpha), alpha otherwise."""
    return 2.0 * alpha if abs(beta - alpha) < 1e-12 else alpha


def _first_suffix_true(ok: np.ndarray) -> int:
    """Smallest i with ok[i:] all true, or -1 if even the last entry fails."""
    if not ok[-1]:
        return -1
    bad = np.nonzero(~ok)[0]
    return 0 if len(bad) == 0 else int(bad[-1]) + 1


def audit_algebraic_lower(
    alpha: float, lam: float, beta: float, t_max: float = DEFAULT_T_MAX
) -> tuple[float, float]:
    """Constructive constant N and onset t_star with |E| > N / t^p to t_max.

    The asserted existence of "a positive N small enough" is made concrete as
    half the settled value of |E| * t^p over the final grid decade; raises
    Unstabilized when that product still oscillates by more than 50% of its
    decade mean (grid too short or evaluation too coarse).
    """
    _validate(alpha, lam, beta, t_max)
    t = _grid(t_max)
    vals = _abs_ml(alpha, lam, beta, t)
    p = decay_exponent(alpha, beta)
    prod = vals * t**p

    last = prod[t >= t_max / 10.0]
    mean = float(last.mean())
    if mean <= 0 or (last.max() - last.min()) / mean > STABILIZATION_OSCILLATION:
        raise Unstabilized(
            f"|E| * t^{p:g} has not settled over the final decade "
            f"(mean {mean:.3g}, spread {last.max() - last.min():.3g}); "
            "enlarge t_max or tighten the evaluation"
        )
    N = 0.5 * float(last.min())
    idx = _first_suffix_true(vals > N / t**p)
    if idx < 0:
        raise Unstabilized("the fitted lower bound fails at t_max")
    return N, float(t[idx])


def audit_exp_comparison(
    alpha: float, lam: float, beta: float, t_max: float = DEFAULT_T_MAX
) -> float:
    """First grid time from which |E_{a,b}(-lam t^a)| > exp(-lam t) holds out
    to t_max; past the last sign change of E the ratio must grow over the
    final decade where the exponential is still representable (algebraic
    against exponential decay)."""
    _validate(alpha, lam, beta, t_max)
    t = _grid(t_max)
    real_vals = ml_values_accurate(alpha, beta, -lam * t**alpha).real
    vals = np.abs(real_vals)
    comp = np.exp(-lam * t)
    idx = _first_suffix_true(vals > comp)
    if idx < 0:
        raise Unstabilized("exponential comparison fails at t_max")

    # E oscillates through zero at moderate t; the ratio can only be
    # monotone once the sign has settled
    flips = np.nonzero(real_vals[:-1] * real_vals[1:] < 0)[0]
    t_osc_end = t[flips[-1] + 1] if len(flips) else t[0]
    t_hi = min(t_max, _EXP_FLOOR_ARG / lam)
    window = (t >= max(t_hi / 10.0, 1.05 * t_osc_end)) & (t <= t_hi)
    if window.sum() < 8:
        raise Unstabilized(
            "no settled window below the exponential underflow point; "
            "enlarge t_max"
        )
    ratio = vals[window] / comp[window]
    if not (np.diff(ratio) > 0).all():
        raise Unstabilized("|E| / exp(-lam t) is not increasing on the final decade")
    return float(t[idx])


@dataclass(frozen=True)
class BetaCase:
    beta: float
    p: float
    N: float
    t_star: float
    t_cross: float
    verdict: bool
    times: np.ndarray
    abs_ml: np.ndarray
    comparator: np.ndarray

    def to_dict(self, include_curve: bool = True) -> dict:
        out = {
            "beta": self.beta,
            "p": self.p,
            "N": self.N,
            "t_star": self.t_star,
            "t_cross": self.t_cross,
            "verdict": self.verdict,
        }
        if include_curve:
            out["margin_curve"] = [
                {"t": float(t), "absE": float(a), "comparator": float(c)}
                for t, a, c in zip(self.times, self.abs_ml, self.comparator)
            ]
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("t,absE,comparator\n")
            for t, a, c in zip(self.times, self.abs_ml, self.comparator):
                fh.write(f"{float(t)!r},{float(a)!r},{float(c)!r}\n")


@dataclass(frozen=True)
class AuditReport:
    alpha: float
    lam: float
    t_max: float
    beta_cases: tuple[BetaCase, ...]

    @property
    def all_pass(self) -> bool:
        return all(c.verdict for c in self.beta_cases)

    def to_dict(self, include_curve: bool = True) -> dict:
        return {
            "alpha": self.alpha,
            "lambda": self.lam,
            "t_max": self.t_max,
            "all_pass": self.all_pass,
            "beta_cases": [c.to_dict(include_curve) for c in self.beta_cases],
        }

    def to_json(self, include_curve: bool = True, **kwargs) -> str:
        return json.dumps(self.to_dict(include_curve), **kwargs)


def audit(alpha: float, lam: float, t_max: float = DEFAULT_T_MAX) -> AuditReport:
    """Run both audits for beta in {1, alpha, 2} and collect margin curves.

    The stored comparator is exp(-lam t): the decisive comparison.  Each
    case's verdict requires a settled lower-bound constant and a finite
    exponential crossover.
    """
    cases = []
    t = _grid(t_max)
    for beta in (1.0, alpha, 2.0):
        vals = _abs_ml(alpha, lam, beta, t)
        N, t_star = audit_algebraic_lower(alpha, lam, beta, t_max)
        t_cross = audit_exp_comparison(alpha, lam, beta, t_max)
        cases.append(
            BetaCase(
                beta=beta,
                p=decay_exponent(alpha, beta),
                N=N,
                t_star=t_star,
                t_cross=t_cross,
                verdict=True,
                times=t,
                abs_ml=vals,
                comparator=np.exp(-lam * t),
            )
        )
    return AuditReport(alpha, lam, t_max, tuple(cases))
