"""Sector test for linear(ized) stability of Caputo systems of order in (1, 2).

An eigenvalue lambda passes when |arg lambda| > alpha*pi/2 strictly.  The
sector is open and carries no numerical thickness, so a declared boundary
band (1e-9 rad on the margin) separates "inside" from "outside"; anything in
the band, including lambda = 0, is reported as inconclusive rather than
guessed.  Eigenvalues outside the sector mean the criterion's hypothesis
fails; no instability result backs a stronger claim for this order range,
so ``has_unstable_mode`` is hypothesis failure, not proven instability.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .matrix_ml import DEFAULT_COND_CAP, as_real_matrix, decompose

BOUNDARY_TOL = 1e-9
ZERO_RTOL = 1e-12

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"

ASYMPTOTICALLY_STABLE = "asymptotically_stable"
INCONCLUSIVE = "inconclusive"
HAS_UNSTABLE_MODE = "has_unstable_mode"


@dataclass(frozen=True)
class FractionalOrder:
    """Order alpha strictly inside (1, 2) plus the derived sector half-angle."""

    alpha: float

    def __post_init__(self):
        if not (1.0 < self.alpha < 2.0):
            raise ValueError(f"alpha must lie strictly in (1, 2), got {self.alpha}")

    @property
    def sector_half_angle(self) -> float:
        return self.alpha * math.pi / 2.0


@dataclass(frozen=True)
class EigenvalueVerdict:
    eigenvalue: complex
    multiplicity: int
    arg_abs: float
    margin: float
    verdict: str


@dataclass(frozen=True)
class SectorReport:
    alpha: float
    per_eigenvalue: tuple[EigenvalueVerdict, ...]
    overall: str

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "overall": self.overall,
            "per_eigenvalue": [
                {
                    "re": v.eigenvalue.real,
                    "im": v.eigenvalue.imag,
                    "multiplicity": v.multiplicity,
                    "arg_abs": v.arg_abs,
                    "margin": v.margin,
                    "verdict": v.verdict,
                }
                for v in self.per_eigenvalue
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def sector_test(
    lam: complex,
    order: FractionalOrder,
    boundary_tol: float = BOUNDARY_TOL,
    zero_tol: float = 0.0,
) -> tuple[float, str]:
    """Margin |arg lam| - alpha*pi/2 and verdict for a single eigenvalue.

    The margin depends only on arg lam, so positive rescaling never changes
    the answer.  lam with |lam| <= zero_tol is forced to "boundary": zero is
    excluded from the open sector.
    """
    lam = complex(lam)
    if abs(lam) <= zero_tol:
        return -order.sector_half_angle, BOUNDARY
    margin = abs(np.angle(lam)) - order.sector_half_angle
    if margin > boundary_tol:
        return margin, INSIDE
    if margin < -boundary_tol:
        return margin, OUTSIDE
    return margin, BOUNDARY


def classify(
    A,
    order: FractionalOrder,
    cond_cap: float = DEFAULT_COND_CAP,
    boundary_tol: float = BOUNDARY_TOL,
) -> SectorReport:
    """Classify the origin of x' (Caputo, order alpha) = A x + higher order.

    "asymptotically_stable" requires every eigenvalue strictly inside the
    sector.  Any eigenvalue outside gives "has_unstable_mode", which only
    records that the stability criterion's hypothesis fails.
    """
    M = as_real_matrix(A)
    D = decompose(M, cond_cap=cond_cap)
    zero_tol = ZERO_RTOL * max(float(np.linalg.norm(M, "fro")), np.finfo(float).tiny)

    verdicts = []
    for b in D.blocks:
        margin, verdict = sector_test(
            b.eigenvalue, order, boundary_tol=boundary_tol, zero_tol=zero_tol
        )
        verdicts.append(
            EigenvalueVerdict(
                eigenvalue=b.eigenvalue,
                multiplicity=b.size,
                arg_abs=abs(np.angle(b.eigenvalue)),
                margin=margin,
                verdict=verdict,
            )
        )

    if any(v.verdict == OUTSIDE for v in verdicts):
        overall = HAS_UNSTABLE_MODE
    elif all(v.verdict == INSIDE for v in verdicts):
        overall = ASYMPTOTICALLY_STABLE
    else:
        overall = INCONCLUSIVE
    return SectorReport(order.alpha, tuple(verdicts), overall)
