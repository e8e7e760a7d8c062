"""System descriptions: matrix + polynomial nonlinearity + order, initial data,
trajectories, and their JSON/CSV wire formats.

The nonlinearity is restricted to polynomial maps whose monomials all have
total degree >= 2.  That structural rule guarantees f(0) = 0 and makes the
small-ball Lipschitz modulus computable analytically (it tends to 0 with the
ball radius), instead of resting on an unverifiable caller promise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .matrix_ml import as_real_matrix
from .stability import FractionalOrder

MAX_TERMS_PER_COMPONENT = 256


@dataclass(frozen=True)
class PolynomialTerm:
    coefficient: float
    exponents: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.exponents)


class PolynomialMap:
    """Componentwise polynomial map R^d -> R^d, every term of degree >= 2."""

    def __init__(self, dim: int, components):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        if len(components) != dim:
            raise ValueError(f"need {dim} components, got {len(components)}")
        comps: list[tuple[PolynomialTerm, ...]] = []
        for ci, terms in enumerate(components):
            if len(terms) > MAX_TERMS_PER_COMPONENT:
                raise ValueError(
                    f"component {ci} has {len(terms)} terms "
                    f"(cap {MAX_TERMS_PER_COMPONENT})"
                )
            parsed = []
            for term in terms:
                t = term if isinstance(term, PolynomialTerm) else PolynomialTerm(
                    float(term[0]), tuple(int(e) for e in term[1])
                )
                if not math.isfinite(t.coefficient):
                    raise ValueError("coefficients must be finite")
                if len(t.exponents) != dim:
                    raise ValueError(
                        f"term exponents {t.exponents} do not match dim {dim}"
                    )
                if any(e < 0 for e in t.exponents):
                    raise ValueError("exponents must be nonnegative")
                if t.degree < 2:
                    raise ValueError(
                        f"term of total degree {t.degree} < 2 in component {ci}; "
                        "constant and linear terms are not allowed"
                    )
                parsed.append(t)
            comps.append(tuple(parsed))
        self.dim = dim
        self.components = tuple(comps)

    @classmethod
    def zero(cls, dim: int) -> "PolynomialMap":
        return cls(dim, [[] for _ in range(dim)])

    @property
    def is_zero(self) -> bool:
        return all(len(c) == 0 for c in self.components)

    def __call__(self, x):
        """Evaluate at x of shape (d,) or (n, d); complex input allowed."""
        x = np.asarray(x)
        single = x.ndim == 1
        pts = x[None, :] if single else x
        out = np.zeros(pts.shape, dtype=pts.dtype)
        for ci, terms in enumerate(self.components):
            for t in terms:
                mono = np.full(pts.shape[0], t.coefficient, dtype=pts.dtype)
                for j, e in enumerate(t.exponents):
                    if e:
                        mono = mono * pts[:, j] ** e
                out[:, ci] += mono
        return out[0] if single else out

    def lipschitz_bound(self, r: float) -> float:
        """Upper bound on the max-norm Lipschitz modulus over the ball |x| <= r.

        Mean value theorem per component: each monomial contributes
        |c| * degree * r^(degree-1) to the row sum of the Jacobian bound; the
        degree >= 2 rule makes this vanish as r -> 0.
        """
        if not r > 0:
            raise ValueError("r must be positive")
        best = 0.0
        for terms in self.components:
            row = sum(abs(t.coefficient) * t.degree * r ** (t.degree - 1) for t in terms)
            best = max(best, row)
        return best

    def to_jsonable(self):
        return [
            [{"c": t.coefficient, "e": list(t.exponents)} for t in terms]
            for terms in self.components
        ]

    @classmethod
    def from_jsonable(cls, dim, data) -> "PolynomialMap":
        return cls(dim, [[(t["c"], t["e"]) for t in terms] for terms in data])


def lipschitz_bound(f: PolynomialMap, r: float) -> float:
    """Module-level alias for PolynomialMap.lipschitz_bound."""
    return f.lipschitz_bound(r)


@dataclass(frozen=True)
class SystemSpec:
    """The system D^alpha x = A x + f(x) with polynomial f."""

    A: np.ndarray
    f: PolynomialMap
    order: FractionalOrder

    def __post_init__(self):
        object.__setattr__(self, "A", as_real_matrix(self.A))
        if self.f.dim != self.A.shape[0]:
            raise ValueError(
                f"nonlinearity dimension {self.f.dim} does not match matrix "
                f"dimension {self.A.shape[0]}"
            )

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def rhs(self, x):
        """A x + f(x) for x of shape (d,) or (n, d)."""
        x = np.asarray(x)
        lin = x @ self.A.T
        return lin + self.f(x) if not self.f.is_zero else lin

    def to_dict(self) -> dict:
        return {
            "alpha": self.order.alpha,
            "A": self.A.tolist(),
            "f": self.f.to_jsonable(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SystemSpec":
        A = as_real_matrix(data["A"])
        d = A.shape[0]
        f = (
            PolynomialMap.from_jsonable(d, data["f"])
            if data.get("f")
            else PolynomialMap.zero(d)
        )
        return cls(A, f, FractionalOrder(float(data["alpha"])))

    @classmethod
    def from_json(cls, path) -> "SystemSpec":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class InitialData:
    """State and first derivative at t = 0 (the order needs two data)."""

    x0: np.ndarray
    x1: np.ndarray

    def __post_init__(self):
        x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))
        x1 = np.atleast_1d(np.asarray(self.x1, dtype=float))
        if x0.shape != x1.shape or x0.ndim != 1:
            raise ValueError("x0 and x1 must be vectors of matching length")
        if not (np.isfinite(x0).all() and np.isfinite(x1).all()):
            raise ValueError("initial data must be finite")
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "x1", x1)

    def to_dict(self) -> dict:
        return {"x0": self.x0.tolist(), "x1": self.x1.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "InitialData":
        return cls(np.asarray(data["x0"], float), np.asarray(data["x1"], float))

    @classmethod
    def from_json(cls, path) -> "InitialData":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class Trajectory:
    """Solution samples on a uniform grid starting at t = 0."""

    times: np.ndarray
    states: np.ndarray
    method: str
    step: float

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if times.ndim != 1 or states.ndim != 2 or len(times) != len(states):
            raise ValueError("times (n,) and states (n, d) must match")
        if len(times) and times[0] != 0.0:
            raise ValueError("trajectories start at t = 0")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def sup_norm(self) -> float:
        return float(np.abs(self.states).max(initial=0.0))

    def write_csv(self, path) -> None:
        header = "t," + ",".join(f"x{i + 1}" for i in range(self.dim))
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(header + "\n")
            for t, row in zip(self.times, self.states):
                fh.write(",".join(repr(float(v)) for v in (t, *row)) + "\n")
