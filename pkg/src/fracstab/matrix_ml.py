"""Matrix Mittag-Leffler expressions through a clustered spectral decomposition.

Exact Jordan form is numerically meaningless in floating point, so the
decomposition used here is: complex Schur form, eigenvalue clustering at
1e-7 * ||A||, Sylvester-based elimination of the coupling between clusters,
and a Taylor evaluation around each cluster's mean eigenvalue.  Within a
cluster the deviation B - mean*I is retained in full (its diagonal part is
at most the cluster width), so the reassembled block-diagonal form reproduces
T^{-1} A T to rounding rather than to the cluster tolerance.

Matrix functions are evaluated per block as
``sum_m f^(m)(mean) (B - mean I)^m / m!`` which is exact for nilpotent
deviations and has error O(width^size) otherwise; scaling-and-squaring is not
an option because Mittag-Leffler functions lack the semigroup property.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import IllConditioned
from .mittag_leffler import MLParams, ml_values_accurate

MAX_DIM = 64
DEFAULT_COND_CAP = 1e8
CLUSTER_RTOL = 1e-7
_MAX_BLOCK = 4  # limited by the supported Mittag-Leffler derivative order


def as_real_matrix(A) -> np.ndarray:
    """Validate and return a finite real square matrix with dim <= 64."""
    M = np.asarray(A, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] < 1 or M.shape[0] > MAX_DIM:
        raise ValueError(f"matrix dimension must be in [1, {MAX_DIM}]")
    if not np.isfinite(M).all():
        raise ValueError("matrix entries must be finite")
    return M


@dataclass(frozen=True)
class SpectralBlock:
    """One cluster block lambda*I + N in the block-diagonal form.

    ``offdiag`` holds B - lambda*I: strictly upper up to a diagonal residue
    bounded by the cluster width.  ``nilpotent`` flags a block that actually
    couples coordinates.
    """

    start: int
    size: int
    eigenvalue: complex
    offdiag: np.ndarray

    @property
    def nilpotent(self) -> bool:
        return bool(
            np.abs(self.offdiag).max(initial=0.0) > 1e-8 * (1.0 + abs(self.eigenvalue))
        )


@dataclass(frozen=True)
class SpectralDecomposition:
    """Similarity A = transform @ blockdiag(blocks) @ transform_inv."""

    dim: int
    transform: np.ndarray
    transform_inv: np.ndarray
    blocks: tuple[SpectralBlock, ...]
    cond: float

    @property
    def eigenvalues(self) -> np.ndarray:
        """Per-coordinate eigenvalue (block eigenvalue repeated over its size)."""
        out = np.empty(self.dim, dtype=complex)
        for b in self.blocks:
            out[b.start : b.start + b.size] = b.eigenvalue
        return out

    def block_matrix(self) -> np.ndarray:
        """Assembled block-diagonal matrix the transform conjugates A into."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for b in self.blocks:
            sl = slice(b.start, b.start + b.size)
            out[sl, sl] = b.eigenvalue * np.eye(b.size) + b.offdiag
        return out


def _cluster_labels(eigs: np.ndarray, tol: float) -> np.ndarray:
    """Transitive closure of |e_i - e_j| <= tol (union-find)."""
    n = len(eigs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigs[i] - eigs[j]) <= tol:
                pi, pj = find(i), find(j)
                if pi != pj:
                    parent[pi] = pj
    labels = np.array([find(i) for i in range(n)])
    _, labels = np.unique(labels, return_inverse=True)
    return labels


def _split_leading_cluster(S: np.ndarray, members: np.ndarray, tol: float):
    """Reorder the Schur form so the given cluster leads, then decouple it.

    Returns (T11, T22, V) with S = V @ blkdiag(T11, T22) @ V^{-1}; T22 is
    None when the cluster covers everything.
    """

    def sel(e):
        return bool(np.min(np.abs(members - e)) <= tol)

    Ss, Q, k = sla.schur(S, output="complex", sort=sel)
    if k == 0 or k == S.shape[0]:
        return Ss, None, Q
    T11 = Ss[:k, :k]
    T12 = Ss[:k, k:]
    T22 = Ss[k:, k:]
    X = sla.solve_sylvester(T11, -T22, -T12)
    V = Q.copy()
    # right-multiplying by [[I, X], [0, I]] adds Q[:, :k] @ X into the tail
    V[:, k:] = V[:, k:] + V[:, :k] @ X
    return T11, T22, V


def decompose(A, cond_cap: float = DEFAULT_COND_CAP) -> SpectralDecomposition:
    """Cluster-blocked spectral decomposition of a real matrix.

    Eigenvalues within 1e-7 * ||A|| of each other (transitively) share a
    block; distinct clusters are decoupled by Sylvester elimination.  Raises
    IllConditioned when the resulting transform exceeds ``cond_cap`` or a
    cluster block is too large for the supported derivative orders.
    """
    M = as_real_matrix(A)
    if not cond_cap > 1.0:
        raise ValueError("cond_cap must exceed 1")
    d = M.shape[0]
    scale = max(float(np.linalg.norm(M, "fro")), d * np.finfo(float).eps)
    tol = CLUSTER_RTOL * scale

    S, Q = sla.schur(M.astype(complex), output="complex")
    transform = Q

    blocks: list[SpectralBlock] = []
    start = 0
    rem = S
    while rem is not None and rem.shape[0] > 0:
        eigs_rem = np.diag(rem)
        labels = _cluster_labels(eigs_rem, tol)
        if labels.max() == 0:
            T11, T22, V = rem, None, np.eye(rem.shape[0], dtype=complex)
        else:
            members = eigs_rem[labels == labels[0]]
            T11, T22, V = _split_leading_cluster(rem, members, tol)
        k = T11.shape[0]
        pad = np.eye(d, dtype=complex)
        pad[start:, start:] = V
        transform = transform @ pad
        lam = complex(np.mean(np.diag(T11)))
        blocks.append(
            SpectralBlock(start, k, lam, T11 - lam * np.eye(k, dtype=complex))
        )
        start += k
        rem = T22

    transform_inv = np.linalg.inv(transform)
    cond = float(np.linalg.cond(transform))
    if not np.isfinite(cond) or cond > cond_cap:
        raise IllConditioned(
            f"best block-diagonalizing transform has condition {cond:.3g} "
            f"> cap {cond_cap:.3g}"
        )
    return SpectralDecomposition(d, transform, transform_inv, tuple(blocks), cond)


def gamma_scale(D: SpectralDecomposition, gamma: float) -> SpectralDecomposition:
    """Rescale each block's off-diagonal part by powers of gamma.

    Conjugating a block by diag(1, gamma, ..., gamma^(size-1)) multiplies
    entry (i, j) by gamma^(j-i), so a unit superdiagonal becomes gamma while
    eigenvalues are copied unchanged.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    transform = D.transform.copy()
    blocks = []
    for b in D.blocks:
        powers = gamma ** np.arange(b.size)
        transform[:, b.start : b.start + b.size] *= powers
        scaled = b.offdiag * (powers[None, :] / powers[:, None])
        blocks.append(SpectralBlock(b.start, b.size, b.eigenvalue, scaled))
    return SpectralDecomposition(
        D.dim,
        transform,
        np.linalg.inv(transform),
        tuple(blocks),
        float(np.linalg.cond(transform)),
    )


def _block_function_values(
    D: SpectralDecomposition, p: MLParams, t: float, tol: float
) -> np.ndarray:
    """Blockdiag of E_{alpha,beta}(t^alpha * block) over the decomposition."""
    ta = float(t) ** p.alpha
    F = np.zeros((D.dim, D.dim), dtype=complex)
    for b in D.blocks:
        z = b.eigenvalue * ta
        val = np.zeros((b.size, b.size), dtype=complex)
        Npow = np.eye(b.size, dtype=complex)
        fact = 1.0
        cap = min(b.size, _MAX_BLOCK)
        for m in range(cap):
            deriv = ml_values_accurate(p.alpha, p.beta, z, order=m, tol=min(tol, 1e-13))
            val += (ta**m / fact) * deriv[0] * Npow
            Npow = Npow @ b.offdiag
            fact *= m + 1
        if cap < b.size:
            leftover = np.abs(Npow).max() * ta**cap / (fact * (cap + 1))
            if leftover > 1e-7 * (1.0 + np.abs(val).max()):
                raise IllConditioned(
                    f"cluster block of size {b.size} at {b.eigenvalue:.6g} needs "
                    f"Mittag-Leffler derivatives beyond order {_MAX_BLOCK - 1}"
                )
        sl = slice(b.start, b.start + b.size)
        F[sl, sl] = val
    return F


def ml_apply(
    D: SpectralDecomposition,
    p: MLParams,
    t: float,
    tol: float = 1e-12,
    keep_complex: bool = False,
):
    """E_{alpha,beta}(t^alpha A) reassembled through the decomposition.

    For real input the exact result is real; the imaginary residue of the
    conjugated result is discarded (tests pin it below 1e-9 * (1 + norm)).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    F = D.transform @ _block_function_values(D, p, t, tol) @ D.transform_inv
    if keep_complex:
        return F
    return F.real.copy()
