"""Classical (Torgerson) multidimensional scaling onto a low-dimensional plane.

Double-centers the squared distance matrix, B = -1/2 J D^2 J with
J = I - (1/n) 11^T, diagonalizes B with cyclic Jacobi rotations, and scales
the top eigenvectors by the square roots of their (non-negative-clamped)
eigenvalues. Deterministic: eigenvectors are sign-fixed so each coordinate
column's largest-magnitude entry is positive. An optional SMACOF refinement
pass (Guttman transform) is available but off by default.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass
class DistanceMatrix:
    n: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.n, self.n):
            raise InputError(f"distance matrix must be {self.n}x{self.n}")
        if not np.array_equal(self.values, self.values.T):
            raise InputError("distance matrix must be symmetric")
        if np.any(np.diag(self.values) != 0.0):
            raise InputError("distance matrix diagonal must be zero")
        if np.any(self.values < 0.0):
            raise InputError("distances must be non-negative")


@dataclass
class Projection2D:
    coordinates: np.ndarray
    stress: float


def pairwise_euclidean(points):
    """Euclidean distance matrix; each pair computed once, so symmetry is exact."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise InputError("all points must share one dimension")
    n = len(points)
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = float(np.linalg.norm(points[i] - points[j]))
            values[i, j] = values[j, i] = d
    return DistanceMatrix(n=n, values=values)


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps row-major over the upper triangle, annihilating one off-diagonal
    entry per rotation, until the off-diagonal Frobenius norm falls below
    `tol` relative to the matrix norm. Returns (eigenvalues, eigenvectors)
    with eigenvectors in columns, unsorted.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.T, rtol=0.0, atol=0.0):
        raise InputError("Jacobi eigensolver needs a symmetric matrix")
    v = np.eye(n)
    scale = np.sqrt((a * a).sum())
    if n < 2 or scale == 0.0:
        return np.diag(a).copy(), v
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * (np.triu(a, k=1) ** 2).sum())
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (tau - np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v


def _condensed_distances(points):
    n = len(points)
    iu, ju = np.triu_indices(n, k=1)
    diffs = points[iu] - points[ju]
    return np.sqrt((diffs * diffs).sum(axis=1))


def _guttman_refine(dist, coords, iterations):
    # SMACOF majorization steps; keeps stress non-increasing
    n = len(coords)
    x = coords.copy()
    for _ in range(iterations):
        diffs = x[:, None, :] - x[None, :, :]
        e = np.sqrt((diffs * diffs).sum(axis=-1))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(e > 0.0, dist / np.where(e > 0.0, e, 1.0), 0.0)
        b = -ratio
        np.fill_diagonal(b, 0.0)
        np.fill_diagonal(b, -b.sum(axis=1))
        x = (b @ x) / n
    return x


def classical_mds(d, out_dim=2, smacof_iterations=0):
    """Project a distance matrix to `out_dim` coordinates plus a normalized stress.

    Stress is sqrt(sum_{i<j} (d_ij - dhat_ij)^2 / sum_{i<j} d_ij^2) where dhat
    are the distances of the projected points. Negative eigenvalues of the
    centered matrix (non-Euclidean data) are clamped to zero for coordinates.
    """
    out_dim = int(out_dim)
    if out_dim < 1:
        raise InputError(f"output dimension must be positive, got {out_dim}")
    n = d.n
    if n < out_dim + 1:
        raise InputError(f"need at least {out_dim + 1} points to project to {out_dim}-D, got {n}")
    d2 = d.values ** 2
    centering = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * centering @ d2 @ centering
    b = 0.5 * (b + b.T)
    evals, evecs = jacobi_eigh(b)
    order = np.argsort(-evals, kind="stable")[:out_dim]
    coords = evecs[:, order] * np.sqrt(np.maximum(evals[order], 0.0))[None, :]
    for col in range(out_dim):
        peak = int(np.argmax(np.abs(coords[:, col])))
        if coords[peak, col] < 0.0:
            coords[:, col] = -coords[:, col]
    if smacof_iterations > 0:
        coords = _guttman_refine(d.values, coords, int(smacof_iterations))

    given = d.values[np.triu_indices(n, k=1)]
    recovered = _condensed_distances(coords)
    denom = float((given * given).sum())
    stress = float(np.sqrt(((given - recovered) ** 2).sum() / denom)) if denom > 0.0 else 0.0
    return Projection2D(coordinates=coords, stress=stress)
