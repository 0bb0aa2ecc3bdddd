"""Dense linear algebra for graph Laplacians.

Float work (spectra, norms) is numpy; exact work (spanning-tree counts,
directed-tree minors) runs Bareiss elimination over Python integers or
``fractions.Fraction``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import Graph, validate


class NotSymmetricError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(message)


@dataclass(frozen=True)
class LaplacianBundle:
    Q: np.ndarray
    Q_hat: np.ndarray
    degrees: np.ndarray


@dataclass(frozen=True)
class SpectralSummary:
    eigenvalues: np.ndarray
    lambda2: float
    lambda_max: float
    t_exact: int
    log_t: float
    gamma_observed: float

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "lambda2": self.lambda2,
            "lambda_max": self.lambda_max,
            "t_exact": str(self.t_exact),
            "log_t": self.log_t,
            "gamma_observed": self.gamma_observed,
        }


@dataclass(frozen=True)
class MatrixNorms:
    one: float
    inf: float
    two_bound: float | None
    hs: float


def laplacian(g: Graph) -> LaplacianBundle:
    Q = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v in g.edges:
        Q[u, v] = Q[v, u] = -1
    deg = g.degrees
    Q[np.diag_indices(g.n)] = deg
    return LaplacianBundle(Q=Q, Q_hat=Q + 1, degrees=deg)


def _off_norm(A: np.ndarray) -> float:
    return float(np.max(np.abs(A - np.diag(np.diag(A))), initial=0.0))


def eigenvalues_symmetric(A, tol: float = 1e-12, max_sweeps: int = 100, vectors: bool = False):
    """Full spectrum of a symmetric matrix by cyclic Jacobi rotations.

    Converged once every off-diagonal magnitude is at most ``tol * ||A||_F``.
    Returns ascending eigenvalues, plus the matching eigenvector columns when
    ``vectors`` is true.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("square matrix required")
    n = A.shape[0]
    scale = float(np.max(np.abs(A), initial=0.0))
    if scale and float(np.max(np.abs(A - A.T))) > 1e-12 * scale:
        raise NotSymmetricError("matrix is not symmetric within 1e-12 relative")
    A = (A + A.T) / 2
    V = np.eye(n)
    fro = float(np.linalg.norm(A))
    target = tol * fro

    for _ in range(max_sweeps):
        if _off_norm(A) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= target * 1e-3:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        resid = _off_norm(A)
        if resid > target:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", resid)

    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    if vectors:
        return w[order], V[:, order]
    return w[order]


def algebraic_connectivity(g: Graph) -> float:
    if g.n < 2:
        raise ValueError("algebraic connectivity needs n >= 2")
    return float(eigenvalues_symmetric(laplacian(g).Q)[1])


def is_gamma_mixing(g: Graph, gamma: float) -> bool:
    return algebraic_connectivity(g) >= gamma * g.n - 1e-9 * g.n


def bareiss_det(M: Sequence[Sequence]) -> int | Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination with row pivoting.

    Works for integer entries (result is an int) and for Fraction entries.
    """
    a = [list(row) for row in M]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                num = row_i[j] * akk - aik * row_k[j]
                row_i[j] = num // prev if isinstance(num, int) else num / prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def spanning_tree_count_exact(g: Graph) -> int:
    """Kirchhoff: determinant of the Laplacian with the first row and column removed."""
    if g.n <= 1:
        return 1
    Q = laplacian(g).Q.tolist()
    minor = [row[1:] for row in Q[1:]]
    return int(bareiss_det(minor))


def det_qhat_exact(g: Graph) -> int:
    return int(bareiss_det(laplacian(g).Q_hat.tolist()))


def tutte_matrix(weights) -> list[list[Fraction]]:
    """``A[j][k] = -w[j][k]`` off the diagonal, ``A[j][j] = sum_{r != j} w[j][r]``."""
    w = [[Fraction(x) for x in row] for row in weights]
    n = len(w)
    A = [[-w[j][k] if j != k else Fraction(0) for k in range(n)] for j in range(n)]
    for j in range(n):
        A[j][j] = sum((w[j][r] for r in range(n) if r != j), Fraction(0))
    return A


def tutte_minor(weights, root: int) -> Fraction:
    """Weighted count of directed spanning trees oriented toward ``root`` (1-based).

    ``weights[j][k]`` is the weight of the arc from vertex j+1 to vertex k+1.
    """
    n = len(weights)
    if not 1 <= root <= n:
        raise ValueError(f"root must be in 1..{n}")
    A = tutte_matrix(weights)
    r = root - 1
    minor = [[A[j][k] for k in range(n) if k != r] for j in range(n) if j != r]
    return Fraction(bareiss_det(minor))


def logdet_expansion(X, m: int) -> tuple[complex | float, float]:
    """Truncated series for ``ln det(I + X)`` and the remainder bound.

    Returns ``(sum_{r<m} (-1)^(r+1) tr(X^r) / r, (n/m) ||X||^m / (1 - ||X||))``
    with the 1-norm; requires ``||X||_1 < 1`` and ``m >= 2``.
    """
    X = np.asarray(X)
    if m < 2:
        raise ValueError("m must be >= 2")
    n = X.shape[0]
    norm = float(np.abs(X).sum(axis=0).max(initial=0.0))
    if norm >= 1.0:
        raise ValueError(f"||X||_1 = {norm:.6g} is not below 1")
    total = 0.0
    P = np.eye(n, dtype=X.dtype if np.iscomplexobj(X) else float)
    for r in range(1, m):
        P = P @ X
        total += (-1) ** (r + 1) * np.trace(P) / r
    bound = (n / m) * norm**m / (1.0 - norm)
    if not np.iscomplexobj(X):
        total = float(np.real(total))
    return total, bound


def norms(A) -> MatrixNorms:
    """1-, inf- and Hilbert-Schmidt norms, plus the spectral norm for symmetric input.

    ``two_bound`` is ``None`` for non-symmetric matrices.
    """
    A = np.asarray(A, dtype=float)
    absA = np.abs(A)
    one = float(absA.sum(axis=0).max(initial=0.0))
    inf = float(absA.sum(axis=1).max(initial=0.0))
    hs = float(np.sqrt((absA**2).sum()))
    two = None
    if A.shape[0] == A.shape[1] and np.allclose(A, A.T, rtol=0, atol=1e-12 * max(one, 1.0)):
        ev = eigenvalues_symmetric(A)
        two = float(np.max(np.abs(ev), initial=0.0))
    return MatrixNorms(one=one, inf=inf, two_bound=two, hs=hs)


def condition_number_1(A) -> float:
    A = np.asarray(A, dtype=float)
    try:
        inv = np.linalg.inv(A)
    except np.linalg.LinAlgError:
        raise ValueError("matrix is singular") from None
    if not np.all(np.isfinite(inv)):
        raise ValueError("matrix is singular")
    return norms(A).one * norms(inv).one


def spectral_summary(g: Graph) -> SpectralSummary:
    Q = laplacian(g).Q
    ev = eigenvalues_symmetric(Q)
    t = spanning_tree_count_exact(g)
    if g.n == 1:
        log_t, lam2 = 0.0, 0.0
    elif validate(g).is_connected:
        log_t = float(np.sum(np.log(ev[1:])) - math.log(g.n))
        lam2 = float(ev[1])
    else:
        log_t, lam2 = -math.inf, float(ev[1])
    return SpectralSummary(
        eigenvalues=ev,
        lambda2=lam2,
        lambda_max=float(ev[-1]),
        t_exact=t,
        log_t=log_t,
        gamma_observed=lam2 / g.n,
    )
