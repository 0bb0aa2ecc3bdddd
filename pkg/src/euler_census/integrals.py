"""Integral representations of EC(G).

Two routes:

* ``quadrature_S`` integrates the exact n-dimensional representation over
  ``[-pi/2, pi/2]^n`` on a tensor grid (n <= 4).  The directed-tree sum in the
  integrand is the average over roots of Tutte minors, which collapses to
  ``det(Q_hat + iB) / n**2``.
* ``mc_estimate_int`` estimates the Gaussian-type integral ``Int`` over the
  small box ``|xi_j| <= n**(-1/2 + eps)`` by importance sampling from
  ``N(0, Q_hat^-1)``.

Both convert to ``ln EC`` through the same prefactor,
``prod (d_j/2 - 1)! * 2**(|E| - n + 1) * pi**(-n)``.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.linalg import cho_solve, solve_triangular

from .graph import Graph, require_eulerian, substream
from .linalg import ConvergenceError, laplacian

MC_BLOCK = 1 << 16
MAX_QUADRATURE_N = 4
QUAD_CHUNKS = 16


class ConventionMismatch(AssertionError):
    """Quadrature and backtracking disagree by a factor of two."""


@dataclass(frozen=True)
class IntegralModel:
    g: Graph
    epsilon: float
    Q: np.ndarray
    Q_hat: np.ndarray
    W: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    chol: np.ndarray
    box_radius: float
    theta_scale: np.ndarray

    @property
    def n(self) -> int:
        return self.g.n

    @property
    def ln_det_qhat(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self.chol))))

    @property
    def edge_array(self) -> np.ndarray:
        return np.array(self.g.sorted_edges(), dtype=np.int64).reshape(-1, 2)


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    std_error: float
    samples: int
    ln_ec_implied: float
    method: str
    n: int
    edges: int
    epsilon: float | None = None
    seed: int | None = None
    elapsed_ms: float = 0.0
    std_error_re: float = 0.0
    std_error_im: float = 0.0
    grid_points: int | None = None

    def to_report(self) -> dict:
        def num(x):
            return None if x is None or not math.isfinite(x) else x

        return {
            "method": self.method,
            "n": self.n,
            "edges": self.edges,
            "epsilon": self.epsilon,
            "samples": self.samples,
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "std_error": self.std_error,
            "ln_ec_implied": num(self.ln_ec_implied),
            "elapsed_ms": self.elapsed_ms,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_report(), sort_keys=True)


def ln_ec_prefactor(g: Graph) -> float:
    """``ln( prod (d_j/2-1)! * 2**(|E|-n+1) * pi**(-n) )``."""
    lf = math.fsum(math.lgamma(int(d) // 2) for d in g.degrees)
    return lf + (g.m - g.n + 1) * math.log(2.0) - g.n * math.log(math.pi)


def build_model(g: Graph, epsilon: float = 0.05) -> IntegralModel:
    require_eulerian(g)
    if not 0.0 < epsilon <= 0.1:
        raise ValueError("epsilon must lie in (0, 0.1]")
    lap = laplacian(g)
    Q = lap.Q.astype(float)
    Qh = lap.Q_hat.astype(float)
    try:
        L = np.linalg.cholesky(Qh)
    except np.linalg.LinAlgError:
        raise ValueError("Q + J is not positive definite") from None
    W = cho_solve((L, True), np.eye(g.n))
    W = (W + W.T) / 2
    alpha = np.diag(W).copy()
    return IntegralModel(
        g=g,
        epsilon=epsilon,
        Q=Q,
        Q_hat=Qh,
        W=W,
        alpha=alpha,
        beta=Q @ alpha,
        chol=L,
        box_radius=g.n ** (-0.5 + epsilon),
        theta_scale=np.sqrt((lap.degrees + 1) / 2.0),
    )


def r_quadratic(m: IntegralModel, xi) -> np.ndarray | float:
    """``tr(diag(Q xi) W diag(Q xi) W)``; accepts one point or a stack of rows."""
    xi = np.asarray(xi, dtype=float)
    lam = xi @ m.Q  # Q is symmetric
    WW = m.W * m.W
    out = np.einsum("...j,jk,...k->...", lam, WW, lam)
    return float(out) if out.ndim == 0 else out


def quartic_sum(m: IntegralModel, xi) -> np.ndarray | float:
    xi = np.asarray(xi, dtype=float)
    E = m.edge_array
    D = xi[..., E[:, 0]] - xi[..., E[:, 1]]
    out = np.sum(D**4, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def integrand_log_int(m: IntegralModel, xi) -> complex | np.ndarray:
    """Complex exponent of the Gaussian-type integrand at ``xi``."""
    xi = np.asarray(xi, dtype=float)
    quad = np.einsum("...j,jk,...k->...", xi, m.Q_hat, xi)
    re = -0.5 * quad - quartic_sum(m, xi) / 12.0 + 0.5 * r_quadratic(m, xi)
    out = re + 1j * (xi @ m.beta)
    return complex(out) if np.ndim(out) == 0 else out


def in_box(m: IntegralModel, xi) -> np.ndarray | bool:
    return np.all(np.abs(np.asarray(xi)) <= m.box_radius, axis=-1)


def in_v0(m: IntegralModel, xi) -> bool:
    """Membership in the dominant region: all pairwise ``|xi_j - xi_k|`` mod pi small."""
    xi = np.asarray(xi, dtype=float)
    if np.any(np.abs(xi) > math.pi / 2):
        return False
    diff = xi[:, None] - xi[None, :]
    wrapped = np.abs(diff - math.pi * np.round(diff / math.pi))
    return bool(np.all(wrapped <= m.box_radius))


def _mc_block(m, seed, block, size, phase, quartic, quadratic, truncate):
    rng = substream(seed, block)
    theta = rng.standard_normal((size, m.n))
    # xi ~ N(0, Q_hat^-1): solve L^T xi = theta
    xi = solve_triangular(m.chol, theta.T, lower=True, trans="T").T
    expo = np.zeros(size, dtype=complex)
    if phase:
        expo += 1j * (xi @ m.beta)
    if quartic:
        expo -= quartic_sum(m, xi) / 12.0
    if quadratic:
        expo += 0.5 * r_quadratic(m, xi)
    w = np.exp(expo)
    if truncate:
        w = np.where(in_box(m, xi), w, 0.0)
    return (
        math.fsum(w.real),
        math.fsum(w.imag),
        math.fsum(w.real**2),
        math.fsum(w.imag**2),
        int(np.count_nonzero(w)),
    )


def mc_estimate_int(
    m: IntegralModel,
    n_samples: int,
    seed: int,
    workers: int = 1,
    *,
    phase: bool = True,
    quartic: bool = True,
    quadratic: bool = True,
    truncate: bool = True,
) -> IntegralResult:
    """Importance-sampling estimate of ``Int`` with proposal ``N(0, Q_hat^-1)``.

    Samples are drawn in fixed blocks of ``MC_BLOCK``; block ``b`` always uses
    substream ``b`` of ``seed`` and block sums merge in block order, so the
    value does not depend on ``workers``.  The keyword switches drop the
    phase, quartic, quadratic-trace and box factors from the weight.
    """
    if n_samples < 1000:
        raise ValueError("n_samples must be at least 1000")
    t0 = time.perf_counter()
    sizes = [MC_BLOCK] * (n_samples // MC_BLOCK)
    if n_samples % MC_BLOCK:
        sizes.append(n_samples % MC_BLOCK)
    args = (phase, quartic, quadratic, truncate)

    def job(b):
        return _mc_block(m, seed, b, sizes[b], *args)

    if workers <= 1:
        parts = [job(b) for b in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    s_re, s_im, q_re, q_im, kept = (
        math.fsum(p[0] for p in parts),
        math.fsum(p[1] for p in parts),
        math.fsum(p[2] for p in parts),
        math.fsum(p[3] for p in parts),
        sum(p[4] for p in parts),
    )
    if kept == 0:
        raise RuntimeError("every sample fell outside the integration box")
    N = n_samples
    mean = complex(s_re / N, s_im / N)
    var_re = max(q_re - N * mean.real**2, 0.0) / (N - 1)
    var_im = max(q_im - N * mean.imag**2, 0.0) / (N - 1)
    ln_Z = 0.5 * m.n * math.log(2 * math.pi) - 0.5 * m.ln_det_qhat
    Z = math.exp(ln_Z)
    se_re = Z * math.sqrt(var_re / N)
    se_im = Z * math.sqrt(var_im / N)
    value = Z * mean
    if value.real > 0:
        ln_s0 = (
            -0.5 * math.log(2.0)
            + 0.5 * math.log(math.pi)
            - math.log(m.n)
            + m.ln_det_qhat
            + ln_Z
            + math.log(mean.real)
        )
        ln_ec = ln_ec_prefactor(m.g) + ln_s0
    else:
        ln_ec = math.nan
    return IntegralResult(
        value=value,
        std_error=math.hypot(se_re, se_im),
        samples=N,
        ln_ec_implied=ln_ec,
        method="monte-carlo",
        n=m.n,
        edges=m.g.m,
        epsilon=m.epsilon,
        seed=seed,
        elapsed_ms=1000 * (time.perf_counter() - t0),
        std_error_re=se_re,
        std_error_im=se_im,
    )


def gaussian_normalization(m: IntegralModel) -> float:
    """``(2 pi)^(n/2) / sqrt(det Q_hat)``, the mass of the proposal's kernel."""
    return math.exp(0.5 * m.n * math.log(2 * math.pi) - 0.5 * m.ln_det_qhat)


# --- tensor-grid quadrature of the exact representation -------------------


def s_integrand(g: Graph, xi) -> complex:
    """``prod_edges cos(D_jk) * det(Q_hat + iB) / n**2`` at one point ``xi``."""
    xi = np.asarray(xi, dtype=float)
    n = g.n
    A = laplacian(g).Q_hat.astype(complex)
    c = 1.0
    for u, v in g.edges:
        d = xi[u] - xi[v]
        t = math.tan(d)
        c *= math.cos(d)
        A[u, v] -= 1j * t
        A[v, u] += 1j * t
        A[u, u] += 1j * t
        A[v, v] -= 1j * t
    return complex(c * np.linalg.det(A) / n**2)


@njit(cache=True, nogil=True)
def _complex_det(A):
    n = A.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        # pivot on |re| + |im|, avoids a sqrt per candidate
        p = k
        best = abs(A[k, k].real) + abs(A[k, k].imag)
        for i in range(k + 1, n):
            mag = abs(A[i, k].real) + abs(A[i, k].imag)
            if mag > best:
                best = mag
                p = i
        if best == 0.0:
            return 0.0 + 0.0j
        if p != k:
            for j in range(n):
                tmp = A[k, j]
                A[k, j] = A[p, j]
                A[p, j] = tmp
            det = -det
        piv = A[k, k]
        det *= piv
        for i in range(k + 1, n):
            f = A[i, k] / piv
            for j in range(k + 1, n):
                A[i, j] -= f * A[k, j]
    return det


@njit(cache=True, nogil=True)
def _grid_sum(qhat, eu, ev, tan_tab, cos_tab, g, start, stop):
    n = qhat.shape[0]
    ne = eu.shape[0]
    A = np.empty((n, n), np.complex128)
    idx = np.empty(n, np.int64)
    r = start
    for j in range(n):
        idx[j] = r % g
        r //= g
    s_re = 0.0
    c_re = 0.0
    s_im = 0.0
    c_im = 0.0
    for _ in range(start, stop):
        for a in range(n):
            for b in range(n):
                A[a, b] = qhat[a, b]
        cprod = 1.0
        for k in range(ne):
            u = eu[k]
            v = ev[k]
            t = tan_tab[k, idx[u], idx[v]]
            cprod *= cos_tab[k, idx[u], idx[v]]
            A[u, v] -= 1j * t
            A[v, u] += 1j * t
            A[u, u] += 1j * t
            A[v, v] -= 1j * t
        val = cprod * _complex_det(A)
        # Kahan summation, real and imaginary parts separately
        y = val.real - c_re
        t_ = s_re + y
        c_re = (t_ - s_re) - y
        s_re = t_
        y = val.imag - c_im
        t_ = s_im + y
        c_im = (t_ - s_im) - y
        s_im = t_
        # odometer step, axis 0 fastest
        j = 0
        while j < n:
            idx[j] += 1
            if idx[j] < g:
                break
            idx[j] = 0
            j += 1
    return s_re, s_im


def grid_axes(n: int, g: int) -> np.ndarray:
    """Per-axis uniform grids on ``[-pi/2, pi/2)`` with staggered offsets.

    Axis j is shifted by ``(j+1)/(n+1)`` of a cell, so no coordinate
    difference lands on +-pi/2 where tan is singular.
    """
    h = math.pi / g
    idx = np.arange(g)
    return np.stack([-math.pi / 2 + h * (idx + (j + 1) / (n + 1)) for j in range(n)])


def _grid_integral(g: Graph, points: int, workers: int) -> complex:
    n = g.n
    qhat = laplacian(g).Q_hat.astype(np.complex128)
    E = np.array(g.sorted_edges(), dtype=np.int64).reshape(-1, 2)
    axes = grid_axes(n, points)
    eu, ev = E[:, 0].copy(), E[:, 1].copy()
    diff = axes[eu][:, :, None] - axes[ev][:, None, :]
    tan_tab, cos_tab = np.tan(diff), np.cos(diff)
    total = points**n
    nchunks = min(QUAD_CHUNKS, total)
    bounds = np.linspace(0, total, nchunks + 1).astype(np.int64)

    def job(i):
        return _grid_sum(qhat, eu, ev, tan_tab, cos_tab, points, bounds[i], bounds[i + 1])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(nchunks)))
    else:
        parts = [job(i) for i in range(nchunks)]
    s = complex(math.fsum(p[0] for p in parts), math.fsum(p[1] for p in parts))
    h = math.pi / points
    return s * h**n / n**2


def quadrature_S(
    g: Graph,
    grid_points_per_axis: int = 16,
    workers: int = 1,
    rtol: float = 1e-3,
    max_doublings: int = 4,
) -> IntegralResult:
    """Tensor-grid value of the exact integral S, refined by doubling the grid.

    The integrand is pi-periodic in every coordinate when all degrees are
    even, so the uniform rule converges spectrally.  Stops once two
    successive grids agree to ``rtol``.
    """
    require_eulerian(g)
    if g.n > MAX_QUADRATURE_N:
        raise ValueError(f"tensor quadrature limited to n <= {MAX_QUADRATURE_N}")
    if grid_points_per_axis < 2:
        raise ValueError("need at least 2 grid points per axis")
    t0 = time.perf_counter()
    points = grid_points_per_axis
    prev = _grid_integral(g, points, workers)
    for _ in range(max_doublings):
        points *= 2
        cur = _grid_integral(g, points, workers)
        if abs(cur - prev) <= rtol * abs(cur):
            break
        prev = cur
    else:
        raise ConvergenceError(
            f"quadrature not converged after {max_doublings} doublings", abs(cur - prev)
        )
    ln_ec = ln_ec_prefactor(g) + math.log(cur.real) if cur.real > 0 else math.nan
    return IntegralResult(
        value=cur,
        std_error=0.0,
        samples=points**g.n,
        ln_ec_implied=ln_ec,
        method="quadrature",
        n=g.n,
        edges=g.m,
        elapsed_ms=1000 * (time.perf_counter() - t0),
        grid_points=points,
    )


def convention_probe(ln_quadrature: float, exact_count: int, tol: float = 0.01) -> float:
    """Ratio quadrature / backtracking; raises loudly on a factor-two mismatch."""
    ratio = math.exp(ln_quadrature - math.log(exact_count))
    for factor, label in ((2.0, "twice"), (0.5, "half")):
        if abs(ratio / factor - 1.0) <= 0.05:
            raise ConventionMismatch(
                f"quadrature gives {label} the backtracking count (ratio {ratio:.6f}); "
                "the two sides disagree on whether reversed circuits are identified"
            )
    if abs(ratio - 1.0) > tol:
        raise AssertionError(f"quadrature/backtracking ratio {ratio:.6f} outside 1 +- {tol}")
    return ratio
