"""Finite-dimensional matrix images of differential operators.

Operators are discretized on a uniform, symmetric momentum grid with
central finite-difference stencils (accuracy order 2 or 4) and Dirichlet
truncation: grid points beyond the boundary are treated as zero.  The
grid carries quadrature weights h*(1+beta*p^2)^kappa so that discrete
inner products approximate the flat (kappa = 0) or deformed (kappa = -1)
scalar product, and adjoints/metric conjugations are available as exact
matrix operations with respect to those weights.

Metrics are applied through their log-diagonal, entry by entry on the
nonzero pattern, so e^(alpha*p^2)-sized factors never have to be
materialized when only ratios are needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import DiffOp
from .model import MetricSpec

# Entries of log(metric) above this cannot be exponentiated in float64.
LOG_OVERFLOW = 700.0

# Relative symmetry slack accepted by the weighted self-adjoint eigensolver.
SELFADJOINT_RTOL = 1e-10

_STENCILS = {
    (1, 2): {-1: -0.5, 1: 0.5},
    (1, 4): {-2: 1.0 / 12.0, -1: -2.0 / 3.0, 1: 2.0 / 3.0, 2: -1.0 / 12.0},
    (2, 2): {-1: 1.0, 0: -2.0, 1: 1.0},
    (2, 4): {-2: -1.0 / 12.0, -1: 4.0 / 3.0, 0: -5.0 / 2.0,
             1: 4.0 / 3.0, 2: -1.0 / 12.0},
}


@dataclass(frozen=True)
class Grid:
    """Uniform symmetric momentum grid with quadrature weights."""

    n: int
    p_max: float
    measure_power: int
    beta: float
    h: float
    points: np.ndarray
    weights: np.ndarray


def build_grid(n: int, p_max: float, measure_power: int = 0,
               beta: float = 0.0) -> Grid:
    n = int(n)
    if n < 5 or n % 2 == 0:
        raise ValueError("n must be an odd integer >= 5")
    if not p_max > 0:
        raise ValueError("p_max must be > 0")
    if measure_power not in (0, -1):
        raise ValueError("measure_power must be 0 or -1")
    if beta < 0:
        raise ValueError("beta must be >= 0")
    h = 2.0 * p_max / (n - 1)
    # integer-centered construction keeps the grid exactly symmetric and
    # guarantees p = 0 is a grid point
    points = (np.arange(n) - (n - 1) // 2) * h
    weights = h * (1.0 + beta * points ** 2) ** measure_power
    points.setflags(write=False)
    weights.setflags(write=False)
    return Grid(n=n, p_max=float(p_max), measure_power=measure_power,
                beta=float(beta), h=h, points=points, weights=weights)


@dataclass(frozen=True)
class MatrixOp:
    """Dense complex matrix image of an operator on a grid."""

    matrix: np.ndarray
    grid: Grid


def derivative_matrix(grid: Grid, order: int, fd_order: int = 4) -> MatrixOp:
    """Central finite-difference matrix for d^order/dp^order.

    Rows near the boundary simply drop the out-of-range stencil points
    (Dirichlet truncation).
    """
    key = (order, fd_order)
    if key not in _STENCILS:
        raise ValueError("order must be 1 or 2 and fd_order 2 or 4")
    stencil = _STENCILS[key]
    width = 2 * max(abs(k) for k in stencil) + 1
    if width > grid.n:
        raise ValueError("stencil wider than grid")
    mat = np.zeros((grid.n, grid.n), dtype=complex)
    scale = grid.h ** order
    for offset, coeff in stencil.items():
        mat += np.eye(grid.n, k=offset, dtype=complex) * (coeff / scale)
    return MatrixOp(mat, grid)


def assemble_matrix(op: DiffOp, grid: Grid, fd_order: int = 4) -> MatrixOp:
    """sum_b diag(f_b(p_i)) @ D^b with f_b evaluated exactly.

    D^2 uses the dedicated second-derivative stencil rather than the
    square of the first-derivative matrix, which would decouple even and
    odd sublattices; higher orders compose the two.
    """
    if op.beta != grid.beta:
        raise ValueError("operator and grid beta differ")
    n = grid.n
    cache: dict[int, np.ndarray] = {0: np.eye(n, dtype=complex)}

    def deriv_power(b: int) -> np.ndarray:
        if b not in cache:
            if b == 1:
                cache[1] = derivative_matrix(grid, 1, fd_order).matrix
            elif b == 2:
                cache[2] = derivative_matrix(grid, 2, fd_order).matrix
            else:
                cache[b] = deriv_power(2) @ deriv_power(b - 2)
        return cache[b]

    out = np.zeros((n, n), dtype=complex)
    for b, fn in op.terms:
        values = np.asarray(fn(grid.points), dtype=complex)
        out += values[:, None] * deriv_power(b)
    return MatrixOp(out, grid)


def weighted_adjoint(a: MatrixOp) -> MatrixOp:
    """Adjoint with respect to the grid's weighted inner product:
    W^(-1) @ A^H @ W with W = diag(weights)."""
    w = a.grid.weights
    mat = a.matrix.conj().T * (w[None, :] / w[:, None])
    return MatrixOp(mat, a.grid)


def metric_log_diagonal(spec: MetricSpec, grid: Grid) -> np.ndarray:
    """log of the diagonal metric entries; always finite."""
    if spec.family != "gaussian" and spec.beta != grid.beta:
        raise ValueError("metric and grid beta differ")
    p2 = grid.points ** 2
    if spec.family == "identity":
        return np.zeros(grid.n)
    if spec.family == "power":
        return spec.exponent * np.log1p(spec.beta * p2)
    return spec.exponent * p2


def metric_diagonal(spec: MetricSpec, grid: Grid, half: bool = False) -> MatrixOp:
    """Materialized diagonal metric (or its half power).

    Refuses to exponentiate when a log entry exceeds the float64 range;
    use similarity_transform, which works on log ratios, instead.
    """
    log_diag = metric_log_diagonal(spec, grid)
    if half:
        log_diag = 0.5 * log_diag
    if np.max(np.abs(log_diag)) > LOG_OVERFLOW:
        raise ValueError("metric overflows float64; use the log-ratio pathway")
    return MatrixOp(np.diag(np.exp(log_diag)).astype(complex), grid)


def similarity_transform(a: MatrixOp, spec: MetricSpec,
                         half: bool = False) -> MatrixOp:
    """eta @ A @ eta^(-1) computed entry-wise as A_ij * exp(L_i - L_j)
    (L halved when ``half``), touching only the nonzero pattern of A so
    banded operators never see overflowing metric entries."""
    log_diag = metric_log_diagonal(spec, a.grid)
    factor = 0.5 if half else 1.0
    rows, cols = np.nonzero(a.matrix)
    out = np.zeros_like(a.matrix)
    scale = np.exp(factor * (log_diag[rows] - log_diag[cols]))
    out[rows, cols] = a.matrix[rows, cols] * scale
    bad = ~np.isfinite(out[rows, cols])
    if np.any(bad):
        where = list(zip(rows[bad][:5].tolist(), cols[bad][:5].tolist()))
        raise ValueError(f"non-finite transformed entries at {where}")
    return MatrixOp(out, a.grid)


@dataclass(frozen=True)
class Spectrum:
    """Low-lying eigenvalues sorted by (Re, Im) ascending."""

    eigenvalues: np.ndarray
    levels: int


def _sorted_eigenvalues(values: np.ndarray) -> np.ndarray:
    order = np.lexsort((values.imag, values.real))
    return values[order]


def eigs(a: MatrixOp, kind: str = "general", levels: int = 6) -> Spectrum:
    """Dense eigen-decomposition returning the lowest ``levels`` eigenvalues.

    kind="general" uses a nonsymmetric solver.  kind="selfadjoint-weighted"
    requires A to equal its weighted adjoint (within a small relative
    slack), symmetrizes via W^(1/2) A W^(-1/2), and solves the Hermitian
    problem.
    """
    mat = a.matrix
    levels = min(int(levels), a.grid.n)
    if kind == "general":
        if np.all(mat.imag == 0.0):
            vals = scipy.linalg.eigvals(mat.real)
        else:
            vals = scipy.linalg.eigvals(mat)
        return Spectrum(_sorted_eigenvalues(vals)[:levels], levels)
    if kind == "selfadjoint-weighted":
        gap = np.linalg.norm(a.matrix - weighted_adjoint(a).matrix)
        norm = np.linalg.norm(a.matrix)
        if gap > SELFADJOINT_RTOL * max(norm, 1.0):
            raise ValueError("matrix is not self-adjoint under the grid "
                             f"inner product (gap {gap:.3e}, norm {norm:.3e})")
        sqrt_w = np.sqrt(a.grid.weights)
        sym = (sqrt_w[:, None] * mat) / sqrt_w[None, :]
        sym = 0.5 * (sym + sym.conj().T)
        if np.all(sym.imag == 0.0):
            vals = scipy.linalg.eigvalsh(sym.real)
        else:
            vals = scipy.linalg.eigvalsh(sym)
        return Spectrum(np.asarray(vals[:levels], dtype=complex), levels)
    raise ValueError(f"unknown eigensolver kind {kind!r}")


def gaussian_state(grid: Grid, center: float = 0.0, width: float = 1.0) -> np.ndarray:
    """Samples of exp(-(p-center)^2/(2*width^2)) normalized to unit
    weighted norm."""
    if not width > 0:
        raise ValueError("width must be > 0")
    psi = np.exp(-((grid.points - center) ** 2) / (2.0 * width ** 2))
    return psi / weighted_norm(grid, psi)


def weighted_inner(grid: Grid, f: np.ndarray, g: np.ndarray) -> complex:
    return complex(np.sum(grid.weights * np.conj(f) * g))


def weighted_norm(grid: Grid, f: np.ndarray) -> float:
    return float(np.sqrt(np.sum(grid.weights * np.abs(f) ** 2)))
