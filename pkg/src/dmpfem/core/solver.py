"""Reduction to the interior system and a Jacobi-preconditioned CG solver."""

# this_file: src/dmpfem/core/solver.py

import math
from typing import NamedTuple, TypeAlias

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from dmpfem.api.exceptions import NoConvergenceError, SolverError
from dmpfem.core.assembly import LinearSystem
from dmpfem.utils.logging import logger

SparseMatrix: TypeAlias = sparse.csr_matrix

DENSE_THRESHOLD = 64
DEFAULT_REL_TOL = 1e-12
REPLACE_EVERY = 50
STAGNATION_CHECKS = 20


class ReducedSystem(NamedTuple):
    """A11 and the interior right-hand side f_I - A12 g_B."""

    matrix: SparseMatrix
    rhs: NDArray[np.float64]


class SolveResult(NamedTuple):
    x: NDArray[np.float64]
    iterations: int
    residual: float


def reduce_system(system: LinearSystem) -> ReducedSystem:
    """Eliminate the boundary unknowns from an assembled system."""
    a11 = system.interior_block()
    a12 = system.coupling_block()
    rhs = system.rhs[system.interior_ids] - a12 @ system.boundary_values
    return ReducedSystem(a11, np.asarray(rhs, dtype=float))


def _dot(a: NDArray[np.float64], b: NDArray[np.float64]) -> float:
    # numpy pairwise summation, not BLAS: the reduction order is fixed.
    return float(np.sum(a * b))


def _norm(a: NDArray[np.float64]) -> float:
    return math.sqrt(_dot(a, a))


def solve_spd(
    a: SparseMatrix,
    b: NDArray[np.float64],
    rel_tol: float = DEFAULT_REL_TOL,
    max_iter: int | None = None,
    dense_threshold: int = DENSE_THRESHOLD,
) -> SolveResult:
    """Solve ``a x = b`` for a symmetric positive-definite ``a``.

    Systems of size ``<= dense_threshold`` are solved directly (reported as
    0 iterations). Larger ones use conjugate gradients with diagonal
    preconditioning from ``x0 = 0``; the true residual is recomputed every
    50 iterations and before returning.

    Args:
        a: SPD matrix.
        b: Right-hand side.
        rel_tol: Target ``||a x - b|| <= rel_tol ||b||``.
        max_iter: Iteration cap, 20 n by default.
        dense_threshold: Largest size solved with a dense factorization.

    Raises:
        NoConvergenceError: If the target is missed within ``max_iter``
            iterations or the residual stagnates; carries the best iterate.
        SolverError: If the diagonal has a non-positive entry.
    """
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    if n == 0:
        return SolveResult(np.zeros(0), 0, 0.0)
    b_norm = _norm(b)
    if b_norm == 0.0:
        return SolveResult(np.zeros(n), 0, 0.0)

    a = sparse.csr_matrix(a)
    if n <= dense_threshold:
        dense = a.toarray()
        x = np.linalg.solve(dense, b)
        x += np.linalg.solve(dense, b - dense @ x)
        residual = _norm(b - a @ x)
        logger.debug(f"Dense solve n={n}: residual {residual:.3e}")
        return SolveResult(x, 0, residual)

    diag = a.diagonal()
    if np.any(diag <= 0):
        raise SolverError("Matrix has a non-positive diagonal entry", {"row": int(np.argmin(diag))})
    inv_diag = 1.0 / diag
    cap = max_iter if max_iter is not None else 20 * n
    target = rel_tol * b_norm

    x = np.zeros(n)
    r = b.copy()
    z = inv_diag * r
    p = z.copy()
    rz = _dot(r, z)
    best_x, best_res = x.copy(), b_norm
    checks_since_best = 0

    for it in range(1, cap + 1):
        ap = a @ p
        alpha = rz / _dot(p, ap)
        x += alpha * p
        r -= alpha * ap

        looks_converged = _norm(r) <= target
        if looks_converged or it % REPLACE_EVERY == 0:
            r = b - a @ x
            res = _norm(r)
            if res < best_res:
                best_x, best_res = x.copy(), res
                checks_since_best = 0
            else:
                checks_since_best += 1
            if res <= target:
                logger.debug(f"CG n={n}: {it} iterations, residual {res:.3e}")
                return SolveResult(x, it, res)
            if checks_since_best >= STAGNATION_CHECKS:
                logger.warning(f"CG stagnated at residual {best_res:.3e} after {it} iterations")
                raise NoConvergenceError(it, best_res, best_x)
            if looks_converged:
                # Recursive and true residual drifted apart: restart from the true one.
                z = inv_diag * r
                rz = _dot(r, z)
                p = z.copy()
                continue

        z = inv_diag * r
        rz_new = _dot(r, z)
        p = z + (rz_new / rz) * p
        rz = rz_new

    raise NoConvergenceError(cap, best_res, best_x)


def solve_system(
    system: LinearSystem,
    rel_tol: float = DEFAULT_REL_TOL,
    max_iter: int | None = None,
    dense_threshold: int = DENSE_THRESHOLD,
) -> tuple[NDArray[np.float64], SolveResult]:
    """Nodal solution of an assembled system; boundary entries equal g exactly."""
    reduced = reduce_system(system)
    result = solve_spd(reduced.matrix, reduced.rhs, rel_tol, max_iter, dense_threshold)
    u = np.empty(system.size)
    u[system.boundary_ids] = system.boundary_values
    u[system.interior_ids] = result.x
    return u, result
