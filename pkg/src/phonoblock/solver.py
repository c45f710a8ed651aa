"""Liouvillian construction, steady states, and time evolution.

The master equation is vectorized column-major: stacking the columns of rho
turns ``A rho B`` into ``(B^T kron A) vec(rho)``, so the generator becomes

    L = -i (I kron H - H^T kron I)
        + sum_k rate_k (conj(o_k) kron o_k
                        - (I kron o_k'o_k + (o_k'o_k)^T kron I) / 2)

stored sparse, since its dimension is the squared Hilbert dimension. The
column-major convention is fixed package-wide and pinned by a vectorization
oracle in the test suite.

The steady state is the one-dimensional kernel of L, found by replacing one
row of L with the vectorized trace functional and solving the resulting
nonsingular system with a direct sparse LU factorization. Time evolution uses
fixed-step RK4 with the step bounded by the Liouvillian's maximum row sum
(see :mod:`phonoblock.kernels` for the propagation backends).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import (
    EvolutionError,
    SpaceMismatchError,
    StateValidityError,
    SteadyStateError,
)
from .hilbert import DensityMatrix, HilbertSpace, Operator, check_state, hermiticity_defect
from .kernels import rk4_propagate

HERMITIAN_INPUT_TOL = 1e-10
STEADY_RESIDUAL_RTOL = 1e-9
RK4_STEP_FACTOR = 0.01
TRACE_DRIFT_TOL = 1e-8
MIN_STEP = 1e-12


@dataclass(frozen=True, eq=False)
class Liouvillian:
    """Sparse master-equation generator on the vectorized state space."""

    space: HilbertSpace
    matrix: sp.csr_matrix

    @property
    def dim(self) -> int:
        return self.space.total_dim

    def __repr__(self) -> str:
        return f"Liouvillian({self.space!r}, nnz={self.matrix.nnz})"


def vec(mat: np.ndarray) -> np.ndarray:
    """Column-major vectorization."""
    return np.asarray(mat, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


def build_liouvillian(
    h: Operator, collapses: Sequence[tuple[float, Operator]]
) -> Liouvillian:
    """Assemble the generator from a Hamiltonian and (rate, operator) pairs.

    Raises
    ------
    SpaceMismatchError
        If any operator lives on a different space than the Hamiltonian.
    StateValidityError
        If the Hamiltonian is not Hermitian within tolerance.
    """
    defect = hermiticity_defect(h.mat)
    if defect > HERMITIAN_INPUT_TOL:
        raise StateValidityError(
            f"Hamiltonian Hermiticity defect {defect:.3e} exceeds {HERMITIAN_INPUT_TOL}"
        )
    space = h.space
    d = space.total_dim
    eye = sp.identity(d, dtype=complex, format="csr")
    hs = sp.csr_matrix(h.mat)
    lio = -1j * (sp.kron(eye, hs, format="csr") - sp.kron(hs.T, eye, format="csr"))
    for rate, op in collapses:
        if op.space != space:
            raise SpaceMismatchError("collapse operator on a different space")
        o = sp.csr_matrix(op.mat)
        odo = (o.conjugate().T @ o).tocsr()
        lio = lio + rate * (
            sp.kron(o.conjugate(), o, format="csr")
            - 0.5 * sp.kron(eye, odo, format="csr")
            - 0.5 * sp.kron(odo.T, eye, format="csr")
        )
    return Liouvillian(space, lio.tocsr())


def apply(liou: Liouvillian, rho_mat: np.ndarray) -> np.ndarray:
    """Action of the generator on a state, returned in matrix form."""
    return unvec(liou.matrix @ vec(rho_mat), liou.dim)


def trace_preservation_residual(liou: Liouvillian) -> float:
    """Max-norm of vec(I)^T L; zero for a trace-preserving generator."""
    d = liou.dim
    tr = np.zeros(d * d, dtype=complex)
    tr[:: d + 1] = 1.0
    return float(np.max(np.abs(liou.matrix.T @ tr)))


def max_abs_entry(liou: Liouvillian) -> float:
    data = liou.matrix.data
    return float(np.max(np.abs(data))) if data.size else 0.0


def _max_row_sum(matrix: sp.csr_matrix) -> float:
    if matrix.nnz == 0:
        return 0.0
    return float(abs(matrix).sum(axis=1).max())


def steady_state(liou: Liouvillian) -> DensityMatrix:
    """Unique trace-one fixed point of the generator.

    One row of L is replaced by the trace functional (scaled to the mean
    magnitude of L's entries to keep the system well conditioned) and the
    resulting nonsingular system is solved by sparse LU. The result is
    Hermitized, normalized to unit trace, and validated.

    Raises
    ------
    SteadyStateError
        If the factorization fails or the residual ||L vec(rho)||_max
        exceeds tolerance (degenerate dark states, zero damping).
    StateValidityError
        If the solution violates density-matrix tolerances.
    """
    d = liou.dim
    n = d * d
    scale = max_abs_entry(liou)
    if scale == 0.0:
        raise SteadyStateError("generator is identically zero; no unique fixed point")
    weight = float(np.mean(np.abs(liou.matrix.data)))
    a = liou.matrix.tolil(copy=True)
    trace_row = np.zeros(n)
    trace_row[:: d + 1] = weight
    a[0, :] = trace_row
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = weight
    try:
        x = splu(a.tocsc()).solve(rhs)
    except RuntimeError as exc:  # SuperLU reports singularity this way
        raise SteadyStateError(f"sparse LU factorization failed: {exc}") from exc
    rho = unvec(x, d)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if tr == 0.0 or not np.isfinite(tr):
        raise SteadyStateError(f"steady-state trace is degenerate: {tr}")
    rho = rho / tr
    residual = float(np.max(np.abs(liou.matrix @ vec(rho))))
    if residual > STEADY_RESIDUAL_RTOL * scale:
        raise SteadyStateError(
            f"steady-state residual {residual:.3e} exceeds "
            f"{STEADY_RESIDUAL_RTOL:.0e} * ||L||_max = {STEADY_RESIDUAL_RTOL * scale:.3e}"
        )
    state = DensityMatrix(liou.space, rho)
    check_state(state)
    return state


def steady_state_residual(liou: Liouvillian, state: DensityMatrix) -> float:
    return float(np.max(np.abs(liou.matrix @ vec(state.mat))))


def evolve(
    rho0: DensityMatrix, liou: Liouvillian, t_grid: Sequence[float]
) -> list[DensityMatrix]:
    """Propagate a state and return it at each requested time.

    Integration starts at t = 0 from ``rho0`` with fixed-step RK4; the step
    never exceeds ``0.01 / max_row_sum(L)`` nor the spacing of the grid.
    Trace conservation is monitored at every output time.

    Raises
    ------
    EvolutionError
        On a non-ascending grid, step-size underflow, NaN contamination, or
        trace drift beyond tolerance.
    """
    if rho0.space != liou.space:
        raise SpaceMismatchError("initial state and Liouvillian on different spaces")
    times = [float(t) for t in t_grid]
    if not times:
        return []
    if times[0] < 0.0:
        raise EvolutionError(f"t_grid must start at >= 0, got {times[0]}")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise EvolutionError("t_grid must be strictly ascending")

    row_sum = _max_row_sum(liou.matrix)
    h_cap = RK4_STEP_FACTOR / row_sum if row_sum > 0.0 else np.inf
    if h_cap < MIN_STEP:
        raise EvolutionError(
            f"required step {h_cap:.3e} underflows the minimum {MIN_STEP:.0e}"
        )

    d = liou.dim
    y = vec(rho0.mat)
    trace0 = np.trace(rho0.mat)
    out: list[DensityMatrix] = []
    t_prev = 0.0
    for t in times:
        dt = t - t_prev
        if dt > 0.0:
            n_steps = max(1, int(np.ceil(dt / h_cap))) if np.isfinite(h_cap) else 1
            y = rk4_propagate(liou.matrix, y, dt / n_steps, n_steps)
        t_prev = t
        snapshot = unvec(y, d)
        if not np.all(np.isfinite(snapshot)):
            raise EvolutionError(
                f"NaN/Inf encountered at t = {t}; generator too stiff for the "
                "fixed-step integrator"
            )
        drift = abs(np.trace(snapshot) - trace0)
        if drift > TRACE_DRIFT_TOL * max(1.0, abs(trace0)):
            raise EvolutionError(f"trace drift {drift:.3e} at t = {t} exceeds tolerance")
        out.append(DensityMatrix(liou.space, snapshot))
    return out


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the trace norm of the difference of two states."""
    if a.space != b.space:
        raise SpaceMismatchError("states on different spaces")
    diff = a.mat - b.mat
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))
