"""Hot numeric kernels: fused fixed-step RK4 propagation over sparse CSR.

Master-equation propagation spends essentially all of its time doing
``y <- y + h/6 (k1 + 2 k2 + 2 k3 + k4)`` with four sparse matrix-vector
products per step, millions of times. The numba path compiles that loop into
one kernel; the pure-numpy path performs the identical arithmetic through
scipy's CSR matvec and exists both as a fallback and as a reference for the
benchmark in ``benchmarks/bench_rk4.py``.

Backend selection: set ``PHONOBLOCK_BACKEND`` to ``numba``, ``numpy``, or
``auto`` (default; numba when importable) before the package is imported.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.sparse as sp

BACKEND_ENV_VAR = "PHONOBLOCK_BACKEND"

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False


def _select_backend() -> str:
    choice = os.environ.get(BACKEND_ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"{BACKEND_ENV_VAR} must be 'auto', 'numba', or 'numpy', got {choice!r}"
        )
    if choice == "numba" and not _HAVE_NUMBA:
        raise RuntimeError(f"{BACKEND_ENV_VAR}=numba but numba is not importable")
    if choice == "auto":
        return "numba" if _HAVE_NUMBA else "numpy"
    return choice


_ACTIVE_BACKEND = _select_backend()


def active_backend() -> str:
    """Name of the propagation backend chosen at import time."""
    return _ACTIVE_BACKEND


if _HAVE_NUMBA:

    @njit(cache=True)
    def _csr_matvec(data, indices, indptr, x, out):
        for i in range(out.shape[0]):
            acc = 0.0 + 0.0j
            for k in range(indptr[i], indptr[i + 1]):
                acc += data[k] * x[indices[k]]
            out[i] = acc

    @njit(cache=True)
    def _rk4_csr(data, indices, indptr, y, h, n_steps):
        n = y.shape[0]
        k1 = np.empty(n, np.complex128)
        k2 = np.empty(n, np.complex128)
        k3 = np.empty(n, np.complex128)
        k4 = np.empty(n, np.complex128)
        tmp = np.empty(n, np.complex128)
        for _ in range(n_steps):
            _csr_matvec(data, indices, indptr, y, k1)
            for i in range(n):
                tmp[i] = y[i] + 0.5 * h * k1[i]
            _csr_matvec(data, indices, indptr, tmp, k2)
            for i in range(n):
                tmp[i] = y[i] + 0.5 * h * k2[i]
            _csr_matvec(data, indices, indptr, tmp, k3)
            for i in range(n):
                tmp[i] = y[i] + h * k3[i]
            _csr_matvec(data, indices, indptr, tmp, k4)
            for i in range(n):
                y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        return y


def rk4_propagate_numpy(matrix: sp.csr_matrix, y: np.ndarray, h: float, n_steps: int) -> np.ndarray:
    """Reference RK4 loop on scipy's CSR matvec. Same arithmetic as the kernel."""
    y = np.array(y, dtype=np.complex128, copy=True)
    for _ in range(n_steps):
        k1 = matrix @ y
        k2 = matrix @ (y + 0.5 * h * k1)
        k3 = matrix @ (y + 0.5 * h * k2)
        k4 = matrix @ (y + h * k3)
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def rk4_propagate_numba(matrix: sp.csr_matrix, y: np.ndarray, h: float, n_steps: int) -> np.ndarray:
    """Fused RK4 loop compiled with numba."""
    if not _HAVE_NUMBA:  # pragma: no cover
        raise RuntimeError("numba backend requested but numba is not importable")
    y = np.array(y, dtype=np.complex128, copy=True)
    data = np.asarray(matrix.data, dtype=np.complex128)
    return _rk4_csr(data, matrix.indices, matrix.indptr, y, float(h), int(n_steps))


def rk4_propagate(matrix: sp.csr_matrix, y: np.ndarray, h: float, n_steps: int) -> np.ndarray:
    """Advance ``y' = matrix y`` by ``n_steps`` fixed RK4 steps of size ``h``.

    The input vector is never modified; a new array is returned.
    """
    if n_steps == 0:
        return np.array(y, dtype=np.complex128, copy=True)
    if _ACTIVE_BACKEND == "numba":
        return rk4_propagate_numba(matrix, y, h, n_steps)
    return rk4_propagate_numpy(matrix, y, h, n_steps)
