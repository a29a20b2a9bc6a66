"""Exact DFT reference paths.

``dft_direct`` is the literal O(N^2) definition and serves as the oracle for
every equivalence test in the suite. ``fast_exact`` provides the
butterfly-factorized exact transforms for lengths 3, 11, and 31: the matrix
is conjugated into a block-diagonal core (a real cosine block and a pure
imaginary sine block) by the same +-1 butterfly stage the approximate
kernels use, which is what removes the redundant arithmetic.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import accel
from .schedule import Schedule, compile_stages

FAST_LENGTHS = (3, 11, 31)


def dft_matrix(n: int) -> np.ndarray:
    """The n x n matrix of powers of the principal n-th root of unity."""
    if n < 1:
        raise ValueError("transform length must be positive")
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n)


def dft_direct(x) -> np.ndarray:
    """O(N^2) transform straight from the definition."""
    x = np.asarray(x, dtype=np.complex128)
    if x.size == 0:
        raise ValueError("empty input")
    n = x.shape[0]
    return dft_matrix(n) @ x


def butterfly_matrix(m: int) -> np.ndarray:
    """+-1 block pairing mirrored inputs: [[I, J], [-J, I]] with J the
    counter-identity of order m/2. Satisfies B^T B = 2 I."""
    if m % 2 != 0:
        raise ValueError("butterfly order must be even")
    h = m // 2
    B = np.zeros((m, m), dtype=np.int64)
    B[:h, :h] = np.eye(h, dtype=np.int64)
    B[:h, h:] = np.eye(h, dtype=np.int64)[::-1]
    B[h:, :h] = -np.eye(h, dtype=np.int64)[::-1]
    B[h:, h:] = np.eye(h, dtype=np.int64)
    return B


def a_stage_matrix(n: int) -> np.ndarray:
    """diag(1, B_{n-1}): passes the DC sample and butterflies the rest."""
    A = np.zeros((n, n), dtype=np.int64)
    A[0, 0] = 1
    A[1:, 1:] = butterfly_matrix(n - 1)
    return A


def derive_core(dense: np.ndarray) -> np.ndarray:
    """Conjugate a conjugate-symmetric transform matrix into its core.

    Returns C with dense = A^T C A, where A = diag(1, B_{n-1}). C must come
    out block-diagonal (real block of order (n+1)/2, imaginary block of
    order (n-1)/2); anything else means the input lacked the required
    symmetry and is reported as an error.
    """
    n = dense.shape[0]
    h = (n - 1) // 2
    A = a_stage_matrix(n).astype(np.float64)
    Ainv = np.linalg.inv(A)
    C = Ainv.T @ dense @ Ainv
    off = max(np.abs(C[: h + 1, h + 1:]).max(), np.abs(C[h + 1:, : h + 1]).max())
    im_top = np.abs(C[: h + 1, : h + 1].imag).max()
    re_bot = np.abs(C[h + 1:, h + 1:].real).max()
    if max(off, im_top, re_bot) > 1e-12:
        raise ValueError("matrix does not reduce to a block-diagonal core")
    out = np.zeros((n, n), dtype=np.complex128)
    out[: h + 1, : h + 1] = C[: h + 1, : h + 1].real
    out[h + 1:, h + 1:] = 1j * C[h + 1:, h + 1:].imag
    return out


def _snap_halves(M: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Snap entries that are within tol of a multiple of 1/2.

    The conjugation above reproduces rational core entries (0, +-1/2, +-1)
    only to floating precision; snapping restores their exact values so the
    schedule compiler can classify them as shifts rather than general
    multiplications.
    """
    out = M.copy()
    for part in (out.real, out.imag):
        snapped = np.round(part * 2) / 2
        mask = np.abs(part - snapped) <= tol
        part[mask] = snapped[mask]
    return out


@lru_cache(maxsize=None)
def exact_fast_schedule(n: int) -> Schedule:
    """Operation schedule for the factorized exact transform."""
    if n not in FAST_LENGTHS:
        raise ValueError(f"no fast exact factorization for n={n}")
    F = dft_matrix(n)
    core = _snap_halves(derive_core(F))
    A = a_stage_matrix(n)
    return compile_stages([A, core, A.T], n)


@lru_cache(maxsize=None)
def exact_definition_schedule(n: int) -> Schedule:
    """Dense by-definition schedule (general complex row sums)."""
    if n < 1:
        raise ValueError("transform length must be positive")
    if n == 1:
        return compile_stages([np.eye(1)], 1)
    return compile_stages([dft_matrix(n)], n)


def fast_exact(n: int, x) -> np.ndarray:
    """Factorized exact transform for n in {3, 11, 31}."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != n:
        raise ValueError(f"input length {x.shape[0]} does not match n={n}")
    sched = exact_fast_schedule(n)
    if x.ndim == 1:
        return accel.run(sched, x[:, None])[:, 0]
    return accel.run(sched, x)
