"""Error tables, filter-bank frequency responses, and the cosine probe.

Rows of a transform matrix are treated as FIR filters. Per-row error
energies integrate |H(w) - Hhat(w)|^2 over the positive-frequency half
[0, pi]; the closed form below evaluates that integral exactly from the
row difference and its lag autocorrelation, so row energies of conjugate
row pairs sum to the full-circle energy and the grand total ties out to
the matrix error energy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import error_energy, mape, orth_deviation
from .exactdft import dft_matrix
from .pfa import ExecutionPlan, dense_matrix, execute, plan

DB_FLOOR = -300.0


@dataclass(frozen=True)
class RowErrorEnergy:
    row: int
    energy: float


@dataclass(frozen=True)
class ResponseCurve:
    omega: np.ndarray          # uniform grid over [-pi, pi)
    magnitude_db: np.ndarray
    row_index: int


def _as_plan(variant, n=None) -> ExecutionPlan:
    if isinstance(variant, ExecutionPlan):
        return variant
    return plan(n, variant)


def row_error_energies(approx: np.ndarray, exact: np.ndarray) -> np.ndarray:
    """Exact half-spectrum error energy of every row.

    For row difference d[m], the integral of |sum_m d[m] e^{-jmw}|^2 over
    [0, pi] equals pi*||d||^2 + sum over odd lags u of (4/u) Im C_u with
    C_u the lag-u autocorrelation of d. Even lags integrate to zero.
    """
    D = np.asarray(approx) - np.asarray(exact)
    n = D.shape[1]
    nfft = 1
    while nfft < 2 * n:
        nfft *= 2
    G = np.fft.fft(D, nfft, axis=1)
    corr = np.fft.ifft(G * np.conj(G), axis=1)[:, :n]
    odd = np.arange(1, n, 2)
    base = np.pi * np.sum(np.abs(D) ** 2, axis=1)
    cross = corr[:, odd].imag @ (4.0 / odd)
    return base + cross


def row_error_table(variant, n=None):
    """Per-row half-spectrum error energies of a variant, 0-indexed rows."""
    p = _as_plan(variant, n)
    approx = dense_matrix(p)
    exact = dft_matrix(p.n)
    energies = row_error_energies(approx, exact)
    return [RowErrorEnergy(i, float(e)) for i, e in enumerate(energies)]


def worst_rows(variant, n=None, k: int = 3):
    """The k rows with the largest error energy, worst first."""
    table = row_error_table(variant, n)
    return sorted(table, key=lambda r: r.energy, reverse=True)[:k]


# ---------------------------------------------------------------------------
# frequency responses

def _response_grid(rows: np.ndarray, grid_points: int) -> np.ndarray:
    """H(w) for each row on the uniform grid over [-pi, pi)."""
    return np.fft.fftshift(np.fft.fft(rows, grid_points, axis=-1), axes=-1)


def response_omega(grid_points: int) -> np.ndarray:
    return 2.0 * np.pi * np.fft.fftshift(np.fft.fftfreq(grid_points))


def filter_response(matrix_row, grid_points: int = 4096, row_index: int = -1) -> ResponseCurve:
    """Normalized magnitude response of one matrix row, peak at 0 dB."""
    row = np.asarray(matrix_row, dtype=np.complex128)
    if grid_points < 2 * row.size:
        raise ValueError("grid must oversample the row at least twice")
    H = _response_grid(row, grid_points)
    peak = np.max(np.abs(H))
    if peak == 0.0:
        raise ValueError("zero row has no normalizable response")
    db = 20.0 * np.log10(np.maximum(np.abs(H) / peak, 10.0 ** (DB_FLOOR / 20.0)))
    return ResponseCurve(response_omega(grid_points), db, row_index)


def response_error_curve(approx_row, exact_row, grid_points: int = 4096,
                         row_index: int = -1) -> ResponseCurve:
    """20 log10(|H(w) - Hhat(w)| / max_w |H(w)|), floored at -300 dB."""
    a = np.asarray(approx_row, dtype=np.complex128)
    e = np.asarray(exact_row, dtype=np.complex128)
    if grid_points < 2 * e.size:
        raise ValueError("grid must oversample the row at least twice")
    H = _response_grid(e, grid_points)
    Ha = _response_grid(a, grid_points)
    peak = np.max(np.abs(H))
    if peak == 0.0:
        raise ValueError("zero exact row has no normalizable response")
    ratio = np.maximum(np.abs(Ha - H) / peak, 10.0 ** (DB_FLOOR / 20.0))
    return ResponseCurve(response_omega(grid_points), 20.0 * np.log10(ratio), row_index)


def response_error_max_db(variant, n=None, grid_points=None) -> float:
    """Worst response-error level over all non-DC rows of a variant."""
    p = _as_plan(variant, n)
    grid = grid_points or (8192 if p.n > 64 else 4096)
    approx = dense_matrix(p)
    exact = dft_matrix(p.n)
    H = _response_grid(exact, grid)
    Ha = _response_grid(approx, grid)
    err = np.abs(Ha - H) / np.max(np.abs(H), axis=1)[:, None]
    return float(20.0 * np.log10(max(np.max(err[1:]), 10.0 ** (DB_FLOOR / 20.0))))


# ---------------------------------------------------------------------------
# reference error tables

GROUND_VARIANTS = (("scaled", "F*_{n}"), ("csd", "F'_{n}"))


def ground_error_table():
    """(epsilon, mape %, phi) for the scaled and CSD ground approximations."""
    rows = []
    for n in (3, 11, 31):
        exact = dft_matrix(n)
        for variant, label in GROUND_VARIANTS:
            A = dense_matrix(plan(n, variant))
            rows.append((n, label.format(n=n), error_energy(A, exact),
                         mape(A, exact), orth_deviation(A)))
    return rows


def composed_error_table():
    """(epsilon, mape %, phi) for the fourteen 1023-point approximations."""
    from .complexity import COMPOSED_VARIANTS
    exact = dft_matrix(1023)
    rows = []
    for variant, label in COMPOSED_VARIANTS:
        if variant in ("exact", "exact-definition"):
            continue
        A = dense_matrix(plan(1023, variant))
        rows.append((1023, label, error_energy(A, exact),
                     mape(A, exact), orth_deviation(A)))
    return rows


# ---------------------------------------------------------------------------
# cosine probe

@dataclass(frozen=True)
class CosineProbe:
    magnitudes: np.ndarray
    dominant_bins: tuple
    dominant_peak: float
    nondominant_max: float

    @property
    def leakage_ratio(self) -> float:
        return self.nondominant_max / self.dominant_peak


def cosine_probe(n: int, bin_index: int, variant) -> CosineProbe:
    """Magnitude spectrum of a pure integer-bin cosine through a variant.

    Reports the two dominant lobes (the bin and its mirror) and the largest
    magnitude anywhere else, the leakage statistic.
    """
    if not (0 < bin_index < n / 2):
        raise ValueError("bin must lie strictly inside (0, n/2)")
    p = _as_plan(variant, n)
    x = np.cos(2.0 * np.pi * bin_index * np.arange(n) / n)
    mag = np.abs(execute(p, x))
    dom = (bin_index, n - bin_index)
    rest = np.delete(mag, dom)
    return CosineProbe(mag, dom, float(np.max(mag[list(dom)])), float(np.max(rest)))
