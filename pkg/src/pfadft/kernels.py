"""Frozen low-complexity DFT kernels and their butterfly factorizations.

The 3-, 11-, and 31-point kernels are the quantized matrices at expansion
factor 9/8. Each factors exactly as A^T C A with A = diag(1, B_{n-1}) and C
block-diagonal over the multiplier set; the factorization is derived here in
integer arithmetic and validated entrywise against the dense kernel, then
compiled into an add/shift schedule that both executes the transform and
yields its operation count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import accel
from .design import candidate_matrix, scale_vector
from .dyadic import DyadicComplex, csd_encode, csd_eval
from .exactdft import a_stage_matrix
from .schedule import OpCount, Schedule, compile_stages, scale_schedule

KERNEL_LENGTHS = (3, 11, 31)
OPTIMAL_ALPHA = 9.0 / 8.0


@lru_cache(maxsize=None)
def kernel(n: int) -> np.ndarray:
    """Dense low-complexity kernel at the selected expansion factor.

    Entries are multiples of 1/2 and exactly representable, so the returned
    complex128 matrix is exact.
    """
    if n not in KERNEL_LENGTHS:
        raise ValueError(f"no approximate kernel for n={n}")
    return candidate_matrix(n, OPTIMAL_ALPHA)


@dataclass(frozen=True)
class KernelFactorization:
    """A^T C A decomposition of a dense kernel, with its operation count."""

    n: int
    a_matrix: np.ndarray      # integer butterfly stage diag(1, B_{n-1})
    core: np.ndarray          # block-diagonal complex core, entries in halves
    op_count: OpCount

    def dense(self) -> np.ndarray:
        """Exact dense expansion of the factorization (integer arithmetic)."""
        A = self.a_matrix
        c2re = np.rint(2 * self.core.real).astype(np.int64)
        c2im = np.rint(2 * self.core.imag).astype(np.int64)
        re2 = A.T @ c2re @ A
        im2 = A.T @ c2im @ A
        return (re2 + 1j * im2) / 2.0


@lru_cache(maxsize=None)
def factorization(n: int) -> KernelFactorization:
    """Derive the butterfly factorization of kernel(n), exactly.

    With W = diag(1, B_{n-1}), the core is C = W T W^T with rows and columns
    past the first halved twice; the division is checked to be exact and the
    result to stay inside the multiplier set.
    """
    T = kernel(n)
    t2re = np.rint(2 * T.real).astype(np.int64)
    t2im = np.rint(2 * T.imag).astype(np.int64)
    W = a_stage_matrix(n)
    scale = np.ones(n, dtype=np.int64) * 2
    scale[0] = 1
    # with grid = W (2T) W^T, core_ij = grid_ij / (2 s_i s_j)
    den = 2 * np.outer(scale, scale)
    core = np.zeros((n, n), dtype=np.complex128)
    for grid, part in ((W @ t2re @ W.T, "re"), (W @ t2im @ W.T, "im")):
        num = 2 * grid  # twice the core entry, as num/den; must divide exactly
        if np.any(num % den):
            raise ValueError("core entries are not multiples of 1/2")
        vals = (num // den) / 2.0
        if part == "re":
            core += vals
        else:
            core += 1j * vals
    h = (n - 1) // 2
    if np.abs(core[: h + 1, h + 1:]).max() or np.abs(core[h + 1:, : h + 1]).max():
        raise ValueError("derived core is not block-diagonal")
    if np.abs(core[: h + 1, : h + 1].imag).max() or np.abs(core[h + 1:, h + 1:].real).max():
        raise ValueError("derived core blocks are not real/imaginary")
    bad = set(np.abs(core.real).ravel()) | set(np.abs(core.imag).ravel())
    if not bad <= {0.0, 0.5, 1.0}:
        raise ValueError(f"core entries leave the multiplier set: {sorted(bad)}")
    sched = compile_stages([W, core, W.T], n)
    fact = KernelFactorization(n, W, core, sched.static_count())
    if np.abs(fact.dense() - T).max() != 0.0:
        raise ValueError("factorization does not reproduce the dense kernel")
    return fact


@lru_cache(maxsize=None)
def approx_fast_schedule(n: int) -> Schedule:
    """Add/shift schedule of the factorized kernel."""
    f = factorization(n)
    return compile_stages([f.a_matrix, f.core, f.a_matrix.T], n)


@lru_cache(maxsize=None)
def approx_dense_schedule(n: int) -> Schedule:
    """Schedule for the unfactorized kernel (dense row sums)."""
    return compile_stages([kernel(n)], n)


def apply_kernel_fast(n: int, x) -> np.ndarray:
    """Multiply by the dense kernel using only additions and shifts."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != n:
        raise ValueError(f"input length {x.shape[0]} does not match n={n}")
    sched = approx_fast_schedule(n)
    if x.ndim == 1:
        return accel.run(sched, x[:, None])[:, 0]
    return accel.run(sched, x)


# ---------------------------------------------------------------------------
# scales

@dataclass(frozen=True)
class AssembledScale:
    """Positive output scale, exact: surd radicands plus optional CSD codes.

    radicands[i] is the exact rational whose square root scales output i;
    in csd mode the applied value is instead the code's exact dyadic value.
    """

    radicands: tuple
    mode: str                      # "none" | "exact" | "csd"
    csd_codes: tuple = None        # per-entry CsdCode or None (unit entries)

    def __post_init__(self):
        if self.mode not in ("none", "exact", "csd"):
            raise ValueError(f"unknown scale mode {self.mode!r}")

    def __len__(self):
        return len(self.radicands)

    def values(self) -> np.ndarray:
        if self.mode == "none":
            return np.ones(len(self.radicands))
        if self.mode == "exact":
            return np.sqrt(np.array([float(r) for r in self.radicands]))
        return np.array([1.0 if c is None else float(csd_eval(c)) for c in self.csd_codes])

    def nonunit_indices(self):
        return [i for i, r in enumerate(self.radicands) if r != 1]

    def schedule(self) -> Schedule:
        vals = self.values()
        if self.mode == "csd":
            info = {i: (vals[i], self.csd_codes[i].nonzero_count)
                    for i in self.nonunit_indices()}
            return scale_schedule(vals, info)
        if self.mode == "exact":
            return scale_schedule(vals)
        return scale_schedule(np.ones(len(self.radicands)))

    def op_count(self) -> OpCount:
        return self.schedule().static_count()


@lru_cache(maxsize=None)
def _csd_for_radicand(radicand: Fraction) -> CsdCode:
    return csd_encode(float(np.sqrt(float(radicand))))


def make_scale(radicands, mode: str) -> AssembledScale:
    """Attach the requested application mode to exact radicands."""
    radicands = tuple(Fraction(r) for r in radicands)
    if mode == "csd":
        codes = tuple(None if r == 1 else _csd_for_radicand(r) for r in radicands)
        return AssembledScale(radicands, "csd", codes)
    return AssembledScale(radicands, mode)


@lru_cache(maxsize=None)
def kernel_eta(n: int) -> Fraction:
    """Common radicand of the non-DC rows of kernel(n)."""
    sv = scale_vector(kernel(n))
    rads = sv.radicands
    if rads[0] != 1 or len(set(rads[1:])) != 1:
        raise ValueError("kernel scale does not have the diag(1, sqrt(eta) I) form")
    return rads[1]


def kernel_scale(n: int, mode: str = "exact") -> AssembledScale:
    """Scale vector (1, sqrt(eta), ..., sqrt(eta)) of a ground kernel."""
    eta = kernel_eta(n)
    return make_scale((Fraction(1),) + (eta,) * (n - 1), mode)


def apply_scale(scale: AssembledScale, x) -> np.ndarray:
    """Entrywise real-times-complex scaling of a spectrum."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != len(scale):
        raise ValueError("scale and vector lengths differ")
    vals = scale.values()
    return vals[:, None] * x if x.ndim > 1 else vals * x


# ---------------------------------------------------------------------------
# export

def kernel_to_json(n: int) -> str:
    """Dense kernel as exact dyadic triples, for external verification."""
    T = kernel(n)
    entries = []
    for i in range(n):
        for j in range(n):
            d = DyadicComplex(int(round(2 * T[i, j].real)), int(round(2 * T[i, j].imag)), 1)
            entries.append([d.re_num, d.im_num, d.log2_den])
    return json.dumps({"n": n, "alpha": "9/8", "entries": entries})
