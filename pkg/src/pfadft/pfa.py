"""Coprime-factor (Good-Thomas) composition of transform kernels.

An execution plan is a binary tree of pairwise-coprime factors with a
kernel choice at each leaf and a scale mode applied once at the top. Index
permutations come from the Chinese remainder theorem, so no intermediate
root-of-unity multipliers appear anywhere in the composition; an all-leaf
approximate plan therefore runs on additions and bit-shifts alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import accel
from .exactdft import FAST_LENGTHS, exact_definition_schedule, exact_fast_schedule
from .kernels import (KERNEL_LENGTHS, AssembledScale, approx_fast_schedule,
                      kernel_eta, make_scale)
from .schedule import CountingComplex, Tally, run_counting

HYBRID_LEGS = {
    "I": frozenset({3}),
    "II": frozenset({11}),
    "III": frozenset({31}),
    "IV": frozenset({3, 11}),
    "V": frozenset({3, 31}),
    "VI": frozenset({11, 31}),
}


def crt_coefficients(n1: int, n2: int):
    """Smallest non-negative (c1, c2) with (c1*n1 + c2*n2) mod n1*n2 == 1."""
    if math.gcd(n1, n2) != 1:
        raise ValueError(f"{n1} and {n2} are not coprime")
    c1 = pow(n1, -1, n2) if n2 > 1 else 0
    c2 = pow(n2, -1, n1) if n1 > 1 else 0
    if (c1 * n1 + c2 * n2) % (n1 * n2) != 1 % (n1 * n2):
        raise AssertionError("CRT coefficient congruence failed")
    return c1, c2


@dataclass(frozen=True)
class IndexMap:
    """Forward/inverse CRT permutations for one coprime split."""

    n1: int
    n2: int
    forward: np.ndarray   # cell (i, k) reads x[forward[i*n2 + k]]
    inverse: np.ndarray   # cell (i, k) lands at X[inverse[i*n2 + k]]


@lru_cache(maxsize=None)
def build_index_maps(n1: int, n2: int) -> IndexMap:
    """Input and output index permutations for an (n1, n2) split."""
    c1, c2 = crt_coefficients(n1, n2)
    n = n1 * n2
    r = (n1 * c1) % n
    s = (n2 * c2) % n
    i = np.arange(n1)[:, None]
    k = np.arange(n2)[None, :]
    forward = ((i * s + k * r) % n).ravel()
    inverse = ((i * n2 + k * n1) % n).ravel()
    for perm in (forward, inverse):
        if len(np.unique(perm)) != n:
            raise AssertionError("index map is not a bijection")
    return IndexMap(n1, n2, forward, inverse)


# ---------------------------------------------------------------------------
# plan trees

@dataclass(frozen=True)
class Leaf:
    n: int
    kind: str  # "approx" | "exact" | "definition"

    def __post_init__(self):
        if self.kind not in ("approx", "exact", "definition"):
            raise ValueError(f"unknown leaf kind {self.kind!r}")
        if self.kind == "approx" and self.n not in KERNEL_LENGTHS:
            raise ValueError(f"no approximate kernel for n={self.n}")


@dataclass(frozen=True)
class Node:
    left: object   # transform of length n1 (outer/row factor)
    right: object  # transform of length n2 (inner/column factor)

    def __post_init__(self):
        if math.gcd(tree_length(self.left), tree_length(self.right)) != 1:
            raise ValueError("node factors must be coprime")


def tree_length(t) -> int:
    return t.n if isinstance(t, Leaf) else tree_length(t.left) * tree_length(t.right)


@dataclass(frozen=True)
class ExecutionPlan:
    tree: object
    scale_mode: str            # "none" | "exact" | "csd"
    variant_label: str = ""

    @property
    def n(self) -> int:
        return tree_length(self.tree)


def leaf_schedule(leaf: Leaf):
    if leaf.kind == "approx":
        return approx_fast_schedule(leaf.n)
    if leaf.kind == "definition" or leaf.n not in FAST_LENGTHS:
        return exact_definition_schedule(leaf.n)
    return exact_fast_schedule(leaf.n)


def _prime_power_factors(n: int):
    if n == 1:
        return [1]
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            out.append(q)
        p += 1
    if m > 1:
        out.append(m)
    return sorted(out, reverse=True)


def _build_tree(factors, kinds):
    if len(factors) == 1:
        n = factors[0]
        return Leaf(n, kinds[n])
    return Node(Leaf(factors[0], kinds[factors[0]]), _build_tree(factors[1:], kinds))


def plan(n: int, variant: str) -> ExecutionPlan:
    """Build the execution plan for a named variant of the n-point DFT.

    Variants: ``exact``, ``exact-definition``, ``unscaled``, ``scaled``,
    ``csd``, and for n = 1023 the hybrids ``hybrid-I-scaled`` ...
    ``hybrid-VI-csd`` in which the listed leg lengths stay exact.
    """
    if n < 1:
        raise ValueError("transform length must be positive")
    factors = _prime_power_factors(n)
    kinds = {}
    scale_mode = "none"
    if variant == "exact":
        kinds = {f: "exact" for f in factors}
    elif variant == "exact-definition":
        kinds = {f: "definition" for f in factors}
    elif variant in ("unscaled", "scaled", "csd"):
        missing = [f for f in factors if f not in KERNEL_LENGTHS]
        if missing:
            raise ValueError(f"no approximate kernel for factor(s) {missing} of n={n}")
        kinds = {f: "approx" for f in factors}
        scale_mode = {"unscaled": "none", "scaled": "exact", "csd": "csd"}[variant]
    elif variant.startswith("hybrid-"):
        parts = variant.split("-")
        if len(parts) != 3 or parts[1] not in HYBRID_LEGS or parts[2] not in ("scaled", "csd"):
            raise ValueError(f"unknown variant {variant!r}")
        legs = HYBRID_LEGS[parts[1]]
        if set(factors) != {3, 11, 31}:
            raise ValueError("hybrid variants are defined for n = 1023")
        kinds = {f: ("approx" if f in legs else "exact") for f in factors}
        scale_mode = "exact" if parts[2] == "scaled" else "csd"
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return ExecutionPlan(_build_tree(factors, kinds), scale_mode, variant)


def variant_names(n: int):
    base = ["exact", "exact-definition", "unscaled", "scaled", "csd"]
    if n == 1023:
        base += [f"hybrid-{r}-{s}" for r in HYBRID_LEGS for s in ("scaled", "csd")]
    return base


# ---------------------------------------------------------------------------
# scale assembly

def _scale_radicands(tree) -> tuple:
    """Exact radicands of the composed output scale, by CRT composition."""
    if isinstance(tree, Leaf):
        if tree.kind != "approx":
            return (Fraction(1),) * tree.n
        eta = kernel_eta(tree.n)
        return (Fraction(1),) + (eta,) * (tree.n - 1)
    s1 = _scale_radicands(tree.left)
    s2 = _scale_radicands(tree.right)
    n1, n2 = len(s1), len(s2)
    imap = build_index_maps(n1, n2)
    out = [Fraction(1)] * (n1 * n2)
    flat = 0
    for i in range(n1):
        for k in range(n2):
            out[imap.inverse[flat]] = s1[i] * s2[k]
            flat += 1
    return tuple(out)


def assemble_scale(plan_: ExecutionPlan) -> AssembledScale:
    """Composed per-output scale of a plan, in the plan's scale mode."""
    return make_scale(_scale_radicands(plan_.tree), plan_.scale_mode)


# ---------------------------------------------------------------------------
# execution

def _run_tree(tree, arr, runner):
    """Apply the tree transform to an (n, batch) block; runner executes
    leaf schedules so the same recursion serves the fast and the
    instrumented paths."""
    if isinstance(tree, Leaf):
        return runner(leaf_schedule(tree), arr)
    n1 = tree_length(tree.left)
    n2 = tree_length(tree.right)
    imap = build_index_maps(n1, n2)
    batch = arr.shape[1]
    y = arr[imap.forward].reshape(n1, n2, batch)
    # inner transform along the n2 coordinate, one call batched over rows
    y = _run_tree(tree.right, y.transpose(1, 0, 2).reshape(n2, n1 * batch), runner)
    y = y.reshape(n2, n1, batch)
    # outer transform along the n1 coordinate
    y = _run_tree(tree.left, y.transpose(1, 0, 2).reshape(n1, n2 * batch), runner)
    y = y.reshape(n1, n2, batch).reshape(n1 * n2, batch)
    out = np.empty_like(y)
    out[imap.inverse] = y
    return out


def execute(plan_: ExecutionPlan, x) -> np.ndarray:
    """Run a plan on a signal (or a batch of column signals)."""
    x = np.asarray(x, dtype=np.complex128)
    single = x.ndim == 1
    if single:
        x = x[:, None]
    if x.shape[0] != plan_.n:
        raise ValueError(f"input length {x.shape[0]} does not match plan n={plan_.n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("input contains non-finite values")
    y = _run_tree(plan_.tree, x, accel.run)
    if plan_.scale_mode != "none":
        y = assemble_scale(plan_).values()[:, None] * y
    return y[:, 0] if single else y


def unscaled(plan_: ExecutionPlan, x) -> np.ndarray:
    """Run the plan's kernel composition without any output scale."""
    return execute(ExecutionPlan(plan_.tree, "none", plan_.variant_label), x)


def instrumented_count(plan_: ExecutionPlan, rng=None):
    """Execute once with counting scalars and return the measured OpCount.

    The counting scalars flow through the identical permutation and
    schedule stream as the fast path; the tally is whatever arithmetic the
    run actually performed.
    """
    rng = rng or np.random.default_rng(0)
    n = plan_.n
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    tally = Tally()
    arr = np.empty((n, 1), dtype=object)
    for i in range(n):
        arr[i, 0] = CountingComplex(x[i].real, x[i].imag, tally)
    y = _run_tree(plan_.tree, arr, run_counting)
    if plan_.scale_mode != "none":
        sched = assemble_scale(plan_).schedule()
        y = run_counting(sched, y)
    ref = execute(plan_, x)
    got = np.array([v.to_complex() for v in y[:, 0]])
    if np.max(np.abs(got - ref)) > 1e-9 * max(1.0, np.max(np.abs(ref))):
        raise AssertionError("instrumented run disagrees with the fast path")
    return tally.as_opcount()


# ---------------------------------------------------------------------------
# dense assembly (analysis paths)

def _dense_tree(tree) -> np.ndarray:
    from .exactdft import dft_matrix
    from .kernels import kernel
    if isinstance(tree, Leaf):
        return kernel(tree.n) if tree.kind == "approx" else dft_matrix(tree.n)
    M1 = _dense_tree(tree.left)
    M2 = _dense_tree(tree.right)
    n1, n2 = M1.shape[0], M2.shape[0]
    imap = build_index_maps(n1, n2)
    out = np.empty((n1 * n2, n1 * n2), dtype=np.complex128)
    out[np.ix_(imap.inverse, imap.forward)] = np.kron(M1, M2)
    return out


def dense_matrix(plan_: ExecutionPlan) -> np.ndarray:
    """Full matrix of the plan, scale included (binary64)."""
    M = _dense_tree(plan_.tree)
    if plan_.scale_mode != "none":
        M = assemble_scale(plan_).values()[:, None] * M
    return M


# ---------------------------------------------------------------------------
# serialization

def _tree_to_obj(tree):
    if isinstance(tree, Leaf):
        return tree.n
    return [_tree_to_obj(tree.left), _tree_to_obj(tree.right)]


def _tree_kinds(tree, out):
    if isinstance(tree, Leaf):
        out[str(tree.n)] = tree.kind
    else:
        _tree_kinds(tree.left, out)
        _tree_kinds(tree.right, out)
    return out


def plan_to_json(plan_: ExecutionPlan) -> str:
    return json.dumps({
        "n": plan_.n,
        "tree": _tree_to_obj(plan_.tree),
        "kernels": _tree_kinds(plan_.tree, {}),
        "scale": plan_.scale_mode,
    })


def plan_from_json(text: str) -> ExecutionPlan:
    obj = json.loads(text)
    kinds = {int(k): v for k, v in obj["kernels"].items()}

    def build(node):
        if isinstance(node, int):
            return Leaf(node, kinds[node])
        if len(node) != 2:
            raise ValueError("tree nodes must be [left, right]")
        return Node(build(node[0]), build(node[1]))

    tree = build(obj["tree"])
    p = ExecutionPlan(tree, obj.get("scale", "none"), "custom")
    if p.n != obj["n"]:
        raise ValueError("tree product disagrees with declared n")
    return p
