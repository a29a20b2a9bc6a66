"""Operation accounting for kernels and full plans.

Counts come from two independent routes that the tests require to agree:
static folds over the operation schedules, and instrumented runs that
thread a counting scalar through the execution path. Comparison rows for
power-of-two algorithms we do not implement are stored constants and are
flagged as such in every report.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactdft import exact_definition_schedule, exact_fast_schedule
from .kernels import approx_dense_schedule, approx_fast_schedule, kernel_scale
from .pfa import ExecutionPlan, Leaf, Node, assemble_scale, instrumented_count, leaf_schedule, plan
from .schedule import OpCount

KERNEL_KINDS = ("approx", "exact", "definition")


def count_kernel(n: int, kind: str = "approx", scale_mode: str = "none",
                 factorized: bool = True) -> OpCount:
    """Static operation count of one ground transform.

    ``kind`` picks the matrix (approximate kernel or exact DFT), ``factorized``
    the butterfly schedule versus the dense row sums, and ``scale_mode`` adds
    the per-output scale cost for approximate kernels.
    """
    if kind not in KERNEL_KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}")
    if kind == "approx":
        sched = approx_fast_schedule(n) if factorized else approx_dense_schedule(n)
        total = sched.static_count()
        if scale_mode != "none":
            total = total + kernel_scale(n, scale_mode).op_count()
        return total
    if scale_mode != "none":
        raise ValueError("exact kernels carry no scale")
    if kind == "definition" or not factorized:
        return exact_definition_schedule(n).static_count()
    return exact_fast_schedule(n).static_count()


def instrumented_kernel_count(n: int, kind: str = "approx",
                              scale_mode: str = "none") -> OpCount:
    """Measured count from an instrumented single-kernel execution."""
    variant = {"approx": {"none": "unscaled", "exact": "scaled", "csd": "csd"},
               "exact": {"none": "exact"},
               "definition": {"none": "exact-definition"}}[kind][scale_mode]
    return instrumented_count(plan(n, variant))


def _count_tree(tree) -> OpCount:
    if isinstance(tree, Leaf):
        return leaf_schedule(tree).static_count()
    from .pfa import tree_length
    n1 = tree_length(tree.left)
    n2 = tree_length(tree.right)
    return n1 * _count_tree(tree.right) + n2 * _count_tree(tree.left)


def count_plan(plan_: ExecutionPlan) -> OpCount:
    """Static count of a full plan: leaf calls times leaf costs plus scale."""
    total = _count_tree(plan_.tree)
    if plan_.scale_mode != "none":
        total = total + assemble_scale(plan_).op_count()
    return total


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class ReportRow:
    n: int
    label: str
    count: OpCount
    source: str  # "computed" | "reference"


#: documented literature counts for algorithms this package does not build
REFERENCE_ROWS = (
    ReportRow(32, "F_32 (radix-2)", OpCount(88, 408, 0), "reference"),
    ReportRow(32, "F^_32 (multiplierless 32-point)", OpCount(0, 348, 0), "reference"),
    ReportRow(1024, "F_1024 (definition)", OpCount(3084288, 5159936, 0), "reference"),
    ReportRow(1024, "F_1024 (radix-2)", OpCount(10248, 30728, 0), "reference"),
    ReportRow(1024, "F^_1024 I (radix-2 approximation)", OpCount(2883, 25155, 0), "reference"),
    ReportRow(1024, "F^_1024 II (radix-2 approximation)", OpCount(5699, 27075, 0), "reference"),
    ReportRow(1024, "F^_1024 III (radix-2 approximation)", OpCount(5699, 27075, 0), "reference"),
)

_GROUND_ROWS = (
    ("definition", "none", False, "F_{n} (definition)"),
    ("exact", "none", True, "F_{n} (fast)"),
    ("approx", "none", True, "T*_{n}"),
    ("approx", "exact", True, "F*_{n}"),
    ("approx", "csd", True, "F'_{n}"),
)

COMPOSED_VARIANTS = (
    ("exact-definition", "F_1023 (PFA, definition kernels)"),
    ("exact", "F_1023 (PFA, fast kernels)"),
    ("hybrid-I-scaled", "F*_1023,I"), ("hybrid-I-csd", "F'_1023,I"),
    ("hybrid-II-scaled", "F*_1023,II"), ("hybrid-II-csd", "F'_1023,II"),
    ("hybrid-III-scaled", "F*_1023,III"), ("hybrid-III-csd", "F'_1023,III"),
    ("hybrid-IV-scaled", "F*_1023,IV"), ("hybrid-IV-csd", "F'_1023,IV"),
    ("hybrid-V-scaled", "F*_1023,V"), ("hybrid-V-csd", "F'_1023,V"),
    ("hybrid-VI-scaled", "F*_1023,VI"), ("hybrid-VI-csd", "F'_1023,VI"),
    ("unscaled", "T*_1023"),
    ("scaled", "F*_1023"),
    ("csd", "F'_1023"),
)


def ground_report():
    rows = []
    for n in (3, 11, 31):
        for kind, scale, factorized, label in _GROUND_ROWS:
            rows.append(ReportRow(n, label.format(n=n),
                                  count_kernel(n, kind, scale, factorized), "computed"))
    return rows


def composed_report():
    return [ReportRow(1023, label, count_plan(plan(1023, v)), "computed")
            for v, label in COMPOSED_VARIANTS]


def complexity_report():
    """Every computed kernel/plan row plus the stored reference rows."""
    return ground_report() + list(REFERENCE_ROWS[:2]) + composed_report() + list(REFERENCE_ROWS[2:])
