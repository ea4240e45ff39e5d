"""Suite-level metrics over run reports: pass@k, mean speedup, percent faster."""

from __future__ import annotations

OUTLIER_SPEEDUP = 600.0


def speedup_of(report: dict) -> float:
    """original/final SCoP time; a failed run counts as 0."""
    if not report["final"]["passed"]:
        return 0.0
    final_time = report["final"]["scop_time"]
    if not final_time:
        return 0.0
    return report["original_time"] / final_time


def compute_metrics(reports, outlier_cap: float = OUTLIER_SPEEDUP) -> dict:
    reports = list(reports)
    if not reports:
        return {"count": 0, "pass_at_k": 0.0, "mean_speedup": 0.0, "percent_faster": 0.0}
    speedups = [speedup_of(r) for r in reports]
    passed = sum(1 for r in reports if r["final"]["passed"])
    kept = [s for s in speedups if s <= outlier_cap]
    mean = sum(kept) / len(kept) if kept else 0.0
    faster = sum(1 for s in speedups if s > 1.0)
    return {
        "count": len(reports),
        "pass_at_k": passed / len(reports),
        "mean_speedup": mean,
        "percent_faster": faster / len(reports),
        "excluded_outliers": len(speedups) - len(kept),
    }
