"""Killing tensor invariants in the Euclidean plane."""

from ._core import (
    KtError,
    act,
    audit,
    cartesian,
    characterize_sw,
    classify_kt,
    classify_pair,
    compatible,
    degeneracy,
    dual_solve,
    eh,
    invariants_single,
    joint_invariants,
    metric,
    polar,
    ttw_scan,
)

__all__ = [
    "KtError",
    "act",
    "audit",
    "cartesian",
    "characterize_sw",
    "classify_kt",
    "classify_pair",
    "compatible",
    "degeneracy",
    "dual_solve",
    "eh",
    "invariants_single",
    "joint_invariants",
    "metric",
    "polar",
    "ttw_scan",
]
