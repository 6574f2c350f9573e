"""Analytic recurrence/transience classifier on the (alpha, beta, rho) space.

Decision regions (drift rho*x^alpha/t^beta, unit-jump normalization):

* alpha = beta = 1: transient for rho > 1/2 (T1i), recurrent for rho < 1/2
  (T2i), critical at exactly 1/2.
* alpha = beta < 1: transient for rho in (0, 1] (T3); alpha = beta > 1:
  recurrent for rho < 1 (T4).
* Interior transience wedge {0 <= beta < 1, 2*beta - 1 < alpha < beta}: T1ii.
* Recurrence region {alpha < min(beta, 2*beta - 1)}: T2ii (min = 2*beta - 1
  for beta < 1, = beta for beta >= 1).
* beta = 0 specials: alpha = -1 splits on the second-moment ratio (T5,
  threshold 1/2, equality recurrent); alpha < -1 recurrent (C2i);
  -1 < alpha < 0 transient (C2ii).
* (alpha, beta) = (0, 1/2): recurrent for every rho (LIL-line).
* The line 2*beta - alpha = 1 with -1 < alpha < 1, alpha != 0: OpenProblem.
* beta < 0 or alpha > beta (and rho <= 0, or rho above the alpha = beta
  normalization cap): Invalid.

Comparisons use an absolute tolerance (default 1e-12); points within
tolerance of a region edge that no theorem names are CriticalBoundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

VERDICTS = ("Recurrent", "Transient", "OpenProblem", "CriticalBoundary", "Invalid")
JUSTIFICATIONS = ("T1i", "T1ii", "T2i", "T2ii", "T3", "T4", "T5i", "T5ii",
                  "C2i", "C2ii", "LIL-line", "OpenLine", "Prohibited", "Boundary")


@dataclass(frozen=True)
class PhaseLabel:
    """Verdict plus the theorem/corollary justifying it; detail explains
    Invalid and CriticalBoundary outcomes."""

    verdict: str
    justification: str
    detail: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.justification not in JUSTIFICATIONS:
            raise ValueError(f"unknown justification {self.justification!r}")


def _invalid(detail: str) -> PhaseLabel:
    return PhaseLabel("Invalid", "Prohibited", detail)


def classify(rho: float, alpha: float, beta: float, *,
             second_moment_ratio: float | None = None,
             tol: float = 1e-12) -> PhaseLabel:
    """Classify the walk with drift rho*x^alpha/t^beta.

    Total on all real inputs (non-finite or inadmissible values map to
    Invalid). ``second_moment_ratio`` is the Lamperti-point drift constant
    rho / E(D^2) and is required exactly at (alpha, beta) = (-1, 0), where
    the verdict depends on it; it raises ValueError when missing there.
    """
    vals = (rho, alpha, beta)
    if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in vals):
        return _invalid("non-finite parameter")
    if beta < -tol:
        return _invalid("beta < 0")
    if alpha > beta + tol:
        return _invalid("alpha > beta (prohibited wedge)")
    if rho <= tol:
        return _invalid("rho must be strictly positive")

    if abs(alpha - beta) <= tol:  # critical line alpha = beta
        if rho > 1 + tol:
            return _invalid("rho > 1 not admissible on the alpha = beta line")
        if abs(beta - 1.0) <= tol:
            if abs(rho - 0.5) <= tol:
                return PhaseLabel("CriticalBoundary", "Boundary",
                                  "rho at the recurrence/transience threshold 1/2")
            if rho > 0.5:
                return PhaseLabel("Transient", "T1i")
            return PhaseLabel("Recurrent", "T2i")
        if beta < 1.0:
            return PhaseLabel("Transient", "T3")
        # alpha = beta > 1, admissible rho <= 1; covered only for rho < 1
        if rho >= 1 - tol:
            return PhaseLabel("CriticalBoundary", "Boundary",
                              "alpha = beta > 1 at the normalization cap rho = 1")
        return PhaseLabel("Recurrent", "T4")

    if abs(beta) <= tol:  # beta = 0 specials (time-homogeneous drift)
        if abs(alpha + 1.0) <= tol:
            if second_moment_ratio is None:
                raise ValueError(
                    "(alpha, beta) = (-1, 0) needs second_moment_ratio "
                    "= rho / E(D^2) to split on the threshold 1/2")
            if second_moment_ratio > 0.5 + tol:
                return PhaseLabel("Transient", "T5ii")
            return PhaseLabel("Recurrent", "T5i")
        if alpha < -1.0 - tol:
            return PhaseLabel("Recurrent", "C2i")
        if alpha < -tol:
            return PhaseLabel("Transient", "C2ii")
        # residue: alpha within tol of 0 or -1 handled above/boundary
        return PhaseLabel("CriticalBoundary", "Boundary",
                          "beta = 0 with alpha at a corollary endpoint")

    if abs(alpha) <= tol and abs(beta - 0.5) <= tol:
        return PhaseLabel("Recurrent", "LIL-line")

    if abs(2 * beta - alpha - 1.0) <= tol and -1 + tol < alpha < 1 - tol:
        return PhaseLabel("OpenProblem", "OpenLine")

    if tol < beta < 1 - tol and 2 * beta - 1 + tol < alpha < beta - tol:
        return PhaseLabel("Transient", "T1ii")

    if alpha < min(beta, 2 * beta - 1) - tol:
        return PhaseLabel("Recurrent", "T2ii")

    return PhaseLabel("CriticalBoundary", "Boundary",
                      "within tolerance of a region edge no theorem covers")


def classify_spec(spec, *, second_moment_ratio: float | None = None,
                  tol: float = 1e-12) -> PhaseLabel:
    """classify() on a validated DriftSpec."""
    return classify(spec.rho, spec.alpha, spec.beta,
                    second_moment_ratio=second_moment_ratio, tol=tol)


def region_grid(alpha_range: tuple[float, float], beta_range: tuple[float, float],
                resolution: int, rho: float, *,
                second_moment_ratio: float | None = None,
                tol: float = 1e-12):
    """Row-major grid of labels: rows iterate beta ascending, columns alpha.

    Returns (alphas, betas, labels) with labels[i][j] = classify at
    (alpha=alphas[j], beta=betas[i]). Lamperti cells without a
    second-moment ratio become CriticalBoundary instead of raising, so
    sweeps over rectangles containing (-1, 0) stay total.
    """
    a_lo, a_hi = alpha_range
    b_lo, b_hi = beta_range
    if not (a_lo <= a_hi and b_lo <= b_hi):
        raise ValueError("empty parameter range")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    alphas = np.linspace(a_lo, a_hi, resolution)
    betas = np.linspace(b_lo, b_hi, resolution)
    labels = []
    for b in betas:
        row = []
        for a in alphas:
            try:
                row.append(classify(rho, float(a), float(b),
                                    second_moment_ratio=second_moment_ratio,
                                    tol=tol))
            except ValueError:
                row.append(PhaseLabel(
                    "CriticalBoundary", "Boundary",
                    "Lamperti point: verdict needs the second-moment ratio"))
        labels.append(row)
    return alphas, betas, labels
