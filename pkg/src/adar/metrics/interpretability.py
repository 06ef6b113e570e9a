"""
Interpretability metrics of a rule base.

overlap_index: mean over attributes of the largest normalized overlap
between any two rules' fuzzy sets. Lower means rules are easier to tell
apart.

fsp_index: positional and shape dissimilarity of neighbouring fuzzy sets
after sorting each attribute's sets by center, normalized by L * D.

Masked (rule, attribute) fuzzy sets do not take part in either index.
Both are 0 for a single-rule base.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np

from adar.model.rulebase import RuleBase

SQRT_2PI = math.sqrt(2.0 * math.pi)
WINDOW_SIGMAS = 8.0
OVERLAP_TOLERANCE = 1e-6
# below this the shape term's denominator is treated as zero
WIDTH_EPSILON = 1e-12


def adaptive_simpson(
    func: Callable[[float], float],
    a: float,
    b: float,
    tol: float = OVERLAP_TOLERANCE,
    max_depth: int = 50,
    min_depth: int = 3,
) -> float:
    """
    Integrate func over [a, b] with adaptive Simpson refinement.

    A panel is accepted when its two halves agree with the whole to within
    15 * tol (the Richardson correction is added). Panels above min_depth
    are always split, so narrow peaks are not skipped.
    """
    if b <= a:
        return 0.0
    fa, fb = func(a), func(b)
    m = 0.5 * (a + b)
    fm = func(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, estimate, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = func(lm), func(rm)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - estimate
        if depth >= max_depth or (depth >= min_depth and abs(delta) <= 15.0 * eps):
            total += left + right + delta / 15.0
            continue
        stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
        stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
    return total


def _gaussian(v: float, s: float) -> Callable[[float], float]:
    def mu(x: float) -> float:
        z = (x - v) / s
        return math.exp(-0.5 * z * z)

    return mu


def _breakpoints(v1: float, s1: float, v2: float, s2: float, lo: float, hi: float) -> list[float]:
    """Window ends, both centers and the points where the two curves cross."""
    points = {lo, hi, v1, v2}
    points.add((v1 * s2 + v2 * s1) / (s1 + s2))
    if abs(s2 - s1) > WIDTH_EPSILON:
        points.add((v1 * s2 - v2 * s1) / (s2 - s1))
    return sorted(p for p in points if lo <= p <= hi)


def pairwise_overlap(g1: tuple[float, float], g2: tuple[float, float], tol: float = OVERLAP_TOLERANCE) -> float:
    """
    Normalized overlap of two unnormalized Gaussians.

    integral of min(mu1, mu2) divided by the smaller of the two integrals
    s * sqrt(2 pi). The min is integrated piecewise between crossing points
    over an 8-sigma window.

    Args:
        g1: (center, width) of the first set
        g2: (center, width) of the second set
        tol: Absolute quadrature tolerance

    Returns:
        Overlap in [0, 1]; 1 for identical sets
    """
    v1, s1 = float(g1[0]), float(g1[1])
    v2, s2 = float(g2[0]), float(g2[1])
    if v1 == v2 and s1 == s2:
        return 1.0

    mu1, mu2 = _gaussian(v1, s1), _gaussian(v2, s2)

    def lower(x: float) -> float:
        return min(mu1(x), mu2(x))

    spread = WINDOW_SIGMAS * max(s1, s2)
    points = _breakpoints(v1, s1, v2, s2, min(v1, v2) - spread, max(v1, v2) + spread)
    panel_tol = tol / max(1, len(points) - 1)
    area = sum(adaptive_simpson(lower, a, b, panel_tol) for a, b in zip(points[:-1], points[1:], strict=True))
    return float(min(1.0, max(0.0, area / (min(s1, s2) * SQRT_2PI))))


def overlap_index(rb: RuleBase, tol: float = OVERLAP_TOLERANCE) -> float:
    """Average over attributes of the maximum pairwise overlap between rules."""
    if rb.num_rules < 2:
        return 0.0
    active = rb.active
    total = 0.0
    for attr in range(rb.num_attrs):
        rules = np.nonzero(active[:, attr])[0]
        best = 0.0
        for pos, i in enumerate(rules):
            for j in rules[pos + 1 :]:
                value = pairwise_overlap(
                    (rb.centers[i, attr], rb.widths[i, attr]),
                    (rb.centers[j, attr], rb.widths[j, attr]),
                    tol,
                )
                best = max(best, value)
        total += best
    return total / rb.num_attrs


def _adjacent_score(v1: float, s1: float, v2: float, s2: float) -> float:
    dv = v2 - v1
    phi = math.exp(-0.5 * (dv / (s1 + s2)) ** 2)
    ds = s1 - s2
    if abs(ds) < WIDTH_EPSILON:
        psi = 1.0 if v1 == v2 else 0.0
    else:
        psi = math.exp(-0.5 * (dv / ds) ** 2)
    return 2.0 * (0.5 - phi + psi)


def fsp_index(rb: RuleBase) -> float:
    """Fuzzy set position index over center-sorted neighbouring sets."""
    if rb.num_rules < 2:
        return 0.0
    active = rb.active
    total = 0.0
    for attr in range(rb.num_attrs):
        rules = np.nonzero(active[:, attr])[0]
        centers = rb.centers[rules, attr]
        widths = rb.widths[rules, attr]
        order = np.argsort(centers, kind="stable")
        centers, widths = centers[order], widths[order]
        for k in range(len(order) - 1):
            total += _adjacent_score(centers[k], widths[k], centers[k + 1], widths[k + 1])
    return total / (rb.num_rules * rb.num_attrs)


def structural_counts(rb: RuleBase) -> tuple[int, int]:
    """(number of rules, number of active attribute entries)."""
    return rb.num_rules, int(np.sum(rb.attr_mask))
