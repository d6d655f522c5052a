"""Closed-form dimension engine for systems with points on a normal curve.

The central object is the signed sum

    h0 = sum over (t, I) of (-1)^|I| * f(t, n + k - r - 1, s, eps, n)

where t runs over 0..floor(n/2), I over subsets of the points with
|I| <= n - 2t, k = sigma + t*kc - (t + |I| - 1)*d with sigma the sum of the
multiplicities in I, and r = |I| + 2t - 1.  Subsets enter only through
(|I|, sigma), so instead of 2^s terms we count subsets by size and sum with
a generating-function DP over the multiplicity multiset and weight each
(c, sigma, t) class by its count.

The module also carries the small-s evaluator ldim (inclusion-exclusion
over all subsets, valid for s <= n+2), the planar closed form with its
self-checking reduction, the regularity index, and the homogeneous
double-point speciality formulas.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .binomials import binom, f
from .systems import (
    LinearSystemSpec,
    NormalizedSystem,
    epsilon_value,
    kc_value,
    normalize,
    vdim,
)


def compute_kc(sys: LinearSystemSpec | NormalizedSystem) -> int:
    """Ceiling of (sum m_i - n*d) / (s - n - 2); requires s >= n+3."""
    return kc_value(sys.n, sys.d, sys.mults)


def compute_epsilon(sys: LinearSystemSpec | NormalizedSystem) -> int:
    """The residue kc*(s-n-2) - (sum m_i - n*d), always in 0..s-n-3."""
    return epsilon_value(sys.n, sys.d, sys.mults)


# ---------------------------------------------------------------------------
# Join classes: subsets grouped by (size, multiplicity sum).


@dataclass(frozen=True)
class JoinClass:
    """One (c, sigma, t) orbit of terms in the dimension sum.

    count is the number of c-subsets of the points whose multiplicities sum
    to sigma; every such subset contributes the same term.  vanishes marks
    classes whose f-argument a = n + k - r - 1 satisfies a < n - t, which
    forces f = 0 (pruning invariant).
    """

    c: int
    sigma: int
    t: int
    k: int
    r: int
    count: int
    vanishes: bool

    def as_dict(self) -> dict:
        return {
            "c": self.c,
            "sigma": self.sigma,
            "t": self.t,
            "k": self.k,
            "r": self.r,
            "count": self.count,
        }


def subset_counts(mults: Sequence[int], cmax: int) -> list[dict[int, int]]:
    """counts[c][sigma] = number of c-subsets of mults with sum sigma.

    Knapsack product over (1 + x*y^m), truncated at x^cmax; exact integer
    counts.  counts[0] = {0: 1} always.
    """
    counts: list[dict[int, int]] = [dict() for _ in range(cmax + 1)]
    counts[0][0] = 1
    for m in mults:
        for c in range(min(cmax, len(counts) - 1), 0, -1):
            lower = counts[c - 1]
            if not lower:
                continue
            target = counts[c]
            for sigma, cnt in lower.items():
                target[sigma + m] = target.get(sigma + m, 0) + cnt
    return counts


def enumerate_join_classes(
    sys: LinearSystemSpec | NormalizedSystem,
) -> list[JoinClass]:
    """All (c, sigma, t) classes of the dimension sum for a system with
    s >= n+3, ordered by (t, c, sigma).

    k = sigma + t*kc - (t + c - 1)*d and r = c + 2t - 1; the empty class
    (c=0, sigma=0, t=0) is always present with k = d, r = -1.
    """
    n, d, mults = sys.n, sys.d, sys.mults
    kc = kc_value(n, d, mults)
    counts = subset_counts(mults, n)
    classes: list[JoinClass] = []
    for t in range(n // 2 + 1):
        for c in range(n - 2 * t + 1):
            for sigma in sorted(counts[c]):
                k = sigma + t * kc - (t + c - 1) * d
                r = c + 2 * t - 1
                a = n + k - r - 1
                classes.append(
                    JoinClass(c, sigma, t, k, r, counts[c][sigma], a < n - t)
                )
    return classes


# ---------------------------------------------------------------------------
# The dimension formula.


@dataclass(frozen=True)
class ContributionRecord:
    join: JoinClass
    fvalue: int
    signed_total: int


@dataclass(frozen=True)
class DimensionReport:
    input: LinearSystemSpec
    normalized: NormalizedSystem
    kc: int
    epsilon: int
    dimension: int
    vdim: int
    speciality: int
    nonpositive_flag: bool
    contributions: tuple[ContributionRecord, ...]
    special_effect_varieties: tuple[JoinClass, ...]


def dimension(
    sys: LinearSystemSpec | NormalizedSystem, prune: bool = True
) -> DimensionReport:
    """Dimension (affine h0) of a system with s >= n+3 after normalization.

    Evaluates the closed sum over join classes exactly.  Classes marked as
    vanishing are skipped when prune is set; passing prune=False evaluates
    them anyway (tests assert both paths agree).  Inputs whose normalization
    leaves fewer than n+3 points are outside this evaluator's domain and
    raise ValueError; route those to ldim.

    vdim and speciality refer to the normalized system (dropping a redundant
    point changes the virtual dimension but not the dimension).  When the
    formula value is <= 0 the report carries nonpositive_flag and speciality
    is max(dimension - vdim, 0).
    """
    if isinstance(sys, NormalizedSystem):
        original = LinearSystemSpec(sys.n, sys.d, sys.mults)
        norm = sys
    else:
        original = sys
        norm = normalize(sys)
    n, d, mults = norm.n, norm.d, norm.mults
    if norm.s < n + 3:
        raise ValueError(
            f"dimension formula needs s >= n+3 after normalization "
            f"(got s={norm.s}, n={n}); use ldim for small point counts"
        )
    kc = kc_value(n, d, mults)
    eps = epsilon_value(n, d, mults)
    classes = enumerate_join_classes(norm)
    total = 0
    records: list[ContributionRecord] = []
    for jc in classes:
        if prune and jc.vanishes:
            continue
        a = n + jc.k - jc.r - 1
        val = f(jc.t, a, norm.s, eps, n)
        if val == 0:
            continue
        signed = (-1) ** jc.c * jc.count * val
        total += signed
        records.append(ContributionRecord(jc, val, signed))
    v = vdim(norm)
    if total > 0:
        spec_h1 = total - max(v, 0)
        flag = False
    else:
        spec_h1 = max(total - v, 0)
        flag = True
    effects = tuple(jc for jc in classes if jc.k >= 1 and jc.r >= 1)
    return DimensionReport(
        input=original,
        normalized=norm,
        kc=kc,
        epsilon=eps,
        dimension=total,
        vdim=v,
        speciality=spec_h1,
        nonpositive_flag=flag,
        contributions=tuple(records),
        special_effect_varieties=effects,
    )


# ---------------------------------------------------------------------------
# Small point counts: inclusion-exclusion over all subsets.


def ldim_sum(n: int, d: int, mults: Sequence[int]) -> int:
    """Signed subset sum  sum_I (-1)^|I| binom(n + k_I - |I|, n)  with
    k_I = sum_{i in I} m_i - (|I| - 1)d and k_empty = d.

    Grouped by (|I|, sigma) through the same DP as the main formula, so s
    need not be tiny.  No clamping; callers decide what negatives mean.
    """
    ms = [m for m in mults if m > 0]
    counts = subset_counts(ms, len(ms))
    total = 0
    for c in range(len(ms) + 1):
        for sigma, cnt in counts[c].items():
            k = sigma - (c - 1) * d
            total += (-1) ** c * cnt * binom(n + k - c, n)
    return total


def ldim(sys: LinearSystemSpec | NormalizedSystem) -> int:
    """Dimension for s <= n+2 points (after dropping m <= 0): the subset
    formula clipped at zero."""
    ms = [m for m in sys.mults if m > 0]
    if len(ms) > sys.n + 2:
        raise ValueError(
            f"ldim needs at most n+2 = {sys.n + 2} points, got {len(ms)}"
        )
    return max(ldim_sum(sys.n, sys.d, ms), 0)


# ---------------------------------------------------------------------------
# The planar closed form and its self-checking reduction.


def planar_g(d: int, mults: Sequence[int], s: int) -> int:
    """The planar counting function G for n = 2 and s >= 5 points.

    G = binom(d+2,2) - sum binom(m_i+1,2) + sum_{i<j} binom(k_ij,2)
        + binom(kc,2) + (s-5)*binom(kc+1,2) - eps*binom(kc,1)

    with k_ij = m_i + m_j - d.  Truncated binomials kill every negative-k
    term.  s is passed separately: reduction steps keep all point slots,
    zeros included.
    """
    if len(mults) != s:
        raise ValueError("mults must list every point slot, zeros included")
    kc = kc_value(2, d, mults)
    eps = epsilon_value(2, d, mults)
    g = binom(d + 2, 2) - sum(binom(m + 1, 2) for m in mults)
    for mi, mj in combinations(mults, 2):
        g += binom(mi + mj - d, 2)
    g += binom(kc, 2) + (s - 5) * binom(kc + 1, 2) - eps * binom(kc, 1)
    return g


def planar_reduction_steps(
    d: int, mults: Sequence[int]
) -> list[tuple[int, tuple[int, ...]]]:
    """The divisor after each base-component peel, input included.

    Repeatedly subtracts k_ij+ times the line class through the first pair
    with k_ij > 0 (each subtraction lowers d by at least 1, bounding the
    loop), then kc+ times the conic class.  Stops as soon as the degree goes
    negative.  The end divisor of a nonempty system has all k_ij <= 0 and
    kc <= 0 and is nef.
    """
    d = int(d)
    mults = list(mults)
    s = len(mults)
    steps = [(d, tuple(mults))]
    while d >= 0:
        hit = False
        for i, j in combinations(range(s), 2):
            kij = mults[i] + mults[j] - d
            if kij > 0:
                d -= kij
                mults[i] -= kij
                mults[j] -= kij
                hit = True
                break
        if not hit:
            break
        steps.append((d, tuple(mults)))
    if d >= 0:
        kc = kc_value(2, d, mults)
        if kc > 0:
            d -= 2 * kc
            mults = [m - kc for m in mults]
            steps.append((d, tuple(mults)))
    return steps


def planar_nef(d: int, mults: Sequence[int]) -> bool:
    """Nef inequalities for n = 2: nonnegative multiplicities, no pair
    exceeding the degree, total at most twice the degree."""
    return (
        d >= 0
        and all(m >= 0 for m in mults)
        and all(mi + mj <= d for mi, mj in combinations(mults, 2))
        and 2 * d >= sum(mults)
    )


def planar_h0(sys: LinearSystemSpec | NormalizedSystem) -> int:
    """Planar dimension by the closed form G, certified by reduction.

    Evaluates G directly, then re-derives it by peeling base components
    (planar_reduction_steps), checking after every step that G is
    unchanged.  For a nonempty system every peel removes a fixed component,
    preserves G, keeps multiplicities nonnegative, and the end divisor is
    nef with h0 = G, so the answer is max(G, 0).  Each of those properties
    is inherited step by step, so observing any violation (G changed,
    degree went negative, end divisor not nef) certifies the input system
    was empty and the answer is 0.

    Expects n = 2, s >= 5, normalized input (m_i >= 1, non-redundant).
    """
    if sys.n != 2:
        raise ValueError("planar_h0 handles n = 2 only")
    s = len(sys.mults)
    if s < 5:
        raise ValueError("planar_h0 needs s >= 5; use ldim below that")
    steps = planar_reduction_steps(sys.d, sys.mults)
    g0 = planar_g(*steps[0], s)
    for d, mults in steps[1:]:
        if d < 0:
            return 0
        if planar_g(d, mults, s) != g0:
            return 0
    d, mults = steps[-1]
    if not planar_nef(d, mults):
        return 0
    return max(g0, 0)


# ---------------------------------------------------------------------------
# Regularity index and homogeneous double points.


def regularity_index(n: int, mults: Sequence[int]) -> int:
    """Least degree from which the system is non-special:
    max(m_1 + m_2 - 1, floor((sum m_i + n - 2) / n)) for the two largest
    multiplicities m_1 >= m_2.  Needs at least two points."""
    ms = sorted((m for m in mults if m > 0), reverse=True)
    if len(ms) < 2:
        raise ValueError("regularity index needs at least two points")
    return max(ms[0] + ms[1] - 1, (sum(ms) + n - 2) // n)


def double_points_h1(n: int, d: int, s: int) -> int:
    """Speciality of the system of degree-d hypersurfaces with s general
    double points on the curve (s >= n+3):

        0                        if n*d >= 2s - 1
        2s - n*d - 1             if s + n + 2 <= n*d < 2s - 1
        s(n+1) - n^2(d-1) - 2    if n*d < s + n + 2

    Exact integer regime tests throughout.
    """
    if s < n + 3:
        raise ValueError("double-point formulas assume s >= n+3")
    nd = n * d
    if nd >= 2 * s - 1:
        return 0
    if nd >= s + n + 2:
        return 2 * s - nd - 1
    return s * (n + 1) - n * n * (d - 1) - 2


def double_points_h1_f1(n: int, d: int, s: int) -> int | None:
    """The same speciality written through f, for cross-assertion:
    f(1, n-1, s, n*d-n-s-2, n) in the middle regime and
    f(1, n, s, n*(d-2)-4, n) in the low regime.  None when the regime's
    excess parameter is negative (only non-effective corners)."""
    if s < n + 3:
        raise ValueError("double-point formulas assume s >= n+3")
    nd = n * d
    if nd >= 2 * s - 1:
        return 0
    if nd >= s + n + 2:
        eps = nd - n - s - 2
        return f(1, n - 1, s, eps, n) if eps >= 0 else None
    eps = n * (d - 2) - 4
    return f(1, n, s, eps, n) if eps >= 0 else None
