"""Linear-system data model: specs, normalization, virtual dimension.

A system L(n, d; m_1, ..., m_s) is the space of degree-d hypersurfaces of
projective n-space with multiplicity at least m_i at the i-th of s general
points lying on a rational normal curve of degree n.  Dimensions are affine
counts (vector-space dimension of the space of defining forms).

Normalization turns an arbitrary integer input into the canonical form every
evaluator expects: multiplicities clamped at 0, zero multiplicities dropped,
the multiset sorted non-increasingly, and redundant points removed.  A point
is redundant when 0 < m_i < k_C, where k_C is the forced multiplicity of the
curve in the base locus; removing it does not change the dimension.  k_C is
recomputed after every single removal because removals can raise it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .binomials import binom


@dataclass(frozen=True)
class LinearSystemSpec:
    """Raw user input: ambient dimension, degree, multiplicities as given."""

    n: int
    d: int
    mults: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"ambient dimension must be >= 1, got {self.n}")
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))

    @property
    def s(self) -> int:
        return len(self.mults)


def system(n: int, d: int, mults: Iterable[int] = ()) -> LinearSystemSpec:
    return LinearSystemSpec(int(n), int(d), tuple(mults))


@dataclass(frozen=True)
class TraceStep:
    """One normalization event, with the 1-based index into the original input."""

    action: str  # "clamp" | "drop-zero" | "drop-redundant"
    point: int
    mult: int
    kc: int | None = None

    def as_dict(self) -> dict:
        out: dict = {"action": self.action, "point": self.point, "mult": self.mult}
        if self.kc is not None:
            out["kc"] = self.kc
        return out


@dataclass(frozen=True)
class NormalizedSystem:
    """Canonical form: mults sorted non-increasingly, all >= 1, non-redundant."""

    n: int
    d: int
    mults: tuple[int, ...]
    trace: tuple[TraceStep, ...] = field(default=(), compare=False)

    @property
    def s(self) -> int:
        return len(self.mults)

    def key(self) -> tuple[int, int, tuple[int, ...]]:
        return (self.n, self.d, self.mults)


def kc_value(n: int, d: int, mults: Sequence[int]) -> int:
    """Forced multiplicity of the degree-n curve in the base locus.

    Exact ceiling of (sum(m) - n*d) / (s - n - 2); requires s >= n + 3.
    Negative values are meaningful (the curve is not forced at all).
    """
    s = len(mults)
    q = s - n - 2
    if q < 1:
        raise ValueError(f"k_C needs s >= n + 3 points (s={s}, n={n})")
    return -((n * d - sum(mults)) // q)


def epsilon_value(n: int, d: int, mults: Sequence[int]) -> int:
    """Excess of the ceiling in kc_value; the unique value in 0..s-n-3 with
    k_C = (sum(m) - n*d + eps) / (s - n - 2)."""
    s = len(mults)
    eps = kc_value(n, d, mults) * (s - n - 2) - (sum(mults) - n * d)
    assert 0 <= eps <= s - n - 3, f"excess {eps} out of range for s={s}, n={n}"
    return eps


def normalize(spec: LinearSystemSpec) -> NormalizedSystem:
    """Canonicalize a raw system; dimension is preserved at every step.

    Steps, applied in order and recorded in the trace:
      1. clamp negative multiplicities to 0 (they impose no conditions);
      2. drop zero multiplicities;
      3. while s >= n + 3 and some 0 < m_i < k_C: drop one point of minimal
         multiplicity and recompute k_C.
    Idempotent: normalizing the result is the identity.
    """
    n, d = spec.n, spec.d
    trace: list[TraceStep] = []
    pts: list[tuple[int, int]] = []  # (mult, original 1-based index)
    for idx, m in enumerate(spec.mults, start=1):
        if m < 0:
            trace.append(TraceStep("clamp", idx, m))
            m = 0
        if m == 0:
            trace.append(TraceStep("drop-zero", idx, 0))
        else:
            pts.append((m, idx))
    # Sort by multiplicity descending; ties keep input order.
    pts.sort(key=lambda p: (-p[0], p[1]))
    while len(pts) >= n + 3:
        kc = kc_value(n, d, [m for m, _ in pts])
        if kc < 1 or pts[-1][0] >= kc:
            break
        m, idx = pts.pop()  # minimal multiplicity, largest original index
        trace.append(TraceStep("drop-redundant", idx, m, kc=kc))
    return NormalizedSystem(n, d, tuple(m for m, _ in pts), tuple(trace))


def vdim(sys: LinearSystemSpec | NormalizedSystem) -> int:
    """Virtual dimension: monomial count minus the conditions all points impose.

    binom(n+d, n) - sum_i binom(n + m_i - 1, n); an affine count, may be
    negative.  Negative multiplicities count as 0 conditions.
    """
    n = sys.n
    total = binom(n + sys.d, n)
    for m in sys.mults:
        if m > 0:
            total -= binom(n + m - 1, n)
    return total


def expected_dim(sys: LinearSystemSpec | NormalizedSystem) -> int:
    return max(vdim(sys), 0)
