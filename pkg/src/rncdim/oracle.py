"""Interpolation-matrix oracle: h0 by exact (or modular) linear algebra.

The oracle evaluates the dimension of a system L(n, d; m_1..m_s) with no
recourse to any closed formula: put s points with pairwise distinct
parameters t_i on the standard rational normal curve (t, t^2, ..., t^n) in
the affine chart x_0 = 1, write down the vanishing conditions as an integer
matrix, and count h0 = (#monomials of degree <= d) - rank.

Condition rows use Taylor coefficients rather than raw partial derivatives:
the row for (point i, order alpha) has entry

    prod_j binom(gamma_j, alpha_j) * t_i^(sum_j j*(gamma_j - alpha_j))

at the monomial column gamma.  This scales the derivative by 1/alpha! and
keeps every entry an integer.  Vanishing of all Taylor coefficients of order
< m_i is equivalent to multiplicity >= m_i (characteristic zero).

Two rank modes:
  * exact: fraction-free (Bareiss) elimination over Python integers; the
    certification path.
  * modular: elimination over GF(p) for several random ~31-bit primes with
    fresh point draws, taking the max rank observed.  rank mod p never
    exceeds the rational rank, so the reported h0 is an upper bound that is
    wrong only if every sampled prime divides the same nonzero minor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .binomials import binom
from .systems import LinearSystemSpec, NormalizedSystem, vdim


def monomial_exponents(n: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the monomials of degree <= d in n variables,
    graded (total degree ascending), lexicographic within a degree."""
    out: list[tuple[int, ...]] = []
    for deg in range(d + 1):
        block = []
        for comb in combinations_with_replacement(range(n), deg):
            e = [0] * n
            for v in comb:
                e[v] += 1
            block.append(tuple(e))
        block.sort(reverse=True)
        out.extend(block)
    return out


def sample_params(s: int, mode: str = "canonical", seed: int = 0) -> tuple[int, ...]:
    """Pairwise distinct integer parameters for s points on the curve.

    canonical: 1..s (the default, keeps exact-mode entries small).
    random: seeded distinct draws from a fixed window.
    """
    if mode == "canonical":
        return tuple(range(1, s + 1))
    if mode == "random":
        rng = random.Random(seed)
        return tuple(rng.sample(range(1, max(4 * s, 64)), s))
    raise ValueError(f"unknown parameter mode {mode!r}")


@dataclass(frozen=True)
class CurvePoints:
    """s points on the standard rational normal curve (t, t^2, ..., t^n)."""

    n: int
    params: tuple[int, ...]
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(set(self.params)) != len(self.params):
            raise ValueError("curve parameters must be pairwise distinct")
        expect = tuple(tuple(t**j for j in range(1, self.n + 1)) for t in self.params)
        if self.points != expect:
            raise ValueError("points inconsistent with params")

    @property
    def s(self) -> int:
        return len(self.params)


def sample_points(n: int, s: int, seed: int = 0, mode: str = "canonical") -> CurvePoints:
    """Deterministic draw of s distinct points on the curve in P^n."""
    params = sample_params(s, mode, seed)
    pts = tuple(tuple(t**j for j in range(1, n + 1)) for t in params)
    return CurvePoints(n, params, pts)


def _condition_orders(m: int, n: int) -> list[tuple[int, ...]]:
    """All derivative orders alpha with |alpha| < m."""
    return monomial_exponents(n, m - 1) if m >= 1 else []


def conditions_matrix(
    sys: LinearSystemSpec | NormalizedSystem,
    params: Sequence[int],
) -> list[list[int]]:
    """Exact integer conditions matrix; rows (point, order), columns monomials."""
    n, d = sys.n, sys.d
    if d < 0:
        raise ValueError("conditions matrix undefined for negative degree")
    if len(params) != len(sys.mults):
        raise ValueError("need one curve parameter per point")
    if len(set(params)) != len(params):
        raise ValueError("curve parameters must be pairwise distinct")
    cols = monomial_exponents(n, d)
    rows: list[list[int]] = []
    maxexp = n * d
    for t, m in zip(params, sys.mults):
        if m <= 0:
            continue
        powers = [1] * (maxexp + 1)
        for e in range(1, maxexp + 1):
            powers[e] = powers[e - 1] * t
        for alpha in _condition_orders(m, n):
            row = []
            for gamma in cols:
                c = 1
                for gj, aj in zip(gamma, alpha):
                    if gj < aj:
                        c = 0
                        break
                    c *= binom(gj, aj)
                if c:
                    exp = sum((j + 1) * (gj - aj) for j, (gj, aj) in enumerate(zip(gamma, alpha)))
                    c *= powers[exp]
                row.append(c)
            rows.append(row)
    return rows


def rank_exact(matrix: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination.

    One-step Bareiss: every 2x2 update is divided by the previous pivot, a
    division that is exact by Sylvester's determinant identity, so entries
    stay integers (they are minors of the input).  The update must be applied
    to every row of the active block, zero factor or not, or the exactness
    invariant breaks.  Row pivoting picks the smallest nonzero entry in the
    column to slow coefficient growth.  Columns left of the current one are
    zero throughout the active block, so updates work on row tails only.
    """
    m = [list(row) for row in matrix if any(row)]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv_i = -1
        piv_abs = 0
        for i in range(rank, nrows):
            v = m[i][col]
            if v and (piv_i < 0 or abs(v) < piv_abs):
                piv_i, piv_abs = i, abs(v)
        if piv_i < 0:
            continue
        m[rank], m[piv_i] = m[piv_i], m[rank]
        piv_tail = m[rank][col:]
        piv = piv_tail[0]
        for i in range(rank + 1, nrows):
            row = m[i]
            vi = row[col]
            if vi:
                row[col:] = [
                    (piv * a - vi * b) // prev for a, b in zip(row[col:], piv_tail)
                ]
            elif piv != prev:
                row[col:] = [piv * a // prev for a in row[col:]]
        prev = piv
        rank += 1
    return rank


def _is_probable_prime(x: int) -> bool:
    """Deterministic Miller-Rabin for x < 3.3e24 (fixed witness set)."""
    if x < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x % p == 0:
            return x == p
    d = x - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        y = pow(a, d, x)
        if y in (1, x - 1):
            continue
        for _ in range(r - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


def _random_prime(rng: random.Random) -> int:
    """A random prime in [2^30, 2^31): (p-1)^2 < 2^63 keeps int64 products exact."""
    while True:
        c = rng.randrange(1 << 30, 1 << 31) | 1
        while not _is_probable_prime(c):
            c += 2
        if c < (1 << 31):
            return c


@lru_cache(maxsize=32)
def _structural_block(n: int, d: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients and parameter exponents of one point's condition rows.

    The entry at (order alpha, monomial gamma) is coeff * t^exp with
    coeff = prod_j binom(gamma_j, alpha_j) and exp = sum_j j*(gamma_j -
    alpha_j); both depend only on (n, d, m), not on the point, so the pair
    of arrays is cached and reused across points, primes and oracle calls.
    coeff <= 2^d, so int64 is exact up to d = 62; beyond that the
    coefficients are kept as Python integers (object dtype) and reduced by
    the caller.  Callers must not mutate the returned arrays.
    """
    cols = monomial_exponents(n, d)
    alphas = _condition_orders(m, n)
    dtype = np.int64 if d <= 62 else object
    B = np.zeros((len(alphas), len(cols)), dtype=dtype)
    E = np.zeros((len(alphas), len(cols)), dtype=np.int64)
    for ri, alpha in enumerate(alphas):
        for ci, gamma in enumerate(cols):
            c = 1
            for gj, aj in zip(gamma, alpha):
                if gj < aj:
                    c = 0
                    break
                c *= binom(gj, aj)
            if c:
                B[ri, ci] = c
                E[ri, ci] = sum(
                    (j + 1) * (gj - aj) for j, (gj, aj) in enumerate(zip(gamma, alpha))
                )
    return B, E


def _modular_matrix(
    n: int, d: int, mults: Sequence[int], params: Sequence[int], p: int
) -> np.ndarray:
    """Conditions matrix reduced mod p, assembled from cached blocks."""
    ncols = binom(n + d, n)
    blocks = []
    for t, m in zip(params, mults):
        if m <= 0:
            continue
        B, E = _structural_block(n, d, m)
        maxexp = int(E.max(initial=0))
        tp = np.empty(maxexp + 1, dtype=np.int64)
        acc = 1
        tmod = t % p
        for e in range(maxexp + 1):
            tp[e] = acc
            acc = acc * tmod % p
        Bp = (B % p).astype(np.int64) if B.dtype == object else B % p
        blocks.append(Bp * tp[E] % p)
    if not blocks:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.vstack(blocks)


def rank_modular(M: np.ndarray, p: int) -> int:
    """Rank over GF(p) by vectorized elimination; requires p < 2^31."""
    M = M % p
    nrows, ncols = M.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        pivots = np.nonzero(M[rank:, col])[0]
        if pivots.size == 0:
            continue
        i = rank + int(pivots[0])
        if i != rank:
            M[[rank, i]] = M[[i, rank]]
        inv = pow(int(M[rank, col]), p - 2, p)
        M[rank, col:] = M[rank, col:] * inv % p
        below = M[rank + 1 :, col]
        nz = np.nonzero(below)[0]
        if nz.size:
            idx = nz + rank + 1
            M[idx, col:] = (M[idx, col:] - np.outer(M[idx, col], M[rank, col:])) % p
        rank += 1
    return rank


class OracleSizeError(ValueError):
    """Raised when an exact-mode matrix exceeds the configured cell cap."""


@dataclass(frozen=True)
class OracleResult:
    """Rank computation outcome.  params holds one curve-parameter draw per
    evaluation performed (exact mode: exactly one; modular mode: one per
    trial), primes the modular primes used (empty in exact mode)."""

    h0: int
    rank: int
    rows: int
    cols: int
    mode: str
    certified: bool
    params: tuple[tuple[int, ...], ...]
    primes: tuple[int, ...] = ()

    def __int__(self) -> int:
        return self.h0


def h0(
    sys: LinearSystemSpec | NormalizedSystem,
    pts: CurvePoints | Sequence[int] | None = None,
    mode: str = "exact",
    seed: int = 0,
    trials: int = 3,
    cap_cells: int | None = None,
) -> OracleResult:
    """Oracle dimension of the system, as an affine count.

    pts: a CurvePoints draw or a bare parameter sequence, one per point of
    sys (None picks canonical 1..s in exact mode, fresh random draws per
    trial in modular mode).  mode="exact": Bareiss rank over the integers;
    the certified path.  mode="modular": max rank over `trials` random
    ~31-bit primes; probabilistic (certified=False).  Degrees d < 0 give
    h0 = 0; multiplicities <= 0 impose no conditions.
    """
    n, d = sys.n, sys.d
    mults = tuple(sys.mults)
    params: tuple[int, ...] | None
    if pts is None:
        params = None
    elif isinstance(pts, CurvePoints):
        params = pts.params
    else:
        params = tuple(pts)
    if params is not None and len(params) != len(mults):
        raise ValueError("need one curve parameter per point of the system")
    if d < 0:
        return OracleResult(0, 0, 0, 0, mode, True, ())
    ncols = binom(n + d, n)
    nrows = sum(binom(n + m - 1, n) for m in mults if m > 0)
    if mode == "exact":
        if cap_cells is not None and nrows * ncols > cap_cells:
            raise OracleSizeError(
                f"exact oracle matrix {nrows}x{ncols} exceeds cap {cap_cells}"
            )
        ps = params if params is not None else sample_params(len(mults))
        M = conditions_matrix(LinearSystemSpec(n, d, mults), ps)
        rank = rank_exact(M)
        return OracleResult(ncols - rank, rank, nrows, ncols, "exact", True, (ps,))
    if mode == "modular":
        rng = random.Random(seed)
        best = 0
        draws = []
        primes = []
        for _ in range(max(trials, 1)):
            p = _random_prime(rng)
            ps = (
                params
                if params is not None
                else sample_params(len(mults), "random", rng.randrange(1 << 30))
            )
            M = _modular_matrix(n, d, mults, ps, p)
            best = max(best, rank_modular(M, p))
            draws.append(ps)
            primes.append(p)
        return OracleResult(
            ncols - best, best, nrows, ncols, "modular", False, tuple(draws), tuple(primes)
        )
    raise ValueError(f"unknown oracle mode {mode!r}")


# ---------------------------------------------------------------------------
# Cross-evaluator consistency sweep.


@dataclass(frozen=True)
class SweepGrid:
    """Inclusive bounds for a sweep: n, d, s ranges and the multiplicity
    window every point draws from; cap_cells bounds the exact oracle."""

    n: tuple[int, int]
    d: tuple[int, int]
    s: tuple[int, int]
    m: tuple[int, int]
    cap_cells: int = 2_000_000


def consistency_sweep(
    grid: SweepGrid,
    seed: int = 0,
    oracle_mode: str = "exact",
    trials: int = 3,
) -> list[dict]:
    """Evaluate every evaluator on every grid instance and compare.

    One record per instance (multiplicities as a non-increasing multiset),
    fields in fixed order: n, d, mults, s, kc, epsilon, oracle, formula,
    recursive, planar, ldim, verdict.  Evaluators outside their domain
    report None.  The verdict compares evaluators against the oracle only
    on instances the oracle calls nonempty (h0 > 0), which is where the
    closed forms claim the dimension: recursive always there, planar for
    n = 2 with >= 5 points after normalization, ldim for s <= n+2, and the
    closed formula additionally only when the instance is already in
    normal form.  Per-instance failures are recorded as verdicts, never
    raised.
    """
    from .castelnuovo import RecState, recursive_h0
    from .formula import dimension, ldim, planar_h0
    from .systems import epsilon_value, kc_value, normalize

    rec_state = RecState()
    oracle_cache: dict[tuple[int, int, tuple[int, ...]], OracleResult] = {}
    records: list[dict] = []
    for n in range(grid.n[0], grid.n[1] + 1):
        for d in range(grid.d[0], grid.d[1] + 1):
            for s in range(grid.s[0], grid.s[1] + 1):
                for combo in combinations_with_replacement(
                    range(grid.m[0], grid.m[1] + 1), s
                ):
                    ms = tuple(sorted(combo, reverse=True))
                    records.append(
                        _sweep_one(
                            n, d, ms, grid, seed, oracle_mode, trials,
                            oracle_cache, rec_state,
                        )
                    )
    return records


def _sweep_one(
    n: int,
    d: int,
    ms: tuple[int, ...],
    grid: SweepGrid,
    seed: int,
    oracle_mode: str,
    trials: int,
    oracle_cache: dict,
    rec_state,
) -> dict:
    from .castelnuovo import recursive_h0
    from .formula import dimension, ldim, planar_h0
    from .systems import epsilon_value, kc_value, normalize

    s = len(ms)
    rec = {
        "n": n, "d": d, "mults": list(ms), "s": s,
        "kc": None, "epsilon": None, "oracle": None, "formula": None,
        "recursive": None, "planar": None, "ldim": None, "verdict": "",
    }
    try:
        if s >= n + 3:
            rec["kc"] = kc_value(n, d, ms)
            rec["epsilon"] = epsilon_value(n, d, ms)
        spec = LinearSystemSpec(n, d, ms)
        norm = normalize(spec)

        key = (n, d, ms)
        if key not in oracle_cache:
            try:
                oracle_cache[key] = h0(
                    spec, mode=oracle_mode, seed=seed, trials=trials,
                    cap_cells=grid.cap_cells,
                )
            except OracleSizeError:
                oracle_cache[key] = None
        ores = oracle_cache[key]
        if ores is None:
            rec["verdict"] = "skip-size"
            return rec
        rec["oracle"] = ores.h0

        if norm.s >= norm.n + 3:
            rec["formula"] = dimension(norm).dimension
        rec["recursive"] = recursive_h0(norm, state=rec_state)
        if n == 2 and norm.s >= 5:
            rec["planar"] = planar_h0(norm)
        if s <= n + 2:
            rec["ldim"] = ldim(spec)

        checks = []
        if ores.h0 > 0:  # closed evaluators are claimed for nonempty systems
            checks.append(("recursive", rec["recursive"]))
            if rec["planar"] is not None:
                checks.append(("planar", rec["planar"]))
            if rec["ldim"] is not None:
                checks.append(("ldim", rec["ldim"]))
            if rec["formula"] is not None and norm.mults == ms:
                checks.append(("formula", rec["formula"]))
        bad = [name for name, val in checks if val != ores.h0]
        rec["verdict"] = "agree" if not bad else "disagree:" + ",".join(bad)
    except Exception as exc:  # a sweep must survive any single instance
        rec["verdict"] = f"error:{type(exc).__name__}:{exc}"
    return rec
