"""Interpolation oracle: matrix construction, exact and modular rank."""

import random
from fractions import Fraction

import numpy as np
import pytest

from rncdim.binomials import binom
from rncdim.oracle import (
    CurvePoints,
    OracleSizeError,
    SweepGrid,
    conditions_matrix,
    consistency_sweep,
    h0,
    monomial_exponents,
    rank_exact,
    rank_modular,
    sample_points,
)
from rncdim.systems import system, vdim

RECORD_KEYS = [
    "n", "d", "mults", "s", "kc", "epsilon",
    "oracle", "formula", "recursive", "planar", "ldim", "verdict",
]


def test_h0_exact_values():
    assert h0(system(2, 1, [1, 1])).h0 == 1
    assert h0(system(2, 2, [1] * 5)).h0 == 1
    assert h0(system(3, 2, [2, 2])).h0 == 3
    assert h0(system(2, 4, [2] * 5)).h0 == 1
    assert h0(system(3, 6, [2] * 10)).h0 == 45
    assert h0(system(2, -1, [1])).h0 == 0


def test_h0_result_shape():
    res = h0(system(2, 1, [1, 1]))
    assert res.mode == "exact"
    assert res.certified
    assert res.params == ((1, 2),)
    assert res.primes == ()
    assert (res.rows, res.cols) == (2, 3)
    assert res.rank == 2
    assert int(res) == 1


def test_monomial_exponents_enumeration():
    for n in range(1, 5):
        for d in range(0, 6):
            exps = monomial_exponents(n, d)
            assert len(exps) == binom(n + d, n)
            assert len(set(exps)) == len(exps)
            degrees = [sum(e) for e in exps]
            assert degrees == sorted(degrees)
            assert all(deg <= d for deg in degrees)


def test_conditions_matrix_shape():
    sys = system(2, 4, [2, 2, 1])
    M = conditions_matrix(sys, (1, 2, 3))
    assert len(M) == 2 * binom(3, 2) + 1 == 7
    assert all(len(row) == binom(6, 2) for row in M)
    # Zero multiplicities contribute no rows but still need a parameter slot.
    M2 = conditions_matrix(system(2, 4, [2, 0, 2, 1]), (1, 5, 2, 3))
    assert len(M2) == 7


def test_conditions_matrix_guards():
    with pytest.raises(ValueError):
        conditions_matrix(system(2, -1, [1]), (1,))
    with pytest.raises(ValueError):
        conditions_matrix(system(2, 3, [1, 1]), (2, 2))
    with pytest.raises(ValueError):
        conditions_matrix(system(2, 3, [1, 1]), (1, 2, 3))


def fraction_rank(matrix):
    m = [[Fraction(x) for x in row] for row in matrix]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pivot_row = m[rank]
        for i in range(rank + 1, nrows):
            if m[i][col]:
                fac = m[i][col] / pivot_row[col]
                m[i] = [a - fac * b for a, b in zip(m[i], pivot_row)]
        rank += 1
        if rank == nrows:
            break
    return rank


def test_rank_exact_matches_fraction_elimination():
    rng = random.Random(29)
    for _ in range(120):
        nrows = rng.randint(1, 8)
        ncols = rng.randint(1, 10)
        M = [[rng.randint(-5, 5) for _ in range(ncols)] for _ in range(nrows)]
        if rng.random() < 0.3 and nrows >= 2:
            M[-1] = M[0][:]  # force a dependent row
        if rng.random() < 0.2:
            M[0] = [0] * ncols
        assert rank_exact(M) == fraction_rank(M), M


def test_rank_modular_matches_exact_on_small_matrices():
    rng = random.Random(37)
    p = (1 << 31) - 1
    for _ in range(60):
        nrows = rng.randint(1, 7)
        ncols = rng.randint(1, 8)
        M = [[rng.randint(-9, 9) for _ in range(ncols)] for _ in range(nrows)]
        got = rank_modular(np.array(M, dtype=np.int64), p)
        assert got == fraction_rank(M)


def test_h0_bounds_and_monotonicity():
    rng = random.Random(43)
    for _ in range(25):
        n = rng.randint(2, 3)
        s = rng.randint(1, n + 5)
        d = rng.randint(0, 5)
        mults = [rng.randint(1, 3) for _ in range(s)]
        sys = system(n, d, mults)
        res = h0(sys)
        assert max(vdim(sys), 0) <= res.h0 <= res.cols
        # Raising the degree can only add sections.
        assert h0(system(n, d + 1, mults)).h0 >= res.h0
        # Adding a point can only remove them.
        assert h0(system(n, d, mults + [1])).h0 <= res.h0


def test_h0_point_choice_independence():
    sys = system(2, 4, [2] * 5)
    vals = {
        h0(sys, pts=sample_points(2, 5, seed=seed, mode="random")).h0
        for seed in (1, 2, 3)
    }
    assert vals == {1}
    rng = random.Random(47)
    for _ in range(15):
        n = rng.randint(2, 3)
        s = rng.randint(n + 3, n + 5)
        d = rng.randint(0, 5)
        mults = sorted((rng.randint(1, 3) for _ in range(s)), reverse=True)
        sys = system(n, d, mults)
        canonical = h0(sys).h0
        drawn = h0(sys, pts=sample_points(n, s, seed=rng.randrange(999), mode="random"))
        assert drawn.h0 == canonical, (n, d, mults)


def test_h0_mult_permutation_invariance():
    rng = random.Random(53)
    for _ in range(15):
        n = rng.randint(2, 3)
        s = rng.randint(n + 3, n + 5)
        d = rng.randint(0, 5)
        mults = [rng.randint(0, 3) for _ in range(s)]
        want = h0(system(n, d, mults)).h0
        shuffled = mults[:]
        rng.shuffle(shuffled)
        assert h0(system(n, d, shuffled)).h0 == want


def test_h0_modular_matches_exact():
    rng = random.Random(59)
    for _ in range(12):
        n = rng.randint(2, 3)
        s = rng.randint(n + 3, n + 5)
        d = rng.randint(0, 5)
        mults = sorted((rng.randint(1, 3) for _ in range(s)), reverse=True)
        sys = system(n, d, mults)
        exact = h0(sys)
        mod = h0(sys, mode="modular", seed=rng.randrange(999), trials=3)
        assert mod.h0 == exact.h0, (n, d, mults)
        assert not mod.certified
        assert len(mod.primes) == 3
        assert len(mod.params) == 3


def test_curve_points_construction():
    pts = sample_points(3, 4)
    assert pts.params == (1, 2, 3, 4)
    assert pts.points == ((1, 1, 1), (2, 4, 8), (3, 9, 27), (4, 16, 64))
    assert pts.s == 4
    again = sample_points(2, 5, seed=7, mode="random")
    assert again == sample_points(2, 5, seed=7, mode="random")
    assert again.params != sample_points(2, 5, seed=8, mode="random").params


def test_curve_points_validation():
    with pytest.raises(ValueError):
        CurvePoints(2, (1, 1), ((1, 1), (1, 1)))
    with pytest.raises(ValueError):
        CurvePoints(2, (1, 2), ((1, 1), (2, 5)))


def test_h0_with_zero_mult_slots():
    pts = sample_points(2, 7, seed=3, mode="random")
    res = h0(system(2, 4, [2, 2, 2, 0, 2, 2, 0]), pts=pts)
    assert res.h0 == 1


def test_oracle_size_cap():
    with pytest.raises(OracleSizeError):
        h0(system(3, 6, [2] * 10), cap_cells=10)
    # The cap only applies to the exact path.
    assert h0(system(3, 6, [2] * 10), mode="modular", trials=1, cap_cells=10).h0 == 45


def test_consistency_sweep_small_grid():
    grid = SweepGrid(n=(2, 2), d=(1, 3), s=(5, 5), m=(1, 2))
    records = consistency_sweep(grid, seed=1)
    assert len(records) == 3 * 6  # 3 degrees x multisets of {1,2}^5
    for rec in records:
        assert list(rec.keys()) == RECORD_KEYS
        assert rec["verdict"] == "agree", rec
        assert rec["oracle"] is not None
        assert rec["recursive"] is not None
        assert rec["kc"] is not None


def test_consistency_sweep_size_skip():
    grid = SweepGrid(n=(2, 2), d=(2, 2), s=(5, 5), m=(1, 1), cap_cells=4)
    records = consistency_sweep(grid, seed=1)
    assert [rec["verdict"] for rec in records] == ["skip-size"]
    assert records[0]["oracle"] is None
