"""Tests for the colored higher rank weights.

Closed spin-1 forms, the frozen factorization, and the stochastic
correction are cross-checked against the general P-sum weights; the
dynamical Yang-Baxter equation is summed directly over interior states
for full boundary grids at unit spins and for mixed-spin spot checks.
"""

from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from stochaster.higher_rank import (
    ColoredConfig,
    Composition,
    PoleError,
    RankParams,
    correction_rank,
    correction_rank_ratio,
    phi,
    propagate_rank,
    weight_S_rank,
    weight_S_rank_L1,
    weight_U,
    weight_W_rank,
    weight_W_rank_frozen,
)
from stochaster.sixvertex import ArrowConfig, weight_s6v, weight_w
from stochaster.special_fn import pochhammer

Q = 0.37 + 0.05j
Z = 0.8 + 0.3j
X, Y, V = 1.4 + 0.2j, 0.45 - 0.1j, 0.21 + 0.03j

xs = st.floats(min_value=1.2, max_value=1.9)
ys = st.floats(min_value=0.3, max_value=0.6)
vs = st.floats(min_value=0.02, max_value=0.3)


def comps(n: int, size: int) -> list[Composition]:
    out = []
    for parts in itertools.product(range(size + 1), repeat=n + 1):
        c = Composition(parts)
        if c.size() == size:
            out.append(c)
    return out


def unit(n: int, color: int) -> Composition:
    return Composition.unit(n + 1, color)


def bit_comp(bit: int) -> Composition:
    """Spin-1/2 edge dictionary: occupied is one color-1 arrow."""
    return Composition((0, 1)) if bit else Composition((1, 0))


def random_supported(rng: random.Random, n: int, L: int, M: int) -> ColoredConfig:
    A = rng.choice(comps(n, M))
    B = rng.choice(comps(n, L))
    total = A + B
    D = rng.choice([D for D in comps(n, L) if (total - D).valid()])
    return ColoredConfig(A, B, total - D, D)


def qp(a: complex, k: int) -> complex:
    return pochhammer("q", a, k, Q)


class TestComposition:
    def test_size_and_bar(self):
        c = Composition((2, 0, 3))
        assert c.size() == 5
        assert c.bar() == (0, 3)
        assert len(c) == 3 and c[2] == 3

    def test_unit(self):
        assert Composition.unit(3, 1).parts == (0, 1, 0)
        assert Composition.unit(2, 0, 4).parts == (4, 0)
        with pytest.raises(ValueError):
            Composition.unit(2, 2)

    def test_arithmetic_and_validity(self):
        a = Composition((1, 2)) + Composition((0, 1))
        assert a.parts == (1, 3)
        d = Composition((1, 0)) - Composition((0, 1))
        assert d.parts == (1, -1)
        assert not d.valid()
        assert a.valid()

    def test_range_sum(self):
        c = Composition((1, 2, 3, 4))
        assert c.range_sum(1, 3) == 9
        assert c.range_sum(2, 1) == 0


class TestColoredConfig:
    def test_supported(self):
        cfg = ColoredConfig(
            Composition((1, 1)), Composition((0, 1)),
            Composition((0, 2)), Composition((1, 0)),
        )
        assert cfg.supported(1, 2)
        assert not cfg.supported(2, 1)

    def test_conservation_violation(self):
        cfg = ColoredConfig(
            Composition((1, 0)), Composition((1, 0)),
            Composition((1, 0)), Composition((0, 1)),
        )
        assert not cfg.supported(1, 1)


class TestRankParams:
    def test_consistent_v_accepted(self):
        R = Composition((2, 1, 0))
        p = RankParams(n=2, L=1, M=1, q=0.4, x=1.3, y=0.5, z=0.9, T=3, R=R,
                       v=0.4 ** -2 / 0.9)
        assert abs(p.resolve_v() - p.implied_v()) < 1e-15

    def test_inconsistent_v_rejected(self):
        R = Composition((2, 1, 0))
        p = RankParams(n=2, L=1, M=1, q=0.4, x=1.3, y=0.5, z=0.9, T=3, R=R, v=0.7)
        with pytest.raises(ValueError):
            p.resolve_v()

    def test_curve_data_implies_v(self):
        p = RankParams(n=1, L=1, M=2, q=0.5, x=1.3, y=0.5, z=2.0,
                       T=2, R=Composition((1, 1)))
        assert abs(p.resolve_v() - 1.0) < 1e-15

    def test_missing_v_rejected(self):
        with pytest.raises(ValueError):
            RankParams(n=1, L=1, M=1, q=0.5, x=1.3, y=0.5).resolve_v()

    def test_bad_spins_rejected(self):
        with pytest.raises(ValueError):
            RankParams(n=0, L=1, M=1, q=0.5, x=1.3, y=0.5, v=0.1)
        with pytest.raises(ValueError):
            RankParams(n=1, L=1, M=1, q=0.5, x=1.3, y=0.5, v=0.1,
                       T=2, R=Composition((1, 0)))


class TestPhi:
    def test_equal_partitions_literal(self):
        # lam = mu collapses the middle factor and the binomial products
        x, y, q = 0.3, 0.5, 0.4
        lam = (1, 2)
        got = phi(lam, lam, x, y, q)
        want = (y / x) ** 3 * pochhammer("q", x, 3, q) / pochhammer("q", y, 3, q)
        assert abs(got - want) < 1e-14

    def test_empty_lambda(self):
        x, y = 1.3 + 0.1j, 0.4 + 0.2j
        for mu in [(1,), (2, 1), (0, 3, 1)]:
            got = phi((0,) * len(mu), mu, x, y, Q)
            m = sum(mu)
            want = pochhammer("q", y / x, m, Q) / pochhammer("q", y, m, Q)
            assert abs(got - want) < 1e-13

    def test_off_support_vanishes(self):
        assert phi((2, 0), (1, 3), 0.3, 0.5, 0.4) == 0
        assert phi((0, -1), (1, 3), 0.3, 0.5, 0.4) == 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            phi((1,), (1, 2), 0.3, 0.5, 0.4)

    def test_pole(self):
        with pytest.raises(PoleError):
            phi((1,), (2,), 0.3, 1.0, 0.4)


class TestWeightU:
    def test_spin_one_closed_forms(self):
        # closed spin-1 forms, stated in the reciprocal spectral variable:
        # the vertical line carries I, the horizontal arrow one color
        n, M = 2, 3
        den = 1 - Q**M * Z
        for I in comps(n, M):
            for j in range(1, n + 1):
                got = weight_U(1, M, I, unit(n, j), I, unit(n, j), 1 / Z, Q)
                want = (1 - Q ** I[j] * Z) * Q ** I.range_sum(j + 1, n) / den
                assert abs(got - want) < 1e-12
            for h in range(1, n + 1):
                for j in range(h + 1, n + 1):
                    K = I + unit(n, h) - unit(n, j)
                    got = weight_U(1, M, I, unit(n, h), K, unit(n, j), 1 / Z, Q)
                    want = (1 - Q ** I[j]) * Q ** I.range_sum(j + 1, n) / den
                    if not K.valid():
                        want = 0j
                    assert abs(got - want) < 1e-12
                    K = I + unit(n, j) - unit(n, h)
                    got = weight_U(1, M, I, unit(n, j), K, unit(n, h), 1 / Z, Q)
                    want = (1 - Q ** I[h]) * Q ** I.range_sum(h + 1, n) * Z / den
                    if not K.valid():
                        want = 0j
                    assert abs(got - want) < 1e-12

    def test_off_support_vanishes(self):
        A = Composition((1, 1))   # size 2, but M = 1
        B = Composition((1, 0))
        assert weight_U(1, 1, A, B, A, B, Z, Q) == 0
        # conservation violation
        assert weight_U(
            1, 1, bit_comp(1), bit_comp(0), bit_comp(0), bit_comp(0), Z, Q
        ) == 0

    def test_matches_spin_half_table(self):
        rng = random.Random(5)
        for _ in range(10):
            x = 1.2 + rng.random()
            y = 0.3 + 0.3 * rng.random()
            q = 0.2 + 0.5 * rng.random()
            for key in itertools.product((0, 1), repeat=4):
                i1, j1, i2, j2 = key
                got = weight_U(
                    1, 1, bit_comp(i1), bit_comp(j1), bit_comp(i2), bit_comp(j2),
                    x / y, q,
                )
                want = weight_w(ArrowConfig(*key), x, y, q)
                assert abs(got - want) < 1e-11


class TestWeightWRank:
    def test_transpose_identity(self):
        rng = random.Random(17)
        for _ in range(20):
            n = rng.choice([1, 2])
            L, M = rng.choice([1, 2]), rng.choice([1, 2])
            cfg = random_supported(rng, n, L, M)
            w = weight_W_rank(L, M, cfg.A, cfg.B, cfg.C, cfg.D, Z, Q)
            u = weight_U(L, M, cfg.C, cfg.D, cfg.A, cfg.B, Z, Q)
            assert w == u

    def test_colorless_output_factors(self):
        for n, L, M in [(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1)]:
            e0L = Composition.unit(n + 1, 0, L)
            for I in comps(n, M):
                for J in comps(n, L):
                    K = I + J - e0L
                    if not K.valid():
                        continue
                    full = weight_W_rank(L, M, I, J, K, e0L, Z, Q)
                    frozen = weight_W_rank_frozen(L, M, I, J, K, Z, Q)
                    assert abs(full - frozen) < 1e-12

    def test_off_support_vanishes(self):
        assert weight_W_rank(
            1, 1, bit_comp(1), bit_comp(0), bit_comp(0), bit_comp(0), Z, Q
        ) == 0


class TestWeightWFrozen:
    def test_colorless_input_reduction(self):
        # J = L e0 forces K = I and leaves a single Pochhammer ratio
        n, L, M = 2, 2, 3
        e0L = Composition.unit(n + 1, 0, L)
        for I in comps(n, M):
            got = weight_W_rank_frozen(L, M, I, e0L, I, Z, Q)
            want = qp(Q ** -I[0] * Z, L) / qp(Q**-M * Z, L)
            assert abs(got - want) < 1e-12

    def test_conservation_required(self):
        with pytest.raises(ValueError):
            weight_W_rank_frozen(
                1, 1, bit_comp(1), bit_comp(0), bit_comp(0), Z, Q
            )

    def test_invalid_composition_vanishes(self):
        # solving conservation may leave a negative part; the weight is 0
        I = Composition((0, 1))
        J = Composition((0, 1))
        K = I + J - Composition.unit(2, 0, 1)
        assert not K.valid()
        assert weight_W_rank_frozen(1, 1, I, J, K, Z, Q) == 0

    def test_matches_chi_dictionary(self):
        # spin-1 rank-1 frozen weights are the chi attachment weights in
        # disguise: chi spin q^M, rapidity z split as s * zeta, and a
        # gauge factor -z/q^M per absorbed colored arrow
        from stochaster.sixvertex import weight_chi

        s = 0.7 + 0.1j
        for M in (1, 2, 3):
            zeta = Z / s
            for I1 in range(M + 1):
                I = Composition((M - I1, I1))
                keep = weight_W_rank_frozen(1, M, I, Composition((1, 0)), I, Z, Q)
                chi = weight_chi(ArrowConfig(I1, 0, I1, 0), zeta, Q**M, Q, s)
                assert abs(keep - chi) < 1e-12
                K = Composition((M - I1 - 1, I1 + 1))
                if not K.valid():
                    continue
                absorb = weight_W_rank_frozen(1, M, I, Composition((0, 1)), K, Z, Q)
                chi = weight_chi(ArrowConfig(I1, 1, I1 + 1, 0), zeta, Q**M, Q, s)
                assert abs(absorb - (-Z * Q**-M) * chi) < 1e-12

    def test_pole(self):
        I = Composition((1, 1))
        J = Composition((2, 0))
        with pytest.raises(PoleError):
            weight_W_rank_frozen(2, 2, I, J, I, Q**2, Q)


class TestCorrectionRank:
    def test_fully_colorless_is_one(self):
        for L, M in [(1, 1), (2, 1), (1, 3)]:
            cfg = ColoredConfig(
                Composition((M, 0)), Composition((L, 0)),
                Composition((M, 0)), Composition((L, 0)),
            )
            assert abs(correction_rank(L, M, cfg, X, Y, V, Q) - 1) < 1e-14
            R = Composition((7, 1))
            got = correction_rank_ratio(L, M, cfg, X, Y, Q, 8, R, Z)
            assert abs(got - 1) < 1e-13

    def test_requires_support(self):
        cfg = ColoredConfig(
            Composition((1, 0)), Composition((1, 0)),
            Composition((1, 0)), Composition((0, 1)),
        )
        with pytest.raises(ValueError):
            correction_rank(1, 1, cfg, X, Y, V, Q)

    def test_matches_ratio(self):
        rng = random.Random(23)
        n, T = 2, 8
        R = Composition((6, 1, 1))
        for _ in range(25):
            L, M = rng.choice([1, 2]), rng.choice([1, 2])
            x = 1.2 + 0.5 * rng.random()
            y = 0.3 + 0.25 * rng.random()
            z = 2.0 + 0.5 * rng.random()
            cfg = random_supported(rng, n, L, M)
            closed = correction_rank(L, M, cfg, x, y, Q ** -R[0] / z, Q)
            ratio = correction_rank_ratio(L, M, cfg, x, y, Q, T, R, z)
            assert abs(closed - ratio) < 1e-10 * max(1, abs(closed))

    def test_ratio_colored_occupancy_independent(self):
        # two curves with equal colorless occupancy give equal corrections
        rng = random.Random(29)
        cfg = random_supported(rng, 2, 2, 2)
        a = correction_rank_ratio(2, 2, cfg, X, Y, Q, 8, Composition((6, 2, 0)), Z)
        b = correction_rank_ratio(2, 2, cfg, X, Y, Q, 8, Composition((6, 0, 2)), Z)
        assert abs(a - b) < 1e-13 * max(1, abs(a))

    def test_ratio_small_curve_rejected(self):
        cfg = ColoredConfig(
            Composition((0, 1)), Composition((0, 1)),
            Composition((0, 1)), Composition((0, 1)),
        )
        with pytest.raises(ValueError):
            correction_rank_ratio(1, 1, cfg, X, Y, Q, 2, Composition((1, 1)), Z)

    def test_pole(self):
        cfg = ColoredConfig(
            Composition((1, 0)), Composition((0, 1)),
            Composition((0, 1)), Composition((1, 0)),
        )
        with pytest.raises(PoleError):
            correction_rank(1, 1, cfg, 1.3, 0.5, 2.0, 0.4)


def def_one_two(a: int, b: int, c: int, d: int,
                x: complex, y: complex, q: complex, v: complex) -> complex:
    """Unit-spin colored weights, written out case by case."""
    if a == b:
        return 1.0 + 0j if c == a and d == a else 0j
    if (c, d) == (a, b):
        if a == 0:
            return (x - y) * (1 - q * v * y) / ((x - q * y) * (1 - v * y))
        if b == 0:
            return q * (x - y) * (1 - v * x) / ((x - q * y) * (1 - q * v * x))
        if a < b:
            return q * (x - y) / (x - q * y)
        return (x - y) / (x - q * y)
    if (c, d) == (b, a):
        if a == 0:
            return (1 - q) * y * (1 - v * x) / ((x - q * y) * (1 - v * y))
        if b == 0:
            return (1 - q) * x * (1 - q * v * y) / ((x - q * y) * (1 - q * v * x))
        if a < b:
            return (1 - q) * x / (x - q * y)
        return (1 - q) * y / (x - q * y)
    return 0j


class TestWeightSRank:
    def test_fully_colorless_is_one(self):
        for L, M in [(1, 1), (2, 3)]:
            cfg = ColoredConfig(
                Composition((M, 0, 0)), Composition((L, 0, 0)),
                Composition((M, 0, 0)), Composition((L, 0, 0)),
            )
            assert abs(weight_S_rank(L, M, cfg, X, Y, V, Q) - 1) < 1e-14

    def test_unit_spin_table(self):
        x, y, q, v = 1.4, 0.3, 0.45, 0.2
        n = 2
        for a, b, c, d in itertools.product(range(n + 1), repeat=4):
            cfg = ColoredConfig(unit(n, a), unit(n, b), unit(n, c), unit(n, d))
            got = weight_S_rank(1, 1, cfg, x, y, v, q)
            want = def_one_two(a, b, c, d, x, y, q, v)
            assert abs(got - want) < 1e-12, (a, b, c, d)

    @settings(max_examples=25, deadline=None)
    @given(x=xs, y=ys, v=vs)
    def test_stochasticity(self, x, y, v):
        q = 0.45
        for n in (1, 2):
            for L in (1, 2):
                for M in (1, 2):
                    for A in comps(n, M):
                        for B in comps(n, L):
                            total = A + B
                            row = 0j
                            for D in comps(n, L):
                                C = total - D
                                if not C.valid():
                                    continue
                                row += weight_S_rank(
                                    L, M, ColoredConfig(A, B, C, D), x, y, v, q
                                )
                            assert abs(row - 1) < 1e-9

    def test_matches_spin_half_table(self):
        for key in itertools.product((0, 1), repeat=4):
            cfg = ColoredConfig(*(bit_comp(bit) for bit in key))
            got = weight_S_rank(1, 1, cfg, X, Y, V, Q)
            want = weight_s6v(ArrowConfig(*key), X, Y, Q, V)
            assert abs(got - want) < 1e-12

    def test_off_support_vanishes(self):
        cfg = ColoredConfig(bit_comp(1), bit_comp(0), bit_comp(0), bit_comp(0))
        assert weight_S_rank(1, 1, cfg, X, Y, V, Q) == 0

    def _rows(self, n, L, M):
        for A in comps(n, M):
            for B in comps(n, L):
                yield A, B

    def test_v_degenerations(self):
        # at v = 0 and v -> infinity the weights stay stochastic and stop
        # feeling the dynamical propagation across faces
        n, L, M = 2, 2, 2
        q = 0.45
        for v, face_tol in ((0.0, 1e-14), (1e8, 5e-6)):
            for A, B in self._rows(n, L, M):
                total = A + B
                row = 0j
                for D in comps(n, L):
                    C = total - D
                    if not C.valid():
                        continue
                    cfg = ColoredConfig(A, B, C, D)
                    s = weight_S_rank(L, M, cfg, 1.6, 0.4, v, q)
                    row += s
                    shifted = weight_S_rank(L, M, cfg, 1.6, 0.4, q * v, q)
                    assert abs(s - shifted) < face_tol
                assert abs(row - 1) < 1e-9


class TestWeightSRankL1:
    def test_colorless_line_is_identity(self):
        for M in (1, 2, 3):
            I = Composition((M, 0, 0))
            got = weight_S_rank_L1(M, I, 0, I, 0, X, Y, V, Q)
            assert abs(got - 1) < 1e-14

    def test_unit_m_matches_table(self):
        x, y, q, v = 1.4, 0.3, 0.45, 0.2
        n = 2
        for a, b, d in itertools.product(range(n + 1), repeat=3):
            I = unit(n, a)
            K = I + unit(n, b) - unit(n, d)
            got = weight_S_rank_L1(1, I, b, K, d, x, y, v, q)
            if K.valid():
                c = next(i for i in range(n + 1) if K[i] == 1)
                want = def_one_two(a, b, c, d, x, y, q, v)
            else:
                want = 0j
            assert abs(got - want) < 1e-12, (a, b, d)

    def test_matches_general_weight(self):
        rng = random.Random(31)
        n = 2
        count = 0
        while count < 30:
            M = rng.choice([1, 2, 3])
            I = rng.choice(comps(n, M))
            b, d = rng.randrange(n + 1), rng.randrange(n + 1)
            K = I + unit(n, b) - unit(n, d)
            if not K.valid():
                continue
            count += 1
            x = 1.2 + 0.5 * rng.random()
            y = 0.3 + 0.25 * rng.random()
            v = 0.05 + 0.2 * rng.random()
            got = weight_S_rank_L1(M, I, b, K, d, x, y, v, Q)
            cfg = ColoredConfig(I, unit(n, b), K, unit(n, d))
            want = weight_S_rank(1, M, cfg, x, y, v, Q)
            assert abs(got - want) < 1e-10 * max(1, abs(want))

    def test_free_parameter_stochasticity(self):
        # with q^M continued to an arbitrary value the size constraint on
        # I drops and rows still sum to 1
        n = 2
        qM = 0.21 + 0.3j
        for I in [Composition((1, 2, 0)), Composition((0, 1, 3))]:
            for b in range(n + 1):
                row = 0j
                for d in range(n + 1):
                    K = I + unit(n, b) - unit(n, d)
                    row += weight_S_rank_L1(
                        1, I, b, K, d, X, Y, V, Q, qM=qM
                    )
                assert abs(row - 1) < 1e-11

    def test_size_mismatch_vanishes(self):
        I = Composition((1, 1, 0))
        assert weight_S_rank_L1(3, I, 0, I, 0, X, Y, V, Q) == 0

    def test_nonconserving_vanishes(self):
        I = Composition((1, 1, 0))
        assert weight_S_rank_L1(2, I, 1, I, 0, X, Y, V, Q) == 0

    def test_color_range_checked(self):
        I = Composition((1, 1, 0))
        with pytest.raises(ValueError):
            weight_S_rank_L1(2, I, 3, I, 3, X, Y, V, Q)

    def test_pole(self):
        I = Composition((1, 1))
        with pytest.raises(PoleError):
            weight_S_rank_L1(2, I, 0, I, 0, 0.45**2 * 0.5, 0.5, V, 0.45)


class TestPropagateRank:
    def test_colorless_edges_keep_v(self):
        M, L = 2, 3
        cfg = ColoredConfig(
            Composition((M, 0)), Composition((L, 0)),
            Composition((M, 0)), Composition((L, 0)),
        )
        assert propagate_rank(V, cfg, L, M, Q) == (V, V)

    def test_colored_unit_shifts_both(self):
        cfg = ColoredConfig(bit_comp(1), bit_comp(1), bit_comp(1), bit_comp(1))
        west, north = propagate_rank(V, cfg, 1, 1, Q)
        assert abs(west - Q * V) < 1e-15
        assert abs(north - Q * V) < 1e-15

    def test_mixed_spins(self):
        A = Composition((1, 2))
        B = Composition((0, 2))
        D = Composition((0, 2))
        C = A + B - D
        west, north = propagate_rank(V, ColoredConfig(A, B, C, D), 2, 3, Q)
        assert abs(west - Q**2 * V) < 1e-15
        assert abs(north - Q**2 * V) < 1e-15

    def test_requires_support(self):
        cfg = ColoredConfig(bit_comp(1), bit_comp(0), bit_comp(0), bit_comp(0))
        with pytest.raises(ValueError):
            propagate_rank(V, cfg, 1, 1, Q)


def ybe_residual(weight, n, L, M, T, boundary, x, y, z):
    """Non-dynamical triangle move residual for U-convention weights."""
    I1, J1, K1, I3, J3, K3 = boundary
    lhs = 0j
    for J2 in comps(n, L):
        I2 = I1 + J1 - J2
        K2 = K1 + J2 - J3
        if not (I2.valid() and K2.valid()):
            continue
        lhs += (weight(L, M, I1, J1, I2, J2, x / y, Q)
                * weight(L, T, K1, J2, K2, J3, x / z, Q)
                * weight(M, T, K2, I2, K3, I3, y / z, Q))
    rhs = 0j
    for I2 in comps(n, M):
        K2 = K1 + I1 - I2
        J2 = K2 + J1 - K3
        if not (K2.valid() and J2.valid()):
            continue
        rhs += (weight(M, T, K1, I1, K2, I2, y / z, Q)
                * weight(L, T, K2, J1, K3, J2, x / z, Q)
                * weight(L, M, I2, J2, I3, J3, x / y, Q))
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1)


def ybe_dynamical_residual(n, L, M, T, boundary, x, y, z, v, q=Q):
    """Dynamical triangle move residual for the stochastic weights."""
    I1, J1, K1, I3, J3, K3 = boundary
    lhs = 0j
    for J2 in comps(n, L):
        I2 = I1 + J1 - J2
        K2 = K1 + J2 - J3
        if not (I2.valid() and K2.valid()):
            continue
        lhs += (weight_S_rank(L, M, ColoredConfig(I1, J1, I2, J2),
                              x, y, q ** (T - K1[0]) * v, q)
                * weight_S_rank(L, T, ColoredConfig(K1, J2, K2, J3), x, z, v, q)
                * weight_S_rank(M, T, ColoredConfig(K2, I2, K3, I3),
                                y, z, q ** (L - J3[0]) * v, q))
    rhs = 0j
    for I2 in comps(n, M):
        K2 = K1 + I1 - I2
        J2 = K2 + J1 - K3
        if not (K2.valid() and J2.valid()):
            continue
        rhs += (weight_S_rank(M, T, ColoredConfig(K1, I1, K2, I2), y, z, v, q)
                * weight_S_rank(L, T, ColoredConfig(K2, J1, K3, J2),
                                x, z, q ** (M - I2[0]) * v, q)
                * weight_S_rank(L, M, ColoredConfig(I2, J2, I3, J3), x, y, v, q))
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1)


def conserving_boundaries(rng, n, L, M, T, count):
    """Random boundary sextuples whose total color counts balance."""
    out = []
    while len(out) < count:
        I1 = rng.choice(comps(n, M))
        J1 = rng.choice(comps(n, L))
        K1 = rng.choice(comps(n, T))
        total = I1 + J1 + K1
        I3 = rng.choice(comps(n, M))
        J3 = rng.choice(comps(n, L))
        K3 = total - I3 - J3
        if K3.valid() and K3.size() == T:
            out.append((I1, J1, K1, I3, J3, K3))
    return out


XYZ = (1.7 + 0.2j, 0.6 - 0.1j, 2.3 + 0.4j)


class TestYangBaxterRank:
    def test_plain_unit_spins_full_grid(self):
        n = 1
        cs = comps(n, 1)
        for boundary in itertools.product(cs, repeat=6):
            r = ybe_residual(weight_U, n, 1, 1, 1, boundary, *XYZ)
            assert r < 1e-9

    def test_plain_mixed_spins(self):
        rng = random.Random(41)
        for n, (L, M, T) in [(1, (2, 1, 1)), (2, (1, 2, 1)), (2, (2, 2, 2))]:
            for boundary in conserving_boundaries(rng, n, L, M, T, 8):
                assert ybe_residual(weight_U, n, L, M, T, boundary, *XYZ) < 1e-9

    def test_plain_transposed_weights(self):
        rng = random.Random(43)
        for n, (L, M, T) in [(1, (1, 1, 1)), (2, (2, 1, 2))]:
            for boundary in conserving_boundaries(rng, n, L, M, T, 8):
                r = ybe_residual(weight_W_rank, n, L, M, T, boundary, *XYZ)
                assert r < 1e-9

    def test_dynamical_unit_spins_full_grid(self):
        v = 0.23 + 0.06j
        for n in (1, 2):
            cs = comps(n, 1)
            for boundary in itertools.product(cs, repeat=6):
                r = ybe_dynamical_residual(n, 1, 1, 1, boundary, *XYZ, v)
                assert r < 1e-9, boundary

    def test_dynamical_mixed_spins(self):
        rng = random.Random(47)
        v = 0.23 + 0.06j
        for (L, M, T) in [(2, 1, 1), (1, 2, 2), (2, 2, 1)]:
            for boundary in conserving_boundaries(rng, 1, L, M, T, 10):
                r = ybe_dynamical_residual(1, L, M, T, boundary, *XYZ, v)
                assert r < 1e-9, (L, M, T, boundary)

    def test_dynamical_real_parameters(self):
        rng = random.Random(53)
        for boundary in conserving_boundaries(rng, 2, 1, 1, 1, 10):
            r = ybe_dynamical_residual(
                2, 1, 1, 1, boundary, 1.7, 0.6, 2.3, 0.19, q=0.45
            )
            assert r < 1e-9
