"""Binomial oracle: substitution, discriminants, lock-step replay."""

import math
import random

import pytest

from qoresolve import oracle
from qoresolve.oracle import (
    UNIT,
    BinomialSurface,
    Divergence,
    IllegalCenter,
    ReducibleBinomial,
    cross_validate,
    oracle_blow_up,
    oracle_discriminant_check,
    oracle_pairs,
)
from qoresolve.pairs import Move, pair


class TestOraclePairs:
    def test_reference_surface(self):
        m, pairs, ghost = oracle_pairs(BinomialSurface(3, 2, 4))
        assert m == 3
        assert tuple(pairs) == (pair("2/3", "4/3"),)
        assert ghost is None

    def test_half_integer_pair(self):
        m, pairs, _ = oracle_pairs(BinomialSurface(2, 1, 3))
        assert (m, tuple(pairs)) == (2, (pair("1/2", "3/2"),))

    def test_degree_one_is_smooth_with_ghost(self):
        m, pairs, ghost = oracle_pairs(BinomialSurface(1, 2, 5))
        assert (m, len(pairs)) == (1, 0)
        assert (ghost.x_exp, ghost.y_exp) == (2, 5)

    def test_reducible_rejected(self):
        with pytest.raises(ReducibleBinomial):
            BinomialSurface(4, 2, 2)


class TestOracleBlowUp:
    def test_transversal_x_chart(self):
        out = oracle_blow_up(BinomialSurface(3, 2, 4), "origin", "x")
        assert out == BinomialSurface(3, 3, 4)

    def test_monoidal_after_exponent_drop(self):
        out = oracle_blow_up(BinomialSurface(3, 0, 4), "x-axis", "y")
        assert out == BinomialSurface(3, 0, 1)

    def test_z_chart_smooth_strict_transform(self):
        out = oracle_blow_up(BinomialSurface(3, 1, 1), "origin", "z")
        m, pairs, ghost = oracle_pairs(out)
        assert m == 1 and not pairs
        assert (ghost.x_exp, ghost.y_exp) == (1, 1)

    def test_transversal_z_chart_is_unit(self):
        assert oracle_blow_up(BinomialSurface(3, 2, 4), "origin", "z") is UNIT

    def test_non_transversal_x_chart_swaps(self):
        # z^12 + x^3 y^7 in the x-chart: degree collapses to 7
        out = oracle_blow_up(BinomialSurface(12, 3, 7), "origin", "x")
        assert out == BinomialSurface(7, 2, 12)

    def test_illegal_axis_rejected(self):
        with pytest.raises(IllegalCenter):
            oracle_blow_up(BinomialSurface(3, 4, 2), "x-axis", "y")

    def test_closure_over_random_moves(self):
        rng = random.Random(11)
        count = 0
        for _ in range(400):
            m = rng.randint(1, 10)
            a, b = rng.randint(0, 15), rng.randint(0, 15)
            if (a, b) == (0, 0) or math.gcd(m, math.gcd(a, b)) != 1:
                continue
            s = BinomialSurface(m, a, b)
            for center, chart in (
                ("origin", "x"), ("origin", "y"), ("origin", "z"),
                ("x-axis", "y"), ("y-axis", "x"),
            ):
                try:
                    out = oracle_blow_up(s, center, chart)
                except IllegalCenter:
                    continue
                assert out is UNIT or isinstance(out, BinomialSurface)
                count += 1
        assert count > 500


class TestAgreementWithPairCalculus:
    def test_transform_rows_match_substitution(self):
        """normalize(transform_pairs(...)) == oracle_pairs(oracle_blow_up(...))."""
        from qoresolve.pairs import (
            Shape,
            classify,
            drop_integral_first,
            invert_single_pair,
            transform_pairs,
        )

        moves = {
            ("origin", "x", True): Move.QUAD_NONTRANSV_X,
            ("origin", "y", True): Move.QUAD_NONTRANSV_Y,
            ("origin", "z", True): Move.QUAD_NONTRANSV_Z,
            ("origin", "x", False): Move.QUAD_TRANSV_X,
            ("origin", "y", False): Move.QUAD_TRANSV_Y,
            ("x-axis", "y", False): Move.MONOIDAL_Y,
            ("y-axis", "x", False): Move.MONOIDAL_X,
        }
        checked = 0
        for m in range(2, 13):
            for a in range(0, 21):
                for b in range(0, 21):
                    if (a, b) == (0, 0) or math.gcd(m, math.gcd(a, b)) != 1:
                        continue
                    s = BinomialSurface(m, a, b)
                    dm, dp, _ = oracle_pairs(s)
                    nontr = classify(dp) is Shape.NON_TRANSVERSAL
                    for (center, chart, flag), move in moves.items():
                        if flag != nontr:
                            continue
                        try:
                            out = oracle_blow_up(s, center, chart)
                        except IllegalCenter:
                            continue
                        if out is UNIT:
                            continue
                        out = oracle.oracle_normalize(out)
                        try:
                            m2, raw = transform_pairs(dm, dp, move)
                        except Exception:
                            continue
                        p2, _g = drop_integral_first(m2, raw)
                        if p2 and p2.first.total < 1 and (
                            p2.first.x_exp == 0 or p2.first.y_exp == 0
                        ):
                            m2, p2, _ax = invert_single_pair(m2, p2)
                            p2, _g = drop_integral_first(m2, p2)
                        om, op, _ = oracle_pairs(out)
                        assert (m2, tuple(p2)) == (om, tuple(op)), (s, move)
                        checked += 1
        assert checked > 5000


class TestDiscriminant:
    def test_cubic(self):
        ok, exps = oracle_discriminant_check(BinomialSurface(3, 2, 4))
        assert ok and exps == (4, 8)  # disc(z^3 + c) = -27 c^2

    def test_quadric(self):
        ok, exps = oracle_discriminant_check(BinomialSurface(2, 1, 1))
        assert ok and exps == (1, 1)  # disc(z^2 + c) = -4 c

    def test_degree_one(self):
        ok, exps = oracle_discriminant_check(BinomialSurface(1, 5, 7))
        assert ok and exps == (0, 0)

    def test_preserved_along_a_run(self):
        s = BinomialSurface(3, 2, 4)
        for center, chart in (("origin", "x"), ("origin", "y"), ("y-axis", "x")):
            s2 = oracle_blow_up(s, center, chart)
            if isinstance(s2, BinomialSurface):
                ok, _ = oracle_discriminant_check(s2)
                assert ok
                s = s2


class TestCrossValidate:
    def test_reference_surface_full_tree(self):
        report = cross_validate(BinomialSurface(3, 2, 4))
        assert report.ok
        assert report.edges > 100  # plus reused subtrees covering the rest

    def test_paper_path_has_thirteen_years(self, golden_path):
        assert len(golden_path) == 13

    def test_small_surface(self):
        assert cross_validate(BinomialSurface(2, 1, 3)).ok

    def test_corrupted_table_detected(self, monkeypatch):
        """Harness self-test: a wrong transform row must cause a divergence."""
        import qoresolve.pairs as pairs_mod

        original = pairs_mod.transform_pairs

        def corrupted(m, pl, move):
            m2, out = original(m, pl, move)
            if move is Move.QUAD_TRANSV_X and out:
                first = out.pairs[0]
                bad = pairs_mod.CharPair(first.x_exp + 1, first.y_exp)
                return m2, pairs_mod.PairList((bad,) + out.pairs[1:])
            return m2, out

        monkeypatch.setattr("qoresolve.driver.transform_pairs", corrupted)
        report = cross_validate(BinomialSurface(3, 2, 4))
        assert not report.ok
        assert "DIVERGE" in report.failure


