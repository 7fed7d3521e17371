"""E-theory congruence verifier: field arithmetic, series ring, congruences."""

import random

import pytest

from anss3.etheory import (
    MAX_PRECISION,
    W,
    delta_series,
    f9_mul,
    f9_pow,
    s_add,
    s_mul,
    s_neg,
    s_pow,
    v1_image,
    v2_image,
    verify,
)


class TestF9:
    def test_unit_group_order(self):
        # w generates the units: w^8 = 1, w^4 = -1, and no smaller power is 1
        assert f9_pow(W, 8) == (1, 0)
        assert f9_pow(W, 4) == (2, 0)
        for k in range(1, 8):
            assert f9_pow(W, k) != (1, 0)

    def test_defining_relation(self):
        assert f9_mul(W, W) == (1, 1)  # w^2 = 1 + w

    def test_field_laws_on_random_triples(self):
        rng = random.Random(0)
        for _ in range(200):
            x, y, z = [(rng.randrange(3), rng.randrange(3)) for _ in range(3)]
            assert f9_mul(f9_mul(x, y), z) == f9_mul(x, f9_mul(y, z))
            assert f9_mul(x, y) == f9_mul(y, x)


class TestSeries:
    def test_ring_laws(self):
        rng = random.Random(1)

        def rand_series():
            return {
                (rng.randrange(6), rng.randrange(-5, 5)): (rng.randrange(3), rng.randrange(3))
                for _ in range(4)
            }

        for _ in range(50):
            a, b, c = rand_series(), rand_series(), rand_series()
            assert s_mul(s_mul(a, b, 6), c, 6) == s_mul(a, s_mul(b, c, 6), 6)
            lhs = s_mul(a, s_add(b, c, 6), 6)
            rhs = s_add(s_mul(a, b, 6), s_mul(a, c, 6), 6)
            assert lhs == rhs

    def test_grading_of_products(self):
        # u-exponent of v2^a * Delta^b is -8a - 12b throughout
        z = f9_pow(W, 2)
        for a, b in [(1, 1), (3, 2), (9, 6)]:
            prod = s_mul(s_pow(v2_image(), a, 6), s_pow(delta_series(z, 6), b, 6), 6)
            assert prod
            assert all(j - i * 0 == -8 * a - 12 * b for (i, j) in prod)

    def test_truncation_drops_high_u1(self):
        v1 = v1_image(3)
        assert s_pow(v1, 3, 3) == {}


class TestCongruences:
    def test_height_one_passes(self):
        rep = verify(1)
        assert rep.ok
        assert rep.unit_exponent in (1, 3, 5, 7)
        assert len(rep.checks) == 3
        assert all(c.ok for c in rep.checks)

    def test_identity_congruence(self):
        v2 = v2_image()
        assert s_add(v2, s_neg(v2), 6) == {}

    def test_height_two_reports_insufficient_precision(self):
        rep = verify(2)
        assert not rep.ok
        assert "insufficient precision" in rep.message

    def test_precision_cap(self):
        with pytest.raises(ValueError):
            verify(1, precision=MAX_PRECISION + 1)

    def test_wrong_unit_fails_some_check(self):
        # the unit enters the congruences: z = 1 (the trivial choice) breaks them
        from anss3.etheory import _run_checks

        checks = _run_checks((1, 0), 6)
        assert not all(c.ok for c in checks)
