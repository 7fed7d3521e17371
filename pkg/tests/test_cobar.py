"""Cobar window, chart, product, Massey, and zig-zag tests.

The low-stem chart values asserted here are classical and serve as the
oracle for the whole pipeline: the 1-line is the image-of-J pattern with a
Z/9 in stem 11, the first beta classes sit where they must, and the 0-lines
distinguish the coefficient ring from its mod-3 reduction.
"""

import random

import numpy as np
import pytest

from anss3.cobar import (
    CobarWindow,
    Cochain,
    WindowError,
    class_product,
    cochain_product,
    connecting_mod3,
    connecting_v1,
    include_mod3,
    include_v1,
    leibniz_defect,
    massey_triple,
    scale_by_coefficient,
    verify_les_mod3,
    verify_les_v1,
)
from anss3.comodule import ComodulePresentation, presentation_for_label


@pytest.fixture(scope="module")
def small_moore(maps52):
    return CobarWindow(ComodulePresentation(maps52, "3"), 24, 6)


@pytest.fixture(scope="module")
def small_sphere(maps52):
    return CobarWindow(ComodulePresentation(maps52, "0"), 20, 5)


class TestWindow:
    def test_d_squared_holds(self, small_moore):
        small_moore.verify_d_squared()

    def test_bases_empty_off_lattice(self, small_moore):
        # internal degree is forced to be a multiple of 4, so bidegrees with
        # stem + filtration not 0 mod 4 have no basis at all
        for (f, t) in small_moore.basis:
            assert t % 4 == 0

    def test_refuses_window_beyond_truncation(self, maps52):
        with pytest.raises(WindowError) as err:
            CobarWindow(ComodulePresentation(maps52, "3"), 50, 4)
        assert "v3" in str(err.value)

    def test_mod3_zero_line_is_v1_polynomial(self, small_moore):
        chart = small_moore.ext()
        for s in range(0, 25):
            g = chart.group(s, 0)
            if s % 4 == 0:
                assert g is not None and g.orders == [3]
            else:
                assert g is None

    def test_sphere_zero_line_trivial_above_zero(self, small_sphere):
        chart = small_sphere.ext()
        assert chart.orders(0, 0) == [243]
        for s in range(1, 21):
            assert chart.orders(s, 0) == []

    def test_sphere_one_line_orders(self, small_sphere):
        # image-of-J pattern through stem 20: Z/3 in stems 3, 7, 15, 19
        # and Z/9 in stem 11
        chart = small_sphere.ext()
        assert chart.orders(3, 1) == [3]
        assert chart.orders(7, 1) == [3]
        assert chart.orders(11, 1) == [9]
        assert chart.orders(15, 1) == [3]
        assert chart.orders(19, 1) == [3]

    def test_beta1_bidegree(self, small_sphere):
        chart = small_sphere.ext()
        assert chart.orders(10, 2) == [3]
        assert chart.orders(13, 3) == [3]


class TestProducts:
    def test_leibniz_on_random_pairs(self, small_moore):
        rng = random.Random(1)
        w = small_moore
        bids = [k for k, b in w.basis.items() if b and 1 <= k[0] <= 3]
        checked = 0
        for _ in range(200):
            k1, k2 = rng.choice(bids), rng.choice(bids)
            if k1[0] + k2[0] + 1 > w.f_max or (k1[0] + k2[0] + 1, k1[1] + k2[1]) not in w.basis:
                continue
            x = Cochain(*k1)
            y = Cochain(*k2)
            for _ in range(3):
                x.add(rng.choice(w.basis[k1]), rng.randrange(1, 3), 3)
                y.add(rng.choice(w.basis[k2]), rng.randrange(1, 3), 3)
            assert not leibniz_defect(w, x, y).terms
            checked += 1
        assert checked > 30

    def test_alpha1_squared_zero(self, small_sphere):
        chart = small_sphere.ext()
        assert chart.orders(6, 2) == []
        prod = class_product(chart, (3, 1, 0), (3, 1, 0))
        assert not any(prod)

    def test_alpha1_beta1_nonzero(self, small_sphere):
        chart = small_sphere.ext()
        prod = class_product(chart, (3, 1, 0), (10, 2, 0))
        assert any(prod)  # alpha1*beta1 generates (13,3)

    def test_massey_alpha1_cube_is_beta1(self, small_sphere):
        chart = small_sphere.ext()
        a = (3, 1, 0)
        res = massey_triple(chart, a, a, a)
        assert res.coords and any(res.coords)
        # lands on (a unit multiple of) the beta1 generator, no indeterminacy
        assert res.indeterminacy == []


class TestZigZag:
    def test_connecting_v1_against_mod3(self, maps52, small_moore):
        # j_1 applied to the image of v2 recovers a 1-line class
        mchart = small_moore.ext()
        x = Cochain(0, 16, {((0, 1, 0), ()): 1})
        jx = connecting_v1(small_moore, x, 1)
        coords = mchart.reduce(jx)
        assert any(coords)

    def test_les_mod3_small(self, small_sphere, small_moore):
        schart = small_sphere.ext()
        mchart = small_moore.ext()
        rep = verify_les_mod3(schart, mchart, 18, 4)
        assert rep.ok, rep.failures
        assert len(rep.checked) > 20

    def test_les_v1_small(self, maps52, small_moore):
        quot = CobarWindow(ComodulePresentation(maps52, "3,v1^m", 2), 24, 6)
        rep = verify_les_v1(small_moore.ext(), quot.ext(), 2, 18, 4)
        assert rep.ok, rep.failures
        assert len(rep.checked) > 20

    def test_v1_shift_identity(self, maps52, small_moore):
        # j_m(x) = j_{m+k}(v1^k x) on quotient classes
        m, k = 2, 1
        wq = CobarWindow(ComodulePresentation(maps52, "3,v1^m", m), 24, 6)
        wqk = CobarWindow(ComodulePresentation(maps52, "3,v1^m", m + k), 24, 6)
        mchart = small_moore.ext()
        qchart = wq.ext()
        count = 0
        for (s, f) in sorted(qchart.groups):
            for i in range(qchart.groups[(s, f)].dim):
                x = qchart.rep(s, f, i)
                try:
                    left = mchart.reduce(connecting_v1(small_moore, x, m))
                except (WindowError, KeyError):
                    continue
                shifted = scale_by_coefficient(wqk, x, (k, 0, 0))
                try:
                    right = mchart.reduce(connecting_v1(small_moore, shifted, m + k))
                except (WindowError, KeyError):
                    continue
                assert left == right, (s, f, i)
                count += 1
        assert count >= 10


class TestChartSerialization:
    def test_json_deterministic(self, small_moore):
        c1 = small_moore.ext().to_json()
        c2 = small_moore.ext().to_json()
        assert c1 == c2
        assert '"target":"S/3"' in c1
