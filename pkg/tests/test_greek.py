"""Greek-letter element construction against the chart.

These use a window through stem 38, which covers beta_1, beta_2, beta_3/3,
and beta_3/2; the expected nonvanishing and orders are the classical facts
the rest of the tooling leans on.
"""

import pytest

from anss3.greek import Workbench, alpha, beta, label_chart


class TestBeta:
    def test_beta1(self, bench):
        c = beta(bench, 1, 1)
        assert (c.s, c.f) == (10, 2)
        assert c.order == 3 and any(c.coords)

    def test_beta2(self, bench):
        c = beta(bench, 2, 1)
        assert (c.s, c.f) == (26, 2)
        assert c.order == 3 and any(c.coords)

    def test_beta_3_3(self, bench):
        c = beta(bench, 3, 3)
        assert (c.s, c.f) == (34, 2)
        assert c.order == 3 and any(c.coords)

    def test_beta_3_2(self, bench):
        c = beta(bench, 3, 2)
        assert (c.s, c.f) == (38, 2)
        assert c.order == 3 and any(c.coords)

    def test_divisibility_constraint(self, bench):
        # beta_{1/2} needs 2 <= 3^v3(1) = 1: refused
        with pytest.raises(ValueError):
            beta(bench, 1, 2)

    def test_out_of_window(self, bench):
        with pytest.raises(ValueError):
            beta(bench, 4, 1)


class TestAlpha:
    def test_alpha1(self, bench):
        c = alpha(bench, 1)
        assert (c.s, c.f) == (3, 1)
        assert c.order == 3 and any(c.coords)

    def test_alpha_family_orders(self, bench):
        assert alpha(bench, 2).order == 3
        assert alpha(bench, 3).order == 9  # the 3-divisible spot on the 1-line
        assert alpha(bench, 4).order == 3


class TestLabeling:
    def test_sphere_chart_names(self, bench):
        chart = label_chart(bench, "S")
        assert chart.groups[(3, 1)].names[0] == "alpha_1"
        assert chart.groups[(10, 2)].names[0] == "beta_1"
        assert chart.groups[(26, 2)].names[0] == "beta_2"
        assert chart.groups[(34, 2)].names[0] == "beta_3/3"

    def test_moore_zero_line_names(self, bench):
        chart = label_chart(bench, "S/3")
        assert chart.groups[(4, 0)].names[0] == "v1"
        assert chart.groups[(8, 0)].names[0] == "v1^2"
