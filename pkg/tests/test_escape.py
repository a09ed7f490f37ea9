import numpy as np
import pytest

from conftest import EX1, EX2, EX3
from skewbraid.errors import InvalidConfig
from skewbraid.escape import (
    EscapeConfig,
    admissibility_certificate,
    escape_doubling_check,
    escape_threshold,
    green_estimate,
    green_estimates,
    shift_locus_test,
)
from skewbraid.factory import PRESETS
from skewbraid.skewparam import SkewParam, critical_points, escape_norm, iterate_Q


class TestConfig:
    @pytest.mark.parametrize("alpha", [1.0, 3.0, 0.5])
    def test_alpha_range(self, alpha):
        with pytest.raises(InvalidConfig):
            EscapeConfig(alpha=alpha).check(3)

    def test_margin(self):
        with pytest.raises(InvalidConfig):
            EscapeConfig(margin=0.9).check(3)

    def test_default_ok(self):
        EscapeConfig().check(2)
        EscapeConfig().check(5)


class TestGreen:
    def test_zero_param_on_circle(self):
        est = green_estimate(SkewParam.zero(3), 1, np.exp(0.3j))
        assert est.value == 0 and not est.certified_positive

    def test_ex1_escape_step(self):
        est = green_estimate(EX1, 1, 0)
        assert est.certified_positive
        assert est.escape_step == 1
        assert est.value > 0

    def test_zero_param_is_log_plus(self):
        rng = np.random.default_rng(10)
        w = 3 * (rng.normal(size=100) + 1j * rng.normal(size=100))
        z = np.exp(2j * np.pi * rng.random(100))
        for est, wi in zip(green_estimates(SkewParam.zero(2), z, w, EscapeConfig()), w):
            assert abs(est.value - max(0.0, np.log(abs(wi)))) <= 1e-12

    def test_certified_implies_positive(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            lam = SkewParam.from_flat(3, rng.normal(size=7) + 1j * rng.normal(size=7))
            w = 4 * (rng.normal(size=50) + 1j * rng.normal(size=50))
            for est in green_estimates(lam, np.exp(1j * rng.random(50)), w, EscapeConfig()):
                if est.certified_positive:
                    assert est.value > 0

    @pytest.mark.parametrize("name", ["d3-ex1-adm", "d3-ex2-adm", "d3-ex3-adm", "d2-s1-adm"])
    def test_stays_above_threshold(self, name):
        # once a critical orbit passes R^alpha it never drops back on the horizon
        lam = PRESETS[name].param
        cfg = EscapeConfig()
        thresh = escape_threshold(lam, cfg)
        for z in np.exp(2j * np.pi * np.arange(16) / 16):
            for c in critical_points(lam, z):
                est = green_estimate(lam, z, c, cfg)
                assert est.certified_positive
                vals, zk, w = [], z, c
                for _ in range(4):
                    w = iterate_Q(lam, zk, w, 1)
                    zk = zk**lam.d
                    vals.append(abs(w))
                above = [v >= thresh for v in vals]
                k = above.index(True)
                assert all(above[k:])


class TestDoubling:
    def test_zero_rejected(self):
        assert not escape_doubling_check(SkewParam.zero(3))

    @pytest.mark.parametrize("lam", [EX1, EX2, EX3])
    def test_examples(self, lam):
        assert escape_doubling_check(lam.scaled(4), trials=2000)


class TestShiftLocus:
    def test_ex2_scaled(self):
        assert shift_locus_test(EX2.scaled(4)).kind == "InD"

    def test_zero(self):
        v = shift_locus_test(SkewParam.zero(3))
        assert v.kind == "NotInD"
        assert v.witnesses

    def test_small_quadratic(self):
        assert shift_locus_test(SkewParam.from_flat(2, [0.1, 0, 0])).kind == "NotInD"


class TestAdmissibility:
    def test_ex3_scaled(self):
        ok, rep = admissibility_certificate(EX3.scaled(3))
        assert ok
        assert rep.slack >= 1

    def test_zero(self):
        ok, rep = admissibility_certificate(SkewParam.zero(3))
        assert not ok

    @pytest.mark.parametrize("t", [1, 4, 100])
    def test_boundary_quadratic(self, t):
        ok, rep = admissibility_certificate(SkewParam.from_flat(2, [1, 1, 0]).scaled(t))
        assert not ok
        assert rep.in_E

    @pytest.mark.parametrize("name", sorted(n for n in PRESETS if n.endswith("-adm")))
    def test_presets_admissible_and_in_D(self, name):
        lam = PRESETS[name].param
        assert admissibility_certificate(lam)[0]
        assert shift_locus_test(lam).kind == "InD"

    def test_report_numbers(self):
        ok, rep = admissibility_certificate(EX1.scaled(2))
        assert rep.escape_norm == pytest.approx(escape_norm(EX1.scaled(2)))
        assert rep.bound == pytest.approx(1.25 * 2 * rep.escape_norm**1.5)
