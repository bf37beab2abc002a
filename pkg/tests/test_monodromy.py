"""Tests for the contracted-data maps, branch exponents, and surface moves."""

import json
import random

import pytest
from mpmath import mp, workdps

from dp3.monodromy import (
    AlgebraicCase,
    BoundaryValueError,
    ComplexHP,
    ConventionUnreachableError,
    ExcludedValueError,
    ManifoldPoint,
    MonodromyError,
    MonodromyPoint,
    Nu1,
    RealFormPoint,
    algebraic_cases,
    from_H0,
    lift,
    manifold_residuals,
    map_variants,
    nu1,
    nu1_from_json,
    nu1_to_json,
    point_from_json,
    point_to_json,
    real_form_residuals,
    rho_from_s,
)
from dp3.specfun import hp

DIGITS = 30
TOL = mp.mpf(10) ** (8 - DIGITS)


def sample_h0(rng, radius=5.0):
    """A generic initial value kept away from the excluded points."""
    while True:
        h = mp.mpc(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if abs(h) < 0.2:
            continue
        if abs(h - 1) < 0.2:
            continue
        if abs(h * h + h + 1) < 0.1:
            continue
        return h


def surface_point(rng, digits=DIGITS):
    """A contracted point with s != 0, built from the defining equations."""
    with workdps(digits + 12):
        g1 = mp.mpc(rng.uniform(0.3, 2.0), rng.uniform(-1.5, 1.5))
        g3 = mp.mpc(rng.uniform(0.3, 2.0), rng.uniform(-1.5, 1.5))
        g2 = -g3 * (g3 - 1) / g1
        s = 1 - (1 - g1 + g2) / g3
        return MonodromyPoint(s=hp(s, digits), g1=hp(g1, digits),
                              g2=hp(g2, digits), g3=hp(g3, digits),
                              g4=hp(g3 - 1, digits))


class TestFromH0:
    def test_linear_system_reconstruction(self):
        # oracle: the three linear relations that determine the point,
        #   g1*e^{-i pi/3} + 2*(g3 - 1) - g2*e^{+i pi/3} = H0   - 1
        #   g1*e^{+i pi/3} + 2*(g3 - 1) - g2*e^{-i pi/3} = 1/H0 - 1
        #   g1 - g2 + g3 = 1
        # solved directly, bypassing the factored product formulas
        rng = random.Random(41)
        with workdps(55):
            e = mp.exp(1j * mp.pi / 3)
            for _ in range(12):
                h = sample_h0(rng)
                A = mp.matrix([[1 / e, -e, 2], [e, -1 / e, 2], [1, -1, 1]])
                b = mp.matrix([h + 1, 1 / h + 1, 1])
                sol = mp.lu_solve(A, b)
                pt = from_H0(h, digits=40)
                got = (pt.g1.mpc, pt.g2.mpc, pt.g3.mpc)
                for k in range(3):
                    assert abs(sol[k] - got[k]) < mp.mpf(10) ** -32

    def test_surface_membership_random(self):
        rng = random.Random(43)
        for _ in range(100):
            pt = from_H0(sample_h0(rng), digits=DIGITS)
            assert max(manifold_residuals(pt)) < TOL

    def test_single_equation_form(self):
        # independent substitution into the reduced cubic
        rng = random.Random(47)
        with workdps(DIGITS + 10):
            for _ in range(10):
                pt = from_H0(sample_h0(rng), digits=DIGITS)
                g1, g3, s = pt.g1.mpc, pt.g3.mpc, pt.s.mpc
                res = g1 ** 2 + g1 * g3 * (1 - s) + g3 ** 2 - g1 - g3
                assert mp.fabs(res) < TOL

    def test_contraction_identities(self):
        pt = from_H0(mp.mpc("0.7", "-1.3"), digits=40)
        with workdps(50):
            assert abs(pt.g3.mpc - pt.g4.mpc - 1) < mp.mpf(10) ** -38
            assert abs(pt.g3.mpc * pt.g4.mpc + pt.g1.mpc * pt.g2.mpc) \
                < mp.mpf(10) ** -38
        assert pt.s.re == 0 and pt.s.im == 0

    def test_stated_factored_forms(self):
        h = mp.mpc(2, 1)
        pt = from_H0(h, digits=DIGITS)
        with workdps(DIGITS + 10):
            w = mp.exp(2j * mp.pi / 3)
            assert abs(pt.g4.mpc - (h - 1) ** 2 / (3 * h)) < TOL
            assert abs(pt.g3.mpc
                       - (h - w) * (h - mp.conj(w)) / (3 * h)) < TOL

    def test_limit_toward_constant_solution(self):
        pt = from_H0(1 + mp.mpf(10) ** -15, digits=DIGITS)
        assert abs(pt.g3.mpc - 1) < mp.mpf(10) ** -13
        for f in (pt.g1, pt.g2, pt.g4):
            assert f.magnitude() < mp.mpf(10) ** -13

    def test_excluded_values_raise(self):
        with pytest.raises(ExcludedValueError):
            from_H0(0)
        with pytest.raises(ExcludedValueError, match=r"algebraic_cases\(\)\[0\]"):
            from_H0(1)
        with workdps(40):
            w = mp.exp(2j * mp.pi / 3)
            wb = mp.conj(w)
        with pytest.raises(ExcludedValueError, match=r"algebraic_cases\(\)\[1\]"):
            from_H0(w, digits=30)
        with pytest.raises(ExcludedValueError, match=r"algebraic_cases\(\)\[2\]"):
            from_H0(wb, digits=30)


class TestManifoldResiduals:
    def test_constant_solution_points_exact(self):
        for case in algebraic_cases(digits=DIGITS):
            for res in manifold_residuals(case.point):
                assert res == 0

    def test_off_surface_point(self):
        base = algebraic_cases(digits=DIGITS)[0].point
        bad = MonodromyPoint(s=base.s, g1=hp("0.3", DIGITS), g2=base.g2,
                             g3=base.g3, g4=base.g4)
        assert max(manifold_residuals(bad)) > mp.mpf("0.1")

    def test_raw_residuals_on_lifts(self):
        rng = random.Random(53)
        for _ in range(20):
            pt = from_H0(sample_h0(rng), digits=DIGITS)
            raw = lift(pt)
            assert max(manifold_residuals(raw)) < TOL

    def test_product_relation_breaks_off_surface(self):
        # the sixth raw residual is implied on the surface, so corrupting
        # one coordinate must show up there too
        pt = from_H0(mp.mpc(2, -1), digits=DIGITS)
        raw = lift(pt)
        bad = ManifoldPoint(s00=raw.s00, s0inf=hp("2.5", DIGITS),
                            s1inf=raw.s1inf, g11=raw.g11, g12=raw.g12,
                            g21=raw.g21, g22=raw.g22)
        res = manifold_residuals(bad)
        assert res[0] > mp.mpf("0.01")
        assert res[2] > mp.mpf("0.01")

    def test_unknown_type_raises(self):
        with pytest.raises(MonodromyError):
            manifold_residuals((1, 2, 3))


class TestLift:
    def test_default_gauge(self):
        pt = from_H0(mp.mpc(3, 2), digits=DIGITS)
        raw = lift(pt)
        assert raw.g11.re == 1 and raw.g11.im == 0

    def test_contraction_recovers_point(self):
        rng = random.Random(59)
        for g11 in (1, mp.mpf("0.37"), mp.mpc(1, 1)):
            pt = from_H0(sample_h0(rng), digits=DIGITS)
            raw = lift(pt, g11=g11)
            with workdps(DIGITS + 10):
                assert abs(1j * raw.g12.mpc * raw.g11.mpc - pt.g1.mpc) < TOL
                assert abs(1j * raw.g21.mpc * raw.g22.mpc - pt.g2.mpc) < TOL
                assert abs(raw.g11.mpc * raw.g22.mpc - pt.g3.mpc) < TOL
                assert abs(raw.g12.mpc * raw.g21.mpc - pt.g4.mpc) < TOL
                assert abs(raw.s00.mpc - 1j) < TOL

    def test_constant_solution_lifts(self):
        case1, case2, case3 = algebraic_cases(digits=DIGITS)
        with workdps(DIGITS + 10):
            r1 = lift(case1.point)
            assert r1.g12.magnitude() == 0 and r1.g21.magnitude() == 0
            assert abs(r1.g11.mpc * r1.g22.mpc - 1) < TOL
            r2 = lift(case2.point)
            assert r2.g11.magnitude() == 0
            assert abs(r2.g12.mpc * r2.g21.mpc + 1) < TOL
            assert abs(r2.g21.mpc * r2.g22.mpc - 1j) < TOL
            r3 = lift(case3.point)
            assert r3.g22.magnitude() == 0
            assert abs(r3.g12.mpc * r3.g21.mpc + 1) < TOL
            assert abs(r3.g11.mpc * r3.g12.mpc + 1j) < TOL

    def test_bad_gauge_raises(self):
        pt = from_H0(mp.mpc(3, 2), digits=DIGITS)
        with pytest.raises(MonodromyError):
            lift(pt, g11=0)

    def test_off_surface_degenerate_raises(self):
        zero = hp(0, DIGITS)
        bad = MonodromyPoint(s=zero, g1=zero, g2=zero, g3=zero,
                             g4=hp(-1, DIGITS))
        with pytest.raises(MonodromyError):
            lift(bad)


def _varpi(raw, k, lam):
    """Plane-wave amplitude at exponent lam, from a raw lift (a = 0)."""
    p = (mp.exp(1j * mp.pi * lam / 2) * mp.mpf("0.5") ** lam
         * mp.gamma(1 - 2 * lam) / mp.gamma(1 + 2 * lam)
         * mp.gamma(1 + lam) / lam)
    if k == 2:
        p *= mp.exp(-1j * mp.pi * lam)
    ga, gb = (raw.g11.mpc, raw.g21.mpc) if k == 1 else (raw.g12.mpc,
                                                        raw.g22.mpc)
    chi = ga * mp.exp(1j * mp.pi * (lam + mp.mpf("0.25"))) \
        + gb * mp.exp(-1j * mp.pi * (lam + mp.mpf("0.25")))
    return p * chi


class TestAmplitudeIdentities:
    def test_amplitude_prefactor_numbers(self):
        with workdps(45):
            lam = mp.mpf(1) / 6
            one = hp(1, 40)
            dummy = ManifoldPoint(s00=one, s0inf=one, s1inf=one, g11=one,
                                  g12=hp(0, 40), g21=hp(0, 40), g22=one)
            p_plus = _varpi(dummy, 1, lam)
            p_minus = _varpi(dummy, 1, -lam)
            # chi reduces to e^{i pi (lam + 1/4)} for this dummy, divide out
            p_plus /= mp.exp(1j * mp.pi * (lam + mp.mpf("0.25")))
            p_minus /= mp.exp(1j * mp.pi * (-lam + mp.mpf("0.25")))
            tol = mp.mpf(10) ** -38
            assert abs(p_plus
                       - 3 * mp.sqrt(2 * mp.pi) * mp.exp(1j * mp.pi / 12)) < tol
            assert abs(p_minus
                       + 2 * mp.sqrt(2 * mp.pi) * mp.exp(-1j * mp.pi / 12)) < tol
            assert abs(p_plus * p_minus + 12 * mp.pi) < tol

    def test_product_and_sum_identities(self):
        # gauge-independent combinations recover the initial value
        rng = random.Random(61)
        with workdps(50):
            lam = mp.mpf(1) / 6
            tol = mp.mpf(10) ** -30
            for gauge in (1, mp.mpf("0.37")):
                for _ in range(6):
                    h = sample_h0(rng)
                    raw = lift(from_H0(h, digits=40), g11=gauge)
                    w1p = _varpi(raw, 1, lam)
                    w1m = _varpi(raw, 1, -lam)
                    w2p = _varpi(raw, 2, lam)
                    w2m = _varpi(raw, 2, -lam)
                    scale = 1 + abs(h)
                    assert abs(w1m * w2m - 8 * mp.pi * h) < tol * scale
                    assert abs(w1p * w2p - 18 * mp.pi / h) < tol * scale
                    assert abs(w1m * w2p + w1p * w2m) < tol * scale
                    assert abs(w1p * w1m * w2p * w2m
                               - 144 * mp.pi ** 2) < tol * scale


def _sig_close(value, re_s, im_s, figs):
    with workdps(45):
        ref = mp.mpc(mp.mpf(re_s), mp.mpf(im_s))
        return mp.fabs(value.mpc - ref) / mp.fabs(ref) < mp.mpf(10) ** (1 - figs)


class TestNu1:
    def test_published_example_values(self):
        cases = [
            (mp.mpf(-1) / 30 - 1j, "regular", "-0.185823", "-0.0001892"),
            (mp.mpc(60, -100), "regular", "0.583254", "-0.162814"),
            (mp.mpc("-0.148", "0.191"), "singular", "0.0249933", "-0.329580"),
            (mp.mpc(-100, -300), "singular", "0.741160", "-0.300731"),
            (mp.mpc(0, -300), "singular", "0.732934", "-0.249469"),
            (mp.mpc("-0.2", "0.045"), "singular", "0.049319", "-0.459650"),
            (mp.mpc("-0.4", "0.78"), "singular", "-0.396664", "-0.198139"),
            (mp.mpc(-100, -200), "singular", "0.685841", "-0.323156"),
        ]
        for h, conv, re_s, im_s in cases:
            val = nu1(h, conv, digits=DIGITS)
            assert val.convention == conv
            assert _sig_close(val.value, re_s, im_s, 6)

    def test_exponential_relation(self):
        rng = random.Random(67)
        with workdps(DIGITS + 10):
            for _ in range(10):
                h = sample_h0(rng)
                g3 = (h * h + h + 1) / (3 * h)
                for conv in ("regular", "singular"):
                    try:
                        v = nu1(h, conv, digits=DIGITS)
                    except ConventionUnreachableError:
                        continue
                    assert abs(mp.exp(2 * mp.pi * v.value.mpc) - g3) \
                        < TOL * (1 + abs(g3))

    def test_conventions_differ_by_i(self):
        h = mp.mpc(60, 100)
        reg = nu1(h, "regular", digits=DIGITS)
        sing = nu1(h, "singular", digits=DIGITS)
        with workdps(DIGITS + 10):
            diff = reg.value.mpc - sing.value.mpc
            assert abs(diff - 1j) < TOL
        h2 = mp.mpc(60, -100)
        reg2 = nu1(h2, "regular", digits=DIGITS)
        sing2 = nu1(h2, "singular", digits=DIGITS)
        assert reg2.value.re == sing2.value.re
        assert reg2.value.im == sing2.value.im

    def test_kappa(self):
        v = nu1(mp.mpc(60, -100), "regular", digits=DIGITS)
        k = v.kappa
        with workdps(DIGITS + 10):
            assert k.re == -v.value.im
        assert k.im == v.value.re

    def test_unit_initial_value(self):
        v = nu1(1, "regular", digits=DIGITS)
        assert v.value.magnitude() == 0
        with pytest.raises(ConventionUnreachableError):
            nu1(1, "singular", digits=DIGITS)

    def test_unreachable_strips(self):
        with pytest.raises(ConventionUnreachableError):
            nu1(mp.mpc("-0.2", "0.045"), "regular", digits=DIGITS)
        with pytest.raises(ConventionUnreachableError):
            nu1(15, "singular", digits=DIGITS)
        # real negative g3 puts the exponent exactly on Im = -1/2
        with pytest.raises(ConventionUnreachableError):
            nu1(-1, "singular", digits=DIGITS)
        with pytest.raises(ConventionUnreachableError):
            nu1(-1, "regular", digits=DIGITS)

    def test_domain_errors(self):
        with pytest.raises(MonodromyError):
            nu1(mp.mpc(2, 1), "typo", digits=DIGITS)
        with pytest.raises(ExcludedValueError):
            nu1(0, "regular", digits=DIGITS)
        with workdps(40):
            w = mp.exp(2j * mp.pi / 3)
        with pytest.raises(ExcludedValueError):
            nu1(w, "regular", digits=30)


class TestAlgebraicCases:
    def test_exact_point_data(self):
        case1, case2, case3 = algebraic_cases(digits=DIGITS)
        assert case1.point.g3.re == 1 and case1.point.g4.magnitude() == 0
        assert case1.point.g1.magnitude() == 0
        assert case1.point.g2.magnitude() == 0
        # the determinant relation pins g4 = g3 - 1 = -1 in both other cases
        assert case2.point.g2.re == -1 and case2.point.g2.im == 0
        assert case2.point.g4.re == -1 and case2.point.g4.im == 0
        assert case2.point.g1.magnitude() == 0
        assert case2.point.g3.magnitude() == 0
        assert case3.point.g1.re == 1 and case3.point.g4.re == -1
        assert case3.point.g2.magnitude() == 0
        assert case3.point.g3.magnitude() == 0
        for case in (case1, case2, case3):
            assert case.point.s.magnitude() == 0
            assert case.s00.im == 1 and case.s00.re == 0

    def test_initial_values(self):
        case1, case2, case3 = algebraic_cases(digits=40)
        with workdps(50):
            w = mp.exp(2j * mp.pi / 3)
            assert abs(case1.H0.mpc - 1) == 0
            assert abs(case2.H0.mpc - w) < mp.mpf(10) ** -39
            assert abs(case3.H0.mpc - mp.conj(w)) < mp.mpf(10) ** -39

    def test_relations_hold_in_lifts(self):
        evaluators = {
            "g11": lambda r: r.g11.mpc,
            "g12": lambda r: r.g12.mpc,
            "g21": lambda r: r.g21.mpc,
            "g22": lambda r: r.g22.mpc,
            "g11*g22": lambda r: r.g11.mpc * r.g22.mpc,
            "g12*g21": lambda r: r.g12.mpc * r.g21.mpc,
            "g21*g22": lambda r: r.g21.mpc * r.g22.mpc,
            "g11*g12": lambda r: r.g11.mpc * r.g12.mpc,
        }
        for case in algebraic_cases(digits=DIGITS):
            for g11 in (1, mp.mpf("1.7")):
                raw = lift(case.point, g11=g11)
                with workdps(DIGITS + 10):
                    for label, expect in case.relations:
                        got = evaluators[label](raw)
                        assert abs(got - expect.mpc) < TOL, (case.label, label)

    def test_generic_map_limits_onto_cases(self):
        eps = mp.mpf(10) ** -12
        for case in algebraic_cases(digits=DIGITS):
            with workdps(DIGITS + 10):
                h = case.H0.mpc * (1 + eps) + eps * 1j
            pt = from_H0(h, digits=DIGITS)
            with workdps(DIGITS + 10):
                for got, ref in ((pt.g1, case.point.g1),
                                 (pt.g2, case.point.g2),
                                 (pt.g3, case.point.g3),
                                 (pt.g4, case.point.g4)):
                    assert abs(got.mpc - ref.mpc) < mp.mpf(10) ** -10


class TestMapVariants:
    def test_sym_maps_land_on_real_form(self):
        # oracle: residuals of the target surface equations
        rng = random.Random(71)
        for which in ("sym_g2neg", "sym_g2g1"):
            for _ in range(8):
                pt = from_H0(sample_h0(rng), digits=DIGITS)
                assert max(real_form_residuals(map_variants(pt, which))) < TOL
            for _ in range(8):
                pt = surface_point(rng)
                assert max(manifold_residuals(pt)) < TOL
                out = map_variants(pt, which)
                assert max(real_form_residuals(out)) < TOL * 10

    def test_round_trip(self):
        rng = random.Random(73)
        for which in ("sym_g2neg", "sym_g2g1"):
            pt = surface_point(rng)
            back = map_variants(map_variants(pt, which), which)
            with workdps(DIGITS + 10):
                for a, b in ((back.g1, pt.g1), (back.g2, pt.g2),
                             (back.g3, pt.g3), (back.g4, pt.g4),
                             (back.s, pt.s)):
                    assert abs(a.mpc - b.mpc) < TOL

    def test_three_by_three_data(self):
        rng = random.Random(79)
        for _ in range(6):
            h = sample_h0(rng)
            pt = from_H0(h, digits=DIGITS)
            out = map_variants(pt, "tz3x3", H0=h)
            with workdps(DIGITS + 10):
                assert abs(out.g3.mpc - (h + 1 + 1 / h) / 3) < TOL
                assert abs(out.g1.mpc - pt.g1.mpc) < TOL
                assert abs(out.g2.mpc + pt.g2.mpc) < TOL
            assert out.s.magnitude() == 0
            back = map_variants(out, "tz3x3")
            with workdps(DIGITS + 10):
                assert abs(back.g1.mpc - pt.g1.mpc) < TOL
                assert abs(back.g4.mpc - pt.g4.mpc) < TOL

    def test_three_by_three_constant_solution(self):
        pt = algebraic_cases(digits=DIGITS)[0].point
        out = map_variants(pt, "tz3x3", H0=1)
        assert out.g1.magnitude() == 0
        assert out.g2.magnitude() == 0
        assert out.g3.re == 1 and out.g3.im == 0
        assert out.s.magnitude() == 0

    def test_three_by_three_guards(self):
        pt = from_H0(mp.mpc(2, 1), digits=DIGITS)
        with pytest.raises(MonodromyError):
            map_variants(pt, "tz3x3")
        with pytest.raises(MonodromyError):
            map_variants(pt, "tz3x3", H0=mp.mpc(2, -1))
        rng = random.Random(83)
        tilted = surface_point(rng)
        with pytest.raises(MonodromyError):
            map_variants(tilted, "tz3x3", H0=mp.mpc(2, 1))

    def test_bad_arguments(self):
        pt = from_H0(mp.mpc(2, 1), digits=DIGITS)
        with pytest.raises(MonodromyError):
            map_variants(pt, "transpose")
        with pytest.raises(MonodromyError):
            map_variants((1, 2), "sym_g2neg")


class TestRhoFromS:
    def test_published_values(self):
        rho, rho1 = rho_from_s(0, digits=DIGITS)
        with workdps(DIGITS + 10):
            assert abs(rho.mpc - mp.mpf(1) / 6) < TOL
            assert abs(rho1.mpc - mp.mpf(1) / 3) < TOL
        rho, rho1 = rho_from_s(1, digits=DIGITS)
        with workdps(DIGITS + 10):
            assert abs(rho.mpc - mp.mpf("0.25")) < TOL
            assert abs(rho1.mpc - mp.mpf("0.25")) < TOL

    def test_fifth_of_turn(self):
        # oracle: forward-evaluate s = 1 + 2*cos(2*pi/5), whose orbit
        # exponent must come back as rho1 = 1/5
        with workdps(DIGITS + 10):
            s = 1 + 2 * mp.cos(2 * mp.pi / 5)
        rho, rho1 = rho_from_s(s, digits=DIGITS)
        with workdps(DIGITS + 10):
            assert abs(rho1.mpc - mp.mpf("0.2")) < TOL

    def test_defining_identity_complex(self):
        rng = random.Random(89)
        with workdps(DIGITS + 10):
            for _ in range(10):
                s = mp.mpc(rng.uniform(-4, 4), rng.uniform(-4, 4))
                if abs(s + 1) < 0.2 or abs(s - 3) < 0.2:
                    continue
                rho, rho1 = rho_from_s(s, digits=DIGITS)
                assert abs(mp.cos(2 * mp.pi * rho.mpc) - (1 - s) / 2) \
                    < TOL * (1 + abs(s))
                assert abs(rho.mpc + rho1.mpc - mp.mpf("0.5")) < TOL

    def test_real_branch_window(self):
        rng = random.Random(97)
        for _ in range(10):
            s = rng.uniform(-0.99, 2.99)
            rho, _ = rho_from_s(s, digits=DIGITS)
            assert rho.im == 0
            assert 0 < 2 * rho.re < 1

    def test_boundary_values_raise(self):
        for s in (-1, 3, mp.mpf(-1), mp.mpf(3)):
            with pytest.raises(BoundaryValueError):
                rho_from_s(s, digits=DIGITS)


class TestJson:
    def test_contracted_round_trip(self):
        pt = from_H0(mp.mpc("0.3", "2.1"), digits=DIGITS)
        back = point_from_json(point_to_json(pt))
        assert isinstance(back, MonodromyPoint)
        assert back == pt

    def test_raw_round_trip(self):
        raw = lift(from_H0(mp.mpc(-2, 1), digits=DIGITS))
        back = point_from_json(point_to_json(raw))
        assert isinstance(back, ManifoldPoint)
        assert back == raw

    def test_real_form_round_trip(self):
        out = map_variants(from_H0(mp.mpc(4, 1), digits=DIGITS), "sym_g2neg")
        back = point_from_json(point_to_json(out))
        assert isinstance(back, RealFormPoint)
        assert back == out

    def test_nu1_round_trip(self):
        for conv in ("regular", "singular"):
            v = nu1(mp.mpc(60, -100), conv, digits=DIGITS)
            back = nu1_from_json(nu1_to_json(v))
            assert back == v
            assert back.convention == conv

    def test_bad_payloads(self):
        with pytest.raises(MonodromyError):
            point_from_json(json.dumps({"kind": "mystery"}))
        with pytest.raises(MonodromyError):
            point_to_json("not a point")
        v = nu1(mp.mpc(60, -100), "regular", digits=DIGITS)
        obj = json.loads(nu1_to_json(v))
        obj["convention"] = "typo"
        with pytest.raises(MonodromyError):
            nu1_from_json(json.dumps(obj))
