"""Tests for the inequality objects: parameters, H, S, h, f, g, and the
exact/interval predicates."""

import math
import random
from fractions import Fraction

import pytest

from gpiverify.exactnum import RationalInterval
from gpiverify.inequality import (
    G_at_one,
    G_value,
    H_at_one,
    H_value,
    QuadraticForm,
    S_poly,
    TRUNCATION_BOUND,
    check_gpi,
    check_gpi_real,
    check_mri,
    check_mri_real,
    default_scan_range,
    f_truncated_poly,
    find_mri_real_violation,
    find_mri_violation,
    g_poly,
    h_compare,
    h_lower_bound_check,
    h_poly,
    hfri_check,
    in_coverage_set,
    make_params,
    make_real_params,
    mri_ratio,
    s_poly_symbolic,
    scan,
)
from gpiverify.moments import GaussianPair


class TestParams:
    def test_examples(self):
        p = make_params(1, 1)
        assert p.r == 10 and p.t == Fraction(4, 49) and not p.in_s
        p = make_params(2, 3)
        assert p.r == 36 and p.t == Fraction(24, 899) and p.in_s
        assert make_params(1, 5).in_s

    def test_coverage_set(self):
        assert not in_coverage_set(1, 4)
        assert in_coverage_set(1, 5)
        assert not in_coverage_set(2, 2)
        assert in_coverage_set(2, 3)
        assert in_coverage_set(3, 3)
        assert in_coverage_set(9, 5)  # order-insensitive

    def test_t_between_inverse_powers(self):
        for m2 in range(1, 13):
            for m3 in range(m2, 13):
                p = make_params(m2, m3)
                assert 1 / (p.r * p.r) < p.t < 1 / p.r

    def test_sum_of_squares_identity(self):
        for m2 in range(1, 13):
            for m3 in range(m2, 13):
                assert (m2 + m3 + 1) ** 2 == (m3 - m2) ** 2 + (2 * m2 + 1) * (2 * m3 + 1)

    def test_requires_positive_indices(self):
        with pytest.raises(ValueError):
            make_params(0, 3)


class TestQuadraticForm:
    def test_identity_on_random_triples(self):
        rng = random.Random(20240801)
        for _ in range(100):
            m2 = rng.randint(1, 12)
            m3 = rng.randint(m2, 14)
            z = Fraction(rng.randint(1, 999), 1000)
            QuadraticForm.build(make_params(m2, m3), z)  # raises on mismatch

    def test_reciprocal_route_agrees_with_h(self):
        # (-beta + sqrt(disc))/(1-z) encloses 1/H(z): the product with H is 1
        params = make_params(2, 3)
        for z in (Fraction(1, 3), Fraction(3, 5), Fraction(9, 10)):
            qf = QuadraticForm.build(params, z)
            inv = qf.reciprocal_bound_interval(Fraction(1, 10**9))
            h = H_value(params, z, Fraction(1, 10**9))
            product = inv * h
            assert product.lo <= 1 <= product.hi


class TestH:
    def test_closed_form_at_one(self):
        assert H_at_one(make_params(1, 1)) == Fraction(6, 11)
        assert H_at_one(make_params(2, 3)) == Fraction(12, 37)

    def test_interval_collapses_at_one(self):
        # the radicand is a perfect square at z = 1
        for m2, m3 in [(1, 1), (2, 3), (5, 12)]:
            params = make_params(m2, m3)
            iv = H_value(params, Fraction(1), Fraction(1, 10**12))
            assert iv == RationalInterval.point(H_at_one(params))

    def test_interval_width_and_float_agreement(self):
        params = make_params(3, 7)
        z = Fraction(1, 5)
        iv = H_value(params, z, Fraction(1, 10**9))
        assert iv.width <= Fraction(1, 10**9)
        r = float(params.r)
        d = (3 - 7) ** 2 * (r * 0.2 - 1) ** 2 + (r - 1) ** 3 * 0.2
        h_float = (11 * (r * 0.2 - 1) + math.sqrt(d)) / (r * r * 0.2 - 1)
        assert float(iv.lo) <= h_float <= float(iv.hi) or abs(h_float - float(iv.lo)) < 1e-9

    def test_domain_error(self):
        params = make_params(1, 1)
        with pytest.raises(ValueError):
            H_value(params, Fraction(1, 200))  # below 1/r^2 = 1/100

    def test_h_compare_consistency(self):
        params = make_params(4, 6)
        z = Fraction(1, 7)
        iv = H_value(params, z, Fraction(1, 10**12))
        for theta in (Fraction(1, 7), Fraction(1, 2), Fraction(2, 3), Fraction(5)):
            sign = h_compare(params, z, theta)
            if sign > 0:
                assert iv.hi > theta
            elif sign < 0:
                assert iv.lo < theta


class TestLemmaBounds:
    def test_exact_checks(self):
        params = make_params(8, 8)
        assert h_lower_bound_check(params, 1 / params.r, "half").status == "holds"
        assert (
            h_lower_bound_check(params, TRUNCATION_BOUND / 64, "seventh").status
            == "holds"
        )

    def test_small_params_hold_too(self):
        params = make_params(1, 1)
        z = Fraction(1, 100) + Fraction(1, 1000)  # slightly above 1/r^2
        assert h_lower_bound_check(params, z, "half").status == "holds"

    def test_domain_enforced(self):
        params = make_params(8, 8)
        with pytest.raises(ValueError):
            h_lower_bound_check(params, Fraction(1, 2), "half")
        with pytest.raises(ValueError):
            h_lower_bound_check(params, 1 / (params.r * 2), "seventh")


class TestSPoly:
    def test_value_at_zero(self):
        # (2m2+1)(2m3+1) - 2(m2+m3+1) + 1
        assert S_poly(make_params(1, 5)).eval({"z": 0}) == 20
        assert S_poly(make_params(2, 3)).eval({"z": 0}) == 24

    def test_degree(self):
        for m2, m3 in [(1, 5), (2, 3), (4, 9)]:
            assert S_poly(make_params(m2, m3)).degree("z") == 2 * m2 + 1

    def test_positive_inside_for_covered_pair(self):
        assert S_poly(make_params(2, 3)).eval({"z": Fraction(1, 2)}) > 0

    def test_sign_at_one_tracks_mri_boundary(self):
        # (1,1) violates the ratio inequality near z = 1; its S(1) is negative
        assert S_poly(make_params(1, 1)).eval({"z": 1}) < 0
        assert S_poly(make_params(1, 5)).eval({"z": 1}) > 0

    def test_symbolic_specialization(self):
        for m2 in (1, 2, 3):
            sym = s_poly_symbolic(m2)
            for m3 in (m2, m2 + 3, 9):
                assert sym.substitute("m3", m3) == S_poly(make_params(m2, m3))


class TestHPoly:
    def test_printed_spot_values(self):
        h1 = h_poly(1)
        assert h1.eval({"b": 0, "c": 0}) == 20  # 180/9
        assert h1.coeff({"b": 6, "c": 6}) == Fraction(8, 3)
        assert h_poly(2).coeff({"b": 10, "c": 10}) == Fraction(32, 15)

    def test_even_exponents_only(self):
        for m2 in range(1, 8):
            assert all(
                all(e % 2 == 0 for e in exps) for exps in h_poly(m2).terms
            ), m2

    def test_range_enforced(self):
        with pytest.raises(ValueError):
            h_poly(0)
        with pytest.raises(ValueError):
            h_poly(8)

    def test_h_encodes_s_at_rational_points(self):
        # h_{m2}(b, c) = (1+c^2)^(2m2+1) S(c^2/(1+c^2)) with m3 = b^2 + offset
        for m2, b in [(1, 0), (2, 1), (3, 2)]:
            offset = {1: 5, 2: 3}.get(m2, m2)
            m3 = b * b + offset
            params = make_params(m2, m3)
            for c in (Fraction(1, 2), Fraction(2)):
                z = c * c / (1 + c * c)
                lhs = h_poly(m2).eval({"b": b, "c": c})
                rhs = (1 + c * c) ** (2 * m2 + 1) * S_poly(params).eval({"z": z})
                assert lhs == rhs, (m2, b, c)


class TestFAndG:
    def test_f_at_origin_slice(self):
        f = f_truncated_poly()
        assert f.eval({"x2": 8, "x3": 8, "u": 0}) == 2**50 * math.factorial(17) ** 2

    def test_g_equals_f_at_c_zero(self):
        g = g_poly()
        f = f_truncated_poly()
        assert g.eval({"a": 0, "b": 0, "c": 0}) == f.eval({"x2": 8, "x3": 8, "u": 0})

    def test_g_structure(self):
        g = g_poly()
        assert g.degree("a") == 16 and g.degree("b") == 16 and g.degree("c") == 18
        assert all(all(e % 2 == 0 for e in exps) for exps in g.terms)
        assert all(coeff >= 0 for coeff in g.coefficients())

    def test_g_symmetric_in_a_b(self):
        g = g_poly()
        for (ea, eb, ec), coeff in g.terms.items():
            assert g.coeff((eb, ea, ec)) == coeff


class TestEquivalenceChain:
    """The cleared-denominator polynomial S and the product-form inequality

        z [(r-1) f2 - 1]^2  <  [(2m2+1) F(-m2-1,-m3;1/2;z) - 1]
                               * [(2m3+1) F(-m2,-m3-1;1/2;z) - 1]

    certify the same ratio inequality; their margins must agree in sign.
    """

    COVERED = [(1, 5), (2, 3), (3, 3), (5, 9)]

    @staticmethod
    def _product_form_margin(m2, m3, z):
        from gpiverify.gausshyp import HALF, THREE_HALVES, hyp_poly

        rm1 = (2 * m2 + 1) * (2 * m3 + 1)
        f2 = hyp_poly(m2, m3, THREE_HALVES).eval({"z": z})
        left = z * (rm1 * f2 - 1) ** 2
        right = ((2 * m2 + 1) * hyp_poly(m2 + 1, m3, HALF).eval({"z": z}) - 1) * (
            (2 * m3 + 1) * hyp_poly(m2, m3 + 1, HALF).eval({"z": z}) - 1
        )
        return right - left

    def test_sign_agreement_at_random_points(self):
        rng = random.Random(333)
        for m2, m3 in self.COVERED:
            params = make_params(m2, m3)
            s = S_poly(params)
            lo = 1 / (params.r * params.r)
            for _ in range(50):
                z = lo + Fraction(rng.randint(1, 9999), 10000) * (1 - lo)
                s_val = s.eval({"z": z})
                chain_val = self._product_form_margin(m2, m3, z)
                assert s_val > 0 and chain_val > 0, (m2, m3, z)

    def test_s_is_sufficient_not_necessary(self):
        # S comes from a squaring step, so it is a one-way certificate: for
        # the uncovered pair (1,1) near z = 1, S is negative while the exact
        # product-form margin stays nonnegative (zero only at z = 1)
        z = Fraction(97, 100)
        assert S_poly(make_params(1, 1)).eval({"z": z}) < 0
        assert self._product_form_margin(1, 1, z) > 0
        assert self._product_form_margin(1, 1, Fraction(1)) == 0


class TestMriGpiBridge:
    def test_strict_mri_implies_gpi_on_grid(self):
        # wherever the ratio bound holds strictly, the product inequality
        # holds for every sampled coefficient a at the same correlation
        params = make_params(2, 3)
        for kx in range(-10, 11):
            x = Fraction(kx, 10)
            mri = check_mri(params, GaussianPair.unit(x))
            assert mri.status == "holds"
            if not mri.metadata["equality"]:
                for ka in range(-8, 9):
                    a = Fraction(ka, 4)
                    gpi = check_gpi(params, a, x)
                    assert gpi.status == "holds", (a, x)


class TestCheckGpi:
    def test_known_margin(self):
        rep = check_gpi(make_params(1, 1), Fraction(-1), Fraction(1, 2))
        assert rep.status == "holds" and rep.margin == Fraction(1, 2)

    def test_degenerate_equality(self):
        rep = check_gpi(make_params(1, 1), Fraction(-1), Fraction(1))
        assert rep.status == "holds" and rep.margin == 0 and rep.metadata["equality"]

    def test_covered_pair_point(self):
        rep = check_gpi(make_params(2, 5), Fraction(3, 2), Fraction(-3, 4))
        assert rep.status == "holds" and rep.margin > 0

    def test_domain(self):
        with pytest.raises(ValueError):
            check_gpi(make_params(1, 1), Fraction(0), Fraction(3, 2))


class TestCheckMri:
    def test_known_violation_at_full_correlation(self):
        params = make_params(1, 1)
        pair = GaussianPair.unit(Fraction(1))
        assert mri_ratio(params, pair) == Fraction(5, 9)
        assert H_at_one(params) == Fraction(6, 11)
        rep = check_mri(params, pair)
        assert rep.status == "fails"

    def test_independence_equality(self):
        rep = check_mri(make_params(1, 5), GaussianPair.unit(0))
        assert rep.status == "holds" and rep.metadata["equality"]

    def test_branch_selection_exact(self):
        rep = check_mri(make_params(2, 3), GaussianPair.unit(Fraction(1, 4)))
        assert rep.status == "holds"
        assert rep.witnesses[0]["branch"] == "ratio-bound"  # 1/16 > 24/899
        rep2 = check_mri(make_params(2, 3), GaussianPair.unit(Fraction(1, 8)))
        assert rep2.witnesses[0]["branch"] == "covariance"  # 1/64 < 24/899

    def test_non_unit_variances(self):
        pair = GaussianPair(Fraction(9, 4), Fraction(4), Fraction(3, 2))
        rep = check_mri(make_params(3, 3), pair)
        assert rep.status == "holds"

    def test_violation_searches(self):
        assert find_mri_violation(make_params(1, 1)).metadata["found"]
        assert find_mri_violation(make_params(2, 2)).metadata["found"]
        assert not find_mri_violation(make_params(3, 3), steps=40).metadata["found"]

    def test_exact_verdict_agrees_with_interval_route(self):
        # the squared-radical decision must match a high-precision enclosure
        # of bound - lhs whenever the enclosure resolves the sign
        rng = random.Random(909)
        width = Fraction(1, 10**30)
        for _ in range(40):
            m2 = rng.randint(1, 6)
            m3 = rng.randint(m2, 9)
            x = Fraction(rng.randint(1, 99), 100)
            params = make_params(m2, m3)
            pair = GaussianPair.unit(x)
            report = check_mri(params, pair, width)
            lhs = mri_ratio(params, pair)
            if x * x <= params.t:
                bound_iv = RationalInterval.point(abs(pair.cov))
            else:
                bound_iv = H_value(params, x * x, width) * abs(pair.cov)
            diff = bound_iv - lhs
            if diff.sign() == "positive":
                assert report.status == "holds"
            elif diff.sign() == "negative":
                assert report.status == "fails"

    def test_scans_hold_for_other_large_pairs(self):
        for pair in [(8, 12), (10, 10), (12, 12)]:
            params = make_params(*pair)
            for predicate in ("g-negative", "h-deriv", "h-deriv-reduced"):
                assert scan(predicate, params, grid_n=11).status == "holds", (pair, predicate)


class TestHfri:
    def test_examples(self):
        assert hfri_check(make_params(1, 5), Fraction(1, 2)).status == "holds"
        assert hfri_check(make_params(3, 3), Fraction(999, 1000)).status == "holds"

    def test_boundary_excluded(self):
        with pytest.raises(ValueError):
            hfri_check(make_params(1, 1), Fraction(1))


class TestG:
    def test_exact_values_at_one(self):
        assert G_at_one(make_params(1, 1)) == Fraction(1, 11)
        assert G_at_one(make_params(8, 8)) < 0

    def test_sign_matches_closed_form_factor(self):
        # G(1) < 0 iff (2m2-1)(2m3-1) > 2
        for m2, m3 in [(1, 1), (1, 2), (2, 2), (3, 5), (8, 12)]:
            sign_factor = (2 * m2 - 1) * (2 * m3 - 1) - 2
            value = G_at_one(make_params(m2, m3))
            assert (value < 0) == (sign_factor > 0), (m2, m3)

    def test_interval_negative_in_tail_regime(self):
        params = make_params(8, 10)
        z = TRUNCATION_BOUND / 80 + Fraction(1, 50)
        iv = G_value(params, z, Fraction(1, 10**6))
        assert iv.sign() == "negative"

    def test_interval_consistent_at_one(self):
        params = make_params(8, 8)
        iv = G_value(params, Fraction(1), Fraction(1, 10**9))
        exact = G_at_one(params)
        assert iv.contains(exact)


class TestScan:
    def test_default_ranges(self):
        params = make_params(8, 8)
        lo, hi, lo_open, hi_open = default_scan_range("h-seventh", params)
        assert lo == 1 / params.r and hi == TRUNCATION_BOUND / 64
        assert lo_open and not hi_open

    def test_exact_scans_hold(self):
        assert scan("hfri", make_params(2, 3), grid_n=31).status == "holds"
        assert scan("h-half", make_params(8, 8), grid_n=21).status == "holds"
        assert scan("h-seventh", make_params(8, 8), grid_n=21).status == "holds"

    def test_interval_scans_hold(self):
        assert scan("g-negative", make_params(8, 8), grid_n=11).status == "holds"
        assert scan("h-deriv", make_params(8, 8), grid_n=11).status == "holds"
        assert scan("h-deriv-reduced", make_params(8, 8), grid_n=11).status == "holds"

    def test_failure_witness(self):
        # S_{1,1} goes negative near z = 1, so the scan must report it
        rep = scan("hfri", make_params(1, 1), grid_n=41)
        assert rep.status == "fails"
        assert rep.witnesses and rep.witnesses[0]["verdict"] == "fails"

    def test_open_endpoints_nudged(self):
        rep = scan("hfri", make_params(2, 3), grid_n=11)
        params = make_params(2, 3)
        assert rep.metadata["z_lo"] > 1 / (params.r * params.r)
        assert rep.metadata["z_hi"] < 1

    def test_unknown_predicate(self):
        with pytest.raises(ValueError):
            scan("nope", make_params(2, 3))

    def test_refinement_gives_up_honestly(self):
        from gpiverify.inequality import _refined_sign

        calls = []

        def evaluate(w):
            calls.append(w)
            return RationalInterval(Fraction(-1), Fraction(1))

        verdict, _ = _refined_sign(evaluate, Fraction(1, 10), 5, "positive")
        assert verdict == "indeterminate"
        assert len(calls) == 6  # initial width plus five halvings
        assert calls[-1] == Fraction(1, 10) / 32


class TestRealPath:
    def test_margin_positive_in_proposition_regime(self):
        rp = make_real_params(13.0, 13.0)
        rep = check_gpi_real(rp, -1.0, 0.5)
        assert rep.status == "holds" and rep.margin > 1.0

    def test_domain(self):
        rp = make_real_params(13.0, 13.0)
        with pytest.raises(ValueError):
            check_gpi_real(rp, 0.0, 1.0)

    def test_a_zero_matches_direct_series(self):
        from gpiverify.moments import gauss_hyp_real

        rp = make_real_params(5.0, 7.0)
        x = 0.4
        rep = check_gpi_real(rp, 0.0, x)
        direct = (rp.y2 + 1.0) * gauss_hyp_real(-rp.y3 / 2, -rp.y2 / 2 - 1, 0.5, x * x) - 1.0
        assert abs(rep.margin - direct) < 1e-12

    def test_real_params_match_integer_case(self):
        rp = make_real_params(4.0, 6.0)
        p = make_params(2, 3)
        assert rp.r == float(p.r)
        assert abs(rp.t - float(p.t)) < 1e-15

    def test_real_mri_matches_exact_verdicts(self):
        # float path agrees with the exact integer path away from the margin
        rp = make_real_params(2.0, 10.0)  # (m2, m3) = (1, 5)
        exact_params = make_params(1, 5)
        for x in (0.3, 0.6, 0.9):
            float_rep = check_mri_real(rp, x)
            exact_rep = check_mri(
                exact_params, GaussianPair.unit(Fraction(x).limit_denominator(10))
            )
            assert float_rep.status == "holds" == exact_rep.status

    def test_violation_found_for_known_gap(self):
        rep = find_mri_real_violation(make_real_params(4.0, 4.3))
        assert rep.metadata["found"]
        assert 0 < rep.witnesses[0]["x"] < 1

    def test_no_violation_in_proposition_regime(self):
        rep = find_mri_real_violation(make_real_params(12.0, 12.0), steps=25)
        assert not rep.metadata["found"]
