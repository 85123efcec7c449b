"""Hypergeometric polynomial tests.

The independent oracle used throughout is the defining finite sum with
pochhammer factors computed from scratch (plain products), so it shares no
code with the iterative construction in the module.
"""

import math
from fractions import Fraction

import pytest

from gpiverify.gausshyp import (
    RELATIONS,
    contiguous_residual,
    hyp_poly,
    hyp_poly_symbolic_m3,
    hyp_value_at_one,
    pochhammer,
)
from gpiverify.polyring import poly_parse

HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)


def oracle_coefficient(m2: int, m3: int, c: Fraction, j: int) -> Fraction:
    """(-m2)_j (-m3)_j / ((c)_j j!) by direct products."""

    def poch(x, n):
        out = Fraction(1)
        for i in range(n):
            out *= x + i
        return out

    return poch(Fraction(-m2), j) * poch(Fraction(-m3), j) / (poch(c, j) * math.factorial(j))


class TestHypPoly:
    def test_two_term_series(self):
        # by hand: (-1)_1 (-1)_1 / ((1/2)_1 1!) = 1/(1/2) = 2
        assert hyp_poly(1, 1, HALF) == poly_parse("1 + 2*z")
        # (-1)_1 (-2)_1 / (1/2) = 2/(1/2) = 4; the j=2 term dies with (-1)_2 = 0
        assert hyp_poly(1, 2, HALF) == poly_parse("1 + 4*z")

    def test_at_zero(self):
        for m2, m3 in [(0, 0), (3, 7), (12, 12)]:
            assert hyp_poly(m2, m3, HALF).eval({"z": 0}) == 1

    @pytest.mark.parametrize("c", [HALF, THREE_HALVES, Fraction(5, 2)])
    def test_against_series_oracle(self, c):
        for m2, m3 in [(0, 5), (1, 1), (2, 3), (4, 4), (5, 9), (7, 2)]:
            p = hyp_poly(m2, m3, c)
            assert p.degree("z") == min(m2, m3) or (min(m2, m3) == 0 and p == 1)
            for j in range(min(m2, m3) + 1):
                assert p.coeff((j,)) == oracle_coefficient(m2, m3, c, j), (m2, m3, j)

    def test_all_coefficients_positive(self):
        for m2 in range(0, 9):
            for m3 in range(m2, 9):
                for c in (HALF, THREE_HALVES):
                    assert all(co > 0 for co in hyp_poly(m2, m3, c).coefficients())

    def test_symmetry(self):
        for m2, m3 in [(1, 4), (2, 7), (3, 3)]:
            assert hyp_poly(m2, m3, HALF) == hyp_poly(m3, m2, HALF)


class TestSymbolic:
    def test_examples(self):
        assert hyp_poly_symbolic_m3(1, HALF) == poly_parse("1 + 2*m3*z", vars=("z", "m3"))
        assert hyp_poly_symbolic_m3(1, THREE_HALVES) == poly_parse(
            "1 + 2/3*m3*z", vars=("z", "m3")
        )

    def test_specialization_reproduces_numeric(self):
        for m2 in range(0, 8):
            sym = hyp_poly_symbolic_m3(m2, HALF)
            for n in (m2, m2 + 1, m2 + 5, 12):
                assert sym.substitute("m3", n) == hyp_poly(m2, n, HALF), (m2, n)
        sym = hyp_poly_symbolic_m3(3, THREE_HALVES)
        assert sym.substitute("m3", 6) == hyp_poly(3, 6, THREE_HALVES)

    def test_coefficient_degrees(self):
        sym = hyp_poly_symbolic_m3(4, HALF)
        assert sym.degree("z") == 4
        # the z^j coefficient has degree j in m3
        for exps, _ in sym.iter_terms():
            zj, m3j = exps
            assert m3j <= zj


class TestValueAtOne:
    def test_examples(self):
        assert hyp_value_at_one(1, 1, HALF) == 3  # 1 + 2z at z = 1
        assert hyp_value_at_one(1, 1, THREE_HALVES) == Fraction(5, 3)
        assert hyp_value_at_one(0, 9, HALF) == 1

    def test_closed_form_equals_poly_eval(self):
        for m2 in range(0, 13):
            for m3 in range(0, 13):
                for c in (HALF, THREE_HALVES):
                    assert hyp_value_at_one(m2, m3, c) == hyp_poly(m2, m3, c).eval(
                        {"z": 1}
                    ), (m2, m3, c)

    def test_pochhammer(self):
        assert pochhammer(HALF, 3) == Fraction(1, 2) * Fraction(3, 2) * Fraction(5, 2)
        assert pochhammer(Fraction(-2), 3) == 0
        assert pochhammer(Fraction(7), 0) == 1


class TestContiguousRelations:
    def test_hand_checked_derivative_case(self):
        # m2 = m3 = 1, c = 1/2: F = 1 + 2z, F' = 2, F(a+1) = 1, a = -1
        # z*F' - a[F(a+1) - F] = 2z - (-1)(1 - 1 - 2z) = 2z - 2z = 0
        assert contiguous_residual("derivative", 1, 1, HALF).is_zero()

    def test_rel38_case(self):
        assert contiguous_residual("rel38", 2, 3, HALF).is_zero()

    def test_rel31_trivial_case(self):
        assert contiguous_residual("rel31", 0, 0, HALF).is_zero()

    def test_all_relations_sweep(self):
        for rel in RELATIONS:
            for m2 in range(0, 8):
                for m3 in range(m2, 8):
                    for c in (HALF, THREE_HALVES):
                        res = contiguous_residual(rel, m2, m3, c)
                        assert res.is_zero(), (rel, m2, m3, c)

    def test_unknown_relation(self):
        with pytest.raises(ValueError):
            contiguous_residual("rel99", 1, 1, HALF)
