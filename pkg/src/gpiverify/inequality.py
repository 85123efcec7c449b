"""Inequality objects and predicates for the product-moment verification.

This module materializes, with exact rational arithmetic wherever possible:

* the parameter family r = (2 m2 + 1)(2 m3 + 1) + 1, the threshold t, and the
  bound function H(z) = [(m2+m3+1)(rz-1) + sqrt(D(z))] / (r^2 z - 1) with
  radicand D(z) = ((m3-m2)(rz-1))^2 + (r-1)^3 z;
* the cleared-denominator positivity polynomial S(z) whose strict positivity
  implies the hypergeometric-ratio inequality (HFRI);
* the bivariate polynomials h_1 .. h_7 obtained from S by the substitutions
  m3 -> b^2 + offset and z -> c^2/(1+c^2);
* the truncated three-variable polynomial f and its positified form g under
  u -> (11/4) c^2/(1+c^2), x2 -> a^2 + 8, x3 -> b^2 + 8;
* exact checks of the product inequality (GPI) and the moment-ratio
  inequality (MRI), plus interval-based scans for the predicates whose
  statements involve the square root in H.

Inequalities that reduce to polynomial sign conditions are decided exactly by
isolating the radical and comparing squares (cmp_sqrt); only genuinely
radical-valued scans use interval enclosures, with automatic width refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import (
    RationalInterval,
    RationalLike,
    SIGN_NEGATIVE,
    SIGN_POSITIVE,
    cmp_sqrt,
    rational,
    sqrt_enclosure,
)
from .gausshyp import HALF, THREE_HALVES, hyp_poly, hyp_poly_symbolic_m3, hyp_value_at_one
from .moments import (
    GaussianPair,
    TripleSpec,
    double_factorial_odd,
    even_moment,
    gauss_hyp_real,
    odd_moment,
    triple_even_moment,
)
from .polyring import MultiPoly
from .report import (
    FAILS,
    HOLDS,
    INDETERMINATE,
    CheckReport,
)

#: split point of the large-index case analysis: below TRUNCATION_BOUND/(m2*m3)
#: the truncated-series route (f, g positivity) applies, above it G is scanned
TRUNCATION_BOUND = Fraction(11, 4)

#: factorial scale making every coefficient of the truncated polynomial f an
#: integer: (2j+1)! divides it for all truncation indices j <= 4
FACT17 = math.factorial(17)

DEFAULT_WIDTH = Fraction(1, 10**6)
DEFAULT_REFINE_MAX = 20

#: float-path guard: series results within this of zero are indeterminate
REAL_MARGIN_GUARD = 1e-9

SCAN_PREDICATES = (
    "hfri",
    "g-negative",
    "h-half",
    "h-seventh",
    "h-deriv",
    "h-deriv-reduced",
)


# ----------------------------------------------------------------------
# parameters
# ----------------------------------------------------------------------


def in_coverage_set(m2: int, m3: int) -> bool:
    """Membership in the covered parameter set: (1, >=5), (2, >=3) and all
    pairs with both indices >= 3; order-insensitive."""
    lo, hi = min(m2, m3), max(m2, m3)
    if lo == 1:
        return hi >= 5
    if lo == 2:
        return hi >= 3
    return lo >= 3


@dataclass(frozen=True)
class GpiParams:
    """Exact parameter bundle for an exponent pair (m2, m3), both >= 1."""

    m2: int
    m3: int
    r: Fraction
    t: Fraction
    in_s: bool

    @property
    def msum(self) -> Fraction:
        """m2 + m3 + 1 as an exact rational."""
        return Fraction(self.m2 + self.m3 + 1)

    @property
    def mdiff_sq(self) -> Fraction:
        return Fraction((self.m3 - self.m2) ** 2)


def make_params(m2: int, m3: int) -> GpiParams:
    if m2 < 1 or m3 < 1:
        raise ValueError("make_params requires m2, m3 >= 1")
    r = Fraction((2 * m2 + 1) * (2 * m3 + 1) + 1)
    t = 1 / (r + (1 + Fraction(1, 2 * m2)) * (1 + Fraction(1, 2 * m3)))
    if not (1 / (r * r) < t < 1 / r):
        raise AssertionError(f"parameter identity 1/r^2 < t < 1/r failed for ({m2},{m3})")
    return GpiParams(m2, m3, r, t, in_coverage_set(m2, m3))


@dataclass(frozen=True)
class RealGpiParams:
    """Float parameter bundle for real exponents y2, y3 > 0."""

    y2: float
    y3: float
    r: float
    t: float


def make_real_params(y2: float, y3: float) -> RealGpiParams:
    if y2 <= 0 or y3 <= 0:
        raise ValueError("make_real_params requires y2, y3 > 0")
    r = (y2 + 1.0) * (y3 + 1.0) + 1.0
    t = 1.0 / (r + (1.0 + 1.0 / y2) * (1.0 + 1.0 / y3))
    return RealGpiParams(y2, y3, r, t)


@dataclass(frozen=True)
class QuadraticForm:
    """Coefficients of the quadratic (1-z) y^2 + 2 beta y + gamma whose
    positivity at the hypergeometric ratio y restates the target inequality.

    Construction validates the exact discriminant identity
    beta^2 - (1-z) gamma = ((m3-m2)(1-rz)/(r-1))^2 + (r-1) z.
    """

    beta: Fraction
    gamma: Fraction
    leading: Fraction  # = 1 - z

    @staticmethod
    def build(params: GpiParams, z: RationalLike) -> "QuadraticForm":
        z = rational(z)
        r = params.r
        rm1 = r - 1
        beta = -params.msum * (1 - r * z) / rm1
        gamma = (1 - r * r * z) / rm1
        lhs = beta * beta - (1 - z) * gamma
        rhs = ((params.m3 - params.m2) * (1 - r * z) / rm1) ** 2 + rm1 * z
        if lhs != rhs:
            raise AssertionError(f"discriminant identity failed at z={z}")
        return QuadraticForm(beta, gamma, 1 - z)

    def reciprocal_bound_interval(self, width: RationalLike = DEFAULT_WIDTH) -> RationalInterval:
        """Enclosure of (-beta + sqrt(beta^2 - (1-z) gamma)) / (1-z), an
        independent route to 1/H(z); requires z < 1."""
        if self.leading == 0:
            raise ValueError("undefined at z = 1")
        disc = self.beta * self.beta - self.leading * self.gamma
        root = sqrt_enclosure(disc, rational(width) * abs(self.leading))
        return (root - self.beta) / RationalInterval.point(self.leading)


# ----------------------------------------------------------------------
# the bound function H
# ----------------------------------------------------------------------


def h_radicand(params: GpiParams, z: Fraction) -> Fraction:
    """D(z) = ((m3 - m2)(rz - 1))^2 + (r - 1)^3 z."""
    r = params.r
    return params.mdiff_sq * (r * z - 1) ** 2 + (r - 1) ** 3 * z


def _check_h_domain(params: GpiParams, z: Fraction) -> None:
    if not (1 / (params.r * params.r) < z <= 1):
        raise ValueError(f"H is defined for 1/r^2 < z <= 1; got z={z}")


def H_value(
    params: GpiParams, z: RationalLike, width: RationalLike = DEFAULT_WIDTH
) -> RationalInterval:
    """Rigorous enclosure of H(z) of at most the requested width."""
    z = rational(z)
    _check_h_domain(params, z)
    r = params.r
    denom = r * r * z - 1
    root = sqrt_enclosure(h_radicand(params, z), rational(width) * denom)
    return (root + params.msum * (r * z - 1)) / RationalInterval.point(denom)


def H_at_one(params: GpiParams) -> Fraction:
    """H(1) = 2 (m2 + m3 + 1) / (r + 1), exact."""
    return 2 * params.msum / (params.r + 1)


def h_compare(params: GpiParams, z: RationalLike, threshold: RationalLike) -> int:
    """Exact sign of H(z) - threshold, by isolating the radical.

    H(z) > c  <=>  sqrt(D) > c (r^2 z - 1) - (m2+m3+1)(r z - 1), decided with
    integer square-root comparisons only.
    """
    z = rational(z)
    _check_h_domain(params, z)
    threshold = rational(threshold)
    r = params.r
    rhs = threshold * (r * r * z - 1) - params.msum * (r * z - 1)
    return cmp_sqrt(h_radicand(params, z), rhs)


def h_lower_bound_check(params: GpiParams, z: RationalLike, which: str) -> CheckReport:
    """Exact check of the two lower bounds for H on its split domain:
    H > 1/2 on (1/r^2, 1/r] and H > 1/7 on (1/r, B/(m2 m3)] with B = 11/4."""
    z = rational(z)
    r = params.r
    if which == "half":
        threshold = Fraction(1, 2)
        if not (1 / (r * r) < z <= 1 / r):
            raise ValueError(f"'half' branch applies on (1/r^2, 1/r]; got z={z}")
    elif which == "seventh":
        threshold = Fraction(1, 7)
        hi = TRUNCATION_BOUND / (params.m2 * params.m3)
        if not (1 / r < z <= min(hi, Fraction(1))):
            raise ValueError(f"'seventh' branch applies on (1/r, {hi}]; got z={z}")
    else:
        raise ValueError(f"which must be 'half' or 'seventh', got {which!r}")
    sign = h_compare(params, z, threshold)
    status = HOLDS if sign > 0 else FAILS
    return CheckReport(
        name=f"h-{which}:m2={params.m2},m3={params.m3},z={z}",
        status=status,
        margin=None,
        witnesses=[{"z": z, "threshold": threshold, "sign": sign}],
        metadata={"method": "exact radical comparison"},
    )


# ----------------------------------------------------------------------
# the positivity polynomial S and the bivariate h family
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _s_poly_cached(m2: int, m3: int) -> MultiPoly:
    f1 = hyp_poly(m2, m3, HALF)
    f2 = hyp_poly(m2, m3, THREE_HALVES)
    r = Fraction((2 * m2 + 1) * (2 * m3 + 1) + 1)
    z = MultiPoly.var("z")
    one = MultiPoly.const(1, ("z",))
    return (
        (f1 * f1) * (one - z) * (r - 1)
        + (f1 * f2) * (z * r - one) * (2 * (m2 + m3 + 1))
        - (f2 * f2) * (z * (r * r) - one)
    )


def S_poly(params: GpiParams) -> MultiPoly:
    """Cleared-denominator positivity polynomial in z, degree 2 m2 + 1:

        (r-1)(1-z) f1^2 + 2 (m2+m3+1)(rz-1) f1 f2 - (r^2 z - 1) f2^2

    with f1 = F(-m2, -m3; 1/2; z) and f2 = F(-m2, -m3; 3/2; z).  Its strict
    positivity on (1/r^2, 1) is equivalent to the ratio inequality
    f1/f2 > 1/H there.
    """
    return _s_poly_cached(params.m2, params.m3)


@lru_cache(maxsize=None)
def s_poly_symbolic(m2: int) -> MultiPoly:
    """S with the second exponent kept symbolic: a polynomial in (z, m3)."""
    f1 = hyp_poly_symbolic_m3(m2, HALF)
    f2 = hyp_poly_symbolic_m3(m2, THREE_HALVES)
    ring = ("z", "m3")
    z = MultiPoly.var("z", ring)
    m3v = MultiPoly.var("m3", ring)
    one = MultiPoly.const(1, ring)
    rm1 = (m3v * 2 + 1) * (2 * m2 + 1)  # r - 1
    r = rm1 + 1
    msum = m3v + (m2 + 1)
    return (
        (f1 * f1) * (one - z) * rm1
        + (f1 * f2) * (z * r - one) * msum * 2
        - (f2 * f2) * (z * r * r - one)
    )


def h_offset(m2: int) -> int:
    """Offset in the substitution m3 = b^2 + offset defining h_{m2}."""
    if m2 == 1:
        return 5
    if m2 == 2:
        return 3
    return m2


@lru_cache(maxsize=None)
def h_poly(m2: int) -> MultiPoly:
    """Bivariate polynomial h_{m2}(b, c) = (1+c^2)^(2 m2 + 1) * S(z)
    under m3 = b^2 + offset and z = c^2/(1+c^2); positive for all real b, c.

    Defined for 1 <= m2 <= 7 (the explicitly certified range).
    """
    if not 1 <= m2 <= 7:
        raise ValueError("h_poly is defined for m2 in 1..7")
    s = s_poly_symbolic(m2)
    b = MultiPoly.var("b")
    s_b = s.substitute("m3", b * b + h_offset(m2))
    c = MultiPoly.var("c")
    c2 = c * c
    return s_b.substitute_rational("z", c2, c2 + 1, 2 * m2 + 1).in_ring(("b", "c"))


@lru_cache(maxsize=None)
def f_truncated_poly() -> MultiPoly:
    """Four-term truncation polynomial f(x2, x3, u), scaled by 17! so all
    coefficients are integers.

    With R = (2 x2 + 1)(2 x3 + 1) + 1 and B1, B2 the 17!-scaled truncated
    series ((2j)! and (2j+1)! factorials respectively, j = 0..4):

        f = (2x2+1)(2x3+1)(x2 x3 - u) B1^2
            + 2 (x2+x3+1)(R u - x2 x3) B1 B2
            - (R^2 u - x2 x3) B2^2
    """
    ring = ("x2", "x3", "u")
    x2 = MultiPoly.var("x2", ring)
    x3 = MultiPoly.var("x3", ring)
    u = MultiPoly.var("u", ring)
    x2x3 = x2 * x3

    def bracket(odd: bool) -> MultiPoly:
        total = x2x3**3 * FACT17
        for j in range(1, 5):
            fact = math.factorial(2 * j + 1) if odd else math.factorial(2 * j)
            coeff = Fraction(4**j * FACT17, fact)
            piece = MultiPoly.const(coeff, ring) * u**j * x2x3 ** (4 - j)
            for i in range(1, j):
                piece = piece * (x2 - i) * (x3 - i)
            total = total + piece
        return total

    b1 = bracket(odd=False)
    b2 = bracket(odd=True)
    r = (x2 * 2 + 1) * (x3 * 2 + 1) + 1
    msum = x2 + x3 + 1
    return (
        (x2 * 2 + 1) * (x3 * 2 + 1) * (x2x3 - u) * (b1 * b1)
        + msum * (r * u - x2x3) * (b1 * b2) * 2
        - (r * r * u - x2x3) * (b2 * b2)
    )


@lru_cache(maxsize=None)
def g_poly() -> MultiPoly:
    """g(a, b, c) = (1+c^2)^9 f(a^2+8, b^2+8, (11/4) c^2/(1+c^2)): an
    everywhere-positive polynomial with only even exponents whose coefficient
    nonnegativity certifies the truncated inequality on its whole domain."""
    f = f_truncated_poly()
    a = MultiPoly.var("a")
    b = MultiPoly.var("b")
    g = f.substitute("x2", a * a + 8).substitute("x3", b * b + 8)
    c = MultiPoly.var("c")
    c2 = c * c
    return g.substitute_rational(
        "u", c2 * TRUNCATION_BOUND, c2 + 1, 9
    ).in_ring(("a", "b", "c"))


# ----------------------------------------------------------------------
# exact checks: GPI, MRI, HFRI
# ----------------------------------------------------------------------


def check_gpi(params: GpiParams, a: RationalLike, x: RationalLike) -> CheckReport:
    """Exact margin of the product inequality for X1 = X2 + a X3 over a
    unit-variance pair with correlation x:

        margin = E[X1^2 X2^(2m2) X3^(2m3)] - E[X1^2] E[X2^(2m2)] E[X3^(2m3)]

    Holds iff margin >= 0; equality (margin exactly 0) is reported in the
    metadata and occurs only in independent/degenerate configurations.
    """
    a, x = rational(a), rational(x)
    if abs(x) > 1:
        raise ValueError("correlation x must satisfy |x| <= 1")
    spec = TripleSpec(GaussianPair.unit(x), a)
    lhs = triple_even_moment(spec, params.m2, params.m3)
    rhs = spec.var1 * double_factorial_odd(params.m2) * double_factorial_odd(params.m3)
    margin = lhs - rhs
    status = HOLDS if margin >= 0 else FAILS
    return CheckReport(
        name=f"gpi:m2={params.m2},m3={params.m3},a={a},x={x}",
        status=status,
        margin=margin,
        metadata={"equality": margin == 0, "method": "exact rational"},
    )


def mri_ratio(params: GpiParams, pair: GaussianPair) -> Fraction:
    """|E[X2^(2m2+1) X3^(2m3+1)]| / ((2m2+1)(2m3+1) E[X2^(2m2) X3^(2m3)])."""
    return abs(odd_moment(params.m2, params.m3, pair)) / (
        (params.r - 1) * even_moment(params.m2, params.m3, pair)
    )


def check_mri(
    params: GpiParams, pair: GaussianPair, width: RationalLike = DEFAULT_WIDTH
) -> CheckReport:
    """Moment-ratio inequality check, decided exactly.

    The bound is |Cov| when Corr^2 <= t and H(Corr^2) |Cov| otherwise; the
    branch test and the comparison are exact (radical isolated and squared),
    so the verdict is never indeterminate.  An interval enclosure of
    lhs - bound at the requested width accompanies the verdict.
    """
    lhs = mri_ratio(params, pair)
    z = pair.corr_sq
    abs_cov = abs(pair.cov)
    if z <= params.t:
        bound = abs_cov
        diff = lhs - bound
        status = HOLDS if diff <= 0 else FAILS
        equality = diff == 0
        enclosure = RationalInterval.point(diff)
        branch = "covariance"
    else:
        # lhs <= H(z) |cov|  <=>  H(z) >= lhs/|cov|
        q = lhs / abs_cov
        sign = h_compare(params, z, q)
        status = HOLDS if sign >= 0 else FAILS
        equality = sign == 0
        h_iv = H_value(params, z, width)
        enclosure = RationalInterval.point(lhs) - h_iv * abs_cov
        branch = "ratio-bound"
    return CheckReport(
        name=f"mri:m2={params.m2},m3={params.m3}",
        status=status,
        margin=enclosure,
        witnesses=[{"corr_sq": z, "lhs": lhs, "branch": branch}],
        metadata={"equality": equality, "method": "exact radical comparison"},
    )


def find_mri_violation(
    params: GpiParams, steps: int = 100
) -> CheckReport:
    """Search correlations x = k/steps, scanning down from x = 1, for an
    exact MRI violation; the report carries the first witness found (or none).

    Scanning downward surfaces the full-correlation witness first where it
    exists (as for small index pairs)."""
    for k in range(steps, 0, -1):
        x = Fraction(k, steps)
        report = check_mri(params, GaussianPair.unit(x))
        if report.status == FAILS:
            return CheckReport(
                name=f"mri-violation:m2={params.m2},m3={params.m3}",
                status=HOLDS,
                witnesses=[{"x": x, "detail": report.witnesses}],
                metadata={"found": True, "grid_steps": steps},
            )
    return CheckReport(
        name=f"mri-violation:m2={params.m2},m3={params.m3}",
        status=FAILS,
        metadata={"found": False, "grid_steps": steps},
    )


def hfri_check(params: GpiParams, z: RationalLike) -> CheckReport:
    """Hypergeometric ratio inequality at one point, via exact positivity of
    the cleared-denominator polynomial S(z)."""
    z = rational(z)
    r = params.r
    if not (1 / (r * r) < z < 1):
        raise ValueError(f"hfri domain is (1/r^2, 1); got z={z}")
    value = S_poly(params).eval({"z": z})
    return CheckReport(
        name=f"hfri:m2={params.m2},m3={params.m3},z={z}",
        status=HOLDS if value > 0 else FAILS,
        margin=value,
        metadata={"method": "exact rational"},
    )


# ----------------------------------------------------------------------
# the difference function G for the large-parameter case
# ----------------------------------------------------------------------


def G_value(
    params: GpiParams, z: RationalLike, width: RationalLike = DEFAULT_WIDTH
) -> RationalInterval:
    """Enclosure of G(z) = F(-m2-1, -m3; 1/2; z)
    - [(1-z) + (2 m3 + 1) z H(z)] F(-m2, -m3; 1/2; z)."""
    z = rational(z)
    _check_h_domain(params, z)
    width = rational(width)
    m2, m3 = params.m2, params.m3
    f_big = hyp_poly(m2 + 1, m3, HALF).eval({"z": z})
    f1 = hyp_poly(m2, m3, HALF).eval({"z": z})
    scale = (2 * m3 + 1) * z * f1
    h_iv = H_value(params, z, width / scale)
    bracket = RationalInterval.point(1 - z) + h_iv * ((2 * m3 + 1) * z)
    return RationalInterval.point(f_big) - bracket * f1


def G_at_one(params: GpiParams) -> Fraction:
    """G(1), exact: F(-m2-1, -m3; 1/2; 1) - (2 m3 + 1) H(1) F(-m2, -m3; 1/2; 1)."""
    m2, m3 = params.m2, params.m3
    return hyp_value_at_one(m2 + 1, m3, HALF) - (2 * m3 + 1) * H_at_one(
        params
    ) * hyp_value_at_one(m2, m3, HALF)


# ----------------------------------------------------------------------
# interval scan predicates
# ----------------------------------------------------------------------


def _refined_sign(evaluate, width: Fraction, refine_max: int, want: str):
    """Evaluate an interval-valued quantity, halving the width until its sign
    matches/contradicts ``want`` or the refinement budget runs out."""
    w = width
    iv = None
    for _ in range(refine_max + 1):
        iv = evaluate(w)
        sign = iv.sign()
        if sign == want:
            return HOLDS, iv
        if sign in (SIGN_POSITIVE, SIGN_NEGATIVE):
            return FAILS, iv
        w = w / 2
    return INDETERMINATE, iv


def _deriv_direct_point(params: GpiParams, z: Fraction, width: Fraction, refine_max: int):
    """Condition at interior critical points of G, direct form:

        (1-z) + [2(m2+m3+1) z - 1] H(z)  <  (r-1) z H(z)^2 + 2 z (1-z) H'(z)

    evaluated with a shared enclosure for sqrt(D); holds iff rhs - lhs > 0.
    """
    r = params.r
    d = h_radicand(params, z)
    denom = r * r * z - 1
    rm1 = r - 1

    def evaluate(w: Fraction) -> RationalInterval:
        root = sqrt_enclosure(d, w * denom)
        if root.lo <= 0:
            # force another refinement round rather than divide by zero
            return RationalInterval(Fraction(-1), Fraction(1))
        h_iv = (root + params.msum * (r * z - 1)) / RationalInterval.point(denom)
        hp_num = root * (2 * r * rm1 * params.msum) + (
            2 * params.mdiff_sq * r * rm1 * (r * z - 1) - rm1**3 * (1 + r * r * z)
        )
        hp = hp_num / (root * (2 * denom * denom))
        lhs = (1 - z) + h_iv * (2 * params.msum * z - 1)
        rhs = h_iv.square() * (rm1 * z) + hp * (2 * z * (1 - z))
        return rhs - lhs

    return _refined_sign(evaluate, width, refine_max, SIGN_POSITIVE)


def _deriv_reduced_point(params: GpiParams, z: Fraction, width: Fraction, refine_max: int):
    """Radical-isolated form of the critical-point condition on the low-z
    range; holds iff lhs - rhs > 0 where rhs carries 1/sqrt(D)."""
    r = params.r
    msum = params.msum
    dd = params.mdiff_sq
    d = h_radicand(params, z)
    lhs = (
        (-1 + 4 * z - 4 * r * z + 3 * r * r * z + z * z - 8 * r * z * z
         + 8 * r * r * z * z - 4 * r**3 * z * z + r * r * z**3)
        + msum * (1 - 3 * r * z + r * r * z + 2 * r * z * z - 2 * r * r * z * z + r**3 * z * z)
        - 2 * dd * (2 * z - r * z - 3 * r * z * z + r * r * z * z + r * r * z**3)
    )
    rhs_num = (r - 1) * z * (1 - z) * (
        (r - 1) ** 2 * (1 + r * r * z) - 2 * dd * r * (r * z - 1)
    ) + (2 * msum * z * (r + r * z - 2) - (r * r * z - 1)) * d

    def evaluate(w: Fraction) -> RationalInterval:
        root = sqrt_enclosure(d, w)
        if root.lo <= 0:
            return RationalInterval(Fraction(-1), Fraction(1))
        return RationalInterval.point(lhs) - RationalInterval.point(rhs_num) / root

    return _refined_sign(evaluate, width, refine_max, SIGN_POSITIVE)


def default_scan_range(
    predicate: str, params: GpiParams
) -> tuple[Fraction, Fraction, bool, bool]:
    """(z_lo, z_hi, lo_open, hi_open) for each predicate's natural domain."""
    r = params.r
    b = TRUNCATION_BOUND / (params.m2 * params.m3)
    split = Fraction(21, 10) / (2 * params.m2 + 1)
    table = {
        "hfri": (1 / (r * r), Fraction(1), True, True),
        "g-negative": (b, Fraction(1), True, True),
        "h-half": (1 / (r * r), 1 / r, True, False),
        "h-seventh": (1 / r, b, True, False),
        "h-deriv": (split, Fraction(1), False, True),
        "h-deriv-reduced": (b, split, True, True),
    }
    if predicate not in table:
        raise ValueError(f"unknown predicate {predicate!r}; expected one of {SCAN_PREDICATES}")
    return table[predicate]


def scan(
    predicate: str,
    params: GpiParams,
    z_lo: RationalLike | None = None,
    z_hi: RationalLike | None = None,
    grid_n: int = 101,
    width: RationalLike = DEFAULT_WIDTH,
    refine_max: int = DEFAULT_REFINE_MAX,
) -> CheckReport:
    """Evaluate a named predicate at grid_n exact rational points.

    Grid points are z_lo + k (z_hi - z_lo)/(grid_n - 1); open endpoints are
    nudged inward by (z_hi - z_lo)/(10 grid_n), and the effective endpoints
    are recorded in the report.  Exact predicates never produce indeterminate
    points; interval predicates refine the enclosure width up to refine_max
    halvings first.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    width = rational(width)
    d_lo, d_hi, lo_open, hi_open = default_scan_range(predicate, params)
    z_lo = d_lo if z_lo is None else rational(z_lo)
    z_hi = d_hi if z_hi is None else rational(z_hi)
    if not z_lo < z_hi:
        raise ValueError("need z_lo < z_hi")
    nudge = (z_hi - z_lo) / (10 * grid_n)
    lo_eff = z_lo + nudge if lo_open else z_lo
    hi_eff = z_hi - nudge if hi_open else z_hi
    step = (hi_eff - lo_eff) / (grid_n - 1)
    points: list[dict] = []
    first_failure = None
    counts = {HOLDS: 0, FAILS: 0, INDETERMINATE: 0}
    for k in range(grid_n):
        z = lo_eff + k * step
        verdict, value = _scan_point(predicate, params, z, width, refine_max)
        counts[verdict] += 1
        entry = {"z": z, "verdict": verdict, "value": value}
        points.append(entry)
        if verdict == FAILS and first_failure is None:
            first_failure = entry
    if counts[FAILS]:
        status = FAILS
    elif counts[INDETERMINATE]:
        status = INDETERMINATE
    else:
        status = HOLDS
    return CheckReport(
        name=f"scan:{predicate}:m2={params.m2},m3={params.m3}",
        status=status,
        witnesses=[first_failure] if first_failure else [],
        metadata={
            "points": points,
            "counts": counts,
            "z_lo": lo_eff,
            "z_hi": hi_eff,
            "nudge": nudge,
            "grid_n": grid_n,
            "width": width,
            "refine_max": refine_max,
        },
    )


def _scan_point(
    predicate: str, params: GpiParams, z: Fraction, width: Fraction, refine_max: int
):
    """Single-point verdict for a scan predicate; exact where possible."""
    if predicate == "hfri":
        value = S_poly(params).eval({"z": z})
        return (HOLDS if value > 0 else FAILS), value
    if predicate == "h-half":
        sign = h_compare(params, z, Fraction(1, 2))
        return (HOLDS if sign > 0 else FAILS), sign
    if predicate == "h-seventh":
        sign = h_compare(params, z, Fraction(1, 7))
        return (HOLDS if sign > 0 else FAILS), sign
    if predicate == "g-negative":
        verdict, iv = _refined_sign(
            lambda w: G_value(params, z, w), width, refine_max, SIGN_NEGATIVE
        )
        return verdict, iv
    if predicate == "h-deriv":
        return _deriv_direct_point(params, z, width, refine_max)
    if predicate == "h-deriv-reduced":
        return _deriv_reduced_point(params, z, width, refine_max)
    raise ValueError(f"unknown predicate {predicate!r}")


# ----------------------------------------------------------------------
# real-exponent path
# ----------------------------------------------------------------------


def check_gpi_real(rp: RealGpiParams, a: float, x: float) -> CheckReport:
    """Float margin of the real-exponent product inequality:

        a^2 (y3+1) F(-y3/2-1, -y2/2; 1/2; x^2)
        + (y2+1) F(-y3/2, -y2/2-1; 1/2; x^2)
        + 2 a x (y3+1)(y2+1) F(-y3/2, -y2/2; 3/2; x^2)
        - (a^2 + 1 + 2 a x)

    Requires |x| < 1 (series convergence); margins within REAL_MARGIN_GUARD of
    zero are reported indeterminate rather than trusted.
    """
    if not abs(x) < 1:
        raise ValueError("check_gpi_real requires |x| < 1")
    y2, y3 = rp.y2, rp.y3
    z = x * x
    margin = (
        a * a * (y3 + 1.0) * gauss_hyp_real(-y3 / 2.0 - 1.0, -y2 / 2.0, 0.5, z)
        + (y2 + 1.0) * gauss_hyp_real(-y3 / 2.0, -y2 / 2.0 - 1.0, 0.5, z)
        + 2.0 * a * x * (y3 + 1.0) * (y2 + 1.0) * gauss_hyp_real(-y3 / 2.0, -y2 / 2.0, 1.5, z)
        - (a * a + 1.0 + 2.0 * a * x)
    )
    if margin > REAL_MARGIN_GUARD:
        status = HOLDS
    elif margin < -REAL_MARGIN_GUARD:
        status = FAILS
    else:
        status = INDETERMINATE
    return CheckReport(
        name=f"gpi-real:y2={rp.y2},y3={rp.y3},a={a},x={x}",
        status=status,
        margin=margin,
        metadata={"series_tol": 1e-12, "guard": REAL_MARGIN_GUARD},
    )


def h_real(rp: RealGpiParams, z: float) -> float:
    """Real-exponent analogue of the bound function H, in floats:

        [ (y2+y3+2)/2 (rz-1) + sqrt( ((y3-y2)(rz-1))^2/4 + (y2+1)^3 (y3+1)^3 z ) ]
        / (r^2 z - 1)
    """
    r = rp.r
    if not r * r * z - 1.0 > 0.0:
        raise ValueError("h_real requires z > 1/r^2")
    disc = ((rp.y3 - rp.y2) * (r * z - 1.0)) ** 2 / 4.0 + (rp.y2 + 1.0) ** 3 * (
        rp.y3 + 1.0
    ) ** 3 * z
    return ((rp.y2 + rp.y3 + 2.0) / 2.0 * (r * z - 1.0) + math.sqrt(disc)) / (
        r * r * z - 1.0
    )


def check_mri_real(rp: RealGpiParams, x: float) -> CheckReport:
    """Real-exponent moment-ratio inequality at correlation x (unit variances):

        |x| F(-y2/2, -y3/2; 3/2; x^2) / F(-y2/2, -y3/2; 1/2; x^2)
        <=  |x|                 if x^2 <= t
        <=  H(x^2) |x|          otherwise
    """
    if not abs(x) < 1:
        raise ValueError("check_mri_real requires |x| < 1")
    z = x * x
    f1 = gauss_hyp_real(-rp.y2 / 2.0, -rp.y3 / 2.0, 0.5, z)
    f2 = gauss_hyp_real(-rp.y2 / 2.0, -rp.y3 / 2.0, 1.5, z)
    lhs = abs(x) * f2 / f1
    if z <= rp.t:
        bound = abs(x)
        branch = "covariance"
    else:
        bound = h_real(rp, z) * abs(x)
        branch = "ratio-bound"
    margin = bound - lhs
    if margin > REAL_MARGIN_GUARD:
        status = HOLDS
    elif margin < -REAL_MARGIN_GUARD:
        status = FAILS
    else:
        status = INDETERMINATE
    return CheckReport(
        name=f"mri-real:y2={rp.y2},y3={rp.y3},x={x}",
        status=status,
        margin=margin,
        witnesses=[{"x": x, "branch": branch, "lhs": lhs, "bound": bound}],
        metadata={"series_tol": 1e-12, "guard": REAL_MARGIN_GUARD},
    )


def find_mri_real_violation(rp: RealGpiParams, steps: int = 100) -> CheckReport:
    """Search x = k/steps (k = steps-1..1, descending) for a real-exponent
    ratio-bound violation."""
    for k in range(steps - 1, 0, -1):
        x = k / steps
        report = check_mri_real(rp, x)
        if report.status == FAILS:
            return CheckReport(
                name=f"mri-real-violation:y2={rp.y2},y3={rp.y3}",
                status=HOLDS,
                witnesses=[{"x": x, "margin": report.margin}],
                metadata={"found": True, "grid_steps": steps},
            )
    return CheckReport(
        name=f"mri-real-violation:y2={rp.y2},y3={rp.y3}",
        status=FAILS,
        metadata={"found": False, "grid_steps": steps},
    )
