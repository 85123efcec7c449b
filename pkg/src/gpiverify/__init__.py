"""gpiverify: exact-arithmetic verification of a three-dimensional Gaussian
product inequality, its bivariate moment-ratio bound, and the accompanying
sums-of-squares positivity certificates.

All core computations are exact (arbitrary-precision rationals); the only
floating point lives in the real-exponent extension and the Monte Carlo
cross-check oracle.
"""

__version__ = "1.0.0"

from .exactnum import BigRational, RationalInterval, rational, sqrt_enclosure
from .polyring import MultiPoly, poly_parse, poly_serialize
from .moments import GaussianPair, even_moment, odd_moment, wick_moment
from .inequality import (
    GpiParams,
    check_gpi,
    check_mri,
    g_poly,
    h_poly,
    hfri_check,
    make_params,
    scan,
)
from .soscert import SosCertificate, load_certificate, verify_sos

__all__ = [
    "BigRational",
    "GaussianPair",
    "GpiParams",
    "MultiPoly",
    "RationalInterval",
    "SosCertificate",
    "__version__",
    "check_gpi",
    "check_mri",
    "even_moment",
    "g_poly",
    "h_poly",
    "hfri_check",
    "load_certificate",
    "make_params",
    "odd_moment",
    "poly_parse",
    "poly_serialize",
    "rational",
    "scan",
    "sqrt_enclosure",
    "verify_sos",
    "wick_moment",
]
