"""
Closed-form constants: the 3D escape probability, the slit-plane count
constant and the tan-probability prefactor.

scipy.special.gamma is the working routine; lanczos_gamma is an
independent Lanczos approximation (g=7, 9 terms, ~1e-15 relative) used to
cross-check it.
"""

import cmath
import logging
import math

from scipy import special

logger = logging.getLogger(__name__)

LANCZOS_G = 7
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

CROSS_CHECK_TOLERANCE = 1e-10


def gamma_function(x: float) -> float:
    return float(special.gamma(x))


def lanczos_gamma(x: float) -> float:
    if x <= 0 and float(x).is_integer():
        raise ValueError(f"Gamma has a pole at {x}")
    if x < 0.5:
        # reflection
        return math.pi / (math.sin(math.pi * x) * lanczos_gamma(1.0 - x))

    z = complex(x - 1.0)
    series = LANCZOS_COEFFICIENTS[0]
    for i, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + i)
    t = z + LANCZOS_G + 0.5
    result = cmath.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * series
    return result.real


def _checked_gamma(x: float) -> float:
    value = gamma_function(x)
    reference = lanczos_gamma(x)
    if abs(value - reference) > CROSS_CHECK_TOLERANCE * abs(value):
        logger.warning(f"⚠️ Gamma({x}) disagreement: scipy={value!r} lanczos={reference!r}")
    return value


def glasser_zucker_constant() -> float:
    """Escape probability of the simple random walk on Z^3 (about 0.65946)"""
    denominator = math.sqrt(6.0)
    for k in (1, 5, 7, 11):
        denominator *= _checked_gamma(k / 24.0)
    return 32.0 * math.pi ** 3 / denominator


def slit_count_constant() -> float:
    """Limit of a_n / 4^n * n^{1/4} for slit-plane walk counts (about 0.633965)"""
    return math.sqrt(1.0 + math.sqrt(2.0)) / (2.0 * _checked_gamma(0.75))


def tan_prefactor() -> float:
    """sqrt((1 + sqrt 2) / (2 pi)), about 0.619866"""
    return math.sqrt((1.0 + math.sqrt(2.0)) / (2.0 * math.pi))


def speed_lower_bound(epsilon: float, d: int) -> float:
    """Asymptotic lower bound on X_n / n for the excited walk in d >= 4"""
    return glasser_zucker_constant() * epsilon / d
