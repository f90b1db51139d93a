"""
Exact rational helpers shared by the computation and rendering layers.

All statistics are kept as ``Fraction`` values; rounding only happens when a
value is displayed or when a ranking asks for display precision.
"""
from fractions import Fraction
from math import comb

PATTERN_DECIMALS = 4
GWLP_DECIMALS = 3
ES2_DECIMALS = 3
GR_DECIMALS = 2


def binomial(m, k) -> int:
    if k < 0 or k > m:
        return 0
    return comb(m, k)


def display_round(value, decimals) -> Fraction:
    """round-half-to-even on the exact value, kept as a Fraction"""
    return Fraction(round(Fraction(value), decimals))


def format_fixed(value, decimals) -> str:
    rounded = display_round(value, decimals)
    scaled = rounded * 10 ** decimals
    assert scaled.denominator == 1
    sign = '-' if scaled < 0 else ''
    whole, frac = divmod(abs(scaled.numerator), 10 ** decimals)
    if decimals == 0:
        return '%s%d' % (sign, whole)
    return '%s%d.%0*d' % (sign, whole, decimals, frac)


def format_exact(value) -> str:
    value = Fraction(value)
    return '%d/%d' % (value.numerator, value.denominator)


def parse_exact(text) -> Fraction:
    return Fraction(text)
