"""Exact rational scalar helpers.

The scalar type of the whole package is ``fractions.Fraction``: arbitrary
precision, always normalized (positive denominator, gcd 1).  This module adds
the parsing/formatting conventions used in the JSON interfaces and the
certified square/n-th root approximations needed when a bound like 2^(-3n/2)
or f(m)^(1/n) is irrational.  Every approximation here is one-sided, so a
comparison done with it stays a sound inequality over the rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import InvalidParams

Rational = Fraction


def frac(value) -> Fraction:
    """Coerce ints, strings, or Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise InvalidParams(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", integer, or exact decimal strings ("0.125", "-3.5e-2")."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParams(f"not an exact rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Canonical string: "p/q", or just "p" when the denominator is 1."""
    return str(Fraction(x))


def format_decimal_dyadic(x: Fraction, bits: int) -> str:
    """Exact decimal string of a dyadic rational p/2^bits.

    Dyadic rationals always terminate in decimal, so this loses nothing.
    """
    num, den = x.numerator, x.denominator
    if den & (den - 1) != 0:
        raise InvalidParams(f"{x} is not dyadic")
    scaled = num * 5**bits * (2**bits // den)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(bits + 1, "0")
    if bits == 0:
        return sign + digits
    return f"{sign}{digits[:-bits]}.{digits[-bits:]}"


def format_scientific(x: Fraction, sig: int = 6) -> str:
    """Display-only scientific notation; never fed back into computation."""
    if x == 0:
        return "0.0e+0"
    num, den = abs(x.numerator), x.denominator
    # exponent = floor(log10 |x|), found from digit counts then corrected
    exp = len(str(num)) - len(str(den))
    while num * 10**max(0, -exp) < den * 10**max(0, exp):
        exp -= 1
    while num * 10**max(0, -(exp + 1)) >= den * 10**max(0, exp + 1):
        exp += 1
    mant = Fraction(num, den) / Fraction(10) ** exp
    mant_scaled = round(mant * 10 ** (sig - 1))
    if mant_scaled >= 10**sig:  # rounding bumped the mantissa past 10
        mant_scaled //= 10
        exp += 1
    digits = str(mant_scaled)
    body = f"{digits[0]}.{digits[1:].ljust(sig - 1, '0')}"
    sign = "-" if x < 0 else ""
    return f"{sign}{body}e{exp:+d}"


def floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def floor_sqrt(x: Fraction) -> int:
    """Largest integer m with m*m <= x (x >= 0)."""
    if x < 0:
        raise InvalidParams("floor_sqrt of a negative rational")
    # sqrt(p/q) = sqrt(p*q)/q, and floor commutes with the division by q here
    return isqrt(x.numerator * x.denominator) // x.denominator


def iroot_floor(value: int, n: int) -> int:
    """Largest integer m with m**n <= value (value >= 0, n >= 1)."""
    if value < 0 or n < 1:
        raise InvalidParams("iroot_floor needs value >= 0 and n >= 1")
    if value in (0, 1) or n == 1:
        return value if n == 1 else value
    hi = 1 << (value.bit_length() // n + 1)
    lo = 0
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if mid**n <= value:
            lo = mid
        else:
            hi = mid
    return lo


def sqrt_lower(x: Fraction, bits: int) -> Fraction:
    """Dyadic r <= sqrt(x) with sqrt(x) - r <= 2^-bits."""
    if x < 0:
        raise InvalidParams("sqrt of a negative rational")
    scale = 1 << bits
    m = isqrt(x.numerator * x.denominator * scale * scale) // x.denominator
    r = Fraction(m, scale)
    # m floors twice; each floor costs at most one grid step
    while (r + Fraction(1, scale)) ** 2 <= x:
        r += Fraction(1, scale)
    return r


def sqrt_upper(x: Fraction, bits: int) -> Fraction:
    """Dyadic r >= sqrt(x) with r - sqrt(x) <= 2^-bits."""
    r = sqrt_lower(x, bits)
    step = Fraction(1, 1 << bits)
    while r * r < x:
        r += step
    return r


def nth_root_upper(x: Fraction, n: int, bits: int = 64) -> Fraction:
    """Dyadic r >= x^(1/n) with r - x^(1/n) <= 2^-bits (x >= 0)."""
    if x < 0:
        raise InvalidParams("nth_root_upper of a negative rational")
    if x == 0:
        return Fraction(0)
    scale = 1 << bits
    m = iroot_floor(x.numerator * scale**n // x.denominator, n)
    r = Fraction(m, scale)
    while r**n < x:
        r += Fraction(1, scale)
    return r


def lcm_of(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def common_denominator_ints(fracs) -> tuple[list[int], int]:
    """Scale a list of Fractions to integers over one common denominator."""
    fracs = list(fracs)
    den = lcm_of(f.denominator for f in fracs) if fracs else 1
    return [f.numerator * (den // f.denominator) for f in fracs], den
