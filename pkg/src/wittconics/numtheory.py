"""Exact integer and rational helpers shared by the other modules."""
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from sympy import factorint, isprime


def to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@lru_cache(maxsize=4096)
def _factor(n):
    return tuple(sorted(factorint(n).items()))


def factor(n):
    """Prime factorisation of ``|n|`` as a dict ``{p: e}``."""
    n = abs(int(n))
    if n < 2:
        return {}
    return dict(_factor(n))


def prime_divisors(n):
    return sorted(factor(n))


def is_squarefree(n):
    n = int(n)
    if n == 0:
        return False
    return all(e == 1 for e in factor(n).values())


def squarefree_part(n):
    """Signed squarefree kernel of a non-zero integer."""
    n = int(n)
    if n == 0:
        raise ValueError("zero has no square class")
    core = 1
    for p, e in factor(n).items():
        if e % 2:
            core *= p
    return core if n > 0 else -core


def square_core(r):
    """Return ``(core, s)`` with ``r == core * s**2``, core a signed squarefree int."""
    r = to_fraction(r)
    if r == 0:
        raise ValueError("zero has no square class")
    num, den = r.numerator, r.denominator
    core = squarefree_part(num * den)
    s2 = r / core
    # s2 is a rational square; take its root exactly
    s = Fraction(isqrt(s2.numerator), isqrt(s2.denominator))
    assert s * s == s2
    return core, s


def valuation(r, p):
    """p-adic valuation of a non-zero rational (``None`` for zero, read as +inf)."""
    r = to_fraction(r)
    if r == 0:
        return None
    v = 0
    num, den = r.numerator, r.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def legendre(a, p):
    """Legendre symbol (a|p) for odd prime p, via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def least_nonresidue(p):
    for u in range(2, p):
        if legendre(u, p) == -1:
            return u
    raise ValueError(f"{p} has no quadratic non-residue")


def is_square_int(n):
    return n >= 0 and isqrt(n) ** 2 == n


def xgcd(a, b):
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def check_prime(p):
    p = int(p)
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    return p


__all__ = [
    "to_fraction", "factor", "prime_divisors", "is_squarefree", "squarefree_part",
    "square_core", "valuation", "legendre", "least_nonresidue", "is_square_int",
    "xgcd", "check_prime", "gcd",
]
