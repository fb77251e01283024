"""Square classes, Hilbert symbols and quaternion ramification over Q and its
completions, plus builders for the quadratic hyperfields Q(F_q), Q(R), Q(Q_p)
and Q(Q).
"""
import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime, nextprime

from . import kernels
from .finitefield import gf_tables
from .hyperfield import FiniteHyperfield, MorphismTable, OracleHyperfield, prime
from .numtheory import (
    check_prime, least_nonresidue, legendre, prime_divisors, square_core, to_fraction, valuation,
)

MAX_FINITE_FIELD = 1024


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: ``p`` is a prime, or ``None`` for the real place."""

    p: int = None

    def __post_init__(self):
        if self.p is not None and not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_infinite(self):
        return self.p is None

    def __str__(self):
        return "inf" if self.p is None else str(self.p)

    def sort_key(self):
        return (1, 0) if self.p is None else (0, self.p)


INF = Place(None)


def as_place(v):
    if isinstance(v, Place):
        return v
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "oo", "infinity", "infty", "r"):
            return INF
        v = int(s)
    return Place(int(v))


def sorted_places(places):
    return sorted(places, key=Place.sort_key)


@dataclass(frozen=True)
class SquareClassQ:
    sign: int
    core: int

    @property
    def value(self):
        return self.sign * self.core

    def __str__(self):
        return str(self.value)


def square_class(r):
    """Canonical class of r in Q*/Q*^2: sign times the squarefree part of num*den."""
    core, _ = square_core(r)
    return SquareClassQ(1 if core > 0 else -1, abs(core))


@dataclass(frozen=True)
class PadicSquareClass:
    p: int
    rep: int

    @property
    def label(self):
        if self.p == 2:
            return str(self.rep)
        u = least_nonresidue(self.p)
        return {1: "1", u: "u", self.p: "p", u * self.p: "up"}[self.rep]

    def __str__(self):
        return self.label


def _padic_rep(r, p):
    r = to_fraction(r)
    if r == 0:
        raise ValueError("zero has no square class")
    v = valuation(r, p)
    unit = r / Fraction(p) ** v
    if p == 2:
        m = (unit.numerator * unit.denominator) % 8
        rep = {1: 1, 3: -5, 5: 5, 7: -1}[m]
        return rep * (2 if v % 2 else 1)
    u = 1 if legendre(unit.numerator * unit.denominator, p) == 1 else least_nonresidue(p)
    return u * (p if v % 2 else 1)


def padic_square_class(r, p):
    """Class of r in Q_p*/Q_p*^2 with representatives {1,u,p,up} (p odd) or {±1,±2,±5,±10}."""
    p = check_prime(p)
    return PadicSquareClass(p, _padic_rep(r, p))


def padic_classes(p):
    """Canonical representatives of Q_p*/Q_p*^2 in table order."""
    if p == 2:
        return [1, -1, 2, -2, 5, -5, 10, -10]
    u = least_nonresidue(p)
    return [1, u, p, u * p]


def _int_rep(r):
    core, _ = square_core(r)
    return core


def hilbert_symbol(a, b, v):
    """(a, b)_v in {+1, -1}: whether a x^2 + b y^2 = z^2 has a non-trivial solution over Q_v."""
    v = as_place(v)
    a, b = _int_rep(a), _int_rep(b)
    if v.is_infinite:
        return -1 if a < 0 and b < 0 else 1
    p = v.p
    alpha, beta = valuation(a, p), valuation(b, p)
    u, w = a // p ** alpha, b // p ** beta
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        s *= legendre(u, p)
    if alpha % 2:
        s *= legendre(w, p)
    return s


def candidate_places(*rs):
    """inf, 2 and the primes dividing the square-class cores of the arguments."""
    primes = {2}
    for r in rs:
        primes.update(prime_divisors(_int_rep(r)))
    return [Place(p) for p in sorted(primes)] + [INF]


def local_symbols(a, b):
    return {v: hilbert_symbol(a, b, v) for v in candidate_places(a, b)}


def reciprocity_check(a, b, spot_checks=3):
    """Product of the symbols over the candidate places is +1.

    Also asserts the symbol is +1 at the next few primes outside the candidates.
    """
    syms = local_symbols(a, b)
    q = max(v.p for v in syms if not v.is_infinite)
    for _ in range(spot_checks):
        q = nextprime(q)
        assert hilbert_symbol(a, b, q) == 1, f"symbol ({a},{b}) non-trivial at unexpected place {q}"
    return math.prod(syms.values()) == 1


@dataclass(frozen=True)
class RamificationSet:
    places: frozenset

    def __post_init__(self):
        object.__setattr__(self, "places", frozenset(self.places))
        if len(self.places) % 2:
            raise AssertionError("ramification set of odd size violates reciprocity")

    def sorted(self):
        return sorted_places(self.places)

    def labels(self):
        return [str(v) for v in self.sorted()]

    @property
    def is_split(self):
        return not self.places

    def __str__(self):
        return "{" + ", ".join(self.labels()) + "}"


def quaternion_ramification(a, b):
    return RamificationSet(frozenset(v for v, s in local_symbols(a, b).items() if s == -1))


def represents(a, b, c, scope=None):
    """c in D<a, b> over Q_v (scope a place) or over Q (scope None / "global")."""
    ac, bc = to_fraction(a) * to_fraction(c), to_fraction(b) * to_fraction(c)
    if ac == 0 or bc == 0:
        raise ValueError("arguments must be non-zero")
    if scope is None or scope == "global":
        return all(s == 1 for s in local_symbols(ac, bc).values())
    return hilbert_symbol(ac, bc, as_place(scope)) == 1


def represents_bruteforce(a, b, c, p, backend=None):
    """Independent oracle: a x^2 + b y^2 - c z^2 has a Hensel-liftable zero mod p^3 (2^8 at p = 2)."""
    p = check_prime(p)
    coefs = [_int_rep(a), _int_rep(b), -_int_rep(c)]
    return kernels.local_witness(coefs, p, 8 if p == 2 else 3, backend=backend)


def _local_member(v):
    def member(c, a, b):
        if a == 0:
            return c == b
        if b == 0:
            return c == a
        if _canon_at(v, -a) == b:
            return True
        return c != 0 and represents(a, b, c, v)
    return member


def _canon_at(v, x):
    if x == 0:
        return 0
    if v.is_infinite:
        return 1 if x > 0 else -1
    return _padic_rep(x, v.p)


def local_oracle_hyperfield(v):
    v = as_place(v)
    if v.is_infinite:
        label = str
    else:
        label = lambda x: "0" if x == 0 else PadicSquareClass(v.p, x).label
    return OracleHyperfield(
        name=f"Q(Q_{v})" if not v.is_infinite else "Q(R)",
        canon=lambda x: _canon_at(v, x),
        member=_local_member(v),
        times_=lambda x, y: _canon_at(v, x * y),
        neg_=lambda x: _canon_at(v, -x),
        label=label,
    )


def local_square_class_hyperfield(v):
    """Q(R) for the real place, Q(Q_p) (5 elements, or 9 at p = 2) otherwise."""
    v = as_place(v)
    carrier = [0, 1, -1] if v.is_infinite else [0] + padic_classes(v.p)
    return local_oracle_hyperfield(v).tabulate(carrier)


def rational_quadratic_hyperfield():
    """Q(Q) on signed squarefree integers; membership decided through every place."""
    def canon(x):
        return 0 if x == 0 else _int_rep(x)

    def member(c, a, b):
        if a == 0:
            return c == b
        if b == 0:
            return c == a
        if canon(-a) == b:
            return True
        return c != 0 and represents(a, b, c)

    return OracleHyperfield(
        name="Q(Q)", canon=canon, member=member,
        times_=lambda x, y: canon(x * y), neg_=lambda x: canon(-x),
    )


def finite_field_quadratic_hyperfield(q, max_q=MAX_FINITE_FIELD):
    """Q(F_q) by enumerating a t + b s over non-zero squares t, s, then priming."""
    q = int(q)
    if q % 2 == 0:
        raise ValueError("characteristic 2 is not supported")
    if q > max_q:
        raise ValueError(f"q = {q} exceeds the bound {max_q}")
    add, mul = gf_tables(q)
    sq = {int(mul[x, x]) for x in range(1, q)}
    minus_one = int(next(x for x in range(q) if add[1, x] == 0))
    nonsq = next(x for x in range(2, q) if x not in sq)
    reps = [0, 1, nonsq]

    def cls(x):
        return 0 if x == 0 else (1 if x in sq else 2)

    table = [[set() for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            if i == 0 or j == 0:
                table[i][j] = {i or j}
                continue
            for t in sq:
                for s in sq:
                    table[i][j].add(cls(int(add[mul[reps[i], t], mul[reps[j], s]])))
    neg = [0, cls(minus_one), cls(int(mul[minus_one, nonsq]))]
    m = [[cls(int(mul[reps[i], reps[j]])) for j in range(3)] for i in range(3)]
    labels = ["0", "1", "u" if minus_one in sq else "-1"]
    return prime(FiniteHyperfield.from_tables(labels, 1, neg, m, table))


def residue_embedding(p):
    """Q(F_p) -> Q(Q_p) along unit square classes."""
    p = check_prime(p)
    if p == 2:
        raise ValueError("residue characteristic 2 is not supported")
    src = finite_field_quadratic_hyperfield(p)
    tgt = local_square_class_hyperfield(p)
    reps = [0, 1, least_nonresidue(p)]
    carrier = [0] + padic_classes(p)
    mapping = tuple(carrier.index(0 if r == 0 else _padic_rep(r, p)) for r in reps)
    return MorphismTable(src, tgt, mapping)


@dataclass(frozen=True)
class PolyOverQ:
    coeffs: tuple

    def __init__(self, coeffs):
        cs = [to_fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __mul__(self, other):
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyOverQ(out)


def _poly_valuation(f, p):
    vals = [valuation(c, p) for c in f.coeffs if c != 0]
    return min(vals) if vals else math.inf


def gauss_valuation(f, p, denominator=None):
    """Gauss extension of v_p to Q(x): least valuation of a coefficient, subtracted for quotients."""
    p = check_prime(p)
    f = f if isinstance(f, PolyOverQ) else PolyOverQ(f)
    if denominator is None:
        return _poly_valuation(f, p)
    g = denominator if isinstance(denominator, PolyOverQ) else PolyOverQ(denominator)
    if g.is_zero():
        raise ValueError("zero denominator")
    vf = _poly_valuation(f, p)
    return vf if vf == math.inf else vf - _poly_valuation(g, p)


def local_level(v):
    """Least n with -1 a sum of n squares in Q_v (inf for R)."""
    v = as_place(v)
    if v.is_infinite:
        return math.inf
    if padic_square_class(-1, v.p).rep == 1:
        return 1
    if represents(1, 1, -1, v):
        return 2
    # <1,1,1,1> is universal over every p-adic field
    return 4
