"""Genus-theory invariants of quadratic fields Q(sqrt d)."""
from dataclasses import dataclass
from math import gcd

from sympy import primerange

from .localglobal import represents
from .numtheory import factor, is_squarefree, prime_divisors, xgcd

MAX_IMAGINARY_ORACLE = 10**5

# Real quadratic class numbers (wide h, narrow h_plus) with the 2-ranks of both
# groups.  Source: standard tables of real quadratic fields (Cohen, "A Course in
# Computational Algebraic Number Theory", Appendix B.4; LMFDB 2.2.D.1 entries).
# h_plus = h when the fundamental unit has norm -1, 2h otherwise.
REAL_QUADRATIC_TABLE = {
    2: {"h": 1, "h_plus": 1, "rank": 0, "rank_plus": 0, "unit": "1+sqrt2 (N=-1)"},
    3: {"h": 1, "h_plus": 2, "rank": 0, "rank_plus": 1, "unit": "2+sqrt3 (N=+1)"},
    5: {"h": 1, "h_plus": 1, "rank": 0, "rank_plus": 0, "unit": "(1+sqrt5)/2 (N=-1)"},
    6: {"h": 1, "h_plus": 2, "rank": 0, "rank_plus": 1, "unit": "5+2sqrt6 (N=+1)"},
    7: {"h": 1, "h_plus": 2, "rank": 0, "rank_plus": 1, "unit": "8+3sqrt7 (N=+1)"},
    10: {"h": 2, "h_plus": 2, "rank": 1, "rank_plus": 1, "unit": "3+sqrt10 (N=-1)"},
    11: {"h": 1, "h_plus": 2, "rank": 0, "rank_plus": 1, "unit": "10+3sqrt11 (N=+1)"},
    13: {"h": 1, "h_plus": 1, "rank": 0, "rank_plus": 0, "unit": "(3+sqrt13)/2 (N=-1)"},
    14: {"h": 1, "h_plus": 2, "rank": 0, "rank_plus": 1, "unit": "15+4sqrt14 (N=+1)"},
    15: {"h": 2, "h_plus": 4, "rank": 1, "rank_plus": 2, "unit": "4+sqrt15 (N=+1)"},
    30: {"h": 2, "h_plus": 4, "rank": 1, "rank_plus": 2, "unit": "11+2sqrt30 (N=+1)"},
    34: {"h": 2, "h_plus": 4, "rank": 1, "rank_plus": 1, "unit": "35+6sqrt34 (N=+1); narrow group cyclic of order 4"},
    65: {"h": 2, "h_plus": 2, "rank": 1, "rank_plus": 1, "unit": "8+sqrt65 (N=-1)"},
}


@dataclass(frozen=True)
class QuadraticField:
    d: int

    def __post_init__(self):
        _check_d(self.d)


@dataclass(frozen=True)
class ClassGroupData:
    order: int
    two_rank: int
    representatives: tuple


def _check_d(d):
    d = int(d)
    if d in (0, 1) or not is_squarefree(d):
        raise ValueError(f"d = {d} must be squarefree and not 0 or 1")
    return d


def discriminant_of(d):
    d = _check_d(d)
    return d if d % 4 == 1 else 4 * d


def ramified_count(d):
    return len(prime_divisors(discriminant_of(d)))


def is_sum_two_squares(d):
    d = int(d)
    if d <= 0:
        raise ValueError("only defined here for d > 0")
    return all(p % 4 != 3 or e % 2 == 0 for p, e in factor(d).items())


def _branch(d):
    d = _check_d(d)
    return "N-2" if d > 0 and not is_sum_two_squares(d) else "N-1"


def class_group_2rank(d):
    """2-rank of the class group of Q(sqrt d) from the number N of ramified primes."""
    N = ramified_count(d)
    return N - 2 if _branch(d) == "N-2" else N - 1


def vk_2rank(d):
    d = _check_d(d)
    r1, r2 = (2, 0) if d > 0 else (0, 1)
    return r1 + r2 + class_group_2rank(d)


def quadfield_summary(d):
    d = _check_d(d)
    return {"d": d, "discriminant": discriminant_of(d), "N": ramified_count(d), "branch": _branch(d),
            "two_rank": class_group_2rank(d), "vk_two_rank": vk_2rank(d)}


# --- reduced binary quadratic forms of negative discriminant ---------------------

def reduce_form(f):
    a, b, c = f
    while True:
        if c < a or (c == a and b < 0):
            a, b, c = c, -b, a
            continue
        if -a < b <= a:
            return a, b, c
        k = (a - b) // (2 * a)
        b, c = b + 2 * k * a, a * k * k + b * k + c


def compose(f, g):
    """Dirichlet composition of primitive forms of equal discriminant, reduced."""
    a1, b1, c1 = f
    a2, b2, c2 = g
    D = b1 * b1 - 4 * a1 * c1
    s = (b1 + b2) // 2
    e1, x, y = xgcd(a1, a2)
    e, p_, q_ = xgcd(e1, s)
    u, v, w = p_ * x, p_ * y, q_
    A = a1 * a2 // (e * e)
    B = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2) // e
    B %= 2 * A
    C = (B * B - D) // (4 * A)
    assert B * B - 4 * A * C == D
    return reduce_form((A, B, C))


def reduced_forms(D):
    """All primitive reduced forms (a, b, c) with b^2 - 4ac = D < 0."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                out.append((a, b, c))
        a += 1
    return out


def imaginary_class_group_oracle(d, max_abs=MAX_IMAGINARY_ORACLE):
    """Class group of Q(sqrt d), d < 0, from reduced forms; 2-rank = log2 of the 2-torsion."""
    d = _check_d(d)
    if d >= 0:
        raise ValueError("imaginary quadratic fields only")
    if -d > max_abs:
        raise ValueError(f"|d| = {-d} exceeds the oracle bound {max_abs}")
    D = discriminant_of(d)
    forms = reduced_forms(D)
    identity = reduce_form((1, D % 2, (D % 2 - D) // 4))
    torsion = sum(1 for f in forms if compose(f, f) == identity)
    rank = torsion.bit_length() - 1
    assert 1 << rank == torsion and len(forms) % torsion == 0
    return ClassGroupData(len(forms), rank, tuple(forms))


def distinct_2rank_family(count):
    """d_j = product of the first j primes = 1 mod 4, with 2-ranks 0, 1, ..., count - 1."""
    if count < 1:
        raise ValueError("count must be positive")
    primes = []
    for p in primerange(3, 10**6):
        if p % 4 == 1:
            primes.append(p)
            if len(primes) == count:
                break
    out, d = [], 1
    for p in primes:
        d *= p
        out.append(d)
    return out


def rational_function_field_inequiv(d1, d2):
    """True when Q(sqrt d1)(x) and Q(sqrt d2)(x) are provably Witt-inequivalent."""
    d1, d2 = _check_d(d1), _check_d(d2)
    if (d1 > 0) != (d2 > 0):
        return True
    return class_group_2rank(d1) != class_group_2rank(d2)


def sum_two_squares_agrees(d):
    """Cross-check is_sum_two_squares(d) against global representation by <1, 1>."""
    return is_sum_two_squares(d) == represents(1, 1, d)


def real_table_report():
    """Formula versus the committed table, flagging fields where narrow and wide 2-ranks differ."""
    rows = []
    for d, row in sorted(REAL_QUADRATIC_TABLE.items()):
        rows.append({"d": d, "formula": class_group_2rank(d), "table": row["rank"],
                     "narrow": row["rank_plus"], "narrow_differs": row["rank_plus"] != row["rank"]})
    return rows
