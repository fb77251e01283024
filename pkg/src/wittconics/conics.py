"""Function fields Q_{a,b} of conics a x^2 + b y^2 = 1.

Covers splitting and rational points, k-isomorphism, ordering extension,
certificates of Witt-inequivalence and the explicit family of four pairwise
inequivalent conic fields over Q.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from sympy.ntheory import sqrt_mod

from . import kernels
from .localglobal import (
    INF, PadicSquareClass, Place, _padic_rep, as_place, quaternion_ramification, represents, sorted_places,
)
from .numtheory import check_prime, is_square_int, square_core, squarefree_part, to_fraction

EXHAUSTIVE_LIMIT = 10**4
SMALL_SEARCH = 200
R4_ALPHABET = (-1, 2, -2)


def _core(r):
    return square_core(r)[0]


@dataclass(frozen=True)
class ConicField:
    """Q_{a,b}; a and b are stored as signed squarefree integers."""

    a: int
    b: int
    base: str = "Q"

    def __post_init__(self):
        object.__setattr__(self, "a", _core(self.a))
        object.__setattr__(self, "b", _core(self.b))

    def to_json(self):
        return {"a": str(self.a), "b": str(self.b)}

    def __str__(self):
        return f"Q_{{{self.a},{self.b}}}"


@dataclass(frozen=True)
class RationalPoint:
    x: Fraction
    y: Fraction

    def on(self, a, b):
        return to_fraction(a) * self.x ** 2 + to_fraction(b) * self.y ** 2 == 1


def splits(a, b):
    """(a, b / Q) = 1, equivalently the conic has a rational point."""
    return quaternion_ramification(a, b).is_split


def _descent(a, b):
    """Primitive non-zero (x, y, z) with a x^2 + b y^2 = z^2 (a, b squarefree), or None.

    Lagrange descent: a square root t of a mod b gives t^2 - a = b m with
    |m| < |b|, and the norm identity transports a solution for (a, m) to (a, b).
    """
    if a == 1:
        return 1, 0, 1
    if b == 1:
        return 0, 1, 1
    if abs(a) > abs(b):
        sol = _descent(b, a)
        return None if sol is None else (sol[1], sol[0], sol[2])
    if abs(b) == 1:
        return None  # a = b = -1
    t = sqrt_mod(a % abs(b), abs(b))
    if t is None:
        return None
    if t > abs(b) // 2:
        t -= abs(b)
    m = (t * t - a) // b
    m0 = squarefree_part(m)
    s = math.isqrt(m // m0)
    sol = _descent(a, m0)
    if sol is None:
        return None
    x, y, z = sol
    X, Y, Z = z + t * x, m0 * y * s, t * z + a * x
    g = math.gcd(math.gcd(X, Y), Z)
    return X // g, Y // g, Z // g


def _affine(X, Y, Z, sa, sb):
    return RationalPoint(Fraction(X, Z) / sa, Fraction(Y, Z) / sb)


def find_rational_point(a, b, bound=EXHAUSTIVE_LIMIT, backend=None):
    """A rational point of a x^2 + b y^2 = 1 whose projective coordinates are at most ``bound``.

    Small heights are enumerated first; beyond that the descent decides
    existence and, if its point is too tall, enumeration up to
    ``min(bound, 10**4)`` takes over.  Heights refer to the squarefree model.
    """
    bound = int(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    A, sa = square_core(a)
    B, sb = square_core(b)
    hit = kernels.point_search(B, A, min(bound, SMALL_SEARCH), backend=backend)
    if hit is not None:
        Y, X, Z = hit
        return _affine(X, Y, Z, sa, sb)
    if bound <= SMALL_SEARCH:
        return None
    sol = _descent(A, B)
    if sol is None:
        return None
    X, Y, Z = (abs(c) for c in sol)
    if max(X, Y, Z) <= bound:
        return _affine(X, Y, Z, sa, sb)
    hit = kernels.point_search(B, A, min(bound, EXHAUSTIVE_LIMIT), backend=backend)
    if hit is None:
        return None
    Y, X, Z = hit
    return _affine(X, Y, Z, sa, sb)


def holzer_bound(a, b):
    return 16 * max(abs(_core(a)), abs(_core(b))) ** 2


# --- exact polynomial helpers (coefficient lists, lowest degree first) ---------

def _padd(f, g):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return [x + y for x, y in zip(f, g)]


def _pmul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] += x * y
    return out


def _pscale(c, f):
    return [c * x for x in f]


@dataclass(frozen=True)
class Parametrization:
    """x = x_num(z) / den(z), y = y_num(z) / den(z); ``swapped`` marks the alternate chart."""

    x_num: tuple
    y_num: tuple
    den: tuple
    swapped: bool = False

    def at(self, z):
        ev = lambda f: sum(c * z ** i for i, c in enumerate(f))
        d = ev(self.den)
        return RationalPoint(ev(self.x_num) / d, ev(self.y_num) / d)


def conic_identity_holds(a, b, par):
    a, b = to_fraction(a), to_fraction(b)
    lhs = _padd(_pscale(a, _pmul(par.x_num, par.x_num)), _pscale(b, _pmul(par.y_num, par.y_num)))
    rhs = _pmul(par.den, par.den)
    return all(c == 0 for c in _padd(lhs, _pscale(-1, rhs)))


def _chart(a, b, p, q):
    # line through (p, q) with slope z meets the conic again at
    # x = (b p z^2 - 2 b q z - a p) / (b z^2 + a), y = (a q - 2 a p z - b q z^2) / (b z^2 + a)
    x_num = (-a * p, -2 * b * q, b * p)
    y_num = (a * q, -2 * a * p, -b * q)
    den = (a, Fraction(0), b)
    return x_num, y_num, den


def parametrize(a, b, p0):
    """Rational parametrisation of the conic from the point p0, with z = (y - q) / (x - p)."""
    a, b = to_fraction(a), to_fraction(b)
    if not p0.on(a, b):
        raise ValueError("p0 is not on the conic")
    x_num, y_num, den = _chart(a, b, p0.x, p0.y)
    swapped = False
    if _is_constant_ratio(x_num, den) or _is_constant_ratio(y_num, den):
        y2, x2, den = _chart(b, a, p0.y, p0.x)
        x_num, y_num, swapped = x2, y2, True
    par = Parametrization(tuple(x_num), tuple(y_num), tuple(den), swapped)
    if not conic_identity_holds(a, b, par):
        raise AssertionError("parametrisation does not satisfy the conic identity")
    return par


def _is_constant_ratio(f, g):
    # f / g constant iff f * g' - f' * g == 0 as polynomials; here via cross products of coefficients
    return all(f[i] * g[j] == f[j] * g[i] for i in range(3) for j in range(3))


def conic_isomorphic(a, b, c, d):
    return quaternion_ramification(a, b) == quaternion_ramification(c, d)


def quaternion_splits_over_conic(r, s, a, b):
    """Only the split algebra and (a, b / Q) itself split over Q_{a,b}."""
    R = quaternion_ramification(r, s)
    return R.is_split or R == quaternion_ramification(a, b)


# --- orderings ----------------------------------------------------------------

def _sign_real_quadratic(u, v, d, s):
    """Sign of u + s v sqrt(d) (d > 0 squarefree, s = +/-1), exactly."""
    u, v = to_fraction(u), to_fraction(v) * s
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0 or (u > 0) == (v > 0):
        return 1 if (u > 0 or (u == 0 and v > 0)) else -1
    # opposite signs: compare u^2 with v^2 d
    big_u = u * u > v * v * d
    return ((u > 0) - (u < 0)) if big_u else ((v > 0) - (v < 0))


def _as_pair(x):
    if isinstance(x, tuple):
        return to_fraction(x[0]), to_fraction(x[1])
    return to_fraction(x), Fraction(0)


def orderings_extending(a, b, base="Q"):
    """Number of orderings of the base at which a > 0 or b > 0.

    ``base`` is ``"Q"`` or a squarefree integer d for Q(sqrt d); elements of
    Q(sqrt d) are pairs ``(u, v)`` meaning u + v sqrt(d).
    """
    ua, va = _as_pair(a)
    ub, vb = _as_pair(b)
    if (ua, va) == (0, 0) or (ub, vb) == (0, 0):
        raise ValueError("a and b must be non-zero")
    if base in ("Q", None, 1):
        if va or vb:
            raise ValueError("irrational element over Q")
        return int(ua > 0 or ub > 0)
    d = int(base)
    if is_square_int(abs(d)) or squarefree_part(d) != d:
        raise ValueError("d must be squarefree and not 0 or 1")
    if d < 0:
        return 0
    return sum(
        1 for s in (1, -1)
        if _sign_real_quadratic(ua, va, d, s) > 0 or _sign_real_quadratic(ub, vb, d, s) > 0
    )


# --- certificates -------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    kind: str
    data: dict
    inputs: tuple

    def to_json(self):
        return {"kind": self.kind, "data": _stringify(self.data),
                "inputs": dict(zip("abcd", (str(x) for x in self.inputs)))}

    @property
    def separates(self):
        return self.kind != "Indistinguishable"


def _stringify(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, dict):
        return {k: _stringify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_stringify(v) for v in x]
    return x


def certificate_from_json(obj):
    def ints(x):
        if isinstance(x, str):
            try:
                return int(x)
            except ValueError:
                return x
        if isinstance(x, dict):
            # ramification lists hold place labels, which stay strings
            return {k: v if k.startswith("ram") else ints(v) for k, v in x.items()}
        if isinstance(x, list):
            return [ints(v) for v in x]
        return x
    inputs = tuple(int(obj["inputs"][k]) for k in "abcd")
    return Certificate(obj["kind"], ints(obj["data"]), inputs)


def _ram_labels(r, s):
    return quaternion_ramification(r, s).labels()


def _T(a, b):
    return [[r, s] for r, s in product(R4_ALPHABET, repeat=2) if quaternion_splits_over_conic(r, s, a, b)]


def _swap2(pairs):
    sw = {-1: -1, 2: -2, -2: 2}
    return sorted([sw[r], sw[s]] for r, s in pairs)


def _sym_diff(S, T):
    S = {tuple(x) for x in S}
    T = {tuple(x) for x in T}
    return sorted(list(x) for x in S ^ T)


def witt_distinguish(a, b, c, d):
    """First applicable rule R1-R4 separating Q_{a,b} from Q_{c,d}, else Indistinguishable.

    R1 ordering counts differ; R2 exactly one algebra splits; R3 (-1,-1) splits
    over exactly one field; R4 the split sets over {-1, 2, -2}^2 differ both as
    they stand and after swapping 2 <-> -2.
    """
    a, b, c, d = (_core(x) for x in (a, b, c, d))
    inputs = (a, b, c, d)
    nK, nL = orderings_extending(a, b), orderings_extending(c, d)
    if nK != nL:
        return Certificate("OrderingCount", {"n_K": nK, "n_L": nL, "sign_agreement": "real place"}, inputs)
    ramK, ramL = _ram_labels(a, b), _ram_labels(c, d)
    if (not ramK) != (not ramL):
        return Certificate("SplitVsNonsplit", {"ram_K": ramK, "ram_L": ramL}, inputs)
    sK = quaternion_splits_over_conic(-1, -1, a, b)
    sL = quaternion_splits_over_conic(-1, -1, c, d)
    if sK != sL:
        return Certificate("QuaternionObstruction", {
            "rule": "R3", "witness": [[-1, -1]], "ram_witness": [_ram_labels(-1, -1)],
            "ram_K": ramK, "ram_L": ramL, "splits_K": sK, "splits_L": sL,
        }, inputs)
    TK, TL = _T(a, b), _T(c, d)
    plain, swapped = _sym_diff(TK, TL), _sym_diff(_swap2(TK), TL)
    if plain and swapped:
        return Certificate("QuaternionObstruction", {
            "rule": "R4", "T_K": TK, "T_L": TL, "ram_K": ramK, "ram_L": ramL,
            "witness": [plain[0], swapped[0]],
        }, inputs)
    return Certificate("Indistinguishable", {}, inputs)


def verify_certificate(cert, a, b, c, d):
    """Recheck the claims carried by ``cert`` for (a, b, c, d) from scratch."""
    inputs = tuple(_core(x) for x in (a, b, c, d))
    if tuple(cert.inputs) != inputs:
        raise ValueError(f"certificate issued for {cert.inputs}, not {inputs}")
    a, b, c, d = inputs
    D = cert.data
    try:
        if cert.kind == "Indistinguishable":
            return True
        if cert.kind == "OrderingCount":
            return (D["n_K"] == orderings_extending(a, b) and D["n_L"] == orderings_extending(c, d)
                    and D["n_K"] != D["n_L"])
        ramK, ramL = _ram_labels(a, b), _ram_labels(c, d)
        if D["ram_K"] != ramK or D["ram_L"] != ramL:
            return False
        if cert.kind == "SplitVsNonsplit":
            return (not ramK) != (not ramL)
        if cert.kind != "QuaternionObstruction":
            return False
        if D["rule"] == "R3":
            ok_K = not _ram_labels(-1, -1) or _ram_labels(-1, -1) == ramK
            ok_L = not _ram_labels(-1, -1) or _ram_labels(-1, -1) == ramL
            return (ok_K, ok_L) == (D["splits_K"], D["splits_L"]) and ok_K != ok_L
        if D["rule"] == "R4":
            TK, TL = _T(a, b), _T(c, d)
            if D["T_K"] != TK or D["T_L"] != TL:
                return False
            w1, w2 = D["witness"]
            in_K = lambda w, S: list(w) in S
            return in_K(w1, TK) != in_K(w1, TL) and in_K(w2, _swap2(TK)) != in_K(w2, TL)
    except (KeyError, TypeError, ValueError):
        return False
    return False


# --- weak approximation and the witness family ---------------------------------

def _target(place, t):
    if place.is_infinite:
        if t in ("+", 1, "+1"):
            return 1
        if t in ("-", -1, "-1"):
            return -1
        return 1 if to_fraction(t) > 0 else -1
    if isinstance(t, PadicSquareClass):
        if t.p != place.p:
            raise ValueError(f"class at {t.p} given for place {place.p}")
        return t.rep
    return _padic_rep(t, place.p)


def weak_approx(conditions):
    """Least |n| (positive first on ties) whose local classes match every condition.

    ``conditions`` is a list of ``(place, target)``; a target is a sign for the
    real place and a rational or :class:`PadicSquareClass` at a prime.
    """
    want = {}
    for place, t in conditions:
        place = as_place(place)
        tgt = _target(place, t)
        if want.get(place, tgt) != tgt:
            raise ValueError(f"contradictory conditions at {place}")
        want[place] = tgt
    limit = 32
    for v in want:
        if not v.is_infinite:
            limit *= v.p ** 2
    for m in range(1, limit + 1):
        for n in (m, -m):
            if all(_target(v, n) == t for v, t in want.items()):
                return n
    raise AssertionError("weak approximation search exhausted; conditions inconsistent")


@dataclass(frozen=True)
class WitnessSet:
    fields: tuple
    certificates: dict  # (i, j) with i < j -> Certificate
    construction: dict = field(default_factory=dict)

    def to_json(self):
        n = len(self.fields)
        matrix = [[self.certificates[(i, j)].to_json() if i < j else None for j in range(n)] for i in range(n)]
        return {"fields": [f.to_json() for f in self.fields], "certificates": matrix,
                "construction": _stringify(self.construction)}


def _finite_ramified(a, b, exclude=()):
    return min(v.p for v in quaternion_ramification(a, b).places if not v.is_infinite and v.p not in exclude)


def witness_set(base="Q", workers=4):
    """At least r + 3 = 4 pairwise Witt-inequivalent conic fields over Q, each pair certified."""
    if base != "Q":
        raise ValueError("the witness family is implemented over Q only")
    a0, a1 = -1, 1
    p = _finite_ramified(a0, -1)
    abar = weak_approx([(p, 1), (INF, "-")])
    q = _finite_ramified(abar, -1, exclude=(p,))
    b1 = weak_approx([(INF, "+"), (p, a0)])
    b0 = weak_approx([(INF, "-"), (p, a0), (q, -abar)])
    fields = (ConicField(a0, -1), ConicField(a1, -1), ConicField(b1, -1), ConicField(b0, -1))
    pairs = list(combinations(range(len(fields)), 2))

    def certify(ij):
        i, j = ij
        K, L = fields[i], fields[j]
        cert = witt_distinguish(K.a, K.b, L.a, L.b)
        if not cert.separates or not verify_certificate(cert, K.a, K.b, L.a, L.b):
            raise RuntimeError(f"failed to certify {K} vs {L}: implementation bug")
        return cert

    with ThreadPoolExecutor(max_workers=workers) as pool:
        certs = dict(zip(pairs, pool.map(certify, pairs)))
    construction = {"p": p, "q": q, "a_bar": abar, "b_1": b1, "b_0": b0}
    return WitnessSet(fields, certs, construction)
