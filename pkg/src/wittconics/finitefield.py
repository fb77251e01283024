"""Small finite fields F_q, q = p**n, as integer-coded lookup tables."""
from functools import lru_cache
from itertools import product

import numpy as np
from sympy import factorint

from .hyperfield import FiniteHyperfield


def _polymulmod(f, g, mod, p):
    # coefficient lists, lowest degree first; mod is monic of degree n
    n = len(mod) - 1
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    for d in range(len(out) - 1, n - 1, -1):
        c = out[d]
        if c:
            for k in range(n + 1):
                out[d - n + k] = (out[d - n + k] - c * mod[k]) % p
    return (out + [0] * n)[:n]


def _irreducible(p, n):
    if n == 1:
        return [0, 1]
    # monic degree-n polynomial with no factor of degree <= n // 2
    for tail in product(range(p), repeat=n):
        mod = list(tail) + [1]
        if mod[0] == 0:
            continue
        if not any(_divides(g, mod, p) for d in range(1, n // 2 + 1) for g in _monics(p, d)):
            return mod
    raise AssertionError("no irreducible polynomial found")


def _monics(p, d):
    for tail in product(range(p), repeat=d):
        yield list(tail) + [1]


def _divides(g, f, p):
    r = list(f)
    dg = len(g) - 1
    while len(r) - 1 >= dg and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dg:
            break
        c = r[-1]
        shift = len(r) - 1 - dg
        for k in range(dg + 1):
            r[shift + k] = (r[shift + k] - c * g[k]) % p
        while r and r[-1] == 0:
            r.pop()
    return not any(r)


@lru_cache(maxsize=None)
def gf_tables(q):
    """Addition and multiplication tables of F_q on codes 0..q-1 (base-p digits)."""
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, n), = f.items()
    digits = [[(x // p ** i) % p for i in range(n)] for x in range(q)]

    def code(v):
        return sum(c * p ** i for i, c in enumerate(v))

    mod = _irreducible(p, n)
    add = np.array([[code([(a + b) % p for a, b in zip(digits[x], digits[y])]) for y in range(q)] for x in range(q)], np.int64)
    mul = np.array([[code(_polymulmod(digits[x], digits[y], mod, p)) for y in range(q)] for x in range(q)], np.int64)
    add.setflags(write=False)
    mul.setflags(write=False)
    return add, mul


def field_as_hyperfield(q):
    """F_q with singleton sums."""
    add, mul = gf_tables(q)
    neg = [int(np.flatnonzero(add[x] == 0)[0]) for x in range(q)]
    return FiniteHyperfield.from_tables(
        [str(x) for x in range(q)], 1, neg, mul.tolist(), [[{int(add[x, y])} for y in range(q)] for x in range(q)]
    )


def squares(q):
    add, mul = gf_tables(q)
    return sorted({int(mul[x, x]) for x in range(1, q)})
