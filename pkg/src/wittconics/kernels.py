"""Brute-force inner loops: hyperfield axiom sweeps, conic point search and
Hensel-witness search for local isotropy.

Every kernel exists twice: an explicit-loop version compiled with numba and a
vectorised numpy version.  ``WITTCONICS_NUMBA=0`` selects numpy.  Both return
the first witness in lexicographic order, so they are interchangeable.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

NONE3 = (-1, -1, -1)
# largest |coefficient| * H**2 the int64 point search accepts
POINT_SEARCH_LIMIT = 2**62


# --- hyperfield axiom sweeps -------------------------------------------------
# ``add`` is a uint8 tensor with add[a, b, c] == 1 iff c is in a + b.

@njit
def _assoc_loop(add):
    n = add.shape[0]
    left = np.zeros(n, np.uint8)
    right = np.zeros(n, np.uint8)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                left[:] = 0
                right[:] = 0
                for x in range(n):
                    if add[a, b, x]:
                        for y in range(n):
                            if add[x, c, y]:
                                left[y] = 1
                    if add[b, c, x]:
                        for y in range(n):
                            if add[a, x, y]:
                                right[y] = 1
                for y in range(n):
                    if left[y] != right[y]:
                        return a, b, c
    return -1, -1, -1


def _assoc_np(add):
    n = add.shape[0]
    A = add.astype(np.int32)
    flat_xcy = A.reshape(n, n * n)
    flat_bcx = A.reshape(n * n, n)
    for a in range(n):
        left = (A[a] @ flat_xcy).reshape(n, n, n) > 0
        right = (flat_bcx @ A[a]).reshape(n, n, n) > 0
        bad = np.argwhere((left != right).any(axis=2))
        if len(bad):
            return a, int(bad[0][0]), int(bad[0][1])
    return NONE3


@njit
def _reversibility_loop(add, neg):
    n = add.shape[0]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if add[a, b, c] and not add[c, neg[b], a]:
                    return a, b, c
    return -1, -1, -1


def _reversibility_np(add, neg):
    back = add[:, neg, :].transpose(2, 1, 0)
    bad = np.argwhere((add > 0) & (back == 0))
    if len(bad):
        return tuple(int(t) for t in bad[0])
    return NONE3


@njit
def _distributivity_loop(add, mul):
    n = add.shape[0]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                ab = mul[a, b]
                ac = mul[a, c]
                for y in range(n):
                    if add[b, c, y] and not add[ab, ac, mul[a, y]]:
                        return a, b, c
    return -1, -1, -1


def _distributivity_np(add, mul):
    n = add.shape[0]
    A = add.astype(np.int32)
    idx = np.arange(n)
    for a in range(n):
        P = np.zeros((n, n), np.int32)
        P[idx, mul[a]] = 1
        lhs = (A.reshape(n * n, n) @ P).reshape(n, n, n) > 0
        rhs = add[mul[a][:, None], mul[a][None, :], :] > 0
        bad = np.argwhere((lhs & ~rhs).any(axis=2))
        if len(bad):
            return a, int(bad[0][0]), int(bad[0][1])
    return NONE3


# --- rational points on a*X^2 + b*Y^2 = Z^2 -----------------------------------

@njit
def _isqrt_i64(n):
    s = np.int64(np.sqrt(np.float64(n)))
    while s * s > n:
        s -= 1
    while (s + 1) * (s + 1) <= n:
        s += 1
    return s


@njit
def _point_search_loop(a, b, H):
    for Z in range(1, H + 1):
        Z2 = Z * Z
        for X in range(0, H + 1):
            if a > 0 and b > 0 and a * X * X > Z2:
                break
            r = Z2 - a * X * X
            if r % b != 0:
                continue
            y2 = r // b
            if y2 < 0:
                continue
            y = _isqrt_i64(y2)
            if y * y == y2 and y <= H:
                return X, y, Z
    return -1, -1, -1


def _point_search_np(a, b, H):
    X = np.arange(H + 1, dtype=np.int64)
    aX2 = a * X * X
    for Z in range(1, H + 1):
        r = Z * Z - aX2
        ok = (r % b) == 0
        y2 = np.where(ok, r // b, -1)
        ok &= y2 >= 0
        s = np.sqrt(np.maximum(y2, 0).astype(np.float64)).astype(np.int64)
        s -= (s * s > y2)
        s += ((s + 1) * (s + 1) <= y2)
        ok &= (s * s == y2) & (s <= H)
        hit = np.flatnonzero(ok)
        if len(hit):
            i = int(hit[0])
            return i, int(s[i]), Z
    return NONE3


# --- Hensel witnesses for c0*x^2 + c1*y^2 + c2*z^2 = 0 over Z_p -----------------

@njit
def _vmod(x, p, k):
    if x == 0:
        return k
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@njit
def _local_witness_loop(c0, c1, c2, p, k):
    M = p ** k
    base = 1 if p == 2 else 0
    coefs = np.array([c0 % M, c1 % M, c2 % M], np.int64)
    vc = np.array([_vmod(coefs[0], p, k), _vmod(coefs[1], p, k), _vmod(coefs[2], p, k)], np.int64)
    # best[l, r]: least valuation of t with coefs[l] * t^2 == r mod M
    best = np.full((3, M), -1, np.int64)
    for l in range(3):
        for t in range(M):
            r = (coefs[l] * ((t * t) % M)) % M
            vt = _vmod(t, p, k)
            if best[l, r] < 0 or vt < best[l, r]:
                best[l, r] = vt
    for i in range(3):
        j = (i + 1) % 3
        l = (i + 2) % 3
        ei = base + vc[i]
        for xj in range(M):
            val = (coefs[i] + coefs[j] * ((xj * xj) % M)) % M
            vl = best[l, (M - val) % M]
            if vl < 0:
                continue
            e = min(ei, base + vc[j] + _vmod(xj, p, k), base + vc[l] + vl)
            if 2 * e + 1 <= k:
                return True
    return False


def _valuations_np(x, p, k):
    v = np.zeros_like(x)
    rest = x.copy()
    live = rest != 0
    for _ in range(k):
        div = live & (rest % p == 0)
        if not div.any():
            break
        v[div] += 1
        rest[div] //= p
        live = div
    v[x == 0] = k
    return v


def _local_witness_np(c0, c1, c2, p, k):
    M = p ** k
    base = 1 if p == 2 else 0
    coefs = [c % M for c in (c0, c1, c2)]
    vc = [int(_valuations_np(np.array([c], np.int64), p, k)[0]) for c in coefs]
    t = np.arange(M, dtype=np.int64)
    vt = _valuations_np(t, p, k)
    sq = (t * t) % M
    best = []
    for c in coefs:
        tab = np.full(M, k + 1, np.int64)
        np.minimum.at(tab, (c * sq) % M, vt)
        tab[tab > k] = -1
        best.append(tab)
    for i in range(3):
        j, l = (i + 1) % 3, (i + 2) % 3
        val = (coefs[i] + coefs[j] * sq) % M
        vl = best[l][(M - val) % M]
        e = np.minimum(np.minimum(base + vc[i], base + vc[j] + vt), base + vc[l] + vl)
        if np.any((vl >= 0) & (2 * e + 1 <= k)):
            return True
    return False


BACKENDS = {
    "numpy": {
        "assoc": _assoc_np,
        "reversibility": _reversibility_np,
        "distributivity": _distributivity_np,
        "point_search": _point_search_np,
        "local_witness": _local_witness_np,
    },
    "numba": {
        "assoc": _assoc_loop,
        "reversibility": _reversibility_loop,
        "distributivity": _distributivity_loop,
        "point_search": _point_search_loop,
        "local_witness": _local_witness_loop,
    },
}


def _impl(name, backend=None):
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    return BACKENDS[backend][name]


def assoc_violation(add, backend=None):
    return tuple(int(t) for t in _impl("assoc", backend)(np.ascontiguousarray(add, np.uint8)))


def reversibility_violation(add, neg, backend=None):
    return tuple(int(t) for t in _impl("reversibility", backend)(
        np.ascontiguousarray(add, np.uint8), np.ascontiguousarray(neg, np.int64)))


def distributivity_violation(add, mul, backend=None):
    return tuple(int(t) for t in _impl("distributivity", backend)(
        np.ascontiguousarray(add, np.uint8), np.ascontiguousarray(mul, np.int64)))


def point_search(a, b, H, backend=None):
    """Smallest-Z primitive (X, Y, Z), 0 <= X, Y <= H, 1 <= Z <= H, with a X^2 + b Y^2 = Z^2.

    Returns ``None`` if there is none in the box.
    """
    a, b, H = int(a), int(b), int(H)
    if b == 0 or a == 0:
        raise ValueError("coefficients must be non-zero")
    if max(abs(a), abs(b), 1) * (H + 1) ** 2 >= POINT_SEARCH_LIMIT:
        raise OverflowError("search box too large for the int64 kernel")
    X, Y, Z = _impl("point_search", backend)(np.int64(a), np.int64(b), np.int64(H))
    if Z < 0:
        return None
    return int(X), int(Y), int(Z)


def local_witness(coefs, p, k, backend=None):
    """True iff c0 x^2 + c1 y^2 + c2 z^2 has a Hensel-liftable zero mod p**k."""
    c0, c1, c2 = (int(c) for c in coefs)
    return bool(_impl("local_witness", backend)(np.int64(c0), np.int64(c1), np.int64(c2), np.int64(p), np.int64(k)))
