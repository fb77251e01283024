"""Tabled and oracle-backed hyperfields.

A :class:`FiniteHyperfield` stores every operation as an explicit table over
element indices, with index 0 the zero element.  An :class:`OracleHyperfield`
only knows how to decide ``c in a + b`` and is used for infinite carriers such
as the square classes of Q.
"""
import json
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Hashable

import numpy as np

from . import kernels

AXIOMS = ("I(1)", "I(2)", "I(3)", "I(4)", "II(1)", "II(2)", "II(3)", "III", "IV", "V")


class HyperfieldStructureError(ValueError):
    """Table is malformed (non-total, unknown index, ...), as opposed to failing an axiom."""


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def to_json(self):
        return {"axiom": self.axiom, "witness": list(self.witness)}


@dataclass(frozen=True)
class FiniteHyperfield:
    elements: tuple
    one: int
    neg: tuple
    mul: tuple
    add: tuple

    def __post_init__(self):
        _check_structure(self.elements, self.one, self.neg, self.mul, self.add)

    @classmethod
    def from_tables(cls, elements, one, neg, mul, add):
        return cls(
            tuple(str(e) for e in elements),
            int(one),
            tuple(int(x) for x in neg),
            tuple(tuple(int(x) for x in row) for row in mul),
            tuple(tuple(frozenset(int(x) for x in s) for s in row) for row in add),
        )

    @property
    def n(self):
        return len(self.elements)

    @property
    def zero(self):
        return 0

    @property
    def nonzero(self):
        return range(1, self.n)

    def neg_of(self, a):
        return self.neg[a]

    def times(self, a, b):
        return self.mul[a][b]

    def plus(self, a, b):
        return self.add[a][b]

    def contains(self, c, a, b):
        return c in self.add[a][b]

    def sumset(self, A, B):
        out = set()
        for a in A:
            for b in B:
                out |= self.add[a][b]
        return frozenset(out)

    def inverse(self, a):
        for b in range(self.n):
            if self.mul[a][b] == self.one:
                return b
        raise ValueError(f"{self.elements[a]} has no inverse")

    def index(self, label):
        return self.elements.index(str(label))

    def add_tensor(self):
        T = np.zeros((self.n, self.n, self.n), np.uint8)
        for a in range(self.n):
            for b in range(self.n):
                T[a, b, list(self.add[a][b])] = 1
        return T

    def to_json(self):
        return {
            "elements": list(self.elements),
            "one": self.one,
            "neg": list(self.neg),
            "mul": [list(r) for r in self.mul],
            "add": [[sorted(s) for s in r] for r in self.add],
        }

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise HyperfieldStructureError("top level: expected a JSON object")
        for key in ("elements", "one", "neg", "mul", "add"):
            if key not in obj:
                raise HyperfieldStructureError(f"missing key {key!r}")
        _strict_ints(obj["one"], "one")
        _strict_ints(obj["neg"], "neg", depth=1)
        _strict_ints(obj["mul"], "mul", depth=2)
        _strict_ints(obj["add"], "add", depth=3)
        if not isinstance(obj["elements"], list):
            raise HyperfieldStructureError("elements: expected an array")
        return cls.from_tables(obj["elements"], obj["one"], obj["neg"], obj["mul"], obj["add"])

    def __str__(self):
        e = self.elements
        lines = []
        for a in range(1, self.n):
            for b in range(a, self.n):
                s = ", ".join(e[c] for c in sorted(self.add[a][b]))
                lines.append(f"{e[a]} + {e[b]} = {{{s}}}")
        return "\n".join(lines)


def _strict_ints(x, where, depth=0):
    if depth == 0:
        if not isinstance(x, int) or isinstance(x, bool):
            raise HyperfieldStructureError(f"{where}: expected an integer index, got {x!r}")
        return
    if not isinstance(x, list):
        raise HyperfieldStructureError(f"{where}: expected an array")
    for i, y in enumerate(x):
        _strict_ints(y, f"{where}[{i}]", depth - 1)


def _check_structure(elements, one, neg, mul, add):
    n = len(elements)
    if n == 0:
        raise HyperfieldStructureError("elements: empty carrier")

    def idx(x, where):
        if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
            raise HyperfieldStructureError(f"{where}: unknown element index {x!r}")
        return x

    idx(one, "one")
    if len(neg) != n:
        raise HyperfieldStructureError(f"neg: expected {n} entries, got {len(neg)}")
    for i, x in enumerate(neg):
        idx(x, f"neg[{i}]")
    if neg[0] != 0:
        raise HyperfieldStructureError("neg[0]: negation must fix zero")
    for i, x in enumerate(neg):
        if neg[x] != i:
            raise HyperfieldStructureError(f"neg[{i}]: negation is not an involution")
    for name, table in (("mul", mul), ("add", add)):
        if len(table) != n:
            raise HyperfieldStructureError(f"{name}: expected {n} rows, got {len(table)}")
        for i, row in enumerate(table):
            if len(row) != n:
                raise HyperfieldStructureError(f"{name}[{i}]: expected {n} entries, got {len(row)}")
    for i, row in enumerate(mul):
        for j, x in enumerate(row):
            idx(x, f"mul[{i}][{j}]")
    for i, row in enumerate(add):
        for j, s in enumerate(row):
            if not s:
                raise HyperfieldStructureError(f"add[{i}][{j}]: empty sum")
            for x in s:
                idx(x, f"add[{i}][{j}]")


def verify_axioms(H):
    """Check axioms I(1)-(4), II(1)-(3), III, IV, V exhaustively.

    Returns the list of violations, at most one (the first found) per axiom.
    """
    n = H.n
    report = []
    T = H.add_tensor()
    neg = np.array(H.neg, np.int64)
    mul = np.array(H.mul, np.int64)

    w = kernels.reversibility_violation(T, neg)
    if w[0] >= 0:
        report.append(Violation("I(1)", w))
    for a, b in product(range(n), repeat=2):
        if (a in H.add[b][0]) != (a == b):
            report.append(Violation("I(2)", (a, b)))
            break
    w = kernels.assoc_violation(T)
    if w[0] >= 0:
        report.append(Violation("I(3)", w))
    for a, b in product(range(n), repeat=2):
        if H.add[a][b] != H.add[b][a]:
            report.append(Violation("I(4)", (a, b)))
            break
    for a, b, c in product(range(n), repeat=3):
        if mul[mul[a, b], c] != mul[a, mul[b, c]]:
            report.append(Violation("II(1)", (a, b, c)))
            break
    for a, b in product(range(n), repeat=2):
        if mul[a, b] != mul[b, a]:
            report.append(Violation("II(2)", (a, b)))
            break
    for a in range(n):
        if mul[a, H.one] != a:
            report.append(Violation("II(3)", (a,)))
            break
    for a in range(n):
        if mul[a, 0] != 0:
            report.append(Violation("III", (a,)))
            break
    w = kernels.distributivity_violation(T, mul)
    if w[0] >= 0:
        report.append(Violation("IV", w))
    if H.one == 0:
        report.append(Violation("V", (0,)))
    else:
        for a in range(1, n):
            if H.one not in H.mul[a]:
                report.append(Violation("V", (a,)))
                break
    return report


@dataclass(frozen=True)
class OracleHyperfield:
    """Hyperfield over a possibly infinite carrier of canonical representatives."""

    name: str
    canon: Callable[[Hashable], Hashable]
    member: Callable[[Hashable, Hashable, Hashable], bool]
    times_: Callable[[Hashable, Hashable], Hashable]
    neg_: Callable[[Hashable], Hashable]
    zero: Hashable = 0
    one: Hashable = 1
    label: Callable[[Hashable], str] = str

    def neg_of(self, a):
        return self.neg_(self.canon(a))

    def times(self, a, b):
        return self.times_(self.canon(a), self.canon(b))

    def contains(self, c, a, b):
        return self.member(self.canon(c), self.canon(a), self.canon(b))

    def tabulate(self, carrier):
        """Tabulate on a finite carrier (must be closed; zero first, one included)."""
        carrier = [self.canon(x) for x in carrier]
        if carrier[0] != self.zero:
            raise ValueError("carrier must start with the zero element")
        pos = {x: i for i, x in enumerate(carrier)}
        try:
            neg = [pos[self.neg_(x)] for x in carrier]
            mul = [[pos[self.times_(x, y)] for y in carrier] for x in carrier]
        except KeyError as exc:
            raise ValueError(f"carrier not closed: {exc}") from exc
        add = [[{pos[z] for z in carrier if self.member(z, x, y)} for y in carrier] for x in carrier]
        return FiniteHyperfield.from_tables([self.label(x) for x in carrier], pos[self.one], neg, mul, add)


@dataclass(frozen=True)
class SubgroupSelection:
    parent: object
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    def validate(self):
        H, T = self.parent, self.members
        if not T or H.one not in T:
            raise ValueError("subgroup must contain 1")
        if H.zero in T:
            raise ValueError("subgroup must consist of non-zero elements")
        for s in T:
            if H.inverse(s) not in T:
                raise ValueError(f"not closed under inverses at {H.elements[s]}")
            for t in T:
                if H.times(s, t) not in T:
                    raise ValueError(f"not multiplicatively closed at {H.elements[s]}*{H.elements[t]}")
        return self


def subgroup(H, members):
    """Build and validate a subgroup selection; members may be indices or labels."""
    idx = [m if isinstance(m, int) else H.index(m) for m in members]
    return SubgroupSelection(H, frozenset(idx)).validate()


@dataclass(frozen=True)
class MorphismTable:
    source: object
    target: object
    map: object  # tuple of target indices for a tabled source, else a callable
    samples: tuple = field(default=())

    def __call__(self, x):
        if callable(self.map):
            return self.map(x)
        return self.map[x]

    def domain(self):
        if isinstance(self.source, FiniteHyperfield):
            return tuple(range(self.source.n))
        if not self.samples:
            raise ValueError("oracle source needs sample elements")
        return tuple(self.source.canon(s) for s in self.samples)


def _require_total(f):
    if isinstance(f.source, FiniteHyperfield) and not callable(f.map):
        if len(f.map) != f.source.n:
            raise HyperfieldStructureError("morphism map is not total on the source carrier")
        if isinstance(f.target, FiniteHyperfield):
            for i, y in enumerate(f.map):
                if not isinstance(y, int) or not 0 <= y < f.target.n:
                    raise HyperfieldStructureError(f"map[{i}]: unknown target index {y!r}")


def _target_sum_contains(tgt, c, a, b):
    return tgt.contains(c, a, b)


def is_morphism(f, isomorphism=False):
    """All five morphism conditions at every (sampled) tuple.

    With ``isomorphism=True`` additionally require a bijection whose inverse is
    a morphism (tabled hyperfields only).
    """
    _require_total(f)
    S, D = f.source, f.domain()
    tgt = f.target
    if f(S.zero) != tgt.zero or f(S.one) != tgt.one:
        return False
    for a in D:
        if f(S.neg_of(a)) != tgt.neg_of(f(a)):
            return False
    for a, b in product(D, repeat=2):
        if f(S.times(a, b)) != tgt.times(f(a), f(b)):
            return False
    for a, b, c in product(D, repeat=3):
        if S.contains(c, a, b) and not tgt.contains(f(c), f(a), f(b)):
            return False
    if not isomorphism:
        return True
    if not (isinstance(S, FiniteHyperfield) and isinstance(tgt, FiniteHyperfield)):
        raise ValueError("isomorphism check needs tabled hyperfields")
    if sorted(f.map) != list(range(tgt.n)) or S.n != tgt.n:
        return False
    inv = [0] * tgt.n
    for x, y in enumerate(f.map):
        inv[y] = x
    return is_morphism(MorphismTable(tgt, S, tuple(inv)))


def is_isomorphism(f):
    return is_morphism(f, isomorphism=True)


def find_isomorphisms(H1, H2, bound=16):
    """Every hyperfield isomorphism H1 -> H2, by backtracking with 0, 1, -1 fixed first."""
    for H in (H1, H2):
        if H.n - 1 > bound:
            raise ValueError(f"carrier has {H.n - 1} non-zero elements, above the bound {bound}")
    if H1.n != H2.n:
        return []
    n = H1.n
    first = [0, H1.one, H1.neg[H1.one]]
    order = list(dict.fromkeys(first + list(range(n))))
    forced = {0: 0, H1.one: H2.one, H1.neg[H1.one]: H2.neg[H2.one]}
    if len(set(forced)) != len(set(forced.values())):
        return []
    found = []
    f = {}

    def consistent(x):
        fx = f[x]
        nx = H1.neg[x]
        if nx in f and f[nx] != H2.neg[fx]:
            return False
        for y, fy in f.items():
            xy = H1.mul[x][y]
            if xy in f and f[xy] != H2.mul[fx][fy]:
                return False
            for z, fz in f.items():
                if (z in H1.add[x][y]) != (fz in H2.add[fx][fy]):
                    return False
                if (x in H1.add[y][z]) != (fx in H2.add[fy][fz]):
                    return False
        return True

    def extend(k):
        if k == n:
            m = MorphismTable(H1, H2, tuple(f[i] for i in range(n)))
            if is_morphism(m, isomorphism=True):
                found.append(m)
            return
        x = order[k]
        cands = [forced[x]] if x in forced else [y for y in range(1, n) if y not in f.values()]
        for y in cands:
            f[x] = y
            if consistent(x):
                extend(k + 1)
            del f[x]

    extend(0)
    return found


def _quotient(H, T):
    T.validate()
    Tm = sorted(T.members)
    cls = {}
    reps = []
    for a in range(H.n):
        if a in cls:
            continue
        k = len(reps)
        reps.append(a)
        for t in Tm:
            cls.setdefault(H.times(a, t), k)
    # ``as = bt`` reduces to ``a in bT`` because T is a group
    classes = [sorted(x for x in cls if cls[x] == k) for k in range(len(reps))]
    m = len(reps)
    neg = [cls[H.neg[r]] for r in reps]
    mul = [[cls[H.times(r, s)] for s in reps] for r in reps]
    add = [[set() for _ in range(m)] for _ in range(m)]
    for i, j in product(range(m), repeat=2):
        b, c = reps[i], reps[j]
        for t, u in product(Tm, repeat=2):
            for x in H.plus(H.times(b, t), H.times(c, u)):
                add[i][j].add(cls[x])
    labels = [H.elements[r] for r in reps]
    return FiniteHyperfield.from_tables(labels, cls[H.one], neg, mul, add), cls


def quotient(H, T):
    """The quotient hyperfield H /_m T; each class is labelled by its least-index member."""
    return _quotient(H, T)[0]


def quotient_map(H, T):
    """The canonical surjection H -> H /_m T."""
    Q, cls = _quotient(H, T)
    return MorphismTable(H, Q, tuple(cls[x] for x in range(H.n)))


def prime(H):
    """Replace the addition of H by the prime addition."""
    bad = verify_axioms(H)
    if bad:
        raise ValueError(f"prime() needs a hyperfield; violated {[v.axiom for v in bad]}")
    n = H.n
    everything = frozenset(range(n))
    add = []
    for a in range(n):
        row = []
        for b in range(n):
            if a == 0 or b == 0:
                row.append(H.add[a][b])
            elif b == H.neg[a]:
                row.append(everything)
            else:
                row.append(H.add[a][b] | {a, b})
        add.append(row)
    return FiniteHyperfield.from_tables(H.elements, H.one, H.neg, H.mul, add)


def is_rigid(H, T, x):
    if x == H.zero:
        raise ValueError("rigidity is defined for non-zero elements")
    Tx = {H.times(t, x) for t in T.members}
    allowed = set(T.members) | Tx | {H.zero}
    for t1 in T.members:
        for t2x in Tx:
            if not H.plus(t1, t2x) <= allowed:
                return False
    return True


def basic_part(H, T):
    B = frozenset(x for x in H.nonzero if not is_rigid(H, T, x) or not is_rigid(H, T, H.neg[x]))
    for x in B:
        assert all(H.times(t, x) in B for t in T.members), "B(T) must be a union of cosets"
    return B


def is_additively_closed(H, T):
    return all(H.plus(a, b) - {H.zero} <= T.members for a in T.members for b in T.members)


def is_exceptional(H, T):
    pm = frozenset(T.members) | {H.neg[t] for t in T.members}
    if pm != basic_part(H, T):
        return False
    return H.neg[H.one] in T.members or is_additively_closed(H, T)


def _delta(f, candidates=None):
    if isinstance(f.source, FiniteHyperfield):
        return [x for x in f.source.nonzero if f(x) == f.target.one]
    if candidates is None:
        raise ValueError("oracle source needs candidate kernel elements")
    return [f.source.canon(x) for x in candidates if f(f.source.canon(x)) == f.target.one]


def is_quotient_morphism(f, delta=None):
    """Surjective, and f(c) in f(a)+f(b) iff cs in at+bu for some s,t,u in the kernel of 1.

    For an oracle source the check runs over ``f.samples`` with the kernel
    search restricted to the finite list ``delta`` (sampled, not exhaustive).
    """
    if not is_morphism(f):
        raise ValueError("not a morphism")
    S, tgt, D = f.source, f.target, f.domain()
    if isinstance(tgt, FiniteHyperfield) and {f(x) for x in D} != set(range(tgt.n)):
        return False
    Delta = _delta(f, delta)
    for a, b, c in product(D, repeat=3):
        lhs = tgt.contains(f(c), f(a), f(b))
        rhs = lhs and _lifts(S, Delta, a, b, c)
        if lhs != rhs:
            return False
    return True


def _lifts(S, Delta, a, b, c):
    # cs in at + bu  <=>  c in (at)s^-1 + (bu)s^-1; group elements so s can be folded into t, u
    for t, u in product(Delta, repeat=2):
        if S.contains(c, S.times(a, t), S.times(b, u)):
            return True
    if a != S.zero and b != S.zero:
        # at = -bu puts the whole carrier in at + bu
        for t in Delta:
            for u in Delta:
                if S.times(a, t) == S.neg_of(S.times(b, u)):
                    return True
    return False


def is_group_extension(f):
    """Injective, non-image elements rigid (1+x within {1,x}), and f(1+y) == 1 + f(y) for y != -1."""
    if not is_morphism(f):
        raise ValueError("not a morphism")
    S, tgt = f.source, f.target
    image = [f(x) for x in range(S.n)]
    if len(set(image)) != S.n:
        return False
    for x in tgt.nonzero:
        if x not in image and not tgt.plus(tgt.one, x) <= {tgt.one, x}:
            return False
    for y in range(S.n):
        if y == S.neg[S.one]:
            continue
        if {f(z) for z in S.plus(S.one, y)} != set(tgt.plus(tgt.one, f(y))):
            return False
    return True


def export_hyperfield(H, path):
    with open(path, "w") as fh:
        json.dump(H.to_json(), fh, indent=1)


def import_hyperfield(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise HyperfieldStructureError(f"{path}: invalid JSON at line {exc.lineno} col {exc.colno}") from exc
    return FiniteHyperfield.from_json(obj)
