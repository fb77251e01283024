"""Command-line front end.

    wittconics [--json] [--oracle] <subcommand> ...

Exit status: 0 success, 1 domain error, 2 usage error.
"""
import argparse
import json
import re
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import conics, localglobal, quadfields
from .hyperfield import HyperfieldStructureError, export_hyperfield, import_hyperfield, verify_axioms

__all__ = ["run", "execute", "batch", "main", "export_hyperfield", "import_hyperfield"]

DEFAULT_BOUND = 10**4
_NEGATIVE = re.compile(r"^-\d+$|^-\d*\.\d+$|^-\d+/\d+$|^-\d+(\.\d*)?[eE][+-]?\d+$")


class UsageError(Exception):
    pass


class DomainError(Exception):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = _NEGATIVE

    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or "usage error")
        raise SystemExit(status)


def _rational(tok):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed number {tok!r}")


def _integer(tok):
    try:
        return int(tok)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer {tok!r}")


def _place(tok):
    try:
        return localglobal.as_place(tok)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed place {tok!r} (expected 'inf' or a prime)")


def _s(x):
    return str(x)


def _common(p):
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit one JSON envelope")
    p.add_argument("--oracle", action="store_true", default=argparse.SUPPRESS,
                   help="cross-check with brute-force oracles, fail on disagreement")


def build_parser():
    parser = _Parser(prog="wittconics", description=__doc__.splitlines()[0])
    _common(parser)
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("hilbert", help="Hilbert symbol (a, b)_v")
    _common(p)
    p.add_argument("a", type=_rational)
    p.add_argument("b", type=_rational)
    p.add_argument("v", type=_place)

    p = sub.add_parser("quaternion", help="ramification set of (a, b / Q)")
    _common(p)
    p.add_argument("a", type=_rational)
    p.add_argument("b", type=_rational)

    p = sub.add_parser("conic", help="conic function fields Q_{a,b}")
    _common(p)
    csub = p.add_subparsers(dest="conic_cmd", required=True, parser_class=_Parser)
    for name, nargs in (("split", "ab"), ("point", "ab"), ("isom", "abcd"), ("certify", "abcd")):
        q = csub.add_parser(name)
        _common(q)
        for n in nargs:
            q.add_argument(n, type=_rational)
        if name == "point":
            q.add_argument("--bound", type=_integer, default=DEFAULT_BOUND)

    p = sub.add_parser("witnesses", help="four pairwise certified conic fields over Q")
    _common(p)

    p = sub.add_parser("hyperfield", help="quadratic hyperfield tables")
    _common(p)
    hsub = p.add_subparsers(dest="hf_cmd", required=True, parser_class=_Parser)
    q = hsub.add_parser("local")
    _common(q)
    q.add_argument("v", type=_place)
    q = hsub.add_parser("finite")
    _common(q)
    q.add_argument("q", type=_integer)
    q = hsub.add_parser("check")
    _common(q)
    q.add_argument("file")

    p = sub.add_parser("quadfield", help="genus theory of Q(sqrt d)")
    _common(p)
    p.add_argument("d", help="squarefree d, or 'family'")
    p.add_argument("count", nargs="?", type=_integer)

    p = sub.add_parser("gauss", help="Gauss valuation of a polynomial (coefficients a_0 .. a_n)")
    _common(p)
    p.add_argument("p", type=_integer)
    p.add_argument("coeffs", nargs="+", type=_rational)
    p.add_argument("--den", default=None, help="comma-separated denominator coefficients")

    p = sub.add_parser("batch", help="one invocation per line, one JSON envelope per line")
    p.add_argument("file")
    return parser


# --- subcommand bodies: each returns (result dict, diagnostics list) -------------

def _cmd_hilbert(ns):
    s = localglobal.hilbert_symbol(ns.a, ns.b, ns.v)
    diags = []
    if ns.oracle and not ns.v.is_infinite:
        o = 1 if localglobal.represents_bruteforce(ns.a, ns.b, 1, ns.v.p) else -1
        diags.append(f"oracle symbol {o}")
        if o != s:
            raise DomainError("oracle disagreement", {"symbol": s, "oracle": o})
    return {"a": _s(ns.a), "b": _s(ns.b), "place": str(ns.v), "symbol": s}, diags


def _cmd_quaternion(ns):
    R = localglobal.quaternion_ramification(ns.a, ns.b)
    syms = localglobal.local_symbols(ns.a, ns.b)
    diags = []
    if ns.oracle:
        for v, s in syms.items():
            if v.is_infinite:
                continue
            o = 1 if localglobal.represents_bruteforce(ns.a, ns.b, 1, v.p) else -1
            if o != s:
                raise DomainError(f"oracle disagreement at {v}", {"symbol": s, "oracle": o})
        diags.append("oracle agrees at every finite candidate place")
    return {"a": _s(ns.a), "b": _s(ns.b), "ramified": R.labels(), "split": R.is_split,
            "symbols": {str(v): s for v, s in syms.items()}}, diags


def _point_json(P):
    return None if P is None else {"x": str(P.x), "y": str(P.y)}


def _cmd_conic(ns):
    c = ns.conic_cmd
    diags = []
    if c == "split":
        sp = conics.splits(ns.a, ns.b)
        if ns.oracle:
            P = conics.find_rational_point(ns.a, ns.b, conics.holzer_bound(ns.a, ns.b))
            diags.append(f"oracle point {_point_json(P)}")
            if (P is not None) != sp:
                raise DomainError("oracle disagreement", {"split": sp, "point": _point_json(P)})
        return {"a": _s(ns.a), "b": _s(ns.b), "split": sp,
                "ramified": localglobal.quaternion_ramification(ns.a, ns.b).labels()}, diags
    if c == "point":
        P = conics.find_rational_point(ns.a, ns.b, ns.bound)
        if ns.oracle and (P is not None) != conics.splits(ns.a, ns.b) and ns.bound >= conics.holzer_bound(ns.a, ns.b):
            raise DomainError("oracle disagreement", {"point": _point_json(P)})
        return {"a": _s(ns.a), "b": _s(ns.b), "bound": ns.bound, "point": _point_json(P)}, diags
    if c == "isom":
        return {"isomorphic": conics.conic_isomorphic(ns.a, ns.b, ns.c, ns.d),
                "ram_ab": localglobal.quaternion_ramification(ns.a, ns.b).labels(),
                "ram_cd": localglobal.quaternion_ramification(ns.c, ns.d).labels()}, diags
    cert = conics.witt_distinguish(ns.a, ns.b, ns.c, ns.d)
    ok = conics.verify_certificate(cert, ns.a, ns.b, ns.c, ns.d)
    if ns.oracle and cert.separates and conics.conic_isomorphic(ns.a, ns.b, ns.c, ns.d):
        raise DomainError("certificate separates isomorphic fields", cert.to_json())
    return {"certificate": cert.to_json(), "verified": ok}, diags


def _cmd_witnesses(ns):
    W = conics.witness_set()
    return W.to_json(), [f"{len(W.fields)} fields, {len(W.certificates)} certified pairs"]


def _hf_result(H):
    report = verify_axioms(H)
    return {"hyperfield": H.to_json(), "violations": [v.to_json() for v in report]}


def _cmd_hyperfield(ns):
    c = ns.hf_cmd
    if c == "local":
        return _hf_result(localglobal.local_square_class_hyperfield(ns.v)), []
    if c == "finite":
        return _hf_result(localglobal.finite_field_quadratic_hyperfield(ns.q)), []
    try:
        H = import_hyperfield(ns.file)
    except OSError as exc:
        raise DomainError(f"cannot read {ns.file}: {exc.strerror}")
    res = _hf_result(H)
    if res["violations"]:
        raise DomainError("axioms violated: " + ", ".join(v["axiom"] for v in res["violations"]), res)
    return res, []


def _cmd_quadfield(ns):
    if ns.d == "family":
        if ns.count is None:
            raise UsageError("quadfield family needs a count")
        fam = quadfields.distinct_2rank_family(ns.count)
        return {"family": [quadfields.quadfield_summary(d) for d in fam]}, []
    try:
        d = int(ns.d)
    except ValueError:
        raise UsageError(f"malformed integer {ns.d!r}")
    if ns.count is not None:
        raise UsageError(f"unexpected argument {ns.count!r}")
    res = quadfields.quadfield_summary(d)
    diags = []
    if ns.oracle and d < 0:
        o = quadfields.imaginary_class_group_oracle(d)
        diags.append(f"forms oracle: order {o.order}, 2-rank {o.two_rank}")
        if o.two_rank != res["two_rank"]:
            raise DomainError("oracle disagreement", res)
    return res, diags


def _cmd_gauss(ns):
    den = None
    if ns.den is not None:
        try:
            den = [Fraction(t) for t in ns.den.split(",")]
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"malformed denominator {ns.den!r}")
    v = localglobal.gauss_valuation(ns.coeffs, ns.p, den)
    return {"p": ns.p, "valuation": "inf" if v == float("inf") else v}, []


COMMANDS = {
    "hilbert": _cmd_hilbert, "quaternion": _cmd_quaternion, "conic": _cmd_conic,
    "witnesses": _cmd_witnesses, "hyperfield": _cmd_hyperfield, "quadfield": _cmd_quadfield,
    "gauss": _cmd_gauss,
}


def execute(argv):
    """Parse and run one invocation; returns ``(exit_code, envelope, json_mode)``."""
    argv = list(argv)
    json_mode = "--json" in argv
    try:
        ns = build_parser().parse_args(argv)
        ns.json = getattr(ns, "json", False)
        ns.oracle = getattr(ns, "oracle", False)
        if ns.cmd == "batch":
            raise UsageError("batch cannot be nested")
        result, diags = COMMANDS[ns.cmd](ns)
        return 0, {"status": "ok", "result": result, "diagnostics": diags}, json_mode
    except UsageError as exc:
        return 2, {"status": "error", "result": None, "diagnostics": [f"usage: {exc}"]}, json_mode
    except DomainError as exc:
        return 1, {"status": "error", "result": exc.result, "diagnostics": [str(exc)]}, json_mode
    except (HyperfieldStructureError, ValueError, ZeroDivisionError, OverflowError) as exc:
        return 1, {"status": "error", "result": None, "diagnostics": [f"domain error: {exc}"]}, json_mode


def _render_text(value, indent=0):
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_flat(v)}")
        return "\n".join(lines)
    if isinstance(value, list):
        return "\n".join(_render_text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {_flat(v)}" for v in value)
    return pad + _flat(value)


def _flat(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_flat(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    return str(v)


def batch(lines, workers=4):
    """Envelopes for each non-blank line, in input order."""
    jobs = [shlex.split(line) for line in lines if line.strip()]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return [env for _, env, _ in pool.map(execute, jobs)]


def run(argv=None, stdout=None, stderr=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if argv and argv[0] == "batch":
        if len(argv) != 2:
            print("usage: wittconics batch FILE", file=stderr)
            return 2
        try:
            with open(argv[1]) as fh:
                lines = fh.readlines()
        except OSError as exc:
            print(f"cannot read {argv[1]}: {exc.strerror}", file=stderr)
            return 1
        for env in batch(lines):
            print(json.dumps(env), file=stdout)
        return 0
    code, env, json_mode = execute(argv)
    if json_mode:
        print(json.dumps(env), file=stdout)
    else:
        if env["result"] is not None:
            print(_render_text(env["result"]), file=stdout)
        for d in env["diagnostics"]:
            print(d, file=stderr if code else stdout)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
