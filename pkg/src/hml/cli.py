"""Command-line front end: ``hml <command> ...``.

Exit codes: 0 ok, 1 a checker found a violation, 2 malformed or invalid
input, 3 non-convergent Euler characteristic.
"""
from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .algebra import (Algebra, AlgebraError, AlgebraMap, FDModule, ModuleError, ModuleMap)
from .complexes import (ChainMap, Complex, NotAChainMap, NotAComplex, cohomology, cohomology_dims,
                        cone, find_homotopy)
from .derived import (Mismatch, NonConvergent, NotCommuting, NotExact, NotFlat, NotSES,
                      adjunction_check, as_chain_map, derived_functor_les, euler_chi, ext,
                      flat_base_change_check, octahedron, projection_formula_check,
                      resolve_complex, ses_to_triangle_check, spherelike_check, tor,
                      tr2_rotate, tr3_complete, windmill_check)
from .io import ParseError, ValidationError, Workspace, default_field, dumps
from .k3lattice import (DegenerateProjection, EvenLattice, ExtendedLattice, HodgePeriod,
                        LatticeError, LatticeIsometry, MukaiElement, cohom_fm, diagonal_kernel,
                        euler_chi_lattice, extend_by_h2_sign, is_hodge_isometry, is_isometry,
                        mukai_pairing, mukai_vector, neron_severi, orientation_determinant,
                        reflection_twist)
from .linalg import Field, LinalgError, Mat

__all__ = ["CommandResult", "run_command", "main", "EXIT_CODES"]

EXIT_CODES = {"ok": 0, "violation": 1, "parse-error": 2, "non-convergent": 3}


@dataclass
class CommandResult:
    status: str
    payload: object = None
    diagnostics: list[str] = field(default_factory=list)
    table: list[tuple] | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def render(self, as_json: bool) -> str:
        if as_json or self.table is None:
            return dumps(self.payload)
        return _align(self.table)


class _Violation(Exception):
    def __init__(self, payload, table, message):
        super().__init__(message)
        self.payload, self.table = payload, table


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _align(rows: list[tuple]) -> str:
    rows = [tuple(str(x) for x in r) for r in rows]
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows if i < len(r)) for i in range(max(map(len, rows)))]
    lines = ["  ".join(c.rjust(widths[i]) if i else c.ljust(widths[i]) for i, c in enumerate(r)).rstrip()
             for r in rows]
    return "\n".join(lines) + "\n"


# object lookup -----------------------------------------------------------

class _Context:
    def __init__(self, fld: Field):
        self.ws = Workspace(default=fld)

    def get(self, ref: str, *kinds):
        if ref is None:
            raise ParseError("missing object reference")
        file, _, name = ref.partition("#")
        if file.endswith(".json"):
            names = self.ws.load(Path(file))
            if not name:
                if len(names) != 1:
                    raise ValidationError(f"{file} holds several objects; use {file}#name")
                name = names[0]
            obj = self.ws.get(name)
        else:
            obj = self.ws.get(ref)
        if kinds and not isinstance(obj, kinds):
            want = " or ".join(k.__name__ for k in kinds)
            raise ValidationError(f"{ref} is a {type(obj).__name__}, expected {want}")
        return obj


def _as_complex(x) -> Complex:
    return Complex.single(x) if isinstance(x, FDModule) else x


_VEC = re.compile(r"^\s*([^,(]+)\s*,\s*\(([^)]*)\)\s*,\s*([^,()]+)\s*$")


def _parse_element(text: str) -> MukaiElement:
    """Parse "r,(c1,...,cn),s"."""
    m = _VEC.match(text or "")
    if not m:
        raise ParseError(f"element {text!r} must look like r,(c1,...,cn),s")
    try:
        cs = [Fraction(x) for x in m.group(2).split(",") if x.strip()]
        return MukaiElement.of(Fraction(m.group(1)), cs, Fraction(m.group(3)))
    except ValueError as e:
        raise ParseError(f"element {text!r}: {e}") from None


def _parse_ints(text: str) -> list:
    try:
        return [Fraction(x) for x in text.strip("() ").split(",") if x.strip()]
    except ValueError as e:
        raise ParseError(f"vector {text!r}: {e}") from None


def _lattice(ctx: _Context, ref: str) -> ExtendedLattice:
    obj = ctx.get(ref, EvenLattice, ExtendedLattice)
    return obj if isinstance(obj, ExtendedLattice) else ExtendedLattice(obj)


def _isometry(ctx: _Context, lat: ExtendedLattice, spec: str):
    """(lattice, matrix) for a file reference or one of id / h2sign:-1 / twist:r,(c),s.

    A matrix the size of h2 is taken to act on h2 itself.
    """
    if spec == "id":
        return lat, Mat.identity(lat.gram.field, lat.rank)
    if spec.startswith("h2sign:"):
        return lat, extend_by_h2_sign(lat, int(spec.split(":", 1)[1])).matrix
    if spec.startswith("twist:"):
        return lat, reflection_twist(lat, _parse_element(spec.split(":", 1)[1])).matrix
    m = ctx.get(spec, LatticeIsometry).matrix
    return (lat.h2 if m.rows == lat.h2.rank else lat), m


def _num(x):
    q = Fraction(x)
    return q.numerator if q.denominator == 1 else str(q)


def _verdict(v, rows=None):
    payload = v.to_json()
    table = rows if rows is not None else [("ok", v.ok)] + [(f.spot, f.detail) for f in v.failures]
    if not v.ok:
        raise _Violation(payload, table, "; ".join(f"{f.spot}: {f.detail}" for f in v.failures))
    return payload, table


# commands ---------------------------------------------------------------

def _cmd_ext(ctx, a):
    if a.algebra:
        ctx.get(a.algebra, Algebra)
    m = ctx.get(a.m, FDModule, Complex)
    n = ctx.get(a.n, FDModule, Complex)
    t = ext(m, n, a.max_degree, a.route or "projective")
    return t.to_json(), [("degree", "dim")] + [(t.min_degree + i, x) for i, x in enumerate(t.dims)]


def _cmd_tor(ctx, a):
    if a.algebra:
        ctx.get(a.algebra, Algebra)
    m = ctx.get(a.m, FDModule, Complex)
    n = ctx.get(a.n, FDModule, Complex)
    t = tor(m, n, a.max_degree)
    return t.to_json(), [("degree", "dim")] + [(i, x) for i, x in enumerate(t.dims)]


def _cmd_cohomology(ctx, a):
    c = _as_complex(ctx.get(a.complex, Complex, FDModule))
    dims = cohomology_dims(c)
    return ({"dims": {str(i): d for i, d in dims.items()}},
            [("degree", "dim")] + list(dims.items()))


def _cmd_cone(ctx, a):
    f = as_chain_map(ctx.get(a.map, ModuleMap, ChainMap))
    cn = cone(f).complex
    dims = cn.dims()
    coh = {i: cohomology(cn, i).dim for i in cn.degrees()}
    payload = {"dims": {str(i): d for i, d in dims.items()},
               "cohomology": {str(i): d for i, d in coh.items()}}
    return payload, [("degree", "dim", "H")] + [(i, dims.get(i, 0), coh[i]) for i in cn.degrees()]


def _cmd_homotopy(ctx, a):
    f = as_chain_map(ctx.get(a.f, ModuleMap, ChainMap))
    g = as_chain_map(ctx.get(a.g, ModuleMap, ChainMap))
    g = ChainMap(f.source, f.target, g.comps)
    h = find_homotopy(f, g)
    payload = {"homotopic": h is not None}
    if h is not None:
        fld = f.field
        payload["components"] = {str(i): [[fld.format(x) for x in r] for r in m.a.tolist()]
                                 for i, m in sorted(h.comps.items())}
    return payload, [("homotopic", h is not None)]


def _cmd_resolve(ctx, a):
    c = _as_complex(ctx.get(a.m, FDModule, Complex))
    kind = a.kind or ("injective" if a.route == "injective" else "free")
    r = resolve_complex(c, kind, a.depth)
    dims = r.complex.dims()
    payload = {"kind": kind, "depth": a.depth, "dims": {str(i): d for i, d in dims.items()},
               "truncated": r.truncated}
    return payload, [("degree", "dim")] + list(dims.items()) + [("truncated", r.truncated)]


def _cmd_chi(ctx, a):
    m = ctx.get(a.m, FDModule, Complex)
    n = ctx.get(a.n, FDModule, Complex)
    x = euler_chi(m, n, a.max_degree, a.window, a.route or "projective")
    return {"chi": x}, [("chi", x)]


def _cmd_spherelike(ctx, a):
    m = ctx.get(a.m, FDModule)
    x = spherelike_check(m, a.d, a.max_degree)
    return {"spherelike": x}, [("spherelike", x)]


def _pair(ctx, f_ref, g_ref):
    f = ctx.get(f_ref, ModuleMap, ChainMap)
    g = ctx.get(g_ref, ModuleMap, ChainMap)
    return f, g


def _cmd_check(ctx, a):
    what = a.what
    if what == "tr2":
        return _verdict(tr2_rotate(as_chain_map(ctx.get(a.map or a.f, ModuleMap, ChainMap))))
    if what == "tr3":
        c, d, f, f2 = (as_chain_map(ctx.get(r, ModuleMap, ChainMap)) for r in (a.c, a.d, a.f, a.f2))
        res = tr3_complete(c, d, f, f2)
        return _verdict(res.verdict)
    if what == "octahedron":
        f, g = _pair(ctx, a.f, a.g)
        return _verdict(octahedron(f, g).verdict)
    if what == "windmill":
        f, g = _pair(ctx, a.f, a.g)
        w = windmill_check(f, g)
        payload, _ = _verdict(w.verdict, [])
        payload["dims"] = w.dims
        return payload, [("term", "dim")] + list(zip(w.labels, w.dims))
    if what in ("les", "ses-triangle"):
        f, g = _pair(ctx, a.f, a.g)
        if what == "les" and a.fixed:
            fixed = ctx.get(a.fixed, FDModule)
            v = derived_functor_les(f, g, fixed, a.side, a.max_degree)
            return _verdict(v)
        r = ses_to_triangle_check(f, g)
        if what == "les":
            payload, _ = _verdict(r.les.verdict, [])
            payload["dims"] = r.les.dims
            return payload, [("term", "dim")] + list(zip(r.les.labels, r.les.dims))
        return _verdict(r.verdict)
    if what == "adjunction":
        phi = ctx.get(a.phi, AlgebraMap)
        m, n = ctx.get(a.m, FDModule), ctx.get(a.n, FDModule)
        v = adjunction_check(phi, m, n, a.max_degree)
        payload, table = _verdict(v, [("degree", "lhs", "rhs")]
                                  + [(i, x, y) for i, (x, y) in enumerate(zip(v.data["lhs"], v.data["rhs"]))])
        payload.update(lhs=v.data["lhs"], rhs=v.data["rhs"])
        return payload, table
    if what == "projection":
        phi = ctx.get(a.phi, AlgebraMap)
        e, f = ctx.get(a.e, FDModule, Complex), ctx.get(a.m, FDModule, Complex)
        v = projection_formula_check(phi, e, f, a.max_degree)
        rows = [("degree", "lhs", "rhs")] + list(zip(v.data["degrees"], v.data["lhs"], v.data["rhs"]))
        payload, table = _verdict(v, rows)
        payload.update(degrees=v.data["degrees"], lhs=v.data["lhs"], rhs=v.data["rhs"])
        return payload, table
    if what == "base-change":
        pf, pu = ctx.get(a.phi, AlgebraMap), ctx.get(a.phi_u, AlgebraMap)
        m = ctx.get(a.m, FDModule)
        v = flat_base_change_check(pf, pu, m, a.max_degree)
        payload, table = _verdict(v, [("lhs", v.data["lhs"]), ("rhs", v.data["rhs"])])
        payload.update(lhs=v.data["lhs"], rhs=v.data["rhs"])
        return payload, table
    raise ParseError(f"unknown check {what!r}")


def _cmd_k3(ctx, a):
    lat = _lattice(ctx, a.h2)
    what = a.what
    if what in ("pair", "chi"):
        v, w = _parse_element(a.v), _parse_element(a.w)
        x = mukai_pairing(lat, v, w) if what == "pair" else euler_chi_lattice(lat, v, w)
        x = _num(x)
        return {what: x}, [(what, x)]
    if what == "vector":
        v = mukai_vector(lat, int(a.rk), [int(x) for x in _parse_ints(a.c1)], int(a.c2))
        return _element_json(v), [("vector", str(v))]
    if what == "twist":
        v = _parse_element(a.v)
        g = reflection_twist(lat, v)
        payload = {"matrix": g.rows()}
        if a.beta:
            payload["image"] = _element_json(g(_parse_element(a.beta)))
        return payload, [tuple(r) for r in g.rows()]
    if what == "isometry":
        ok = is_isometry(*_isometry(ctx, lat, a.g))
        return {"isometry": ok}, [("isometry", ok)]
    if what == "hodge":
        src = ctx.get(a.period, HodgePeriod)
        dst = ctx.get(a.target_period, HodgePeriod) if a.target_period else src
        w = is_hodge_isometry(*_isometry(ctx, lat, a.g), src, dst)
        payload = {"hodge": w.ok}
        if w.ok:
            payload["witness"] = [_num(w.a), _num(w.b)]
        return payload, [("hodge", w.ok)] + ([("a", _num(w.a)), ("b", _num(w.b))] if w.ok else [])
    if what == "ns":
        ns = neron_severi(lat, ctx.get(a.period, HodgePeriod))
        gram = [[_num(x) for x in r] for r in ns.gram.a.tolist()]
        return ({"rank": ns.rank, "basis": ns.vectors(), "gram": gram},
                [("rank", ns.rank)] + [("basis", tuple(v)) for v in ns.vectors()])
    if what == "orient":
        target, g = _isometry(ctx, lat, a.g)
        if target is not lat:
            one = Mat.identity(g.field, 1)
            g = Mat.diag(g.field, [one, g, one])
        det = orientation_determinant(lat, g, [int(x) for x in _parse_ints(a.ample)],
                                      ctx.get(a.period, HodgePeriod))
        keep = Fraction(det) > 0
        return ({"preserves": keep, "determinant": _num(det)},
                [("preserves", keep), ("determinant", _num(det))])
    if what == "fm":
        ly = _lattice(ctx, a.h2_y) if a.h2_y else lat
        kernel = diagonal_kernel(lat) if a.kernel in (None, "diagonal") else ctx.get(a.kernel, Mat)
        img = cohom_fm(lat, ly, kernel, _parse_element(a.beta))
        return _element_json(img), [("image", str(img))]
    raise ParseError(f"unknown k3 command {what!r}")


def _element_json(v: MukaiElement) -> dict:
    return {"r": _num(v.r), "c": [_num(x) for x in v.c], "s": _num(v.s)}


# parser -----------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--field", help="default scalar field for inputs without one (Q or Fp:p)")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--route", choices=["projective", "injective"])
    p.add_argument("--load", action="append", default=[], metavar="FILE",
                   help="load a document so its objects can be named directly")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hml", description="derived categories and Mukai lattices at desk scale")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, **kw):
        q = sub.add_parser(name, **kw)
        _common(q)
        return q

    for name in ("ext", "tor", "chi"):
        q = cmd(name)
        q.add_argument("--algebra")
        q.add_argument("--m", required=True)
        q.add_argument("--n", required=True)
        if name == "chi":
            q.add_argument("--window", type=int)
    q = cmd("cohomology")
    q.add_argument("--complex", required=True)
    q = cmd("cone")
    q.add_argument("--map", required=True)
    q = cmd("homotopy")
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q = cmd("resolve")
    q.add_argument("--m", required=True)
    q.add_argument("--kind", choices=["free", "injective"])
    q = cmd("spherelike")
    q.add_argument("--m", required=True)
    q.add_argument("--d", type=int, required=True)

    q = cmd("check")
    q.add_argument("what", choices=["tr2", "tr3", "octahedron", "windmill", "les", "ses-triangle",
                                    "adjunction", "projection", "base-change"])
    for flag in ("--map", "--c", "--d", "--f", "--f2", "--g", "--fixed", "--phi", "--phi-u",
                 "--m", "--n", "--e"):
        q.add_argument(flag)
    q.add_argument("--side", choices=["first", "second"], default="second")

    q = cmd("k3")
    q.add_argument("what", choices=["pair", "vector", "chi", "twist", "isometry", "hodge", "ns",
                                    "orient", "fm"])
    q.add_argument("--h2", required=True)
    for flag in ("--v", "--w", "--rk", "--c1", "--c2", "--g", "--period", "--target-period",
                 "--ample", "--kernel", "--beta", "--h2-y"):
        q.add_argument(flag)
    return p


_COMMANDS = {
    "ext": _cmd_ext, "tor": _cmd_tor, "cohomology": _cmd_cohomology, "cone": _cmd_cone,
    "homotopy": _cmd_homotopy, "resolve": _cmd_resolve, "chi": _cmd_chi,
    "spherelike": _cmd_spherelike, "check": _cmd_check, "k3": _cmd_k3,
}

_INPUT_ERRORS = (ParseError, ValidationError, AlgebraError, ModuleError, NotAComplex, NotAChainMap,
                 LatticeError, LinalgError, NotSES, NotCommuting, DegenerateProjection)


def run_command(argv: list[str]) -> CommandResult:
    """Parse and execute one command; never raises for user errors."""
    try:
        args = build_parser().parse_args(argv)
        fld = Field.parse(args.field) if args.field else default_field()
        ctx = _Context(fld)
        for path in args.load:
            ctx.ws.load(path)
        payload, table = _COMMANDS[args.command](ctx, args)
        return CommandResult("ok", payload, [], table)
    except _Violation as v:
        return CommandResult("violation", v.payload, [str(v)], v.table)
    except (NotExact, Mismatch, NotFlat) as e:
        return CommandResult("violation", {"ok": False, "failures": [{"spot": type(e).__name__,
                                                                      "detail": str(e)}]}, [str(e)])
    except NonConvergent as e:
        return CommandResult("non-convergent", {"error": "NonConvergent", "detail": str(e)}, [str(e)])
    except _INPUT_ERRORS as e:
        return CommandResult("parse-error", {"error": type(e).__name__, "detail": str(e)},
                             [f"{type(e).__name__}: {e}"])
    except ValueError as e:
        return CommandResult("parse-error", {"error": type(e).__name__, "detail": str(e)},
                             [f"{type(e).__name__}: {e}"])


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    res = run_command(argv)
    as_json = "--json" in argv
    if res.payload is not None and (as_json or res.table is not None):
        sys.stdout.write(res.render(as_json))
    for d in res.diagnostics:
        print(d, file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
