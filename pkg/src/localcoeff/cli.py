"""Command-line front end.

Every subcommand builds a plain report (dicts, lists, ints, strings) and
prints it as a table or as JSON.  Exit codes: 0 success, 1 domain error,
2 malformed input or arguments.
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from . import burnside, eicat, eilenberg, models, rograding, schema
from .errors import InputError, LocalCoeffError
from .fieldlin import is_prime
from .groupring import FiniteGroup, GroupRingModule

__all__ = ["main", "run", "build_parser", "render_table"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# ---------------------------------------------------------------- inputs

def _group(args) -> FiniteGroup:
    if getattr(args, "group", None):
        g = schema.load(args.group)
        if not isinstance(g, FiniteGroup):
            raise InputError("--group must name a group document")
        return g
    return FiniteGroup.cyclic(args.n)


def _space(args) -> eilenberg.GroupSpace:
    if args.input:
        x = schema.load(args.input)
        if not isinstance(x, eilenberg.GroupSpace):
            raise InputError("--input must name a complex document")
        return x
    if args.model == "sphere-antipodal":
        return models.sphere_antipodal(args.N, args.q)
    if args.model == "k-pi-1":
        return models.k_pi_1(_group(args), args.L, args.q)
    raise InputError(f"{args.model!r} is not a group-space model")


def _module(args, group, q, side) -> GroupRingModule:
    if args.module:
        m = schema.load(args.module)
        if not isinstance(m, GroupRingModule):
            raise InputError("--module must name a module document")
        return m if m.side == side else m.opposite()
    if args.coeff == "trivial":
        return GroupRingModule.trivial(group, q, side=side)
    if args.coeff == "sign":
        return GroupRingModule.sign(group, q, side)
    if args.coeff == "regular":
        return GroupRingModule.free(group, q, 1, side)
    raise InputError(f"unknown coefficient preset {args.coeff!r}")


def _eq_space(args) -> eilenberg.EquivariantSpace:
    if args.model == "bgz2-sphere":
        return models.bgz2_sphere(args.p, args.q, args.N)
    if args.model == "point":
        return models.point_model(FiniteGroup.cyclic(args.p), args.q)
    raise InputError(f"{args.model!r} is not an equivariant model")


def _eq_coeff(args, x) -> eicat.FunctorModule:
    if args.functor:
        f = schema.load(args.functor)
        if not isinstance(f, eicat.FunctorModule):
            raise InputError("--functor must name a functor document")
        return f
    if args.label:
        if args.model != "bgz2-sphere":
            raise InputError("--label needs the bgz2-sphere model")
        return models.serre_coefficient_bgz2(args.p, args.q, args.label)
    variance = args.variance
    if args.coeff == "constant":
        return eicat.constant(x.cat, args.q, variance)
    if args.coeff == "sign":
        if args.model != "bgz2-sphere":
            raise InputError("the sign system exists on the bgz2-sphere model only")
        f = models.bgz2_sign(args.p, args.q)
        return f if variance == "contravariant" else f.dual()
    if args.coeff == "representable":
        return eicat.representable(x.cat, args.object, args.q, variance)
    raise InputError(f"unknown coefficient preset {args.coeff!r}")


def _mackey(source, cat, q) -> burnside.MackeyFunctor:
    if source == "burnside":
        return burnside.MackeyFunctor.burnside(cat, q)
    if source == "zero":
        return burnside.MackeyFunctor.zero(cat, q)
    if source.startswith("representable:"):
        i = int(source.split(":", 1)[1])
        if not 0 <= i < cat.n_orbits:
            raise InputError(f"orbit index {i} out of range")
        return burnside.MackeyFunctor.representable(cat, i, q)
    with open(source, encoding="utf-8") as fh:
        d = json.load(fh)
    if d.get("kind") != "mackey":
        raise InputError(f"{source} is not a mackey document")
    return schema.mackey_from(d, cat)


# ---------------------------------------------------------------- reports

def _ss_report(x, r: eilenberg.SSResult, coeff_name) -> Dict[str, Any]:
    v = r.valid_through
    return {
        "space": x.name, "q": x.q, "coefficients": coeff_name,
        "cohomological": r.cohomological, "valid_through": v,
        "degrees": list(range(v + 1)), "dims": r.target[:v + 1],
        "e2": [{"s": s, "t": t, "dim": d} for (s, t), d in sorted(r.e2.dims.items()) if d and s + t <= v],
        "e_infinity": [{"s": s, "t": t, "dim": d} for (s, t), d in sorted(r.e_infinity.dims.items())
                       if d and s + t <= v],
        "collapsed": r.collapsed, "converges": r.converges(),
        "e2_matches_tor_ext": r.e2_matches_expected(),
    }


def cmd_homology(args, cohomology=False):
    x = _space(args)
    side = "right" if cohomology else "left"
    m = _module(args, x.group, x.q, side)
    r = (eilenberg.eilenberg_cohomology if cohomology else eilenberg.eilenberg_homology)(x, m, args.L_res)
    name = args.module or args.coeff
    if args.command in ("homology", "cohomology"):
        v = r.valid_through
        return {"space": x.name, "q": x.q, "coefficients": name, "cohomological": cohomology,
                "degrees": list(range(v + 1)), "dims": r.target[:v + 1], "valid_through": v}
    return _ss_report(x, r, name)


def cmd_eq(args):
    x = _eq_space(args)
    f = _eq_coeff(args, x)
    r = eilenberg.eq_eilenberg(x, f, args.L_res)
    name = args.functor or (" ".join(args.label) if args.label else f"{args.coeff} ({f.variance})")
    return _ss_report(x, r, name)


def cmd_serre(args):
    if args.p:
        x = models.bgz2_sphere(args.p, args.q, args.smax + 1)
        labels = rograding.all_labels(args.p, max_real_dim=args.tmax)
        coeffs = {str(lab): models.serre_coefficient_bgz2(args.p, args.q, [lab]) for lab in labels}
    else:
        x = models.sphere_antipodal(args.tmax + 1, args.q)
        coeffs = models.cp_cohomology_with_sign(args.tmax, args.q)
    e2 = eilenberg.serre_e2_page(x, coeffs, s_max=args.smax, jobs=args.jobs)
    out = {"base": x.name, "q": args.q, "s_max": e2.s_max, "collapses": e2.collapses,
           "e2": [{"s": s, "t": str(t), "dim": d} for (s, t), d in e2.grid.items() if d]}
    if not args.p:
        tot = e2.total_dims()
        out["total"] = [tot.get(n, 0) for n in range(args.tmax + 1)]
    return out


def _default_q(p):
    q = 3
    while q == p or not is_prime(q):
        q += 2
    return q


def cmd_bo2(args):
    q = args.q if args.q is not None else _default_q(args.p)
    rep = eilenberg.bo2_pipeline(args.p, q, args.tmax, jobs=args.jobs)
    return rep.to_dict()


def cmd_burnside(args):
    g = _group(args)
    cat = burnside.BurnsideCategory(g)
    n = cat.n_orbits
    orbits = [{"index": i, "subgroup": sorted(int(x) for x in cat.subgroups[i]), "size": cat.orbits[i].size}
              for i in range(n)]
    ranks = [[len(cat.basis(i, j)) for j in range(n)] for i in range(n)]
    top = cat.orbits[cat.top]
    basis = cat.basis(cat.top, cat.top)
    names = [f"[G/H{cat.orbit_index(k[0])}]" for k in basis]
    homs = [burnside.SpanHom(top, top, {k: 1}) for k in basis]
    table = []
    for a, x in enumerate(homs):
        for b, y in enumerate(homs):
            prod = burnside.burnside_ring_product(x, y)
            table.append({"left": names[a], "right": names[b],
                          "product": {names[basis.index(k)]: c for k, c in sorted(prod.coeffs.items())}})
    return {"group_order": g.order, "orbits": orbits, "hom_ranks": ranks,
            "burnside_ring_basis": names, "products": table}


def cmd_box(args):
    g = _group(args)
    cat = burnside.BurnsideCategory(g)
    m, n = _mackey(args.left, cat, args.q), _mackey(args.right, cat, args.q)
    box = burnside.box_product(m, n)
    out = {"group_order": g.order, "q": args.q, "orbits": [cat.orbits[i].size for i in range(cat.n_orbits)],
           "left_dims": m.dims, "right_dims": n.dims, "box_dims": box.functor.dims}
    if args.left == "burnside":
        unit = burnside.unit_action_map(box)
        out["unit_map_iso"] = all(unit[c].shape == (n.dims[c], box.functor.dims[c]) and unit[c].rank() == n.dims[c]
                                  for c in unit)
    return out


def cmd_decompose(args):
    if args.functor:
        f = schema.load(args.functor)
        if not isinstance(f, eicat.FunctorModule):
            raise InputError("--functor must name a functor document")
        d = eicat.decompose_into_representables(f)
        return {"degrees": [{"degree": 0, "objects": [f.cat.objects[c] for c in d.objects], "verified": d.verify()}]}
    x = _eq_space(args)
    out = []
    for k, dec in enumerate(x.check_free()):
        out.append({"degree": k, "objects": [x.cat.objects[c] for c in dec.objects], "verified": dec.verify()})
    return {"space": x.name, "degrees": out}


def cmd_omega(args):
    rows = []
    for j in range(args.jmax + 1):
        w = rograding.omega(j, args.p)
        rows.append({"j": j, "real_dim": w.real_dim, "multiplicities": list(w.mult), "rep": str(w),
                     "closed_form_agrees": w == rograding.omega_closed_form(j, args.p)})
    return {"p": args.p, "omega": rows, "omega_p_is_regular": rograding.omega(args.p, args.p) == rograding.regular_real(args.p)}


def cmd_fixed_basis(args):
    mt = args.max_total
    if mt is None and args.max_real_dim is None:
        mt = 2 * args.p
    fixed = rograding.fixed_basis(args.p, mt, args.max_real_dim)
    dec = rograding.generator_decomposition_check(args.p, labels=fixed)
    return {"p": args.p, "fixed_basis": [str(g) for g in fixed],
            "generators": [str(g) for g in rograding.fixed_algebra_generators(args.p)],
            "decomposition_passed": dec.passed,
            "witnesses": {str(lab): {str(g): k for g, k in w.items()} for lab, w in dec.entries}}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="localcoeff", description="(Co)homology with local coefficients and equivariant bookkeeping.")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--jobs", type=int, default=1)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp):
        sp.add_argument("--format", choices=("table", "json"), default=argparse.SUPPRESS)
        sp.add_argument("--jobs", type=int, default=argparse.SUPPRESS)

    for name in ("homology", "cohomology", "eilenberg-ss"):
        sp = sub.add_parser(name)
        sp.add_argument("--model", choices=("sphere-antipodal", "k-pi-1"), default="sphere-antipodal")
        sp.add_argument("--input", help="complex document")
        sp.add_argument("--N", type=int, default=4)
        sp.add_argument("--L", type=int, default=6, help="length of the K(pi,1) model")
        sp.add_argument("--n", type=int, default=2, help="order of the cyclic group")
        sp.add_argument("--group", help="group document")
        sp.add_argument("--q", type=int, default=5)
        sp.add_argument("--coeff", choices=("trivial", "sign", "regular"), default="trivial")
        sp.add_argument("--module", help="module document")
        sp.add_argument("--resolution-length", dest="L_res", type=int)
        if name == "eilenberg-ss":
            sp.add_argument("--cohomology", action="store_true")
        fmt(sp)

    sp = sub.add_parser("eq-eilenberg-ss")
    sp.add_argument("--model", choices=("bgz2-sphere", "point"), default="bgz2-sphere")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--q", type=int, default=5)
    sp.add_argument("--N", type=int, default=4)
    sp.add_argument("--coeff", choices=("constant", "sign", "representable"), default="constant")
    sp.add_argument("--variance", choices=("covariant", "contravariant"), default="contravariant")
    sp.add_argument("--object", type=int, default=0)
    sp.add_argument("--label", nargs="+", help="generator labels such as D1C")
    sp.add_argument("--functor", help="functor document")
    sp.add_argument("--resolution-length", dest="L_res", type=int)
    fmt(sp)

    sp = sub.add_parser("serre-e2")
    sp.add_argument("--q", type=int, default=5)
    sp.add_argument("--p", type=int, help="equivariant generator-level page for C_p")
    sp.add_argument("--tmax", type=int, default=12)
    sp.add_argument("--smax", type=int, default=3)
    fmt(sp)

    sp = sub.add_parser("bo2")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int)
    sp.add_argument("--tmax", type=int, default=40)
    fmt(sp)

    sp = sub.add_parser("burnside")
    sp.add_argument("--n", "--p", dest="n", type=int, default=3, help="order of the cyclic group")
    sp.add_argument("--group", help="group document")
    fmt(sp)

    sp = sub.add_parser("box")
    sp.add_argument("--n", "--p", dest="n", type=int, default=3)
    sp.add_argument("--group", help="group document")
    sp.add_argument("--q", type=int, default=7)
    sp.add_argument("--left", default="burnside", help="burnside | zero | representable:i | mackey document")
    sp.add_argument("--right", default="burnside")
    fmt(sp)

    sp = sub.add_parser("decompose")
    sp.add_argument("--model", choices=("bgz2-sphere", "point"), default="bgz2-sphere")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--q", type=int, default=5)
    sp.add_argument("--N", type=int, default=4)
    sp.add_argument("--functor", help="functor document")
    fmt(sp)

    sp = sub.add_parser("omega")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--jmax", type=int, default=10)
    fmt(sp)

    sp = sub.add_parser("fixed-basis")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--max-total", type=int)
    sp.add_argument("--max-real-dim", type=int)
    fmt(sp)
    return p


_COMMANDS = {
    "homology": lambda a: cmd_homology(a, False),
    "cohomology": lambda a: cmd_homology(a, True),
    "eilenberg-ss": lambda a: cmd_homology(a, a.cohomology),
    "eq-eilenberg-ss": cmd_eq,
    "serre-e2": cmd_serre,
    "bo2": cmd_bo2,
    "burnside": cmd_burnside,
    "box": cmd_box,
    "decompose": cmd_decompose,
    "omega": cmd_omega,
    "fixed-basis": cmd_fixed_basis,
}


# ---------------------------------------------------------------- output

def _cell(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    if isinstance(v, dict):
        return ", ".join(f"{k}={_cell(x)}" for k, x in v.items())
    return str(v)


def render_table(report: Dict[str, Any]) -> str:
    """Scalars as ``key: value``; lists of records as aligned tables."""
    lines: List[str] = []
    for key, val in report.items():
        if isinstance(val, list) and val and all(isinstance(r, dict) for r in val):
            cols = list(val[0])
            rows = [[_cell(r.get(c, "")) for c in cols] for r in val]
            width = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
            lines.append(f"{key}:")
            lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(cols, width)).rstrip())
            for r in rows:
                lines.append("  " + "  ".join(x.ljust(w) for x, w in zip(r, width)).rstrip())
        elif isinstance(val, dict) and val and any(isinstance(v, dict) for v in val.values()):
            lines.append(f"{key}:")
            for k, v in val.items():
                if isinstance(v, dict) and all(isinstance(x, int) and not isinstance(x, bool) for x in v.values()):
                    v = " * ".join(g if e == 1 else f"({g})^{e}" for g, e in v.items()) or "1"
                lines.append(f"  {k}: {_cell(v)}")
        elif isinstance(val, list) and val and all(isinstance(r, list) for r in val):
            lines.append(f"{key}:")
            lines.extend("  " + _cell(r) for r in val)
        else:
            lines.append(f"{key}: {_cell(val)}")
    return "\n".join(lines)


def run(argv: Optional[List[str]] = None, out=None, err=None):
    """Run one command; returns (exit code, report or None)."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        report = _COMMANDS[args.command](args)
    except InputError as e:
        print(f"error: {e}", file=err)
        return 2, None
    except LocalCoeffError as e:
        print(f"error: {e}", file=err)
        return 1, None
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=err)
        return 2, None
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2), file=out)
    else:
        print(render_table(report), file=out)
    return 0, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
