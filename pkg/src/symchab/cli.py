"""Command-line driver.

Exit status: 0 on success, 2 on input errors (bad flags, malformed or
schema-violating JSON, contract violations), 3 on computation errors such
as an exhausted deformation search.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import chabauty as ch
from .core import BoxDomain, ValuedSeries, gamma_w, trop_cells, trop_membership, vert_domain, vert_w
from .core.valuation import INF
from .intersect import SeriesSystem, bernstein_bound, deform_system, stable_count_bound
from .polytope import convex_hull, mixed_volume, volume
from .schemas import validate


class InputError(Exception):
    pass


def _frac(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _fmt(x) -> str:
    return "inf" if x == INF else str(x)


def _load(arg: str | None, schema: str):
    if arg is None:
        raise InputError("--input is required")
    text = arg.strip()
    if text == "-":
        text = sys.stdin.read()
    elif not text.startswith(("{", "[")):
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc}") from exc
    try:
        doc = json.loads(text, object_pairs_hook=ch._reject_duplicates)
    except (json.JSONDecodeError, ValueError) as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    errs = validate(doc, schema)
    if errs:
        raise InputError("; ".join(f"{p or '/'}: {m}" for p, m in errs))
    return doc


def _max_e() -> int:
    raw = os.environ.get("SYMCHAB_MAX_E", "8")
    try:
        v = int(raw)
    except ValueError as exc:
        raise InputError(f"SYMCHAB_MAX_E must be an integer, got {raw!r}") from exc
    return min(v, ch.MAX_E)


def _domain(doc, dim: int) -> BoxDomain:
    m = doc.get("domain")
    if m is None:
        return BoxDomain.uniform(dim)
    if len(m) != dim:
        raise InputError("domain has the wrong dimension")
    return BoxDomain(tuple(Fraction(x) for x in m))


# ---------------------------------------------------------------------------
# subcommands; each returns (json document, text lines)


def cmd_delta_table(a):
    if a.p is None or a.l is None:
        raise InputError("delta-table needs --p and --l")
    rows = [{"k": k, "delta": ch.delta(k, a.p, a.l), "entry": k + ch.delta(k, a.p, a.l)} for k in range(1, a.k_max + 1)]
    text = [f"delta(k, p={a.p}, l={a.l})", f"{'k':>4} {'delta':>6} {'k+delta':>8}"]
    text += [f"{r['k']:>4} {r['delta']:>6} {r['entry']:>8}" for r in rows]
    return {"p": a.p, "l": a.l, "rows": rows}, text


def cmd_trop(a):
    doc = _load(a.input, "trop")
    f = ValuedSeries.from_json(doc["series"])
    P = _domain(doc, f.dim)
    verts = sorted(vert_domain(f, P), key=lambda t: t.exponent)
    out = {"vert_domain": [{"exp": list(t.exponent), "val": _fmt(t.val)} for t in verts]}
    text = ["vert_P: " + ", ".join(str(t) for t in verts)]
    if f.dim <= 3:
        cells = trop_cells(f, P)
        out["cells"] = [c.to_json() for c in cells]
        text.append(f"{len(cells)} cells")
        for c in cells:
            text.append(
                f"  tie {c.terms[0]}~{c.terms[1]} dim {c.dim} vertices "
                + " ".join("(" + ",".join(map(str, v)) + ")" for v in c.vertices)
                + (" rays " + " ".join("(" + ",".join(map(str, r)) + ")" for r in c.rays) if c.rays else "")
            )
    pts = []
    for w in doc.get("w", []):
        w = tuple(Fraction(x) for x in w)
        m, terms = vert_w(f, w, P)
        pts.append(
            {
                "w": [str(x) for x in w],
                "m": _fmt(m),
                "vert": sorted(list(t.exponent) for t in terms),
                "member": trop_membership(f, w, P),
                "gamma": gamma_w(f, w, P).to_json(),
            }
        )
        text.append(f"w=({','.join(map(str, w))}): m={_fmt(m)} |vert|={len(terms)} in Trop: {len(terms) >= 2}")
    out["points"] = pts
    return out, text


def cmd_mixedvol(a):
    doc = _load(a.input, "polytopes")
    polys = [convex_hull([tuple(Fraction(x) for x in p) for p in pts]) for pts in doc]
    mv = mixed_volume(*polys)
    out = {"mixed_volume": _frac(mv), "volumes": [_frac(volume(q)) for q in polys], "polytopes": [q.to_json() for q in polys]}
    return out, [f"MV = {mv}"]


def _system(doc) -> SeriesSystem:
    members = tuple(ValuedSeries.from_json(m) for m in doc["members"])
    return SeriesSystem(members, _domain(doc, members[0].dim))


def cmd_bernstein(a):
    sysm = _system(_load(a.input, "system"))
    out = {}
    text = []
    if all(f.is_polynomial for f in sysm.members):
        bb = bernstein_bound(sysm)
        out["bernstein_bound"] = bb
        text.append(f"Bernstein bound: {bb}")
    sc = stable_count_bound(sysm, mode=a.mode)
    out["stable_count"] = sc.to_json()
    text.append(f"strata ({a.mode}): interior {sc.interior}")
    for k, v in sorted(sc.strata.items(), key=lambda kv: (-len(kv[0]), kv[0])):
        name = "{" + ",".join(f"t{i + 1}" for i in k) + "}" if k else "origin"
        text.append(f"  {name}: {v}")
    text.append(f"total: {sc.total}")
    return out, text


def cmd_deform(a):
    doc = _load(a.input, "deform")
    sysm = _system(doc["system"])
    rep = deform_system(sysm, doc["witnesses"], doc.get("samples"), doc.get("max_steps", 64))
    text = []
    for p in rep.perturbations:
        if p.h is None:
            text.append(f"member {p.member + 1}: unchanged")
        else:
            text.append(f"member {p.member + 1}: + {p.eps} * ({p.h})  -> {rep.deformed.members[p.member]}")
    text.append(f"trop preserved: {rep.trop_preserved}; gamma preserved: {rep.gamma_preserved}")
    return rep.to_json(), text


def _curve(a):
    doc = _load(a.input, "curve")
    return ch.CurveSpec.from_json(doc)


def cmd_count_points(a):
    curve = _curve(a)
    cap = _max_e()
    e_max = a.e if a.e is not None else 1
    if e_max > cap:
        raise InputError(f"e = {e_max} exceeds SYMCHAB_MAX_E = {cap}")
    rows = []
    for e in range(1, e_max + 1):
        rows.append({"e": e, "count": ch.count_points(curve, e), "hasse_weil_cap": ch.hasse_weil_cap(curve.genus, curve.p, e)})
    out = {"good_reduction": ch.good_reduction(curve), "rows": rows}
    text = [f"good reduction at {curve.p}: {out['good_reduction']}", f"{'e':>3} {'#X':>8} {'cap':>8}"]
    text += [f"{r['e']:>3} {r['count']:>8} {r['hasse_weil_cap']:>8}" for r in rows]
    return out, text


def cmd_sym_profiles(a):
    curve = _curve(a)
    if a.d > _max_e():
        raise InputError(f"d = {a.d} exceeds SYMCHAB_MAX_E")
    cps = ch.closed_points(curve, a.d)
    profs = ch.sym_profiles(curve, a.d)
    out = {"a": {str(k): v for k, v in sorted(cps.counts.items())}, "profiles": [p.to_json() for p in profs]}
    text = [" ".join(f"a{e}={n}" for e, n in sorted(cps.counts.items())), f"{len(profs)} profiles"]
    text += [f"  {p.key}  N_P={p.n_p}" for p in profs]
    return out, text


def cmd_bound(a):
    if a.input is not None:
        curve = _curve(a)
        if a.disk_cap is not None:
            raise InputError("--disk-cap applies only without a curve")
        rep = ch.total_bound(curve, d=a.d, worst_case=a.worst_case, strict=a.strict)
    else:
        if not a.worst_case or a.p is None or a.g is None:
            raise InputError("without --input, give --worst-case --p --g")
        rep = ch.total_bound(
            d=a.d,
            p=a.p,
            g=a.g,
            worst_case=True,
            disk_cap=a.disk_cap,
            rank_assumption=a.rank,
            assumption_A=a.assumption_a,
        )
    text = [f"(p, d, g) = ({rep.p}, {rep.d}, {rep.g}); disks: {rep.disk_count} ({rep.disk_count_source})"]
    text.append(f"{'disk':<34} {'Per':>6} {'Per_prime':>10} {'N_P':>4} {'contribution':>12}")
    for r in rep.rows:
        text.append(f"{r.profile_key:<34} {str(r.per):>6} {str(r.per_prime):>10} {r.n_p:>4} {str(r.contribution):>12}")
    text.append(f"total: {rep.total}")
    text.append(f"conservative total (N_P = 1): {rep.conservative_total}")
    text.append(f"label: {rep.label}")
    return rep.to_json(), text


COMMANDS = {
    "delta-table": cmd_delta_table,
    "trop": cmd_trop,
    "mixedvol": cmd_mixedvol,
    "bernstein": cmd_bernstein,
    "deform": cmd_deform,
    "count-points": cmd_count_points,
    "sym-profiles": cmd_sym_profiles,
    "bound": cmd_bound,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symchab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        return sp

    sp = add("delta-table", "truncation depths delta(k, p, l)")
    sp.add_argument("--p", type=int)
    sp.add_argument("--l", type=int)
    sp.add_argument("--k-max", type=int, default=4)

    for name, help_ in (
        ("trop", "vert sets, tropical cells and point queries for one series"),
        ("mixedvol", "mixed volume of d polytopes given as point lists"),
        ("bernstein", "BKK bound and coordinate-strata counts for a system"),
        ("deform", "deform a system away from witness points"),
    ):
        sp = add(name, help_)
        sp.add_argument("--input", help="path, '-' for stdin, or inline JSON")
        if name == "bernstein":
            sp.add_argument("--mode", choices=("exact", "permanent"), default="exact")

    sp = add("count-points", "#X(F_{p^e}) of the reduced curve for e = 1..E")
    sp.add_argument("--input")
    sp.add_argument("--e", type=int)

    sp = add("sym-profiles", "F_p-points of Sym^d X")
    sp.add_argument("--input")
    sp.add_argument("--d", type=int, required=True)

    sp = add("bound", "total bound over residue disks")
    sp.add_argument("--input")
    sp.add_argument("--worst-case", action="store_true")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--p", type=int)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--g", type=int)
    sp.add_argument("--disk-cap", type=int)
    sp.add_argument("--rank", type=int)
    sp.add_argument("--assumption-a", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, text = COMMANDS[args.command](args)
    except (InputError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ArithmeticError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 3
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(text))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
