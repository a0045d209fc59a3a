"""Command-line entry point: ``brpic <command> [entry] [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

import numpy as np

from . import centre_pa, fusion, modular, morita
from .cyclo import CycScalar, GaloisMap, embed_complex, root_of_unity

COMMANDS = ("catalog", "modular", "ring-autos", "braided-autos", "nimreps",
            "algebras", "bp", "verify-pa", "galois")


# ---------------------------------------------------------------- output

def pi_fraction(x: CycScalar) -> str | None:
    """'a/b' with x = e^{a πi/b}, or None if x is not a root of unity."""
    m = max(x.m, 1)
    for e in range(2 * m):
        if root_of_unity(2 * m, e) == x:
            f = Fraction(e, m)
            return str(f)
    return None


def fmt_scalar(x: CycScalar, precision: int) -> str:
    z = complex(embed_complex(x))
    if abs(z.imag) < 10 ** -(precision + 2):
        return f"{z.real:.{precision}f}"
    return f"{z.real:.{precision}f}{z.imag:+.{precision}f}i"


def render(rows: list, header: list, fmt: str, title: str = "") -> str:
    if fmt == "json":
        return json.dumps({"title": title, "columns": header, "rows": rows}, ensure_ascii=False, indent=1)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    lines = [f"### {title}", ""] if title else []
    lines.append("| " + " | ".join(map(str, header)) + " |")
    lines.append("|" + "---|" * len(header))
    for r in rows:
        lines.append("| " + " | ".join(map(str, r)) + " |")
    return "\n".join(lines)


def render_many(blocks: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([json.loads(render(r, h, "json", t)) for t, h, r in blocks],
                          ensure_ascii=False, indent=1)
    return "\n\n".join(render(r, h, fmt, t) for t, h, r in blocks)


# --------------------------------------------------------------- commands

def _entry(args):
    if not args.entry:
        raise fusion.UnknownName("an entry name is required")
    return fusion.catalog(args.entry)


def _factors(entry, args):
    fx = modular.load_fixtures(args.fixtures)
    return modular.calibrated_factors(entry.name, fx)


def cmd_catalog(args):
    return render([[n] for n in fusion.catalog_names()], ["entry"], args.format, "catalog")


def cmd_modular(args):
    e = _entry(args)
    md = modular.modular_data(e, _factors(e, args), with_s=args.with_s)
    dims = fusion.fp_dims_float(e.ring)
    rows = []
    for i, lab in enumerate(e.ring.labels):
        rows.append([lab, f"{dims[i]:.{args.precision}f}", pi_fraction(md.t[i]) or fmt_scalar(md.t[i], args.precision)])
    blocks = [(f"{e.name}: dimensions and twists (twist = exp(x·πi))", ["label", "FPdim", "twist x"], rows)]
    if md.S is not None:
        S = [[fmt_scalar(x, args.precision) for x in row] for row in md.S]
        blocks.append((f"{e.name}: S (unnormalized); modular = {modular.is_modular(md.S)}",
                       [""] + list(e.ring.labels), [[lab] + row for lab, row in zip(e.ring.labels, S)]))
    return render_many(blocks, args.format)


def _perm_row(ring, p):
    return [morita.auto_name(ring, p)]


def cmd_ring_autos(args):
    e = _entry(args)
    autos = fusion.ring_automorphisms(e.ring)
    return render([_perm_row(e.ring, p) for p in autos], ["automorphism"], args.format,
                  f"{e.name}: {len(autos)} fusion ring automorphisms")


def cmd_braided_autos(args):
    e = _entry(args)
    md = modular.modular_data(e, _factors(e, args))
    autos = modular.braided_automorphisms(md)
    fp = modular.group_fingerprint(autos)
    name = modular.name_group(fp) or "?"
    title = f"{e.name}: {len(autos)} braided automorphisms, group {name}, element orders {fp['element_orders']}"
    return render([_perm_row(e.ring, p) for p in autos], ["automorphism"], args.format, title)


def cmd_nimreps(args):
    e = _entry(args)
    ranks = args.rank or list(range(1, e.rank + 1))
    blocks = []
    for k in ranks:
        nrs = morita.nimrep_search(e.ring, k)
        g = morita._default_generator(e.ring)
        rows = []
        for i, nr in enumerate(nrs):
            diag = sorted({c.label() for c in morita.algebra_candidates(nr)})
            rows.append([i, json.dumps(nr.matrices[g].tolist()), "; ".join(diag)])
        blocks.append((f"{e.name}: rank {k}, {len(nrs)} NIM-reps (generator {e.ring.labels[g]})",
                       ["#", "M_g", "algebra candidates"], rows))
    return render_many(blocks, args.format)


def cmd_algebras(args):
    e = _entry(args)
    ranks = args.rank or list(range(1, e.rank + 1))
    by = morita.candidates_by_rank(e.ring, ranks)
    rows = [[k, c.label()] for k in ranks for c in sorted(by[k], key=lambda c: c.multiplicities.dim())]
    return render(rows, ["rank", "candidate"], args.format, f"{e.name}: algebra object candidates")


def cmd_bp(args):
    e = _entry(args)
    fx = modular.load_fixtures(args.fixtures)
    table = morita.bp_table(e.name, args.rank or None, fx)
    ring = e.ring
    names = {}

    def short(v):
        key = v.to_text()
        if key not in names:
            names[key] = "I" if not names else f"V{len(names)}"
        return names[key]

    ident = [c for c in table.cells if c.auto == tuple(range(len(c.auto)))][0]
    short(ident.vector)
    blocks = []
    try:
        autos, grid = morita.product_grid(table)
        header = ["bop \\ left"] + [morita.auto_name(ring, a) for a in autos]
        rows = [[morita.auto_name(ring, a)] + [short(c.vector) for c in row] for a, row in zip(autos, grid)]
        blocks.append((f"{e.name}: restricted inductions R(F^-1(I(1)))", header, rows))
    except morita.NotModularEntry:
        zr = fusion.catalog(f"Z({e.name})").ring
        rows = [[morita.auto_name(zr, c.auto), short(c.vector),
                 c.underlying.to_text() if c.underlying is not None else "ambiguous"] for c in table.cells]
        blocks.append((f"{e.name}: cells by braided autoequivalence of the centre",
                       ["autoequivalence", "vector", "underlying algebra"], rows))
    legend = []
    for c in table.cells:
        k = c.vector.to_text()
        if names.get(k) and not any(r[0] == names[k] for r in legend):
            acc = " | ".join(" ⊕ ".join(f"({x.to_text()})" for x in d) for d in c.accepted) or "none"
            legend.append([names[k], k, acc, c.underlying.to_text() if c.underlying is not None else "ambiguous"])
    blocks.append(("legend", ["name", "vector", "decomposition", "underlying algebra"], legend))
    rej = [[k, " ⊕ ".join(f"({x.to_text()})" for x in d)] for k, ds in table.rejected.items() for d in ds]
    if rej:
        blocks.append(("rejected by the counting filter", ["vector", "decomposition"], rej))
    blocks.append(("summary", ["|Out|", "group", "element orders", "algebra structures"],
                   [[table.out_order, table.group or "?", table.fingerprint["element_orders"],
                     json.dumps(table.structures, ensure_ascii=False)]]))
    return render_many(blocks, args.format)


def _parse_presentation(text: str, N):
    t = text.replace(" ", "")
    if t in ("Z(adE6)", "ZadE6"):
        return centre_pa.presentation("ZadE6")
    if t.startswith("Z(adA:") and t.endswith(")"):
        M = int(t[6:-1])
        if M % 2 == 0:
            raise centre_pa.UnsupportedPresentation(f"{text}: needs an odd index")
        return centre_pa.presentation("ZadA", (M - 1) // 2)
    if t == "ZadA":
        return centre_pa.presentation("ZadA", N)
    raise centre_pa.UnsupportedPresentation(text)


def cmd_verify_pa(args):
    pres = _parse_presentation(args.entry or "", args.N)
    rows = []
    for k in range(1, 14):
        r = centre_pa.verify_relation(pres, k)
        rows.append([k, "holds" if r.holds else "FAILS", f"{r.residual:.{args.precision}g}", r.method, r.note])
    fixed = centre_pa.verify_relation(pres, 12, printed=False)
    rows.append(["12 (derived coefficients)", "holds" if fixed.holds else "FAILS",
                 f"{fixed.residual:.{args.precision}g}", fixed.method, ""])
    rng = random.Random(args.seed)
    agree = 0
    n = args.samples
    for _ in range(n):
        d = centre_pa.random_diagram(pres, rng, max_width=4, steps=6,
                                     s_pairs=rng.choice([0, 1]) if pres.family == "ZadA" else 0)
        agree += centre_pa.confluence_check(d)[0]
    sols = centre_pa.pa_automorphism_solve(pres.family, pres.N if pres.family == "ZadA" else None)
    blocks = [(f"{pres.name}: relations", ["relation", "status", "residual", "method", "note"], rows),
              ("confluence and automorphisms", ["random diagrams agreeing", "automorphisms", "gauge classes"],
               [[f"{agree}/{n}", len(sols),
                 len(centre_pa.gauge_classes(pres.family, pres.N if pres.family == "ZadA" else None))]])]
    return render_many(blocks, args.format)


def cmd_galois(args):
    e = _entry(args)
    md = modular.modular_data(e, _factors(e, args))
    m = 1
    for x in md.t:
        m = np.lcm(m, x.m)
    for f in md.factors:
        m = np.lcm(m, (f.qh * root_of_unity(4, 1)).m)
    m = int(m)
    sigma = GaloisMap(m, args.k)
    conj = modular.galois_conjugate_data(md, sigma)
    recomputed = modular.twist_vector(e, conj.factors)
    a = len(modular.braided_automorphisms(md))
    b = len(modular.braided_automorphisms(conj))
    rows = [[f"ζ_{m} -> ζ_{m}^{sigma.k}", a, b, recomputed == conj.t]]
    return render(rows, ["field automorphism", "|braided autos|", "|braided autos| conjugate",
                         "twists recomputed from conjugate factors"], args.format, f"{e.name}: Galois conjugation")


HANDLERS = {
    "catalog": cmd_catalog,
    "modular": cmd_modular,
    "ring-autos": cmd_ring_autos,
    "braided-autos": cmd_braided_autos,
    "nimreps": cmd_nimreps,
    "algebras": cmd_algebras,
    "bp": cmd_bp,
    "verify-pa": cmd_verify_pa,
    "galois": cmd_galois,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="brpic", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("entry", nargs="?", help="catalog entry, e.g. adD:10 or Z(E6); for verify-pa a presentation")
    p.add_argument("--entry", dest="entry_flag", help="same as the positional entry")
    p.add_argument("--format", choices=("markdown", "csv", "json"), default="markdown")
    p.add_argument("--rank", type=int, action="append", help="NIM-rep rank (repeatable)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--samples", type=int, default=20, help="random diagrams for verify-pa")
    p.add_argument("--fixtures", help="alternative fixtures JSON")
    p.add_argument("--precision", type=int, default=6)
    p.add_argument("--with-s", action="store_true", help="include the S-matrix (modular)")
    p.add_argument("--N", type=int, help="N for the ZadA presentation")
    p.add_argument("-k", type=int, default=-1, help="Galois exponent: ζ -> ζ^k")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.entry = args.entry or args.entry_flag
    try:
        if args.entry and args.command not in ("verify-pa", "catalog"):
            fusion.catalog(args.entry)  # reject unknown names before any work
        out = HANDLERS[args.command](args)
    except Exception as exc:  # every module error becomes a JSON object
        err = {"error": type(exc).__name__, "message": str(exc).strip("'\""), "command": args.command}
        print(json.dumps(err, ensure_ascii=False), file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
