"""The ``rank2`` command line.

Every command builds a JSON-ready dict first; text output is rendered from
that dict.  Exit status: 0 pass, 1 check failure, 2 usage or data error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import papercalc, sheets
from .flagfq import BoundExceeded, fixed_points, flag_space, orbits, subgroup_gens
from .rootsys2 import KINDS, build_root_system, derive_structure_constants

SCHEMA_VERSION = 1
PARABOLICS = ("B", "P_a", "P_b")


class UsageError(Exception):
    pass


def parse_primes(text: str | None) -> tuple[int, ...] | None:
    if text is None or not text.strip():
        return None
    try:
        primes = tuple(int(p) for p in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise UsageError(f"bad prime list {text!r}") from exc
    for p in primes:
        if p < 3 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise UsageError(f"{p} is not an odd prime")
    return primes


def _primes(args) -> tuple[int, ...] | None:
    if getattr(args, "primes", None):
        return parse_primes(args.primes)
    return parse_primes(os.environ.get("RANK2_PRIMES"))


def _envelope(command: str, status: str, **body) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "status": status, **body}


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> dict:
    which = list(papercalc.CHECKS) if args.which == "all" else [args.which]
    primes = _primes(args)
    results = []
    for name in which:
        try:
            reps = papercalc.run_check(name, primes, args.seed, args.kind)
        except papercalc.UnsupportedPrime as exc:
            raise UsageError(str(exc)) from exc
        entry = {
            "check": name,
            "status": "pass" if all(r.passed for r in reps) else "fail",
            "reports": [r.to_dict() for r in reps],
        }
        results.append(entry)
        if args.report_dir:
            d = Path(args.report_dir)
            d.mkdir(parents=True, exist_ok=True)
            (d / f"{name}.json").write_text(json.dumps(entry, indent=2) + "\n")
    status = "pass" if all(e["status"] == "pass" for e in results) else "fail"
    return _envelope("verify", status, seed=args.seed, primes=list(primes) if primes else None, checks=results)


def cmd_flag(args) -> dict:
    kind, par, q = args.kind, args.parabolic, args.q
    rs = build_root_system(kind)
    if args.sub == "count":
        space = flag_space(kind, par, q)
        expected = rs.poincare(q, par)
        cells = {space.cell_name(i): c.stop - c.start for i, c in enumerate(space.cells)}
        return _envelope(
            "flag count", "pass" if len(space) == expected else "fail",
            kind=kind, parabolic=par, q=q, count=len(space), poincare=expected, cells=cells,
        )
    gens = subgroup_gens(kind, args.subgroup, q)
    if args.sub == "fixed":
        res = fixed_points(gens, kind, par, q, per_cell=True)
        return _envelope(
            "flag fixed", "pass", kind=kind, parabolic=par, q=q, subgroup=args.subgroup,
            total=res["total"], per_cell=res["per_cell"],
        )
    part = orbits(gens, kind, par, q)
    return _envelope(
        "flag orbits", "pass", kind=kind, parabolic=par, q=q, subgroup=args.subgroup,
        count=part.count, sizes=sorted(part.sizes, reverse=True),
    )


def _load(path) -> sheets.SheetSet:
    try:
        return sheets.load(path)
    except FileNotFoundError as exc:
        raise UsageError(f"no such dataset: {path}") from exc
    except sheets.SheetError as exc:
        raise UsageError(str(exc)) from exc


def cmd_sheets(args) -> dict:
    if args.sub == "generate":
        primes = _primes(args) or (3, 5)
        try:
            ss = sheets.infer_types_from_orbits(args.kind, args.subgroup, primes, args.top_rank)
        except sheets.PatternError as exc:
            return _envelope("sheets generate", "fail", error=str(exc), heuristic=True)
        except (ValueError, BoundExceeded) as exc:
            raise UsageError(str(exc)) from exc
        if args.top_rank is not None:
            ss.provenance["top_rank"] = args.top_rank
        viol = [v.to_dict() for v in sheets.validate(ss)]
        if args.dataset:
            sheets.save(ss, args.dataset)
        return _envelope(
            "sheets generate", "pass" if not viol else "fail",
            heuristic=True, violations=viol, dataset=ss.to_dict(), written=args.dataset,
        )
    ss = _load(args.path)
    viol = [v.to_dict() for v in sheets.validate(ss)]
    if args.sub == "validate":
        return _envelope("sheets validate", "pass" if not viol else "fail", path=str(args.path), violations=viol)
    if viol:
        return _envelope(f"sheets {args.sub}", "fail", path=str(args.path), violations=viol)
    if args.sub == "act":
        ids = [args.id] if args.id else list(ss.elements)
        roots = [args.root] if args.root else list(sheets.ROOTS)
        try:
            table = {s: {x: sheets.s_action(ss, s, x) for x in ids} for s in roots}
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        return _envelope("sheets act", "pass", path=str(args.path), action=table)
    # check
    top_rank = args.top_rank if args.top_rank is not None else ss.top.rank
    if top_rank is None:
        top_rank = ss.provenance.get("top_rank")
    if top_rank is None:
        raise UsageError("the top rank is unknown; pass --top-rank")
    try:
        ranked = sheets.propagate_ranks(ss, top_rank)
        b00 = sheets.restrict_to_b00(ranked)
    except sheets.SheetError as exc:
        return _envelope("sheets check", "fail", path=str(args.path), error=str(exc))
    rel = sheets.check_relations(ranked, on_b00=True)
    rel0 = sheets.check_relations(ranked, on_b00=False)
    trans = sheets.check_transitivity_and_codim1(ranked)
    ok = rel.passed and trans.passed and rel0.involutions
    return _envelope(
        "sheets check", "pass" if ok else "fail",
        path=str(args.path),
        heuristic=ss.heuristic,
        ranks={e.id: e.rank if e.rank is not None else [e.rank_lo, e.rank_hi] for e in ranked.elements.values()},
        b00=list(b00.elements),
        relations_b00=rel.to_dict(),
        relations_b0=rel0.to_dict(),
        transitivity=trans.to_dict(),
    )


def conventions_markdown() -> str:
    from .papercalc import convention_signs

    lines = [
        "# Conventions",
        "",
        "Generated by `rank2 conventions`; do not edit by hand.",
        "",
        "- Roots are integer pairs `(a, b)` meaning `a*alpha + b*beta`; alpha and beta are the simple roots.",
        "- G2: alpha is short.  B2: alpha is long.",
        "- `u_g(x) = exp(x e_g)`; `n_s = u_s(1) u_-s(-1) u_s(1)`; `h_s(t)` is the coroot image of `t`.",
        "- Commutators: `u_d(y)^-1 u_g(x)^-1 u_d(y) u_g(x) = prod u_{ig+jd}(C (-x)^i y^j)`, increasing `i+j`.",
        "- Weyl words act left to right on the list of letters: the word `ab` is `s_a s_b`.",
        "- Conjugation `conjugate(w, by)` is `by^-1 w by`.",
        "",
    ]
    signs = convention_signs()
    lines += [
        "## Basis sign vector used against published G2 formulas",
        "",
        "| root | sign |",
        "|---|---|",
    ]
    lines += [f"| {r} | {'+' if s > 0 else '-'} |" for r, s in signs.items()]
    lines.append("")
    for kind in KINDS:
        rs = build_root_system(kind)
        sc = derive_structure_constants(rs)
        lines += [
            f"## {kind}",
            "",
            f"Cartan matrix `{rs.cartan}`, braid order {rs.braid_order}.",
            "",
            "Positive roots in canonical order: " + ", ".join(f"`{r}`" for r in rs.positive_roots),
            "",
            "Extraspecial pairs: " + ", ".join(f"`({r}, {s})`" for r, s in sc.extraspecial),
            "",
            "### N(r, s) for r, s positive",
            "",
            "| r | s | N |",
            "|---|---|---|",
        ]
        for (r, s), n in sorted(sc.N.items()):
            if r.is_positive() and s.is_positive():
                lines.append(f"| {r} | {s} | {n} |")
        lines += ["", "### Commutator constants C(i, j)", "", "| g | d | i | j | root | C |", "|---|---|---|---|---|---|"]
        for (g, d), terms in sorted(sc.commutators.items()):
            if g.is_positive() and d.is_positive():
                for i, j, r, c in terms:
                    lines.append(f"| {g} | {d} | {i} | {j} | {r} | {c} |")
        lines += ["", "### Weyl signs eta(s, g)", "", "| s | g | eta |", "|---|---|---|"]
        for (s, g), e in sorted(sc.eta.items()):
            lines.append(f"| {s} | {g} | {e} |")
        lines.append("")
    return "\n".join(lines)


def cmd_conventions(args) -> dict:
    text = conventions_markdown()
    if args.write:
        Path(args.write).write_text(text)
    return _envelope("conventions", "pass", written=args.write, markdown=text)


# ---------------------------------------------------------------------------
# output


def render_text(report: dict) -> str:
    cmd = report["command"]
    out = [f"{cmd}: {report['status'].upper()}"]
    if cmd == "verify":
        for c in report["checks"]:
            out.append(f"  {c['check']}: {c['status']}")
            for r in c["reports"]:
                for a in r["assertions"]:
                    if not a["ok"]:
                        out.append(f"    [{r['check_id']}] failed: {a['name']}")
    elif cmd == "conventions":
        out.append(report["markdown"] if not report["written"] else f"  written to {report['written']}")
    else:
        for k, v in report.items():
            if k in ("schema_version", "command", "status", "dataset"):
                continue
            out.append(f"  {k}: {json.dumps(v)}")
    return "\n".join(out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="rank2", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run the formula and dimension checks")
    v.add_argument("which", choices=papercalc.CHECKS + ("all",))
    v.add_argument("--primes", help="comma-separated odd primes (default: RANK2_PRIMES or per check)")
    v.add_argument("--seed", type=int, default=papercalc.DEFAULT_SEED)
    v.add_argument("--kind", choices=KINDS, help="only for normal-generation")
    v.add_argument("--report-dir", help="also write one JSON file per check here")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("flag", parents=[common], help="flag varieties over F_q")
    f.add_argument("sub", choices=("count", "fixed", "orbits"))
    f.add_argument("--kind", choices=KINDS, required=True)
    f.add_argument("--parabolic", choices=PARABOLICS, default="B")
    f.add_argument("--q", type=int, required=True)
    f.add_argument("--subgroup", default="borel")
    f.set_defaults(func=cmd_flag)

    s = sub.add_parser("sheets", parents=[common], help="sheet datasets")
    s.add_argument("sub", choices=("validate", "act", "check", "generate"))
    s.add_argument("path", nargs="?", help="dataset (fixtures/NAME.json uses bundled data)")
    s.add_argument("--root", choices=sheets.ROOTS)
    s.add_argument("--id")
    s.add_argument("--top-rank", type=int)
    s.add_argument("--kind", choices=KINDS)
    s.add_argument("--subgroup")
    s.add_argument("--primes")
    s.add_argument("--dataset", help="generate: save the dataset here")
    s.set_defaults(func=cmd_sheets)

    c = sub.add_parser("conventions", parents=[common], help="root order and structure constants")
    c.add_argument("--write", help="write the markdown to this path")
    c.set_defaults(func=cmd_conventions)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sheets":
            if args.sub == "generate" and not (args.kind and args.subgroup):
                raise UsageError("generate needs --kind and --subgroup")
            if args.sub != "generate" and not args.path:
                raise UsageError(f"sheets {args.sub} needs a dataset path")
        if args.command == "flag":
            if args.q < 3 or any(args.q % d == 0 for d in range(2, int(args.q ** 0.5) + 1)):
                raise UsageError(f"q = {args.q} must be an odd prime")
        report = args.func(args)
    except UsageError as exc:
        print(f"rank2: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, BoundExceeded) as exc:
        print(f"rank2: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2) + "\n" if args.format == "json" else render_text(report) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report["status"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
