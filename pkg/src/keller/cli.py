"""Command-line interface.

One subcommand per construction: check (full classification), kernel, uv,
invert, member, factor, units, probe-fc, gen, gb. Output is deterministic
text on stdout; --json PATH additionally writes a machine-readable report.
Exit codes: 0 for a completed run, 1 for a mathematical refusal (resource
caps, degenerate input, failed preconditions), 2 for usage or syntax
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .errors import (
    AlgebraicallyDependentError,
    DegreeCapExceeded,
    KellerError,
    MembershipFailedError,
    NotShapePositionError,
    ParseError,
    RecipeError,
    ResourceCapExceeded,
    UnknownVariableError,
    ZeroKernelError,
)
from .factor import (
    factor_bivariate,
    factorially_closed_probe,
    localization_units_check,
    stays_irreducible,
)
from .funcfield import uv_decomposition
from .groebner import (
    GREVLEX,
    LEX,
    Ideal,
    MonomialOrder,
    RunStats,
    block_order,
    buchberger,
    kernel_generator,
    subring_membership,
)
from .parsing import parse_poly
from .pipeline import (
    ClassificationReport,
    PipelineConfig,
    Verdict,
    classify,
    invert,
    random_tame,
    verify_inverse,
)
from .poly import U12, XY, Endomorphism, Polynomial, VarContext

SCHEMA_VERSION = 1

_REFUSALS = (
    ResourceCapExceeded,
    DegreeCapExceeded,
    AlgebraicallyDependentError,
    NotShapePositionError,
    ZeroKernelError,
    MembershipFailedError,
    RecipeError,
)


def _env_max_spairs() -> Optional[int]:
    raw = os.environ.get("KELLER_MAX_SPAIRS")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        return None


def _caps(args) -> dict:
    max_spairs = args.max_spairs if args.max_spairs is not None else _env_max_spairs()
    return {"max_spairs": max_spairs, "max_degree": args.max_degree}


def _parse_map(p_text: str, q_text: str) -> Endomorphism:
    return Endomorphism(parse_poly(p_text, XY), parse_poly(q_text, XY))


def _frac(value: Fraction) -> str:
    return str(value)


def _stats_doc(stats: RunStats) -> dict:
    return {
        "spairs": stats.spairs,
        "max_degree": stats.max_degree,
        "millis": stats.millis,
    }


def _jacobian_doc(jac) -> dict:
    doc = {"poly": str(jac.det), "is_constant": jac.kind != "nonconstant"}
    if jac.kind != "nonconstant":
        doc["value"] = _frac(jac.value if jac.value is not None else Fraction(0))
    return doc


def _report_doc(f: Endomorphism, report: ClassificationReport) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "input": {"p": str(f.p), "q": str(f.q)},
        "jacobian": _jacobian_doc(report.jacobian),
        "kernel": None,
        "uv": None,
        "v_factors": None,
        "units": None,
        "verdict": report.verdict.value,
        "inverse": None,
        "tfae": None,
        "stats": _stats_doc(report.stats),
    }
    if report.kernel is not None:
        doc["kernel"] = {
            "H": str(report.kernel.generator),
            "r": report.kernel.r,
            "coeffs": [str(c) for c in report.kernel.coeffs],
        }
    if report.uv is not None:
        doc["uv"] = {
            "u": str(report.uv.u),
            "v": str(report.uv.v),
            "g": str(report.uv.g),
        }
    if report.v_factorization is not None:
        by_poly = {r.source: r for r in report.v_reports}
        doc["v_factors"] = [
            {
                "factor": str(vj),
                "multiplicity": mult,
                "preserved": by_poly[vj].preserved if vj in by_poly else None,
                "image_factors": [
                    {"factor": str(w), "multiplicity": m}
                    for w, m in by_poly[vj].image_factors.factors
                ]
                if vj in by_poly
                else [],
            }
            for vj, mult in report.v_factorization.factors
        ]
    if report.units is not None:
        doc["units"] = {
            "all_in_subring": report.units.all_units_in_Cpq,
            "witnesses": [
                {
                    "factor": str(w.factor),
                    "inside": w.inside,
                    "G": str(w.membership) if w.membership is not None else None,
                }
                for w in report.units.witnesses
            ],
        }
    if report.inverse is not None:
        doc["inverse"] = {"s": str(report.inverse[0]), "t": str(report.inverse[1])}
    if report.tfae is not None:
        doc["tfae"] = {
            "i": report.tfae.i,
            "ii": report.tfae.ii,
            "iii": report.tfae.iii,
            "consistent": report.tfae.consistent,
        }
    if report.degenerate_reason:
        doc["reason"] = report.degenerate_reason
    if report.notes:
        doc["notes"] = list(report.notes)
    return doc


def _write_json(path: str, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _print_report(f: Endomorphism, report: ClassificationReport) -> None:
    print(f"p = {f.p}")
    print(f"q = {f.q}")
    jac = report.jacobian
    if jac.kind == "constant":
        print(f"jacobian = {jac.det} (nonzero constant)")
    elif jac.kind == "zero":
        print("jacobian = 0")
    else:
        print(f"jacobian = {jac.det} (not constant)")
    if report.kernel is not None:
        print(f"H = {report.kernel.generator}")
        print(f"r = {report.kernel.r}")
    if report.uv is not None:
        print(f"u = {report.uv.u}")
        print(f"v = {report.uv.v}")
    if report.v_factorization is not None and report.v_factorization.factors:
        for rep in report.v_reports:
            state = "preserved" if rep.preserved else "splits"
            images = ", ".join(
                f"{w}" + (f" ^{m}" if m > 1 else "")
                for w, m in rep.image_factors.factors
            )
            print(f"v-factor {rep.source}: {state} ({images})")
    if report.units is not None:
        print(f"units all in subring: {report.units.all_units_in_Cpq}")
    print(f"verdict = {report.verdict.value}")
    if report.degenerate_reason:
        print(f"reason: {report.degenerate_reason}")
    if report.inverse is not None:
        print(f"inverse: s = {report.inverse[0]}")
        print(f"inverse: t = {report.inverse[1]}")
    if report.tfae is not None:
        t = report.tfae
        mark = "consistent" if t.consistent else "INCONSISTENT"
        print(f"tfae: i={t.i} ii={t.ii} iii={t.iii} ({mark})")
    for note in report.notes:
        print(f"note: {note}")


def _cmd_check(args) -> int:
    caps = _caps(args)
    cfg = PipelineConfig(
        max_spairs=caps["max_spairs"],
        max_degree=caps["max_degree"],
        force=args.force,
        absolute=args.absolute,
    )
    if args.batch:
        return _cmd_check_batch(args, cfg)
    f = _parse_map(args.p, args.q)
    report = classify(f, cfg)
    _print_report(f, report)
    if args.json:
        _write_json(args.json, _report_doc(f, report))
    return 1 if report.verdict is Verdict.DEGENERATE else 0


def _cmd_check_batch(args, cfg: PipelineConfig) -> int:
    docs = []
    worst = 0
    with open(args.batch, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    index = 0
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ";" not in line:
            print(f"[{index}] skipped (expected 'p ; q'): {line}", flush=True)
            worst = max(worst, 2)
            index += 1
            continue
        p_text, q_text = line.split(";", 1)
        try:
            f = _parse_map(p_text.strip(), q_text.strip())
        except (ParseError, UnknownVariableError) as exc:
            print(f"[{index}] parse error: {exc}")
            worst = max(worst, 2)
            index += 1
            continue
        report = classify(f, cfg)
        print(f"[{index}] {f.p} ; {f.q} -> {report.verdict.value}")
        docs.append(_report_doc(f, report))
        if report.verdict is Verdict.DEGENERATE:
            worst = max(worst, 1)
        index += 1
    if args.json:
        _write_json(args.json, docs)
    return worst


def _cmd_kernel(args) -> int:
    caps = _caps(args)
    f = _parse_map(args.p, args.q)
    stats = RunStats()
    kernel = kernel_generator(f, stats=stats, **caps)
    print(f"H = {kernel.generator}")
    print(f"r = {kernel.r}")
    for i, c in enumerate(kernel.coeffs):
        print(f"H_{i} = {c}")
    if args.json:
        _write_json(
            args.json,
            {
                "schema_version": SCHEMA_VERSION,
                "input": {"p": str(f.p), "q": str(f.q)},
                "kernel": {
                    "H": str(kernel.generator),
                    "r": kernel.r,
                    "coeffs": [str(c) for c in kernel.coeffs],
                },
                "stats": _stats_doc(stats),
            },
        )
    return 0


def _cmd_uv(args) -> int:
    caps = _caps(args)
    f = _parse_map(args.p, args.q)
    stats = RunStats()
    dec = uv_decomposition(f, stats=stats, **caps)
    print(f"u = {dec.u}")
    print(f"v = {dec.v}")
    print(f"r = {dec.r}")
    print(f"g = {dec.g}")
    if args.json:
        _write_json(
            args.json,
            {
                "schema_version": SCHEMA_VERSION,
                "input": {"p": str(f.p), "q": str(f.q)},
                "uv": {"u": str(dec.u), "v": str(dec.v), "g": str(dec.g)},
                "r": dec.r,
                "stats": _stats_doc(stats),
            },
        )
    return 0


def _cmd_invert(args) -> int:
    caps = _caps(args)
    f = _parse_map(args.p, args.q)
    if f.jacobian.kind != "constant":
        print(
            "refused: the Jacobian determinant is not a nonzero constant, "
            "so no inverse is claimed",
            file=sys.stderr,
        )
        return 1
    stats = RunStats()
    s, t = invert(f, stats=stats, **caps)
    ok = verify_inverse(f, s, t)
    print(f"s = {s}")
    print(f"t = {t}")
    print(f"verified = {ok}")
    if args.json:
        _write_json(
            args.json,
            {
                "schema_version": SCHEMA_VERSION,
                "input": {"p": str(f.p), "q": str(f.q)},
                "inverse": {"s": str(s), "t": str(t)},
                "verified": ok,
                "stats": _stats_doc(stats),
            },
        )
    return 0 if ok else 1


def _cmd_member(args) -> int:
    caps = _caps(args)
    f = _parse_map(args.p, args.q)
    w = parse_poly(args.w, XY)
    stats = RunStats()
    G = subring_membership(w, f, stats=stats, **caps)
    if G is None:
        print("not a member of the image subalgebra")
    else:
        print(f"G = {G}")
    if args.json:
        _write_json(
            args.json,
            {
                "schema_version": SCHEMA_VERSION,
                "input": {"p": str(f.p), "q": str(f.q), "w": str(w)},
                "member": G is not None,
                "G": str(G) if G is not None else None,
                "stats": _stats_doc(stats),
            },
        )
    return 0


_CTX_BY_NAMES = {
    ("x", "y"): XY,
    ("u1", "u2"): U12,
}


def _context_from(names_text: str) -> VarContext:
    names = tuple(n.strip() for n in names_text.split(",") if n.strip())
    if not names:
        raise ParseError("no variables given", 0)
    return _CTX_BY_NAMES.get(names, VarContext(names))


def _cmd_factor(args) -> int:
    ctx = _context_from(args.vars)
    poly = parse_poly(args.expr, ctx)
    fact = factor_bivariate(poly, degree_cap=args.degree_cap, absolute=args.absolute)
    print(f"content = {_frac(fact.content)}")
    for i, (g, mult) in enumerate(fact.factors):
        note = ""
        if fact.absolute is not None:
            flag = fact.absolute[i]
            if flag is True:
                note = "  [absolutely irreducible]"
            elif flag is False:
                note = "  [splits over C]"
            else:
                note = "  [absolute status undetermined]"
        print(f"factor: {g}  multiplicity {mult}{note}")
    if args.json:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "input": {"expr": str(poly), "vars": list(ctx.names)},
            "content": _frac(fact.content),
            "factors": [
                {"factor": str(g), "multiplicity": m} for g, m in fact.factors
            ],
        }
        if fact.absolute is not None:
            for entry, flag in zip(doc["factors"], fact.absolute):
                entry["absolutely_irreducible"] = flag
        _write_json(args.json, doc)
    return 0


def _cmd_units(args) -> int:
    caps = _caps(args)
    f = _parse_map(args.p, args.q)
    v = parse_poly(args.v, U12)
    stats = RunStats()
    verdict = localization_units_check(
        f, v, degree_cap=args.degree_cap, stats=stats, **caps
    )
    print(f"all units in subring: {verdict.all_units_in_Cpq}")
    for w in verdict.witnesses:
        if w.inside:
            print(f"factor {w.factor}: inside (G = {w.membership})")
        else:
            print(f"factor {w.factor}: outside")
    if args.json:
        _write_json(
            args.json,
            {
                "schema_version": SCHEMA_VERSION,
                "input": {"p": str(f.p), "q": str(f.q), "v": str(v)},
                "units": {
                    "all_in_subring": verdict.all_units_in_Cpq,
                    "witnesses": [
                        {
                            "factor": str(w.factor),
                            "inside": w.inside,
                            "G": str(w.membership) if w.membership else None,
                        }
                        for w in verdict.witnesses
                    ],
                },
                "stats": _stats_doc(stats),
            },
        )
    return 0


def _cmd_probe_fc(args) -> int:
    caps = _caps(args)
    f = _parse_map(args.p, args.q)
    result = factorially_closed_probe(
        f,
        samples=args.samples,
        degree_bound=args.degree_bound,
        seed=args.seed,
        **caps,
    )
    if result.violation is None:
        print(f"no_violation_found (checked {result.checked} samples)")
    else:
        a1, a2 = result.violation
        print("violation found:")
        print(f"  a1 = {a1}  (outside the image subalgebra)")
        print(f"  a2 = {a2}")
        print(f"  a1 * a2 lies in the image subalgebra")
    if args.json:
        _write_json(
            args.json,
            {
                "schema_version": SCHEMA_VERSION,
                "input": {"p": str(f.p), "q": str(f.q)},
                "seed": args.seed,
                "checked": result.checked,
                "violation": None
                if result.violation is None
                else {"a1": str(result.violation[0]), "a2": str(result.violation[1])},
            },
        )
    return 0


def _cmd_gen(args) -> int:
    maps = []
    for k in range(args.count):
        f, recipe = random_tame(
            args.seed + k, max_steps=args.steps, degree_cap=args.degree_cap
        )
        maps.append((f, recipe))
        print(f"{f.p} ; {f.q}")
    if args.json:
        _write_json(
            args.json,
            [
                {
                    "schema_version": SCHEMA_VERSION,
                    "seed": rec.seed,
                    "p": str(f.p),
                    "q": str(f.q),
                    "steps": [type(s).__name__ for s in rec.steps],
                }
                for f, rec in maps
            ],
        )
    return 0


def _order_from(text: str, arity: int) -> MonomialOrder:
    if text == "lex":
        return LEX
    if text == "grevlex":
        return GREVLEX
    if text.startswith("block:"):
        k = int(text.split(":", 1)[1])
        if not 0 < k < arity:
            raise ParseError(f"block size must be between 1 and {arity - 1}", 0)
        return block_order(k)
    raise ParseError(f"unknown order {text!r}", 0)


def _cmd_gb(args) -> int:
    caps = _caps(args)
    ctx = _context_from(args.vars)
    gens = [parse_poly(g, ctx) for g in args.gens]
    order = _order_from(args.order, ctx.arity)
    stats = RunStats()
    basis = buchberger(Ideal(ctx, gens), order, stats=stats, **caps)
    for g in basis:
        print(g)
    if args.json:
        _write_json(
            args.json,
            {
                "schema_version": SCHEMA_VERSION,
                "input": {"generators": [str(g) for g in gens], "vars": list(ctx.names)},
                "order": args.order,
                "basis": [str(g) for g in basis],
                "stats": _stats_doc(stats),
            },
        )
    return 0


def _add_map_args(sub) -> None:
    sub.add_argument("-p", required=True, help="image of x, e.g. \"x\"")
    sub.add_argument("-q", required=True, help="image of y, e.g. \"y + x^2\"")


def _add_shared(sub) -> None:
    sub.add_argument("--json", metavar="PATH", help="write a JSON report to PATH")
    sub.add_argument("--max-spairs", type=int, default=None,
                     help="S-pair budget for basis computations")
    sub.add_argument("--max-degree", type=int, default=None,
                     help="intermediate degree cap for basis computations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keller",
        description="Exact tools for plane polynomial maps: Jacobian tests, "
        "image-algebra relations, inverses, factor preservation.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check", help="full classification of a map")
    p.add_argument("-p", help="image of x")
    p.add_argument("-q", help="image of y")
    p.add_argument("--batch", metavar="FILE", help="classify 'p ; q' lines from FILE")
    p.add_argument("--force", action="store_true",
                   help="compute all evidence even for non-Keller maps")
    p.add_argument("--absolute", action="store_true",
                   help="also certify absolute irreducibility of v-factors")
    _add_shared(p)
    p.set_defaults(fn=_cmd_check)

    p = subs.add_parser("kernel", help="relation ideal generator H and degree r")
    _add_map_args(p)
    _add_shared(p)
    p.set_defaults(fn=_cmd_kernel)

    p = subs.add_parser("uv", help="decomposition y = u(p,q,x)/v(p,q)")
    _add_map_args(p)
    _add_shared(p)
    p.set_defaults(fn=_cmd_uv)

    p = subs.add_parser("invert", help="inverse components for a Keller map")
    _add_map_args(p)
    _add_shared(p)
    p.set_defaults(fn=_cmd_invert)

    p = subs.add_parser("member", help="express w(x,y) as G(p,q) when possible")
    _add_map_args(p)
    p.add_argument("-w", required=True, help="polynomial in x, y to test")
    _add_shared(p)
    p.set_defaults(fn=_cmd_member)

    p = subs.add_parser("factor", help="factor a polynomial over Q")
    p.add_argument("-e", "--expr", required=True, help="polynomial to factor")
    p.add_argument("--vars", default="x,y", help="comma-separated variable names")
    p.add_argument("--degree-cap", type=int, default=10)
    p.add_argument("--absolute", action="store_true",
                   help="certify absolute irreducibility per factor")
    _add_shared(p)
    p.set_defaults(fn=_cmd_factor)

    p = subs.add_parser("units", help="unit-group membership check at v")
    _add_map_args(p)
    p.add_argument("-v", required=True, help="polynomial in u1, u2")
    p.add_argument("--degree-cap", type=int, default=10)
    _add_shared(p)
    p.set_defaults(fn=_cmd_units)

    p = subs.add_parser("probe-fc", help="sampling probe for factorial closedness")
    _add_map_args(p)
    p.add_argument("--samples", type=int, default=12)
    p.add_argument("--degree-bound", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    _add_shared(p)
    p.set_defaults(fn=_cmd_probe_fc)

    p = subs.add_parser("gen", help="generate seeded tame automorphisms")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--steps", type=int, default=4, help="maximum steps per recipe")
    p.add_argument("--degree-cap", type=int, default=12)
    _add_shared(p)
    p.set_defaults(fn=_cmd_gen)

    p = subs.add_parser("gb", help="reduced Groebner basis of an ideal")
    p.add_argument("-g", dest="gens", action="append", required=True,
                   help="generator (repeatable)")
    p.add_argument("--vars", default="x,y", help="comma-separated variable names")
    p.add_argument("--order", default="grevlex", help="lex | grevlex | block:K")
    _add_shared(p)
    p.set_defaults(fn=_cmd_gb)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.command == "check" and not args.batch and (args.p is None or args.q is None):
        print("error: check needs -p and -q, or --batch FILE", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (ParseError, UnknownVariableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _REFUSALS as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
