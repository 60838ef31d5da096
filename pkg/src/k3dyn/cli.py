"""Command line: ``k3dyn scenario|lattice|fiber|dynamics|salem ...``.

Exit codes: 0 when every certification passes, 2 when one fails, 3 on
invalid input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import dynamics as dy
from . import fibration as fb
from . import salem
from .curveconf import MAX_AUTOMORPHISM_CURVES, dual_graph_automorphisms, lattice_model
from .errors import K3DynError, NotIsotropic, NotSalem, ParseError, UnknownName, ValidationError
from .io import load_config, load_fibration, load_fibrations, load_poly
from .report import canonical_json, emit_report, report_payload, utc_stamp
from .scenarios import (SCENARIOS, Options, entropy_record, fibration_record, fmt_interval, lattice_summary,
                        run_scenario, salem_record, translation_record, group_cert_record)

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 2, 3


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="also write the canonical JSON report to PATH ('-' for stdout)")
    common.add_argument("--stamp", action="store_true", help="add a UTC timestamp outside the canonical block")
    common.add_argument("--max-word-len", type=_positive, default=6)
    common.add_argument("--free-check-len", type=_positive, default=8)
    common.add_argument("--threads", type=_positive, default=1)

    p = argparse.ArgumentParser(prog="k3dyn", description="Exact lattice dynamics for K3 surfaces")
    sub = p.add_subparsers(dest="verb", required=True)

    sc = sub.add_parser("scenario", parents=[common], help="run a builtin scenario")
    sc.add_argument("name", choices=SCENARIOS)

    lat = sub.add_parser("lattice", help="lattice commands")
    lat_sub = lat.add_subparsers(dest="action", required=True)
    info = lat_sub.add_parser("info", parents=[common], help="rank, signature and discriminant of a configuration")
    info.add_argument("config")

    fib = sub.add_parser("fiber", help="fiber commands")
    fib_sub = fib.add_subparsers(dest="action", required=True)
    cl = fib_sub.add_parser("classify", parents=[common], help="classify a divisor as a Kodaira fiber")
    cl.add_argument("config")
    cl.add_argument("divisor")

    dyn = sub.add_parser("dynamics", help="dynamics commands")
    dyn_sub = dyn.add_subparsers(dest="action", required=True)
    se = dyn_sub.add_parser("search", parents=[common], help="search words in translation isometries")
    se.add_argument("config")
    se.add_argument("fibrations")

    sal = sub.add_parser("salem", help="Salem polynomial commands")
    sal_sub = sal.add_subparsers(dest="action", required=True)
    ce = sal_sub.add_parser("certify", parents=[common], help="certify a Salem polynomial")
    ce.add_argument("poly")
    return p


def _write(data: bytes, dest: Optional[str]) -> None:
    if dest is None:
        return
    if dest == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(dest).write_bytes(data)


def _emit(kind: str, name: str, sections: dict, checks: list, lines: list, args) -> int:
    stamp = utc_stamp() if args.stamp else None
    payload = report_payload(kind, name, sections, checks)
    if stamp is not None:
        payload = {"report": payload, "stamp": stamp}
    if args.json != "-":
        text = [f"{kind}: {name}", *lines]
        failed = [c for c in checks if not c["passed"]]
        text.append(f"checks: {len(checks) - len(failed)} passed, {len(failed)} failed")
        for c in failed:
            text.append(f"  [FAIL] {c['claim']}")
        if stamp:
            text.append(f"generated: {stamp}")
        sys.stdout.write("\n".join(text) + "\n")
    _write(canonical_json(payload), args.json)
    return EXIT_OK if all(c["passed"] for c in checks) else EXIT_FAILED


def _check(checks: list, claim: str, passed: bool, value=None) -> None:
    checks.append({"claim": claim, "anchor": "command line check", "passed": bool(passed), "value": value})


def cmd_scenario(args) -> int:
    opts = Options(args.max_word_len, args.free_check_len, args.threads)
    rep = run_scenario(args.name, opts)
    stamp = utc_stamp() if args.stamp else None
    if args.json != "-":
        sys.stdout.buffer.write(emit_report(rep, "text", stamp))
        sys.stdout.flush()
    _write(emit_report(rep, "json", stamp), args.json)
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_lattice_info(args) -> int:
    cfg = load_config(args.config)
    model = lattice_model(cfg)
    summary = lattice_summary(cfg, model)
    if len(cfg.names) <= MAX_AUTOMORPHISM_CURVES:
        summary["dual_graph_automorphisms"] = len(dual_graph_automorphisms(cfg))
    lines = [f"curves {summary['curves']}, rank {summary['rank']}, radical {summary['radical_dim']}",
             f"signature {tuple(summary['signature'])}",
             f"discriminant {summary['discriminant_basis']} (curve span {summary['discriminant_curve_span']})"]
    if "dual_graph_automorphisms" in summary:
        lines.append(f"dual graph automorphisms {summary['dual_graph_automorphisms']}")
    return _emit("lattice", cfg.name, {"lattice": summary}, [], lines, args)


def cmd_fiber_classify(args) -> int:
    cfg = load_config(args.config)
    spec = load_fibration(args.divisor)
    kt = fb.kodaira_classify(cfg, spec.divisor)
    model = lattice_model(cfg)
    fd = fb.fiber_check(model, spec.divisor)
    sections: dict = {"fiber": {"divisor": str(fd.divisor), "kodaira": kt.tag,
                                "multiplicities": list(kt.multiplicities)}}
    lines = [f"{fd.divisor} -> {kt.tag}"]
    checks: list = []
    sections["fiber"]["component_group"] = str(fb.component_group(kt))
    try:
        roots = fb.vertical_root_system(model, fd.fiber_class)
    except NotIsotropic:
        # the fiber class vanishes when the configuration is only the fiber itself
        lines.append("fiber class is zero in the curve lattice; no fibration data")
        return _emit("fiber", cfg.name, sections, checks, lines, args)
    O = spec.zero_section
    rec = fibration_record(model, fd, roots, O)
    sections["fibration"] = rec
    lines.append(f"sections {', '.join(rec['sections']) or '-'}; roots {'+'.join(roots.decomposition) or '-'}")
    if O is not None:
        lines.append(f"MW rank {rec['mw_rank']}")
    if O is not None and spec.section is not None:
        t = dy.translation_isometry(model, fd, O, spec.section, roots=roots,
                                    label=spec.label or f"t[{spec.section}/{O}]")
        sections["translation"] = translation_record(t)
        lines.append(f"translation power {t.power} ({'genuine' if t.genuine else 'transvection'}), "
                     f"height {t.height}")
        _check(checks, "translation maps the zero section to the section",
               t.isometry(model.class_of(O)) == model.class_of(spec.section))
    return _emit("fiber", cfg.name, sections, checks, lines, args)


def cmd_dynamics_search(args) -> int:
    cfg = load_config(args.config)
    specs, curve = load_fibrations(args.fibrations)
    model = lattice_model(cfg)
    gens, records = [], []
    for k, spec in enumerate(specs):
        fd = fb.fiber_check(model, spec.divisor)
        label = spec.label or f"g{k + 1}"
        t = dy.translation_isometry(model, fd, spec.zero_section, spec.section, label=label)
        gens.append(t.isometry)
        records.append({"divisor": str(fd.divisor), "kodaira": fd.kodaira.tag, **translation_record(t)})
    ws = dy.word_search(gens, args.max_word_len, threads=args.threads, model=model)
    checks: list = []
    _check(checks, "some word has spectral radius > 1", ws.entropy.is_hyperbolic, ws.entropy.lambda_interval)
    sections = {"generators": records,
                "dynamics": {"best_word": ws.label, "max_word_len": args.max_word_len,
                             "words_explored": ws.words_explored, **entropy_record(ws.entropy)}}
    lines = [f"generators: {', '.join(g.label for g in gens)}",
             f"best word: {ws.label} ({ws.entropy.classification})",
             f"lambda ∈ {fmt_interval(*ws.entropy.lambda_interval)}"]
    if len(gens) == 2:
        free = dy.free_word_check(gens, args.free_check_len, model=model)
        sections["free_check"] = {"max_len": free.max_len, "free": free.free, "relator": free.relator}
        _check(checks, f"no trivial reduced word up to length {free.max_len}", free.free, free.relator)
        lines.append(f"free check up to length {free.max_len}: {'ok' if free.free else free.relator}")
    if curve is not None:
        g = dy.inertia_certificate_group(gens, model, curve)
        sections["inertia"] = group_cert_record(g)
        lines.append(f"inertia {curve}: {g.verdict}")
        _check(checks, f"generators restrict to the identity on {curve}", g.verdict == "inertia_certified")
    return _emit("dynamics", cfg.name, sections, checks, lines, args)


def cmd_salem_certify(args) -> int:
    p = load_poly(args.poly)
    try:
        cert = salem.salem_certify(p)
    except NotSalem as exc:
        checks = [{"claim": "Salem polynomial", "anchor": "command line check", "passed": False,
                   "value": exc.criterion}]
        return _emit("salem", str(p), {"rejection": {"criterion": exc.criterion, "detail": str(exc)}},
                     checks, [f"rejected: {exc}"], args)
    lines = [f"degree {cert.degree}, trace polynomial {cert.trace_poly}",
             f"{cert.interior_root_count} trace roots in (-2,2)",
             f"lambda ∈ {fmt_interval(*cert.lambda_interval)}",
             f"irreducibility: {cert.irreducibility.verdict}"]
    checks = [{"claim": "Salem polynomial", "anchor": "command line check", "passed": True, "value": None}]
    return _emit("salem", str(p), {"salem": salem_record(cert)}, checks, lines, args)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_OK
    handlers = {
        "scenario": cmd_scenario,
        ("lattice", "info"): cmd_lattice_info,
        ("fiber", "classify"): cmd_fiber_classify,
        ("dynamics", "search"): cmd_dynamics_search,
        ("salem", "certify"): cmd_salem_certify,
    }
    key = args.verb if args.verb == "scenario" else (args.verb, args.action)
    try:
        return handlers[key](args)
    except (ParseError, ValidationError, UnknownName) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except K3DynError as exc:
        if args.verb == "scenario":
            print(f"certification failed: {exc}", file=sys.stderr)
            return EXIT_FAILED
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
