"""Builtin scenarios: the Kummer surface, the most algebraic K3 surface and
the non-projective K3 surface with a Salem automorphism."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import dynamics as dy
from . import exactla as la
from . import fibration as fb
from . import salem
from .curveconf import (CurveConfig, Divisor, LatticeModel, builtin, config_gram, dual_graph_automorphisms,
                        lattice_model, MAX_AUTOMORPHISM_CURVES)
from .errors import UnknownName

SCENARIOS = ("kummer", "most-algebraic", "salem-k3")


@dataclass
class Options:
    max_word_len: int = 6
    free_check_len: int = 8
    threads: int = 1


@dataclass
class ScenarioReport:
    name: str
    sections: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    lines: list = field(default_factory=list)

    def check(self, claim: str, anchor: str, passed: bool, value: Any = None) -> bool:
        self.checks.append({"claim": claim, "anchor": anchor, "passed": bool(passed), "value": value})
        return bool(passed)

    @property
    def failures(self) -> list[dict]:
        return [c for c in self.checks if not c["passed"]]

    @property
    def ok(self) -> bool:
        return not self.failures


def parse_divisor(text: str) -> Divisor:
    """Parse ``"F1 + 2C14 + 3E4"``."""
    out = []
    for tok in text.split("+"):
        tok = tok.strip()
        k = 0
        while k < len(tok) and tok[k].isdigit():
            k += 1
        out.append((tok[k:], int(tok[:k]) if k else 1))
    return Divisor(out)


# ---------------------------------------------------------------------------
# record builders shared with the command line
# ---------------------------------------------------------------------------

def lattice_summary(cfg: CurveConfig, model: LatticeModel) -> dict:
    G = config_gram(cfg)
    sig = la.signature(model.lattice)
    out = {
        "config": cfg.name,
        "curves": len(cfg.names),
        "rank": model.rank,
        "radical_dim": len(cfg.names) - model.rank,
        "signature": list(sig.as_tuple()),
        "basis_curves": list(model.basis_curves),
        "discriminant_basis": la.discriminant(model.lattice),
        "discriminant_curve_span": la.det(model.span_gram()),
        "cone_rep": "sum of all curve classes" if model.cone_rep is not None else None,
    }
    assert la.rank(G) == model.rank
    return out


def fibration_record(model: LatticeModel, fd: fb.FiberData, roots: fb.RootSystem,
                     O: Optional[str] = None) -> dict:
    rec = {
        "divisor": str(fd.divisor),
        "kodaira": fd.kodaira.tag,
        "component_group": str(fb.component_group(fd.kodaira)),
        "sections": fb.sections_of(model, fd),
        "root_decomposition": list(roots.decomposition),
        "root_rank": roots.rank,
        "visible_fibers": [
            {"components": [f"{m}{c}" if m != 1 else c for c, m in vf.components],
             "kodaira": vf.kodaira.tag if vf.kodaira else None, "complete": vf.complete}
            for vf in fb.visible_fibers(model, fd.fiber_class)],
    }
    if O is not None:
        rec["zero_section"] = O
        rec["mw_rank"] = fb.mw_rank(model, fd, O, roots)
    return rec


def translation_record(t: dy.Translation) -> dict:
    return {
        "label": t.isometry.label,
        "zero_section": t.zero_section,
        "section": t.section,
        "power": t.power,
        "genuine": t.genuine,
        "integrality_power": t.eichler_power,
        "component_order": t.component_order,
        "height": t.height,
        "note": t.note,
    }


def entropy_record(er: dy.EntropyResult) -> dict:
    return {
        "lambda": list(er.lambda_interval),
        "entropy": list(er.entropy_interval),
        "classification": er.classification,
        "char_poly": er.char_poly.to_list(),
        "dynamical_factor": er.dynamical_factor.to_list(),
        "cyclotomic_indices": list(er.cyclotomic_indices),
    }


def cert_record(c: dy.CertResult) -> dict:
    return {"verdict": c.verdict, "curve": c.curve, "witness": list(c.witness), "map": c.label}


def group_cert_record(g: dy.GroupCertResult) -> dict:
    return {"verdict": g.verdict, "curve": g.curve,
            "generators": [cert_record(c) for c in g.per_generator]}


def salem_record(cert: salem.SalemCertificate) -> dict:
    irr = cert.irreducibility
    return {
        "poly": cert.poly.to_list(),
        "degree": cert.degree,
        "lambda": list(cert.lambda_interval),
        "trace_poly": cert.trace_poly.to_list(),
        "interior_root_count": cert.interior_root_count,
        "reciprocal": True,
        "irreducibility": {"verdict": irr.verdict, "primes": list(irr.primes),
                           "possible_degrees": list(irr.possible_degrees), "reason": irr.reason},
    }


def fmt_interval(lo: Fraction, hi: Fraction, digits: int = 12) -> str:
    """Outward-rounded decimal rendering of a rational enclosure."""
    scale = 10 ** digits
    a = (lo.numerator * scale) // lo.denominator
    b = -((-hi.numerator * scale) // hi.denominator)
    def dec(n: int) -> str:
        sign = "-" if n < 0 else ""
        n = abs(n)
        return f"{sign}{n // scale}.{n % scale:0{digits}d}"
    return f"[{dec(a)}, {dec(b)}]"


# ---------------------------------------------------------------------------
# fibration-translation-dynamics pipeline
# ---------------------------------------------------------------------------

def _run_translations(rep: ScenarioReport, model: LatticeModel, fibs: Sequence[tuple],
                      expected_type: str, anchor: str) -> dict:
    records, trans = [], {}
    for label, dtext, O, P in fibs:
        fd = fb.fiber_check(model, parse_divisor(dtext))
        roots = fb.vertical_root_system(model, fd.fiber_class)
        rec = fibration_record(model, fd, roots, O)
        rep.check(f"{label}: {dtext} is of type {expected_type}", anchor, fd.kodaira.tag == expected_type,
                  fd.kodaira.tag)
        rep.check(f"{label}: {O} and {P} are sections", "sections of the elliptic fibration",
                  O in rec["sections"] and P in rec["sections"])
        t = dy.translation_isometry(model, fd, O, P, roots=roots, label=label)
        rec["translation"] = translation_record(t)
        rep.check(f"{label}: translation maps {O} to {P}", "Mordell-Weil translation",
                  t.isometry(model.class_of(O)) == model.class_of(P))
        rep.check(f"{label}: translation has infinite order (positive height)",
                  "translation of infinite order", t.height > 0, t.height)
        rep.check(f"{label}: translation preserves the curve lattice", "integral isometry",
                  dy.integral_on_span(t.isometry, model))
        records.append({"name": label, **rec})
        trans[label] = (fd, t)
        note = " genuine" if t.genuine else f" power {t.power}"
        rep.lines.append(f"fibration {label}: {fd.divisor} -> {fd.kodaira}, roots "
                         f"{'+'.join(roots.decomposition) or '-'}, MW rank {rec['mw_rank']}, "
                         f"t[{P}/{O}]{note}, height {t.height}")
    return {"records": records, "translations": trans}


def _run_dynamics(rep: ScenarioReport, model: LatticeModel, gens: list, opts: Options,
                  anchor: str) -> dict:
    ws = dy.word_search(gens, opts.max_word_len, threads=opts.threads, model=model)
    lo, hi = ws.entropy.lambda_interval
    rep.check(f"word {ws.label} has certified spectral radius > 1", anchor, lo > 1 and ws.entropy.is_hyperbolic,
              ws.entropy.lambda_interval)
    free = dy.free_word_check(gens, opts.free_check_len, model=model)
    rep.check(f"no reduced word of length <= {opts.free_check_len} is trivial",
              "free product of translation powers (bounded check)", free.free, free.relator)
    common = dy.common_fixed_isotropic(gens)
    rep.check("generators have no common fixed isotropic vector", "parabolic subgroup criterion",
              common.vector is None, common.status)
    singles = []
    for g in gens:
        r = dy.common_fixed_isotropic([g])
        singles.append({"generator": g.label, "status": r.status, "vector": r.vector})
    rep.lines.append(f"best word: {ws.label} (length {len(ws.word)}), {ws.entropy.classification}")
    rep.lines.append(f"lambda ∈ {fmt_interval(lo, hi)}")
    rep.lines.append(f"entropy ∈ {fmt_interval(*ws.entropy.entropy_interval)}")
    rep.lines.append(f"free check: {'no relation' if free.free else 'relation ' + str(free.relator)} "
                     f"up to length {free.max_len} ({free.words_checked} words)")
    return {
        "generators": [g.label for g in gens],
        "max_word_len": opts.max_word_len,
        "best_word": ws.label,
        "best_word_length": len(ws.word),
        "words_explored": ws.words_explored,
        "distinct_elements": ws.distinct_elements,
        **entropy_record(ws.entropy),
        "free_check": {"max_len": free.max_len, "free": free.free, "words_checked": free.words_checked,
                       "relator": free.relator},
        "common_fixed_isotropic": {"status": common.status, "fixed_rank": common.fixed_rank,
                                   "restricted_signature": list(common.restricted_signature or ())},
        "single_generator_fixed_isotropic": singles,
        "_best": ws,
    }


def _lattice_checks(rep: ScenarioReport, cfg: CurveConfig, model: LatticeModel, rank: int,
                    sig: tuple, anchor: str) -> dict:
    summary = lattice_summary(cfg, model)
    rep.check(f"{cfg.name} curve span has rank {rank}", anchor, model.rank == rank, model.rank)
    rep.check(f"{cfg.name} signature is {sig}", "hyperbolic Neron-Severi lattice",
              tuple(summary["signature"]) == sig, summary["signature"])
    rep.lines.append(f"lattice {cfg.name}: rank {model.rank}, signature {tuple(summary['signature'])}, "
                     f"discriminant {summary['discriminant_basis']} "
                     f"(curve span {summary['discriminant_curve_span']})")
    return summary


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

KUMMER_FIBRATIONS = (
    ("f1", "F1 + 2C14 + F2 + 2C24 + F3 + 2C34 + 3E4", "C11", "C12"),
    ("f2", "F1 + 2C14 + F2 + 2C24 + F4 + 2C44 + 3E4", "C11", "C12"),
    ("f3", "E4 + 2C44 + E3 + 2C43 + E2 + 2C42 + 3F4", "C14", "C24"),
)

MOST_ALGEBRAIC_FIBRATIONS = (
    ("h", "G3 + 2E33 + 3E33' + 4F3 + 3E31' + 2E31 + G1 + 2E32'", "E13", "E23"),
    ("f1", "F1 + 2E13' + 3E13 + 4G3 + 3E23 + 2E23' + F2 + 2E33", "E11'", "E12'"),
    ("f2", "F1 + 2E13' + 3E13 + 4G3 + 3E33 + 2E33' + F3 + 2E23", "E11'", "E12'"),
)


def _translation_scenario(rep: ScenarioReport, cfg_name: str, rank: int, fibs: tuple, ftype: str,
                          curve: str, gen_labels: tuple, nontrivial: tuple, opts: Options,
                          anchors: dict) -> None:
    cfg = builtin(cfg_name)
    model = lattice_model(cfg)
    rep.sections["lattice"] = _lattice_checks(rep, cfg, model, rank, (1, rank - 1, 0), anchors["rank"])
    tr = _run_translations(rep, model, fibs, ftype, anchors["fiber"])
    rep.sections["fibrations"] = tr["records"]
    gens = [tr["translations"][g][1].isometry for g in gen_labels]
    dyn = _run_dynamics(rep, model, gens, opts, anchors["entropy"])
    best = dyn.pop("_best")
    rep.sections["dynamics"] = dyn

    group = dy.inertia_certificate_group(gens, model, curve)
    rep.check(f"every generator restricts to the identity on {curve}", anchors["inertia"],
              group.verdict == "inertia_certified", [list(c.witness) for c in group.per_generator])
    word_cert = dy.inertia_certificate(best.isometry, model, curve)
    nt_label, nt_pair = nontrivial
    nt_iso = tr["translations"][nt_label][1].isometry
    nt = dy.inertia_certificate(nt_iso, model, curve)
    rep.check(f"{nt_label} acts nontrivially on {curve} ({nt_pair[0]} -> {nt_pair[1]})", anchors["nontrivial"],
              nt.verdict == "nontrivial_on_curve" and nt.witness == nt_pair, list(nt.witness))
    rep.sections["certificates"] = {
        "inertia": group_cert_record(group),
        "best_word_direct": cert_record(word_cert),
        "nontrivial": cert_record(nt),
        "note": "membership in the inertia group is certified per generator, hence for every word",
    }
    rep.lines.append(f"inertia {curve}: {group.verdict} ("
                     + "; ".join(f"{c.label}: {', '.join(c.witness)}" for c in group.per_generator) + ")")
    rep.lines.append(f"{nt_label} on {curve}: {nt.verdict} ({' -> '.join(nt.witness)})")


def _kummer(opts: Options) -> ScenarioReport:
    rep = ScenarioReport("kummer")
    _translation_scenario(
        rep, "kummer_fig1", 18, KUMMER_FIBRATIONS, "IV*", "E4", ("f1", "f2"), ("f3", ("C14", "C24")), opts,
        {"rank": "Kummer surface of a product of non-isogenous elliptic curves has Picard number 18",
         "fiber": "D1, D2, D3 are singular fibers of type IV*",
         "entropy": "some element generated by f1, f2 has positive entropy",
         "inertia": "f1, f2 fix E4 pointwise (three fixed neighbours)",
         "nontrivial": "f3 acts on E4 by a nontrivial translation"})
    return rep


def _most_algebraic(opts: Options) -> ScenarioReport:
    rep = ScenarioReport("most-algebraic")
    _translation_scenario(
        rep, "most_algebraic_fig2", 20, MOST_ALGEBRAIC_FIBRATIONS, "III*", "G3", ("f1", "f2"),
        ("h", ("E13", "E23")), opts,
        {"rank": "the most algebraic K3 surface has Picard number 20",
         "fiber": "D, D1, D2 are singular fibers of type III*",
         "entropy": "some element generated by f1, f2 has positive entropy",
         "inertia": "f1, f2 fix G3 pointwise (three fixed neighbours)",
         "nontrivial": "h restricts to a nontrivial automorphism of G3"})
    return rep


def _salem_k3(opts: Options) -> ScenarioReport:
    rep = ScenarioReport("salem-k3")
    cfg = builtin("e8_thm51")
    model = lattice_model(cfg)
    summary = lattice_summary(cfg, model)
    d = la.det(model.gram)
    roots = la.short_vectors(model.lattice, -2)
    autos = dual_graph_automorphisms(cfg) if len(cfg.names) <= MAX_AUTOMORPHISM_CURVES else []
    rep.check("curve lattice is unimodular", "NS is isomorphic to E8", abs(d) == 1, d)
    rep.check("curve lattice is negative definite of rank 8", "NS is isomorphic to E8",
              tuple(summary["signature"]) == (0, 8, 0), summary["signature"])
    rep.check("240 roots", "E8 root count", 2 * len(roots) == 240, 2 * len(roots))
    rep.check("dual graph has no nontrivial automorphism", "the E8 diagram is rigid", len(autos) == 1, len(autos))
    summary["roots"] = 2 * len(roots)
    summary["dual_graph_automorphisms"] = len(autos)
    rep.sections["lattice"] = summary
    rep.lines.append(f"lattice {cfg.name}: rank 8, signature {tuple(summary['signature'])}, det {d}, "
                     f"{2 * len(roots)} roots, {len(autos)} graph automorphism(s)")

    cert = salem.salem_certify(salem.PHI14)
    lo, hi = cert.lambda_interval
    rep.check("phi14 is a Salem polynomial", "characteristic polynomial on T(S) is phi14", True)
    rep.check("Salem root agrees with 1.200026", "alpha = 1.200026...",
              Fraction(1200026, 10 ** 6) <= lo and hi < Fraction(1200027, 10 ** 6), cert.lambda_interval)
    rep.check("phi14 is irreducible (not refuted)", "phi14 is irreducible",
              cert.irreducibility.verdict in ("proven", "evidence"), cert.irreducibility.verdict)
    rep.sections["salem"] = salem_record(cert)

    block = la.as_matrix(
        [list(r) + [0] * 14 for r in la.identity(8)]
        + [[0] * 8 + list(r) for r in salem.companion(salem.PHI14)])
    er = dy.spectral_radius(block)
    overlap = max(er.lambda_interval[0], lo) <= min(er.lambda_interval[1], hi)
    rep.check("spectral radius of id8 + companion(phi14) equals the Salem root", "entropy log(alpha)",
              overlap and er.is_hyperbolic, er.lambda_interval)
    rep.sections["dynamics"] = {"action": "id8 + companion(phi14)", **entropy_record(er)}

    g = dy.identity_isometry(model, "g*|NS")
    c3 = dy.inertia_certificate(g, model, "C3")
    c8 = dy.inertia_certificate(g, model, "C8")
    rep.check("g restricts to the identity on C3", "C3 meets C2, C4, C8", c3.verdict == "inertia_certified",
              list(c3.witness))
    rep.check("C8 is inconclusive (single neighbour)", "inertia group of C8 is trivial",
              c8.verdict == "inconclusive", list(c8.witness))
    rep.sections["certificates"] = {"C3": cert_record(c3), "C8": cert_record(c8)}
    rep.lines.append(f"salem: phi14 degree {cert.degree}, {cert.interior_root_count} trace roots in (-2,2), "
                     f"irreducibility {cert.irreducibility.verdict}")
    rep.lines.append(f"lambda ∈ {fmt_interval(*er.lambda_interval)}")
    rep.lines.append(f"entropy ∈ {fmt_interval(*er.entropy_interval)}")
    rep.lines.append(f"inertia C3: {c3.verdict} ({', '.join(c3.witness)})")
    rep.lines.append(f"inertia C8: {c8.verdict} ({', '.join(c8.witness) or 'no witnesses'})")
    return rep


_RUNNERS = {"kummer": _kummer, "most-algebraic": _most_algebraic, "salem-k3": _salem_k3}


def run_scenario(name: str, options: Optional[Options] = None) -> ScenarioReport:
    try:
        runner = _RUNNERS[name]
    except KeyError:
        raise UnknownName(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None
    rep = runner(options or Options())
    rep.sections["not_claimed"] = [
        "finite index of the decomposition group in Aut(S)",
        "infinite index of the inertia group in the decomposition group",
        "free product structure beyond the checked word length",
    ]
    return rep
