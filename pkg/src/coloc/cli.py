"""Command-line front end.

    coloc parse FILE
    coloc check CHECK FILE [--probe NAME] [--window d] [--field Q|Fp] [--json]
    coloc localize FILE --at NAME [--json]
    coloc compat FILE --coaction NAME --loc NAME [--window d] [--json]
    coloc demo FIXTURE [--json]
    coloc report --json PATH

Exit status: 0 when every requested check passes (or is compatible), 1 on a
failed or incompatible check, 2 on a usage error, 3 on a parse error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Sequence

from .exact import FieldError, field_from_name
from .presentations import Environment, FieldDecl, ParseError, PresentationBundle, elaborate, parse, print_bundle
from .report import CheckReport, Witness, emit_json, pretty, timed

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# loading
# --------------------------------------------------------------------------


def load_file(path: str, field_name: str | None = None) -> tuple[PresentationBundle, Environment]:
    with open(path, encoding="utf-8") as fh:
        bundle = parse(fh.read())
    if field_name is not None:
        try:
            field_from_name(field_name)
        except FieldError as exc:
            raise UsageError(str(exc)) from None
        decls = [d for d in bundle.declarations if not isinstance(d, FieldDecl)]
        bundle = PresentationBundle((FieldDecl(field_name),) + tuple(decls))
    return bundle, elaborate(bundle)


def _findim_algebra(obj):
    from .findim import Algebra, Bialgebra

    if isinstance(obj, Bialgebra):
        return obj.algebra
    return obj if isinstance(obj, Algebra) else None


def _probe_for(env: Environment, A, probe_name: str | None):
    from .hopfcat import default_probe

    if probe_name is None:
        return default_probe(A)
    if probe_name not in env or env.kinds[probe_name] != "probe":
        raise UsageError(f"no probe named {probe_name!r}")
    p = env[probe_name]
    if p.modules[0].algebra != A:
        return None
    return p


def _probe_mismatch(check: str, what: str, probe_name: str) -> CheckReport:
    r = CheckReport(check)
    r.add(Witness(f"probe {probe_name} is not over {what}"), "error")
    return r


# --------------------------------------------------------------------------
# checks
# --------------------------------------------------------------------------


def _named(r: CheckReport, name: str) -> CheckReport:
    r.check = name
    return r


def run_check(check: str, env: Environment, probe: str | None = None, window: int = 3) -> list[CheckReport]:
    from . import entwining as ent
    from . import findim as fd
    from . import hopfcat as hc
    from . import localization as lz
    from . import skew as sk

    out: list[CheckReport] = []
    kinds = env.kinds

    def each(*ks):
        return [(n, env[n]) for n, k in kinds.items() if k in ks]

    if check == "algebra":
        for n, obj in each("algebra", "bialgebra"):
            out.append(_named(fd.check_algebra(_findim_algebra(obj)), f"algebra {n}"))
    elif check == "coalgebra":
        for n, obj in each("coalgebra", "bialgebra"):
            C = obj.coalgebra if isinstance(obj, fd.Bialgebra) else obj
            out.append(_named(fd.check_coalgebra(C), f"coalgebra {n}"))
    elif check == "bialgebra":
        for n, obj in each("bialgebra"):
            out.append(_named(fd.check_bialgebra(obj), f"bialgebra {n}"))
        for n, obj in each("skew-bialgebra"):
            out.append(_named(sk.check_skew_bialgebra(obj), f"bialgebra {n}"))
    elif check in ("comodule-algebra", "coaction"):
        for n, c in each("coaction"):
            if isinstance(c, fd.CoactionData):
                out.append(_named(fd.check_comodule_algebra(c), f"comodule-algebra {n}"))
            else:
                out.append(_named(sk.check_skew_comodule_algebra(c), f"comodule-algebra {n}"))
    elif check == "module":
        for n, M in each("module"):
            out.append(_named(fd.check_module(M), f"module {n}"))
    elif check == "probe":
        for n, p in each("probe"):
            out.append(_named(p.validate(), f"probe {n}"))
    elif check == "action":
        for n, a in each("action"):
            out.append(_named(hc.check_hopf_action(a), f"hopf-action {n}"))
    elif check == "entwining":
        for n, w in each("entwining"):
            if isinstance(w, ent.EntwiningData):
                p = _probe_for(env, w.A, probe)
                rep = ent.entwining_suite(w, p) if p else _probe_mismatch("entwining", w.A.name, probe)
            else:
                rep = ent.check_skew_entwining(w)
            out.append(_named(rep, f"entwining {n}"))
    elif check == "comonad":
        for n, c in each("coaction"):
            if isinstance(c, fd.CoactionData):
                p = _probe_for(env, c.source, probe)
                rep = hc.hopf_comonad_suite(c, p) if p else _probe_mismatch("comonad", c.source.name, probe)
                out.append(_named(rep, f"hopf-comonad {n}"))
    elif check == "monad":
        for n, a in each("action"):
            p = _probe_for(env, a.A, probe)
            rep = hc.hopf_monad_suite(a, p) if p else _probe_mismatch("monad", a.A.name, probe)
            out.append(_named(rep, f"hopf-monad {n}"))
    elif check in ("mixed-law", "localized-comonad"):
        for cn, c in each("coaction"):
            for ln, loc in each("localization"):
                if not (isinstance(c, fd.CoactionData) and loc.findim and loc.source == c.source):
                    continue
                v = lz.check_compatibility(c, loc)
                if not v.compatible:
                    out.append(_named(v.report, f"{check} {cn} @ {ln}"))
                    continue
                p = _probe_for(env, c.source, probe)
                if p is None:
                    out.append(_probe_mismatch(f"{check} {cn} @ {ln}", c.source.name, probe))
                    continue
                H = hc.hopf_localization(loc, c)
                if check == "mixed-law":
                    rep = hc.check_mixed_distributive_law(H.law, H.L, H.G, p)
                else:
                    rep = hc.check_localized_comonad(H, p)
                out.append(_named(rep, f"{check} {cn} @ {ln}"))
    elif check == "idempotent-monad":
        for n, loc in each("localization"):
            out.append(_named(lz.check_idempotent_monad(loc, window=window), f"idempotent-monad {n}"))
    elif check == "action-compat":
        for an, a in each("action"):
            for ln, loc in each("localization"):
                if loc.findim and loc.source == a.A:
                    v = hc.check_action_compat(a, loc)
                    out.append(_named(v.report, f"action-compat {an} @ {ln}"))
                    if v.compatible:
                        p = _probe_for(env, a.A, probe)
                        if p is not None:
                            out.append(_named(hc.monad_loc_distributive(a, loc, p), f"monad-loc {an} @ {ln}"))
    elif check == "all":
        for sub in ALL_CHECKS:
            out.extend(run_check(sub, env, probe, window))
    else:
        raise UsageError(f"unknown check {check!r}; choose from {', '.join(CHECKS)}")
    return out


ALL_CHECKS = ("algebra", "coalgebra", "bialgebra", "comodule-algebra", "module", "probe", "action", "entwining",
              "comonad", "monad", "idempotent-monad", "mixed-law", "localized-comonad", "action-compat")
CHECKS = ALL_CHECKS + ("coaction", "all")


def compat_reports(env: Environment, coaction: str, loc: str, window: int = 3) -> tuple[list[CheckReport], list[str]]:
    from .localization import check_compatibility, localized_coaction_inverse_image, localized_coinvariants_compare

    for name, kind in ((coaction, "coaction"), (loc, "localization")):
        if name not in env or env.kinds[name] != kind:
            raise UsageError(f"no {kind} named {name!r}")
    c, L = env[coaction], env[loc]
    if L.source != c.source:
        raise UsageError(f"{coaction} and {loc} live on different algebras")
    v = check_compatibility(c, L)
    rep = _named(v.report, f"compat {coaction} @ {loc}")
    lines = [f"verdict: {v.outcome}"]
    if not v.compatible:
        lines.append(f"witness: {pretty(v.value)}" if v.value else "witness: see report")
        return [rep], lines
    if L.findim:
        lines.append(f"(ι⊗id)ρ(e) = {v.value}")
    else:
        for g in L.generators:
            lines.append(f"ρ_S({g}⁻¹) = {pretty(localized_coaction_inverse_image(v, g).fmt())}")
    cmp = localized_coinvariants_compare(c, L, window)
    desc = cmp.describe(L.source.field if L.findim else c.source.field)
    lines.append(f"ι(E^coB): dim {len(desc['img'])}; (S⁻¹E)^coB: dim {len(desc['loc_coinv'])}"
                 + (f" (window {window})" if not L.findim else "") + f"; strict: {desc['strict']}")
    rep.details.setdefault("coinvariants", {k: [pretty(x) for x in val] if isinstance(val, list) else val
                                            for k, val in desc.items()})
    return [rep], lines


def localize_report(env: Environment, at: str, window: int = 3) -> tuple[list[CheckReport], list[str]]:
    from .localization import check_idempotent_monad

    if at not in env or env.kinds[at] != "localization":
        raise UsageError(f"no localization named {at!r}")
    L = env[at]
    if L.findim:
        E, Emu = L.source, L.target
        lines = [f"{E.name or 'E'} at e = {E.fmt(L.element)}: dim {E.dim} -> {Emu.dim}",
                 "ι: " + "; ".join(f"{lab} ↦ {Emu.fmt(L.iota.matrix.column(j))}" for j, lab in enumerate(E.labels))]
    else:
        lines = [f"{L.source.name} at {{{', '.join(L.generators)}}}: inverted generators "
                 + ", ".join(f"{g}⁻¹" for g in L.generators)]
    rep = _named(check_idempotent_monad(L, window=window), f"idempotent-monad {at}")
    return [rep], lines


def file_report(env: Environment) -> list[CheckReport]:
    """Every check that applies to the declarations of one file."""
    reports = run_check("all", env)
    for cn in env.of_kind("coaction"):
        for ln in env.of_kind("localization"):
            if env[ln].source == env[cn].source:
                reports.extend(compat_reports(env, cn, ln)[0])
    return reports


# --------------------------------------------------------------------------
# demos
# --------------------------------------------------------------------------


def _demo_qplane():
    from .fixtures import grading_coaction
    from .localization import check_compatibility, localize_generators, localized_coaction_inverse_image

    c = grading_coaction()
    v = check_compatibility(c, localize_generators(c.source, ["x"], "at_x"))
    lines = ["quantum plane yx = 2xy, grading x ↦ x⊗g, y ↦ y⊗g, localized at {x}", f"verdict: {v.outcome}"]
    if v.compatible:
        lines.append(f"ρ_S(x⁻¹) = {pretty(localized_coaction_inverse_image(v, 'x').fmt())}")
    return [_named(v.report, "compat grading at x")], lines


def _demo_kx():
    from .fixtures import kx_coaction
    from .localization import check_compatibility, localize_generators

    c = kx_coaction()
    v = check_compatibility(c, localize_generators(c.source, ["x"], "at_x"))
    lines = ["k[x] with x primitive, localized at {x}", f"verdict: {v.outcome}", f"witness: {pretty(v.value)}"]
    return [_named(v.report, "compat delta at x")], lines


def _demo_survey(which: str):
    from .fixtures import kc2, kc2xc2, regular_coaction
    from .localization import survey_idempotent_localizations

    B = kc2() if which == "kc2" else kc2xc2()
    c = regular_coaction(B)
    r = CheckReport(f"idempotent-survey {B.name}")
    lines = [f"central idempotents of {B.name} and Δ-compatibility"]
    with timed(r):
        rows = survey_idempotent_localizations(c)
    good = [s for s in rows if s.outcome == "compatible"]
    for s in rows:
        lines.append(f"  {B.algebra.fmt(s.idempotent):<28} {s.outcome}")
    lines.append(f"{len(rows)} idempotents, {len(good)} compatible")
    if len(good) != 1 or good[0].idempotent != B.algebra.unit:
        r.add(Witness("compatible idempotents other than 1", (),
                      ", ".join(B.algebra.fmt(s.idempotent) for s in good), "1"))
    r.details["idempotents"] = len(rows)
    r.details["compatible"] = [B.algebra.fmt(s.idempotent) for s in good]
    return [r], lines


def _demo_coinvariants():
    from .fixtures import grading_coaction
    from .localization import localize_generators, localized_coinvariants_compare

    c = grading_coaction()
    loc = localize_generators(c.source, ["x"], "at_x")
    r = CheckReport("coinvariants qplane at x")
    lines = ["coinvariants of the quantum plane before and after inverting x"]
    with timed(r):
        for d in (1, 2, 3, 4):
            cmp = localized_coinvariants_compare(c, loc, d)
            desc = cmp.describe()
            lines.append(f"  window {d}: dim ι(E^coB) = {cmp.img.dim}, dim (S⁻¹E)^coB = {cmp.loc_coinv.dim}, "
                         f"strict = {cmp.strict}")
            if cmp.loc_coinv.dim != d + 1 or cmp.img.dim != 1 or not cmp.strict:
                r.add(Witness("window dimensions", (d,), f"{cmp.img.dim}/{cmp.loc_coinv.dim}", f"1/{d + 1}"))
        lines.append("  window 3 basis: " + ", ".join(pretty(x) for x in localized_coinvariants_compare(c, loc, 3)
                                                     .describe()["loc_coinv"]))
    return [r], lines


def _demo_swap():
    from .fixtures import swap_action, two_point
    from .hopfcat import check_action_compat, default_probe, monad_loc_distributive, trivial_action
    from .localization import localize_central_idempotent

    a = swap_action()
    A = a.A
    reps, lines = [], ["k[C2] acting on k×k by swapping the factors"]
    for name, e in (("e1", A.basis(0)), ("1", A.unit)):
        loc = localize_central_idempotent(A, e, f"at_{name}")
        v = check_action_compat(a, loc)
        lines.append(f"  at {name}: {v.outcome}" + (f", witness {v.report.witnesses[0].indices}" if not v.compatible
                                                      else ""))
        reps.append(_named(v.report, f"action-compat swap at {name}"))
        if v.compatible:
            reps.append(_named(monad_loc_distributive(a, loc, default_probe(A)), f"monad-loc swap at {name}"))
    t = trivial_action(a.H, two_point())
    loc = localize_central_idempotent(t.A, t.A.basis(0), "at_e1")
    v = check_action_compat(t, loc)
    lines.append(f"  trivial action at e1: {v.outcome}")
    reps.append(_named(v.report, "action-compat trivial at e1"))
    return reps, lines


def _demo_prod():
    from .fixtures import prod_fixture
    from .hopfcat import check_localized_comonad, check_mixed_distributive_law, default_probe, hopf_localization
    from .localization import localize_central_idempotent

    c = prod_fixture()
    E = c.source
    loc = localize_central_idempotent(E, E.basis(E.labels.index("1⊗e1")), "at_e1")
    H = hopf_localization(loc, c)
    p = default_probe(E)
    lines = [f"k[C2]⊗k² localized at 1⊗e1: dim {E.dim} -> {loc.target.dim}"]
    r1 = _named(check_mixed_distributive_law(H.law, H.L, H.G, p), "mixed-law prod at e1")
    r2 = _named(check_localized_comonad(H, p), "localized-comonad prod at e1")
    for r in (r1, r2):
        lines.append(f"  {r.summary()}")
    return [r1, r2], lines


def _demo_pasting():
    from .fixtures import prod2_chain
    from .hopfcat import check_pasting, default_probe, localization_map, three_object_probe

    c, loc1, loc2 = prod2_chain()
    F = localization_map(loc1, c)
    Gm = localization_map(loc2, F.target)
    E = c.source
    r = _named(check_pasting(F, Gm, three_object_probe(E), default_probe(c.target.algebra)), "pasting prod2")
    lines = [f"E → E_μ → E_μμ: dims {E.dim} → {loc1.target.dim} → {loc2.target.dim}", f"  {r.summary()}"]
    return [r], lines


def _demo_h4():
    from .entwining import compare_with_hopf_comonad, canonical_entwining_from_coaction, check_entwining
    from .fixtures import regular_coaction, sweedler_h4
    from .hopfcat import default_probe

    c = regular_coaction(sweedler_h4())
    w = canonical_entwining_from_coaction(c)
    r1 = _named(check_entwining(w), "entwining H4 canonical")
    r2 = _named(compare_with_hopf_comonad(c, default_probe(c.source)), "entwining comonad vs hopf comonad H4")
    return [r1, r2], ["canonical entwining of Sweedler's algebra coacting on itself",
                      f"  {r1.summary()}", f"  {r2.summary()}"]


DEMOS: dict[str, Callable] = {
    "qplane-compat": _demo_qplane,
    "kx-incompat": _demo_kx,
    "kc2-survey": lambda: _demo_survey("kc2"),
    "kc2xc2-survey": lambda: _demo_survey("kc2xc2"),
    "coinvariants": _demo_coinvariants,
    "swap": _demo_swap,
    "prod": _demo_prod,
    "pasting": _demo_pasting,
    "h4-entwining": _demo_h4,
}


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coloc", description="Exact checks for comodule algebras and localizations.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("parse", help="parse a file and print its canonical form")
    p.add_argument("file")

    p = sub.add_parser("check", help="run a named check on every applicable declaration")
    p.add_argument("check", choices=CHECKS, metavar="CHECK")
    p.add_argument("file")
    p.add_argument("--probe")
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--field")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("localize", help="describe a localization and check idempotence")
    p.add_argument("file")
    p.add_argument("--at", required=True)
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--field")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("compat", help="decide compatibility of a coaction with a localization")
    p.add_argument("file")
    p.add_argument("--coaction", required=True)
    p.add_argument("--loc", required=True)
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--field")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("demo", help="run a built-in demonstration")
    p.add_argument("fixture", choices=sorted(DEMOS), metavar="FIXTURE")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("report", help="run every applicable check on a file and emit JSON")
    p.add_argument("--json", required=True, metavar="PATH", dest="path")
    p.add_argument("--field")
    return ap


def _emit(reports: Sequence[CheckReport], lines: Sequence[str], as_json: bool, out) -> int:
    if as_json:
        out.write(emit_json(list(reports)).decode("utf-8") + "\n")
    else:
        for ln in lines:
            out.write(ln + "\n")
        for r in reports:
            out.write(pretty(r.render()) + "\n")
    return EXIT_OK if all(r.status == "pass" for r in reports) else EXIT_FAIL


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    path = getattr(args, "file", None) or getattr(args, "path", None)
    try:
        if args.command == "demo":
            reports, lines = DEMOS[args.fixture]()
            return _emit(reports, lines, args.json, out)
        bundle, env = load_file(path, getattr(args, "field", None))
        if args.command == "parse":
            out.write(print_bundle(bundle))
            return EXIT_OK
        if args.command == "check":
            reports = run_check(args.check, env, args.probe, args.window)
            if not reports:
                out.write(f"no declarations to {args.check}-check in {path}\n")
            return _emit(reports, [], args.json, out)
        if args.command == "localize":
            return _emit(*localize_report(env, args.at, args.window), args.json, out)
        if args.command == "compat":
            return _emit(*compat_reports(env, args.coaction, args.loc, args.window), args.json, out)
        if args.command == "report":
            return _emit(file_report(env), [], True, out)
    except ParseError as exc:
        err.write(f"{path}:{exc.line}:{exc.column}: {exc.message}\n")
        return EXIT_PARSE
    except UsageError as exc:
        err.write(f"coloc: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"coloc: {exc}\n")
        return EXIT_USAGE
    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    sys.exit(run())
