"""Command line entry point: ``relaus <command> --algebra FILE ...``.

Exit codes: 0 all verdicts positive, 2 negative mathematical verdict,
3 hypothesis unverifiable within budget, 4 input error, 5 internal inconsistency.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .algebra import PresentationError
from .homological import InternalInconsistency, ext_dim, gorenstein_dimension, inj_dim, is_gorenstein_projective, proj_dim
from .io import (
    InputError,
    algebra_digest,
    canonical_json,
    catalog_to_json,
    module_to_json,
    parse_algebra,
    parse_catalog,
    parse_module,
    setup_digest,
    sha256,
)
from .krull_schmidt import (
    DecompositionError,
    bounded_search,
    catalog_signature,
    is_isomorphic,
    knit,
    module_signature,
    rebuild_over,
)
from .linalg import GF, FieldMismatchError
from .modules import ModuleError
from .recollement import SetupError, build_setup, catalog_generator_zeta, v_lambda, v_theta, zeta
from .tilting import check_tilting, gprj_pipeline, morita_compare, morita_invariants, aus_cm_demo, theorem41_audit

OK, NEGATIVE, BUDGET, INPUT, CRITICAL = 0, 2, 3, 4, 5

COMMANDS = (
    "indecomposables",
    "auslander",
    "zeta",
    "check-tilting",
    "ttf-audit",
    "gorenstein",
    "gprj-pipeline",
    "morita-compare",
)


class Outcome:
    """Accumulates the exit code: the most severe verdict wins."""

    order = {OK: 0, BUDGET: 1, NEGATIVE: 2, CRITICAL: 3}

    def __init__(self):
        self.code = OK
        self.reasons: list[str] = []

    def flag(self, code: int, reason: str):
        self.reasons.append(reason)
        if self.order[code] > self.order[self.code]:
            self.code = code


def _flags_of(setup) -> dict:
    return {k: v.as_dict() for k, v in sorted(setup.flags.items())}


def _catalog(a, args):
    if args.catalog == "auto":
        if a.field.is_rational:
            return knit(a, budget=args.max_steps)
        return bounded_search(a, args.max_dim, args.max_steps)
    return parse_catalog(args.catalog, a)


def _module_entry(m) -> dict:
    return {
        "name": m.name,
        "dim": m.dim,
        "dimension_vector": m.dimension_vector(),
        "action_ranks": list(module_signature(m)[1]),
    }


def _setup(a, args, out: Outcome):
    cat = _catalog(a, args)
    if not cat.complete:
        out.flag(BUDGET, "catalog enumeration exceeded its budget")
    setup = build_setup(a, cat, ext_bound=args.ext_bound, max_steps=args.max_steps, prime=args.prime)
    for k, f in setup.flags.items():
        if f.status == "assumed":
            out.flag(BUDGET, f"hypothesis {k} assumed: {f.detail or f.method}")
    return setup


# commands ------------------------------------------------------------------------------

def cmd_indecomposables(a, args, out: Outcome) -> tuple[dict, dict]:
    cat = _catalog(a, args)
    rep = {
        "complete": cat.complete,
        "method": cat.method,
        "steps": cat.steps,
        "count": len(cat),
        "modules": [_module_entry(c) for c in cat.modules],
    }
    prov = {"catalog_complete": "verified" if cat.complete else "assumed"}
    if not cat.complete:
        out.flag(BUDGET, "catalog enumeration exceeded its budget")
    if args.oracle_prime and a.field.is_rational:
        ref = bounded_search(rebuild_over(a, GF(args.oracle_prime)), max(c.dim for c in cat.modules), 10**6)
        agrees = catalog_signature(ref) == catalog_signature(cat)
        rep["oracle"] = {"prime": args.oracle_prime, "complete": ref.complete, "count": len(ref), "agrees": agrees}
        if not ref.complete:
            out.flag(BUDGET, "bounded oracle exceeded its budget")
        elif not agrees:
            out.flag(CRITICAL, "bounded prime-field oracle disagrees with the catalog")
    if args.export:
        Path(args.export).write_text(json.dumps(catalog_to_json(cat), indent=2, sort_keys=True) + "\n")
        rep["setup_digest"] = setup_digest(cat)
    return rep, prov


def cmd_auslander(a, args, out: Outcome):
    setup = _setup(a, args, out)
    for k, f in setup.flags.items():
        if f.status == "failed":
            out.flag(NEGATIVE, f"hypothesis {k} fails")
    g = setup.gamma
    rep = {
        "catalog": [_module_entry(c) for c in setup.members],
        "gamma_dim": g.dim,
        "projective_members": [setup.members[k].name for k in setup.projective_members],
        "morita_invariants": morita_invariants(g),
        "hypotheses": _flags_of(setup),
    }
    if a.presentation is not None:
        rep["setup_digest"] = setup_digest(setup.catalog)
    return rep, {k: f.status for k, f in setup.flags.items()}


def cmd_zeta(a, args, out: Outcome):
    if not args.module:
        raise InputError("zeta needs --module", "--module")
    setup = _setup(a, args, out)
    m = parse_module(args.module, a)
    pkg = zeta(setup, m)
    back = v_theta(setup, v_lambda(setup, m))
    counit = is_isomorphic(back, m) is not None
    cert = {k: v for k, v in pkg.certificate.items()}
    rep = {
        "module": _module_entry(m),
        "dims": dict(zip(["K", "theta_lambda", "zeta", "theta_rho", "L"], pkg.dims())),
        "certificate": dict(sorted(cert.items())),
        "exact": pkg.exact,
        "theta_lambda_counit_iso": counit,
    }
    if not (pkg.exact and cert["K_in_mod0"] and cert["L_in_mod0"] and counit):
        out.flag(CRITICAL, "four-term sequence certificate failed")
    return rep, {"exactness": setup.provenance("contains_projectives")}


def cmd_check_tilting(a, args, out: Outcome):
    setup = _setup(a, args, out)
    T, pkgs = catalog_generator_zeta(setup)
    rep = check_tilting(T, parts=[p.zeta for p in pkgs], bound=args.ext_bound, setup=setup)
    zs = [p.zeta for p in pkgs]
    lemmas = {
        "pd_zeta_le1": all(proj_dim(z, args.ext_bound).at_most(1) for z in zs),
        "id_zeta_le1": all(inj_dim(z, args.ext_bound).at_most(1) for z in zs),
        "ext1_zeta_pairs_zero": all(ext_dim(x, y, 1) == 0 for x in zs for y in zs),
    }
    body = {"T": rep.as_dict(), "lemmas": lemmas, "hypotheses": _flags_of(setup)}
    if rep.pd.status == "at_least" or rep.id.status == "at_least":
        out.flag(BUDGET, "homological dimension not settled within --ext-bound")
    if setup.holds("contains_projectives", "syzygy_closed", "left_perp") and not rep.tilting:
        out.flag(CRITICAL, "verified hypotheses but T is not tilting")
    if setup.holds("contains_projectives", "syzygy_closed", "left_perp", "submodule_closed") and not rep.cotilting:
        out.flag(CRITICAL, "verified hypotheses but T is not cotilting")
    if rep.verdict != "both":
        out.flag(NEGATIVE, f"verdict {rep.verdict}")
    return body, rep.provenance


def cmd_ttf_audit(a, args, out: Outcome):
    setup = _setup(a, args, out)
    T, _ = catalog_generator_zeta(setup)
    rep = theorem41_audit(setup, T, bound=args.ext_bound, seed=args.seed, target=args.samples)
    for c in rep.critical:
        out.flag(CRITICAL, f"CRITICAL: {c['rule']} fails on {c['sample']}")
    return rep.as_dict(), rep.hypotheses


def cmd_gorenstein(a, args, out: Outcome):
    g = gorenstein_dimension(a, args.ext_bound)
    rep = g.as_dict()
    if args.module:
        m = parse_module(args.module, a)
        rep["module"] = {
            **_module_entry(m),
            "pd": proj_dim(m, args.ext_bound).as_dict(),
            "id": inj_dim(m, args.ext_bound).as_dict(),
            "gorenstein_projective": is_gorenstein_projective(m, g.value) if g.value is not None else None,
        }
    if g.value is None:
        if "infinite" in (g.right.status, g.left.status):
            out.flag(NEGATIVE, "not Gorenstein")
        else:
            out.flag(BUDGET, "Gorenstein dimension not settled within --ext-bound")
    return rep, {"gdim": "verified" if g.value is not None else "assumed"}


def cmd_gprj_pipeline(a, args, out: Outcome):
    rep = gprj_pipeline(a, ext_bound=args.ext_bound, max_dim=args.max_dim, max_steps=args.max_steps)
    body = rep.as_dict()
    if rep.gdim is None:
        out.flag(BUDGET if not rep.gorenstein.right.status == "infinite" else NEGATIVE, "Gorenstein dimension not finite")
        return body, {}
    if not rep.complete:
        out.flag(BUDGET, "Gprj catalog incomplete")
    prov = {}
    if rep.setup is not None:
        prov = dict(rep.tilting.provenance)
        for k, f in rep.setup.flags.items():
            if f.status == "assumed":
                out.flag(BUDGET, f"hypothesis {k} assumed")
    if not rep.corollary_applies:
        out.flag(NEGATIVE, f"Gdim {rep.gdim} > 1")
    elif rep.tilting.verdict != "both":
        out.flag(CRITICAL if rep.setup.holds(*rep.setup.flags) else NEGATIVE, f"verdict {rep.tilting.verdict}")
    if args.aus_demo and rep.gdim == 0 and len(rep.gprj) > len(a.projective_data):
        body["aus_demo"] = aus_cm_demo(a, args.ext_bound, args.max_steps)
    return body, prov


def cmd_morita_compare(a, args, out: Outcome):
    if not args.other:
        raise InputError("morita-compare needs --other", "--other")
    b = parse_algebra(args.other)
    ra = gprj_pipeline(a, ext_bound=args.ext_bound, max_dim=args.max_dim, max_steps=args.max_steps)
    rb = gprj_pipeline(b, ext_bound=args.ext_bound, max_dim=args.max_dim, max_steps=args.max_steps)
    body = {
        "other_digest": algebra_digest(b.presentation),
        "invariants": {"first": morita_invariants(a), "second": morita_invariants(b)},
        "algebras": morita_compare(a, b),
    }
    if ra.setup is None or rb.setup is None:
        out.flag(BUDGET, "a CM Auslander algebra could not be built")
        return body, {}
    body["cm_invariants"] = {"first": ra.cm_invariants, "second": rb.cm_invariants}
    body["cm_auslander_algebras"] = morita_compare(ra.setup.gamma, rb.setup.gamma)
    if not (ra.complete and rb.complete):
        out.flag(BUDGET, "catalog incomplete")
    return body, {"comparison": "verified"}


HANDLERS = {
    "indecomposables": cmd_indecomposables,
    "auslander": cmd_auslander,
    "zeta": cmd_zeta,
    "check-tilting": cmd_check_tilting,
    "ttf-audit": cmd_ttf_audit,
    "gorenstein": cmd_gorenstein,
    "gprj-pipeline": cmd_gprj_pipeline,
    "morita-compare": cmd_morita_compare,
}


# plumbing ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relaus", description="Recollements, tilting and Auslander algebras of finite type.")
    p.add_argument("--version", action="version", version=f"relaus {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--algebra", required=True, help="algebra JSON file")
        s.add_argument("--catalog", default="auto", help="'auto' or a catalog JSON file")
        s.add_argument("--module", help="module JSON file")
        s.add_argument("--max-dim", type=int, default=8)
        s.add_argument("--max-steps", type=int, default=10000)
        s.add_argument("--ext-bound", type=int, default=6)
        s.add_argument("--prime", type=int, default=2, help="prime for the submodule-closure double run")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", help="write the certificate here instead of stdout")
        s.add_argument("--markdown", action="store_true", help="print a human summary")
        if name == "indecomposables":
            s.add_argument("--oracle-prime", type=int, default=0, help="compare with a bounded search over F_p")
            s.add_argument("--export", help="write the catalog JSON here")
        if name == "ttf-audit":
            s.add_argument("--samples", type=int, default=24)
        if name == "gprj-pipeline":
            s.add_argument("--aus-demo", action="store_true", help="compare with the CM Auslander algebra of Aus(A)")
        if name == "morita-compare":
            s.add_argument("--other", help="second algebra JSON file")
    return p


def _budget_flags(args) -> dict:
    keys = ["catalog", "max_dim", "max_steps", "ext_bound", "prime", "seed"]
    extra = {k: getattr(args, k) for k in ("oracle_prime", "samples", "aus_demo") if hasattr(args, k)}
    out = {k: getattr(args, k) for k in keys}
    out["catalog"] = "auto" if args.catalog == "auto" else Path(args.catalog).name
    out.update(extra)
    return dict(sorted(out.items()))


def run(argv: list[str]) -> tuple[dict, int]:
    """Execute one command; returns ``(certificate, exit code)``."""
    return _run(build_parser().parse_args(argv))


def _run(args) -> tuple[dict, int]:
    t0 = time.perf_counter()
    a = parse_algebra(args.algebra)
    out = Outcome()
    report, prov = HANDLERS[args.command](a, args, out)
    inputs = {"algebra": algebra_digest(a.presentation)}
    if args.module:
        inputs["module"] = sha256(module_to_json(parse_module(args.module, a)))
    cert = {
        "tool": {"name": "relaus", "version": __version__},
        "command": args.command,
        "flags": _budget_flags(args),
        "field": a.field.to_json(),
        "input_digest": inputs["algebra"],
        "inputs": inputs,
        "report": report,
        "provenance": dict(sorted(prov.items())),
        "verdict": {"exit_code": out.code, "reasons": out.reasons},
    }
    cert = json.loads(canonical_json(cert))
    cert["certificate_digest"] = sha256(cert)
    cert["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    return cert, out.code


def render_markdown(cert: dict) -> str:
    lines = [f"# relaus {cert['command']}", ""]
    lines.append(f"- field: {cert['field']}")
    lines.append(f"- exit code: {cert['verdict']['exit_code']}")
    for r in cert["verdict"]["reasons"]:
        lines.append(f"  - {r}")
    lines.append("")
    lines.append("| key | value |")
    lines.append("|---|---|")
    for k, v in cert["report"].items():
        text = json.dumps(v, sort_keys=True)
        if len(text) > 100:
            text = text[:97] + "..."
        lines.append(f"| {k} | `{text}` |")
    if cert["provenance"]:
        lines.append("")
        lines.append("Provenance: " + ", ".join(f"{k}={v}" for k, v in cert["provenance"].items()))
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which would read as a negative verdict
        return INPUT if exc.code else 0
    try:
        cert, code = _run(args)
    except (InputError, PresentationError, ModuleError, FieldMismatchError, SetupError) as exc:
        print(f"relaus: input error: {exc}", file=sys.stderr)
        return INPUT
    except (InternalInconsistency, DecompositionError) as exc:
        print(f"relaus: CRITICAL internal inconsistency: {exc}", file=sys.stderr)
        return CRITICAL
    text = json.dumps(cert, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    if args.markdown:
        sys.stdout.write(render_markdown(cert))
    elif not args.out:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
