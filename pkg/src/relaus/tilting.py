"""Tilting and cotilting checks, torsion-class audits, Morita invariants and the Gprj pipeline."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .algebra import Algebra
from .homological import (
    HomologyReport,
    InternalInconsistency,
    ext1_space,
    ext_dim,
    extension_module,
    global_dimension,
    gorenstein_dimension,
    inj_dim,
    is_gorenstein_projective,
    is_projective,
    proj_dim,
    simple_modules,
)
from .krull_schmidt import (
    IndecomposableCatalog,
    decompose,
    enumerate_indecomposables,
    is_isomorphic,
    iso_from_local,
    local_radical,
)
from .linalg import hstack, vstack
from .modules import Module, direct_sum, dual, hom_basis, hom_dim
from .recollement import SetupError, SubcategorySetup, ZetaPackage, build_setup, catalog_generator_zeta, is_mod0, zeta


# tilting -------------------------------------------------------------------------------

@dataclass
class TiltingReport:
    T: Module
    pd: HomologyReport
    id: HomologyReport
    ext1: int
    summands: int
    simples: int
    summand_method: str
    provenance: dict = field(default_factory=dict)

    @property
    def tilting(self) -> bool:
        return self.pd.at_most(1) and self.ext1 == 0 and self.summands == self.simples

    @property
    def cotilting(self) -> bool:
        return self.id.at_most(1) and self.ext1 == 0 and self.summands == self.simples

    @property
    def verdict(self) -> str:
        if self.tilting and self.cotilting:
            return "both"
        if self.tilting:
            return "tilting"
        if self.cotilting:
            return "cotilting"
        return "neither"

    def as_dict(self) -> dict:
        return {
            "dim": self.T.dim,
            "pd": self.pd.as_dict(),
            "id": self.id.as_dict(),
            "ext1_self": self.ext1,
            "summands": self.summands,
            "simples": self.simples,
            "summand_method": self.summand_method,
            "tilting": self.tilting,
            "cotilting": self.cotilting,
            "verdict": self.verdict,
            "provenance": dict(sorted(self.provenance.items())),
        }


def count_summands(t: Module, parts: list[Module] | None = None) -> tuple[int, str]:
    """Number of pairwise non-isomorphic indecomposable summands of ``t``.

    With ``parts`` (a known splitting of ``t``) each part is certified local and
    the parts are compared by the local isomorphism test, which works over any
    field; otherwise ``t`` is decomposed over the rationals.
    """
    if parts is not None and all(local_radical(p) is not None for p in parts if p.dim):
        if sum(p.dim for p in parts) != t.dim:
            raise ValueError("parts do not add up to the module")
        reps: list[Module] = []
        for p in parts:
            if p.dim and not any(iso_from_local(r, p) is not None for r in reps):
                reps.append(p)
        return len(reps), "local certificates of the given splitting"
    d = decompose(t)
    return len(d.parts), "idempotent decomposition"


def check_tilting(t: Module, parts: list[Module] | None = None, bound: int = 6, setup: SubcategorySetup | None = None) -> TiltingReport:
    """Tilting and cotilting status of ``t`` over its algebra."""
    gamma = t.algebra
    n, method = count_summands(t, parts)
    prov = {}
    if setup is not None:
        prov = {
            "tilting": setup.provenance("contains_projectives", "syzygy_closed", "left_perp"),
            "cotilting": setup.provenance("contains_projectives", "syzygy_closed", "left_perp", "submodule_closed"),
        }
    return TiltingReport(
        t,
        proj_dim(t, bound),
        inj_dim(t, bound),
        ext_dim(t, t, 1),
        n,
        len(gamma.projective_data),
        method,
        prov,
    )


check_cotilting = check_tilting


def gen_membership(t: Module, m: Module) -> bool:
    """Whether ``m`` is a quotient of a finite power of ``t`` (evaluation map onto)."""
    if m.dim == 0:
        return True
    basis = hom_basis(t, m).basis
    if not basis:
        return False
    return vstack(m.field, basis, cols=m.dim).rank() == m.dim


def cogen_membership(t: Module, m: Module) -> bool:
    """Whether ``m`` embeds in a finite power of ``t`` (coevaluation map injective)."""
    if m.dim == 0:
        return True
    basis = hom_basis(m, t).basis
    if not basis:
        return False
    return hstack(m.field, basis, rows=m.dim).rank() == m.dim


# torsion class audit -----------------------------------------------------------------

@dataclass
class SampleFacts:
    label: str
    dim: int
    dimension_vector: list[int]
    pd: str
    id: str
    pd_le1: bool
    id_le1: bool
    gen: bool
    cogen: bool
    mod0: bool
    hom_into_p1_zero: bool = False

    def as_dict(self) -> dict:
        return dict(sorted(self.__dict__.items()))


@dataclass
class TTFReport:
    samples: list[SampleFacts]
    tallies: dict
    counterexamples: list[dict]
    critical: list[dict]
    hypotheses: dict
    self_injective: bool

    @property
    def ok(self) -> bool:
        return not self.critical

    def as_dict(self) -> dict:
        return {
            "sample_count": len(self.samples),
            "samples": [s.as_dict() for s in self.samples],
            "tallies": dict(sorted(self.tallies.items())),
            "counterexamples": self.counterexamples,
            "critical": self.critical,
            "hypotheses": dict(sorted(self.hypotheses.items())),
            "self_injective": self.self_injective,
        }


def is_self_injective(a: Algebra, bound: int = 6) -> bool:
    return all(inj_dim(pd.module, bound).at_most(0) for pd in a.projective_data)


def default_samples(setup: SubcategorySetup, pkgs: list[ZetaPackage] | None = None, target: int = 24, seed: int = 0,
                    max_dim: int = 8) -> list[tuple[str, Module]]:
    """Projectives, injectives, simples, zeta images, evaluations and random extensions over Gamma."""
    gamma = setup.gamma
    pkgs = pkgs if pkgs is not None else [zeta(setup, c) for c in setup.members]
    base: list[tuple[str, Module]] = []
    for v, pd in enumerate(gamma.projective_data):
        base.append((f"P{v}", pd.module))
    for v, pd in enumerate(gamma.opposite().projective_data):
        inj = dual(pd.module)
        if inj.algebra is not gamma:
            raise InternalInconsistency("dual of an opposite projective is not a Gamma-module")
        base.append((f"I{v}", inj))
    for s in simple_modules(gamma):
        base.append((s.name, s))
    for c, p in zip(setup.members, pkgs):
        base.append((f"zeta({c.name})", p.zeta))
        base.append((f"rho({c.name})", p.theta_rho))
        base.append((f"lambda({c.name})", p.theta_lambda))
        base.append((f"K({c.name})", p.K))
        base.append((f"L({c.name})", p.L))
    out: list[tuple[str, Module]] = []

    def add(label, m):
        if m.dim == 0 or m.dim > max_dim:
            return
        for _, o in out:
            if o.dim == m.dim and o.dimension_vector() == m.dimension_vector() and is_isomorphic(o, m) is not None:
                return
        out.append((label, m))

    for label, m in base:
        add(label, m)
    rng = random.Random(seed)
    attempts = 0
    while len(out) < target and attempts < 40 * target:
        attempts += 1
        (la, a), (lb, b) = rng.choice(out), rng.choice(out)
        if a.dim + b.dim > max_dim:
            continue
        space = ext1_space(a, b)
        if space.dimension and rng.random() < 0.75:
            coeffs = [rng.randint(-2, 2) for _ in space.cocycles]
            if not any(coeffs):
                coeffs[0] = 1
            g = space.cocycles[0].scale(coeffs[0])
            for c, f in zip(coeffs[1:], space.cocycles[1:]):
                g = g + f.scale(c)
            e = extension_module(space, g)[0]
            add(f"ext({lb},{la};{','.join(map(str, coeffs))})", e)
        else:
            add(f"{la}+{lb}", direct_sum([a, b], algebra=gamma).module)
    return out


def theorem41_audit(setup: SubcategorySetup, T: Module, samples: list[tuple[str, Module]] | None = None,
                    bound: int = 6, seed: int = 0, target: int = 24) -> TTFReport:
    """Sample check of cogen(T) = P<=1 and gen(T) = I<=1 together with mod0 = 0(P<=1)."""
    if samples is None:
        samples = default_samples(setup, target=target, seed=seed)
    facts = []
    for label, m in samples:
        pd = proj_dim(m, bound)
        idd = inj_dim(m, bound)
        facts.append(SampleFacts(
            label, m.dim, m.dimension_vector(), str(pd), str(idd), pd.at_most(1), idd.at_most(1),
            gen_membership(T, m), cogen_membership(T, m), is_mod0(setup, m),
        ))
    p1 = [m for (_, m), f in zip(samples, facts) if f.pd_le1]
    for (_, m), f in zip(samples, facts):
        f.hom_into_p1_zero = all(hom_dim(m, p) == 0 for p in p1)
    self_inj = is_self_injective(setup.algebra, bound)
    base_ok = setup.holds("contains_projectives", "submodule_closed", "left_perp")
    hyps = {
        "theorem_hypotheses": setup.provenance("contains_projectives", "submodule_closed", "left_perp"),
        "self_injective": "verified" if self_inj else "failed",
    }
    rules = [
        ("cogen => pd<=1", lambda f: not f.cogen or f.pd_le1, base_ok),
        ("gen => id<=1", lambda f: not f.gen or f.id_le1, base_ok),
        ("pd<=1 => cogen", lambda f: not f.pd_le1 or f.cogen, base_ok and self_inj),
        ("id<=1 => gen", lambda f: not f.id_le1 or f.gen, base_ok and self_inj),
        ("mod0 <=> Hom(-, P<=1) = 0", lambda f: f.mod0 == f.hom_into_p1_zero, base_ok),
    ]
    tallies = {}
    counter, critical = [], []
    for name, ok, guaranteed in rules:
        bad = [f.label for f in facts if not ok(f)]
        tallies[name] = {"checked": len(facts), "violations": len(bad), "guaranteed": guaranteed}
        for label in bad:
            entry = {"rule": name, "sample": label}
            (critical if guaranteed else counter).append(entry)
    return TTFReport(facts, tallies, counter, critical, hyps, self_inj)


# Morita invariants --------------------------------------------------------------------

def cartan_matrix(a: Algebra) -> list[list[int]]:
    """Row ``i``: the dimension vector of the indecomposable projective at vertex ``i``."""
    return [pd.module.dimension_vector() for pd in a.projective_data]


def _canonical_cartan(c: list[list[int]]) -> list[list[int]]:
    n = len(c)
    if n <= 7:
        return min(
            [[c[p[i]][p[j]] for j in range(n)] for i in range(n)]
            for p in itertools.permutations(range(n))
        )
    # too many orderings: sorted row and column multisets are still invariant
    return sorted(sorted(r) for r in c) + sorted(sorted(col) for col in zip(*c))


def morita_invariants(a: Algebra) -> dict:
    pdims = sorted(pd.module.dim for pd in a.projective_data)
    c = cartan_matrix(a)
    return {
        "simples": len(c),
        "projective_dims": pdims,
        "cartan_canonical": _canonical_cartan(c),
        "total_dim": a.dim,
        "basic_dim": sum(pdims),
    }


def morita_compare(a: Algebra, b: Algebra) -> str:
    """``distinguished`` when some invariant differs, ``not distinguished`` otherwise."""
    return "not distinguished" if morita_invariants(a) == morita_invariants(b) else "distinguished"


# Gprj pipeline ------------------------------------------------------------------------

@dataclass
class GprjReport:
    algebra: Algebra
    gorenstein: object
    catalog: IndecomposableCatalog | None
    gprj: list[Module]
    cm_free: bool | None
    setup: SubcategorySetup | None
    T: Module | None
    tilting: TiltingReport | None
    invariants: dict
    cm_invariants: dict | None
    complete: bool
    notes: list[str] = field(default_factory=list)

    @property
    def gdim(self):
        return self.gorenstein.value

    @property
    def corollary_applies(self) -> bool:
        return self.gdim is not None and self.gdim <= 1

    def as_dict(self) -> dict:
        return {
            "gorenstein": self.gorenstein.as_dict(),
            "gdim": self.gdim,
            "corollary_applies": self.corollary_applies,
            "catalog_size": len(self.catalog) if self.catalog else None,
            "catalog_complete": self.catalog.complete if self.catalog else None,
            "gprj": [{"name": c.name, "dimension_vector": c.dimension_vector(), "projective": is_projective(c)} for c in self.gprj],
            "cm_free": self.cm_free,
            "hypotheses": {k: v.as_dict() for k, v in sorted(self.setup.flags.items())} if self.setup else None,
            "T_dim": self.T.dim if self.T is not None else None,
            "tilting": self.tilting.as_dict() if self.tilting else None,
            "morita_invariants": self.invariants,
            "cm_auslander_invariants": self.cm_invariants,
            "complete": self.complete,
            "notes": list(self.notes),
        }


def gprj_pipeline(a: Algebra, ext_bound: int = 6, max_dim: int = 8, max_steps: int = 10000) -> GprjReport:
    """Gdim, the Gorenstein projective catalog, the CM Auslander algebra and ``zeta_G(G)``."""
    gd = gorenstein_dimension(a, ext_bound)
    inv = morita_invariants(a)
    if gd.value is None:
        return GprjReport(a, gd, None, [], None, None, None, None, inv, None, False,
                          [f"Gorenstein dimension not finite within bound {ext_bound}"])
    mode = "knitting" if a.field.is_rational else "bounded"
    cat = enumerate_indecomposables(a, mode=mode, budget=max_steps, max_dim=max_dim)
    notes = []
    if not cat.complete:
        notes.append("indecomposable enumeration exceeded its budget; Gprj catalog may be partial")
    gprj = [c for c in cat.modules if is_gorenstein_projective(c, gd.value)]
    cm_free = all(is_projective(c) for c in gprj)
    gcat = IndecomposableCatalog(a, gprj, cat.complete, f"{cat.method} + Gorenstein projective filter", cat.steps)
    setup = build_setup(a, gcat, ext_bound=ext_bound, max_steps=max_steps, name=f"Aus(Gprj {a.name})".strip())
    T, pkgs = catalog_generator_zeta(setup)
    report = check_tilting(T, parts=[p.zeta for p in pkgs], bound=ext_bound, setup=setup)
    if gd.value > 1:
        notes.append(f"Gdim {gd.value} > 1: tilting verdict reported outside the corollary's scope")
    return GprjReport(a, gd, cat, gprj, cm_free, setup, T, report, inv, morita_invariants(setup.gamma),
                      cat.complete, notes)


def cm_free_check(a: Algebra, ext_bound: int = 6, max_steps: int = 10000) -> dict:
    """Gprj = prj decided twice: by finite global dimension and by filtering the full catalog."""
    gl = global_dimension(a, ext_bound)
    gd = gorenstein_dimension(a, ext_bound)
    cat = enumerate_indecomposables(a, mode="knitting" if a.field.is_rational else "bounded", budget=max_steps)
    gprj = [c for c in cat.modules if gd.value is not None and is_gorenstein_projective(c, gd.value)]
    n_proj = sum(1 for c in cat.modules if is_projective(c))
    return {
        "gldim": gl.as_dict(),
        "gdim": gd.value,
        "catalog_size": len(cat),
        "catalog_complete": cat.complete,
        "gprj_count": len(gprj),
        "projective_count": n_proj,
        "cm_free": cat.complete and all(is_projective(c) for c in gprj) and len(gprj) == n_proj,
        "finite_gldim": gl.status == "exact",
    }


def aus_cm_demo(a: Algebra, ext_bound: int = 6, max_steps: int = 10000) -> dict:
    """For self-injective finite type ``a``: ``Aus(a)`` is CM-free, so the CM Auslander algebras agree.

    Compares ``a`` with ``Gamma = Aus(mod a)`` and their CM Auslander algebras
    ``Aus(Gprj a) = Gamma`` and ``Aus(Gprj Gamma) = Aus(prj Gamma)``.
    """
    first = gprj_pipeline(a, ext_bound=ext_bound, max_steps=max_steps)
    gamma = first.setup.gamma
    check = cm_free_check(gamma, ext_bound, max_steps)
    second = gprj_pipeline(gamma, ext_bound=ext_bound, max_steps=max_steps)
    return {
        "self_injective": is_self_injective(a, ext_bound),
        "gprj_is_mod": first.catalog is not None and len(first.gprj) == len(first.catalog),
        "aus_cm_free": check,
        "algebras": morita_compare(a, gamma),
        "cm_auslander_algebras": morita_compare(first.setup.gamma, second.setup.gamma),
        "invariants": {"A": morita_invariants(a), "Aus(A)": morita_invariants(gamma)},
        "cm_invariants": {"A": first.cm_invariants, "Aus(A)": second.cm_invariants},
    }


__all__ = [
    "SetupError",
    "TiltingReport",
    "TTFReport",
    "GprjReport",
    "check_tilting",
    "check_cotilting",
    "count_summands",
    "gen_membership",
    "cogen_membership",
    "default_samples",
    "theorem41_audit",
    "is_self_injective",
    "cartan_matrix",
    "morita_invariants",
    "morita_compare",
    "gprj_pipeline",
    "cm_free_check",
    "aus_cm_demo",
]
