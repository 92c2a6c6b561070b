"""The recollement of mod-End(X) along the evaluation functors and the intermediate extension."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import Algebra
from .homological import InternalInconsistency, gorenstein_dimension, left_perp_test, minimal_presentation, syzygy
from .krull_schmidt import (
    EndRing,
    IndecomposableCatalog,
    bounded_search,
    end_ring_of_sum,
    has_summand,
    iso_from_local,
    module_signature,
    rebuild_over,
)
from .linalg import GF, Matrix, RowCoordinates, row_basis, vstack
from .modules import (
    HomBasis,
    Module,
    ModuleMap,
    Quotient,
    cokernel,
    direct_sum,
    hom_basis,
    image,
    kernel,
    submodule,
)


class SetupError(ValueError):
    """The subcategory does not contain the projectives."""


@dataclass
class Flag:
    status: str  # "verified", "assumed" or "failed"
    method: str
    detail: str = ""

    def as_dict(self) -> dict:
        return {"status": self.status, "method": self.method, "detail": self.detail}


@dataclass
class SubcategorySetup:
    algebra: Algebra
    catalog: IndecomposableCatalog
    end: EndRing
    flags: dict[str, Flag]
    projective_members: list[int]
    budget: dict = field(default_factory=dict)
    _rho_cache: dict = field(default_factory=dict, repr=False)

    @property
    def gamma(self) -> Algebra:
        return self.end.algebra

    @property
    def members(self) -> list[Module]:
        return self.end.parts

    @property
    def generator(self) -> Module:
        return self.end.module

    def holds(self, *names: str) -> bool:
        return all(self.flags[n].status == "verified" for n in names)

    def provenance(self, *names: str) -> str:
        states = [self.flags[n].status for n in names]
        if "failed" in states:
            return "failed"
        return "assumed" if "assumed" in states else "verified"


# add(X) membership ----------------------------------------------------------------------

def in_add(m: Module, members: list[Module]) -> bool:
    """Whether ``m`` is a direct sum of copies of ``members`` (all with local endomorphism rings).

    Peels off summands one at a time; by Krull-Schmidt cancellation the remainder
    lies in add(members) iff the original does.
    """
    cur = m
    while cur.dim:
        for c in members:
            if c.dim > cur.dim:
                continue
            split = _split_off(cur, c)
            if split is not None:
                cur = split
                break
        else:
            return False
    return True


def _split_off(m: Module, c: Module) -> Module | None:
    into = hom_basis(c, m).basis
    back = hom_basis(m, c).basis
    for f in into:
        for g in back:
            if (f @ g).is_invertible():
                return kernel(ModuleMap(m, c, g))[0]
    return None


def _subspaces(p: int, n: int, limit: int):
    """Row-reduced bases of all subspaces of ``F_p^n``; ``None`` marks the limit being hit."""
    count = 0
    for k in range(n + 1):
        for pivots in itertools.combinations(range(n), k):
            free = [(r, c) for r in range(k) for c in range(n) if c > pivots[r] and c not in pivots]
            for vals in itertools.product(range(p), repeat=len(free)):
                count += 1
                if count > limit:
                    yield None
                    return
                rows = [[0] * n for _ in range(k)]
                for r, c in enumerate(pivots):
                    rows[r][c] = 1
                for (r, c), v in zip(free, vals):
                    rows[r][c] = v
                yield rows


def submodules(m: Module, limit: int = 20000):
    """All submodules of ``m`` over a prime field by exhaustive subspace enumeration."""
    fld = m.field
    for rows in _subspaces(fld.p, m.dim, limit):
        if rows is None:
            yield None
            return
        if not rows:
            yield submodule(m, Matrix.zeros(fld, 0, m.dim))[0]
            continue
        basis = Matrix.from_rows(fld, rows, cols=m.dim)
        rk = basis.rows
        if all(vstack(fld, [basis, basis @ a], cols=m.dim).rank() == rk for a in m.action):
            yield submodule(m, basis)[0]


def _submodule_closure_flag(a: Algebra, members: list[Module], budget: dict) -> Flag:
    limit = budget.get("max_steps", 10000)
    if a.presentation is None:
        return Flag("assumed", "no quiver presentation for a prime-field run")
    if a.field.is_rational:
        p = budget.get("prime", 2)
        ap = rebuild_over(a, GF(p))
    else:
        p = a.field.p
        ap = a
    max_dim = max(c.dim for c in members)
    ref = bounded_search(ap, max_dim, budget.get("search_steps", 10**6))
    if not ref.complete:
        return Flag("assumed", f"prime-field double run over F_{p}", "bounded search exceeded its budget")
    by_sig: dict = {}
    for c in ref.modules:
        by_sig.setdefault(module_signature(c), []).append(c)
    matched = []
    for c in members:
        cands = by_sig.get(module_signature(c), [])
        if len(cands) != 1:
            return Flag("assumed", f"prime-field double run over F_{p}", f"no unique F_{p} counterpart for {c.name}")
        matched.append(cands[0])
    checked = 0
    for c in matched:
        for sub in submodules(c, limit):
            if sub is None:
                return Flag("assumed", f"prime-field double run over F_{p}", "subspace enumeration exceeded max_steps")
            checked += 1
            if not in_add(sub, matched):
                return Flag(
                    "failed",
                    f"prime-field double run over F_{p}",
                    f"a submodule of dimension vector {sub.dimension_vector()} of {c.name} is not in add(X)",
                )
    return Flag(
        "verified",
        f"prime-field double run over F_{p}: exhaustive submodule enumeration",
        f"{checked} submodules checked against {len(ref.modules)} indecomposables of dimension <= {max_dim}",
    )


# setup ----------------------------------------------------------------------------------

def build_setup(
    a: Algebra,
    catalog: IndecomposableCatalog,
    ext_bound: int = 6,
    max_steps: int = 10000,
    submodule_check: bool = True,
    prime: int = 2,
    name: str = "Gamma",
) -> SubcategorySetup:
    members = list(catalog.modules)
    if not members:
        raise SetupError("empty subcategory")
    for c in members:
        if c.algebra is not a:
            raise SetupError("catalog modules live over a different algebra")
    projective_members = []
    for pd in a.projective_data:
        hit = [k for k, c in enumerate(members) if iso_from_local(c, pd.module) is not None]
        if not hit:
            raise SetupError(
                f"indecomposable projective {pd.module.name} is not in add(X); the subcategory must contain the projectives"
            )
        projective_members.append(hit[0])
    labels = [c.name or f"C{k}" for k, c in enumerate(members)]
    end = end_ring_of_sum(members, name=name, labels=labels)
    budget = {"ext_bound": ext_bound, "max_steps": max_steps, "prime": prime}
    flags: dict[str, Flag] = {
        "contains_projectives": Flag("verified", "each indecomposable projective is isomorphic to a catalog member"),
    }
    syz_ok = all(in_add(syzygy(c), members) for c in members)
    flags["syzygy_closed"] = Flag(
        "verified" if syz_ok else "failed", "Omega(C) split into catalog members for every member"
    )
    perp_ok = all(left_perp_test(c, ext_bound) for c in members)
    if not perp_ok:
        flags["left_perp"] = Flag("failed", f"Ext^i(C, A) for 1 <= i <= {ext_bound}")
    else:
        g = gorenstein_dimension(a, ext_bound).right
        if g.status == "exact" and g.value <= ext_bound:
            flags["left_perp"] = Flag(
                "verified", f"Ext^i(C, A) = 0 for 1 <= i <= {ext_bound}", f"id A_A = {g.value} bounds the vanishing range"
            )
        else:
            flags["left_perp"] = Flag(
                "assumed", f"Ext^i(C, A) = 0 for 1 <= i <= {ext_bound}", f"id A_A is {g}; higher degrees unchecked"
            )
    if submodule_check:
        flags["submodule_closed"] = _submodule_closure_flag(a, members, budget)
    else:
        flags["submodule_closed"] = Flag("assumed", "check disabled")
    return SubcategorySetup(a, catalog, end, flags, sorted(set(projective_members)), budget)


# evaluation functors ----------------------------------------------------------------------

@dataclass
class Evaluation:
    """``Hom(X, M)`` as a right Gamma-module, with its block bases."""

    source: Module
    module: Module
    bases: list[HomBasis]
    offsets: list[int]


def _rho(setup: SubcategorySetup, m: Module) -> Evaluation:
    hit = setup._rho_cache.get(id(m))
    if hit is not None and hit.source is m:
        return hit
    end = setup.end
    fld = m.field
    bases = [hom_basis(c, m) for c in end.parts]
    offsets = []
    off = 0
    for b in bases:
        offsets.append(off)
        off += b.dimension
    n = off
    gdim = setup.gamma.dim
    acts = []
    for k in range(gdim):
        s, t = end.src[k], end.tgt[k]
        blk = end.blocks[k]
        flat = [0] * (n * n)
        for r, f in enumerate(bases[t].basis):
            g = blk @ f  # apply the basis map C_s -> C_t, then f
            if g.is_zero():
                continue
            for c, v in enumerate(bases[s].coords(g)):
                if v != 0:
                    flat[(offsets[t] + r) * n + offsets[s] + c] = v
        acts.append(Matrix.from_flat(fld, n, n, flat))
    name = f"rho({m.name})" if m.name else ""
    ev = Evaluation(m, Module(setup.gamma, n, acts, name=name), bases, offsets)
    setup._rho_cache[id(m)] = ev
    return ev


def v_rho(setup: SubcategorySetup, m: Module) -> Module:
    """``Hom(X, M)`` with Gamma acting by precomposition."""
    return _rho(setup, m).module


def v_rho_map(setup: SubcategorySetup, f: ModuleMap) -> ModuleMap:
    """``Hom(X, f)``: postcomposition with ``f``."""
    src = _rho(setup, f.source)
    tgt = _rho(setup, f.target)
    fld = f.source.field
    rows = []
    for i, b in enumerate(src.bases):
        for phi in b.basis:
            row = [0] * tgt.module.dim
            g = phi @ f.matrix
            if not g.is_zero():
                for c, v in enumerate(tgt.bases[i].coords(g)):
                    row[tgt.offsets[i] + c] = v
            rows.append(row)
    mat = Matrix.from_rows(fld, rows, cols=tgt.module.dim) if rows else Matrix.zeros(fld, 0, tgt.module.dim)
    return ModuleMap(src.module, tgt.module, mat)


@dataclass
class LambdaData:
    module: Module
    quotient: Quotient
    presentation: object
    rho_d: ModuleMap


def _lambda(setup: SubcategorySetup, m: Module) -> LambdaData:
    pres = minimal_presentation(m)
    rho_d = v_rho_map(setup, pres.d)
    q = cokernel(rho_d, name=f"lambda({m.name})" if m.name else "")
    return LambdaData(q.module, q, pres, rho_d)


def v_lambda(setup: SubcategorySetup, m: Module) -> Module:
    """``coker(Hom(X, P1) -> Hom(X, P0))`` from the minimal presentation of ``m``."""
    return _lambda(setup, m).module


def gamma_map(setup: SubcategorySetup, m: Module, data: LambdaData | None = None) -> ModuleMap:
    """The natural map ``v_lambda(M) -> v_rho(M)`` induced by the presentation epimorphism."""
    data = data or _lambda(setup, m)
    rho_eps = v_rho_map(setup, data.presentation.eps)
    if not (data.rho_d.matrix @ rho_eps.matrix).is_zero():
        raise InternalInconsistency("Hom(X, P1) -> Hom(X, M) is not zero")
    return ModuleMap(data.module, rho_eps.target, data.quotient.section @ rho_eps.matrix)


def is_mod0(setup: SubcategorySetup, f: Module) -> bool:
    """``F e_P = 0`` for the idempotent of the projective catalog members."""
    if f.dim == 0:
        return True
    gamma = setup.gamma
    for k in setup.projective_members:
        if not f.act(gamma.idempotents[k]).is_zero():
            return False
    return True


# intermediate extension -------------------------------------------------------------------

@dataclass
class ZetaPackage:
    source: Module
    K: Module
    theta_lambda: Module
    zeta: Module
    theta_rho: Module
    L: Module
    k_to_lambda: ModuleMap
    gamma: ModuleMap
    rho_to_l: ModuleMap
    lambda_to_zeta: ModuleMap
    zeta_to_rho: ModuleMap
    certificate: dict

    def dims(self) -> tuple[int, int, int, int, int]:
        return (self.K.dim, self.theta_lambda.dim, self.zeta.dim, self.theta_rho.dim, self.L.dim)

    @property
    def exact(self) -> bool:
        c = self.certificate
        return all(c[k] for k in ("composites_zero", "k_injective", "l_surjective", "exact_at_lambda", "exact_at_rho", "alternating_sum_zero"))


def zeta(setup: SubcategorySetup, m: Module) -> ZetaPackage:
    """``0 -> K -> v_lambda(M) -> v_rho(M) -> L -> 0`` with ``zeta(M) = im gamma``."""
    data = _lambda(setup, m)
    g = gamma_map(setup, m, data)
    label = m.name or "M"
    K, k_inc = kernel(g, name=f"K({label})")
    im = image(g, name=f"zeta({label})")
    q = cokernel(g, name=f"L({label})")
    rk = g.rank()
    cert = {
        "composites_zero": (k_inc.matrix @ g.matrix).is_zero() and (g.matrix @ q.projection.matrix).is_zero(),
        "k_injective": k_inc.rank() == K.dim,
        "l_surjective": q.projection.rank() == q.module.dim,
        "exact_at_lambda": K.dim + rk == g.source.dim,
        "exact_at_rho": rk + q.module.dim == g.target.dim,
        "alternating_sum_zero": K.dim - g.source.dim + g.target.dim - q.module.dim == 0,
        "epi_mono_factorisation": im.epi.matrix @ im.mono.matrix == g.matrix,
        "K_in_mod0": is_mod0(setup, K),
        "L_in_mod0": is_mod0(setup, q.module),
        "rank_gamma": rk,
        "presentation": "minimal",
    }
    return ZetaPackage(m, K, g.source, im.module, g.target, q.module, k_inc, g, q.projection, im.epi, im.mono, cert)


def syzygy_resolution_check(setup: SubcategorySetup, c: Module) -> dict:
    """Exactness of ``0 -> Hom(X, Om C) -> Hom(X, P0) -> zeta_C -> 0``."""
    pres = minimal_presentation(c)
    inc = v_rho_map(setup, pres.syzygy_inclusion)
    data = _lambda(setup, c)
    pk = zeta(setup, c)
    to_zeta = data.quotient.projection.matrix @ pk.lambda_to_zeta.matrix
    return {
        "injective": inc.rank() == inc.source.dim,
        "composite_zero": (inc.matrix @ to_zeta).is_zero(),
        "surjective": to_zeta.rank() == pk.zeta.dim,
        "dims_add_up": inc.source.dim + pk.zeta.dim == inc.target.dim,
    }


# inverse evaluation -------------------------------------------------------------------------

@dataclass
class ThetaData:
    module: Module
    x1: list[int]  # catalog index of each summand of X1
    x0: list[int]
    map: ModuleMap  # X1 -> X0


def _yoneda_block(setup: SubcategorySetup, gamma_row: Matrix, i: int, j: int) -> Matrix:
    """The map ``C_i -> C_j`` encoded by an element of ``e_j Gamma e_i``."""
    end = setup.end
    fld = setup.algebra.field
    out = Matrix.zeros(fld, end.parts[i].dim, end.parts[j].dim)
    for k, v in enumerate(gamma_row.entries()):
        if v == 0:
            continue
        if end.src[k] != i or end.tgt[k] != j:
            raise InternalInconsistency("Yoneda inversion: presentation map leaves e_j Gamma e_i")
        out = out + end.blocks[k].scale(v)
    return out


def _theta(setup: SubcategorySetup, f: Module) -> ThetaData:
    if f.algebra is not setup.gamma:
        raise ValueError("v_theta expects a module over the endomorphism algebra of the setup")
    fld = setup.algebra.field
    pres = minimal_presentation(f)
    pdata = setup.gamma.projective_data
    c0, c1 = pres.cover0, pres.cover1
    x0 = list(c0.vertices)
    x1 = list(c1.vertices)
    parts = setup.members
    X0 = direct_sum([parts[j] for j in x0], algebra=setup.algebra, name="X0")
    X1 = direct_sum([parts[i] for i in x1], algebra=setup.algebra, name="X1")
    off0, off1 = c0.sum.offsets, c1.sum.offsets
    dmat = pres.d.matrix
    blocks = [[None] * len(x0) for _ in x1]
    for a, i in enumerate(x1):
        gen = [0] * pres.P1.dim
        for c, v in enumerate(pdata[i].generator.entries()):
            gen[off1[a] + c] = v
        img = Matrix.from_flat(fld, 1, pres.P1.dim, gen) @ dmat
        for b, j in enumerate(x0):
            dj = pdata[j].module.dim
            piece = img.select_cols(range(off0[b], off0[b] + dj))
            blocks[a][b] = _yoneda_block(setup, piece @ pdata[j].embedding, i, j)
    rows = []
    for a in range(len(x1)):
        for r in range(parts[x1[a]].dim):
            row = []
            for b in range(len(x0)):
                row.extend(blocks[a][b].row(r).entries())
            rows.append(row)
    mat = Matrix.from_rows(fld, rows, cols=X0.module.dim) if rows else Matrix.zeros(fld, 0, X0.module.dim)
    return ThetaData(None, x1, x0, ModuleMap(X1.module, X0.module, mat))


def v_theta(setup: SubcategorySetup, f: Module) -> Module:
    """The Lambda-module presented by the Yoneda preimage of a minimal Gamma-presentation of ``f``."""
    data = _theta(setup, f)
    out = cokernel(data.map, name=f"theta({f.name})" if f.name else "").module
    if out.dim != sum(f.dimension_vector()[k] for k in setup.projective_members):
        raise InternalInconsistency("v_theta: dimension differs from the evaluation at the projectives")
    return out


def catalog_generator_zeta(setup: SubcategorySetup) -> tuple[Module, list[ZetaPackage]]:
    """``T = zeta(X)`` assembled as the direct sum of ``zeta(C)`` over the catalog."""
    pkgs = [zeta(setup, c) for c in setup.members]
    t = direct_sum([p.zeta for p in pkgs], algebra=setup.gamma, name="T").module
    return t, pkgs
