"""Projective covers, syzygies, Ext, projective/injective and Gorenstein dimensions."""
from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import Matrix, hstack, row_basis, vstack
from .modules import (
    DirectSum,
    Module,
    ModuleMap,
    direct_sum,
    dual,
    hom_basis,
    hom_dim,
    kernel,
    quotient,
    radical,
)


class InternalInconsistency(RuntimeError):
    """A computed fact contradicts a theorem the code relies on."""


def _cache(m: Module) -> dict:
    # per-module memo; values are pure functions of the (immutable) module
    c = m.__dict__.get("_homcache")
    if c is None:
        c = m.__dict__.setdefault("_homcache", {})
    return c


@dataclass
class ProjectiveCover:
    module: Module
    sum: DirectSum
    vertices: list[int]
    generators: Matrix  # row k: element of M hit by the generator e_v of summand k
    epi: ModuleMap

    @property
    def projective(self) -> Module:
        return self.sum.module


@dataclass
class Presentation:
    """``P1 --d--> P0 --eps--> M -> 0``, minimal."""

    module: Module
    cover0: ProjectiveCover
    cover1: ProjectiveCover
    syzygy_inclusion: ModuleMap
    d: ModuleMap

    @property
    def P0(self) -> Module:
        return self.cover0.projective

    @property
    def P1(self) -> Module:
        return self.cover1.projective

    @property
    def eps(self) -> ModuleMap:
        return self.cover0.epi

    minimal: bool = True


def top_generators(m: Module) -> list[tuple[int, Matrix]]:
    """Elements of ``M e_v`` lifting a basis of ``top(M) e_v``, vertex by vertex."""
    fld = m.field
    _, rad_inc = radical(m)
    span = rad_inc.matrix
    out = []
    for v, block in enumerate(m.blocks):
        for r in range(block.rows):
            cand = block.row(r)
            probe = vstack(fld, [span, cand], cols=m.dim)
            if probe.rank() > span.rank():
                out.append((v, cand))
                span = probe
    if span.rank() != m.dim:
        raise InternalInconsistency("top generators do not generate the module")
    return out


def projective_cover(m: Module) -> ProjectiveCover:
    cache = _cache(m)
    if "cover" in cache:
        return cache["cover"]
    alg = m.algebra
    pdata = alg.projective_data
    gens = top_generators(m) if m.dim else []
    parts = [pdata[v].module for v, _ in gens]
    ds = direct_sum(parts, algebra=alg, name=f"P0({m.name})" if m.name else "")
    blocks = []
    for v, g in gens:
        images = vstack(m.field, [g @ a for a in m.action], cols=m.dim)
        blocks.append(pdata[v].embedding @ images)
    eps = vstack(m.field, blocks, cols=m.dim)
    gen_rows = vstack(m.field, [g for _, g in gens], cols=m.dim)
    cover = ProjectiveCover(m, ds, [v for v, _ in gens], gen_rows, ModuleMap(ds.module, m, eps))
    cache["cover"] = cover
    return cover


def syzygy_with_inclusion(m: Module) -> tuple[Module, ModuleMap, ProjectiveCover]:
    cache = _cache(m)
    if "syzygy" not in cache:
        cover = projective_cover(m)
        om, inc = kernel(cover.epi, name=f"Omega({m.name})" if m.name else "")
        cache["syzygy"] = (om, inc, cover)
    return cache["syzygy"]


def syzygy(m: Module, n: int = 1) -> Module:
    if n < 1:
        raise ValueError("syzygy order must be >= 1")
    cur = m
    for _ in range(n):
        cur = syzygy_with_inclusion(cur)[0]
    return cur


def minimal_presentation(m: Module) -> Presentation:
    cache = _cache(m)
    if "presentation" not in cache:
        om, inc, cover0 = syzygy_with_inclusion(m)
        cover1 = projective_cover(om)
        d = cover1.epi.then(inc)
        cache["presentation"] = Presentation(m, cover0, cover1, inc, d)
    return cache["presentation"]


def is_projective(m: Module) -> bool:
    return syzygy_with_inclusion(m)[0].dim == 0


def _hom_from_projective(cover: ProjectiveCover, n: Module) -> int:
    dv = n.dimension_vector()
    return sum(dv[v] for v in cover.vertices)


def ext_dims(m: Module, n: Module, max_i: int) -> list[int]:
    """``[dim Ext^0, ..., dim Ext^max_i]`` from the minimal projective resolution of ``m``.

    Uses the exact sequences ``0 -> Hom(Om^{i-1}, N) -> Hom(P_{i-1}, N) -> Hom(Om^i, N) -> Ext^i -> 0``.
    """
    if m.algebra is not n.algebra:
        raise ValueError("Ext between modules over different algebras")
    out = [hom_dim(m, n)]
    prev_hom = out[0]
    cur = m
    for _ in range(max_i):
        om, _, cover = syzygy_with_inclusion(cur)
        h_om = hom_dim(om, n)
        h_p = _hom_from_projective(cover, n)
        out.append(h_om - h_p + prev_hom)
        prev_hom = h_om
        cur = om
    return out


def ext_dim(m: Module, n: Module, i: int) -> int:
    if i < 0:
        raise ValueError("Ext degree must be >= 0")
    return ext_dims(m, n, i)[i]


# extensions -------------------------------------------------------------------

@dataclass
class Ext1Space:
    """``Ext^1(M, N) = Hom(Om M, N) / {restrictions of maps P0 -> N}``."""

    m: Module
    n: Module
    syzygy: Module
    inclusion: ModuleMap
    cover: ProjectiveCover
    cocycles: list[Matrix]  # maps Om M -> N whose classes form a basis of Ext^1
    coboundaries: Matrix  # flattened rows spanning the restricted maps

    @property
    def dimension(self) -> int:
        return len(self.cocycles)


def ext1_space(m: Module, n: Module) -> Ext1Space:
    fld = m.field
    om, inc, cover = syzygy_with_inclusion(m)
    hom_om = hom_basis(om, n)
    hom_p = hom_basis(cover.projective, n)
    width = om.dim * n.dim
    restricted = [inc.matrix @ f for f in hom_p.basis]
    bnd = row_basis(Matrix.from_rows(fld, [f.entries() for f in restricted], cols=width)) if restricted else Matrix.zeros(fld, 0, width)
    cocycles = []
    span = bnd
    for f in hom_om.basis:
        row = Matrix.from_flat(fld, 1, width, f.entries())
        probe = vstack(fld, [span, row], cols=width)
        if probe.rank() > span.rank():
            cocycles.append(f)
            span = probe
    return Ext1Space(m, n, om, inc, cover, cocycles, bnd)


def extension_module(space: Ext1Space, g: Matrix, name: str = "") -> tuple[Module, ModuleMap, ModuleMap]:
    """Middle term ``E`` of the extension ``0 -> N -> E -> M -> 0`` classified by ``g``.

    ``E`` is the pushout of ``P0 <- Om M -> N``; returns ``(E, N -> E, E -> M)``.
    """
    fld = space.m.field
    P0 = space.cover.projective
    ds = direct_sum([P0, space.n], name=name)
    rel = hstack(fld, [space.inclusion.matrix, -g], rows=space.syzygy.dim)
    q = quotient(ds.module, rel, name=name)
    n_to_e = ds.injections[1].then(q.projection)
    # E -> M sends (p, x) to eps(p)
    to_m = vstack(fld, [space.cover.epi.matrix, Matrix.zeros(fld, space.n.dim, space.m.dim)], cols=space.m.dim)
    e_to_m = ModuleMap(q.module, space.m, q.section @ to_m)
    return q.module, n_to_e, e_to_m


# dimensions -------------------------------------------------------------------

@dataclass
class HomologyReport:
    kind: str
    status: str  # "exact", "infinite" or "at_least"
    value: int | None
    bound: int
    witness: list[int] = field(default_factory=list)  # dims of successive syzygies

    def at_most(self, k: int) -> bool:
        return self.status == "exact" and self.value <= k

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "status": self.status,
            "value": self.value,
            "bound": self.bound,
            "syzygy_dims": list(self.witness),
        }

    def __str__(self):
        if self.status == "exact":
            return str(self.value)
        if self.status == "infinite":
            return "inf"
        return f">={self.bound}"


def proj_dim(m: Module, bound: int = 6, kind: str = "pd") -> HomologyReport:
    """Exact projective dimension from minimal syzygies.

    Stops with ``infinite`` when some syzygy repeats up to isomorphism and with
    ``at_least`` when the bound is reached first.
    """
    from .krull_schmidt import is_isomorphic

    if bound < 1:
        raise ValueError("bound must be >= 1")
    seen: list[Module] = []
    cur = m
    dims = [m.dim]
    for n in range(bound):
        om = syzygy_with_inclusion(cur)[0]
        dims.append(om.dim)
        if om.dim == 0:
            return HomologyReport(kind, "exact", n, bound, dims)
        for earlier in seen:
            if earlier.dim == om.dim and is_isomorphic(earlier, om) is not None:
                return HomologyReport(kind, "infinite", None, bound, dims)
        seen.append(om)
        cur = om
    return HomologyReport(kind, "at_least", None, bound, dims)


def inj_dim(m: Module, bound: int = 6) -> HomologyReport:
    """Injective dimension of ``m`` as the projective dimension of ``D m`` over the opposite algebra."""
    return proj_dim(dual(m), bound, kind="id")


def _max_report(reports: list[HomologyReport], kind: str, bound: int) -> HomologyReport:
    if any(r.status == "infinite" for r in reports):
        return HomologyReport(kind, "infinite", None, bound)
    if any(r.status == "at_least" for r in reports):
        return HomologyReport(kind, "at_least", None, bound)
    return HomologyReport(kind, "exact", max((r.value for r in reports), default=0), bound)


@dataclass
class GorensteinReport:
    right: HomologyReport  # id of A_A
    left: HomologyReport  # id of _A A
    value: int | None

    def as_dict(self) -> dict:
        return {"id_right_regular": self.right.as_dict(), "id_left_regular": self.left.as_dict(), "gdim": self.value}


def gorenstein_dimension(a, bound: int = 6) -> GorensteinReport:
    right = _max_report([inj_dim(pd.module, bound) for pd in a.projective_data], "id", bound)
    left = _max_report([inj_dim(pd.module, bound) for pd in a.opposite().projective_data], "id", bound)
    value = None
    if right.status == "exact" and left.status == "exact":
        if right.value != left.value:
            raise InternalInconsistency(
                f"id of the regular module differs on the two sides ({right.value} vs {left.value})"
            )
        value = right.value
    return GorensteinReport(right, left, value)


def regular_ext_dims(m: Module, max_i: int) -> list[int]:
    """``dim Ext^i(M, A_A)`` for ``i = 0..max_i``."""
    return ext_dims(m, m.algebra.regular_module, max_i)


def left_perp_test(m: Module, bound: int = 6) -> bool:
    """``Ext^i(M, A) = 0`` for ``1 <= i <= bound``."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    return all(d == 0 for d in regular_ext_dims(m, bound)[1:])


def is_gorenstein_projective(m: Module, gdim: int | None) -> bool:
    """Ext-vanishing into the regular module, valid over Gorenstein algebras of dimension ``gdim``."""
    if gdim is None:
        raise ValueError("Gorenstein projectivity test needs a finite Gorenstein dimension")
    return left_perp_test(m, gdim + m.dim + 1)


def simple_modules(a) -> list[Module]:
    """Tops of the indecomposable projectives, one per vertex."""
    from .modules import top

    return [top(pd.module).module.with_name(f"S{v}") for v, pd in enumerate(a.projective_data)]


def global_dimension(a, bound: int = 6) -> HomologyReport:
    """``gldim A`` as the largest projective dimension of a simple module."""
    return _max_report([proj_dim(s, bound) for s in simple_modules(a)], "gldim", bound)
