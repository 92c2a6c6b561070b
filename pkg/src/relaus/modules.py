"""Finite-dimensional right modules and their homomorphisms.

Convention: modules are right modules and vectors are rows, so an algebra
element ``a`` acts by ``m -> m @ action(a)`` and a module map ``f`` is a
``dim(source) x dim(target)`` matrix with ``m -> m @ f``.  Composition
"first ``f`` then ``g``" is therefore the matrix product ``f @ g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Sequence

from .linalg import (
    Matrix,
    RowCoordinates,
    block_diag,
    hstack,
    kernel_basis,
    left_kernel,
    row_basis,
    rref,
    vstack,
)

if TYPE_CHECKING:
    from .algebra import Algebra


class ModuleError(ValueError):
    """A module or module map violates its defining invariant."""


class Module:
    """A right module given by one action matrix per algebra basis element."""

    def __init__(self, algebra: "Algebra", dim: int, action: Sequence[Matrix], name: str = "", check: bool = False):
        if len(action) != algebra.dim:
            raise ModuleError(f"expected {algebra.dim} action matrices, got {len(action)}")
        for a in action:
            if a.shape != (dim, dim):
                raise ModuleError(f"action matrix of shape {a.shape}, expected {(dim, dim)}")
        self.algebra = algebra
        self.dim = dim
        self.action = tuple(action)
        self.name = name
        if check:
            self.check()

    @property
    def field(self):
        return self.algebra.field

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Module{label} dim={self.dim} over {self.algebra.name}>"

    def act(self, x: Matrix) -> Matrix:
        """Matrix of the algebra element with coordinate row ``x``."""
        nz = [(j, c) for j, c in enumerate(x.entries()) if c != 0]
        if len(nz) == 1 and nz[0][1] == 1:
            return self.action[nz[0][0]]
        out = Matrix.zeros(self.field, self.dim, self.dim)
        for j, c in nz:
            if c != 0:
                out = out + self.action[j].scale(c)
        return out

    def check(self) -> None:
        """Verify the module axioms; raise :class:`ModuleError` naming the culprit."""
        alg = self.algebra
        eye = Matrix.identity(self.field, self.dim)
        if self.act(alg.unit) != eye:
            raise ModuleError("unit does not act as the identity")
        for i in range(alg.dim):
            for j in range(alg.dim):
                lhs = self.action[i] @ self.action[j]
                rhs = self.act(alg.product_row(i, j))
                if lhs != rhs:
                    raise ModuleError(
                        f"action violates structure constants at basis pair "
                        f"({alg.labels[i]}, {alg.labels[j]})"
                    )

    def with_name(self, name: str) -> "Module":
        return Module(self.algebra, self.dim, self.action, name=name)

    # idempotent-adapted coordinates --------------------------------------------
    @cached_property
    def blocks(self) -> list[Matrix]:
        """Row bases of ``M e_v`` for each primitive idempotent ``e_v``."""
        out = [row_basis(self.act(e)) if self.dim else Matrix.zeros(self.field, 0, 0) for e in self.algebra.idempotents]
        if sum(b.rows for b in out) != self.dim:
            raise ModuleError("primitive idempotents do not split the module")
        return out

    def dimension_vector(self) -> list[int]:
        return [b.rows for b in self.blocks]

    @cached_property
    def _adapted(self):
        U = vstack(self.field, self.blocks, cols=self.dim)
        Uinv = U.inverse()
        offsets, off = [], 0
        for b in self.blocks:
            offsets.append(off)
            off += b.rows
        acts = [U @ a @ Uinv for a in self.action]
        return U, Uinv, offsets, acts


@dataclass(frozen=True)
class ModuleMap:
    source: Module
    target: Module
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.source.dim, self.target.dim):
            raise ModuleError(
                f"map matrix has shape {self.matrix.shape}, expected {(self.source.dim, self.target.dim)}"
            )

    def check(self) -> None:
        if self.source.algebra is not self.target.algebra:
            raise ModuleError("map between modules over different algebras")
        for j, (a, b) in enumerate(zip(self.source.action, self.target.action)):
            if a @ self.matrix != self.matrix @ b:
                raise ModuleError(f"map does not intertwine basis element {self.source.algebra.labels[j]}")

    def then(self, other: "ModuleMap") -> "ModuleMap":
        """Composite ``other o self``."""
        return ModuleMap(self.source, other.target, self.matrix @ other.matrix)

    def rank(self) -> int:
        return self.matrix.rank()

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()


def zero_map(source: Module, target: Module) -> ModuleMap:
    return ModuleMap(source, target, Matrix.zeros(source.field, source.dim, target.dim))


def identity_map(m: Module) -> ModuleMap:
    return ModuleMap(m, m, Matrix.identity(m.field, m.dim))


def zero_module(algebra: "Algebra") -> Module:
    z = Matrix.zeros(algebra.field, 0, 0)
    return Module(algebra, 0, [z] * algebra.dim, name="0")


# Hom spaces ------------------------------------------------------------------------

@dataclass
class HomBasis:
    source: Module
    target: Module
    basis: list[Matrix] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def maps(self) -> list[ModuleMap]:
        return [ModuleMap(self.source, self.target, f) for f in self.basis]

    @cached_property
    def _coords(self) -> RowCoordinates:
        rows = [f.entries() for f in self.basis]
        n = self.source.dim * self.target.dim
        return RowCoordinates(Matrix.from_rows(self.source.field, rows, cols=n))

    def coords(self, f: Matrix) -> list:
        """Coordinates of an intertwiner in this basis."""
        v = Matrix.from_flat(f.field, 1, f.rows * f.cols, f.entries())
        return self._coords.coords(v).entries()

    def combine(self, coeffs: Sequence) -> Matrix:
        out = Matrix.zeros(self.source.field, self.source.dim, self.target.dim)
        for c, f in zip(coeffs, self.basis):
            if c != 0:
                out = out + f.scale(c)
        return out


def _hom_system(m: Module, n: Module):
    """Linear equations in the block-diagonal unknowns ``C_v : M e_v -> N e_v``."""
    alg = m.algebra
    _, _, offs_m, acts_m = m._adapted
    _, _, offs_n, acts_n = n._adapted
    dm = m.dimension_vector()
    dn = n.dimension_vector()
    r = len(dm)
    var_off, total = [], 0
    for v in range(r):
        var_off.append(total)
        total += dm[v] * dn[v]
    rows: list[dict] = []
    for j in range(alg.dim):
        ends = alg.ends[j]
        A = acts_m[j].tolist()
        B = acts_n[j].tolist()
        pairs = [ends] if ends is not None else [(u, v) for u in range(r) for v in range(r)]
        for u, v in pairs:
            if dm[u] == 0 or dn[v] == 0:
                continue
            for rr in range(dm[u]):
                ri = offs_m[u] + rr
                arow = A[ri]
                for cc in range(dn[v]):
                    ci = offs_n[v] + cc
                    eq: dict = {}
                    # (A' C)[ri, ci] = sum_k A'[ri, k] C_v[k, cc], k in block v of M
                    for kk in range(dm[v]):
                        a = arow[offs_m[v] + kk]
                        if a != 0:
                            idx = var_off[v] + kk * dn[v] + cc
                            eq[idx] = eq.get(idx, 0) + a
                    # (C B')[ri, ci] = sum_k C_u[rr, k] B'[k, ci], k in block u of N
                    for kk in range(dn[u]):
                        b = B[offs_n[u] + kk][ci]
                        if b != 0:
                            idx = var_off[u] + rr * dn[u] + kk
                            eq[idx] = eq.get(idx, 0) - b
                    eq = {k: c for k, c in eq.items() if c != 0}
                    if eq:
                        rows.append(eq)
    return rows, total, var_off, dm, dn


def hom_basis(m: Module, n: Module) -> HomBasis:
    """Basis of ``Hom_A(m, n)`` from the intertwining equations of every basis element."""
    if m.algebra is not n.algebra:
        raise ModuleError("hom between modules over different algebras")
    fld = m.field
    if m.dim == 0 or n.dim == 0:
        return HomBasis(m, n, [])
    rows, total, var_off, dm, dn = _hom_system(m, n)
    if total == 0:
        return HomBasis(m, n, [])
    flat = [0] * (len(rows) * total)
    for i, eq in enumerate(rows):
        for k, c in eq.items():
            flat[i * total + k] = c
    system = Matrix.from_flat(fld, len(rows), total, flat)
    sol = kernel_basis(system) if rows else Matrix.identity(fld, total)
    _, Uinv, offs_m, _ = m._adapted
    W, _, offs_n, _ = n._adapted
    cols = sol.tolist()
    basis = []
    for s in range(sol.cols):
        C = [0] * (m.dim * n.dim)
        for v in range(len(dm)):
            for rr in range(dm[v]):
                for cc in range(dn[v]):
                    C[(offs_m[v] + rr) * n.dim + offs_n[v] + cc] = cols[var_off[v] + rr * dn[v] + cc][s]
        Cm = Matrix.from_flat(fld, m.dim, n.dim, C)
        basis.append(Uinv @ Cm @ W)
    # canonical basis: rref of the flattened maps
    if basis:
        flatmat = Matrix.from_rows(fld, [f.entries() for f in basis], cols=m.dim * n.dim)
        red = row_basis(flatmat)
        basis = [Matrix.from_flat(fld, m.dim, n.dim, r) for r in red.tolist()]
    return HomBasis(m, n, basis)


def hom_dim(m: Module, n: Module) -> int:
    return hom_basis(m, n).dimension


# sub- and quotient modules ---------------------------------------------------------

def submodule(m: Module, rows: Matrix, name: str = "") -> tuple[Module, ModuleMap]:
    """Submodule spanned by independent ``rows`` (must be invariant) with its inclusion."""
    fld = m.field
    k = rows.rows
    if k == 0:
        sub = Module(m.algebra, 0, [Matrix.zeros(fld, 0, 0)] * m.algebra.dim, name=name)
        return sub, ModuleMap(sub, m, Matrix.zeros(fld, 0, m.dim))
    rc = RowCoordinates(rows)
    try:
        acts = [rc.coords(rows @ a) for a in m.action]
    except ValueError as exc:
        raise ModuleError("rows do not span a submodule") from exc
    sub = Module(m.algebra, k, acts, name=name)
    return sub, ModuleMap(sub, m, rows)


@dataclass
class Quotient:
    module: Module
    projection: ModuleMap
    section: Matrix  # rows of the source lifting the quotient basis


def quotient(m: Module, rows: Matrix, name: str = "") -> Quotient:
    """Quotient of ``m`` by the (invariant) row span of ``rows``."""
    fld = m.field
    basis = row_basis(rows) if rows.rows else Matrix.zeros(fld, 0, m.dim)
    _, r, pivots = rref(basis) if basis.rows else (None, 0, [])
    free = [j for j in range(m.dim) if j not in set(pivots)]
    q = len(free)
    comp_flat = [0] * (q * m.dim)
    for i, j in enumerate(free):
        comp_flat[i * m.dim + j] = 1
    comp = Matrix.from_flat(fld, q, m.dim, comp_flat)
    full = vstack(fld, [basis, comp], cols=m.dim)
    inv = full.inverse() if m.dim else full
    proj = inv.select_cols(range(r, m.dim))
    acts = [comp @ a @ proj for a in m.action]
    mod = Module(m.algebra, q, acts, name=name)
    return Quotient(mod, ModuleMap(m, mod, proj), comp)


def kernel(f: ModuleMap, name: str = "") -> tuple[Module, ModuleMap]:
    rows = left_kernel(f.matrix)
    return submodule(f.source, rows, name=name)


@dataclass
class Image:
    module: Module
    epi: ModuleMap
    mono: ModuleMap


def image(f: ModuleMap, name: str = "") -> Image:
    fld = f.source.field
    rows = row_basis(f.matrix) if f.source.dim else Matrix.zeros(fld, 0, f.target.dim)
    im, mono = submodule(f.target, rows, name=name)
    if im.dim:
        epi = RowCoordinates(rows).coords(f.matrix)
    else:
        epi = Matrix.zeros(fld, f.source.dim, 0)
    return Image(im, ModuleMap(f.source, im, epi), mono)


def cokernel(f: ModuleMap, name: str = "") -> Quotient:
    return quotient(f.target, f.matrix, name=name)


@dataclass
class DirectSum:
    module: Module
    injections: list[ModuleMap]
    projections: list[ModuleMap]

    @property
    def offsets(self) -> list[int]:
        out, off = [], 0
        for inj in self.injections:
            out.append(off)
            off += inj.source.dim
        return out


def direct_sum(parts: Sequence[Module], algebra: "Algebra | None" = None, name: str = "") -> DirectSum:
    if not parts:
        if algebra is None:
            raise ValueError("empty direct sum needs the algebra")
        return DirectSum(zero_module(algebra), [], [])
    alg = parts[0].algebra
    if any(p.algebra is not alg for p in parts):
        raise ModuleError("direct sum of modules over different algebras")
    fld = alg.field
    total = sum(p.dim for p in parts)
    acts = [block_diag(fld, [p.action[j] for p in parts]) for j in range(alg.dim)]
    mod = Module(alg, total, acts, name=name)
    inj, proj, off = [], [], 0
    for p in parts:
        flat = [0] * (p.dim * total)
        for i in range(p.dim):
            flat[i * total + off + i] = 1
        e = Matrix.from_flat(fld, p.dim, total, flat)
        inj.append(ModuleMap(p, mod, e))
        proj.append(ModuleMap(mod, p, e.T))
        off += p.dim
    return DirectSum(mod, inj, proj)


def direct_sum_map(fld, maps: Sequence[ModuleMap], source: Module, target: Module) -> ModuleMap:
    return ModuleMap(source, target, block_diag(fld, [f.matrix for f in maps]))


# radical, top, socle ----------------------------------------------------------------

def _radical_actions(m: Module) -> list[Matrix]:
    return [m.act(r) for r in m.algebra.radical_elements]


def radical(m: Module) -> tuple[Module, ModuleMap]:
    fld = m.field
    acts = _radical_actions(m)
    if not acts or m.dim == 0:
        return submodule(m, Matrix.zeros(fld, 0, m.dim), name=f"rad {m.name}".strip())
    rows = row_basis(vstack(fld, acts, cols=m.dim))
    return submodule(m, rows, name=f"rad {m.name}".strip())


def top(m: Module) -> Quotient:
    _, inc = radical(m)
    return quotient(m, inc.matrix, name=f"top {m.name}".strip())


def socle(m: Module) -> tuple[Module, ModuleMap]:
    fld = m.field
    acts = _radical_actions(m)
    if not acts:
        return submodule(m, Matrix.identity(fld, m.dim), name=f"soc {m.name}".strip())
    rows = left_kernel(hstack(fld, acts)) if m.dim else Matrix.zeros(fld, 0, 0)
    return submodule(m, rows, name=f"soc {m.name}".strip())


def dual(m: Module) -> Module:
    """``D m = Hom_k(m, k)`` as a right module over the opposite algebra."""
    opp = m.algebra.opposite()
    name = f"D({m.name})" if m.name else ""
    return Module(opp, m.dim, [a.T for a in m.action], name=name)


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual(f.target), dual(f.source), f.matrix.T)


def is_zero_module(m: Module) -> bool:
    return m.dim == 0
