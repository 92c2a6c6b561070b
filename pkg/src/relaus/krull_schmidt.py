"""Krull-Schmidt decompositions, isomorphism tests, endomorphism algebras and catalogs."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from typing import Sequence

import flint
import numpy as np

from .algebra import Algebra, build_algebra
from .linalg import FieldSpec, Matrix, RowCoordinates, hstack, kernel_basis, left_kernel, row_basis, vstack
from .modules import (
    HomBasis,
    Module,
    ModuleError,
    ModuleMap,
    cokernel,
    direct_sum,
    dual,
    hom_basis,
    hom_dim,
    quotient,
    radical,
    socle,
    submodule,
)


class DecompositionError(RuntimeError):
    pass


def _flatten(fld: FieldSpec, maps: Sequence[Matrix], width: int) -> Matrix:
    if not maps:
        return Matrix.zeros(fld, 0, width)
    return Matrix.from_rows(fld, [f.entries() for f in maps], cols=width)


def _unflatten(fld: FieldSpec, rows: Matrix, r: int, c: int) -> list[Matrix]:
    return [Matrix.from_flat(fld, r, c, row) for row in rows.tolist()]


def _span_maps(fld, maps: Sequence[Matrix], r: int, c: int) -> list[Matrix]:
    if not maps:
        return []
    return _unflatten(fld, row_basis(_flatten(fld, maps, r * c)), r, c)


def _random_scalar(fld: FieldSpec, rng: random.Random):
    if fld.is_rational:
        return rng.randint(-3, 3)
    return rng.randrange(fld.p)


def _random_combo(fld, basis: Sequence[Matrix], rng: random.Random) -> Matrix:
    out = basis[0].scale(0)
    for b in basis:
        c = _random_scalar(fld, rng)
        if c:
            out = out + b.scale(c)
    return out


def _poly_factors(mat: Matrix):
    return mat.charpoly().factor()[1]


def single_eigenvalue(mat: Matrix):
    """The eigenvalue ``l`` if the characteristic polynomial is ``(x - l)^d``, else ``None``."""
    if mat.rows == 0:
        return None
    facs = _poly_factors(mat)
    if len(facs) != 1 or facs[0][0].degree() != 1:
        return None
    c = facs[0][0].coeffs()
    lam = -c[0] / c[1] if mat.field.is_rational else -int(c[0]) * pow(int(c[1]), -1, mat.field.p)
    return mat.field.scalar(lam)


# locality ----------------------------------------------------------------------------

def local_radical(m: Module) -> list[Matrix] | None:
    """Basis of ``rad End(m)`` when ``End(m) = k 1 + rad`` with ``rad`` nilpotent, else ``None``.

    Works over any field: each basis endomorphism must have a single eigenvalue
    in the ground field and the span of the shifted elements must be nilpotent.
    """
    if m.dim == 0:
        return None
    fld = m.field
    eye = Matrix.identity(fld, m.dim)
    shifted = []
    for b in hom_basis(m, m).basis:
        lam = single_eigenvalue(b)
        if lam is None:
            return None
        n = b - eye.scale(lam)
        if not n.is_zero():
            shifted.append(n)
    rad = _span_maps(fld, shifted, m.dim, m.dim)
    cur = rad
    for _ in range(m.dim + 1):
        if not cur:
            return rad
        cur = _span_maps(fld, [x @ n for x in cur for n in rad], m.dim, m.dim)
    return None


def trace_form_radical(basis: Sequence[Matrix]) -> list[Matrix]:
    """Radical of a matrix algebra spanned by ``basis`` (characteristic zero).

    Elements ``x`` with ``tr(x y) = 0`` for all ``y`` in the algebra.
    """
    if not basis:
        return []
    fld = basis[0].field
    if not fld.is_rational:
        raise NotImplementedError("trace-form radical needs characteristic zero")
    n = len(basis)
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            p = basis[i] @ basis[j]
            t = sum(p[k, k] for k in range(p.rows))
            gram[i][j] = gram[j][i] = t
    k = kernel_basis(Matrix.from_rows(fld, gram, cols=n))
    out = []
    for c in range(k.cols):
        coeffs = [k[r, c] for r in range(n)]
        acc = basis[0].scale(0)
        for cf, b in zip(coeffs, basis):
            if cf != 0:
                acc = acc + b.scale(cf)
        out.append(acc)
    return out


def is_indecomposable(m: Module) -> bool:
    if m.dim == 0:
        return False
    if local_radical(m) is not None:
        return True
    if _find_splitting_idempotent(m) is not None:
        return False
    raise DecompositionError(f"could not decide indecomposability of {m!r}")


# splitting ---------------------------------------------------------------------------

def _poly_idempotent(f: Matrix) -> Matrix | None:
    """An exact nontrivial idempotent polynomial in ``f``, if its charpoly has coprime parts."""
    facs = _poly_factors(f)
    if len(facs) < 2:
        return None
    q1 = facs[0][0] ** facs[0][1]
    q2 = None
    for p, e in facs[1:]:
        q2 = p ** e if q2 is None else q2 * p ** e
    g, s, t = q1.xgcd(q2)
    # s q1 + t q2 = g (a unit); t q2 / g is 1 mod q1 and 0 mod q2
    g0 = g.coeffs()[0]
    inv = 1 / g0 if f.field.is_rational else pow(int(g0), -1, f.field.p)
    e_poly = t * q2 * inv
    return f.poly_eval(e_poly)


def _lift_idempotent(e: Matrix, steps: int) -> Matrix:
    for _ in range(steps + 1):
        e2 = e @ e
        if e2 == e:
            return e
        e = e2.scale(3) - (e2 @ e).scale(2)
    if e @ e != e:
        raise DecompositionError("idempotent lifting did not converge")
    return e


def _candidates(basis: list[Matrix], rng: random.Random, tries: int):
    yield from basis
    for i, j in itertools.combinations(range(len(basis)), 2):
        yield basis[i] + basis[j]
        if i * len(basis) + j > 4 * len(basis):
            break
    fld = basis[0].field
    for _ in range(tries):
        yield _random_combo(fld, basis, rng)


def _annihilator_candidates(m: Module, basis: list[Matrix], rng: random.Random, per_vector: int = 4):
    """Random endomorphisms killing a fixed vector.

    When End/rad is a full matrix ring every element may have an irreducible
    characteristic polynomial over Q; a singular map that is not nilpotent still
    splits off a summand (Fitting), and annihilators of vectors supply those.
    """
    fld = m.field
    # socle vectors: End(m) acting on a generic vector can be injective, but it
    # maps onto the much smaller socle, so socle vectors have big annihilators
    soc = socle(m)[1].matrix
    vecs = [soc.row(r) for r in range(soc.rows)]
    vecs += [Matrix.from_flat(fld, 1, soc.rows, [_random_scalar(fld, rng) for _ in range(soc.rows)]) @ soc
             for _ in range(2)]
    vecs += [Matrix.from_flat(fld, 1, m.dim, [int(i == k) for i in range(m.dim)]) for k in range(m.dim)]
    for u in vecs:
        imgs = vstack(fld, [u @ b for b in basis], cols=m.dim)
        ann = left_kernel(imgs)
        if ann.rows == 0:
            continue
        gens = [sum((b.scale(c) for c, b in zip(ann.row(r).entries(), basis) if c != 0), basis[0].scale(0))
                for r in range(ann.rows)]
        yield from gens
        for _ in range(per_vector):
            yield _random_combo(fld, gens, rng)


def _find_splitting_idempotent(m: Module, seed: int = 0, tries: int = 64) -> Matrix | None:
    basis = hom_basis(m, m).basis
    if not basis:
        return None
    rng = random.Random(seed)
    for f in itertools.chain(_candidates(basis, rng, tries), _annihilator_candidates(m, basis, rng)):
        e = _poly_idempotent(f)
        if e is not None:
            return _lift_idempotent(e, m.dim)
    return None


@dataclass
class Decomposition:
    module: Module
    summands: list[Module]
    injections: list[ModuleMap]
    projections: list[ModuleMap]
    classes: list[int]  # iso-class index of each summand
    parts: list[tuple[Module, int]]

    def multiplicities(self) -> list[int]:
        return [k for _, k in self.parts]

    def check(self) -> None:
        fld = self.module.field
        n = self.module.dim
        total = Matrix.zeros(fld, n, n)
        for i, p in zip(self.injections, self.projections):
            total = total + (p.matrix @ i.matrix)
        if total != Matrix.identity(fld, n):
            raise DecompositionError("summand witnesses do not add up to the identity")
        for a, i in enumerate(self.injections):
            for b, p in enumerate(self.projections):
                want = Matrix.identity(fld, i.source.dim) if a == b else Matrix.zeros(fld, i.source.dim, p.target.dim)
                if i.matrix @ p.matrix != want:
                    raise DecompositionError("summand witnesses are not orthogonal")


def _split_recursive(m: Module, rows: Matrix, seed: int, out: list):
    """Append ``(indecomposable, rows inside the top module)`` pairs."""
    fld = m.field
    basis = hom_basis(m, m).basis
    rad = trace_form_radical(basis)
    if len(basis) - len(rad) == 1:
        out.append((m, rows))
        return
    e = _find_splitting_idempotent(m, seed)
    if e is None:
        raise DecompositionError(
            f"no splitting idempotent found for a module of dimension {m.dim} "
            f"with End/rad of dimension {len(basis) - len(rad)}"
        )
    eye = Matrix.identity(fld, m.dim)
    for idem in (e, eye - e):
        sub_rows = row_basis(idem)
        sub, inc = submodule(m, sub_rows)
        _split_recursive(sub, inc.matrix @ rows, seed, out)


def _require_rational(m: Module, what: str):
    if not m.field.is_rational:
        raise ValueError(
            f"{what} works over the rationals only; over {m.field} use the bounded search "
            "oracle (enumerate_indecomposables(..., mode='bounded'))"
        )


def decompose(m: Module, seed: int = 0) -> Decomposition:
    """Split ``m`` into indecomposables using idempotents of ``End(m)``."""
    _require_rational(m, "decompose")
    fld = m.field
    found: list[tuple[Module, Matrix]] = []
    if m.dim:
        _split_recursive(m, Matrix.identity(fld, m.dim), seed, found)
    found.sort(key=lambda t: (t[0].dim, t[0].dimension_vector()))
    if found:
        U = vstack(fld, [r for _, r in found], cols=m.dim)
        Uinv = U.inverse()
    summands, injections, projections = [], [], []
    off = 0
    for sub, r in found:
        name = f"{m.name}[{len(summands)}]" if m.name else ""
        sub = sub.with_name(name) if name else sub
        summands.append(sub)
        injections.append(ModuleMap(sub, m, r))
        projections.append(ModuleMap(m, sub, Uinv.select_cols(range(off, off + sub.dim))))
        off += sub.dim
    classes: list[int] = []
    reps: list[Module] = []
    for s in summands:
        for k, rep in enumerate(reps):
            if iso_from_local(rep, s) is not None:
                classes.append(k)
                break
        else:
            classes.append(len(reps))
            reps.append(s)
    parts = [(rep, classes.count(k)) for k, rep in enumerate(reps)]
    return Decomposition(m, summands, injections, projections, classes, parts)


# isomorphism -------------------------------------------------------------------------

def iso_from_local(c: Module, m: Module) -> ModuleMap | None:
    """Isomorphism ``c -> m`` for ``c`` with local endomorphism ring, or ``None``.

    If ``c`` and ``m`` are isomorphic some element of any basis of ``Hom(c, m)``
    is already an isomorphism, since all composites of non-isomorphisms fall in
    the radical of ``End(c)``.
    """
    if c.algebra is not m.algebra:
        raise ModuleError("modules over different algebras")
    if c.dim != m.dim or c.dimension_vector() != m.dimension_vector():
        return None
    for f in hom_basis(c, m).basis:
        if f.is_invertible():
            return ModuleMap(c, m, f)
    return None


def is_isomorphic(m: Module, n: Module, seed: int = 0, tries: int = 16) -> ModuleMap | None:
    """An invertible intertwiner ``m -> n`` or ``None``."""
    if m.algebra is not n.algebra:
        raise ModuleError("modules over different algebras")
    if m.dim != n.dim or m.dimension_vector() != n.dimension_vector():
        return None
    if m.dim == 0:
        return ModuleMap(m, n, Matrix.zeros(m.field, 0, 0))
    hb = hom_basis(m, n)
    d = hb.dimension
    if d == 0 or d != hom_dim(m, m) or d != hom_dim(n, n) or d != hom_dim(n, m):
        return None
    for f in hb.basis:
        if f.is_invertible():
            return ModuleMap(m, n, f)
    rng = random.Random(seed)
    for _ in range(tries):
        f = _random_combo(m.field, hb.basis, rng)
        if f.is_invertible():
            return ModuleMap(m, n, f)
    if local_radical(m) is not None:
        return None  # basis test above is exact for local m
    if m.field.is_rational:
        dm, dn = decompose(m, seed), decompose(n, seed)
        if sorted(dm.multiplicities()) != sorted(dn.multiplicities()):
            return None
        used = [False] * len(dn.summands)
        total = Matrix.zeros(m.field, m.dim, n.dim)
        for i, s in enumerate(dm.summands):
            for j, t in enumerate(dn.summands):
                if used[j]:
                    continue
                phi = iso_from_local(s, t)
                if phi is not None:
                    used[j] = True
                    total = total + dm.projections[i].matrix @ phi.matrix @ dn.injections[j].matrix
                    break
            else:
                return None
        return ModuleMap(m, n, total)
    # prime field: exhaustive search over Hom(m, n) when small
    p = m.field.p
    if p ** d > 200_000:
        raise NotImplementedError("isomorphism test over a prime field beyond exhaustive range")
    for coeffs in itertools.product(range(p), repeat=d):
        f = hb.combine(coeffs)
        if f.is_invertible():
            return ModuleMap(m, n, f)
    return None


# endomorphism algebras ----------------------------------------------------------------

@dataclass
class EndRing:
    """``End(X)`` for ``X`` a direct sum of pairwise non-isomorphic local modules.

    Multiplication is composition ``g h = g o h`` (apply ``h`` first), so the
    matrix of ``g h`` is ``H @ G`` in the row convention.  The basis is
    homogeneous: element ``k`` is a map ``parts[src[k]] -> parts[tgt[k]]``.
    """

    algebra: Algebra
    sum: "DirectSum"
    parts: list[Module]
    src: list[int]
    tgt: list[int]
    blocks: list[Matrix]  # the small map parts[src] -> parts[tgt]
    block_index: dict  # (src, tgt) -> list of basis indices

    @property
    def module(self) -> Module:
        return self.sum.module

    def element_matrix(self, k: int) -> Matrix:
        """Basis element ``k`` as an endomorphism of the sum."""
        s, t = self.src[k], self.tgt[k]
        return self.sum.projections[s].matrix @ self.blocks[k] @ self.sum.injections[t].matrix

    def matrix_of(self, x: Matrix) -> Matrix:
        out = Matrix.zeros(self.module.field, self.module.dim, self.module.dim)
        for k, c in enumerate(x.entries()):
            if c != 0:
                out = out + self.element_matrix(k).scale(c)
        return out


def end_ring_of_sum(parts: Sequence[Module], name: str = "Gamma", labels: Sequence[str] | None = None) -> EndRing:
    """Endomorphism algebra of ``parts[0] + ... + parts[r-1]`` with a homogeneous basis."""
    parts = list(parts)
    if not parts:
        raise ValueError("endomorphism ring of an empty sum")
    fld = parts[0].field
    rads = []
    for c in parts:
        r = local_radical(c)
        if r is None:
            raise DecompositionError(f"summand {c!r} does not have a split local endomorphism ring")
        rads.append(r)
    for i, j in itertools.combinations(range(len(parts)), 2):
        if iso_from_local(parts[i], parts[j]) is not None:
            raise DecompositionError(f"summands {i} and {j} are isomorphic")
    src, tgt, blocks, is_rad = [], [], [], []
    block_index: dict = {}
    coords: dict = {}
    for s, cs in enumerate(parts):
        for t, ct in enumerate(parts):
            if s == t:
                basis = [Matrix.identity(fld, cs.dim)] + rads[s]
            else:
                basis = hom_basis(cs, ct).basis
            idx = []
            for b in basis:
                idx.append(len(blocks))
                src.append(s)
                tgt.append(t)
                blocks.append(b)
                is_rad.append(not (s == t and len(idx) == 1))
            block_index[(s, t)] = idx
            if basis:
                coords[(s, t)] = RowCoordinates(_flatten(fld, basis, cs.dim * ct.dim))
    d = len(blocks)
    right = [[0] * (d * d) for _ in range(d)]
    left = [[0] * (d * d) for _ in range(d)]
    for i in range(d):
        for j in range(d):
            # b_i b_j = b_i o b_j: apply b_j first, needs tgt[j] == src[i]
            if tgt[j] != src[i]:
                continue
            s, t = src[j], tgt[i]
            prod = blocks[j] @ blocks[i]
            if prod.is_zero():
                continue
            vec = Matrix.from_flat(fld, 1, prod.rows * prod.cols, prod.entries())
            c = coords[(s, t)].coords(vec).entries()
            for kk, val in zip(block_index[(s, t)], c):
                if val != 0:
                    right[j][i * d + kk] = val
                    left[i][j * d + kk] = val
    right_m = [Matrix.from_flat(fld, d, d, r) for r in right]
    left_m = [Matrix.from_flat(fld, d, d, r) for r in left]
    idem = []
    unit = [0] * d
    for s in range(len(parts)):
        k = block_index[(s, s)][0]
        e = [0] * d
        e[k] = 1
        unit[k] = 1
        idem.append(Matrix.from_flat(fld, 1, d, e))
    rad_rows = []
    for k in range(d):
        if is_rad[k]:
            e = [0] * d
            e[k] = 1
            rad_rows.append(Matrix.from_flat(fld, 1, d, e))
    labels = list(labels) if labels is not None else [c.name or str(i) for i, c in enumerate(parts)]
    basis_labels = [f"{labels[src[k]]}->{labels[tgt[k]]}#{k - block_index[(src[k], tgt[k])][0]}" for k in range(d)]
    alg = Algebra(
        fld,
        basis_labels,
        right_m,
        left_m,
        Matrix.from_flat(fld, 1, d, unit),
        idem,
        labels,
        name=name,
        provenance={"kind": "endomorphism-algebra", "summands": len(parts)},
        radical=rad_rows,
    )
    ds = direct_sum(parts, name="X")
    return EndRing(alg, ds, parts, src, tgt, blocks, block_index)


def end_ring(m: Module, name: str = "End") -> tuple[Algebra, HomBasis]:
    """``End(m)`` on the canonical basis of ``Hom(m, m)``; idempotents come from a decomposition."""
    fld = m.field
    hb = hom_basis(m, m)
    d = hb.dimension
    n = m.dim
    rc = hb._coords
    right = [[None] * d for _ in range(d)]
    left = [[None] * d for _ in range(d)]
    for i, g in enumerate(hb.basis):
        for j, h in enumerate(hb.basis):
            prod = h @ g
            right[j][i] = rc.coords(Matrix.from_flat(fld, 1, n * n, prod.entries())).entries()
            left[i][j] = right[j][i]
    right_m = [Matrix.from_rows(fld, rows, cols=d) for rows in right]
    left_m = [Matrix.from_rows(fld, rows, cols=d) for rows in left]
    unit = rc.coords(Matrix.from_flat(fld, 1, n * n, Matrix.identity(fld, n).entries()))
    idem = []
    if n:
        dec = decompose(m)
        for i, p in zip(dec.injections, dec.projections):
            e = p.matrix @ i.matrix
            idem.append(rc.coords(Matrix.from_flat(fld, 1, n * n, e.entries())))
    rad = trace_form_radical(hb.basis)
    rad_rows = [rc.coords(Matrix.from_flat(fld, 1, n * n, r.entries())) for r in rad]
    alg = Algebra(
        fld,
        [f"f{k}" for k in range(d)],
        right_m,
        left_m,
        unit,
        idem,
        name=name,
        provenance={"kind": "endomorphism-algebra"},
        radical=rad_rows,
    )
    return alg, hb


# Auslander-Reiten translate -------------------------------------------------------------

def has_summand(m: Module, c: Module) -> bool:
    """Whether the local module ``c`` is a direct summand of ``m``."""
    if c.dim > m.dim:
        return False
    into = hom_basis(c, m).basis
    back = hom_basis(m, c).basis
    return any((f @ g).is_invertible() for f in into for g in back)


def has_projective_summand(m: Module) -> bool:
    return any(has_summand(m, pd.module) for pd in m.algebra.projective_data)


def has_injective_summand(m: Module) -> bool:
    return has_projective_summand(dual(m))


def _dual_hom_module(p: Module) -> tuple[Module, HomBasis]:
    """``Hom_A(p, A)`` as a right module over the opposite algebra."""
    alg = p.algebra
    opp = alg.opposite()
    hb = hom_basis(p, alg.regular_module)
    fld = alg.field
    n = p.dim * alg.dim
    acts = []
    for j in range(alg.dim):
        rows = [hb._coords.coords(Matrix.from_flat(fld, 1, n, (f @ alg.left_mult[j]).entries())).entries() for f in hb.basis]
        acts.append(Matrix.from_rows(fld, rows, cols=hb.dimension))
    return Module(opp, hb.dimension, acts), hb


def transpose(m: Module) -> Module:
    """``Tr m``: cokernel of ``Hom(P0, A) -> Hom(P1, A)`` from a minimal presentation."""
    from .homological import minimal_presentation

    pres = minimal_presentation(m)
    h0, b0 = _dual_hom_module(pres.P0)
    h1, b1 = _dual_hom_module(pres.P1)
    fld = m.field
    n1 = pres.P1.dim * m.algebra.dim
    rows = []
    for f in b0.basis:
        g = pres.d.matrix @ f
        rows.append(b1._coords.coords(Matrix.from_flat(fld, 1, n1, g.entries())).entries())
    mat = Matrix.from_rows(fld, rows, cols=h1.dim) if rows else Matrix.zeros(fld, 0, h1.dim)
    return cokernel(ModuleMap(h0, h1, mat), name=f"Tr({m.name})" if m.name else "").module


def ar_translate(m: Module) -> Module:
    """``tau m = D Tr m``."""
    if has_projective_summand(m):
        raise ValueError("ar_translate needs a module without projective summands")
    t = dual(transpose(m))
    return t.with_name(f"tau({m.name})") if m.name else t


def ar_translate_inverse(m: Module) -> Module:
    """``tau^- m = Tr D m``."""
    if has_injective_summand(m):
        raise ValueError("ar_translate_inverse needs a module without injective summands")
    t = transpose(dual(m))
    return t.with_name(f"tau-({m.name})") if m.name else t


def _lift_endo(cover, h: Matrix) -> Matrix:
    """``H0 : P0 -> P0`` with ``H0 eps = eps h`` (row convention: ``H0 @ Eps = Eps @ h``)."""
    from .linalg import solve_left

    P0 = cover.projective
    eps = cover.epi.matrix
    basis = hom_basis(P0, P0).basis
    fld = P0.field
    n = P0.dim * cover.module.dim
    lhs = _flatten(fld, [b @ eps for b in basis], n)
    rhs = Matrix.from_flat(fld, 1, n, (eps @ h).entries())
    c = solve_left(lhs, rhs)
    if c is None:
        raise DecompositionError("endomorphism does not lift to the projective cover")
    out = Matrix.zeros(fld, P0.dim, P0.dim)
    for cf, b in zip(c.entries(), basis):
        if cf != 0:
            out = out + b.scale(cf)
    return out


def almost_split_sequence(x: Module, tau_x: Module | None = None):
    """``0 -> tau x -> E -> x -> 0`` for non-projective indecomposable ``x``; returns ``(E, tau x)``."""
    from .homological import ext1_space, extension_module

    rad = local_radical(x)
    if rad is None:
        raise ValueError("almost split sequences need an indecomposable end term")
    tx = ar_translate(x) if tau_x is None else tau_x
    space = ext1_space(x, tx)
    if space.dimension == 0:
        raise DecompositionError("Ext^1(x, tau x) vanishes; x is projective?")
    fld = x.field
    width = space.syzygy.dim * tx.dim
    full = vstack(fld, [space.coboundaries, _flatten(fld, space.cocycles, width)], cols=width)
    rc = RowCoordinates(full)
    nb = space.coboundaries.rows
    inc = space.inclusion.matrix
    inc_rc = RowCoordinates(inc)
    blocks = []
    for h in rad:
        H0 = _lift_endo(space.cover, h)
        h_om = inc_rc.coords(inc @ H0)
        rows = []
        for g in space.cocycles:
            pulled = h_om @ g
            cc = rc.coords(Matrix.from_flat(fld, 1, width, pulled.entries())).entries()
            rows.append(cc[nb:])
        blocks.append(Matrix.from_rows(fld, rows, cols=space.dimension))
    if blocks:
        soc = left_kernel(hstack(fld, blocks, rows=space.dimension))
    else:
        soc = Matrix.identity(fld, space.dimension)
    if soc.rows == 0:
        raise DecompositionError("no almost split class found")
    xi = soc.row(0).entries()
    g = space.cocycles[0].scale(0)
    for c, cy in zip(xi, space.cocycles):
        if c != 0:
            g = g + cy.scale(c)
    e, _, _ = extension_module(space, g)
    return e, tx


# catalogs -------------------------------------------------------------------------------

@dataclass
class IndecomposableCatalog:
    algebra: Algebra
    modules: list[Module]
    complete: bool
    method: str
    steps: int = 0
    notes: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.modules)

    def index_of(self, m: Module) -> int | None:
        for k, c in enumerate(self.modules):
            if iso_from_local(c, m) is not None:
                return k
        return None


def module_signature(m: Module) -> tuple:
    """Field-independent invariant: dimension vector and rank of every basis element's action."""
    return (tuple(m.dimension_vector()), tuple(a.rank() for a in m.action))


def catalog_signature(cat: IndecomposableCatalog) -> list[tuple]:
    return sorted(module_signature(m) for m in cat.modules)


def _sort_catalog(mods: list[Module]) -> list[Module]:
    return sorted(mods, key=lambda c: (c.dim, c.dimension_vector(), module_signature(c)))


def _name_catalog(mods: list[Module]) -> list[Module]:
    return [c.with_name(f"C{k}") for k, c in enumerate(mods)]


def knit(a: Algebra, budget: int = 200, max_dim: int = 64) -> IndecomposableCatalog:
    if not a.field.is_rational:
        raise ValueError("knitting needs rational coefficients; use mode='bounded' over prime fields")
    found: list[Module] = []
    queue: list[Module] = []

    def add(m: Module):
        if m.dim == 0:
            return
        for part in decompose(m).summands:
            if part.dim > max_dim:
                raise OverflowError
            if not any(iso_from_local(c, part) is not None for c in found):
                found.append(part)
                queue.append(part)

    steps = 0
    complete = True
    try:
        for pd in a.projective_data:
            add(pd.module)
        for pd in a.opposite().projective_data:
            add(dual(pd.module))
        while queue:
            steps += 1
            if steps > budget:
                complete = False
                break
            x = queue.pop(0)
            proj = has_projective_summand(x)
            inj = has_injective_summand(x)
            if proj:
                add(radical(x)[0])
            else:
                e, tx = almost_split_sequence(x)
                add(tx)
                add(e)
            if inj:
                s_inc = socle(x)[1]
                add(quotient(x, s_inc.matrix).module)
            else:
                add(ar_translate_inverse(x))
    except OverflowError:
        complete = False
    mods = _name_catalog(_sort_catalog(found))
    return IndecomposableCatalog(a, mods, complete, "knitting", steps)


def representation_module(a: Algebra, dims: Sequence[int], arrow_mats: dict) -> Module:
    """Module from a quiver representation; ``arrow_mats[name]`` maps ``M e_s -> M e_t``."""
    pres = a.presentation
    fld = a.field
    vidx = {v: i for i, v in enumerate(pres.vertices)}
    offs = list(itertools.accumulate([0] + list(dims)))
    n = offs[-1]
    acts = []
    for src, arrows in a.basis_paths:
        u = vidx[src]
        mat = Matrix.identity(fld, dims[u])
        cur = u
        for name in arrows:
            arr = pres.arrow(name)
            mat = mat @ arrow_mats[name]
            cur = vidx[arr.target]
        flat = [0] * (n * n)
        rows = mat.tolist()
        for r in range(dims[u]):
            for c in range(dims[cur]):
                flat[(offs[u] + r) * n + offs[cur] + c] = rows[r][c]
        acts.append(Matrix.from_flat(fld, n, n, flat))
    return Module(a, n, acts)


def _brute_force_local(m: Module) -> bool:
    """Every endomorphism is nilpotent or invertible (exhaustive over a prime field)."""
    hb = hom_basis(m, m)
    p = m.field.p
    for coeffs in itertools.product(range(p), repeat=hb.dimension):
        f = hb.combine(coeffs)
        if f.is_invertible():
            continue
        g = f
        for _ in range(m.dim):
            g = g @ f
        if not (f.rank() == 0 or g.is_zero()):
            return False
    return hb.dimension > 0


def bounded_search(a: Algebra, max_dim: int, max_steps: int = 10**6) -> IndecomposableCatalog:
    """All indecomposables of dimension at most ``max_dim`` by exhaustive enumeration over a prime field."""
    if a.field.is_rational:
        raise ValueError("bounded search enumerates a prime field")
    if a.presentation is None:
        raise ValueError("bounded search needs a quiver presentation")
    from .algebra import _paths_up_to

    pres = a.presentation
    p = a.field.p
    fld = a.field
    vidx = {v: i for i, v in enumerate(pres.vertices)}
    long_paths = [q for q in _paths_up_to(pres, pres.nilpotency_bound) if len(q[1]) == pres.nilpotency_bound]
    found: list[Module] = []
    by_sig: dict = {}
    steps = 0
    complete = True
    nv = len(pres.vertices)
    for total in range(1, max_dim + 1):
        for dims in itertools.product(range(total + 1), repeat=nv):
            if sum(dims) != total:
                continue
            shapes = [(arr.name, dims[vidx[arr.source]], dims[vidx[arr.target]]) for arr in pres.arrows]
            nvars = sum(r * c for _, r, c in shapes)
            count = p ** nvars
            if steps + count > max_steps:
                complete = False
                continue
            steps += count
            for vals in _relation_survivors(pres, shapes, p, long_paths):
                mats = {}
                pos = 0
                for name, r, c in shapes:
                    mats[name] = Matrix.from_flat(fld, r, c, vals[pos:pos + r * c])
                    pos += r * c
                m = representation_module(a, dims, mats)
                sig = module_signature(m)
                known = by_sig.setdefault(sig, [])
                if any(iso_from_local(c, m) is not None for c in known):
                    continue
                if not _brute_force_local(m):
                    continue
                known.append(m)
                found.append(m)
    mods = _name_catalog(_sort_catalog(found))
    return IndecomposableCatalog(a, mods, complete, "bounded", steps, [f"max_dim={max_dim}", f"field={a.field}"])


def _relation_survivors(pres, shapes, p: int, long_paths) -> list[list[int]]:
    """All arrow-matrix tuples satisfying the relations and killing long paths, batched in numpy."""
    nvars = sum(r * c for _, r, c in shapes)
    if nvars == 0:
        return [[]]
    grid = np.array(list(itertools.product(range(p), repeat=nvars)), dtype=np.int64)
    mats, pos = {}, 0
    for name, r, c in shapes:
        mats[name] = grid[:, pos:pos + r * c].reshape(len(grid), r, c)
        pos += r * c
    ok = np.ones(len(grid), dtype=bool)

    def nonzero(x):
        # explicit sizes: empty blocks defeat reshape's -1 inference
        return x.reshape(len(grid), x[0].size).any(axis=1)

    def product(names):
        out = mats[names[0]]
        for nm in names[1:]:
            out = np.matmul(out, mats[nm]) % p
        return out

    for rel in pres.relations:
        acc = None
        for coeff, names in rel:
            c = int(pres.field.scalar(coeff)) if not pres.field.is_rational else int(coeff)
            term = (product(tuple(names)) * c) % p
            acc = term if acc is None else (acc + term) % p
        ok &= ~nonzero(acc)
    for q in long_paths:
        if q[1]:
            ok &= ~nonzero(product(q[1]))
    return grid[ok].tolist()


def _path_product(mats: dict, path) -> Matrix | None:
    out = None
    for name in path[1]:
        out = mats[name] if out is None else out @ mats[name]
    return out


def enumerate_indecomposables(a: Algebra, mode: str = "knitting", budget: int = 10000, max_dim: int = 8) -> IndecomposableCatalog:
    if mode == "knitting":
        return knit(a, budget=budget, max_dim=64)
    if mode == "bounded":
        return bounded_search(a, max_dim, budget)
    raise ValueError(f"unknown enumeration mode {mode!r}")


def rebuild_over(a: Algebra, fld: FieldSpec, name: str | None = None) -> Algebra:
    """The same quiver presentation over another field."""
    if a.presentation is None:
        raise ValueError("algebra has no quiver presentation to rebuild")
    return build_algebra(replace(a.presentation, field=fld), name=name or f"{a.name}/{fld}")


def multiplicity_by_hom(cat: IndecomposableCatalog, m: Module) -> list[int]:
    """Multiplicities of catalog members in ``m`` from ``dim Hom(C_i, m)``."""
    from .linalg import solve

    if not cat.complete:
        raise ValueError("multiplicities by Hom dimensions need a complete catalog")
    fld = m.field
    n = len(cat.modules)
    gram = [[hom_dim(ci, cj) for cj in cat.modules] for ci in cat.modules]
    h = [[hom_dim(ci, m)] for ci in cat.modules]
    x = solve(Matrix.from_rows(fld, gram, cols=n), Matrix.from_rows(fld, h, cols=1))
    if x is None or Matrix.from_rows(fld, gram, cols=n).rank() < n:
        raise DecompositionError("Hom dimension system is singular; catalog incomplete")
    out = []
    for v in x.entries():
        if fld.is_rational:
            fr = flint.fmpq(v)
            if fr.q != 1 or fr.p < 0:
                raise DecompositionError("non-integral or negative multiplicity; catalog incomplete")
            out.append(int(fr.p))
        else:
            out.append(int(v))
    if sum(k * c.dim for k, c in zip(out, cat.modules)) != m.dim:
        raise DecompositionError("multiplicities do not account for the dimension; catalog incomplete")
    return out
