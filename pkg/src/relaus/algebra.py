"""Finite-dimensional algebras: quiver presentations, structure constants,
opposite algebras and indecomposable projectives."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .linalg import FieldSpec, Matrix, RowCoordinates, kernel_basis, row_basis, rref, vstack
from .modules import Module


class PresentationError(ValueError):
    """The quiver-with-relations input is malformed or not admissible."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass
class AlgebraPresentation:
    """``kQ/I`` with ``I`` generated by ``relations``; paths of length ``>= nilpotency_bound`` must lie in ``I``.

    A relation is a list of ``(coefficient, path)`` terms where a path is a
    sequence of arrow names read left to right ("first a, then b").
    """

    field: FieldSpec
    vertices: list[str]
    arrows: list[Arrow]
    relations: list[list[tuple[object, tuple[str, ...]]]] = field(default_factory=list)
    nilpotency_bound: int = 2

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise PresentationError(f"unknown arrow {name!r}")


# Paths are (source vertex, arrow names); the trivial path at v is (v, ()).
Path = tuple[str, tuple[str, ...]]


def _path_label(p: Path) -> str:
    return f"e_{p[0]}" if not p[1] else "*".join(p[1])


class Algebra:
    """A finite-dimensional algebra with a fixed basis.

    ``right_mult[j]`` is the matrix of ``x -> x b_j`` and ``left_mult[j]`` the
    matrix of ``x -> b_j x`` on coordinate rows.  ``idempotents`` are complete
    sets of primitive orthogonal idempotents given as coordinate rows.
    """

    def __init__(
        self,
        field: FieldSpec,
        labels: Sequence[str],
        right_mult: Sequence[Matrix],
        left_mult: Sequence[Matrix],
        unit: Matrix,
        idempotents: Sequence[Matrix],
        idempotent_labels: Sequence[str] | None = None,
        name: str = "A",
        provenance: dict | None = None,
        radical: Sequence[Matrix] | None = None,
    ):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.right_mult = list(right_mult)
        self.left_mult = list(left_mult)
        self.unit = unit
        self.idempotents = list(idempotents)
        self.idempotent_labels = list(idempotent_labels or [str(i) for i in range(len(self.idempotents))])
        self.name = name
        self.provenance = provenance or {"kind": "structure-constants"}
        self._radical = list(radical) if radical is not None else None
        self._opposite: Algebra | None = None
        self.presentation: AlgebraPresentation | None = None
        self.basis_paths: list[Path] | None = None

    def __repr__(self):
        return f"<Algebra {self.name} dim={self.dim} over {self.field}>"

    # elements ---------------------------------------------------------------
    def basis_vector(self, i: int) -> Matrix:
        flat = [0] * self.dim
        flat[i] = 1
        return Matrix.from_flat(self.field, 1, self.dim, flat)

    def product_row(self, i: int, j: int) -> Matrix:
        """Coordinates of ``b_i b_j``."""
        return self.right_mult[j].row(i)

    def mul(self, x: Matrix, y: Matrix) -> Matrix:
        out = Matrix.zeros(self.field, 1, self.dim)
        for j, c in enumerate(y.entries()):
            if c != 0:
                out = out + (x @ self.right_mult[j]).scale(c)
        return out

    def structure_constant(self, i: int, j: int, l: int):
        return self.right_mult[j][i, l]

    @cached_property
    def ends(self) -> list[tuple[int, int] | None]:
        """For each basis element, ``(u, v)`` with ``b = e_u b e_v`` if homogeneous."""
        out = []
        for i in range(self.dim):
            b = self.basis_vector(i)
            left = [u for u, e in enumerate(self.idempotents) if (e @ self.right_mult[i]) == b]
            right = [v for v, e in enumerate(self.idempotents) if self.mul(b, e) == b]
            out.append((left[0], right[0]) if len(left) == 1 and len(right) == 1 else None)
        return out

    # radical ---------------------------------------------------------------
    @property
    def radical_elements(self) -> list[Matrix]:
        if self._radical is None:
            self._radical = self._trace_form_radical()
        return self._radical

    def _trace_form_radical(self) -> list[Matrix]:
        if not self.field.is_rational:
            raise NotImplementedError(
                "trace-form radical needs characteristic zero; over prime fields supply a quiver presentation"
            )
        traces = [sum(r[i, i] for i in range(self.dim)) for r in self.right_mult]
        gram = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                prod = self.product_row(i, j).entries()
                row.append(sum(c * t for c, t in zip(prod, traces)))
            gram.append(row)
        g = Matrix.from_rows(self.field, gram, cols=self.dim)
        k = kernel_basis(g)
        return [k.select_cols([c]).T for c in range(k.cols)]

    def radical_dimension(self) -> int:
        return len(self.radical_elements)

    # checks ------------------------------------------------------------------
    def check_associative(self) -> None:
        for i in range(self.dim):
            for j in range(self.dim):
                bij = self.product_row(i, j)
                for l in range(self.dim):
                    lhs = bij @ self.right_mult[l]
                    rhs = self.mul(self.basis_vector(i), self.product_row(j, l))
                    if lhs != rhs:
                        raise AssertionError(f"associativity fails at ({self.labels[i]}, {self.labels[j]}, {self.labels[l]})")

    def check_unit(self) -> None:
        for i in range(self.dim):
            b = self.basis_vector(i)
            if self.mul(self.unit, b) != b or self.mul(b, self.unit) != b:
                raise AssertionError(f"unit fails on {self.labels[i]}")

    def check_idempotents(self) -> None:
        total = Matrix.zeros(self.field, 1, self.dim)
        for a, e in enumerate(self.idempotents):
            for b, f in enumerate(self.idempotents):
                prod = self.mul(e, f)
                want = e if a == b else Matrix.zeros(self.field, 1, self.dim)
                if prod != want:
                    raise AssertionError(f"idempotents {a}, {b} not orthogonal idempotents")
            total = total + e
        if total != self.unit:
            raise AssertionError("idempotents do not sum to the unit")

    # derived algebras ----------------------------------------------------------
    def opposite(self) -> "Algebra":
        if self._opposite is None:
            opp = Algebra(
                self.field,
                self.labels,
                self.left_mult,
                self.right_mult,
                self.unit,
                self.idempotents,
                self.idempotent_labels,
                name=f"{self.name}^op",
                provenance={"kind": "opposite", "of": self.provenance},
                radical=self._radical,
            )
            opp._opposite = self
            self._opposite = opp
        return self._opposite

    # regular module and projectives ---------------------------------------------
    @cached_property
    def regular_module(self) -> Module:
        return Module(self, self.dim, self.right_mult, name=self.name)

    @cached_property
    def projective_data(self) -> list["ProjectiveData"]:
        out = []
        for v, e in enumerate(self.idempotents):
            rows = row_basis(vstack(self.field, [e @ r for r in self.right_mult], cols=self.dim))
            rc = RowCoordinates(rows)
            acts = [rc.coords(rows @ r) for r in self.right_mult]
            mod = Module(self, rows.rows, acts, name=f"P({self.idempotent_labels[v]})")
            out.append(ProjectiveData(v, mod, rows, rc.coords(e)))
        return out


@dataclass
class ProjectiveData:
    """``e_v A`` as a module, its basis inside ``A`` and the coordinates of ``e_v``."""

    vertex: int
    module: Module
    embedding: Matrix
    generator: Matrix


def regular_projectives(a: Algebra) -> list[Module]:
    """The indecomposable projectives ``e_v A``; their sum is the regular module."""
    return [pd.module for pd in a.projective_data]


def opposite(a: Algebra) -> Algebra:
    return a.opposite()


# quiver presentations ---------------------------------------------------------------

def _target(pres: AlgebraPresentation, p: Path) -> str:
    return pres.arrow(p[1][-1]).target if p[1] else p[0]


def _validate(pres: AlgebraPresentation) -> list[list[tuple[object, Path]]]:
    if pres.nilpotency_bound < 1:
        raise PresentationError("nilpotency_bound must be >= 1")
    if len(set(pres.vertices)) != len(pres.vertices):
        raise PresentationError("duplicate vertex labels")
    names = [a.name for a in pres.arrows]
    if len(set(names)) != len(names):
        raise PresentationError("duplicate arrow names")
    for a in pres.arrows:
        for end in (a.source, a.target):
            if end not in pres.vertices:
                raise PresentationError(f"arrow {a.name!r} has undeclared endpoint {end!r}")
    rels = []
    for k, rel in enumerate(pres.relations):
        if not rel:
            raise PresentationError(f"relation {k} is empty")
        terms = []
        ends = None
        for coeff, names_ in rel:
            names_ = tuple(names_)
            if len(names_) < 2:
                raise PresentationError(f"relation {k}: term {names_!r} has length < 2")
            arrows = [pres.arrow(n) for n in names_]
            for x, y in zip(arrows, arrows[1:]):
                if x.target != y.source:
                    raise PresentationError(f"relation {k}: path {'*'.join(names_)} is not composable")
            e = (arrows[0].source, arrows[-1].target)
            if ends is None:
                ends = e
            elif e != ends:
                raise PresentationError(f"relation {k}: terms have different endpoints")
            terms.append((pres.field.scalar(coeff), (arrows[0].source, names_)))
        rels.append(terms)
    return rels


def _paths_up_to(pres: AlgebraPresentation, length: int) -> list[Path]:
    out: list[Path] = [(v, ()) for v in pres.vertices]
    frontier = list(out)
    for _ in range(length):
        nxt = []
        for p in frontier:
            t = _target(pres, p)
            for a in pres.arrows:
                if a.source == t:
                    nxt.append((p[0], p[1] + (a.name,)))
        out.extend(nxt)
        frontier = nxt
    return out


def _concat(pres: AlgebraPresentation, p: Path, q: Path) -> Path | None:
    if _target(pres, p) != q[0]:
        return None
    return (p[0], p[1] + q[1])


def _ideal_rows(pres, rels, paths: list[Path], max_len: int, truncate: bool):
    """Vectors ``u r v`` (coordinates over ``paths``) for all paths ``u, v``.

    With ``truncate`` terms longer than ``max_len`` are dropped; otherwise only
    products whose every term has length ``<= max_len`` are produced.
    """
    index = {p: i for i, p in enumerate(paths)}
    rows = []
    for rel in rels:
        lens = [len(t[1][1]) for t in rel]
        lo, hi = min(lens), max(lens)
        src, tgt = rel[0][1][0], _target(pres, rel[0][1])
        budget = max_len - (lo if truncate else hi)
        if budget < 0:
            continue
        lefts = [u for u in paths if len(u[1]) <= budget and _target(pres, u) == src]
        rights = [v for v in paths if len(v[1]) <= budget and v[0] == tgt]
        for u in lefts:
            for v in rights:
                if len(u[1]) + len(v[1]) > budget:
                    continue
                vec = {}
                for c, t in rel:
                    w = _concat(pres, _concat(pres, u, t), v)
                    if len(w[1]) > max_len:
                        continue
                    vec[index[w]] = vec.get(index[w], 0) + c
                if any(c != 0 for c in vec.values()):
                    rows.append(vec)
    return rows


def _rows_to_matrix(fld, rows, n):
    flat = [0] * (len(rows) * n)
    for i, r in enumerate(rows):
        for k, c in r.items():
            flat[i * n + k] = c
    return Matrix.from_flat(fld, len(rows), n, flat)


def _check_admissible(pres: AlgebraPresentation, rels) -> None:
    N = pres.nilpotency_bound
    longest = max((len(t[1][1]) for rel in rels for t in rel), default=0)
    length_n = [p for p in _paths_up_to(pres, N) if len(p[1]) == N]
    if not length_n:
        return
    offending = None
    for K in range(N, N + max(longest, 1) + 1):
        paths = _paths_up_to(pres, K)
        index = {p: i for i, p in enumerate(paths)}
        S = _rows_to_matrix(pres.field, _ideal_rows(pres, rels, paths, K, truncate=False), len(paths))
        base = S.rank()
        offending = None
        for p in length_n:
            flat = [0] * len(paths)
            flat[index[p]] = 1
            probe = vstack(pres.field, [S, Matrix.from_flat(pres.field, 1, len(paths), flat)], cols=len(paths))
            if probe.rank() != base:
                offending = p
                break
        if offending is None:
            return
    raise PresentationError(
        f"relations are not admissible for nilpotency bound {N}: path {_path_label(offending)} survives"
    )


def build_algebra(pres: AlgebraPresentation, name: str = "A") -> Algebra:
    """Basis, structure constants and vertex idempotents of ``kQ/I``."""
    rels = _validate(pres)
    _check_admissible(pres, rels)
    N = pres.nilpotency_bound
    fld = pres.field
    paths = _paths_up_to(pres, N - 1)
    # pivots should land on long paths so that short ones survive as basis
    order = sorted(range(len(paths)), key=lambda i: (-len(paths[i][1]), -i))
    pos = {i: k for k, i in enumerate(order)}  # path index -> column
    pidx = {p: i for i, p in enumerate(paths)}
    raw = _ideal_rows(pres, rels, paths, N - 1, truncate=True)
    permuted = [{pos[k]: c for k, c in r.items()} for r in raw]
    S = _rows_to_matrix(fld, permuted, len(paths))
    reduced, rank, pivots = rref(S)
    pivot_set = set(pivots)
    free_cols = [c for c in range(len(paths)) if c not in pivot_set]
    basis_paths = sorted((paths[order[c]] for c in free_cols), key=lambda p: (len(p[1]), pidx[p]))
    bindex = {p: i for i, p in enumerate(basis_paths)}
    dim = len(basis_paths)
    red = reduced.tolist()
    pivot_row = {c: i for i, c in enumerate(pivots)}

    def reduce(p: Path) -> dict[int, object]:
        if p is None or len(p[1]) >= N:
            return {}
        if p in bindex:
            return {bindex[p]: fld.scalar(1)}
        c = pos[pidx[p]]
        row = red[pivot_row[c]]
        out = {}
        for f in free_cols:
            if row[f] != 0:
                out[bindex[paths[order[f]]]] = -row[f]
        return out

    prod = [[reduce(_concat(pres, p, q)) for q in basis_paths] for p in basis_paths]
    right_mult, left_mult = [], []
    for j in range(dim):
        flat_r = [0] * (dim * dim)
        flat_l = [0] * (dim * dim)
        for i in range(dim):
            for l, c in prod[i][j].items():
                flat_r[i * dim + l] = c
            for l, c in prod[j][i].items():
                flat_l[i * dim + l] = c
        right_mult.append(Matrix.from_flat(fld, dim, dim, flat_r))
        left_mult.append(Matrix.from_flat(fld, dim, dim, flat_l))
    idem = []
    for v in pres.vertices:
        flat = [0] * dim
        flat[bindex[(v, ())]] = 1
        idem.append(Matrix.from_flat(fld, 1, dim, flat))
    unit = Matrix.from_flat(fld, 1, dim, [1 if not p[1] else 0 for p in basis_paths])
    radical = []
    for i, p in enumerate(basis_paths):
        if p[1]:
            flat = [0] * dim
            flat[i] = 1
            radical.append(Matrix.from_flat(fld, 1, dim, flat))
    alg = Algebra(
        fld,
        [_path_label(p) for p in basis_paths],
        right_mult,
        left_mult,
        unit,
        idem,
        list(pres.vertices),
        name=name,
        provenance={"kind": "quiver"},
        radical=radical,
    )
    alg.presentation = pres
    alg.basis_paths = basis_paths
    alg._reduce_path = reduce
    return alg


def truncated_polynomial(n: int, field: FieldSpec) -> AlgebraPresentation:
    """``k[x]/(x^n)`` as a one-loop quiver."""
    if n == 1:
        return semisimple(1, field)
    return AlgebraPresentation(
        field, ["1"], [Arrow("x", "1", "1")], [[(1, ("x",) * n)]] if n >= 2 else [], nilpotency_bound=n
    )


def linear_a(n: int, field: FieldSpec) -> AlgebraPresentation:
    """Path algebra of ``1 -> 2 -> ... -> n`` (no relations)."""
    verts = [str(i) for i in range(1, n + 1)]
    arrows = [Arrow(f"a{i}", str(i), str(i + 1)) for i in range(1, n)]
    return AlgebraPresentation(field, verts, arrows, [], nilpotency_bound=max(n, 1))


def semisimple(n: int, field: FieldSpec) -> AlgebraPresentation:
    return AlgebraPresentation(field, [str(i) for i in range(1, n + 1)], [], [], nilpotency_bound=1)
