"""Seeded random modules for property tests."""
from __future__ import annotations

import random

from relaus.linalg import Matrix, row_basis, vstack
from relaus.modules import Module, direct_sum, quotient


def random_invertible(fld, n: int, rng: random.Random) -> Matrix:
    while True:
        u = Matrix.from_flat(fld, n, n, [rng.randint(-2, 2) for _ in range(n * n)])
        if u.is_invertible():
            return u


def base_change(m: Module, rng: random.Random) -> Module:
    """Same module in a random basis."""
    if m.dim == 0:
        return m
    u = random_invertible(m.field, m.dim, rng)
    ui = u.inverse()
    return Module(m.algebra, m.dim, [u @ a @ ui for a in m.action], name=m.name)


def random_sum(catalog: list[Module], rng: random.Random, max_dim: int) -> tuple[Module, list[int]]:
    """Random direct sum of catalog members (multiplicities returned) in a random basis."""
    mult = [0] * len(catalog)
    total = 0
    for _ in range(rng.randint(1, 4)):
        k = rng.randrange(len(catalog))
        if total + catalog[k].dim <= max_dim:
            mult[k] += 1
            total += catalog[k].dim
    if total == 0:
        k = min(range(len(catalog)), key=lambda i: catalog[i].dim)
        mult[k] = 1
    parts = [c for c, n in zip(catalog, mult) for _ in range(n)]
    return base_change(direct_sum(parts).module, rng), mult


def generated_submodule(m: Module, rows: Matrix) -> Matrix:
    span = row_basis(rows)
    while True:
        grown = row_basis(vstack(m.field, [span] + [span @ a for a in m.action], cols=m.dim))
        if grown.rows == span.rows:
            return span
        span = grown


def random_quotient(a, rng: random.Random, max_dim: int) -> Module:
    """``P / (random elements)`` for a random sum ``P`` of indecomposable projectives."""
    pdata = a.projective_data
    while True:
        picks = [rng.randrange(len(pdata)) for _ in range(rng.randint(1, 3))]
        free = direct_sum([pdata[v].module for v in picks]).module
        k = rng.randint(0, 2)
        rows = Matrix.from_flat(a.field, k, free.dim, [rng.randint(-2, 2) for _ in range(k * free.dim)])
        sub = generated_submodule(free, rows) if k else rows
        q = quotient(free, sub).module
        if 0 < q.dim <= max_dim:
            return base_change(q, rng)


def random_modules(a, catalog: list[Module], count: int, max_dim: int, seed: int = 0):
    """Alternates random quotients of projectives with random base-changed sums."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        if i % 2 == 0:
            out.append(random_quotient(a, rng, max_dim))
        else:
            out.append(random_sum(catalog, rng, max_dim)[0])
    return out
