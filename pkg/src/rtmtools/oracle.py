"""Independent ground truth over GF(p).

Everything here is deliberately oblivious to the combinatorics implemented
elsewhere: Hom-spaces are computed by solving the intertwining equations,
idempotents are found by exhaustively scanning the endomorphism space, and
isomorphisms are verified by rank.  Arithmetic is exact integer arithmetic
modulo an odd prime; inverses come from the extended Euclidean algorithm.
No floating point is used anywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import BoundQuiver, Quiver, check_locally_bound
from .trees import (
    SINK,
    ModuleHom,
    ModuleRep,
    RootedTree,
    TreeOverQ,
    identity_hom,
    push_down,
    validate_tree_over_q,
)


def _inverse_mod(a: int, p: int) -> int:
    """Multiplicative inverse modulo p by the extended Euclidean algorithm."""
    a %= p
    if a == 0:
        raise ZeroDivisionError("no inverse of 0")
    old_r, r = a, p
    old_s, s = 1, 0
    while r:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_s, s = s, old_s - quotient * s
    return old_s % p


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, int, tuple[int, ...]]:
    """Reduced row-echelon form over GF(p): (reduced matrix, rank, pivot columns)."""
    m = np.asarray(mat, dtype=np.int64) % p
    if m.ndim != 2:
        raise ValueError("need a 2-d matrix")
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nonzero = np.nonzero(m[r:, c])[0]
        if nonzero.size == 0:
            continue
        i = r + int(nonzero[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * _inverse_mod(int(m[r, c]), p)) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, len(pivots), tuple(pivots)


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of the right nullspace over GF(p)."""
    m = np.asarray(mat, dtype=np.int64) % p
    rows, cols = m.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    reduced, rank, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = (-reduced[row, f]) % p
    return basis


@dataclass
class HomBasis:
    """A basis of the space of homomorphisms between two modules."""

    basis: list[ModuleHom]
    dimension: int


def _block_layout(m1: ModuleRep, m2: ModuleRep) -> list[tuple[str, int, int, int]]:
    """(qvertex, offset, rows, cols) for the flattened unknown vector."""
    layout = []
    offset = 0
    for q in sorted(m1.basis):
        rows, cols = m2.dim(q), m1.dim(q)
        layout.append((q, offset, rows, cols))
        offset += rows * cols
    return layout


def hom_space(m1: ModuleRep, m2: ModuleRep) -> HomBasis:
    """Solve the intertwining equations directly.

    Unknowns are all entries of the per-vertex blocks; for every quiver
    arrow the equation X_target A1 - A2 X_source = 0 contributes one row per
    matrix entry.  The nullspace basis is reshaped back into homomorphisms.
    """
    if m1.prime != m2.prime:
        raise ValueError("modules use different primes")
    if m1.codomain != m2.codomain:
        raise ValueError("modules live over different bound quivers")
    p = m1.prime
    layout = _block_layout(m1, m2)
    offsets = {q: (off, rows, cols) for q, off, rows, cols in layout}
    total = sum(rows * cols for _, _, rows, cols in layout)
    quiver = m1.codomain.quiver
    eq_rows = []
    for a in quiver.arrows:
        src, tgt = quiver.source(a), quiver.target(a)
        a1, a2 = m1.matrices[a], m2.matrices[a]
        n_eq = m2.dim(tgt) * m1.dim(src)
        if n_eq == 0:
            continue
        block = np.zeros((n_eq, total), dtype=np.int64)
        off_t, rows_t, cols_t = offsets[tgt]
        if rows_t * cols_t:
            # vec(X_tgt @ A1) = (I kron A1^T) vec(X_tgt), row-major vec.
            block[:, off_t : off_t + rows_t * cols_t] = np.kron(
                np.eye(rows_t, dtype=np.int64), a1.T
            )
        off_s, rows_s, cols_s = offsets[src]
        if rows_s * cols_s:
            # vec(A2 @ X_src) = (A2 kron I) vec(X_src).
            block[:, off_s : off_s + rows_s * cols_s] -= np.kron(
                a2, np.eye(cols_s, dtype=np.int64)
            )
        eq_rows.append(block % p)
    if total == 0:
        return HomBasis([], 0)
    system = np.vstack(eq_rows) if eq_rows else np.zeros((0, total), dtype=np.int64)
    kernel = nullspace(system, p)
    homs = []
    for row in kernel:
        blocks = {}
        for q, off, rows, cols in layout:
            blocks[q] = row[off : off + rows * cols].reshape(rows, cols)
        homs.append(ModuleHom(m1, m2, blocks))
    return HomBasis(homs, len(homs))


@dataclass
class IdempotentSearch:
    """Outcome of the exhaustive idempotent scan."""

    status: str  # "found" | "none" | "unavailable"
    idempotent: Optional[ModuleHom] = None

    @property
    def available(self) -> bool:
        return self.status != "unavailable"


def has_nontrivial_idempotent(end_basis: HomBasis, cap: int = 10**7) -> IdempotentSearch:
    """Scan every linear combination of the basis for an idempotent != 0, 1.

    The scan covers all p**dim candidates; if that exceeds the cap the
    result is an explicit "unavailable" rather than a weaker answer.
    Candidates are checked in ascending mixed-radix order of their
    coefficient vectors, so the returned witness is deterministic.
    """
    if end_basis.dimension == 0:
        return IdempotentSearch("none")
    sample = end_basis.basis[0]
    if sample.domain is not sample.codomain and sample.domain.basis != sample.codomain.basis:
        raise ValueError("idempotent search needs an endomorphism basis")
    p = sample.prime
    dim = end_basis.dimension
    total = p**dim
    if total > cap:
        return IdempotentSearch("unavailable")
    qs = sorted(sample.blocks)
    stacked = {q: np.stack([h.blocks[q] for h in end_basis.basis]) for q in qs}
    identity = {q: np.eye(sample.blocks[q].shape[0], dtype=np.int64) for q in qs}
    chunk = 1 << 14
    powers = np.array([p**k for k in range(dim)], dtype=np.int64)
    for lo in range(1, total, chunk):  # index 0 is the zero map
        hi = min(lo + chunk, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        coeffs = (idx[:, None] // powers[None, :]) % p
        ok = np.ones(hi - lo, dtype=bool)
        is_id = np.ones(hi - lo, dtype=bool)
        per_q = {}
        for q in qs:
            cand = np.tensordot(coeffs, stacked[q], axes=([1], [0])) % p
            per_q[q] = cand
            square = np.matmul(cand, cand) % p
            ok &= (square == cand).all(axis=(1, 2))
            is_id &= (cand == identity[q]).all(axis=(1, 2))
        ok &= ~is_id
        hits = np.nonzero(ok)[0]
        if hits.size:
            i = int(hits[0])
            blocks = {q: per_q[q][i] for q in qs}
            return IdempotentSearch("found", ModuleHom(sample.domain, sample.codomain, blocks))
    return IdempotentSearch("none")


def verify_iso(h: ModuleHom) -> bool:
    """True iff every per-vertex block is square and invertible and h intertwines."""
    for blk in h.blocks.values():
        if blk.shape[0] != blk.shape[1]:
            return False
        if blk.shape[0] and rref(blk, h.prime)[1] != blk.shape[0]:
            return False
    return h.intertwines()


def end_dimensions(t: TreeOverQ, primes: tuple[int, ...] = (3, 5)) -> dict[int, int]:
    """Dimension of the endomorphism space at each requested prime."""
    out = {}
    for p in primes:
        rep = push_down(t, p)
        out[p] = hom_space(rep, rep).dimension
    return out


class GenerationExhausted(RuntimeError):
    """The rejection sampler ran out of attempts."""


def _sample_attempt(
    seed: int,
    attempt: int,
    orientation: str,
    max_depth: int,
    max_children: int,
    q_size: int,
    rel_density: float,
    max_vertices: int,
    end_dim_cap: Optional[int],
    codomain: Optional[BoundQuiver],
) -> Optional[TreeOverQ]:
    """One deterministic attempt; the tree shape never depends on orientation."""
    rng = random.Random(f"{seed}:{attempt}")

    if codomain is None:
        n_qv = rng.randint(1, q_size)
        q_vertices = [f"q{i}" for i in range(1, n_qv + 1)]
        n_arrows = rng.randint(1, n_qv + 2)
        q_arrows = [
            (f"g{j}", rng.choice(q_vertices), rng.choice(q_vertices))
            for j in range(1, n_arrows + 1)
        ]
        quiver = Quiver(q_vertices, q_arrows)
        candidates = [
            (a, b)
            for a in quiver.arrows
            for b in quiver.arrows
            if quiver.target(a) == quiver.source(b)
        ]
        relations = [pair for pair in candidates if rng.random() < rel_density]
        bq = BoundQuiver(quiver, relations)
        if not check_locally_bound(bq).ok:
            return None
    else:
        bq = codomain

    n_vertices = rng.randint(1, max_vertices)
    parent: dict[int, int] = {}
    depth = {1: 0}
    fanout = {1: 0}
    for v in range(2, n_vertices + 1):
        pool = [u for u in depth if depth[u] < max_depth and fanout[u] < max_children]
        if not pool:
            break
        par = rng.choice(sorted(pool))
        parent[v] = par
        depth[v] = depth[par] + 1
        fanout[par] = fanout[par] + 1
        fanout[v] = 0

    quiver = bq.quiver
    vertex_label: dict[int, str] = {1: rng.choice(sorted(quiver.vertices))}
    arrow_label: dict[str, str] = {}
    tree_arrows = []
    for v in sorted(parent):
        par = parent[v]
        if orientation == SINK:
            options = sorted(a for a in quiver.arrows if quiver.target(a) == vertex_label[par])
        else:
            options = sorted(a for a in quiver.arrows if quiver.source(a) == vertex_label[par])
        if not options:
            return None
        lab = rng.choice(options)
        name = f"a{v}"
        arrow_label[name] = lab
        if orientation == SINK:
            vertex_label[v] = quiver.source(lab)
            tree_arrows.append((name, v, par))
        else:
            vertex_label[v] = quiver.target(lab)
            tree_arrows.append((name, par, v))

    tree = RootedTree(sorted(depth), tree_arrows, orientation)
    t = TreeOverQ(tree, bq, vertex_label, arrow_label)
    if not validate_tree_over_q(t).ok:
        return None
    if end_dim_cap is not None:
        if any(d > end_dim_cap for d in end_dimensions(t).values()):
            return None
    return t


def random_instance(
    seed: int,
    orientation: str = SINK,
    max_depth: int = 3,
    max_children: int = 3,
    q_size: int = 2,
    rel_density: float = 0.5,
    max_vertices: int = 12,
    end_dim_cap: Optional[int] = 12,
    codomain: Optional[BoundQuiver] = None,
    budget: int = 400,
) -> TreeOverQ:
    """Deterministic pseudorandom valid labelled tree.

    Rejection-samples until the labelled tree validates, the bound quiver is
    locally bound, and the endomorphism space is small enough for the
    exhaustive idempotent scan to stay useful.  The same seed always yields
    the same instance, and the tree shape of each attempt is drawn before
    any orientation-dependent choice, so the two orientations explore
    mirrored shapes.
    """
    for attempt in range(budget):
        t = _sample_attempt(
            seed,
            attempt,
            orientation,
            max_depth,
            max_children,
            q_size,
            rel_density,
            max_vertices,
            end_dim_cap,
            codomain,
        )
        if t is not None:
            return t
    raise GenerationExhausted(f"no valid instance for seed {seed} in {budget} attempts")


__all__ = [
    "GenerationExhausted",
    "HomBasis",
    "IdempotentSearch",
    "end_dimensions",
    "has_nontrivial_idempotent",
    "hom_space",
    "identity_hom",
    "nullspace",
    "random_instance",
    "rref",
    "verify_iso",
]
