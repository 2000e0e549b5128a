"""Indecomposability decisions and decomposition of tree modules.

The central criterion: the module of a labelled rooted tree is decomposable
exactly when the tree admits a non-identity idempotent label-compatible
endomorphism, and such an endomorphism exists exactly when two distinct
same-labelled siblings admit a label-compatible morphism from one branch
into the other.  The sibling search is a memoized pairwise dynamic program,
so the whole decision is polynomial; the exhaustive idempotent scan of the
oracle module provides the independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .trees import (
    SINK,
    BranchMorphism,
    ModuleHom,
    ModuleRep,
    RootedTree,
    TreeOverQ,
    direct_sum,
    push_down,
)
from . import oracle


class IdempotentEndo:
    """An idempotent label-compatible endomorphism, given by its vertex map.

    The arrow map is determined: the child arrow of n goes to the child
    arrow of the image of n.
    """

    def __init__(self, t: TreeOverQ, vertex_map: dict[int, int]):
        self.t = t
        self.vertex_map = dict(vertex_map)
        tree = t.tree
        if set(self.vertex_map) != set(tree.vertices):
            raise ValueError("vertex map must be total")
        if self.vertex_map[tree.root] != tree.root:
            raise ValueError("the root must be fixed")
        for n in tree.vertices:
            img = self.vertex_map[n]
            if n == tree.root:
                continue
            if self.vertex_map[tree.parent[n]] != tree.parent[img]:
                raise ValueError(f"parents do not commute at {n}")
            if t.vertex_label[n] != t.vertex_label[img] or t.child_label(n) != t.child_label(img):
                raise ValueError(f"labels not preserved at {n}")
        for n in tree.vertices:
            if self.vertex_map[self.vertex_map[n]] != self.vertex_map[n]:
                raise ValueError(f"not idempotent at {n}")

    def is_identity(self) -> bool:
        return all(v == n for n, v in self.vertex_map.items())

    def fixed_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(n for n, v in self.vertex_map.items() if v == n))

    def image_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.vertex_map.values())))

    def arrow_map(self) -> dict[str, str]:
        tree = self.t.tree
        return {
            tree.child_arrow[n]: tree.child_arrow[self.vertex_map[n]]
            for n in tree.vertices
            if n != tree.root
        }


def embeds(t: TreeOverQ, x: int, y: int, _memo: Optional[dict] = None) -> Optional[BranchMorphism]:
    """Label-compatible morphism from the branch of x into the branch of y.

    One exists iff x and y carry the same vertex label and every child of x
    has some child of y with the same arrow label whose branch accepts the
    child's branch.  Memoized over vertex pairs; ties resolved to the least
    admissible target child, so witnesses are deterministic.
    """
    memo = {} if _memo is None else _memo

    def solve(a: int, b: int) -> Optional[dict[int, int]]:
        if (a, b) in memo:
            return memo[(a, b)]
        if t.vertex_label[a] != t.vertex_label[b]:
            memo[(a, b)] = None
            return None
        mapping = {a: b}
        for c in t.tree.children(a):
            hit = None
            for d in t.tree.children(b):
                if t.child_label(d) == t.child_label(c):
                    sub = solve(c, d)
                    if sub is not None:
                        hit = sub
                        break
            if hit is None:
                memo[(a, b)] = None
                return None
            mapping.update(hit)
        memo[(a, b)] = mapping
        return mapping

    mapping = solve(x, y)
    if mapping is None:
        return None
    tree = t.tree
    arrow_map = {
        tree.child_arrow[c]: tree.child_arrow[mapping[c]]
        for c in mapping
        if c != x
    }
    return BranchMorphism(x, y, mapping, arrow_map)


def _sibling_certificates(t: TreeOverQ):
    """Ordered same-labelled sibling pairs in breadth-first order."""
    tree = t.tree
    queue = [tree.root]
    memo: dict = {}
    while queue:
        parent = queue.pop(0)
        kids = tree.children(parent)
        for n1 in kids:
            for n2 in kids:
                if n1 == n2 or t.child_label(n1) != t.child_label(n2):
                    continue
                witness = embeds(t, n1, n2, memo)
                if witness is not None:
                    yield parent, n1, n2, witness
        queue.extend(kids)


def first_certificate(t: TreeOverQ) -> Optional[tuple[int, int, int, BranchMorphism]]:
    """First (parent, n1, n2, witness) sibling certificate in breadth-first order."""
    for cert in _sibling_certificates(t):
        return cert
    return None


def find_nonidentity_idempotent(t: TreeOverQ) -> Optional[IdempotentEndo]:
    """First non-identity idempotent endomorphism, or None.

    Built from the first same-labelled sibling pair whose branches embed:
    the branch of the first sibling maps by the embedding witness and
    everything else is fixed.
    """
    cert = first_certificate(t)
    if cert is None:
        return None
    _, _, _, witness = cert
    vertex_map = {n: n for n in t.tree.vertices}
    vertex_map.update(witness.vertex_map)
    return IdempotentEndo(t, vertex_map)


def is_indecomposable(t: TreeOverQ) -> bool:
    """Theorem-level decision through the sibling-embedding criterion."""
    if len(t.tree.vertices) == 1:
        return True
    return find_nonidentity_idempotent(t) is None


def module_idempotent(t: TreeOverQ, endo: IdempotentEndo, prime: int = 3) -> ModuleHom:
    """The induced idempotent endomorphism of the materialized module.

    Sink orientation sends v_n to the vector of the image vertex; source
    orientation sends v_n to the sum over the fiber of n.
    """
    if endo.t is not t:
        IdempotentEndo(t, endo.vertex_map)  # revalidate against this tree
    rep = push_down(t, prime)
    blocks = {q: np.zeros((rep.dim(q), rep.dim(q)), dtype=np.int64) for q in rep.basis}
    for n in t.tree.vertices:
        q = t.vertex_label[n]
        if t.orientation == SINK:
            blocks[q][rep.basis_index(q, endo.vertex_map[n]), rep.basis_index(q, n)] = 1
        else:
            blocks[q][rep.basis_index(q, n), rep.basis_index(q, endo.vertex_map[n])] += 1
    return ModuleHom(rep, rep, blocks)


def _restrict(t: TreeOverQ, vertices: tuple[int, ...]) -> TreeOverQ:
    vset = set(vertices)
    arrows = [
        (a, t.tree.arrow_source[a], t.tree.arrow_target[a])
        for a in t.tree.arrows
        if t.tree.arrow_source[a] in vset and t.tree.arrow_target[a] in vset
    ]
    sub = RootedTree(vertices, arrows, t.orientation)
    return TreeOverQ(
        sub,
        t.codomain,
        {v: t.vertex_label[v] for v in vertices},
        {name: t.arrow_label[name] for name, _, _ in arrows},
    )


def _complement_components(t: TreeOverQ, kept: set[int]) -> list[tuple[int, ...]]:
    """Connected components of the dropped vertices, ordered by least vertex."""
    rest = [v for v in t.tree.vertices if v not in kept]
    rest_set = set(rest)
    seen: set[int] = set()
    components = []
    for v in rest:
        if v in seen:
            continue
        comp = set()
        stack = [v]
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            neighbors = list(t.tree.children(u))
            if u != t.tree.root:
                neighbors.append(t.tree.parent[u])
            stack.extend(w for w in neighbors if w in rest_set and w not in comp)
        seen |= comp
        components.append(tuple(sorted(comp)))
    return sorted(components)


@dataclass
class Decomposition:
    """Summands plus the explicit isomorphism from their direct sum."""

    summands: list[TreeOverQ]
    witness: ModuleHom
    module: ModuleRep
    sum_rep: ModuleRep


def split(t: TreeOverQ, endo: IdempotentEndo, prime: int = 3) -> Decomposition:
    """Split the module along a non-identity idempotent endomorphism.

    The fixed subtree (equal to the image subtree) carries the first
    summand; each connected component of the complement carries one more.
    The witness matrix realizes the isomorphism explicitly: fixed basis
    vectors map by inclusion (sink) or by the induced idempotent (source),
    complement vectors by v_n - v_(image of n) (sink) or inclusion (source).
    Invertibility and intertwining are verified before returning.
    """
    if endo.is_identity():
        raise ValueError("cannot split along the identity")
    fixed = endo.fixed_vertices()
    assert fixed == endo.image_vertices()
    parts = [fixed] + _complement_components(t, set(fixed))
    summands = [_restrict(t, part) for part in parts]
    rep = push_down(t, prime)
    summand_reps = [push_down(s, prime) for s in summands]
    sum_rep = direct_sum(summand_reps)
    blocks = {q: np.zeros((rep.dim(q), sum_rep.dim(q)), dtype=np.int64) for q in rep.basis}
    for q in rep.basis:
        for col, n in enumerate(sum_rep.basis[q]):
            if t.orientation == SINK:
                if n in set(fixed):
                    blocks[q][rep.basis_index(q, n), col] = 1
                else:
                    blocks[q][rep.basis_index(q, n), col] += 1
                    blocks[q][rep.basis_index(q, endo.vertex_map[n]), col] -= 1
            else:
                if n in set(fixed):
                    for m, img in endo.vertex_map.items():
                        if img == n:
                            blocks[q][rep.basis_index(q, m), col] += 1
                else:
                    blocks[q][rep.basis_index(q, n), col] = 1
    witness = ModuleHom(sum_rep, rep, {q: b % prime for q, b in blocks.items()})
    if not oracle.verify_iso(witness):
        raise AssertionError("split witness failed verification")
    return Decomposition(summands, witness, rep, sum_rep)


def decompose_fully(t: TreeOverQ, prime: int = 3) -> list[TreeOverQ]:
    """Iterate the split until every piece is indecomposable."""
    endo = find_nonidentity_idempotent(t)
    if endo is None:
        return [t]
    pieces = []
    for summand in split(t, endo, prime).summands:
        pieces.extend(decompose_fully(summand, prime))
    return pieces


@dataclass
class Cor2Report:
    """Root-level decomposability certificate for recursive construction."""

    indecomposable: bool
    pair: Optional[tuple[int, int]] = None
    witness: Optional[BranchMorphism] = None


def cor2_report(t: TreeOverQ) -> Cor2Report:
    """Decide decomposability at the root, given indecomposable branches.

    Every branch at a root child must itself be indecomposable; this is
    checked and violations raise.  The module is then decomposable iff two
    distinct root children share their arrow label and one branch embeds
    into the other.
    """
    from .trees import branch as take_branch

    kids = t.tree.children(t.tree.root)
    for k in kids:
        if not is_indecomposable(take_branch(t, k)):
            raise ValueError(f"branch at root child {k} is decomposable")
    memo: dict = {}
    for n1 in kids:
        for n2 in kids:
            if n1 == n2 or t.child_label(n1) != t.child_label(n2):
                continue
            witness = embeds(t, n1, n2, memo)
            if witness is not None:
                return Cor2Report(False, (n1, n2), witness)
    return Cor2Report(True)
