"""Rooted trees over a bound quiver and the modules they present.

A rooted tree is a finite tree-shaped quiver with a unique sink (orientation
"sink") or unique source (orientation "source"), the root.  A labelling of
its vertices and arrows by a bound quiver, compatible with sources and
targets and avoiding the relation ideal, presents a module over the
zero-relation algebra: one basis vector per tree vertex, with each quiver
arrow acting by the sum of the tree arrows lying over it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .algebra import BoundQuiver, StructureError

SINK = "sink"
SOURCE = "source"


class RootedTree:
    """Tree quiver with labelled integer vertices and a unique sink or source.

    Exposes the root, the parent map, per-vertex child arrows (the unique
    arrow joining a non-root vertex to its parent) and the height function.
    """

    def __init__(
        self,
        vertices: Iterable[int],
        arrows: Iterable[tuple[str, int, int]],
        orientation: str,
    ):
        if orientation not in (SINK, SOURCE):
            raise ValueError(f"orientation must be {SINK!r} or {SOURCE!r}")
        self.orientation = orientation
        self.vertices = tuple(sorted(vertices))
        if len(set(self.vertices)) != len(self.vertices):
            raise StructureError("duplicate tree vertex labels")
        if not self.vertices:
            raise StructureError("empty tree")
        if not all(isinstance(v, int) for v in self.vertices):
            raise StructureError("tree vertices must be integer labels")
        vertex_set = set(self.vertices)

        self.arrow_source: dict[str, int] = {}
        self.arrow_target: dict[str, int] = {}
        for name, src, tgt in arrows:
            if name in self.arrow_source:
                raise StructureError(f"duplicate tree arrow {name!r}")
            if src not in vertex_set or tgt not in vertex_set:
                raise StructureError(f"tree arrow {name!r} has undeclared endpoint")
            if src == tgt:
                raise StructureError(f"tree arrow {name!r} is a loop")
            self.arrow_source[name] = src
            self.arrow_target[name] = tgt
        self.arrows = tuple(self.arrow_source)
        if len(self.arrows) != len(self.vertices) - 1:
            raise StructureError("a tree on n vertices needs exactly n-1 arrows")

        adjacency: dict[int, set[int]] = {v: set() for v in self.vertices}
        for a in self.arrows:
            adjacency[self.arrow_source[a]].add(self.arrow_target[a])
            adjacency[self.arrow_target[a]].add(self.arrow_source[a])
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != vertex_set:
            raise StructureError("underlying graph is not connected")

        # With n-1 arrows and a connected underlying graph this is a tree, so
        # a unique sink (resp. source) forces every other vertex to carry
        # exactly one outgoing (resp. incoming) arrow: its child arrow.
        toward_parent = self.arrow_source if orientation == SINK else self.arrow_target
        counts: dict[int, int] = {v: 0 for v in self.vertices}
        for a in self.arrows:
            counts[toward_parent[a]] += 1
        roots = [v for v, c in counts.items() if c == 0]
        if len(roots) != 1:
            kind = "sink" if orientation == SINK else "source"
            raise StructureError(f"tree has {len(roots)} candidate {kind} roots, needs exactly 1")
        self.root = roots[0]
        if any(counts[v] != 1 for v in self.vertices if v != self.root):
            raise StructureError("some non-root vertex has more than one child arrow")

        self.child_arrow: dict[int, str] = {}
        self.parent: dict[int, int] = {}
        for a in self.arrows:
            if orientation == SINK:
                child, par = self.arrow_source[a], self.arrow_target[a]
            else:
                child, par = self.arrow_target[a], self.arrow_source[a]
            self.child_arrow[child] = a
            self.parent[child] = par

        self._children: dict[int, tuple[int, ...]] = {v: () for v in self.vertices}
        for child in sorted(self.parent):
            par = self.parent[child]
            self._children[par] = self._children[par] + (child,)

        self.height: dict[int, int] = {self.root: 0}
        queue = [self.root]
        while queue:
            v = queue.pop(0)
            for c in self._children[v]:
                self.height[c] = self.height[v] + 1
                queue.append(c)
        if len(self.height) != len(self.vertices):
            raise StructureError("parent structure does not reach the root everywhere")
        self.tree_height = max(self.height.values())

    def children(self, vertex: int) -> tuple[int, ...]:
        return self._children[vertex]

    def branch_vertices(self, vertex: int) -> tuple[int, ...]:
        """Vertices of the branch of `vertex` (itself and all descendants)."""
        out = [vertex]
        stack = [vertex]
        while stack:
            v = stack.pop()
            for c in self._children[v]:
                out.append(c)
                stack.append(c)
        return tuple(sorted(out))

    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if not self._children[v])


@dataclass(frozen=True)
class TreeValidationReport:
    ok: bool
    message: str = ""
    witness: tuple = ()


class TreeOverQ:
    """A rooted tree together with a labelling into a bound quiver.

    `vertex_label[n]` is the quiver vertex under tree vertex n and
    `arrow_label[a]` the quiver arrow under tree arrow a.  Structural
    totality is enforced here; the geometric conditions (commuting squares
    and avoidance of the relation ideal) are checked by
    :func:`validate_tree_over_q`, which reports rather than raises.
    """

    def __init__(
        self,
        tree: RootedTree,
        codomain: BoundQuiver,
        vertex_label: dict[int, str],
        arrow_label: dict[str, str],
    ):
        self.tree = tree
        self.codomain = codomain
        self.vertex_label = dict(vertex_label)
        self.arrow_label = dict(arrow_label)
        for v in tree.vertices:
            if v not in self.vertex_label:
                raise StructureError(f"tree vertex {v} has no quiver-vertex label")
            if self.vertex_label[v] not in codomain.quiver.vertex_set:
                raise StructureError(f"label of vertex {v} is not a quiver vertex")
        for a in tree.arrows:
            if a not in self.arrow_label:
                raise StructureError(f"tree arrow {a!r} has no quiver-arrow label")
            if self.arrow_label[a] not in codomain.quiver.arrow_source:
                raise StructureError(f"label of arrow {a!r} is not a quiver arrow")

    @property
    def orientation(self) -> str:
        return self.tree.orientation

    def child_label(self, vertex: int) -> str:
        """Quiver arrow under the child arrow of a non-root vertex."""
        return self.arrow_label[self.tree.child_arrow[vertex]]

    def image_word(self, tree_vertices: list[int]) -> tuple[str, ...]:
        """Image of the directed tree path visiting the given vertices.

        The vertex list follows arrow direction: consecutive entries joined
        by a tree arrow from the earlier to the later.
        """
        word = []
        for a, b in zip(tree_vertices, tree_vertices[1:]):
            if self.tree.orientation == SINK:
                assert self.tree.parent[a] == b
                word.append(self.arrow_label[self.tree.child_arrow[a]])
            else:
                assert self.tree.parent[b] == a
                word.append(self.arrow_label[self.tree.child_arrow[b]])
        return tuple(word)


def validate_tree_over_q(t: TreeOverQ) -> TreeValidationReport:
    """Check commuting squares and the bound condition, with a witness.

    The bound condition slides a window of the maximal relation length along
    the image of each root-to-leaf path; every tree path is contained in one
    of these, so checking their images suffices.
    """
    tree, q = t.tree, t.codomain.quiver
    for a in tree.arrows:
        lab = t.arrow_label[a]
        if q.source(lab) != t.vertex_label[tree.arrow_source[a]] or q.target(lab) != t.vertex_label[tree.arrow_target[a]]:
            return TreeValidationReport(
                False,
                f"labels do not commute at tree arrow {a!r}",
                (a, lab),
            )
    for leaf in tree.leaves():
        chain = [leaf]
        while chain[-1] != tree.root:
            chain.append(tree.parent[chain[-1]])
        if tree.orientation == SINK:
            directed = chain  # leaf -> root follows the arrows
        else:
            directed = list(reversed(chain))  # root -> leaf follows the arrows
        word = t.image_word(directed)
        for rel in t.codomain.relations:
            k = len(rel)
            for i in range(len(word) - k + 1):
                if word[i : i + k] == rel:
                    vertices = tuple(directed[i : i + k + 1])
                    return TreeValidationReport(
                        False,
                        "image of a tree path lies in the relation ideal",
                        (vertices, rel),
                    )
    return TreeValidationReport(True)


def branch(t: TreeOverQ, vertex: int) -> TreeOverQ:
    """The branch of `vertex` with the restricted labelling, rooted at `vertex`."""
    if vertex not in t.tree.height:
        raise StructureError(f"unknown tree vertex {vertex}")
    verts = t.tree.branch_vertices(vertex)
    vert_set = set(verts)
    arrows = [
        (a, t.tree.arrow_source[a], t.tree.arrow_target[a])
        for a in t.tree.arrows
        if t.tree.arrow_source[a] in vert_set and t.tree.arrow_target[a] in vert_set
    ]
    sub = RootedTree(verts, arrows, t.tree.orientation)
    return TreeOverQ(
        sub,
        t.codomain,
        {v: t.vertex_label[v] for v in verts},
        {name: t.arrow_label[name] for name, _, _ in arrows},
    )


def is_tree_module(t: TreeOverQ) -> bool:
    """No two tree arrows sharing a source or a target have the same label."""
    by_source: dict[int, set[str]] = {}
    by_target: dict[int, set[str]] = {}
    for a in t.tree.arrows:
        lab = t.arrow_label[a]
        src, tgt = t.tree.arrow_source[a], t.tree.arrow_target[a]
        if lab in by_source.setdefault(src, set()) or lab in by_target.setdefault(tgt, set()):
            return False
        by_source[src].add(lab)
        by_target[tgt].add(lab)
    return True


def is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class ModuleRep:
    """A module over the zero-relation algebra, as matrices over GF(p).

    One ordered basis of tree vertices per quiver vertex and one matrix per
    quiver arrow, mapping the basis at its source to the basis at its target
    (columns indexed by the source basis).
    """

    def __init__(
        self,
        prime: int,
        codomain: BoundQuiver,
        basis: dict[str, tuple[int, ...]],
        matrices: dict[str, np.ndarray],
    ):
        self.prime = prime
        self.codomain = codomain
        self.basis = {q: tuple(basis.get(q, ())) for q in codomain.quiver.vertices}
        self.matrices = {}
        for a in codomain.quiver.arrows:
            if a not in matrices:
                raise ValueError(f"missing matrix for arrow {a!r}")
            mat = np.asarray(matrices[a], dtype=np.int64) % prime
            want = (len(self.basis[codomain.quiver.target(a)]), len(self.basis[codomain.quiver.source(a)]))
            if mat.shape != want:
                raise ValueError(f"matrix for arrow {a!r} has shape {mat.shape}, expected {want}")
            self.matrices[a] = mat
        self._index = {
            q: {n: i for i, n in enumerate(vs)} for q, vs in self.basis.items()
        }

    def dim(self, qvertex: str) -> int:
        return len(self.basis[qvertex])

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis.values())

    def dimension_vector(self) -> dict[str, int]:
        return {q: len(v) for q, v in self.basis.items()}

    def basis_index(self, qvertex: str, tree_vertex: int) -> int:
        return self._index[qvertex][tree_vertex]

    def relation_product(self, relation: tuple[str, ...]) -> np.ndarray:
        """Composite matrix along a relation word (first-traversed arrow acts first)."""
        q = self.codomain.quiver
        mat = self.matrices[relation[0]]
        for a in relation[1:]:
            mat = (self.matrices[a] @ mat) % self.prime
        return mat

    def relations_vanish(self) -> bool:
        return all(not self.relation_product(r).any() for r in self.codomain.relations)


def push_down(t: TreeOverQ, prime: int = 3) -> ModuleRep:
    """Materialize the module presented by the labelled tree over GF(prime).

    Sink orientation: each quiver arrow sends the basis vector of a non-root
    tree vertex with matching child label to its parent's vector.  Source
    orientation: it sends a vertex's vector to the sum of its children with
    matching child label.  Basis order is ascending vertex label.
    """
    if not is_odd_prime(prime):
        raise ValueError(f"need an odd prime, got {prime}")
    report = validate_tree_over_q(t)
    if not report.ok:
        raise ValueError(f"invalid labelled tree: {report.message}")
    q = t.codomain.quiver
    basis: dict[str, tuple[int, ...]] = {qv: () for qv in q.vertices}
    for n in t.tree.vertices:  # already ascending
        qv = t.vertex_label[n]
        basis[qv] = basis[qv] + (n,)
    index = {qv: {n: i for i, n in enumerate(vs)} for qv, vs in basis.items()}
    matrices: dict[str, np.ndarray] = {}
    for a in q.arrows:
        src, tgt = q.source(a), q.target(a)
        mat = np.zeros((len(basis[tgt]), len(basis[src])), dtype=np.int64)
        if t.tree.orientation == SINK:
            for n in basis[src]:
                if n != t.tree.root and t.child_label(n) == a:
                    mat[index[tgt][t.tree.parent[n]], index[src][n]] = 1
        else:
            for n in basis[src]:
                for m in t.tree.children(n):
                    if t.child_label(m) == a:
                        mat[index[tgt][m], index[src][n]] = 1
        matrices[a] = mat
    return ModuleRep(prime, t.codomain, basis, matrices)


def direct_sum(reps: list[ModuleRep]) -> ModuleRep:
    """Block-diagonal sum; summand bases must use disjoint tree-vertex labels."""
    if not reps:
        raise ValueError("empty direct sum")
    prime, codomain = reps[0].prime, reps[0].codomain
    if any(r.prime != prime or r.codomain != codomain for r in reps):
        raise ValueError("summands must share prime and codomain")
    q = codomain.quiver
    basis: dict[str, tuple[int, ...]] = {qv: () for qv in q.vertices}
    for r in reps:
        for qv in q.vertices:
            basis[qv] = basis[qv] + r.basis[qv]
    for qv in q.vertices:
        if len(set(basis[qv])) != len(basis[qv]):
            raise ValueError("summand bases overlap")
    matrices = {}
    for a in q.arrows:
        src, tgt = q.source(a), q.target(a)
        mat = np.zeros((len(basis[tgt]), len(basis[src])), dtype=np.int64)
        row = col = 0
        for r in reps:
            block = r.matrices[a]
            mat[row : row + block.shape[0], col : col + block.shape[1]] = block
            row += block.shape[0]
            col += block.shape[1]
        matrices[a] = mat
    return ModuleRep(prime, codomain, basis, matrices)


class ModuleHom:
    """A per-quiver-vertex family of matrices from one module to another."""

    def __init__(self, domain: ModuleRep, codomain: ModuleRep, blocks: dict[str, np.ndarray]):
        if domain.prime != codomain.prime:
            raise ValueError("domain and codomain use different primes")
        if domain.codomain != codomain.codomain:
            raise ValueError("domain and codomain live over different bound quivers")
        self.domain = domain
        self.codomain = codomain
        self.prime = domain.prime
        self.blocks = {}
        for qv in domain.codomain.quiver.vertices:
            blk = np.asarray(blocks.get(qv, np.zeros((codomain.dim(qv), domain.dim(qv)))), dtype=np.int64) % self.prime
            want = (codomain.dim(qv), domain.dim(qv))
            if blk.shape != want:
                raise ValueError(f"block at {qv!r} has shape {blk.shape}, expected {want}")
            self.blocks[qv] = blk

    def intertwines(self) -> bool:
        """Whether the blocks commute with every quiver-arrow action."""
        q = self.domain.codomain.quiver
        p = self.prime
        for a in q.arrows:
            src, tgt = q.source(a), q.target(a)
            lhs = (self.blocks[tgt] @ self.domain.matrices[a]) % p
            rhs = (self.codomain.matrices[a] @ self.blocks[src]) % p
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_zero(self) -> bool:
        return all(not blk.any() for blk in self.blocks.values())

    def is_identity(self) -> bool:
        return all(
            blk.shape[0] == blk.shape[1] and np.array_equal(blk, np.eye(blk.shape[0], dtype=np.int64))
            for blk in self.blocks.values()
        )

    def negate(self) -> "ModuleHom":
        return ModuleHom(self.domain, self.codomain, {q: (-b) % self.prime for q, b in self.blocks.items()})

    def add(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(
            self.domain, self.codomain, {q: (b + other.blocks[q]) % self.prime for q, b in self.blocks.items()}
        )

    def compose(self, first: "ModuleHom") -> "ModuleHom":
        """self after first."""
        return ModuleHom(
            first.domain,
            self.codomain,
            {q: (self.blocks[q] @ first.blocks[q]) % self.prime for q in self.blocks},
        )

    def equal(self, other: "ModuleHom") -> bool:
        return all(np.array_equal(self.blocks[q], other.blocks[q]) for q in self.blocks)

    def flatten(self) -> np.ndarray:
        """Row vector of all block entries, quiver vertices in sorted order."""
        parts = [self.blocks[q].ravel() for q in sorted(self.blocks)]
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts)


def identity_hom(rep: ModuleRep) -> ModuleHom:
    return ModuleHom(
        rep, rep, {q: np.eye(rep.dim(q), dtype=np.int64) for q in rep.basis}
    )


@dataclass
class BranchMorphism:
    """A label-compatible quiver morphism between branches of two trees."""

    domain_root: int
    codomain_root: int
    vertex_map: dict[int, int] = field(default_factory=dict)
    arrow_map: dict[str, str] = field(default_factory=dict)

    def check(self, t_dom: TreeOverQ, t_cod: TreeOverQ) -> bool:
        """Roots map to roots, parents commute, labels are preserved."""
        if self.vertex_map.get(self.domain_root) != self.codomain_root:
            return False
        dom = t_dom.tree
        for n, img in self.vertex_map.items():
            if t_dom.vertex_label[n] != t_cod.vertex_label[img]:
                return False
            if n == self.domain_root:
                continue
            par = dom.parent[n]
            if self.vertex_map.get(par) != t_cod.tree.parent.get(img):
                return False
            if t_dom.child_label(n) != t_cod.child_label(img):
                return False
        return set(self.vertex_map) == set(dom.branch_vertices(self.domain_root))
