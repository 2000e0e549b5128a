"""Generalized graph maps and the Hom-spaces they span.

A generalized graph map is a non-empty subnetwork of the signed double
cover that is complete, connected, unblocked (no two of its links pass
through a triangle) and contains no vertex together with its sign flip.
Each one induces a homomorphism between the two tree modules: the basis
vector of a domain tree vertex is sent to the signed sum of its partners.
For rooted-tree pairs these maps span the whole Hom-space.

Enumeration works by obligation closure.  Inside a hypothetical graph map,
every completeness obligation has a unique witness (a second witness would
create a blocked triangle), so each graph map is the closure of any one of
its vertices; a depth-first search that branches over every admissible
witness is therefore exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .network import Edge, NetArrow, PullbackNetwork, TwoCover, _edge, two_cover
from .oracle import rref
from .trees import SINK, BranchMorphism, ModuleHom, ModuleRep, TreeOverQ, push_down


class Subnetwork:
    """A sign-respecting selection of double-cover vertices, arrows and edges."""

    def __init__(self, cover: TwoCover, vertices: Iterable, arrows: Iterable[NetArrow] = (), edges: Iterable[Edge] = ()):
        self.cover = cover
        self.vertices = frozenset(vertices)
        self.arrows = frozenset(arrows)
        self.edges = frozenset(edges)
        if not self.vertices <= cover.vertex_set:
            raise ValueError("subnetwork vertex outside the cover")
        if not self.arrows <= set(cover.arrows) or not self.edges <= set(cover.edges):
            raise ValueError("subnetwork link outside the cover")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise ValueError(f"arrow {a} not supported by subnetwork vertices")
        for e in self.edges:
            if e[0] not in self.vertices or e[1] not in self.vertices:
                raise ValueError(f"edge {e} not supported by subnetwork vertices")

    def signed_pairs(self) -> dict:
        return {(n, m): s for (n, m, s) in self.vertices}

    def is_involution_free(self) -> bool:
        pairs = [v[:2] for v in self.vertices]
        return len(set(pairs)) == len(pairs)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adjacency: dict = {v: [] for v in self.vertices}
        for a in self.arrows:
            adjacency[a.source].append(a.target)
            adjacency[a.target].append(a.source)
        for e in self.edges:
            adjacency[e[0]].append(e[1])
            adjacency[e[1]].append(e[0])
        seen = set()
        stack = [next(iter(self.vertices))]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adjacency[v])
        return seen == set(self.vertices)

    def is_r_free(self) -> bool:
        """No two incident links of the subnetwork project through a triangle."""
        links_at: dict = {v: [] for v in self.vertices}
        for a in self.arrows:
            links_at[a.source].append(("a", a))
            links_at[a.target].append(("a", a))
        for e in self.edges:
            links_at[e[0]].append(("e", e))
            links_at[e[1]].append(("e", e))
        triangle_set = self.cover.triangle_set
        for v, links in links_at.items():
            for i in range(len(links)):
                for j in range(i + 1, len(links)):
                    ends = []
                    for _, link in (links[i], links[j]):
                        if isinstance(link, NetArrow):
                            ends.append(link.target if link.source == v else link.source)
                        else:
                            ends.append(link[1] if link[0] == v else link[0])
                    triple = frozenset(
                        (self.cover.project(ends[0]), self.cover.project(v), self.cover.project(ends[1]))
                    )
                    if triple in triangle_set:
                        return False
        return True

    def negate(self) -> "Subnetwork":
        def flip_v(v):
            return (v[0], v[1], -v[2])

        return Subnetwork(
            self.cover,
            (flip_v(v) for v in self.vertices),
            (NetArrow(flip_v(a.source), flip_v(a.target), a.label[:2] + (-a.label[2],)) for a in self.arrows),
            (_edge(flip_v(e[0]), flip_v(e[1])) for e in self.edges),
        )

    def sort_key(self) -> tuple:
        return (len(self.vertices), tuple(sorted(self.vertices)))


@dataclass(frozen=True)
class CompletenessReport:
    ok: bool
    vertex: tuple = ()
    reason: str = ""


def _sink_obligations(cover: TwoCover, vertex) -> list[tuple]:
    """Sink case: one obligation per domain child arrow, one for the codomain parent."""
    t1, t2 = cover.base.t1, cover.base.t2
    n, m, _ = vertex
    obligations = [("domain-child", c) for c in t1.tree.children(n)]
    if m != t2.tree.root:
        obligations.append(("codomain-parent",))
    return obligations


def _source_obligations(cover: TwoCover, vertex) -> list[tuple]:
    """Source case: one obligation per codomain child arrow, one for the domain parent."""
    t1, t2 = cover.base.t1, cover.base.t2
    n, m, _ = vertex
    obligations = [("codomain-child", c) for c in t2.tree.children(m)]
    if n != t1.tree.root:
        obligations.append(("domain-parent",))
    return obligations


def _obligations(cover: TwoCover, vertex) -> list[tuple]:
    if cover.orientation == SINK:
        return _sink_obligations(cover, vertex)
    return _source_obligations(cover, vertex)


def _resolutions(cover: TwoCover, vertex, obligation) -> list[tuple]:
    """Admissible witnesses: each is (new vertex, link kind, link)."""
    t1, t2 = cover.base.t1, cover.base.t2
    n, m, s = vertex
    out = []
    if obligation[0] == "domain-child":
        c = obligation[1]
        for d in t2.tree.children(m):
            if t2.child_label(d) == t1.child_label(c):
                w = (c, d, s)
                out.append((w, "arrow", NetArrow(w, vertex, (t1.tree.child_arrow[c], t2.tree.child_arrow[d], s))))
    elif obligation[0] == "codomain-child":
        d = obligation[1]
        for c in t1.tree.children(n):
            if t1.child_label(c) == t2.child_label(d):
                w = (c, d, s)
                out.append((w, "arrow", NetArrow(vertex, w, (t1.tree.child_arrow[c], t2.tree.child_arrow[d], s))))
    elif obligation[0] == "codomain-parent":
        if n != t1.tree.root and t1.child_label(n) == t2.child_label(m):
            w = (t1.tree.parent[n], t2.tree.parent[m], s)
            out.append((w, "arrow", NetArrow(vertex, w, (t1.tree.child_arrow[n], t2.tree.child_arrow[m], s))))
        for m2 in t2.tree.children(t2.tree.parent[m]):
            if m2 != m and t2.child_label(m2) == t2.child_label(m) and (n, m2) in cover.base.vertex_set:
                w = (n, m2, -s)
                out.append((w, "edge", _edge(vertex, w)))
    elif obligation[0] == "domain-parent":
        if m != t2.tree.root and t1.child_label(n) == t2.child_label(m):
            w = (t1.tree.parent[n], t2.tree.parent[m], s)
            out.append((w, "arrow", NetArrow(w, vertex, (t1.tree.child_arrow[n], t2.tree.child_arrow[m], s))))
        for n2 in t1.tree.children(t1.tree.parent[n]):
            if n2 != n and t1.child_label(n2) == t1.child_label(n) and (n2, m) in cover.base.vertex_set:
                w = (n2, m, -s)
                out.append((w, "edge", _edge(vertex, w)))
    return out


def _is_satisfied(state: "_State", vertex, obligation) -> bool:
    if obligation[0] == "domain-child":
        return any(a.target == vertex and a.label[0] == state.t1.tree.child_arrow[obligation[1]] for a in state.arrows)
    if obligation[0] == "codomain-child":
        return any(a.source == vertex and a.label[1] == state.t2.tree.child_arrow[obligation[1]] for a in state.arrows)
    if obligation[0] == "codomain-parent":
        return any(a.source == vertex for a in state.arrows) or any(vertex in e for e in state.edges)
    if obligation[0] == "domain-parent":
        return any(a.target == vertex for a in state.arrows) or any(vertex in e for e in state.edges)
    raise AssertionError(obligation)


class _State:
    """Growing closure: signed vertices, links, and vertices left to process."""

    def __init__(self, cover: TwoCover):
        self.cover = cover
        self.t1 = cover.base.t1
        self.t2 = cover.base.t2
        self.signs: dict = {}
        self.arrows: set = set()
        self.edges: set = set()
        self.pending: list = []

    def copy(self) -> "_State":
        st = _State.__new__(_State)
        st.cover = self.cover
        st.t1, st.t2 = self.t1, self.t2
        st.signs = dict(self.signs)
        st.arrows = set(self.arrows)
        st.edges = set(self.edges)
        st.pending = list(self.pending)
        return st

    def add_vertex(self, vertex) -> bool:
        n, m, s = vertex
        have = self.signs.get((n, m))
        if have is None:
            self.signs[(n, m)] = s
            self.pending.append(vertex)
            return True
        return have == s  # sign clash means an involution violation

    def _links_at(self, vertex) -> list:
        out = []
        for a in self.arrows:
            if a.source == vertex:
                out.append((a, a.target))
            elif a.target == vertex:
                out.append((a, a.source))
        for e in self.edges:
            if e[0] == vertex:
                out.append((e, e[1]))
            elif e[1] == vertex:
                out.append((e, e[0]))
        return out

    def add_link(self, kind: str, link) -> bool:
        """Insert a link, refusing if some incident pair projects to a triangle."""
        if kind == "arrow":
            if link in self.arrows:
                return True
            endpoints = (link.source, link.target)
        else:
            if link in self.edges:
                return True
            endpoints = link
        triangle_set = self.cover.triangle_set
        project = self.cover.project
        for shared, far in ((endpoints[0], endpoints[1]), (endpoints[1], endpoints[0])):
            for other, other_far in self._links_at(shared):
                if other == link:
                    continue
                triple = frozenset((project(other_far), project(shared), project(far)))
                if triple in triangle_set:
                    return False
        if kind == "arrow":
            self.arrows.add(link)
        else:
            self.edges.add(link)
        return True

    def to_subnetwork(self) -> Subnetwork:
        vertices = [(n, m, s) for (n, m), s in self.signs.items()]
        return Subnetwork(self.cover, vertices, self.arrows, self.edges)


def _closures(cover: TwoCover, seed) -> Iterator[Subnetwork]:
    """All completeness closures of a single signed seed vertex."""
    root_state = _State(cover)
    root_state.add_vertex(seed)

    def search(state: _State) -> Iterator[Subnetwork]:
        while state.pending:
            vertex = state.pending[-1]
            unresolved = None
            for obligation in _obligations(cover, vertex):
                if not _is_satisfied(state, vertex, obligation):
                    unresolved = obligation
                    break
            if unresolved is None:
                state.pending.pop()
                continue
            for witness, kind, link in _resolutions(cover, vertex, unresolved):
                branch_state = state.copy()
                if not branch_state.add_vertex(witness):
                    continue
                if not branch_state.add_link(kind, link):
                    continue
                yield from search(branch_state)
            return  # no admissible witness closed this branch
        yield state.to_subnetwork()

    yield from search(root_state)


class GeneralizedGraphMap(Subnetwork):
    """A complete, connected, unblocked, involution-free subnetwork."""

    @classmethod
    def from_subnetwork(cls, sub: Subnetwork) -> "GeneralizedGraphMap":
        g = cls(sub.cover, sub.vertices, sub.arrows, sub.edges)
        return g

    def negate(self) -> "GeneralizedGraphMap":
        return GeneralizedGraphMap.from_subnetwork(Subnetwork.negate(self))


def is_complete(sub: Subnetwork) -> CompletenessReport:
    """Check every completeness obligation, reporting the first failure."""
    for vertex in sorted(sub.vertices):
        state = _State(sub.cover)
        state.signs = sub.signed_pairs()
        state.arrows = set(sub.arrows)
        state.edges = set(sub.edges)
        for obligation in _obligations(sub.cover, vertex):
            if not _is_satisfied(state, vertex, obligation):
                if obligation[0] == "domain-child":
                    arrow = sub.cover.base.t1.tree.child_arrow[obligation[1]]
                    reason = f"no witness for domain arrow {arrow} of child {obligation[1]}"
                elif obligation[0] == "codomain-child":
                    arrow = sub.cover.base.t2.tree.child_arrow[obligation[1]]
                    reason = f"no witness for codomain arrow {arrow} of child {obligation[1]}"
                else:
                    reason = "no witness for the parent-side arrow"
                return CompletenessReport(False, vertex, reason)
    return CompletenessReport(True)


def _canonical(sub: Subnetwork) -> Subnetwork:
    least = min(v[:2] for v in sub.vertices)
    sign = dict(((v[0], v[1]), v[2]) for v in sub.vertices)[least]
    return sub.negate() if sign < 0 else sub


def enumerate_ggms(
    t1: TreeOverQ,
    t2: TreeOverQ,
    with_signs: bool = False,
    cover: Optional[TwoCover] = None,
) -> list[GeneralizedGraphMap]:
    """Every generalized graph map for the pair, canonically signed.

    Each map is normalized so its lexicographically least vertex pair
    carries sign +1; `with_signs` also returns the sign flips.  Seeding the
    closure from every network vertex and deduplicating is exhaustive
    because a graph map is the closure of any one of its vertices.
    """
    if cover is None:
        cover = two_cover(PullbackNetwork(t1, t2))
    found: dict[frozenset, Subnetwork] = {}
    for pair in cover.base.vertices:
        for sub in _closures(cover, pair + (1,)):
            canon = _canonical(sub)
            found.setdefault(canon.vertices, canon)
    ggms = [GeneralizedGraphMap.from_subnetwork(s) for s in sorted(found.values(), key=Subnetwork.sort_key)]
    if with_signs:
        ggms = ggms + [g.negate() for g in ggms]
    return ggms


def ggm_matrix(g: GeneralizedGraphMap, m1: ModuleRep, m2: ModuleRep) -> ModuleHom:
    """The homomorphism induced by a graph map: v_n maps to the signed sum of partners."""
    blocks = {
        q: np.zeros((m2.dim(q), m1.dim(q)), dtype=np.int64) for q in m1.basis
    }
    t1 = g.cover.base.t1
    for (n, m, s) in g.vertices:
        q = t1.vertex_label[n]
        blocks[q][m2.basis_index(q, m), m1.basis_index(q, n)] += s
    return ModuleHom(m1, m2, {q: b % m1.prime for q, b in blocks.items()})


def hom_span(
    t1: TreeOverQ, t2: TreeOverQ, prime: int = 3, cover: Optional[TwoCover] = None
) -> tuple[list[ModuleHom], int]:
    """Induced maps of all canonical graph maps and the rank of their span."""
    m1, m2 = push_down(t1, prime), push_down(t2, prime)
    maps = [ggm_matrix(g, m1, m2) for g in enumerate_ggms(t1, t2, cover=cover)]
    if not maps:
        return [], 0
    stacked = np.stack([h.flatten() for h in maps])
    if stacked.shape[1] == 0:
        return maps, 0
    _, rank, _ = rref(stacked, prime)
    return maps, rank


def branch_morphism_from_ggm(g: GeneralizedGraphMap, pair: tuple) -> BranchMorphism:
    """Extract the branch-to-branch morphism rooted at a graph-map vertex.

    Sink orientation maps the domain branch into the codomain branch;
    source orientation the codomain branch into the domain branch.  Each
    inductive step follows the unique witness link inside the graph map;
    uniqueness is asserted, as it is what the unblocked condition grants.
    """
    signs = g.signed_pairs()
    if pair not in signs:
        raise ValueError(f"{pair} is not a vertex pair of the graph map")
    t1, t2 = g.cover.base.t1, g.cover.base.t2
    n, m = pair
    if g.cover.orientation == SINK:
        morphism = BranchMorphism(n, m, {n: m}, {})
        queue = [n]
        while queue:
            x = queue.pop(0)
            y = morphism.vertex_map[x]
            for c in t1.tree.children(x):
                witnesses = [
                    a
                    for a in g.arrows
                    if a.target[:2] == (x, y) and a.label[0] == t1.tree.child_arrow[c]
                ]
                if len(witnesses) != 1:
                    raise AssertionError(f"witness for child {c} not unique: {witnesses}")
                morphism.vertex_map[c] = witnesses[0].source[1]
                morphism.arrow_map[t1.tree.child_arrow[c]] = witnesses[0].label[1]
                queue.append(c)
        return morphism
    morphism = BranchMorphism(m, n, {m: n}, {})
    queue = [m]
    while queue:
        y = queue.pop(0)
        x = morphism.vertex_map[y]
        for d in t2.tree.children(y):
            witnesses = [
                a
                for a in g.arrows
                if a.source[:2] == (x, y) and a.label[1] == t2.tree.child_arrow[d]
            ]
            if len(witnesses) != 1:
                raise AssertionError(f"witness for child {d} not unique: {witnesses}")
            morphism.vertex_map[d] = witnesses[0].target[0]
            morphism.arrow_map[t2.tree.child_arrow[d]] = witnesses[0].label[0]
            queue.append(d)
    return morphism


def ggm_to_dot(g: GeneralizedGraphMap, name: str = "graphmap") -> str:
    """Graphviz rendering with the sign spelled into each vertex label."""

    def label(v) -> str:
        return f"{v[0]},{v[1]},{'+' if v[2] > 0 else '-'}"

    lines = [f"digraph {name} {{"]
    for v in sorted(g.vertices):
        lines.append(f'  "{label(v)}";')
    for a in sorted(g.arrows, key=lambda a: (a.source, a.target)):
        lab = ",".join(str(x) for x in a.label[:2])
        lines.append(f'  "{label(a.source)}" -> "{label(a.target)}" [label="({lab})"];')
    for e in sorted(g.edges):
        lines.append(f'  "{label(e[0])}" -> "{label(e[1])}" [dir=none, style=dashed];')
    lines.append("}")
    return "\n".join(lines)
