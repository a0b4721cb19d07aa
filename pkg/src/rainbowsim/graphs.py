"""Coloured-graph structures and the deterministic structural algorithms
built on them: connected components, 2-core peeling, core/forest
decomposition, bridge numbers and rainbow checks.

Vertices are dense 0-based ids. Colours are 1-based integers in [1, c];
colour 0 marks an uncoloured edge and is only legal when c == 0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _scipy_cc


class EmptyCoreError(RuntimeError):
    """The 2-core needed by an operation is empty."""


class EdgeNotInForestError(ValueError):
    """The queried edge is not an oriented parent edge of the forest."""


def _as_index_array(a) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(a, dtype=np.int64))


@dataclass(frozen=True)
class ColouredGraph:
    """Undirected graph with one colour per edge, stored as parallel arrays.

    Loops and parallel edges are rejected unless ``multigraph`` is set;
    only the configuration model produces multigraphs here.
    """

    n: int
    c: int
    u: np.ndarray
    v: np.ndarray
    colour: np.ndarray
    multigraph: bool = False

    def __post_init__(self):
        object.__setattr__(self, "u", _as_index_array(self.u))
        object.__setattr__(self, "v", _as_index_array(self.v))
        object.__setattr__(self, "colour", _as_index_array(self.colour))
        if not (len(self.u) == len(self.v) == len(self.colour)):
            raise ValueError("edge arrays must have equal length")
        if self.n < 0 or self.c < 0:
            raise ValueError("n and c must be non-negative")
        m = len(self.u)
        if m:
            if self.u.min() < 0 or self.v.min() < 0 or max(self.u.max(), self.v.max()) >= self.n:
                raise ValueError("edge endpoint out of range")
            if self.c == 0:
                if self.colour.any():
                    raise ValueError("uncoloured graph (c == 0) requires all colours 0")
            else:
                if self.colour.min() < 1 or self.colour.max() > self.c:
                    raise ValueError("edge colour out of range [1, c]")
            if not self.multigraph:
                if (self.u == self.v).any():
                    raise ValueError("loops require multigraph=True")
                lo = np.minimum(self.u, self.v)
                hi = np.maximum(self.u, self.v)
                key = lo * self.n + hi
                if len(np.unique(key)) != m:
                    raise ValueError("parallel edges require multigraph=True")

    @property
    def m(self) -> int:
        return len(self.u)

    @classmethod
    def from_edges(cls, n, edges, c=0, multigraph=False) -> "ColouredGraph":
        """Build from an iterable of (u, v, colour) triples."""
        edges = list(edges)
        if edges:
            u, v, col = (np.array(x, dtype=np.int64) for x in zip(*edges))
        else:
            u = v = col = np.zeros(0, dtype=np.int64)
        return cls(n=n, c=c, u=u, v=v, colour=col, multigraph=multigraph)

    def edge_list(self):
        return list(zip(self.u.tolist(), self.v.tolist(), self.colour.tolist()))

    def degrees(self) -> np.ndarray:
        """Vertex degrees; loops count twice."""
        return (np.bincount(self.u, minlength=self.n)
                + np.bincount(self.v, minlength=self.n))


def adjacency(g: ColouredGraph):
    """CSR-style adjacency with neighbours sorted ascending per vertex.

    Returns (indptr, nbr, eid): the neighbours of x are nbr[indptr[x]:indptr[x+1]]
    and eid gives the index of the corresponding edge in g.
    """
    m = g.m
    ends = np.concatenate([g.u, g.v])
    other = np.concatenate([g.v, g.u])
    eid = np.concatenate([np.arange(m, dtype=np.int64)] * 2) if m else np.zeros(0, dtype=np.int64)
    order = np.lexsort((other, ends))
    nbr = other[order]
    eid = eid[order]
    counts = np.bincount(ends, minlength=g.n)
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, nbr, eid


@dataclass(frozen=True)
class VertexPartition:
    """Partition of the vertex set into connected components.

    Component ids are canonical: each component is labelled by its smallest
    contained vertex. ``sizes_desc`` lists component orders in descending
    order.
    """

    n: int
    labels: np.ndarray
    sizes_desc: np.ndarray

    def size_of(self, comp_id: int) -> int:
        return int(np.count_nonzero(self.labels == comp_id))

    def largest_id(self) -> int:
        """Id of the largest component; ties go to the smallest id."""
        ids, counts = np.unique(self.labels, return_counts=True)
        best = counts.max()
        return int(ids[counts == best].min())

    def largest_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.labels == self.largest_id())


def connected_components(g: ColouredGraph) -> VertexPartition:
    """Connected components with deterministic smallest-vertex labels."""
    if g.m == 0:
        labels = np.arange(g.n, dtype=np.int64)
        return VertexPartition(n=g.n, labels=labels,
                               sizes_desc=np.ones(g.n, dtype=np.int64))
    data = np.ones(g.m, dtype=np.int8)
    mat = coo_matrix((data, (g.u, g.v)), shape=(g.n, g.n))
    ncomp, raw = _scipy_cc(mat, directed=False)
    rep = np.full(ncomp, g.n, dtype=np.int64)
    np.minimum.at(rep, raw, np.arange(g.n, dtype=np.int64))
    labels = rep[raw]
    sizes = np.bincount(raw, minlength=ncomp)
    sizes = np.sort(sizes)[::-1].astype(np.int64)
    return VertexPartition(n=g.n, labels=labels, sizes_desc=sizes)


def _peel_masks(g: ColouredGraph):
    """Iteratively strip degree<=1 vertices; returns (vertex_mask, edge_mask)."""
    n = g.n
    deg = g.degrees().astype(np.int64)
    alive = np.ones(n, dtype=bool)
    if g.m == 0:
        return np.zeros(n, dtype=bool), np.zeros(0, dtype=bool)
    indptr, nbr, _ = adjacency(g)
    removed = np.flatnonzero(alive & (deg <= 1))
    while removed.size:
        alive[removed] = False
        deg[removed] = 0
        # gather all neighbours of the removed set and decrement
        starts = indptr[removed]
        stops = indptr[removed + 1]
        lens = stops - starts
        if lens.sum():
            flat = np.repeat(starts - np.concatenate(([0], np.cumsum(lens)[:-1])), lens) \
                + np.arange(lens.sum())
            touched = nbr[flat]
            np.subtract.at(deg, touched, 1)
        deg[~alive] = 0
        removed = np.flatnonzero(alive & (deg <= 1))
    edge_mask = alive[g.u] & alive[g.v]
    return alive, edge_mask


def two_core(g: ColouredGraph) -> ColouredGraph:
    """Maximal subgraph of minimum degree >= 2 (empty when none exists).

    The vertex set is kept; only the surviving edges are returned.
    """
    vmask, emask = _peel_masks(g)
    return ColouredGraph(n=g.n, c=g.c, u=g.u[emask], v=g.v[emask],
                         colour=g.colour[emask], multigraph=g.multigraph)


def two_core_masks(g: ColouredGraph):
    """(vertex_mask, edge_mask) of the 2-core; handy for pipelines."""
    return _peel_masks(g)


@dataclass(frozen=True)
class RootedForest:
    """Forest on m labelled vertices whose roots are exactly vertices 0..t-1.

    ``parent[w]`` is the parent of w, oriented towards the root; roots carry
    parent -1.
    """

    m: int
    t: int
    parent: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "parent", _as_index_array(self.parent))

    def check(self) -> None:
        """Validate all structural invariants; raises ValueError if broken."""
        if not (1 <= self.t <= self.m):
            raise ValueError("need 1 <= t <= m")
        if len(self.parent) != self.m:
            raise ValueError("parent array has wrong length")
        if not (self.parent[: self.t] == -1).all():
            raise ValueError("vertices 0..t-1 must be roots")
        if self.t < self.m:
            rest = self.parent[self.t:]
            if rest.min() < 0 or rest.max() >= self.m:
                raise ValueError("non-root parent out of range")
        # acyclicity: every vertex must reach a root
        depth = forest_depths(self)
        if (depth < 0).any():
            raise ValueError("forest contains a cycle")

    def roots_of(self) -> np.ndarray:
        """Root id of every vertex."""
        par = self.parent.tolist()
        root = [-1] * self.m
        for s in range(self.t):
            root[s] = s
        for x in range(self.t, self.m):
            chain = []
            y = x
            while root[y] < 0:
                chain.append(y)
                y = par[y]
            r = root[y]
            for z in chain:
                root[z] = r
        return np.array(root, dtype=np.int64)


def forest_depths(f: RootedForest) -> np.ndarray:
    """Distance to the root per vertex; -1 flags a vertex trapped in a cycle."""
    par = f.parent.tolist()
    m = f.m
    depth = [-2] * m
    for s in range(f.t):
        depth[s] = 0
    for x in range(f.t, m):
        if depth[x] >= 0:
            continue
        chain = []
        y = x
        seen = set()
        while depth[y] < 0:
            if y in seen:
                for z in chain:
                    depth[z] = -1
                break
            seen.add(y)
            chain.append(y)
            y = par[y]
        else:
            d = depth[y]
            for z in reversed(chain):
                d += 1
                depth[z] = d
            continue
        # cycle found: mark whole chain
        for z in chain:
            depth[z] = -1
    return np.array([d if d >= 0 else -1 for d in depth], dtype=np.int64)


def subtree_sizes(f: RootedForest) -> np.ndarray:
    """Order of the subtree hanging below every vertex (vertex included)."""
    depth = forest_depths(f)
    if (depth < 0).any():
        raise ValueError("not a forest")
    m = f.m
    sizes = np.ones(m, dtype=np.int64)
    if m == 0:
        return sizes
    order = np.argsort(depth, kind="stable")
    # accumulate level by level, deepest first; same-depth vertices never
    # parent each other so np.add.at per level is safe
    maxd = int(depth.max())
    bounds = np.searchsorted(depth[order], np.arange(maxd + 2))
    for d in range(maxd, 0, -1):
        vs = order[bounds[d]:bounds[d + 1]]
        np.add.at(sizes, f.parent[vs], sizes[vs])
    return sizes


def children_index(f: RootedForest):
    """(indptr, order): children of x are order[indptr[x+1]:indptr[x+2]].

    Group 0 of ``order`` holds the roots.
    """
    key = f.parent + 1
    order = np.argsort(key, kind="stable")
    counts = np.bincount(key, minlength=f.m + 1)
    indptr = np.zeros(f.m + 2, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, order


def subtree_size_below(f: RootedForest, w: int, child_idx=None) -> int:
    """Order of the subtree rooted at w, by explicit descent."""
    if child_idx is None:
        child_idx = children_index(f)
    indptr, order = child_idx
    count = 0
    stack = [w]
    while stack:
        x = stack.pop()
        count += 1
        kids = order[indptr[x + 1]:indptr[x + 2]]
        stack.extend(kids.tolist())
    return count


def bridge_number(f: RootedForest, e) -> int:
    """Number of vertices below the forest edge e = (v, w), v nearer the root."""
    v, w = int(e[0]), int(e[1])
    if not (0 <= w < f.m) or w < f.t or f.parent[w] != v:
        raise EdgeNotInForestError(f"({v}, {w}) is not an oriented edge of the forest")
    return subtree_size_below(f, w)


def is_rainbow(g: ColouredGraph, edge_ids) -> bool:
    """True iff the given edges carry pairwise distinct colours."""
    ids = _as_index_array(edge_ids)
    if ids.size == 0:
        return True
    cols = g.colour[ids]
    return len(np.unique(cols)) == len(cols)


@dataclass(frozen=True)
class CoreDecomposition:
    """2-core of the giant+unicyclic region plus the forest hanging off it.

    The forest is relabelled: core vertices become local ids 0..t-1 (sorted
    by global id), remaining vertices follow in global-id order.
    ``forest_labels`` maps local ids back to global vertex ids and
    ``forest_edge_ids[w]`` is the original edge index of the parent edge of
    local non-root w (-1 for roots).
    """

    core_vertices: np.ndarray
    core_edges: np.ndarray
    forest: RootedForest
    forest_labels: np.ndarray
    forest_edge_ids: np.ndarray
    unicyclic_vertices: np.ndarray


def core_forest_decomposition(g: ColouredGraph, giant, unicyclic) -> CoreDecomposition:
    """Split the induced subgraph on giant+unicyclic into 2-core and rooted forest.

    Raises EmptyCoreError when the restricted 2-core has no vertices.
    Forest orientation: parent pointers point towards the core, assigned by a
    multi-source BFS from the core vertices (smallest-id-first, neighbours
    ascending), so trees are rooted at core vertices.
    """
    giant = _as_index_array(giant)
    unicyclic = _as_index_array(unicyclic)
    in_s = np.zeros(g.n, dtype=bool)
    in_s[giant] = True
    in_s[unicyclic] = True

    vmask, emask = _peel_masks(g)
    core_v_mask = vmask & in_s
    core_verts = np.flatnonzero(core_v_mask)
    if core_verts.size == 0:
        raise EmptyCoreError("2-core of the giant+unicyclic region is empty")

    s_edge = in_s[g.u] & in_s[g.v]
    core_edge_mask = emask & s_edge
    core_edges = np.flatnonzero(core_edge_mask)
    forest_edge_mask = s_edge & ~core_edge_mask
    forest_edges = np.flatnonzero(forest_edge_mask)

    s_verts = np.flatnonzero(in_s)
    t = core_verts.size
    m = s_verts.size
    non_core = s_verts[~core_v_mask[s_verts]]

    local = np.full(g.n, -1, dtype=np.int64)
    local[core_verts] = np.arange(t, dtype=np.int64)
    local[non_core] = t + np.arange(non_core.size, dtype=np.int64)
    labels = np.concatenate([core_verts, non_core])

    # BFS over forest edges from all core vertices at once
    fu = g.u[forest_edges]
    fv = g.v[forest_edges]
    sub = ColouredGraph(n=g.n, c=0, u=fu, v=fv,
                        colour=np.zeros(len(fu), dtype=np.int64),
                        multigraph=True)
    indptr, nbr, eid_local = adjacency(sub)

    parent = np.full(m, -1, dtype=np.int64)
    edge_ids = np.full(m, -1, dtype=np.int64)
    seen = core_v_mask.copy()
    queue = deque(core_verts.tolist())
    reached = t
    nbr_l = nbr.tolist()
    eidx_l = eid_local.tolist()
    iptr_l = indptr.tolist()
    while queue:
        x = queue.popleft()
        lx = local[x]
        for p in range(iptr_l[x], iptr_l[x + 1]):
            y = nbr_l[p]
            if not seen[y]:
                seen[y] = True
                parent[local[y]] = lx
                edge_ids[local[y]] = forest_edges[eidx_l[p]]
                queue.append(y)
                reached += 1
    if reached != m:
        raise ValueError("giant/unicyclic region is not fully attached to the core")

    forest = RootedForest(m=m, t=t, parent=parent)
    return CoreDecomposition(core_vertices=core_verts,
                             core_edges=core_edges,
                             forest=forest,
                             forest_labels=labels,
                             forest_edge_ids=edge_ids,
                             unicyclic_vertices=unicyclic)


# ---------------------------------------------------------------------------
# text formats

def write_edgelist(g: ColouredGraph, path) -> None:
    """Write the `n c` header plus one `u v colour` line per edge."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.c}\n")
        for a, b, col in zip(g.u.tolist(), g.v.tolist(), g.colour.tolist()):
            fh.write(f"{a} {b} {col}\n")


def read_edgelist(path) -> ColouredGraph:
    """Inverse of write_edgelist. Multigraphs are detected from the content."""
    with open(path, "r", encoding="ascii") as fh:
        head = fh.readline().split()
        n, c = int(head[0]), int(head[1])
        us, vs, cols = [], [], []
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            us.append(int(parts[0]))
            vs.append(int(parts[1]))
            cols.append(int(parts[2]))
    u = np.array(us, dtype=np.int64)
    v = np.array(vs, dtype=np.int64)
    col = np.array(cols, dtype=np.int64)
    multi = False
    if len(u):
        if (u == v).any():
            multi = True
        else:
            lo = np.minimum(u, v)
            hi = np.maximum(u, v)
            multi = len(np.unique(lo * n + hi)) != len(u)
    return ColouredGraph(n=n, c=c, u=u, v=v, colour=col, multigraph=multi)


def forest_to_line(f: RootedForest) -> str:
    """Serialise as `m t p_t ... p_{m-1}` (0-based parents of the non-roots)."""
    parts = [str(f.m), str(f.t)] + [str(int(p)) for p in f.parent[f.t:]]
    return " ".join(parts)


def forest_from_line(line: str) -> RootedForest:
    vals = [int(x) for x in line.split()]
    m, t = vals[0], vals[1]
    parent = np.full(m, -1, dtype=np.int64)
    parent[t:] = vals[2:]
    return RootedForest(m=m, t=t, parent=parent)
