"""Constructive packing-or-covering for zero-weight paths in oriented graphs.

A forest of subcubic terminal trees is grown greedily to a fixpoint of two
augmentation moves; either enough disjoint zero-weight terminal paths come
out of the trees (pigeonhole on leaf counts), or the degree-1/3 vertices of
the forest form a small cover whose removal provably kills every zero path.
Works for any finite group, nonabelian included.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DEFAULT_LIMITS,
    InternalInvariantError,
    Limits,
    LimitExceeded,
    PreconditionFailed,
)
from .graphs import (
    DIRECTED,
    LabelledGraph,
    PathWitness,
    _iter_terminal_paths,
    _EnumState,
    vertex_key,
    walk_weight,
)
from .packing import PackOrCover


@dataclass
class TerminalTree:
    """One forest component: a subcubic tree meeting the terminals in its leaves."""

    vertices: set
    edge_ids: set
    witness: PathWitness
    degree: dict = field(default_factory=dict)

    def leaves(self) -> list:
        return sorted((v for v, d in self.degree.items() if d == 1), key=vertex_key)


@dataclass(frozen=True)
class FrameResult:
    outcome: PackOrCover
    audit: tuple[dict, ...]

    def to_json(self) -> dict:
        return {"outcome": self.outcome.to_json(), "audit": list(self.audit)}


def _first_zero_path_disjoint_from(graph: LabelledGraph, blocked: set, limits: Limits):
    """Lexicographically first zero-weight terminal path avoiding `blocked`.

    Raises LimitExceeded when nothing was found but the search was truncated,
    since "no candidate" is then uncertifiable.
    """
    zero = graph.group.zero()
    state = _EnumState()
    for vertices, edge_ids in _iter_terminal_paths(
        graph, graph.terminals, limits.max_len, limits.max_paths, state
    ):
        if blocked.intersection(vertices):
            continue
        w = walk_weight(graph, vertices, edge_ids)
        if w == zero:
            return PathWitness(vertices, edge_ids, w)
    if state.truncated:
        raise LimitExceeded("path length while certifying zero-path absence", limits.max_len)
    return None


def _first_attach_path(graph: LabelledGraph, forest_vertices: set, degree: dict, limits: Limits):
    """First path from a free terminal to a degree-2 forest vertex.

    Internal vertices avoid both the forest and the terminal set, so gluing
    the path onto its tree keeps the component subcubic with leaves exactly
    the terminals it meets.
    """
    terminals = graph.terminals
    truncated = False

    def expand(path: list, edges: list, used: set):
        nonlocal truncated
        at = path[-1]
        for e, nxt in graph.incident(at):
            if nxt in used or nxt in terminals:
                continue
            if nxt in forest_vertices:
                if degree.get(nxt) == 2:
                    return tuple(path) + (nxt,), tuple(edges) + (e.eid,)
                continue
            if len(edges) + 1 >= limits.max_len:
                truncated = True
                continue
            path.append(nxt)
            edges.append(e.eid)
            used.add(nxt)
            found = expand(path, edges, used)
            if found:
                return found
            used.discard(nxt)
            edges.pop()
            path.pop()
        return None

    for a in sorted(terminals, key=vertex_key):
        if a in forest_vertices:
            continue
        found = expand([a], [], {a})
        if found:
            return found
    if truncated:
        raise LimitExceeded("path length while searching attachments", limits.max_len)
    return None


def _tree_adjacency(graph: LabelledGraph, edge_ids: set) -> dict:
    adj: dict = {}
    for eid in sorted(edge_ids, key=lambda x: (isinstance(x, str), x)):
        e = graph.edge(eid)
        adj.setdefault(e.u, []).append((eid, e.v))
        adj.setdefault(e.v, []).append((eid, e.u))
    for v in adj:
        adj[v].sort(key=lambda pair: vertex_key(pair[1]))
    return adj


def _validate_tree(graph: LabelledGraph, tree: TerminalTree) -> None:
    adj = _tree_adjacency(graph, tree.edge_ids)
    if set(adj) != tree.vertices:
        raise InternalInvariantError("component vertex set out of sync")
    if len(tree.edge_ids) != len(tree.vertices) - 1:
        raise InternalInvariantError("component is not a tree")
    for v, nbrs in adj.items():
        if len(nbrs) > 3:
            raise InternalInvariantError("component is not subcubic")
        if tree.degree.get(v) != len(nbrs):
            raise InternalInvariantError("cached degree out of sync")
    leaves = {v for v, nbrs in adj.items() if len(nbrs) == 1}
    if tree.vertices & graph.terminals != leaves:
        raise InternalInvariantError("terminals inside the component are not exactly its leaves")
    tree.witness.validate(graph)
    if tree.witness.weight != graph.group.zero():
        raise InternalInvariantError("stored witness is not zero weight")
    if not set(tree.witness.vertices) <= tree.vertices:
        raise InternalInvariantError("stored witness left its component")


def _leaf_paths_from(adj: dict, v) -> list[tuple[tuple, tuple]]:
    """All paths in the tree from v to each leaf, ordered by leaf id."""
    out = []

    def walk(path, edges, prev):
        at = path[-1]
        nbrs = [x for x in adj[at] if x[1] != prev]
        if not nbrs and len(path) > 1:
            out.append((tuple(path), tuple(edges)))
            return
        for eid, nxt in nbrs:
            walk(path + [nxt], edges + [eid], at)

    walk([v], [], None)
    out.sort(key=lambda pe: vertex_key(pe[0][-1]))
    return out


def base_zero_path(graph: LabelledGraph, tree_edges: set, v) -> PathWitness:
    """Zero-weight terminal path inside a subcubic terminal tree, rooted at v.

    Needs at least |group|+1 leaf paths from the internal vertex v: two of
    them share a weight by pigeonhole, and their symmetric difference is the
    witness (the common prefix cancels on the left even when the group is
    nonabelian).
    """
    group = graph.group
    if not group.is_finite:
        raise PreconditionFailed("pigeonhole extraction needs a finite group")
    adj = _tree_adjacency(graph, tree_edges)
    if v not in adj or len(adj[v]) == 1:
        raise PreconditionFailed("root must be an internal tree vertex")
    paths = _leaf_paths_from(adj, v)
    need = group.order + 1
    if len(paths) < need:
        raise PreconditionFailed(f"need {need} leaf paths, found {len(paths)}")
    chosen = paths[:need]
    weights = [walk_weight(graph, vs, es) for vs, es in chosen]
    pair = None
    for i in range(need):
        for j in range(i + 1, need):
            if weights[i] == weights[j]:
                pair = (i, j)
                break
        if pair:
            break
    if pair is None:
        raise InternalInvariantError("pigeonhole failed over the group order")
    (vi, ei), (vj, ej) = chosen[pair[0]], chosen[pair[1]]
    # strip the common prefix, then splice reversed(i-branch) + j-branch
    k = 0
    while k < min(len(ei), len(ej)) and ei[k] == ej[k]:
        k += 1
    branch_i_v, branch_i_e = vi[k:], ei[k:]
    branch_j_v, branch_j_e = vj[k:], ej[k:]
    verts = tuple(reversed(branch_i_v)) + branch_j_v[1:]
    edges = tuple(reversed(branch_i_e)) + branch_j_e
    w = walk_weight(graph, verts, edges)
    witness = PathWitness(verts, edges, w)
    if w != group.zero():
        raise InternalInvariantError("prefix cancellation did not produce weight zero")
    witness.validate(graph)
    return witness


def _tree_from_edges(graph: LabelledGraph, edge_ids: set) -> tuple[dict, set]:
    adj = _tree_adjacency(graph, edge_ids)
    return adj, set(adj)


def _leaf_count(graph: LabelledGraph, edge_ids: set) -> int:
    adj = _tree_adjacency(graph, edge_ids)
    return sum(1 for v in adj if len(adj[v]) == 1)


def _distances_from(adj: dict, start) -> dict:
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for _, y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def _prune_to_terminal_tree(graph: LabelledGraph, edge_ids: set) -> set:
    """Repeatedly drop non-terminal leaves: the largest sub-tree whose leaves
    are all terminals."""
    edges = set(edge_ids)
    terminals = graph.terminals
    while True:
        adj = _tree_adjacency(graph, edges)
        drop = None
        for v, nbrs in adj.items():
            if len(nbrs) == 1 and v not in terminals:
                drop = nbrs[0][0]
                break
        if drop is None:
            return edges
        edges.discard(drop)


def extract_zero_paths(graph: LabelledGraph, tree_edges: set, k: int) -> list[PathWitness]:
    """k pairwise disjoint zero-weight terminal paths from one subcubic tree.

    Recursion: split at the farthest degree-3 vertex from a fixed leaf that
    still leaves at least |group|+1 leaves on its far side, solve the far
    side by pigeonhole, recurse on the near side.
    """
    group = graph.group
    size = group.order
    if k <= 0:
        return []
    edges = set(tree_edges)
    leaves_now = _leaf_count(graph, edges)
    if leaves_now < (2 * k - 1) * size + 1:
        raise PreconditionFailed(
            f"tree has {leaves_now} leaves; {(2 * k - 1) * size + 1} required for {k} paths"
        )
    if k == 1:
        adj, verts = _tree_from_edges(graph, edges)
        if len(edges) == 1:
            # single-edge tree: only possible demand is over the trivial group
            e = graph.edge(next(iter(edges)))
            w = walk_weight(graph, (e.u, e.v), (e.eid,))
            if w != group.zero():
                raise InternalInvariantError("single-edge tree with nonzero weight")
            witness = PathWitness((e.u, e.v), (e.eid,), w)
            witness.validate(graph)
            return [witness]
        internal = sorted((v for v in verts if len(adj[v]) >= 2), key=vertex_key)
        return [base_zero_path(graph, edges, internal[0])]

    adj, verts = _tree_from_edges(graph, edges)
    anchor = min((v for v in verts if len(adj[v]) == 1), key=vertex_key)
    dist = _distances_from(adj, anchor)
    total_leaves = leaves_now

    best = None  # (vertex, far_edges, near_edges); maximize distance, break ties downward
    for v in verts:
        if len(adj[v]) != 3:
            continue
        # component of tree - v containing the anchor
        comp_edges = set()
        stack = [anchor]
        seen = {anchor}
        while stack:
            x = stack.pop()
            for eid, y in adj[x]:
                if y == v or y in seen:
                    continue
                seen.add(y)
                comp_edges.add(eid)
                stack.append(y)
        near_prime_vertices = seen
        far_edges = {
            eid for eid in edges if not (
                graph.edge(eid).u in near_prime_vertices or graph.edge(eid).v in near_prime_vertices
            )
        }
        far_leaves = total_leaves - sum(
            1 for x in near_prime_vertices if len(adj[x]) == 1
        )
        if far_leaves >= size + 1:
            better = best is None or dist[v] > dist[best[0]] or (
                dist[v] == dist[best[0]] and vertex_key(v) < vertex_key(best[0])
            )
            if better:
                best = (v, far_edges, comp_edges)
    if best is None:
        raise InternalInvariantError("no admissible split vertex; contradicts the leaf bound")
    v, far_edges, near_prime_edges = best
    near_edges = _prune_to_terminal_tree(graph, near_prime_edges)
    far_paths = extract_zero_paths(graph, far_edges, 1)
    near_paths = extract_zero_paths(graph, near_edges, k - 1)
    out = near_paths + far_paths
    used: set = set()
    for p in out:
        if used & set(p.vertices):
            raise InternalInvariantError("extracted paths overlap")
        used |= set(p.vertices)
    return out


def largest_extractable(graph: LabelledGraph, leaf_count: int) -> int:
    """Largest k with leaf_count >= (2k-1)|group|+1, by direct search."""
    size = graph.group.order
    k = 0
    while leaf_count >= (2 * (k + 1) - 1) * size + 1:
        k += 1
    return k


def frame_pack_or_cover(
    graph: LabelledGraph, k: int, limits: Limits = DEFAULT_LIMITS, debug: bool = False
) -> FrameResult:
    """Either k disjoint zero-weight terminal paths or a verified small cover.

    Covers contain the degree-1/3 vertices of the grown forest; their size is
    checked against six times (k-1) times the group order, and the absence of
    zero paths after deletion is verified exhaustively.
    """
    if graph.model != DIRECTED:
        raise PreconditionFailed("the frame algorithm runs on the oriented model")
    if not graph.group.is_finite:
        raise PreconditionFailed("the frame algorithm needs a finite group")
    if k < 1:
        raise ValueError("k must be positive")

    trees: list[TerminalTree] = []
    forest_vertices: set = set()
    degree: dict = {}
    audit: list[dict] = []

    def add_component(witness: PathWitness):
        deg = {}
        for v in witness.vertices:
            deg[v] = 2
        deg[witness.vertices[0]] = 1
        deg[witness.vertices[-1]] = 1
        tree = TerminalTree(set(witness.vertices), set(witness.edge_ids), witness, deg)
        trees.append(tree)
        forest_vertices.update(witness.vertices)
        degree.update(deg)
        audit.append({"move": "new-component", "path": list(witness.vertices)})

    def attach(vertices: tuple, edge_ids: tuple):
        w = vertices[-1]
        target = next(t for t in trees if w in t.vertices)
        target.vertices.update(vertices)
        target.edge_ids.update(edge_ids)
        degree[w] += 1
        degree[vertices[0]] = 1
        for v in vertices[1:-1]:
            degree[v] = 2
        target.degree = {v: degree[v] for v in target.vertices}
        forest_vertices.update(vertices)
        audit.append({"move": "attach", "path": list(vertices)})

    while True:
        candidate = _first_zero_path_disjoint_from(graph, forest_vertices, limits)
        if candidate is not None:
            add_component(candidate)
            if debug:
                for t in trees:
                    _validate_tree(graph, t)
            continue
        attach_found = _first_attach_path(graph, forest_vertices, degree, limits)
        if attach_found is not None:
            attach(*attach_found)
            if debug:
                for t in trees:
                    _validate_tree(graph, t)
            continue
        break

    if len(trees) >= k:
        chosen = [t.witness for t in trees[:k]]
        outcome = PackOrCover("packing", paths=tuple(chosen))
        _validate_packing(graph, chosen, k)
        return FrameResult(outcome, tuple(audit))

    per_tree = [largest_extractable(graph, len(t.leaves())) for t in trees]
    if sum(per_tree) >= k:
        paths: list[PathWitness] = []
        for t, cap in zip(trees, per_tree):
            take = min(cap, k - len(paths))
            if take > 0:
                paths.extend(extract_zero_paths(graph, t.edge_ids, take))
            if len(paths) == k:
                break
        outcome = PackOrCover("packing", paths=tuple(paths))
        _validate_packing(graph, paths, k)
        return FrameResult(outcome, tuple(audit))

    cover = frozenset(v for v, d in degree.items() if d in (1, 3))
    bound = 6 * (k - 1) * graph.group.order
    if cover and len(cover) >= bound:
        raise InternalInvariantError(f"cover size {len(cover)} breaks the bound {bound}")
    remainder = graph.without_vertices(cover)
    leftover = _first_zero_path_disjoint_from(remainder, set(), limits)
    if leftover is not None:
        raise InternalInvariantError("zero path survives the cover; forest was not maximal")
    outcome = PackOrCover("cover", vertices=cover)
    audit.append({"move": "cover", "vertices": sorted(cover, key=vertex_key)})
    return FrameResult(outcome, tuple(audit))


def _validate_packing(graph: LabelledGraph, paths: list[PathWitness], k: int) -> None:
    if len(paths) != k:
        raise InternalInvariantError("packing has the wrong size")
    used: set = set()
    zero = graph.group.zero()
    for p in paths:
        p.validate(graph)
        if p.weight != zero:
            raise InternalInvariantError("packing contains a nonzero path")
        if used & set(p.vertices):
            raise InternalInvariantError("packing paths overlap")
        used |= set(p.vertices)


def validate_frame_cover(graph: LabelledGraph, k: int, cover: frozenset, limits: Limits = DEFAULT_LIMITS) -> dict:
    """Re-check both cover conclusions; used by tests and the CLI report."""
    bound = 6 * (k - 1) * graph.group.order
    remainder = graph.without_vertices(cover)
    leftover = _first_zero_path_disjoint_from(remainder, set(), limits)
    return {
        "bound": bound,
        "size": len(cover),
        "bound_ok": len(cover) < bound or len(cover) == 0,
        "verified_empty": leftover is None,
    }
