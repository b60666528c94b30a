"""Group-labelled multigraphs, path witnesses, and the structural operations.

Two labelling models are supported.  In the oriented model every edge carries
a direction and traversing an edge against it negates its label; in the
orientation-free model weights are plain label sums and the group must be
abelian.  Graphs are immutable; mutating operations return new graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple

from .errors import (
    DEFAULT_LIMITS,
    InternalInvariantError,
    Limits,
    LimitExceeded,
    NormalizationFailed,
    PreconditionFailed,
)
from .groups import GroupElem, GroupSpec

DIRECTED = "directed"
UNDIRECTED = "undirected"


def vertex_key(v):
    """Total order over mixed int/str vertex ids."""
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ValueError(f"vertex ids must be ints or strings, got {v!r}")
    return (0, v, "") if isinstance(v, int) else (1, 0, v)


class Edge(NamedTuple):
    eid: int | str
    u: int | str
    v: int | str
    label: GroupElem
    tail: int | str | None = None

    def other(self, x):
        return self.v if x == self.u else self.u

    def sign_into(self, endpoint) -> int:
        """+1 when traversal ends at the head, -1 when it ends at the tail."""
        return 1 if endpoint != self.tail else -1


class LabelledGraph:
    """Multigraph with a group label per edge and a distinguished terminal set."""

    def __init__(self, group: GroupSpec, model: str, vertices, edges, terminals=()):
        if model not in (DIRECTED, UNDIRECTED):
            raise ValueError(f"unknown model {model!r}")
        if model == UNDIRECTED and not group.is_abelian:
            raise ValueError("the orientation-free model requires an abelian group")
        self.group = group
        self.model = model
        vset = set(vertices)
        for v in vset:
            vertex_key(v)
        self.vertices = tuple(sorted(vset, key=vertex_key))
        norm = []
        seen_ids = set()
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            if e.eid in seen_ids:
                raise ValueError(f"duplicate edge id {e.eid!r}")
            seen_ids.add(e.eid)
            if e.u not in vset or e.v not in vset:
                raise ValueError(f"edge {e.eid!r} has an endpoint outside the vertex set")
            if e.u == e.v:
                raise ValueError(f"edge {e.eid!r} is a loop")
            label = group.element(e.label)
            if model == DIRECTED:
                if e.tail not in (e.u, e.v):
                    raise ValueError(f"edge {e.eid!r} needs an orientation in the directed model")
            elif e.tail is not None:
                raise ValueError(f"edge {e.eid!r} carries an orientation in the undirected model")
            norm.append(Edge(e.eid, e.u, e.v, label, e.tail))
        norm.sort(key=lambda e: _eid_key(e.eid))
        self.edges = tuple(norm)
        self.terminals = frozenset(terminals)
        if not self.terminals <= vset:
            raise ValueError("terminals must be vertices")
        self._by_id = {e.eid: e for e in self.edges}
        adj: dict = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.u].append((e, e.v))
            adj[e.v].append((e, e.u))
        for v in adj:
            adj[v].sort(key=lambda pair: (vertex_key(pair[1]), _eid_key(pair[0].eid)))
        self._adj = adj

    @classmethod
    def build(cls, group, model, edges, terminals=(), extra_vertices=()):
        """Convenience constructor: edges as (u, v, label[, tail]), ids auto-assigned."""
        vertices = set(extra_vertices) | set(terminals)
        full = []
        for i, spec in enumerate(edges):
            u, v, label = spec[0], spec[1], spec[2]
            tail = spec[3] if len(spec) > 3 else (u if model == DIRECTED else None)
            vertices.update((u, v))
            full.append(Edge(i, u, v, label, tail))
        return cls(group, model, vertices, full, terminals)

    # --- basic accessors -------------------------------------------------

    def edge(self, eid) -> Edge:
        return self._by_id[eid]

    def incident(self, v):
        return self._adj[v]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def __contains__(self, v) -> bool:
        return v in self._adj

    # --- derived graphs ---------------------------------------------------

    def with_terminals(self, terminals) -> "LabelledGraph":
        return LabelledGraph(self.group, self.model, self.vertices, self.edges, terminals)

    def without_vertices(self, removed) -> "LabelledGraph":
        removed = set(removed)
        keep = [v for v in self.vertices if v not in removed]
        edges = [e for e in self.edges if e.u not in removed and e.v not in removed]
        return LabelledGraph(self.group, self.model, keep, edges, self.terminals - removed)

    def with_labels(self, relabel: Callable[[Edge], GroupElem]) -> "LabelledGraph":
        edges = [Edge(e.eid, e.u, e.v, relabel(e), e.tail) for e in self.edges]
        return LabelledGraph(self.group, self.model, self.vertices, edges, self.terminals)

    def shift(self, v, g: GroupElem) -> "LabelledGraph":
        """Add g (an element with g + g = 0) to every edge incident with v."""
        if self.model != UNDIRECTED:
            raise PreconditionFailed("shifting is defined in the orientation-free model")
        g = self.group.element(g)
        if g + g != self.group.zero():
            raise PreconditionFailed(f"shift value must satisfy g+g=0, got {g!r}")
        if v not in self:
            raise ValueError(f"unknown vertex {v!r}")
        return self.with_labels(lambda e: e.label + g if v in (e.u, e.v) else e.label)

    # --- connectivity helpers --------------------------------------------

    def component_of(self, start, forbidden=frozenset()) -> set:
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for _, y in self._adj[x]:
                if y not in seen and y not in forbidden:
                    seen.add(y)
                    stack.append(y)
        return seen

    def components(self) -> list[set]:
        left = set(self.vertices)
        out = []
        while left:
            start = min(left, key=vertex_key)
            comp = self.component_of(start)
            out.append(comp)
            left -= comp
        return out

    def is_connected(self) -> bool:
        return len(self.vertices) <= 1 or len(self.component_of(self.vertices[0])) == len(self.vertices)

    def is_three_connected(self) -> bool:
        """Brute force: no deletion of at most 2 vertices disconnects the graph."""
        n = len(self.vertices)
        if n < 4:
            return False
        import itertools

        for r in (0, 1, 2):
            for cut in itertools.combinations(self.vertices, r):
                rest = self.without_vertices(cut)
                if not rest.is_connected():
                    return False
        return True

    def to_json(self) -> dict:
        out = {
            "group": self.group.to_json(),
            "model": self.model,
            "vertices": list(self.vertices),
            "A": sorted(self.terminals, key=vertex_key),
            "edges": [],
        }
        for e in self.edges:
            entry = {"id": e.eid, "u": e.u, "v": e.v, "label": e.label.to_json()}
            if self.model == DIRECTED:
                entry["tail"] = e.tail
            out["edges"].append(entry)
        return out


def _eid_key(eid):
    return (0, eid, "") if isinstance(eid, int) else (1, 0, str(eid))


@dataclass(frozen=True)
class PathWitness:
    """A concrete path with its computed weight; the universal certificate."""

    vertices: tuple
    edge_ids: tuple
    weight: GroupElem
    trivial: bool = False

    @property
    def endpoints(self) -> tuple:
        return (self.vertices[0], self.vertices[-1])

    def sort_key(self):
        return (
            tuple(vertex_key(v) for v in self.vertices),
            tuple(_eid_key(e) for e in self.edge_ids),
        )

    def reversed(self, graph: LabelledGraph) -> "PathWitness":
        return PathWitness(
            tuple(reversed(self.vertices)),
            tuple(reversed(self.edge_ids)),
            walk_weight(graph, tuple(reversed(self.vertices)), tuple(reversed(self.edge_ids))),
            self.trivial,
        )

    def validate(self, graph: LabelledGraph, as_terminal_path: bool = True) -> None:
        """Re-check simplicity, terminal pattern, and the stored weight."""
        if self.trivial:
            if len(self.vertices) != 1 or self.edge_ids:
                raise InternalInvariantError("malformed trivial witness")
            if self.weight != graph.group.zero():
                raise InternalInvariantError("trivial witness must have zero weight")
            return
        if len(self.vertices) != len(self.edge_ids) + 1 or not self.edge_ids:
            raise InternalInvariantError("malformed witness sequence")
        if len(set(self.vertices)) != len(self.vertices):
            raise InternalInvariantError("witness revisits a vertex")
        if walk_weight(graph, self.vertices, self.edge_ids) != self.weight:
            raise InternalInvariantError("stored weight disagrees with the walk weight")
        if as_terminal_path:
            a = graph.terminals
            if self.vertices[0] not in a or self.vertices[-1] not in a:
                raise InternalInvariantError("witness endpoints are not terminals")
            if any(v in a for v in self.vertices[1:-1]):
                raise InternalInvariantError("witness passes through a terminal")

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": list(self.edge_ids),
            "weight": self.weight.to_json(),
            **({"trivial": True} if self.trivial else {}),
        }

    @classmethod
    def from_json(cls, graph: LabelledGraph, data: dict) -> "PathWitness":
        vertices = tuple(data["vertices"])
        edges = tuple(data["edges"])
        if data.get("trivial"):
            return cls(vertices, (), graph.group.zero(), trivial=True)
        return cls(vertices, edges, walk_weight(graph, vertices, edges))


def walk_weight(graph: LabelledGraph, vertices, edge_ids) -> GroupElem:
    """Weight of a walk given as alternating vertex and edge-id sequences.

    Accumulates left to right (meaningful for nonabelian groups); in the
    directed model each label is negated when the edge is traversed against
    its orientation.
    """
    vertices = tuple(vertices)
    edge_ids = tuple(edge_ids)
    if len(vertices) != len(edge_ids) + 1 or not vertices:
        raise ValueError("walk must alternate vertices and edges")
    group = graph.group
    acc = group.zero()
    at = vertices[0]
    if at not in graph:
        raise ValueError(f"unknown vertex {at!r}")
    for eid, nxt in zip(edge_ids, vertices[1:]):
        e = graph.edge(eid)
        if {at, nxt} != {e.u, e.v}:
            raise ValueError(f"edge {eid!r} does not join {at!r} and {nxt!r}")
        if graph.model == DIRECTED and e.sign_into(nxt) < 0:
            acc = acc + (-e.label)
        else:
            acc = acc + e.label
        at = nxt
    return acc


@dataclass
class _EnumState:
    found: int = 0
    truncated: bool = False


@dataclass(frozen=True)
class PathEnumeration:
    paths: tuple[PathWitness, ...]
    exhaustive: bool

    def __iter__(self):
        return iter(self.paths)

    def __len__(self):
        return len(self.paths)


def _iter_terminal_paths(
    graph: LabelledGraph, terminals: frozenset, max_len: int, max_count: int, state: _EnumState
) -> Iterator[tuple[tuple, tuple]]:
    """All paths meeting `terminals` exactly in their two endpoints.

    Each path is produced once, traversed from its smaller endpoint; the
    generator raises LimitExceeded past max_count and records depth pruning.
    """
    order = sorted(terminals, key=vertex_key)

    def expand(path: list, edges: list, used: set) -> Iterator[tuple[tuple, tuple]]:
        at = path[-1]
        budget = max_len - len(edges)
        for e, nxt in graph.incident(at):
            if nxt in used:
                continue
            if nxt in terminals:
                if budget < 1:
                    state.truncated = True
                elif vertex_key(nxt) > vertex_key(path[0]):
                    state.found += 1
                    if state.found > max_count:
                        raise LimitExceeded("enumerated paths", max_count)
                    yield tuple(path) + (nxt,), tuple(edges) + (e.eid,)
                continue
            # an interior extension needs one edge now and at least one more to finish
            if budget < 2:
                state.truncated = True
                continue
            path.append(nxt)
            edges.append(e.eid)
            used.add(nxt)
            yield from expand(path, edges, used)
            used.discard(nxt)
            edges.pop()
            path.pop()

    for a in order:
        if a in graph:
            yield from expand([a], [], {a})


def enumerate_terminal_paths(
    graph: LabelledGraph,
    *,
    weight: GroupElem | None = None,
    nonzero: bool = False,
    terminals=None,
    limits: Limits = DEFAULT_LIMITS,
    require_exhaustive: bool = True,
) -> PathEnumeration:
    """Exhaustively enumerate terminal-linking paths, optionally filtered.

    weight selects paths of one weight (in the directed model a path matches
    when either traversal direction attains it); nonzero selects paths of
    nonzero weight.  Results come in a deterministic order.
    """
    if weight is not None and nonzero:
        raise ValueError("choose at most one filter")
    tset = graph.terminals if terminals is None else frozenset(terminals)
    zero = graph.group.zero()
    if weight is not None:
        weight = graph.group.element(weight)
    state = _EnumState()
    out = []
    for vertices, edge_ids in _iter_terminal_paths(graph, tset, limits.max_len, limits.max_paths, state):
        w = walk_weight(graph, vertices, edge_ids)
        if weight is not None:
            if w == weight:
                out.append(PathWitness(vertices, edge_ids, w))
            elif graph.model == DIRECTED and -w == weight:
                out.append(
                    PathWitness(tuple(reversed(vertices)), tuple(reversed(edge_ids)), weight)
                )
            continue
        if nonzero and w == zero:
            continue
        out.append(PathWitness(vertices, edge_ids, w))
    if state.truncated and require_exhaustive:
        raise LimitExceeded("path length during exhaustive enumeration", limits.max_len)
    out.sort(key=PathWitness.sort_key)
    return PathEnumeration(tuple(out), not state.truncated)


def iter_simple_cycles(
    graph: LabelledGraph, cycle_cap: int
) -> Iterator[tuple[tuple, tuple, GroupElem]]:
    """All simple cycles (vertices, edge ids, weight), each exactly once.

    Cycles of length two formed by parallel edges are included; weight is the
    plain label sum, so this is only meaningful in the orientation-free model.
    """
    emitted: set[frozenset] = set()
    count = 0
    for start in graph.vertices:
        sk = vertex_key(start)

        def expand(path: list, edges: list, used: set) -> Iterator[tuple[tuple, tuple, GroupElem]]:
            nonlocal count
            at = path[-1]
            for e, nxt in graph.incident(at):
                if nxt == start and len(edges) >= 1 and e.eid != edges[0]:
                    key = frozenset(edges) | {e.eid}
                    if key not in emitted:
                        emitted.add(key)
                        count += 1
                        if count > cycle_cap:
                            raise LimitExceeded("enumerated simple cycles", cycle_cap)
                        cyc_edges = tuple(edges) + (e.eid,)
                        w = graph.group.zero()
                        for eid in cyc_edges:
                            w = w + graph.edge(eid).label
                        yield tuple(path) + (start,), cyc_edges, w
                    continue
                if nxt in used or vertex_key(nxt) < sk:
                    continue
                path.append(nxt)
                edges.append(e.eid)
                used.add(nxt)
                yield from expand(path, edges, used)
                used.discard(nxt)
                edges.pop()
                path.pop()

        yield from expand([start], [], {start})


def _potential_certificate(graph: LabelledGraph) -> dict | None:
    """Per-vertex involutions phi with label(uv) = phi(u)+phi(v), if they exist.

    Such a certificate exhibits the labelling as a shift of the all-zero one,
    which forces every cycle weight to vanish.
    """
    group = graph.group
    zero = group.zero()
    phi: dict = {}
    for comp in graph.components():
        root = min(comp, key=vertex_key)
        phi[root] = zero
        stack = [root]
        seen = {root}
        while stack:
            x = stack.pop()
            for e, y in graph.incident(x):
                if y in seen:
                    continue
                val = e.label - phi[x]
                if val + val != zero:
                    return None
                phi[y] = val
                seen.add(y)
                stack.append(y)
    for e in graph.edges:
        if phi[e.u] + phi[e.v] != e.label:
            return None
    return phi


def is_gamma_bipartite(graph: LabelledGraph, cycle_cap: int | None = None) -> bool:
    """Whether every simple cycle has weight zero (orientation-free model)."""
    if graph.model != UNDIRECTED:
        raise PreconditionFailed("cycle weights are orientation-free only in the undirected model")
    if _potential_certificate(graph) is not None:
        return True
    cap = DEFAULT_LIMITS.cycle_cap if cycle_cap is None else cycle_cap
    zero = graph.group.zero()
    for _, _, w in iter_simple_cycles(graph, cap):
        if w != zero:
            return False
    return True


def normalize_to_zero(
    graph: LabelledGraph, cycle_cap: int | None = None
) -> tuple[list[tuple[object, GroupElem]], LabelledGraph]:
    """Shift sequence turning a 3-connected all-zero-cycle labelling into all-zero.

    Verifies both preconditions, then roots a spanning tree, fixes the root
    shift at zero, propagates g_v = label(uv) + g_u along tree edges and
    checks every remaining edge.
    """
    if graph.model != UNDIRECTED:
        raise PreconditionFailed("normalization applies to the orientation-free model")
    if not graph.is_three_connected():
        raise PreconditionFailed("graph is not 3-connected")
    if not is_gamma_bipartite(graph, cycle_cap):
        raise PreconditionFailed("labelling has a nonzero cycle")
    group = graph.group
    zero = group.zero()
    root = graph.vertices[0]
    g: dict = {root: zero}
    stack = [root]
    while stack:
        x = stack.pop()
        for e, y in graph.incident(x):
            if y not in g:
                g[y] = e.label + g[x]
                stack.append(y)
    for v, val in g.items():
        if val + val != zero:
            raise NormalizationFailed(f"vertex {v!r}")
    for e in graph.edges:
        if e.label + g[e.u] + g[e.v] != zero:
            raise NormalizationFailed(e.eid)
    shifts = [(v, g[v]) for v in graph.vertices if g[v] != zero]
    out = graph
    for v, val in shifts:
        out = out.shift(v, val)
    return shifts, out


def apply_shifts(graph: LabelledGraph, shifts) -> LabelledGraph:
    out = graph
    for v, val in shifts:
        out = out.shift(v, val)
    return out


# --- 3-blocks ---------------------------------------------------------------


@dataclass(frozen=True)
class Bridge:
    """A piece of the graph hanging off a block: component plus attachments."""

    vertices: tuple
    attachments: tuple
    edge_ids: tuple


@dataclass(frozen=True)
class ThreeBlock:
    vertices: tuple
    block_graph: LabelledGraph
    bridges: tuple[Bridge, ...]

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "graph": self.block_graph.to_json(),
            "bridges": [
                {
                    "vertices": list(b.vertices),
                    "attachments": list(b.attachments),
                    "edges": list(b.edge_ids),
                }
                for b in self.bridges
            ],
        }


def _pair_inseparable(graph: LabelledGraph, u, v) -> bool:
    """No deletion of at most two other vertices separates u from v."""
    import itertools

    others = [x for x in graph.vertices if x not in (u, v)]
    for r in (0, 1, 2):
        for cut in itertools.combinations(others, r):
            rest = graph.without_vertices(cut)
            if v not in rest.component_of(u):
                return False
    return True


def _maximal_cliques(vertices: list, adjacent: Callable) -> Iterator[set]:
    """Bron-Kerbosch without pivoting; fine at desk scale."""

    def bk(r: set, p: set, x: set):
        if not p and not x:
            yield set(r)
            return
        for v in sorted(p, key=vertex_key):
            yield from bk(
                r | {v},
                {y for y in p if y != v and adjacent(v, y)},
                {y for y in x if y != v and adjacent(v, y)},
            )
            p = p - {v}
            x = x | {v}

    yield from bk(set(), set(vertices), set())


def three_blocks(graph: LabelledGraph, limits: Limits = DEFAULT_LIMITS) -> list[ThreeBlock]:
    """All maximal >=3-vertex sets no two of whose members split at a 2-cut.

    Each block comes with its labelled form (one parallel edge per distinct
    weight realized by a path through the rest of the graph) and its bridges.
    """
    if graph.model != UNDIRECTED:
        raise PreconditionFailed("block decomposition is defined in the undirected model")
    verts = list(graph.vertices)
    insep: dict[tuple, bool] = {}
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            insep[(u, v)] = insep[(v, u)] = _pair_inseparable(graph, u, v)
    blocks = [
        tuple(sorted(c, key=vertex_key))
        for c in _maximal_cliques(verts, lambda a, b: insep[(a, b)])
        if len(c) >= 3
    ]
    blocks.sort(key=lambda b: tuple(map(vertex_key, b)))
    out = []
    for bverts in blocks:
        bset = set(bverts)
        by_pair = _block_path_weights(graph, bset, limits)
        edges = []
        next_id = 0
        for i, u in enumerate(bverts):
            for v in bverts[i + 1 :]:
                for w in by_pair.get((u, v), ()):
                    edges.append(Edge(f"b{next_id}", u, v, w, None))
                    next_id += 1
        block_graph = LabelledGraph(
            graph.group, UNDIRECTED, bverts, edges, graph.terminals & bset
        )
        out.append(ThreeBlock(bverts, block_graph, _bridges(graph, bset)))
    return out


def _block_path_weights(graph, bset, limits) -> dict[tuple, list[GroupElem]]:
    """Distinct weights realized by block-internal-free paths, per vertex pair."""
    seen: dict[tuple, set] = {}
    by_pair: dict[tuple, list[GroupElem]] = {}
    state = _EnumState()
    for vertices, edge_ids in _iter_terminal_paths(
        graph, frozenset(bset), limits.max_len, limits.max_paths, state
    ):
        pair = tuple(sorted((vertices[0], vertices[-1]), key=vertex_key))
        w = walk_weight(graph, vertices, edge_ids)
        if w not in seen.setdefault(pair, set()):
            seen[pair].add(w)
            by_pair.setdefault(pair, []).append(w)
    if state.truncated:
        raise LimitExceeded("path length during block-weight enumeration", limits.max_len)
    for weights in by_pair.values():
        weights.sort(key=graph.group.elem_sort_key)
    return by_pair


def _bridges(graph: LabelledGraph, bset: set) -> tuple[Bridge, ...]:
    out = []
    rest = graph.without_vertices(bset)
    for comp in rest.components():
        attach = set()
        edge_ids = []
        for e in graph.edges:
            endpoints = {e.u, e.v}
            if endpoints & comp:
                edge_ids.append(e.eid)
                attach |= endpoints & bset
        if len(attach) > 2:
            raise InternalInvariantError("bridge with more than two attachments")
        out.append(
            Bridge(
                tuple(sorted(comp, key=vertex_key)),
                tuple(sorted(attach, key=vertex_key)),
                tuple(sorted(edge_ids, key=_eid_key)),
            )
        )
    for e in graph.edges:
        if e.u in bset and e.v in bset:
            out.append(Bridge((), tuple(sorted((e.u, e.v), key=vertex_key)), (e.eid,)))
    out.sort(key=lambda b: (b.attachments and tuple(map(vertex_key, b.attachments)), b.vertices))
    return tuple(out)


# --- nonzero terminal path from a cycle and three fans -----------------------


def nonzero_terminal_path_from_fans(
    graph: LabelledGraph,
    cycle_vertices,
    cycle_edges,
    fans: list[PathWitness],
) -> PathWitness:
    """Extract a nonzero terminal-linking path from a nonzero cycle plus three
    disjoint terminal-to-cycle paths, by trying all six endpoint/arc splices."""
    if graph.model != UNDIRECTED:
        raise PreconditionFailed("fan extraction is defined in the undirected model")
    cycle_vertices = tuple(cycle_vertices)
    cycle_edges = tuple(cycle_edges)
    if cycle_vertices[0] != cycle_vertices[-1] or len(set(cycle_vertices[:-1])) != len(cycle_vertices) - 1:
        raise PreconditionFailed("cycle must be a closed simple walk")
    zero = graph.group.zero()
    cw = graph.group.zero()
    for eid in cycle_edges:
        cw = cw + graph.edge(eid).label
    if cw == zero:
        raise PreconditionFailed("cycle weight must be nonzero")
    if len(fans) != 3:
        raise PreconditionFailed("exactly three fans are required")
    cyc_set = set(cycle_vertices[:-1])
    terminals = graph.terminals
    if cyc_set & terminals:
        raise PreconditionFailed("cycle meets the terminal set")
    seen_vertices: set = set()
    oriented = []
    for fan in fans:
        if fan.vertices[0] not in terminals:
            if fan.vertices[-1] in terminals:
                fan = fan.reversed(graph)
            else:
                raise PreconditionFailed("fan lacks a terminal endpoint")
        vs = fan.vertices
        if vs[-1] not in cyc_set:
            raise PreconditionFailed("fan must end on the cycle")
        if set(vs[:-1]) & cyc_set:
            raise PreconditionFailed("fan meets the cycle before its endpoint")
        if any(v in terminals for v in vs[1:]):
            raise PreconditionFailed("fan touches a terminal internally")
        if set(vs) & seen_vertices:
            raise PreconditionFailed("fans are not pairwise disjoint")
        seen_vertices |= set(vs)
        oriented.append(fan)

    ring = list(zip(cycle_vertices[:-1], cycle_edges))  # vertex i, edge i->i+1
    pos = {v: i for i, (v, _) in enumerate(ring)}
    n = len(ring)

    def arc(i: int, j: int, forward: bool) -> tuple[tuple, tuple]:
        verts = [ring[i][0]]
        edges = []
        k = i
        while k != j:
            if forward:
                edges.append(ring[k][1])
                k = (k + 1) % n
            else:
                k = (k - 1) % n
                edges.append(ring[k][1])
            verts.append(ring[k][0])
        return tuple(verts), tuple(edges)

    for a_idx, b_idx in ((0, 1), (0, 2), (1, 2)):
        fa, fb = oriented[a_idx], oriented[b_idx]
        i, j = pos[fa.vertices[-1]], pos[fb.vertices[-1]]
        for forward in (True, False):
            mid_v, mid_e = arc(i, j, forward)
            verts = fa.vertices + mid_v[1:] + tuple(reversed(fb.vertices))[1:]
            edges = fa.edge_ids + mid_e + tuple(reversed(fb.edge_ids))
            w = walk_weight(graph, verts, edges)
            candidate = PathWitness(verts, edges, w)
            if w != zero:
                candidate.validate(graph)
                return candidate
    raise InternalInvariantError(
        "all six splices are zero despite a nonzero cycle and three disjoint fans"
    )
