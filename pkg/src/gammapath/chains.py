"""Core-path-plus-detours structures and rerouting to a prescribed weight.

A chain is a terminal-linking core path together with disjoint detours, each
spanning its own interval of the core; replacing interval i by its detour
changes the total weight by a fixed delta.  Subset-sum dynamic programming
over the group decides which targets are attainable; over a prime field every
target is attainable once there are p-1 nonzero deltas, and the bound is
sharp.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInvariantError, PreconditionFailed
from .graphs import UNDIRECTED, LabelledGraph, PathWitness, walk_weight
from .groups import CyclicProduct, GroupElem, GroupSpec, _is_prime, sumset


@dataclass(frozen=True)
class CycleChain:
    """Core path plus detours; abstract (weights only) or embedded in a graph.

    deltas[i] is detour weight minus interval weight; the chain is nonzero
    when every delta is.  Embedded chains also carry the geometry and can be
    rerouted into a concrete path witness.
    """

    group: GroupSpec
    core_weight: GroupElem
    deltas: tuple[GroupElem, ...]
    graph: LabelledGraph | None = None
    core: PathWitness | None = None
    detours: tuple[PathWitness, ...] = ()
    intervals: tuple[tuple[int, int], ...] = ()  # index range on the core, inclusive

    @property
    def length(self) -> int:
        return len(self.deltas)

    @property
    def is_nonzero(self) -> bool:
        zero = self.group.zero()
        return all(d != zero for d in self.deltas)

    @property
    def is_embedded(self) -> bool:
        return self.graph is not None

    @classmethod
    def abstract(cls, group: GroupSpec, core_weight, deltas) -> "CycleChain":
        core_weight = group.element(core_weight)
        return cls(group, core_weight, tuple(group.element(d) for d in deltas))

    @classmethod
    def embedded(
        cls, graph: LabelledGraph, core: PathWitness, detours: list[PathWitness]
    ) -> "CycleChain":
        """Validate the geometry and compute interval deltas."""
        if graph.model != UNDIRECTED:
            raise PreconditionFailed("chains live in the orientation-free model")
        core.validate(graph)
        pos = {v: i for i, v in enumerate(core.vertices)}
        terminals = graph.terminals
        used: set = set()
        intervals = []
        deltas = []
        oriented = []
        for q in detours:
            if set(q.vertices) & terminals:
                raise PreconditionFailed("detour touches the terminal set")
            ends = [v for v in (q.vertices[0], q.vertices[-1])]
            if not all(v in pos for v in ends):
                raise PreconditionFailed("detour endpoints must lie on the core")
            if any(v in pos for v in q.vertices[1:-1]):
                raise PreconditionFailed("detour interior meets the core")
            if set(q.vertices) & used:
                raise PreconditionFailed("detours are not pairwise disjoint")
            used |= set(q.vertices)
            i, j = sorted((pos[ends[0]], pos[ends[1]]))
            if i == j:
                raise PreconditionFailed("detour must span a nontrivial interval")
            if q.vertices[0] != core.vertices[i]:
                q = q.reversed(graph)
            q.validate(graph, as_terminal_path=False)
            intervals.append((i, j))
            oriented.append(q)
        order = sorted(range(len(intervals)), key=lambda t: intervals[t])
        intervals = [intervals[t] for t in order]
        oriented = [oriented[t] for t in order]
        last = -1
        for i, j in intervals:
            if i <= last:
                raise PreconditionFailed("detour intervals overlap along the core")
            last = j
        for q, (i, j) in zip(oriented, intervals):
            seg_v = core.vertices[i : j + 1]
            seg_e = core.edge_ids[i:j]
            seg_w = walk_weight(graph, seg_v, seg_e)
            deltas.append(q.weight - seg_w)
        return cls(
            graph.group,
            core.weight,
            tuple(deltas),
            graph,
            core,
            tuple(oriented),
            tuple(intervals),
        )

    def to_json(self) -> dict:
        out = {
            "group": self.group.to_json(),
            "core_weight": self.core_weight.to_json(),
            "deltas": [d.to_json() for d in self.deltas],
        }
        if self.is_embedded:
            out["core"] = self.core.to_json()
            out["detours"] = [q.to_json() for q in self.detours]
        return out


@dataclass(frozen=True)
class Reroute:
    """A subset of detours realizing a target weight, plus the spliced path."""

    subset: tuple[int, ...]
    weight: GroupElem
    path: PathWitness | None


def reachable_weights(chain: CycleChain) -> frozenset[GroupElem]:
    """All weights attainable by switching any subset of detours on."""
    if not chain.group.is_finite:
        raise PreconditionFailed("reachability needs a finite group")
    zero = chain.group.zero()
    acc = frozenset({chain.core_weight})
    for d in chain.deltas:
        acc = sumset(acc, frozenset({zero, d}))
    return acc


def reroute_to_weight(chain: CycleChain, target) -> Reroute | None:
    """Reroute the chain to the target weight, or None when unattainable.

    Subset-sum dynamic programming over the group, one reachable-set per
    suffix; the witness subset is the lexicographically smallest one, rebuilt
    front to back against the suffix sets.
    """
    group = chain.group
    if not group.is_finite:
        raise PreconditionFailed("rerouting needs a finite group")
    target = group.element(target)
    zero = group.zero()
    n = chain.length
    # suffix[i] = weights attainable from detours i..n-1
    suffix: list[frozenset] = [frozenset({zero})] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = sumset(suffix[i + 1], frozenset({zero, chain.deltas[i]}))
    if target - chain.core_weight not in suffix[0]:
        return None
    subset = []
    acc = chain.core_weight
    start = 0
    while acc != target:
        for i in range(start, n):
            step = acc + chain.deltas[i]
            if target - step in suffix[i + 1]:
                subset.append(i)
                acc = step
                start = i + 1
                break
        else:
            raise InternalInvariantError("suffix reachability lied during reconstruction")
    path = _splice(chain, subset) if chain.is_embedded else None
    if path is not None and path.weight != target:
        raise InternalInvariantError("spliced path weight disagrees with the target")
    return Reroute(tuple(subset), target, path)


def _splice(chain: CycleChain, subset: list[int]) -> PathWitness:
    take = set(subset)
    verts: list = [chain.core.vertices[0]]
    edges: list = []
    core = chain.core
    pos = 0
    for idx, (a, b) in enumerate(chain.intervals):
        # copy the core up to the interval start
        while pos < a:
            edges.append(core.edge_ids[pos])
            pos += 1
            verts.append(core.vertices[pos])
        if idx in take:
            q = chain.detours[idx]
            verts.extend(q.vertices[1:])
            edges.extend(q.edge_ids)
            pos = b
        # otherwise the interval is copied by the loop above on the next round
    while pos < len(core.edge_ids):
        edges.append(core.edge_ids[pos])
        pos += 1
        verts.append(core.vertices[pos])
    w = walk_weight(chain.graph, tuple(verts), tuple(edges))
    witness = PathWitness(tuple(verts), tuple(edges), w)
    witness.validate(chain.graph)
    return witness


def zero_path_from_chain(chain: CycleChain) -> Reroute:
    """Reroute a nonzero prime-field chain of length >= p-1 to weight zero."""
    factors = chain.group.invariant_factors() if chain.group.is_finite else None
    if not factors or len(factors) != 1 or not _is_prime(factors[0]):
        raise PreconditionFailed("guaranteed rerouting needs a prime-order cyclic group")
    p = factors[0]
    if not chain.is_nonzero:
        raise PreconditionFailed("chain has a zero delta")
    if chain.length < p - 1:
        raise PreconditionFailed(f"chain length {chain.length} below {p - 1}")
    out = reroute_to_weight(chain, chain.group.zero())
    if out is None:
        raise InternalInvariantError("prime-field chain missed a weight; sumset bound broken")
    return out


def sharpness_witness(p: int) -> CycleChain:
    """Ladder-shaped chain of length p-2 with unit core weight and unit deltas.

    Zero weight is unreachable, showing the p-1 length bound is tight; the
    chain is embedded in a concrete labelled graph and checked on build.
    """
    if not _is_prime(p) or p < 3:
        raise ValueError("need a prime p >= 3")
    group = CyclicProduct((p,))
    n = p - 2
    edges = []
    # core: a - x1 - y1 - x2 - y2 - ... - xn - yn - b, first edge weight 1
    names = ["a"]
    for i in range(1, n + 1):
        names += [f"x{i}", f"y{i}"]
    names.append("b")
    for s, t in zip(names, names[1:]):
        edges.append((s, t, 1 if s == "a" else 0))
    core_edge_count = len(edges)
    for i in range(1, n + 1):
        edges.append((f"x{i}", f"d{i}", 1))
        edges.append((f"d{i}", f"y{i}", 0))
    graph = LabelledGraph.build(group, UNDIRECTED, edges, ["a", "b"])
    core_vertices = tuple(names)
    core_edges = tuple(range(core_edge_count))
    core = PathWitness(
        core_vertices, core_edges, walk_weight(graph, core_vertices, core_edges)
    )
    detours = []
    for i in range(1, n + 1):
        vs = (f"x{i}", f"d{i}", f"y{i}")
        es = (core_edge_count + 2 * (i - 1), core_edge_count + 2 * (i - 1) + 1)
        detours.append(PathWitness(vs, es, walk_weight(graph, vs, es)))
    chain = CycleChain.embedded(graph, core, detours)
    if chain.core_weight != group.element(1) or any(
        d != group.element(1) for d in chain.deltas
    ):
        raise InternalInvariantError("ladder construction produced wrong weights")
    if reroute_to_weight(chain, group.zero()) is not None:
        raise InternalInvariantError("sharpness chain unexpectedly reaches zero")
    return chain
