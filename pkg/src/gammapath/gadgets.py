"""Grid-based counterexample families and their brute-force verification.

All three labellings live on the same frame: an n-by-n grid with a pendant
terminal on every vertex of the left column (u side) and of the right column
(w side).  The adversarial labels sit on the pendants and, for two of the
variants, on the top row, so that every path of the targeted weight must
cross the grid and visit the top row; two such paths always collide.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DEFAULT_LIMITS, Limits, PreconditionFailed
from .graphs import DIRECTED, UNDIRECTED, Edge, LabelledGraph, vertex_key
from .groups import (
    GroupElem,
    GroupSpec,
    IntegerGroup,
    cyclic_subgroup,
    _coset_order,
)
from .packing import WEIGHT, PathFamilySpec, max_packing, min_cover


@dataclass(frozen=True)
class GridGadget:
    """A built counterexample instance: the graph plus its parameters."""

    variant: str
    n: int
    graph: LabelledGraph
    target: GroupElem
    params: dict

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "n": self.n,
            "params": {k: v.to_json() if isinstance(v, GroupElem) else v for k, v in self.params.items()},
            "target": self.target.to_json(),
            "graph": self.graph.to_json(),
        }


def _grid_edges(n: int, group: GroupSpec, label_of) -> tuple[list, list]:
    """Vertices and edges of the pendant-decorated grid; labels via callback."""
    vertices = []
    for r in range(1, n + 1):
        for c in range(1, n + 1):
            vertices.append(f"v{r}_{c}")
    for i in range(1, n + 1):
        vertices += [f"u{i}", f"w{i}"]
    edges = []

    def add(u, v, kind, idx):
        edges.append((u, v, label_of(kind, idx)))

    for r in range(1, n + 1):
        for c in range(1, n + 1):
            if c < n:
                add(f"v{r}_{c}", f"v{r}_{c+1}", "row", (r, c))
            if r < n:
                add(f"v{r}_{c}", f"v{r+1}_{c}", "col", (r, c))
    for i in range(1, n + 1):
        add(f"u{i}", f"v{i}_1", "u", i)
        add(f"v{i}_{n}", f"w{i}", "w", i)
    return vertices, edges


def _terminals(n: int) -> list[str]:
    return [f"u{i}" for i in range(1, n + 1)] + [f"w{i}" for i in range(1, n + 1)]


def greedy_separated_sequence(n: int, ell: int) -> list[int]:
    """Smallest positive integers g_k avoiding g_j, ell-g_j, g_j+-ell, g_j+-2ell."""
    seq: list[int] = []
    candidate = 0
    while len(seq) < n:
        candidate += 1
        excluded = False
        for gj in seq:
            if candidate in (gj, ell - gj, gj + ell, gj - ell, gj + 2 * ell, gj - 2 * ell):
                excluded = True
                break
        if not excluded:
            seq.append(candidate)
    return seq


def build_integer_gadget(n: int, ell: int, model: str = UNDIRECTED) -> GridGadget:
    """Integer-labelled grid with greedily separated pendant labels.

    Every terminal path of weight ell joins u_i to w_{n+1-i}, so no two are
    disjoint, while covers must grow with n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    group = IntegerGroup()
    gs = greedy_separated_sequence(n, ell)

    def label_of(kind, idx):
        if kind == "u":
            return group.element(ell - gs[idx - 1])
        if kind == "w":
            return group.element(gs[(n + 1 - idx) - 1])
        return group.zero()

    vertices, raw = _grid_edges(n, group, label_of)
    if model == DIRECTED:
        edges = []
        for i, (u, v, lab) in enumerate(raw):
            # pendants oriented from u_i into the grid and from the grid into w_i;
            # interior edges oriented from the smaller endpoint
            tail = u
            edges.append(Edge(i, u, v, lab, tail))
        graph = LabelledGraph(group, DIRECTED, vertices, edges, _terminals(n))
    else:
        graph = LabelledGraph.build(group, UNDIRECTED, raw, _terminals(n), vertices)
    return GridGadget(
        "gamma",
        n,
        graph,
        group.element(ell),
        {"ell": group.element(ell), "sequence": [int(x) for x in gs]},
    )


def build_quotient_gadget(n: int, group: GroupSpec, g1, g2) -> GridGadget:
    """Grid labelled with a pair whose coset order in the quotient exceeds two.

    Zero-weight terminal paths must run u-side to w-side through a top-row
    edge; the u-u and w-w weights stay in nonzero cosets.
    """
    if n < 1:
        raise ValueError("n must be positive")
    g1 = group.element(g1)
    g2 = group.element(g2)
    zero = group.zero()
    if g1 == zero or g2 == zero:
        raise PreconditionFailed("both labels must be nonzero")
    if _coset_order(g1, cyclic_subgroup(g2)) <= 2:
        raise PreconditionFailed("coset order condition fails; not a counterexample pair")

    def label_of(kind, idx):
        if kind == "u":
            return g1
        if kind == "w":
            return g2 - g1
        if kind == "row" and idx[0] == 1:
            return g2
        return zero

    vertices, raw = _grid_edges(n, group, label_of)
    graph = LabelledGraph.build(group, UNDIRECTED, raw, _terminals(n), vertices)
    return GridGadget("gamma-prime", n, graph, zero, {"g1": g1, "g2": g2})


def build_subgroup_escape_gadget(n: int, group: GroupSpec, ell, g) -> GridGadget:
    """Grid labelled for a target weight outside the cyclic subgroup of g.

    Weight-ell terminal paths must cross u-side to w-side and use a top-row
    edge; u-u and w-w weights live in cosets that avoid ell.
    """
    if n < 1:
        raise ValueError("n must be positive")
    ell = group.element(ell)
    g = group.element(g)
    if g == group.zero():
        raise PreconditionFailed("the subgroup generator must be nonzero")
    if ell in cyclic_subgroup(g):
        raise PreconditionFailed("target lies in the subgroup; not a counterexample pair")

    def label_of(kind, idx):
        if kind == "u":
            return ell - g
        if kind == "row" and idx[0] == 1:
            return g
        return group.zero()

    vertices, raw = _grid_edges(n, group, label_of)
    graph = LabelledGraph.build(group, UNDIRECTED, raw, _terminals(n), vertices)
    return GridGadget("gamma-double-prime", n, graph, ell, {"ell": ell, "g": g})


def verify_gadget(gadget: GridGadget, limits: Limits = DEFAULT_LIMITS) -> dict:
    """Brute-force the packing and covering numbers and the structural claims.

    Returns measured values plus named check verdicts; callers decide which
    checks are binding.
    """
    graph = gadget.graph
    n = gadget.n
    spec = PathFamilySpec(WEIGHT, graph, weight=gadget.target)
    members = spec.members(limits)
    nu, _ = max_packing(members, limits)
    tau, cover = min_cover(members, limits)

    u_names = {f"u{i}" for i in range(1, n + 1)}
    w_names = {f"w{i}" for i in range(1, n + 1)}
    top_row_edges = {
        e.eid
        for e in graph.edges
        if e.u.startswith("v1_") and e.v.startswith("v1_")
    }
    crossings_ok = True
    top_row_ok = True
    antidiagonal_ok = True
    for m in members:
        ends = set(m.endpoints)
        if not (ends & u_names and ends & w_names):
            crossings_ok = False
        if gadget.variant in ("gamma-prime", "gamma-double-prime"):
            if not set(m.edge_ids) & top_row_edges:
                top_row_ok = False
        if gadget.variant == "gamma":
            pair_ok = False
            for i in range(1, n + 1):
                if ends == {f"u{i}", f"w{n + 1 - i}"}:
                    pair_ok = True
            if not pair_ok:
                antidiagonal_ok = False

    checks = {
        "family_size": len(members),
        "nu": nu,
        "tau": tau,
        "cover": sorted(cover, key=vertex_key),
        "no_two_disjoint": nu <= 1,
        "endpoints_cross": crossings_ok,
        "cover_at_least_n": tau >= n,
    }
    if gadget.variant in ("gamma-prime", "gamma-double-prime"):
        checks["uses_top_row"] = top_row_ok
    if gadget.variant == "gamma":
        checks["antidiagonal_pairing"] = antidiagonal_ok
    return checks
