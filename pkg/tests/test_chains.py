from __future__ import annotations

import itertools

import pytest

from gammapath.chains import (
    CycleChain,
    reachable_weights,
    reroute_to_weight,
    sharpness_witness,
    zero_path_from_chain,
)
from gammapath.errors import PreconditionFailed
from gammapath.graphs import UNDIRECTED, LabelledGraph, PathWitness, walk_weight

from util import Z


def test_reroute_identity_target():
    z3 = Z(3)
    chain = CycleChain.abstract(z3, 1, [1, 1])
    out = reroute_to_weight(chain, z3.element(1))
    assert out.subset == ()
    assert out.weight == z3.element(1)


def test_reroute_hand_dp():
    z3 = Z(3)
    chain = CycleChain.abstract(z3, 1, [1, 1])
    out = reroute_to_weight(chain, z3.zero())
    assert out.subset == (0, 1)  # 1 + 1 + 1 = 0 mod 3
    assert out.weight == z3.zero()


def test_reroute_lex_smallest_subset():
    z5 = Z(5)
    # target 2 is reachable via (1), (0,3), and (0,1,2); tuple-lex smallest wins
    chain = CycleChain.abstract(z5, 0, [1, 2, 4, 1])
    out = reroute_to_weight(chain, z5.element(2))
    assert out.subset == (0, 1, 2)
    total = z5.zero()
    for i in out.subset:
        total = total + z5.element([1, 2, 4, 1][i])
    assert total == z5.element(2)


def test_reroute_unreachable_returns_none():
    z4 = Z(4)
    chain = CycleChain.abstract(z4, 1, [2, 2])
    assert reroute_to_weight(chain, z4.zero()) is None
    assert reachable_weights(chain) == {z4.element(1), z4.element(3)}


def test_prime_field_full_length_never_misses():
    z5 = Z(5)
    chain = CycleChain.abstract(z5, 1, [1, 1, 1, 1])
    out = zero_path_from_chain(chain)
    assert out.subset == (0, 1, 2, 3)  # 1 + 4*1 = 0 mod 5


def test_zero_path_exhaustive_p3():
    z3 = Z(3)
    for core in range(3):
        for deltas in itertools.product([1, 2], repeat=2):
            chain = CycleChain.abstract(z3, core, deltas)
            out = zero_path_from_chain(chain)
            total = z3.element(core)
            for i in out.subset:
                total = total + z3.element(deltas[i])
            assert total == z3.zero()


def test_zero_path_requires_nonzero_chain():
    z3 = Z(3)
    with pytest.raises(PreconditionFailed):
        zero_path_from_chain(CycleChain.abstract(z3, 1, [0, 1]))
    with pytest.raises(PreconditionFailed):
        zero_path_from_chain(CycleChain.abstract(z3, 1, [1]))
    with pytest.raises(PreconditionFailed):
        zero_path_from_chain(CycleChain.abstract(Z(4), 1, [1, 1, 1]))


def _embedded_chain(group, core_labels, detour_specs, terminals=("a", "b")):
    """Build a path a-v1-...-b with 2-edge detours over chosen intervals."""
    n = len(core_labels)
    names = ["a"] + [f"v{i}" for i in range(1, n)] + ["b"]
    edges = [(names[i], names[i + 1], core_labels[i]) for i in range(n)]
    detour_paths = []
    for d_idx, (i, j, w1, w2) in enumerate(detour_specs):
        mid = f"d{d_idx}"
        edges.append((names[i], mid, w1))
        edges.append((mid, names[j], w2))
    graph = LabelledGraph.build(group, UNDIRECTED, edges, terminals)
    core_vs = tuple(names)
    core_es = tuple(range(n))
    core = PathWitness(core_vs, core_es, walk_weight(graph, core_vs, core_es))
    for d_idx, (i, j, w1, w2) in enumerate(detour_specs):
        mid = f"d{d_idx}"
        es = (n + 2 * d_idx, n + 2 * d_idx + 1)
        vs = (names[i], mid, names[j])
        detour_paths.append(PathWitness(vs, es, walk_weight(graph, vs, es)))
    return graph, CycleChain.embedded(graph, core, detour_paths)


def test_embedded_chain_deltas_and_splice():
    z5 = Z(5)
    graph, chain = _embedded_chain(
        z5,
        core_labels=[1, 0, 0, 0, 0],
        detour_specs=[(1, 2, 2, 0), (3, 4, 1, 1)],
    )
    assert chain.core_weight == z5.element(1)
    assert [d.value for d in chain.deltas] == [(2,), (2,)]
    out = reroute_to_weight(chain, z5.zero())
    assert out is not None
    assert out.path is not None
    out.path.validate(graph)
    assert out.path.weight == z5.zero()
    # both detours switched on: 1 + 2 + 2 = 0 mod 5
    assert out.subset == (0, 1)
    assert "d0" in out.path.vertices and "d1" in out.path.vertices


def test_embedded_rejects_overlapping_intervals():
    z3 = Z(3)
    with pytest.raises(PreconditionFailed):
        _embedded_chain(z3, [0, 0, 0], [(0, 2, 1, 0), (1, 3, 1, 0)])


def test_embedded_rejects_terminal_touching_detour():
    z3 = Z(3)
    with pytest.raises(PreconditionFailed):
        # detour attached at the terminal endpoint of the core
        _embedded_chain(z3, [0, 0], [(0, 1, 1, 0)])


def test_sharpness_families():
    for p, expect in ((3, {1, 2}), (5, {1, 2, 3, 4}), (7, {1, 2, 3, 4, 5, 6})):
        chain = sharpness_witness(p)
        assert chain.length == p - 2
        group = chain.group
        reach = {e.value[0] for e in reachable_weights(chain)}
        assert reach == expect
        assert reroute_to_weight(chain, group.zero()) is None


def test_coset_confinement_over_z4():
    # unit core, deltas of order two: reachable weights stay in the odd coset
    z4 = Z(4)
    for length in range(1, 7):
        chain = CycleChain.abstract(z4, 1, [2] * length)
        reach = {e.value[0] for e in reachable_weights(chain)}
        assert reach <= {1, 3}
        assert reroute_to_weight(chain, z4.zero()) is None


from hypothesis import given, settings
from hypothesis import strategies as st


@settings(max_examples=80, deadline=None)
@given(
    order=st.integers(min_value=2, max_value=9),
    core=st.integers(min_value=0, max_value=8),
    deltas=st.lists(st.integers(min_value=0, max_value=8), min_size=0, max_size=6),
    target=st.integers(min_value=0, max_value=8),
)
def test_reroute_agrees_with_subset_enumeration(order, core, deltas, target):
    group = Z(order)
    chain = CycleChain.abstract(group, core % order, [d % order for d in deltas])
    goal = group.element(target % order)
    out = reroute_to_weight(chain, goal)
    reachable = set()
    for mask in range(1 << len(deltas)):
        total = chain.core_weight
        for i in range(len(deltas)):
            if mask >> i & 1:
                total = total + chain.deltas[i]
        reachable.add(total)
    if out is None:
        assert goal not in reachable
    else:
        total = chain.core_weight
        for i in out.subset:
            total = total + chain.deltas[i]
        assert total == goal
    assert reachable_weights(chain) == reachable


def test_chain_json():
    z3 = Z(3)
    chain = CycleChain.abstract(z3, 1, [1, 2])
    data = chain.to_json()
    assert data["core_weight"] == [1]
    assert data["deltas"] == [[1], [2]]
