from __future__ import annotations

import json

import pytest

from gammapath.cli import run
from gammapath.graphs import UNDIRECTED, DIRECTED, LabelledGraph

from util import Z


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    payload = json.loads(captured.out) if captured.out.strip() else None
    return code, payload, captured.err


def graph_file(tmp_path, graph, name="graph.json"):
    path = tmp_path / name
    path.write_text(json.dumps(graph.to_json()))
    return str(path)


def test_classify_positive(capsys):
    code, payload, _ = invoke(
        capsys, "classify", "--group", '{"type":"cyclic_product","orders":[4]}', "--ell", "2"
    )
    assert code == 0
    assert payload["ep"] is True


def test_classify_negative_exit_code(capsys):
    code, payload, _ = invoke(
        capsys, "classify", "--group", '{"type":"cyclic_product","orders":[8]}', "--ell", "4"
    )
    assert code == 1
    assert payload["ep"] is False


def test_classify_zero_family_default(capsys):
    code, payload, _ = invoke(
        capsys, "classify", "--group", '{"type":"cyclic_product","orders":[6]}'
    )
    assert code == 1
    assert payload["ell"] is None and payload["ep"] is False


def test_pack_and_cover(tmp_path, capsys):
    z2 = Z(2)
    g = LabelledGraph.build(
        z2,
        UNDIRECTED,
        [("a", "x", 0), ("x", "b", 0), ("c", "y", 0), ("y", "d", 0)],
        ["a", "b", "c", "d"],
    )
    path = graph_file(tmp_path, g)
    code, payload, _ = invoke(capsys, "pack", "--graph", path, "--family", "weight:0")
    assert code == 0
    assert payload["nu"] == 2
    assert len(payload["packing"]) == 2
    code, payload, _ = invoke(capsys, "cover", "--graph", path, "--family", "weight:0")
    assert code == 0
    assert payload["tau"] == 2


def test_family_parsing_aba(tmp_path, capsys):
    z2 = Z(2)
    g = LabelledGraph.build(
        z2, UNDIRECTED, [("a", "m", 0), ("m", "b", 0)], ["a", "b"]
    )
    path = graph_file(tmp_path, g)
    code, payload, _ = invoke(capsys, "duality", "--graph", path, "--family", "aba:m")
    assert code == 0
    assert payload["nu"] == 1 and payload["tau"] == 1
    assert payload["theorem_backed"] is True


def test_frame_cover_on_empty_family(tmp_path, capsys):
    z2 = Z(2)
    g = LabelledGraph.build(
        z2, DIRECTED, [("a", "x", 1, "a"), ("x", "b", 0, "x")], ["a", "b"]
    )
    path = graph_file(tmp_path, g)
    code, payload, _ = invoke(capsys, "frame", "--graph", path, "--k", "1")
    assert code == 0
    assert payload["outcome"]["kind"] == "cover"
    assert payload["outcome"]["vertices"] == []
    assert payload["checks"]["verified_empty"] is True


def test_frame_packing_with_audit(tmp_path, capsys):
    z2 = Z(2)
    g = LabelledGraph.build(
        z2, DIRECTED, [("a", "x", 1, "a"), ("x", "b", 1, "x")], ["a", "b"]
    )
    path = graph_file(tmp_path, g)
    code, payload, _ = invoke(capsys, "frame", "--graph", path, "--k", "1", "--debug")
    assert code == 0
    assert payload["outcome"]["kind"] == "packing"
    assert payload["audit"][0]["move"] == "new-component"


def test_chain_found_and_none(tmp_path, capsys):
    chain = {"group": {"type": "cyclic_product", "orders": [3]}, "core_weight": [1], "deltas": [[1], [1]]}
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(chain))
    code, payload, _ = invoke(capsys, "chain", "--chain", str(path), "--target", "[0]")
    assert code == 0
    assert payload["verdict"] == "FOUND"
    assert payload["subset"] == [0, 1]

    chain = {"group": {"type": "cyclic_product", "orders": [4]}, "core_weight": [1], "deltas": [[2], [2]]}
    path.write_text(json.dumps(chain))
    code, payload, _ = invoke(capsys, "chain", "--chain", str(path), "--target", "[0]")
    assert code == 1
    assert payload["verdict"] == "NONE"
    assert payload["reachable"] == [[1], [3]]


def test_chain_embedded_splices_a_path(tmp_path, capsys):
    z5 = Z(5)
    g = LabelledGraph.build(
        z5,
        UNDIRECTED,
        [
            ("a", "m", 1), ("m", "n", 0), ("n", "b", 0),   # core, weight 1
            ("m", "d", 2), ("d", "n", 2),                   # detour, delta 4
        ],
        ["a", "b"],
    )
    payload = {
        "graph": g.to_json(),
        "core": {"vertices": ["a", "m", "n", "b"], "edges": [0, 1, 2]},
        "detours": [{"vertices": ["m", "d", "n"], "edges": [3, 4]}],
    }
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(payload))
    code, out, _ = invoke(capsys, "chain", "--chain", str(path), "--target", "[0]")
    assert code == 0
    assert out["verdict"] == "FOUND"
    assert out["subset"] == [0]
    assert out["path"]["vertices"] == ["a", "m", "d", "n", "b"]
    assert out["path"]["weight"] == [0]


def test_limit_exceeded_exit_code_and_json(tmp_path, capsys):
    import itertools

    z2 = Z(2)
    edges = [(u, v, 0) for u, v in itertools.combinations(range(8), 2)]
    g = LabelledGraph.build(z2, UNDIRECTED, edges, [0, 1, 2, 3])
    code, payload, err = invoke(
        capsys,
        "pack", "--graph", graph_file(tmp_path, g), "--family", "weight:0",
        "--max-paths", "5",
    )
    assert code == 3
    assert payload["error"] == "limit-exceeded"
    assert err


def test_gadget_build_and_verify(capsys):
    code, payload, _ = invoke(
        capsys,
        "gadget",
        "--variant", "gamma-double-prime",
        "--n", "2",
        "--group", '{"type":"cyclic_product","orders":[4]}',
        "--ell", "1",
        "--g", "2",
        "--verify",
    )
    assert code == 0
    assert payload["verify"]["nu"] == 1
    assert payload["verify"]["uses_top_row"] is True
    assert len(payload["graph"]["vertices"]) == 8


def test_gadget_gamma_over_integers(capsys):
    code, payload, _ = invoke(capsys, "gadget", "--variant", "gamma", "--n", "2", "--ell", "0")
    assert code == 0
    assert payload["params"]["sequence"] == [1, 2]
    assert payload["graph"]["group"] == {"type": "integers"}
    code, directed_payload, _ = invoke(
        capsys, "gadget", "--variant", "gamma", "--n", "2", "--ell", "0", "--model", "directed"
    )
    assert code == 0
    assert all("tail" in e for e in directed_payload["graph"]["edges"])


def test_bipartite_verdicts(tmp_path, capsys):
    z2 = Z(2)
    good = LabelledGraph.build(
        z2, UNDIRECTED, [("a", "b", 1), ("b", "c", 1), ("a", "c", 0)], []
    )
    code, payload, _ = invoke(capsys, "bipartite", "--graph", graph_file(tmp_path, good))
    assert code == 0 and payload["gamma_bipartite"] is True
    bad = LabelledGraph.build(
        z2, UNDIRECTED, [("a", "b", 1), ("b", "c", 0), ("a", "c", 0)], []
    )
    code, payload, _ = invoke(capsys, "bipartite", "--graph", graph_file(tmp_path, bad, "g2.json"))
    assert code == 1 and payload["gamma_bipartite"] is False


def test_normalize_error_path(tmp_path, capsys):
    z2 = Z(2)
    import itertools

    pairs = list(itertools.combinations("abcd", 2))
    bad = LabelledGraph.build(z2, UNDIRECTED, [(u, v, 1) for u, v in pairs], [])
    code, payload, err = invoke(capsys, "normalize", "--graph", graph_file(tmp_path, bad))
    assert code == 1
    assert "error" in payload
    assert err


def test_normalize_success(tmp_path, capsys):
    z2 = Z(2)
    import itertools

    phi = {"a": 1, "b": 0, "c": 0, "d": 0}
    pairs = list(itertools.combinations("abcd", 2))
    g = LabelledGraph.build(
        z2, UNDIRECTED, [(u, v, (phi[u] + phi[v]) % 2) for u, v in pairs], []
    )
    code, payload, _ = invoke(capsys, "normalize", "--graph", graph_file(tmp_path, g))
    assert code == 0
    assert all(e["label"] == [0] for e in payload["graph"]["edges"])


def test_blocks_output(tmp_path, capsys):
    z2 = Z(2)
    g = LabelledGraph.build(
        z2,
        UNDIRECTED,
        [("a", "b", 0), ("a", "c", 0), ("b", "c", 0), ("a", "d", 0), ("b", "d", 0)],
        [],
    )
    code, payload, _ = invoke(capsys, "blocks", "--graph", graph_file(tmp_path, g))
    assert code == 0
    assert [b["vertices"] for b in payload["blocks"]] == [["a", "b", "c"], ["a", "b", "d"]]


def test_verify_suite_small(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, payload, err = invoke(
        capsys,
        "verify-suite",
        "--seed", "7",
        "--scale", "small",
        "--budget", "60",
        "--threads", "2",
        "--only", "cauchy-davenport", "oracle-soundness", "gadgets",
        "--out", str(out),
    )
    assert code == 0
    assert payload["summary"]["fail"] == 0
    assert {c["id"] for c in payload["checks"]} == {"cauchy-davenport", "oracle-soundness", "gadgets"}
    assert json.loads(out.read_text()) == payload
    assert "cauchy-davenport: PASS" in err


def test_verify_suite_deterministic(capsys):
    code1, payload1, _ = invoke(
        capsys, "verify-suite", "--seed", "3", "--scale", "small", "--threads", "1",
        "--only", "oracle-soundness",
    )
    code2, payload2, _ = invoke(
        capsys, "verify-suite", "--seed", "3", "--scale", "small", "--threads", "1",
        "--only", "oracle-soundness",
    )
    assert code1 == code2 == 0
    c1 = payload1["checks"][0]
    c2 = payload2["checks"][0]
    assert c1["detail"] == c2["detail"]


def test_usage_error_exit_code(capsys):
    code = run(["pack", "--family", "weight:0"])  # missing --graph
    capsys.readouterr()
    assert code == 2


def test_stdout_is_json_on_stdin_graph(tmp_path, capsys, monkeypatch):
    import io

    z2 = Z(2)
    g = LabelledGraph.build(z2, UNDIRECTED, [("a", "b", 0)], ["a", "b"])
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(g.to_json())))
    code, payload, _ = invoke(capsys, "pack", "--graph", "-", "--family", "weight:0")
    assert code == 0
    assert payload["nu"] == 1
