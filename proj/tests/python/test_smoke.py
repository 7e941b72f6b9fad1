"""Smoke tests for the expansionforge python module."""

import json

import pytest

import expansionforge as ef


def test_fixture_roundtrip(tmp_path):
    g = ef.generate_fixture(seed=4, nodes=6, density=0.6)
    assert ef.validate(g) == []
    assert len(g.node_ids) == 6

    path = tmp_path / "g.gg.json"
    ef.save_graph(g, str(path))
    back = ef.load_graph(str(path))
    assert back == g
    assert back.to_json() == g.to_json()
    assert json.loads(g.to_json())["name"] == g.name

    again = ef.loads(g.to_json())
    assert again == g


def test_parse_errors_are_value_errors():
    with pytest.raises(ValueError):
        ef.loads("{broken")
    with pytest.raises(ValueError):
        ef.loads(json.dumps({
            "name": "x",
            "nodes": [{"id": "a", "label": ""}],
            "edges": [{"kind": "N", "owner": "a",
                       "payload": {"count": -1, "lId": "L"}}],
        }))


def test_distance_and_projection():
    g = ef.generate_fixture(seed=7, nodes=5, density=0.7)
    h = ef.generate_fixture(seed=8, nodes=5, density=0.7)

    self_report = ef.graph_distance(g, g)
    assert self_report["total"] == 0.0

    report = ef.graph_distance(g, h)
    assert 0.0 <= report["total"] <= 1.0
    assert len(report["per_goal_node"]) == len(g.node_ids)

    design = ef.project(g, "design")
    rules = ef.project(g, "rules")
    assert design.edge_count + rules.edge_count == g.edge_count


def test_searches_run_and_improve():
    base = ef.generate_fixture(seed=40, nodes=6, density=0.6)
    a = ef.generate_fixture(seed=41, nodes=6, density=0.6, shared=0.5, base=base)
    b = ef.generate_fixture(seed=42, nodes=6, density=0.6, shared=0.5, base=base)
    goal = ef.generate_fixture(seed=43, nodes=6, density=0.6, shared=0.5, base=base)
    kb = [a, b]

    graph, trace = ef.expand(kb, goal, scope="design", seed=1, steps=15)
    assert ef.validate(graph) == []
    assert trace == sorted(trace, reverse=True)

    graph2, trace2 = ef.expand(kb, goal, scope="design", seed=1, steps=15)
    assert graph2 == graph
    assert trace2 == trace

    picked = ef.knn_select(kb, goal)
    assert picked.name in (a.name, b.name)

    bgraph, btrace = ef.blend_search(kb, goal, seed=2, steps=10)
    assert ef.validate(bgraph) == []
    assert btrace == sorted(btrace, reverse=True)

    ggraph, gtrace = ef.ga_search(kb, goal, seed=3, generations=8)
    assert ef.validate(ggraph) == []
    assert gtrace == sorted(gtrace, reverse=True)
    assert len(gtrace) <= 8
