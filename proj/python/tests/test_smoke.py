import csv

import pytest

import fogsched


@pytest.fixture(scope="module")
def scenario():
    return fogsched.generate(seed=5, tasks=40, nodes=6)


def test_generate_is_seeded(scenario):
    assert len(scenario["tasks"]) == 40
    assert len(scenario["nodes"]) == 6
    assert fogsched.generate(seed=5, tasks=40, nodes=6) == scenario
    assert fogsched.instance_hash(scenario) != fogsched.instance_hash(fogsched.generate(seed=6, tasks=40, nodes=6))


def test_config_overrides():
    s = fogsched.generate(seed=1, tasks=10, nodes=3, deadline_range=[100, 200])
    assert all(100 <= t["deadline"] <= 200 for t in s["tasks"])


def test_evaluate_all_on_one_node(scenario):
    report = fogsched.evaluate(scenario, [0] * 40)
    assert report["dv_total"] >= 0
    assert report["energy_total"] > 0
    with pytest.raises(Exception):
        fogsched.evaluate(scenario, [0] * 39)


@pytest.mark.parametrize("algorithm", fogsched.ALGORITHMS)
def test_run_every_algorithm(scenario, algorithm):
    out = fogsched.run(scenario, algorithm, seed=3, budget=300, population=10)
    assert out["algorithm"] == algorithm
    assert len(out["mapping"]) == 40
    assert all(0 <= n < 6 for n in out["mapping"])
    again = fogsched.run(scenario, algorithm, seed=3, budget=300, population=10)
    assert again["metrics"]["fitness"] == out["metrics"]["fitness"]


def test_rigeo_routing(scenario):
    out = fogsched.run(scenario, "RIGEO", seed=2, budget=300, population=10)
    c = fogsched.classify(scenario)
    assert sorted(c["low_traffic_nodes"] + c["high_traffic_nodes"]) == list(range(6))
    assert "routing" in out


def test_bad_inputs(scenario):
    with pytest.raises(Exception):
        fogsched.run(scenario, "GWO")
    with pytest.raises(Exception):
        fogsched.run(scenario, weights=(1, 1))


def test_experiment_writes_records(tmp_path):
    rows = fogsched.experiment([10, 12], nodes=4, repetitions=2, algorithms=["RANDOM", "IGEO"],
                               budget=120, population=6, out=tmp_path, jobs=2)
    assert len(rows) == 8
    assert not any("error" in r for r in rows)
    with open(tmp_path / "records.csv") as f:
        assert len(list(csv.DictReader(f))) == 8
