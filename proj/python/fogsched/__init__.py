"""Fog task scheduling: scenarios, metrics, RIGEO and its baselines."""

import json

from . import _core

__all__ = [
    "ALGORITHMS",
    "generate",
    "evaluate",
    "run",
    "classify",
    "instance_hash",
    "experiment",
]

ALGORITHMS = tuple(_core.algorithm_names())


def _text(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def generate(seed=0, tasks=200, nodes=20, **config):
    """Seeded scenario as a dict. Extra keywords override config fields,
    e.g. ``deadline_range=[50, 500]``."""
    config.update(rng_seed=seed, n_tasks=tasks, n_nodes=nodes)
    return json.loads(_core.generate(json.dumps(config)))


def evaluate(scenario, mapping, weights=(1.0, 1.0, 1.0)):
    """Metrics report of a task -> node mapping."""
    return json.loads(_core.evaluate(_text(scenario), list(mapping), list(weights)))


def run(scenario, algorithm="RIGEO", seed=1, weights=(1.0, 1.0, 1.0), budget=6000, population=30):
    """Runs one algorithm; returns mapping, metrics, trace and (RIGEO) routing."""
    return json.loads(_core.run(algorithm, _text(scenario), seed, list(weights), budget, population))


def classify(scenario):
    return json.loads(_core.classify(_text(scenario)))


def instance_hash(scenario):
    return _core.instance_hash(_text(scenario))


def experiment(task_counts, nodes=20, repetitions=50, algorithms=(), base_seed=1, budget=6000,
               population=30, weights=(1.0, 1.0, 1.0), out="", jobs=0):
    """Runs a sweep and returns one dict per run; failed runs carry an ``error`` key.
    Files are written only when ``out`` is given."""
    return _core.experiment(list(task_counts), nodes, repetitions, list(algorithms), base_seed, budget,
                            population, list(weights), str(out), jobs)
