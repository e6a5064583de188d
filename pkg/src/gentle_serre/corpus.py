"""Bundled algebra corpus used by the regression and acceptance suites.

Trivially graded presentations cover discs, annuli with and without
winding, a torus with one boundary component, and algebras with relation
cycles (fully stopped components); each has a graded variant.
"""

from __future__ import annotations

import json

from .presentation import GentlePresentation


def _linear(n: int, degrees: tuple[int, ...] = ()) -> dict:
    return {
        "vertices": [str(i) for i in range(1, n + 1)],
        "arrows": [{"id": f"a{i}", "from": str(i), "to": str(i + 1),
                    "degree": degrees[i - 1] if i - 1 < len(degrees) else 0}
                   for i in range(1, n)],
        "relations": [],
    }


def _kronecker(da: int = 0, db: int = 0) -> dict:
    return {
        "vertices": ["1", "2"],
        "arrows": [{"id": "a", "from": "1", "to": "2", "degree": da},
                   {"id": "b", "from": "1", "to": "2", "degree": db}],
        "relations": [],
    }


def _cycle3(relations, degrees=(0, 0, 0)) -> dict:
    return {
        "vertices": ["1", "2", "3"],
        "arrows": [{"id": "a", "from": "1", "to": "2", "degree": degrees[0]},
                   {"id": "b", "from": "2", "to": "3", "degree": degrees[1]},
                   {"id": "c", "from": "3", "to": "1", "degree": degrees[2]}],
        "relations": relations,
    }


def _torus(degrees=(0, 0, 0)) -> dict:
    return {
        "vertices": ["1", "2"],
        "arrows": [{"id": "a", "from": "1", "to": "2", "degree": degrees[0]},
                   {"id": "b", "from": "2", "to": "1", "degree": degrees[1]},
                   {"id": "c", "from": "1", "to": "2", "degree": degrees[2]}],
        "relations": [["a", "b"], ["b", "c"]],
    }


def _loop(degree: int = 0) -> dict:
    return {
        "vertices": ["v"],
        "arrows": [{"id": "x", "from": "v", "to": "v", "degree": degree}],
        "relations": [["x", "x"]],
    }


def _nakayama2(degrees=(0, 0)) -> dict:
    return {
        "vertices": ["1", "2"],
        "arrows": [{"id": "a", "from": "1", "to": "2", "degree": degrees[0]},
                   {"id": "b", "from": "2", "to": "1", "degree": degrees[1]}],
        "relations": [["a", "b"], ["b", "a"]],
    }


def _a3_relation(degrees=(0, 0)) -> dict:
    data = _linear(3, degrees)
    data["relations"] = [["a1", "a2"]]
    return data


CORPUS: dict[str, dict] = {
    # trivially graded
    "a1": _linear(1),
    "a2": _linear(2),
    "a3": _linear(3),
    "a4": _linear(4),
    "kronecker": _kronecker(),
    "a3_relation": _a3_relation(),
    "triangle_annulus": _cycle3([["a", "b"], ["b", "c"]]),
    "torus_one_stop": _torus(),
    "loop_fully_stopped": _loop(),
    "nakayama_cycle_two": _nakayama2(),
    "cycle3_fully_stopped": _cycle3([["a", "b"], ["b", "c"], ["c", "a"]]),
    # graded variants
    "a2_graded": _linear(2, (1,)),
    "a3_graded": _linear(3, (1, -1)),
    "a4_graded": _linear(4, (0, 1, 0)),
    "kronecker_graded": _kronecker(1, 0),
    "kronecker_winding_two": _kronecker(2, 0),
    "a3_relation_graded": _a3_relation((1, 1)),
    "triangle_annulus_graded": _cycle3([["a", "b"], ["b", "c"]], (1, 0, 0)),
    "torus_one_stop_graded": _torus((1, 0, 0)),
    "loop_fully_stopped_graded": _loop(1),
    "nakayama_cycle_two_graded": _nakayama2((1, 0)),
    "cycle3_fully_stopped_graded": _cycle3(
        [["a", "b"], ["b", "c"], ["c", "a"]], (1, 0, 0)),
}

TRIVIALLY_GRADED = [name for name, data in CORPUS.items()
                    if all(a["degree"] == 0 for a in data["arrows"])]


def corpus_names() -> list[str]:
    return sorted(CORPUS)


def corpus_presentation(name: str) -> GentlePresentation:
    return GentlePresentation.from_json(CORPUS[name])


def corpus_json(name: str) -> str:
    return json.dumps(CORPUS[name], indent=2, sort_keys=True)


def write_corpus(directory) -> list[str]:
    """Materialize every corpus algebra as a JSON file; returns the paths."""
    import os

    paths = []
    os.makedirs(directory, exist_ok=True)
    for name in corpus_names():
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w") as handle:
            handle.write(corpus_json(name) + "\n")
        paths.append(path)
    return paths
