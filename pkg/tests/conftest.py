"""Shared fixtures: the two reference models used across the suite."""

import pytest

from nestlogit import build, make_model


@pytest.fixture
def depth3_model():
    # root -> {a(0.5) -> {b(0.5) -> {leaf0, leaf1}, leaf2}, leaf3}, U = 0
    tree = build(
        "root",
        {"root": ("a", "leaf3"), "a": ("b", "leaf2"), "b": ("leaf0", "leaf1")},
        {"a": 0.5, "b": 0.5},
    )
    return make_model(tree, {leaf: 0.0 for leaf in tree.leaves})


@pytest.fixture
def single_layer_model():
    # two nests A = {1, 2} with lambda 0.5 and B = {3} with lambda 1, U = 0
    tree = build(
        "root",
        {"root": ("A", "B"), "A": ("1", "2"), "B": ("3",)},
        {"A": 0.5, "B": 1.0},
    )
    return make_model(tree, {"1": 0.0, "2": 0.0, "3": 0.0})
