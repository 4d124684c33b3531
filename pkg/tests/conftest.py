from __future__ import annotations

import itertools
from functools import lru_cache

import pytest

from roman_ilp.bench import seeded_corpus
from roman_ilp.graph import Graph


@lru_cache(maxsize=None)
def corpus():
    return tuple(seeded_corpus(200))


def connected_graphs(max_n: int):
    """Every connected labeled graph on 1..max_n vertices."""
    for n in range(1, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            g = Graph(n, (e for i, e in enumerate(pairs) if mask >> i & 1))
            if g.is_connected():
                yield g


@pytest.fixture(scope="session")
def small_connected():
    return list(connected_graphs(4))
