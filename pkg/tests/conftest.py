"""Shared deterministic generators for randomized suites."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from rumkit import (
    Model,
    Preference,
    PreferenceDistribution,
    RandomChoiceRule,
    Universe,
    contour_pair_keys,
)


def random_preference(rng: random.Random, universe: Universe) -> Preference:
    ranking = list(range(universe.n))
    rng.shuffle(ranking)
    return Preference(universe, tuple(ranking))


def random_model(rng: random.Random, universe: Universe, size: int) -> Model:
    chosen: dict[tuple[int, ...], Preference] = {}
    while len(chosen) < size:
        pref = random_preference(rng, universe)
        chosen[pref.ranking] = pref
    return Model.of(universe, chosen.values())


def random_distribution(
    rng: random.Random, model: Model, max_weight: int = 12
) -> PreferenceDistribution:
    weights = [rng.randrange(0, max_weight + 1) for _ in model.preferences]
    if not any(weights):
        weights[rng.randrange(len(weights))] = 1
    total = sum(weights)
    return PreferenceDistribution(
        model,
        {p: Fraction(w, total) for p, w in zip(model.preferences, weights)},
    )


def random_rule(rng: random.Random, universe: Universe) -> RandomChoiceRule:
    """A valid rule with random rational menu splits (not necessarily rational-
    izable by any distribution)."""
    values: dict[tuple[int, int], Fraction] = {}
    for mask in range(1, universe.full_mask + 1):
        members = [x for x in range(universe.n) if mask >> x & 1]
        weights = [rng.randrange(0, 7) for _ in members]
        if not any(weights):
            weights[0] = 1
        total = sum(weights)
        for x, w in zip(members, weights):
            values[(x, mask)] = Fraction(w, total)
    return RandomChoiceRule(universe, values)


def random_mobius_values(
    rng: random.Random, universe: Universe
) -> dict[tuple[int, int], Fraction]:
    """An arbitrary exact table over all pairs, negative entries included."""
    return {
        key: Fraction(rng.randrange(-6, 7), rng.randrange(1, 5))
        for key in contour_pair_keys(universe.n)
    }


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260810)
