"""Acceptance suite: one test per criterion, run with ``pytest -v``."""

import time

import pytest

from clusteratlas.atlas import EnumerationLimits, enumerate_atlas, expand_in_base
from clusteratlas.checks import (
    unistructural_search,
    verify_conjecture3,
    verify_conjecture4,
    verify_lemma21,
    verify_theorem1,
)
from clusteratlas.laurent import LaurentFraction, den_vector, div_exact, fraction_equal, substitute
from clusteratlas.quiver import preset
from clusteratlas.rank2 import clusters_containing_x1, enumerate_chain, special_variables
from clusteratlas.seed import initial_seed, mutate_seed

from helpers import xs

# pinned limits
ENUMERATION_SECONDS = 120.0
DENOMINATOR_SECONDS = 300.0

DYNKIN_COUNTS = {"a2": 5, "a3": 9, "a4": 14, "a5": 20, "d4": 16, "d5": 25, "e6": 42}
DESK = {"a2": 25, "a3": 81, "a4": 196, "d4": 256}
INFINITE = {"atilde12": 6, "kronecker": 10}

_atlases = {}


def dynkin(name):
    if name not in _atlases:
        _atlases[name] = enumerate_atlas(preset(name))
    return _atlases[name]


def infinite(name):
    key = (name, INFINITE[name])
    if key not in _atlases:
        _atlases[key] = enumerate_atlas(preset(name), EnumerationLimits(max_depth=INFINITE[name]))
    return _atlases[key]


def chain(r, depth=8):
    if ("chain", r) not in _atlases:
        _atlases[("chain", r)] = enumerate_chain(r, depth)
    return _atlases[("chain", r)]


def test_01_dynkin_variable_counts():
    start = time.perf_counter()
    counts = {}
    for name in DYNKIN_COUNTS:
        _atlases[name] = enumerate_atlas(preset(name))
        counts[name] = len(_atlases[name].variables)
    elapsed = time.perf_counter() - start
    assert counts == DYNKIN_COUNTS
    assert elapsed < ENUMERATION_SECONDS


def test_02_complete_regular_deterministic():
    for name in DYNKIN_COUNTS:
        atlas = dynkin(name)
        assert atlas.complete
        assert all(len(row) == atlas.n and None not in row for row in atlas.neighbors)
        assert len(atlas.edges) == len(atlas.seeds) * atlas.n
        runs = [enumerate_atlas(preset(name), workers=1) for _ in range(2)]
        runs.append(enumerate_atlas(preset(name), workers=4))
        for other in runs:
            assert other == atlas
            assert (len(other.clusters), len(other.seeds)) == (len(atlas.clusters), len(atlas.seeds))


def test_03_cyclic_euclidean_example():
    atlas = infinite("atilde12")
    y1, y2, y3 = xs(3)
    target = div_exact(y1 ** 2 + y2 + 2 * y1 * y3 + y3 ** 2, y1 * y2 * y3)
    assert target is not None
    matches = [v for v in atlas.variables if v == target]
    assert len(matches) == 1
    assert den_vector(matches[0]) == (1, 1, 1)


def test_04_compatibility_iff_clean_denominator():
    start = time.perf_counter()
    for name, pairs in DESK.items():
        report = verify_conjecture3(dynkin(name))
        assert report.checked == pairs
        assert report.violations == []
    assert time.perf_counter() - start < DENOMINATOR_SECONDS


def test_05_clean_denominators_are_symmetric():
    for name, pairs in DESK.items():
        report = verify_conjecture4(dynkin(name))
        assert report.checked == pairs
        assert report.violations == []


def test_06_compatible_implies_clean_on_infinite_types():
    for name in INFINITE:
        atlas = infinite(name)
        assert atlas.status == "truncated"
        report = verify_lemma21(atlas)
        assert report.checked > 0
        assert report.violations == []


def test_07_rank2_ingredients():
    x1, x2 = xs(2)
    for r in (2, 3):
        c = chain(r)
        expected = {x1, x2, div_exact(x1 ** r + 1, x2), div_exact(x2 ** r + 1, x1)}
        special = special_variables(c)
        assert len(special) == 4 and set(special) == expected
        assert clusters_containing_x1(c) == 2
    assert len(chain(1).distinct()) == 5
    assert chain(1).period == 5


def test_08_unistructural_desk_scale():
    for name in ("a2", "a3"):
        atlas = dynkin(name)
        report = unistructural_search(atlas, bound=2)
        assert report.summary["budget_exhausted"] == 0
        accepted = [c for c in report.details if c.accepted]
        assert accepted
        assert all(c.clusters == frozenset(atlas.clusters) for c in accepted)
        assert report.violations == []


def test_09_automorphisms_map_clusters():
    for name, assignments in (("a2", 20), ("a3", 504)):
        report = verify_theorem1(dynkin(name))
        assert report.checked == assignments
        assert not any(c.permutes_X and not c.maps_clusters_to_clusters for c in report.details)
        assert report.summary["group_closed"]
        assert report.violations == []


def test_10_property_suites(rng):
    everything = [dynkin(name) for name in DYNKIN_COUNTS] + [infinite(name) for name in INFINITE]
    # (i) exactness: every enumeration above finished without a failed division
    chains = [chain(r) for r in (0, 1, 2, 3)]
    for c in chains:
        for m in list(c.indices)[1:-1]:
            assert c[m + 1] * c[m - 1] == c[m] ** c.r + 1
    # (ii) positivity
    for atlas in everything:
        assert all(c > 0 for v in atlas.variables for c in v.coefficients())
    for c in chains:
        assert all(a > 0 for v in c.terms for a in v.coefficients())
    # (iii) involution on 1000 random (seed, k) pairs
    for _ in range(1000):
        atlas = rng.choice(everything)
        S = rng.choice(atlas.seeds)
        k = rng.randrange(S.n)
        assert mutate_seed(mutate_seed(S, k), k) == S
    # (iv) expansion round trip on every (variable, seed) pair
    for name in ("a2", "a3"):
        atlas = dynkin(name)
        for s, S in enumerate(atlas.seeds):
            images = [LaurentFraction.of(v) for v in S.vars]
            for i, v in enumerate(atlas.variables):
                back = substitute(expand_in_base(atlas, i, s), images)
                assert fraction_equal(back, LaurentFraction.of(v))
