import pytest

from clusteratlas.atlas import enumerate_atlas
from clusteratlas.checks import (
    TruncatedAtlas,
    VariableIndex,
    compatible,
    compatible_bounded,
    denominator_clean,
    unistructural_search,
    verify_conjecture3,
    verify_conjecture4,
    verify_lemma21,
    verify_theorem1,
)
from clusteratlas.laurent import LaurentFraction, den_vector, div_exact, fraction_equal, substitute

from conftest import atlas_for
from helpers import xs

x1, x2 = xs(2)
F = LaurentFraction.of
THIRD = div_exact(x1 + x2 + 1, x1 * x2)
LEFT = div_exact(x2 + 1, x1)  # mu_1 of x1
RIGHT = div_exact(x1 + 1, x2)  # mu_2 of x2


def test_compatible_examples(a2):
    assert compatible(a2, x1, x2)
    assert compatible(a2, x1, RIGHT)
    assert not compatible(a2, x1, LEFT)
    assert not compatible(a2, x1, THIRD)
    for v in a2.variables:
        assert compatible(a2, v, v)


def test_compatible_symmetric(a3):
    m = len(a3.variables)
    for i in range(m):
        for j in range(m):
            assert compatible(a3, i, j) == compatible(a3, j, i)


def test_compatible_needs_complete():
    with pytest.raises(TruncatedAtlas):
        compatible(atlas_for("kronecker", 10), 0, 1)


def test_compatible_bounded_never_false():
    atlas = atlas_for("kronecker", 10)
    assert compatible_bounded(atlas, x1, x2) is True
    m = len(atlas.variables)
    values = {compatible_bounded(atlas, i, j) for i in range(m) for j in range(m)}
    assert values == {True, None}


def test_compatible_bounded_atilde12():
    atlas = atlas_for("atilde12", 6)
    y1, y2, y3 = xs(3)
    v = div_exact(y1 ** 2 + y2 + 2 * y1 * y3 + y3 ** 2, y1 * y2 * y3)
    for s in atlas.seeds_containing(v):
        for w in atlas.seeds[s].vars:
            assert compatible_bounded(atlas, v, w) is True


def test_denominator_clean_examples(a2):
    assert denominator_clean(a2, x1, x2)
    assert denominator_clean(a2, x1, RIGHT)
    assert not denominator_clean(a2, x1, LEFT)
    for v in a2.variables:
        assert denominator_clean(a2, v, v)


def fresh_denominators(atlas, s):
    """Oracle for the rebase: enumerate the same type from seed ``s`` in
    fresh coordinates and match variables by substitution."""
    S = atlas.seeds[s]
    fresh = enumerate_atlas(S.matrix)
    images = [F(v) for v in S.vars]
    out = {}
    for L in fresh.variables:
        image = substitute(L, images)
        hits = [i for i, v in enumerate(atlas.variables) if fraction_equal(image, F(v))]
        assert len(hits) == 1
        out[hits[0]] = den_vector(L)
    return out


def test_clean_matches_fresh_enumeration(a3):
    table = [fresh_denominators(a3, s) for s in range(len(a3.seeds))]
    m = len(a3.variables)
    for v in range(m):
        for w in range(m):
            expected = all(
                table[s][w][a3.position(s, v)] <= 0 for s in a3.seeds_containing(v)
            )
            assert denominator_clean(a3, v, w) == expected


@pytest.mark.parametrize("name, pairs", [("a2", 25), ("a3", 81), ("d4", 256)])
def test_conjecture3(name, pairs):
    report = verify_conjecture3(atlas_for(name))
    assert report.checked == pairs
    assert report.violations == []
    assert report.line() == f"0 violations / {pairs} ordered pairs"
    assert all(r.witness is not None for r in report.details if r.compatible)


def test_conjecture3_counts_a2():
    report = verify_conjecture3(atlas_for("a2"))
    # 5 reflexive pairs plus 2 ordered pairs per pentagon edge
    assert report.summary["compatible_pairs"] == 15
    assert report.summary["clean_pairs"] == 15


def test_conjecture3_rejects_truncated():
    with pytest.raises(TruncatedAtlas):
        verify_conjecture3(atlas_for("kronecker", 4))


@pytest.mark.parametrize("name", ["a2", "a4"])
def test_conjecture4(name):
    report = verify_conjecture4(atlas_for(name))
    assert report.violations == []
    m = len(atlas_for(name).variables)
    assert report.checked == m * m


@pytest.mark.parametrize(
    "name, depth",
    [("a3", 64), ("d4", 64), ("kronecker", 10), ("atilde12", 6)],
)
def test_lemma21(name, depth):
    report = verify_lemma21(atlas_for(name, depth))
    assert report.violations == []
    assert report.checked > 0


def test_variable_index(a3):
    index = VariableIndex(a3.variables, seed=3)
    for i, v in enumerate(a3.variables):
        assert index.lookup(LaurentFraction(v * 3, a3.variables[0] ** 0 * 3)) == i
    y = xs(3)
    assert index.lookup(F(y[0] + y[1])) is None
    assert index.lookup(LaurentFraction(y[0], y[0] + y[1])) is None


def test_unistructural_a2():
    atlas = atlas_for("a2")
    report = unistructural_search(atlas, bound=2)
    assert report.checked == 10 * 5
    assert report.violations == []
    accepted = [c for c in report.details if c.accepted]
    assert len(accepted) == 10
    assert {frozenset(c.subset) for c in accepted} == set(atlas.clusters)
    assert sorted(c.matrix[0, 1] for c in accepted) == [-1] * 5 + [1] * 5
    assert report.summary["budget_exhausted"] == 0


def test_unistructural_a2_rejections():
    atlas = atlas_for("a2")
    report = unistructural_search(atlas, bound=2)
    by_key = {(c.subset, c.matrix[0, 1]): c for c in report.details}
    i1, i2, t = atlas.var_id(x1), atlas.var_id(x2), atlas.var_id(THIRD)
    # b12 = 0 from the initial cluster produces 2/x1
    assert by_key[(tuple(sorted((i1, i2))), 0)].reason == "escapes X"
    c = by_key[(tuple(sorted((i1, t))), 1)]
    assert not c.accepted and c.reason == "escapes X"


def test_unistructural_a3():
    report = unistructural_search(atlas_for("a3"), bound=2)
    assert report.parameters["bound"] == 2
    assert report.violations == []
    assert report.summary["budget_exhausted"] == 0
    assert report.summary["accepted"] > 0


def test_unistructural_defaults_and_seed():
    atlas = atlas_for("a2")
    default = unistructural_search(atlas)
    assert default.parameters["bound"] == 2
    other = unistructural_search(atlas, seed=12345)
    assert [c.outcome for c in default.details] == [c.outcome for c in other.details]


def test_unistructural_budget_outcome():
    report = unistructural_search(atlas_for("a3"), bound=1, budget=2)
    assert report.summary["budget_exhausted"] > 0
    assert report.summary["accepted"] == 0


def test_theorem1_a2():
    atlas = atlas_for("a2")
    report = verify_theorem1(atlas)
    assert report.checked == 20
    assert report.violations == []
    assert report.summary["automorphisms"] == 10
    assert report.summary["group_closed"]
    cands = {c.assignment: c for c in report.details}
    i1, i2 = atlas.var_id(x1), atlas.var_id(x2)
    assert cands[(i1, i2)].permutes_X and cands[(i1, i2)].maps_clusters_to_clusters
    swap = cands[(i2, i1)]
    assert swap.permutes_X and swap.maps_clusters_to_clusters
    # the swap sends (x2 + 1)/x1 to (x1 + 1)/x2
    assert swap.permutation[atlas.var_id(LEFT)] == atlas.var_id(RIGHT)
    for c in report.details:
        assert c.permutes_X or not c.maps_clusters_to_clusters


def test_theorem1_a3():
    report = verify_theorem1(atlas_for("a3"))
    assert report.checked == 504
    assert report.violations == []
    assert report.summary["group_closed"]
    assert report.summary["automorphisms"] == 12


def test_theorem1_budget():
    report = verify_theorem1(atlas_for("a2"), budget=7)
    assert report.checked == 7
    assert report.summary["budget_exhausted"]


def test_report_json_shape():
    report = verify_conjecture3(atlas_for("a2"))
    data = report.to_json()
    assert data["pairs_checked"] == 25
    assert set(data) == {"check", "type", "parameters", "pairs_checked", "violations", "summary", "elapsed"}
    data = unistructural_search(atlas_for("a2")).to_json()
    assert "candidates_checked" in data and "pairs_checked" not in data


def test_violation_is_reported():
    # a hand-broken atlas: drop a cluster so compatibility disagrees with the table
    atlas = atlas_for("a2")
    broken = type(atlas)(**{f: getattr(atlas, f) for f in (
        "base", "seeds", "depths", "neighbors", "variables", "seed_cluster", "status", "limits"
    )}, clusters=atlas.clusters[1:] + [frozenset()])
    report = verify_conjecture3(broken)
    assert report.violations
    assert not report.ok
