import itertools
import random

import pytest

from normspec.bits import from_indices, is_subset, to_indices
from normspec.catalog import catalog
from normspec.group import OrderCapExceeded, conjugacy_classes
from normspec.lattice import (
    LatticeTooLarge,
    class_union_normal_subgroups,
    enumerate_normal_subgroups,
    has_maximal_normal_subgroup,
    hasse_edges,
    join_family,
    maximal_normal_subgroups,
    meet_family,
    proper_points,
    subgroup_label,
)

GROUPS = ["trivial", "Z2", "Z6", "Z12", "V4", "S3", "D4", "Q8", "A4", "D6", "Z2 x Z4",
          "S3 x Z2", "S4", "Z2 x Z2 x Z2", "A5"]


def brute_normal_subgroups(g):
    """Every subset closed under product and conjugation (orders <= 12)."""
    t, inv = g.table, g.inverse
    out = []
    for mask in range(1, 1 << g.order, 2):
        idx = to_indices(mask)
        if not all(mask >> int(t[a, b]) & 1 for a in idx for b in idx):
            continue
        if all(mask >> int(t[t[x, a], inv[x]]) & 1 for x in range(g.order) for a in idx):
            out.append(mask)
    return set(out)


def lat(name):
    return enumerate_normal_subgroups(catalog(name))


def masks_of(g, groups_of_names):
    return {from_indices(g.element_names.index(x) for x in names) for names in groups_of_names}


def test_s3_points(s3):
    L = enumerate_normal_subgroups(s3)
    assert len(L) == 3
    assert [p.size for p in L.points] == [1, 3, 6]


def test_z6_points(z6):
    L = enumerate_normal_subgroups(z6)
    assert set(L.masks()) == masks_of(z6, [["0"], ["0", "3"], ["0", "2", "4"], list("012345")])


def test_q8_points(q8):
    L = enumerate_normal_subgroups(q8)
    assert len(L) == 6
    assert sorted(p.size for p in L.points) == [1, 2, 4, 4, 4, 8]
    assert masks_of(q8, [["1", "-1"]]) <= set(L.masks())


def test_trivial_group():
    L = lat("trivial")
    assert len(L) == 1 and L.bottom_index == L.top_index == 0


@pytest.mark.parametrize("name", ["Z2", "Z6", "V4", "S3", "D4", "Q8", "Z2 x Z4", "A4", "D6"])
def test_enumeration_matches_subset_brute_force(name):
    g = catalog(name)
    assert set(lat(name).masks()) == brute_normal_subgroups(g)


@pytest.mark.parametrize("name", GROUPS + ["Z24", "Z2 x Z2 x Z2 x Z2"])
def test_enumeration_matches_class_unions(name):
    g = catalog(name)
    assert lat(name).masks() == class_union_normal_subgroups(g, conjugacy_classes(g))


@pytest.mark.parametrize("name", GROUPS)
def test_lattice_invariants(name):
    L = lat(name)
    g = L.parent
    n = len(L)
    assert all(p.is_normal_certified for p in L.points)
    assert len(set(L.masks())) == n
    assert L.points[L.bottom_index].members == 1
    assert L.points[L.top_index].members == g.full_mask
    for i, j in itertools.product(range(n), repeat=2):
        assert L.leq[i, j] == is_subset(L.points[i].members, L.points[j].members)
    for i in range(n):
        assert L.leq[i, L.top_index] and L.leq[L.bottom_index, i]
    # deterministic order: size, then index list
    keys = [(p.size, p.elements()) for p in L.points]
    assert keys == sorted(keys)


@pytest.mark.parametrize("name", GROUPS)
def test_join_and_meet_are_bounds(name):
    L = lat(name)
    n = len(L)
    leq = L.leq
    for i, j in itertools.product(range(n), repeat=2):
        uppers = [k for k in range(n) if leq[i, k] and leq[j, k]]
        lowers = [k for k in range(n) if leq[k, i] and leq[k, j]]
        lub = [k for k in uppers if all(leq[k, u] for u in uppers)]
        glb = [k for k in lowers if all(leq[l, k] for l in lowers)]
        assert lub == [join_family(L, [i, j])]
        assert glb == [meet_family(L, [i, j])]


def test_empty_and_singleton_families(z6):
    L = enumerate_normal_subgroups(z6)
    assert join_family(L, []) == L.bottom_index
    assert meet_family(L, []) == L.top_index
    for i in range(len(L)):
        assert join_family(L, [i]) == i == meet_family(L, [i])


def test_z6_join_meet(z6):
    L = enumerate_normal_subgroups(z6)
    two = L.index_of(from_indices([0, 3]))
    three = L.index_of(from_indices([0, 2, 4]))
    assert join_family(L, [two, three]) == L.top_index
    assert meet_family(L, [two, three]) == L.bottom_index


@pytest.mark.parametrize("name", ["S4", "D8", "Z2 x Z2 x Z2", "Q8"])
def test_join_laws_random_families(name):
    L = lat(name)
    n = len(L)
    rng = random.Random(5)
    assert join_family(L, range(n)) == L.top_index
    for _ in range(100):
        a, b, c = (rng.sample(range(n), rng.randint(0, n)) for _ in range(3))
        ab = join_family(L, a + b)
        assert ab == join_family(L, b + a)
        assert join_family(L, [join_family(L, a), join_family(L, b)]) == ab
        assert join_family(L, a + a) == join_family(L, a)
        assert join_family(L, [ab, join_family(L, c)]) == join_family(L, a + b + c)


def test_maximal_subgroups(s3, z6):
    L = enumerate_normal_subgroups(s3)
    assert [L.points[i].size for i in maximal_normal_subgroups(L)] == [3]
    L = enumerate_normal_subgroups(z6)
    assert {L.points[i].members for i in maximal_normal_subgroups(L)} == {
        from_indices([0, 3]), from_indices([0, 2, 4])}
    assert maximal_normal_subgroups(lat("trivial")) == []


@pytest.mark.parametrize("name", GROUPS + [f"Z{n}" for n in range(2, 40)])
def test_nontrivial_groups_have_maximal_normal_subgroups(name):
    L = lat(name)
    assert has_maximal_normal_subgroup(L) == (L.parent.order > 1)


def test_proper_points(s3):
    P = proper_points(enumerate_normal_subgroups(s3))
    assert P.as_list() == [0, 1]
    assert len(proper_points(lat("trivial"))) == 0
    a5 = lat("A5")
    assert [a5.points[i].size for i in proper_points(a5).as_list()] == [1]


def test_hasse(s3, z6):
    assert hasse_edges(enumerate_normal_subgroups(s3)) == [(0, 1), (1, 2)]
    assert hasse_edges(enumerate_normal_subgroups(z6)) == [(0, 1), (0, 2), (1, 3), (2, 3)]
    assert hasse_edges(lat("trivial")) == []


@pytest.mark.parametrize("name", ["S4", "Q8", "Z2 x Z2 x Z2", "Z12"])
def test_hasse_is_transitive_reduction(name):
    L = lat(name)
    n = len(L)
    edges = set(hasse_edges(L))
    # reachability through cover edges reproduces the order
    reach = [[i == j for j in range(n)] for i in range(n)]
    for i, j in edges:
        reach[i][j] = True
    for k, i, j in itertools.product(range(n), repeat=3):
        reach[i][j] = reach[i][j] or (reach[i][k] and reach[k][j])
    assert reach == L.leq.tolist()
    for i, j in edges:
        assert not any(L.leq[i, k] and L.leq[k, j] for k in range(n) if k not in (i, j))


def test_caps():
    with pytest.raises(OrderCapExceeded):
        enumerate_normal_subgroups(catalog("S5"), order_cap=100)
    with pytest.raises(LatticeTooLarge):
        enumerate_normal_subgroups(catalog("Z2 x Z2 x Z2 x Z2"), lattice_cap=30)


def test_labels(s3):
    assert subgroup_label(s3, 1) == "{1}"
    assert subgroup_label(catalog("S5"), 1) == "order 1"
