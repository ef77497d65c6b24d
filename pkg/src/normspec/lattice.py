"""The lattice of normal subgroups and its proper part."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .bits import canonical_key, from_indices, full_mask, is_subset, to_indices
from .group import (
    OrderCapExceeded,
    Subgroup,
    conjugacy_classes,
    is_normal,
    normal_closure,
)

DEFAULT_LATTICE_ORDER_CAP = 128
DEFAULT_LATTICE_CAP = 4096
ORACLE_CLASS_LIMIT = 20
PAIR_CHECK_LIMIT = 256
LABEL_ELEMENTS_UP_TO = 24


class LatticeTooLarge(RuntimeError):
    def __init__(self, cap):
        super().__init__(f"normal subgroup lattice has more than {cap} points")
        self.cap = cap


class EnumerationMismatch(AssertionError):
    """Join/meet closure and the class-union search disagree."""


class LatticeInvariantError(AssertionError):
    pass


@dataclass(frozen=True, eq=False)
class NormalLattice:
    parent: object
    points: tuple
    leq: np.ndarray
    bottom_index: int
    top_index: int

    def __post_init__(self):
        object.__setattr__(self, "_index", {p.members: i for i, p in enumerate(self.points)})

    def __len__(self):
        return len(self.points)

    def index_of(self, members):
        """Point index of a normal subgroup given by its member mask."""
        return self._index[members]

    def masks(self):
        return [p.members for p in self.points]

    def up_mask(self, i):
        """Bit-vector over points of everything above point ``i``."""
        return from_indices(np.flatnonzero(self.leq[i]).tolist())

    def down_mask(self, i):
        return from_indices(np.flatnonzero(self.leq[:, i]).tolist())

    @property
    def full(self):
        return full_mask(len(self.points))


@dataclass(frozen=True)
class ProperPointSet:
    lattice: NormalLattice
    indices: int

    def __len__(self):
        return self.indices.bit_count()

    def as_list(self):
        return to_indices(self.indices)


def _join_masks(g, a, b):
    # the subgroup generated by two normal subgroups is normal
    return from_indices(kernels.subgroup_closure(g.table, to_indices(a | b)))


def class_union_normal_subgroups(g, classes=None):
    """All normal subgroups as unions of conjugacy classes, by exact search.

    Classes are decided in order; ``prod[i][j]`` holds the classes met by
    ``C_i C_j`` and every included pair forces its product classes in.
    Independent of the join-closure enumeration; used as its oracle.
    """
    if classes is None:
        classes = conjugacy_classes(g)
    k = len(classes)
    class_of = np.empty(g.order, dtype=np.int64)
    for ci, cls in enumerate(classes):
        class_of[cls] = ci
    prod = [[0] * k for _ in range(k)]
    for i, ci in enumerate(classes):
        rep = ci[0]
        for j, cj in enumerate(classes):
            hit = np.unique(class_of[g.table[rep, cj]])
            prod[i][j] = from_indices(int(h) for h in hit)

    results = []

    def search(pos, included, excluded, required):
        if required & excluded:
            return
        if pos == k:
            mask = 0
            for ci in to_indices(included):
                mask |= from_indices(classes[ci])
            results.append(mask)
            return
        bit = 1 << pos
        # include pos
        req = required | prod[pos][pos]
        for d in to_indices(included):
            req |= prod[pos][d]
        search(pos + 1, included | bit, excluded, req)
        if not required & bit:
            search(pos + 1, included, excluded | bit, required)

    # class 0 is the identity class and always present
    search(1, 1, 0, prod[0][0])
    return sorted(results, key=canonical_key)


def enumerate_normal_subgroups(
    g,
    order_cap=DEFAULT_LATTICE_ORDER_CAP,
    lattice_cap=DEFAULT_LATTICE_CAP,
    oracle_class_limit=ORACLE_CLASS_LIMIT,
    pair_check_limit=PAIR_CHECK_LIMIT,
):
    """Compute the full lattice of normal subgroups of ``g``.

    Production path: normal closures of single conjugacy classes, closed
    under join (against those generators) and meet to a fixpoint.  When
    there are at most ``oracle_class_limit`` classes the result is checked
    against :func:`class_union_normal_subgroups`.
    """
    if g.order > order_cap:
        raise OrderCapExceeded(order_cap)
    classes = conjugacy_classes(g)
    gens = sorted({normal_closure(g, from_indices(c)).members for c in classes})
    found = set(gens) | {1}
    work = list(found)
    while work:
        x = work.pop()
        candidates = [_join_masks(g, x, s) for s in gens if not is_subset(s, x)]
        candidates += [x & y for y in list(found)]
        for y in candidates:
            if y not in found:
                found.add(y)
                if len(found) > lattice_cap:
                    raise LatticeTooLarge(lattice_cap)
                work.append(y)

    masks = sorted(found, key=canonical_key)
    if len(classes) <= oracle_class_limit:
        expected = class_union_normal_subgroups(g, classes)
        if expected != masks:
            raise EnumerationMismatch(
                f"closure found {len(masks)} normal subgroups, class-union search {len(expected)}"
            )
    return build_lattice(g, masks, pair_check_limit=pair_check_limit)


def build_lattice(g, masks, pair_check_limit=PAIR_CHECK_LIMIT):
    """Assemble and check a :class:`NormalLattice` from sorted member masks."""
    points = []
    for m in masks:
        sg = Subgroup(g, m)
        if not is_normal(g, sg):
            raise LatticeInvariantError(f"point {to_indices(m)} is not normal")
        points.append(sg)
    if len(set(masks)) != len(masks):
        raise LatticeInvariantError("duplicate points")
    n = len(masks)
    arr = masks
    leq = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(arr):
        for j, b in enumerate(arr):
            leq[i, j] = a & ~b == 0
    leq.setflags(write=False)
    index = {m: i for i, m in enumerate(arr)}
    if 1 not in index or g.full_mask not in index:
        raise LatticeInvariantError("trivial subgroup or whole group missing")
    if n <= pair_check_limit:
        for i in range(n):
            for j in range(i + 1, n):
                if arr[i] & arr[j] not in index:
                    raise LatticeInvariantError(f"meet of points {i}, {j} missing")
                if _join_masks(g, arr[i], arr[j]) not in index:
                    raise LatticeInvariantError(f"join of points {i}, {j} missing")
    return NormalLattice(g, tuple(points), leq, index[1], index[g.full_mask])


def join_family(lat, family):
    """Index of the normal subgroup generated by the union of ``family``."""
    union = 0
    for i in family:
        union |= lat.points[i].members
    return lat.index_of(normal_closure(lat.parent, union).members)


def meet_family(lat, family):
    """Index of the intersection of ``family``; the empty meet is the top."""
    inter = lat.parent.full_mask
    for i in family:
        inter &= lat.points[i].members
    return lat.index_of(inter)


def maximal_normal_subgroups(lat):
    top = lat.top_index
    out = []
    for i in range(len(lat)):
        if i == top:
            continue
        above = np.flatnonzero(lat.leq[i]).tolist()
        if all(j in (i, top) for j in above):
            out.append(i)
    return out


def has_maximal_normal_subgroup(lat):
    return bool(maximal_normal_subgroups(lat))


def proper_points(lat):
    return ProperPointSet(lat, lat.full & ~(1 << lat.top_index))


def hasse_edges(lat):
    """Covering pairs ``(lower, upper)`` of the inclusion order, sorted."""
    n = len(lat)
    leq = lat.leq
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i, j]:
                continue
            between = leq[i] & leq[:, j]
            between[i] = between[j] = False
            if not between.any():
                edges.append((i, j))
    return edges


def subgroup_label(g, mask):
    """Element list for small groups, otherwise just the order."""
    if g.order <= LABEL_ELEMENTS_UP_TO:
        return "{" + ",".join(g.element_names[i] for i in to_indices(mask)) + "}"
    return f"order {mask.bit_count()}"
