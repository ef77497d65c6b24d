"""Finite topological spaces given by closed sets, and the coarse lower topology.

A space is either *exhaustive* (the whole closed-set family is materialized
as int bit-vectors) or *order-theoretic* (only the specialization preorder
is stored; closed sets are its up-sets).  Everything here assumes the
space is finite, which is what lets arbitrary unions and intersections be
reduced to pairwise ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bits import from_indices, full_mask, is_subset, to_indices

EXHAUSTIVE = "exhaustive"
ORDER = "order-theoretic"

DEFAULT_EXHAUSTIVE_POINT_CAP = 20
DEFAULT_FAMILY_CAP = 1 << 20
PAIR_SCAN_LIMIT = 4096
TRANSFER_EXHAUSTIVE_LIMIT = 15


class FamilyTooLarge(RuntimeError):
    def __init__(self, cap):
        super().__init__(f"closed-set family exceeds {cap} members")
        self.cap = cap


class SpaceTooLarge(RuntimeError):
    pass


class NotOpen(ValueError):
    pass


class NotATopology(ValueError):
    pass


def family_key(mask):
    return (mask.bit_count(), mask)


def restrict_mask(mask, positions):
    """Compress ``mask`` onto ``positions``: bit k is set iff ``positions[k]`` is in ``mask``."""
    out = 0
    for k, p in enumerate(positions):
        if mask >> p & 1:
            out |= 1 << k
    return out


def expand_mask(mask, positions):
    out = 0
    for k in to_indices(mask):
        out |= 1 << positions[k]
    return out


def _dedup(masks):
    seen = set()
    out = []
    for m in masks:
        if m not in seen:
            seen.add(m)
            out.append(m)
    return tuple(out)


class FiniteSpace:
    """A finite space on points ``0..point_count-1``.

    ``closed_sets`` is a tuple sorted by (size, value) in exhaustive mode and
    None in order-theoretic mode.  ``source_points`` records, for a
    subspace, which points of the ambient space each point came from.
    """

    def __init__(self, point_count, closed_sets, subbasis, mode, specialization=None,
                 point_labels=None, source_points=None):
        self.point_count = point_count
        self.closed_sets = closed_sets
        self.subbasis = _dedup(subbasis)
        self.mode = mode
        self.point_labels = tuple(point_labels) if point_labels is not None else tuple(
            str(i) for i in range(point_count))
        self.source_points = tuple(source_points) if source_points is not None else tuple(
            range(point_count))
        self._closed_lookup = frozenset(closed_sets) if closed_sets is not None else None
        self._point_closures = None
        self._spec = specialization

    @property
    def full(self):
        return full_mask(self.point_count)

    def is_closed(self, mask):
        if self.mode == EXHAUSTIVE:
            return mask in self._closed_lookup
        return self._is_up_set(mask)

    def _is_up_set(self, mask):
        for x in to_indices(mask):
            if not is_subset(self.point_closures()[x], mask):
                return False
        return True

    def point_closures(self):
        """``closure({x})`` for every point, as masks."""
        if self._point_closures is None:
            if self.mode == EXHAUSTIVE:
                self._point_closures = tuple(
                    _smallest_superset(self.closed_sets, 1 << x) for x in range(self.point_count)
                )
            else:
                self._point_closures = tuple(
                    from_indices(np.flatnonzero(self._spec[x]).tolist())
                    for x in range(self.point_count)
                )
        return self._point_closures

    def specialization(self):
        if self._spec is None:
            spec = np.zeros((self.point_count, self.point_count), dtype=bool)
            for x, c in enumerate(self.point_closures()):
                spec[x, to_indices(c)] = True
            spec.setflags(write=False)
            self._spec = spec
        return self._spec

    def open_sets(self):
        if self.mode != EXHAUSTIVE:
            raise SpaceTooLarge("open sets are only materialized in exhaustive mode")
        full = self.full
        return sorted((full & ~c for c in self.closed_sets), key=family_key)

    def __eq__(self, other):
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        if self.point_count != other.point_count:
            return False
        if self.mode == other.mode == EXHAUSTIVE:
            return self.closed_sets == other.closed_sets
        return np.array_equal(self.specialization(), other.specialization())

    __hash__ = None

    def __repr__(self):
        size = len(self.closed_sets) if self.closed_sets is not None else "?"
        return f"FiniteSpace(points={self.point_count}, closed_sets={size}, mode={self.mode!r})"

    # constructors

    @classmethod
    def from_subbasis(cls, point_count, subbasis, point_labels=None,
                      family_cap=DEFAULT_FAMILY_CAP):
        closed = generate_from_subbasis(point_count, subbasis, family_cap)
        return cls(point_count, tuple(closed), subbasis, EXHAUSTIVE, point_labels=point_labels)

    @classmethod
    def from_closed_sets(cls, point_count, closed_sets, point_labels=None, subbasis=None):
        """Build from an explicit family; it must already be a topology."""
        fam = sorted(set(closed_sets), key=family_key)
        full = full_mask(point_count)
        lookup = set(fam)
        if 0 not in lookup or full not in lookup:
            raise NotATopology("family must contain the empty set and the full set")
        for a in fam:
            if a & ~full:
                raise NotATopology(f"closed set {a:#x} has points out of range")
        for i, a in enumerate(fam):
            for b in fam[i + 1:]:
                if a | b not in lookup or a & b not in lookup:
                    raise NotATopology(f"not closed under union/intersection: {a:#x}, {b:#x}")
        return cls(point_count, tuple(fam), fam if subbasis is None else subbasis,
                   EXHAUSTIVE, point_labels=point_labels)

    @classmethod
    def from_preorder(cls, matrix, subbasis=None, point_labels=None):
        """Order-theoretic space whose closed sets are the up-sets of ``matrix``."""
        spec = np.array(matrix, dtype=bool)
        n = spec.shape[0]
        if n and not spec.diagonal().all():
            raise NotATopology("specialization preorder must be reflexive")
        if n and ((spec.astype(np.int64) @ spec.astype(np.int64) > 0) & ~spec).any():
            raise NotATopology("specialization preorder must be transitive")
        spec.setflags(write=False)
        if subbasis is None:
            subbasis = [from_indices(np.flatnonzero(spec[x]).tolist()) for x in range(n)]
        return cls(n, None, subbasis, ORDER, specialization=spec, point_labels=point_labels)


@dataclass(frozen=True)
class ClosedSet:
    members: int
    space: FiniteSpace | None = field(default=None, compare=False, repr=False)

    def indices(self):
        return to_indices(self.members)

    def __contains__(self, x):
        return bool(self.members >> x & 1)


def _smallest_superset(family, seed):
    # family is sorted by size and closed under intersection, so the first
    # superset met is the intersection of all of them
    for c in family:
        if c & seed == seed:
            return c
    raise NotATopology("no closed superset; the full set is missing")


def generate_from_subbasis(point_count, subbasis, family_cap=DEFAULT_FAMILY_CAP):
    """Smallest family containing ``subbasis``, the empty set and the full set,
    closed under pairwise union and intersection.

    Two worklist passes: finite intersections of the subbasis first, then
    unions of those (distributivity makes the result intersection-closed).
    """
    full = full_mask(point_count)
    gens = sorted({m & full for m in subbasis})
    inter = kernels.close_family(gens + [full], gens, False, family_cap, point_count)
    if inter is None:
        raise FamilyTooLarge(family_cap)
    family = kernels.close_family(inter + [0], inter, True, family_cap, point_count)
    if family is None:
        raise FamilyTooLarge(family_cap)
    return sorted(family, key=family_key)


def up_sets(leq):
    """Every up-set of the preorder ``leq``, by include/exclude search.

    Points are decided from the top of a linear extension down; a point may
    be included only if everything strictly above it already is.  Oracle for
    the coarse lower topology; shares no code with :func:`generate_from_subbasis`.
    """
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    # more points above = decided first
    order = sorted(range(n), key=lambda x: (int(leq[x].sum()), x))
    above = [from_indices(np.flatnonzero(leq[x]).tolist()) & ~(1 << x) for x in range(n)]
    below = [from_indices(np.flatnonzero(leq[:, x]).tolist()) & ~(1 << x) for x in range(n)]
    out = []

    def search(pos, chosen, rejected):
        if pos == n:
            out.append(chosen)
            return
        x = order[pos]
        if not above[x] & rejected:
            search(pos + 1, chosen | 1 << x, rejected)
        if not below[x] & chosen:
            search(pos + 1, chosen, rejected | 1 << x)

    search(0, 0, 0)
    assert all(_is_up(m, above) for m in out)
    return sorted(out, key=family_key)


def _is_up(mask, above):
    return all(is_subset(above[x], mask) for x in to_indices(mask))


# operations on the normal subgroup lattice


def v_set(lat, s):
    """The subbasic closed set of all lattice points containing point ``s``."""
    return ClosedSet(lat.up_mask(s))


def coarse_lower_topology(lat, exhaustive_point_cap=DEFAULT_EXHAUSTIVE_POINT_CAP,
                          allow_order_mode=True, family_cap=DEFAULT_FAMILY_CAP,
                          point_labels=None):
    """The space of lattice points whose closed sets are generated by the ``v_set``s."""
    n = len(lat)
    subbasis = [lat.up_mask(s) for s in range(n)]
    if n <= exhaustive_point_cap:
        return FiniteSpace.from_subbasis(n, subbasis, point_labels, family_cap)
    if not allow_order_mode:
        from .lattice import LatticeTooLarge

        raise LatticeTooLarge(exhaustive_point_cap)
    return FiniteSpace.from_preorder(lat.leq, subbasis, point_labels)


# topological operations


def closure(space, seed):
    """Smallest closed superset of ``seed``."""
    if seed & ~space.full:
        raise ValueError("seed has points outside the space")
    if space.mode == EXHAUSTIVE:
        return ClosedSet(_smallest_superset(space.closed_sets, seed), space)
    out = 0
    pcs = space.point_closures()
    for x in to_indices(seed):
        out |= pcs[x]
    return ClosedSet(out, space)


def specialization_preorder(space):
    """``R[x, y]`` is True iff ``y`` lies in the closure of ``{x}``."""
    return space.specialization()


@dataclass
class T0Result:
    holds: bool
    witness: tuple | None = None
    separating: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def is_t0(space):
    """Antisymmetry of specialization.

    On success ``separating[(x, y)]`` is a closed set containing exactly one
    of ``x``, ``y`` (the closure of that point).  On failure ``witness`` is a
    pair each in the other's closure.
    """
    pcs = space.point_closures()
    sep = {}
    for x in range(space.point_count):
        for y in range(x + 1, space.point_count):
            if not pcs[x] >> y & 1:
                sep[(x, y)] = pcs[x]
            elif not pcs[y] >> x & 1:
                sep[(x, y)] = pcs[y]
            else:
                return T0Result(False, (x, y))
    return T0Result(True, None, sep)


def reducibility_witness(space, c):
    """A pair of proper closed subsets whose union is ``c``, or None.

    Every proper closed subset of ``c`` is a union of point closures inside
    it, so ``c`` is reducible iff the proper point closures cover it.
    """
    pcs = space.point_closures()
    parts = [pcs[x] for x in to_indices(c) if pcs[x] != c]
    a = 0
    for p in parts:
        if a | p != c:
            a |= p
    for p in parts:
        if a | p == c and a != c and p != c:
            assert space.is_closed(a) and space.is_closed(p)
            return a, p
    return None


def irreducible_closed_sets(space, method="auto"):
    """Nonempty closed sets that are not a union of two proper closed subsets.

    ``method``:
      ``"pairs"``       literal scan over all pairs of closed subsets (exhaustive only)
      ``"definition"``  per closed set, via :func:`reducibility_witness` (exhaustive only)
      ``"order"``       closures of single points (up-sets with a least element)
      ``"auto"``        ``"definition"`` when exhaustive, else ``"order"``
    """
    if method == "auto":
        method = "definition" if space.mode == EXHAUSTIVE else "order"
    if method == "order":
        found = sorted(set(space.point_closures()), key=family_key)
    elif space.mode != EXHAUSTIVE:
        raise SpaceTooLarge(f"method {method!r} needs an exhaustive space")
    elif method == "definition":
        found = [c for c in space.closed_sets if c and reducibility_witness(space, c) is None]
    elif method == "pairs":
        found = []
        for c in space.closed_sets:
            if not c:
                continue
            proper = [a for a in space.closed_sets if a != c and is_subset(a, c)]
            lookup = set(proper)
            if not any((c & ~a) in lookup or any(a | b == c for b in proper) for a in proper):
                found.append(c)
    else:
        raise ValueError(f"unknown method {method!r}")
    return [ClosedSet(c, space) for c in found]


@dataclass
class SoberResult:
    holds: bool
    generic_points: dict = field(default_factory=dict)
    failure: tuple | None = None

    def __bool__(self):
        return self.holds


def is_sober(space, method="auto"):
    """Every irreducible closed set is the closure of exactly one point.

    ``generic_points`` maps each irreducible closed set (mask) to its
    generic point; ``failure`` is ``(mask, candidate points)`` otherwise.
    """
    pcs = space.point_closures()
    generic = {}
    for cs in irreducible_closed_sets(space, method):
        c = cs.members
        pts = [x for x in to_indices(c) if pcs[x] == c]
        if len(pts) != 1:
            return SoberResult(False, generic, (c, pts))
        generic[c] = pts[0]
    return SoberResult(True, generic)


@dataclass
class CompactnessResult:
    holds: bool
    method: str
    subfamilies_checked: int
    witnesses: list = field(default_factory=list)

    def __bool__(self):
        return self.holds


def _greedy_empty_witness(indices, masks, full):
    # drop members one at a time while the intersection stays empty
    keep = list(indices)
    i = 0
    while i < len(keep):
        trial = keep[:i] + keep[i + 1:]
        inter = full
        for j in trial:
            inter &= masks[j]
        if inter == 0:
            keep = trial
        else:
            i += 1
    return keep


def is_quasi_compact_alexander(space, seed=0, exhaustive_limit=12, samples=256):
    """Finite-intersection form of quasi-compactness on the recorded subbasis.

    Every subfamily of subbasic closed sets with empty intersection must
    contain a finite subfamily (at most ``point_count`` members) that
    already has empty intersection.  Subfamilies are enumerated when the
    subbasis has at most ``exhaustive_limit`` members, otherwise the whole
    subbasis plus ``samples`` seeded random subfamilies are checked.
    ``witnesses`` holds ``(subfamily, witness)`` index lists.
    """
    full = space.full
    sb = list(space.subbasis)
    k = len(sb)
    if k <= exhaustive_limit:
        families = [[i for i in range(k) if f >> i & 1] for f in range(1 << k)]
        method = "exhaustive"
    else:
        rng = random.Random(seed)
        families = [list(range(k))]
        families += [sorted(rng.sample(range(k), rng.randint(1, k))) for _ in range(samples)]
        method = "sampled"
    witnesses = []
    for fam in families:
        inter = full
        for i in fam:
            inter &= sb[i]
        if inter:
            continue
        wit = _greedy_empty_witness(fam, sb, full) if fam else []
        check = full
        for i in wit:
            check &= sb[i]
        if check or len(wit) > max(space.point_count, 1):
            return CompactnessResult(False, method, len(families), [(fam, wit)])
        witnesses.append((fam, wit))
    return CompactnessResult(True, method, len(families), witnesses)


def subspace(space, subset):
    """Subspace topology on the points of ``subset``, renumbered in ascending order."""
    if subset & ~space.full:
        raise ValueError("subset has points outside the space")
    positions = to_indices(subset)
    labels = [space.point_labels[p] for p in positions]
    sources = [space.source_points[p] for p in positions]
    sb = [restrict_mask(m, positions) for m in space.subbasis]
    if space.mode == EXHAUSTIVE:
        closed = sorted({restrict_mask(c, positions) for c in space.closed_sets}, key=family_key)
        return FiniteSpace(len(positions), tuple(closed), sb, EXHAUSTIVE,
                           point_labels=labels, source_points=sources)
    spec = space.specialization()[np.ix_(positions, positions)]
    spec.setflags(write=False)
    return FiniteSpace(len(positions), None, sb, ORDER, specialization=spec,
                       point_labels=labels, source_points=sources)


def is_open(space, subset):
    if subset & ~space.full:
        raise ValueError("subset has points outside the space")
    return space.is_closed(space.full & ~subset)


def finite_subcover(target, cover):
    """Greedy subfamily of ``cover`` whose union still contains ``target``."""
    chosen = []
    got = 0
    for u in sorted(cover, key=lambda m: (-(m & target).bit_count(), m)):
        if (u & target) & ~got:
            chosen.append(u)
            got |= u
        if is_subset(target, got):
            return chosen
    return chosen if is_subset(target, got) else None


def quasi_compact_open_sets(space):
    """Open sets every open cover of which has a finite subcover.

    For each open ``U`` the cover by all opens inside ``U`` (``U`` itself
    only when the proper ones fall short) is reduced to a finite subcover of
    at most ``|U|`` members.
    """
    opens = space.open_sets()
    out = []
    for u in opens:
        cover = [v for v in opens if v != u and is_subset(v, u)]
        union = 0
        for v in cover:
            union |= v
        if union != u:
            cover.append(u)
        sub = finite_subcover(u, cover)
        if sub is not None and len(sub) <= u.bit_count():
            out.append(u)
    return out


@dataclass
class BasisResult:
    holds: bool
    is_basis: bool
    intersection_closed: bool
    method: str
    failure: tuple | None = None

    def __bool__(self):
        return self.holds


def _pair_intersections_closed(family, rng, limit=PAIR_SCAN_LIMIT, samples=200_000):
    lookup = set(family)
    if len(family) <= limit:
        arr = family
        for i, a in enumerate(arr):
            for b in arr[i + 1:]:
                if a & b not in lookup:
                    return False, (a, b), "exhaustive"
        return True, None, "exhaustive"
    for _ in range(samples):
        a, b = rng.choice(family), rng.choice(family)
        if a & b not in lookup:
            return False, (a, b), "sampled"
    return True, None, "sampled"


def qc_open_basis(space, seed=0):
    """Do the quasi-compact opens form a basis closed under finite intersections?"""
    rng = random.Random(seed)
    if space.mode == EXHAUSTIVE:
        qc = quasi_compact_open_sets(space)
        opens = space.open_sets()
        for u in opens:
            union = 0
            for v in qc:
                if is_subset(v, u):
                    union |= v
            if union != u:
                return BasisResult(False, False, False, "exhaustive", (u,))
        ok, fail, how = _pair_intersections_closed(qc, rng)
        return BasisResult(ok, True, ok, how, fail)
    # minimal open neighbourhoods; every open is a union of them
    spec = space.specialization()
    n = space.point_count
    down = [from_indices(np.flatnonzero(spec[:, x]).tolist()) for x in range(n)]
    for x in range(n):
        if not is_open(space, down[x]):
            return BasisResult(False, False, False, ORDER, (down[x],))
    for x in range(n):
        for y in range(x + 1, n):
            w = down[x] & down[y]
            union = 0
            for z in to_indices(w):
                union |= down[z]
            if union != w:
                return BasisResult(False, True, False, ORDER, (down[x], down[y]))
    return BasisResult(True, True, True, ORDER)


def open_transfer_check(space, open_subset, seed=0, exhaustive_limit=TRANSFER_EXHAUSTIVE_LIMIT,
                        samples=4096):
    """For T inside an open S: T is open in the subspace S iff T is open in ``space``."""
    if not is_open(space, open_subset):
        raise NotOpen("subset is not open")
    positions = to_indices(open_subset)
    sub = subspace(space, open_subset)
    k = len(positions)
    if k <= exhaustive_limit:
        candidates = range(1 << k)
    else:
        rng = random.Random(seed)
        candidates = [rng.getrandbits(k) for _ in range(samples)]
    for t in candidates:
        if is_open(sub, t) != is_open(space, expand_mask(t, positions)):
            return False
    return True
