"""Finite groups as Cayley tables, with subgroup and normal-closure machinery.

Elements are dense indices ``0..n-1`` and the identity is always index 0.
Subsets and subgroups carry their members as int bit-vectors.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product as _cartesian

import numpy as np

from . import kernels
from .bits import from_indices, full_mask, is_subset, to_indices

DEFAULT_ORDER_CAP = 10_000


class GroupError(ValueError):
    """Base class for invalid group input."""


class MalformedTable(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    def __init__(self, element):
        super().__init__(f"element {element} has no two-sided inverse")
        self.element = element


class NotAssociative(GroupError):
    def __init__(self, a, b, c):
        super().__init__(f"({a}*{b})*{c} != {a}*({b}*{c})")
        self.witness = (a, b, c)


class InvalidPermutation(GroupError):
    def __init__(self, index, reason="not a bijection"):
        super().__init__(f"generator {index}: {reason}")
        self.index = index


class OrderCapExceeded(GroupError):
    def __init__(self, cap, what="group order"):
        super().__init__(f"{what} exceeds cap {cap}")
        self.cap = cap


class NotASubgroup(GroupError):
    pass


class Group:
    """A validated finite group.

    ``table[a, b]`` is the index of ``a*b``; ``inverse[a]`` the index of
    ``a^-1``.  Instances are immutable; equality compares tables and names.
    """

    __slots__ = ("table", "inverse", "element_names", "_conj")

    def __init__(self, table, inverse, element_names):
        self.table = table
        self.inverse = inverse
        self.element_names = tuple(element_names)
        self._conj = None

    @property
    def order(self):
        return self.table.shape[0]

    @property
    def identity(self):
        return 0

    @property
    def full_mask(self):
        return full_mask(self.order)

    def mul(self, a, b):
        return int(self.table[a, b])

    def conjugation_table(self):
        """``c[x, a]`` is the index of ``x a x^-1``."""
        if self._conj is None:
            c = self.table[self.table, self.inverse[:, None]]
            c.setflags(write=False)
            self._conj = c
        return self._conj

    def element_order(self, a):
        k, x = 1, a
        while x != 0:
            x = int(self.table[x, a])
            k += 1
        return k

    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))

    def __eq__(self, other):
        if not isinstance(other, Group):
            return NotImplemented
        return (
            self.element_names == other.element_names
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.table.tobytes(), self.element_names))

    def __repr__(self):
        return f"Group(order={self.order})"


@dataclass(frozen=True)
class Subset:
    parent: Group
    members: int

    def __post_init__(self):
        if self.members < 0 or self.members >> self.parent.order:
            raise ValueError("subset mask out of range for parent group")

    @classmethod
    def of(cls, g, indices):
        return cls(g, from_indices(indices))


class Subgroup:
    """A subgroup keyed by its member bit-vector.

    ``is_normal_certified`` only ever flips from False to True, and does not
    take part in equality or hashing.
    """

    __slots__ = ("parent", "members", "is_normal_certified")

    def __init__(self, parent, members, is_normal_certified=False):
        self.parent = parent
        self.members = members
        self.is_normal_certified = is_normal_certified

    @property
    def size(self):
        return self.members.bit_count()

    def elements(self):
        return to_indices(self.members)

    def __contains__(self, a):
        return bool(self.members >> a & 1)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        flag = ", normal" if self.is_normal_certified else ""
        return f"Subgroup(size={self.size}{flag})"


def _seed_mask(g, seed):
    if isinstance(seed, Subset):
        if seed.parent is not g and seed.parent != g:
            raise ValueError("seed belongs to a different group")
        return seed.members
    if isinstance(seed, Subgroup):
        return seed.members
    return int(seed)


def validate_cayley_table(table, names=None):
    """Build a :class:`Group` from a Cayley table, checking every axiom.

    The identity is located by scan and moved to index 0 (swapping names
    along with it).  Associativity is checked exhaustively, which is cubic
    in the order: fine up to a few hundred elements, slow beyond.
    """
    try:
        t = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise MalformedTable(f"table is not a rectangular integer array: {exc}") from exc
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise MalformedTable(f"table must be a non-empty square array, got shape {t.shape}")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        bad = np.argwhere((t < 0) | (t >= n))[0]
        raise MalformedTable(f"entry at row {bad[0]}, column {bad[1]} is out of range [0, {n})")
    if names is None:
        names = [str(i) for i in range(n)]
    names = [str(x) for x in names]
    if len(names) != n:
        raise MalformedTable(f"expected {n} element names, got {len(names)}")

    ar = np.arange(n)
    identity = None
    for e in range(n):
        if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar):
            identity = e
            break
    if identity is None:
        raise NoIdentity("no element acts as a two-sided identity")

    t = t.astype(np.int32)
    if identity != 0:
        perm = ar.copy()
        perm[0], perm[identity] = identity, 0
        # perm is its own inverse: relabel x -> perm[x]
        t = perm[t[np.ix_(perm, perm)]].astype(np.int32)
        names[0], names[identity] = names[identity], names[0]

    inverse = np.empty(n, dtype=np.int32)
    for a in range(n):
        hits = np.flatnonzero(t[a] == 0)
        inv = next((int(b) for b in hits if t[b, a] == 0), None)
        if inv is None:
            raise NoInverse(a)
        inverse[a] = inv

    witness = kernels.find_nonassociative(t)
    if witness is not None:
        raise NotAssociative(*witness)

    t = np.ascontiguousarray(t)
    t.setflags(write=False)
    inverse.setflags(write=False)
    return Group(t, inverse, names)


def _compose(p, q):
    # apply q first, then p
    return tuple(p[i] for i in q)


def cycle_string(perm):
    """Cycle notation with fixed points omitted; the identity is ``"1"``."""
    seen = set()
    cycles = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "1"


def from_permutation_generators(degree, generators, order_cap=DEFAULT_ORDER_CAP):
    """Breadth-first closure of a permutation group.

    Elements are indexed in discovery order (identity first) and named in
    cycle notation.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    gens = []
    for k, gen in enumerate(generators):
        p = tuple(int(x) for x in gen)
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise InvalidPermutation(k)
        gens.append(p)

    ident = tuple(range(degree))
    index = {ident: 0}
    elements = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = _compose(x, s)
            if y not in index:
                if len(elements) >= order_cap:
                    raise OrderCapExceeded(order_cap)
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)

    n = len(elements)
    table = np.empty((n, n), dtype=np.int32)
    for i, p in enumerate(elements):
        for j, q in enumerate(elements):
            # a*b means "apply b, then a"
            table[i, j] = index[_compose(p, q)]
    return validate_cayley_table(table, [cycle_string(p) for p in elements])


def direct_product(g, h, order_cap=DEFAULT_ORDER_CAP):
    """Componentwise product; ``(a, b)`` has index ``a*|h| + b``."""
    m, k = g.order, h.order
    if m * k > order_cap:
        raise OrderCapExceeded(order_cap)
    gt = g.table.astype(np.int64)
    ht = h.table.astype(np.int64)
    table = (gt[:, None, :, None] * k + ht[None, :, None, :]).reshape(m * k, m * k)
    names = [f"({x},{y})" for x, y in _cartesian(g.element_names, h.element_names)]
    return validate_cayley_table(table, names)


def generated_subgroup(g, seed):
    """Smallest subgroup containing ``seed`` (a Subset, Subgroup or mask)."""
    mask = _seed_mask(g, seed)
    members = kernels.subgroup_closure(g.table, to_indices(mask))
    return Subgroup(g, from_indices(members))


def conjugates_mask(g, mask):
    """Union of all conjugates ``x m x^-1`` of members of ``mask``."""
    idx = to_indices(mask)
    if not idx:
        return 0
    hit = np.unique(g.conjugation_table()[:, idx])
    return from_indices(int(v) for v in hit)


def normal_closure(g, seed):
    """Smallest normal subgroup containing ``seed``; certified normal."""
    mask = _seed_mask(g, seed) | 1
    while True:
        conj = conjugates_mask(g, mask)
        closed = generated_subgroup(g, conj).members
        if closed == mask:
            break
        mask = closed
    return Subgroup(g, mask, is_normal_certified=True)


def is_subgroup_mask(g, mask):
    if not mask & 1:
        return False
    return kernels.is_product_closed(g.table, to_indices(mask))


def is_normal(g, h):
    """True iff ``h`` is invariant under conjugation; certifies ``h`` on success.

    Raises :class:`NotASubgroup` when ``h`` fails the subgroup axioms.
    """
    if not is_subgroup_mask(g, h.members):
        raise NotASubgroup("members are not closed under the group product")
    ok = is_subset(conjugates_mask(g, h.members), h.members)
    if ok:
        h.is_normal_certified = True
    return ok


def conjugacy_classes(g):
    """Conjugacy classes, each sorted, ordered by their smallest element."""
    conj = g.conjugation_table()
    seen = np.zeros(g.order, dtype=bool)
    classes = []
    for a in range(g.order):
        if seen[a]:
            continue
        cls = sorted(set(int(v) for v in conj[:, a]))
        seen[cls] = True
        classes.append(cls)
    return classes


def all_subgroups(g):
    """Every subgroup, as joins of cyclic subgroups closed to a fixpoint."""
    cyclic = {generated_subgroup(g, 1 << a).members for a in range(g.order)}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for a in frontier:
            for c in cyclic:
                if is_subset(c, a):
                    continue
                j = generated_subgroup(g, a | c).members
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return [Subgroup(g, m) for m in sorted(found, key=lambda m: (m.bit_count(), to_indices(m)))]
