"""Named groups with pinned element orderings.

Orderings:
  Zn    residue k at index k, named "k".
  Sn    breadth-first discovery from generators (0 1 ... n-1) and (0 1).
  An    breadth-first discovery from the 3-cycles (0 1 k), k = 2..n-1.
  Dn    order 2n; r^k at index k, s r^k at index n + k.
  Q8    1, -1, i, -i, j, -j, k, -k.
  V4    Z2 x Z2.
  A x B direct product, (a, b) at index a*|B| + b; "x" is left-associative.
"""

import re
from functools import lru_cache

import numpy as np

from .group import direct_product, from_permutation_generators, validate_cayley_table


class UnknownCatalogName(KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown catalog group {self.name!r}"


LIMITS = {"Z": 64, "S": 5, "A": 5, "D": 16}

_ATOM = re.compile(r"^(Z|S|A|D)(\d+)$")


def cyclic(n):
    ar = np.arange(n)
    return validate_cayley_table((ar[:, None] + ar[None, :]) % n, [str(k) for k in range(n)])


def symmetric(n):
    gens = []
    if n >= 2:
        gens.append([(i + 1) % n for i in range(n)])
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        gens.append(swap)
    return from_permutation_generators(n, gens)


def alternating(n):
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(p)
    return from_permutation_generators(n, gens)


def dihedral(n):
    """Symmetries of the n-gon, order 2n."""
    size = 2 * n
    table = np.empty((size, size), dtype=np.int32)
    for x in range(size):
        fx, kx = divmod(x, n)
        for y in range(size):
            fy, ky = divmod(y, n)
            # r^k s = s r^-k
            k = ((-kx if fy else kx) + ky) % n
            table[x, y] = ((fx ^ fy) * n) + k
    names = ["1" if k == 0 else f"r^{k}" for k in range(n)]
    names += ["s" if k == 0 else f"s r^{k}" for k in range(n)]
    return validate_cayley_table(table, names)


_QUAT_NAMES = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
# unit products of 1, i, j, k as (sign, unit)
_QUAT_UNITS = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion():
    table = np.empty((8, 8), dtype=np.int32)
    for x in range(8):
        ux, sx = divmod(x, 2)
        for y in range(8):
            uy, sy = divmod(y, 2)
            sign, unit = _QUAT_UNITS[ux, uy]
            neg = (sx ^ sy) ^ (sign < 0)
            table[x, y] = 2 * unit + neg
    return validate_cayley_table(table, _QUAT_NAMES)


def _atom(name):
    if name in ("1", "trivial"):
        return cyclic(1)
    if name == "Q8":
        return quaternion()
    if name == "V4":
        return direct_product(cyclic(2), cyclic(2))
    m = _ATOM.match(name)
    if not m:
        raise UnknownCatalogName(name)
    kind, n = m.group(1), int(m.group(2))
    if n < 1 or n > LIMITS[kind]:
        raise UnknownCatalogName(name)
    return {"Z": cyclic, "S": symmetric, "A": alternating, "D": dihedral}[kind](n)


def normalize_name(name):
    parts = [p.strip() for p in re.split(r"\s*[x×]\s*", name.strip())]
    if not all(parts):
        raise UnknownCatalogName(name)
    return " x ".join(parts)


def catalog(name):
    """Look up a group by name, e.g. ``"S3"``, ``"Q8"`` or ``"Z2 x Z4"``."""
    return _build(normalize_name(name))


@lru_cache(maxsize=None)
def _build(name):
    parts = name.split(" x ")
    g = _atom(parts[0])
    for p in parts[1:]:
        g = direct_product(g, _atom(p))
    return g


def catalog_names():
    """The atomic names accepted by :func:`catalog` (products are built from these)."""
    names = ["trivial", "Q8", "V4"]
    for kind in "ZSAD":
        names += [f"{kind}{n}" for n in range(1, LIMITS[kind] + 1)]
    return names


# groups the acceptance run covers
STANDARD_SUITE = (
    [f"Z{n}" for n in range(2, 65)]
    + ["S3", "S4", "S5", "A4", "A5", "D4", "D6", "D8", "Q8", "V4", "Z2 x Z4", "S3 x Z2"]
)
