"""Reference implementations of the hot kernels.

Pure Python (with numpy for the cubic table scan).  The compiled module
``_ckernels`` exposes the same four functions with identical results.
"""

import numpy as np

_ASSOC_CHUNK_CELLS = 1 << 22


def find_nonassociative(table):
    """Return the lexicographically first ``(a, b, c)`` with ``(ab)c != a(bc)``, or None."""
    t = np.asarray(table)
    n = t.shape[0]
    step = max(1, _ASSOC_CHUNK_CELLS // (n * n))
    for start in range(0, n, step):
        stop = min(n, start + step)
        # left[a, b, c] = (ab)c ; right[a, b, c] = a(bc)
        left = t[t[start:stop]]
        right = t[np.arange(start, stop)[:, None, None], t[None, :, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = bad[0]
            return int(a) + start, int(b), int(c)
    return None


def subgroup_closure(table, seed):
    """Elements reachable from index 0 by right multiplication by ``seed``.

    In a finite group this is the subgroup generated by ``seed``.
    """
    gens = sorted(set(int(s) for s in seed))
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            row = table[x]
            for g in gens:
                y = int(row[g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def is_product_closed(table, members):
    ms = [int(m) for m in members]
    inside = set(ms)
    for a in ms:
        row = table[a]
        for b in ms:
            if int(row[b]) not in inside:
                return False
    return True


def close_family(start, gens, use_union, cap):
    """Close ``start`` under ``x | g`` (or ``x & g``) for g in ``gens``.

    Returns the closed family sorted ascending, or None once it would
    exceed ``cap`` members.
    """
    family = set(int(x) for x in start)
    if len(family) > cap:
        return None
    gens = [int(g) for g in gens]
    work = list(family)
    while work:
        x = work.pop()
        for g in gens:
            y = (x | g) if use_union else (x & g)
            if y not in family:
                family.add(y)
                if len(family) > cap:
                    return None
                work.append(y)
    return sorted(family)
