"""Bit-vectors as Python ints: bit i set means index i is a member."""


def from_indices(indices):
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def to_indices(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def full_mask(n):
    return (1 << n) - 1


def popcount(mask):
    return mask.bit_count()


def is_subset(a, b):
    return a & ~b == 0


def canonical_key(mask):
    """Sort key used for deterministic output: size first, then the index list."""
    return (mask.bit_count(), to_indices(mask))
