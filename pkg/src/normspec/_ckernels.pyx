# distutils: language = c++
"""Compiled versions of the hot kernels; see ``_pykernels`` for the contracts."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, uint64_t
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

cnp.import_array()


def find_nonassociative(table):
    cdef const int32_t[:, ::1] t = np.ascontiguousarray(table, dtype=np.int32)
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t a, b, c
    cdef int32_t ab
    for a in range(n):
        for b in range(n):
            ab = t[a, b]
            for c in range(n):
                if t[ab, c] != t[a, t[b, c]]:
                    return int(a), int(b), int(c)
    return None


def subgroup_closure(table, seed):
    cdef const int32_t[:, ::1] t = np.ascontiguousarray(table, dtype=np.int32)
    cdef Py_ssize_t n = t.shape[0]
    cdef vector[int32_t] gens
    cdef vector[char] seen = vector[char](n, 0)
    cdef vector[int32_t] queue
    cdef Py_ssize_t head = 0, k
    cdef int32_t x, y
    for s in sorted(set(int(v) for v in seed)):
        gens.push_back(s)
    seen[0] = 1
    queue.push_back(0)
    while head < <Py_ssize_t>queue.size():
        x = queue[head]
        head += 1
        for k in range(<Py_ssize_t>gens.size()):
            y = t[x, gens[k]]
            if not seen[y]:
                seen[y] = 1
                queue.push_back(y)
    return [i for i in range(n) if seen[i]]


def is_product_closed(table, members):
    cdef const int32_t[:, ::1] t = np.ascontiguousarray(table, dtype=np.int32)
    cdef Py_ssize_t n = t.shape[0]
    cdef vector[char] inside = vector[char](n, 0)
    cdef vector[int32_t] ms
    cdef Py_ssize_t i, j, m
    for v in members:
        ms.push_back(int(v))
        inside[int(v)] = 1
    m = ms.size()
    for i in range(m):
        for j in range(m):
            if not inside[t[ms[i], ms[j]]]:
                return False
    return True


def close_family(start, gens, bint use_union, Py_ssize_t cap):
    cdef unordered_set[uint64_t] family
    cdef vector[uint64_t] work
    cdef vector[uint64_t] g
    cdef uint64_t x, y
    cdef Py_ssize_t k
    for v in start:
        if family.insert(<uint64_t>v).second:
            work.push_back(<uint64_t>v)
    if <Py_ssize_t>family.size() > cap:
        return None
    for v in gens:
        g.push_back(<uint64_t>v)
    while not work.empty():
        x = work.back()
        work.pop_back()
        for k in range(<Py_ssize_t>g.size()):
            y = (x | g[k]) if use_union else (x & g[k])
            if family.insert(y).second:
                if <Py_ssize_t>family.size() > cap:
                    return None
                work.push_back(y)
    out = [int(v) for v in family]
    out.sort()
    return out
