import math

import pytest

from normspec.catalog import (
    STANDARD_SUITE,
    UnknownCatalogName,
    catalog,
    catalog_names,
    normalize_name,
)
from normspec.group import conjugacy_classes


def test_cyclic_table():
    g = catalog("Z6")
    assert g.order == 6
    assert all(g.mul(a, b) == (a + b) % 6 for a in range(6) for b in range(6))


def test_quaternion():
    g = catalog("Q8")
    assert g.order == 8
    assert [x for x in range(8) if g.element_order(x) == 2] == [1]
    assert not g.is_abelian()


@pytest.mark.parametrize("n", range(1, 6))
def test_symmetric_and_alternating_orders(n):
    assert catalog(f"S{n}").order == math.factorial(n)
    assert catalog(f"A{n}").order == max(1, math.factorial(n) // 2)


@pytest.mark.parametrize("n", range(1, 17))
def test_dihedral(n):
    g = catalog(f"D{n}")
    assert g.order == 2 * n
    # reflections have order 2, rotation r has order n
    assert all(g.element_order(n + k) == 2 for k in range(n))
    assert g.element_order(1 % n) == (n if n > 1 else 1)
    assert g.is_abelian() == (n <= 2)


def test_d4_matches_s4_subgroup_shape():
    # D4 has 5 conjugacy classes, as does Q8
    assert len(conjugacy_classes(catalog("D4"))) == 5
    assert len(conjugacy_classes(catalog("Q8"))) == 5


def test_products_and_aliases():
    assert catalog("Z2 x Z4").order == 8
    assert catalog("Z2xZ4") is catalog("Z2 x Z4")
    assert catalog("V4") == catalog("Z2 x Z2")
    assert catalog("S3 x Z2").order == 12
    assert catalog("trivial").order == 1
    assert normalize_name(" S3×Z2 ") == "S3 x Z2"


@pytest.mark.parametrize("name", ["Z0", "Z65", "S6", "A7", "D17", "Q16", "", "Z2 x ", "foo"])
def test_unknown_names(name):
    with pytest.raises(UnknownCatalogName):
        catalog(name)


def test_names_listed_build():
    for name in catalog_names():
        catalog(name)


def test_standard_suite_contents():
    assert len(STANDARD_SUITE) == 63 + 12
    assert catalog("S5").order == 120
