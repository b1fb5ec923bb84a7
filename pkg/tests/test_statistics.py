from collections import Counter

import pytest
from hypothesis import given

from coxstat import groups as G
from coxstat.enumeration import elements
from coxstat.groups import GroupDescriptor, inverse, length, parabolic_decompose
from coxstat.statistics import (
    Dmaj, dmaj, fmaj, get_statistic, induce, base_statistic, maj, nmaj, star,
)

from conftest import signed_permutations

A3, A4 = GroupDescriptor("A", 3), GroupDescriptor("A", 4)
B3 = GroupDescriptor("B", 3)
D4 = GroupDescriptor("D", 4)


def test_maj_examples():
    assert maj((3, 1, 2)) == 1
    assert maj((4, 3, 2, 1)) == 6
    assert maj(B3.element((2, -1, 3))) == 1
    assert maj(()) == 0


def test_type_b_statistics_examples():
    w = B3.element((2, -1, 3))
    assert nmaj(w) == 2
    assert fmaj(w) == 3
    w0 = B3.longest()
    assert nmaj(w0) == 9 and fmaj(w0) == 9


def test_type_d_statistics_examples():
    w = D4.element((-2, -1, 3, 4))  # s_0
    assert dmaj(w) == 1
    # Dmaj forgets the last sign: (-1,-2,-3,4) has descents at 1, 2 and three negatives
    assert Dmaj(D4.longest()) == 9
    assert Dmaj(D4.element((1, 2, 3, 4))) == 0


def test_family_checks():
    with pytest.raises(ValueError):
        nmaj(D4.identity())
    with pytest.raises(ValueError):
        base_statistic("fmaj", A3)
    with pytest.raises(ValueError):
        base_statistic("zmaj", A3)


@given(signed_permutations(families="B", max_n=6))
def test_nmaj_is_induced_from_maj(w):
    n = w.descriptor.n
    fac = parabolic_decompose(w, range(1, n))
    assert nmaj(w) == length(fac.w_quotient) + maj(fac.restricted())


@given(signed_permutations(families="D", max_n=6))
def test_dmaj_is_induced_from_maj(w):
    n = w.descriptor.n
    fac = parabolic_decompose(w, range(1, n))
    assert dmaj(w) == length(fac.w_quotient) + maj(fac.restricted())


@pytest.mark.parametrize("name,desc", [
    ("maj", "A:5"), ("majstar", "A:5"), ("nmaj", "B:4"), ("fmaj", "B:4"), ("dmaj", "D:5"),
    ("Dmaj", "D:5"), ("nmajstar", "B:3"),
])
def test_mahonian(name, desc):
    desc = GroupDescriptor.parse(desc)
    f = base_statistic(name, desc)
    E = elements(desc)
    assert Counter(map(f, E)) == Counter(map(length, E))


def test_star_is_involutive_and_inverts():
    f = base_statistic("maj", A4)
    fs = star(f)
    assert fs.name == "majstar" and star(fs) is f
    for w in elements(A4):
        assert fs(w) == maj(inverse(w))
    assert fs.kernel == "majstar"


def test_combinations():
    f, g = base_statistic("len", A3), base_statistic("maj", A3)
    w = A3.element((3, 1, 2))
    assert (f + g)(w) == 3 and (f - g)(w) == 1
    with pytest.raises(ValueError):
        f + base_statistic("len", A4)


WORKED = {(4, 3, 2, 1): 6, (4, 3, 1, 2): 5, (1, 4, 2, 3): 3, (2, 4, 3, 1): 5, (2, 1, 4, 3): 2}


def test_induce_maj_to_s4():
    f = induce(base_statistic("maj", A3), "{s1,s2}", A4)
    for w, v in WORKED.items():
        assert f(A4.element(w)) == v
    assert f.name == "induced:maj:{s1,s2}:right"
    same = get_statistic("induced:maj:{s1,s2}", A4)
    assert all(same(w) == f(w) for w in elements(A4))


def test_induced_boundary_rules():
    f = induce(base_statistic("maj", A3), {1, 2}, A4)
    for w in elements(A4):
        if w.window[3] == 4:
            assert f(w) == maj(w.window[:3])
        if not (G.right_descent_set(w) & {1, 2}):
            assert f(w) == length(w)


def test_induce_from_statistic_on_whole_group():
    # g given on A:4 itself is read on the full window of w_J
    g = base_statistic("maj", A4)
    f = induce(g, {1, 2}, A4)
    h = induce(base_statistic("maj", A3), {1, 2}, A4)
    assert all(f(w) == h(w) for w in elements(A4))


def test_induce_non_prefix_J():
    # read on the full window, maj sees descents at positions 2 and 3 of w_J
    with pytest.raises(ValueError):
        induce(base_statistic("maj", A4), {2, 3}, A4)
    f = induce(base_statistic("len", A4), {2, 3}, A4)
    assert all(f(w) == length(w) for w in elements(A4))


def test_induce_rejects_non_class_statistic():
    from coxstat.statistics import Statistic
    bad = Statistic("bad", lambda w: 0, A3)
    with pytest.raises(ValueError):
        induce(bad, {1, 2}, A4)
    induce(bad, {1, 2}, A4, validate=False)
    with pytest.raises(ValueError):
        induce(base_statistic("maj", A3), {1}, A4)


def test_left_induction_uses_left_cosets():
    g = base_statistic("maj", A3)
    f = induce(g, {1, 2}, A4, side="left")
    for w in elements(A4):
        p, v = G.left_parabolic_decompose(w, {1, 2})
        assert f(w) == length(v) + maj(p.window[:3])
    right = induce(star(g), {1, 2}, A4)
    assert all(f(w) == right(inverse(w)) for w in elements(A4))
