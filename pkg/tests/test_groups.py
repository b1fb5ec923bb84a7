import pytest
from hypothesis import given, strategies as st

from coxstat import groups as G
from coxstat.groups import GroupDescriptor, compose, inverse, length, parabolic_decompose

from conftest import all_windows, signed_permutations


# -- descriptors and windows --------------------------------------------------

def test_descriptor_parse_and_generators():
    assert GroupDescriptor.parse("A:4") == GroupDescriptor("A", 4)
    assert GroupDescriptor("A", 4).generators == (1, 2, 3)
    assert GroupDescriptor("B", 3).generators == (0, 1, 2)
    assert GroupDescriptor("D", 4).coxeter_rank == 4


@pytest.mark.parametrize("window,desc", [
    ((1, 1, 2), "A:3"), ((1, -2, 3), "A:3"), ((-1, 2, 3), "D:3"), ((1, 2), "B:3"), ((1, 4, 2), "B:3"),
])
def test_invalid_windows_rejected(window, desc):
    with pytest.raises(ValueError):
        GroupDescriptor.parse(desc).element(window)


def test_window_text():
    assert GroupDescriptor("B", 3).element("-1,2,3").window == (-1, 2, 3)


def test_generators_act_as_documented():
    B3, D3 = GroupDescriptor("B", 3), GroupDescriptor("D", 3)
    assert B3.generator(0).window == (-1, 2, 3)
    assert D3.generator(0).window == (-2, -1, 3)
    w = B3.element((3, -1, 2))
    # right multiplication moves positions, left multiplication moves values
    assert G.right_multiply(w, 1).window == (-1, 3, 2)
    assert G.left_multiply(1, w).window == (3, -2, 1)


@given(signed_permutations(), st.data())
def test_composition_is_pointwise(w, data):
    v = data.draw(st.sampled_from(G.subgroup_elements(w.descriptor, w.descriptor.generators)[:50]))
    uv = compose(w, v)
    for i in range(1, w.descriptor.n + 1):
        assert uv(i) == w(v(i))
    assert compose(w, inverse(w)) == w.descriptor.identity()


# -- length: closed formulas against the Cayley graph and reflections ---------

def test_length_matches_cayley_graph(small_group):
    for w in all_windows(small_group):
        assert length(w) == G.word_length(w)


def test_length_matches_reflection_count():
    for desc in (GroupDescriptor("A", 4), GroupDescriptor("B", 3), GroupDescriptor("D", 4)):
        for w in all_windows(desc)[::7]:
            assert length(w) == G.reflection_length_oracle(w)


def test_reflection_counts():
    # |T| = number of positive roots
    assert len(G.reflections(GroupDescriptor("A", 4))) == 6
    assert len(G.reflections(GroupDescriptor("B", 3))) == 9
    assert len(G.reflections(GroupDescriptor("D", 4))) == 12


def test_longest_element_lengths():
    assert length(GroupDescriptor("A", 5).longest()) == 10
    assert length(GroupDescriptor("B", 4).longest()) == 16
    assert length(GroupDescriptor("D", 5).longest()) == 20
    assert length(GroupDescriptor("D", 4).longest()) == 12


def test_examples_from_definitions():
    A4 = GroupDescriptor("A", 4)
    assert length(A4.element((4, 3, 2, 1))) == 6
    B3 = GroupDescriptor("B", 3)
    assert length(B3.element((-1, 2, 3))) == 1
    assert length(B3.element((-1, -2, -3))) == 9
    assert length(B3.element((-3, -2, -1))) == 6
    assert G.neg_set(B3.element((2, -1, -3))) == {2, 3}


@given(signed_permutations())
def test_descents_match_length_drop(w):
    desc = w.descriptor
    right = {i for i in desc.generators if length(G.right_multiply(w, i)) < length(w)}
    left = {i for i in desc.generators if length(G.left_multiply(i, w)) < length(w)}
    assert G.right_descent_set(w) == right
    assert G.left_descent_set(w) == left


@given(signed_permutations())
def test_length_of_inverse(w):
    assert length(inverse(w)) == length(w)


# -- parabolic factorization ---------------------------------------------------

def _brute_quotient(w, J):
    """Minimal-length element of the coset w W_J, found by listing the coset."""
    coset = [compose(w, u) for u in G.subgroup_elements(w.descriptor, J)]
    best = min(coset, key=length)
    assert sum(1 for x in coset if length(x) == length(best)) == 1
    return best


@given(signed_permutations(max_n=5), st.data())
def test_parabolic_factorization_against_coset_minimum(w, data):
    J = data.draw(st.sampled_from(list(G.all_generator_sets(w.descriptor))))
    fac = parabolic_decompose(w, J)
    assert fac.w_quotient == _brute_quotient(w, J)
    assert compose(fac.w_quotient, fac.w_parabolic) == w
    assert length(w) == length(fac.w_quotient) + length(fac.w_parabolic)
    assert not (G.right_descent_set(fac.w_quotient) & J)
    assert fac.w_parabolic in set(G.subgroup_elements(w.descriptor, J))


@given(signed_permutations(max_n=5), st.data())
def test_left_factorization(w, data):
    J = data.draw(st.sampled_from(list(G.all_generator_sets(w.descriptor))))
    p, v = G.left_parabolic_decompose(w, J)
    assert compose(p, v) == w
    assert length(w) == length(p) + length(v)
    assert not (G.left_descent_set(v) & J)


def test_type_b_quotient_length_is_negative_sum():
    B3 = GroupDescriptor("B", 3)
    fac = parabolic_decompose(B3.element((2, -1, 3)), {1, 2})
    assert length(fac.w_quotient) == 1
    for w in all_windows(GroupDescriptor("B", 4)):
        fac = parabolic_decompose(w, {1, 2, 3})
        assert length(fac.w_quotient) == -sum(a for a in w.window if a < 0)


def test_type_d_quotient_length():
    for w in all_windows(GroupDescriptor("D", 4)):
        fac = parabolic_decompose(w, {1, 2, 3})
        negs = [a for a in w.window if a < 0]
        assert length(fac.w_quotient) == -sum(negs) - len(negs)


def test_restriction_to_model():
    B3 = GroupDescriptor("B", 3)
    fac = parabolic_decompose(B3.element((3, -1, 2)), {1, 2})
    r = fac.restricted()
    assert r.descriptor == GroupDescriptor("A", 3)
    assert r.window == (3, 1, 2)
    fac = parabolic_decompose(GroupDescriptor("B", 4).element((4, -1, 3, 2)), {0, 1})
    assert fac.restricted().descriptor == GroupDescriptor("B", 2)
    assert parabolic_decompose(B3.element((3, 1, 2)), {2}).restricted() is None


@pytest.mark.parametrize("desc,J,model", [
    ("A:5", {1, 2}, "A:3"), ("B:4", {0, 1, 2}, "B:3"), ("B:4", {1, 2, 3}, "A:4"),
    ("D:5", {0, 1, 2, 3}, "D:4"), ("D:5", {1, 2, 3, 4}, "A:5"), ("A:5", {2, 3}, None),
    ("B:4", {0, 2}, None),
])
def test_parabolic_model(desc, J, model):
    got = G.parabolic_model(GroupDescriptor.parse(desc), J)
    assert (str(got) if got else None) == model


def test_generator_set_parsing():
    assert G.parse_generator_set("{s1,s2}") == {1, 2}
    assert G.parse_generator_set("s0, s1") == {0, 1}
    assert G.parse_generator_set(range(1, 3)) == {1, 2}
    assert G.format_generator_set({2, 0}) == "{s0,s2}"
    with pytest.raises(ValueError):
        G.parse_generator_set("{s0}", GroupDescriptor("A", 3))


def test_coxeter_matrix_relations(small_group):
    """(s_i s_j)^m = e exactly at m = m(i, j)."""
    m = G.coxeter_matrix(small_group)
    e = small_group.identity()
    for (i, j), mij in m.items():
        p = compose(small_group.generator(i), small_group.generator(j))
        x, order = p, 1
        while x != e:
            x, order = compose(x, p), order + 1
        assert order == mij
