from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dialgebras.monomials import (DASHV, VDASH, DiMonomial, Node, PermutationAction, TreeBasis, act, all_perms,
                                  compose, derive_symmetries, enumerate_association_types, fill, format_juxtaposed,
                                  enumerate_di_monomials, enumerate_ditrees, inverse, leaves, normal_form,
                                  relabel_tree, shape, transposition)
from dialgebras.poly import parse_tree
from dialgebras.varieties import (TRILINEAR_TYPES, diproduct_basis, dual_number_extension, jordan_triple_basis,
                                  make_differential_dialgebra, matrix_algebra)


def perms(n):
    return st.permutations(list(range(n))).map(tuple)


@given(perms(5), perms(5), perms(5))
def test_act_group_law(s, t, w):
    m = DiMonomial(w, 2)
    assert act(compose(s, t), m) == act(s, act(t, m))
    tree = parse_tree("op1(a,op2(b,c,d),e)")
    assert act(compose(s, t), tree) == act(s, act(t, tree))
    assert act(inverse(s), act(s, m)) == m


def test_di_monomial_count_and_order():
    for n in range(1, 6):
        ms = enumerate_di_monomials(n)
        assert len(ms) == n * math.factorial(n) == len(set(ms))
    ms = enumerate_di_monomials(3)
    assert [str(m) for m in ms[:2]] == ["^a b c", "^a c b"]
    assert DiMonomial.parse("a^bc") == DiMonomial((0, 1, 2), 1)


def test_normal_form_by_evaluation():
    """Every parenthesization agrees with its normal form in a concrete dialgebra."""
    p = 101
    mult, d = dual_number_extension(matrix_algebra(2, p), p)
    D = make_differential_dialgebra(mult, d, p)
    rng = np.random.default_rng(7)
    vals = list(rng.integers(0, p, size=(4, D.dim)))
    ops = {DASHV: D.dashv, VDASH: D.vdash}

    def ev(t):
        if not isinstance(t, Node):
            return vals[t]
        return ops[t.op](ev(t.args[0]), ev(t.args[1]))

    trees = enumerate_ditrees((2, 0, 3, 1))
    assert len(trees) == 5 * 2 ** 3
    for t in trees:
        assert np.array_equal(ev(t), D.monomial(normal_form(t), vals))


def test_normal_form_rule():
    a, b, c = 0, 1, 2
    t = Node(DASHV, (Node(VDASH, (a, b)), c))       # (a |- b) -| c
    assert normal_form(t) == DiMonomial((a, b, c), 1)
    t = Node(VDASH, (a, Node(DASHV, (b, c))))       # a |- (b -| c)
    assert normal_form(t) == DiMonomial((a, b, c), 1)


def test_binary_type_counts_are_catalan():
    for n, cat in [(2, 1), (3, 2), (4, 5), (5, 14), (6, 42)]:
        assert len(enumerate_association_types({"m": 2}, n)) == cat


def test_binary_type_order():
    types = enumerate_association_types({"m": 2}, 4)
    words = [format_juxtaposed(fill(t, range(4))) for t in types]
    assert words[0] == "((ab)c)d"
    assert words[-1] == "a(b(cd))"


def test_trilinear_types():
    types = enumerate_association_types({"op1": 3, "op2": 3}, 5)
    assert len(types) == 12
    assert set(types) >= {shape(t) for t in TRILINEAR_TYPES}
    with pytest.raises(ValueError):
        enumerate_association_types({"op": 3}, 4)


def test_symmetric_type_folding():
    folded = enumerate_association_types({"op1": 3, "op2": 3}, 5, symmetric_ops=["op2"])
    assert len(folded) == 10


def test_diproduct_basis_sizes():
    assert diproduct_basis("both", 5).type_sizes() == [120, 60, 60, 60, 30, 60, 60, 60, 120, 60]
    assert len(diproduct_basis("op1", 5)) == 360
    assert len(diproduct_basis("op2", 5)) == 90


def test_derived_symmetry_sizes():
    assert jordan_triple_basis(5).type_sizes() == [120, 120, 120, 60, 60, 60, 120, 60, 60, 30]
    assert len(jordan_triple_basis(5)) == 810
    t = parse_tree("op2(a,op2(b,c,d),e)")
    assert sorted(derive_symmetries(t, ["op2"])) == sorted([transposition(5, 1, 3), transposition(5, 0, 4)])


def test_tree_basis_orbits():
    t = parse_tree("op2(a,b,c)")
    basis = TreeBasis([t], {0: [transposition(3, 0, 2)]})
    assert len(basis) == 3
    assert basis.index(parse_tree("op2(c,b,a)")) == basis.index(parse_tree("op2(a,b,c)"))
    with pytest.raises(KeyError):
        basis.index(parse_tree("op1(a,b,c)"))


@given(perms(4))
@settings(max_examples=30)
def test_permutation_action_matches_relabel(s):
    basis = TreeBasis(enumerate_association_types({"m": 2}, 4))
    action = PermutationAction(basis)
    k = all_perms(4).index(s)
    v = np.zeros(len(basis), dtype=np.int64)
    v[5] = 1
    row = action.orbit_rows(v)[k]
    target = basis.index(relabel_tree(basis.monomial(5), s))
    assert row[target] == 1 and row.sum() == 1
    assert leaves(basis.monomial(target)) == tuple(s[x] for x in leaves(basis.monomial(5)))
