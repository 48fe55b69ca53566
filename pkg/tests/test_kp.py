from __future__ import annotations

import pytest

from dialgebras.engine import IdentitySpace, find_identities, identity_space
from dialgebras.kp import (KPError, erase_subscripts, interchange_monomial, kp, kp_part1, kp_part2,
                           kp_reduce_opposite)
from dialgebras.linalg import GF
from dialgebras.monomials import TreeBasis, enumerate_association_types
from dialgebras.poly import format_tree, parse_identities, parse_poly
from dialgebras.varieties import builtin, dialgebra_products, two_operation_basis

F = GF(101)


def bracket(text):
    return parse_poly(text, style="bracket")


def test_associativity_part1_and_part2():
    assoc = builtin("associative").identities[0]
    part1 = kp_part1(assoc, 2)
    axioms = builtin("dialgebra").identities
    assert part1 == axioms[:3]
    assert kp_part2(2) == axioms[3:]


def test_associativity_lifts_to_free_dialgebra_identities():
    """KP output spans exactly the identities of the two dialgebra products."""
    sig = {"op1": 2, "op2": 2}
    basis = TreeBasis(enumerate_association_types(sig, 3))
    lifted = identity_space(kp(builtin("associative").identities, 2), basis, F, sig)
    res = find_identities(dialgebra_products(), basis, F)
    assert lifted == IdentitySpace.from_vectors(res.identities, basis, F, module=False)
    assert lifted.dim == 5 * 6


def test_linearized_jordan_part1():
    lin = builtin("jordan-algebra-linearized").identities[1]
    expected = [
        "{{{a,c}_1,b}_1,d}_1 + {{{a,d}_1,b}_1,c}_1 + {{{c,d}_2,b}_2,a}_2"
        " - {{a,c}_1,{b,d}_1}_1 - {{a,d}_1,{b,c}_1}_1 - {{c,d}_2,{b,a}_2}_2",
        "{{{a,c}_2,b}_2,d}_1 + {{{a,d}_2,b}_2,c}_1 + {{{c,d}_2,b}_2,a}_1"
        " - {{a,c}_2,{b,d}_1}_2 - {{a,d}_2,{b,c}_1}_2 - {{c,d}_2,{b,a}_1}_2",
        "{{{a,c}_2,b}_1,d}_1 + {{{a,d}_2,b}_2,c}_2 + {{{c,d}_1,b}_1,a}_1"
        " - {{a,c}_2,{b,d}_1}_1 - {{a,d}_2,{b,c}_2}_2 - {{c,d}_1,{b,a}_1}_1",
        "{{{a,c}_2,b}_2,d}_2 + {{{a,d}_2,b}_1,c}_1 + {{{c,d}_2,b}_1,a}_1"
        " - {{a,c}_2,{b,d}_2}_2 - {{a,d}_2,{b,c}_1}_1 - {{c,d}_2,{b,a}_1}_1",
    ]
    assert kp_part1(lin, 2) == [bracket(s) for s in expected]
    comm = kp_part1(builtin("jordan-algebra-linearized").identities[0], 2)
    assert comm == [bracket("{a,b}_1 - {b,a}_2"), bracket("{a,b}_2 - {b,a}_1")]


def test_jts_degree3_part1():
    sym = builtin("jts").identities[0]
    assert kp_part1(sym, 3) == [bracket("{a,b,c}_1 - {c,b,a}_3"), bracket("{a,b,c}_2 - {c,b,a}_2"),
                                bracket("{a,b,c}_3 - {c,b,a}_1")]


def test_jts_reduces_to_stated_identities():
    jts = builtin("jts").identities
    reduced = kp_reduce_opposite(kp(jts, 3), 3)
    assert all("op3" not in format_tree(m) for p in reduced for m in p)
    ops = {"op1": 3, "op2": 3}
    for d in (3, 5):
        basis = two_operation_basis(d)
        assert identity_space(reduced, basis, F, ops) == identity_space(builtin("jtd-kp").identities, basis, F, ops)


def test_jts_degree5_part1_after_reduction():
    """The five degree-5 identities, with op3 replaced by the reversed op1."""
    deg5 = builtin("jts").identities[1]
    out = kp_reduce_opposite(kp_part1(deg5, 3) + kp_part1(builtin("jts").identities[0], 3), 3)
    printed = parse_identities(
        "{a,b,{c,d,e}_1}_1 = {{a,b,c}_1,d,e}_1 - {c,{b,a,d}_2,e}_2 + {{a,b,e}_1,d,c}_1", style="bracket")
    assert printed[0] in out or -printed[0] in out


def test_part2_counts_and_spans():
    assert len(kp_part2(3)) == 12
    assert len(kp_part2(3, all_pairs=True)) == 18
    assert len(kp_part2(2)) == 2
    ops = {"op1": 3, "op2": 3, "op3": 3}
    basis = TreeBasis(enumerate_association_types(ops, 5))
    a = IdentitySpace.from_polys(kp_part2(3), basis, F)
    b = IdentitySpace.from_polys(kp_part2(3, all_pairs=True), basis, F)
    assert a == b


def test_interchange_monomial():
    assert format_tree(interchange_monomial(3, 2, 1, 2)) == "op1(a,op2(b,c,d),e)"
    assert format_tree(interchange_monomial(3, 3, 2, 1)) == "op2(a,b,op1(c,d,e))"


def test_erase_subscripts_inverts_part1():
    lin = builtin("jordan-algebra-linearized").identities[1]
    for p in kp_part1(lin, 2):
        assert erase_subscripts(p, "op") == lin


def test_errors():
    with pytest.raises(KPError):
        kp_part1(parse_poly("op(a,a,b)"), 3)
    with pytest.raises(KPError):
        kp_part1(parse_poly("op(a,b)"), 3)
    with pytest.raises(KPError):
        kp_reduce_opposite([bracket("{a,{b,c,d}_3,e}_1 - {a,{b,c,d}_1,e}_1")], 3)
    untouched = [bracket("{a,b,c}_1 - {c,b,a}_1")]
    assert kp_reduce_opposite(untouched, 3) == untouched
