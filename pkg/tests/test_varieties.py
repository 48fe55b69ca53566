from __future__ import annotations

import numpy as np
import pytest

from dialgebras.expansion import DiOpTemplate, GroupAlgebraOp, NonassocOpTemplate
from dialgebras.linalg import GF, QQ
from dialgebras.poly import parse_poly
from dialgebras.varieties import (ConcreteDialgebra, ConcreteJordanDialgebra, ConsequenceSpaces, DifferentialError,
                                  UnknownBuiltinError, VarietySpec, associative_triple_operations, builtin,
                                  builtin_names, corrupt_sign, differential_triple_operations, diproducts,
                                  dual_number_extension, format_ops_text, jordan_triple_operations,
                                  make_differential_dialgebra, matrix_algebra, parse_ops_text, scalars,
                                  special_jordan_product, verify_modulo, verify_on_free, verify_on_instance)

P = 101


@pytest.fixture(scope="module")
def m2_dual():
    return dual_number_extension(matrix_algebra(2, P), P)


@pytest.fixture(scope="module")
def dialgebra(m2_dual):
    return make_differential_dialgebra(*m2_dual, P)


def test_builtins():
    names = builtin_names()
    for name in ["dialgebra", "jtd", "jtd-kp", "jtd-bso", "jordan-dialgebra", "diproducts"]:
        assert name in names
    assert len(builtin("jtd").identities) == 8
    assert isinstance(builtin("diproducts")["op1"], DiOpTemplate)
    with pytest.raises(UnknownBuiltinError):
        builtin("no-such-variety")


@pytest.mark.parametrize("name", ["jtd", "jtd-kp", "jtd-bso", "diproduct1-deg5", "diproducts-deg5-generators"])
def test_identity_sets_hold_for_diproducts(name):
    assert all(verify_on_free(builtin(name).identities, diproducts()))


def test_dialgebra_axioms_hold_for_products():
    assert all(verify_on_free(builtin("dialgebra").identities, builtin("dialgebra-products")))


def test_corruption_is_detected():
    ids = builtin("jtd").identities
    assert not any(verify_on_free([corrupt_sign(p) for p in ids], diproducts()))
    p = parse_poly("op1(a,b,c) - op2(a,b,c)")
    assert corrupt_sign(p, 0) == parse_poly("-op1(a,b,c) - op2(a,b,c)")


def test_verify_modulo_jordan_dialgebra():
    """The Jordan triple identities hold for the triple products of a Jordan dialgebra."""
    spaces = ConsequenceSpaces(builtin("jordan-dialgebra"), GF(P))
    jtd = builtin("jtd").identities
    ok = verify_modulo(jtd[:3], builtin("jordan-dialgebra"), jordan_triple_operations(), GF(P), spaces)
    assert all(ok)
    assert not verify_modulo([corrupt_sign(jtd[0])], builtin("jordan-dialgebra"),
                             jordan_triple_operations(), GF(P), spaces)[0]
    with pytest.raises(ValueError):
        ConsequenceSpaces(builtin("dialgebra"), QQ)


def test_differential_dialgebra(dialgebra, m2_dual):
    assert dialgebra.dim == 8 and not dialgebra.axiom_failures()
    with pytest.raises(DifferentialError):
        make_differential_dialgebra(*m2_dual, P, leibniz="full")
    with pytest.raises(ValueError):
        make_differential_dialgebra(*m2_dual, P, leibniz="sometimes")


def test_small_differential_dialgebras():
    mult, d = dual_number_extension(scalars(P), P)
    D = make_differential_dialgebra(mult, d, P)
    assert D.dim == 2
    zero = make_differential_dialgebra(matrix_algebra(2, P), np.zeros((4, 4), dtype=np.int64), P)
    assert not zero.left.any() and not zero.right.any()
    with pytest.raises(DifferentialError):
        make_differential_dialgebra(mult, np.eye(2, dtype=np.int64), P)


def test_non_dialgebra_is_flagged():
    rng = np.random.default_rng(0)
    D = ConcreteDialgebra(2, P, rng.integers(0, P, (2, 2, 2)), rng.integers(0, P, (2, 2, 2)))
    assert D.axiom_failures()
    with pytest.raises(ValueError):
        ConcreteDialgebra(1, 5, np.zeros((1, 1, 1), dtype=np.int64), np.zeros((1, 1, 1), dtype=np.int64))


def test_instance_checks(dialgebra, m2_dual):
    ops = {k: dialgebra.operation(v) for k, v in diproducts().items()}
    rep = verify_on_instance(builtin("jtd").identities, ops, dialgebra.dim, P, trials=30)
    assert rep.ok and rep.trials == 30
    direct = differential_triple_operations(*m2_dual, P)
    bad = verify_on_instance([corrupt_sign(p) for p in builtin("jtd").identities], direct, 8, P, trials=10)
    assert not bad.ok and all(bad.violations)
    assert rep.as_dict()["violations"] == [0] * 8
    with pytest.raises(ValueError):
        verify_on_instance(builtin("jtd").identities, ops, 8, P, trials=0)


def test_direct_formulas_match_templates(dialgebra, m2_dual):
    rng = np.random.default_rng(2)
    via = {k: dialgebra.operation(v) for k, v in diproducts().items()}
    direct = differential_triple_operations(*m2_dual, P)
    for _ in range(10):
        a, b, c = rng.integers(0, P, (3, 8))
        for k in ("op1", "op2"):
            assert np.array_equal(via[k](a, b, c), direct[k](a, b, c))


def test_associative_instance():
    ops = associative_triple_operations(matrix_algebra(2, P), P)
    assert verify_on_instance(builtin("jtd").identities, ops, 4, P, trials=20).ok


def test_jordan_dialgebra_instance(dialgebra):
    J = ConcreteJordanDialgebra.from_dialgebra(dialgebra)
    assert not J.axiom_failures()
    ops = {k: J.operation(v) for k, v in jordan_triple_operations().items()}
    assert verify_on_instance(builtin("jtd").identities, ops, J.dim, P, trials=20).ok
    prod = special_jordan_product()["m"]
    rng = np.random.default_rng(4)
    a, b = rng.integers(0, P, (2, 8))
    assert np.array_equal(J.mul(a, b), dialgebra.operation(prod)(a, b))


def test_tsv_roundtrips(dialgebra):
    back = ConcreteDialgebra.from_tsv(dialgebra.to_tsv(), dialgebra.dim)
    assert back.p == P
    assert np.array_equal(back.left, dialgebra.left) and np.array_equal(back.right, dialgebra.right)
    J = ConcreteJordanDialgebra.from_dialgebra(dialgebra)
    J2 = ConcreteJordanDialgebra.from_tsv(J.to_tsv(), J.dim)
    assert np.array_equal(J2.product, J.product)


def test_variety_text_roundtrip():
    for name in ["jtd", "dialgebra", "jordan-dialgebra"]:
        v = builtin(name)
        w = VarietySpec.from_text(v.to_text())
        assert w.identities == v.identities and w.signature == v.signature


def test_ops_text_roundtrip():
    text = "# ternary\nop1 = ^abc + cb^a\nop2 = a^bc + c^ba\nm = (ab)c - a(bc)\nw = abc + cba\n"
    ops = parse_ops_text(text)
    assert isinstance(ops["m"], NonassocOpTemplate) and isinstance(ops["w"], GroupAlgebraOp)
    assert parse_ops_text(format_ops_text(ops)).keys() == ops.keys()
    assert str(parse_ops_text(format_ops_text(ops))["op1"]) == "^abc + cb^a"
    with pytest.raises(ValueError):
        parse_ops_text("not a template line")
