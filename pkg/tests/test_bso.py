from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from dialgebras.bso import TemplateRelation, bso, bso_report
from dialgebras.expansion import GroupAlgebraOp, erase_centers
from dialgebras.monomials import all_perms
from dialgebras.poly import MultiPoly


@st.composite
def omegas(draw):
    n = draw(st.integers(2, 4))
    words = draw(st.lists(st.sampled_from(all_perms(n)), min_size=1, max_size=4, unique=True))
    coefs = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(words), max_size=len(words)))
    return GroupAlgebraOp(n, dict(zip(words, coefs)))


@given(omegas())
def test_erasing_centers_recovers_omega(omega):
    word_poly = MultiPoly(omega.terms)
    for t in bso(omega):
        assert erase_centers(t.as_poly()) == word_poly


@given(omegas())
def test_hat_goes_on_each_argument(omega):
    for i, t in enumerate(bso(omega)):
        assert all(s[j] == i for (s, j) in t.terms)


def test_jordan_triple_product():
    res = bso_report(GroupAlgebraOp.parse("abc+cba"))
    assert [str(t) for t in res.templates] == ["^abc + cb^a", "a^bc + c^ba", "ab^c + ^cba"]
    assert res.duplicates == [TemplateRelation(2, 0, (2, 1, 0))]
    assert res.symmetries == [TemplateRelation(1, 1, (2, 1, 0))]
    assert res.redundant() == [2]
    assert res.duplicates[0].describe() == "op3(a,b,c) = op1(c,b,a)"


def test_lie_bracket():
    res = bso_report(GroupAlgebraOp.parse("ab-ba"))
    assert [str(t) for t in res.templates] == ["^ab - b^a", "a^b - ^ba"]
    assert res.duplicates == [] and res.symmetries == [] and res.redundant() == []


def test_associative_product_gives_dialgebra_products():
    res = bso_report(GroupAlgebraOp.parse("ab"))
    assert [str(t) for t in res.templates] == ["^ab", "a^b"]
