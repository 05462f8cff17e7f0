import pytest
from hypothesis import given, settings, strategies as st

from qhyper.cli import evaluate
from qhyper.qmatrix import (
    GLElem,
    QMatElem,
    algebra,
    antipode,
    antipode_axiom_holds,
    antipode_generator,
    coproduct,
    counit,
    frobenius_restricted,
    hopf_report,
    manin_system,
    pure,
    qdet,
    qminor,
    sl_project,
    tensor_mul,
    untransposed_cofactor_antipode,
)
from qhyper.qring import LaurentZ


def M(text, n=2):
    return evaluate(text, n, "M")


def GL(text, n=2):
    return evaluate(text, n, "GL")


def test_one_by_one_has_no_rules():
    assert not manin_system(1).rules


def test_manin_rules_for_two_by_two():
    sys_ = manin_system(2)
    A = sys_.alphabet
    t = lambda i, j: A.index[f"t[{i},{j}]"]
    assert sys_.rules[(t(2, 1), t(1, 2))] == {(t(1, 2), t(2, 1)): LaurentZ.one()}
    qq = LaurentZ.parse("q - q^-1")
    assert sys_.rules[(t(2, 2), t(1, 1))] == {(t(1, 1), t(2, 2)): LaurentZ.one(), (t(1, 2), t(2, 1)): -qq}


def test_normal_forms():
    assert str(M("t[2,1]*t[1,2]")) == "t[1,2] t[2,1]"
    assert M("t[1,1]*t[1,2]") == M("t[1,1] t[1,2]")
    assert M("t[2,2]*t[1,1]") == M("t[1,1] t[2,2] - (q - q^-1) t[1,2] t[2,1]")


def test_quantum_determinant():
    assert qdet(1) == M("t[1,1]", 1)
    assert qdet(2) == M("t[1,1] t[2,2] - q t[1,2] t[2,1]")
    assert qminor(3, (2, 3), (2, 3)) == M("t[2,2] t[3,3] - q t[2,3] t[3,2]", 3)


@pytest.mark.parametrize("n", [2, 3])
def test_determinant_is_central(n):
    d = qdet(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            g = QMatElem.gen(n, i, j)
            assert (d * g - g * d).is_zero()


def test_coproduct_values():
    assert coproduct(QMatElem.gen(2, 1, 2)) == pure(QMatElem.gen(2, 1, 1), QMatElem.gen(2, 1, 2)) + pure(
        QMatElem.gen(2, 1, 2), QMatElem.gen(2, 2, 2)
    )
    one = QMatElem.one(2)
    assert coproduct(one) == pure(one, one)
    for n in (2, 3):
        assert coproduct(qdet(n)) == pure(qdet(n), qdet(n))


def test_counit_on_generators():
    assert counit(QMatElem.gen(2, 1, 1)) == 1
    assert counit(QMatElem.gen(2, 1, 2)) == 0


def test_special_linear_projection():
    assert sl_project(qdet(2)) == sl_project(QMatElem.one(2))
    assert sl_project(M("t[1,1] t[2,2]")) == sl_project(M("1 + q t[1,2] t[2,1]"))
    assert sl_project(qdet(3)) == sl_project(QMatElem.one(3))
    assert str(evaluate("t[1,1] t[2,2]", 2, "SL")) == str(sl_project(M("1 + q t[1,2] t[2,1]")))


def test_antipode_values():
    assert antipode(QMatElem.gen(2, 1, 1)) == GL("t[2,2] Dqinv")
    assert antipode(QMatElem.gen(2, 1, 2)) == GL("-q^-1 t[1,2] Dqinv")
    assert antipode(GLElem.dqinv(2)) == GLElem(qdet(2))


@pytest.mark.parametrize("n", [2, 3])
def test_antipode_axiom_on_generators(n):
    assert antipode_axiom_holds(n, lambda i, j: antipode_generator(n, i, j))


def test_untransposed_cofactor_candidate_fails():
    assert not antipode_axiom_holds(2, lambda i, j: untransposed_cofactor_antipode(2, i, j))


@pytest.mark.parametrize("n", [2, 3])
def test_hopf_report(n):
    assert all(hopf_report(n).values())


def test_restricted_frobenius_two_by_two():
    rep = frobenius_restricted(2, 3)
    assert rep["ok"] and rep["commutator_pairs"] == 6
    assert frobenius_restricted(1, 3)["ok"]


# Properties

entries = st.sampled_from([(i, j) for i in (1, 2) for j in (1, 2)])
words = st.lists(entries, min_size=0, max_size=3)


def word_elem(word, n=2):
    out = QMatElem.one(n)
    for i, j in word:
        out = out * QMatElem.gen(n, i, j)
    return out


@given(words, words)
@settings(max_examples=30, deadline=None)
def test_coproduct_is_multiplicative(a, b):
    x, y = word_elem(a), word_elem(b)
    assert coproduct(x * y) == tensor_mul(algebra(2), coproduct(x), coproduct(y))


@given(words, words)
@settings(max_examples=25, deadline=None)
def test_antipode_reverses_products(a, b):
    x, y = word_elem(a), word_elem(b)
    assert antipode(x * y) == antipode(y) * antipode(x)


@given(words)
@settings(max_examples=30, deadline=None)
def test_counit_is_multiplicative_on_words(a):
    expected = 1
    for i, j in a:
        expected *= int(i == j)
    assert counit(word_elem(a)) == expected
