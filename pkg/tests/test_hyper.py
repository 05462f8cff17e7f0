import pytest
from hypothesis import given, settings, strategies as st

from qhyper.cli import evaluate
from qhyper.hyper import (
    Frac,
    HyperElem,
    basis,
    contract,
    coproduct_closed_form,
    frobenius_elem,
    gen_binom,
    gen_tb,
    hopf_sweep,
    hyper_coproduct,
    hyper_counit,
    relation_check,
    relation_instances,
    sl2_relation,
    sl2_relation_check,
    specialize_elem,
)
from qhyper.qmatrix import QMatElem, sl_project
from qhyper.qring import LaurentZ, RationalQ, gauss_binom, neg_gauss_binom


def H(text, n=2):
    return evaluate(text, n, "M")


def mono(n, entries):
    return basis(n).mono_from_entries(entries)


def test_expansion_of_basis_elements():
    b = basis(2)
    t12 = QMatElem.gen(2, 1, 2)
    t11 = QMatElem.gen(2, 1, 1)
    qq = LaurentZ.parse("q - q^-1")
    assert (b.expand(mono(2, {(1, 2): 1})).scale(qq) - Frac.from_qmat(t12)).is_zero()
    assert (b.expand(mono(2, {(1, 1): 1})).scale(LaurentZ.parse("q - 1")) - Frac.from_qmat(t11 - 1)).is_zero()
    assert contract(t12) == HyperElem.from_entries(2, {(1, 2): 1}, qq)
    assert contract(t11) == H("1 + (q - 1) bin[1](0,1)")
    assert contract(QMatElem.one(2)) == HyperElem.from_entries(2, {})


def test_expansion_round_trips_through_ambient_algebra():
    x = H("tb[1,2]^(2)")
    assert contract(x.expand()) == x
    qq = LaurentZ.parse("q - q^-1")
    amb = x.expand().scale(qq * qq * LaurentZ.parse("q + q^-1"))
    assert contract(amb) == contract(QMatElem.gen(2, 1, 2) ** 2)


def test_divided_power_products():
    assert H("tb[1,2]^(1) * tb[1,2]^(2)") == H("(q^-2 + 1 + q^2) tb[1,2]^(3)")
    assert str(H("tb[1,3]^(1) * tb[1,2]^(1)", 3)) == "q^-1 tb[1,2]^(1) tb[1,3]^(1)"
    x = H("tb[2,1]^(1) + bin[1](-1,2)")
    assert x.one_like() * x == x


def test_diagonal_binomials_twist_through_off_diagonal_pair():
    lhs = H("bin[2](0,1) * bin[1](0,1)")
    rhs = H("bin[1](0,1) * bin[2](0,1) - q^-2 (1 + q)^2 (q - q^-1) tb[1,2]^(1) * tb[2,1]^(1)")
    assert lhs == rhs


def test_counit_values():
    for c in range(-2, 3):
        for k in range(0, 3):
            want = gauss_binom(c, k) if c >= 0 else neg_gauss_binom(-c, k)
            assert hyper_counit(gen_binom(2, 1, c, k)) == want
    assert hyper_counit(gen_tb(2, 1, 2, 2)) == 0


def test_coproduct_of_degree_one_divided_power():
    got = hyper_coproduct(gen_tb(2, 1, 2, 1))
    want = hyper_coproduct(contract(QMatElem.gen(2, 1, 2)))
    assert got.scale(LaurentZ.parse("q - q^-1")) == want
    leg11 = H("1 + (q - 1) bin[1](0,1)")
    leg22 = H("1 + (q - 1) bin[2](0,1)")
    from qhyper.hyper import HTensor

    assert got == HTensor.pure(leg11, gen_tb(2, 1, 2, 1)) + HTensor.pure(gen_tb(2, 1, 2, 1), leg22)


@pytest.mark.parametrize("n", [2, 3])
def test_coproduct_closed_forms(n):
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                for h in (1, 2):
                    assert coproduct_closed_form("tb", n, i, j, h) == hyper_coproduct(gen_tb(n, i, j, h))
        for c in (-1, 0, 2):
            assert coproduct_closed_form("binom", n, i, c, 2) == hyper_coproduct(gen_binom(n, i, c, 2))


def test_all_relation_families_hold_for_two_by_two():
    insts = list(relation_instances(2, 2, 2))
    assert {i.family for i in insts} == {"qDP", "qBC", "HV2", "HV3", "CD2", "D2"}
    bad = [i.label() for i in insts if not relation_check(i)]
    assert bad == []


def test_alternate_diagonal_corner_form_fails():
    std = [i for i in relation_instances(3, 1, 1) if i.family in ("D4p", "D4m")]
    alt = [i for i in relation_instances(3, 1, 1, "alternate") if i.family in ("D4p", "D4m")]
    assert std and all(relation_check(i) for i in std)
    assert any(not relation_check(i) for i in alt)


def test_q_equals_one_bracket():
    x = H("bin[1](0,1) * tb[2,1]^(1) - tb[2,1]^(1) * bin[1](0,1)")
    assert specialize_elem(x, "one") == specialize_elem(gen_tb(2, 2, 1, 1), "one")


def test_cube_of_degree_one_vanishes_at_cube_root():
    y = gen_tb(2, 1, 2, 1) ** 3
    assert all(v.is_zero() for v in specialize_elem(y, ("eps", 3)).values())


def test_frobenius_images():
    b = basis(2)
    img = frobenius_elem(gen_tb(2, 1, 2, 3), 3)
    assert list(img) == [mono(2, {(1, 2): 1})]
    assert list(img.values()) == [1]
    assert frobenius_elem(gen_tb(2, 1, 2, 2), 3) == {}
    img = frobenius_elem(gen_binom(2, 1, 0, 6), 3)
    assert list(img) == [mono(2, {(1, 1): 2})]
    assert b.show(mono(2, {(1, 1): 2})) == "bin[1](0,2)"


def test_special_linear_relation():
    rep = sl2_relation_check()
    assert rep["ok"] and rep["vanishes_in_SL"] and rep["nonzero_in_M"]
    scaled = sl2_relation().scale(LaurentZ.parse("q^3 - 2"))
    assert sl_project(scaled.expand().to_qmat()).is_zero()


def test_hopf_axioms_in_basis_coordinates():
    assert hopf_sweep(2, 2)["ok"]


# Properties

entries2 = st.dictionaries(st.sampled_from([(1, 1), (1, 2), (2, 1), (2, 2)]), st.integers(0, 2), max_size=3)


@given(entries2)
@settings(max_examples=40, deadline=None)
def test_contract_inverts_expand(entries):
    x = HyperElem.from_entries(2, entries)
    assert contract(x.expand()) == x


@given(entries2, entries2)
@settings(max_examples=40, deadline=None)
def test_products_of_basis_elements_stay_integral(a, b):
    x = HyperElem.from_entries(2, a) * HyperElem.from_entries(2, b)
    assert x.integral


@given(entries2)
@settings(max_examples=25, deadline=None)
def test_fractional_multiples_are_not_integral(a):
    half = RationalQ.coerce(LaurentZ.parse("1 + q")).inverse()
    x = HyperElem.from_entries(2, a).scale(half)
    assert not x.integral
    assert contract(x.expand()) == x
