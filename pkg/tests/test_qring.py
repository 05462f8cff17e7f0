from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from qhyper.qring import (
    CycloZ,
    LaurentZ,
    RationalQ,
    bal_binom,
    bal_int,
    cyclotomic,
    gauss_binom,
    neg_gauss_binom,
    qfact,
    qint,
    specialize_eps,
    specialize_one,
)

Q = sp.Symbol("q")


def L(text: str) -> LaurentZ:
    return LaurentZ.parse(text)


def to_sympy(x) -> sp.Expr:
    if isinstance(x, LaurentZ):
        return sum((c * Q**e for e, c in x.terms.items()), sp.Integer(0))
    r = RationalQ.coerce(x)
    num = sum((int(c) * Q**k for k, c in enumerate(r.num.coeffs())), sp.Integer(0))
    den = sum((int(c) * Q**k for k, c in enumerate(r.den.coeffs())), sp.Integer(0))
    return num / den


def sym_eq(x, expr) -> bool:
    return sp.simplify(to_sympy(x) - expr) == 0


laurents = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4).map(LaurentZ.from_terms)


# Frozen values


def test_qint_values():
    assert qint(0) == LaurentZ.zero()
    assert qint(3) == L("1 + q + q^2")


def test_gauss_binom_4_2():
    assert gauss_binom(4, 2) == L("1 + q + 2*q^2 + q^3 + q^4")
    assert specialize_one(gauss_binom(4, 2)) == 6


def test_negative_binomials():
    assert neg_gauss_binom(1, 1) == L("-q^-1")
    assert neg_gauss_binom(5, 0) == LaurentZ.one()
    assert neg_gauss_binom(2, 2) == L("q^-5 + q^-4 + q^-3")


def test_balanced_values():
    assert bal_int(1) == LaurentZ.one()
    assert bal_int(3) == L("q^-2 + 1 + q^2")
    assert bal_binom(2, 1) == L("q^-1 + q")


def test_cyclotomic_and_eps():
    assert cyclotomic(3) == L("1 + q + q^2")
    assert specialize_eps(bal_int(3), 3).is_zero()
    assert not specialize_eps(bal_int(2), 3).is_zero()


# Oracle comparisons


@pytest.mark.parametrize("n", range(0, 8))
def test_gauss_binom_matches_pascal_and_sympy(n):
    for s in range(0, n + 1):
        got = gauss_binom(n, s)
        want = sp.Integer(1)
        for k in range(s):
            want *= (1 - Q ** (n - k)) / (1 - Q ** (k + 1))
        assert sym_eq(got, sp.cancel(want))
        if 0 < s < n:
            assert got == gauss_binom(n - 1, s - 1) + gauss_binom(n - 1, s).shift(s)


@pytest.mark.parametrize("n,s", [(n, s) for n in range(1, 5) for s in range(0, 5)])
def test_negative_binomial_matches_product_formula(n, s):
    # (-n choose s)_q = prod_{k<s} (q^(-n-k) - 1) / (q^(k+1) - 1)
    want = sp.Integer(1)
    for k in range(s):
        want *= (Q ** (-n - k) - 1) / (Q ** (k + 1) - 1)
    assert sym_eq(neg_gauss_binom(n, s), sp.cancel(want))


def test_factorial_is_product_of_integers():
    acc = LaurentZ.one()
    for k in range(1, 7):
        acc = acc * qint(k)
        assert qfact(k) == acc


# Properties


@given(laurents, laurents, laurents)
def test_laurent_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentZ.zero()


@given(laurents)
def test_laurent_parse_pretty_round_trip(a):
    assert LaurentZ.parse(a.pretty()) == a


@given(laurents, laurents.filter(lambda x: not x.is_zero()))
def test_divexact_inverts_multiplication(a, b):
    assert (a * b).divexact(b) == a


@given(laurents, laurents.filter(lambda x: not x.is_zero()), laurents, laurents.filter(lambda x: not x.is_zero()))
@settings(max_examples=60)
def test_rational_field_axioms(a, b, c, d):
    x = RationalQ.coerce(a) / RationalQ.coerce(b)
    y = RationalQ.coerce(c) / RationalQ.coerce(d)
    assert x * y == y * x
    assert (x + y) - y == x
    if not y.is_zero():
        assert (x / y) * y == x


@given(laurents, laurents.filter(lambda x: not x.is_zero()))
@settings(max_examples=40)
def test_rational_at_one_agrees_with_sympy(a, b):
    r = RationalQ.coerce(a) / RationalQ.coerce(b)
    if b.at_one() != 0:
        assert r.at_one() == Fraction(a.at_one(), b.at_one())


@given(laurents, laurents)
@settings(max_examples=60)
def test_eps_specialization_is_a_ring_map(a, b):
    for ell in (3, 5):
        assert specialize_eps(a * b, ell) == specialize_eps(a, ell) * specialize_eps(b, ell)
        assert specialize_eps(a + b, ell) == specialize_eps(a, ell) + specialize_eps(b, ell)


def test_cyclo_zero_and_one():
    assert CycloZ.zero_at(3).is_zero()
    assert not CycloZ.one_at(3).is_zero()
