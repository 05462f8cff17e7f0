import pytest
from hypothesis import given, settings, strategies as st

from qhyper.dualside import _seed_system, hg_dimension_report, hg_system
from qhyper.ncalg import (
    Alphabet,
    CompletionError,
    HypothesisError,
    NCPoly,
    RewriteSystem,
    check_binomial_expansion,
    check_power_expansion,
    free_algebra,
    parse_poly,
)
from qhyper.dualside import DualElem
from qhyper.qmatrix import QMatElem, manin_system
from qhyper.qring import LaurentZ, RationalQ

q = RationalQ.coerce(LaurentZ.q_power(1))


def yx_system() -> RewriteSystem:
    # letters ordered y < x, so ``x y`` is the larger word
    A = Alphabet(["y", "x"])
    sys_ = RewriteSystem(A)
    sys_.add_rule(A.word("x", "y"), {A.word("y", "x"): q})
    return sys_


def test_empty_word_is_irreducible():
    sys_ = yx_system()
    assert sys_.reduce(sys_.one()) == sys_.one()


def test_single_and_repeated_rule_application():
    sys_ = yx_system()
    x, y = sys_.gen("x"), sys_.gen("y")
    assert sys_.reduce(NCPoly((x * y).terms)) == NCPoly({(0, 1): q})
    assert sys_.reduce(NCPoly({(1, 1, 0): RationalQ.one()})) == NCPoly({(0, 1, 1): q * q})


def test_rules_must_decrease():
    A = Alphabet(["y", "x"])
    sys_ = RewriteSystem(A)
    with pytest.raises(ValueError):
        sys_.add_rule(A.word("y", "x"), {A.word("x", "y"): q})


def test_free_algebra_completes_to_itself():
    sys_ = free_algebra(["a", "b"]).complete(5)
    assert not sys_.rules
    assert sys_.certificate.confluent and sys_.certificate.rules_added == 0


def test_two_by_two_manin_system_is_already_complete():
    base = manin_system(2)
    done = base.complete(6)
    assert done.rules == base.rules
    assert done.certificate.rules_added == 0
    assert done.normal_word_counts(4) == [1, 4, 10, 20, 35]


def test_root_vector_completion_matches_pbw_counts():
    rep = hg_dimension_report(3, 4)
    assert rep["counts"] == rep["expected"] == [1, 12, 75, 328, 1134]
    assert rep["e_counts"] == [1, 3, 6, 10, 15]


def test_completion_derives_missing_commutation():
    sys_ = hg_system(3)
    A = sys_.alphabet
    lhs = A.word("E[1,3]", "E[1,2]")
    assert sys_.rules[lhs] == {A.word("E[1,2]", "E[1,3]"): q.inverse()}
    assert max(len(l) for l in sys_.rules) == 2


def test_completion_respects_ceiling():
    with pytest.raises(CompletionError):
        _seed_system(3)[0].complete(4, ceiling=10)


def test_dump_and_load_round_trip():
    sys_ = hg_system(2)
    text = sys_.dumps()
    again = RewriteSystem.loads(text, sys_.alphabet)
    assert again.rules == sys_.rules
    assert again.dumps() == text


def test_parse_poly_reads_rule_syntax():
    A = Alphabet(["y", "x"])
    p = parse_poly("(q^2 - 1) x y + 3 y + x", A)
    assert p.terms == {(1, 0): q * q - 1, (0,): RationalQ.from_int(3), (1,): RationalQ.one()}


def test_interreduction_keeps_normal_forms():
    full = _seed_system(3)[0].complete(4)
    slim = full.interreduce()
    assert len(slim.rules) <= len(full.rules)
    for w in full.rules:
        assert slim.reduce_terms({w: RationalQ.one()}) == full.reduce_terms({w: RationalQ.one()})


# Expansion identities


def t(n, i, j):
    return QMatElem.gen(n, i, j).scale(RationalQ.one())


def test_multinomial_on_row_entries():
    assert check_power_expansion([t(3, 1, 2), t(3, 1, 3)], q, 2, "a")
    assert check_power_expansion([t(3, 1, 2)], q, 5, "a")


def test_multinomial_rejects_non_commuting_inputs():
    with pytest.raises(HypothesisError):
        check_power_expansion([t(2, 1, 1), t(2, 2, 2)], q, 2, "a")


@pytest.mark.parametrize("variant", ["a1", "a2", "b", "c1", "c2", "d"])
def test_binomial_expansion_at_m_zero(variant):
    if variant in ("a1", "a2", "c1", "c2"):
        w = DualElem.E(2, 1, 2) * DualElem.La(2, 2) * DualElem.F(2, 2, 1)
        wit = {"x": DualElem.La(2, 1 if variant[0] == "a" else 2), "w": w.scale(-q.inverse() ** 2) if variant[0] == "a" else w}
    else:
        x = t(2, 1, 1) if variant == "b" else t(2, 2, 2)
        wit = {"x": x, "y": t(2, 1, 2), "z": t(2, 2, 1)}
    assert check_binomial_expansion(variant, 0, 0, **wit)
    assert check_binomial_expansion(variant, 1, 0, **wit)
    assert check_binomial_expansion(variant, 2, 1, **wit)


# Properties

letters = st.sampled_from([(i, j) for i in (1, 2) for j in (1, 2)])
small_coeff = st.integers(-2, 2).filter(bool)
polys = st.lists(st.tuples(small_coeff, st.lists(letters, max_size=3)), min_size=1, max_size=3)


def build(spec) -> QMatElem:
    out = QMatElem.zero(2)
    for c, word in spec:
        term = QMatElem.one(2)
        for i, j in word:
            term = term * QMatElem.gen(2, i, j)
        out = out + term.scale(LaurentZ.from_int(c))
    return out


@given(polys, polys, polys)
@settings(max_examples=40, deadline=None)
def test_normal_form_product_is_associative(a, b, c):
    x, y, z = build(a), build(b), build(c)
    assert (x * y) * z == x * (y * z)


@given(polys)
@settings(max_examples=40, deadline=None)
def test_reduction_is_idempotent(a):
    sys_ = manin_system(2)
    x = build(a)
    word_terms = {}
    for m, c in x.terms.items():
        word = tuple(k for k, e in enumerate(m) for _ in range(e))
        word_terms[word] = c
    once = sys_.reduce_terms(word_terms)
    assert sys_.reduce_terms(once) == once
