import pytest
from hypothesis import given, settings, strategies as st

from qhyper.cli import evaluate
from qhyper.dualside import (
    DualElem,
    UMonomial,
    corner_minor_check,
    hg_system,
    injectivity_rank,
    integrality_scan,
    pairing,
    preimage_spot_check,
    root_image_check,
    root_image_closed,
    root_image_report,
    torus_pairing_check,
    torus_product,
    xi,
    xi_manin_check,
    xi_qdet_check,
)
from qhyper.hyper import gen_binom, gen_tb
from qhyper.qmatrix import QMatElem, qdet
from qhyper.qring import LaurentZ, RationalQ, gauss_binom

q = RationalQ.coerce(LaurentZ.q_power(1))


def D(text, n=2):
    return evaluate(text, n)


def test_two_by_two_has_no_composite_roots():
    sys_ = hg_system(2)
    assert not any("E[1,3]" in name for name in sys_.alphabet.names)


def test_composite_root_rule():
    sys_ = hg_system(3)
    A = sys_.alphabet
    lhs = A.word("E[2,3]", "E[1,2]")
    assert sys_.rules[lhs] == {A.word("E[1,2]", "E[2,3]"): q, A.word("E[1,3]"): -q}
    assert D("E[1,2] E[2,3]", 3) == D("q^-1 E[2,3] E[1,2] + E[1,3]", 3)


def test_torus_weights():
    assert D("La[1] E[1,2] La[1]^-1") == D("q E[1,2]")
    assert D("La[2] F[2,1] La[2]^-1") == D("q^-1 F[2,1]")
    assert D("La[1] F[2,1] La[1]^-1") == D("q F[2,1]")


def test_embedding_on_generators():
    assert xi(QMatElem.gen(2, 2, 2)) == D("La[2]")
    assert xi(QMatElem.gen(3, 3, 3)) == D("La[3]", 3)
    assert xi(QMatElem.gen(2, 1, 2)) == D("-(q - q^-1) E[1,2] La[2]")
    assert xi(QMatElem.gen(2, 2, 1)) == D("q^-2 (q - q^-1) La[2] F[2,1]")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_determinant_maps_to_torus_product(n):
    assert xi(qdet(n)) == torus_product(n)
    assert xi_qdet_check(n)


@pytest.mark.parametrize("n", [2, 3])
def test_embedding_respects_relations(n):
    rep = xi_manin_check(n)
    assert rep["ok"] and rep["relations"] == {2: 6, 3: 36}[n]
    assert corner_minor_check(n)["ok"]


def test_unscaled_embedding_breaks_relations_at_three():
    assert xi_manin_check(2, "unscaled")["ok"]
    rep = xi_manin_check(3, "unscaled")
    assert len(rep["failures"]) == 6


def test_root_image_values():
    assert str(root_image_closed("upper", 2, (1, 2, 1))) == "-E[1,2]*La[2]"
    assert root_image_closed("upper", 2, (1, 2, 0)) == DualElem.one(2)
    assert root_image_check("upper", 2, (1, 2, 1))
    assert xi(gen_tb(2, 1, 2, 1)) == D("-E[1,2] La[2]")


@pytest.mark.parametrize("n", [2, 3])
def test_root_images_all_instances(n):
    rep = root_image_report(n, 2, 1)
    assert rep["ok"], rep["failures"]


def test_unscaled_diagonal_images_fail():
    rep = root_image_report(2, 3, 2, "unscaled")
    assert rep["failures"] and all(kind == "diagonal" for kind, _ in rep["failures"])


def test_pairing_values():
    u = UMonomial((1,), (0, 1), (0,))
    assert pairing(D("E[1,2] La[2]"), u) == -q
    assert pairing(D("(La[1] - 1)/(q - 1)"), UMonomial((0,), (2, 0), (0,))) == 1 + q
    assert pairing(D("E[1,2] La[2]"), UMonomial((0,), (0, 1), (0,))).is_zero()
    assert pairing(DualElem.one(2), UMonomial((0,), (0, 0), (0,))) == RationalQ.one()


def test_pairing_of_binomial_is_gaussian():
    x = xi(gen_binom(2, 1, 0, 2))
    val = pairing(x, UMonomial((0,), (3, 0), (0,)))
    assert val.is_laurent() and val.to_laurent() == gauss_binom(3, 2)


def test_torus_pairing_formula():
    assert torus_pairing_check(3, 3)["ok"]


def test_small_integrality_scan():
    rep = integrality_scan(2, 2, 2)
    assert rep["ok"] and rep["pairs"] > 0


def test_monomial_label_validation():
    with pytest.raises(ValueError):
        UMonomial((1, 2), (0, 0), (0,))
    with pytest.raises(ValueError):
        UMonomial((-1,), (0, 0), (0,))


def test_preimages_of_torus_products():
    assert preimage_spot_check(1, 2, 2)["status"] == "solved"
    assert preimage_spot_check(1, 2, 2)["ok"]


@pytest.mark.parametrize("n,d", [(2, 3), (3, 2)])
def test_embedding_is_injective_in_low_degree(n, d):
    rep = injectivity_rank(n, d)
    assert rep["ok"] and rep["rank"] == rep["columns"]


# Properties

t_entries = st.sampled_from([(i, j) for i in (1, 2) for j in (1, 2)])
dual_letters = st.sampled_from(["E[1,2]", "F[2,1]", "La[1]", "La[2]", "La[1]^-1", "La[2]^-1"])


def mat_word(word, n=2):
    out = QMatElem.one(n)
    for i, j in word:
        out = out * QMatElem.gen(n, i, j)
    return out


@given(st.lists(t_entries, max_size=3), st.lists(t_entries, max_size=3))
@settings(max_examples=30, deadline=None)
def test_embedding_is_multiplicative(a, b):
    x, y = mat_word(a), mat_word(b)
    assert xi(x * y) == xi(x) * xi(y)


@given(st.lists(dual_letters, max_size=3), st.lists(dual_letters, max_size=3), st.lists(dual_letters, max_size=3))
@settings(max_examples=30, deadline=None)
def test_dual_product_is_associative(a, b, c):
    x, y, z = (D(" ".join(w)) if w else DualElem.one(2) for w in (a, b, c))
    assert (x * y) * z == x * (y * z)


@given(
    st.lists(t_entries, max_size=2),
    st.lists(t_entries, max_size=2),
    st.integers(-3, 3),
    st.tuples(st.integers(0, 2), st.integers(-2, 2), st.integers(-2, 2), st.integers(0, 2)),
)
@settings(max_examples=30, deadline=None)
def test_pairing_is_linear(a, b, c, label):
    e, z1, z2, f = label
    u = UMonomial((e,), (z1, z2), (f,))
    x, y = xi(mat_word(a)), xi(mat_word(b))
    k = RationalQ.from_int(c)
    assert pairing(x + y.scale(k), u) == pairing(x, u) + k * pairing(y, u)
