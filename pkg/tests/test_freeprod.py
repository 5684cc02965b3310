from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commgrowth.errors import InvalidInputError
from commgrowth.freeprod import (
    FPWord,
    FreeProduct,
    adjacency_closed_paths,
    closed_paths_shortcut,
    count_closed_paths_complete,
    hecke_group,
    product_main_term,
)
from commgrowth.groups import FiniteGroupTable

# frozen exact class counts (Wicks acceptance + dedup); Z/2*Z/3 values up to k = 24
# also reproduced by a forward [U, V] enumeration with |U|, |V| <= 14
MODULAR_COUNTS = {4: 1, 8: 2, 12: 6, 16: 12, 20: 32, 24: 88}
Z2_Z4_COUNTS = {4: 2, 8: 8, 12: 28}
Z3_Z3_COUNTS = {4: 2, 8: 8, 12: 60}


@pytest.fixture(scope="module")
def modular():
    return FreeProduct(*hecke_group(3))


@pytest.fixture(scope="module")
def s3_z2():
    return FreeProduct(FiniteGroupTable.symmetric(3), FiniteGroupTable.cyclic(2))


def letters_for(fp):
    pairs = [(f, e) for f in (1, 2) for e in range(fp.groups[f].order)]
    return st.lists(st.sampled_from(pairs), max_size=8)


def test_normalize(modular):
    assert modular.normalize([(1, 1), (1, 1)]).letters == ()
    assert modular.normalize([(2, 1), (2, 1), (1, 1)]).letters == ((2, 2), (1, 1))
    assert modular.normalize([(2, 1), (1, 0), (2, 2)]).letters == ()
    with pytest.raises(InvalidInputError):
        modular.normalize([(3, 1)])
    with pytest.raises(InvalidInputError):
        FPWord(((1, 1), (1, 1)))


def test_cyclic_reduce(modular):
    w = modular.parse("r.s.r")
    cyc, conj = modular.cyclic_reduce(w)
    assert modular.format(cyc.letters) == "s.R"
    assert modular.multiply(conj.letters, cyc.letters, modular.inverse_codes(conj.letters)) == w.letters


def test_parse_and_format(modular):
    assert modular.parse("s.r.s.R").letters == ((1, 1), (2, 1), (1, 1), (2, 2))
    assert modular.parse("1:1.2:2").letters == ((1, 1), (2, 2))
    assert modular.format(()) == "1"
    with pytest.raises(InvalidInputError):
        modular.parse("q")


def test_factor_commutator_is_form_one(s3_z2):
    rot = s3_z2.g1.names.index("(123)")
    dec = s3_z2.is_commutator([(1, rot)])
    assert dec and dec.form.form_id == 1
    u, v = dec.witness
    assert s3_z2.commutator_codes(u, v) == ((1, rot),)
    transposition = s3_z2.g1.names.index("(12)")
    assert not s3_z2.is_commutator([(1, transposition)])


def test_forms_three_and_five(modular):
    forms = {f.form_id for f in modular.match_wicks_form(modular.parse("s.r.s.R"))}
    assert forms == {3, 4, 5}
    assert modular.match_wicks_form(modular.parse("s.r")) == []
    with pytest.raises(InvalidInputError):
        modular.match_wicks_form(FPWord(((1, 1), (2, 1), (1, 1))))


def test_literal_forms_admit_nontrivial_abelianization(modular):
    # A a1 A a2^-1 with A = r, a1 = a2 = s: r s r s, abelian image r^2 != 1
    w = modular.parse("r.s.r.s")
    assert not modular.has_trivial_abelianization(w.letters)
    assert 3 in {f.form_id for f in modular.match_wicks_form(w, literal=True)}
    assert not modular.is_commutator(w)


def test_identity_and_empty(modular):
    dec = modular.is_commutator([])
    assert dec and dec.form.form_id == 5


def test_main_term():
    assert product_main_term(2, 3, 4) == Fraction(1, 12)
    assert product_main_term(2, 3, 8) == Fraction(2, 3)
    assert product_main_term(2, 3, 24) == Fraction(96)
    assert product_main_term(2, 3, 6) is None


@pytest.mark.parametrize("k", [4, 8, 12, 16])
def test_modular_counts(modular, k):
    assert modular.count_commutator_classes(k).exact_count == MODULAR_COUNTS[k]


def test_other_pairs():
    z2_z4 = FreeProduct(FiniteGroupTable.cyclic(2), FiniteGroupTable.cyclic(4))
    z3_z3 = FreeProduct(FiniteGroupTable.cyclic(3), FiniteGroupTable.cyclic(3))
    for k in (4, 8, 12):
        assert z2_z4.count_commutator_classes(k).exact_count == Z2_Z4_COUNTS[k]
        assert z3_z3.count_commutator_classes(k).exact_count == Z3_Z3_COUNTS[k]


def test_counts_zero_for_non_multiples_of_four(modular):
    for k in (1, 2, 3, 6, 10):
        assert modular.count_commutator_classes(k).exact_count == 0


def test_thread_count_does_not_change_counts(modular):
    assert modular.count_commutator_classes(16, threads=1) == modular.count_commutator_classes(16, threads=2)


def test_accepted_classes_match_forward_oracle(modular):
    assert modular.accepted_classes(8) == modular.forward_oracle(6, 8)


def test_search_witness_matches_decision(modular):
    w = modular.parse("s.r.s.R")
    u, v = modular.search_witness(w.letters, 3)
    assert modular.commutator_codes(u, v) == w.letters
    assert modular.search_witness(modular.parse("s.r").letters, 3) is None


def test_closed_path_formulas():
    for m in range(2, 6):
        for n in range(0, 11):
            assert count_closed_paths_complete(m, n) == adjacency_closed_paths(m, n)
            assert count_closed_paths_complete(m, n, True) == adjacency_closed_paths(m, n, True)
    assert closed_paths_shortcut(3, 2) == 6
    assert closed_paths_shortcut(3, 3) != count_closed_paths_complete(3, 3)


def test_trivial_product_counts_match_path_formula():
    for g1, g2 in ((2, 3), (2, 4), (3, 3)):
        fp = FreeProduct(FiniteGroupTable.cyclic(g1), FiniteGroupTable.cyclic(g2))
        for k in (4, 8):
            res = fp.count_trivial_product_words(k)
            assert res.enumerated == res.path_formula
    with pytest.raises(InvalidInputError):
        fp.count_trivial_product_words(6)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_commutators_accepted_with_verified_witness(data):
    fp = FreeProduct(*hecke_group(3))
    u = fp.normalize_codes(data.draw(letters_for(fp)))
    v = fp.normalize_codes(data.draw(letters_for(fp)))
    w = fp.commutator_codes(u, v)
    dec = fp.is_commutator(w)
    assert dec
    assert fp.has_trivial_abelianization(w)
    if dec.witness is not None:
        assert fp.commutator_codes(*dec.witness) == w


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_s3_commutators_accepted(data):
    fp = FreeProduct(FiniteGroupTable.symmetric(3), FiniteGroupTable.cyclic(2))
    u = fp.normalize_codes(data.draw(letters_for(fp)))
    v = fp.normalize_codes(data.draw(letters_for(fp)))
    assert fp.is_commutator(fp.commutator_codes(u, v))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_class_key_is_conjugation_invariant(data):
    fp = FreeProduct(*hecke_group(3))
    w = fp.normalize_codes(data.draw(letters_for(fp)))
    h = fp.normalize_codes(data.draw(letters_for(fp)))
    assert fp.class_key(fp.multiply(h, w, fp.inverse_codes(h))) == fp.class_key(w)
