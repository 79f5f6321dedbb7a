import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from momt import (
    AdmissibleSet,
    FreePolynomial,
    LambdaSpec,
    NotAdmissible,
    NotHomogeneous,
    SigmaTooLarge,
    Word,
    ZeroLambda,
    all_commutators,
    commutator_polynomial,
    full_truncation,
    ideal_span_basis,
    is_admissible_pair,
    is_downward_closed,
    multiindex_to_word,
    sigma_pi,
    suffix_closure,
    words_up_to,
)
from momt.words import (
    abelianize,
    build_lambda_set,
    empty_word,
    evaluate,
    generator,
    is_compatible,
    multiindex_product,
    parse_word_key,
    prefix_quotient,
    signature,
    word_key,
    word_product,
)


def test_word_basics():
    w = Word((1, 2, 1), 3)
    assert len(w) == 3
    assert word_key(w) == "1.2.1"
    assert parse_word_key("1.2.1", 3) == w
    assert parse_word_key("", 3) == empty_word(3)
    assert word_key(empty_word(3)) == ""
    assert generator(2, 3).concat(w) == Word((2, 1, 2, 1), 3)
    with pytest.raises(ValueError):
        Word((0,), 2)
    with pytest.raises(ValueError):
        Word((3,), 2)


def test_suffixes_and_prefix_quotient():
    w = Word((1, 2), 2)
    assert set(w.suffixes()) == {Word((1, 2), 2), Word((2,), 2), empty_word(2)}
    assert prefix_quotient(Word((1, 2, 2), 2), Word((1, 2), 2)) == Word((2,), 2)
    assert prefix_quotient(Word((1, 2), 2), Word((2,), 2)) is None
    assert prefix_quotient(w, empty_word(2)) == w


def test_canonical_order_length_then_lex():
    ws = list(words_up_to(2, 2))
    keys = [word_key(w) for w in ws]
    assert keys == ["", "1", "2", "1.1", "1.2", "2.1", "2.2"]
    assert keys == [word_key(w) for w in full_truncation(2, 2)]


def test_admissible_set_rejects_missing_suffix():
    # {e, g1g2} misses the suffix g2
    with pytest.raises(NotAdmissible):
        AdmissibleSet(2, [empty_word(2), Word((1, 2), 2)])


def test_suffix_closure_builds_minimal_set():
    sigma = suffix_closure([Word((1, 2), 2)])
    assert set(sigma) == {empty_word(2), Word((2,), 2), Word((1, 2), 2)}
    again = suffix_closure(list(sigma))
    assert again == sigma


def test_pair_count_formula():
    # |Lambda| = sum over words of (length + 1)
    for n, depth in ((1, 3), (2, 2), (3, 1)):
        sigma = full_truncation(n, depth)
        pairs = build_lambda_set(sigma)
        assert len(pairs) == sum(len(w) + 1 for w in sigma)
        assert len(pairs) == len(sigma.lambda_pairs)


def test_abelianize_and_multiindex_word():
    w = Word((2, 1, 2), 2)
    assert abelianize(w) == (1, 2)
    assert multiindex_to_word((1, 2), 2) == Word((1, 2, 2), 2)
    assert multiindex_to_word((0, 0), 2) == empty_word(2)


def test_downward_closure_detection():
    assert is_downward_closed({(0, 0), (1, 0), (0, 1)}, 2)
    assert not is_downward_closed({(0, 0), (2, 0)}, 2)
    assert not is_downward_closed({(1, 0)}, 2)  # missing the origin


def test_sigma_pi_matches_suffix_closure():
    pi = {(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)}
    sigma = sigma_pi(pi, 2)
    # every word whose letter counts lie in pi, and nothing else
    expected = {w for w in words_up_to(2, 3) if abelianize(w) in pi}
    assert set(sigma) == expected
    with pytest.raises(NotAdmissible):
        sigma_pi({(0, 0), (2, 0)}, 2)
    with pytest.raises(NotAdmissible):
        sigma_pi({(0,)}, 2)


def test_sigma_pi_cap():
    # full weight-7 simplex over 3 letters expands to 3280 words
    pi = [
        (a, b, c)
        for a in range(8)
        for b in range(8)
        for c in range(8)
        if a + b + c <= 7
    ]
    with pytest.raises(SigmaTooLarge):
        sigma_pi(pi, 3)
    big = sigma_pi(pi, 3, cap=5000)
    assert len(big) == (3 ** 8 - 1) // 2


def test_lambda_spec_defaults_and_validation():
    lam = LambdaSpec(3, {(2, 1): 1j})
    assert lam(2, 1) == 1j
    assert lam(3, 1) == 1.0  # missing entries are trivial
    with pytest.raises(ValueError):
        lam(1, 2)
    with pytest.raises(ValueError):
        LambdaSpec(2, {(1, 2): 1.0})
    assert LambdaSpec(2).is_trivial()
    assert not lam.is_trivial()


def test_signature_values():
    lam = LambdaSpec(2, {(2, 1): 2.0})
    assert signature(Word((1, 2), 2), lam) == 1.0
    assert signature(Word((2, 1), 2), lam) == 2.0
    assert signature(Word((2, 2, 1), 2), lam) == 4.0  # two inversions
    assert signature(empty_word(2), lam) == 1.0
    with pytest.raises(ZeroLambda):
        signature(Word((2, 1), 2), LambdaSpec(2, {(2, 1): 0.0}))


def test_free_polynomial_merging():
    w = Word((1, 2), 2)
    p = FreePolynomial.from_terms([(1.0, w), (2.0, w), (-3.0, w)])
    assert p.is_zero()
    q = FreePolynomial.from_terms([(1.0, w), (1.0, Word((2, 1), 2))])
    assert q.degree() == 2 and q.is_homogeneous()
    mixed = FreePolynomial.from_terms([(1.0, w), (1.0, generator(1, 2))])
    assert not mixed.is_homogeneous()
    with pytest.raises(ValueError):
        FreePolynomial(((1.0, w), (2.0, w)))


def test_commutator_polynomials():
    p = commutator_polynomial(1, 2, 2)
    coeffs = {word_key(w): c for c, w in p.terms}
    assert coeffs == {"2.1": 1.0, "1.2": -1.0}
    lam = LambdaSpec(2, {(2, 1): 1j})
    q = commutator_polynomial(1, 2, 2, lam)
    coeffs = {word_key(w): c for c, w in q.terms}
    assert coeffs["1.2"] == -1j
    assert len(all_commutators(3)) == 3
    with pytest.raises(ValueError):
        commutator_polynomial(2, 2, 3)


def test_word_and_multiindex_products():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    mats = (a, b)
    assert np.abs(word_product(mats, Word((1, 2, 1), 2)) - a @ b @ a).max() < 1e-12
    assert np.abs(word_product(mats, empty_word(2)) - np.eye(3)).max() == 0
    assert np.abs(multiindex_product(mats, (2, 1)) - a @ a @ b).max() < 1e-12


def test_evaluate_commutator():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2))
    val = evaluate(commutator_polynomial(1, 2, 2), (a, b))
    assert np.abs(val - (b @ a - a @ b)).max() < 1e-12


def test_compatibility_of_word_sets_with_relations():
    p = commutator_polynomial(1, 2, 2)
    assert is_compatible(full_truncation(2, 2), p)
    assert is_admissible_pair(full_truncation(2, 3), [p])
    # drop 2.1 but keep 1.2: a translate of p now meets the set partially
    broken = suffix_closure(
        [Word((1, 2), 2), Word((1, 1), 2), Word((2, 2), 2)]
    )
    assert Word((2, 1), 2) not in broken
    assert not is_compatible(broken, p)


def test_ideal_span_basis_dimension():
    polys = all_commutators(2)
    basis = ideal_span_basis(polys, degree=2)
    assert len(basis) == 1
    basis3 = ideal_span_basis(polys, degree=3)
    # degree-3 slice of the commutator ideal over 2 letters has dim 4:
    # 8 monomials minus the 4-dimensional commutative quotient slice
    assert len(basis3) == 4
    with pytest.raises(NotHomogeneous):
        ideal_span_basis(
            [FreePolynomial.from_terms([(1.0, Word((1, 2), 2)), (1.0, generator(1, 2))])],
            degree=2,
        )
    assert ideal_span_basis([], degree=2) == []


words_strategy = st.builds(
    lambda letters: Word(tuple(letters), 3),
    st.lists(st.integers(min_value=1, max_value=3), max_size=4),
)


@settings(max_examples=50, deadline=None)
@given(st.lists(words_strategy, min_size=1, max_size=6))
def test_suffix_closure_is_closed_and_idempotent(ws):
    sigma = suffix_closure(ws)
    for w in sigma:
        for s in w.suffixes():
            assert s in sigma
    assert suffix_closure(list(sigma)) == sigma


@settings(max_examples=50, deadline=None)
@given(words_strategy)
def test_word_key_roundtrip(w):
    assert parse_word_key(word_key(w), 3) == w


@settings(max_examples=50, deadline=None)
@given(words_strategy, words_strategy)
def test_abelianize_is_multiplicative(u, v):
    ka = abelianize(u.concat(v))
    kb = tuple(x + y for x, y in zip(abelianize(u), abelianize(v)))
    assert ka == kb
