import time

import pytest
from hypothesis import given, strategies as st

from nilvariety.magnus import (SparseSeries, WeightInvariantError, format_series, gamma_weight, integer_rank,
                               is_law_of_Nc, leading_components_rank, leading_terms, magnus_embed, magnus_series,
                               mobius, witt_number)
from nilvariety.words import (Comm, FreeWord, Pow, Var, build_gamma_word, build_V, build_W, expand,
                              hall_basic_commutators, multidegree, x)

from oracles import rational_rank


def naive_embed(word: FreeWord, D: int) -> dict:
    """Reference Magnus image: multiply letter series as plain dicts, constant under key ()."""
    acc = {(): 1}
    for i, s in word.letters:
        if s > 0:
            letter = {(): 1, (i,): 1}
        else:
            letter = {(i,) * k: (-1) ** k for k in range(D + 1)}
        out = {}
        for m1, c1 in acc.items():
            for m2, c2 in letter.items():
                m = m1 + m2
                if len(m) <= D:
                    out[m] = out.get(m, 0) + c1 * c2
        acc = {m: c for m, c in out.items() if c}
    return acc


def as_dict(s: SparseSeries) -> dict:
    d = dict(s.terms)
    if s.const:
        d[()] = s.const
    return d


words = st.lists(st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), max_size=8).map(FreeWord)


def small_exprs(max_var=3):
    leaf = st.integers(1, max_var).map(Var)
    return st.recursive(leaf, lambda inner: st.one_of(st.builds(Comm, inner, inner),
                                                       st.builds(Pow, inner, st.sampled_from([-2, -1, 2]))),
                        max_leaves=5)


def test_embed_examples():
    assert format_series(magnus_embed(FreeWord([(1, 1)]), 3)) == "1 + X1"
    assert format_series(magnus_embed(FreeWord([(1, -1)]), 3)) == "1 - X1 + X1X1 - X1X1X1"
    assert format_series(magnus_embed(expand(Comm(x(1), x(2))), 2)) == "1 + X1X2 - X2X1"
    assert magnus_embed(FreeWord(), 4) == SparseSeries.one(4)


@given(words, st.integers(1, 6))
def test_embed_matches_reference(w, D):
    assert as_dict(magnus_embed(w, D)) == naive_embed(w, D)


@given(words, words, st.integers(1, 6))
def test_embed_multiplicative(u, v, D):
    assert magnus_embed(u * v, D) == magnus_embed(u, D).mul(magnus_embed(v, D), D)


@given(small_exprs(), st.integers(1, 7))
def test_structural_series_equals_letter_route(expr, D):
    assert magnus_series(expr, D) == magnus_embed(expand(expr), D)


def test_weight_examples():
    assert gamma_weight(Comm(x(1), x(2)), 4) == 2
    assert gamma_weight(x(1), 3) == 1
    assert gamma_weight(build_W(1), 6) == 4
    assert gamma_weight(build_W(1), 3) is None
    assert gamma_weight(build_V(1), 12) == 12
    assert gamma_weight(build_W(2), 10) == 10


def test_identity_word_has_no_weight():
    with pytest.raises(ValueError, match="identity word has no weight"):
        gamma_weight(Comm(x(1), x(1)), 3)


def test_W2_full_letter_route_agrees():
    # independent route: expand to a free word and embed it letter by letter
    w = build_W(2)
    t0 = time.perf_counter()
    s = magnus_embed(expand(w), 10)
    assert time.perf_counter() - t0 < 60
    assert s.min_degree() == 10
    assert s == magnus_series(w, 10)


def test_multihomogeneous_caps_keep_low_terms():
    w = build_W(1)
    caps = dict(multidegree(w))
    full = magnus_embed(expand(w), 6)
    pruned = magnus_embed(expand(w), 6, caps=caps)
    assert pruned.component(4) == full.component(4)
    assert pruned.min_degree() == 4


def test_weight_invariant_error_is_assertion():
    assert issubclass(WeightInvariantError, AssertionError)


@given(small_exprs(2), small_exprs(2))
def test_weight_superadditive(u, v):
    D = 7
    try:
        wu, wv = gamma_weight(u, D), gamma_weight(v, D)
    except ValueError:
        return
    if wu is None or wv is None or wu + wv > D:
        return
    if len(expand(Comm(u, v))) == 0:
        return
    wc = gamma_weight(Comm(u, v), D)
    assert wc is None or wc >= wu + wv


@pytest.mark.parametrize("r,n", [(r, n) for r in (2, 3) for n in range(1, 7) if not (r == 3 and n == 6)])
def test_hall_commutators_have_exact_weight(r, n):
    for b in hall_basic_commutators(r, n):
        assert gamma_weight(b, n) == n


@pytest.mark.parametrize("r,n", [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (3, 4),
                                 (3, 5)])
def test_hall_leading_components_rank_is_witt(r, n):
    assert leading_components_rank(hall_basic_commutators(r, n), n) == witt_number(r, n)


def test_leading_components_rank_examples():
    assert leading_components_rank([Comm(x(1), x(2)), Comm(x(2), x(1))], 2) == 1
    assert leading_components_rank([build_W(1)], 2) == 0  # weight 4 > 2: zero row
    with pytest.raises(ValueError):
        leading_components_rank([x(1)], 2)


def test_leading_terms_W1():
    t = leading_terms(build_W(1), 4)
    assert t == {(1, 1, 2, 2): -1, (1, 2, 1, 2): 2, (2, 1, 2, 1): -2, (2, 2, 1, 1): 1}


@pytest.mark.parametrize("c", range(1, 9))
def test_gamma_word_laws(c):
    w = build_gamma_word(c + 1)
    assert is_law_of_Nc(w, c)
    assert not is_law_of_Nc(w, c + 1)


def test_is_law_examples():
    assert is_law_of_Nc(build_W(1), 3)
    assert not is_law_of_Nc(build_W(1), 4)
    assert is_law_of_Nc(Comm(x(1), x(2)), 1)


def test_witt_values():
    assert witt_number(2, 1) == 2 and witt_number(2, 4) == 3 and witt_number(3, 3) == 8
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


@given(st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=1, max_size=6))
def test_integer_rank_matches_rational_elimination(rows):
    assert integer_rank(rows) == rational_rank(rows)


def test_series_printing_order():
    s = SparseSeries(3, 1, {(2,): 1, (1,): -2, (2, 1): 3, (1, 2): -1})
    assert format_series(s) == "1 - 2X1 + X2 - X1X2 + 3X2X1"
