import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nilvariety import groups as gr
from nilvariety.corpus import cyclic, dihedral, symmetric, unitriangular
from nilvariety.elements import Perm, UniMatrix
from nilvariety.words import build_engel, build_gamma_word, build_W, evaluate

import oracles

SMALL = ["Sym3", "Sym4", "Sym5", "Alt4", "Alt5", "D8", "D12", "D16", "D32", "Q8", "Q16", "Q32", "C3", "C8", "C9",
         "UT(3,2)", "UT(3,3)", "UT(4,2)", "C3xQ8", "Sym3xD8"]


def idx_set(G, S):
    return {G.index_of(g) for g in S}


# -- closure and arithmetic ---------------------------------------------------------

def test_close_examples():
    assert gr.close([Perm.from_cycles(3, (1, 2)), Perm.from_cycles(3, (1, 2, 3))]).order == 6
    assert gr.close([Perm([0, 1, 2])]).order == 1
    assert unitriangular(4, 3).order == 729


def test_close_cap_reports_partial_count():
    with pytest.raises(gr.GroupTooLarge) as exc:
        symmetric(5, cap=50)
    assert exc.value.partial == 50


def test_close_rejects_mixed_carriers():
    with pytest.raises(ValueError):
        gr.close([Perm.from_cycles(3, (1, 2)), Perm.from_cycles(4, (1, 2))])


def test_index_order_is_breadth_first(group):
    G = group("Sym3")
    t, c = Perm.from_cycles(3, (1, 2)), Perm.from_cycles(3, (1, 2, 3))
    assert G.elements[:3] == [t.identity_like(), t, c]


@pytest.mark.parametrize("name", ["Sym4", "Q16", "UT(4,3)", "C3xQ8"])
def test_table_matches_element_arithmetic(group, name):
    G = group(name)
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, G.order, size=(300, 2)):
        assert G.element(G.mul(a, b)) == G.element(a) * G.element(b)
        assert G.element(G.inv(a)) == G.element(a).inverse()


@pytest.mark.parametrize("threshold", [10, 10**6])
def test_large_group_paths_agree(threshold):
    """The coordinate path (no table) and the table path give the same products."""
    A = gr.close([UniMatrix.elementary(4, 3, i, i + 1) for i in range(1, 4)], table_threshold=threshold)
    S = gr.close([Perm.from_cycles(5, (1, 2)), Perm.from_cycles(5, (1, 2, 3, 4, 5))], table_threshold=threshold)
    for G in (A, S):
        assert (G.table is None) == (threshold == 10)
        rng = np.random.default_rng(1)
        a, b = rng.integers(0, G.order, size=(2, 500))
        prod = G.batch_mul(a, b)
        assert all(G.element(p) == G.element(x) * G.element(y) for p, x, y in zip(prod, a, b))


def test_ut62_uses_coordinates(group):
    G = group("UT(6,2)")
    assert G.order == 2**15 and G.table is None
    rng = np.random.default_rng(2)
    a, b = rng.integers(0, G.order, size=(2, 300))
    assert all(G.element(p) == G.element(x) * G.element(y) for p, x, y in zip(G.batch_mul(a, b), a, b))


def test_batch_power(group):
    G = group("Q16")
    for k in (-3, 0, 1, 5, 8):
        for a in range(G.order):
            e = G.element(0)
            base = G.element(a) if k >= 0 else G.element(a).inverse()
            for _ in range(abs(k)):
                e = e * base
            assert G.element(G.power(a, k)) == e


@pytest.mark.parametrize("name", SMALL)
def test_element_orders_and_classes(group, name):
    G = group(name)
    e = G.element(0)
    assert [oracles.order_of(g, e) for g in G.elements] == G.element_orders.tolist()
    labels = G.class_labels
    for x in range(0, G.order, max(1, G.order // 20)):
        cls = {G.index_of(g.inverse() * G.element(x) * g) for g in G.elements}
        assert {i for i in range(G.order) if labels[i] == labels[x]} == cls
        assert labels[x] == min(cls)


# -- subgroups --------------------------------------------------------------------------

def test_subgroup_examples(group):
    S3 = group("Sym3")
    c3 = S3.index_of(Perm.from_cycles(3, (1, 2, 3)))
    t = S3.index_of(Perm.from_cycles(3, (1, 2)))
    assert gr.normal_closure(S3, [c3]).order == 3
    assert gr.subgroup(S3, []).order == 1
    assert gr.normal_closure(S3, [t]).order == 6
    with pytest.raises(ValueError):
        gr.subgroup(S3, [Perm.from_cycles(4, (1, 2))])


@given(st.data())
@settings(max_examples=30)
def test_normal_closure_matches_oracle(group, data):
    G = group(data.draw(st.sampled_from(["Sym4", "D16", "Q16", "Alt4", "Sym3xD8"])))
    xs = data.draw(st.lists(st.integers(0, G.order - 1), max_size=2))
    N = gr.normal_closure(G, xs)
    conj = [g.inverse() * G.element(a) * g for a in xs for g in G.elements]
    assert set(N.elements) == idx_set(G, oracles.generated(conj, G.element(0)))
    assert gr.is_normal(G, N)
    H = gr.subgroup(G, xs)
    assert set(H.elements) == idx_set(G, oracles.generated([G.element(a) for a in xs], G.element(0)))
    assert set(gr.subgroup(G, H.gens).elements) == set(H.elements)


@given(st.data())
@settings(max_examples=30)
def test_commutator_subgroup_matches_oracle(group, data):
    G = group(data.draw(st.sampled_from(["Sym4", "D16", "Q16", "UT(3,3)", "Sym3xD8"])))
    A = gr.subgroup(G, data.draw(st.lists(st.integers(0, G.order - 1), max_size=2)))
    B = gr.subgroup(G, data.draw(st.lists(st.integers(0, G.order - 1), max_size=2)))
    C = gr.commutator_subgroup(G, A, B)
    comms = [oracles.comm(G.element(a), G.element(b)) for a in A.elements for b in B.elements]
    assert set(C.elements) == idx_set(G, oracles.generated(comms, G.element(0)))


def test_commutator_examples(group):
    S3, Q8 = group("Sym3"), group("Q8")
    W = gr.whole(S3)
    assert gr.commutator_subgroup(S3, W, W).order == 3
    assert gr.commutator_subgroup(S3, W, gr.trivial(S3)).order == 1
    assert gr.commutator_subgroup(Q8, gr.whole(Q8), gr.whole(Q8)).order == 2


@pytest.mark.parametrize("name", SMALL)
def test_nilpotency_class_matches_oracle(group, name):
    G = group(name)
    assert gr.nilpotency_class(G) == oracles.lcs_class(G.elements, G.element(0))
    assert (gr.nilpotency_class(G) is not None) == oracles.is_nilpotent_set(G.elements, G.element(0))


def test_class_examples(group):
    assert gr.nilpotency_class(group("C8")) == 1
    assert gr.nilpotency_class(gr.close([Perm([0])])) == 0
    assert gr.nilpotency_class(group("Sym3")) is None
    assert [s.order for s in gr.lower_central_series(group("Sym3"))] == [6, 3]
    assert gr.nilpotency_class(group("UT(4,2)")) == 3


# -- Fitting --------------------------------------------------------------------------------

@pytest.mark.parametrize("name", [n for n in SMALL if n not in ("Sym5",)])
def test_fitting_matches_lattice_oracle(group, name):
    G = group(name)
    assert set(gr.fitting(G).elements) == idx_set(G, oracles.fitting_oracle(G))


def test_fitting_examples(group):
    S3, S4 = group("Sym3"), group("Sym4")
    assert gr.fitting(S3).order == 3
    klein = [Perm([0, 1, 2, 3])] + [Perm.from_cycles(4, *c) for c in
                                     [((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))]]
    assert set(gr.fitting(S4).elements) == idx_set(S4, klein)
    assert gr.fitting(group("Q16")).order == 16
    assert gr.fitting(group("Alt5")).order == 1


def test_quotient(group):
    S4 = group("Sym4")
    F = gr.fitting(S4)
    Q = gr.quotient(S4, F)
    assert Q.order == 6 and gr.nilpotency_class(Q) is None
    assert gr.fitting(Q).order == 3
    H = gr.subgroup(S4, [1])  # a transposition: not normal
    with pytest.raises(ValueError):
        gr.quotient(S4, H)


@given(st.data())
@settings(max_examples=20)
def test_quotient_order(group, data):
    G = group(data.draw(st.sampled_from(["Sym4", "D16", "Q16", "Sym3xD8", "UT(3,3)"])))
    N = gr.normal_closure(G, data.draw(st.lists(st.integers(0, G.order - 1), max_size=2)))
    Q = gr.quotient(G, N)
    assert Q.order * N.order == G.order
    # canonical representatives are the least index of each coset
    reps = sorted(c.rep for c in Q.elements)
    assert reps[0] == 0
    for r in reps:
        coset = {G.mul(r, n) for n in N.elements}
        assert r == min(coset)


def test_fitting_heights(group):
    assert gr.fitting_height(group("Sym3")) == 2
    assert gr.fitting_height(group("Sym4")) == 3
    assert gr.fitting_height(group("Alt5")) is None
    assert gr.fitting_height(group("Q8")) == 1
    assert gr.fitting_height(group("Sym3xD8")) == 2


# -- sweeps ----------------------------------------------------------------------------------

def test_engel_degree(group):
    assert gr.engel_degree(group("C8")) == 1
    assert gr.engel_degree(group("D8")) == 2
    assert gr.engel_degree(group("Sym3"), cap=50) is None


@pytest.mark.parametrize("name", ["D8", "D16", "D32", "Q16", "UT(4,2)", "UT(4,3)", "C3xQ8"])
def test_engel_at_most_class(group, name):
    G = group(name)
    assert gr.engel_degree(G) <= gr.nilpotency_class(G)


def brute_engel(G, cap):
    best = 1
    for x in range(G.order):
        for y in range(G.order):
            h = x
            for k in range(1, cap + 1):
                h = G.comm(h, y)
                if h == 0:
                    best = max(best, k)
                    break
            else:
                return None
    return best


@pytest.mark.parametrize("name", ["Sym3", "D16", "Q8", "UT(4,2)", "Alt4"])
def test_engel_matches_full_pair_sweep(group, name):
    G = group(name)
    assert gr.engel_degree(G, cap=12) == brute_engel(G, 12)


def test_law_check_examples(group):
    S3, Q8 = group("Sym3"), group("Q8")
    res = gr.law_check(S3, build_W(1))
    assert not res.holds
    w = res.witness_elements(S3)
    assert evaluate(build_W(1), w, S3) != S3.element(0)
    assert gr.law_check(Q8, build_W(1)).holds
    res = gr.law_check(S3, build_W(2))
    assert res.holds and res.examined == 6**3


def test_law_check_witness_is_lexicographically_least(group):
    G = group("Sym4")
    res = gr.law_check(G, build_engel(2))
    first = None
    for a in range(G.order):
        for b in range(G.order):
            if G.comm(G.comm(a, b), b) != 0:
                first = (a, b)
                break
        if first:
            break
    assert (res.witness[1], res.witness[2]) == first
    assert res.examined == first[0] * G.order + first[1] + 1


def test_law_check_budget_and_sampling(group):
    G = group("Sym4")
    with pytest.raises(gr.BudgetExceeded, match="sample"):
        gr.law_check(G, build_W(2), budget=1000)
    a = gr.law_check(G, build_engel(3), mode="sample", count=500, seed=7)
    b = gr.law_check(G, build_engel(3), mode="sample", count=500, seed=7)
    assert a == b and not a.holds


@pytest.mark.parametrize("name", ["Sym3", "D8", "D16", "Q16", "UT(3,3)", "UT(4,2)", "C3xQ8", "C9"])
def test_gamma_word_laws_on_corpus(group, name):
    G = group(name)
    c = gr.nilpotency_class(G)
    if c is None:
        assert not gr.law_check(G, build_gamma_word(2)).holds
        return
    assert gr.law_check(G, build_gamma_word(c + 1), mode="sample", count=20000).holds if c + 1 > 3 else \
        gr.law_check(G, build_gamma_word(c + 1)).holds
    if c >= 2:
        assert not gr.law_check(G, build_gamma_word(c), mode="sample", count=20000, seed=3).holds


def brute_variety(G, d):
    import itertools
    best = 0
    seen = set()
    for tup in itertools.product(range(G.order), repeat=d):
        S = oracles.generated([G.element(t) for t in tup], G.element(0))
        if S in seen:
            continue
        seen.add(S)
        c = oracles.lcs_class(S, G.element(0))
        if c is None:
            return None
        best = max(best, c)
    return best


@pytest.mark.parametrize("name,d", [("Sym3", 2), ("D8", 2), ("Q8", 2), ("D16", 2), ("Q16", 1), ("Alt4", 2),
                                    ("UT(3,2)", 3), ("C8", 2), ("D16", 3)])
def test_variety_class_matches_brute_force(group, name, d):
    assert gr.variety_class(group(name), d) == brute_variety(group(name), d)


def test_variety_examples(group):
    assert gr.variety_class(group("Q8"), 2) == 2
    assert gr.variety_class(group("Sym3"), 2) is None
    assert gr.variety_class(group("C9"), 3) == 1


@pytest.mark.parametrize("name", ["D8", "D16", "D32", "Q32", "UT(4,2)", "UT(4,3)", "C3xQ8", "UT(3,5)"])
def test_variety_monotone_in_d(group, name):
    G = group(name)
    vals = [gr.variety_class(G, d) for d in (1, 2, 3)]
    assert vals == sorted(vals)


def test_variety_budget(group):
    with pytest.raises(gr.BudgetExceeded):
        gr.variety_sweep(group("UT(4,3)"), 1, budget=5)
    r = gr.variety_sweep(group("UT(4,3)"), 2, mode="sample", count=50, seed=1)
    assert not r.exact and r.value <= 3


# -- powers ------------------------------------------------------------------------------------

def test_exponent_and_powers(group):
    assert gr.exponent(group("Sym3")) == 6
    assert gr.power_subgroup(group("C8"), 2).order == 4
    G = group("UT(4,3)")
    P = gr.power_subgroup(G, 3)
    assert P.order == 3
    Z = gr.lower_central_series(G)[-2]
    assert P == Z
    corner = UniMatrix.elementary(4, 3, 1, 4)
    assert G.index_of(corner) in P


def test_powerful(group):
    assert gr.is_powerful(group("C8"), 2)
    assert not gr.is_powerful(group("D8"), 2)
    assert not gr.is_powerful(group("UT(3,3)"), 3)
    with pytest.raises(ValueError):
        gr.is_powerful(group("Sym3"), 2)


@pytest.mark.parametrize("name", ["Q8", "Q16", "D16", "UT(4,2)", "C9", "UT(3,5)"])
def test_powerful_matches_definition(group, name):
    G = group(name)
    p = gr.prime_of_p_group(G)
    e = G.element(0)
    derived = oracles.generated([oracles.comm(a, b) for a in G.elements for b in G.elements], e)
    k = 4 if p == 2 else p
    powers = oracles.generated([g_pow(a, k) for a in G.elements], e)
    assert gr.is_powerful(G, p) == (derived <= powers)


def g_pow(a, k):
    out = a.identity_like()
    for _ in range(k):
        out = out * a
    return out


def test_exponent_is_lcm_of_orders(group):
    for name in ["Sym5", "Q32", "UT(4,3)", "C3xQ8"]:
        G = group(name)
        assert gr.exponent(G) == math.lcm(*set(G.element_orders.tolist()))


def test_cyclic_and_dihedral_orders():
    assert cyclic(9).order == 9 and dihedral(20).order == 20
