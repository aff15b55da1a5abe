import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from clogics.core import cn_array, is_c_logic, maximal_consistent_sets
from clogics.corpus import make_rng
from clogics.klm import (
    KLM_RULES,
    PropLanguage,
    ReconstructedOperation,
    ValuationClassRelation,
    arbitrary_valuation_model,
    check_cn_via_maximal,
    check_maximal_consistent_classical,
    check_propositional_rules,
    classical_table,
    conjunction_array,
    fc_table,
    klm_rules,
    klm_to_consequence,
    relation_from_table,
    relation_from_valuations,
    single_valuation_table,
    upward,
    valuation_fc_model,
    violates_klm,
)

PL = PropLanguage(2)
seeds = st.integers(0, 2**32)


def verdicts(rel):
    return {r.name: r for r in klm_rules(rel)}


# ------------------------------------------------------------ brute force


def brute_klm(rel) -> dict[str, bool]:
    n = rel.props.count
    P = range(n)
    r = rel
    return {
        "Reflexivity": all(r(a, a) for a in P),
        "Right Weakening": all(r(a, c) for a, b, c in itertools.product(P, P, P) if r(a, b) and b & ~c == 0),
        "Cut": all(r(a, c) for a, b, c in itertools.product(P, P, P) if r(a, b) and r(a & b, c)),
        "Cautious Monotonicity": all(
            r(a & b, c) for a, b, c in itertools.product(P, P, P) if r(a, b) and r(a, c)
        ),
    }


def brute_reconstruct(rel, alpha) -> int:
    """b ∈ C iff some a implied by alpha has every a' between alpha and a with a' |~ b."""
    n = rel.props.count
    out = 0
    for b in range(n):
        for a in range(n):
            if alpha & ~a:
                continue
            between = [x for x in range(n) if alpha & ~x == 0 and x & ~a == 0]
            if all(rel(x, b) for x in between):
                out |= 1 << b
                break
    return out


def conforming(seed, k=2):
    fcm = valuation_fc_model(make_rng(seed), k)
    return fcm, fc_table(fcm)


# ------------------------------------------------------------ propositions


def test_prop_language():
    assert PL.valuations == 4 and PL.count == 16 and PL.top == 15
    assert PL.atom(0) == 0b1010 and PL.atom(1) == 0b1100
    assert PL.neg(PL.atom(0)) == 0b0101
    assert PL.name(0b0001) == "p1000"
    assert PL.language().n == 16
    with pytest.raises(ValueError):
        PropLanguage(4)
    with pytest.raises(ValueError):
        PropLanguage(3).language()


def test_conjunction_array():
    arr = conjunction_array(PL)
    for mask in (0, 1, 0b110, (1 << 16) - 1, 1 << 9 | 1 << 5):
        expected = PL.top
        for q in range(16):
            if mask >> q & 1:
                expected &= q
        assert arr[mask] == expected


def test_upward():
    for v in range(16):
        assert upward(PL, v) == sum(1 << q for q in range(16) if v & ~q == 0)


def test_classical_table_matches_entailment():
    t = classical_table(2)
    arr = conjunction_array(PL)
    for a in range(0, 1 << 16, 997):
        assert t(a) == sum(1 << b for b in range(16) if int(arr[a]) & ~b == 0)
    assert t(1 << 0) == t.full  # the false proposition entails everything


def test_world_labels_models_by_valuation():
    w = PL.world([0, 3])
    assert w.sat[0] == upward(PL, 1) and w.sat[1] == upward(PL, 1 << 3)


# ----------------------------------------------------------------- rules


@settings(max_examples=25)
@given(seeds)
def test_conforming_models_pass_all_rules(seed):
    fcm, t = conforming(seed)
    rel = relation_from_table(t, 2)
    v = verdicts(rel)
    assert all(v[name].holds for name in KLM_RULES)
    assert {k: v[k].holds for k in brute_klm(rel)} == brute_klm(rel)


@settings(max_examples=25)
@given(seeds)
def test_klm_rules_match_brute_force_on_arbitrary(seed):
    fcm = arbitrary_valuation_model(make_rng(seed))
    rel = relation_from_table(fc_table(fcm), 2)
    v = verdicts(rel)
    expected = brute_klm(rel)
    for name, ok in expected.items():
        assert v[name].holds == ok, name
        if not ok:
            assert violates_klm(rel, name, v[name].witness)


def test_violators_fail_cut_or_cm():
    hits = 0
    for seed in range(200):
        rel = relation_from_table(fc_table(arbitrary_valuation_model(make_rng(seed))), 2)
        v = verdicts(rel)
        if not (v["Cut"].holds and v["Cautious Monotonicity"].holds):
            hits += 1
    assert hits > 20


def test_lle_is_structural():
    rel = ValuationClassRelation(2, tuple([0] * 16))
    lle = verdicts(rel)["Left Logical Equivalence"]
    assert lle.holds and "structural" in lle.detail["note"]
    assert not verdicts(rel)["Reflexivity"].holds


@pytest.mark.parametrize("make", [lambda: classical_table(2), lambda: single_valuation_table(2, 1)])
def test_reference_tables(make):
    t = make()
    assert is_c_logic(t)
    assert all(r.holds for r in klm_rules(relation_from_table(t, 2)))
    assert all(r.holds for r in check_propositional_rules(t, 2))


def test_minimal_reflexive_relation():
    # a |~ b iff a ⊨ b: the classical relation is cumulative and rebuilds the classical table
    rel = ValuationClassRelation(2, tuple(upward(PL, a) for a in range(16)))
    assert all(r.holds for r in klm_rules(rel))
    assert klm_to_consequence(rel).table() == classical_table(2)


def test_rejects_non_cumulative_relation():
    rel = ValuationClassRelation(2, tuple([0] * 16))
    with pytest.raises(ValueError, match="Reflexivity"):
        klm_to_consequence(rel)
    with pytest.raises(ValueError):
        ValuationClassRelation(2, (0,))


# -------------------------------------------------------- reconstruction


@settings(max_examples=20)
@given(seeds)
def test_reconstruction_round_trip(seed):
    fcm, t = conforming(seed)
    op = klm_to_consequence(relation_from_table(t, 2))
    for a in range(16):
        assert op([a]) == t(1 << a)
    assert op.table() == t


@settings(max_examples=10)
@given(seeds)
def test_reconstruction_matches_definition(seed):
    _, t = conforming(seed)
    rel = relation_from_table(t, 2)
    op = ReconstructedOperation(rel)
    for alpha in range(16):
        assert op.of_conjunction(alpha) == brute_reconstruct(rel, alpha)


@settings(max_examples=20)
@given(seeds)
def test_false_consequent_explodes(seed):
    _, t = conforming(seed)
    rel = relation_from_table(t, 2)
    op = klm_to_consequence(rel)
    full = (1 << 16) - 1
    for a in range(16):
        if rel(a, 0):
            for extra in range(16):
                assert op([a, extra]) == full


@settings(max_examples=15)
@given(seeds)
def test_three_atoms_via_valuations(seed):
    fcm = valuation_fc_model(make_rng(seed), k=2)
    vals = [next(v for v in range(4) if s == upward(PL, 1 << v)) for s in fcm.world.sat]
    assert relation_from_valuations(2, vals, fcm.f) == relation_from_table(fc_table(fcm), 2)
    # k = 3: 256 propositions, checked on the relation alone
    rng = make_rng(seed)
    m = int(rng.integers(1, 5))
    vals3 = [int(v) for v in rng.integers(0, 8, size=m)]
    rel = relation_from_valuations(3, vals3, lambda x: x & -x if x else 0)
    v = verdicts(rel)
    assert v["Reflexivity"].holds and v["Right Weakening"].holds and v["Cut"].holds


# ------------------------------------------------------ propositional rules


@settings(max_examples=8)
@given(seeds)
def test_propositional_rules_on_conforming(seed):
    _, t = conforming(seed)
    assert all(r.holds for r in check_propositional_rules(t, 2))


@settings(max_examples=8)
@given(seeds)
def test_maximal_consistent_sets_are_classical(seed):
    _, t = conforming(seed)
    maximal = maximal_consistent_sets(t)
    assert check_maximal_consistent_classical(t, 2, maximal).holds
    assert check_cn_via_maximal(t, cn_array(t), maximal).holds


def test_cn_via_maximal_on_small_oracle():
    t = single_valuation_table(2, 2)
    maximal = maximal_consistent_sets(t)
    assert maximal == [upward(PL, 1 << 2)]
    cn = cn_array(t)
    for a in (0, 1 << 4, 1 << 15, 1 << 4 | 1 << 11):
        assert cn[a] == oracles.cn(list(t.rows), a)
