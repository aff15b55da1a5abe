import itertools

import pytest
from hypothesis import given

from clogics.connectives import (
    And,
    Atom,
    ClosedLanguage,
    ExtendedOperation,
    Neg,
    check_connective_rules,
    classical_implication_checks,
    conservative_extension_check,
    disj,
    eval_formula,
    extended_consequence,
    formula_models,
    parse_formula,
    render,
    truth_table,
)
from clogics.core import ConsequenceTable, SchemaError
from clogics.instances import disjunction_model, disjunction_world, identity_model
from clogics.semantics import FCModel, ChoiceFunction, ModelWorld, induced_consequence
from conftest import c_logics, fc_models


@pytest.fixture(scope="module")
def ex1():
    fcm = disjunction_model()
    return fcm, ClosedLanguage(fcm.world.language.atoms, 2)


def rules(fcm, lang, **kw):
    return {r.name: r for r in check_connective_rules(fcm, lang, **kw)}


# ------------------------------------------------------------ brute force


def sat(world, i, phi) -> bool:
    if isinstance(phi, Atom):
        return phi.index in [j for j in range(world.language.n) if world.sat[i] >> j & 1]
    if isinstance(phi, Neg):
        return not sat(world, i, phi.child)
    return sat(world, i, phi.left) and sat(world, i, phi.right)


def brute_consequence(fcm, premises, lang) -> frozenset:
    world = fcm.world
    x = sum(1 << i for i in range(world.m) if all(sat(world, i, p) for p in premises))
    fx = fcm.f(x)
    return frozenset(psi for psi in lang if all(sat(world, i, psi) for i in range(world.m) if fx >> i & 1))


def brute_rules(fcm, lang) -> dict[str, bool]:
    world = fcm.world
    everything = frozenset(lang)
    F = list(lang)

    def C(A):
        return brute_consequence(fcm, A, lang)

    def follows(A, phi):
        x = sum(1 << i for i in range(world.m) if all(sat(world, i, p) for p in A))
        fx = fcm.f(x)
        return all(sat(world, i, phi) for i in range(world.m) if fx >> i & 1)

    out = dict.fromkeys(["∧-R", "¬-R1", "¬-R2", "∨-R1", "∨-R2"], True)
    for A in lang.default_pool():
        A = list(A)
        for a in F:
            if C(A + [a, Neg(a)]) != everything:
                out["¬-R1"] = False
            if C(A + [Neg(a)]) == everything and not follows(A, a):
                out["¬-R2"] = False
            for b in F:
                if C(A + [And(a, b)]) != C(A + [a, b]):
                    out["∧-R"] = False
                if follows(A, a) and not (follows(A, disj(a, b)) and follows(A, disj(b, a))):
                    out["∨-R1"] = False
                if not (C(A + [a]) & C(A + [b])) <= C(A + [disj(a, b)]):
                    out["∨-R2"] = False
    return out


def all_formulas(n, depth):
    """Independent enumeration of every formula with at most ``depth`` connectives nested."""
    if depth == 0:
        return {Atom(i) for i in range(n)}
    prev = all_formulas(n, depth - 1)
    return prev | {Neg(x) for x in prev} | {And(x, y) for x in prev for y in prev}


# ----------------------------------------------------------------- syntax


def test_depth():
    a, b = Atom(0), Atom(1)
    assert a.depth == 0 and Neg(a).depth == 1 and And(Neg(a), b).depth == 2
    assert disj(a, b).depth == 3


@pytest.mark.parametrize("n, depth, size", [(3, 2, 243), (4, 2, 604), (2, 1, 8), (3, 0, 3)])
def test_closed_language_size(n, depth, size):
    lang = ClosedLanguage([chr(97 + i) for i in range(n)], depth)
    assert len(lang) == size
    assert set(lang) == all_formulas(n, depth)
    assert len(set(lang)) == len(lang)
    assert all(phi.depth <= depth for phi in lang)


def test_parse_and_render():
    names = ["a", "b", "c"]
    a, b, c = Atom(0), Atom(1), Atom(2)
    assert parse_formula("!(!a & !b)", names) == disj(a, b)
    assert parse_formula("a | b", names) == disj(a, b)
    assert parse_formula(" ! a&b | c ", names) == disj(And(Neg(a), b), c)
    assert parse_formula("a & (b & c)", names) == And(a, And(b, c))
    for phi in ClosedLanguage(names, 2):
        assert parse_formula(render(phi, names), names) == phi


@pytest.mark.parametrize("text", ["a &", "(a", "a b", "z", "!", "a | | b"])
def test_parse_errors(text):
    with pytest.raises(SchemaError):
        parse_formula(text, ["a", "b"])


# -------------------------------------------------------------- semantics


def test_eval_examples():
    w = disjunction_world()
    m, n = 0, 1
    a, b, c = Atom(0), Atom(1), Atom(2)
    assert eval_formula(w, And(a, c), m)
    assert not eval_formula(w, Neg(a), m)
    assert eval_formula(w, disj(a, b), n)
    assert formula_models(w, disj(a, b)) == w.all_models


def test_truth_table():
    a, b = Atom(0), Atom(1)
    assert truth_table(a, 2) == 0b1010
    assert truth_table(And(a, b), 2) == 0b1000
    assert truth_table(disj(a, b), 2) == 0b1110


def test_extended_consequence_examples(ex1):
    fcm, lang = ex1
    a, b, c = (lang.parse(s) for s in "abc")
    got = extended_consequence(fcm, [a], lang)
    assert c in got and And(a, c) in got
    got = extended_consequence(fcm, [disj(a, b)], lang)
    assert c not in got
    assert extended_consequence(fcm, [a, Neg(a)], lang) == frozenset(lang)


@given(fc_models(max_atoms=2))
def test_extended_consequence_matches_brute_force(fcm):
    lang = ClosedLanguage(fcm.world.language.atoms, 1)
    for A in lang.default_pool():
        assert extended_consequence(fcm, A, lang) == brute_consequence(fcm, A, lang)


# ------------------------------------------------------------------ rules


def test_disjunction_model_rules(ex1):
    fcm, lang = ex1
    r = rules(fcm, lang)
    for name in ("∧-R", "¬-R1", "¬-R2", "∨-R1"):
        assert r[name].holds, name
    bad = r["∨-R2"]
    assert not bad.holds
    assert bad.witness == ([], "a", "b", "c")
    trace = bad.detail["trace"]
    assert trace["hat(A,a∨b)"] == ["m", "n", "p"]
    assert trace["f(hat(A,a))"] == ["m"]
    assert "n" in trace["f(hat(A,a∨b))"]
    assert bad.detail["depth"] == 2


def test_explicit_pool_matches_default(ex1):
    fcm, lang = ex1
    fast = rules(fcm, lang)
    slow = rules(fcm, lang, pool=lang.default_pool())
    for name in fast:
        assert fast[name].holds == slow[name].holds
        assert fast[name].witness == slow[name].witness


def test_identity_model_all_rules_hold():
    fcm = identity_model(disjunction_world())
    r = rules(fcm, ClosedLanguage(fcm.world.language.atoms, 2))
    assert all(x.holds for x in r.values())


def test_empty_world_all_rules_hold():
    world = ModelWorld.from_names(["a", "b"], {})
    fcm = FCModel(world, ChoiceFunction(world, {}, "table"), restricted=True)
    r = rules(fcm, ClosedLanguage(["a", "b"], 2))
    assert all(x.holds for x in r.values())


@given(fc_models(max_atoms=2))
def test_rules_match_brute_force(fcm):
    lang = ClosedLanguage(fcm.world.language.atoms, 1)
    got = {name: r.holds for name, r in rules(fcm, lang).items()}
    assert got == brute_rules(fcm, lang)


@given(fc_models(max_atoms=3))
def test_restricted_models_satisfy_four_rules(fcm):
    assert fcm.restricted
    r = rules(fcm, ClosedLanguage(fcm.world.language.atoms, 1))
    for name in ("∧-R", "¬-R1", "¬-R2", "∨-R1"):
        assert r[name].holds, (name, r[name].witness)


def test_unrestricted_model_can_break_negation():
    # f({x}) = ∅: C(¬a) = L while a ∉ C(∅)
    world = ModelWorld.from_names(["a"], {"x": [], "y": ["a"]})
    fcm = FCModel(world, ChoiceFunction(world, {1: 0}, "table"))
    r = rules(fcm, ClosedLanguage(["a"], 1))
    assert not r["¬-R2"].holds
    assert r["¬-R2"].witness == ([], "a")


# -------------------------------------------------- conservative extension


@pytest.mark.parametrize("maker", [ConsequenceTable.identity, ConsequenceTable.constant_full])
def test_conservative_extension_trivial(maker):
    assert conservative_extension_check(maker(["a", "b"]), 2).holds


def test_conservative_extension_disjunction_model():
    t = induced_consequence(disjunction_model())
    assert conservative_extension_check(t, 2).holds


@given(c_logics(max_atoms=3))
def test_conservative_extension_depth_one(t):
    assert conservative_extension_check(t, 1).holds


# -------------------------------------------------- classical implication


def test_classical_implication_disjunction_model(ex1):
    fcm, lang = ex1
    r = classical_implication_checks(fcm, lang)
    assert r.holds and r.detail["entailed_pairs"] > 0
    # a ⊨ a∨b, checked outside the depth bound
    op = ExtendedOperation(fcm, lang)
    a, b = Atom(0), Atom(1)
    for H, _ in [(op.hat(A), A) for A in lang.default_pool()[:50]]:
        assert fcm.f(H & op.models(a)) & ~op.models(disj(a, b)) == 0


def test_conjunction_entails_conjunct(ex1):
    fcm, lang = ex1
    op = ExtendedOperation(fcm, lang)
    for a, b in itertools.product(lang.formulas[:8], repeat=2):
        assert op([And(a, b), Neg(a)]) == lang.full
        assert op([a, Neg(a)]) == lang.full


@given(fc_models(max_atoms=2))
def test_classical_implication_on_restricted_models(fcm):
    assert classical_implication_checks(fcm, ClosedLanguage(fcm.world.language.atoms, 2)).holds


def test_language_mismatch_rejected(ex1):
    fcm, _ = ex1
    with pytest.raises(ValueError):
        ExtendedOperation(fcm, ClosedLanguage(["x"], 1))
