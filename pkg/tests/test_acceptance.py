"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line with its wall time; the lines are
printed at the end of the pytest run and when this file is run directly
(``python3 tests/test_acceptance.py``).
"""

import itertools
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from clogics import cli  # noqa: E402
from clogics.connectives import (  # noqa: E402
    ClosedLanguage,
    ExtendedOperation,
    check_connective_rules,
    conservative_extension_check,
    disj,
)
from clogics.core import (  # noqa: E402
    AtomLanguage,
    ConsequenceTable,
    axiomatization_verdicts,
    check_c_axioms,
    check_cn_lemmas,
    check_loop,
    is_c_logic,
    theory_order,
    violates,
)
from clogics.corpus import (  # noqa: E402
    fc_model_c_logics,
    make_rng,
    random_quantum_instance,
    rejection_c_logics,
    uniform_table,
)
from clogics.instances import disjunction_model, generic_lines  # noqa: E402
from clogics.klm import (  # noqa: E402
    KLM_RULES,
    fc_table,
    klm_rules,
    klm_to_consequence,
    relation_from_table,
    valuation_fc_model,
)
from clogics.quantum import check_quantum_table, negation_failure_demo  # noqa: E402
from clogics.semantics import check_representation, represent  # noqa: E402

pytestmark = pytest.mark.acceptance

SEED = 20240601
RESULTS: list[str] = []

# tables per generator and atom count
FC_SIZES = {1: 30, 2: 150, 3: 250, 4: 300}
REJECTION_SIZES = {1: 20, 2: 150, 3: 300}


_corpus_cache: list = []


def corpus() -> list[ConsequenceTable]:
    """Seeded C-logics from both generators, n ≤ 4."""
    if not _corpus_cache:
        rng = make_rng(SEED)
        for n, count in FC_SIZES.items():
            _corpus_cache.extend(t for _, t in fc_model_c_logics(rng, n, count))
        for n, count in REJECTION_SIZES.items():
            _corpus_cache.extend(rejection_c_logics(rng, n, count))
    return _corpus_cache


def record(number: int, title: str, limit: float | None, fn):
    start = time.perf_counter()
    try:
        ok, note = fn()
    except AssertionError as e:
        ok, note = False, f"assertion: {e}"
    elapsed = time.perf_counter() - start
    in_time = limit is None or elapsed < limit
    budget = f" < {limit:g}s" if limit is not None else ""
    line = f"[{'PASS' if ok and in_time else 'FAIL'}] {number}. {title}: {note} ({elapsed:.2f}s{budget})"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert in_time, line


# ------------------------------------------------------------------ 1


def disjunction_example():
    via_cli = {r.name: r.holds for r in cli.example_disjunction()}
    # second route: the extended operation on formulas
    fcm = disjunction_model()
    w = fcm.world
    lang = ClosedLanguage(w.language.atoms, 2)
    op = ExtendedOperation(fcm, lang)
    a, b, c = (lang.parse(s) for s in "abc")
    ab = disj(a, b)
    hat_ab = op.hat([ab])
    direct = {
        "c ∈ C({a})": c in op.as_set(op([a])),
        "c ∈ C({b})": c in op.as_set(op([b])),
        "c ∉ C({a∨b})": c not in op.as_set(op([ab])),
        "hat(a∨b) = {m,n,p}": w.model_names(hat_ab) == ["m", "n", "p"],
        "n ∈ f(hat(a∨b))": "n" in w.model_names(fcm.f(hat_ab)),
    }
    ok = all(via_cli.values()) and all(direct.values()) and all(via_cli[k] for k in direct)
    return ok, f"{sum(direct.values())}/5 facts, ∨-R2 fails: {via_cli['∨-R2 fails']}"


def test_1_disjunction_example():
    record(1, "disjunction counterexample", 1.0, disjunction_example)


# ------------------------------------------------------------------ 2


def negation_example():
    demo = negation_failure_demo(generic_lines(), "a", "b")
    d = demo.detail
    via_cli = {r.name: r.holds for r in cli.example_negation()}
    ok = (
        not demo.holds
        and d["C(a,¬b) = L"]
        and not d["b in C(a)"]
        and d["¬-R1"]
        and d["margin"] >= 1e7
        and all(via_cli.values())
    )
    return ok, f"C(a,¬b) = {d['C(a,¬b)']}, C(a) = {d['C(a)']}, margin {d['margin']:.2e}"


def test_2_quantum_negation_failure():
    record(2, "quantum ¬-R2 failure with ¬-R1", 1.0, negation_example)


# ------------------------------------------------------------------ 3


def round_trip():
    tables = corpus()
    assert len(tables) >= 1000, len(tables)
    bad = 0
    for t in tables:
        reports = {r.name: r for r in check_representation(t)}
        needed = ("round trip", "Contraction", "Local Cumulativity", "Consistency")
        if not all(reports[k].holds for k in needed):
            bad += 1
        elif reports["Consistency"].detail.get("mode", "exhaustive") != "exhaustive":
            bad += 1
    by_n = {n: sum(t.language.n == n for t in tables) for n in range(1, 5)}
    return bad == 0, f"{len(tables)} C-logics {by_n}, {bad} failures"


def test_3_representation_round_trip():
    record(3, "representation round trip", 60.0, round_trip)


# ------------------------------------------------------------------ 4


def axiomatizations():
    disagree = 0
    c_logics = 0
    rng = make_rng(SEED + 4)
    samples = []
    for n in (1, 2, 3):
        lang = AtomLanguage([chr(97 + i) for i in range(n)])
        samples += [uniform_table(rng, lang) for _ in range(3400)]
    lang2 = AtomLanguage(["a", "b"])
    exhaustive = [ConsequenceTable(lang2, rows) for rows in itertools.product(range(4), repeat=4)]
    for t in samples + exhaustive:
        v = axiomatization_verdicts(check_c_axioms(t))
        c_logics += v["inclusion+cumulativity"]
        if len(set(v.values())) != 1:
            disagree += 1
    # the n = 2 verdicts against the brute-force pair scans
    for t in exhaustive:
        rows = list(t.rows)
        if (oracles.inclusion(rows) and oracles.cumulativity(rows)) != is_c_logic(t):
            disagree += 1
    return disagree == 0 and len(exhaustive) == 256 and len(samples) >= 10**4, (
        f"{len(samples)} sampled + {len(exhaustive)} exhaustive, {c_logics} C-logics, {disagree} disagreements"
    )


def test_4_axiomatization_equivalence():
    record(4, "three axiomatizations agree", 120.0, axiomatizations)


# ------------------------------------------------------------------ 5


def quantum_sweep():
    rng = make_rng(SEED + 5)
    bad = 0
    for _ in range(100):
        q = random_quantum_instance(rng, max_dim=4, max_atoms=4)
        reports = {r.name: r for r in check_quantum_table(q, max_loop=4)}
        if not all(reports[k].holds for k in ("Inclusion", "Cumulativity", "Loop", "distance monotonicity")):
            bad += 1
        if reports["Loop"].detail["max_n"] != 4:
            bad += 1
    return bad == 0, f"100 instances, {bad} failures"


def test_5_quantum_operations():
    record(5, "quantum operations are L-logics with distance monotonicity", 30.0, quantum_sweep)


# ------------------------------------------------------------------ 6


def connectives_sweep():
    tables = [t for t in corpus() if t.language.n <= 3]
    bad = []
    for t in tables:
        fcm = represent(t)
        lang = ClosedLanguage(t.language.atoms, 2)
        verdicts = {r.name: r.holds for r in check_connective_rules(fcm, lang)}
        ok = all(verdicts[k] for k in ("∧-R", "¬-R1", "¬-R2", "∨-R1"))
        ok = ok and conservative_extension_check(t, 2).holds
        if not ok:
            bad.append(t)
    return not bad, f"{len(tables)} C-logics at depth 2, {len(bad)} failures"


def test_6_connective_rules():
    record(6, "connective rules and conservative extension", 60.0, connectives_sweep)


# ------------------------------------------------------------------ 7


def cn_suite():
    tables = corpus()
    violations = sum(not r.holds for t in tables for r in check_cn_lemmas(t))
    return violations == 0, f"{len(tables)} C-logics, {violations} violations"


def test_7_cn_suite():
    record(7, "Cn lemmas", None, cn_suite)


# ------------------------------------------------------------------ 8


def loop_order():
    pool = list(corpus())
    rng = make_rng(SEED + 8)
    for n in (1, 2, 3):
        lang = AtomLanguage([chr(97 + i) for i in range(n)])
        pool += [uniform_table(rng, lang) for _ in range(300)]
    passing = bad = 0
    for t in pool:
        if check_loop(t, 4).holds:
            passing += 1
            bad += not theory_order(t).lt_plus_irreflexive().holds
    violator = None
    for t in rejection_c_logics(make_rng(3), 3, 400):
        r = check_loop(t, 3)
        if not r.holds:
            violator = (t, r)
            break
    replayed = violator is not None and violates(violator[0], "Loop", violator[1].witness)
    note = f"{passing} Loop-passing tables, {bad} with <+ cycles; n=3 Loop violator "
    note += f"cycle {violator[1].witness} replayed" if replayed else "not found"
    return bad == 0 and replayed and is_c_logic(violator[0]), note


def test_8_loop_and_order():
    record(8, "<+ irreflexive under Loop; C-logic failing Loop", None, loop_order)


# ------------------------------------------------------------------ 9


def klm_bridge():
    rng = make_rng(SEED + 9)
    bad = 0
    count = 200
    for _ in range(count):
        t = fc_table(valuation_fc_model(rng, 2))
        rel = relation_from_table(t, 2)
        if not all(r.holds for r in klm_rules(rel) if r.name in KLM_RULES):
            bad += 1
            continue
        op = klm_to_consequence(rel)
        bad += any(op([a]) != t(1 << a) for a in range(16))
    return bad == 0, f"{count} relations at k=2, {bad} failures"


def test_9_klm_bridge():
    record(9, "KLM rules and reconstruction", 30.0, klm_bridge)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
