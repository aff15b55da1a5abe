"""Command-line front end.

Every command writes a JSON run report to stdout (or ``--report FILE``) and a
short human summary to stderr.  Exit codes: 0 all checks pass, 1 some check
fails, 2 the input or arguments are invalid.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__
from .connectives import (
    ClosedLanguage,
    check_connective_rules,
    classical_implication_checks,
    conservative_extension_check,
    disj,
    formula_models,
)
from .core import (
    ConsequenceTable,
    NotACLogic,
    PropertyReport,
    SchemaError,
    check_c_axioms,
    check_cn_lemmas,
    check_loop,
    is_c_logic,
    maximal_consistent_sets,
    theories,
    theory_order,
)
from .corpus import (
    RNG_ALGORITHM,
    CorpusSpec,
    RejectionStats,
    make_rng,
    random_fc_model,
    random_quantum_instance,
    rejection_c_logics,
)
from .instances import GENERIC_LINES, disjunction_model, generic_lines
from .quantum import (
    QuantumInstance,
    check_bca,
    check_conjunction_rule,
    negation_failure_demo,
    quantum_table,
    span_disjunction_demo,
)
from .semantics import FCModel, check_choice_axioms, check_representation, induced_consequence, represent

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "input_digest", "seed", "reports", "overall"],
    "properties": {
        "command": {"type": "string"},
        "input_digest": {"type": "string", "pattern": "^sha256:[0-9a-f]{64}$"},
        "seed": {"type": ["integer", "null"]},
        "rng": {"type": "string"},
        "reports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "holds", "witness", "detail"],
                "properties": {
                    "name": {"type": "string"},
                    "holds": {"type": "boolean"},
                    "detail": {"type": "object"},
                },
            },
        },
        "overall": {"enum": ["pass", "fail"]},
        "wall_time_s": {"type": "number"},
        "output": {},
    },
}


@dataclass
class RunReport:
    command: str
    input_digest: str
    seed: int | None
    reports: list[PropertyReport]
    wall_time_s: float | None = None
    output: Any = None
    extra: dict = field(default_factory=dict)

    @property
    def overall(self) -> str:
        return "pass" if all(r.holds for r in self.reports) else "fail"

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            **self.extra,
            "reports": [r.to_dict() for r in self.reports],
            "overall": self.overall,
        }
        if self.wall_time_s is not None:
            out["wall_time_s"] = self.wall_time_s
        if self.output is not None:
            out["output"] = self.output
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        known = {"command", "input_digest", "seed", "reports", "overall", "wall_time_s", "output"}
        rep = cls(
            data["command"],
            data["input_digest"],
            data["seed"],
            [PropertyReport.from_dict(r) for r in data["reports"]],
            data.get("wall_time_s"),
            data.get("output"),
            {k: v for k, v in data.items() if k not in known},
        )
        if rep.overall != data["overall"]:
            raise ValueError("overall verdict does not match the contained reports")
        return rep


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _canonical(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()


class InputError(Exception):
    pass


def _read(path: str) -> tuple[bytes, Any]:
    try:
        raw = sys.stdin.buffer.read() if path == "-" else open(path, "rb").read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return raw, json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    except UnicodeDecodeError:
        raise InputError(f"{path}: not UTF-8 text") from None


def _load_table(path: str) -> tuple[bytes, ConsequenceTable]:
    raw, data = _read(path)
    try:
        return raw, ConsequenceTable.from_json_dict(data)
    except SchemaError as e:
        raise InputError(f"{path}: {e}") from None


def _summary(r: PropertyReport) -> str:
    verdict = "holds" if r.holds else "FAILS"
    wit = "" if r.witness is None else f"  witness {json.dumps(r.witness, ensure_ascii=False)}"
    return f"  {r.name}: {verdict}{wit}"


# ----------------------------------------------------------------- commands


def cmd_check(args) -> RunReport:
    raw, table = _load_table(args.input)
    reports = check_c_axioms(table) + [check_loop(table, args.max_loop)]
    ths = theories(table)
    lang = table.language
    consistent = [t for t in ths if t != table.full]
    reports.append(
        PropertyReport(
            "theories",
            True,
            detail={
                "theories": [lang.names(t) for t in ths],
                "consistent": len(consistent),
                "maximal_consistent_sets": [lang.names(s) for s in maximal_consistent_sets(table)],
            },
        )
    )
    reports += check_cn_lemmas(table)
    reports.append(theory_order(table).lt_plus_irreflexive())
    return RunReport("check", digest(raw), None, reports)


def cmd_represent(args) -> RunReport:
    raw, table = _load_table(args.input)
    try:
        reports = check_representation(table)
    except NotACLogic as e:
        return RunReport("represent", digest(raw), None, [PropertyReport(e.axiom, False, e.witness)])
    return RunReport("represent", digest(raw), None, reports, output=represent(table).to_json_dict())


def _load_quantum(args) -> tuple[bytes, QuantumInstance]:
    raw, data = _read(args.input)
    if args.tol is not None and isinstance(data, dict):
        data = {**data, "tolerance": args.tol}
    try:
        return raw, QuantumInstance.from_json_dict(data)
    except SchemaError as e:
        raise InputError(f"{args.input}: {e}") from None


def cmd_quantum(args) -> RunReport:
    raw, q = _load_quantum(args)
    t = quantum_table(q)
    reports = check_c_axioms(t) + [check_loop(t, args.max_loop), check_bca(q, t), check_conjunction_rule(q)]
    return RunReport("quantum", digest(raw), None, reports, output=t.to_json_dict())


def cmd_connectives(args) -> RunReport:
    raw, data = _read(args.input)
    try:
        if isinstance(data, dict) and "choice" in data:
            fcm = FCModel.from_json_dict(data)
            reports = []
        else:
            table = ConsequenceTable.from_json_dict(data)
            try:
                fcm = represent(table)
            except NotACLogic as e:
                return RunReport("connectives", digest(raw), None, [PropertyReport(e.axiom, False, e.witness)])
            reports = [conservative_extension_check(table, args.depth)]
    except SchemaError as e:
        raise InputError(f"{args.input}: {e}") from None
    lang = ClosedLanguage(fcm.world.language.atoms, args.depth)
    reports += check_connective_rules(fcm, lang)
    if fcm.restricted:
        reports.append(classical_implication_checks(fcm, lang))
    return RunReport("connectives", digest(raw), None, reports)


def _expect(name: str, ok: bool, detail: dict | None = None) -> PropertyReport:
    return PropertyReport(name, bool(ok), None if ok else (name,), detail or {})


def example_disjunction() -> list[PropertyReport]:
    fcm = disjunction_model()
    w = fcm.world
    lang = ClosedLanguage(w.language.atoms, 2)
    a, b, c = (lang.parse(s) for s in "abc")
    ab = disj(a, b)
    hat_ab = formula_models(w, ab)
    f_ab = fcm.f(hat_ab)

    def follows(x: int, phi) -> bool:
        return fcm.f(x) & ~formula_models(w, phi) == 0

    (r2,) = [r for r in check_connective_rules(fcm, lang, pool=[()]) if r.name == "∨-R2"]
    return [
        _expect("c ∈ C({a})", follows(formula_models(w, a), c)),
        _expect("c ∈ C({b})", follows(formula_models(w, b), c)),
        _expect("c ∉ C({a∨b})", not follows(hat_ab, c)),
        _expect("hat(a∨b) = {m,n,p}", hat_ab == w.model_mask(list("mnp")), {"hat": w.model_names(hat_ab)}),
        _expect("n ∈ f(hat(a∨b))", f_ab & w.model_mask(list("n")) != 0, {"f": w.model_names(f_ab)}),
        _expect("∨-R2 fails", not r2.holds, {"rule": r2.to_dict()}),
    ]


def example_negation() -> list[PropertyReport]:
    q = generic_lines()
    demo = negation_failure_demo(q, "a", "b")
    d = demo.detail
    out = [
        _expect("C({a,¬b}) = L", d["C(a,¬b) = L"], {"C(a,¬b)": d["C(a,¬b)"]}),
        _expect("b ∉ C({a})", not d["b in C(a)"], {"C(a)": d["C(a)"]}),
        _expect("¬-R1 holds", d["¬-R1"]),
        _expect("residual margin ≥ 1e7", d["margin"] >= 1e7, {"margin": d["margin"]}),
        _expect("¬-R2 fails", not demo.holds, {"rule": demo.to_dict()}),
    ]
    r2, dist = span_disjunction_demo(q, ["a"], "b", "c")
    out.append(_expect("span ∨-R2 fails", not r2.holds, {"rule": r2.to_dict()}))
    out.append(_expect("span distributivity fails", not dist.holds, {"rule": dist.to_dict()}))
    return out


def example_coherence() -> list[PropertyReport]:
    fcm = disjunction_model()
    reports = {r.name: r for r in check_choice_axioms(fcm)}
    coh, lc = reports["Coherence"], reports["Local Cumulativity"]
    w = fcm.world
    detail = {"rule": coh.to_dict()}
    if coh.witness:
        x, y = coh.witness
        detail["X"], detail["Y"] = w.model_names(x), w.model_names(y)
    return [
        _expect("Coherence fails", not coh.holds, detail),
        _expect("Local Cumulativity holds", lc.holds, {"rule": lc.to_dict()}),
        _expect("Contraction holds", reports["Contraction"].holds),
    ]


EXAMPLES = {
    "disjunction": (example_disjunction, lambda: disjunction_model().to_json_dict()),
    "negation": (example_negation, lambda: GENERIC_LINES),
    "coherence": (example_coherence, lambda: disjunction_model().to_json_dict()),
}


def cmd_examples(args) -> RunReport:
    run, source = EXAMPLES[args.name]
    return RunReport(f"examples {args.name}", digest(_canonical(source())), None, run())


def _tally(results: dict[str, list[bool]], name: str, ok: bool):
    results.setdefault(name, []).append(bool(ok))


def cmd_random(args) -> RunReport:
    try:
        spec = CorpusSpec(args.seed, args.atoms, args.count, args.mode)
    except ValueError as e:
        raise InputError(str(e)) from None
    if spec.mode == "rejection" and spec.atoms > 3:
        raise InputError("rejection mode is limited to 3 atoms (acceptance rate collapses at 4)")
    rng = make_rng(spec.seed)
    results: dict[str, list[bool]] = {}
    extra: dict = {"rng": RNG_ALGORITHM, "corpus": {"atoms": spec.atoms, "count": spec.count, "mode": spec.mode}}

    def table_battery(t: ConsequenceTable):
        ok = is_c_logic(t)
        _tally(results, "C-logic", ok)
        _tally(results, f"Loop({args.max_loop})", check_loop(t, args.max_loop).holds)
        if ok:
            _tally(results, "round trip", all(r.holds for r in check_representation(t)))
            _tally(results, "Cn lemmas", all(r.holds for r in check_cn_lemmas(t)))

    if spec.mode == "fc-model":
        for _ in range(spec.count):
            fcm = random_fc_model(rng, spec.atoms)
            choice = {r.name: r.holds for r in check_choice_axioms(fcm)}
            _tally(results, "Contraction", choice["Contraction"])
            _tally(results, "Local Cumulativity", choice["Local Cumulativity"])
            table_battery(induced_consequence(fcm))
        results["sound"] = results["C-logic"]
    elif spec.mode == "rejection":
        stats = RejectionStats()
        for t in rejection_c_logics(rng, spec.atoms, spec.count, stats=stats):
            table_battery(t)
        extra["acceptance"] = {"draws": stats.draws, "accepted": stats.accepted, "rate": stats.rate}
        if stats.accepted < spec.count:
            results.setdefault("generated", []).extend([True] * stats.accepted + [False] * (spec.count - stats.accepted))
    else:
        for _ in range(spec.count):
            q = random_quantum_instance(rng, max_atoms=spec.atoms)
            t = quantum_table(q)
            _tally(results, "C-logic", is_c_logic(t))
            _tally(results, f"Loop({args.max_loop})", check_loop(t, args.max_loop).holds)
            _tally(results, "distance monotonicity", check_bca(q, t).holds)
            _tally(results, "∧-R", check_conjunction_rule(q).holds)

    reports = []
    for name, oks in results.items():
        first_bad = next((i for i, ok in enumerate(oks) if not ok), None)
        reports.append(
            PropertyReport(
                name,
                first_bad is None,
                None if first_bad is None else (first_bad,),
                {"passed": sum(oks), "total": len(oks)},
            )
        )
    spec_bytes = _canonical({"seed": spec.seed, "atoms": spec.atoms, "count": spec.count, "mode": spec.mode})
    return RunReport("random", digest(spec_bytes), spec.seed, reports, extra=extra)


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-loop", type=int, default=4, metavar="N", help="longest Loop cycle checked")
    common.add_argument("--depth", type=int, default=2, metavar="D", help="formula depth bound")
    common.add_argument("--tol", type=float, default=None, metavar="X", help="membership tolerance override")
    common.add_argument("--seed", type=int, default=0, metavar="S", help="64-bit corpus seed")
    common.add_argument("--report", metavar="FILE", help="write the JSON report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall time in the JSON report")

    p = argparse.ArgumentParser(prog="clogics", description="Check cumulative consequence operations.")
    p.add_argument("--version", action="version", version=f"clogics {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, what in (
        ("check", cmd_check, "consequence table JSON"),
        ("represent", cmd_represent, "consequence table JSON"),
        ("quantum", cmd_quantum, "quantum instance JSON"),
        ("connectives", cmd_connectives, "choice-function model or table JSON"),
    ):
        sp = sub.add_parser(name, parents=[common], help=f"run on a {what}")
        sp.add_argument("input", help=f"{what} file, or - for stdin")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("examples", parents=[common], help="reproduce a built-in counterexample")
    sp.add_argument("name", choices=sorted(EXAMPLES))
    sp.set_defaults(func=cmd_examples)
    sp = sub.add_parser("random", parents=[common], help="generate and check a seeded corpus")
    sp.add_argument("--atoms", type=int, default=3)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--mode", default="fc-model", help="fc-model, rejection or quantum")
    sp.set_defaults(func=cmd_random)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.max_loop < 2:
            raise InputError("--max-loop must be at least 2")
        if args.depth < 0:
            raise InputError("--depth must be non-negative")
        if args.tol is not None and not args.tol > 0:
            raise InputError("--tol must be positive")
        report = args.func(args)
    except InputError as e:
        print(f"clogics {args.command}: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    elapsed = time.perf_counter() - start
    if args.timing:
        report.wall_time_s = round(elapsed, 6)
    text = json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{report.command}: {report.overall} ({elapsed:.3f}s)", file=sys.stderr)
    for r in report.reports:
        print(_summary(r), file=sys.stderr)
    return EXIT_PASS if report.overall == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
