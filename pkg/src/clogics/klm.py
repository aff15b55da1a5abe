"""Cumulative relations over a small propositional language.

With ``k`` atoms there are ``2**k`` valuations, and a proposition is
identified with the set of valuations satisfying it, i.e. a bitmask ``q``
over valuations.  Logically equivalent formulas are therefore the same
proposition; ``a ∧ b`` is ``a & b``, ``¬a`` is the complement, and
``a ⊨ b`` is ``a ⊆ b``.

At ``k = 2`` there are 16 propositions, so an operation on sets of
propositions fits a :class:`~clogics.core.ConsequenceTable` whose atom ``q``
stands for proposition ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import AtomLanguage, ConsequenceTable, PropertyReport, iter_bits, submasks
from .corpus import random_definable_choice
from .semantics import ChoiceFunction, FCModel, ModelWorld, induced_consequence

MAX_K = 3


@dataclass(frozen=True)
class PropLanguage:
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= MAX_K:
            raise ValueError(f"k must be between 1 and {MAX_K}")

    @property
    def valuations(self) -> int:
        return 1 << self.k

    @property
    def count(self) -> int:
        return 1 << self.valuations

    @property
    def top(self) -> int:
        """The proposition true in every valuation."""
        return self.count - 1

    def atom(self, i: int) -> int:
        return sum(1 << v for v in range(self.valuations) if v >> i & 1)

    def neg(self, q: int) -> int:
        return self.top & ~q

    def name(self, q: int) -> str:
        # character v is 1 iff valuation v satisfies q
        return "p" + format(q, f"0{self.valuations}b")[::-1]

    def language(self) -> AtomLanguage:
        if self.k > 2:
            raise ValueError("tables over propositions need k <= 2")
        return AtomLanguage(self.name(q) for q in range(self.count))

    def world(self, valuations: list[int]) -> ModelWorld:
        """Models labelled by valuations; a model satisfies every proposition containing its valuation."""
        lang = self.language()
        sat = tuple(sum(1 << q for q in range(self.count) if q >> v & 1) for v in valuations)
        return ModelWorld(lang, tuple(f"w{i}" for i in range(len(valuations))), sat)


# --------------------------------------------------------------- operations


def valuation_fc_model(rng: np.random.Generator, k: int = 2, max_models: int = 5) -> FCModel:
    """Random restricted model whose worlds are classical valuations."""
    pl = PropLanguage(k)
    m = int(rng.integers(1, max_models + 1))
    vals = [int(v) for v in rng.integers(0, pl.valuations, size=m)]
    world = pl.world(vals)
    base = random_definable_choice(rng, world)
    return FCModel(world, ChoiceFunction(world, base, "two-case"), restricted=True)


def arbitrary_valuation_model(rng: np.random.Generator, k: int = 2, max_models: int = 5) -> FCModel:
    """Worlds are valuations, ``f`` is any contracting function (no other axiom)."""
    pl = PropLanguage(k)
    m = int(rng.integers(1, max_models + 1))
    world = pl.world([int(v) for v in rng.integers(0, pl.valuations, size=m)])
    entries = {x: x & int(rng.integers(0, 1 << m)) for x in range(1 << m)}
    return FCModel(world, ChoiceFunction(world, entries, "table"))


def operation_table(k: int, fn) -> ConsequenceTable:
    """Table of an operation that depends only on the conjunction of its premises.

    ``fn(alpha)`` gives the consequences (a proposition bitmask) of any set
    whose conjunction is ``alpha``.
    """
    pl = PropLanguage(k)
    lang = pl.language()
    alpha = conjunction_array(pl)
    values = np.array([fn(a) for a in range(pl.count)], dtype=np.int64)
    return ConsequenceTable(lang, tuple(int(v) for v in values[alpha]))


def conjunction_array(pl: PropLanguage) -> np.ndarray:
    """Conjunction of every set of propositions (``top`` for the empty set)."""
    arr = np.array([pl.top], dtype=np.int64)
    for q in range(pl.count):
        arr = np.concatenate([arr, arr & q])
    return arr


def upward(pl: PropLanguage, v: int) -> int:
    """Bitmask of all propositions containing the valuation set ``v``."""
    rest = pl.top & ~v
    out = 0
    for s in submasks(rest):
        out |= 1 << (v | s)
    return out


def classical_table(k: int) -> ConsequenceTable:
    """Monotone classical consequence: ``b ∈ C(A)`` iff ``A ⊨ b``."""
    pl = PropLanguage(k)
    return operation_table(k, lambda a: upward(pl, a))


def single_valuation_table(k: int, v: int) -> ConsequenceTable:
    """Everything true at ``v`` when ``v`` satisfies ``A``, everything otherwise."""
    pl = PropLanguage(k)
    return operation_table(k, lambda a: upward(pl, 1 << v) if a >> v & 1 else (1 << pl.count) - 1)


# ----------------------------------------------------------------- relation


@dataclass(frozen=True)
class ValuationClassRelation:
    """``cons[a]`` is the bitmask of propositions ``b`` with ``a |~ b``."""

    k: int
    cons: tuple[int, ...]

    def __post_init__(self):
        if len(self.cons) != PropLanguage(self.k).count:
            raise ValueError("one consequence mask per proposition is required")

    def __call__(self, a: int, b: int) -> bool:
        return bool(self.cons[a] >> b & 1)

    @property
    def props(self) -> PropLanguage:
        return PropLanguage(self.k)


def relation_from_table(table: ConsequenceTable, k: int) -> ValuationClassRelation:
    """``a |~ b`` iff ``b ∈ C({a})``."""
    pl = PropLanguage(k)
    if table.language.n != pl.count:
        raise ValueError("table is not over the propositions of this k")
    return ValuationClassRelation(k, tuple(table.rows[1 << a] for a in range(pl.count)))


def relation_from_valuations(k: int, valuations: list[int], f) -> ValuationClassRelation:
    """Relation of a model with worlds labelled by ``valuations`` and choice
    function ``f`` on world bitmasks; works for every ``k <= 3``."""
    pl = PropLanguage(k)
    cons = []
    for a in range(pl.count):
        x = sum(1 << i for i, v in enumerate(valuations) if a >> v & 1)
        vals = 0
        for i in iter_bits(f(x)):
            vals |= 1 << valuations[i]
        cons.append(upward(pl, vals))
    return ValuationClassRelation(k, tuple(cons))


KLM_RULES = ("Left Logical Equivalence", "Right Weakening", "Reflexivity", "Cut", "Cautious Monotonicity")


def klm_rules(rel: ValuationClassRelation) -> list[PropertyReport]:
    pl = rel.props
    cons = rel.cons
    found = dict.fromkeys(KLM_RULES)
    for a in range(pl.count):
        ca = cons[a]
        if found["Reflexivity"] is None and not ca >> a & 1:
            found["Reflexivity"] = (a,)
        for b in iter_bits(ca):
            if found["Right Weakening"] is None:
                for v in iter_bits(pl.top & ~b):
                    if not ca >> (b | 1 << v) & 1:
                        found["Right Weakening"] = (a, b, b | 1 << v)
                        break
            cab = cons[a & b]
            if found["Cut"] is None and cab & ~ca:
                found["Cut"] = (a, b, next(iter_bits(cab & ~ca)))
            if found["Cautious Monotonicity"] is None and ca & ~cab:
                found["Cautious Monotonicity"] = (a, b, next(iter_bits(ca & ~cab)))
    out = [
        PropertyReport(
            "Left Logical Equivalence",
            True,
            detail={"note": "structural: equivalent formulas are one proposition"},
        )
    ]
    out += [PropertyReport(name, found[name] is None, found[name]) for name in KLM_RULES[1:]]
    return out


def violates_klm(rel: ValuationClassRelation, name: str, witness) -> bool:
    r = rel
    if name == "Reflexivity":
        (a,) = witness
        return not r(a, a)
    if name == "Right Weakening":
        a, b, b2 = witness
        return r(a, b) and b & ~b2 == 0 and not r(a, b2)
    if name == "Cut":
        a, b, c = witness
        return r(a, b) and r(a & b, c) and not r(a, c)
    if name == "Cautious Monotonicity":
        a, b, c = witness
        return r(a, b) and r(a, c) and not r(a & b, c)
    raise KeyError(f"no replay rule for {name!r}")


def klm_relation_checks(table: ConsequenceTable, k: int) -> list[PropertyReport]:
    return klm_rules(relation_from_table(table, k))


# ---------------------------------------------------------- reconstruction


class ReconstructedOperation:
    """Consequence operation rebuilt from a cumulative relation.

    ``b ∈ C(A)`` iff some ``a`` with ``A ⊨ a`` has ``a' |~ b`` for every
    ``a'`` with ``A ⊨ a'`` and ``a' ⊨ a``.  With finitely many propositions
    ``A`` is equivalent to its conjunction, so every antecedent is finite and
    the compactness step is vacuous.
    """

    def __init__(self, rel: ValuationClassRelation):
        self.rel = rel
        self.props = rel.props
        self._memo: dict[int, int] = {}

    def of_conjunction(self, alpha: int) -> int:
        hit = self._memo.get(alpha)
        if hit is None:
            cons = self.rel.cons
            everything = (1 << self.props.count) - 1
            hit = 0
            for extra in submasks(self.props.top & ~alpha):
                acc = everything
                for e2 in submasks(extra):
                    acc &= cons[alpha | e2]
                hit |= acc
            self._memo[alpha] = hit
        return hit

    def __call__(self, props: Iterable[int]) -> int:
        alpha = self.props.top
        for q in props:
            alpha &= q
        return self.of_conjunction(alpha)

    def table(self) -> ConsequenceTable:
        return operation_table(self.props.k, self.of_conjunction)


def klm_to_consequence(rel: ValuationClassRelation) -> ReconstructedOperation:
    for report in klm_rules(rel):
        if not report.holds:
            raise ValueError(f"not a cumulative relation: {report.name} fails (witness {report.witness})")
    return ReconstructedOperation(rel)


# ------------------------------------------------- propositional rule checks


def check_propositional_rules(table: ConsequenceTable, k: int) -> list[PropertyReport]:
    """∧-R, ¬-R1, ¬-R2 over every premise set and every pair of propositions."""
    pl = PropLanguage(k)
    rows = table.array()
    idx = np.arange(rows.size, dtype=np.int64)
    full = table.full
    w_and = w_n1 = w_n2 = None
    for a in range(pl.count):
        na = pl.neg(a)
        if w_n1 is None:
            bad = np.flatnonzero(rows[idx | (1 << a) | (1 << na)] != full)
            if bad.size:
                w_n1 = (int(bad[0]), a)
        if w_n2 is None:
            bad = np.flatnonzero((rows[idx | (1 << na)] == full) & ((rows >> a) & 1 == 0))
            if bad.size:
                w_n2 = (int(bad[0]), a)
        if w_and is None:
            for b in range(a, pl.count):  # symmetric in a, b
                bad = np.flatnonzero(rows[idx | (1 << (a & b))] != rows[idx | (1 << a) | (1 << b)])
                if bad.size:
                    w_and = (int(bad[0]), a, b)
                    break
    return [
        PropertyReport("∧-R", w_and is None, w_and),
        PropertyReport("¬-R1", w_n1 is None, w_n1),
        PropertyReport("¬-R2", w_n2 is None, w_n2),
    ]


def check_maximal_consistent_classical(table: ConsequenceTable, k: int, maximal: list[int]) -> PropertyReport:
    """Each maximal consistent set contains ``a∧b`` iff it contains both, and ``¬a`` iff not ``a``."""
    pl = PropLanguage(k)
    for s in maximal:
        for a in range(pl.count):
            if bool(s >> pl.neg(a) & 1) == bool(s >> a & 1):
                return PropertyReport("maximal consistent sets classical", False, (s, "¬", a))
            for b in range(pl.count):
                if bool(s >> (a & b) & 1) != (bool(s >> a & 1) and bool(s >> b & 1)):
                    return PropertyReport("maximal consistent sets classical", False, (s, "∧", a, b))
    return PropertyReport("maximal consistent sets classical", True, detail={"sets": len(maximal)})


def check_cn_via_maximal(table: ConsequenceTable, cn_values: np.ndarray, maximal: list[int]) -> PropertyReport:
    """``Cn(A)`` equals the meet of the maximal consistent supersets of ``A``."""
    idx = np.arange(table.language.size, dtype=np.int64)
    meet = np.full(idx.size, table.full, dtype=np.int64)
    for s in maximal:
        sel = (idx & ~s) == 0
        meet[sel] &= s
    bad = np.flatnonzero(meet != cn_values)
    if bad.size:
        return PropertyReport("Cn = meet of maximal consistent supersets", False, (int(bad[0]),))
    return PropertyReport("Cn = meet of maximal consistent supersets", True)


def fc_table(fcm: FCModel) -> ConsequenceTable:
    return induced_consequence(fcm)
