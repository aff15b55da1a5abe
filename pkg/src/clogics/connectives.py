"""Formulas over ∧ and ¬, and the connective rules of an extended model.

A choice-function model over atoms is extended to formulas classically
(``m ⊨ a∧b`` iff both, ``m ⊨ ¬a`` iff not ``m ⊨ a``); the choice function is
untouched.  Formula sets are closed only up to a depth bound, so every rule
check quantifies over a finite :class:`ClosedLanguage` and a finite pool of
premise sets.

Since ``C'(A) = bar(f(hat(A)))`` depends on ``A`` only through the model set
``hat(A)``, the checkers evaluate each distinct model set once and keep the
first premise set (in pool order) that produced it as the reported witness.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import ConsequenceTable, PropertyReport, SchemaError, iter_bits
from .semantics import FCModel, ModelWorld, represent


# ------------------------------------------------------------------ formulas


@dataclass(frozen=True)
class Atom:
    index: int
    depth: int = field(default=0, init=False, compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    child: "Formula"
    depth: int = field(default=0, init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", self.child.depth + 1)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"
    depth: int = field(default=0, init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "depth", max(self.left.depth, self.right.depth) + 1)


Formula = Atom | Neg | And


def disj(a: Formula, b: Formula) -> Formula:
    """``a ∨ b`` as the abbreviation ``¬(¬a ∧ ¬b)``."""
    return Neg(And(Neg(a), Neg(b)))


def render(phi: Formula, names: Sequence[str]) -> str:
    if isinstance(phi, Atom):
        return names[phi.index]
    if isinstance(phi, Neg):
        inner = render(phi.child, names)
        return "!" + (f"({inner})" if isinstance(phi.child, And) else inner)
    parts = []
    for side in (phi.left, phi.right):
        s = render(side, names)
        parts.append(f"({s})" if isinstance(side, And) else s)
    return " & ".join(parts)


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))")


def parse_formula(text: str, names: Sequence[str]) -> Formula:
    """Parse ``&``, ``!``, ``|`` and parentheses; ``x | y`` becomes ``!(!x & !y)``.

    ``!`` binds tightest, then ``&``, then ``|``; binary operators associate
    to the left.
    """
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group(1):
            tokens.append(("name", m.group(1)))
        elif m.group(2) and not m.group(2).isspace():
            tokens.append(("op", m.group(2)))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take(kind, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise SchemaError(f"formula {text!r}: expected {want} at token {pos}, got {tok[1]!r}")
        pos += 1
        return tok[1]

    def disjunction():
        left = conjunction()
        while peek() == ("op", "|"):
            take("op", "|")
            left = disj(left, conjunction())
        return left

    def conjunction():
        left = unary()
        while peek() == ("op", "&"):
            take("op", "&")
            left = And(left, unary())
        return left

    def unary():
        kind, value = peek()
        if (kind, value) == ("op", "!"):
            take("op", "!")
            return Neg(unary())
        if (kind, value) == ("op", "("):
            take("op", "(")
            inner = disjunction()
            take("op", ")")
            return inner
        name = take("name")
        if name not in names:
            raise SchemaError(f"formula {text!r}: unknown atom {name!r}")
        return Atom(list(names).index(name))

    phi = disjunction()
    if pos != len(tokens):
        raise SchemaError(f"formula {text!r}: trailing input at token {pos}")
    return phi


def eval_formula(world: ModelWorld, phi: Formula, model_index: int) -> bool:
    """Classical satisfaction of ``phi`` by one model of ``world``."""
    if isinstance(phi, Atom):
        return bool(world.sat[model_index] >> phi.index & 1)
    if isinstance(phi, Neg):
        return not eval_formula(world, phi.child, model_index)
    return eval_formula(world, phi.left, model_index) and eval_formula(world, phi.right, model_index)


def formula_models(world: ModelWorld, phi: Formula, _cache: dict | None = None) -> int:
    """Bitmask of models satisfying ``phi``."""
    cache = {} if _cache is None else _cache
    hit = cache.get(phi)
    if hit is not None:
        return hit
    if isinstance(phi, Atom):
        out = sum(1 << i for i, s in enumerate(world.sat) if s >> phi.index & 1)
    elif isinstance(phi, Neg):
        out = world.all_models & ~formula_models(world, phi.child, cache)
    else:
        out = formula_models(world, phi.left, cache) & formula_models(world, phi.right, cache)
    cache[phi] = out
    return out


def truth_table(phi: Formula, k: int) -> int:
    """Bitmask over the ``2**k`` classical valuations (bit i of v = atom i) satisfying ``phi``."""
    if isinstance(phi, Atom):
        return sum(1 << v for v in range(1 << k) if v >> phi.index & 1)
    if isinstance(phi, Neg):
        return ((1 << (1 << k)) - 1) & ~truth_table(phi.child, k)
    return truth_table(phi.left, k) & truth_table(phi.right, k)


class ClosedLanguage:
    """Every formula over the given atoms with connective depth ``<= depth``.

    Formulas are listed by increasing depth, atoms first (in atom order), and
    identified structurally: ``a & b`` and ``b & a`` are distinct entries.
    """

    def __init__(self, atoms: Sequence[str], depth: int = 2):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        self.atoms = tuple(atoms)
        self.depth = depth
        level = [Atom(i) for i in range(len(self.atoms))]
        seen = dict.fromkeys(level)
        for _ in range(depth):
            current = list(seen)
            for x in current:
                seen.setdefault(Neg(x))
            for x, y in itertools.product(current, repeat=2):
                seen.setdefault(And(x, y))
        self.formulas: tuple[Formula, ...] = tuple(seen)
        self._index = {phi: i for i, phi in enumerate(self.formulas)}

    def __len__(self):
        return len(self.formulas)

    def __iter__(self):
        return iter(self.formulas)

    def __contains__(self, phi):
        return phi in self._index

    def index(self, phi: Formula) -> int:
        return self._index[phi]

    @property
    def full(self) -> int:
        return (1 << len(self.formulas)) - 1

    def render(self, phi: Formula) -> str:
        return render(phi, self.atoms)

    def parse(self, text: str) -> Formula:
        return parse_formula(text, self.atoms)

    def default_pool(self) -> list[tuple[Formula, ...]]:
        """The empty set, every singleton, and every pair of formulas."""
        pool = [()]
        pool.extend((phi,) for phi in self.formulas)
        pool.extend(itertools.combinations(self.formulas, 2))
        return pool


class ExtendedOperation:
    """``C'(A) = bar(f(hat(A)))`` over a closed language, as bitmasks over its formulas."""

    def __init__(self, fcm: FCModel, lang: ClosedLanguage):
        if tuple(fcm.world.language.atoms) != lang.atoms:
            raise ValueError("closed language and model use different atoms")
        self.fcm = fcm
        self.lang = lang
        self._cache: dict = {}
        self.mods = [formula_models(fcm.world, phi, self._cache) for phi in lang.formulas]
        self._cons: dict[int, int] = {}

    def models(self, phi: Formula) -> int:
        return formula_models(self.fcm.world, phi, self._cache)

    def hat(self, formulas: Iterable[Formula]) -> int:
        out = self.fcm.world.all_models
        for phi in formulas:
            out &= self.models(phi)
        return out

    def of_models(self, x: int) -> int:
        """``bar(f(x))`` over the closed language."""
        hit = self._cons.get(x)
        if hit is None:
            fx = self.fcm.f(x)
            hit = 0
            for j, mj in enumerate(self.mods):
                if fx & ~mj == 0:
                    hit |= 1 << j
            self._cons[x] = hit
        return hit

    def __call__(self, formulas: Iterable[Formula]) -> int:
        return self.of_models(self.hat(formulas))

    def as_set(self, mask: int) -> frozenset:
        return frozenset(self.lang.formulas[j] for j in iter_bits(mask))


def extended_consequence(fcm: FCModel, formulas: Iterable[Formula], lang: ClosedLanguage) -> frozenset:
    op = ExtendedOperation(fcm, lang)
    return op.as_set(op(formulas))


def _distinct_premises(op: ExtendedOperation, pool):
    """``[(hat(A), A)]`` for the first ``A`` of each distinct model set, in pool order."""
    if pool is None:
        return _default_premises(op)
    seen = {}
    for A in pool:
        seen.setdefault(op.hat(A), A)
    return list(seen.items())


def _default_premises(op: ExtendedOperation):
    # same order as ClosedLanguage.default_pool: (), singletons, pairs i < j
    F = op.lang.formulas
    mods = np.array(op.mods, dtype=np.int64)
    i, j = np.triu_indices(len(F), 1)
    hats = np.concatenate([[op.fcm.world.all_models], mods, mods[i] & mods[j]])
    _, first = np.unique(hats, return_index=True)
    out = []
    for pos in sorted(int(p) for p in first):
        if pos == 0:
            A = ()
        elif pos <= len(F):
            A = (F[pos - 1],)
        else:
            q = pos - 1 - len(F)
            A = (F[i[q]], F[j[q]])
        out.append((int(hats[pos]), A))
    return out


CONNECTIVE_RULES = ("∧-R", "¬-R1", "¬-R2", "∨-R1", "∨-R2")


def check_connective_rules(
    fcm: FCModel, lang: ClosedLanguage, pool: Sequence[tuple] | None = None
) -> list[PropertyReport]:
    """∧-R, ¬-R1, ¬-R2, ∨-R1, ∨-R2 over premise sets ``A`` from ``pool``.

    ``a`` and ``b`` range over ``lang``; the compounds ``a∧b``, ``¬a`` and
    ``a∨b`` are evaluated whether or not they fall inside the depth bound,
    and consequence sets are compared on ``lang`` (so ``L`` is the whole
    closed language).  Formulas true in the same models are interchangeable
    here, so one representative per model set is used: the first in
    language order, which is also what a witness reports.
    """
    op = ExtendedOperation(fcm, lang)
    names = lang.atoms
    premises = _distinct_premises(op, pool)
    F = lang.formulas
    full = lang.full
    reps = {}
    for j, mj in enumerate(op.mods):
        reps.setdefault(mj, F[j])
    reps = list(reps.values())
    scope = {
        "depth": lang.depth,
        "formulas": len(F),
        "premise_sets": "default" if pool is None else len(pool),
        "distinct_model_sets": len(premises),
        "formula_classes": len(reps),
    }

    def show(A):
        return [render(phi, names) for phi in A]

    def holds_in(x: int, phi: Formula) -> bool:
        """phi ∈ bar(f(x)), for any formula."""
        return op.fcm.f(x) & ~op.models(phi) == 0

    reports = []

    def first_violation(check):
        for H, A in premises:
            w = check(H, A)
            if w:
                return w
        return None

    # ∧-R: C(A, a∧b) = C(A, a, b)
    def conj(H, A):
        for a, b in itertools.product(reps, repeat=2):
            if op.of_models(H & op.models(And(a, b))) != op.of_models(H & op.models(a) & op.models(b)):
                return (show(A), render(a, names), render(b, names))

    # ¬-R1: C(A, a, ¬a) = L
    def neg1(H, A):
        for a in reps:
            if op.of_models(H & op.models(a) & op.models(Neg(a))) != full:
                return (show(A), render(a, names))

    # ¬-R2: C(A, ¬a) = L ⇒ a ∈ C(A)
    def neg2(H, A):
        for a in reps:
            if op.of_models(H & op.models(Neg(a))) == full and not holds_in(H, a):
                return (show(A), render(a, names))

    # ∨-R1: a ∈ C(A) ⇒ a∨b ∈ C(A) and b∨a ∈ C(A)
    def or1(H, A):
        for a, b in itertools.product(reps, repeat=2):
            if holds_in(H, a) and not (holds_in(H, disj(a, b)) and holds_in(H, disj(b, a))):
                return (show(A), render(a, names), render(b, names))

    for name, check in (("∧-R", conj), ("¬-R1", neg1), ("¬-R2", neg2), ("∨-R1", or1)):
        w = first_violation(check)
        reports.append(PropertyReport(name, w is None, w, dict(scope)))

    # ∨-R2: C(A, a) ∩ C(A, b) ⊆ C(A, a∨b)
    detail = dict(scope)
    w = None
    for H, A in premises:
        for a, b in itertools.product(reps, repeat=2):
            xa, xb, xab = H & op.models(a), H & op.models(b), H & op.models(disj(a, b))
            extra = op.of_models(xa) & op.of_models(xb) & ~op.of_models(xab)
            if extra:
                x = F[next(iter_bits(extra))]
                w = (show(A), render(a, names), render(b, names), render(x, names))
                world = fcm.world
                detail["trace"] = {
                    "hat(A,a)": world.model_names(xa),
                    "f(hat(A,a))": world.model_names(fcm.f(xa)),
                    "hat(A,b)": world.model_names(xb),
                    "f(hat(A,b))": world.model_names(fcm.f(xb)),
                    "hat(A,a∨b)": world.model_names(xab),
                    "f(hat(A,a∨b))": world.model_names(fcm.f(xab)),
                    "missing": render(x, names),
                }
                break
        if w:
            break
    reports.append(PropertyReport("∨-R2", w is None, w, detail))
    return reports


def conservative_extension_check(table: ConsequenceTable, depth: int = 2) -> PropertyReport:
    """``C(A) = P ∩ C'(A)`` for every ``A ⊆ P``, with ``C'`` the classical
    extension of ``represent(table)`` to formulas of depth ``<= depth``."""
    fcm = represent(table)
    lang = ClosedLanguage(table.language.atoms, depth)
    op = ExtendedOperation(fcm, lang)
    n = table.language.n
    atom_bits = (1 << n) - 1  # atoms are the first n formulas
    for a in range(table.language.size):
        got = op([Atom(i) for i in iter_bits(a)]) & atom_bits
        if got != table.rows[a]:
            return PropertyReport("conservative extension", False, (a,), {"depth": depth, "got": got})
    return PropertyReport("conservative extension", True, detail={"depth": depth, "formulas": len(lang)})


def classical_implication_checks(
    fcm: FCModel, lang: ClosedLanguage, pool: Sequence[tuple] | None = None
) -> PropertyReport:
    """For every ``a, b`` in ``lang`` with ``a ⊨ b`` (truth tables over the atoms):
    ``b ∈ C'(A, a)`` for every ``A`` in the pool, and ``C'(a, ¬b) = L``."""
    op = ExtendedOperation(fcm, lang)
    k = len(lang.atoms)
    if k > 6:
        raise ValueError("truth tables are limited to 6 atoms")
    names = lang.atoms
    F = lang.formulas
    tt = np.array([truth_table(phi, k) for phi in F], dtype=np.uint64)
    ent = (tt[:, None] & ~tt[None, :]) == 0  # ent[i, j]: F[i] ⊨ F[j]
    premises = _distinct_premises(op, pool)
    detail = {"entailed_pairs": int(ent.sum()), "distinct_model_sets": len(premises), "depth": lang.depth}
    mods = op.mods
    entailed = [sum(1 << int(j) for j in np.flatnonzero(row)) for row in ent]

    # b ∈ C'(A, a) depends on (hat(A) ∩ hat(a), the set of b entailed by a)
    groups = {}
    for i in range(len(F)):
        groups.setdefault((mods[i], entailed[i]), i)
    for H, A in premises:
        for (ma, e), i in groups.items():
            missing = e & ~op.of_models(H & ma)
            if missing:
                b = F[next(iter_bits(missing))]
                w = ("b ∈ C(A, a)", [render(p, names) for p in A], render(F[i], names), render(b, names))
                return PropertyReport("classical implication", False, w, detail)

    seen = set()
    for i, j in zip(*np.nonzero(ent)):
        key = (mods[i], mods[j])
        if key in seen:
            continue
        seen.add(key)
        if op.of_models(mods[i] & op.models(Neg(F[j]))) != lang.full:
            w = ("C(a, ¬b) = L", render(F[i], names), render(F[j], names))
            return PropertyReport("classical implication", False, w, detail)
    return PropertyReport("classical implication", True, detail=detail)
