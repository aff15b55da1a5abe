"""Choice-function models over a finite set of models.

A :class:`ModelWorld` is a finite set of named models with a satisfaction
relation to the atoms.  Sets of models are bitmasks over model indices, sets
of atoms are bitmasks over atom indices.  ``mod_of`` and ``theory_of`` are the
two halves of the Galois connection between them.

An :class:`FCModel` adds a choice function ``f`` on sets of models; the
consequence operation it induces is ``C(A) = theory_of(f(mod_of(A)))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .core import (
    AtomLanguage,
    ConsequenceTable,
    PropertyReport,
    SchemaError,
    cn_array,
    iter_bits,
    require_c_logic,
    theories,
)

MAX_MODELS = 24
EXHAUSTIVE_MODELS = 20
DEFAULT_SAMPLES = 10**6


@dataclass(frozen=True)
class ModelWorld:
    language: AtomLanguage
    models: tuple[str, ...]
    sat: tuple[int, ...]  # sat[i] = atoms satisfied by model i

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "sat", tuple(int(s) for s in self.sat))
        if len(self.models) > MAX_MODELS:
            raise ValueError(f"at most {MAX_MODELS} models are supported")
        if len(set(self.models)) != len(self.models):
            raise ValueError("model names must be unique")
        if len(self.sat) != len(self.models):
            raise ValueError("one satisfaction row per model is required")
        for s in self.sat:
            if s & ~self.language.full:
                raise ValueError("satisfaction row mentions atoms outside the language")

    @classmethod
    def from_names(cls, atoms: Sequence[str], models: dict[str, Iterable[str]]) -> "ModelWorld":
        lang = AtomLanguage(atoms)
        return cls(lang, tuple(models), tuple(lang.mask(v) for v in models.values()))

    @property
    def m(self) -> int:
        return len(self.models)

    @property
    def all_models(self) -> int:
        return (1 << self.m) - 1

    def model_mask(self, names: Iterable[str]) -> int:
        out = 0
        for name in names:
            try:
                out |= 1 << self.models.index(name)
            except ValueError:
                raise KeyError(f"unknown model {name!r}") from None
        return out

    def model_names(self, x: int) -> list[str]:
        return [self.models[i] for i in iter_bits(x)]

    def render(self, x: int) -> str:
        return "{" + ",".join(self.model_names(x)) + "}"

    def hat_array(self) -> np.ndarray:
        """``mod_of(A)`` for every atom set ``A``."""
        arr = self.__dict__.get("_hat")
        if arr is None:
            n = self.language.n
            atom_models = [sum(1 << i for i, s in enumerate(self.sat) if s >> a & 1) for a in range(n)]
            arr = np.array([self.all_models], dtype=np.int64)
            for a in range(n):
                arr = np.concatenate([arr, arr & atom_models[a]])
            arr.setflags(write=False)
            object.__setattr__(self, "_hat", arr)
        return arr

    def bar_array(self) -> np.ndarray:
        """``theory_of(X)`` for every model set ``X``."""
        arr = self.__dict__.get("_bar")
        if arr is None:
            if self.m > 22:
                raise ValueError("bar table too large; use theory_of")
            arr = np.array([self.language.full], dtype=np.int64)
            for i in range(self.m):
                arr = np.concatenate([arr, arr & self.sat[i]])
            arr.setflags(write=False)
            object.__setattr__(self, "_bar", arr)
        return arr


def mod_of(world: ModelWorld, a: int) -> int:
    """Models satisfying every atom of ``a``; all models when ``a`` is empty."""
    return sum(1 << i for i, s in enumerate(world.sat) if a & ~s == 0)


def theory_of(world: ModelWorld, x: int) -> int:
    """Atoms satisfied by every model of ``x``; all atoms when ``x`` is empty."""
    out = world.language.full
    for i in iter_bits(x):
        out &= world.sat[i]
    return out


def definable_sets(world: ModelWorld) -> list[int]:
    return sorted({int(v) for v in world.hat_array()})


def check_definable_intersections(world: ModelWorld) -> PropertyReport:
    defs = definable_sets(world)
    dset = set(defs)
    for i, x in enumerate(defs):
        for y in defs[i + 1 :]:
            if x & y not in dset:
                return PropertyReport("definable ∩ closed", False, (x, y))
    return PropertyReport("definable ∩ closed", True)


def _pairs(size: int, rng, limit: int):
    """Index pairs over ``range(size)``: all of them, or ``limit`` random ones."""
    if size * size <= limit:
        i, j = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
        return i.ravel(), j.ravel(), "exhaustive"
    return rng.integers(size, size=limit), rng.integers(size, size=limit), "sampled"


def check_galois(world: ModelWorld, pair_limit: int = 1 << 20, seed: int = 0) -> PropertyReport:
    """The Galois-connection laws between ``mod_of`` and ``theory_of``.

    Single-argument laws run over every subset.  Two-argument laws run over
    every pair when there are at most ``pair_limit`` of them, otherwise over
    ``pair_limit`` seeded random pairs (recorded in ``detail``).
    """
    rng = np.random.default_rng(seed)
    hat = world.hat_array()
    bar = world.bar_array()
    A = np.arange(hat.size, dtype=np.int64)
    X = np.arange(bar.size, dtype=np.int64)
    bh = bar[hat]
    hb = hat[bar]
    laws = {}

    def law(name, bad, args):
        idx = np.flatnonzero(bad)
        laws[name] = None if idx.size == 0 else tuple(int(a[idx[0]]) for a in args)

    law("A ⊆ bar(hat(A))", (A & ~bh) != 0, (A,))
    law("X ⊆ hat(bar(X))", (X & ~hb) != 0, (X,))
    law("hat(A) = hat(bar(hat(A)))", hat[bh] != hat, (A,))
    law("bar(X) = bar(hat(bar(X)))", bar[hb] != bar, (X,))

    a, b, mode_a = _pairs(hat.size, rng, pair_limit)
    law("hat(A∪B) = hat(A)∩hat(B)", hat[a | b] != (hat[a] & hat[b]), (a, b))
    sub = (a & ~b) == 0
    law("A ⊆ B ⇒ hat(B) ⊆ hat(A)", sub & ((hat[b] & ~hat[a]) != 0), (a, b))
    law("A ⊆ B ⇒ bar(hat(A)) ⊆ bar(hat(B))", sub & ((bh[a] & ~bh[b]) != 0), (a, b))

    x, y, mode_x = _pairs(bar.size, rng, pair_limit)
    law("bar(X∪Y) = bar(X)∩bar(Y)", bar[x | y] != (bar[x] & bar[y]), (x, y))
    sub = (x & ~y) == 0
    law("X ⊆ Y ⇒ bar(Y) ⊆ bar(X)", sub & ((bar[y] & ~bar[x]) != 0), (x, y))
    law("X ⊆ Y ⇒ hat(bar(X)) ⊆ hat(bar(Y))", sub & ((hb[x] & ~hb[y]) != 0), (x, y))

    detail = {"atom_pairs": mode_a, "model_pairs": mode_x, "laws": {k: v is None for k, v in laws.items()}}
    failed = [(k, v) for k, v in laws.items() if v is not None]
    if failed:
        return PropertyReport("Galois connection", False, failed[0], detail)
    return PropertyReport("Galois connection", True, detail=detail)


# ------------------------------------------------------------ choice function


class ChoiceFunction:
    """A choice function on the model sets of a world.

    ``policy="table"``: ``entries`` gives explicit values; every other set
    maps to itself.

    ``policy="two-case"``: ``entries`` gives the values on definable sets
    (unlisted definable sets map to themselves).  A non-definable ``X`` takes
    ``f(Y)`` for the first definable ``Y`` (ascending bitmask order) with
    ``f(Y) ⊆ X ⊆ Y``, and ``X`` itself when no such ``Y`` exists.

    Values are memoized; ``values()`` evaluates every set at once.
    """

    POLICIES = ("table", "two-case")

    def __init__(self, world: ModelWorld, entries: dict[int, int], policy: str = "table"):
        if policy not in self.POLICIES:
            raise ValueError(f"unknown extension policy {policy!r}")
        self.world = world
        self.policy = policy
        self.entries = {int(k): int(v) for k, v in entries.items()}
        full = world.all_models
        for k, v in self.entries.items():
            if (k | v) & ~full:
                raise ValueError("choice entry mentions models outside the world")
        self._memo: dict[int, int] = {}
        self._values: np.ndarray | None = None
        if policy == "two-case":
            defs = definable_sets(world)
            dset = set(defs)
            extra = [k for k in self.entries if k not in dset]
            if extra:
                raise ValueError(
                    f"two-case base must be defined on definable sets only; {world.render(extra[0])} is not definable"
                )
            self.definable = tuple(defs)
            self.base = {d: self.entries.get(d, d) for d in defs}
        else:
            self.definable = None
            self.base = None

    def __repr__(self):
        return f"ChoiceFunction(policy={self.policy!r}, entries={len(self.entries)})"

    def __call__(self, x: int) -> int:
        v = self._memo.get(x)
        if v is None:
            v = self._evaluate(x)
            self._memo[x] = v
        return v

    def _evaluate(self, x: int) -> int:
        if self.policy == "table":
            return self.entries.get(x, x)
        if x in self.base:
            return self.base[x]
        for y in self.definable:
            fy = self.base[y]
            if fy & ~x == 0 and x & ~y == 0:
                return fy
        return x

    def sandwiches(self, x: int) -> list[int]:
        """Every definable ``Y`` with ``f(Y) ⊆ x ⊆ Y`` (two-case only)."""
        return [y for y in self.definable if self.base[y] & ~x == 0 and x & ~y == 0]

    def values(self) -> np.ndarray:
        """``f(X)`` for all ``2**m`` model sets."""
        if self._values is None:
            size = 1 << self.world.m
            idx = np.arange(size, dtype=np.int64)
            out = idx.copy()
            if self.policy == "table":
                for k, v in self.entries.items():
                    out[k] = v
            else:
                assigned = np.zeros(size, dtype=bool)
                for y in self.definable:
                    fy = self.base[y]
                    sel = ~assigned & ((idx & ~y) == 0) & ((fy & ~idx) == 0)
                    out[sel] = fy
                    assigned |= sel
                for y, fy in self.base.items():
                    out[y] = fy
            out.setflags(write=False)
            self._values = out
        return self._values

    def to_json_dict(self) -> dict:
        w = self.world
        items = self.base.items() if self.policy == "two-case" else self.entries.items()
        entries = [{"set": w.model_names(k), "value": w.model_names(v)} for k, v in sorted(items)]
        if self.policy == "table":
            return {"mode": "table", "entries": entries, "default": "identity"}
        return {"mode": "two-case", "entries": entries}


@dataclass
class FCModel:
    world: ModelWorld
    f: ChoiceFunction
    restricted: bool = False

    def to_json_dict(self) -> dict:
        w = self.world
        return {
            "atoms": list(w.language.atoms),
            "models": [{"name": name, "sat": w.language.names(s)} for name, s in zip(w.models, w.sat)],
            "choice": self.f.to_json_dict(),
            "restricted": self.restricted,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: Any) -> "FCModel":
        if not isinstance(data, dict):
            raise SchemaError("top level: expected an object")
        for key in ("atoms", "models", "choice"):
            if key not in data:
                raise SchemaError(f"missing field {key!r}")
        try:
            lang = AtomLanguage(data["atoms"])
        except (TypeError, ValueError) as e:
            raise SchemaError(f'"atoms": {e}') from None
        names, sats = [], []
        for i, m in enumerate(data["models"]):
            if not isinstance(m, dict) or "name" not in m or "sat" not in m:
                raise SchemaError(f'"models"[{i}]: expected {{"name", "sat"}}')
            names.append(m["name"])
            try:
                sats.append(lang.mask(m["sat"]))
            except KeyError as e:
                raise SchemaError(f'"models"[{i}].sat: {e.args[0]}') from None
        try:
            world = ModelWorld(lang, tuple(names), tuple(sats))
        except ValueError as e:
            raise SchemaError(f'"models": {e}') from None
        choice = data["choice"]
        if not isinstance(choice, dict):
            raise SchemaError('"choice": expected an object')
        mode = choice.get("mode")
        if mode not in ChoiceFunction.POLICIES:
            raise SchemaError(f'"choice".mode: expected "table" or "two-case", got {mode!r}')
        if mode == "table" and choice.get("default", "identity") != "identity":
            raise SchemaError('"choice".default: only "identity" is supported')
        entries = {}
        for i, e in enumerate(choice.get("entries", [])):
            try:
                k, v = world.model_mask(e["set"]), world.model_mask(e["value"])
            except (KeyError, TypeError) as err:
                raise SchemaError(f'"choice".entries[{i}]: {err}') from None
            if k in entries:
                raise SchemaError(f'"choice".entries[{i}]: duplicate set')
            entries[k] = v
        try:
            f = ChoiceFunction(world, entries, mode)
        except ValueError as e:
            raise SchemaError(f'"choice": {e}') from None
        return cls(world, f, bool(data.get("restricted", False)))

    @classmethod
    def from_json(cls, text: str) -> "FCModel":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON at line {e.lineno}: {e.msg}") from None
        return cls.from_json_dict(data)


def induced_consequence(fcm: FCModel) -> ConsequenceTable:
    """``C(A) = theory_of(f(mod_of(A)))`` for every ``A``."""
    world = fcm.world
    hat = world.hat_array()
    if world.m <= EXHAUSTIVE_MODELS:
        rows = world.bar_array()[fcm.f.values()[hat]].tolist()
    else:
        rows = [theory_of(world, fcm.f(int(x))) for x in hat]
    return ConsequenceTable(world.language, tuple(rows))


# ------------------------------------------------------------ choice axioms


CHOICE_AXIOMS = ("Contraction", "Local Cumulativity", "Consistency", "Coherence", "Local Monotonicity")


def check_choice_axioms(
    fcm: FCModel,
    exhaustive_limit: int = EXHAUSTIVE_MODELS,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> list[PropertyReport]:
    """Contraction, Local Cumulativity, Consistency, Coherence, Local Monotonicity.

    Exhaustive over all ``2**m`` model sets when ``m <= exhaustive_limit``.
    The pair properties are checked on single-model steps: each of them holds
    for all pairs iff it holds whenever the two sets differ by one model (a
    chain argument; ``tests/test_semantics.py`` cross-checks against a plain
    pair scan).  Above the limit, ``samples`` seeded random pairs are drawn
    and every report is labelled ``sampled``.

    A sixth report records the implication Contraction + Coherence + Local
    Monotonicity ⇒ Local Cumulativity for this model.
    """
    if fcm.world.m <= exhaustive_limit:
        reports = _choice_axioms_exhaustive(fcm.f.values(), fcm.world.m)
    else:
        reports = _choice_axioms_sampled(fcm, samples, seed)
    v = {r.name: r.holds for r in reports}
    premise = v["Contraction"] and v["Coherence"] and v["Local Monotonicity"]
    implied = PropertyReport(
        "Coherence ⇒ Local Cumulativity",
        not premise or v["Local Cumulativity"],
        None if not premise or v["Local Cumulativity"] else "premises hold, Local Cumulativity fails",
    )
    return reports + [implied]


def _first_pair(cands):
    best = None
    for x, y, bad in cands:
        idx = np.flatnonzero(bad)
        if idx.size:
            c = (int(x[idx[0]]), int(y[idx[0]]))
            if best is None or c < best:
                best = c
    return best


def _choice_axioms_exhaustive(F: np.ndarray, m: int) -> list[PropertyReport]:
    idx = np.arange(F.size, dtype=np.int64)
    out = []
    bad = np.flatnonzero(F & ~idx)
    out.append(PropertyReport("Contraction", False, (int(bad[0]),)) if bad.size else PropertyReport("Contraction", True))

    # (X, Y = X minus one model not in f(X)); only X with f(X) ⊆ X can meet the premise
    contracted = (F & ~idx) == 0
    lc, lm, coh = [], [], []
    for i in range(m):
        bit = 1 << i
        x = idx[contracted & ((idx & bit) != 0) & ((F & bit) == 0)]
        y = x ^ bit
        lc.append((x, y, F[y] != F[x]))
        lm.append((x, y, (F[y] & ~F[x]) != 0))
        big = idx[(idx & bit) != 0]
        small = big ^ bit
        coh.append((small, big, (small & F[big] & ~F[small]) != 0))
    for name, cands in (("Local Cumulativity", lc), ("Local Monotonicity", lm), ("Coherence", coh)):
        w = _first_pair(cands)
        out.append(PropertyReport(name, True) if w is None else PropertyReport(name, False, w))

    bad = np.flatnonzero((F == 0) & (idx != 0))
    out.append(PropertyReport("Consistency", False, (int(bad[0]),)) if bad.size else PropertyReport("Consistency", True))
    order = {n: i for i, n in enumerate(CHOICE_AXIOMS)}
    out.sort(key=lambda r: order[r.name])
    mode = {"mode": "exhaustive", "subsets": int(F.size)}
    return [PropertyReport(r.name, r.holds, r.witness, dict(mode)) for r in out]


def _choice_axioms_sampled(fcm: FCModel, samples: int, seed: int) -> list[PropertyReport]:
    rng = np.random.default_rng(seed)
    f = fcm.f
    full = fcm.world.all_models
    m = fcm.world.m
    found: dict[str, Any] = {name: None for name in CHOICE_AXIOMS}

    def rand_sub(mask):
        return mask & int(rng.integers(0, 1 << m))

    for _ in range(samples):
        x = int(rng.integers(0, full + 1))
        fx = f(x)
        if found["Contraction"] is None and fx & ~x:
            found["Contraction"] = (x,)
        if found["Consistency"] is None and fx == 0 and x != 0:
            found["Consistency"] = (x,)
        y = fx | rand_sub(x & ~fx)  # f(X) ⊆ Y ⊆ X when Contraction holds
        if y & ~x == 0:
            fy = f(y)
            if found["Local Cumulativity"] is None and fy != fx:
                found["Local Cumulativity"] = (x, y)
            if found["Local Monotonicity"] is None and fy & ~fx:
                found["Local Monotonicity"] = (x, y)
        sub = rand_sub(x)
        if found["Coherence"] is None and sub & fx & ~f(sub):
            found["Coherence"] = (sub, x)
    detail = {"mode": "sampled", "samples": samples, "seed": seed}
    return [PropertyReport(n, found[n] is None, found[n], dict(detail)) for n in CHOICE_AXIOMS]


def violates_choice(fcm: FCModel, name: str, witness) -> bool:
    """Replay a choice-axiom witness."""
    f = fcm.f
    if name == "Contraction":
        (x,) = witness
        return f(x) & ~x != 0
    if name == "Consistency":
        (x,) = witness
        return f(x) == 0 and x != 0
    if name in ("Local Cumulativity", "Local Monotonicity"):
        x, y = witness
        if not (f(x) & ~y == 0 and y & ~x == 0):
            return False
        return f(y) != f(x) if name == "Local Cumulativity" else f(y) & ~f(x) != 0
    if name == "Coherence":
        x, y = witness
        return x & ~y == 0 and x & f(y) & ~f(x) != 0
    raise KeyError(f"no replay rule for {name!r}")


# ------------------------------------------------------------ representation


def theory_model_name(lang: AtomLanguage, t: int) -> str:
    return "T" + lang.render(t)


def represent(table: ConsequenceTable) -> FCModel:
    """A restricted choice-function model inducing ``table``.

    Models are the consistent theories, a theory satisfies exactly its own
    atoms, and ``f(mod_of(A)) = mod_of(C(A))`` on definable sets; other sets
    use the two-case extension.  Raises :class:`~clogics.core.NotACLogic`
    when Inclusion or Cumulativity fails.
    """
    require_c_logic(table)
    lang = table.language
    ths = theories(table, consistent_only=True)
    world = ModelWorld(lang, tuple(theory_model_name(lang, t) for t in ths), tuple(ths))
    hat = world.hat_array()
    base: dict[int, int] = {}
    for a in range(lang.size):
        x = int(hat[a])
        val = int(hat[table.rows[a]])
        prev = base.setdefault(x, val)
        if prev != val:
            raise RuntimeError(
                f"f is not well defined on {world.render(x)}: {world.render(prev)} vs {world.render(val)}"
            )
    return FCModel(world, ChoiceFunction(world, base, "two-case"), restricted=True)


def f_prime_well_defined(fcm: FCModel, x: int) -> PropertyReport:
    """Every definable sandwich ``f(Y) ⊆ x ⊆ Y`` yields the same ``f(Y)``."""
    f = fcm.f
    if f.policy != "two-case":
        raise ValueError("f_prime_well_defined needs the two-case extension policy")
    ys = f.sandwiches(x)
    values = sorted({f.base[y] for y in ys})
    detail = {"case": 1 if ys else 2, "sandwiches": ys, "value": f(x)}
    if not ys:
        detail["note"] = "no definable sandwich: f'(X) = X"
    if len(values) > 1:
        return PropertyReport("f' well defined", False, (x, tuple(ys)), detail)
    if x in f.base and f(x) != f.base[x]:
        return PropertyReport("f' well defined", False, (x, tuple(ys)), detail)
    return PropertyReport("f' well defined", True, detail=detail)


def check_representation(table: ConsequenceTable) -> list[PropertyReport]:
    """Round trip and model properties of ``represent(table)``."""
    fcm = represent(table)
    back = induced_consequence(fcm)
    reports = []
    diff = [a for a in range(table.language.size) if back.rows[a] != table.rows[a]]
    reports.append(
        PropertyReport("round trip", False, (diff[0],)) if diff else PropertyReport("round trip", True)
    )
    reports += [
        r for r in check_choice_axioms(fcm) if r.name in ("Contraction", "Local Cumulativity", "Consistency")
    ]
    bh = fcm.world.bar_array()[fcm.world.hat_array()]
    cna = cn_array(table)
    bad = np.flatnonzero(bh != cna)
    reports.append(
        PropertyReport("bar(hat(A)) = Cn(A)", False, (int(bad[0]),))
        if bad.size
        else PropertyReport("bar(hat(A)) = Cn(A)", True)
    )
    return reports
