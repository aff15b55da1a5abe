"""Finite consequence operations stored as explicit tables.

Subsets of the atom language are plain ``int`` bitmasks: bit ``i`` set means
atom ``language.atoms[i]`` is in the set.  A :class:`ConsequenceTable` stores
``C(A)`` for every one of the ``2**n`` subsets.  Nothing is assumed about the
operation; every axiom is checked, and every failed check carries a witness
that can be replayed with :func:`violates`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Sequence

import numpy as np

MAX_ATOMS = 16


class SchemaError(ValueError):
    """Malformed JSON input (missing key, unknown atom, ...)."""


class NotACLogic(ValueError):
    """Raised when an operation required to be a C-logic is not one."""

    def __init__(self, axiom: str, witness: Any = None):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"not a C-logic: {axiom} fails (witness {witness!r})")


@dataclass(frozen=True)
class PropertyReport:
    """Verdict for one property.

    ``witness`` is only set on failure.  ``detail`` carries extra
    information (check mode, traces, secondary verdicts) and never affects
    the verdict.
    """

    name: str
    holds: bool
    witness: Any = None
    detail: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.holds and self.witness is not None:
            raise ValueError("a holding property cannot carry a witness")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "holds": self.holds,
            "witness": _jsonable(self.witness),
            "detail": _jsonable(self.detail),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PropertyReport":
        return cls(data["name"], data["holds"], data.get("witness"), data.get("detail", {}))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# ---------------------------------------------------------------- bit helpers


def popcount(x: int) -> int:
    return bin(x).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def submask_array(mask: int) -> np.ndarray:
    """All submasks of ``mask`` as an int64 array, ascending."""
    out = np.zeros(1, dtype=np.int64)
    for bit in iter_bits(mask):
        out = np.concatenate([out, out | (1 << bit)])
    out.sort()
    return out


# ------------------------------------------------------------------ language


@dataclass(frozen=True)
class AtomLanguage:
    atoms: tuple[str, ...]

    def __init__(self, atoms: Iterable[str]):
        atoms = tuple(atoms)
        if not atoms:
            raise ValueError("the atom language must be non-empty")
        if len(atoms) > MAX_ATOMS:
            raise ValueError(f"at most {MAX_ATOMS} atoms are supported, got {len(atoms)}")
        if len(set(atoms)) != len(atoms):
            raise ValueError("atom names must be unique")
        for a in atoms:
            if not isinstance(a, str) or not a or "," in a:
                raise ValueError(f"invalid atom name {a!r}")
        object.__setattr__(self, "atoms", atoms)

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def size(self) -> int:
        return 1 << self.n

    def index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise KeyError(f"unknown atom {name!r}") from None

    def mask(self, names: Iterable[str]) -> int:
        if isinstance(names, str):
            names = [names]
        m = 0
        for name in names:
            m |= 1 << self.index(name)
        return m

    def names(self, mask: int) -> list[str]:
        return [self.atoms[i] for i in iter_bits(mask)]

    def key(self, mask: int) -> str:
        return ",".join(self.names(mask))

    def parse_key(self, key: str) -> int:
        if key == "":
            return 0
        names = [s.strip() for s in key.split(",")]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate atom in key {key!r}")
        try:
            return self.mask(names)
        except KeyError as e:
            raise SchemaError(f"key {key!r}: {e.args[0]}") from None

    def render(self, mask: int) -> str:
        return "{" + ",".join(self.names(mask)) + "}"


# --------------------------------------------------------------------- table


@dataclass(frozen=True)
class ConsequenceTable:
    """``rows[A] = C(A)`` for every subset ``A`` of the language."""

    language: AtomLanguage
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if len(rows) != self.language.size:
            raise ValueError(f"expected {self.language.size} rows, got {len(rows)}")
        full = self.language.full
        for r in rows:
            if r & ~full:
                raise ValueError(f"row value {r} has bits outside the language")
        object.__setattr__(self, "rows", rows)

    def __call__(self, a: int) -> int:
        return self.rows[a]

    @property
    def full(self) -> int:
        return self.language.full

    def array(self) -> np.ndarray:
        arr = self.__dict__.get("_array")
        if arr is None:
            arr = np.asarray(self.rows, dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, "_array", arr)
        return arr

    @classmethod
    def from_function(cls, language: AtomLanguage, fn) -> "ConsequenceTable":
        return cls(language, tuple(fn(a) for a in range(language.size)))

    @classmethod
    def identity(cls, atoms: Sequence[str]) -> "ConsequenceTable":
        lang = AtomLanguage(atoms)
        return cls(lang, tuple(range(lang.size)))

    @classmethod
    def constant_full(cls, atoms: Sequence[str]) -> "ConsequenceTable":
        lang = AtomLanguage(atoms)
        return cls(lang, (lang.full,) * lang.size)

    def to_json_dict(self) -> dict:
        lang = self.language
        return {
            "atoms": list(lang.atoms),
            "table": {lang.key(a): lang.names(self.rows[a]) for a in range(lang.size)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: Any) -> "ConsequenceTable":
        if not isinstance(data, dict):
            raise SchemaError("top level: expected an object")
        if "atoms" not in data:
            raise SchemaError('missing field "atoms"')
        if "table" not in data:
            raise SchemaError('missing field "table"')
        atoms = data["atoms"]
        if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
            raise SchemaError('"atoms": expected a list of strings')
        try:
            lang = AtomLanguage(atoms)
        except ValueError as e:
            raise SchemaError(f'"atoms": {e}') from None
        table = data["table"]
        if not isinstance(table, dict):
            raise SchemaError('"table": expected an object')
        rows: list[int | None] = [None] * lang.size
        for key, value in table.items():
            a = lang.parse_key(key)
            if rows[a] is not None:
                raise SchemaError(f'"table": key {key!r} duplicates subset {lang.render(a)}')
            if not isinstance(value, list):
                raise SchemaError(f'"table"[{key!r}]: expected a list of atom names')
            try:
                rows[a] = lang.mask(value)
            except KeyError as e:
                raise SchemaError(f'"table"[{key!r}]: {e.args[0]}') from None
        missing = [lang.key(a) for a, r in enumerate(rows) if r is None]
        if missing:
            raise SchemaError(f'"table": missing subset key {missing[0]!r}')
        return cls(lang, tuple(rows))

    @classmethod
    def from_json(cls, text: str) -> "ConsequenceTable":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON at line {e.lineno}: {e.msg}") from None
        return cls.from_json_dict(data)


# -------------------------------------------------------------- axiom checks


def check_inclusion(table: ConsequenceTable) -> PropertyReport:
    rows = table.array()
    idx = np.arange(rows.size, dtype=np.int64)
    bad = np.flatnonzero(idx & ~rows)
    if bad.size:
        return PropertyReport("Inclusion", False, (int(bad[0]),))
    return PropertyReport("Inclusion", True)


def _one_step_pairs(table: ConsequenceTable):
    """Yield, per atom x, the arrays (A, A + x) for every A ⊆ C(A) with x in C(A) \\ A.

    Any pair ``A ⊆ B ⊆ C(A)`` is reached from ``A`` by adding the atoms of
    ``B \\ A`` one at a time; while the property holds every intermediate
    set has the same value and contains itself in it, so Cumulativity and
    Cautious Monotonicity hold over all such pairs iff they hold over these
    single-atom steps.
    """
    rows = table.array()
    idx = np.arange(rows.size, dtype=np.int64)
    closed = (idx & ~rows) == 0
    for x in range(table.language.n):
        bit = 1 << x
        a = idx[closed & ((rows & bit) != 0) & ((idx & bit) == 0)]
        yield a, a | bit


def _first_step_violation(table: ConsequenceTable, bad_fn):
    rows = table.array()
    best = None
    for a, b in _one_step_pairs(table):
        bad = bad_fn(rows[a], rows[b])
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            cand = (int(a[i]), int(b[i]))
            if best is None or cand < best:
                best = cand
    return best


def check_cumulativity(table: ConsequenceTable) -> PropertyReport:
    """``A ⊆ B ⊆ C(A) ⇒ C(A) = C(B)`` over every pair."""
    w = _first_step_violation(table, lambda ca, cb: ca != cb)
    if w is None:
        return PropertyReport("Cumulativity", True)
    return PropertyReport("Cumulativity", False, w)


def check_cautious_monotonicity(table: ConsequenceTable) -> PropertyReport:
    w = _first_step_violation(table, lambda ca, cb: (ca & ~cb) != 0)
    if w is None:
        return PropertyReport("Cautious Monotonicity", True)
    return PropertyReport("Cautious Monotonicity", False, w)


def check_idempotence(table: ConsequenceTable) -> PropertyReport:
    rows = table.array()
    bad = np.flatnonzero(rows[rows] != rows)
    if bad.size:
        return PropertyReport("Idempotence", False, (int(bad[0]),))
    return PropertyReport("Idempotence", True)


def check_two_loop(table: ConsequenceTable) -> PropertyReport:
    """``A ⊆ C(B), B ⊆ C(A) ⇒ C(A) = C(B)``.

    For each ``A`` only the ``B ⊆ C(A)`` are visited; cost is the sum of
    ``2**|C(A)|``, at most ``4**n``.
    """
    rows = table.array()
    for a in range(rows.size):
        ca = int(rows[a])
        bs = submask_array(ca)
        cb = rows[bs]
        bad = ((a & ~cb) == 0) & (cb != ca)
        if bad.any():
            return PropertyReport("2-Loop", False, (a, int(bs[np.flatnonzero(bad)[0]])))
    return PropertyReport("2-Loop", True)


C_AXIOMS = ("Inclusion", "Cumulativity", "Idempotence", "Cautious Monotonicity", "2-Loop")


def check_c_axioms(table: ConsequenceTable) -> list[PropertyReport]:
    """Inclusion, Cumulativity, Idempotence, Cautious Monotonicity, 2-Loop.

    A C-logic is Inclusion + Cumulativity; equivalently Inclusion +
    Idempotence + Cautious Monotonicity, or Inclusion + 2-Loop.
    """
    return [
        check_inclusion(table),
        check_cumulativity(table),
        check_idempotence(table),
        check_cautious_monotonicity(table),
        check_two_loop(table),
    ]


def is_c_logic(table: ConsequenceTable) -> bool:
    return check_inclusion(table).holds and check_cumulativity(table).holds


def require_c_logic(table: ConsequenceTable) -> None:
    for report in (check_inclusion(table), check_cumulativity(table)):
        if not report.holds:
            raise NotACLogic(report.name, report.witness)


def weak_compactness(table: ConsequenceTable) -> PropertyReport:
    # every subset of a finite language is finite, so B = A always works
    return PropertyReport("Weak Compactness", True, detail={"note": "holds (finite language)"})


def axiomatization_verdicts(reports: Sequence[PropertyReport]) -> dict[str, bool]:
    """The three equivalent axiomatizations of C-logics, from check_c_axioms output."""
    v = {r.name: r.holds for r in reports}
    return {
        "inclusion+cumulativity": v["Inclusion"] and v["Cumulativity"],
        "inclusion+idempotence+cautious-monotonicity": v["Inclusion"]
        and v["Idempotence"]
        and v["Cautious Monotonicity"],
        "inclusion+2-loop": v["Inclusion"] and v["2-Loop"],
    }


# ---------------------------------------------------------------------- loop


def _succ_sets(table: ConsequenceTable) -> list[int]:
    """``succ[X]`` = bitmask over subsets Y with X ⊆ C(Y)."""
    rows = table.rows
    size = len(rows)
    succ = [0] * size
    for y, cy in enumerate(rows):
        bit = 1 << y
        for x in submasks(cy):
            succ[x] |= bit
    return succ


def _walk_sets(succ: list[int], steps: int) -> list[list[int]]:
    """``walks[k][X]`` = bitmask over vertices reachable from X in exactly k steps."""
    size = len(succ)
    walks = [[1 << x for x in range(size)]]
    for _ in range(steps):
        prev = walks[-1]
        nxt = []
        for x in range(size):
            acc = 0
            s = succ[x]
            for y in iter_bits(s):
                acc |= prev[y]
            nxt.append(acc)
        walks.append(nxt)
    return walks


def _rebuild_walk(succ, walks, start: int, end: int, length: int) -> list[int]:
    path = [start]
    cur = start
    for k in range(length, 0, -1):
        for y in iter_bits(succ[cur]):
            if walks[k - 1][y] >> end & 1:
                cur = y
                break
        else:  # pragma: no cover
            raise AssertionError("walk reconstruction failed")
        path.append(cur)
    return path


def check_loop(
    table: ConsequenceTable,
    max_n: int = 4,
    samples: int | None = None,
    seed: int = 0,
) -> PropertyReport:
    """Loop for every cycle length ``2 <= n <= max_n``.

    A cycle is ``A_0, ..., A_{n-1}`` with ``A_i ⊆ C(A_{i+1})`` (indices mod
    n); subsets may repeat.  The literal conclusion ``C(A_0) = C(A_1)`` is
    checked over every cycle (hence every rotation), and separately the
    all-pairs conclusion ``C(A_i) = C(A_j)``; both verdicts are recorded in
    ``detail``.  At ``n = 2`` Loop is exactly 2-Loop.

    With ``samples`` set, random cycles are drawn instead of enumerating
    them and the report is labelled ``sampled``.
    """
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    if samples is not None:
        return _check_loop_sampled(table, max_n, samples, seed)
    rows = table.rows
    succ = _succ_sets(table)
    walks = _walk_sets(succ, max_n - 1)
    size = len(rows)

    witness = None
    for n in range(2, max_n + 1):
        for a0 in range(size):
            for a1 in iter_bits(succ[a0]):
                if rows[a0] != rows[a1] and walks[n - 1][a1] >> a0 & 1:
                    witness = tuple(_rebuild_walk(succ, walks, a1, a0, n - 1)[:-1])
                    witness = (a0,) + witness
                    break
            if witness:
                break
        if witness:
            break

    # all-pairs form: X reaches Y in i steps, Y reaches X in n - i steps
    pairs_violation = None
    for n in range(2, max_n + 1):
        for i in range(1, n):
            for x in range(size):
                for y in iter_bits(walks[i][x]):
                    if rows[x] != rows[y] and walks[n - i][y] >> x & 1:
                        pairs_violation = (n, x, y)
                        break
                if pairs_violation:
                    break
            if pairs_violation:
                break
        if pairs_violation:
            break

    detail = {
        "mode": "exhaustive",
        "max_n": max_n,
        "consecutive_form_holds": witness is None,
        "all_pairs_form_holds": pairs_violation is None,
        "note": "cycle length 2 is the 2-Loop property",
    }
    if witness is None:
        return PropertyReport("Loop", True, detail=detail)
    detail["cycle_length"] = len(witness)
    return PropertyReport("Loop", False, witness, detail)


def _check_loop_sampled(table, max_n, samples, seed) -> PropertyReport:
    rng = np.random.default_rng(seed)
    rows = table.rows
    succ = [list(iter_bits(s)) for s in _succ_sets(table)]
    size = len(rows)
    for _ in range(samples):
        n = int(rng.integers(2, max_n + 1))
        cycle = [int(rng.integers(size))]
        for _ in range(n - 1):
            nxt = succ[cycle[-1]]
            cycle.append(nxt[int(rng.integers(len(nxt)))])
        if cycle[0] in succ[cycle[-1]] and len({rows[c] for c in cycle}) > 1:
            # rotate so that C(A_0) != C(A_1)
            k = next(i for i in range(n) if rows[cycle[i]] != rows[cycle[(i + 1) % n]])
            cycle = cycle[k:] + cycle[:k]
            return PropertyReport(
                "Loop", False, tuple(cycle), {"mode": "sampled", "samples": samples, "seed": seed}
            )
    return PropertyReport("Loop", True, detail={"mode": "sampled", "samples": samples, "seed": seed})


# ------------------------------------------------------------------- replay


def violates(table: ConsequenceTable, name: str, witness) -> bool:
    """Re-evaluate ``name`` on ``witness``; True iff the witness is a genuine violation."""
    C = table.rows
    if name == "Inclusion":
        (a,) = witness
        return (a & ~C[a]) != 0
    if name == "Idempotence":
        (a,) = witness
        return C[C[a]] != C[a]
    if name in ("Cumulativity", "Cautious Monotonicity"):
        a, b = witness
        if not ((a & ~b) == 0 and (b & ~C[a]) == 0):
            return False
        if name == "Cumulativity":
            return C[a] != C[b]
        return (C[a] & ~C[b]) != 0
    if name == "2-Loop":
        a, b = witness
        return (a & ~C[b]) == 0 and (b & ~C[a]) == 0 and C[a] != C[b]
    if name == "Loop":
        cyc = list(witness)
        n = len(cyc)
        if n < 2:
            return False
        closed = all((cyc[i] & ~C[cyc[(i + 1) % n]]) == 0 for i in range(n))
        return closed and C[cyc[0]] != C[cyc[1]]
    raise KeyError(f"no replay rule for {name!r}")


# ---------------------------------------------------------- theories and Cn


def is_consistent(table: ConsequenceTable, a: int) -> bool:
    return table.rows[a] != table.full


def theories(table: ConsequenceTable, consistent_only: bool = False) -> list[int]:
    full = table.full
    return [
        t for t, ct in enumerate(table.rows) if ct == t and not (consistent_only and t == full)
    ]


def cn_array(table: ConsequenceTable) -> np.ndarray:
    """``Cn(A)`` for every ``A``: the meet of all theories containing ``A``."""
    size = table.language.size
    idx = np.arange(size, dtype=np.int64)
    out = np.full(size, table.full, dtype=np.int64)
    for t in theories(table):
        sel = (idx & ~t) == 0
        out[sel] &= t
    return out


def cn(table: ConsequenceTable, a: int) -> int:
    out = table.full
    for t in theories(table):
        if a & ~t == 0:
            out &= t
    return out


CN_LEMMAS = (
    "A ⊆ Cn(A) ⊆ C(A)",
    "Cn(C(A)) = C(A)",
    "C(Cn(A)) = C(A)",
    "Cn idempotent",
    "Cn monotone",
    "C(A) = L iff Cn(A) = L",
)


def check_cn_lemmas(table: ConsequenceTable) -> list[PropertyReport]:
    """Laws linking ``Cn`` to ``C``; witnesses are premise sets ``(A,)``.

    Monotonicity is scanned over one-atom extensions, which chain to every
    superset.
    """
    rows = table.array()
    cna = cn_array(table)
    idx = np.arange(rows.size, dtype=np.int64)
    full = table.full
    bad = {
        CN_LEMMAS[0]: ((idx & ~cna) != 0) | ((cna & ~rows) != 0),
        CN_LEMMAS[1]: cna[rows] != rows,
        CN_LEMMAS[2]: rows[cna] != rows,
        CN_LEMMAS[3]: cna[cna] != cna,
        CN_LEMMAS[4]: np.zeros(rows.size, dtype=bool),
        CN_LEMMAS[5]: (rows == full) != (cna == full),
    }
    for x in range(table.language.n):
        bad[CN_LEMMAS[4]] |= (cna & ~cna[idx | (1 << x)]) != 0
    out = []
    for name in CN_LEMMAS:
        hits = np.flatnonzero(bad[name])
        out.append(PropertyReport(name, hits.size == 0, (int(hits[0]),) if hits.size else None))
    return out


def maximal_consistent_sets(table: ConsequenceTable) -> list[int]:
    """Consistent sets all of whose strict supersets are inconsistent."""
    full = table.full
    rows = table.rows
    out = []
    for a in range(table.language.size):
        if rows[a] == full:
            continue
        rest = full & ~a
        # cheap one-atom filter first, then every strict superset
        if all(rows[a | (1 << x)] == full for x in iter_bits(rest)) and all(
            rows[a | s] == full for s in submasks(rest) if s
        ):
            out.append(a)
    return out


def maximal_consistent_theory_violations(table: ConsequenceTable) -> list[int]:
    """Maximal consistent sets that are not theories (empty on any C-logic)."""
    return [a for a in maximal_consistent_sets(table) if table.rows[a] != a]


# ------------------------------------------------------------- theory order


@dataclass(frozen=True)
class TheoryPoset:
    table: ConsequenceTable
    theories: tuple[int, ...]
    leq: np.ndarray
    lt: np.ndarray
    lt_plus: np.ndarray

    def index(self, t: int) -> int:
        return self.theories.index(t)

    def lt_plus_irreflexive(self) -> PropertyReport:
        diag = np.flatnonzero(np.diag(self.lt_plus))
        if diag.size == 0:
            return PropertyReport("<+ irreflexive", True)
        i = int(diag[0])
        return PropertyReport("<+ irreflexive", False, tuple(self._lt_cycle(i)))

    def _lt_cycle(self, i: int) -> list[int]:
        # BFS along < from i back to i
        n = len(self.theories)
        parent = {}
        frontier = [i]
        seen = set()
        while frontier:
            nxt = []
            for u in frontier:
                for v in np.flatnonzero(self.lt[u]):
                    v = int(v)
                    if v == i:
                        path = [u]
                        while path[-1] != i:
                            path.append(parent[path[-1]])
                        return [self.theories[k] for k in reversed(path)]
                    if v not in seen:
                        seen.add(v)
                        parent[v] = u
                        nxt.append(v)
            frontier = nxt
        raise AssertionError(f"no < cycle through theory {i} of {n}")  # pragma: no cover

    def leq_cycles_collapse(self, max_len: int) -> PropertyReport:
        """Every ``≤``-cycle ``T_0 ≤ T_1 ≤ ... ≤ T_0`` of length ``<= max_len`` is constant."""
        leq = self.leq
        n = len(self.theories)
        # reach[k][i, j]: a ≤-walk of exactly k steps from i to j
        reach = [np.eye(n, dtype=bool)]
        for _ in range(max_len - 1):
            reach.append((reach[-1].astype(np.int64) @ leq.astype(np.int64)) > 0)
        for length in range(2, max_len + 1):
            for i in range(n):
                for j in np.flatnonzero(leq[i]):
                    j = int(j)
                    if i != j and reach[length - 1][j, i]:
                        cyc = [i, j]
                        cur = j
                        for k in range(length - 1, 1, -1):
                            for nb in np.flatnonzero(leq[cur]):
                                if reach[k - 1][int(nb), i]:
                                    cur = int(nb)
                                    break
                            cyc.append(cur)
                        return PropertyReport(
                            "≤-cycles collapse",
                            False,
                            tuple(self.theories[k] for k in cyc),
                            {"max_len": max_len},
                        )
        return PropertyReport("≤-cycles collapse", True, detail={"max_len": max_len})


def theory_order(table: ConsequenceTable) -> TheoryPoset:
    ths = theories(table)
    pos = {t: i for i, t in enumerate(ths)}
    n = len(ths)
    leq = np.zeros((n, n), dtype=bool)
    rows = table.array()
    for j, s in enumerate(ths):
        for val in np.unique(rows[submask_array(s)]):
            i = pos.get(int(val))
            if i is not None:
                leq[i, j] = True
    lt = leq & ~np.eye(n, dtype=bool)
    plus = lt.copy()
    for k in range(n):
        plus |= plus[:, k : k + 1] & plus[k : k + 1, :]
    for arr in (leq, lt, plus):
        arr.setflags(write=False)
    return TheoryPoset(table, tuple(ths), leq, lt, plus)
