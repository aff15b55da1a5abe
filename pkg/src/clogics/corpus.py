"""Seeded random instance generators.

All randomness comes from ``numpy.random.Generator`` (PCG64) seeded with one
64-bit integer, so a seed fixes the corpus exactly within this build.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AtomLanguage, ConsequenceTable, is_c_logic, popcount
from .semantics import ChoiceFunction, FCModel, ModelWorld, definable_sets, induced_consequence

RNG_ALGORITHM = "numpy.random.PCG64"
MODES = ("fc-model", "rejection", "quantum")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def atom_names(n: int) -> list[str]:
    return [chr(ord("a") + i) for i in range(n)]


@dataclass(frozen=True)
class CorpusSpec:
    seed: int
    atoms: int
    count: int
    mode: str

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.count <= 0:
            raise ValueError("count must be positive")
        if not 1 <= self.atoms <= 8:
            raise ValueError("atom count must be between 1 and 8 for exhaustive suites")
        if self.mode == "quantum" and self.atoms > 4:
            raise ValueError("quantum corpora use at most 4 atoms")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


# ------------------------------------------------------------------- tables


def uniform_table(rng: np.random.Generator, lang: AtomLanguage) -> ConsequenceTable:
    """Every row drawn uniformly from all subsets."""
    rows = rng.integers(0, lang.size, size=lang.size)
    return ConsequenceTable(lang, tuple(int(r) for r in rows))


def inclusive_table(rng: np.random.Generator, lang: AtomLanguage) -> ConsequenceTable:
    """Every row ``C(A)`` drawn uniformly from the supersets of ``A``."""
    rows = rng.integers(0, lang.size, size=lang.size)
    return ConsequenceTable(lang, tuple(a | int(r) for a, r in enumerate(rows)))


@dataclass
class RejectionStats:
    draws: int = 0
    accepted: int = 0

    @property
    def rate(self) -> float:
        return self.accepted / self.draws if self.draws else 0.0


def rejection_c_logics(
    rng: np.random.Generator,
    n: int,
    count: int,
    max_draws: int = 10**6,
    stats: RejectionStats | None = None,
):
    """Yield up to ``count`` C-logics on ``n`` atoms by rejection sampling.

    Candidates satisfy Inclusion by construction (rows are random supersets)
    and are kept iff they also pass Cumulativity.
    """
    lang = AtomLanguage(atom_names(n))
    stats = stats if stats is not None else RejectionStats()
    got = 0
    while got < count and stats.draws < max_draws:
        stats.draws += 1
        t = inclusive_table(rng, lang)
        if is_c_logic(t):
            stats.accepted += 1
            got += 1
            yield t


# ---------------------------------------------------------------- fC-models


def random_world(rng: np.random.Generator, n: int, max_models: int = 6) -> ModelWorld:
    lang = AtomLanguage(atom_names(n))
    m = int(rng.integers(0, max_models + 1))
    sat = tuple(int(s) for s in rng.integers(0, lang.size, size=m))
    return ModelWorld(lang, tuple(f"m{i}" for i in range(m)), sat)


def _random_subset(rng, mask: int) -> int:
    return mask & int(rng.integers(0, 1 << max(mask.bit_length(), 1)))


def random_definable_choice(rng: np.random.Generator, world: ModelWorld, tries: int = 20) -> dict[int, int]:
    """Values on definable sets satisfying Contraction and Local Cumulativity
    among definable sets.

    Sets are assigned from largest to smallest; a set sandwiched between an
    assigned ``Y`` and ``f(Y)`` inherits ``f(Y)``, any other set gets a random
    subset of itself.  Conflicting inheritances restart the draw; after
    ``tries`` restarts the identity is returned.
    """
    defs = sorted(definable_sets(world), key=lambda x: (-popcount(x), x))
    for _ in range(tries):
        f: dict[int, int] = {}
        ok = True
        for x in defs:
            forced = {f[y] for y in f if f[y] & ~x == 0 and x & ~y == 0}
            if len(forced) > 1:
                ok = False
                break
            if forced:
                f[x] = forced.pop()
            elif x and rng.random() < 0.7:
                # nonempty random subset, so restricted models are common
                v = _random_subset(rng, x)
                f[x] = v if v else x
            else:
                f[x] = x
        if ok:
            return f
    return {x: x for x in defs}


def random_fc_model(rng: np.random.Generator, n: int, max_models: int = 6) -> FCModel:
    world = random_world(rng, n, max_models)
    base = random_definable_choice(rng, world)
    f = ChoiceFunction(world, base, "two-case")
    restricted = all(v != 0 or k == 0 for k, v in base.items())
    return FCModel(world, f, restricted)


def fc_model_c_logics(rng: np.random.Generator, n: int, count: int):
    for _ in range(count):
        fcm = random_fc_model(rng, n)
        yield fcm, induced_consequence(fcm)


def mixed_c_logic_corpus(seed: int, sizes: dict[int, int]) -> list[ConsequenceTable]:
    """C-logics from both generators: ``sizes[n]`` tables of each kind at ``n`` atoms."""
    rng = make_rng(seed)
    out = []
    for n, count in sorted(sizes.items()):
        out.extend(t for _, t in fc_model_c_logics(rng, n, count))
        out.extend(rejection_c_logics(rng, n, count))
    return out


# ------------------------------------------------------------------ quantum


def random_quantum_instance(rng: np.random.Generator, max_dim: int = 4, max_atoms: int = 4):
    """Subspaces spanned by small integer vectors, so that memberships and
    nontrivial intersections occur often and are decided far from tolerance."""
    from .quantum import QuantumInstance

    d = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(1, max_atoms + 1))

    def vec():
        while True:
            v = rng.integers(-1, 2, size=d).astype(float)
            if np.any(v):
                return v

    pool = [vec() for _ in range(d + 2)]
    subspaces = {}
    for name in atom_names(n):
        r = int(rng.integers(0, d + 1))
        picks = rng.choice(len(pool), size=r, replace=True) if r else []
        subspaces[name] = [pool[i].tolist() for i in picks]
    # state: a pool vector or a sum of two
    h = pool[int(rng.integers(len(pool)))]
    if rng.random() < 0.5:
        h = h + pool[int(rng.integers(len(pool)))]
    if not np.any(h):
        h = pool[0]
    return QuantumInstance.from_json_dict({"dim": d, "state": h.tolist(), "subspaces": subspaces})
