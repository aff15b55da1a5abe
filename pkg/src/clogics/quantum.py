"""Consequence from a state vector and a language of subspaces.

Real finite-dimensional spaces only.  Subspaces are stored by an orthonormal
basis; rank decisions use a singular-value threshold relative to the largest
singular value, and membership uses a tolerance relative to the vector norm.

``b ∈ C(A)`` iff the projection of the state onto the intersection of the
subspaces of ``A`` lies in ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import (
    AtomLanguage,
    ConsequenceTable,
    PropertyReport,
    SchemaError,
    check_c_axioms,
    check_loop,
    iter_bits,
)

RANK_THRESHOLD = 1e-10
DEFAULT_TOLERANCE = 1e-9
MAX_DIM = 8


@dataclass(frozen=True, eq=False)
class Subspace:
    dim: int
    onb: np.ndarray  # dim x rank, orthonormal columns

    @property
    def rank(self) -> int:
        return self.onb.shape[1]

    def projector(self) -> np.ndarray:
        return self.onb @ self.onb.T

    def same_span(self, other: "Subspace", tol: float = 1e-9) -> bool:
        return (
            self.dim == other.dim
            and self.rank == other.rank
            and bool(np.linalg.norm(self.projector() - other.projector()) <= tol)
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, rank={self.rank})"


def _range_basis(mat: np.ndarray, dim: int) -> np.ndarray:
    if mat.size == 0:
        return np.zeros((dim, 0))
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((dim, 0))
    return u[:, s > RANK_THRESHOLD * s[0]]


def orthonormalize(vectors: Sequence[Sequence[float]], dim: int | None = None) -> Subspace:
    """Orthonormal basis of the span of ``vectors``; no vectors gives ``{0}``."""
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if dim is None:
        if not vecs:
            raise ValueError("dim is required when no vectors are given")
        dim = vecs[0].size
    if any(v.shape != (dim,) for v in vecs):
        raise ValueError("all vectors must have the same dimension")
    mat = np.column_stack(vecs) if vecs else np.zeros((dim, 0))
    return Subspace(dim, _range_basis(mat, dim))


def full_space(dim: int) -> Subspace:
    return Subspace(dim, np.eye(dim))


def zero_space(dim: int) -> Subspace:
    return Subspace(dim, np.zeros((dim, 0)))


def _check_dim(s: Subspace, v: np.ndarray):
    if v.shape != (s.dim,):
        raise ValueError(f"vector of dimension {v.shape[0]} against subspace of dimension {s.dim}")


def project(s: Subspace, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    _check_dim(s, v)
    return s.onb @ (s.onb.T @ v)


def residual(s: Subspace, v) -> float:
    v = np.asarray(v, dtype=float)
    return float(np.linalg.norm(v - project(s, v)))


def member(s: Subspace, v, tol: float = DEFAULT_TOLERANCE) -> bool:
    v = np.asarray(v, dtype=float)
    return residual(s, v) <= tol * max(1.0, float(np.linalg.norm(v)))


def intersect(subspaces: Sequence[Subspace], dim: int | None = None) -> Subspace:
    """Common kernel of the stacked complement projectors; no inputs gives the full space."""
    if not subspaces:
        if dim is None:
            raise ValueError("dim is required for the empty intersection")
        return full_space(dim)
    d = subspaces[0].dim
    if any(s.dim != d for s in subspaces) or (dim is not None and dim != d):
        raise ValueError("subspaces of different dimensions")
    if len(subspaces) == 1:
        return subspaces[0]
    stacked = np.vstack([np.eye(d) - s.projector() for s in subspaces])
    _, s, vt = np.linalg.svd(stacked)
    # singular values of complement projectors sit near 0 or 1, so the
    # threshold never drops below unit scale; rows past the rank span the kernel
    rank = int(np.sum(s > RANK_THRESHOLD * max(1.0, s[0])))
    return Subspace(d, vt[rank:].T.copy())


def orthocomplement(s: Subspace) -> Subspace:
    if s.rank == 0:
        return full_space(s.dim)
    u, _, _ = np.linalg.svd(s.onb, full_matrices=True)
    return Subspace(s.dim, u[:, s.rank :].copy())


# ----------------------------------------------------------------- instance


@dataclass(frozen=True, eq=False)
class QuantumInstance:
    dim: int
    state: np.ndarray
    language: AtomLanguage
    subspaces: tuple[Subspace, ...]
    tolerance: float = DEFAULT_TOLERANCE
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise SchemaError(f"dim must be between 1 and {MAX_DIM}")
        if self.state.shape != (self.dim,):
            raise SchemaError("state: dimension mismatch")
        if not np.all(np.isfinite(self.state)):
            raise SchemaError("state: entries must be finite")
        if not self.tolerance > 0:
            raise SchemaError("tolerance must be positive")
        if float(np.linalg.norm(self.state)) <= self.tolerance:
            raise SchemaError("state: must be a nonzero vector")
        if len(self.subspaces) != self.language.n:
            raise SchemaError("one subspace per atom is required")
        if any(s.dim != self.dim for s in self.subspaces):
            raise SchemaError("subspaces: dimension mismatch")

    @classmethod
    def build(cls, state, subspaces: Mapping[str, Subspace], tolerance: float = DEFAULT_TOLERANCE):
        state = np.asarray(state, dtype=float)
        lang = AtomLanguage(subspaces)
        return cls(state.size, state, lang, tuple(subspaces.values()), tolerance)

    @classmethod
    def from_json_dict(cls, data) -> "QuantumInstance":
        if not isinstance(data, dict):
            raise SchemaError("instance must be a JSON object")
        for key in ("dim", "state", "subspaces"):
            if key not in data:
                raise SchemaError(f"missing field {key!r}")
        dim = data["dim"]
        if not isinstance(dim, int) or isinstance(dim, bool) or not 1 <= dim <= MAX_DIM:
            raise SchemaError(f"dim: must be an integer between 1 and {MAX_DIM}")
        tol = data.get("tolerance", DEFAULT_TOLERANCE)
        if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol > 0:
            raise SchemaError("tolerance: must be a positive number")
        state = _vector(data["state"], dim, "state")
        subs = data["subspaces"]
        if not isinstance(subs, dict) or not subs:
            raise SchemaError("subspaces: must be a non-empty object")
        spaces = {}
        for name, vecs in subs.items():
            if not isinstance(vecs, list):
                raise SchemaError(f"subspaces.{name}: must be a list of vectors")
            rows = [_vector(v, dim, f"subspaces.{name}[{i}]") for i, v in enumerate(vecs)]
            spaces[name] = orthonormalize(rows, dim)
        try:
            lang = AtomLanguage(spaces)
        except ValueError as e:
            raise SchemaError(f"subspaces: {e}") from None
        return cls(dim, state, lang, tuple(spaces.values()), float(tol))

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "state": self.state.tolist(),
            "tolerance": self.tolerance,
            "subspaces": {
                name: s.onb.T.tolist() for name, s in zip(self.language.atoms, self.subspaces)
            },
        }

    def extend(self, name: str, s: Subspace) -> "QuantumInstance":
        spaces = dict(zip(self.language.atoms, self.subspaces))
        spaces[name] = s
        return QuantumInstance.build(self.state, spaces, self.tolerance)

    def subspace(self, atom: str) -> Subspace:
        return self.subspaces[self.language.index(atom)]

    def meet(self, a: int) -> Subspace:
        """``A*`` for the atom set ``a``."""
        hit = self._cache.get(a)
        if hit is None:
            hit = intersect([self.subspaces[i] for i in iter_bits(a)], self.dim)
            self._cache[a] = hit
        return hit

    def projected_state(self, a: int) -> np.ndarray:
        return project(self.meet(a), self.state)

    def distance(self, a: int) -> float:
        return float(np.linalg.norm(self.state - self.projected_state(a)))


def _vector(v, dim: int, where: str) -> np.ndarray:
    if not isinstance(v, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    ):
        raise SchemaError(f"{where}: must be a list of numbers")
    if len(v) != dim:
        raise SchemaError(f"{where}: dimension mismatch (expected {dim}, got {len(v)})")
    arr = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{where}: entries must be finite")
    return arr


# -------------------------------------------------------------- consequence


def quantum_consequence(q: QuantumInstance, a: int) -> int:
    x = q.projected_state(a)
    return sum(1 << i for i, s in enumerate(q.subspaces) if member(s, x, q.tolerance))


def quantum_table(q: QuantumInstance) -> ConsequenceTable:
    return ConsequenceTable(q.language, tuple(quantum_consequence(q, a) for a in range(q.language.size)))


def check_quantum_table(q: QuantumInstance, max_loop: int = 4) -> list[PropertyReport]:
    t = quantum_table(q)
    return check_c_axioms(t) + [check_loop(t, max_loop), check_bca(q, t)]


def check_bca(q: QuantumInstance, table: ConsequenceTable | None = None) -> PropertyReport:
    """For ``B ⊆ C(A)``: the state projects to the same vector on ``A*`` and on
    ``A* ∩ B*``, and ``d(h, A*) ≥ d(h, B*)``."""
    table = table or quantum_table(q)
    tol = q.tolerance * max(1.0, float(np.linalg.norm(q.state)))
    pairs = 0
    for a in range(table.language.size):
        pa = q.projected_state(a)
        da = q.distance(a)
        for b in _submasks(table.rows[a]):
            pairs += 1
            if float(np.linalg.norm(pa - q.projected_state(a | b))) > tol:
                return PropertyReport("distance monotonicity", False, (a, b), {"failed": "projection"})
            if da < q.distance(b) - tol:
                return PropertyReport("distance monotonicity", False, (a, b), {"failed": "distance"})
    return PropertyReport("distance monotonicity", True, detail={"pairs": pairs})


def _submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def check_conjunction_rule(q: QuantumInstance) -> PropertyReport:
    """``C(A ∪ {a, b}) = C(A ∪ {a∧b})`` with ``a∧b`` added as the intersected subspace."""
    n = q.language.n
    for i in range(n):
        for j in range(i + 1, n):
            a, b = q.language.atoms[i], q.language.atoms[j]
            ext = q.extend(f"{a}∧{b}", intersect([q.subspaces[i], q.subspaces[j]]))
            t = quantum_table(ext)
            top = 1 << n
            for base in range(1 << n):
                if t.rows[base | 1 << i | 1 << j] != t.rows[base | top]:
                    return PropertyReport("∧-R", False, (q.language.render(base), a, b))
    return PropertyReport("∧-R", True)


# -------------------------------------------------------------------- demos


def negation_failure_demo(q: QuantumInstance, a: str, b: str) -> PropertyReport:
    """Orthocomplement as negation: ¬-R1 holds, ¬-R2 is tested on ``({a}, b)``.

    ¬-R2 asks that ``C({a, ¬b}) = L`` imply ``b ∈ C({a})``; the report holds
    iff this instance of it does.
    """
    ib = q.language.index(b)
    neg = f"¬{b}"
    ext = q.extend(neg, orthocomplement(q.subspaces[ib]))
    lang = ext.language
    ma, mb, mneg = lang.mask([a]), lang.mask([b]), lang.mask([neg])
    c_a = quantum_consequence(ext, ma)
    c_a_neg = quantum_consequence(ext, ma | mneg)
    premise = c_a_neg == lang.full
    conclusion = bool(c_a & mb)
    r1 = _negation_r1(q)

    # distance of every decisive residual from the tolerance
    tol = q.tolerance
    x = ext.projected_state(ma)
    xn = ext.projected_state(ma | mneg)
    true_res = [residual(s, xn) / max(1.0, float(np.linalg.norm(xn))) for s in ext.subspaces]
    res_b = residual(ext.subspaces[lang.index(b)], x) / max(1.0, float(np.linalg.norm(x)))
    true_res.append(residual(ext.subspaces[lang.index(a)], x) / max(1.0, float(np.linalg.norm(x))))
    worst_true = max(true_res)
    if conclusion:
        margin_b = tol / res_b if res_b > 0 else float("inf")
    else:
        margin_b = res_b / tol
    margin_true = tol / worst_true if worst_true > 0 else float("inf")
    detail = {
        "C(a,¬b)": lang.render(c_a_neg),
        "C(a)": lang.render(c_a),
        "C(a,¬b) = L": premise,
        "b in C(a)": conclusion,
        "¬-R1": r1.holds,
        "residual of b": res_b,
        "largest accepted residual": worst_true,
        "margin": min(margin_b, margin_true),
    }
    holds = conclusion or not premise
    return PropertyReport("¬-R2", holds, None if holds else ([a], b), detail)


def _negation_r1(q: QuantumInstance) -> PropertyReport:
    """``C(A ∪ {x, ¬x}) = L`` for every atom ``x`` and premise set ``A``."""
    for i, x in enumerate(q.language.atoms):
        neg = f"¬{x}"
        ext = q.extend(neg, orthocomplement(q.subspaces[i]))
        t = quantum_table(ext)
        pair = 1 << i | 1 << ext.language.index(neg)
        for base in range(ext.language.size):
            if t.rows[base | pair] != t.full:
                return PropertyReport("¬-R1", False, (ext.language.render(base), x))
    return PropertyReport("¬-R1", True)


def span(subspaces: Iterable[Subspace]) -> Subspace:
    subs = list(subspaces)
    return orthonormalize([c for s in subs for c in s.onb.T], subs[0].dim)


def span_disjunction_demo(q: QuantumInstance, premises: Sequence[str], b: str, c: str) -> list[PropertyReport]:
    """``b∨c`` read as the span of ``b`` and ``c``: ∨-R2 and distributivity."""
    ext = q.extend(f"{b}∨{c}", span([q.subspace(b), q.subspace(c)]))
    lang = ext.language
    base = lang.mask(premises)
    t = quantum_table(ext)
    cb = t.rows[base | lang.mask([b])]
    cc = t.rows[base | lang.mask([c])]
    cor = t.rows[base | lang.mask([f"{b}∨{c}"])]
    lost = cb & cc & ~cor
    r2 = PropertyReport(
        "∨-R2",
        lost == 0,
        None if lost == 0 else (list(premises), b, c, lang.atoms[next(iter_bits(lost))]),
        {"C(A,b)": lang.render(cb), "C(A,c)": lang.render(cc), "C(A,b∨c)": lang.render(cor)},
    )
    # a ∧ (b ∨ c) against (a ∧ b) ∨ (a ∧ c) with a the meet of the premises
    pa = q.meet(q.language.mask(premises))
    left = intersect([pa, span([q.subspace(b), q.subspace(c)])])
    right = span([intersect([pa, q.subspace(b)]), intersect([pa, q.subspace(c)])])
    same = left.same_span(right, q.tolerance)
    dist = PropertyReport(
        "distributivity",
        same,
        None if same else (list(premises), b, c),
        {"left rank": left.rank, "right rank": right.rank},
    )
    return [r2, dist]
