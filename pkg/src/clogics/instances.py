"""Named built-in instances used by the CLI ``examples`` command and the tests."""

from __future__ import annotations

from .semantics import ChoiceFunction, FCModel, ModelWorld


def disjunction_world() -> ModelWorld:
    """Atoms a, b, c, d; models m ⊨ a,c;  n ⊨ a,d;  p ⊨ b,c."""
    return ModelWorld.from_names(
        ["a", "b", "c", "d"],
        {"m": ["a", "c"], "n": ["a", "d"], "p": ["b", "c"]},
    )


def disjunction_model() -> FCModel:
    """Identity choice except ``f({m, n}) = {m}``.

    Satisfies Contraction and Local Cumulativity but not Coherence, and has
    no proper disjunction: c follows from a and from b but not from a∨b.
    """
    w = disjunction_world()
    f = ChoiceFunction(w, {w.model_mask(["m", "n"]): w.model_mask(["m"])}, "table")
    return FCModel(w, f, restricted=True)


def identity_model(world: ModelWorld) -> FCModel:
    return FCModel(world, ChoiceFunction(world, {}, "table"), restricted=True)


GENERIC_LINES = {
    "dim": 2,
    "state": [1.0, 2.0],
    "tolerance": 1e-9,
    "subspaces": {"a": [[1.0, 0.0]], "b": [[1.0, 1.0]], "c": [[1.0, 2.0]]},
}


def generic_lines():
    """Three lines through the origin of the real plane, none parallel or
    orthogonal to another, and a state on the third one."""
    from .quantum import QuantumInstance

    return QuantumInstance.from_json_dict(GENERIC_LINES)
