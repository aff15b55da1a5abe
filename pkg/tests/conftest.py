import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from clogics.core import AtomLanguage, ConsequenceTable
from clogics.corpus import atom_names, make_rng, random_fc_model
from clogics.semantics import ModelWorld, induced_consequence

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def _table(n, rows):
    return ConsequenceTable(AtomLanguage(atom_names(n)), tuple(rows))


@st.composite
def tables(draw, max_atoms=3, inclusive=False):
    """Arbitrary tables; with ``inclusive`` every row contains its key."""
    n = draw(st.integers(1, max_atoms))
    size = 1 << n
    rows = draw(st.lists(st.integers(0, size - 1), min_size=size, max_size=size))
    if inclusive:
        rows = [a | r for a, r in enumerate(rows)]
    return _table(n, rows)


@st.composite
def fc_models(draw, max_atoms=3):
    n = draw(st.integers(1, max_atoms))
    seed = draw(st.integers(0, 2**32))
    return random_fc_model(make_rng(seed), n)


@st.composite
def c_logics(draw, max_atoms=3):
    return induced_consequence(draw(fc_models(max_atoms)))


@st.composite
def worlds(draw, max_atoms=3, max_models=5):
    n = draw(st.integers(1, max_atoms))
    sat = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=max_models))
    return ModelWorld(AtomLanguage(atom_names(n)), tuple(f"m{i}" for i in range(len(sat))), tuple(sat))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
