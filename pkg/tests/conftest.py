import json

import pytest
from hypothesis import strategies as st

from explikit.config import load_config
from explikit.engine import ground_saturate
from explikit.learner import InducedModel, learn, load_modes
from explikit.media import load_manifest
from explikit.parser import parse_examples, parse_program
from explikit.terms import Atom, Clause, Constant, Variable
from explikit.verbalize import load_templates

constant_names = st.from_regex(r"[a-z][a-zA-Z0-9_]{0,8}", fullmatch=True)
variable_names = st.from_regex(r"[A-Z_][a-zA-Z0-9_]{0,8}", fullmatch=True)
predicate_names = st.from_regex(r"[a-z][a-zA-Z0-9_]{0,8}", fullmatch=True)

terms = st.one_of(
    st.builds(Constant, constant_names), st.builds(Variable, variable_names)
)
ground_terms = st.builds(Constant, constant_names)


def atoms(term_strategy=terms, max_arity=4):
    return st.builds(
        Atom,
        predicate_names,
        st.lists(term_strategy, min_size=0, max_size=max_arity).map(tuple),
    )


def clauses():
    """Well-formed clauses: ground facts, or rules with 1-4 body atoms."""
    facts = st.builds(Clause, atoms(ground_terms), st.just(()))
    rules = st.builds(
        Clause,
        atoms(),
        st.lists(atoms(), min_size=1, max_size=4).map(tuple),
    )
    return st.one_of(facts, rules)

# The two clauses of the published model, in the published order.
FIG5_TEXT = """\
tracks_down(A,B) :- is(A,carnivore), is(B,herbivore).
tracks_down(A,B) :- is(A,herbivore), is(B,plant).
"""


@pytest.fixture(scope="session")
def config():
    return load_config()


@pytest.fixture(scope="session")
def kb(config):
    return parse_program(config.kb_path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def examples(config):
    return parse_examples(config.examples_path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def modes_and_limits(config):
    return load_modes(config.modes_path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def modes(modes_and_limits):
    return modes_and_limits[0]


@pytest.fixture(scope="session")
def limits(modes_and_limits):
    return modes_and_limits[1]


@pytest.fixture(scope="session")
def templates(config):
    return load_templates(config.templates_path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def strings(config):
    return json.loads(config.strings_path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def registry(config):
    return load_manifest(config.media_manifest_path, config.media_root)


@pytest.fixture(scope="session")
def fig5_model(modes):
    kb = parse_program(FIG5_TEXT)
    return InducedModel.from_kb(kb, modes.target)


@pytest.fixture(scope="session")
def learned(kb, examples, modes, limits):
    return learn(kb, examples, modes, limits)


@pytest.fixture(scope="session")
def learned_model(learned):
    return learned.model


@pytest.fixture(scope="session")
def saturated(kb):
    return ground_saturate(kb)
