import pytest
from hypothesis import given, settings

import conftest
from explikit.engine import (
    EMPTY_SUBSTITUTION,
    SolveLimits,
    Substitution,
    entails,
    ground_saturate,
    proof_to_dot,
    proof_to_json,
    solve,
    unify,
)
from explikit.parser import parse_atom, parse_program
from explikit.terms import Atom, Constant, KnowledgeBase, Variable


def V(name):
    return Variable(name)


def C(name):
    return Constant(name)


class TestUnify:
    def test_direct_binding(self):
        result = unify(parse_atom("is(A,B)"), parse_atom("is(animal,being)"))
        assert result.resolved() == {"A": C("animal"), "B": C("being")}

    def test_constant_clash(self):
        assert unify(parse_atom("is_a(plant,being)"), parse_atom("is_a(plant,animal)")) is None

    def test_identity(self):
        result = unify(parse_atom("p(X)"), parse_atom("p(X)"))
        assert result is not None and len(result) == 0

    def test_extends_prior_binding(self):
        prior = Substitution({"A": C("rabbit")})
        result = unify(parse_atom("has(A,X)"), parse_atom("has(rabbit,fur)"), prior)
        assert result.resolved() == {"A": C("rabbit"), "X": C("fur")}

    def test_conflict_with_prior_binding(self):
        prior = Substitution({"A": C("fox")})
        assert unify(parse_atom("has(A,X)"), parse_atom("has(rabbit,fur)"), prior) is None

    def test_predicate_mismatch(self):
        assert unify(parse_atom("p(a)"), parse_atom("q(a)")) is None
        assert unify(parse_atom("p(a)"), parse_atom("p(a,b)")) is None

    def test_variable_to_variable(self):
        result = unify(parse_atom("p(X,X)"), parse_atom("p(Y,c)"))
        assert result.walk(V("X")) == C("c")
        assert result.walk(V("Y")) == C("c")


@settings(max_examples=200)
@given(conftest.atoms(), conftest.atoms())
def test_unifier_correctness(a, b):
    subst = unify(a, b)
    if subst is not None:
        applied_a, applied_b = subst.apply(a), subst.apply(b)
        assert applied_a == applied_b
        # idempotence: applying twice equals applying once
        assert subst.apply(applied_a) == applied_a


@given(conftest.atoms(conftest.ground_terms))
def test_substitution_identity_on_ground(atom):
    subst = Substitution({"X": C("a"), "Y": V("Z")})
    assert subst.apply(atom) == atom


class TestSolve:
    def test_direct_fact_via_rule(self, kb):
        result = solve(parse_atom("is(animal,being)"), kb)
        assert len(result) == 1
        proof = result.solutions[0].proof
        assert proof.goal == parse_atom("is(animal,being)")
        assert [a for a in proof.clause.body] == [parse_atom("is_a(animal,being)")]
        (leaf,) = proof.children
        assert leaf.goal == parse_atom("is_a(animal,being)")
        assert leaf.is_leaf

    def test_transitivity_chain(self, kb):
        result = solve(parse_atom("is(fox,being)"), kb)
        assert len(result) >= 1
        first = result.solutions[0].proof
        assert first.children[0].goal == parse_atom("is_a(fox,carnivore)")
        chain = first.children[1]
        assert chain.goal == parse_atom("is(carnivore,being)")
        assert chain.children[0].goal == parse_atom("is_a(carnivore,mammal)")
        # ... down to the direct fact
        goals = [n.goal for n in first.walk()]
        assert parse_atom("is_a(animal,being)") in goals

    def test_property_inheritance(self, kb):
        result = solve(parse_atom("has(rabbit,fur)"), kb)
        assert len(result) >= 1
        via_mammal = [
            s
            for s in result
            if any(n.goal == parse_atom("is(rabbit,mammal)") for n in s.proof.walk())
            and any(
                n.goal == parse_atom("has_p(mammal,fur)") and n.is_leaf
                for n in s.proof.walk()
            )
        ]
        assert via_mammal

    def test_negative_example_unprovable(self, kb, fig5_model):
        program = fig5_model.as_kb().merge_before(kb)
        result = solve(parse_atom("tracks_down(dandelion,bobby)"), program)
        assert len(result) == 0
        assert not result.depth_limit_hit

    def test_answer_substitution(self, kb):
        result = solve(parse_atom("is(animal,B)"), kb, SolveLimits(max_solutions=1))
        (solution,) = result.solutions
        assert solution.substitution.resolved() == {"B": C("being")}
        assert solution.substitution.apply(parse_atom("is(animal,B)")) == solution.proof.goal

    def test_max_solutions(self, kb):
        capped = solve(parse_atom("is(X,Y)"), kb, SolveLimits(max_solutions=3))
        assert len(capped) == 3

    def test_determinism(self, kb):
        a = solve(parse_atom("has(bobby,X)"), kb)
        b = solve(parse_atom("has(bobby,X)"), kb)
        assert [s.proof for s in a] == [s.proof for s in b]
        assert [s.substitution.resolved() for s in a] == [
            s.substitution.resolved() for s in b
        ]

    def test_unknown_predicate(self, kb):
        assert len(solve(parse_atom("zorp(a)"), kb)) == 0

    def test_renamed_variables_never_leak(self, kb):
        result = solve(parse_atom("is(_G1,_G2)"), kb, SolveLimits(max_solutions=5))
        for solution in result:
            assert solution.proof.goal.is_ground()
            for node in solution.proof.walk():
                assert node.goal.is_ground()
                assert node.clause.head.is_ground()


class TestProofWellFormedness:
    def _check(self, node):
        assert node.goal == node.clause.head
        assert node.goal.is_ground()
        assert len(node.children) == len(node.clause.body)
        assert node.is_leaf == (not node.clause.body)
        for i, child in enumerate(node.children):
            assert child.goal == node.clause.body[i]
            self._check(child)

    def test_all_solutions_well_formed(self, kb):
        for query in ("is(X,Y)", "has(bobby,X)", "has(rabbit,fur)", "is(fox,being)"):
            for solution in solve(parse_atom(query), kb):
                self._check(solution.proof)

    def test_leaves_are_facts(self, kb):
        fact_heads = {c.head for c in kb.facts()}
        for solution in solve(parse_atom("has(rabbit,X)"), kb):
            for node in solution.proof.walk():
                if node.is_leaf:
                    assert node.goal in fact_heads

    def test_soundness_against_oracle(self, kb, saturated):
        for query in ("is(X,Y)", "has(X,Y)"):
            for solution in solve(parse_atom(query), kb):
                for node in solution.proof.walk():
                    assert node.goal in saturated


class TestEntails:
    def test_fig5_positive(self, kb, fig5_model):
        program = fig5_model.as_kb().merge_before(kb)
        assert entails(program, parse_atom("tracks_down(bella,tipsie)"))

    def test_fig5_negative(self, kb, fig5_model):
        program = fig5_model.as_kb().merge_before(kb)
        assert not entails(program, parse_atom("tracks_down(fluffy,argo)"))

    def test_empty_program(self):
        empty = KnowledgeBase.from_clauses(())
        assert not entails(empty, parse_atom("p(a)"))

    def test_requires_ground(self, kb):
        with pytest.raises(ValueError):
            entails(kb, parse_atom("is(X,being)"))


class TestDepthLimit:
    def test_cycle_hits_limit(self):
        kb = parse_program("p(a) :- p(a).")
        result = solve(parse_atom("p(a)"), kb, SolveLimits(depth=16))
        assert len(result) == 0
        assert result.depth_limit_hit

    def test_partial_results_returned(self):
        kb = parse_program("p(a). p(a) :- p(a).")
        result = solve(parse_atom("p(a)"), kb, SolveLimits(depth=16))
        assert len(result) >= 1
        assert result.depth_limit_hit

    def test_indeterminate_is_false(self, caplog):
        kb = parse_program("p(a) :- p(a).")
        import logging

        with caplog.at_level(logging.WARNING, logger="explikit.engine"):
            assert not entails(kb, parse_atom("p(a)"), SolveLimits(depth=8))
        assert any("indeterminate" in r.message for r in caplog.records)

    def test_limits_validation(self):
        with pytest.raises(ValueError):
            SolveLimits(depth=0)


class TestGroundSaturate:
    def test_empty(self):
        assert ground_saturate(KnowledgeBase.from_clauses(())) == frozenset()

    def test_facts_included(self, kb, saturated):
        for clause in kb.facts():
            assert clause.head in saturated

    def test_spot_values(self, saturated):
        assert parse_atom("is(fox,being)") in saturated
        assert parse_atom("has(animal,organ)") in saturated
        assert parse_atom("is(dandelion,bobby)") not in saturated

    def test_non_range_restricted_head(self):
        kb = parse_program("q(a). p(X) :- q(a).")
        atoms = ground_saturate(kb)
        assert parse_atom("p(a)") in atoms


class TestSerialization:
    def test_proof_json_shape(self, kb):
        (solution,) = solve(parse_atom("is(animal,being)"), kb).solutions
        payload = proof_to_json(solution.proof)
        assert payload["goal"]["text"] == "is(animal,being)"
        assert payload["clause"]["head"]["predicate"] == "is"
        assert payload["children"][0]["children"] == []

    def test_proof_dot(self, kb):
        (solution,) = solve(parse_atom("is(animal,being)"), kb).solutions
        dot = proof_to_dot(solution.proof)
        assert dot.startswith("digraph proof {")
        assert "is_a(animal,being)" in dot
