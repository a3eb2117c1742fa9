import pytest

from casebound.casebase import Decision, Opinion, build_opinion, replay_chooser
from casebound.classifier import (
    ClassifierModel,
    State,
    case_from_state,
    casebase_from_model,
)
from casebound.errors import (
    DuplicateStateId,
    NonBaseFact,
    OutcomeMismatch,
    Undecided,
    UndecidedStateWithRules,
    UnknownStateId,
)
from casebound.rules import Rule

R = Rule.make

X1 = frozenset({"f2", "f3", "f4", "f5"})
SOL1 = [R({"f2"}, "p"), R({"f4"}, "r"), R({"p"}, "q"), R({"q"}, "1")]


def test_model_builds_and_answers_queries(base_model):
    model = base_model.model
    assert [s.id for s in model.states] == ["s1", "s2", "s3"]
    assert model.valuation("s1") == "1"
    assert model.valuation("s3") == "?"
    assert model.solution("s1").conclusions == {"p", "r", "q", "1"}
    with pytest.raises(UnknownStateId):
        model.state("nope")
    with pytest.raises(Undecided):
        model.solution("s3")


def test_duplicate_ids_rejected(standard_hierarchy):
    s = State.make("s1", X1, SOL1, "1")
    with pytest.raises(DuplicateStateId):
        ClassifierModel.build(standard_hierarchy, [s, s])


def test_undecided_state_must_have_no_rules(standard_hierarchy):
    bad = State.make("s", X1, SOL1, "?")
    with pytest.raises(UndecidedStateWithRules):
        ClassifierModel.build(standard_hierarchy, [bad])


def test_outcome_must_follow_the_solution(standard_hierarchy):
    flipped = State.make("s", X1, SOL1, "0")
    with pytest.raises(OutcomeMismatch):
        ClassifierModel.build(standard_hierarchy, [flipped])
    # decided states must actually reach the outcome concern
    orphan = State.make("s", frozenset(), [], "1")
    with pytest.raises(OutcomeMismatch):
        ClassifierModel.build(standard_hierarchy, [orphan])


def test_facts_must_be_base(standard_hierarchy):
    with pytest.raises(NonBaseFact):
        ClassifierModel.build(standard_hierarchy, [State.make("s", {"p"}, [], "?")])


def test_case_from_state_equals_the_replayed_opinion(base_model):
    model = base_model.model
    h = model.hierarchy
    for state in model.decided_states:
        case = case_from_state(model, state.id)
        replayed = build_opinion(h, state.facts, replay_chooser(state.rules))
        assert case.opinion == replayed
        assert case.outcome == state.outcome
        assert case.facts == state.facts
        assert case.id == state.id


def test_case_from_state_stage_facts(base_model):
    case = case_from_state(base_model.model, "s1")
    y1 = X1 | {"p", "r"}
    y2 = y1 | {"q"}
    assert case.opinion.stages[1] == frozenset({Decision(y1, R({"p"}, "q"))})
    assert case.opinion.stages[2] == frozenset({Decision(y2, R({"q"}, "1"))})


def test_case_from_state_requires_a_decided_state(base_model):
    with pytest.raises(Undecided):
        case_from_state(base_model.model, "s3")


def test_single_stage_opinion():
    from casebound.hierarchy import Hierarchy

    h = Hierarchy.build(base=["f1"], links=[("f1", "1")])
    model = ClassifierModel.build(h, [State.make("s", {"f1"}, [R({"f1"}, "1")], "1")])
    case = case_from_state(model, "s")
    assert case.opinion.stages == (
        frozenset({Decision(frozenset({"f1"}), R({"f1"}, "1"))}),
    )


def test_casebase_from_model_collects_decided_states(base_model):
    cb = casebase_from_model(base_model.model)
    assert [c.id for c in cb.cases] == ["s1", "s2"]
    assert {c.outcome for c in cb.cases} == {"0", "1"}


def test_casebase_from_model_commutes_with_state_union(standard_hierarchy, base_model):
    model = base_model.model
    s1, s2 = model.decided_states
    part_a = ClassifierModel.build(standard_hierarchy, [s1])
    part_b = ClassifierModel.build(standard_hierarchy, [s2])
    joint = casebase_from_model(model)
    split = casebase_from_model(part_a).cases + casebase_from_model(part_b).cases
    assert set(joint.cases) == set(split)


def test_casebase_of_modelless_queries_is_empty(standard_hierarchy):
    model = ClassifierModel.build(
        standard_hierarchy, [State.make("q1", {"f1", "f2"})]
    )
    assert casebase_from_model(model).cases == ()
