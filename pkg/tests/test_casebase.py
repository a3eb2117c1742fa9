import pytest

from casebound.casebase import (
    Case,
    CaseBase,
    Decision,
    Opinion,
    build_opinion,
    consistent,
    merge,
    priority_orderings,
    replay_chooser,
)
from casebound.classifier import casebase_from_model
from casebound.errors import (
    ChooserIncomplete,
    InadmissibleChoice,
    MissingTopDecision,
    MixedHierarchy,
    OutcomeMismatch,
)
from casebound.hierarchy import Concern, Hierarchy
from casebound.rules import Rule

R = Rule.make

X1 = frozenset({"f2", "f3", "f4", "f5"})
X2 = frozenset({"f1", "f3", "f4", "f5", "f6"})
SOL1 = [R({"f2"}, "p"), R({"f4"}, "r"), R({"p"}, "q"), R({"q"}, "1")]
SOL2 = [R({"f1"}, "p"), R({"f5", "f6"}, "r'"), R({"p"}, "q"), R({"r'"}, "0")]

Y1 = X1 | {"p", "r"}
Y2 = Y1 | {"q"}
Z1 = X2 | {"p", "r'"}
Z2 = Z1 | {"q"}

OPINION1 = Opinion(
    stages=(
        frozenset({Decision(X1, R({"f2"}, "p")), Decision(X1, R({"f4"}, "r"))}),
        frozenset({Decision(Y1, R({"p"}, "q"))}),
        frozenset({Decision(Y2, R({"q"}, "1"))}),
    )
)
OPINION2 = Opinion(
    stages=(
        frozenset({Decision(X2, R({"f1"}, "p")), Decision(X2, R({"f5", "f6"}, "r'"))}),
        frozenset({Decision(Z1, R({"p"}, "q"))}),
        frozenset({Decision(Z2, R({"r'"}, "0"))}),
    )
)


def test_decision_outcome_follows_the_rule():
    decision = Decision(X1, R({"f2"}, "p"))
    assert decision.outcome == "p"
    assert decision.concern == Concern("p")
    with pytest.raises(InadmissibleChoice):
        Decision(X1, R({"f1"}, "p"))  # f1 absent from the facts


def test_build_opinion_replays_the_first_precedent(standard_hierarchy):
    opinion = build_opinion(standard_hierarchy, X1, replay_chooser(SOL1))
    assert opinion == OPINION1
    assert opinion.stages[0] == frozenset(
        {Decision(X1, R({"f2"}, "p")), Decision(X1, R({"f4"}, "r"))}
    )


def test_build_opinion_replays_the_second_precedent(standard_hierarchy):
    opinion = build_opinion(standard_hierarchy, X2, replay_chooser(SOL2))
    assert opinion == OPINION2
    assert opinion.outcome_decision == Decision(Z2, R({"r'"}, "0"))


def test_build_opinion_requires_a_rule_per_raised_concern(standard_hierarchy):
    with pytest.raises(ChooserIncomplete):
        build_opinion(
            standard_hierarchy, X1, replay_chooser([r for r in SOL1 if r.conclusion != "q"])
        )


def test_build_opinion_rejects_inadmissible_choices(standard_hierarchy):
    def bad_chooser(facts, concern):
        if concern == Concern("p"):
            return R({"f4"}, "p")  # f4 does not favor p
        return replay_chooser(SOL1)(facts, concern)

    with pytest.raises(InadmissibleChoice):
        build_opinion(standard_hierarchy, X1, bad_chooser)


def test_opinion_without_outcome_cannot_become_a_case(standard_hierarchy):
    opinion = build_opinion(standard_hierarchy, frozenset(), replay_chooser([]))
    assert merge(opinion) == frozenset()
    with pytest.raises(MissingTopDecision):
        Case(facts=frozenset(), opinion=opinion, outcome="1")


def test_case_outcome_must_match_opinion():
    with pytest.raises(OutcomeMismatch):
        Case(facts=X1, opinion=OPINION1, outcome="0")


def test_merge_collects_all_stage_decisions():
    merged = merge(OPINION1)
    assert len(merged) == 4
    assert Decision(Y2, R({"q"}, "1")) in merged
    assert merge(Opinion(stages=(frozenset(),))) == frozenset()


def test_opinion_stage_degrees_match(standard_hierarchy):
    for n, stage in enumerate(OPINION1.stages, start=1):
        for decision in stage:
            assert standard_hierarchy.degree(decision.concern) == n


def test_casebase_rejects_foreign_cases(standard_hierarchy):
    other = Hierarchy.build(base=["g1"], intermediate=["z"], links=[("g1", "z"), ("z", "1")])
    case = Case(
        facts=frozenset({"g1"}),
        opinion=Opinion(
            stages=(
                frozenset({Decision(frozenset({"g1"}), R({"g1"}, "z"))}),
                frozenset({Decision(frozenset({"g1", "z"}), R({"z"}, "1"))}),
            )
        ),
        outcome="1",
    )
    assert CaseBase.build(other, [case]).cases  # fine over its own hierarchy
    with pytest.raises(MixedHierarchy):
        CaseBase.build(standard_hierarchy, [case])


def test_priority_ordering_membership(standard_hierarchy, opposed_model):
    h = standard_hierarchy
    cb = casebase_from_model(opposed_model.model)
    concern = Concern("p")
    c1 = cb.case("s1")
    c4 = cb.case("s4")
    from_c1 = priority_orderings(h, c1, concern)
    from_c4 = priority_orderings(h, c4, concern)
    assert from_c1.holds({"f3"}, {"f1", "f2"})
    assert from_c4.holds({"f1", "f2"}, {"f3"})
    # not derivable: the winning set must contain the rule's antecedent
    assert not from_c1.holds({"f3"}, {"f1"})
    # sort preconditions: both sets must sit inside their favoring sets
    assert not from_c1.holds({"f4"}, {"f1", "f2"})


def test_priority_ordering_empty_without_a_ruling(standard_hierarchy, base_model):
    h = standard_hierarchy
    cb = casebase_from_model(base_model.model)
    single = CaseBase.build(h, [cb.case("s1")])
    assert len(priority_orderings(h, single, Concern("p")).facts) == 1
    # a decision on another concern contributes nothing to this one
    lone = priority_orderings(h, Decision(X1, R({"f4"}, "r")), Concern("p"))
    assert lone.facts == ()


def test_consistency_of_the_base_model(base_model):
    report = consistent(casebase_from_model(base_model.model))
    assert report.consistent and report.witnesses == ()


def test_single_case_is_consistent(standard_hierarchy, base_model):
    cb = casebase_from_model(base_model.model)
    alone = CaseBase.build(standard_hierarchy, [cb.case("s1")])
    assert consistent(alone).consistent


def test_opposed_precedents_clash_on_p(opposed_model):
    cb = casebase_from_model(opposed_model.model)
    report = consistent(cb, Concern("p"))
    assert not report.consistent
    witness = report.witnesses[0]
    assert witness.negative_reasons == {"f3"}
    assert witness.positive_reasons == {"f1", "f2"}
    assert {witness.positive_source, witness.negative_source} == {"s1", "s4"}


def test_same_outcome_precedents_clash_on_r(negligible_model):
    cb = casebase_from_model(negligible_model.model)
    report = consistent(cb, Concern("r"))
    assert not report.consistent
    witness = report.witnesses[0]
    assert witness.positive_reasons == {"f4"}
    assert witness.negative_reasons == {"f5"}
    # the agreement on p/p' is untouched by the split on r/r'
    assert consistent(cb, Concern("p")).consistent


def test_consistency_decomposes_by_concern(negligible_model, standard_hierarchy):
    cb = casebase_from_model(negligible_model.model)
    overall = consistent(cb)
    per_concern = [consistent(cb, c).consistent for c in standard_hierarchy.concerns]
    assert overall.consistent == all(per_concern)
    assert not overall.consistent
