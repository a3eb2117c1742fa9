import pytest

from casebound.errors import (
    ConflictingRules,
    DuplicateConcernRule,
    EmptyAntecedent,
    MissingConcernRule,
    NonBaseFact,
    UngroundedRule,
)
from casebound.hierarchy import Concern
from casebound.oracle import enumerate_solutions
from casebound.rules import (
    Rule,
    is_admissible,
    is_applicable,
    is_minimal_for,
    is_obtainable,
    related_concern,
    validate_solution,
)

R = Rule.make

X1 = {"f2", "f3", "f4", "f5"}
SOL1 = [R({"f2"}, "p"), R({"f4"}, "r"), R({"p"}, "q"), R({"q"}, "1")]


def test_empty_antecedent_rejected():
    with pytest.raises(EmptyAntecedent):
        Rule(conclusion="p", antecedent=frozenset())


def test_admissibility(standard_hierarchy):
    h = standard_hierarchy
    assert is_admissible(h, R({"f2"}, "p"))
    assert is_admissible(h, R({"q"}, "1"))
    assert not is_admissible(h, R({"f4"}, "p"))  # f4 favors r, not p
    assert not is_admissible(h, R({"f1", "f3"}, "p"))


def test_applicability():
    assert is_applicable(R({"f2"}, "p"), X1)
    assert not is_applicable(R({"f1"}, "p"), X1)
    assert is_applicable(R({"f2", "f3"}, "p"), X1 | {"extra"})


def test_related_concern():
    assert related_concern(R({"f2"}, "p")) == Concern("p")
    assert related_concern(R({"r'"}, "0")) == Concern("1")
    assert related_concern(R({"p"}, "q")).label == "q/q'"


def test_validate_solution_accepts_the_running_example(standard_hierarchy):
    sol = validate_solution(standard_hierarchy, X1, SOL1)
    assert sol.conclusions == {"p", "r", "q", "1"}
    assert sol.rule_for(Concern("q")) == R({"p"}, "q")
    assert sol.facts == frozenset(X1)


def test_validate_solution_reports_missing_concern(standard_hierarchy):
    # dropping the q-rule leaves the concern raised by f3 unresolved
    with pytest.raises(MissingConcernRule) as err:
        validate_solution(standard_hierarchy, X1, [r for r in SOL1 if r.conclusion != "q"])
    assert "q/q'" in str(err.value)


def test_validate_solution_reports_duplicates(standard_hierarchy):
    with pytest.raises(DuplicateConcernRule):
        validate_solution(standard_hierarchy, X1, SOL1 + [R({"f3"}, "p'")])
    # opposite conclusions are flagged with the sharper error
    with pytest.raises(ConflictingRules):
        validate_solution(standard_hierarchy, X1, SOL1 + [R({"f3"}, "p'")])
    with pytest.raises(DuplicateConcernRule) as err:
        validate_solution(
            standard_hierarchy,
            X1 | {"f1"},
            [r for r in SOL1 if r.conclusion != "p"] + [R({"f1"}, "p"), R({"f2"}, "p")],
        )
    assert not isinstance(err.value, ConflictingRules)


def test_validate_solution_reports_ungrounded_rule(standard_hierarchy):
    broken = [R({"f1"}, "p")] + [r for r in SOL1 if r.conclusion != "p"]
    with pytest.raises(UngroundedRule):
        validate_solution(standard_hierarchy, X1, broken)


def test_validate_solution_rejects_nonbase_facts(standard_hierarchy):
    with pytest.raises(NonBaseFact):
        validate_solution(standard_hierarchy, {"f2", "p"}, [])


def test_empty_rule_set_only_when_nothing_raised(standard_hierarchy):
    sol = validate_solution(standard_hierarchy, set(), [])
    assert sol.rules == frozenset()
    with pytest.raises(MissingConcernRule):
        validate_solution(standard_hierarchy, X1, [])


def test_validate_solution_is_order_insensitive(standard_hierarchy):
    a = validate_solution(standard_hierarchy, X1, SOL1)
    b = validate_solution(standard_hierarchy, X1, list(reversed(SOL1)))
    assert a == b


def test_obtainable_with_witness(standard_hierarchy):
    h = standard_hierarchy
    x3 = {f"f{i}" for i in range(1, 7)}
    ok, witness = is_obtainable(h, {"p", "r'"}, x3)
    assert ok
    assert witness is not None and {"p", "r'"} <= witness.conclusions
    p_rule = witness.rule_for(Concern("p"))
    assert p_rule.antecedent in ({"f1"}, {"f2"}, {"f1", "f2"})
    # the enumerator is the oracle here: the witness must be one of its solutions
    assert witness in enumerate_solutions(h, x3)


def test_obtainable_trivially_with_empty_goal(standard_hierarchy):
    ok, witness = is_obtainable(standard_hierarchy, set(), set())
    assert ok and witness is not None and witness.rules == frozenset()


def test_conflicting_goal_is_not_obtainable(standard_hierarchy):
    ok, witness = is_obtainable(standard_hierarchy, {"p", "p'"}, {"f1", "f3"})
    assert not ok and witness is None


def test_minimality(standard_hierarchy):
    h = standard_hierarchy
    x3 = frozenset(f"f{i}" for i in range(1, 7))
    sol = validate_solution(
        h, x3, [R({"f1"}, "p"), R({"f5"}, "r'"), R({"p"}, "q"), R({"q"}, "1")]
    )
    top = Concern("1")
    # q sits inside the established pool, so the outcome rule is minimal
    assert is_minimal_for(h, sol, top, {"p", "q", "r'"}, x3)
    # with q outside the pool the same rule escapes it
    assert not is_minimal_for(h, sol, top, {"p", "r'"}, x3)
    # no rule for the concern: vacuously minimal
    empty = validate_solution(h, set(), [])
    assert is_minimal_for(h, empty, top, set(), set())
