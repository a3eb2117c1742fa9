"""Admissible rules and applicable solutions.

A rule concludes one side of a concern from a non-empty antecedent drawn
from the favoring set of that conclusion.  A solution is a rule set that a
decided case can carry: grounded in the base facts, resolving every raised
concern exactly once, and therefore free of conflicting conclusions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from .errors import (
    ConflictingRules,
    DuplicateConcernRule,
    EmptyAntecedent,
    InadmissibleRule,
    MissingConcernRule,
    NonBaseFact,
    SolutionError,
    UngroundedRule,
)
from .hierarchy import Concern, Hierarchy, concern_of, is_outcome


@dataclass(frozen=True)
class Rule:
    """A defeasible inference step ``antecedent -> conclusion``."""

    conclusion: str
    antecedent: FrozenSet[str]

    def __post_init__(self):
        if not self.antecedent:
            raise EmptyAntecedent(f"rule concluding {self.conclusion} has no antecedent")

    @classmethod
    def make(cls, antecedent: Iterable[str], conclusion: str) -> "Rule":
        return cls(conclusion=conclusion, antecedent=frozenset(antecedent))

    @property
    def concern(self) -> Concern:
        return concern_of(self.conclusion)

    def __str__(self) -> str:
        return "{%s} -> %s" % (", ".join(sorted(self.antecedent)), self.conclusion)


def rule_sort_key(rule: Rule):
    """Total, deterministic ordering of rules for stable iteration."""
    return (rule.conclusion, tuple(sorted(rule.antecedent)))


def related_concern(rule: Rule) -> Concern:
    """The concern whose members include the rule's conclusion."""
    return rule.concern


def is_admissible(h: Hierarchy, rule: Rule) -> bool:
    """True iff the antecedent sits inside the favoring set of the conclusion."""
    if h.kind(rule.conclusion) == "base":
        return False
    return rule.antecedent <= h.favoring(rule.conclusion)


def is_applicable(rule: Rule, facts: Iterable[str]) -> bool:
    """True iff every antecedent member is present in the fact situation."""
    return rule.antecedent <= frozenset(facts)


@dataclass(frozen=True)
class Solution:
    """A validated rule set, remembered together with the base situation it
    was validated against."""

    rules: FrozenSet[Rule]
    facts: FrozenSet[str]

    @property
    def conclusions(self) -> FrozenSet[str]:
        return frozenset(r.conclusion for r in self.rules)

    def rule_for(self, concern: Concern) -> Optional[Rule]:
        for rule in self.rules:
            if rule.concern == concern:
                return rule
        return None

    def by_concern(self) -> Dict[Concern, Rule]:
        return {rule.concern: rule for rule in self.rules}

    def __iter__(self):
        return iter(sorted(self.rules, key=rule_sort_key))


def validate_solution(
    h: Hierarchy, facts: Iterable[str], rules: Iterable[Rule]
) -> Solution:
    """Check the three conditions a solution must satisfy over base facts.

    1. every base factor used in an antecedent occurs in ``facts``;
    2. every antecedent is covered by ``facts`` plus the conclusions of the
       other rules (checked as a fixpoint, which the acyclic hierarchy makes
       equivalent to the direct formulation);
    3. every concern raised by ``facts`` or by a conclusion has exactly one
       related rule.

    The empty rule set validates only when ``facts`` raises no concerns.
    """
    fact_set = frozenset(facts)
    nonbase = {f for f in fact_set if h.kind(f) != "base"}
    if nonbase:
        raise NonBaseFact(f"solutions are grounded in base facts, got {sorted(nonbase)}")

    rule_set = frozenset(rules)
    for rule in sorted(rule_set, key=rule_sort_key):
        if not is_admissible(h, rule):
            raise InadmissibleRule(
                f"{rule} is not admissible: antecedent escapes the favoring set"
            )

    by_concern: Dict[Concern, Rule] = {}
    for rule in sorted(rule_set, key=rule_sort_key):
        prior = by_concern.get(rule.concern)
        if prior is not None:
            if prior.conclusion != rule.conclusion:
                raise ConflictingRules(
                    f"{prior} and {rule} conclude opposite sides of {rule.concern}"
                )
            raise DuplicateConcernRule(
                f"{prior} and {rule} both resolve {rule.concern}"
            )
        by_concern[rule.concern] = rule

    required = set(h.concerns_raised(fact_set))
    for rule in rule_set:
        if not is_outcome(rule.conclusion):  # outcomes favor nothing further
            required |= h.concerns_raised((rule.conclusion,))
    for concern in sorted(required, key=lambda c: (h.degree(c), c.label)):
        if concern not in by_concern:
            raise MissingConcernRule(f"no rule resolves the raised concern {concern}")

    # condition 2 as a fixpoint from the base facts upward
    available = set(fact_set)
    pending = set(rule_set)
    while True:
        fired = {r for r in pending if r.antecedent <= available}
        if not fired:
            break
        available |= {r.conclusion for r in fired}
        pending -= fired
    if pending:
        worst = min(pending, key=rule_sort_key)
        raise UngroundedRule(f"{worst} is not supported by the facts or other rules")

    # condition 1 is implied by the fixpoint; assert it separately anyway
    base_used = {
        f for r in rule_set for f in r.antecedent if h.kind(f) == "base"
    }
    if not base_used <= fact_set:
        raise UngroundedRule(
            f"base antecedent factors outside the situation: {sorted(base_used - fact_set)}"
        )

    stray = set(by_concern) - required
    if stray:
        # unreachable for non-empty grounded antecedents; guarded for safety
        raise SolutionError(
            f"rules resolve concerns never raised: {sorted(c.label for c in stray)}"
        )

    return Solution(rules=rule_set, facts=fact_set)


def is_minimal_for(
    h: Hierarchy,
    sol: Solution,
    concern: Concern,
    established: Iterable[str],
    facts: Iterable[str],
) -> bool:
    """Whether the solution's rule for ``concern`` stays within the factors
    relevant to the concern that appear in ``facts`` or ``established``.

    Vacuously true when the solution has no rule for the concern.
    """
    rule = sol.rule_for(concern)
    if rule is None:
        return True
    pool = h.favoring(concern.positive) | h.favoring(concern.negative)
    return rule.antecedent <= pool & (frozenset(facts) | frozenset(established))


def is_obtainable(
    h: Hierarchy, goal: Iterable[str], facts: Iterable[str]
) -> Tuple[bool, Optional[Solution]]:
    """Whether some applicable solution over ``facts`` concludes every factor
    in ``goal``; returns the first witness found.

    Search is delegated to the exhaustive enumerator, which is exact at the
    scales this engine is built for.
    """
    from .oracle import iter_solutions  # local import: oracle builds on rules

    goal_set = frozenset(goal)
    for token in goal_set:
        if h.kind(token) != "intermediate":
            return False, None
    if any(h.opposite(g) in goal_set for g in goal_set):
        return False, None  # conflicting goals can never be co-concluded
    for sol in iter_solutions(h, facts):
        if goal_set <= sol.conclusions:
            return True, sol
    return False, None
