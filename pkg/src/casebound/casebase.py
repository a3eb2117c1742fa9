"""Decisions, opinions, cases, and the priority orderings they induce.

An opinion records, stage by stage, one resolution for every concern the
accumulating fact situation raises, from the lowest degree up to the outcome.
Each decision inside an opinion establishes a priority of its rule's
antecedent over every opposing reason present in its stage facts; a case
base is inconsistent for a concern when two cases order some pair of reasons
both ways.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from .errors import (
    ChooserIncomplete,
    InadmissibleChoice,
    MissingTopDecision,
    MixedHierarchy,
    NonBaseFact,
    OutcomeMismatch,
)
from .hierarchy import Concern, Hierarchy, is_outcome
from .rules import Rule, is_admissible, is_applicable


@dataclass(frozen=True)
class Decision:
    """A rule applied to a fact situation, concluding one side of a concern."""

    facts: FrozenSet[str]
    rule: Rule
    outcome: str = field(init=False)

    def __post_init__(self):
        if not is_applicable(self.rule, self.facts):
            raise InadmissibleChoice(f"{self.rule} is not applicable to the stage facts")
        object.__setattr__(self, "outcome", self.rule.conclusion)

    @property
    def concern(self) -> Concern:
        return self.rule.concern


@dataclass(frozen=True)
class Opinion:
    """Resolution sets indexed by degree; ``stages[n]`` resolves the concerns
    of degree ``n + 1``."""

    stages: Tuple[FrozenSet[Decision], ...]

    @property
    def decisions(self) -> FrozenSet[Decision]:
        out: set = set()
        for stage in self.stages:
            out |= stage
        return frozenset(out)

    def decision_for(self, concern: Concern) -> Optional[Decision]:
        for stage in self.stages:
            for decision in stage:
                if decision.concern == concern:
                    return decision
        return None

    @property
    def outcome_decision(self) -> Optional[Decision]:
        for stage in self.stages:
            for decision in stage:
                if is_outcome(decision.outcome):
                    return decision
        return None


def merge(opinion: Opinion) -> FrozenSet[Decision]:
    """All decisions of an opinion, stage structure forgotten."""
    return opinion.decisions


@dataclass(frozen=True)
class Case:
    """Base facts, the opinion deciding them, and the supported outcome."""

    facts: FrozenSet[str]
    opinion: Opinion
    outcome: str
    id: Optional[str] = field(default=None, compare=False)
    court: Optional[str] = field(default=None, compare=False)
    time: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        top = self.opinion.outcome_decision
        if top is None:
            raise MissingTopDecision("the opinion never decides the outcome")
        if self.outcome != top.outcome:
            raise OutcomeMismatch(
                f"case outcome {self.outcome} disagrees with the opinion's {top.outcome}"
            )


Chooser = Callable[[FrozenSet[str], Concern], Optional[Rule]]


def build_opinion(h: Hierarchy, facts: Iterable[str], chooser: Chooser) -> Opinion:
    """Run the staged resolution procedure over base facts.

    Starting from the base situation, each stage resolves every concern of
    the next degree that the accumulated facts raise, using the rule the
    chooser supplies, and adds the conclusions to the accumulated facts.
    """
    current = frozenset(facts)
    nonbase = {f for f in current if h.kind(f) != "base"}
    if nonbase:
        raise NonBaseFact(f"opinions start from base facts, got {sorted(nonbase)}")

    stages: List[FrozenSet[Decision]] = []
    for n in range(1, h.top_degree + 1):
        resolutions = set()
        concluded = set()
        for concern in sorted(
            h.concerns_raised(current, degree=n), key=lambda c: c.label
        ):
            rule = chooser(current, concern)
            if rule is None:
                raise ChooserIncomplete(f"no rule offered for {concern}")
            if rule.concern != concern:
                raise InadmissibleChoice(f"{rule} does not resolve {concern}")
            if not is_admissible(h, rule):
                raise InadmissibleChoice(f"{rule} is not admissible")
            if not is_applicable(rule, current):
                raise InadmissibleChoice(f"{rule} is not applicable at this stage")
            resolutions.add(Decision(facts=current, rule=rule))
            concluded.add(rule.conclusion)
        stages.append(frozenset(resolutions))
        current = current | concluded
    return Opinion(stages=tuple(stages))


def replay_chooser(rules: Iterable[Rule]) -> Chooser:
    """A chooser that replays a fixed rule set, one rule per concern."""
    table = {rule.concern: rule for rule in rules}

    def choose(_facts: FrozenSet[str], concern: Concern) -> Optional[Rule]:
        return table.get(concern)

    return choose


@dataclass(frozen=True)
class CaseBase:
    hierarchy: Hierarchy
    cases: Tuple[Case, ...]

    @classmethod
    def build(cls, h: Hierarchy, cases: Iterable[Case]) -> "CaseBase":
        """Collect cases, verifying each one is structured over ``h``."""
        collected = tuple(cases)
        for case in collected:
            _check_case(h, case)
        return cls(hierarchy=h, cases=collected)

    def case(self, case_id: str) -> Case:
        for case in self.cases:
            if case.id == case_id:
                return case
        raise KeyError(case_id)


def _check_case(h: Hierarchy, case: Case) -> None:
    label = case.id or "<case>"
    try:
        for f in case.facts:
            if h.kind(f) != "base":
                raise MixedHierarchy(f"{label}: fact {f} is not a base factor here")
        for n, stage in enumerate(case.opinion.stages, start=1):
            for decision in stage:
                if not is_admissible(h, decision.rule):
                    raise MixedHierarchy(
                        f"{label}: {decision.rule} is not admissible here"
                    )
                if h.degree(decision.concern) != n:
                    raise MixedHierarchy(
                        f"{label}: {decision.concern} resolved at stage {n}, "
                        f"but its degree is {h.degree(decision.concern)}"
                    )
    except MixedHierarchy:
        raise
    except Exception as exc:  # unknown factors and the like
        raise MixedHierarchy(f"{label}: not a case over this hierarchy: {exc}") from exc


# -- priority orderings -------------------------------------------------------

@dataclass(frozen=True)
class PriorityFact:
    """One decision's contribution to a concern's priority ordering.

    Generates every instance ``U < V`` with ``U`` inside ``weaker`` (the
    opposing reasons present in the decision's facts) and ``V`` containing
    ``stronger`` (the rule's antecedent) within the winning side's favoring
    set.
    """

    concern: Concern
    side: str
    stronger: FrozenSet[str]
    weaker: FrozenSet[str]
    source: Optional[str] = None


@dataclass(frozen=True)
class PriorityOrdering:
    """Finite presentation of a priority ordering for one concern."""

    hierarchy: Hierarchy
    concern: Concern
    facts: Tuple[PriorityFact, ...]

    def holds(self, weaker: Iterable[str], stronger: Iterable[str]) -> bool:
        """Membership test: is ``weaker < stronger`` derivable?"""
        u = frozenset(weaker)
        v = frozenset(stronger)
        for pf in self.facts:
            if not v <= self.hierarchy.favoring(pf.side):
                continue
            if not u <= self.hierarchy.favoring(self.hierarchy.opposite(pf.side)):
                continue
            if u <= pf.weaker and pf.stronger <= v:
                return True
        return False


PrioritySource = Union[Decision, Case, CaseBase]


def priority_orderings(
    h: Hierarchy, source: PrioritySource, concern: Concern
) -> PriorityOrdering:
    """The priority ordering a decision, case, or case base induces for a
    concern, presented by its generating schemes."""
    facts: List[PriorityFact] = []

    def from_decision(decision: Decision, provenance: Optional[str]) -> None:
        if decision.concern != concern:
            return
        side = decision.outcome
        facts.append(
            PriorityFact(
                concern=concern,
                side=side,
                stronger=decision.rule.antecedent,
                weaker=decision.facts & h.favoring(h.opposite(side)),
                source=provenance,
            )
        )

    if isinstance(source, Decision):
        from_decision(source, None)
    elif isinstance(source, Case):
        for decision in merge(source.opinion):
            from_decision(decision, source.id)
    elif isinstance(source, CaseBase):
        for case in source.cases:
            for decision in merge(case.opinion):
                from_decision(decision, case.id)
    else:
        raise TypeError(f"cannot derive priorities from {type(source).__name__}")

    facts.sort(key=lambda pf: (pf.source or "", pf.side, sorted(pf.stronger)))
    return PriorityOrdering(hierarchy=h, concern=concern, facts=tuple(facts))


# -- consistency ---------------------------------------------------------------

@dataclass(frozen=True)
class InconsistencyWitness:
    """A pair of reason sets ordered both ways by two opposing decisions."""

    concern: Concern
    positive_reasons: FrozenSet[str]
    negative_reasons: FrozenSet[str]
    positive_source: Optional[str]
    negative_source: Optional[str]
    positive_rule: Rule
    negative_rule: Rule


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    witnesses: Tuple[InconsistencyWitness, ...]


def consistent(cb: CaseBase, concern: Optional[Concern] = None) -> ConsistencyReport:
    """Check a case base for conflicting priority orderings.

    Two decisions on opposite sides of a concern clash exactly when each
    rule's antecedent lies inside the other decision's facts restricted to
    its own side; the maximal reason pair ordered both ways is reported as
    the witness.
    """
    h = cb.hierarchy
    concerns = (concern,) if concern is not None else h.concerns
    witnesses: List[InconsistencyWitness] = []
    for target in concerns:
        pos, neg = target.positive, target.negative
        pro: List[Tuple[Case, Decision]] = []
        con: List[Tuple[Case, Decision]] = []
        for case in cb.cases:
            decision = case.opinion.decision_for(target)
            if decision is None:
                continue
            (pro if decision.outcome == pos else con).append((case, decision))
        for case_p, dec_p in pro:
            for case_n, dec_n in con:
                if dec_p.rule.antecedent <= dec_n.facts & h.favoring(pos) and (
                    dec_n.rule.antecedent <= dec_p.facts & h.favoring(neg)
                ):
                    witnesses.append(
                        InconsistencyWitness(
                            concern=target,
                            positive_reasons=dec_n.facts & h.favoring(pos),
                            negative_reasons=dec_p.facts & h.favoring(neg),
                            positive_source=case_p.id,
                            negative_source=case_n.id,
                            positive_rule=dec_p.rule,
                            negative_rule=dec_n.rule,
                        )
                    )
    witnesses.sort(
        key=lambda w: (
            w.concern.label,
            w.positive_source or "",
            w.negative_source or "",
        )
    )
    return ConsistencyReport(consistent=not witnesses, witnesses=tuple(witnesses))
