"""Rule-based classifier models.

A state couples a base fact situation with a solution; the model maps each
state to an outcome (``0``, ``1``) or leaves it undecided (``?``).  Two
constraints tie the pieces together: undecided states carry no rules, and a
decided state's outcome is exactly what its solution's outcome rule
concludes.  Decided states translate into cases by replaying the solution
stage by stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple, Union

from .casebase import Case, CaseBase, Decision, Opinion
from .errors import (
    AlreadyDecided,
    DuplicateStateId,
    NonBaseFact,
    OutcomeMismatch,
    Undecided,
    UndecidedStateWithRules,
    UnknownStateId,
)
from .hierarchy import Hierarchy, OUTCOMES
from .rules import Rule, Solution, validate_solution

UNDECIDED = "?"
VALUATIONS = OUTCOMES + (UNDECIDED,)


@dataclass(frozen=True)
class State:
    """A fact situation with the rules used to assess it, plus optional
    court and time metadata consumed by authority filtering."""

    id: str
    facts: FrozenSet[str]
    rules: FrozenSet[Rule] = frozenset()
    outcome: str = UNDECIDED
    court: Optional[str] = None
    time: Optional[int] = None

    @classmethod
    def make(
        cls,
        id: str,
        facts: Iterable[str],
        rules: Iterable[Rule] = (),
        outcome: str = UNDECIDED,
        court: Optional[str] = None,
        time: Optional[int] = None,
    ) -> "State":
        return cls(
            id=id,
            facts=frozenset(facts),
            rules=frozenset(rules),
            outcome=outcome,
            court=court,
            time=time,
        )

    @property
    def decided(self) -> bool:
        return self.outcome != UNDECIDED


class ClassifierModel:
    """A hierarchy together with validated states.

    States not listed are implicitly undecided; queries against the model
    therefore always name explicit states.
    """

    def __init__(
        self,
        hierarchy: Hierarchy,
        states: Tuple[State, ...],
        solutions: Dict[str, Solution],
    ):
        self.hierarchy = hierarchy
        self._states = states
        self._by_id = {s.id: s for s in states}
        self._solutions = solutions
        self._views: Dict[str, object] = {}

    @classmethod
    def build(cls, h: Hierarchy, states: Sequence[State]) -> "ClassifierModel":
        """Validate states and their solutions against the hierarchy."""
        seen: Dict[str, State] = {}
        solutions: Dict[str, Solution] = {}
        for state in states:
            if state.id in seen:
                raise DuplicateStateId(f"state id {state.id!r} declared twice")
            seen[state.id] = state
            if state.outcome not in VALUATIONS:
                raise OutcomeMismatch(
                    f"state {state.id}: outcome must be one of 0, 1, ?"
                )
            nonbase = {f for f in state.facts if h.kind(f) != "base"}
            if nonbase:
                raise NonBaseFact(
                    f"state {state.id}: facts must be base factors, got {sorted(nonbase)}"
                )
            if not state.decided:
                if state.rules:
                    raise UndecidedStateWithRules(
                        f"state {state.id} is undecided but carries rules"
                    )
                continue
            solution = validate_solution(h, state.facts, state.rules)
            top = h.top_concern
            outcome_rule = solution.rule_for(top) if top is not None else None
            if outcome_rule is None:
                raise OutcomeMismatch(
                    f"state {state.id} is decided but its solution never "
                    f"concludes an outcome"
                )
            if outcome_rule.conclusion != state.outcome:
                raise OutcomeMismatch(
                    f"state {state.id} is classified {state.outcome} but its "
                    f"solution concludes {outcome_rule.conclusion}"
                )
            solutions[state.id] = solution
        return cls(hierarchy=h, states=tuple(states), solutions=solutions)

    # -- queries ----------------------------------------------------------

    @property
    def states(self) -> Tuple[State, ...]:
        return self._states

    def state(self, state_id: str) -> State:
        try:
            return self._by_id[state_id]
        except KeyError:
            raise UnknownStateId(f"no state named {state_id!r}") from None

    @property
    def decided_states(self) -> Tuple[State, ...]:
        return tuple(s for s in self._states if s.decided)

    def solution(self, state_id: str) -> Solution:
        state = self.state(state_id)
        if not state.decided:
            raise Undecided(f"state {state_id} is undecided")
        return self._solutions[state_id]

    def valuation(self, state_id: str) -> str:
        return self.state(state_id).outcome

    def view(self, state_id: str):
        """Cached per-state projection used by the relevance machinery."""
        from .reasoning import StateView  # cycle: reasoning builds on this module

        if state_id not in self._views:
            self._views[state_id] = StateView.build(self, self.state(state_id))
        return self._views[state_id]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ClassifierModel)
            and self.hierarchy == other.hierarchy
            and self._states == other._states
        )

    def __repr__(self) -> str:
        decided = sum(1 for s in self._states if s.decided)
        return (
            f"ClassifierModel({len(self._states)} states, {decided} decided, "
            f"top degree {self.hierarchy.top_degree})"
        )


def validate_model(h: Hierarchy, states: Sequence[State]) -> ClassifierModel:
    """Functional alias for :meth:`ClassifierModel.build`."""
    return ClassifierModel.build(h, states)


def case_from_state(model: ClassifierModel, state: Union[State, str]) -> Case:
    """Translate a decided state into a case by replaying its solution.

    Stage ``n`` collects one decision for every concern of degree ``n`` the
    solution resolves, applied to the facts accumulated so far; conclusions
    feed the next stage.
    """
    if isinstance(state, str):
        state = model.state(state)
    if not state.decided:
        raise Undecided(f"state {state.id} has no outcome to build a case from")
    h = model.hierarchy
    solution = model.solution(state.id)
    by_concern = solution.by_concern()

    current = state.facts
    stages = []
    for n in range(1, h.top_degree + 1):
        resolutions = set()
        concluded = set()
        for concern in h.concerns_of_degree(n):
            rule = by_concern.get(concern)
            if rule is None:
                continue
            resolutions.add(Decision(facts=current, rule=rule))
            concluded.add(rule.conclusion)
        stages.append(frozenset(resolutions))
        current = current | concluded
    return Case(
        facts=state.facts,
        opinion=Opinion(stages=tuple(stages)),
        outcome=state.outcome,
        id=state.id,
        court=state.court,
        time=state.time,
    )


def casebase_from_model(model: ClassifierModel) -> CaseBase:
    """The case base of all decided states, in declaration order."""
    cases = tuple(case_from_state(model, s) for s in model.decided_states)
    return CaseBase.build(model.hierarchy, cases)
