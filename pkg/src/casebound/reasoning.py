"""Constraining a new case by its precedents.

The relevance relation captures a-fortiori reasoning between states: a
decided precedent constrains a target state on a concern when the
precedent's winning reason is available in the target (possibly assuming
extra factors) and everything speaking against in the target was already
present, and rejected, in the precedent.

``decide`` runs the staged decision process for an undecided state: stage
``n`` asks, for every concern of degree ``n``, which precedents can be cited
for each side given the factors established so far; every side with a
citation is forced and joins the established set.  ``synthesize_solutions``
then assembles the rule sets a court could adopt for the new case, bounded
below by the cited precedents' reasons and above by a conflict-free
partition of the established factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import chain, combinations, product
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

from .casebase import CaseBase, consistent
from .classifier import ClassifierModel, State, UNDECIDED, case_from_state
from .errors import (
    AlreadyDecided,
    AmbiguousVerdict,
    EmptyEstablishedSet,
    ScaleGuardExceeded,
    UndecidedPrecedent,
)
from .hierarchy import Concern, Hierarchy
from .rules import Rule, Solution, rule_sort_key

NONE_POSSIBLE = "none-possible"
UNAMBIGUOUS = "unambiguous"
AMBIGUOUS = "ambiguous"

#: ceiling on candidate antecedents enumerated per concern during synthesis
MAX_CANDIDATES = 1 << 16


@dataclass(frozen=True, eq=False)
class StateView:
    """Per-state projections the relevance relation reads.

    ``extended`` is the fact situation plus every conclusion the state's
    solution draws below the outcome level, i.e. the intermediate factors
    that apply to the state.
    """

    state_id: str
    outcome: str
    extended: FrozenSet[str]
    decisions: Mapping[Concern, str]
    reasons: Mapping[str, FrozenSet[str]]

    @classmethod
    def build(cls, model: ClassifierModel, state: State) -> "StateView":
        h = model.hierarchy
        decisions: Dict[Concern, str] = {}
        reasons: Dict[str, FrozenSet[str]] = {}
        extended = set(state.facts)
        if state.decided:
            solution = model.solution(state.id)
            for concern, rule in solution.by_concern().items():
                decisions[concern] = rule.conclusion
                reasons[rule.conclusion] = rule.antecedent
                if h.degree(concern) < h.top_degree:
                    extended.add(rule.conclusion)
        return cls(
            state_id=state.id,
            outcome=state.outcome,
            extended=frozenset(extended),
            decisions=decisions,
            reasons=reasons,
        )

    def decision_on(self, concern: Concern) -> str:
        return self.decisions.get(concern, UNDECIDED)

    def reason_for(self, side: str) -> FrozenSet[str]:
        return self.reasons.get(side, frozenset())

    def favoring_within(self, h: Hierarchy, side: str) -> FrozenSet[str]:
        return self.extended & h.favoring(side)


def relevance(
    model: ClassifierModel,
    pro: Iterable[str],
    con: Iterable[str],
    precedent: str,
    target: str,
    concern: Concern,
) -> bool:
    """A-fortiori relevance of ``precedent`` for ``target`` on ``concern``.

    ``pro`` augments the target's reasons on the precedent's winning side,
    ``con`` augments what speaks against it in the target; both are filtered
    through the respective favoring sets before the containment tests.
    """
    return _relevance(
        model.hierarchy,
        frozenset(pro),
        frozenset(con),
        model.view(precedent),
        model.view(target),
        concern,
    )


def _relevance(
    h: Hierarchy,
    pro: FrozenSet[str],
    con: FrozenSet[str],
    precedent: StateView,
    target: StateView,
    concern: Concern,
) -> bool:
    if precedent.outcome == UNDECIDED:
        raise UndecidedPrecedent(f"{precedent.state_id} is undecided")
    side = precedent.decision_on(concern)
    if side == UNDECIDED:
        raise UndecidedPrecedent(
            f"{precedent.state_id} never ruled on {concern}"
        )
    against = h.opposite(side)
    wins = precedent.reason_for(side) <= (
        target.reason_for(side) | (pro & h.favoring(side))
    )
    already_rejected = (
        target.reason_for(against) | (con & h.favoring(against))
    ) <= precedent.favoring_within(h, against)
    return wins and already_rejected


def conflict_equivalence_check(
    model: ClassifierModel, first: str, second: str, concern: Concern
) -> Tuple[bool, bool]:
    """Two routes to the same fact about two opposite-decided states.

    Returns the conflicting-case relevance instance and, independently,
    whether the two-case case base is inconsistent for the concern.  The two
    booleans coincide; tests assert it.
    """
    h = model.hierarchy
    view_a, view_b = model.view(first), model.view(second)
    if view_a.outcome == UNDECIDED or view_b.outcome == UNDECIDED:
        raise UndecidedPrecedent("both states must be decided")
    side_a = view_a.decision_on(concern)
    side_b = view_b.decision_on(concern)
    if UNDECIDED in (side_a, side_b) or side_a == side_b:
        return False, False
    rel = _relevance(
        h, view_b.favoring_within(h, side_a), frozenset(), view_a, view_b, concern
    )
    pair = CaseBase.build(
        h, (case_from_state(model, first), case_from_state(model, second))
    )
    return rel, not consistent(pair, concern).consistent


# -- the staged decision process ---------------------------------------------

PrecedentFilter = Callable[[State, Concern], bool]


@dataclass(frozen=True, eq=False)
class ConcernRecord:
    """What one stage of the decision process found for one concern."""

    concern: Concern
    degree: int
    cite: Mapping[str, Tuple[str, ...]]  # side -> sorted citable state ids
    forced: FrozenSet[str]
    ambiguity: str
    negligible: bool


@dataclass(frozen=True, eq=False)
class AuthorityNote:
    state_id: str
    concern: Concern
    status: str  # "overruled" | "per-incuriam"
    other: Optional[str]


@dataclass(frozen=True, eq=False)
class DecisionTrace:
    """Complete record of the decision process for one undecided state."""

    query_id: str
    base_facts: FrozenSet[str]
    records: Tuple[ConcernRecord, ...]
    established: Tuple[FrozenSet[str], ...]  # established factors per stage
    final_factors: FrozenSet[str]
    verdict: FrozenSet[str]
    authority: Tuple[AuthorityNote, ...] = ()

    def record_for(self, concern: Concern) -> ConcernRecord:
        for record in self.records:
            if record.concern == concern:
                return record
        raise KeyError(concern.label)


def decide(
    model: ClassifierModel,
    query_id: str,
    precedent_filter: Optional[PrecedentFilter] = None,
) -> DecisionTrace:
    """Run the decision process for an undecided state.

    Every concern of every degree is inspected; a side is forced when some
    decided state passing the filter is relevant for it, taking the
    established factors of the previous stage as the assumed context.  The
    default filter accepts every decided state.
    """
    h = model.hierarchy
    query = model.state(query_id)
    if query.decided:
        raise AlreadyDecided(f"state {query_id} already has outcome {query.outcome}")
    target = model.view(query_id)

    precedents = []
    for state in model.decided_states:
        view = model.view(state.id)
        precedents.append((state, view))

    established: List[FrozenSet[str]] = [frozenset(query.facts)]
    records: List[ConcernRecord] = []
    for degree in range(1, h.top_degree + 1):
        context = established[-1]
        for concern in h.concerns_of_degree(degree):
            cite: Dict[str, List[str]] = {side: [] for side in concern.members}
            for state, view in precedents:
                side = view.decision_on(concern)
                if side == UNDECIDED:
                    continue
                if precedent_filter is not None and not precedent_filter(
                    state, concern
                ):
                    continue
                pro = context & h.favoring(side)
                con = context & h.favoring(h.opposite(side))
                if _relevance(h, pro, con, view, target, concern):
                    cite[side].append(state.id)
            forced = frozenset(side for side in concern.members if cite[side])
            records.append(
                ConcernRecord(
                    concern=concern,
                    degree=degree,
                    cite={side: tuple(sorted(ids)) for side, ids in cite.items()},
                    forced=forced,
                    ambiguity=_ambiguity(forced),
                    negligible=False,
                )
            )
        forced_here = frozenset(
            side for record in records if record.degree == degree for side in record.forced
        )
        established.append(context | forced_here)

    final = established[-1]
    top = h.top_concern
    verdict = frozenset()
    if top is not None:
        verdict = next(r for r in records if r.concern == top).forced
    if len(verdict) == 1:
        records = [
            replace_record(r, negligible=(r.ambiguity == AMBIGUOUS and r.concern != top))
            for r in records
        ]
    return DecisionTrace(
        query_id=query_id,
        base_facts=frozenset(query.facts),
        records=tuple(records),
        established=tuple(established),
        final_factors=final,
        verdict=verdict,
    )


def replace_record(record: ConcernRecord, **changes) -> ConcernRecord:
    return replace(record, **changes)


def _ambiguity(forced: FrozenSet[str]) -> str:
    if not forced:
        return NONE_POSSIBLE
    return UNAMBIGUOUS if len(forced) == 1 else AMBIGUOUS


def classify_ambiguity(trace: DecisionTrace, concern: Concern) -> str:
    """How the decision process came out for one concern."""
    return trace.record_for(concern).ambiguity


def negligible(trace: DecisionTrace, concern: Concern) -> bool:
    """An ambiguous concern is negligible when the verdict is unambiguous
    regardless."""
    return (
        len(trace.verdict) == 1
        and trace.record_for(concern).ambiguity == AMBIGUOUS
        and not trace.record_for(concern).concern.is_top
    )


# -- conflict-free partitions and solution synthesis ----------------------------

def conflict_free_partitions(
    h: Hierarchy, established: Iterable[str]
) -> Tuple[FrozenSet[str], ...]:
    """All maximal one-side-per-concern selections from an established set."""
    pool = frozenset(established)
    if not pool:
        raise EmptyEstablishedSet("cannot partition an empty established set")
    keep = {t for t in pool if h.kind(t) == "base"}
    contested: Dict[Concern, List[str]] = {}
    for token in sorted(pool - keep):
        contested.setdefault(h.concern(token), []).append(token)
    choices = [sorted(sides) for _, sides in sorted(
        contested.items(), key=lambda item: (h.degree(item[0]), item[0].label)
    )]
    partitions = []
    for pick in product(*choices):
        partitions.append(frozenset(keep) | frozenset(pick))
    return tuple(sorted(partitions, key=sorted))


def synthesize_solutions(
    model: ClassifierModel,
    query_id: str,
    trace: DecisionTrace,
    max_candidates: int = MAX_CANDIDATES,
) -> FrozenSet[Solution]:
    """Assemble the admissible rule sets the new case could be decided by.

    For each conflict-free partition, each concern the partition takes a
    side on must be resolved by a rule whose antecedent contains some cited
    precedent's reason and stays inside the partition's factors for that
    side.  Concerns the partition never touches (possible only when no
    precedent constrains them) may be resolved freely, but only with factors
    already present in the query or the partition, so no synthesized
    solution smuggles in stronger reasons than the process established.
    """
    h = model.hierarchy
    query = model.state(query_id)
    if len(trace.verdict) > 1:
        raise AmbiguousVerdict(
            f"no solution can serve both verdicts {sorted(trace.verdict)}"
        )
    if not trace.verdict:
        return frozenset()

    required = h.concern_closure(query.facts)
    required_set = frozenset(required)
    out: set = set()
    for partition in conflict_free_partitions(h, trace.final_factors):
        intermediates = frozenset(
            t for t in partition if h.kind(t) == "intermediate"
        )
        if any(h.concern(t) not in required_set for t in intermediates):
            continue  # nothing over the query can conclude them
        per_concern: List[List[Rule]] = []
        dead = False
        for concern in required:
            sides_in_partition = partition & set(concern.members)
            if sides_in_partition:
                side = next(iter(sides_in_partition))
                candidates = _cited_candidates(
                    model, trace, concern, side, partition, max_candidates
                )
            else:
                candidates = _free_candidates(
                    h, concern, query.facts, intermediates, max_candidates
                )
            if not candidates:
                dead = True
                break
            per_concern.append(candidates)
        if dead:
            continue
        for combo in product(*per_concern):
            out.add(Solution(rules=frozenset(combo), facts=frozenset(query.facts)))
    return frozenset(out)


def _cited_candidates(
    model: ClassifierModel,
    trace: DecisionTrace,
    concern: Concern,
    side: str,
    partition: FrozenSet[str],
    max_candidates: int,
) -> List[Rule]:
    """Rules sandwiched between a cited reason and the partition's side."""
    h = model.hierarchy
    record = trace.record_for(concern)
    cited = record.cite.get(side, ())
    if not cited:
        return []
    upper = partition & h.favoring(side)
    antecedents: set = set()
    for state_id in cited:
        lower = model.view(state_id).reason_for(side)
        if not lower or not lower <= upper:
            continue
        slack = sorted(upper - lower)
        if len(antecedents) + (1 << len(slack)) > max_candidates:
            raise ScaleGuardExceeded(
                f"more than {max_candidates} candidate antecedents for {concern}"
            )
        for extra in _subsets(slack):
            antecedents.add(lower | frozenset(extra))
    return [
        Rule(conclusion=side, antecedent=a)
        for a in sorted(antecedents, key=lambda s: (len(s), sorted(s)))
    ]


def _free_candidates(
    h: Hierarchy,
    concern: Concern,
    base_facts: FrozenSet[str],
    partition_intermediates: FrozenSet[str],
    max_candidates: int,
) -> List[Rule]:
    """Minimal rules for a concern no precedent constrains."""
    allowed = base_facts | partition_intermediates
    rules: List[Rule] = []
    for side in concern.members:
        pool = sorted(h.favoring(side) & allowed)
        if not pool:
            continue
        if len(rules) + (1 << len(pool)) > max_candidates:
            raise ScaleGuardExceeded(
                f"more than {max_candidates} candidate antecedents for {concern}"
            )
        for subset in _subsets(pool):
            if subset:
                rules.append(Rule(conclusion=side, antecedent=frozenset(subset)))
    rules.sort(key=rule_sort_key)
    return rules


def _subsets(items: Sequence[str]) -> Iterable[Tuple[str, ...]]:
    return chain.from_iterable(
        combinations(items, size) for size in range(len(items) + 1)
    )
