"""Courts and time: which precedents actually bind a new case.

Vertical stare decisis: a court's decisions bind every strictly lower court,
and a court may additionally bind itself.  A precedent loses force on a
concern when a later, strictly higher court decides a relevant state the
other way (overruling, possibly partial), or when it was itself decided in
disregard of a then-clean binding precedent by a court without the power to
overrule it (per incuriam).  The authority-filtered decision process cites
only binding precedents without exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .classifier import ClassifierModel, State, UNDECIDED
from .errors import (
    DuplicateTimestamp,
    InvalidCourtOrder,
    MissingMetadata,
)
from .hierarchy import Concern
from .reasoning import (
    AuthorityNote,
    DecisionTrace,
    StateView,
    _relevance,
    decide,
)

CLEAN = "clean"
OVERRULED = "overruled"
PER_INCURIAM = "per-incuriam"


@dataclass(frozen=True)
class CourtSystem:
    """A strict partial order of courts plus self-binding declarations."""

    courts: FrozenSet[str]
    order: Tuple[Tuple[str, str], ...]  # declared (higher, lower) pairs
    selfbound: FrozenSet[str]
    strict_incuriam: bool = True
    _above: FrozenSet[Tuple[str, str]] = field(compare=False, repr=False, default=frozenset())

    @classmethod
    def build(
        cls,
        order: Iterable[Tuple[str, str]] = (),
        selfbound: Iterable[str] = (),
        courts: Iterable[str] = (),
        strict_incuriam: bool = True,
    ) -> "CourtSystem":
        pairs = tuple(dict.fromkeys(tuple(p) for p in order))
        bound = frozenset(selfbound)
        names = frozenset(courts) | bound | {c for p in pairs for c in p}

        above = set(pairs)
        changed = True
        while changed:  # transitive closure
            changed = False
            for a, b in list(above):
                for c, d in list(above):
                    if b == c and (a, d) not in above:
                        above.add((a, d))
                        changed = True
        for court in names:
            if (court, court) in above:
                raise InvalidCourtOrder(f"court {court} is above itself")
        return cls(
            courts=names,
            order=pairs,
            selfbound=bound,
            strict_incuriam=strict_incuriam,
            _above=frozenset(above),
        )

    def higher_than(self, a: str, b: str) -> bool:
        return (a, b) in self._above

    def binds(self, precedent_court: str, deciding_court: str) -> bool:
        if self.higher_than(precedent_court, deciding_court):
            return True
        return precedent_court == deciding_court and precedent_court in self.selfbound

    def can_overrule(self, a: str, b: str) -> bool:
        return self.higher_than(a, b)


@dataclass(frozen=True)
class StatusEntry:
    """Authority status of one decided state for one concern."""

    state_id: str
    concern: Concern
    status: str  # CLEAN | OVERRULED | PER_INCURIAM
    other: Optional[str] = None  # the overruling state, or the ignored precedent
    at: Optional[int] = None  # timestamp of the overruling / ignored decision


class StatusTable:
    """Per-(state, concern) statuses, computed once per model."""

    def __init__(self, entries: Dict[Tuple[str, str], StatusEntry]):
        self._entries = entries

    def status(self, state_id: str, concern: Concern) -> StatusEntry:
        return self._entries.get(
            (state_id, concern.positive),
            StatusEntry(state_id=state_id, concern=concern, status=CLEAN),
        )

    def flagged(self) -> Tuple[StatusEntry, ...]:
        return tuple(
            sorted(
                (e for e in self._entries.values() if e.status != CLEAN),
                key=lambda e: (e.state_id, e.concern.label),
            )
        )


def precedent_statuses(model: ClassifierModel, courts: CourtSystem) -> StatusTable:
    """Compute overruled and per-incuriam flags for every decided state.

    States are swept in timestamp order so that "clean at the time" is
    well-defined: a precedent counts as ignored only if, when the violating
    state was decided, it was not itself per incuriam and had not yet been
    overruled.  When a state ends up both overruled and per incuriam on the
    same concern, the overruling is reported.
    """
    h = model.hierarchy
    ordered = _timeline(model, courts)
    views = {state.id: model.view(state.id) for state, _ in ordered}

    overrulings: Dict[Tuple[str, str], StatusEntry] = {}
    incuriam: Dict[Tuple[str, str], StatusEntry] = {}

    def conflict_relevant(loser: StateView, winner: StateView, concern: Concern) -> bool:
        side = loser.decision_on(concern)
        return _relevance(
            h, winner.favoring_within(h, side), frozenset(), loser, winner, concern
        )

    def overruled_before(state_id: str, concern: Concern, when: Optional[int]) -> bool:
        entry = overrulings.get((state_id, concern.positive))
        return entry is not None and when is not None and entry.at is not None and entry.at < when

    # overrulings first: any later, strictly higher, contrary, relevant state
    for i, (state, time) in enumerate(ordered):
        view = views[state.id]
        for concern, side in sorted(
            view.decisions.items(), key=lambda kv: kv[0].label
        ):
            for later, later_time in ordered[i + 1 :]:
                other = views[later.id]
                if other.decision_on(concern) != h.opposite(side):
                    continue
                if not courts.can_overrule(later.court, state.court):
                    continue
                if conflict_relevant(view, other, concern):
                    overrulings[(state.id, concern.positive)] = StatusEntry(
                        state_id=state.id,
                        concern=concern,
                        status=OVERRULED,
                        other=later.id,
                        at=later_time,
                    )
                    break

    # forward sweep for per incuriam
    for i, (state, time) in enumerate(ordered):
        view = views[state.id]
        for concern, side in sorted(
            view.decisions.items(), key=lambda kv: kv[0].label
        ):
            for earlier, earlier_time in ordered[:i]:
                other = views[earlier.id]
                if other.decision_on(concern) != h.opposite(side):
                    continue
                if not courts.binds(earlier.court, state.court):
                    continue
                if courts.can_overrule(state.court, earlier.court):
                    continue
                if (earlier.id, concern.positive) in incuriam:
                    continue  # not clean when this state was decided
                if overruled_before(earlier.id, concern, time):
                    continue
                if conflict_relevant(other, view, concern):
                    incuriam[(state.id, concern.positive)] = StatusEntry(
                        state_id=state.id,
                        concern=concern,
                        status=PER_INCURIAM,
                        other=earlier.id,
                        at=earlier_time,
                    )
                    break

    merged = dict(incuriam)
    merged.update(overrulings)  # overruling takes precedence in the report
    return StatusTable(merged)


def status(
    model: ClassifierModel, courts: CourtSystem, state_id: str, concern: Concern
) -> StatusEntry:
    """Authority status of one decided state for one concern."""
    return precedent_statuses(model, courts).status(state_id, concern)


def binding_without_exceptions(
    model: ClassifierModel,
    courts: CourtSystem,
    query_id: str,
    table: Optional[StatusTable] = None,
):
    """Predicate accepting the precedents that bind the query's court and
    whose decision on the concern at hand is neither overruled nor per
    incuriam.

    With ``strict_incuriam`` disabled on the court system, a per-incuriam
    precedent from a court strictly above the deciding court is re-admitted.
    """
    query = model.state(query_id)
    if query.court is None:
        raise MissingMetadata(f"state {query_id} carries no court")
    if table is None:
        table = precedent_statuses(model, courts)

    def accepts(state: State, concern: Concern) -> bool:
        if state.court is None or state.time is None:
            raise MissingMetadata(f"state {state.id} lacks court or timestamp")
        if not courts.binds(state.court, query.court):
            return False
        if query.time is not None and state.time >= query.time:
            return False
        entry = table.status(state.id, concern)
        if entry.status == CLEAN:
            return True
        if (
            entry.status == PER_INCURIAM
            and not courts.strict_incuriam
            and courts.higher_than(state.court, query.court)
        ):
            return True
        return False

    return accepts


def decide_with_authority(
    model: ClassifierModel, courts: CourtSystem, query_id: str
) -> DecisionTrace:
    """The decision process restricted to binding precedents without
    exceptions, with the computed statuses attached to the trace."""
    table = precedent_statuses(model, courts)
    accepts = binding_without_exceptions(model, courts, query_id, table)
    trace = decide(model, query_id, precedent_filter=accepts)
    notes = tuple(
        AuthorityNote(
            state_id=e.state_id, concern=e.concern, status=e.status, other=e.other
        )
        for e in table.flagged()
    )
    return replace(trace, authority=notes)


def _timeline(
    model: ClassifierModel, courts: CourtSystem
) -> List[Tuple[State, int]]:
    ordered = []
    seen_times: Dict[int, str] = {}
    for state in model.decided_states:
        if state.court is None or state.time is None:
            raise MissingMetadata(f"state {state.id} lacks court or timestamp")
        if state.court not in courts.courts:
            raise MissingMetadata(
                f"state {state.id} sits at undeclared court {state.court}"
            )
        if state.time in seen_times:
            raise DuplicateTimestamp(
                f"states {seen_times[state.time]} and {state.id} share timestamp {state.time}"
            )
        seen_times[state.time] = state.id
        ordered.append((state, state.time))
    ordered.sort(key=lambda pair: pair[1])
    return ordered
