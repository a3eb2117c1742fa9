"""Single-issue factor hierarchies.

A hierarchy declares base factors (atomic facts), intermediate factors
(derived legal concepts, always in opposite pairs such as ``p``/``p'``) and
favoring links between them.  The two outcome values ``0`` (for the
defendant) and ``1`` (for the plaintiff) are always present.  Validation
precomputes the favoring set of every intermediate factor and outcome, the
degree of every factor and concern, and rejects structures under which those
notions would be undefined.

Factors are plain strings: a trailing apostrophe marks the negative member of
an intermediate pair, and ``"0"``/``"1"`` are the outcome values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

from .errors import (
    ConflictingLinks,
    CycleError,
    DanglingFactor,
    NotAFavoredTarget,
    OrphanConcern,
)

FOR_DEFENDANT = "0"
FOR_PLAINTIFF = "1"
OUTCOMES = (FOR_DEFENDANT, FOR_PLAINTIFF)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_outcome(token: str) -> bool:
    return token == FOR_DEFENDANT or token == FOR_PLAINTIFF


def opposite(token: str) -> str:
    """Opposite of an intermediate factor or outcome value (an involution)."""
    if token == FOR_DEFENDANT:
        return FOR_PLAINTIFF
    if token == FOR_PLAINTIFF:
        return FOR_DEFENDANT
    if token.endswith("'"):
        return token[:-1]
    return token + "'"


def positive_form(token: str) -> str:
    """Canonical representative of the concern a factor belongs to."""
    if is_outcome(token):
        return FOR_PLAINTIFF
    return token[:-1] if token.endswith("'") else token


@dataclass(frozen=True, order=True)
class Concern:
    """The question whether a factor or its opposite holds.

    Identified by its positive member; the top-level concern is identified
    by ``"1"`` and rendered ``0/1``.
    """

    positive: str

    @property
    def negative(self) -> str:
        return opposite(self.positive)

    @property
    def members(self) -> Tuple[str, str]:
        return (self.positive, self.negative)

    @property
    def is_top(self) -> bool:
        return is_outcome(self.positive)

    @property
    def label(self) -> str:
        if self.is_top:
            return "0/1"
        return f"{self.positive}/{self.positive}'"

    def __str__(self) -> str:
        return self.label


def concern_of(token: str) -> Concern:
    return Concern(positive_form(token))


@dataclass(frozen=True)
class Hierarchy:
    """A validated factor hierarchy with precomputed favoring and degree tables."""

    base: FrozenSet[str]
    intermediate: FrozenSet[str]  # closed under opposite
    links: FrozenSet[Tuple[str, str]]
    _favoring: Dict[str, FrozenSet[str]] = field(compare=False, repr=False)
    _degree: Dict[str, int] = field(compare=False, repr=False)
    _concerns: Tuple[Concern, ...] = field(compare=False, repr=False)

    # -- construction ---------------------------------------------------

    @classmethod
    def build(
        cls,
        base: Iterable[str],
        intermediate: Iterable[str] = (),
        links: Iterable[Tuple[str, str]] = (),
    ) -> "Hierarchy":
        """Validate raw declarations and build the hierarchy.

        ``intermediate`` lists the positive member of each pair; the opposite
        is generated automatically so that half-declared pairs cannot exist.
        """
        base_set = frozenset(base)
        positives = frozenset(intermediate)
        for name in base_set | positives:
            if not _NAME.match(name):
                raise DanglingFactor(f"malformed factor name {name!r}")
        clash = base_set & positives
        if clash:
            raise DanglingFactor(
                f"declared both base and intermediate: {_fmt(clash)}"
            )
        inter_set = frozenset(positives | {p + "'" for p in positives})

        link_set = frozenset(tuple(link) for link in links)
        factors = base_set | inter_set | set(OUTCOMES)
        for source, target in link_set:
            if source not in base_set and source not in inter_set:
                raise DanglingFactor(f"link source {source!r} is not a declared factor")
            if target not in inter_set and not is_outcome(target):
                raise DanglingFactor(
                    f"link target {target!r} is not an intermediate factor or outcome"
                )
        for source, target in link_set:
            if source in inter_set and (opposite(source), target) in link_set:
                raise ConflictingLinks(
                    f"{source} and {opposite(source)} both favor {target}"
                )
            if (source, opposite(target)) in link_set:
                raise ConflictingLinks(
                    f"{source} favors both {target} and {opposite(target)}"
                )

        favoring: Dict[str, FrozenSet[str]] = {}
        for target in sorted(inter_set) + list(OUTCOMES):
            direct = {s for s, t in link_set if t == target}
            mirrored = {
                opposite(s)
                for s, t in link_set
                if t == opposite(target) and s in inter_set
            }
            favoring[target] = frozenset(direct | mirrored)

        for positive in sorted(positives):
            if not favoring[positive] and not favoring[positive + "'"]:
                raise OrphanConcern(
                    f"nothing favors {positive} or {positive}'; its degree is undefined"
                )

        degree = _compute_degrees(base_set, positives, favoring)
        concerns = [Concern(p) for p in positives]
        if favoring[FOR_PLAINTIFF] or favoring[FOR_DEFENDANT]:
            concerns.append(Concern(FOR_PLAINTIFF))
        concerns.sort(key=lambda c: (degree[c.positive], c.label))
        return cls(
            base=base_set,
            intermediate=inter_set,
            links=link_set,
            _favoring=favoring,
            _degree=degree,
            _concerns=tuple(concerns),
        )

    # -- factor queries ---------------------------------------------------

    def kind(self, token: str) -> str:
        if token in self.base:
            return "base"
        if token in self.intermediate:
            return "intermediate"
        if is_outcome(token):
            return "outcome"
        raise DanglingFactor(f"unknown factor {token!r}")

    def opposite(self, token: str) -> str:
        if self.kind(token) == "base":
            raise DanglingFactor(f"base factor {token!r} has no opposite")
        return opposite(token)

    def favoring(self, target: str) -> FrozenSet[str]:
        """The factors whose presence supports concluding ``target``."""
        if self.kind(target) == "base":
            raise NotAFavoredTarget(f"{target!r} is a base factor")
        return self._favoring[target]

    def degree(self, item) -> int:
        """Degree of a factor or a concern; base factors have degree 0."""
        if isinstance(item, Concern):
            return self._degree[item.positive]
        self.kind(item)
        return self._degree[item]

    def concern(self, token: str) -> Concern:
        """The concern a factor or concern label belongs to."""
        if "/" in token:
            token = token.split("/", 1)[0] or FOR_PLAINTIFF
        if self.kind(token) == "base":
            raise NotAFavoredTarget(f"{token!r} is a base factor, not a concern member")
        return concern_of(token)

    # -- concern queries -----------------------------------------------------

    @property
    def concerns(self) -> Tuple[Concern, ...]:
        """All concerns, ordered by degree then label."""
        return self._concerns

    @property
    def top_concern(self) -> Optional[Concern]:
        top = Concern(FOR_PLAINTIFF)
        return top if top in self._concerns else None

    @property
    def top_degree(self) -> int:
        """Degree of the outcome concern; 0 when nothing favors an outcome."""
        return self._degree[FOR_PLAINTIFF]

    def concerns_of_degree(self, n: int) -> Tuple[Concern, ...]:
        return tuple(c for c in self._concerns if self._degree[c.positive] == n)

    def concerns_raised(
        self, facts: Iterable[str], degree: Optional[int] = None
    ) -> FrozenSet[Concern]:
        """The concerns some member of ``facts`` favors a side of."""
        present = frozenset(facts)
        for token in present:
            if self.kind(token) == "outcome":
                raise DanglingFactor(f"{token!r} cannot appear in a fact situation")
        raised = set()
        for concern in self._concerns:
            if degree is not None and self._degree[concern.positive] != degree:
                continue
            sides = self._favoring[concern.positive] | self._favoring[concern.negative]
            if present & sides:
                raised.add(concern)
        return frozenset(raised)

    def concern_closure(self, facts: Iterable[str]) -> Tuple[Concern, ...]:
        """The concerns any complete rule set over ``facts`` must resolve.

        Starts from the concerns raised by ``facts`` and closes under the
        concerns that resolving a concern (with either conclusion) would
        raise in turn.  Which side is concluded never matters because a
        factor and its opposite favor sides of exactly the same concerns.
        """
        required = set(self.concerns_raised(facts))
        frontier = list(required)
        while frontier:
            concern = frontier.pop()
            for member in concern.members:
                if member not in self.intermediate:
                    continue
                for above in self.concerns_raised((member,)):
                    if above not in required:
                        required.add(above)
                        frontier.append(above)
        return tuple(
            sorted(required, key=lambda c: (self._degree[c.positive], c.label))
        )


def validate_hierarchy(
    base: Iterable[str],
    intermediate: Iterable[str] = (),
    links: Iterable[Tuple[str, str]] = (),
) -> Hierarchy:
    """Functional alias for :meth:`Hierarchy.build`."""
    return Hierarchy.build(base, intermediate, links)


def _compute_degrees(
    base: FrozenSet[str],
    positives: FrozenSet[str],
    favoring: Dict[str, FrozenSet[str]],
) -> Dict[str, int]:
    """Degrees of all factors, computed concern by concern.

    Both members of a pair share the degree of their concern, which is one
    more than the largest degree among the factors favoring either side.
    The recursion is well-founded only if no concern (transitively) depends
    on itself, so cycles at the concern level are rejected even when the raw
    link graph happens to be acyclic.
    """
    degree: Dict[str, int] = {b: 0 for b in base}
    visiting: set = set()

    def concern_degree(positive: str) -> int:
        if positive in degree:
            return degree[positive]
        if positive in visiting:
            raise CycleError(f"the concern of {positive} depends on itself")
        visiting.add(positive)
        pool = favoring[positive] | favoring[opposite(positive)]
        best = 0
        for member in pool:
            if member in base:
                continue
            best = max(best, concern_degree(positive_form(member)))
        value = 1 + best if pool else 0
        visiting.discard(positive)
        degree[positive] = value
        degree[opposite(positive)] = value
        return value

    for positive in sorted(positives):
        concern_degree(positive)
    concern_degree(FOR_PLAINTIFF)
    return degree


def _fmt(tokens: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(tokens)) + "}"
