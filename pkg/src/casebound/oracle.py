"""Deliberately naive reference implementations.

Everything here trades speed for obvious correctness: solutions are found by
exhaustive enumeration, consistency by enumerating reason-set pairs, and
synthesis by filtering the full solution space.  Scale guards reject inputs
whose enumeration would stop being tractable, so these can back property
tests without dominating a test run.

``random_model`` builds reproducible models for those property tests:
hierarchies honoring all structural constraints by construction, decided
states assembled by replaying random resolution policies, and a query state
whose raised concerns are (whenever the draw allows) all constrained by some
precedent, which is the regime the synthesis guarantees are stated for.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import chain, combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .casebase import CaseBase, build_opinion
from .classifier import (
    ClassifierModel,
    State,
    UNDECIDED,
    casebase_from_model,
)
from .errors import ScaleGuardExceeded
from .hierarchy import Concern, Hierarchy
from .reasoning import DecisionTrace, decide
from .rules import Rule, Solution, is_minimal_for, rule_sort_key

MAX_ENUMERATION = 1 << 20
MAX_BASE = 8
MAX_PAIRS = 4


def _subsets(items: Sequence) -> Iterator[Tuple]:
    return chain.from_iterable(
        combinations(items, size) for size in range(len(items) + 1)
    )


def _nonempty_subsets(items: Sequence) -> Iterator[Tuple]:
    return chain.from_iterable(
        combinations(items, size) for size in range(1, len(items) + 1)
    )


# -- exhaustive solution enumeration --------------------------------------------

def iter_solutions(
    h: Hierarchy, facts: Iterable[str], budget: int = MAX_ENUMERATION
) -> Iterator[Solution]:
    """Yield every applicable solution over base facts.

    Concerns are filled in degree order, so a rule's antecedent can only
    draw on the base facts and conclusions already chosen; by construction
    each complete assignment satisfies grounding, completeness, and
    uniqueness, and every applicable solution arises from exactly one
    assignment.
    """
    if len(h.base) > MAX_BASE or len(h.intermediate) > 2 * MAX_PAIRS:
        raise ScaleGuardExceeded(
            f"hierarchy beyond oracle scale ({len(h.base)} base factors, "
            f"{len(h.intermediate) // 2} intermediate pairs)"
        )
    fact_set = frozenset(facts)
    required = h.concern_closure(fact_set)
    spent = [0]

    def extend(index: int, available: FrozenSet[str], chosen: Tuple[Rule, ...]):
        if index == len(required):
            yield Solution(rules=frozenset(chosen), facts=fact_set)
            return
        concern = required[index]
        for side in concern.members:
            pool = sorted(h.favoring(side) & available)
            for antecedent in _nonempty_subsets(pool):
                spent[0] += 1
                if spent[0] > budget:
                    raise ScaleGuardExceeded(
                        f"solution enumeration over {sorted(fact_set)} "
                        f"exceeded {budget} candidates"
                    )
                rule = Rule(conclusion=side, antecedent=frozenset(antecedent))
                yield from extend(index + 1, available | {side}, chosen + (rule,))

    return extend(0, fact_set, ())


def enumerate_solutions(
    h: Hierarchy, facts: Iterable[str], budget: int = MAX_ENUMERATION
) -> FrozenSet[Solution]:
    """The full set of applicable solutions over base facts."""
    return frozenset(iter_solutions(h, facts, budget))


# -- brute-force consistency ------------------------------------------------------

def brute_consistency(
    cb: CaseBase, concern: Concern, budget: int = MAX_ENUMERATION
) -> bool:
    """Consistency by enumerating every reason-set pair.

    Walks all ``U`` inside the favoring set of one side and all ``V`` inside
    the other, testing both orientations against the decisions of the case
    base directly; returns True when no pair is ordered both ways.
    """
    h = cb.hierarchy
    pos, neg = concern.positive, concern.negative
    pos_pool = sorted(h.favoring(pos))
    neg_pool = sorted(h.favoring(neg))
    if (1 << len(pos_pool)) * (1 << len(neg_pool)) > budget:
        raise ScaleGuardExceeded(
            f"{concern} has {len(pos_pool)}+{len(neg_pool)} favoring factors, "
            f"too many subset pairs"
        )

    decisions = []
    for case in cb.cases:
        decision = case.opinion.decision_for(concern)
        if decision is not None:
            decisions.append(decision)

    def derivable(weaker: FrozenSet[str], stronger: FrozenSet[str], side: str) -> bool:
        for d in decisions:
            if d.outcome != side:
                continue
            if weaker <= d.facts and d.rule.antecedent <= stronger:
                return True
        return False

    for u_tuple in _subsets(neg_pool):
        u = frozenset(u_tuple)
        for v_tuple in _subsets(pos_pool):
            v = frozenset(v_tuple)
            if derivable(u, v, pos) and derivable(v, u, neg):
                return False
    return True


# -- brute-force solution synthesis -------------------------------------------------

def brute_synthesize(
    model: ClassifierModel,
    query_id: str,
    trace: DecisionTrace,
    budget: int = MAX_ENUMERATION,
) -> FrozenSet[Solution]:
    """Filter the full solution space by the synthesis conditions.

    Independent route to the constructive synthesis: enumerate everything
    applicable to the query's facts, keep a solution when some conflict-free
    partition of the established set accepts it, i.e. the partition's
    intermediates are all concluded, rules on partition-touched concerns
    conclude the partition's side within the cited bounds, and rules on
    unconstrained concerns stay minimal.
    """
    from .reasoning import conflict_free_partitions

    h = model.hierarchy
    query = model.state(query_id)
    if not trace.verdict or len(trace.verdict) > 1:
        return frozenset()
    every = enumerate_solutions(h, query.facts, budget)
    accepted = set()
    for partition in conflict_free_partitions(h, trace.final_factors):
        intermediates = frozenset(t for t in partition if h.kind(t) == "intermediate")
        for sol in every:
            if not intermediates <= sol.conclusions:
                continue
            if _passes_synthesis_conditions(model, trace, sol, partition, intermediates, query.facts):
                accepted.add(sol)
    return frozenset(accepted)


def _passes_synthesis_conditions(
    model: ClassifierModel,
    trace: DecisionTrace,
    sol: Solution,
    partition: FrozenSet[str],
    intermediates: FrozenSet[str],
    base_facts: FrozenSet[str],
) -> bool:
    h = model.hierarchy
    for rule in sol.rules:
        concern = rule.concern
        touched = partition & set(concern.members)
        if touched:
            side = next(iter(touched))
            if rule.conclusion != side:
                return False
            record = trace.record_for(concern)
            upper = partition & h.favoring(side)
            sandwiched = any(
                model.view(cited).reason_for(side) <= rule.antecedent <= upper
                for cited in record.cite.get(side, ())
            )
            if not sandwiched:
                return False
        else:
            if not is_minimal_for(h, sol, concern, intermediates, base_facts):
                return False
    return True


# -- reproducible random models ---------------------------------------------------------

@dataclass(frozen=True)
class GeneratedModel:
    """One generated property-test instance."""

    seed: int
    model: ClassifierModel
    courts: Optional[object]  # CourtSystem when drawn with courts
    query_id: str
    covered: bool  # every concern the query raises has a citable precedent


def random_model(
    seed: int,
    max_base: int = 6,
    max_pairs: int = 3,
    max_decided: int = 4,
    with_courts: bool = False,
) -> GeneratedModel:
    """A reproducible random classifier model plus one undecided query.

    The hierarchy is layered so acyclicity, the link constraints, and
    non-orphan concerns hold by construction.  Decided states replay random
    resolution policies over random fact draws; the query's facts are
    redrawn a few times in favor of instances where every raised concern is
    constrained by some precedent (``covered``), the regime in which the
    synthesis guarantees apply.
    """
    rng = random.Random(seed)
    h = _random_hierarchy(rng, max_base, max_pairs)

    states: List[State] = []
    n_decided = rng.randint(1, max_decided)
    for index in range(n_decided):
        state = _random_decided_state(rng, h, f"s{index + 1}")
        if state is not None:
            states.append(state)

    courts = None
    if with_courts:
        courts = _random_courts(rng)
        court_names = sorted(courts.courts)
        for i, state in enumerate(states):
            states[i] = State(
                id=state.id,
                facts=state.facts,
                rules=state.rules,
                outcome=state.outcome,
                court=rng.choice(court_names),
                time=i + 1,
            )

    query_court = sorted(courts.courts)[-1] if courts is not None else None
    base_sorted = sorted(h.base)
    query = None
    covered = False
    probe = None
    for attempt in range(8):
        facts = frozenset(
            rng.sample(base_sorted, rng.randint(1, len(base_sorted)))
        )
        candidate = State.make("snew", facts, court=query_court)
        probe = ClassifierModel.build(h, tuple(states) + (candidate,))
        trace = decide(probe, "snew")
        required = set(h.concern_closure(facts))
        ok = all(trace.record_for(c).forced for c in required)
        if query is None or (ok and not covered):
            query = candidate
            covered = ok
            model = probe
        if covered:
            break

    return GeneratedModel(
        seed=seed, model=model, courts=courts, query_id="snew", covered=covered
    )


def _random_hierarchy(rng: random.Random, max_base: int, max_pairs: int) -> Hierarchy:
    n_base = rng.randint(3, max_base)
    n_pairs = rng.randint(1, max_pairs)
    base = [f"f{i + 1}" for i in range(n_base)]
    pairs = ["p", "q", "r", "w"][:n_pairs]

    levels: Dict[str, int] = {}
    for i, name in enumerate(pairs):
        levels[name] = 1 if i == 0 else rng.randint(1, levels[pairs[i - 1]] + 1)

    links: List[Tuple[str, str]] = []
    for name in pairs:
        lower_members = [p for p in pairs if levels[p] < levels[name]]
        candidates = base + [m for p in lower_members for m in (p, p + "'")]
        pos_pool = rng.sample(candidates, min(len(candidates), rng.randint(1, 3)))
        pos_pick: List[str] = []
        for token in pos_pool:
            if token.rstrip("'") not in {t.rstrip("'") for t in pos_pick}:
                pos_pick.append(token)
        remaining = [
            t
            for t in candidates
            if t.rstrip("'") not in {x.rstrip("'") for x in pos_pick}
        ]
        neg_pool = rng.sample(remaining, min(len(remaining), rng.randint(0, 2)))
        neg_pick: List[str] = []
        for token in neg_pool:
            if token.rstrip("'") not in {t.rstrip("'") for t in neg_pick}:
                neg_pick.append(token)
        for token in pos_pick:
            links.append((token, name))
        for token in neg_pick:
            links.append((token, name + "'"))

    top_candidates = base + [m for p in pairs for m in (p, p + "'")]
    used_concerns: set = set()
    n_top = rng.randint(1, 2)
    for _ in range(n_top):
        choices = [t for t in top_candidates if t.rstrip("'") not in used_concerns]
        if not choices:
            break
        token = rng.choice(choices)
        used_concerns.add(token.rstrip("'"))
        links.append((token, rng.choice(("0", "1"))))

    h = Hierarchy.build(base=base, intermediate=pairs, links=links)
    # every intermediate concern must sit strictly below the outcome concern,
    # or the staged procedures would never reach it; feed the outcome from a
    # maximal pair when the draw left it too low
    tallest = max((h.degree(h.concern(p)) for p in pairs), default=0)
    if tallest >= h.top_degree:
        link_set = set(links)
        for name in pairs:
            if h.degree(h.concern(name)) != tallest:
                continue
            for member in (name, name + "'"):
                for outcome in ("1", "0"):
                    clash = (member, "0" if outcome == "1" else "1") in link_set or (
                        (h.opposite(member), outcome) in link_set
                    )
                    if not clash and (member, outcome) not in link_set:
                        return Hierarchy.build(
                            base=base, intermediate=pairs, links=links + [(member, outcome)]
                        )
    return h


def _random_decided_state(
    rng: random.Random, h: Hierarchy, state_id: str
) -> Optional[State]:
    base_sorted = sorted(h.base)
    for _ in range(20):
        facts = frozenset(rng.sample(base_sorted, rng.randint(1, len(base_sorted))))

        def choose(current: FrozenSet[str], concern: Concern) -> Optional[Rule]:
            sides = [s for s in concern.members if h.favoring(s) & current]
            if not sides:
                return None
            side = rng.choice(sides)
            pool = sorted(h.favoring(side) & current)
            size = rng.randint(1, len(pool))
            return Rule(conclusion=side, antecedent=frozenset(rng.sample(pool, size)))

        opinion = build_opinion(h, facts, choose)
        top = opinion.outcome_decision
        if top is None:
            continue  # the draw never reached the outcome concern
        rules = frozenset(d.rule for d in opinion.decisions)
        return State.make(state_id, facts, rules, top.outcome)
    return None


def _random_courts(rng: random.Random):
    from .authority import CourtSystem

    n = rng.randint(2, 3)
    names = [f"k{i}" for i in range(n)]
    order = [(names[i], names[i + 1]) for i in range(n - 1)]
    selfbound = [c for c in names if rng.random() < 0.5]
    return CourtSystem.build(order=order, selfbound=selfbound)
