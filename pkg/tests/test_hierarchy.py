import pytest

from casebound.errors import (
    ConflictingLinks,
    CycleError,
    DanglingFactor,
    NotAFavoredTarget,
    OrphanConcern,
)
from casebound.hierarchy import Concern, Hierarchy, concern_of, opposite

from conftest import STANDARD_LINKS


def test_standard_hierarchy_validates(standard_hierarchy):
    h = standard_hierarchy
    assert h.top_degree == 3
    assert h.kind("f1") == "base"
    assert h.kind("p'") == "intermediate"
    assert h.kind("0") == "outcome"


def test_trivial_hierarchy_has_no_concerns():
    h = Hierarchy.build(base=["f1"])
    assert h.concerns == ()
    assert h.top_degree == 0
    assert h.top_concern is None
    assert h.concerns_raised({"f1"}) == frozenset()


def test_conflicting_link_rejected():
    with pytest.raises(ConflictingLinks):
        Hierarchy.build(
            base=[f"f{i}" for i in range(1, 7)],
            intermediate=["p", "q", "r"],
            links=STANDARD_LINKS + [("f1", "p'")],
        )


def test_opposite_pair_favoring_same_target_rejected():
    with pytest.raises(ConflictingLinks):
        Hierarchy.build(
            base=["f1"],
            intermediate=["p", "q"],
            links=[("f1", "p"), ("p", "q"), ("p'", "q"), ("q", "1")],
        )


def test_concern_level_cycle_rejected():
    # acyclic as a raw link graph, but the concerns depend on each other
    with pytest.raises(CycleError):
        Hierarchy.build(
            base=["f1", "f2"],
            intermediate=["a", "b"],
            links=[("f1", "a"), ("f2", "b"), ("a", "b"), ("b'", "a'")],
        )


def test_dangling_factor_rejected():
    with pytest.raises(DanglingFactor):
        Hierarchy.build(base=["f1"], links=[("f1", "p")])


def test_orphan_intermediate_rejected():
    with pytest.raises(OrphanConcern):
        Hierarchy.build(base=["f1"], intermediate=["p"], links=[])


def test_opposite_is_an_involution(standard_hierarchy):
    h = standard_hierarchy
    for token in sorted(h.intermediate) + ["0", "1"]:
        assert h.opposite(h.opposite(token)) == token
    with pytest.raises(DanglingFactor):
        h.opposite("f1")


def test_favoring_sets(standard_hierarchy):
    h = standard_hierarchy
    assert h.favoring("p") == {"f1", "f2"}
    assert h.favoring("p'") == {"f3"}
    # r lands in the plaintiff's favoring set through the mirrored link r'->0
    assert h.favoring("1") == {"q", "r"}
    assert h.favoring("0") == {"q'", "r'"}
    assert h.favoring("q'") == {"f3", "p'"}


def test_favoring_rejects_base_factor(standard_hierarchy):
    with pytest.raises(NotAFavoredTarget):
        standard_hierarchy.favoring("f1")


def test_favoring_of_unlinked_side_is_empty():
    h = Hierarchy.build(base=["f1"], intermediate=["p"], links=[("f1", "p")])
    assert h.favoring("p'") == frozenset()


def test_favoring_sides_are_disjoint(standard_hierarchy):
    h = standard_hierarchy
    for concern in h.concerns:
        assert not h.favoring(concern.positive) & h.favoring(concern.negative)


def test_degrees(standard_hierarchy):
    h = standard_hierarchy
    assert h.degree("f3") == 0
    assert h.degree(Concern("1")) == 3
    assert h.degree(Concern("q")) == 2
    assert h.degree("q'") == 2
    assert h.degree(Concern("p")) == 1


def test_degree_monotone_along_links(standard_hierarchy):
    h = standard_hierarchy
    for source, target in h.links:
        assert h.degree(source) < h.degree(target)


def test_concerns_sorted_by_degree(standard_hierarchy):
    h = standard_hierarchy
    assert [c.label for c in h.concerns] == ["p/p'", "r/r'", "q/q'", "0/1"]
    assert [c.label for c in h.concerns_of_degree(1)] == ["p/p'", "r/r'"]


def test_concerns_raised(standard_hierarchy):
    h = standard_hierarchy
    raised = h.concerns_raised({"f2", "f3", "f4", "f5"})
    assert {c.label for c in raised} == {"p/p'", "q/q'", "r/r'"}
    by_degree = h.concerns_raised({"f2", "f3", "f4", "f5"}, degree=1)
    assert {c.label for c in by_degree} == {"p/p'", "r/r'"}
    assert h.concerns_raised(set()) == frozenset()


def test_concerns_raised_distributes_over_union(standard_hierarchy):
    h = standard_hierarchy
    import random

    rng = random.Random(7)
    pool = sorted(h.base | h.intermediate)
    for _ in range(50):
        left = set(rng.sample(pool, rng.randint(0, 4)))
        right = set(rng.sample(pool, rng.randint(0, 4)))
        assert h.concerns_raised(left | right) == (
            h.concerns_raised(left) | h.concerns_raised(right)
        )


def test_concern_labels_and_lookup(standard_hierarchy):
    h = standard_hierarchy
    assert str(h.concern("p'")) == "p/p'"
    assert h.concern("0").label == "0/1"
    assert h.concern("0/1") == Concern("1")
    assert concern_of("r'") == Concern("r")
    assert opposite("0") == "1"


def test_base_factor_may_feed_an_outcome_directly():
    h = Hierarchy.build(base=["f1"], links=[("f1", "1")])
    assert h.top_degree == 1
    assert h.favoring("1") == {"f1"}


def test_concern_closure(standard_hierarchy):
    h = standard_hierarchy
    closure = h.concern_closure({"f2", "f3", "f4", "f5"})
    assert [c.label for c in closure] == ["p/p'", "r/r'", "q/q'", "0/1"]
    assert h.concern_closure({"f4"}) == (Concern("r"), Concern("1"))
